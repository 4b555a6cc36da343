//! Saddle-point machinery for the generating series of p_S(n).
//!
//! Write Psi(z) = prod_{l in S} (1 - z^l)^{-1} = exp(Phi(z)) with
//! Phi(z) = sum_j sum_{l in S} z^{jl} / j. Everything here works in the
//! variable u = log(1/rho) = 1/X rather than rho itself, which avoids
//! cancellation in 1 - rho as rho -> 1!. Estimates are carried as natural
//! logs: p_S(n) ~ e^{O(sqrt n)} outgrows f64 near n = 10^5.
//!
//! The operator (rho d/drho)^m applied to Phi gives
//! sum_{j,l} j^{m-1} l^m rho^{jl}; truncating at jl <= X*L with
//! L = 60 + (m+2) ln(X+e) leaves a tail around e^{-60} of the value,
//! far below the 1e-12 truncation contract. Sums use compensated
//! summation so that the million-term evaluations at X ~ 10^4 stay
//! reproducible to ~1e-15 relative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::twosquares::{
    landau_ramanujan_constant, sieve_membership, MembershipTable, NeumaierSum,
};

/// Highest supported operator order; the estimates use m <= 2, orders
/// 3 and 4 exist for trend checks against the reference curve.
pub const MAX_OPERATOR_ORDER: u32 = 4;

/// Gamma(m+1) = m! for m = 0..=4.
const FACTORIALS: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// A solved saddle point: rho in (0,1) with rho Phi'(rho) = x, and the
/// scale X = 1/log(1/rho).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddlePoint {
    pub x: f64,
    pub rho: f64,
    #[serde(rename = "X")]
    pub scale: f64,
    /// Signed defect rho Phi'(rho) - x at the returned point.
    pub residual: f64,
}

/// A truncated evaluation of (rho d/drho)^m Phi(rho) with its tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiValue {
    pub m: u32,
    pub rho: f64,
    pub value: f64,
    pub tail_bound: f64,
}

/// Which asymptotic form produced a [`LogEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateMethod {
    /// Full saddle-point formula rho^{-n} Psi(rho) / sqrt(2 pi Phi_2).
    Main,
    /// Closed form in n alone (leading exponent, no saddle refinement).
    Simple,
    /// Estimate of the difference p_S(n+1) - p_S(n).
    Difference,
}

/// An asymptotic prediction stored in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogEstimate {
    pub n: u64,
    pub log_value: f64,
    pub method: EstimateMethod,
    pub saddle: SaddlePoint,
}

/// The closed-form asymptotes of the saddle-scale quantities, as
/// functions of the target x alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaddleAsymptote {
    /// x log(1/rho(x)) with the -1/8 log log correction.
    XLogInvRho,
    /// Phi(rho(x)) with the -1/8 log log correction.
    Phi,
    /// (rho d/drho)^m Phi(rho(x)), leading term, m >= 1.
    Derivative,
}

/// Immutable evaluation context: the sorted members of S up to a limit
/// plus the Landau-Ramanujan constant. All methods are pure; the context
/// is safe to share across threads.
#[derive(Debug, Clone)]
pub struct SaddleContext {
    members: Vec<u64>,
    limit: u64,
    landau_k: f64,
}

/// Truncation length the phi series needs at a given scale X.
pub fn required_limit(scale: f64, max_m: u32, extra_truncation: f64) -> u64 {
    let series_len =
        60.0 + (max_m as f64 + 2.0) * (scale + std::f64::consts::E).ln() + extra_truncation;
    (scale * series_len).max(1.0).ceil() as u64 + 64
}

impl SaddleContext {
    /// Context over an existing membership table.
    pub fn new(table: &MembershipTable, landau_k: f64) -> SaddleContext {
        SaddleContext {
            members: table.member_list_up_to(table.limit()),
            limit: table.limit(),
            landau_k,
        }
    }

    /// Context sized for saddle solves with targets up to `x_max`. The
    /// bracket search may overshoot the asymptotic scale, so the table
    /// covers four times the initial guess, all orders m <= 4, and a
    /// truncation override of up to +10.
    pub fn for_max_target(x_max: f64) -> Result<SaddleContext> {
        if !x_max.is_finite() || x_max < 10.0 {
            return Err(Error::InvalidInput(format!(
                "saddle targets must satisfy x >= 10, got {x_max}"
            )));
        }
        let k = landau_ramanujan_constant(1e-12)?.value;
        let scale_bound = 4.0 * initial_scale_guess(x_max, k);
        let limit = required_limit(scale_bound, MAX_OPERATOR_ORDER, 10.0);
        let table = sieve_membership(limit)?;
        Ok(SaddleContext::new(&table, k))
    }

    /// Context sized for direct phi evaluations at scales up to `scale`.
    pub fn for_max_scale(scale: f64) -> Result<SaddleContext> {
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "scale must be positive, got {scale}"
            )));
        }
        let k = landau_ramanujan_constant(1e-12)?.value;
        let limit = required_limit(scale, MAX_OPERATOR_ORDER, 10.0);
        let table = sieve_membership(limit)?;
        Ok(SaddleContext::new(&table, k))
    }

    pub fn landau_k(&self) -> f64 {
        self.landau_k
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Leading-order bracket center X_0 for the saddle scale at target x.
    pub fn initial_scale_guess(&self, x: f64) -> f64 {
        initial_scale_guess(x, self.landau_k)
    }

    /// (rho d/drho)^m Phi(rho) = sum_{j>=1} sum_{l in S} j^{m-1} l^m rho^{jl},
    /// truncated per the module rule, with a certified tail bound.
    pub fn phi_log_derivative(&self, rho: f64, m: u32) -> Result<PhiValue> {
        self.phi_impl(rho, m, 0.0)
    }

    /// [`Self::phi_log_derivative`] with the truncation length extended
    /// by `extra`; used by the robustness checks.
    pub fn phi_with_extra_truncation(&self, rho: f64, m: u32, extra: f64) -> Result<PhiValue> {
        self.phi_impl(rho, m, extra)
    }

    fn phi_impl(&self, rho: f64, m: u32, extra: f64) -> Result<PhiValue> {
        if !rho.is_finite() || rho <= 0.0 || rho >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "rho must lie in (0, 1), got {rho}"
            )));
        }
        if m > MAX_OPERATOR_ORDER {
            return Err(Error::InvalidInput(format!(
                "operator order m must be <= {MAX_OPERATOR_ORDER}, got {m}"
            )));
        }
        let u = -rho.ln();
        let scale = 1.0 / u;
        let series_len = 60.0 + (m as f64 + 2.0) * (scale + std::f64::consts::E).ln() + extra;
        let cutoff_f = (scale * series_len).max(1.0).floor();
        if cutoff_f > self.limit as f64 {
            return Err(Error::TableTooSmall {
                needed: cutoff_f as u64,
                available: self.limit,
            });
        }
        let cutoff = cutoff_f as u64;
        let mpow = m as i32;
        let mut sum = NeumaierSum::default();
        for j in 1..=cutoff {
            let j_weight = (j as f64).powi(mpow - 1);
            let ju = j as f64 * u;
            let cap = cutoff / j;
            let hi = self.members.partition_point(|&l| l <= cap);
            for &l in &self.members[..hi] {
                let lf = l as f64;
                sum.add(j_weight * lf.powi(mpow) * (-lf * ju).exp());
            }
        }
        let value = sum.total();
        // Dropped terms have t = jl > cutoff; grouping by t and bounding
        // the divisor sum sum_{j|t} 1/j by 1 + ln t gives
        //   tail <= (1 + ln cutoff) * sum_{t > cutoff} t^m e^{-t/X}
        //        <= (1 + ln cutoff) * 2 X^{m+1} L_eff^m e^{-L_eff}.
        let l_eff = cutoff as f64 / scale;
        let tail_bound = 2.0
            * scale.powi(mpow + 1)
            * l_eff.powi(mpow)
            * (-l_eff).exp()
            * (1.0 + (cutoff as f64 + 1.0).ln());
        if !value.is_finite() || value <= 0.0 || tail_bound > 1e-12 * value {
            return Err(Error::NumericFailure(format!(
                "phi truncation contract violated at rho = {rho}, m = {m}: value = {value}, tail = {tail_bound}"
            )));
        }
        Ok(PhiValue {
            m,
            rho,
            value,
            tail_bound,
        })
    }

    /// Solves x = rho Phi'(rho) for rho. Brackets around the leading-order
    /// scale guess, bisects to 1e-3 relative in u = 1/X, then runs
    /// safeguarded Newton with Phi_2 until |rho Phi'(rho) - x| <= 1e-12 x.
    pub fn solve_saddle(&self, x: f64) -> Result<SaddlePoint> {
        self.solve_impl(x, 0.0)
    }

    /// [`Self::solve_saddle`] with a truncation override on every phi
    /// evaluation.
    pub fn solve_saddle_with_truncation(&self, x: f64, extra: f64) -> Result<SaddlePoint> {
        self.solve_impl(x, extra)
    }

    fn solve_impl(&self, x: f64, extra: f64) -> Result<SaddlePoint> {
        if !x.is_finite() || x < 10.0 {
            return Err(Error::InvalidInput(format!(
                "saddle solve requires x >= 10, got {x}"
            )));
        }
        // residual(u) = Phi_1(e^{-u}) - x, strictly decreasing in u.
        let residual_at =
            |u: f64| -> Result<f64> { Ok(self.phi_impl((-u).exp(), 1, extra)?.value - x) };
        let u0 = 1.0 / self.initial_scale_guess(x);
        let mut lo = u0;
        let mut hi = u0;
        let r0 = residual_at(u0)?;
        if r0 > 0.0 {
            let mut closed = false;
            for _ in 0..60 {
                lo = hi;
                hi *= 2.0;
                if residual_at(hi)? <= 0.0 {
                    closed = true;
                    break;
                }
            }
            if !closed {
                return Err(Error::NumericFailure(format!(
                    "saddle bracket did not close after 60 doublings above u0 = {u0} at x = {x}; Phi evaluation looks broken"
                )));
            }
        } else if r0 < 0.0 {
            let mut closed = false;
            for _ in 0..60 {
                hi = lo;
                lo /= 2.0;
                if residual_at(lo)? >= 0.0 {
                    closed = true;
                    break;
                }
            }
            if !closed {
                return Err(Error::NumericFailure(format!(
                    "saddle bracket did not close after 60 halvings below u0 = {u0} at x = {x}; Phi evaluation looks broken"
                )));
            }
        }
        while hi - lo > 1e-3 * lo {
            let mid = 0.5 * (lo + hi);
            if residual_at(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut u = 0.5 * (lo + hi);
        for _ in 0..80 {
            let rho = (-u).exp();
            let residual = self.phi_impl(rho, 1, extra)?.value - x;
            if residual.abs() <= 1e-12 * x {
                return Ok(SaddlePoint {
                    x,
                    rho,
                    scale: 1.0 / u,
                    residual,
                });
            }
            if residual > 0.0 {
                lo = u;
            } else {
                hi = u;
            }
            let phi2 = self.phi_impl(rho, 2, extra)?.value;
            if phi2.is_nan() || phi2 <= 0.0 {
                return Err(Error::NumericFailure(format!(
                    "Phi_2 not positive at rho = {rho}"
                )));
            }
            let next = u + residual / phi2;
            u = if next > lo && next < hi {
                next
            } else {
                0.5 * (lo + hi)
            };
        }
        Err(Error::NumericFailure(format!(
            "saddle Newton failed to reach the residual tolerance at x = {x}"
        )))
    }

    /// log of the main saddle-point estimate:
    /// n/X + Phi(rho) - (1/2) log(2 pi Phi_2) at the saddle for x = n.
    pub fn main_estimate_log(&self, n: u64) -> Result<LogEstimate> {
        self.main_impl(n, 0.0)
    }

    /// [`Self::main_estimate_log`] with a truncation override threaded
    /// through every phi evaluation (including the solve).
    pub fn main_estimate_log_with_truncation(&self, n: u64, extra: f64) -> Result<LogEstimate> {
        self.main_impl(n, extra)
    }

    fn main_impl(&self, n: u64, extra: f64) -> Result<LogEstimate> {
        require_asymptotic_regime(n)?;
        let saddle = self.solve_impl(n as f64, extra)?;
        let phi0 = self.phi_impl(saddle.rho, 0, extra)?.value;
        let phi2 = self.phi_impl(saddle.rho, 2, extra)?.value;
        if phi2.is_nan() || phi2 <= 0.0 {
            return Err(Error::NumericFailure(format!(
                "Phi_2 not positive at the saddle for n = {n}"
            )));
        }
        let u = 1.0 / saddle.scale;
        let log_value = n as f64 * u + phi0 - 0.5 * (2.0 * std::f64::consts::PI * phi2).ln();
        Ok(LogEstimate {
            n,
            log_value,
            method: EstimateMethod::Main,
            saddle,
        })
    }

    /// log of the closed-form estimate in n alone:
    /// the exponent 2^{3/4} pi sqrt(K/3) n^{1/2} (log n)^{-1/4} plus
    /// log(2^{-9/8} (K/3)^{1/4}) - (3/4) log n - (1/8) log log n.
    /// The o(1) inside the exponent is dropped, so only the ratio of logs
    /// converges, not the ratio of values.
    pub fn simple_estimate_log(&self, n: u64) -> Result<LogEstimate> {
        require_asymptotic_regime(n)?;
        let saddle = self.solve_saddle(n as f64)?;
        let k3 = self.landau_k / 3.0;
        let nf = n as f64;
        let ln_n = nf.ln();
        let log_value = 2f64.powf(0.75) * std::f64::consts::PI * k3.sqrt() * nf.sqrt()
            / ln_n.powf(0.25)
            + (2f64.powf(-1.125) * k3.powf(0.25)).ln()
            - 0.75 * ln_n
            - 0.125 * ln_n.ln();
        Ok(LogEstimate {
            n,
            log_value,
            method: EstimateMethod::Simple,
            saddle,
        })
    }

    /// log of the difference estimate: the main estimate times log(1/rho),
    /// so main_estimate_log(n) - log X.
    pub fn difference_estimate_log(&self, n: u64) -> Result<LogEstimate> {
        self.difference_impl(n, 0.0)
    }

    /// [`Self::difference_estimate_log`] with a truncation override.
    pub fn difference_estimate_log_with_truncation(
        &self,
        n: u64,
        extra: f64,
    ) -> Result<LogEstimate> {
        self.difference_impl(n, extra)
    }

    fn difference_impl(&self, n: u64, extra: f64) -> Result<LogEstimate> {
        let main = self.main_impl(n, extra)?;
        Ok(LogEstimate {
            n,
            log_value: main.log_value - main.saddle.scale.ln(),
            method: EstimateMethod::Difference,
            saddle: main.saddle,
        })
    }

    /// Closed-form asymptote of a saddle-scale quantity at target x.
    /// XLogInvRho and Phi share pi sqrt(K/3) x^{1/2} (2 log x)^{-1/4}
    /// with the -(1/8) log log x / log x correction; Derivative (m >= 1)
    /// is the leading term
    /// x^{(m+1)/2} (3 sqrt(2 log x)/(K pi^2))^{(m-1)/2} Gamma(m+1).
    /// `m` is ignored for the first two.
    pub fn saddle_asymptote(&self, x: f64, which: SaddleAsymptote, m: u32) -> Result<f64> {
        let e_to_e = std::f64::consts::E.exp();
        if !x.is_finite() || x < e_to_e {
            return Err(Error::InvalidInput(format!(
                "reference curves require x >= e^e, got {x}"
            )));
        }
        let ln_x = x.ln();
        match which {
            SaddleAsymptote::XLogInvRho | SaddleAsymptote::Phi => Ok(std::f64::consts::PI
                * (self.landau_k / 3.0).sqrt()
                * x.sqrt()
                / (2.0 * ln_x).powf(0.25)
                * (1.0 - 0.125 * ln_x.ln() / ln_x)),
            SaddleAsymptote::Derivative => {
                if m < 1 {
                    return Err(Error::InvalidInput(
                        "the derivative asymptote requires m >= 1".into(),
                    ));
                }
                if m > MAX_OPERATOR_ORDER {
                    return Err(Error::InvalidInput(format!(
                        "operator order m must be <= {MAX_OPERATOR_ORDER}, got {m}"
                    )));
                }
                let base =
                    3.0 * (2.0 * ln_x).sqrt() / (self.landau_k * std::f64::consts::PI.powi(2));
                Ok(x.powf((m as f64 + 1.0) / 2.0)
                    * base.powf((m as f64 - 1.0) / 2.0)
                    * FACTORIALS[m as usize])
            }
        }
    }

    /// The reference curve K zeta(2) Gamma(m+1) X^{m+1} / sqrt(log X)
    /// for (rho d/drho)^m Phi at rho = e^{-1/X}, with zeta(2) = pi^2/6.
    pub fn log_derivative_reference(&self, scale: f64, m: u32) -> Result<f64> {
        if !scale.is_finite() || scale < 10.0 {
            return Err(Error::InvalidInput(format!(
                "reference curve requires X >= 10, got {scale}"
            )));
        }
        if m > MAX_OPERATOR_ORDER {
            return Err(Error::InvalidInput(format!(
                "operator order m must be <= {MAX_OPERATOR_ORDER}, got {m}"
            )));
        }
        Ok(self.landau_k * std::f64::consts::PI.powi(2) / 6.0
            * FACTORIALS[m as usize]
            * scale.powi(m as i32 + 1)
            / scale.ln().sqrt())
    }
}

fn initial_scale_guess(x: f64, landau_k: f64) -> f64 {
    (3.0 / landau_k).sqrt() / std::f64::consts::PI * x.sqrt() * (2.0 * x.ln()).powf(0.25)
}

fn require_asymptotic_regime(n: u64) -> Result<()> {
    if n < 100 {
        return Err(Error::InvalidInput(format!(
            "n below asymptotic regime: estimates require n >= 100, got {n}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    /// Shared context covering scales up to ~1.2e3 (fast to build).
    fn ctx() -> &'static SaddleContext {
        static CTX: OnceLock<SaddleContext> = OnceLock::new();
        CTX.get_or_init(|| SaddleContext::for_max_scale(1200.0).unwrap())
    }

    #[test]
    fn phi_matches_direct_product_at_half() {
        let phi0 = ctx().phi_log_derivative(0.5, 0).unwrap();
        // log Psi(0.5) = -sum_{l in S} log(1 - 0.5^l), directly.
        let table = sieve_membership(300).unwrap();
        let direct: f64 = table
            .member_list_up_to(300)
            .iter()
            .map(|&l| -(1.0 - 0.5f64.powi(l as i32)).ln())
            .sum();
        assert!(
            (phi0.value - direct).abs() < 1e-12 * direct,
            "phi {} vs product {}",
            phi0.value,
            direct
        );
        assert!((phi0.value - 1.084112227621149).abs() < 1e-9);
    }

    #[test]
    fn phi_tiny_rho_is_dominated_by_first_term() {
        for m in 0..=2 {
            let v = ctx().phi_log_derivative(1e-6, m).unwrap();
            assert!((v.value / 1e-6 - 1.0).abs() < 1e-5, "m = {m}: {}", v.value);
        }
    }

    #[test]
    fn phi_near_reference_curve_at_thousand() {
        let rho = (-1.0f64 / 1000.0).exp();
        for m in 0..=2u32 {
            let v = ctx().phi_log_derivative(rho, m).unwrap().value;
            let reference = ctx().log_derivative_reference(1000.0, m).unwrap();
            let ratio = v / reference;
            assert!((0.75..=1.25).contains(&ratio), "m = {m}: ratio {ratio}");
        }
    }

    #[test]
    fn phi_rejects_bad_arguments() {
        assert!(ctx().phi_log_derivative(0.0, 0).is_err());
        assert!(ctx().phi_log_derivative(1.0, 0).is_err());
        assert!(ctx().phi_log_derivative(1.5, 0).is_err());
        assert!(ctx().phi_log_derivative(-0.5, 0).is_err());
        assert!(ctx().phi_log_derivative(0.5, 5).is_err());
        // A table far too small for the requested scale.
        let small = SaddleContext::new(&sieve_membership(100).unwrap(), 0.7642236535892206);
        assert!(matches!(
            small.phi_log_derivative((-1.0f64 / 500.0).exp(), 0),
            Err(Error::TableTooSmall { .. })
        ));
    }

    #[test]
    fn phi_truncation_contract_holds() {
        for rho in [1e-6, 0.5, 0.9, 0.99, (-1.0f64 / 800.0).exp()] {
            for m in 0..=4 {
                let v = ctx().phi_log_derivative(rho, m).unwrap();
                assert!(v.value > 0.0);
                assert!(v.tail_bound <= 1e-12 * v.value);
            }
        }
    }

    #[test]
    fn phi_grows_with_operator_order() {
        // For X >= 2, (rho d/drho)^m Phi ~ Gamma(m+1) x X^{m-1} grows in m.
        for scale in [2.0f64, 10.0, 100.0, 800.0] {
            let rho = (-1.0 / scale).exp();
            let mut prev = ctx().phi_log_derivative(rho, 1).unwrap().value;
            for m in 2..=4 {
                let v = ctx().phi_log_derivative(rho, m).unwrap().value;
                assert!(v > prev, "X = {scale}, m = {m}: {v} <= {prev}");
                prev = v;
            }
        }
    }

    #[test]
    fn derivative_consistency_by_finite_differences() {
        // Central difference of Phi in t = log rho approximates Phi_1,
        // and of Phi_1 approximates Phi_2, to 1e-6 relative.
        for rho in [0.9f64, 0.99, 0.999] {
            let t = rho.ln();
            let h = 1e-5 * (1.0 - rho);
            for m in 0..=1u32 {
                let plus = ctx().phi_log_derivative((t + h).exp(), m).unwrap().value;
                let minus = ctx().phi_log_derivative((t - h).exp(), m).unwrap().value;
                let derivative = (plus - minus) / (2.0 * h);
                let exact = ctx().phi_log_derivative(rho, m + 1).unwrap().value;
                assert!(
                    ((derivative - exact) / exact).abs() < 1e-6,
                    "rho = {rho}, m = {m}: fd {derivative} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn solve_meets_residual_contract() {
        for x in [10.0, 50.0, 1e3, 1e4] {
            let sp = ctx().solve_saddle(x).unwrap();
            assert!(sp.residual.abs() <= 1e-12 * x, "x = {x}: {}", sp.residual);
            assert!(sp.rho > 0.0 && sp.rho < 1.0);
            assert!(sp.scale > 0.0);
            assert!((sp.scale - -1.0 / sp.rho.ln()).abs() <= 1e-12 * sp.scale);
        }
    }

    #[test]
    fn solve_is_monotone_in_x() {
        let a = ctx().solve_saddle(1e3).unwrap();
        let b = ctx().solve_saddle(1e4).unwrap();
        assert!(a.rho < b.rho);
        assert!(a.scale < b.scale);
    }

    #[test]
    fn solve_rejects_small_x() {
        assert!(ctx().solve_saddle(9.0).is_err());
        assert!(ctx().solve_saddle(f64::NAN).is_err());
    }

    #[test]
    fn stationarity_at_the_saddle() {
        // Perturbing u by 1e-6 relative changes n u + Phi(e^{-u}) by
        // less than 1e-9 relative: first order vanishes at the saddle.
        let n = 10_000u64;
        let sp = ctx().solve_saddle(n as f64).unwrap();
        let u = 1.0 / sp.scale;
        let value = n as f64 * u + ctx().phi_log_derivative(sp.rho, 0).unwrap().value;
        for sign in [1.0, -1.0] {
            let up = u * (1.0 + sign * 1e-6);
            let perturbed = n as f64 * up + ctx().phi_log_derivative((-up).exp(), 0).unwrap().value;
            assert!(
                ((perturbed - value) / value).abs() < 1e-9,
                "perturbation moved the exponent by {}",
                (perturbed - value) / value
            );
        }
    }

    #[test]
    fn estimates_below_regime_are_rejected() {
        let err = ctx().main_estimate_log(50).unwrap_err();
        assert!(err.to_string().contains("n below asymptotic regime"));
        assert!(ctx().simple_estimate_log(99).is_err());
        assert!(ctx().difference_estimate_log(99).is_err());
        assert!(ctx().main_estimate_log(100).is_ok());
    }

    #[test]
    fn difference_is_main_minus_log_scale() {
        let main = ctx().main_estimate_log(5000).unwrap();
        let diff = ctx().difference_estimate_log(5000).unwrap();
        assert_eq!(diff.saddle, main.saddle);
        assert!(
            (diff.log_value - (main.log_value - main.saddle.scale.ln())).abs() == 0.0,
            "difference estimate is defined as main - log X"
        );
    }

    #[test]
    fn truncation_robustness_of_log_outputs() {
        let n = 2000u64;
        let base = ctx().main_estimate_log_with_truncation(n, 0.0).unwrap();
        let extended = ctx().main_estimate_log_with_truncation(n, 10.0).unwrap();
        assert!(((base.log_value - extended.log_value) / base.log_value).abs() < 1e-9);
        let d0 = ctx()
            .difference_estimate_log_with_truncation(n, 0.0)
            .unwrap();
        let d1 = ctx()
            .difference_estimate_log_with_truncation(n, 10.0)
            .unwrap();
        assert!(((d0.log_value - d1.log_value) / d0.log_value).abs() < 1e-9);
    }

    #[test]
    fn simple_estimate_scaling_in_n() {
        // log_value(4n) / log_value(n) tracks 2 (log n / log 4n)^{1/4}
        // at leading order; the prefactor terms shift it a few percent.
        let a = ctx().simple_estimate_log(1000).unwrap().log_value;
        let b = ctx().simple_estimate_log(4000).unwrap().log_value;
        let leading = 2.0 * (1000f64.ln() / 4000f64.ln()).powf(0.25);
        assert!(
            (b / a / leading - 1.0).abs() < 0.1,
            "ratio {} vs leading-order {leading}",
            b / a
        );
    }

    #[test]
    fn simple_estimate_k_sensitivity() {
        // Doubling K scales the exponential's coefficient by sqrt 2 and
        // the prefactor log by (1/4) log 2.
        let n = 5000u64;
        let table = sieve_membership(required_limit(400.0, 4, 10.0)).unwrap();
        let k = ctx().landau_k();
        let base_ctx = SaddleContext::new(&table, k);
        let doubled_ctx = SaddleContext::new(&table, 2.0 * k);
        let base = base_ctx.simple_estimate_log(n).unwrap().log_value;
        let doubled = doubled_ctx.simple_estimate_log(n).unwrap().log_value;
        let nf = n as f64;
        let leading = 2f64.powf(0.75) * std::f64::consts::PI * (k / 3.0).sqrt() * nf.sqrt()
            / nf.ln().powf(0.25);
        let expected_shift = (2f64.sqrt() - 1.0) * leading + 0.25 * 2f64.ln();
        assert!(
            (doubled - base - expected_shift).abs() < 1e-9,
            "shift {} vs expected {expected_shift}",
            doubled - base
        );
    }

    #[test]
    fn saddle_asymptote_values() {
        // m = 1 collapses the derivative form to x Gamma(2) = x.
        let x = 12345.0;
        assert!(
            (ctx()
                .saddle_asymptote(x, SaddleAsymptote::Derivative, 1)
                .unwrap()
                - x)
                .abs()
                < 1e-9 * x
        );
        // The first two forms share their right-hand side.
        assert_eq!(
            ctx()
                .saddle_asymptote(x, SaddleAsymptote::XLogInvRho, 0)
                .unwrap(),
            ctx().saddle_asymptote(x, SaddleAsymptote::Phi, 0).unwrap()
        );
        assert!(ctx()
            .saddle_asymptote(10.0, SaddleAsymptote::XLogInvRho, 0)
            .is_err());
        assert!(ctx()
            .saddle_asymptote(x, SaddleAsymptote::Derivative, 0)
            .is_err());
        assert!(ctx()
            .saddle_asymptote(x, SaddleAsymptote::Derivative, 5)
            .is_err());
    }

    #[test]
    fn log_derivative_reference_values() {
        let k = ctx().landau_k();
        let expected = k * std::f64::consts::PI.powi(2) / 6.0 * 100.0 / 100f64.ln().sqrt();
        assert!((ctx().log_derivative_reference(100.0, 0).unwrap() - expected).abs() < 1e-12);
        // Gamma(m+1) scaling: reference(X, 2) / reference(X, 1) = 2X.
        let r1 = ctx().log_derivative_reference(500.0, 1).unwrap();
        let r2 = ctx().log_derivative_reference(500.0, 2).unwrap();
        assert!((r2 / r1 - 1000.0).abs() < 1e-9);
        assert!(ctx().log_derivative_reference(9.0, 0).is_err());
        assert!(ctx().log_derivative_reference(100.0, 5).is_err());
    }

    #[test]
    fn context_sizing_covers_solves() {
        let ctx = SaddleContext::for_max_target(1000.0).unwrap();
        let sp = ctx.solve_saddle(1000.0).unwrap();
        assert!(sp.residual.abs() <= 1e-12 * 1000.0);
        assert!(SaddleContext::for_max_target(5.0).is_err());
    }
}
