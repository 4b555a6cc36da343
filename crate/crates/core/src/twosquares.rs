//! The set S of sums of two squares.
//!
//! S = {l >= 1 : l = a^2 + b^2, a, b >= 0}, so 1, 2, 4, 5, 8, 9, 10 are
//! members and 3, 6, 7 are not. Zero is an allowed square (perfect squares
//! are members); 0 itself is not a member. Provides:
//!
//! - [`sieve_membership`]: bitset of S up to a limit by direct a^2 + b^2
//!   marking, O(limit) memory and work.
//! - [`is_member_by_factorization`]: the classical criterion (every prime
//!   p = 3 mod 4 divides to an even power), kept as an independent
//!   cross-check and for isolated large queries.
//! - [`count_members_up_to`]: the counting function S(x).
//! - [`landau_ramanujan_constant`]: K = 2^{-1/2} prod_{p=3(4)} (1-p^{-2})^{-1/2}
//!   in S(x) ~ K x / sqrt(log x), via a quadratically convergent product.

use std::io::{self, Read, Write};

use crate::error::{Error, Result};

/// Default cap on sieve limits: one bit per integer, 2^31 bits = 256 MiB.
pub const DEFAULT_SIEVE_CAP: u64 = 1 << 31;

/// Bitset of the members of S among 1..=limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipTable {
    limit: u64,
    words: Vec<u64>,
}

impl MembershipTable {
    /// Largest integer the table covers.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Whether `n` is a sum of two squares. Panics if `n` is outside
    /// 1..=limit; use [`count_members_up_to`] for checked range handling.
    pub fn contains(&self, n: u64) -> bool {
        assert!(
            n >= 1 && n <= self.limit,
            "membership query {n} outside table range 1..={}",
            self.limit
        );
        self.words[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    /// Members in ascending order.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.limit).filter(move |&n| self.words[(n / 64) as usize] >> (n % 64) & 1 == 1)
    }

    /// Members up to `cap` collected into a vector. `cap` is clamped to
    /// the table limit.
    pub fn member_list_up_to(&self, cap: u64) -> Vec<u64> {
        let cap = cap.min(self.limit);
        (1..=cap)
            .filter(|&n| self.words[(n / 64) as usize] >> (n % 64) & 1 == 1)
            .collect()
    }

    /// Writes the members as a newline-delimited decimal list.
    pub fn write_members<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for n in self.members() {
            writeln!(w, "{n}")?;
        }
        Ok(())
    }

    /// Writes the raw bitset form: an 8-byte little-endian limit header,
    /// then ceil(limit/8) bytes where bit (l-1) of the stream (LSB-first
    /// within each byte) flags membership of l.
    pub fn write_bitset<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(&self.limit.to_le_bytes())?;
        let nbytes = self.limit.div_ceil(8) as usize;
        let mut bytes = vec![0u8; nbytes];
        for n in self.members() {
            let pos = n - 1;
            bytes[(pos / 8) as usize] |= 1 << (pos % 8);
        }
        w.write_all(&bytes)
    }

    /// Reads a table previously written by [`MembershipTable::write_bitset`].
    pub fn read_bitset<R: Read>(r: &mut R) -> Result<MembershipTable> {
        let mut header = [0u8; 8];
        r.read_exact(&mut header)?;
        let limit = u64::from_le_bytes(header);
        if limit == 0 {
            return Err(Error::InvalidInput("bitset header has limit 0".into()));
        }
        if limit > DEFAULT_SIEVE_CAP {
            return Err(Error::ResourceLimit(format!(
                "bitset header limit {limit} exceeds cap {DEFAULT_SIEVE_CAP}"
            )));
        }
        let nbytes = limit.div_ceil(8) as usize;
        let mut bytes = vec![0u8; nbytes];
        r.read_exact(&mut bytes)?;
        let mut words = vec![0u64; (limit / 64 + 1) as usize];
        for n in 1..=limit {
            let pos = n - 1;
            if bytes[(pos / 8) as usize] >> (pos % 8) & 1 == 1 {
                words[(n / 64) as usize] |= 1 << (n % 64);
            }
        }
        Ok(MembershipTable { limit, words })
    }
}

/// Builds the membership table for 1..=limit by marking a^2 + b^2 for all
/// 0 <= a <= b with a^2 + b^2 <= limit.
pub fn sieve_membership(limit: u64) -> Result<MembershipTable> {
    sieve_membership_capped(limit, DEFAULT_SIEVE_CAP)
}

/// [`sieve_membership`] with an explicit memory cap on the limit.
pub fn sieve_membership_capped(limit: u64, cap: u64) -> Result<MembershipTable> {
    if limit == 0 {
        return Err(Error::InvalidInput("sieve limit must be >= 1".into()));
    }
    if limit > cap {
        return Err(Error::ResourceLimit(format!(
            "sieve limit {limit} exceeds cap {cap}"
        )));
    }
    let mut words = vec![0u64; (limit / 64 + 1) as usize];
    let mut a: u64 = 0;
    while a * a <= limit {
        let aa = a * a;
        let mut b = a;
        let mut s = aa + b * b;
        while s <= limit {
            if s >= 1 {
                words[(s / 64) as usize] |= 1 << (s % 64);
            }
            b += 1;
            s = aa + b * b;
        }
        a += 1;
    }
    Ok(MembershipTable { limit, words })
}

/// Membership test by the even-multiplicity criterion: n is a sum of two
/// squares iff every prime p = 3 mod 4 divides n to an even power. Trial
/// division; intended for desk-scale n and as a sieve cross-check.
pub fn is_member_by_factorization(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "membership is defined for n >= 1".into(),
        ));
    }
    let mut m = n;
    while m.is_multiple_of(2) {
        m /= 2;
    }
    let mut p: u64 = 3;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut exp = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                exp += 1;
            }
            if p % 4 == 3 && exp % 2 == 1 {
                return Ok(false);
            }
        }
        p += 2;
    }
    // Whatever remains is 1 or a prime occurring once.
    Ok(!(m > 1 && m % 4 == 3))
}

/// S(x): the number of members of S that are <= x.
pub fn count_members_up_to(table: &MembershipTable, x: u64) -> Result<u64> {
    if x == 0 {
        return Err(Error::InvalidInput("count requires x >= 1".into()));
    }
    if x > table.limit {
        return Err(Error::InvalidInput(format!(
            "x = {x} exceeds table limit {}",
            table.limit
        )));
    }
    let full_words = (x / 64) as usize;
    let mut count: u64 = table.words[..full_words]
        .iter()
        .map(|w| w.count_ones() as u64)
        .sum();
    // Partial word: bits 0..=x%64 (bit 0 is integer 0, never set).
    let rem = x % 64;
    let mask = if rem == 63 {
        u64::MAX
    } else {
        (1u64 << (rem + 1)) - 1
    };
    count += (table.words[full_words] & mask).count_ones() as u64;
    Ok(count)
}

/// The leading-order Landau prediction K x / sqrt(log x) for S(x).
pub fn landau_reference(x: f64, k: f64) -> Result<f64> {
    if !x.is_finite() || x <= std::f64::consts::E {
        return Err(Error::InvalidInput(format!(
            "landau reference requires x > e, got {x}"
        )));
    }
    Ok(k * x / x.ln().sqrt())
}

/// An approximation of the Landau-Ramanujan constant with a certified
/// absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantApproximation {
    pub value: f64,
    pub abs_error_bound: f64,
    /// Total number of Dirichlet-series terms summed.
    pub terms_used: u64,
}

/// Computes K = 2^{-1/2} prod_{p = 3 mod 4} (1 - p^{-2})^{-1/2} to within
/// `target_abs_error` (must lie in (0, 0.1]).
///
/// The raw Euler product converges like 1/p and is hopeless at high
/// accuracy, so this uses the doubling identity for
/// Q(s) = prod_{p=3(4)} (1 - p^{-2s})^{-1}, namely
/// Q(s)^2 = Q(2s) zeta(2s)(1 - 2^{-2s}) / beta(2s) with beta the mod-4
/// Dirichlet L-series. Unrolling from s = 1 to depth d where Q(2^d) ~ 1:
///
///   K = 2^{-1/2} prod_{k=1..d} [zeta(2^k)(1 - 2^{-2^k}) / beta(2^k)]^{2^{-(k+1)}}
///       * Q(2^d)^{2^{-(d+1)}}
///
/// zeta(2) is taken as pi^2/6; the remaining zeta and beta values come
/// from their Dirichlet series with explicit tail bounds.
pub fn landau_ramanujan_constant(target_abs_error: f64) -> Result<ConstantApproximation> {
    if target_abs_error.is_nan() || target_abs_error <= 0.0 || target_abs_error > 0.1 {
        return Err(Error::InvalidInput(format!(
            "target_abs_error must lie in (0, 0.1], got {target_abs_error}"
        )));
    }
    // Truncation of the doubling recursion at depth d leaves a factor
    // Q(2^d)^{2^{-(d+1)}}; log Q(2^d) <= 4 * 3^{-2^{d+1}}.
    let mut depth = 2u32;
    let mut recursion_tail = recursion_tail_log(depth);
    while recursion_tail > 0.25 * target_abs_error && depth < 8 {
        depth += 1;
        recursion_tail = recursion_tail_log(depth);
    }
    // Per-level series budget: the exponent 2^{-(k+1)} weights sum to
    // less than 1/2, and zeta, beta >= 0.9, so an absolute series error
    // delta per evaluation contributes < 1.2 * delta to log K.
    let delta = 0.25 * target_abs_error;

    let mut log_k = -0.5 * std::f64::consts::LN_2;
    let mut log_err = recursion_tail;
    let mut terms_used: u64 = 0;
    for k in 1..=depth {
        let s = 1u64 << k; // 2^k
        let weight = 0.5f64.powi(k as i32 + 1);
        let (zeta, zeta_err, zeta_terms) = zeta_dirichlet(s, delta);
        let (beta, beta_err, beta_terms) = beta_dirichlet(s, delta);
        terms_used += zeta_terms + beta_terms;
        let factor = zeta * (1.0 - 0.5f64.powi(s as i32)) / beta;
        log_k += weight * factor.ln();
        log_err += weight * (zeta_err / zeta + beta_err / beta);
    }
    let value = log_k.exp();
    // exp(err) - 1 bounds the relative error of value; add an f64
    // roundoff allowance for the series sums and exp/ln calls.
    let abs_error_bound = value * (log_err.exp_m1() + 1e-14);
    Ok(ConstantApproximation {
        value,
        abs_error_bound,
        terms_used,
    })
}

/// 2^{-(d+1)} * log Q(2^d) bound: log Q(2^d) <= 4 * 3^{-2^{d+1}}.
fn recursion_tail_log(depth: u32) -> f64 {
    let exponent = 2f64.powi(depth as i32 + 1);
    0.5f64.powi(depth as i32 + 1) * 4.0 * (-exponent * 3f64.ln()).exp()
}

/// zeta(s) for even integer s >= 2 by direct series with tail <= 2 N^{1-s}.
/// zeta(2) is special-cased to pi^2/6 (the direct series would need ~1/err
/// terms). Returns (value, abs error bound, terms summed).
fn zeta_dirichlet(s: u64, target: f64) -> (f64, f64, u64) {
    if s == 2 {
        return (std::f64::consts::PI.powi(2) / 6.0, 1e-16, 0);
    }
    // 2 N^{1-s} <= target  =>  N >= (2/target)^{1/(s-1)}
    let n_terms = ((2.0 / target).powf(1.0 / (s as f64 - 1.0)).ceil() as u64).max(2);
    let mut sum = NeumaierSum::default();
    for n in 1..=n_terms {
        sum.add((n as f64).powi(-(s as i32)));
    }
    let tail = 2.0 * (n_terms as f64).powi(1 - s as i32);
    (sum.total(), tail, n_terms)
}

/// beta(s) = L(s, chi_4) = sum_{j>=0} (-1)^j (2j+1)^{-s} by the
/// alternating series; the tail is bounded by the first omitted term.
fn beta_dirichlet(s: u64, target: f64) -> (f64, f64, u64) {
    // (2N+1)^{-s} <= target  =>  N >= ((1/target)^{1/s} - 1) / 2
    let n_terms = (((1.0 / target).powf(1.0 / s as f64) - 1.0) / 2.0).ceil() as u64 + 1;
    let mut sum = NeumaierSum::default();
    for j in 0..n_terms {
        let term = ((2 * j + 1) as f64).powi(-(s as i32));
        sum.add(if j % 2 == 0 { term } else { -term });
    }
    let tail = ((2 * n_terms + 1) as f64).powi(-(s as i32));
    (sum.total(), tail, n_terms)
}

/// Truncated raw Euler product 2^{-1/2} prod_{p = 3 mod 4, p <= prime_limit}
/// (1 - p^{-2})^{-1/2}. Converges to K only like 1/(prime_limit log
/// prime_limit); kept as an independent oracle for the accelerated form.
pub fn landau_constant_raw_product(prime_limit: u64) -> f64 {
    let mut log_k = -0.5 * std::f64::consts::LN_2;
    for p in odd_primes_up_to(prime_limit) {
        if p % 4 == 3 {
            log_k -= 0.5 * (1.0 - (p as f64).powi(-2)).ln();
        }
    }
    log_k.exp()
}

fn odd_primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; (limit + 1) as usize];
    let mut primes = Vec::new();
    let mut p: u64 = 3;
    while p <= limit {
        if !composite[p as usize] {
            primes.push(p);
            let mut q = p * p;
            while q <= limit {
                composite[q as usize] = true;
                q += 2 * p;
            }
        }
        p += 2;
    }
    primes
}

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 25-digit reference for K (independent computation).
    const K_REFERENCE: f64 = 0.7642236535892206;

    fn sieved_set(limit: u64) -> Vec<u64> {
        sieve_membership(limit).unwrap().member_list_up_to(limit)
    }

    #[test]
    fn sieve_small_examples() {
        assert_eq!(sieved_set(10), vec![1, 2, 4, 5, 8, 9, 10]);
        assert_eq!(sieved_set(1), vec![1]);
        let t = sieve_membership(25).unwrap();
        assert!(t.contains(25)); // 3^2 + 4^2
        assert!(t.contains(1) && t.contains(2) && t.contains(4) && t.contains(5));
        assert!(!t.contains(3) && !t.contains(6) && !t.contains(7));
    }

    #[test]
    fn sieve_rejects_bad_limits() {
        assert!(matches!(sieve_membership(0), Err(Error::InvalidInput(_))));
        assert!(matches!(
            sieve_membership_capped(1000, 999),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn perfect_squares_floor_holds() {
        for limit in [10u64, 100, 1000, 12345] {
            let t = sieve_membership(limit).unwrap();
            let count = count_members_up_to(&t, limit).unwrap();
            let isqrt = (limit as f64).sqrt().floor() as u64;
            assert!(count >= isqrt, "count {count} < floor(sqrt({limit}))");
        }
    }

    #[test]
    fn factorization_examples() {
        assert!(is_member_by_factorization(9).unwrap()); // 3 twice
        assert!(!is_member_by_factorization(21).unwrap()); // 3 and 7 once each
        assert!(is_member_by_factorization(2).unwrap()); // 1 + 1
        assert!(matches!(
            is_member_by_factorization(0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn sieve_matches_factorization_to_ten_thousand() {
        let t = sieve_membership(10_000).unwrap();
        for n in 1..=10_000 {
            assert_eq!(
                t.contains(n),
                is_member_by_factorization(n).unwrap(),
                "disagreement at {n}"
            );
        }
    }

    #[test]
    fn multiplicative_closure() {
        let limit = 2_000;
        let t = sieve_membership(limit).unwrap();
        let members = t.member_list_up_to(limit);
        for &a in &members {
            for &b in &members {
                if a * b > limit {
                    break;
                }
                assert!(t.contains(a * b), "{a} * {b} = {} not flagged", a * b);
            }
        }
    }

    #[test]
    fn counting_examples() {
        let t = sieve_membership(100).unwrap();
        assert_eq!(count_members_up_to(&t, 10).unwrap(), 7);
        assert_eq!(count_members_up_to(&t, 1).unwrap(), 1);
        // Frozen from exhaustive a^2+b^2 enumeration.
        assert_eq!(count_members_up_to(&t, 100).unwrap(), 43);
        assert!(matches!(
            count_members_up_to(&t, 101),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            count_members_up_to(&t, 0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn counting_is_monotone_in_unit_steps() {
        let t = sieve_membership(3_000).unwrap();
        let mut prev = 0u64;
        for x in 1..=3_000 {
            let c = count_members_up_to(&t, x).unwrap();
            assert!(c == prev || c == prev + 1, "jump at {x}: {prev} -> {c}");
            prev = c;
        }
    }

    #[test]
    fn landau_reference_examples() {
        let x = std::f64::consts::E.powi(2);
        let expected = 0.764223653 * x / 2f64.sqrt();
        assert!((landau_reference(x, 0.764223653).unwrap() - expected).abs() < 1e-12);
        assert!(matches!(
            landau_reference(2.0, 0.76),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            landau_reference(std::f64::consts::E, 0.76),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn constant_reaches_stated_digits() {
        let approx = landau_ramanujan_constant(1e-9).unwrap();
        assert!((approx.value - K_REFERENCE).abs() <= approx.abs_error_bound);
        assert!((approx.value - 0.764223653).abs() <= 1e-9);
        assert!(approx.abs_error_bound <= 1e-9);

        let loose = landau_ramanujan_constant(1e-2).unwrap();
        assert!(loose.value >= 0.754 && loose.value <= 0.775);
    }

    #[test]
    fn constant_matches_raw_euler_product() {
        let accel = landau_ramanujan_constant(1e-9).unwrap();
        let raw = landau_constant_raw_product(100_000);
        // The truncated product carries a ~2e-7 tail; 1e-5 is generous.
        assert!(
            (accel.value - raw).abs() < 1e-5,
            "accelerated {} vs raw {}",
            accel.value,
            raw
        );
    }

    #[test]
    fn constant_rejects_bad_targets() {
        assert!(landau_ramanujan_constant(0.0).is_err());
        assert!(landau_ramanujan_constant(-1e-3).is_err());
        assert!(landau_ramanujan_constant(0.2).is_err());
    }

    #[test]
    fn tighter_target_means_more_terms_and_smaller_bound() {
        let mut prev: Option<ConstantApproximation> = None;
        for target in [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10] {
            let a = landau_ramanujan_constant(target).unwrap();
            if let Some(p) = prev {
                assert!(a.terms_used > p.terms_used);
                assert!(a.abs_error_bound < p.abs_error_bound);
                assert!((a.value - p.value).abs() <= p.abs_error_bound + a.abs_error_bound);
            }
            prev = Some(a);
        }
    }

    #[test]
    fn bitset_round_trip() {
        let t = sieve_membership(1000).unwrap();
        let mut buf = Vec::new();
        t.write_bitset(&mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 125);
        let back = MembershipTable::read_bitset(&mut buf.as_slice()).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn members_text_export() {
        let t = sieve_membership(10).unwrap();
        let mut buf = Vec::new();
        t.write_members(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1\n2\n4\n5\n8\n9\n10\n");
    }
}
