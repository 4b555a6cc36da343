//! C ABI for the sqpart library.
//!
//! Conventions:
//!
//! - Every fallible call returns a [`SqpartStatus`]; results come back
//!   through out-pointers, written only on `Ok`.
//! - Handles (`SqpartMembership`, `SqpartPartitionTable`,
//!   `SqpartSaddleContext`) are opaque; free them with the matching
//!   `*_free`. Freeing NULL is a no-op.
//! - Strings returned by the library are NUL-terminated and owned by the
//!   caller; release them with [`sqpart_string_free`].
//! - A `cap` argument of 0 selects the built-in default cap.
//!
//! The header is generated into `include/sqpart.h` at build time.

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sqpart::error::Error;
use sqpart::exactcount::{
    self, difference_exact, log_biguint, partition_counts_capped, PartSet, PartitionTable,
};
use sqpart::saddle::{SaddleAsymptote, SaddleContext};
use sqpart::twosquares::{
    count_members_up_to, is_member_by_factorization, landau_ramanujan_constant, landau_reference,
    sieve_membership_capped, MembershipTable,
};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqpartStatus {
    Ok = 0,
    /// A precondition on an argument was violated.
    InvalidArgument = 1,
    /// A configured memory or size cap was exceeded.
    ResourceLimit = 2,
    /// An iteration failed to converge or produced a non-finite value.
    NumericFailure = 3,
    /// A membership table does not cover the requested range.
    TableTooSmall = 4,
    /// An I/O error (unused by the in-memory API, reserved).
    Io = 5,
    /// A required pointer argument was NULL.
    NullPointer = 6,
    /// The library panicked; state may be inconsistent.
    Panic = 7,
}

fn status_of(err: &Error) -> SqpartStatus {
    match err {
        Error::InvalidInput(_) => SqpartStatus::InvalidArgument,
        Error::ResourceLimit(_) => SqpartStatus::ResourceLimit,
        Error::NumericFailure(_) => SqpartStatus::NumericFailure,
        Error::TableTooSmall { .. } => SqpartStatus::TableTooSmall,
        Error::Io(_) => SqpartStatus::Io,
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn sqpart_status_message(status: SqpartStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        SqpartStatus::Ok => b"ok\0",
        SqpartStatus::InvalidArgument => b"invalid argument\0",
        SqpartStatus::ResourceLimit => b"resource limit exceeded\0",
        SqpartStatus::NumericFailure => b"numeric failure\0",
        SqpartStatus::TableTooSmall => b"membership table too small\0",
        SqpartStatus::Io => b"i/o error\0",
        SqpartStatus::NullPointer => b"null pointer\0",
        SqpartStatus::Panic => b"internal panic\0",
    };
    msg.as_ptr() as *const c_char
}

fn guarded<F: FnOnce() -> SqpartStatus>(f: F) -> SqpartStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => SqpartStatus::Panic,
    }
}

const DEFAULT_CAP_SENTINEL: u64 = 0;

fn sieve_cap(cap: u64) -> u64 {
    if cap == DEFAULT_CAP_SENTINEL {
        sqpart::twosquares::DEFAULT_SIEVE_CAP
    } else {
        cap
    }
}

fn dp_cap(cap: u64) -> u64 {
    if cap == DEFAULT_CAP_SENTINEL {
        exactcount::DEFAULT_NMAX_CAP
    } else {
        cap
    }
}

// ---------------------------------------------------------------- membership

/// Opaque membership table handle.
pub struct SqpartMembership {
    inner: MembershipTable,
}

/// Sieves the members of S up to `limit`. `cap` = 0 uses the default cap.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqpart_membership_sieve(
    limit: u64,
    cap: u64,
    out: *mut *mut SqpartMembership,
) -> SqpartStatus {
    if out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| match sieve_membership_capped(limit, sieve_cap(cap)) {
        Ok(table) => {
            unsafe {
                *out = Box::into_raw(Box::new(SqpartMembership { inner: table }));
            }
            SqpartStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Frees a membership handle. NULL is a no-op.
///
/// # Safety
/// `handle` must be NULL or a pointer returned by this library and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn sqpart_membership_free(handle: *mut SqpartMembership) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Writes the table limit to `out`.
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_membership_limit(
    handle: *const SqpartMembership,
    out: *mut u64,
) -> SqpartStatus {
    if handle.is_null() || out.is_null() {
        return SqpartStatus::NullPointer;
    }
    unsafe { *out = (*handle).inner.limit() };
    SqpartStatus::Ok
}

/// Writes whether `n` is a sum of two squares to `out` (requires
/// 1 <= n <= limit).
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_membership_contains(
    handle: *const SqpartMembership,
    n: u64,
    out: *mut bool,
) -> SqpartStatus {
    if handle.is_null() || out.is_null() {
        return SqpartStatus::NullPointer;
    }
    let table = unsafe { &(*handle).inner };
    if n == 0 || n > table.limit() {
        return SqpartStatus::InvalidArgument;
    }
    unsafe { *out = table.contains(n) };
    SqpartStatus::Ok
}

/// Writes S(x) = #{members <= x} to `out` (requires 1 <= x <= limit).
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_membership_count_up_to(
    handle: *const SqpartMembership,
    x: u64,
    out: *mut u64,
) -> SqpartStatus {
    if handle.is_null() || out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(
        || match count_members_up_to(unsafe { &(*handle).inner }, x) {
            Ok(count) => {
                unsafe { *out = count };
                SqpartStatus::Ok
            }
            Err(e) => status_of(&e),
        },
    )
}

/// Membership by the even-multiplicity factorization criterion.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqpart_is_member_by_factorization(n: u64, out: *mut bool) -> SqpartStatus {
    if out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| match is_member_by_factorization(n) {
        Ok(flag) => {
            unsafe { *out = flag };
            SqpartStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

// ---------------------------------------------------------------- constant

/// Landau-Ramanujan constant to `target_abs_error` in (0, 0.1].
/// Writes the value, its certified error bound, and the series terms used.
///
/// # Safety
/// Out-pointers may be NULL to skip that field, except `out_value`.
#[no_mangle]
pub unsafe extern "C" fn sqpart_landau_constant(
    target_abs_error: f64,
    out_value: *mut f64,
    out_error_bound: *mut f64,
    out_terms: *mut u64,
) -> SqpartStatus {
    if out_value.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| match landau_ramanujan_constant(target_abs_error) {
        Ok(approx) => {
            unsafe {
                *out_value = approx.value;
                if !out_error_bound.is_null() {
                    *out_error_bound = approx.abs_error_bound;
                }
                if !out_terms.is_null() {
                    *out_terms = approx.terms_used;
                }
            }
            SqpartStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// The reference curve K x / sqrt(log x) (requires x > e).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqpart_landau_reference(x: f64, k: f64, out: *mut f64) -> SqpartStatus {
    if out.is_null() {
        return SqpartStatus::NullPointer;
    }
    match landau_reference(x, k) {
        Ok(v) => {
            unsafe { *out = v };
            SqpartStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

// ---------------------------------------------------------------- partitions

/// Opaque exact partition table handle.
pub struct SqpartPartitionTable {
    inner: PartitionTable,
}

unsafe fn build_table(
    n_max: u64,
    cap: u64,
    parts: PartSet,
    out: *mut *mut SqpartPartitionTable,
) -> SqpartStatus {
    match partition_counts_capped(n_max, &parts, dp_cap(cap)) {
        Ok(table) => {
            unsafe {
                *out = Box::into_raw(Box::new(SqpartPartitionTable { inner: table }));
            }
            SqpartStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Exact counts of partitions into sums of two squares, for 0..=n_max.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqpart_partition_table_two_squares(
    n_max: u64,
    cap: u64,
    out: *mut *mut SqpartPartitionTable,
) -> SqpartStatus {
    if out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| match PartSet::two_squares(n_max) {
        Ok(parts) => unsafe { build_table(n_max, cap, parts, out) },
        Err(e) => status_of(&e),
    })
}

/// Exact unrestricted partition counts for 0..=n_max.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqpart_partition_table_all(
    n_max: u64,
    cap: u64,
    out: *mut *mut SqpartPartitionTable,
) -> SqpartStatus {
    if out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| unsafe { build_table(n_max, cap, PartSet::all(), out) })
}

/// Exact counts for an explicit strictly increasing part list.
///
/// # Safety
/// `parts` must point to `len` readable u64 values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_partition_table_explicit(
    parts: *const u64,
    len: usize,
    n_max: u64,
    cap: u64,
    out: *mut *mut SqpartPartitionTable,
) -> SqpartStatus {
    if out.is_null() || (parts.is_null() && len > 0) {
        return SqpartStatus::NullPointer;
    }
    let list = unsafe { std::slice::from_raw_parts(parts, len) }.to_vec();
    guarded(|| match PartSet::explicit(list) {
        Ok(set) => unsafe { build_table(n_max, cap, set, out) },
        Err(e) => status_of(&e),
    })
}

/// Frees a partition table handle. NULL is a no-op.
///
/// # Safety
/// `handle` must be NULL or a pointer returned by this library and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn sqpart_partition_table_free(handle: *mut SqpartPartitionTable) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Writes the table's n_max to `out`.
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_partition_table_nmax(
    handle: *const SqpartPartitionTable,
    out: *mut u64,
) -> SqpartStatus {
    if handle.is_null() || out.is_null() {
        return SqpartStatus::NullPointer;
    }
    unsafe { *out = (*handle).inner.n_max() };
    SqpartStatus::Ok
}

/// The exact count at `n` as a decimal string (caller frees with
/// [`sqpart_string_free`]).
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_partition_count_decimal(
    handle: *const SqpartPartitionTable,
    n: u64,
    out: *mut *mut c_char,
) -> SqpartStatus {
    if handle.is_null() || out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| match unsafe { &(*handle).inner }.count(n) {
        Ok(count) => {
            let s = CString::new(count.to_string()).expect("decimal digits contain no NUL");
            unsafe { *out = s.into_raw() };
            SqpartStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Natural log of the exact count at `n` (-inf if the count is 0).
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_partition_count_log(
    handle: *const SqpartPartitionTable,
    n: u64,
    out: *mut f64,
) -> SqpartStatus {
    if handle.is_null() || out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| match unsafe { &(*handle).inner }.count(n) {
        Ok(count) => {
            unsafe { *out = log_biguint(count) };
            SqpartStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// `counts[n+1] - counts[n]` as a decimal string (possibly negative for
/// part sets without 1). Caller frees with [`sqpart_string_free`].
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_partition_difference_decimal(
    handle: *const SqpartPartitionTable,
    n: u64,
    out: *mut *mut c_char,
) -> SqpartStatus {
    if handle.is_null() || out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| match difference_exact(n, unsafe { &(*handle).inner }) {
        Ok(difference) => {
            let s = CString::new(difference.to_string()).expect("decimal digits contain no NUL");
            unsafe { *out = s.into_raw() };
            SqpartStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Frees a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sqpart_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

// ---------------------------------------------------------------- saddle

/// Opaque saddle evaluation context handle.
pub struct SqpartSaddleContext {
    inner: SaddleContext,
}

/// A solved saddle point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqpartSaddlePoint {
    pub x: f64,
    pub rho: f64,
    /// X = 1 / log(1/rho).
    pub scale: f64,
    /// Signed defect rho Phi'(rho) - x.
    pub residual: f64,
}

/// Context sized for saddle solves with targets up to `x_max` (>= 10).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqpart_saddle_context_for_target(
    x_max: f64,
    out: *mut *mut SqpartSaddleContext,
) -> SqpartStatus {
    if out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| match SaddleContext::for_max_target(x_max) {
        Ok(ctx) => {
            unsafe {
                *out = Box::into_raw(Box::new(SqpartSaddleContext { inner: ctx }));
            }
            SqpartStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Context sized for direct phi evaluations at scales X up to `scale`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqpart_saddle_context_for_scale(
    scale: f64,
    out: *mut *mut SqpartSaddleContext,
) -> SqpartStatus {
    if out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| match SaddleContext::for_max_scale(scale) {
        Ok(ctx) => {
            unsafe {
                *out = Box::into_raw(Box::new(SqpartSaddleContext { inner: ctx }));
            }
            SqpartStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Frees a saddle context handle. NULL is a no-op.
///
/// # Safety
/// `handle` must be NULL or a pointer returned by this library and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn sqpart_saddle_context_free(handle: *mut SqpartSaddleContext) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// The Landau-Ramanujan constant held by the context.
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_saddle_context_landau_k(
    handle: *const SqpartSaddleContext,
    out: *mut f64,
) -> SqpartStatus {
    if handle.is_null() || out.is_null() {
        return SqpartStatus::NullPointer;
    }
    unsafe { *out = (*handle).inner.landau_k() };
    SqpartStatus::Ok
}

/// (rho d/drho)^m Phi(rho) with certified truncation tail (m <= 4).
///
/// # Safety
/// `handle` must be a live handle; `out_value` must be valid;
/// `out_tail_bound` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sqpart_phi_log_derivative(
    handle: *const SqpartSaddleContext,
    rho: f64,
    m: u32,
    out_value: *mut f64,
    out_tail_bound: *mut f64,
) -> SqpartStatus {
    if handle.is_null() || out_value.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(
        || match unsafe { &(*handle).inner }.phi_log_derivative(rho, m) {
            Ok(phi) => {
                unsafe {
                    *out_value = phi.value;
                    if !out_tail_bound.is_null() {
                        *out_tail_bound = phi.tail_bound;
                    }
                }
                SqpartStatus::Ok
            }
            Err(e) => status_of(&e),
        },
    )
}

/// Solves x = rho Phi'(rho) (x >= 10).
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_solve_saddle(
    handle: *const SqpartSaddleContext,
    x: f64,
    out: *mut SqpartSaddlePoint,
) -> SqpartStatus {
    if handle.is_null() || out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| match unsafe { &(*handle).inner }.solve_saddle(x) {
        Ok(point) => {
            unsafe {
                *out = SqpartSaddlePoint {
                    x: point.x,
                    rho: point.rho,
                    scale: point.scale,
                    residual: point.residual,
                };
            }
            SqpartStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Which estimate a log-estimate call should produce. Passed as a plain
/// u32 so that out-of-range values can be rejected instead of being
/// undefined behavior.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqpartEstimateMethod {
    Main = 0,
    Simple = 1,
    Difference = 2,
}

/// log of the requested estimate of p_S(n) (n >= 100). `method` is a
/// `SqpartEstimateMethod` value. The saddle point used is written to
/// `out_point` when non-NULL.
///
/// # Safety
/// `handle` must be a live handle; `out_log` must be valid; `out_point`
/// may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sqpart_estimate_log(
    handle: *const SqpartSaddleContext,
    n: u64,
    method: u32,
    out_log: *mut f64,
    out_point: *mut SqpartSaddlePoint,
) -> SqpartStatus {
    if handle.is_null() || out_log.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(|| {
        let ctx = unsafe { &(*handle).inner };
        let estimate = match method {
            m if m == SqpartEstimateMethod::Main as u32 => ctx.main_estimate_log(n),
            m if m == SqpartEstimateMethod::Simple as u32 => ctx.simple_estimate_log(n),
            m if m == SqpartEstimateMethod::Difference as u32 => ctx.difference_estimate_log(n),
            _ => return SqpartStatus::InvalidArgument,
        };
        match estimate {
            Ok(est) => {
                unsafe {
                    *out_log = est.log_value;
                    if !out_point.is_null() {
                        *out_point = SqpartSaddlePoint {
                            x: est.saddle.x,
                            rho: est.saddle.rho,
                            scale: est.saddle.scale,
                            residual: est.saddle.residual,
                        };
                    }
                }
                SqpartStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Closed-form saddle asymptotes: which = 1 for x log(1/rho), 2 for
/// Phi(rho(x)) (m ignored for both), 3 for the m-th log-derivative
/// leading term (1 <= m <= 4).
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_saddle_asymptote(
    handle: *const SqpartSaddleContext,
    x: f64,
    which: u32,
    m: u32,
    out: *mut f64,
) -> SqpartStatus {
    if handle.is_null() || out.is_null() {
        return SqpartStatus::NullPointer;
    }
    let which = match which {
        1 => SaddleAsymptote::XLogInvRho,
        2 => SaddleAsymptote::Phi,
        3 => SaddleAsymptote::Derivative,
        _ => return SqpartStatus::InvalidArgument,
    };
    guarded(
        || match unsafe { &(*handle).inner }.saddle_asymptote(x, which, m) {
            Ok(v) => {
                unsafe { *out = v };
                SqpartStatus::Ok
            }
            Err(e) => status_of(&e),
        },
    )
}

/// The reference curve K zeta(2) Gamma(m+1) X^{m+1} / sqrt(log X)
/// (X >= 10, m <= 4).
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqpart_log_derivative_reference(
    handle: *const SqpartSaddleContext,
    scale: f64,
    m: u32,
    out: *mut f64,
) -> SqpartStatus {
    if handle.is_null() || out.is_null() {
        return SqpartStatus::NullPointer;
    }
    guarded(
        || match unsafe { &(*handle).inner }.log_derivative_reference(scale, m) {
            Ok(v) => {
                unsafe { *out = v };
                SqpartStatus::Ok
            }
            Err(e) => status_of(&e),
        },
    )
}
