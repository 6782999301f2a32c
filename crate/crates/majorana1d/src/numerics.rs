//! Root-finding for the transcendental quantization conditions, Hermite
//! polynomials, and an independent finite-difference Hamiltonian oracle
//! used to cross-validate every analytic spectrum.

pub mod banded;
pub mod oracle;

pub use oracle::fd_hamiltonian_spectrum;

use crate::scalar::{real, real_usize, to_f64, Real};
use crate::{tol, Error, Result};

/// A converged bracketed root together with its certificate.
#[derive(Clone, Copy, Debug)]
pub struct RootReport<T: Real> {
    pub root: T,
    /// f evaluated at `root`.
    pub residual: T,
    /// Final bracket; the endpoints straddle the sign change.
    pub bracket: (T, T),
    pub iterations: usize,
}

/// Deterministic bisection. Runs until the bracket width drops below `tol`
/// or the midpoint stops being representable strictly inside the bracket,
/// whichever comes first, so passing a very small `tol` converges to the
/// floating-point limit.
pub fn bisect<T: Real>(
    f: impl Fn(T) -> T,
    lo: T,
    hi: T,
    tol: T,
) -> Result<RootReport<T>> {
    // negated comparisons so NaN endpoints fail validation
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(lo < hi) || !(tol >= T::zero()) {
        return Err(Error::InvalidInput(format!(
            "bisect needs lo < hi and tol >= 0, got [{}, {}], tol {}",
            to_f64(lo),
            to_f64(hi),
            to_f64(tol)
        )));
    }
    let flo = f(lo);
    let fhi = f(hi);
    if !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::NonFinite("bisect endpoint evaluation".into()));
    }
    if flo * fhi > T::zero() {
        return Err(Error::NoBracket {
            lo: to_f64(lo),
            hi: to_f64(hi),
        });
    }
    let (mut lo, mut hi, mut flo) = (lo, hi, flo);
    let mut iterations = 0usize;
    let mut root = lo + (hi - lo) / real(2.0);
    loop {
        let mid = lo + (hi - lo) / real(2.0);
        if !(mid > lo && mid < hi) {
            break;
        }
        root = mid;
        iterations += 1;
        let fm = f(mid);
        if !fm.is_finite() {
            return Err(Error::NonFinite("bisect midpoint evaluation".into()));
        }
        if fm == T::zero() {
            break;
        }
        if (fm > T::zero()) == (flo > T::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= tol {
            root = lo + (hi - lo) / real(2.0);
            break;
        }
    }
    Ok(RootReport {
        root,
        residual: f(root),
        bracket: (lo, hi),
        iterations,
    })
}

/// Which tangent quantization condition: tan z = +lambda z or tan z = -lambda z.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TanSign {
    Plus,
    Minus,
}

/// Number of probe points per tangent branch. Poles at (j+1/2) pi rule out
/// naive scanning of wide intervals, so each branch interior is scanned
/// separately with a guard band of `BRANCH_GUARD` at both ends.
const BRANCH_PROBES: usize = 1000;
const BRANCH_GUARD: f64 = 1e-6;

fn tan_condition<T: Real>(sign: TanSign, lambda: T) -> impl Fn(T) -> T {
    let s = match sign {
        TanSign::Plus => T::one(),
        TanSign::Minus => -T::one(),
    };
    move |z: T| z.tan() - s * lambda * z
}

/// Positive part of the branch-j interval ((j-1/2) pi, (j+1/2) pi), with
/// guard bands.
fn branch_interval<T: Real>(j: usize) -> (T, T) {
    let half = T::PI() / real(2.0);
    let guard = real::<T>(BRANCH_GUARD);
    let lo = if j == 0 {
        guard
    } else {
        T::PI() * real_usize::<T>(j) - half + guard
    };
    let hi = T::PI() * real_usize::<T>(j) + half - guard;
    (lo, hi)
}

/// Count strict sign changes of the branch-j tangent condition over a dense
/// scan; test oracle for the one-root-per-branch property.
pub fn scan_branch_crossings<T: Real>(
    sign: TanSign,
    lambda: T,
    branch: usize,
    samples: usize,
) -> usize {
    let f = tan_condition(sign, lambda);
    let (lo, hi) = branch_interval::<T>(branch);
    let mut crossings = 0;
    let mut prev = f(lo);
    for i in 1..=samples {
        let z = lo + (hi - lo) * real_usize::<T>(i) / real_usize(samples);
        let cur = f(z);
        if prev * cur < T::zero() {
            crossings += 1;
        }
        if cur != T::zero() {
            prev = cur;
        }
    }
    crossings
}

/// First `count` strictly positive roots of tan z = (+/-) lambda z, one per
/// tangent branch, ascending. z = 0 is always excluded: it labels the
/// trivial solution. For the plus sign an extra root exists on branch 0
/// exactly when lambda > 1; the branch scan picks it up naturally.
pub fn tan_spectrum_roots<T: Real>(
    sign: TanSign,
    lambda: T,
    count: usize,
) -> Result<Vec<RootReport<T>>> {
    // negated comparison so a NaN lambda fails validation
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(lambda > T::zero()) || count == 0 {
        return Err(Error::InvalidInput(format!(
            "tan_spectrum_roots needs lambda > 0 and count >= 1, got {} and {count}",
            to_f64(lambda)
        )));
    }
    let f = tan_condition(sign, lambda);
    let mut out = Vec::with_capacity(count);
    // Every branch j >= 1 carries exactly one root; branch 0 carries at most
    // one. count + 2 branches therefore always suffice.
    for j in 0..=count + 1 {
        if out.len() == count {
            break;
        }
        let (lo, hi) = branch_interval::<T>(j);
        let mut prev_z = lo;
        let mut prev_f = f(lo);
        for i in 1..=BRANCH_PROBES {
            let z = lo + (hi - lo) * real_usize::<T>(i) / real_usize(BRANCH_PROBES);
            let fz = f(z);
            if prev_f == T::zero() {
                // probe landed exactly on the root
                out.push(RootReport {
                    root: prev_z,
                    residual: T::zero(),
                    bracket: (prev_z - (hi - lo), z),
                    iterations: 0,
                });
                break;
            }
            if prev_f * fz < T::zero() {
                out.push(bisect(&f, prev_z, z, real(tol::BRACKET_WIDTH))?);
                break;
            }
            prev_z = z;
            prev_f = fz;
        }
    }
    if out.len() < count {
        return Err(Error::NonFinite(format!(
            "tangent branch scan found {} of {count} roots",
            out.len()
        )));
    }
    Ok(out)
}

/// The unique positive root of tanh z = lambda z, present exactly when
/// lambda < 1 (box longer than the Compton length). Returns None otherwise,
/// including the tangent case lambda = 1 where the root degenerates to 0.
pub fn tanh_root<T: Real>(lambda: T) -> Result<Option<RootReport<T>>> {
    // negated comparison so a NaN lambda fails validation
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(lambda > T::zero()) {
        return Err(Error::InvalidInput(format!(
            "tanh_root needs lambda > 0, got {}",
            to_f64(lambda)
        )));
    }
    if lambda >= T::one() {
        return Ok(None);
    }
    let f = move |z: T| z.tanh() - lambda * z;
    let lo = real::<T>(1e-8);
    // The root sits just below 1/lambda; 50 covers lambda >= 0.02 and the
    // 3/sqrt(1 - lambda) term covers the shrinking root as lambda -> 1.
    let mut hi = real::<T>(50.0).max(real::<T>(3.0) / (T::one() - lambda).sqrt());
    let mut widenings = 0;
    while f(hi) >= T::zero() && widenings < 20 {
        hi = hi + hi;
        widenings += 1;
    }
    Ok(Some(bisect(f, lo, hi, real(tol::BRACKET_WIDTH))?))
}

/// Physicists' Hermite polynomial H_N(x) by the three-term recurrence
/// H_{N+1} = 2x H_N - 2N H_{N-1}.
pub fn hermite<T: Real>(n: usize, x: T) -> T {
    let two = T::one() + T::one();
    let mut h_prev = T::one();
    if n == 0 {
        return h_prev;
    }
    let mut h = two * x;
    for k in 1..n {
        let next = two * x * h - two * real_usize::<T>(k) * h_prev;
        h_prev = h;
        h = next;
    }
    h
}
