//! The close-to-convex harmonic family `W⁰(μ, ρ)`: per-coefficient bounds,
//! certified evaluation of the two infinite series that define its Bohr
//! radius, the growth lower bound and the extremal map.
//!
//! With `c_m = 2(1 − ρ) / (m (1 + μ(m − 1)))` the radius is the root of
//!
//! ```text
//! H(r) = r + Σ_{m≥2} c_m r^m − (1 − Σ_{m≥2} (−1)^{m−1} c_m).
//! ```
//!
//! Both series are truncated with rigorous error bounds. For the positive
//! series the tail after the last kept term `c_N r^N` is at most
//! `c_N r^{N+1} / (1 − r)`. For the alternating series the terms
//! `e_m = c_m r^m` are completely monotone in `m` (`c_m` is a positive
//! combination of `1/m` and `1/(m ± s)` terms, and `r^m` is completely
//! monotone), so the Euler transform of the tail converges with a certified
//! remainder.

use num_complex::Complex;
use serde::Serialize;

use crate::coeffs::HarmonicPolynomialMap;
use crate::error::{domain, invalid, Error, Result};
use crate::scalar::Real;
use crate::solver::{Method, RadiusResult, MAX_BISECTION_ITERS};

pub const DEFAULT_TOL: f64 = 1e-10;
/// Largest accepted tolerance.
pub const MAX_TOL: f64 = 1e-3;
/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 1_000_000;
/// `ρ` closer than this to 1 returns the limit radius.
pub const RHO_LIMIT_GAP: f64 = 1e-9;
/// Residual floor for the root.
pub const ROOT_RESIDUAL_FLOOR: f64 = 1e-10;

/// Parameters `μ ≥ 0`, `0 ≤ ρ < 1` and a series/root tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WParams<T> {
    pub mu: T,
    pub rho: T,
    pub tol: T,
}

impl<T: Real> WParams<T> {
    pub fn new(mu: T, rho: T, tol: T) -> Result<Self> {
        if !(mu >= T::zero() && mu.is_finite()) {
            return Err(invalid(format!("mu = {mu} must be finite and >= 0")));
        }
        if !(rho >= T::zero() && rho < T::one()) {
            return Err(invalid(format!("rho = {rho} outside [0, 1)")));
        }
        if !(tol > T::zero() && tol <= T::lit(MAX_TOL)) {
            return Err(invalid(format!("tol = {tol} outside (0, {MAX_TOL}]")));
        }
        Ok(Self { mu, rho, tol })
    }

    /// Parameters with the default tolerance `1e-10`.
    pub fn with_default_tol(mu: T, rho: T) -> Result<Self> {
        Self::new(mu, rho, T::lit(DEFAULT_TOL))
    }

    fn with_tol(self, tol: T) -> Self {
        Self { tol, ..self }
    }
}

/// A truncated series with a certified bound on the truncation error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue<T> {
    pub value: T,
    pub tail_bound: T,
    pub terms_used: usize,
}

/// `2(1 − ρ) / (m (1 + μ(m − 1)))`, the sharp bound on `|a_m| + |b_m|`.
pub fn w_coeff_bound<T: Real>(m: u32, p: &WParams<T>) -> Result<T> {
    if m < 2 {
        return Err(domain(format!("degree {m} < 2")));
    }
    Ok(coeff(m as usize, p))
}

fn coeff<T: Real>(m: usize, p: &WParams<T>) -> T {
    let mf = T::from_usize_lossy(m);
    T::lit(2.0) * (T::one() - p.rho) / (mf * (T::one() + p.mu * (mf - T::one())))
}

fn check_radius<T: Real>(r: T) -> Result<()> {
    if !(r >= T::zero() && r < T::one()) {
        return Err(domain(format!("radius {r} outside [0, 1)")));
    }
    Ok(())
}

/// `Σ_{m≥2} c_m r^m` (the leading `r` is not included).
pub fn w_majorant_series<T: Real>(r: T, p: &WParams<T>) -> Result<SeriesValue<T>> {
    check_radius(r)?;
    if r == T::zero() {
        return Ok(SeriesValue {
            value: T::zero(),
            tail_bound: T::zero(),
            terms_used: 1,
        });
    }
    let stop = p.tol / T::lit(2.0);
    let ratio = r / (T::one() - r);
    let mut sum = T::zero();
    let mut pow = r;
    for m in 2..=MAX_TERMS + 1 {
        pow = pow * r;
        let term = coeff(m, p) * pow;
        sum = sum + term;
        let tail = term * ratio;
        if tail <= stop {
            return Ok(SeriesValue {
                value: sum,
                tail_bound: tail,
                terms_used: m - 1,
            });
        }
    }
    Err(Error::TruncationCap {
        what: format!("majorant series at r = {r}"),
        cap: MAX_TERMS,
    })
}

/// Direct terms summed before the first tail estimate is attempted.
const DIRECT_TERMS: usize = 16;
/// Deepest Euler difference tried before more direct terms are added.
const MAX_EULER_ORDER: usize = 40;

/// `Σ_{m≥2} (−1)^{m−1} e_m` for a completely monotone sequence `e_m`.
///
/// The head is summed directly in pairs. The tail `Σ_{j≥0} (−1)^j a_j`,
/// `a_j = e_{N+1+j}`, is replaced by its Euler transform
/// `Σ_k Δ^k a_0 / 2^{k+1}`; for completely monotone `a` the remainder after
/// `K` terms is at most `Δ^K a_0 / 2^K`.
fn alternating_sum<T: Real, E: Fn(usize) -> T>(e: E, tol: T, what: &str) -> Result<SeriesValue<T>> {
    let stop = tol / T::lit(2.0);
    let half = T::lit(0.5);
    let mut head = T::zero();
    // Last directly summed degree; always odd so the tail starts with −e_{n+1}.
    let mut n = 1;
    let mut diffs: Vec<T> = Vec::with_capacity(MAX_EULER_ORDER + 1);
    while n < MAX_TERMS {
        let target = n + DIRECT_TERMS;
        while n < target {
            head = head - (e(n + 1) - e(n + 2));
            n += 2;
        }
        diffs.clear();
        diffs.extend((0..=MAX_EULER_ORDER).map(|j| e(n + 1 + j)));
        let scale = diffs[0];
        let mut tail = T::zero();
        let mut weight = half;
        for k in 0..MAX_EULER_ORDER {
            tail = tail + diffs[0] * weight;
            // Δ^{k+1} in place.
            for j in 0..(MAX_EULER_ORDER - k) {
                diffs[j] = diffs[j] - diffs[j + 1];
            }
            let rounding = T::epsilon() * scale * T::from_usize_lossy(k + 2);
            let bound = diffs[0].max(T::zero()) * weight * T::lit(2.0) + rounding;
            if bound <= stop {
                return Ok(SeriesValue {
                    value: head - tail,
                    tail_bound: bound,
                    terms_used: n - 1 + k + 1,
                });
            }
            weight = weight * half;
        }
    }
    Err(Error::TruncationCap {
        what: what.to_string(),
        cap: MAX_TERMS,
    })
}

/// `1 − Σ_{m≥2} (−1)^{m−1} c_m`. The alternating sum is negative, so the
/// value exceeds 1.
pub fn w_rhs<T: Real>(p: &WParams<T>) -> Result<SeriesValue<T>> {
    let s = alternating_sum(|m| coeff(m, p), p.tol, "right-hand alternating series")?;
    Ok(SeriesValue {
        value: T::one() - s.value,
        ..s
    })
}

/// `r − Σ_{m≥2} (−1)^{m−1} c_m r^m`.
pub fn w_growth_lower<T: Real>(r: T, p: &WParams<T>) -> Result<SeriesValue<T>> {
    check_radius(r)?;
    if r == T::zero() {
        return Ok(SeriesValue {
            value: T::zero(),
            tail_bound: T::zero(),
            terms_used: 1,
        });
    }
    let s = alternating_sum(
        |m| coeff(m, p) * r.powi(m as i32),
        p.tol,
        "growth lower-bound series",
    )?;
    Ok(SeriesValue {
        value: r - s.value,
        ..s
    })
}

/// `r + Σ_{m=2}^{n} c_m r^m` for at most `n` terms: a lower bound on the
/// majorant side of `H`.
fn partial_lhs<T: Real>(r: T, p: &WParams<T>, n: usize) -> T {
    let mut sum = r;
    let mut pow = r;
    for m in 2..=n {
        pow = pow * r;
        let term = coeff(m, p) * pow;
        sum = sum + term;
        if term < T::epsilon() * sum * T::lit(1e-3) {
            break;
        }
    }
    sum
}

/// The root in `(0, 1)` of `H(r) = r + Σ c_m r^m − w_rhs`.
///
/// The requested tolerance is split as `tol/4` for each series and `tol/2`
/// for the bisection bracket. The reported residual is `|H|` at the returned
/// point, at most `max(1e-10, combined tail bounds)`.
pub fn w_bohr_radius<T: Real>(p: &WParams<T>) -> Result<RadiusResult<T>> {
    let one = T::one();
    if p.rho >= one - T::lit(RHO_LIMIT_GAP) {
        return Ok(RadiusResult {
            value: one - T::lit(RHO_LIMIT_GAP),
            method: Method::Bisection,
            residual: T::zero(),
            series_tail_bound: T::zero(),
            note: Some("limit rho -> 1-: the equation degenerates to r = 1".into()),
            limit: true,
        });
    }
    let quarter = p.with_tol(p.tol / T::lit(4.0));
    let rhs = w_rhs(&quarter)?;
    let target = rhs.value + rhs.tail_bound;

    // Upper bracket: partial sums are lower bounds for the positive series.
    let mut hi = None;
    let mut gap = T::lit(0.5);
    for _ in 0..60 {
        let r = one - gap;
        if partial_lhs(r, p, 100_000) > target {
            hi = Some(r);
            break;
        }
        gap = gap / T::lit(2.0);
    }
    let mut hi = hi.ok_or_else(|| {
        Error::Bracket(format!("no sign change of H on (0, 1) for mu = {}, rho = {}", p.mu, p.rho))
    })?;
    let mut lo = T::zero();

    let bracket_tol = p.tol / T::lit(2.0);
    let floor = T::floor_tol(ROOT_RESIDUAL_FLOOR);
    let two = T::lit(2.0);
    for _ in 0..MAX_BISECTION_ITERS {
        let mid = lo + (hi - lo) / two;
        let lhs = w_majorant_series(mid, &quarter)?;
        let h = mid + lhs.value - rhs.value;
        let certified = lhs.tail_bound + rhs.tail_bound;
        if hi - lo <= bracket_tol && h.abs() <= floor.max(certified) {
            return Ok(RadiusResult {
                value: mid,
                method: Method::Bisection,
                residual: h.abs(),
                series_tail_bound: certified,
                note: None,
                limit: false,
            });
        }
        if h < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        what: format!("W Bohr radius for mu = {}, rho = {}", p.mu, p.rho),
        iterations: MAX_BISECTION_ITERS,
    })
}

/// `z + Σ_{m=2}^{N} (−1)^{m−1} c_m z^m`, truncated at `max_degree`.
pub fn w_extremal<T: Real>(p: &WParams<T>, max_degree: u32) -> Result<HarmonicPolynomialMap<T>> {
    if max_degree < 2 {
        return Err(domain(format!("max_degree {max_degree} < 2")));
    }
    let terms = (2..=max_degree).map(|m| {
        let c = coeff(m as usize, p);
        let signed = if m % 2 == 0 { -c } else { c };
        (m, Complex::new(signed, T::zero()))
    });
    HarmonicPolynomialMap::new(terms, [])
}

/// Certified bound on `Σ_{m>N} c_m r^m`, the majorant mass dropped by
/// truncating the extremal map at degree `N`.
pub fn w_truncation_tail<T: Real>(p: &WParams<T>, max_degree: u32, r: T) -> Result<T> {
    check_radius(r)?;
    let n = max_degree as usize;
    let next = coeff(n + 1, p) * r.powi(n as i32 + 1);
    Ok(next / (T::one() - r))
}
