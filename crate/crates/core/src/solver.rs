//! Covering radii, growth envelopes and Bohr radii for weighted-budget
//! classes.
//!
//! Everything is a function of the ratio `t = M / α_k`. The Bohr radius is
//! the root in `(0, 1)` of `H(r) = r + t r^k − (1 − t)`; for `k = 2` it has
//! the closed form `(−1 + √(1 + 4t(1 − t))) / (2t)`.

use serde::Serialize;

use crate::classes::{ClassInstance, ClassSpec};
use crate::error::{domain, invalid, Error, Result};
use crate::scalar::Real;

/// Below this ratio the closed form is evaluated in rationalized form.
pub const SMALL_RATIO: f64 = 1e-4;
/// Upper end of the bisection bracket.
pub const BRACKET_TOP_GAP: f64 = 1e-15;
pub const MAX_BISECTION_ITERS: usize = 200;
/// Residual every non-degenerate radius must meet (for `f64`).
pub const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Bisection,
    Degenerate,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Bisection => "bisection",
            Method::Degenerate => "degenerate",
        }
    }
}

/// A computed radius with its certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusResult<T> {
    pub value: T,
    pub method: Method,
    /// `|H(value)|` for the defining equation.
    pub residual: T,
    /// Certified truncation error of any series in `H` (0 for polynomials).
    #[serde(rename = "tail_bound")]
    pub series_tail_bound: T,
    pub note: Option<String>,
    /// The value is a limit (`t → 0⁺`, `ρ → 1⁻`) rather than a root.
    #[serde(skip)]
    pub limit: bool,
}

impl<T: Real> RadiusResult<T> {
    pub fn degenerate(note: impl Into<String>) -> Self {
        Self {
            value: T::zero(),
            method: Method::Degenerate,
            residual: T::zero(),
            series_tail_bound: T::zero(),
            note: Some(note.into()),
            limit: false,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.method == Method::Degenerate
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn check_ratio<T: Real>(t: T) -> Result<()> {
    if t.is_nan() || t < T::zero() {
        return Err(domain(format!("ratio t = {t} must be nonnegative")));
    }
    Ok(())
}

/// `r + t r^k − (1 − t)`.
pub fn defining_residual<T: Real>(t: T, k: u32, r: T) -> T {
    r + t * r.powi(k as i32) - (T::one() - t)
}

/// Radius `max(1 − t, 0)` of the disk covered by every member.
pub fn covering_radius<T: Real>(t: T) -> Result<T> {
    check_ratio(t)?;
    Ok((T::one() - t).max(T::zero()))
}

/// `(r − t r², r + t r²)`.
pub fn growth_envelope<T: Real>(t: T, r: T) -> Result<(T, T)> {
    check_ratio(t)?;
    if !(r >= T::zero() && r <= T::one()) {
        return Err(domain(format!("radius {r} outside [0, 1]")));
    }
    let s = t * r * r;
    Ok((r - s, r + s))
}

/// Closed-form Bohr radius for `k = 2`.
///
/// `t = 0` returns the limit value 1 (flagged); `t ≥ 1` is degenerate.
pub fn closed_form_bohr_radius<T: Real>(t: T) -> Result<RadiusResult<T>> {
    check_ratio(t)?;
    let one = T::one();
    let two = T::lit(2.0);
    if t == T::zero() {
        return Ok(RadiusResult {
            value: one,
            method: Method::ClosedForm,
            residual: T::zero(),
            series_tail_bound: T::zero(),
            note: Some("limit t -> 0+: empty budget leaves only the identity".into()),
            limit: true,
        });
    }
    if t >= one {
        return Ok(RadiusResult::degenerate(format!("t = {t} >= 1: covering radius is 0")));
    }
    let disc = (one + T::lit(4.0) * t * (one - t)).sqrt();
    let value = if t < T::lit(SMALL_RATIO) {
        two * (one - t) / (one + disc)
    } else {
        (disc - one) / (two * t)
    };
    Ok(RadiusResult {
        value,
        method: Method::ClosedForm,
        residual: defining_residual(t, 2, value).abs(),
        series_tail_bound: T::zero(),
        note: None,
        limit: false,
    })
}

/// Bohr radius for start index `k`: bisection for the root of
/// `r + t r^k − (1 − t)` on `[0, 1 − 1e-15]`.
///
/// Stops once the bracket is no wider than `tol` and the residual at the
/// midpoint is at most `1e-12`.
pub fn generalized_bohr_radius<T: Real>(t: T, k: u32, tol: T) -> Result<RadiusResult<T>> {
    check_ratio(t)?;
    if k < 2 {
        return Err(domain(format!("start index k = {k} < 2")));
    }
    if !(tol > T::zero()) {
        return Err(domain(format!("tol = {tol} must be positive")));
    }
    if t == T::zero() {
        return closed_form_bohr_radius(t);
    }
    if t >= T::one() {
        return Ok(RadiusResult::degenerate(format!("t = {t} >= 1: covering radius is 0")));
    }
    let res_tol = T::floor_tol(RESIDUAL_TOL);
    let h = |r: T| defining_residual(t, k, r);
    let (mut lo, mut hi) = (T::zero(), T::one() - T::lit(BRACKET_TOP_GAP));
    if !(h(lo) < T::zero() && h(hi) > T::zero()) {
        return Err(Error::Bracket(format!("H does not change sign on [0, 1) for t = {t}")));
    }
    let two = T::lit(2.0);
    for _ in 0..MAX_BISECTION_ITERS {
        let mid = lo + (hi - lo) / two;
        let hm = h(mid);
        if (hi - lo <= tol && hm.abs() <= res_tol) || hm == T::zero() {
            return Ok(RadiusResult {
                value: mid,
                method: Method::Bisection,
                residual: hm.abs(),
                series_tail_bound: T::zero(),
                note: None,
                limit: false,
            });
        }
        if hm < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        what: format!("Bohr radius bisection for t = {t}, k = {k}"),
        iterations: MAX_BISECTION_ITERS,
    })
}

/// `2(γ₂ + α − 1) / (γ₂ + √(γ₂² + 4γ₂(1 − α) − 4(1 − α)²))`, the rationalized
/// radius for the negative-coefficient family with budget `1 − α`.
pub fn rationalized_radius<T: Real>(gamma2: T, alpha: T) -> Result<T> {
    let one = T::one();
    let four = T::lit(4.0);
    if !(alpha < one) {
        return Err(domain(format!("alpha = {alpha} must be < 1")));
    }
    let b = one - alpha;
    if !(gamma2 >= b) || !gamma2.is_finite() {
        return Err(domain(format!("gamma_2 = {gamma2} must be at least 1 - alpha = {b}")));
    }
    let disc = gamma2 * gamma2 + four * gamma2 * b - four * b * b;
    Ok(T::lit(2.0) * (gamma2 + alpha - one) / (gamma2 + disc.sqrt()))
}

/// The radius of the curvature-type Janowski class as the closed-form
/// expression `(−1 + √(1 + 2u(1 − u))) / u`, `u = (D − C)/(1 + 2D − C)`.
///
/// This is not a root of the class's defining equation; it is kept only so
/// the difference to [`bohr_radius_for`] can be reported.
pub fn printed_sconv_radius<T: Real>(c: T, d: T) -> T {
    let one = T::one();
    let u = (d - c) / (one + T::lit(2.0) * d - c);
    ((one + T::lit(2.0) * u * (one - u)).sqrt() - one) / u
}

/// Bohr radius for a general class: closed form for `k = 2`, bisection
/// otherwise. Degenerate classes return a degenerate result.
pub fn spec_bohr_radius<T: Real>(spec: &ClassSpec<T>, tol: T) -> Result<RadiusResult<T>> {
    if spec.is_degenerate() {
        return Ok(RadiusResult::degenerate(format!(
            "M = {} >= alpha_k = {}",
            spec.budget(),
            spec.alpha()
        )));
    }
    if spec.start_index() == 2 {
        closed_form_bohr_radius(spec.ratio())
    } else {
        generalized_bohr_radius(spec.ratio(), spec.start_index(), tol)
    }
}

/// Bohr radius of a catalog class from `t = budget / α₂`.
pub fn bohr_radius_for<T: Real>(instance: &ClassInstance<T>, tol: T) -> Result<RadiusResult<T>> {
    if !(tol > T::zero()) {
        return Err(domain(format!("tol = {tol} must be positive")));
    }
    let v = instance.validate_params();
    if !v.accepted {
        return Err(invalid(v.reason.unwrap_or_default()));
    }
    if v.degenerate {
        return Ok(RadiusResult::degenerate(v.reason.unwrap_or_default()));
    }
    let t = instance.ratio()?;
    let result = closed_form_bohr_radius(t)?;
    Ok(match instance {
        ClassInstance::SConvTau { c, d } => {
            let printed = printed_sconv_radius(*c, *d);
            result.with_note(format!(
                "root of r + t r^2 = 1 - t with t = (D-C)/(2(1+2D-C)); \
                 the radical with 2u(1-u) gives {printed:e}"
            ))
        }
        _ => result,
    })
}
