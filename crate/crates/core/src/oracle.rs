//! Independent numerical oracles: minimum boundary modulus of a map, plain
//! bisection and golden-section refinement.
//!
//! Nothing here knows about radii or classes. The verification suites use
//! these routines to check the solver's claims from a different direction.

use num_complex::Complex;
use serde::Serialize;

use crate::coeffs::HarmonicPolynomialMap;
use crate::error::{domain, Error, Result};
use crate::scalar::Real;

pub const DEFAULT_SAMPLES: usize = 4096;
pub const DEFAULT_REFINE_TOL: f64 = 1e-10;

/// Estimated minimum of `|f(e^{iθ})|` over the unit circle.
///
/// For a univalent map with `f(0) = 0` this is the distance from `f(0)` to
/// the boundary of `f(𝔻)`. For other maps it is only an upper bound on that
/// distance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistanceEstimate<T> {
    pub value: T,
    /// Angle in `[0, 2π)` where the minimum was found.
    pub argmin_angle: T,
    /// Width of the final angular bracket.
    pub refinement_width: T,
}

/// Result of a golden-section refinement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Minimum<T> {
    pub argmin: T,
    pub value: T,
    pub width: T,
}

/// Minimum boundary modulus by uniform sampling of the circle followed by
/// golden-section refinement around every sampled local minimum.
pub fn boundary_distance<T: Real>(
    f: &HarmonicPolynomialMap<T>,
    n_samples: usize,
    refine_tol: T,
) -> Result<DistanceEstimate<T>> {
    if n_samples < 64 {
        return Err(domain(format!("need at least 64 samples, got {n_samples}")));
    }
    if !(refine_tol > T::zero()) {
        return Err(domain(format!("refine_tol = {refine_tol} must be positive")));
    }
    let tau = T::TAU();
    let step = tau / T::from_usize_lossy(n_samples);
    let modulus = |theta: T| -> T {
        // |e^{iθ}| = 1 up to rounding, which evaluate() tolerates.
        f.evaluate(Complex::from_polar(T::one(), theta))
            .map(|w| w.norm())
            .unwrap_or(T::infinity())
    };
    let samples: Vec<T> = (0..n_samples)
        .map(|j| modulus(step * T::from_usize_lossy(j)))
        .collect();
    if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(bad.to_f64_lossy()));
    }

    let mut best = DistanceEstimate {
        value: samples[0],
        argmin_angle: T::zero(),
        refinement_width: step,
    };
    for j in 0..n_samples {
        let prev = samples[(j + n_samples - 1) % n_samples];
        let next = samples[(j + 1) % n_samples];
        let here = samples[j];
        if here > prev || here > next {
            continue;
        }
        let centre = step * T::from_usize_lossy(j);
        let m = golden_section(&modulus, centre - step, centre + step, refine_tol);
        let (value, argmin, width) = if m.value < here {
            (m.value, m.argmin, m.width)
        } else {
            (here, centre, m.width)
        };
        if value < best.value {
            best = DistanceEstimate {
                value,
                argmin_angle: argmin,
                refinement_width: width,
            };
        }
    }
    let mut angle = best.argmin_angle % tau;
    if angle < T::zero() {
        angle = angle + tau;
    }
    if angle >= tau {
        angle = T::zero();
    }
    best.argmin_angle = angle;
    if best.refinement_width > refine_tol {
        best.refinement_width = refine_tol;
    }
    Ok(best)
}

/// Midpoint bisection for a sign change of `g` on `[lo, hi]`.
///
/// Returns the midpoint of the final bracket, whose width is at most `tol`
/// (or which cannot be split further in floating point). An endpoint where
/// `g` vanishes exactly is returned as is.
pub fn bisect_root<T, G>(mut g: G, lo: T, hi: T, tol: T) -> Result<T>
where
    T: Real,
    G: FnMut(T) -> T,
{
    if !(lo < hi) {
        return Err(Error::Bracket(format!("lo = {lo} must be below hi = {hi}")));
    }
    if !(tol > T::zero()) {
        return Err(domain(format!("tol = {tol} must be positive")));
    }
    let (mut a, mut b) = (lo, hi);
    let ga = checked(&mut g, a)?;
    let gb = checked(&mut g, b)?;
    if ga == T::zero() {
        return Ok(a);
    }
    if gb == T::zero() {
        return Ok(b);
    }
    if ga.signum() == gb.signum() {
        return Err(Error::Bracket(format!(
            "g({lo}) = {ga} and g({hi}) = {gb} have the same sign"
        )));
    }
    let neg_at_a = ga < T::zero();
    let two = T::lit(2.0);
    while b - a > tol {
        let mid = a + (b - a) / two;
        if mid <= a || mid >= b {
            break;
        }
        let gm = checked(&mut g, mid)?;
        if gm == T::zero() {
            return Ok(mid);
        }
        if (gm < T::zero()) == neg_at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(a + (b - a) / two)
}

fn checked<T: Real, G: FnMut(T) -> T>(g: &mut G, x: T) -> Result<T> {
    let v = g(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(x.to_f64_lossy()))
    }
}

/// Golden-section refinement of a three-point bracket `(a, b, c)` with
/// `a < b < c` and `g(b)` strictly below `g(a)` and `g(c)`.
///
/// A flat bracket (all three values equal) is accepted and returns the
/// middle point with the bracket width as certificate.
pub fn refine_min<T, G>(g: G, bracket: (T, T, T), tol: T) -> Result<Minimum<T>>
where
    T: Real,
    G: Fn(T) -> T,
{
    let (a, b, c) = bracket;
    if !(a < b && b < c) {
        return Err(Error::Bracket(format!("points ({a}, {b}, {c}) are not ordered")));
    }
    if !(tol > T::zero()) {
        return Err(domain(format!("tol = {tol} must be positive")));
    }
    let (fa, fb, fc) = (g(a), g(b), g(c));
    if !(fa.is_finite() && fb.is_finite() && fc.is_finite()) {
        return Err(Error::NonFinite(b.to_f64_lossy()));
    }
    if fa == fb && fb == fc {
        return Ok(Minimum {
            argmin: b,
            value: fb,
            width: c - a,
        });
    }
    if !(fb < fa && fb < fc) {
        return Err(Error::Bracket(format!(
            "middle value {fb} is not strictly below the ends ({fa}, {fc})"
        )));
    }
    let m = golden_section(&g, a, c, tol);
    Ok(if m.value <= fb {
        m
    } else {
        Minimum {
            argmin: b,
            value: fb,
            width: m.width,
        }
    })
}

fn golden_section<T: Real, G: Fn(T) -> T>(g: &G, lo: T, hi: T, tol: T) -> Minimum<T> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let (mut a, mut d) = (lo, hi);
    let mut b = d - inv_phi * (d - a);
    let mut c = a + inv_phi * (d - a);
    let mut fb = g(b);
    let mut fc = g(c);
    for _ in 0..500 {
        if d - a <= tol || !(a < b && b < c && c < d) {
            break;
        }
        if fb < fc {
            d = c;
            c = b;
            fc = fb;
            b = d - inv_phi * (d - a);
            fb = g(b);
        } else {
            a = b;
            b = c;
            fb = fc;
            c = a + inv_phi * (d - a);
            fc = g(c);
        }
    }
    let (argmin, value) = if fb <= fc { (b, fb) } else { (c, fc) };
    Minimum {
        argmin,
        value,
        width: d - a,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Map;

    #[test]
    fn identity_distance_is_one() {
        let d = boundary_distance(&Map::identity(), 256, 1e-10).unwrap();
        assert!((d.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn quadratic_extremal_distance() {
        let f = Map::monomial(2, Complex::new(-0.5, 0.0)).unwrap();
        let d = boundary_distance(&f, DEFAULT_SAMPLES, 1e-10).unwrap();
        assert!((d.value - 0.5).abs() < 1e-12);
        assert!(d.argmin_angle.min(std::f64::consts::TAU - d.argmin_angle) < 1e-5);
        assert!(d.refinement_width <= 1e-10);
    }

    #[test]
    fn anti_analytic_distance() {
        let f = Map::anti_monomial(2, Complex::new(0.3, 0.0)).unwrap();
        let d = boundary_distance(&f, DEFAULT_SAMPLES, 1e-10).unwrap();
        assert!((d.value - 0.7).abs() < 1e-12);
    }

    #[test]
    fn off_grid_minimum_is_refined() {
        // Minimum at θ = 0.123, far from any of the 64 grid angles.
        let rot = Complex::from_polar(1.0, -0.123);
        let f = Map::monomial(2, rot * -0.5).unwrap();
        let d = boundary_distance(&f, 64, 1e-12).unwrap();
        assert!((d.value - 0.5).abs() < 1e-12, "{}", d.value);
        assert!((d.argmin_angle - 0.123).abs() < 1e-5);
    }

    #[test]
    fn distance_argument_checks() {
        assert!(boundary_distance(&Map::identity(), 63, 1e-10).is_err());
        assert!(boundary_distance(&Map::identity(), 64, 0.0).is_err());
    }

    #[test]
    fn bisection_examples() {
        let r = bisect_root(|r: f64| r - 0.5, 0.0, 1.0, 1e-14).unwrap();
        assert!((r - 0.5).abs() < 1e-14);
        let r = bisect_root(|r: f64| r * r + 2.0 * r - 1.0, 0.0, 1.0, 1e-14).unwrap();
        assert!((r - (2f64.sqrt() - 1.0)).abs() < 1e-14);
        assert!(matches!(
            bisect_root(|r: f64| r - 2.0, 0.0, 1.0, 1e-12),
            Err(Error::Bracket(_))
        ));
        assert!(bisect_root(|r: f64| r, 1.0, 0.0, 1e-12).is_err());
        assert!(matches!(
            bisect_root(|r: f64| if r > 0.3 { f64::NAN } else { r - 0.5 }, 0.0, 1.0, 1e-12),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn refine_examples() {
        let m = refine_min(|x: f64| (x - 0.3).powi(2), (0.0, 0.3, 1.0), 1e-10).unwrap();
        assert!((m.argmin - 0.3).abs() < 1e-9);
        let g = |th: f64| (Complex::new(1.0, 0.0) - Complex::from_polar(0.5, th)).norm();
        let m = refine_min(g, (-0.1, 0.01, 0.1), 1e-10).unwrap();
        assert!((m.value - 0.5).abs() < 1e-15);
        let m = refine_min(|_x: f64| 2.0, (0.0, 0.5, 1.0), 1e-10).unwrap();
        assert_eq!((m.argmin, m.value, m.width), (0.5, 2.0, 1.0));
        assert!(refine_min(|x: f64| x, (0.0, 0.5, 1.0), 1e-10).is_err());
        assert!(refine_min(|x: f64| x, (0.0, 1.5, 1.0), 1e-10).is_err());
    }
}
