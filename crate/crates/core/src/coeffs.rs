//! Harmonic polynomial maps `f = h + conj(g)` with
//! `h(z) = z + Σ a_m z^m` and `g(z) = Σ b_m z^m`, both summed over `m ≥ 2`.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Result};
use crate::scalar::Real;

/// A harmonic polynomial map with finitely many nonzero coefficients.
///
/// Invariants:
/// - every stored degree is `≥ 2`;
/// - no stored coefficient is exactly zero.
///
/// The degree-one analytic coefficient is fixed at 1 and the degree-one
/// co-analytic coefficient at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicPolynomialMap<T> {
    analytic: BTreeMap<u32, Complex<T>>,
    coanalytic: BTreeMap<u32, Complex<T>>,
}

impl<T: Real> Default for HarmonicPolynomialMap<T> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<T: Real> HarmonicPolynomialMap<T> {
    /// The identity map `f(z) = z`.
    pub fn identity() -> Self {
        Self {
            analytic: BTreeMap::new(),
            coanalytic: BTreeMap::new(),
        }
    }

    /// Builds a map from `(degree, coefficient)` pairs. Zero coefficients are
    /// dropped; repeated degrees are summed.
    pub fn new<A, B>(analytic: A, coanalytic: B) -> Result<Self>
    where
        A: IntoIterator<Item = (u32, Complex<T>)>,
        B: IntoIterator<Item = (u32, Complex<T>)>,
    {
        let mut f = Self::identity();
        for (m, c) in analytic {
            f.add_analytic(m, c)?;
        }
        for (m, c) in coanalytic {
            f.add_coanalytic(m, c)?;
        }
        Ok(f)
    }

    /// `z + c z^m`.
    pub fn monomial(m: u32, c: Complex<T>) -> Result<Self> {
        Self::new([(m, c)], [])
    }

    /// `z + c conj(z^m)`.
    pub fn anti_monomial(m: u32, c: Complex<T>) -> Result<Self> {
        Self::new([], [(m, c)])
    }

    pub fn add_analytic(&mut self, m: u32, c: Complex<T>) -> Result<()> {
        insert_term(&mut self.analytic, m, c)
    }

    pub fn add_coanalytic(&mut self, m: u32, c: Complex<T>) -> Result<()> {
        insert_term(&mut self.coanalytic, m, c)
    }

    pub fn analytic(&self) -> &BTreeMap<u32, Complex<T>> {
        &self.analytic
    }

    pub fn coanalytic(&self) -> &BTreeMap<u32, Complex<T>> {
        &self.coanalytic
    }

    pub fn is_identity(&self) -> bool {
        self.analytic.is_empty() && self.coanalytic.is_empty()
    }

    /// Largest stored degree, or 1 for the identity map.
    pub fn max_degree(&self) -> u32 {
        let a = self.analytic.keys().next_back().copied().unwrap_or(1);
        let b = self.coanalytic.keys().next_back().copied().unwrap_or(1);
        a.max(b)
    }

    /// Smallest stored degree, `None` for the identity map.
    pub fn min_degree(&self) -> Option<u32> {
        let a = self.analytic.keys().next().copied();
        let b = self.coanalytic.keys().next().copied();
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    /// `|a_m| + |b_m|` for every degree in the joint support, ascending.
    pub fn moduli(&self) -> BTreeMap<u32, (T, T)> {
        let mut out: BTreeMap<u32, (T, T)> = BTreeMap::new();
        for (&m, c) in &self.analytic {
            out.entry(m).or_insert((T::zero(), T::zero())).0 = c.norm();
        }
        for (&m, c) in &self.coanalytic {
            out.entry(m).or_insert((T::zero(), T::zero())).1 = c.norm();
        }
        out
    }

    /// `Σ (|a_m| + |b_m|)`.
    pub fn modulus_sum(&self) -> T {
        self.analytic
            .values()
            .chain(self.coanalytic.values())
            .fold(T::zero(), |acc, c| acc + c.norm())
    }

    /// Value `h(z) + conj(g(z))` on the closed unit disk.
    pub fn evaluate(&self, z: Complex<T>) -> Result<Complex<T>> {
        let slack = T::one() + T::epsilon() * T::lit(4.0);
        if !(z.norm() <= slack) {
            return Err(domain(format!(
                "evaluation point has modulus {} > 1",
                z.norm()
            )));
        }
        let h = z + power_sum(&self.analytic, z);
        let g = power_sum(&self.coanalytic, z);
        Ok(h + g.conj())
    }

    /// The Bohr majorant `r + Σ (|a_m| + |b_m|) r^m` for `r ∈ [0, 1]`.
    pub fn majorant(&self, r: T) -> Result<T> {
        if !(r >= T::zero() && r <= T::one()) {
            return Err(domain(format!("majorant radius {r} outside [0, 1]")));
        }
        let mut acc = r;
        let mut pow = r;
        let mut deg = 1;
        for (m, (a, b)) in self.moduli() {
            pow = pow * r.powi((m - deg) as i32);
            deg = m;
            acc = acc + (a + b) * pow;
        }
        Ok(acc)
    }

    /// `f(e^{2πij/n})` for `j = 0..n`.
    pub fn boundary_samples(&self, n: usize) -> Result<Vec<Complex<T>>> {
        if n < 4 {
            return Err(domain(format!("need at least 4 boundary samples, got {n}")));
        }
        let step = T::TAU() / T::from_usize_lossy(n);
        (0..n)
            .map(|j| {
                let z = Complex::from_polar(T::one(), step * T::from_usize_lossy(j));
                self.evaluate(z)
            })
            .collect()
    }

    /// Same map with every coefficient replaced by `φ(degree, coefficient)`,
    /// keeping the support invariants.
    pub fn map_coefficients<F>(&self, mut phi: F) -> Self
    where
        F: FnMut(u32, bool, Complex<T>) -> Complex<T>,
    {
        let mut out = Self::identity();
        for (&m, &c) in &self.analytic {
            let _ = out.add_analytic(m, phi(m, true, c));
        }
        for (&m, &c) in &self.coanalytic {
            let _ = out.add_coanalytic(m, phi(m, false, c));
        }
        out
    }
}

fn insert_term<T: Real>(map: &mut BTreeMap<u32, Complex<T>>, m: u32, c: Complex<T>) -> Result<()> {
    if m < 2 {
        return Err(domain(format!("coefficient degree {m} < 2")));
    }
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(domain(format!("non-finite coefficient at degree {m}")));
    }
    let sum = map.get(&m).copied().unwrap_or_else(Complex::default) + c;
    if sum == Complex::default() {
        map.remove(&m);
    } else {
        map.insert(m, sum);
    }
    Ok(())
}

fn power_sum<T: Real>(coeffs: &BTreeMap<u32, Complex<T>>, z: Complex<T>) -> Complex<T> {
    let mut acc = Complex::default();
    let mut pow = z;
    let mut deg = 1;
    for (&m, &c) in coeffs {
        pow = pow * z.powu(m - deg);
        deg = m;
        acc = acc + c * pow;
    }
    acc
}

#[derive(Serialize, Deserialize)]
struct RawMap<T> {
    #[serde(default = "BTreeMap::new")]
    a: BTreeMap<String, [T; 2]>,
    #[serde(default = "BTreeMap::new")]
    b: BTreeMap<String, [T; 2]>,
}

fn to_raw<T: Real>(map: &BTreeMap<u32, Complex<T>>) -> BTreeMap<String, [T; 2]> {
    map.iter().map(|(m, c)| (m.to_string(), [c.re, c.im])).collect()
}

fn from_raw<T: Real>(raw: BTreeMap<String, [T; 2]>) -> std::result::Result<Vec<(u32, Complex<T>)>, String> {
    raw.into_iter()
        .map(|(k, [re, im])| {
            k.parse::<u32>()
                .map(|m| (m, Complex::new(re, im)))
                .map_err(|_| format!("degree key {k:?} is not a decimal integer"))
        })
        .collect()
}

impl<T: Real> Serialize for HarmonicPolynomialMap<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawMap {
            a: to_raw(&self.analytic),
            b: to_raw(&self.coanalytic),
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for HarmonicPolynomialMap<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawMap::<T>::deserialize(d)?;
        let a = from_raw(raw.a).map_err(D::Error::custom)?;
        let b = from_raw(raw.b).map_err(D::Error::custom)?;
        Self::new(a, b).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Map;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn identity_evaluates_to_z() {
        let f = Map::identity();
        assert_eq!(f.evaluate(c(0.3, 0.4)).unwrap(), c(0.3, 0.4));
    }

    #[test]
    fn analytic_quadratic_at_one() {
        let f = Map::monomial(2, c(-0.5, 0.0)).unwrap();
        let w = f.evaluate(c(1.0, 0.0)).unwrap();
        assert!((w - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn coanalytic_term_is_conjugated() {
        let f = Map::anti_monomial(2, c(0.3, 0.0)).unwrap();
        let w = f.evaluate(c(0.0, 1.0)).unwrap();
        assert!((w - c(-0.3, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluation_outside_disk_rejected() {
        let f = Map::identity();
        assert!(matches!(f.evaluate(c(0.9, 0.9)), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn majorant_examples() {
        assert_eq!(Map::identity().majorant(0.7).unwrap(), 0.7);
        let f = Map::monomial(2, c(-0.5, 0.0)).unwrap();
        assert!((f.majorant(0.5).unwrap() - 0.625).abs() < 1e-15);
        let g = Map::new([(2, c(0.2, 0.0))], [(3, c(0.1, 0.0))]).unwrap();
        assert!((g.majorant(1.0).unwrap() - 1.3).abs() < 1e-15);
        assert!(f.majorant(1.5).is_err());
        assert!(f.majorant(-0.1).is_err());
    }

    #[test]
    fn boundary_samples_of_identity() {
        let s = Map::identity().boundary_samples(4).unwrap();
        let expect = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (w, e) in s.iter().zip(expect) {
            assert!((w - e).norm() < 1e-15);
        }
    }

    #[test]
    fn boundary_samples_precondition() {
        let f = Map::monomial(2, c(-0.5, 0.0)).unwrap();
        assert!(f.boundary_samples(2).is_err());
        let s = f.boundary_samples(4).unwrap();
        assert!((s[0] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn support_invariants() {
        assert!(Map::monomial(1, c(1.0, 0.0)).is_err());
        let f = Map::new([(3, c(0.0, 0.0)), (4, c(0.1, 0.0))], []).unwrap();
        assert_eq!(f.analytic().len(), 1);
        assert_eq!(f.max_degree(), 4);
        assert_eq!(f.min_degree(), Some(4));
        let mut g = Map::monomial(2, c(0.5, 0.0)).unwrap();
        g.add_analytic(2, c(-0.5, 0.0)).unwrap();
        assert!(g.is_identity());
        assert_eq!(g.max_degree(), 1);
    }

    #[test]
    fn json_shape() {
        let f = Map::new([(2, c(-0.25, 0.0))], [(3, c(0.0, 0.5))]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"a":{"2":[-0.25,0.0]},"b":{"3":[0.0,0.5]}}"#);
        let back: Map = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad: std::result::Result<Map, _> = serde_json::from_str(r#"{"a":{"1":[1,0]}}"#);
        assert!(bad.is_err());
        let empty: Map = serde_json::from_str("{}").unwrap();
        assert!(empty.is_identity());
    }

    #[test]
    fn works_in_single_precision() {
        let f = HarmonicPolynomialMap::<f32>::monomial(2, Complex::new(-0.5, 0.0)).unwrap();
        assert!((f.majorant(0.5).unwrap() - 0.625).abs() < 1e-6);
    }
}
