//! Weighted-budget classes and the catalog of concrete coefficient classes.
//!
//! A [`ClassSpec`] describes the family of maps `f = h + conj(g)` whose
//! coefficients satisfy `Σ_{m≥k} (γ_m |a_m| + δ_m |b_m|) ≤ M`, with every
//! nonzero weight bounded below by `α_k = min{γ_k, δ_k}`. A zero weight means
//! the corresponding coefficient is not allowed at all, which is how the
//! analytic-only classes are expressed.
//!
//! [`ClassInstance`] enumerates the concrete classes whose coefficient
//! conditions fit this template and binds each to its weights and budget.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeffs::HarmonicPolynomialMap;
use crate::error::{domain, invalid, Error, Result};
use crate::scalar::Real;

/// Degrees scanned when validating the weight lower bound.
pub const SCAN_HORIZON: u32 = 10_000;

/// Weight sequence `m ↦ (γ_m, δ_m)`.
pub type WeightFn<T> = Arc<dyn Fn(u32) -> (T, T) + Send + Sync>;

/// General weighted-budget class `𝒮⁰(k, M)`.
#[derive(Clone)]
pub struct ClassSpec<T> {
    start_index: u32,
    budget: T,
    weight_fn: WeightFn<T>,
    alpha: T,
}

impl<T: Real> fmt::Debug for ClassSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClassSpec")
            .field("start_index", &self.start_index)
            .field("budget", &self.budget)
            .field("alpha", &self.alpha)
            .finish_non_exhaustive()
    }
}

impl<T: Real> ClassSpec<T> {
    /// Validates and builds a class. The weight lower bound is checked on
    /// `k..=SCAN_HORIZON`; beyond that the caller's weight function is trusted.
    pub fn new(start_index: u32, budget: T, weight_fn: WeightFn<T>) -> Result<Self> {
        Self::with_horizon(start_index, budget, weight_fn, SCAN_HORIZON)
    }

    pub fn with_horizon(
        start_index: u32,
        budget: T,
        weight_fn: WeightFn<T>,
        horizon: u32,
    ) -> Result<Self> {
        if start_index < 2 {
            return Err(invalid(format!("start index {start_index} < 2")));
        }
        if !(budget > T::zero() && budget.is_finite()) {
            return Err(invalid(format!("budget M = {budget} must be positive and finite")));
        }
        let (gk, dk) = weight_fn(start_index);
        let alpha = min_nonzero(gk, dk)
            .ok_or_else(|| invalid(format!("weights at m = {start_index} are both zero")))?;
        for m in start_index..=horizon.max(start_index) {
            let (g, d) = weight_fn(m);
            for (name, w) in [("gamma", g), ("delta", d)] {
                if w.is_nan() || w < T::zero() {
                    return Err(invalid(format!("{name}_{m} = {w} is not a nonnegative weight")));
                }
                if w != T::zero() && w < alpha {
                    return Err(invalid(format!(
                        "{name}_{m} = {w} falls below alpha_{start_index} = {alpha}"
                    )));
                }
            }
        }
        Ok(Self {
            start_index,
            budget,
            weight_fn,
            alpha,
        })
    }

    pub fn start_index(&self) -> u32 {
        self.start_index
    }

    pub fn budget(&self) -> T {
        self.budget
    }

    /// `α_k`, the smallest nonzero weight at the start index.
    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// `t = M / α_k`, the only quantity the radii depend on.
    pub fn ratio(&self) -> T {
        self.budget / self.alpha
    }

    /// `M ≥ α_k`: the covering disk is empty and the Bohr radius collapses.
    pub fn is_degenerate(&self) -> bool {
        self.budget >= self.alpha
    }

    pub fn weights(&self, m: u32) -> Result<(T, T)> {
        if m < self.start_index {
            return Err(domain(format!("degree {m} below start index {}", self.start_index)));
        }
        Ok((self.weight_fn)(m))
    }

    pub fn allows_coanalytic(&self, m: u32) -> bool {
        m >= self.start_index && (self.weight_fn)(m).1 > T::zero()
    }
}

fn min_nonzero<T: Real>(a: T, b: T) -> Option<T> {
    match (a > T::zero(), b > T::zero()) {
        (true, true) => Some(a.min(b)),
        (true, false) => Some(a),
        (false, true) => Some(b),
        (false, false) => None,
    }
}

/// Symmetric q-analogue `[m]_q = (q^m − q^{−m}) / (q − q^{−1})`.
///
/// Evaluated as `q^{1−m} (1 − q^{2m}) / (1 − q²)` so that no difference of
/// large terms is formed. Saturates to `+∞` once `q^{1−m}` overflows.
pub fn q_bracket<T: Real>(m: u32, q: T) -> Result<T> {
    if !(q > T::zero() && q < T::one()) {
        return Err(domain(format!("q = {q} outside (0, 1)")));
    }
    if m < 1 {
        return Err(domain("q-bracket needs m >= 1"));
    }
    let m_i = m as i32;
    let num = T::one() - q.powi(2 * m_i);
    let den = T::one() - q * q;
    Ok(q.powi(1 - m_i) * (num / den))
}

/// Catalog entry: a named class together with its raw parameters.
///
/// The Janowski classes carry `(C, D)`, the conic q-starlike class carries
/// the conic order `k`, `q` and `α`; the negative-coefficient classes carry `α`
/// and, for the general one, the explicit weight table `g_2, g_3, …` (the
/// last entry is repeated for higher degrees).
#[derive(Clone, Debug, PartialEq)]
pub enum ClassInstance<T> {
    SStarStarTau { c: T, d: T },
    SStarTau { c: T, d: T },
    SConvTau { c: T, d: T },
    FH0 { lambda: T },
    KSTq { k: T, q: T, alpha: T },
    RH0 { beta: T },
    TGeneral { alpha: T, g: Vec<T> },
    TStarlike { alpha: T },
    TConvex { alpha: T },
    TM { mu: T, alpha: T },
    TN { mu: T, alpha: T },
}

/// Class names accepted by [`ClassInstance::from_params`].
pub const CLASS_NAMES: [&str; 11] = [
    "sstarstar_tau",
    "sstar_tau",
    "sconv_tau",
    "fh0",
    "kstq",
    "rh0",
    "t_general",
    "t_starlike",
    "t_convex",
    "tm",
    "tn",
];

/// Parameter value as read from JSON or the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Scalar(f64),
    List(Vec<f64>),
}

/// Outcome of [`ClassInstance::validate_params`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamValidation {
    pub accepted: bool,
    /// `M ≥ α₂`; only meaningful when accepted.
    pub degenerate: bool,
    pub reason: Option<String>,
}

/// Which part of the map carries the extremal term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Analytic,
    AntiAnalytic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Result of testing the weighted coefficient sum against the budget.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipVerdict<T> {
    pub member: bool,
    pub weighted_sum: T,
    /// `M − weighted_sum`.
    pub margin: T,
}

fn janowski_ok<T: Real>(c: T, d: T) -> Option<String> {
    // −D ≤ C < D ≤ 1, taken literally.
    if -d <= c && c < d && d <= T::one() {
        None
    } else {
        Some(format!("Janowski parameters need -D <= C < D <= 1, got C = {c}, D = {d}"))
    }
}

fn odd_part<T: Real>(m: u32) -> T {
    // (1 − (−1)^m) / 2
    if m % 2 == 1 {
        T::one()
    } else {
        T::zero()
    }
}

impl<T: Real> ClassInstance<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SStarStarTau { .. } => "sstarstar_tau",
            Self::SStarTau { .. } => "sstar_tau",
            Self::SConvTau { .. } => "sconv_tau",
            Self::FH0 { .. } => "fh0",
            Self::KSTq { .. } => "kstq",
            Self::RH0 { .. } => "rh0",
            Self::TGeneral { .. } => "t_general",
            Self::TStarlike { .. } => "t_starlike",
            Self::TConvex { .. } => "t_convex",
            Self::TM { .. } => "tm",
            Self::TN { .. } => "tn",
        }
    }

    /// Parameters in canonical order, with the names used in JSON and on the
    /// command line.
    pub fn params(&self) -> Vec<(&'static str, ParamValue)> {
        let s = |x: T| ParamValue::Scalar(x.to_f64_lossy());
        match self {
            Self::SStarStarTau { c, d } | Self::SStarTau { c, d } | Self::SConvTau { c, d } => {
                vec![("C", s(*c)), ("D", s(*d))]
            }
            Self::FH0 { lambda } => vec![("lambda", s(*lambda))],
            Self::KSTq { k, q, alpha } => vec![("k", s(*k)), ("q", s(*q)), ("alpha", s(*alpha))],
            Self::RH0 { beta } => vec![("beta", s(*beta))],
            Self::TGeneral { alpha, g } => {
                if g.len() == 1 {
                    vec![("alpha", s(*alpha)), ("g2", s(g[0]))]
                } else {
                    let list = g.iter().map(|x| x.to_f64_lossy()).collect();
                    vec![("alpha", s(*alpha)), ("g", ParamValue::List(list))]
                }
            }
            Self::TStarlike { alpha } | Self::TConvex { alpha } => vec![("alpha", s(*alpha))],
            Self::TM { mu, alpha } | Self::TN { mu, alpha } => {
                vec![("mu", s(*mu)), ("alpha", s(*alpha))]
            }
        }
    }

    /// Builds an instance from a class name and named parameters. Unknown
    /// class names, unknown or missing parameters are errors; parameter
    /// ranges are not checked here (see [`Self::validate_params`]).
    pub fn from_params(class: &str, params: &BTreeMap<String, ParamValue>) -> Result<Self> {
        let expected: &[&str] = match class {
            "sstarstar_tau" | "sstar_tau" | "sconv_tau" => &["C", "D"],
            "fh0" => &["lambda"],
            "kstq" => &["k", "q", "alpha"],
            "rh0" => &["beta"],
            "t_general" => &["alpha", "g2", "g"],
            "t_starlike" | "t_convex" => &["alpha"],
            "tm" | "tn" => &["mu", "alpha"],
            other => {
                return Err(invalid(format!(
                    "unknown class {other:?}; valid classes: {}",
                    CLASS_NAMES.join(", ")
                )))
            }
        };
        if let Some(extra) = params.keys().find(|k| !expected.contains(&k.as_str())) {
            return Err(invalid(format!(
                "unknown parameter {extra:?} for class {class}; expected {}",
                expected.join(", ")
            )));
        }
        let get = |name: &str| -> Result<T> {
            match params.get(name) {
                Some(ParamValue::Scalar(x)) => Ok(T::lit(*x)),
                Some(ParamValue::List(_)) => {
                    Err(invalid(format!("parameter {name} must be a number")))
                }
                None => Err(invalid(format!("missing parameter {name} for class {class}"))),
            }
        };
        Ok(match class {
            "sstarstar_tau" => Self::SStarStarTau { c: get("C")?, d: get("D")? },
            "sstar_tau" => Self::SStarTau { c: get("C")?, d: get("D")? },
            "sconv_tau" => Self::SConvTau { c: get("C")?, d: get("D")? },
            "fh0" => Self::FH0 { lambda: get("lambda")? },
            "kstq" => Self::KSTq { k: get("k")?, q: get("q")?, alpha: get("alpha")? },
            "rh0" => Self::RH0 { beta: get("beta")? },
            "t_general" => {
                let g = match (params.get("g"), params.get("g2")) {
                    (Some(ParamValue::List(v)), None) => v.iter().map(|&x| T::lit(x)).collect(),
                    (None, Some(ParamValue::Scalar(x))) => vec![T::lit(*x)],
                    (Some(_), Some(_)) => return Err(invalid("give either g or g2, not both")),
                    _ => return Err(invalid("t_general needs g2 (number) or g (list)")),
                };
                Self::TGeneral { alpha: get("alpha")?, g }
            }
            "t_starlike" => Self::TStarlike { alpha: get("alpha")? },
            "t_convex" => Self::TConvex { alpha: get("alpha")? },
            "tm" => Self::TM { mu: get("mu")?, alpha: get("alpha")? },
            "tn" => Self::TN { mu: get("mu")?, alpha: get("alpha")? },
            _ => unreachable!(),
        })
    }

    fn range_violation(&self) -> Option<String> {
        let zero = T::zero();
        let one = T::one();
        let finite = self
            .params()
            .iter()
            .all(|(_, v)| match v {
                ParamValue::Scalar(x) => x.is_finite(),
                ParamValue::List(l) => l.iter().all(|x| x.is_finite()),
            });
        if !finite {
            return Some("parameters must be finite".into());
        }
        match self {
            Self::SStarStarTau { c, d } | Self::SStarTau { c, d } | Self::SConvTau { c, d } => {
                janowski_ok(*c, *d)
            }
            Self::FH0 { lambda } => (!(*lambda > zero && *lambda <= one))
                .then(|| format!("lambda = {lambda} outside (0, 1]")),
            Self::KSTq { k, q, alpha } => {
                if !(*k >= zero) {
                    Some(format!("conic order k = {k} must be >= 0"))
                } else if !(*q > zero && *q < one) {
                    Some(format!("q = {q} outside (0, 1)"))
                } else if !(*alpha >= zero && *alpha < one) {
                    Some(format!("alpha = {alpha} outside [0, 1)"))
                } else {
                    None
                }
            }
            Self::RH0 { beta } => (!(*beta > one)).then(|| format!("beta = {beta} must exceed 1")),
            Self::TGeneral { alpha, g } => {
                if !(*alpha < one) {
                    Some(format!("alpha = {alpha} must be < 1"))
                } else if g.is_empty() {
                    Some("weight table g is empty".into())
                } else if !(g[0] > zero) {
                    Some(format!("g_2 = {} must be positive", g[0]))
                } else if let Some((i, w)) = g.iter().enumerate().find(|(_, w)| !(**w >= g[0])) {
                    Some(format!("g_{} = {w} falls below g_2 = {}", i + 2, g[0]))
                } else {
                    None
                }
            }
            Self::TStarlike { alpha } | Self::TConvex { alpha } => (!(*alpha >= zero
                && *alpha < one))
                .then(|| format!("alpha = {alpha} outside [0, 1)")),
            Self::TM { mu, alpha } | Self::TN { mu, alpha } => {
                if !(*mu >= zero && *mu <= one) {
                    Some(format!("mu = {mu} outside [0, 1]"))
                } else if !(*alpha > one) {
                    Some(format!("alpha = {alpha} must exceed 1"))
                } else {
                    None
                }
            }
        }
    }

    /// Checks parameter ranges and flags degenerate instances (`M ≥ α₂`).
    pub fn validate_params(&self) -> ParamValidation {
        match self.range_violation() {
            Some(reason) => ParamValidation {
                accepted: false,
                degenerate: false,
                reason: Some(reason),
            },
            None => {
                let degenerate = self.raw_budget() >= self.raw_alpha_min();
                ParamValidation {
                    accepted: true,
                    degenerate,
                    reason: degenerate.then(|| {
                        format!(
                            "degenerate: M = {} >= alpha_2 = {}",
                            self.raw_budget(),
                            self.raw_alpha_min()
                        )
                    }),
                }
            }
        }
    }

    fn ensure_valid(&self) -> Result<()> {
        match self.range_violation() {
            Some(reason) => Err(Error::InvalidParams(reason)),
            None => Ok(()),
        }
    }

    /// Weight pair `(γ_m, δ_m)` for `m ≥ 2`. For the analytic-only classes
    /// `δ_m = 0`.
    ///
    /// Each family is nondecreasing in `m` from `m = 2` on: the Janowski
    /// weights grow like `m(1 + D)` with an odd-degree correction bounded by
    /// `1 + C ≤ 1 + D`; the q-bracket is increasing; the `TM`/`TN`
    /// weights have slope `1 ± 1 ≥ 0` in `m`.
    pub fn weights(&self, m: u32) -> Result<(T, T)> {
        self.ensure_valid()?;
        if m < 2 {
            return Err(domain(format!("degree {m} below start index 2")));
        }
        Ok(self.raw_weights(m))
    }

    fn raw_weights(&self, m: u32) -> (T, T) {
        let one = T::one();
        let two = T::lit(2.0);
        let mf = T::lit(m as f64);
        match self {
            Self::SStarStarTau { c, d } => {
                let base = mf * (one + *d);
                let corr = (one + *c) * odd_part::<T>(m);
                (base - corr, base + corr)
            }
            Self::SStarTau { c, d } => {
                let base = mf * (one + *d);
                (base - (one + *c), base + (one + *c))
            }
            Self::SConvTau { c, d } => {
                let base = mf * (one + *d);
                (mf * (base - (one + *c)), mf * (base + (one + *c)))
            }
            Self::FH0 { .. } | Self::RH0 { .. } => (mf, mf),
            Self::KSTq { k, q, alpha } => {
                let br = q_bracket(m, *q).unwrap_or(T::infinity());
                (br * (*k + one) - (*k + *alpha), T::zero())
            }
            Self::TGeneral { g, .. } => {
                let i = (m as usize - 2).min(g.len() - 1);
                (g[i], T::zero())
            }
            Self::TStarlike { alpha } => (mf - *alpha, T::zero()),
            Self::TConvex { alpha } => (mf * (mf - *alpha), T::zero()),
            Self::TM { mu, alpha } => ((mf - *mu) + (mf + *mu - two * *alpha).abs(), T::zero()),
            Self::TN { mu, alpha } => (
                mf * (mf - *mu + one + (mf + *mu - two * *alpha).abs()),
                T::zero(),
            ),
        }
    }

    /// Budget `M` on the right-hand side of the coefficient condition.
    pub fn budget(&self) -> Result<T> {
        self.ensure_valid()?;
        Ok(self.raw_budget())
    }

    fn raw_budget(&self) -> T {
        let one = T::one();
        match self {
            Self::SStarStarTau { c, d } | Self::SStarTau { c, d } | Self::SConvTau { c, d } => {
                *d - *c
            }
            Self::FH0 { lambda } => *lambda,
            Self::KSTq { alpha, .. }
            | Self::TGeneral { alpha, .. }
            | Self::TStarlike { alpha }
            | Self::TConvex { alpha } => one - *alpha,
            Self::RH0 { beta } => *beta - one,
            Self::TM { alpha, .. } | Self::TN { alpha, .. } => T::lit(2.0) * (*alpha - one),
        }
    }

    /// `α₂`: the smaller nonzero weight at degree 2.
    pub fn alpha_min(&self) -> Result<T> {
        self.ensure_valid()?;
        Ok(self.raw_alpha_min())
    }

    fn raw_alpha_min(&self) -> T {
        let (g, d) = self.raw_weights(2);
        min_nonzero(g, d).unwrap_or(T::zero())
    }

    /// `t = M / α₂`.
    pub fn ratio(&self) -> Result<T> {
        Ok(self.budget()? / self.alpha_min()?)
    }

    /// `true` when every member has `g ≡ 0`.
    pub fn is_analytic_only(&self) -> bool {
        self.raw_weights(2).1 == T::zero()
    }

    /// The general class with `k = 2`, `M = budget`, weights from the catalog.
    pub fn to_spec(&self) -> Result<ClassSpec<T>> {
        self.ensure_valid()?;
        let me = self.clone();
        let weight_fn: WeightFn<T> = Arc::new(move |m| me.raw_weights(m));
        ClassSpec::new(2, self.raw_budget(), weight_fn)
    }

    /// The class's parameters rendered as `name=value` pairs.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .params()
            .into_iter()
            .map(|(k, v)| match v {
                ParamValue::Scalar(x) => format!("{k}={x}"),
                ParamValue::List(l) => format!(
                    "{k}=[{}]",
                    l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
                ),
            })
            .collect();
        format!("{}({})", self.name(), parts.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    class: String,
    #[serde(default)]
    params: BTreeMap<String, ParamValue>,
}

impl<T: Real> Serialize for ClassInstance<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawInstance {
            class: self.name().to_string(),
            params: self
                .params()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for ClassInstance<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawInstance::deserialize(d)?;
        Self::from_params(&raw.class, &raw.params).map_err(D::Error::custom)
    }
}

/// Weighted coefficient sum against the budget, inclusive with an absolute
/// slack of `1e-12` (widened for `f32`). A coefficient whose weight is zero is
/// not admitted by the class and makes the sum infinite.
pub fn membership_check<T: Real>(
    spec: &ClassSpec<T>,
    f: &HarmonicPolynomialMap<T>,
) -> Result<MembershipVerdict<T>> {
    if let Some(lo) = f.min_degree() {
        if lo < spec.start_index() {
            return Err(domain(format!(
                "map has a coefficient at degree {lo} below start index {}",
                spec.start_index()
            )));
        }
    }
    let mut sum = T::zero();
    for (m, (a, b)) in f.moduli() {
        let (g, d) = spec.weights(m)?;
        for (w, c) in [(g, a), (d, b)] {
            if c > T::zero() {
                sum = sum + if w > T::zero() { w * c } else { T::infinity() };
            }
        }
    }
    let margin = spec.budget() - sum;
    Ok(MembershipVerdict {
        member: margin >= -T::floor_tol(1e-12),
        weighted_sum: sum,
        margin,
    })
}

/// `z ± (M/α_k) z^k` or `z ± (M/α_k) conj(z^k)`.
pub fn extremal<T: Real>(
    spec: &ClassSpec<T>,
    variant: Variant,
    sign: Sign,
) -> Result<HarmonicPolynomialMap<T>> {
    let k = spec.start_index();
    let t = spec.ratio();
    let c = Complex::new(if sign == Sign::Minus { -t } else { t }, T::zero());
    match variant {
        Variant::Analytic => HarmonicPolynomialMap::monomial(k, c),
        Variant::AntiAnalytic => {
            if !spec.allows_coanalytic(k) {
                return Err(Error::Unsupported(
                    "anti-analytic extremal requested for an analytic-only class".into(),
                ));
            }
            HarmonicPolynomialMap::anti_monomial(k, c)
        }
    }
}

/// Random member with a seeded support, magnitudes and phases, rescaled to
/// land inside the budget.
pub fn random_member<T: Real>(
    spec: &ClassSpec<T>,
    max_degree: u32,
    seed: u64,
) -> Result<HarmonicPolynomialMap<T>> {
    random_member_scaled(spec, max_degree, seed, T::one())
}

/// [`random_member`] with the budget multiplied by `scale ∈ [0, 1]`; a scale
/// of zero yields the identity map.
///
/// Degrees in `k..=max_degree` are kept with probability ½ (at least one is
/// kept). Each kept degree gets a uniform raw magnitude and phase for `a_m`,
/// and for `b_m` when the class admits it. The whole map is then scaled so
/// the weighted sum equals `u · scale · M`, where `u` is uniform on `[0, 1]`
/// except that one draw in four puts the map exactly on the budget boundary.
pub fn random_member_scaled<T: Real>(
    spec: &ClassSpec<T>,
    max_degree: u32,
    seed: u64,
    scale: T,
) -> Result<HarmonicPolynomialMap<T>> {
    let k = spec.start_index();
    if max_degree < k {
        return Err(domain(format!("max_degree {max_degree} < start index {k}")));
    }
    if !(scale >= T::zero() && scale <= T::one()) {
        return Err(domain(format!("budget scale {scale} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees: Vec<u32> = (k..=max_degree).filter(|_| rng.gen_bool(0.5)).collect();
    if degrees.is_empty() {
        degrees.push(rng.gen_range(k..=max_degree));
    }
    let mut raw: Vec<(u32, bool, f64, f64)> = Vec::new();
    let mut weighted = 0.0;
    for &m in &degrees {
        let (g, d) = spec.weights(m)?;
        let parts = [(true, g), (false, d)];
        for (analytic, w) in parts {
            if !(w > T::zero()) || !w.is_finite() {
                continue;
            }
            let mag: f64 = rng.gen_range(0.0..1.0);
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            weighted += w.to_f64_lossy() * mag;
            raw.push((m, analytic, mag, phase));
        }
    }
    let u: f64 = if rng.gen_bool(0.25) { 1.0 } else { rng.gen_range(0.0..=1.0) };
    let mut f = HarmonicPolynomialMap::identity();
    if weighted <= 0.0 {
        return Ok(f);
    }
    let factor = u * scale.to_f64_lossy() * spec.budget().to_f64_lossy() / weighted;
    for (m, analytic, mag, phase) in raw {
        let c = Complex::from_polar(T::lit(mag * factor), T::lit(phase));
        if analytic {
            f.add_analytic(m, c)?;
        } else {
            f.add_coanalytic(m, c)?;
        }
    }
    Ok(f)
}
