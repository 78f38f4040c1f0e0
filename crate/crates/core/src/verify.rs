//! Runnable checks of the growth, covering, Bohr and sharpness statements
//! over the class catalog, random members and the `W⁰(μ, ρ)` extremal maps.
//!
//! Every check returns a [`VerificationReport`]. A report lists at most one
//! failure per (map, check): the worst violation found on the sample grid.
//! Failures carry the seed that regenerates the offending map.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_complex::Complex;
use serde::Serialize;

use crate::classes::{
    extremal, membership_check, random_member, ClassInstance, ClassSpec, Sign, Variant,
};
use crate::coeffs::HarmonicPolynomialMap;
use crate::error::{invalid, Result};
use crate::oracle::{boundary_distance, DEFAULT_REFINE_TOL, DEFAULT_SAMPLES};
use crate::scalar::Real;
use crate::solver::{covering_radius, growth_envelope, spec_bohr_radius};
use crate::wclass::{
    w_bohr_radius, w_extremal, w_growth_lower, w_majorant_series, w_rhs, w_truncation_tail,
    WParams,
};

/// Slack on growth and Bohr comparisons.
pub const CHECK_SLACK: f64 = 1e-10;
/// Aggregation slack added to the sharpness tolerance.
pub const SHARPNESS_SLACK: f64 = 1e-9;
pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_MAX_DEGREE: u32 = 12;
pub const DEFAULT_W_DEGREE: u32 = 512;

/// Something whose radius claims can be checked: a catalog class or a `W⁰(μ, ρ)`
/// parameter pair.
#[derive(Clone, Debug, PartialEq)]
pub enum Target<T> {
    Class(ClassInstance<T>),
    W(WParams<T>),
}

impl<T: Real> Target<T> {
    pub fn label(&self) -> String {
        match self {
            Target::Class(c) => c.label(),
            Target::W(p) => format!("w(mu={},rho={})", p.mu, p.rho),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Growth,
    Bohr,
    Sharpness,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Growth, Suite::Bohr, Suite::Sharpness];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Growth => "growth",
            Suite::Bohr => "bohr",
            Suite::Sharpness => "sharpness",
        }
    }

    /// Parses `all | growth | bohr | sharpness`.
    pub fn parse_selection(s: &str) -> Result<Vec<Suite>> {
        match s {
            "all" => Ok(Self::ALL.to_vec()),
            "growth" => Ok(vec![Suite::Growth]),
            "bohr" => Ok(vec![Suite::Bohr]),
            "sharpness" => Ok(vec![Suite::Sharpness]),
            other => Err(invalid(format!(
                "unknown suite {other:?}; expected all, growth, bohr or sharpness"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub seed: u64,
    pub witness: String,
    pub quantity: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`; negative for a violated `lhs ≤ rhs`.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub skipped: Vec<String>,
    /// Wall time; excluded from serialized output so reports stay reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            cases: 0,
            failures: Vec::new(),
            skipped: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn absorb(&mut self, other: VerificationReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self.skipped.extend(other.skipped);
        self.elapsed += other.elapsed;
    }

    /// Human-readable summary. Contains no timing information.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "suite {}: {status} ({} cases, {} failures, {} skipped)",
            self.suite,
            self.cases,
            self.failures.len(),
            self.skipped.len()
        );
        for f in &self.failures {
            let _ = writeln!(
                out,
                "  FAIL {} [{} seed={}] {}: lhs={:.17e} rhs={:.17e} margin={:.3e}",
                f.instance, f.witness, f.seed, f.quantity, f.lhs, f.rhs, f.margin
            );
        }
        for s in &self.skipped {
            let _ = writeln!(out, "  skip {s}");
        }
        out
    }
}

/// Tracks the worst margin of a family of `lhs ≤ rhs` comparisons.
struct Worst {
    quantity: &'static str,
    lhs: f64,
    rhs: f64,
    margin: f64,
}

impl Worst {
    fn none() -> Self {
        Self {
            quantity: "",
            lhs: 0.0,
            rhs: 0.0,
            margin: f64::INFINITY,
        }
    }

    fn observe<T: Real>(&mut self, quantity: &'static str, lhs: T, rhs: T) {
        let (l, r) = (lhs.to_f64_lossy(), rhs.to_f64_lossy());
        let m = if l.is_nan() || r.is_nan() { f64::NEG_INFINITY } else { r - l };
        if m < self.margin {
            *self = Self {
                quantity,
                lhs: l,
                rhs: r,
                margin: m,
            };
        }
    }

    fn into_failure(self, instance: &str, witness: &str, seed: u64) -> Option<Failure> {
        (self.margin < 0.0).then(|| Failure {
            instance: instance.to_string(),
            seed,
            witness: witness.to_string(),
            quantity: self.quantity.to_string(),
            lhs: self.lhs,
            rhs: self.rhs,
            margin: self.margin,
        })
    }
}

fn single(suite: Suite, failure: Option<Failure>) -> VerificationReport {
    let mut r = VerificationReport::new(suite.name());
    r.cases = 1;
    r.failures.extend(failure);
    r
}

fn skipped(suite: Suite, why: String) -> VerificationReport {
    let mut r = VerificationReport::new(suite.name());
    r.skipped.push(why);
    r
}

fn modulus<T: Real>(f: &HarmonicPolynomialMap<T>, r: T, theta: T) -> T {
    f.evaluate(Complex::from_polar(r, theta))
        .map(|w| w.norm())
        .unwrap_or(T::nan())
}

/// Growth envelope on an `n_r × n_theta` polar grid.
///
/// Catalog classes: `max(r − t r², 0) − ε ≤ |f(re^{iθ})| ≤ r + t r² + ε` for
/// `r = i/n_r`. `W⁰(μ, ρ)`: the series lower bound only, on `r = i/(n_r + 1)`,
/// widened by the certified tails.
pub fn check_growth<T: Real>(
    target: &Target<T>,
    f: &HarmonicPolynomialMap<T>,
    n_r: usize,
    n_theta: usize,
    witness: &str,
    seed: u64,
) -> Result<VerificationReport> {
    let eps = T::lit(CHECK_SLACK);
    let theta_step = T::TAU() / T::from_usize_lossy(n_theta.max(1));
    let mut worst = Worst::none();
    match target {
        Target::Class(inst) => {
            let t = inst.ratio()?;
            for i in 1..=n_r {
                let r = T::from_usize_lossy(i) / T::from_usize_lossy(n_r);
                let (lo, hi) = growth_envelope(t, r)?;
                let lo = lo.max(T::zero());
                for j in 0..n_theta {
                    let m = modulus(f, r, theta_step * T::from_usize_lossy(j));
                    worst.observe("growth_upper", m, hi + eps);
                    worst.observe("growth_lower", lo - eps, m);
                }
            }
        }
        Target::W(p) => {
            let trunc_degree = f.max_degree().max(2);
            for i in 1..=n_r {
                let r = T::from_usize_lossy(i) / T::from_usize_lossy(n_r + 1);
                let lower = w_growth_lower(r, p)?;
                let slack = lower.tail_bound + w_truncation_tail(p, trunc_degree, r)? + eps;
                for j in 0..n_theta {
                    let m = modulus(f, r, theta_step * T::from_usize_lossy(j));
                    worst.observe("w_growth_lower", lower.value - slack, m);
                }
            }
        }
    }
    Ok(single(Suite::Growth, worst.into_failure(&target.label(), witness, seed)))
}

/// Bohr chain on `n_r` radii in `[0, r*]`:
/// `majorant(f, r) ≤ r + t r² + ε` and `majorant(f, r) ≤ 1 − t + ε` for
/// catalog classes; `majorant(f, r) ≤ w_rhs + ε` for `W⁰(μ, ρ)`.
pub fn check_bohr<T: Real>(
    target: &Target<T>,
    f: &HarmonicPolynomialMap<T>,
    n_r: usize,
    witness: &str,
    seed: u64,
) -> Result<VerificationReport> {
    let eps = T::lit(CHECK_SLACK);
    let n_r = n_r.max(2);
    let mut worst = Worst::none();
    match target {
        Target::Class(inst) => {
            let spec = inst.to_spec()?;
            let radius = spec_bohr_radius(&spec, T::lit(1e-14))?;
            if radius.is_degenerate() {
                return Ok(skipped(
                    Suite::Bohr,
                    format!("{}: degenerate instance, no Bohr radius", target.label()),
                ));
            }
            let t = spec.ratio();
            let cover = covering_radius(t)?;
            for i in 0..n_r {
                let r = radius.value * T::from_usize_lossy(i) / T::from_usize_lossy(n_r - 1);
                let maj = f.majorant(r)?;
                worst.observe("bohr_chain", maj, r + t * r * r + eps);
                worst.observe("bohr_covering", maj, cover + eps);
            }
        }
        Target::W(p) => {
            let radius = w_bohr_radius(p)?;
            let rhs = w_rhs(p)?;
            for i in 0..n_r {
                let r = radius.value * T::from_usize_lossy(i) / T::from_usize_lossy(n_r - 1);
                let maj = f.majorant(r)?;
                let series = w_majorant_series(r, p)?;
                worst.observe("w_bohr_chain", maj, r + series.value + series.tail_bound + eps);
                worst.observe("w_bohr_rhs", maj, rhs.value + rhs.tail_bound + radius.residual + eps);
            }
        }
    }
    Ok(single(Suite::Bohr, worst.into_failure(&target.label(), witness, seed)))
}

/// Sharpness of the Bohr radius on the extremal witness.
///
/// (a) `|majorant(f, r*) − d(f)| ≤ tol_total` and (b)
/// `majorant(f, r* + ε) > d(f) + tol_total`, where `d(f)` is the oracle's
/// minimum boundary modulus and `tol_total = refine_tol + series tails +
/// 1e-9`.
pub fn check_sharpness<T: Real>(target: &Target<T>, epsilon: T) -> Result<VerificationReport> {
    check_sharpness_truncated(target, epsilon, DEFAULT_W_DEGREE)
}

/// [`check_sharpness`] with the `W⁰(μ, ρ)` extremal truncated at `w_degree`.
pub fn check_sharpness_truncated<T: Real>(
    target: &Target<T>,
    epsilon: T,
    w_degree: u32,
) -> Result<VerificationReport> {
    let refine = T::lit(DEFAULT_REFINE_TOL);
    let (f, r_star, tails, witness) = match target {
        Target::Class(inst) => {
            let spec = inst.to_spec()?;
            let radius = spec_bohr_radius(&spec, T::lit(1e-14))?;
            if radius.is_degenerate() {
                return Ok(skipped(
                    Suite::Sharpness,
                    format!("{}: degenerate instance, sharpness not defined", target.label()),
                ));
            }
            (sharp_witness(&spec)?, radius.value, T::zero(), "extremal")
        }
        Target::W(p) => {
            let radius = w_bohr_radius(p)?;
            let f = w_extremal(p, w_degree)?;
            let trunc = w_truncation_tail(p, w_degree, radius.value)?;
            (f, radius.value, radius.series_tail_bound + radius.residual + trunc, "w_extremal")
        }
    };
    if !(epsilon > T::zero() && r_star + epsilon <= T::one()) {
        return Ok(skipped(
            Suite::Sharpness,
            format!("{}: r* + epsilon leaves the unit disk", target.label()),
        ));
    }
    let dist = boundary_distance(&f, DEFAULT_SAMPLES, refine)?.value;
    let tol_total = refine + tails + T::lit(SHARPNESS_SLACK);
    let at = f.majorant(r_star)?;
    let beyond = f.majorant(r_star + epsilon)?;

    let mut report = VerificationReport::new(Suite::Sharpness.name());
    report.cases = 2;
    let label = target.label();
    let mut eq = Worst::none();
    eq.observe("sharpness_equality", (at - dist).abs(), tol_total);
    report.failures.extend(eq.into_failure(&label, witness, 0));
    // Strict: d + tol < majorant(r* + ε).
    let (lhs, rhs) = ((dist + tol_total).to_f64_lossy(), beyond.to_f64_lossy());
    if !(lhs < rhs) {
        report.failures.push(Failure {
            instance: label,
            seed: 0,
            witness: witness.to_string(),
            quantity: "sharpness_maximality".into(),
            lhs,
            rhs,
            margin: rhs - lhs,
        });
    }
    Ok(report)
}

/// The minus-sign witness on whichever part carries the weight `α_k`.
fn sharp_witness<T: Real>(spec: &ClassSpec<T>) -> Result<HarmonicPolynomialMap<T>> {
    let (g, _) = spec.weights(spec.start_index())?;
    let variant = if g == spec.alpha() {
        Variant::Analytic
    } else {
        Variant::AntiAnalytic
    };
    extremal(spec, variant, Sign::Minus)
}

/// Suite selection and grid.
#[derive(Clone, Debug)]
pub struct SuiteConfig<T> {
    pub suites: Vec<Suite>,
    pub targets: Vec<Target<T>>,
    /// Degree bound for random members.
    pub max_degree: u32,
    /// Truncation degree of the `W⁰(μ, ρ)` extremal maps.
    pub w_degree: u32,
    pub n_r: usize,
    pub n_theta: usize,
    pub epsilon: T,
}

impl<T: Real> SuiteConfig<T> {
    pub fn new(suites: Vec<Suite>) -> Self {
        Self {
            suites,
            targets: default_grid(),
            max_degree: DEFAULT_MAX_DEGREE,
            w_degree: DEFAULT_W_DEGREE,
            n_r: 32,
            n_theta: 64,
            epsilon: T::lit(DEFAULT_EPSILON),
        }
    }
}

/// Default parameter grid: every catalog family (Janowski-type, `F_H⁰(λ)`,
/// conic q-starlike, `R_H⁰(β)`, the negative-coefficient classes, `TM`/`TN`), plus
/// `W⁰(μ, ρ)` for `μ ∈ {0, 0.5, 1, 2}`, `ρ ∈ {0, 0.25, 0.5, 0.75}`.
pub fn default_grid<T: Real>() -> Vec<Target<T>> {
    let l = T::lit;
    let mut out = Vec::new();
    for (c, d) in [(-0.5, 0.5), (0.0, 0.5), (0.0, 1.0), (0.25, 0.75)] {
        let (c, d) = (l(c), l(d));
        out.push(ClassInstance::SStarStarTau { c, d });
        out.push(ClassInstance::SStarTau { c, d });
        out.push(ClassInstance::SConvTau { c, d });
    }
    for lambda in [0.25, 0.5, 1.0] {
        out.push(ClassInstance::FH0 { lambda: l(lambda) });
    }
    for k in [0.0, 1.0] {
        for q in [0.3, 0.5, 0.8] {
            for alpha in [0.0, 0.5] {
                out.push(ClassInstance::KSTq { k: l(k), q: l(q), alpha: l(alpha) });
            }
        }
    }
    for beta in [1.5, 2.0] {
        out.push(ClassInstance::RH0 { beta: l(beta) });
    }
    for alpha in [0.0, 0.5] {
        out.push(ClassInstance::TStarlike { alpha: l(alpha) });
        out.push(ClassInstance::TConvex { alpha: l(alpha) });
    }
    out.push(ClassInstance::TGeneral { alpha: l(0.0), g: vec![l(3.0), l(4.0), l(6.0)] });
    for mu in [0.0, 0.5, 1.0] {
        for alpha in [1.25, 1.5] {
            out.push(ClassInstance::TM { mu: l(mu), alpha: l(alpha) });
            out.push(ClassInstance::TN { mu: l(mu), alpha: l(alpha) });
        }
    }
    let mut targets: Vec<Target<T>> = out.into_iter().map(Target::Class).collect();
    for mu in [0.0, 0.5, 1.0, 2.0] {
        for rho in [0.0, 0.25, 0.5, 0.75] {
            let p = WParams::with_default_tol(l(mu), l(rho)).expect("grid parameters are valid");
            targets.push(Target::W(p));
        }
    }
    targets
}

/// Seed for random member `case` of target `index`.
pub fn member_seed(seed: u64, index: usize, case: usize) -> u64 {
    // SplitMix64 finalizer over a simple combination.
    let mut z = seed
        .wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add((case as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Maps a target is checked against: identity, the extremal witnesses that
/// are members, and `cases` random members.
fn witnesses<T: Real>(
    target: &Target<T>,
    index: usize,
    seed: u64,
    cases: usize,
    max_degree: u32,
    w_degree: u32,
) -> Result<Vec<(String, u64, HarmonicPolynomialMap<T>)>> {
    let mut out = vec![("identity".to_string(), seed, HarmonicPolynomialMap::identity())];
    match target {
        Target::Class(inst) => {
            let spec = inst.to_spec()?;
            for (variant, vname) in [(Variant::Analytic, "analytic"), (Variant::AntiAnalytic, "anti")] {
                for (sign, sname) in [(Sign::Minus, "minus"), (Sign::Plus, "plus")] {
                    let Ok(f) = extremal(&spec, variant, sign) else { continue };
                    if membership_check(&spec, &f)?.member {
                        out.push((format!("extremal_{vname}_{sname}"), seed, f));
                    }
                }
            }
            for case in 0..cases {
                let s = member_seed(seed, index, case);
                out.push((format!("member_{case}"), s, random_member(&spec, max_degree, s)?));
            }
        }
        Target::W(p) => {
            out.push(("w_extremal".to_string(), seed, w_extremal(p, w_degree)?));
        }
    }
    Ok(out)
}

fn is_degenerate<T: Real>(target: &Target<T>) -> bool {
    matches!(target, Target::Class(c) if c.validate_params().degenerate)
}

/// Runs one target through the selected suites.
pub fn run_target<T: Real>(
    config: &SuiteConfig<T>,
    index: usize,
    seed: u64,
    cases: usize,
) -> Result<VerificationReport> {
    let target = &config.targets[index];
    let mut report = VerificationReport::new("target");
    let maps = if config.suites.iter().any(|s| *s != Suite::Sharpness) {
        witnesses(target, index, seed, cases, config.max_degree, config.w_degree)?
    } else {
        Vec::new()
    };
    for suite in &config.suites {
        match suite {
            Suite::Growth => {
                for (name, s, f) in &maps {
                    report.absorb(check_growth(target, f, config.n_r, config.n_theta, name, *s)?);
                }
            }
            Suite::Bohr if is_degenerate(target) => {
                report.absorb(skipped(
                    Suite::Bohr,
                    format!("{}: degenerate instance, no Bohr radius", target.label()),
                ));
            }
            Suite::Bohr => {
                for (name, s, f) in &maps {
                    report.absorb(check_bohr(target, f, config.n_r, name, *s)?);
                }
            }
            Suite::Sharpness => {
                report.absorb(check_sharpness_truncated(target, config.epsilon, config.w_degree)?)
            }
        }
    }
    Ok(report)
}

/// Runs the selected suites over every target, in grid order.
pub fn run_suite<T: Real>(
    config: &SuiteConfig<T>,
    seed: u64,
    cases: usize,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new(suite_name(&config.suites));
    for index in 0..config.targets.len() {
        report.absorb(run_target(config, index, seed, cases)?);
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// `all` when every suite is selected, otherwise the names joined by `+`.
pub fn suite_name(suites: &[Suite]) -> String {
    if Suite::ALL.iter().all(|s| suites.contains(s)) {
        "all".into()
    } else {
        suites.iter().map(|s| s.name()).collect::<Vec<_>>().join("+")
    }
}
