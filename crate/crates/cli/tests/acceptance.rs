//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use bohrlab::classes::{extremal, membership_check, random_member, Sign, Variant};
use bohrlab::oracle::boundary_distance;
use bohrlab::solver::{
    bohr_radius_for, closed_form_bohr_radius, generalized_bohr_radius, printed_sconv_radius,
    rationalized_radius,
};
use bohrlab::verify::{default_grid, Target};
use bohrlab::wclass::{w_bohr_radius, w_rhs};
use bohrlab::{Instance, Map, Spec, W};
use num_complex::Complex;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn catalog() -> Vec<Instance> {
    default_grid::<f64>()
        .into_iter()
        .filter_map(|t| match t {
            Target::Class(c) => Some(c),
            Target::W(_) => None,
        })
        .collect()
}

fn w_grid() -> Vec<W> {
    default_grid::<f64>()
        .into_iter()
        .filter_map(|t| match t {
            Target::W(p) => Some(p),
            Target::Class(_) => None,
        })
        .collect()
}

/// The extremal witness on the part that carries the minimal weight.
fn witness(spec: &Spec) -> Map {
    let (g, _) = spec.weights(2).unwrap();
    let v = if g == spec.alpha() { Variant::Analytic } else { Variant::AntiAnalytic };
    extremal(spec, v, Sign::Minus).unwrap()
}

/// Plain bisection for an increasing function.
fn root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `h(z) + conj(g(z))` by direct powers, independent of the library's
/// evaluator.
fn eval(f: &Map, z: Complex<f64>) -> Complex<f64> {
    let mut w = z;
    for (m, a) in f.analytic() {
        w += a * z.powu(*m);
    }
    for (m, b) in f.coanalytic() {
        w += (b * z.powu(*m)).conj();
    }
    w
}

fn majorant(f: &Map, r: f64) -> f64 {
    let a: f64 = f.analytic().iter().map(|(m, c)| c.norm() * r.powi(*m as i32)).sum();
    let b: f64 = f.coanalytic().iter().map(|(m, c)| c.norm() * r.powi(*m as i32)).sum();
    r + a + b
}

fn c1_residuals() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_agree: f64 = 0.0;
    for i in 0..1000 {
        let t = (i as f64 + 0.5) / 1000.0;
        for k in [2u32, 3, 5] {
            let r = generalized_bohr_radius(t, k, 1e-14).map_err(|e| e.to_string())?.value;
            let h = r + t * r.powi(k as i32) - (1.0 - t);
            worst = worst.max(h.abs());
            if k == 2 {
                let c = closed_form_bohr_radius(t).unwrap().value;
                worst_agree = worst_agree.max((c - r).abs());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(worst <= 1e-12, || format!("max residual {worst:e}"))?;
    ensure(worst_agree <= 1e-12, || format!("closed form vs bisection {worst_agree:e}"))?;
    ensure(elapsed < 1.0, || format!("took {elapsed:.3} s"))?;
    Ok(format!("max |H| {worst:.1e}, k=2 agreement {worst_agree:.1e}, {elapsed:.3} s"))
}

fn c2_anchors() -> Outcome {
    let a = closed_form_bohr_radius(0.5).unwrap().value;
    let b = closed_form_bohr_radius(0.25).unwrap().value;
    let (ea, eb) = ((a - (SQRT_2 - 1.0)).abs(), (b - (7f64.sqrt() - 2.0)).abs());
    ensure(ea <= 1e-12 && eb <= 1e-12, || format!("errors {ea:e}, {eb:e}"))?;
    let rh0 = bohr_radius_for(&Instance::RH0 { beta: 2.0 }, 1e-12).unwrap().value;
    let sss = bohr_radius_for(&Instance::SStarStarTau { c: 0.0, d: 1.0 }, 1e-12).unwrap().value;
    ensure((rh0 - a).abs() <= 1e-12 && (sss - b).abs() <= 1e-12, || {
        format!("catalog instances disagree: {rh0} vs {a}, {sss} vs {b}")
    })?;
    Ok(format!("errors {ea:.1e}, {eb:.1e}"))
}

fn c3_rationalized() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let gamma2 = 2.0 + i as f64;
            let alpha = j as f64 / 10.0;
            let lhs = rationalized_radius(gamma2, alpha).map_err(|e| e.to_string())?;
            let rhs = closed_form_bohr_radius((1.0 - alpha) / gamma2).unwrap().value;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max difference {worst:e}"))?;
    Ok(format!("100 points, max difference {worst:.1e}"))
}

fn c4_sharpness() -> Outcome {
    let start = Instant::now();
    let (mut checked, mut skipped) = (0, 0);
    let mut worst: f64 = 0.0;
    for inst in catalog() {
        let r = bohr_radius_for(&inst, 1e-12).map_err(|e| e.to_string())?;
        if r.is_degenerate() {
            skipped += 1;
            continue;
        }
        let spec = inst.to_spec().unwrap();
        let t = spec.ratio();
        let f = witness(&spec);
        let d = boundary_distance(&f, 4096, 1e-10).map_err(|e| e.to_string())?.value;
        // For z − t z² the boundary distance is exactly min |1 − t e^{iθ}| = 1 − t.
        ensure((d - (1.0 - t)).abs() <= 1e-9, || format!("{}: oracle {d} vs 1 - t", inst.label()))?;
        let gap = (majorant(&f, r.value) - d).abs();
        worst = worst.max(gap);
        ensure(gap <= 1e-8, || format!("{}: |majorant - distance| = {gap:e}", inst.label()))?;
        let beyond = majorant(&f, r.value + 0.01);
        ensure(beyond > d, || format!("{}: Bohr inequality holds at r* + 0.01", inst.label()))?;
        checked += 1;
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 30.0, || format!("took {elapsed:.1} s"))?;
    Ok(format!(
        "{checked} instances ({skipped} degenerate skipped), max gap {worst:.1e}, {elapsed:.2} s"
    ))
}

fn dilog(r: f64) -> f64 {
    (1..=10_000).map(|m| r.powi(m) / (m as f64 * m as f64)).sum()
}

fn c5_w_anchors() -> Outcome {
    let p0 = W::with_default_tol(0.0, 0.0).unwrap();
    let p1 = W::with_default_tol(1.0, 0.0).unwrap();
    let rhs0 = w_rhs(&p0).map_err(|e| e.to_string())?.value;
    let rhs1 = w_rhs(&p1).map_err(|e| e.to_string())?.value;
    let e0 = (rhs0 - (3.0 - 2.0 * 2f64.ln())).abs();
    let e1 = (rhs1 - (3.0 - PI * PI / 6.0)).abs();
    ensure(e0 <= 1e-10, || format!("w_rhs(0,0) error {e0:e}"))?;
    ensure(e1 <= 1e-10, || format!("w_rhs(1,0) error {e1:e}"))?;

    let log_root = root(|r| r + 2.0 * (-(1.0 - r).ln() - r) - (3.0 - 2.0 * 2f64.ln()), 0.0, 0.99);
    let dilog_root = root(|r| r + 2.0 * (dilog(r) - r) - (3.0 - PI * PI / 6.0), 0.0, 0.99);
    let r0 = w_bohr_radius(&p0).map_err(|e| e.to_string())?.value;
    let r1 = w_bohr_radius(&p1).map_err(|e| e.to_string())?.value;
    ensure((r0 - log_root).abs() <= 1e-6, || format!("w radius (0,0) {r0} vs {log_root}"))?;
    ensure((r1 - dilog_root).abs() <= 1e-5, || format!("w radius (1,0) {r1} vs {dilog_root}"))?;
    Ok(format!("rhs errors {e0:.1e}, {e1:.1e}; radii {r0:.7}, {r1:.7}"))
}

fn c6_growth_covering() -> Outcome {
    let mut maps = 0;
    for inst in catalog() {
        let spec = inst.to_spec().unwrap();
        let t = spec.ratio();
        let radius = bohr_radius_for(&inst, 1e-12).unwrap();
        for seed in 0..100 {
            let f = random_member(&spec, 12, seed).map_err(|e| e.to_string())?;
            ensure(membership_check(&spec, &f).unwrap().member, || {
                format!("{} seed {seed}: sampled map is not a member", inst.label())
            })?;
            for i in 1..=32 {
                let r = i as f64 / 32.0;
                let (lo, hi) = ((r - t * r * r).max(0.0), r + t * r * r);
                for j in 0..64 {
                    let m = eval(&f, Complex::from_polar(r, 2.0 * PI * j as f64 / 64.0)).norm();
                    ensure(lo - 1e-10 <= m && m <= hi + 1e-10, || {
                        format!("{} seed {seed}: |f| = {m} outside [{lo}, {hi}] at r = {r}", inst.label())
                    })?;
                }
            }
            if !radius.is_degenerate() {
                for i in 0..=32 {
                    let r = radius.value * i as f64 / 32.0;
                    let s = majorant(&f, r);
                    ensure(s <= 1.0 - t + 1e-10, || {
                        format!("{} seed {seed}: majorant {s} > 1 - t at r = {r}", inst.label())
                    })?;
                }
            }
            maps += 1;
        }
    }
    Ok(format!("{maps} members, 32x64 grid, zero failures"))
}

fn c7_monotonicity() -> Outcome {
    let mut prev = f64::INFINITY;
    for i in 0..1000 {
        let t = (i as f64 + 0.5) / 1000.0;
        let r = closed_form_bohr_radius(t).unwrap().value;
        ensure(r < prev, || format!("r*({t}) = {r} not below {prev}"))?;
        prev = r;
    }
    let grid = w_grid();
    for mu in [0.0, 0.5, 1.0, 2.0] {
        let mut prev = 0.0;
        for p in grid.iter().filter(|p| p.mu == mu) {
            let r = w_bohr_radius(p).map_err(|e| e.to_string())?.value;
            ensure(r > prev, || format!("w radius at mu={mu}, rho={} = {r} not above {prev}", p.rho))?;
            prev = r;
        }
    }
    Ok("1000-point t grid and 4x4 (mu, rho) grid strictly monotone".into())
}

fn c8_typo_ledger() -> Outcome {
    let inst = Instance::SConvTau { c: 0.0, d: 1.0 };
    let r = bohr_radius_for(&inst, 1e-12).unwrap().value;
    // t = (D − C) / (2(1 + 2D − C)) = 1/6.
    let t = 1.0 / 6.0;
    let h = (r + t * r * r - (1.0 - t)).abs();
    let printed = printed_sconv_radius(0.0, 1.0);
    ensure(h <= 1e-12, || format!("residual {h:e}"))?;
    ensure((r - printed).abs() > 1e-3, || format!("computed {r} matches printed {printed}"))?;

    let mut tm = 0;
    for inst in catalog().into_iter().filter(|i| matches!(i, Instance::TM { .. })) {
        let (g2, _) = inst.weights(2).unwrap();
        ensure(inst.alpha_min().unwrap() == g2, || format!("{}: alpha is not the m = 2 weight", inst.label()))?;
        for m in 2..=10_000 {
            let (g, d) = inst.weights(m).unwrap();
            ensure(g >= g2 && (d == 0.0 || d >= g2), || {
                format!("{}: weight at m = {m} below the m = 2 weight", inst.label())
            })?;
        }
        tm += 1;
    }
    Ok(format!(
        "S^c(0,1): computed {r:.10} vs printed {printed:.10}, residual {h:.1e}; {tm} TM instances minimal at m = 2"
    ))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bohrlab"))
}

fn c9a_verify_exit() -> Outcome {
    let out = bin().args(["verify", "--suite", "all", "--seed", "7", "--cases", "50"]).output().unwrap();
    let code = out.status.code();
    let text = String::from_utf8_lossy(&out.stdout);
    let summary = text.lines().next().unwrap_or_default().to_string();
    ensure(code == Some(0), || {
        let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("  FAIL ")).collect();
        let w = fails.iter().filter(|l| l.starts_with("  FAIL w(")).count();
        let first = fails.first().copied().unwrap_or_default().trim();
        format!(
            "exit {code:?}: {summary}; {w} of {} failures on W instances; first: {first}",
            fails.len()
        )
    })?;
    Ok(summary)
}

fn c9b_verify_determinism() -> Outcome {
    let run = |json: bool| {
        let mut c = bin();
        c.args(["verify", "--suite", "all", "--seed", "7", "--cases", "50"]);
        if json {
            c.arg("--json");
        }
        c.output().unwrap().stdout
    };
    ensure(run(false) == run(false), || "text reports differ between runs".into())?;
    let first = run(true);
    ensure(first == run(true), || "JSON reports differ between runs".into())?;
    Ok(format!("identical text and JSON reports ({} bytes)", first.len()))
}

fn c9c_table_roundtrip() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let table = |path: &Path, threads: &str| {
        let status = bin()
            .env("BOHRLAB_THREADS", threads)
            .args(["table", "--class", "kstq", "--grid", "k=0:1:0.25,q=0.1:0.9:0.2", "--params", "alpha=0.5"])
            .arg("--out")
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read_to_string(path).unwrap()
    };
    let a = table(&dir.path().join("a.csv"), "1");
    let b = table(&dir.path().join("b.csv"), "4");
    ensure(a == b, || "output depends on thread count".into())?;
    let mut lines = a.lines();
    let header = lines.next().unwrap_or_default();
    let mut rebuilt = format!("{header}\n");
    let mut rows = 0;
    for line in lines {
        let params = bohrlab_cli::table::parse_row_params(header, line)?;
        rebuilt.push_str(&bohrlab_cli::table::row("kstq", &params, None).to_csv());
        rebuilt.push('\n');
        rows += 1;
    }
    ensure(rebuilt == a, || "recomputed table differs".into())?;
    Ok(format!("{rows} rows reproduced bit-identically"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1  defining-equation residuals", c1_residuals),
        ("2  exact anchors", c2_anchors),
        ("3  rationalized-form equivalence", c3_rationalized),
        ("4  sharpness via boundary-distance oracle", c4_sharpness),
        ("5  W-class anchors", c5_w_anchors),
        ("6  growth envelope and Bohr chain on random members", c6_growth_covering),
        ("7  monotonicity", c7_monotonicity),
        ("8  S^c radius discrepancy and TM minimal weight", c8_typo_ledger),
        ("9a verify --suite all --seed 7 --cases 50 exits 0", c9a_verify_exit),
        ("9b verify reports are reproducible", c9b_verify_determinism),
        ("9c table round-trip", c9c_table_roundtrip),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
