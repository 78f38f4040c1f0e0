//! `--params` and `--grid` flag parsing.

use std::collections::BTreeMap;

use bohrlab::classes::CLASS_NAMES;
use bohrlab::{Instance, ParamValue, W};

/// Largest number of cells a sweep may expand to.
pub const GRID_CAP: usize = 1_000_000;

/// A parsed `--class` / `--params` pair.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Class(Instance),
    W(W),
}

impl Target {
    /// Builds a target. `tol` only applies to the `w` class; catalog radii
    /// are closed forms.
    pub fn build(class: &str, params: &BTreeMap<String, ParamValue>, tol: Option<f64>) -> Result<Self, String> {
        let target = check_names(class, params)?;
        let Some((mu, rho)) = target else {
            return Instance::from_params(class, params).map(Target::Class).map_err(|e| e.to_string());
        };
        let p = match tol {
            Some(t) => W::new(mu, rho, t),
            None => W::with_default_tol(mu, rho),
        };
        p.map(Target::W).map_err(|e| e.to_string())
    }

    /// Parameters in canonical order.
    pub fn params(&self) -> Vec<(&'static str, ParamValue)> {
        match self {
            Target::Class(c) => c.params(),
            Target::W(p) => vec![("mu", ParamValue::Scalar(p.mu)), ("rho", ParamValue::Scalar(p.rho))],
        }
    }
}

/// Checks the class name and parameter names, not their ranges. Returns
/// `(mu, rho)` for the `w` class.
pub fn check_names(class: &str, params: &BTreeMap<String, ParamValue>) -> Result<Option<(f64, f64)>, String> {
    if class == "w" {
        if let Some(k) = params.keys().find(|k| *k != "mu" && *k != "rho") {
            return Err(format!("unknown parameter {k:?} for class w (expected mu, rho)"));
        }
        let scalar = |name: &str| match params.get(name) {
            Some(ParamValue::Scalar(x)) => Ok(*x),
            Some(ParamValue::List(_)) => Err(format!("parameter {name} must be a number")),
            None => Err(format!("class w needs parameter {name}")),
        };
        return Ok(Some((scalar("mu")?, scalar("rho")?)));
    }
    if !CLASS_NAMES.contains(&class) {
        return Err(format!(
            "unknown class {class:?}; valid classes: {}, w",
            CLASS_NAMES.join(", ")
        ));
    }
    // from_params checks names and arity only.
    Instance::from_params(class, params).map(|_| None).map_err(|e| e.to_string())
}

/// Parses `k=v[,k=v...]`. A value with `;` separators is a list
/// (`g=3;4;6`).
pub fn parse_params(s: &str) -> Result<BTreeMap<String, ParamValue>, String> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| format!("expected name=value, got {item:?}"))?;
        let k = k.trim();
        let value = if v.contains(';') {
            let list = v
                .split(';')
                .map(|x| parse_number(k, x))
                .collect::<Result<Vec<_>, _>>()?;
            ParamValue::List(list)
        } else {
            ParamValue::Scalar(parse_number(k, v)?)
        };
        if out.insert(k.to_string(), value).is_some() {
            return Err(format!("parameter {k} given twice"));
        }
    }
    Ok(out)
}

fn parse_number(name: &str, s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("parameter {name}: {s:?} is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("parameter {name} must be finite"))
    }
}

/// One swept parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    /// `lo + i·step` for `i = 0, 1, ...` while `≤ hi`; the last point is
    /// snapped to `hi` when it lands within rounding of it.
    pub fn new(name: &str, lo: f64, hi: f64, step: f64) -> Result<Self, String> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(format!("grid {name}: bounds and step must be finite"));
        }
        if !(step > 0.0) {
            return Err(format!("grid {name}: step must be positive"));
        }
        if lo > hi {
            return Err(format!("grid {name}: lo = {lo} exceeds hi = {hi}"));
        }
        let span = (hi - lo) / step;
        if span >= GRID_CAP as f64 {
            return Err(format!("grid {name} has more than {GRID_CAP} points"));
        }
        let count = (span + 1e-9).floor() as usize + 1;
        let mut values: Vec<f64> = (0..count).map(|i| lo + i as f64 * step).collect();
        if let Some(last) = values.last_mut() {
            if (*last - hi).abs() <= 1e-9 * step {
                *last = hi;
            }
        }
        Ok(Self { name: name.to_string(), values })
    }
}

/// Parses `k=lo:hi:step[,...]`.
pub fn parse_grid(s: &str) -> Result<Vec<Axis>, String> {
    let mut axes: Vec<Axis> = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, spec) = item
            .split_once('=')
            .ok_or_else(|| format!("expected name=lo:hi:step, got {item:?}"))?;
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(format!("grid {k}: expected lo:hi:step, got {spec:?}"));
        };
        let k = k.trim();
        if axes.iter().any(|a| a.name == k) {
            return Err(format!("grid parameter {k} given twice"));
        }
        axes.push(Axis::new(k, parse_number(k, lo)?, parse_number(k, hi)?, parse_number(k, step)?)?);
    }
    if axes.is_empty() {
        return Err("empty grid".into());
    }
    let mut cells: usize = 1;
    for a in &axes {
        cells = cells
            .checked_mul(a.values.len())
            .filter(|c| *c <= GRID_CAP)
            .ok_or_else(|| format!("grid exceeds {GRID_CAP} cells"))?;
    }
    Ok(axes)
}

/// Cartesian product, row-major in flag order (the first axis varies
/// slowest), merged over the fixed parameters.
pub fn expand(
    axes: &[Axis],
    fixed: &BTreeMap<String, ParamValue>,
) -> Result<Vec<BTreeMap<String, ParamValue>>, String> {
    if let Some(a) = axes.iter().find(|a| fixed.contains_key(&a.name)) {
        return Err(format!("parameter {} is both fixed and swept", a.name));
    }
    let total: usize = axes.iter().map(|a| a.values.len()).product();
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut cell = fixed.clone();
        for a in axes.iter().rev() {
            let n = a.values.len();
            cell.insert(a.name.clone(), ParamValue::Scalar(a.values[idx % n]));
            idx /= n;
        }
        out.push(cell);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_and_lists() {
        let p = parse_params("alpha=0.5, g=3;4;6").unwrap();
        assert_eq!(p["alpha"], ParamValue::Scalar(0.5));
        assert_eq!(p["g"], ParamValue::List(vec![3.0, 4.0, 6.0]));
        assert!(parse_params("beta").is_err());
        assert!(parse_params("beta=x").is_err());
        assert!(parse_params("beta=1,beta=2").is_err());
        assert!(parse_params("beta=inf").is_err());
    }

    #[test]
    fn axis_snaps_to_hi() {
        let a = Axis::new("lambda", 0.2, 1.0, 0.2).unwrap();
        assert_eq!(a.values.len(), 5);
        assert_eq!(*a.values.last().unwrap(), 1.0);
        assert_eq!(Axis::new("x", 0.0, 0.0, 1.0).unwrap().values, vec![0.0]);
        assert!(Axis::new("x", 1.0, 0.0, 0.1).is_err());
        assert!(Axis::new("x", 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn grid_cap() {
        assert!(parse_grid("a=0:999:1,b=0:999:1").is_ok());
        assert!(parse_grid("a=0:999:1,b=0:1000:1").is_err());
        assert!(parse_grid("a=0:1").is_err());
    }

    #[test]
    fn expansion_is_row_major() {
        let axes = parse_grid("C=0:1:1,D=0:2:1").unwrap();
        let cells = expand(&axes, &BTreeMap::new()).unwrap();
        let pairs: Vec<(f64, f64)> = cells
            .iter()
            .map(|c| match (&c["C"], &c["D"]) {
                (ParamValue::Scalar(a), ParamValue::Scalar(b)) => (*a, *b),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(pairs, vec![(0., 0.), (0., 1.), (0., 2.), (1., 0.), (1., 1.), (1., 2.)]);
        let fixed = parse_params("C=0").unwrap();
        assert!(expand(&axes, &fixed).is_err());
    }

    #[test]
    fn unknown_class_lists_names() {
        let e = Target::build("nosuch", &BTreeMap::new(), None).unwrap_err();
        assert!(e.contains("rh0") && e.contains("w"));
        let w = Target::build("w", &parse_params("mu=0,rho=0.5").unwrap(), Some(1e-8)).unwrap();
        assert!(matches!(w, Target::W(p) if p.tol == 1e-8));
        assert!(Target::build("w", &parse_params("mu=0").unwrap(), None).is_err());
    }
}
