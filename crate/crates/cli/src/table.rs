//! Radius rows for `table` and the curve columns for `curve`.

use std::collections::BTreeMap;

use bohrlab::classes::{extremal, Sign, Variant};
use bohrlab::solver::{bohr_radius_for, covering_radius};
use bohrlab::wclass::{w_bohr_radius, w_majorant_series, w_rhs};
use bohrlab::{Map, ParamValue, Radius};
use serde::Serialize;

use crate::params::Target;

/// Tolerance passed to the catalog solver.
pub const CLASS_TOL: f64 = 1e-12;

/// Fixed-width float formatting: 17 significant digits, '.' separator.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_param(v: &ParamValue) -> String {
    match v {
        ParamValue::Scalar(x) => fmt(*x),
        ParamValue::List(l) => l.iter().map(|x| fmt(*x)).collect::<Vec<_>>().join(";"),
    }
}

/// One row of a radius table.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub params: Vec<(String, ParamValue)>,
    /// `M/α₂`; NaN for the `w` class and for invalid cells.
    pub t: f64,
    pub radius: f64,
    /// `1 − t`, or the series distance bound for the `w` class.
    pub covering: f64,
    pub residual: f64,
    pub method: String,
}

impl Row {
    pub fn header(&self) -> String {
        let mut cols: Vec<&str> = self.params.iter().map(|(k, _)| k.as_str()).collect();
        cols.extend(["t", "radius", "covering", "residual", "method"]);
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut cols: Vec<String> = self.params.iter().map(|(_, v)| fmt_param(v)).collect();
        cols.extend([fmt(self.t), fmt(self.radius), fmt(self.covering), fmt(self.residual)]);
        cols.push(self.method.clone());
        cols.join(",")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for (k, v) in &self.params {
            m.insert(k.clone(), serde_json::to_value(v).unwrap_or_default());
        }
        for (k, v) in [("t", self.t), ("radius", self.radius), ("covering", self.covering), ("residual", self.residual)] {
            // NaN has no JSON form.
            m.insert(k.into(), serde_json::Number::from_f64(v).map(Into::into).unwrap_or_default());
        }
        m.insert("method".into(), self.method.clone().into());
        m.into()
    }
}

/// Radius of a target: the catalog solver or the `W⁰(μ, ρ)` root.
pub fn radius(target: &Target) -> Result<(Option<f64>, Radius), String> {
    match target {
        Target::Class(c) => {
            let r = bohr_radius_for(c, CLASS_TOL).map_err(|e| e.to_string())?;
            let t = c.ratio().map_err(|e| e.to_string())?;
            Ok((Some(t), r))
        }
        Target::W(p) => w_bohr_radius(p).map(|r| (None, r)).map_err(|e| e.to_string()),
    }
}

/// Computes a table row. Cells whose parameters are rejected become
/// `method = invalid` rows with NaN values, so a sweep can cross parameter
/// boundaries.
pub fn row(class: &str, cell: &BTreeMap<String, ParamValue>, tol: Option<f64>) -> Row {
    let computed = Target::build(class, cell, tol).and_then(|target| {
        let (t, r) = radius(&target)?;
        let covering = match (&target, t) {
            (Target::W(p), _) => w_rhs(p).map_err(|e| e.to_string())?.value,
            (_, Some(t)) => 1.0 - t,
            _ => f64::NAN,
        };
        Ok((target.params(), t, r, covering))
    });
    match computed {
        Ok((params, t, r, covering)) => Row {
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            t: t.unwrap_or(f64::NAN),
            radius: r.value,
            covering,
            residual: r.residual,
            method: r.method.as_str().to_string(),
        },
        Err(_) => Row {
            params: cell.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            t: f64::NAN,
            radius: f64::NAN,
            covering: f64::NAN,
            residual: f64::NAN,
            method: "invalid".into(),
        },
    }
}

/// Parses a CSV data line back into parameters, given the header.
pub fn parse_row_params(header: &str, line: &str) -> Result<BTreeMap<String, ParamValue>, String> {
    let names: Vec<&str> = header.split(',').collect();
    let values: Vec<&str> = line.split(',').collect();
    if names.len() != values.len() || names.len() < 5 {
        return Err(format!("malformed row {line:?}"));
    }
    let n_params = names.len() - 5;
    let mut out = BTreeMap::new();
    for (k, v) in names[..n_params].iter().zip(&values[..n_params]) {
        let parse = |s: &str| s.parse::<f64>().map_err(|_| format!("bad number {s:?}"));
        let value = if v.contains(';') {
            ParamValue::List(v.split(';').map(parse).collect::<Result<_, _>>()?)
        } else {
            ParamValue::Scalar(parse(v)?)
        };
        out.insert(k.to_string(), value);
    }
    Ok(out)
}

/// One `curve` sample.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurvePoint {
    pub r: f64,
    pub majorant_extremal: f64,
    pub distance_lower: f64,
}

/// `r = j/N` for `j < N`: the extremal majorant against the lower bound on
/// the boundary distance. Also returns whether that bound is non-positive.
pub fn curve(target: &Target, samples: usize) -> Result<(Vec<CurvePoint>, bool), String> {
    let err = |e: bohrlab::Error| e.to_string();
    let rs = (0..samples).map(|j| j as f64 / samples as f64);
    match target {
        Target::Class(c) => {
            let v = c.validate_params();
            if !v.accepted {
                return Err(v.reason.unwrap_or_default());
            }
            let spec = c.to_spec().map_err(err)?;
            let t = spec.ratio();
            let f: Map = extremal(&spec, Variant::Analytic, Sign::Minus)
                .or_else(|_| extremal(&spec, Variant::AntiAnalytic, Sign::Minus))
                .map_err(err)?;
            let d = covering_radius(t).map_err(err)?;
            let pts = rs
                .map(|r| {
                    Ok(CurvePoint {
                        r,
                        majorant_extremal: f.majorant(r)?,
                        distance_lower: d,
                    })
                })
                .collect::<Result<Vec<_>, bohrlab::Error>>()
                .map_err(err)?;
            Ok((pts, d <= 0.0))
        }
        Target::W(p) => {
            let d = w_rhs(p).map_err(err)?.value;
            let pts = rs
                .map(|r| {
                    Ok(CurvePoint {
                        r,
                        majorant_extremal: r + w_majorant_series(r, p)?.value,
                        distance_lower: d,
                    })
                })
                .collect::<Result<Vec<_>, bohrlab::Error>>()
                .map_err(err)?;
            Ok((pts, d <= 0.0))
        }
    }
}
