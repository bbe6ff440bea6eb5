//! Turning command-line JSON and function specs into core types.

use std::f64::consts::PI;
use std::sync::Arc;

use mproj_core::{AtomicMeasure, CStarFunctional, EvConstSeq, FiniteSeq, Func, GeoTailSeq, Poly, Seq};
use serde_json::Value;

use crate::CliError;

pub fn json_value(s: &str) -> Result<Value, String> {
    serde_json::from_str(s).map_err(|e| format!("not valid JSON: {e}"))
}

fn numbers(v: &Value, what: &str) -> Result<Vec<f64>, CliError> {
    let arr = v.as_array().ok_or_else(|| CliError::Usage(format!("{what}: expected an array of numbers")))?;
    arr.iter()
        .map(|e| e.as_f64().ok_or_else(|| CliError::Usage(format!("{what}: `{e}` is not a number"))))
        .collect()
}

fn seq(v: &Value, what: &str) -> Result<Seq, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

/// A bare array is a finitely supported sequence.
pub fn l1_element(v: &Value, what: &str) -> Result<GeoTailSeq, CliError> {
    if v.is_array() {
        return Ok(GeoTailSeq::new(numbers(v, what)?, 0.0)?);
    }
    let s = seq(v, what)?;
    s.as_l1().ok_or_else(|| CliError::Usage(format!("{what}: expected kind finite or geotail, found {}", s.kind())))
}

pub fn finite(v: &Value, what: &str) -> Result<FiniteSeq, CliError> {
    let x = l1_element(v, what)?;
    x.to_finite().ok_or_else(|| CliError::Usage(format!("{what}: expected a finitely supported sequence")))
}

/// A bare array is a head with limit zero.
pub fn c_element(v: &Value, what: &str) -> Result<EvConstSeq, CliError> {
    if v.is_array() {
        return Ok(EvConstSeq::new(numbers(v, what)?, 0.0)?);
    }
    match seq(v, what)? {
        Seq::EvConst(x) => Ok(x),
        Seq::Finite(x) => Ok(EvConstSeq::new(x.to_dense(), 0.0)?),
        other => Err(CliError::Usage(format!("{what}: expected kind evconst, found {}", other.kind()))),
    }
}

/// `l∞` functional on `l₁`; same encodings as [`c_element`].
pub fn linf_element(v: &Value, what: &str) -> Result<EvConstSeq, CliError> {
    c_element(v, what)
}

/// A bare array is `[q₀, q₁, q₂, …]`.
pub fn cstar(v: &Value, what: &str) -> Result<CStarFunctional, CliError> {
    if v.is_array() {
        let q = numbers(v, what)?;
        let (q0, rest) = q.split_first().map(|(a, b)| (*a, b)).unwrap_or((0.0, &[]));
        return Ok(CStarFunctional::from_dense(q0, rest)?);
    }
    match seq(v, what)? {
        Seq::CStar(x) => Ok(x),
        other => Err(CliError::Usage(format!("{what}: expected kind cstar, found {}", other.kind()))),
    }
}

/// `{"atoms": [{"t": .., "w": ..}, ..]}` or the bare atom list.
pub fn measure(v: &Value, what: &str) -> Result<AtomicMeasure, CliError> {
    let wrapped = if v.is_array() { serde_json::json!({ "atoms": v }) } else { v.clone() };
    serde_json::from_value(wrapped).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

/// A function from the catalog together with its canonical name.
pub struct Target {
    pub name: String,
    pub func: Func,
}

/// `poly c₀ c₁ …`, `sin k` (sin(kπt)), `abs c` (|t − c|) or `exp`.
pub fn function(tokens: &[String]) -> Result<Target, CliError> {
    let usage = |msg: &str| CliError::Usage(format!("--function: {msg}"));
    let (head, args) = tokens.split_first().ok_or_else(|| usage("missing function name"))?;
    let args: Vec<f64> = args
        .iter()
        .map(|a| a.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| usage(&format!("`{a}` is not a number"))))
        .collect::<Result<_, _>>()?;
    let one = |what: &str| -> Result<f64, CliError> {
        match args.as_slice() {
            [v] => Ok(*v),
            _ => Err(usage(&format!("{head} takes exactly one {what}"))),
        }
    };
    let (name, func): (String, Func) = match head.as_str() {
        "poly" => {
            if args.is_empty() {
                return Err(usage("poly needs at least one coefficient"));
            }
            let p = Poly::new(args.clone());
            (format!("poly {}", join(&args)), p.to_func())
        }
        "sin" => {
            let k = one("frequency k")?;
            (format!("sin {k}"), Arc::new(move |t| (k * PI * t).sin()))
        }
        "abs" => {
            let c = one("centre c")?;
            (format!("abs {c}"), Arc::new(move |t: f64| (t - c).abs()))
        }
        "exp" => {
            if !args.is_empty() {
                return Err(usage("exp takes no arguments"));
            }
            ("exp".into(), Arc::new(f64::exp))
        }
        other => return Err(usage(&format!("unknown function `{other}` (poly, sin, abs, exp)"))),
    };
    Ok(Target { name, func })
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
