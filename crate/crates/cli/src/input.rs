//! JSON inputs for covers, classes and transitions.
//!
//! Cover: `{"kind": "poly" | "trunc", "max_degree": 2, "pole": 2, "opens": [[], ["x1"]]}`.
//! Each open lists the coordinates it inverts. Coordinates are `x1..xn`.
//!
//! Class: `{"alpha": {"1,2": "dx1/x1"}, "gamma": ["0", "dx1'"]}` with open
//! indices starting at 1; omitted entries are zero. Alternatively
//! `{"transitions": {"1,2": "x1"}}` denotes the restricted Chern class of
//! the line bundle with those transitions.

use crate::report::Failure;
use frobquant::atiyah::{restricted_chern, trivial_transitions, CechClass, CechCover, Transitions};
use frobquant::expr::{parse_form_of_degree, parse_poly};
use frobquant::formscalc::{PolyRing, Variable};
use frobquant::Prime;
use serde::Deserialize;
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct CoverJson {
    #[serde(default = "default_kind")]
    kind: String,
    max_degree: Option<i32>,
    #[serde(default = "default_pole")]
    pole: i32,
    opens: Vec<Vec<String>>,
}

fn default_kind() -> String {
    "poly".into()
}

fn default_pole() -> i32 {
    1
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Inline JSON, or the contents of a file when prefixed with `@`.
pub fn load_json(src: &str) -> Result<Value, Failure> {
    let text = match src.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?,
        None => src.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON: {e}")))
}

pub fn cover(src: Option<&str>, p: Prime, n: usize) -> Result<CechCover, Failure> {
    let Some(src) = src else {
        return Ok(CechCover::single(&PolyRing::truncated(p, "x", n, 1)?)?);
    };
    let raw: CoverJson = serde_json::from_value(load_json(src)?).map_err(|e| usage(format!("invalid cover: {e}")))?;
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let base = names
        .iter()
        .map(|name| match raw.kind.as_str() {
            "poly" => Ok(Variable::polynomial(name.clone(), raw.max_degree.unwrap_or(p.get() as i32 - 1))),
            "trunc" => Ok(Variable::truncated(name.clone(), p)),
            other => Err(usage(format!("unknown cover kind {other:?}; expected poly or trunc"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let opens = raw
        .opens
        .iter()
        .map(|o| {
            o.iter()
                .map(|v| names.iter().position(|x| x == v).ok_or_else(|| usage(format!("cover inverts unknown coordinate {v:?}"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CechCover::new(p, base, raw.pole, opens)?)
}

fn pair_key(key: &str, cover: &CechCover) -> Result<(usize, usize), Failure> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    let parsed: Option<Vec<usize>> = parts.iter().map(|s| s.parse::<usize>().ok()).collect();
    match parsed.as_deref() {
        Some(&[i, j]) if 1 <= i && i < j && j <= cover.len() => Ok((i - 1, j - 1)),
        _ => Err(usage(format!("bad overlap key {key:?}: expected \"i,j\" with 1 <= i < j <= {}", cover.len()))),
    }
}

fn string_map(v: &Value, what: &str) -> Result<BTreeMap<String, String>, Failure> {
    serde_json::from_value(v.clone()).map_err(|e| usage(format!("{what} must map \"i,j\" to expression strings: {e}")))
}

pub fn transitions(v: &Value, cover: &CechCover) -> Result<Transitions, Failure> {
    let mut g = trivial_transitions(cover);
    for (key, src) in string_map(v, "transitions")? {
        let (i, j) = pair_key(&key, cover)?;
        g.insert((i, j), parse_poly(&src, &cover.ring(&[i, j]))?);
    }
    Ok(g)
}

pub fn class(src: Option<&str>, cover: &CechCover) -> Result<CechClass, Failure> {
    let Some(src) = src else {
        return Ok(CechClass::zero(cover));
    };
    let v = load_json(src)?;
    let obj = v.as_object().ok_or_else(|| usage("a class must be a JSON object"))?;
    if let Some(t) = obj.get("transitions") {
        if obj.len() > 1 {
            return Err(usage("give either transitions or alpha/gamma, not both"));
        }
        return Ok(restricted_chern(&transitions(t, cover)?, cover)?);
    }
    let mut cls = CechClass::zero(cover);
    for key in obj.keys() {
        if key != "alpha" && key != "gamma" {
            return Err(usage(format!("unknown class field {key:?}")));
        }
    }
    if let Some(a) = obj.get("alpha") {
        for (key, src) in string_map(a, "alpha")? {
            let (i, j) = pair_key(&key, cover)?;
            cls.alpha.insert((i, j), parse_form_of_degree(&src, &cover.ring(&[i, j]), 1)?);
        }
    }
    if let Some(g) = obj.get("gamma") {
        let list: Vec<String> = serde_json::from_value(g.clone()).map_err(|e| usage(format!("gamma must be a list of expressions: {e}")))?;
        if list.len() != cover.len() {
            return Err(usage(format!("gamma needs {} entries, one per open", cover.len())));
        }
        for (i, src) in list.iter().enumerate() {
            cls.gamma[i] = parse_form_of_degree(src, &cover.twisted(&[i]), 1)?;
        }
    }
    Ok(cls)
}
