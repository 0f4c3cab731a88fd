//! JSON problem files.
//!
//! ```json
//! {"rank": 2, "constraints": [], "Q": [[1,0],[-1,0],[0,1],[0,-1]],
//!  "v": {"support": [[1,0]], "magnitudes": ["1"]},
//!  "w": {"support": [[1,0],[0,1]], "magnitudes": ["1", "3/2"]}}
//! ```
//!
//! Integers are JSON numbers (or decimal strings when they do not fit in
//! 64 bits); rationals are `"p/q"` strings. `magnitudes` may be omitted for
//! unit magnitudes. Omitting both `constraints` and `Q` selects the
//! `SL(rank)` convention.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, OnePS, Rational};
use crate::pairs::{Pair, StabilityProblem, WeightedVector};
use crate::polytope::PointSet;

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| err(format!("{n} is not an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| err(format!("{s:?} is not an integer"))),
        other => Err(err(format!("expected an integer, got {other}"))),
    }
}

pub fn int_to_json(k: &BigInt) -> Value {
    match k.to_i64() {
        Some(x) => json!(x),
        None => json!(k.to_string()),
    }
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => int_from_json(v).map(Rational::from_integer),
        other => Err(err(format!("expected a rational, got {other}"))),
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || err(format!("{s:?} is not a rational"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn rational_to_json(q: &Rational) -> Value {
    if q.is_integer() {
        json!(q.numer().to_string())
    } else {
        json!(format!("{}/{}", q.numer(), q.denom()))
    }
}

pub fn coords_from_json(v: &Value) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| err(format!("expected an integer vector, got {v}")))?
        .iter()
        .map(int_from_json)
        .collect()
}

pub fn point_from_json(v: &Value, rank: usize) -> Result<LatticePoint> {
    let c = coords_from_json(v)?;
    if c.len() != rank {
        return Err(Error::DimensionMismatch { expected: rank, found: c.len() });
    }
    Ok(LatticePoint::new(c))
}

pub fn coords_to_json(c: &[BigInt]) -> Value {
    Value::Array(c.iter().map(int_to_json).collect())
}

pub fn one_ps_to_json(u: &OnePS) -> Value {
    coords_to_json(u.coords())
}

pub fn point_set_to_json(a: &PointSet) -> Value {
    Value::Array(a.iter().map(|p| coords_to_json(p.coords())).collect())
}

pub fn point_set_from_json(v: &Value, rank: usize) -> Result<PointSet> {
    let items = v.as_array().ok_or_else(|| err(format!("expected a list of points, got {v}")))?;
    let pts = items.iter().map(|p| point_from_json(p, rank)).collect::<Result<Vec<_>>>()?;
    PointSet::new(rank, pts)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(format!("missing field {key:?}")))
}

fn weighted_from_json(v: &Value, rank: usize) -> Result<WeightedVector> {
    let obj = v.as_object().ok_or_else(|| err("a vector must be a JSON object"))?;
    let support = field(obj, "support")?
        .as_array()
        .ok_or_else(|| err("support must be a list"))?
        .iter()
        .map(|p| point_from_json(p, rank))
        .collect::<Result<Vec<_>>>()?;
    let magnitudes = match obj.get("magnitudes") {
        None | Some(Value::Null) => vec![Rational::from_integer(1.into()); support.len()],
        Some(m) => m
            .as_array()
            .ok_or_else(|| err("magnitudes must be a list"))?
            .iter()
            .map(rational_from_json)
            .collect::<Result<Vec<_>>>()?,
    };
    if magnitudes.len() != support.len() {
        return Err(err(format!(
            "{} support points but {} magnitudes",
            support.len(),
            magnitudes.len()
        )));
    }
    WeightedVector::new(rank, support.into_iter().zip(magnitudes))
}

fn weighted_to_json(v: &WeightedVector) -> Value {
    let (support, magnitudes): (Vec<Value>, Vec<Value>) = v
        .iter()
        .map(|(p, m)| (coords_to_json(p.coords()), rational_to_json(m)))
        .unzip();
    json!({"support": support, "magnitudes": magnitudes})
}

pub fn problem_from_json(obj: &Map<String, Value>) -> Result<StabilityProblem> {
    let rank = field(obj, "rank")?
        .as_u64()
        .ok_or_else(|| err("rank must be a positive integer"))? as usize;
    match (obj.get("constraints"), obj.get("Q")) {
        (None, None) => StabilityProblem::special_linear(rank),
        (_, None) => Err(err("\"Q\" is required when constraints are given")),
        (c, Some(q)) => {
            let constraints = match c {
                None | Some(Value::Null) => Vec::new(),
                Some(c) => c
                    .as_array()
                    .ok_or_else(|| err("constraints must be a list"))?
                    .iter()
                    .map(|p| point_from_json(p, rank))
                    .collect::<Result<Vec<_>>>()?,
            };
            StabilityProblem::new(rank, constraints, point_set_from_json(q, rank)?)
        }
    }
}

pub fn pair_from_json(v: &Value) -> Result<Pair> {
    let obj = v.as_object().ok_or_else(|| err("a problem file must be a JSON object"))?;
    let problem = problem_from_json(obj)?;
    let rank = problem.rank();
    let pv = weighted_from_json(field(obj, "v")?, rank)?;
    let pw = weighted_from_json(field(obj, "w")?, rank)?;
    Pair::new(pv, pw, problem)
}

pub fn parse_pair(text: &str) -> Result<Pair> {
    let v: Value = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    pair_from_json(&v)
}

pub fn pair_to_json(p: &Pair) -> Value {
    let pb = p.problem();
    json!({
        "rank": pb.rank(),
        "constraints": pb.constraints().iter().map(|c| coords_to_json(c.coords())).collect::<Vec<_>>(),
        "Q": point_set_to_json(pb.reference()),
        "v": weighted_to_json(p.v()),
        "w": weighted_to_json(p.w()),
    })
}
