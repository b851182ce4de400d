//! JSON interchange formats.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use period_engine::continuation::{Matrix, PathPolyline};
use period_engine::frobenius::FrobeniusBasis;
use period_engine::mirror::{AlgebraicYukawa, Prepotential};
use period_engine::numeric::{ComplexPoint, Ctx};
use period_engine::toric::{LatticePolytope2D, MonomialList, Vec2};
use period_engine::{LogSolution, Poly, Rational, ThetaOperator, TruncatedSeries};

use crate::CliError;

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| schema(format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| schema(format!("{what} must be an array")))
}

fn integer(v: &Value) -> Result<BigInt, CliError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(schema(format!("expected an integer, got {v}"))),
    };
    BigInt::from_str(text.trim()).map_err(|_| schema(format!("not an integer: {text}")))
}

fn small_integer(v: &Value) -> Result<i64, CliError> {
    i64::try_from(integer(v)?).map_err(|_| schema(format!("integer out of range: {v}")))
}

pub fn parse_rational(text: &str) -> Result<Rational, CliError> {
    Rational::from_str(text.trim()).map_err(|_| schema(format!("not a rational number: {text}")))
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn operator_from_json(v: &Value) -> Result<ThetaOperator, CliError> {
    let var = field(v, "var")?.as_str().ok_or_else(|| schema("\"var\" must be a string"))?;
    let rows = array(field(v, "theta_coeffs")?, "\"theta_coeffs\"")?;
    let coeffs = rows
        .iter()
        .map(|row| array(row, "each θ-coefficient")?.iter().map(integer).collect())
        .collect::<Result<Vec<Vec<BigInt>>, _>>()?;
    if coeffs.len() < 2 {
        return Err(schema("operator needs at least two θ-coefficients"));
    }
    Ok(ThetaOperator::from_bigint_coeffs(var, &coeffs)?)
}

pub fn operator_json(op: &ThetaOperator) -> Value {
    let rows: Vec<Value> = op
        .int_coeffs()
        .iter()
        .map(|row| Value::Array(row.iter().map(|c| json_integer(c)).collect()))
        .collect();
    json!({ "var": op.var(), "theta_coeffs": rows, "display": op.to_string() })
}

fn json_integer(c: &BigInt) -> Value {
    serde_json::from_str(&c.to_string()).expect("integer literal")
}

pub fn series_json(s: &TruncatedSeries) -> Value {
    json!({
        "exponent": rational_json(s.exponent()),
        "order": s.order(),
        "coeffs": s.coeffs().iter().map(rational_json).collect::<Vec<_>>(),
    })
}

fn log_solution_json(s: &LogSolution) -> Value {
    json!({
        "exponent": rational_json(s.exponent()),
        "log_degree": s.log_degree(),
        "parts": s.parts().iter().map(series_json).collect::<Vec<_>>(),
    })
}

pub fn basis_json(b: &FrobeniusBasis) -> Value {
    Value::Array(b.solutions.iter().map(log_solution_json).collect())
}

fn poly_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(rational_json).collect())
}

pub fn algebraic_json(a: &AlgebraicYukawa, var: &str) -> Value {
    json!({
        "num": poly_json(&a.num),
        "den": poly_json(&a.den),
        "exponent": rational_json(&a.exponent),
        "display": a.to_string().replace('z', var),
    })
}

pub fn prepotential_json(p: &Prepotential) -> Value {
    json!({
        "kappa": rational_json(&p.kappa),
        "quadratic": { "c2": p.quadratic.c2, "c1": p.quadratic.c1, "constant": p.quadratic.constant },
        "instanton": p.instanton.iter().map(rational_json).collect::<Vec<_>>(),
        "yukawa": series_json(&p.yukawa()),
    })
}

pub fn point_json(z: &ComplexPoint, digits: usize, ctx: &mut Ctx) -> Value {
    let (re, im) = ctx.format_point(z, digits);
    json!([re, im])
}

pub fn matrix_json(m: &Matrix, digits: usize, ctx: &mut Ctx) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(|x| point_json(x, digits, ctx)).collect()))
            .collect(),
    )
}

pub fn parse_point(text: &str, ctx: &mut Ctx) -> Result<ComplexPoint, CliError> {
    let (re, im) = text.split_once(',').unwrap_or((text, "0"));
    ctx.parse(re, im).map_err(|e| schema(e.to_string()))
}

/// Vertices and optional working precision of a path file.
pub fn path_from_json(v: &Value, ctx: &mut Ctx) -> Result<PathPolyline, CliError> {
    let verts = array(field(v, "vertices")?, "\"vertices\"")?
        .iter()
        .map(|p| {
            let pair = array(p, "a vertex")?;
            match pair.as_slice() {
                [Value::String(re), Value::String(im)] => ctx.parse(re, im).map_err(|e| schema(e.to_string())),
                _ => Err(schema("vertices are [\"re\", \"im\"] string pairs")),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    PathPolyline::new(verts).map_err(|e| schema(e.to_string()))
}

pub fn path_precision(v: &Value) -> Result<Option<usize>, CliError> {
    match v.get("precision_digits") {
        None => Ok(None),
        Some(p) => p.as_u64().map(|d| Some(d as usize)).ok_or_else(|| schema("\"precision_digits\" must be a natural number")),
    }
}

fn vec2(v: &Value) -> Result<Vec2, CliError> {
    match array(v, "a lattice vector")?.as_slice() {
        [x, y] => Ok((small_integer(x)?, small_integer(y)?)),
        _ => Err(schema("lattice vectors have two entries")),
    }
}

pub fn polytope_from_json(v: &Value) -> Result<LatticePolytope2D, CliError> {
    let verts = array(field(v, "vertices")?, "\"vertices\"")?.iter().map(vec2).collect::<Result<Vec<_>, _>>()?;
    Ok(LatticePolytope2D::new(&verts)?)
}

/// Optional `"rays"` entry of a polytope file.
pub fn rays_from_json(v: &Value) -> Result<Option<Vec<Vec2>>, CliError> {
    match v.get("rays") {
        None => Ok(None),
        Some(r) => Ok(Some(array(r, "\"rays\"")?.iter().map(vec2).collect::<Result<_, _>>()?)),
    }
}

pub fn vectors_json(vs: &[Vec2]) -> Value {
    Value::Array(vs.iter().map(|v| json!([v.0, v.1])).collect())
}

pub fn monomials_json(list: &MonomialList, var: &str) -> Value {
    json!({
        "rays": vectors_json(&list.rays),
        "monomials": list
            .entries
            .iter()
            .map(|m| json!({ "point": [m.point.0, m.point.1], "exponents": m.exponents, "monomial": m.render(var) }))
            .collect::<Vec<_>>(),
    })
}

/// Flattens a JSON value into `path<TAB>value` lines.
pub fn to_tsv(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    walk(&key(k), x, out);
                }
            }
            Value::Array(items) => {
                for (i, x) in items.iter().enumerate() {
                    walk(&key(&i.to_string()), x, out);
                }
            }
            Value::String(s) => out.push_str(&format!("{prefix}\t{s}\n")),
            other => out.push_str(&format!("{prefix}\t{other}\n")),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}
