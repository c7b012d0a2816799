//! JSON encoding of series and scalars.
//!
//! ```json
//! {"dim": 2, "trunc": 6, "terms": [{"exp": [1, 0], "coeff": "1/2"}]}
//! ```
//!
//! Exact coefficients are strings (`"p/q"`) or `{"re": "p/q", "im": "p/q"}`;
//! float coefficients are `{"re": number, "im": number}` with as many digits
//! as their precision needs. `"trunc": null` marks an exactly known series.
//! Terms are written in lexicographic exponent order.

use rug::{Complex, Float, Rational};
use serde_json::{json, Map, Number, Value};

use crate::error::{Error, Result};
use crate::order::{MonomialOrder, TieBreak};
use crate::scalar::{float_to_decimal, ComplexRational, Scalar};
use crate::series::{Exponent, TruncatedSeries, EXACT};

fn float_number(x: &Float) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    match float_to_decimal(x).parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::from(x.to_f64()),
    }
}

pub fn scalar_to_json(c: &Scalar) -> Value {
    match c {
        Scalar::Exact(q) if q.is_real() => Value::String(q.re.to_string()),
        Scalar::Exact(q) => json!({"re": q.re.to_string(), "im": q.im.to_string()}),
        Scalar::Float(z) => json!({"re": float_number(z.real()), "im": float_number(z.imag())}),
    }
}

fn real_from_json(v: &Value, prec: u32, path: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => Scalar::parse_complex(s, prec)
            .map_err(|e| Error::Parse(format!("{path}: {e}"))),
        Value::Number(n) => {
            let s = n.to_string();
            if let Ok(r) = s.parse::<Rational>() {
                return Ok(Scalar::from_rational(r));
            }
            Float::parse(&s)
                .map(|p| Scalar::Float(Complex::with_val(prec, (Float::with_val(prec, p), 0))))
                .map_err(|_| Error::Parse(format!("{path}: bad number {s}")))
        }
        _ => Err(Error::Parse(format!("{path}: expected a number or string"))),
    }
}

pub fn scalar_from_json(v: &Value, prec: u32, path: &str) -> Result<Scalar> {
    match v {
        Value::Object(m) => {
            let re = m
                .get("re")
                .map(|x| real_from_json(x, prec, &format!("{path}.re")))
                .transpose()?
                .unwrap_or_else(Scalar::zero);
            let im = m
                .get("im")
                .map(|x| real_from_json(x, prec, &format!("{path}.im")))
                .transpose()?
                .unwrap_or_else(Scalar::zero);
            Ok(&re + &(&im * &Scalar::i()))
        }
        other => real_from_json(other, prec, path),
    }
}

pub fn trunc_to_json(t: i64) -> Value {
    if t == EXACT {
        Value::Null
    } else {
        Value::from(t)
    }
}

pub fn series_to_json(s: &TruncatedSeries) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .iter()
        .map(|(e, c)| json!({"exp": e.as_slice(), "coeff": scalar_to_json(c)}))
        .collect();
    let mut m = Map::new();
    m.insert("dim".into(), Value::from(s.dim()));
    m.insert("trunc".into(), trunc_to_json(s.trunc()));
    if let Some(p) = s.float_prec() {
        m.insert("prec".into(), Value::from(p));
    }
    m.insert("terms".into(), Value::Array(terms));
    Value::Object(m)
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| Error::Parse(format!("{path}: missing field {key:?}")))
}

/// Reads a series; float literals get `prec` bits unless the document
/// carries its own `"prec"`.
pub fn series_from_json(v: &Value, prec: u32, path: &str) -> Result<TruncatedSeries> {
    let m = v
        .as_object()
        .ok_or_else(|| Error::Parse(format!("{path}: expected an object")))?;
    let dim = field(m, "dim", path)?
        .as_u64()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Parse(format!("{path}.dim: expected a positive integer")))?
        as usize;
    let trunc = match field(m, "trunc", path)? {
        Value::Null => EXACT,
        t => t
            .as_i64()
            .ok_or_else(|| Error::Parse(format!("{path}.trunc: expected an integer or null")))?,
    };
    let prec = match m.get("prec") {
        Some(p) => p
            .as_u64()
            .filter(|&p| (16..=1 << 20).contains(&p))
            .ok_or_else(|| Error::Parse(format!("{path}.prec: expected a bit count")))?
            as u32,
        None => prec,
    };
    let terms = field(m, "terms", path)?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{path}.terms: expected an array")))?;
    let mut parsed = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        let tp = format!("{path}.terms[{i}]");
        let tm = t
            .as_object()
            .ok_or_else(|| Error::Parse(format!("{tp}: expected an object")))?;
        let exp = field(tm, "exp", &tp)?
            .as_array()
            .ok_or_else(|| Error::Parse(format!("{tp}.exp: expected an array")))?;
        if exp.len() != dim {
            return Err(Error::Parse(format!(
                "{tp}.exp: expected {dim} entries, found {}",
                exp.len()
            )));
        }
        let exp = exp
            .iter()
            .map(|x| x.as_u64().and_then(|a| u32::try_from(a).ok()))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::Parse(format!("{tp}.exp: expected nonnegative integers")))?;
        let c = scalar_from_json(field(tm, "coeff", &tp)?, prec, &format!("{tp}.coeff"))?;
        parsed.push((Exponent::new(exp), c));
    }
    TruncatedSeries::from_terms(dim, trunc, parsed)
}

pub fn order_to_json(ord: &MonomialOrder) -> Value {
    json!({
        "weights": ord.weights().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "tiebreak": ord.tiebreak(),
    })
}

pub fn order_from_json(v: &Value, path: &str) -> Result<MonomialOrder> {
    let m = v
        .as_object()
        .ok_or_else(|| Error::Parse(format!("{path}: expected an object")))?;
    let ws = field(m, "weights", path)?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{path}.weights: expected an array")))?;
    let weights = ws
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let s = match w {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => String::new(),
            };
            s.parse::<Rational>()
                .map_err(|_| Error::Parse(format!("{path}.weights[{i}]: expected a rational")))
        })
        .collect::<Result<Vec<_>>>()?;
    let tiebreak = match m.get("tiebreak") {
        None => TieBreak::Lex,
        Some(t) => serde_json::from_value(t.clone())
            .map_err(|_| Error::Parse(format!("{path}.tiebreak: expected \"lex\" or \"invlex\"")))?,
    };
    MonomialOrder::new(weights, tiebreak)
}

/// Exact complex rationals as `"p/q"` or `{"re","im"}`; used for chart parameters.
pub fn exact_to_json(c: &ComplexRational) -> Value {
    scalar_to_json(&Scalar::Exact(c.clone()))
}
