use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{Map, Number, Value};
use steinitz_ip::{validate, IPInstance, Rational, RawInstance, SolveOutcome, SolveStats};

#[derive(Debug)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(msg: impl Into<String>) -> ParseError {
    ParseError(msg.into())
}

pub fn read_source(path: &str) -> Result<String, ParseError> {
    if path == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| bad(format!("stdin: {e}")))
    } else {
        std::fs::read_to_string(path).map_err(|e| bad(format!("{path}: {e}")))
    }
}

/// Integers may be JSON numbers of any size or decimal strings.
fn integer(v: &Value, what: &str) -> Result<BigInt, ParseError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_owned(),
        _ => return Err(bad(format!("{what}: expected an integer"))),
    };
    BigInt::from_str(&text).map_err(|_| bad(format!("{what}: `{text}` is not an integer")))
}

fn rational(v: &Value, what: &str) -> Result<Rational, ParseError> {
    match v {
        Value::String(s) if s.contains('/') => {
            Rational::from_str(s.trim()).map_err(|_| bad(format!("{what}: `{s}` is not a rational")))
        }
        _ => integer(v, what).map(Rational::from_integer),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array().ok_or_else(|| bad(format!("{what}: expected an array")))
}

fn integers(v: &Value, what: &str) -> Result<Vec<BigInt>, ParseError> {
    array(v, what)?
        .iter()
        .enumerate()
        .map(|(i, x)| integer(x, &format!("{what}[{i}]")))
        .collect()
}

fn size(obj: &Map<String, Value>, key: &str) -> Result<usize, ParseError> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| bad(format!("missing or invalid \"{key}\"")))
}

pub fn parse_instance(text: &str) -> Result<IPInstance, ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    let obj = doc.as_object().ok_or_else(|| bad("instance must be a JSON object"))?;
    let field = |k: &str| obj.get(k).ok_or_else(|| bad(format!("missing \"{k}\"")));
    let a = array(field("A")?, "A")?
        .iter()
        .enumerate()
        .map(|(i, row)| integers(row, &format!("A[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let raw = RawInstance {
        m: size(obj, "m")?,
        n: size(obj, "n")?,
        a,
        b: integers(field("b")?, "b")?,
        c: integers(field("c")?, "c")?,
        upper: match obj.get("u") {
            None | Some(Value::Null) => None,
            Some(u) => Some(integers(u, "u")?),
        },
    };
    validate(&raw).map_err(|e| bad(e.to_string()))
}

/// Vector families are either a bare array of vectors or an object with
/// `vectors` and an optional `norm_bound`.
pub fn parse_vectors(text: &str) -> Result<(Vec<Vec<Rational>>, Option<Rational>), ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    let (list, bound) = match &doc {
        Value::Array(_) => (&doc, None),
        Value::Object(obj) => (
            obj.get("vectors").ok_or_else(|| bad("missing \"vectors\""))?,
            obj.get("norm_bound").map(|b| rational(b, "norm_bound")).transpose()?,
        ),
        _ => return Err(bad("expected an array of vectors")),
    };
    let vectors = array(list, "vectors")?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            array(v, "vector")?
                .iter()
                .map(|x| rational(x, &format!("vectors[{i}]")))
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((vectors, bound))
}

fn number(v: &BigInt) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integers are valid JSON numbers"))
}

fn numbers(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(number).collect())
}

/// Instance document with plain JSON numbers, in key order m, n, A, b, c, u.
pub fn instance_json(inst: &IPInstance) -> Value {
    let mut obj = Map::new();
    obj.insert("m".into(), inst.m().into());
    obj.insert("n".into(), inst.n().into());
    obj.insert(
        "A".into(),
        Value::Array((0..inst.m()).map(|i| numbers(inst.a().row(i))).collect()),
    );
    obj.insert("b".into(), numbers(inst.b()));
    obj.insert("c".into(), numbers(inst.c()));
    if let Some(u) = inst.upper() {
        obj.insert("u".into(), numbers(u));
    }
    Value::Object(obj)
}

#[derive(Debug, Serialize)]
pub struct Stats {
    pub nodes_explored: usize,
    pub arcs_relaxed: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct ResultFile {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    pub stats: Stats,
    pub algorithm: String,
}

impl ResultFile {
    pub fn new(outcome: &SolveOutcome, stats: &SolveStats, wall_ms: f64, algorithm: &str) -> Self {
        Self {
            status: outcome.status(),
            x: outcome.solution().map(|x| x.iter().map(BigInt::to_string).collect()),
            value: outcome.value().map(BigInt::to_string),
            stats: Stats {
                nodes_explored: stats.nodes_explored,
                arcs_relaxed: stats.arcs_relaxed,
                wall_ms,
            },
            algorithm: algorithm.to_owned(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_and_string_integers() {
        let text = r#"{"m":1,"n":2,"A":[[2,"3"]],"b":[123456789012345678901234567890],"c":[1,1]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.b()[0].to_string(), "123456789012345678901234567890");
        assert_eq!(inst.delta(), &BigInt::from(3));
    }

    #[test]
    fn rejects_fractions_and_bad_shapes() {
        assert!(parse_instance(r#"{"m":1,"n":1,"A":[[1.5]],"b":[1],"c":[1]}"#).is_err());
        assert!(parse_instance(r#"{"m":1,"n":2,"A":[[2,3]],"b":[5,7],"c":[1,1]}"#).is_err());
        assert!(parse_instance("[1,2]").is_err());
    }

    #[test]
    fn instance_round_trip() {
        let inst = IPInstance::from_i64(&[vec![1, -4], vec![0, 2]], &[0, 0], &[0, 0], Some(&[3, 3])).unwrap();
        let text = instance_json(&inst).to_string();
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn vector_forms() {
        let (v, b) = parse_vectors(r#"[[1],["-1"]]"#).unwrap();
        assert_eq!(v.len(), 2);
        assert!(b.is_none());
        let (v, b) = parse_vectors(r#"{"vectors":[["1/2"],["-1/2"]],"norm_bound":"1"}"#).unwrap();
        assert_eq!(v[0][0], Rational::new(1.into(), 2.into()));
        assert_eq!(b.unwrap(), Rational::from_integer(1.into()));
    }
}
