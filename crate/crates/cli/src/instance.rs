//! JSON instance files.
//!
//! ```json
//! {
//!   "algebra": {"kind": "sym", "n": 2},
//!   "A": {"builder": "lyapunov", "matrix": [[1, 0], [0, 2]]},
//!   "B": {"builder": "identity"},
//!   "w": [1, 1, 0],
//!   "q": [0, 0, 0],
//!   "metadata": {"source": "hand-written"}
//! }
//! ```
//!
//! Operators are either explicit `dim × dim` row-major arrays or builder
//! objects. Element coordinates follow the core crate's basis order: for
//! `Sym(n)` the diagonal first, then `√2·X_ij` (`i < j`) row by row.

use std::collections::BTreeMap;

use jordan_wlcp_core::{
    lyapunov_transform, stein_transform, Algebra, AlgebraDescriptor, LinearOperator, Matrix, PairProblem,
};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgebraSpec {
    Rn { n: usize },
    Spin { n: usize },
    Sym { n: usize },
    Product { factors: Vec<AlgebraSpec> },
}

impl AlgebraSpec {
    pub fn descriptor(&self) -> AlgebraDescriptor {
        match self {
            Self::Rn { n } => AlgebraDescriptor::Rn(*n),
            Self::Spin { n } => AlgebraDescriptor::Spin(*n),
            Self::Sym { n } => AlgebraDescriptor::Sym(*n),
            Self::Product { factors } => AlgebraDescriptor::Product(factors.iter().map(Self::descriptor).collect()),
        }
    }

    pub fn from_descriptor(d: &AlgebraDescriptor) -> Self {
        match d {
            AlgebraDescriptor::Rn(n) => Self::Rn { n: *n },
            AlgebraDescriptor::Spin(n) => Self::Spin { n: *n },
            AlgebraDescriptor::Sym(n) => Self::Sym { n: *n },
            AlgebraDescriptor::Product(fs) => Self::Product { factors: fs.iter().map(Self::from_descriptor).collect() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Builder {
    Lyapunov,
    Stein,
    Identity,
    Negated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Matrix(Vec<Vec<f64>>),
    Builder {
        builder: Builder,
        #[serde(skip_serializing_if = "Option::is_none")]
        matrix: Option<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceFile {
    pub algebra: AlgebraSpec,
    #[serde(rename = "A")]
    pub a: OperatorSpec,
    #[serde(rename = "B")]
    pub b: OperatorSpec,
    pub w: Vec<f64>,
    pub q: Vec<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl InstanceFile {
    /// Parses and type-checks the JSON text; shape errors carry the field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::parse("$", e.to_string()))?;
        let obj = object(&v, "$")?;
        reject_unknown(obj, "", &["algebra", "A", "B", "w", "q", "metadata"])?;
        let algebra = parse_algebra(field(obj, "", "algebra")?, "algebra")?;
        let a = parse_operator(field(obj, "", "A")?, "A")?;
        let b = parse_operator(field(obj, "", "B")?, "B")?;
        let w = number_array(field(obj, "", "w")?, "w")?;
        let q = number_array(field(obj, "", "q")?, "q")?;
        let metadata = match obj.get("metadata") {
            None | Some(Value::Null) => BTreeMap::new(),
            Some(m) => {
                let m = object(m, "metadata")?;
                m.iter()
                    .map(|(k, v)| match v {
                        Value::String(s) => Ok((k.clone(), s.clone())),
                        _ => Err(CliError::parse(format!("metadata.{k}"), "expected a string")),
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(Self { algebra, a, b, w, q, metadata })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    /// Builds the problem: expands builders, checks every shape against the
    /// algebra and rejects weights outside the cone.
    pub fn to_problem(&self) -> Result<PairProblem> {
        let alg = Algebra::new(self.algebra.descriptor()).map_err(|e| CliError::parse("algebra", e.to_string()))?;
        let a = build_operator(&alg, &self.a, "A")?;
        let b = build_operator(&alg, &self.b, "B")?;
        let w = element(&alg, &self.w, "w")?;
        let q = element(&alg, &self.q, "q")?;
        PairProblem::new(a, b, w, q).map_err(|e| CliError::Validation(e.to_string()))
    }

    /// Explicit-matrix instance for `problem`.
    pub fn from_problem(problem: &PairProblem, metadata: BTreeMap<String, String>) -> Self {
        Self {
            algebra: AlgebraSpec::from_descriptor(problem.algebra().descriptor()),
            a: OperatorSpec::Matrix(problem.a().matrix().to_rows()),
            b: OperatorSpec::Matrix(problem.b().matrix().to_rows()),
            w: problem.w().coords().to_vec(),
            q: problem.q().coords().to_vec(),
            metadata,
        }
    }
}

pub fn parse_instance(text: &str) -> Result<PairProblem> {
    InstanceFile::from_json(text)?.to_problem()
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| CliError::parse(path, format!("expected an object, found {}", kind(v))))
}

fn field<'a>(obj: &'a Map<String, Value>, prefix: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| CliError::parse(join(prefix, key), "missing field"))
}

fn reject_unknown(obj: &Map<String, Value>, prefix: &str, known: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !known.contains(&k.as_str())) {
        Some(k) => Err(CliError::parse(join(prefix, k), "unknown field")),
        None => Ok(()),
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn size(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| CliError::parse(path, format!("expected a nonnegative integer, found {}", kind(v))))
}

fn parse_algebra(v: &Value, path: &str) -> Result<AlgebraSpec> {
    let obj = object(v, path)?;
    let kind_path = join(path, "kind");
    let k = field(obj, path, "kind")?
        .as_str()
        .ok_or_else(|| CliError::parse(&kind_path, "expected a string"))?;
    match k {
        "rn" | "spin" | "sym" => {
            reject_unknown(obj, path, &["kind", "n"])?;
            let n = size(field(obj, path, "n")?, &join(path, "n"))?;
            Ok(match k {
                "rn" => AlgebraSpec::Rn { n },
                "spin" => AlgebraSpec::Spin { n },
                _ => AlgebraSpec::Sym { n },
            })
        }
        "product" => {
            reject_unknown(obj, path, &["kind", "factors"])?;
            let fpath = join(path, "factors");
            let fs = field(obj, path, "factors")?
                .as_array()
                .ok_or_else(|| CliError::parse(&fpath, "expected an array"))?;
            let factors = fs
                .iter()
                .enumerate()
                .map(|(i, f)| parse_algebra(f, &format!("{fpath}[{i}]")))
                .collect::<Result<_>>()?;
            Ok(AlgebraSpec::Product { factors })
        }
        other => Err(CliError::parse(kind_path, format!("unknown algebra kind {other:?} (expected rn, spin, sym or product)"))),
    }
}

fn number_array(v: &Value, path: &str) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| CliError::parse(path, format!("expected an array of numbers, found {}", kind(v))))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| x.as_f64().ok_or_else(|| CliError::parse(format!("{path}[{i}]"), format!("expected a number, found {}", kind(x)))))
        .collect()
}

fn matrix_rows(v: &Value, path: &str) -> Result<Vec<Vec<f64>>> {
    let arr = v.as_array().ok_or_else(|| CliError::parse(path, format!("expected an array of rows, found {}", kind(v))))?;
    arr.iter().enumerate().map(|(i, r)| number_array(r, &format!("{path}[{i}]"))).collect()
}

fn parse_operator(v: &Value, path: &str) -> Result<OperatorSpec> {
    match v {
        Value::Array(_) => Ok(OperatorSpec::Matrix(matrix_rows(v, path)?)),
        Value::Object(obj) => {
            reject_unknown(obj, path, &["builder", "matrix"])?;
            let bpath = join(path, "builder");
            let builder = match field(obj, path, "builder")?.as_str() {
                Some("lyapunov") => Builder::Lyapunov,
                Some("stein") => Builder::Stein,
                Some("identity") => Builder::Identity,
                Some("negated") => Builder::Negated,
                Some(other) => {
                    return Err(CliError::parse(
                        bpath,
                        format!("unknown builder {other:?} (expected lyapunov, stein, identity or negated)"),
                    ))
                }
                None => return Err(CliError::parse(bpath, "expected a string")),
            };
            let matrix = obj.get("matrix").map(|m| matrix_rows(m, &join(path, "matrix"))).transpose()?;
            match (builder, &matrix) {
                (Builder::Identity, Some(_)) => Err(CliError::parse(join(path, "matrix"), "the identity builder takes no matrix")),
                (Builder::Lyapunov | Builder::Stein | Builder::Negated, None) => {
                    Err(CliError::parse(join(path, "matrix"), "missing field"))
                }
                _ => Ok(OperatorSpec::Builder { builder, matrix }),
            }
        }
        _ => Err(CliError::parse(path, format!("expected a matrix or a builder object, found {}", kind(v)))),
    }
}

fn square(rows: &[Vec<f64>], n: usize, path: &str) -> Result<Matrix> {
    if rows.len() != n {
        return Err(CliError::parse(path, format!("expected {n} rows, found {}", rows.len())));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(CliError::parse(format!("{path}[{i}]"), format!("expected {n} entries, found {}", r.len())));
        }
    }
    Ok(Matrix::from_rows(rows).expect("rectangular by the checks above"))
}

fn build_operator(alg: &Algebra, spec: &OperatorSpec, path: &str) -> Result<LinearOperator> {
    let d = alg.dim();
    let mpath = format!("{path}.matrix");
    let op = match spec {
        OperatorSpec::Matrix(rows) => LinearOperator::new(alg, square(rows, d, path)?)?,
        OperatorSpec::Builder { builder: Builder::Identity, .. } => LinearOperator::identity(alg),
        OperatorSpec::Builder { builder: Builder::Negated, matrix: Some(rows) } => {
            LinearOperator::new(alg, square(rows, d, &mpath)?)?.negated()
        }
        OperatorSpec::Builder { builder, matrix: Some(rows) } => {
            let AlgebraDescriptor::Sym(n) = alg.descriptor() else {
                return Err(CliError::parse(format!("{path}.builder"), "lyapunov and stein builders need a sym algebra"));
            };
            let m = square(rows, *n, &mpath)?;
            if *builder == Builder::Lyapunov {
                lyapunov_transform(&m)?
            } else {
                stein_transform(&m)?
            }
        }
        OperatorSpec::Builder { matrix: None, .. } => return Err(CliError::parse(mpath, "missing field")),
    };
    // builders produce operators on their own `Sym(n)` handle; rebind to ours
    Ok(LinearOperator::new(alg, op.matrix().clone())?)
}

fn element(alg: &Algebra, coords: &[f64], path: &str) -> Result<jordan_wlcp_core::Element> {
    if coords.len() != alg.dim() {
        return Err(CliError::parse(path, format!("expected {} coordinates, found {}", alg.dim(), coords.len())));
    }
    Ok(alg.element(coords.to_vec())?)
}
