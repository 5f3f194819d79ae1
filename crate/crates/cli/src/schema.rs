//! Input documents for each subcommand.
//!
//! Matrices are row-major arrays of `[re, im]` pairs. `p` is a number or
//! the string `"inf"`.

use std::fs;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use qlamperti::classical::{ClassicalOperator, FiniteMeasureSpace, PointMap};
use qlamperti::io::{matrix_from_json, JsonMatrix, PointMapJson, SuperOperatorJson};
use qlamperti::linalg::ComplexMatrix;
use qlamperti::{PExponent, QuantumMeasure, SuperOperator, Tolerance};

use crate::UsageError;

/// Reads `arg` as inline JSON when it starts with `{`, else as a file path.
pub fn load<T: DeserializeOwned>(arg: &str) -> Result<T, UsageError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| UsageError(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| UsageError(format!("input does not match the schema: {e}")))
}

fn field<T>(name: &str, r: qlamperti::Result<T>) -> Result<T, UsageError> {
    r.map_err(|e| UsageError(format!("field `{name}`: {e}")))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PValue {
    Number(f64),
    Name(String),
}

impl PValue {
    pub fn exponent(&self) -> Result<PExponent, UsageError> {
        match self {
            Self::Number(p) => field("p", PExponent::new(*p)),
            Self::Name(s) if s == "inf" || s == "infinity" => Ok(PExponent::Infinity),
            Self::Name(s) => Err(UsageError(format!("field `p`: expected a number or \"inf\", got {s:?}"))),
        }
    }
}

fn exponent_or(p: &Option<PValue>, default: f64) -> Result<PExponent, UsageError> {
    match p {
        Some(v) => v.exponent(),
        None => Ok(PExponent::Finite(default)),
    }
}

pub fn matrix(rows: &JsonMatrix, name: &str) -> Result<ComplexMatrix, UsageError> {
    field(name, matrix_from_json(rows, name))
}

fn measure(rho: &JsonMatrix, tol: Tolerance) -> Result<QuantumMeasure, UsageError> {
    field("rho", QuantumMeasure::from_matrix(matrix(rho, "rho")?, tol))
}

fn measure_or_trace(rho: &Option<JsonMatrix>, n: usize, tol: Tolerance) -> Result<QuantumMeasure, UsageError> {
    let m = match rho {
        Some(r) => measure(r, tol)?,
        None => return Ok(QuantumMeasure::maximally_mixed(n)),
    };
    if m.dim() != n {
        return Err(UsageError(format!("field `rho`: dimension {} does not match {n}", m.dim())));
    }
    Ok(m)
}

/// `{"matrix": …, "p": 2, "rho": …}`; without `rho` only the Schatten norm.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormInput {
    pub matrix: JsonMatrix,
    pub p: PValue,
    pub rho: Option<JsonMatrix>,
}

impl NormInput {
    pub fn parse(&self, tol: Tolerance) -> Result<(ComplexMatrix, PExponent, Option<QuantumMeasure>), UsageError> {
        let p = self.p.exponent()?;
        let a = matrix(&self.matrix, "matrix")?;
        let m = match &self.rho {
            Some(_) => Some(measure_or_trace(&self.rho, a.nrows(), tol)?),
            None => None,
        };
        Ok((a, p, m))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnerInput {
    pub a: JsonMatrix,
    pub b: JsonMatrix,
    pub rho: JsonMatrix,
}

impl InnerInput {
    pub fn parse(&self, tol: Tolerance) -> Result<(ComplexMatrix, ComplexMatrix, QuantumMeasure), UsageError> {
        Ok((matrix(&self.a, "a")?, matrix(&self.b, "b")?, measure(&self.rho, tol)?))
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransportDirection {
    #[default]
    Forward,
    Inverse,
}

/// A superoperator document `{"dim", "matrix"}` with optional extras.
/// `rho` defaults to the maximally mixed state and `p` to 2.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperopInput {
    pub dim: usize,
    pub matrix: JsonMatrix,
    pub p: Option<PValue>,
    pub rho: Option<JsonMatrix>,
    #[serde(default)]
    pub direction: TransportDirection,
}

pub struct ParsedSuperop {
    pub t: SuperOperator,
    pub p: PExponent,
    pub m: QuantumMeasure,
    pub direction: TransportDirection,
}

impl SuperopInput {
    pub fn parse(&self, tol: Tolerance) -> Result<ParsedSuperop, UsageError> {
        let js = SuperOperatorJson {
            dim: self.dim,
            matrix: self.matrix.clone(),
        };
        let t = field("matrix", js.to_superop())?;
        Ok(ParsedSuperop {
            p: exponent_or(&self.p, 2.0)?,
            m: measure_or_trace(&self.rho, t.dim(), tol)?,
            t,
            direction: self.direction,
        })
    }
}

/// `{"u": …, "lambda": {"dim", "matrix"}, "rho": …, "steps": 3}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeRepInput {
    pub u: JsonMatrix,
    pub lambda: SuperOperatorJson,
    pub rho: Option<JsonMatrix>,
    #[serde(default = "default_steps")]
    pub steps: u32,
}

fn default_steps() -> u32 {
    3
}

impl ChangeRepInput {
    pub fn parse(&self, tol: Tolerance) -> Result<(ComplexMatrix, SuperOperator, QuantumMeasure), UsageError> {
        let u = matrix(&self.u, "u")?;
        let lambda = field("lambda", self.lambda.to_superop())?;
        let m = measure_or_trace(&self.rho, u.nrows(), tol)?;
        if lambda.dim() != u.nrows() {
            return Err(UsageError(format!(
                "field `lambda`: dimension {} does not match `u` ({})",
                lambda.dim(),
                u.nrows()
            )));
        }
        Ok((u, lambda, m))
    }
}

/// A point map, optionally with its measure: `{"n", "map", "mu"}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointMapInput {
    pub n: usize,
    pub map: Vec<usize>,
    pub mu: Option<Vec<f64>>,
}

impl PointMapInput {
    pub fn parse(&self) -> Result<(PointMap, FiniteMeasureSpace), UsageError> {
        let s = field(
            "map",
            PointMap::from_json(&PointMapJson {
                n: self.n,
                map: self.map.clone(),
            }),
        )?;
        let sp = space_or_uniform(&self.mu, self.n)?;
        Ok((s, sp))
    }
}

fn space_or_uniform(mu: &Option<Vec<f64>>, n: usize) -> Result<FiniteMeasureSpace, UsageError> {
    match mu {
        None => Ok(FiniteMeasureSpace::uniform(n)),
        Some(mu) if mu.len() != n => Err(UsageError(format!(
            "field `mu`: length {} does not match {n}",
            mu.len()
        ))),
        Some(mu) => field("mu", FiniteMeasureSpace::new(mu.clone())),
    }
}

/// A classical operator on `L^p(μ)`: `{"matrix", "mu", "p"}`, uniform `μ`
/// and `p = 2` by default.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalInput {
    pub matrix: JsonMatrix,
    pub mu: Option<Vec<f64>>,
    pub p: Option<PValue>,
}

impl ClassicalInput {
    pub fn parse(&self) -> Result<(ClassicalOperator, FiniteMeasureSpace, PExponent), UsageError> {
        let op = field("matrix", ClassicalOperator::from_matrix(matrix(&self.matrix, "matrix")?))?;
        let sp = space_or_uniform(&self.mu, op.cols())?;
        Ok((op, sp, exponent_or(&self.p, 2.0)?))
    }
}

/// Either an explicit state or a dimension for a seeded random state.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormScaleInput {
    pub rho: Option<JsonMatrix>,
    pub dim: Option<usize>,
}

impl NormScaleInput {
    pub fn parse(&self, tol: Tolerance, seed: u64) -> Result<QuantumMeasure, UsageError> {
        match (&self.rho, self.dim) {
            (Some(_), Some(_)) => Err(UsageError("give either `rho` or `dim`, not both".into())),
            (Some(r), None) => measure(r, tol),
            (None, Some(n)) if n >= 1 => {
                let mut rng = qlamperti::random::seeded(seed);
                Ok(QuantumMeasure::new(qlamperti::random::random_density(n, &mut rng)))
            }
            (None, Some(_)) => Err(UsageError("field `dim`: must be >= 1".into())),
            (None, None) => Ok(QuantumMeasure::maximally_mixed(2)),
        }
    }
}
