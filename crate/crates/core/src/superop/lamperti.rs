//! Factorization of onto Schatten-`L^p` isometries as `T(X) = W·λ·J(X)`.
//!
//! `W` is unitary, `λ ≥ 0` spans the (trivial) center of the matrix algebra
//! and `J` is a Jordan automorphism. On a matrix algebra with the trace as
//! reference weight the trace condition `Tr X = λ^p Tr J(X)` forces `λ = 1`;
//! the decomposition still reports `λ` and the condition's defect rather
//! than assuming it.

use serde::Serialize;

use super::jordan::{hermitian_basis, jordan_check, jordan_classify, JordanKind, JordanReport};
use super::{isometry_check, IsometryReport, NormKind, SuperOperator};
use crate::check::CheckConfig;
use crate::error::{Error, Result};
use crate::linalg::{self, identity, ComplexMatrix};
use crate::lp::PExponent;

#[derive(Debug, Clone, Serialize)]
pub struct LampertiDecomposition {
    #[serde(serialize_with = "crate::io::ser_matrix")]
    pub w: ComplexMatrix,
    pub lambda: f64,
    #[serde(skip)]
    pub j: SuperOperator,
    pub kind: JordanKind,
    #[serde(serialize_with = "crate::io::ser_matrix")]
    pub implementing_unitary: ComplexMatrix,
    /// Largest `‖T(E_ij) − λ W J(E_ij)‖_F` over matrix units.
    pub residual: f64,
    /// `‖P − λ·1‖_F` for the positive polar factor `P` of `T(1)`.
    pub centrality_defect: f64,
    /// `|λ^p − 1|`, the trace condition on a factor with trace weight.
    pub trace_condition_defect: f64,
    pub trace_condition_holds: bool,
    pub jordan: JordanReport,
    pub isometry: IsometryReport,
}

fn not_decomposable(reason: impl Into<String>, defect: f64, witness: ComplexMatrix) -> Error {
    Error::NotDecomposable {
        reason: reason.into(),
        defect,
        witness: Box::new(witness),
    }
}

/// Decomposes an onto isometry of the Schatten class `L^p`.
///
/// Steps: polar-factor `T(1) = W P`, require `P = λ·1`, set
/// `J = λ^{-1} W* T(·)`, then check and classify `J`.
pub fn lamperti_decompose(
    t: &SuperOperator,
    p: PExponent,
    cfg: &CheckConfig,
) -> Result<LampertiDecomposition> {
    let n = t.dim();
    let tol = cfg.tol;

    let isometry = isometry_check(t, NormKind::Trace, p, cfg)?;
    if !isometry.is_isometry || !isometry.onto {
        let reason = if isometry.onto {
            "not an L^p isometry"
        } else {
            "not onto"
        };
        return Err(not_decomposable(
            reason,
            isometry.max_rel_defect,
            isometry.worst_input.clone(),
        ));
    }

    let image_of_one = t.apply(&identity(n));
    let polar = linalg::polar_decompose(&image_of_one)
        .map_err(|_| not_decomposable("T(1) is singular", f64::INFINITY, identity(n)))?;
    let lambda = linalg::trace(&polar.positive).re / n as f64;
    let centrality_defect = linalg::frobenius(&(&polar.positive - identity(n).scale(lambda)));
    if centrality_defect > tol.bound(lambda * (n as f64).sqrt()) {
        return Err(not_decomposable(
            "positive part of T(1) is not central",
            centrality_defect,
            polar.positive,
        ));
    }

    let w = polar.unitary;
    let j = SuperOperator::left_multiply(&w.adjoint())
        .compose(t)
        .scale(1.0 / lambda);

    let jordan = jordan_check(&j, tol)?;
    if !jordan.is_jordan {
        let worst = hermitian_basis(n)
            .into_iter()
            .map(|a| {
                let ja = j.apply(&a);
                let d = linalg::frobenius(&(j.apply(&(&a * &a)) - &ja * &ja));
                (d, a)
            })
            .max_by(|x, y| x.0.total_cmp(&y.0))
            .map(|(_, a)| a)
            .unwrap_or_else(|| identity(n));
        return Err(not_decomposable(
            "W* T / λ is not a Jordan automorphism",
            jordan.defect,
            worst,
        ));
    }
    let class = jordan_classify(&j, tol).map_err(|e| {
        not_decomposable(format!("Jordan part not classifiable: {e}"), jordan.defect, identity(n))
    })?;

    let trace_condition_defect = match p {
        PExponent::Finite(p) => (lambda.powf(p) - 1.0).abs(),
        PExponent::Infinity => (lambda - 1.0).abs(),
    };
    let rebuilt = SuperOperator::left_multiply(&w)
        .compose(&class.to_superop())
        .scale(lambda);
    let residual = t.distance_on_units(&rebuilt);

    Ok(LampertiDecomposition {
        w,
        lambda,
        j,
        kind: class.kind,
        implementing_unitary: class.unitary,
        residual,
        centrality_defect,
        trace_condition_defect,
        trace_condition_holds: trace_condition_defect <= tol.bound(1.0),
        jordan,
        isometry,
    })
}
