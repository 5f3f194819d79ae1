//! Jordan morphisms of the full matrix algebra.
//!
//! A linear, *-preserving bijection `J` with `J(A²) = J(A)²` is either
//! `X ↦ U X U*` or `X ↦ U Xᵀ U*`. The two cases are told apart by the rank
//! of the Choi matrix of `J` and of `J ∘ transpose`.

use serde::Serialize;

use super::{choi, choi_vector_to_matrix, normalize_phase, SuperOperator};
use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, Tolerance};

/// Relative singular value cut for Choi rank and invertibility.
pub const RANK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JordanKind {
    StarIsomorphism,
    StarAntiIsomorphism,
}

#[derive(Debug, Clone, Serialize)]
pub struct JordanReport {
    pub is_jordan: bool,
    pub defect: f64,
    /// Largest `‖J(A∘B) − J(A)∘J(B)‖_F` over basis pairs, `A∘B = (AB+BA)/2`.
    pub square_defect: f64,
    /// Largest `‖J(A*) − J(A)*‖_F` over the basis.
    pub star_defect: f64,
    /// `max(0, 1 − (σ_min/σ_max)/RANK_TOLERANCE)`: 0 for comfortably
    /// invertible maps, 1 for singular ones.
    pub invertibility_defect: f64,
}

/// Orthonormal basis of the Hermitian matrices under `Tr(A* B)`.
pub fn hermitian_basis(n: usize) -> Vec<ComplexMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(linalg::matrix_unit(n, i, i));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let eij = linalg::matrix_unit(n, i, j);
            let eji = linalg::matrix_unit(n, j, i);
            out.push((&eij + &eji).scale(s));
            out.push((&eij - &eji) * c(0.0, s));
        }
    }
    out
}

fn jordan_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    (a * b + b * a).scale(0.5)
}

/// Checks the Jordan identity in polarized form on all basis pairs, which
/// by bilinearity covers `J(A²) = J(A)²` for every `A`.
pub fn jordan_check(j: &SuperOperator, tol: Tolerance) -> Result<JordanReport> {
    let basis = hermitian_basis(j.dim());
    let images: Vec<ComplexMatrix> = basis.iter().map(|a| j.apply(a)).collect();

    let mut square = 0.0f64;
    for (k, a) in basis.iter().enumerate() {
        for l in k..basis.len() {
            let lhs = j.apply(&jordan_product(a, &basis[l]));
            let rhs = jordan_product(&images[k], &images[l]);
            square = square.max(linalg::frobenius(&(lhs - rhs)));
        }
    }
    let star = images
        .iter()
        .map(linalg::hermitian_defect)
        .fold(0.0, f64::max);

    let sv = linalg::singular_values(j.matrix())?;
    let top = sv.first().copied().unwrap_or(0.0);
    let bottom = sv.last().copied().unwrap_or(0.0);
    let ratio = if top > 0.0 { bottom / top } else { 0.0 };
    let invertibility = (1.0 - ratio / RANK_TOLERANCE).max(0.0);

    let defect = square + star + invertibility;
    Ok(JordanReport {
        is_jordan: defect <= tol.bound(1.0),
        defect,
        square_defect: square,
        star_defect: star,
        invertibility_defect: invertibility,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct JordanClass {
    pub kind: JordanKind,
    /// Implementing unitary, global phase fixed by
    /// [`normalize_phase`](super::normalize_phase).
    #[serde(serialize_with = "crate::io::ser_matrix")]
    pub unitary: ComplexMatrix,
    /// Largest `‖J(E_ij) − U E_ij U*‖_F` (or with `E_ijᵀ`) over matrix units.
    pub residual: f64,
}

impl JordanClass {
    pub fn to_superop(&self) -> SuperOperator {
        let ad = SuperOperator::conjugation(&self.unitary);
        match self.kind {
            JordanKind::StarIsomorphism => ad,
            JordanKind::StarAntiIsomorphism => ad.compose(&SuperOperator::transpose(self.unitary.nrows())),
        }
    }
}

fn rank_one_unitary(t: &SuperOperator) -> Result<Option<ComplexMatrix>> {
    let ch = choi(t);
    let dec = linalg::svd(&ch.matrix)?;
    let s = &dec.singular_values;
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 || s.get(1).is_some_and(|&x| x > RANK_TOLERANCE * top) {
        return Ok(None);
    }
    let v = dec.left.column(0).into_owned().scale(top.sqrt());
    let raw = choi_vector_to_matrix(&v, t.dim());
    let u = match linalg::polar_decompose(&raw) {
        Ok(p) => p.unitary,
        Err(_) => return Ok(None),
    };
    Ok(Some(normalize_phase(&u)))
}

/// Recovers the kind and implementing unitary of a Jordan automorphism.
pub fn jordan_classify(j: &SuperOperator, tol: Tolerance) -> Result<JordanClass> {
    let n = j.dim();
    let (kind, unitary) = if let Some(u) = rank_one_unitary(j)? {
        (JordanKind::StarIsomorphism, u)
    } else if let Some(u) = rank_one_unitary(&j.compose(&SuperOperator::transpose(n)))? {
        (JordanKind::StarAntiIsomorphism, u)
    } else {
        return Err(Error::NotClassifiable(
            "neither Choi(J) nor Choi(J ∘ transpose) has rank one".into(),
        ));
    };
    let class = JordanClass {
        kind,
        unitary,
        residual: 0.0,
    };
    let residual = j.distance_on_units(&class.to_superop());
    if residual > tol.bound(1.0) {
        return Err(Error::NotClassifiable(format!(
            "recovered unitary reproduces the map only to {residual:e}"
        )));
    }
    Ok(JordanClass { residual, ..class })
}
