//! Non-commutative L^p norms on the matrix algebra.
//!
//! For a faithful state `ω(X) = Tr(ρ X)` the weighted norm is
//! `‖A‖_p = (Tr |ρ^{1/2p} A ρ^{1/2p}|^p)^{1/p}`; with `ρ` replaced by the
//! trace it reduces to the Schatten norm. In finite dimension every matrix
//! has finite norm, so the embedding of the algebra into `L^p` is the
//! identity map on matrices and no completion step is needed.
//!
//! The map `τ_p : X ↦ ρ^{1/2p} X ρ^{1/2p}` carries the weighted norm onto
//! the Schatten norm.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::check::CheckConfig;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, DensityMatrix, Tolerance};
use crate::random::{gaussian_matrix, seeded};
use crate::superop::{positivity_check, SuperOperator};

/// Exponent grid shared by every report.
pub const EXPONENT_GRID: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            return Ok(Self::Infinity);
        }
        Ok(Self::Finite(p))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    /// Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(&self) -> PExponent {
        match *self {
            Self::Infinity => Self::Finite(1.0),
            Self::Finite(1.0) => Self::Infinity,
            Self::Finite(p) => Self::Finite(p / (p - 1.0)),
        }
    }

    /// The exponent `1/(2p)` of the weighting, zero at infinity.
    pub fn half_inverse(&self) -> f64 {
        match *self {
            Self::Finite(p) => 1.0 / (2.0 * p),
            Self::Infinity => 0.0,
        }
    }

    pub fn grid() -> Vec<PExponent> {
        EXPONENT_GRID.iter().map(|&p| Self::Finite(p)).collect()
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

/// The faithful state `ω(·) = Tr(ρ ·)`.
///
/// Holds the eigendecomposition of `ρ`, so every power `ρ^r` costs one
/// matrix product.
#[derive(Debug, Clone)]
pub struct QuantumMeasure {
    rho: DensityMatrix,
    tol: Tolerance,
}

impl QuantumMeasure {
    pub fn new(rho: DensityMatrix) -> Self {
        Self {
            rho,
            tol: Tolerance::default(),
        }
    }

    pub fn from_matrix(m: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        Ok(Self {
            rho: DensityMatrix::new(m, tol)?,
            tol,
        })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::new(DensityMatrix::maximally_mixed(n))
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn power(&self, r: f64) -> Result<ComplexMatrix> {
        linalg::frac_power_of(self.rho.eig(), r, self.tol)
    }

    /// `ω(X) = Tr(ρ X)`.
    pub fn expectation(&self, x: &ComplexMatrix) -> num_complex::Complex64 {
        linalg::trace(&(self.rho.matrix() * x))
    }

    fn check_dim(&self, a: &ComplexMatrix) -> Result<()> {
        let n = linalg::ensure_square(a)?;
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: n,
            });
        }
        Ok(())
    }
}

/// `(Σ σ_i^p)^{1/p}`, or the largest singular value at `p = ∞`.
pub fn schatten_norm(a: &ComplexMatrix, p: PExponent) -> Result<f64> {
    let s = linalg::singular_values(a)?;
    Ok(match p {
        PExponent::Infinity => s.first().copied().unwrap_or(0.0),
        PExponent::Finite(1.0) => s.iter().sum(),
        PExponent::Finite(2.0) => s.iter().map(|x| x * x).sum::<f64>().sqrt(),
        PExponent::Finite(p) => {
            // scaled to avoid overflow for large p
            let top = s.first().copied().unwrap_or(0.0);
            if top == 0.0 {
                0.0
            } else {
                top * s.iter().map(|x| (x / top).powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    })
}

/// Weighted norm `(Tr |ρ^{1/2p} A ρ^{1/2p}|^p)^{1/p}`.
///
/// At `p = ∞` this returns the operator norm of `A` itself: `L^∞` is the
/// algebra with its C*-norm, the dual of `L¹`.
pub fn weighted_norm(a: &ComplexMatrix, m: &QuantumMeasure, p: PExponent) -> Result<f64> {
    m.check_dim(a)?;
    match p {
        PExponent::Infinity => schatten_norm(a, p),
        PExponent::Finite(_) => {
            let w = m.power(p.half_inverse())?;
            schatten_norm(&(&w * a * &w), p)
        }
    }
}

/// `⟨A, B⟩ = Tr(ρ^{1/2} A* ρ^{1/2} B)`, conjugate-linear in `A`.
pub fn weighted_inner(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    m: &QuantumMeasure,
) -> Result<num_complex::Complex64> {
    m.check_dim(a)?;
    m.check_dim(b)?;
    let h = m.power(0.5)?;
    Ok(linalg::trace(&(&h * a.adjoint() * &h * b)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// `τ_p(X) = ρ^{1/2p} X ρ^{1/2p}` and its inverse `ρ^{-1/2p} X ρ^{-1/2p}`.
pub fn tau_conjugate(
    x: &ComplexMatrix,
    m: &QuantumMeasure,
    p: PExponent,
    direction: Direction,
) -> Result<ComplexMatrix> {
    m.check_dim(x)?;
    let r = match direction {
        Direction::Forward => p.half_inverse(),
        Direction::Inverse => -p.half_inverse(),
    };
    let w = m.power(r)?;
    Ok(&w * x * &w)
}

/// Least `c ≥ 0` with `T_*(ρ) ⪯ c ρ`, as the top eigenvalue of
/// `ρ^{-1/2} T_*(ρ) ρ^{-1/2}`.
///
/// With an invertible `ρ` on a finite-dimensional algebra this constant is
/// always finite: every positive map is integrable, and the criterion only
/// has content through the size of `c`.
pub fn integrability_constant(
    t: &SuperOperator,
    m: &QuantumMeasure,
    cfg: &CheckConfig,
) -> Result<f64> {
    if t.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            got: t.dim(),
        });
    }
    let pos = positivity_check(t, cfg)?;
    if !pos.positive {
        return Err(Error::NotPositive(pos.min_eigenvalue));
    }
    let pushed = t.predual().apply(m.rho().matrix());
    if &pushed == m.rho().matrix() {
        // ρ ⪯ cρ iff c ≥ 1; skips the rounding of ρ^{-1/2} ρ ρ^{-1/2}
        return Ok(1.0);
    }
    let inv_half = m.power(-0.5)?;
    let k = &inv_half * pushed * &inv_half;
    let eig = linalg::hermitian_eig(&k, cfg.tol)?;
    Ok(eig.max().max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleSign {
    /// `‖A‖_p < ‖A‖_q`
    Less,
    Tie,
    /// `‖A‖_p > ‖A‖_q`
    Greater,
}

impl ScaleSign {
    fn as_i8(self) -> i8 {
        match self {
            Self::Less => -1,
            Self::Tie => 0,
            Self::Greater => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleDirection {
    /// `‖A‖_p ≤ ‖A‖_q` whenever `p < q`.
    NonDecreasing,
    /// `‖A‖_p ≥ ‖A‖_q` whenever `p < q`.
    NonIncreasing,
    AllTies,
    Mixed,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormScaleRow {
    pub seed: u64,
    pub trial: usize,
    pub dim: usize,
    pub p: f64,
    pub q: f64,
    pub norm_p: f64,
    pub norm_q: f64,
    pub sign: ScaleSign,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormScaleReport {
    pub rows: Vec<NormScaleRow>,
    pub less: usize,
    pub ties: usize,
    pub greater: usize,
    pub direction: ScaleDirection,
}

impl NormScaleReport {
    pub fn from_rows(rows: Vec<NormScaleRow>) -> Self {
        let count = |s| rows.iter().filter(|r| r.sign == s).count();
        let (less, ties, greater) = (
            count(ScaleSign::Less),
            count(ScaleSign::Tie),
            count(ScaleSign::Greater),
        );
        let direction = match (less > 0, greater > 0) {
            (true, true) => ScaleDirection::Mixed,
            (true, false) => ScaleDirection::NonDecreasing,
            (false, true) => ScaleDirection::NonIncreasing,
            (false, false) => ScaleDirection::AllTies,
        };
        Self {
            rows,
            less,
            ties,
            greater,
            direction,
        }
    }

    /// CSV with header `seed,dim,p,q,norm_p,norm_q,sign`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Invalid(e.to_string());
        w.write_record(["seed", "dim", "p", "q", "norm_p", "norm_q", "sign"])
            .map_err(io)?;
        for r in &self.rows {
            w.write_record(&[
                r.seed.to_string(),
                r.dim.to_string(),
                r.p.to_string(),
                r.q.to_string(),
                r.norm_p.to_string(),
                r.norm_q.to_string(),
                r.sign.as_i8().to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
    }
}

/// Compares `‖A‖_p` with `‖A‖_q` for every pair `p < q` of the exponent
/// grid, on `trials` Gaussian samples `A`.
pub fn norm_scale_report(
    m: &QuantumMeasure,
    trials: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<NormScaleReport> {
    if trials == 0 {
        return Err(Error::Invalid("trials must be >= 1".into()));
    }
    let mut rng = seeded(seed);
    let n = m.dim();
    let mut rows = Vec::with_capacity(trials * 10);
    for trial in 0..trials {
        let a = gaussian_matrix(n, &mut rng);
        rows.extend(scale_rows(&a, m, seed, trial, tol)?);
    }
    Ok(NormScaleReport::from_rows(rows))
}

/// Scale comparison rows for a single matrix.
pub fn scale_rows(
    a: &ComplexMatrix,
    m: &QuantumMeasure,
    seed: u64,
    trial: usize,
    tol: Tolerance,
) -> Result<Vec<NormScaleRow>> {
    let norms = EXPONENT_GRID
        .iter()
        .map(|&p| weighted_norm(a, m, PExponent::Finite(p)))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for i in 0..EXPONENT_GRID.len() {
        for j in (i + 1)..EXPONENT_GRID.len() {
            let (np, nq) = (norms[i], norms[j]);
            let sign = if (np - nq).abs() <= tol.bound(np.max(nq)) {
                ScaleSign::Tie
            } else if np < nq {
                ScaleSign::Less
            } else {
                ScaleSign::Greater
            };
            rows.push(NormScaleRow {
                seed,
                trial,
                dim: m.dim(),
                p: EXPONENT_GRID[i],
                q: EXPONENT_GRID[j],
                norm_p: np,
                norm_q: nq,
                sign,
            });
        }
    }
    Ok(rows)
}
