use serde::Serialize;

use super::{choi, SuperOperator};
use crate::check::CheckConfig;
use crate::error::Result;
use crate::linalg::{self, ComplexMatrix, INVERTIBILITY_THRESHOLD};
use crate::lp::{schatten_norm, weighted_norm, PExponent, QuantumMeasure};
use crate::random::{gaussian_matrix, random_positive, seeded};

/// Positive samples used by [`positivity_check`] besides the diagonal units.
pub const POSITIVITY_SAMPLES: usize = 50;

/// Which norm an isometry is measured in.
#[derive(Debug, Clone, Copy)]
pub enum NormKind<'a> {
    /// Schatten norm, the `L^p` space of the trace.
    Trace,
    /// Weighted norm of a faithful state.
    Weighted(&'a QuantumMeasure),
}

impl NormKind<'_> {
    pub fn norm(&self, x: &ComplexMatrix, p: PExponent) -> Result<f64> {
        match self {
            Self::Trace => schatten_norm(x, p),
            Self::Weighted(m) => weighted_norm(x, m, p),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityReport {
    pub positive: bool,
    /// Smallest eigenvalue of `T(X)` over the samples, relative to `‖X‖_F`.
    pub min_eigenvalue: f64,
    /// Largest `‖T(X) − T(X)*‖_F / ‖X‖_F` over the samples.
    pub hermiticity_defect: f64,
    pub samples: usize,
    /// Choi matrix positive semidefinite. Recorded only: positive maps with
    /// an anti-homomorphic part fail it.
    pub completely_positive: bool,
}

/// Tests `T(X) ⪰ 0` on the diagonal matrix units and on seeded `G G*`.
pub fn positivity_check(t: &SuperOperator, cfg: &CheckConfig) -> Result<PositivityReport> {
    let n = t.dim();
    let mut rng = seeded(cfg.seed ^ 0x5eed_0001);
    let mut inputs: Vec<ComplexMatrix> = (0..n).map(|i| linalg::matrix_unit(n, i, i)).collect();
    inputs.extend((0..POSITIVITY_SAMPLES).map(|_| random_positive(n, &mut rng)));

    let mut min_eig = f64::INFINITY;
    let mut herm = 0.0f64;
    for x in &inputs {
        let scale = linalg::frobenius(x);
        let y = t.apply(x);
        herm = herm.max(linalg::hermitian_defect(&y) / scale);
        let sym = (&y + y.adjoint()).scale(0.5);
        let eig = linalg::hermitian_eig(&sym, cfg.tol)?;
        min_eig = min_eig.min(eig.min() / scale);
    }

    let ch = choi(t);
    let ch_scale = linalg::frobenius(&ch.matrix);
    let completely_positive = linalg::hermitian_defect(&ch.matrix) <= cfg.tol.bound(ch_scale)
        && linalg::hermitian_eig(&(&ch.matrix + ch.matrix.adjoint()).scale(0.5), cfg.tol)?.min()
            >= -cfg.tol.bound(ch_scale);

    Ok(PositivityReport {
        positive: min_eig >= -cfg.tol.bound(1.0) && herm <= cfg.tol.bound(1.0),
        min_eigenvalue: min_eig,
        hermiticity_defect: herm,
        samples: inputs.len(),
        completely_positive,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IsometryReport {
    pub is_isometry: bool,
    /// Largest `|‖T(X)‖ − ‖X‖| / ‖X‖` over the sampled `X`.
    pub max_rel_defect: f64,
    pub onto: bool,
    pub smallest_singular_value: f64,
    pub trials: usize,
    /// `‖G*G − 1‖_F` for the matrix `G` of `T` in an orthonormal basis of
    /// `L²`; present only at `p = 2`.
    pub gram_defect: Option<f64>,
    /// Sample attaining `max_rel_defect`.
    #[serde(skip)]
    pub worst_input: ComplexMatrix,
}

/// Sampled `L^p` isometry test plus, at `p = 2`, the exact Gram test.
pub fn isometry_check(
    t: &SuperOperator,
    norm: NormKind<'_>,
    p: PExponent,
    cfg: &CheckConfig,
) -> Result<IsometryReport> {
    let n = t.dim();
    let trials = cfg.trials.max(1);
    let mut rng = seeded(cfg.seed);
    let mut max_rel = 0.0f64;
    let mut worst_input = ComplexMatrix::zeros(n, n);
    for _ in 0..trials {
        let x = gaussian_matrix(n, &mut rng);
        let nx = norm.norm(&x, p)?;
        let ntx = norm.norm(&t.apply(&x), p)?;
        let rel = (ntx - nx).abs() / nx;
        if rel >= max_rel {
            max_rel = rel;
            worst_input = x;
        }
    }

    let sv = linalg::singular_values(t.matrix())?;
    let top = sv.first().copied().unwrap_or(0.0);
    let bottom = sv.last().copied().unwrap_or(0.0);
    let onto = top > 0.0 && bottom > INVERTIBILITY_THRESHOLD * top;

    let gram_defect = if p == PExponent::Finite(2.0) {
        let g = match norm {
            NormKind::Trace => t.matrix().clone(),
            NormKind::Weighted(m) => {
                // τ_2 maps the weighted L² isometrically onto Hilbert–Schmidt
                let fwd = m.power(0.25)?;
                let inv = m.power(-0.25)?;
                SuperOperator::sandwich(&fwd, &fwd).matrix()
                    * t.matrix()
                    * SuperOperator::sandwich(&inv, &inv).matrix()
            }
        };
        let nn = n * n;
        Some(linalg::frobenius(
            &(g.adjoint() * &g - ComplexMatrix::identity(nn, nn)),
        ))
    } else {
        None
    };

    let gram_ok = gram_defect.is_none_or(|d| d <= cfg.tol.bound((n * n) as f64));
    Ok(IsometryReport {
        is_isometry: max_rel <= cfg.tol.bound(1.0) && gram_ok,
        max_rel_defect: max_rel,
        onto,
        smallest_singular_value: bottom,
        trials,
        gram_defect,
        worst_input,
    })
}
