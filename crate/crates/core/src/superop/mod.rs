//! Linear maps on the algebra of `n×n` matrices.
//!
//! A [`SuperOperator`] stores the `n²×n²` matrix `S` acting on column-stacked
//! matrices: `vec(T(X)) = S vec(X)` with `vec(X)[i + n*j] = X[(i, j)]`.
//! Under this convention conjugation `X ↦ U X U*` has matrix `conj(U) ⊗ U`
//! and left multiplication `X ↦ W X` has matrix `1 ⊗ W`.
//!
//! The Choi matrix is `C = Σ_ij E_ij ⊗ T(E_ij)`; block `(i, j)` of `C` is
//! `T(E_ij)`. For `T = Ad U` it equals `vec(U) vec(U)*`.

mod implement;
mod isometry;
mod jordan;
mod lamperti;

pub use implement::{
    change_of_representation_demo, implementability_check, inverse_weighted_transport,
    weighted_isometry_transport, ChangeOfRepReport, ChangeOfRepStep, ImplementabilityReport,
};
pub use isometry::{isometry_check, positivity_check, IsometryReport, NormKind, PositivityReport};
pub use jordan::{
    hermitian_basis, jordan_check, jordan_classify, JordanClass, JordanKind, JordanReport,
};
pub use lamperti::{lamperti_decompose, LampertiDecomposition};

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, unvec, vec_of, ComplexMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl SuperOperator {
    pub fn from_matrix(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        let nn = dim * dim;
        if matrix.nrows() != nn || matrix.ncols() != nn {
            return Err(Error::DimensionMismatch {
                expected: nn,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        linalg::ensure_finite(&matrix)?;
        Ok(Self { dim, matrix })
    }

    /// Tabulates `f` on the matrix units.
    pub fn from_fn(dim: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let nn = dim * dim;
        let mut matrix = ComplexMatrix::zeros(nn, nn);
        for j in 0..dim {
            for i in 0..dim {
                let image = f(&linalg::matrix_unit(dim, i, j));
                matrix.set_column(i + dim * j, &vec_of(&image));
            }
        }
        Self { dim, matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::identity(dim * dim, dim * dim),
        }
    }

    /// `X ↦ U X U*`.
    pub fn conjugation(u: &ComplexMatrix) -> Self {
        Self {
            dim: u.nrows(),
            matrix: u.map(|z| z.conj()).kronecker(u),
        }
    }

    /// `X ↦ Xᵀ`.
    pub fn transpose(dim: usize) -> Self {
        Self::from_fn(dim, |x| x.transpose())
    }

    /// `X ↦ W X`.
    pub fn left_multiply(w: &ComplexMatrix) -> Self {
        let n = w.nrows();
        Self {
            dim: n,
            matrix: ComplexMatrix::identity(n, n).kronecker(w),
        }
    }

    /// `X ↦ A X B`.
    pub fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        Self {
            dim: a.nrows(),
            matrix: b.transpose().kronecker(a),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        unvec(&(&self.matrix * vec_of(x)), self.dim)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SuperOperator) -> SuperOperator {
        Self {
            dim: self.dim,
            matrix: &self.matrix * &inner.matrix,
        }
    }

    pub fn scale(&self, a: f64) -> SuperOperator {
        Self {
            dim: self.dim,
            matrix: self.matrix.scale(a),
        }
    }

    pub fn add(&self, other: &SuperOperator) -> SuperOperator {
        Self {
            dim: self.dim,
            matrix: &self.matrix + &other.matrix,
        }
    }

    /// Adjoint under the Hilbert–Schmidt pairing `Tr(A* B)`.
    pub fn adjoint_wrt_trace(&self) -> SuperOperator {
        Self {
            dim: self.dim,
            matrix: self.matrix.adjoint(),
        }
    }

    /// The predual map: `Tr(T_*(Y) X) = Tr(Y T(X))` for all `X, Y`.
    pub fn predual(&self) -> SuperOperator {
        let flip = Self::transpose(self.dim);
        Self {
            dim: self.dim,
            matrix: &flip.matrix * self.matrix.transpose() * &flip.matrix,
        }
    }

    pub fn inverse(&self) -> Result<SuperOperator> {
        let s = self.smallest_singular_value()?;
        if s <= linalg::INVERTIBILITY_THRESHOLD {
            return Err(Error::SingularInput(s));
        }
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or(Error::SingularInput(s))?;
        Ok(Self {
            dim: self.dim,
            matrix: inv,
        })
    }

    pub fn smallest_singular_value(&self) -> Result<f64> {
        Ok(linalg::singular_values(&self.matrix)?
            .last()
            .copied()
            .unwrap_or(0.0))
    }

    /// Largest difference `‖T(E_ij) − S(E_ij)‖_F` over the matrix units.
    pub fn distance_on_units(&self, other: &SuperOperator) -> f64 {
        let diff = &self.matrix - &other.matrix;
        (0..diff.ncols())
            .map(|k| diff.column(k).norm())
            .fold(0.0, f64::max)
    }
}

/// Choi matrix `Σ_ij E_ij ⊗ T(E_ij)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        linalg::singular_values(&self.matrix)
    }

    /// Number of singular values above `rel · σ_max`.
    pub fn rank(&self, rel: f64) -> Result<usize> {
        let s = self.singular_values()?;
        let top = s.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            return Ok(0);
        }
        Ok(s.iter().filter(|&&x| x > rel * top).count())
    }

    pub fn is_hermitian(&self, tol: linalg::Tolerance) -> bool {
        linalg::hermitian_defect(&self.matrix) <= tol.bound(linalg::frobenius(&self.matrix))
    }
}

pub fn choi(t: &SuperOperator) -> ChoiMatrix {
    let n = t.dim;
    let nn = n * n;
    let s = &t.matrix;
    let matrix = ComplexMatrix::from_fn(nn, nn, |row, col| {
        let (i, b) = (row / n, row % n);
        let (j, d) = (col / n, col % n);
        s[(b + n * d, i + n * j)]
    });
    ChoiMatrix { matrix }
}

/// Reshape a Choi eigenvector `Σ_i e_i ⊗ u_i` back into the matrix with columns `u_i`.
pub(crate) fn choi_vector_to_matrix(v: &DVector<Complex64>, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |b, i| v[i * n + b])
}

/// Rotate `u` by a global phase so that its first entry of largest modulus
/// is real and positive.
pub fn normalize_phase(u: &ComplexMatrix) -> ComplexMatrix {
    let mut best = c(0.0, 0.0);
    let mut best_abs = 0.0;
    // column-major scan; ties within 1e-12 keep the earlier entry
    for z in u.iter() {
        if z.norm() > best_abs * (1.0 + 1e-12) + 1e-300 {
            best_abs = z.norm();
            best = *z;
        }
    }
    if best_abs == 0.0 {
        return u.clone();
    }
    let phase = best.conj() / best_abs;
    u.map(|z| z * phase)
}

/// `min_φ ‖a − e^{iφ} b‖_F`.
pub fn phase_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let overlap: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    linalg::frobenius(&(a - b.map(|z| z * phase)))
}
