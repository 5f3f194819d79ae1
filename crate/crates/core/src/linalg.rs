//! Dense complex linear algebra on square matrices.
//!
//! Everything downstream is built from four primitives: the Hermitian
//! eigendecomposition, the singular value decomposition, the fractional
//! power of a positive matrix and the polar factorization. Eigen and
//! singular value iterations come from `nalgebra`; this module adds
//! symmetrization, sorting, thresholds and error reporting on top.
//!
//! Vectorization stacks columns left to right: `vec(X)[i + n*j] = X[(i, j)]`.
//! With this convention `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Smallest eigenvalue (relative to the largest) below which a positive
/// matrix counts as singular.
pub const INVERTIBILITY_THRESHOLD: f64 = 1e-12;

const EIG_MAX_ITER: usize = 10_000;
const EIG_EPS: f64 = 5.0 * f64::EPSILON;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Relative plus absolute slack used by every comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    /// Admissible error for a quantity of magnitude `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale.abs()
    }

    pub fn accepts(&self, error: f64, scale: f64) -> bool {
        error <= self.bound(scale)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-9, 1e-12)
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn diag(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| c(v, 0.0)),
    ))
}

pub fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    ComplexMatrix::from_fn(n, m, |i, j| c(rows[i][j], 0.0))
}

/// Matrix unit `E_ij`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(n, n);
    e[(i, j)] = c(1.0, 0.0);
    e
}

pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().copied().sum()
}

pub fn vec_of(m: &ComplexMatrix) -> DVector<Complex64> {
    DVector::from_column_slice(m.as_slice())
}

pub fn unvec(v: &DVector<Complex64>, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_column_slice(n, n, v.as_slice())
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

pub fn hermitian_defect(m: &ComplexMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors, paired with `eigenvalues` by index.
    pub eigenvectors: ComplexMatrix,
    /// `‖M − M*‖_F` of the input before symmetrization.
    pub symmetrization_defect: f64,
}

impl HermitianEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }

    /// `V diag(g(λ)) V*`.
    pub fn map_spectrum(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            let gl = g(l);
            scaled.column_mut(k).scale_mut(gl);
        }
        scaled * v.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

pub fn hermitian_eig(m: &ComplexMatrix, tol: Tolerance) -> Result<HermitianEig> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    let defect = hermitian_defect(m);
    let bound = tol.bound(frobenius(m));
    if defect > bound {
        return Err(Error::NonHermitian { defect, bound });
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::try_new(sym, EIG_EPS, EIG_MAX_ITER)
        .ok_or(Error::NoConvergence("Hermitian eigendecomposition"))?;

    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep the solver's eigenvector order
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
        symmetrization_defect: defect,
    })
}

/// Full singular value decomposition `A = W diag(σ) V*`, σ descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub left: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub right: ComplexMatrix,
}

/// One-sided Jacobi SVD. nalgebra's complex SVD returns wrong factors for
/// rank-deficient inputs such as the Choi matrix of a conjugation, so the
/// decomposition is done here; Jacobi is also accurate in the small
/// singular values.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    ensure_finite(a)?;
    let (rows, cols) = a.shape();
    if rows < cols {
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            left: t.right,
            singular_values: t.singular_values,
            right: t.left,
        });
    }
    let mut g = a.clone();
    let mut v = identity(cols);
    let mut converged = cols < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = g.column(p).norm_squared();
                let beta = g.column(q).norm_squared();
                let gamma = g.column(p).dotc(&g.column(q));
                let mag = gamma.norm();
                if mag <= f64::EPSILON * (alpha * beta).sqrt() || mag == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / mag;
                let zeta = (beta - alpha) / (2.0 * mag);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for m in [&mut g, &mut v] {
                    for i in 0..m.nrows() {
                        let x = m[(i, p)];
                        let y = m[(i, q)] * phase.conj();
                        m[(i, p)] = x * cs - y * sn;
                        m[(i, q)] = x * sn + y * cs;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("singular value decomposition"));
    }
    let norms: Vec<f64> = (0..cols).map(|k| g.column(k).norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let top = norms.iter().copied().fold(0.0, f64::max);
    let mut left = ComplexMatrix::zeros(rows, cols);
    let mut right = ComplexMatrix::zeros(cols, cols);
    let mut singular_values = Vec::with_capacity(cols);
    for (j, &k) in order.iter().enumerate() {
        right.set_column(j, &v.column(k));
        singular_values.push(norms[k]);
        if norms[k] > top * f64::EPSILON * rows as f64 && norms[k] > 0.0 {
            let col = g.column(k) / Complex64::new(norms[k], 0.0);
            left.set_column(j, &col);
        }
    }
    // complete the left factor where the singular value vanishes
    for (j, &sv) in singular_values.iter().enumerate() {
        if sv > top * f64::EPSILON * rows as f64 && sv > 0.0 {
            continue;
        }
        let mut fill = None;
        for e in 0..rows {
            let mut x = DVector::<Complex64>::zeros(rows);
            x[e] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for k in 0..cols {
                    if k == j || (left.column(k).norm_squared() == 0.0) {
                        continue;
                    }
                    let proj = left.column(k).dotc(&x);
                    x -= left.column(k) * proj;
                }
            }
            let nx = x.norm();
            if nx > 0.5 {
                fill = Some(x / Complex64::new(nx, 0.0));
                break;
            }
        }
        let x = fill.ok_or(Error::NoConvergence("singular value decomposition"))?;
        left.set_column(j, &x);
    }
    Ok(Svd {
        left,
        singular_values,
        right,
    })
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.singular_values)
}

/// Operator absolute value `|X| = (X*X)^{1/2}`.
pub fn matrix_abs(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(x)?;
    let Svd {
        singular_values,
        right,
        ..
    } = svd(x)?;
    let mut scaled = right.clone();
    for (k, &s) in singular_values.iter().enumerate() {
        scaled.column_mut(k).scale_mut(s);
    }
    let p = scaled * right.adjoint();
    // exact Hermitian output
    Ok((&p + p.adjoint()).scale(0.5))
}

/// `P^r` for positive semidefinite `P` (positive definite when `r < 0`).
pub fn frac_power(p: &ComplexMatrix, r: f64, tol: Tolerance) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(p, tol)?;
    frac_power_of(&eig, r, tol)
}

/// Fractional power from an existing eigendecomposition.
pub fn frac_power_of(eig: &HermitianEig, r: f64, tol: Tolerance) -> Result<ComplexMatrix> {
    let max = eig.max().max(0.0);
    let min = eig.min();
    if min < -tol.bound(max) {
        return Err(Error::NegativeEigenvalue(min));
    }
    if r < 0.0 {
        let threshold = INVERTIBILITY_THRESHOLD * max;
        if min <= threshold {
            return Err(Error::SingularPower { min, threshold });
        }
    }
    if r == 0.0 {
        return Ok(identity(eig.eigenvalues.len()));
    }
    Ok(eig.map_spectrum(|l| l.max(0.0).powf(r)))
}

#[derive(Debug, Clone)]
pub struct Polar {
    pub unitary: ComplexMatrix,
    pub positive: ComplexMatrix,
}

/// Polar factorization `A = U P` of an invertible matrix.
pub fn polar_decompose(a: &ComplexMatrix) -> Result<Polar> {
    ensure_square(a)?;
    let Svd {
        left,
        singular_values,
        right,
    } = svd(a)?;
    let top = singular_values.first().copied().unwrap_or(0.0);
    let bottom = singular_values.last().copied().unwrap_or(0.0);
    if bottom <= INVERTIBILITY_THRESHOLD * top || top == 0.0 {
        return Err(Error::SingularInput(bottom));
    }
    let unitary = &left * right.adjoint();
    let mut scaled = right.clone();
    for (k, &s) in singular_values.iter().enumerate() {
        scaled.column_mut(k).scale_mut(s);
    }
    let p = scaled * right.adjoint();
    Ok(Polar {
        unitary,
        positive: (&p + p.adjoint()).scale(0.5),
    })
}

/// `A ⪯ B` in the positive semidefinite order.
pub fn psd_leq(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    let n = ensure_square(a)?;
    if b.shape() != a.shape() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.nrows(),
        });
    }
    for m in [a, b] {
        let defect = hermitian_defect(m);
        let bound = tol.bound(frobenius(m));
        if defect > bound {
            return Err(Error::NonHermitian { defect, bound });
        }
    }
    let gap = hermitian_eig(&(b - a), tol)?;
    let scale = frobenius(a).max(frobenius(b));
    Ok(gap.min() >= -tol.bound(scale))
}

pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.nrows();
    frobenius(&(u.adjoint() * u - identity(n)))
}

/// Positive, unit-trace, invertible matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    eig: HermitianEig,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        let eig = hermitian_eig(&matrix, tol)?;
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > tol.bound(1.0) || tr.im.abs() > tol.bound(1.0) {
            return Err(Error::InvalidTrace(tr.re));
        }
        let threshold = INVERTIBILITY_THRESHOLD * eig.max();
        if eig.min() <= threshold {
            return Err(Error::SingularPower {
                min: eig.min(),
                threshold,
            });
        }
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        Ok(Self { matrix, eig })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::new(identity(n).scale(1.0 / n as f64), Tolerance::default())
            .expect("maximally mixed state is valid")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eig(&self) -> &HermitianEig {
        &self.eig
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_matrix, random_hermitian, random_unitary, seeded};

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, eps: f64) -> bool {
        frobenius(&(a - b)) <= eps
    }

    #[test]
    fn eig_of_identity() {
        let e = hermitian_eig(&identity(3), Tolerance::default()).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
        assert!(close(&(e.eigenvectors.adjoint() * &e.eigenvectors), &identity(3), 1e-14));
    }

    #[test]
    fn eig_sorts_diagonal() {
        let e = hermitian_eig(&diag(&[3.0, 1.0, 2.0]), Tolerance::default()).unwrap();
        for (got, want) in e.eigenvalues.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = seeded(11);
        for n in 1..=8 {
            let m = random_hermitian(n, &mut rng);
            let e = hermitian_eig(&m, Tolerance::default()).unwrap();
            assert!(frobenius(&(e.reconstruct() - &m)) <= 1e-10 * frobenius(&m));
            assert!(unitarity_defect(&e.eigenvectors) < 1e-12);
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            hermitian_eig(&m, Tolerance::default()),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn eig_reports_symmetrization_defect() {
        let mut m = diag(&[1.0, 2.0]);
        m[(0, 1)] = c(1e-13, 0.0);
        let e = hermitian_eig(&m, Tolerance::default()).unwrap();
        assert!((e.symmetrization_defect - 2f64.sqrt() * 1e-13).abs() < 1e-20);
    }

    #[test]
    fn abs_examples() {
        let a = matrix_abs(&diag(&[-1.0, 2.0])).unwrap();
        assert!(close(&a, &diag(&[1.0, 2.0]), 1e-14));

        let mut rng = seeded(3);
        let u = random_unitary(4, &mut rng);
        assert!(close(&matrix_abs(&u).unwrap(), &identity(4), 1e-12));

        let x = from_real_rows(&[&[0.0, 3.0], &[0.0, 0.0]]);
        let a = matrix_abs(&x).unwrap();
        assert!(close(&a, &diag(&[0.0, 3.0]), 1e-14));
        assert!(close(&(&a * &a), &(x.adjoint() * &x), 1e-13));
    }

    #[test]
    fn abs_is_idempotent_on_positives() {
        let mut rng = seeded(5);
        for n in 2..=6 {
            let g = gaussian_matrix(n, &mut rng);
            let p = &g * g.adjoint();
            assert!(close(&matrix_abs(&p).unwrap(), &p, 1e-10 * frobenius(&p)));
        }
    }

    #[test]
    fn frac_power_examples() {
        let tol = Tolerance::default();
        for r in [-1.0, 0.5, 2.0, 0.0] {
            assert!(close(&frac_power(&identity(3), r, tol).unwrap(), &identity(3), 1e-14));
        }
        assert!(close(
            &frac_power(&diag(&[4.0, 9.0]), 0.5, tol).unwrap(),
            &diag(&[2.0, 3.0]),
            1e-14
        ));
        assert!(close(
            &frac_power(&diag(&[0.5, 0.5]), -1.0, tol).unwrap(),
            &diag(&[2.0, 2.0]),
            1e-14
        ));
    }

    #[test]
    fn frac_power_errors() {
        let tol = Tolerance::default();
        assert!(matches!(
            frac_power(&diag(&[-1.0, 1.0]), 0.5, tol),
            Err(Error::NegativeEigenvalue(_))
        ));
        assert!(matches!(
            frac_power(&diag(&[0.0, 1.0]), -0.5, tol),
            Err(Error::SingularPower { .. })
        ));
        assert!(frac_power(&diag(&[0.0, 1.0]), 0.5, tol).is_ok());
    }

    #[test]
    fn frac_power_semigroup() {
        let tol = Tolerance::default();
        let exps = [-1.0, -0.5, 0.25, 0.5, 1.0];
        let mut rng = seeded(9);
        for n in 2..=5 {
            let g = gaussian_matrix(n, &mut rng);
            let p = &g * g.adjoint() + identity(n).scale(0.1);
            for &r in &exps {
                for &s in &exps {
                    let lhs = frac_power(&p, r, tol).unwrap() * frac_power(&p, s, tol).unwrap();
                    let rhs = frac_power(&p, r + s, tol).unwrap();
                    assert!(frobenius(&(&lhs - &rhs)) <= 1e-9 * frobenius(&rhs).max(1.0));
                }
            }
        }
    }

    #[test]
    fn polar_examples() {
        let mut rng = seeded(21);
        let u = random_unitary(3, &mut rng);
        let pol = polar_decompose(&u).unwrap();
        assert!(close(&pol.unitary, &u, 1e-12));
        assert!(close(&pol.positive, &identity(3), 1e-12));

        let pol = polar_decompose(&diag(&[2.0, 3.0])).unwrap();
        assert!(close(&pol.unitary, &identity(2), 1e-14));
        assert!(close(&pol.positive, &diag(&[2.0, 3.0]), 1e-14));

        let u = random_unitary(4, &mut rng);
        let pol = polar_decompose(&u.scale(2.0)).unwrap();
        assert!(close(&pol.positive, &identity(4).scale(2.0), 1e-10));
    }

    #[test]
    fn polar_reconstructs_and_matches_abs() {
        let mut rng = seeded(22);
        for n in 2..=6 {
            let a = gaussian_matrix(n, &mut rng);
            let pol = polar_decompose(&a).unwrap();
            assert!(close(&(&pol.unitary * &pol.positive), &a, 1e-10 * frobenius(&a)));
            assert!(unitarity_defect(&pol.unitary) < 1e-10);
            assert!(close(&matrix_abs(&a).unwrap(), &pol.positive, 1e-10 * frobenius(&a)));
        }
    }

    #[test]
    fn svd_reconstructs_low_rank_and_generic_inputs() {
        let mut rng = seeded(21);
        let mut cases = Vec::new();
        for n in [2usize, 4, 9, 16] {
            let v = gaussian_matrix(n, &mut rng).column(0).into_owned();
            cases.push(&v * v.adjoint());
            cases.push(gaussian_matrix(n, &mut rng));
        }
        let ones = ComplexMatrix::from_element(4, 4, c(1.0, 0.0));
        cases.push(ones);
        // vec(U) vec(U)* for unitary U, plus rectangular inputs
        for n in 2..=5 {
            let u = crate::random::random_unitary(n, &mut rng);
            let v = DVector::from_column_slice(u.as_slice());
            cases.push(&v * v.adjoint());
        }
        cases.push(gaussian_matrix(4, &mut rng).columns(0, 2).into_owned());
        cases.push(gaussian_matrix(4, &mut rng).rows(0, 3).into_owned());
        for a in cases {
            let d = svd(&a).unwrap();
            let mut us = d.left.clone();
            for (k, &s) in d.singular_values.iter().enumerate() {
                us.column_mut(k).scale_mut(s);
            }
            assert!(close(&(us * d.right.adjoint()), &a, 1e-12 * frobenius(&a).max(1.0)));
            let sum_sq: f64 = d.singular_values.iter().map(|s| s * s).sum();
            assert!((sum_sq.sqrt() - frobenius(&a)).abs() < 1e-12 * frobenius(&a));
            let k = d.singular_values.len();
            assert!(close(&(d.left.adjoint() * &d.left), &identity(k), 1e-12));
            assert!(close(&(d.right.adjoint() * &d.right), &identity(k), 1e-12));
            assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn polar_rejects_singular() {
        let a = from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(matches!(polar_decompose(&a), Err(Error::SingularInput(_))));
    }

    #[test]
    fn psd_order_examples() {
        let tol = Tolerance::default();
        let zero = ComplexMatrix::zeros(2, 2);
        assert!(psd_leq(&zero, &identity(2), tol).unwrap());
        assert!(!psd_leq(&identity(2), &zero, tol).unwrap());
        assert!(!psd_leq(&diag(&[1.0, 3.0]), &diag(&[2.0, 2.0]), tol).unwrap());
        let nh = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(psd_leq(&nh, &zero, tol), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn psd_order_is_partial_order_on_samples() {
        let tol = Tolerance::default();
        let mut rng = seeded(31);
        for n in 2..=4 {
            let a = random_hermitian(n, &mut rng);
            assert!(psd_leq(&a, &a, tol).unwrap());
            let g = gaussian_matrix(n, &mut rng);
            let h = gaussian_matrix(n, &mut rng);
            let b = &a + &g * g.adjoint();
            let cc = &b + &h * h.adjoint();
            assert!(psd_leq(&a, &b, tol).unwrap());
            assert!(psd_leq(&b, &cc, tol).unwrap());
            assert!(psd_leq(&a, &cc, tol).unwrap());
            // antisymmetry: a ⪯ b and b ⪯ a only when b = a
            assert!(!psd_leq(&b, &a, tol).unwrap());
        }
    }

    #[test]
    fn density_matrix_validation() {
        let tol = Tolerance::default();
        assert!(DensityMatrix::new(diag(&[0.5, 0.5]), tol).is_ok());
        assert!(matches!(
            DensityMatrix::new(diag(&[1.0, 1.0]), tol),
            Err(Error::InvalidTrace(_))
        ));
        assert!(matches!(
            DensityMatrix::new(diag(&[1.0, 0.0]), tol),
            Err(Error::SingularPower { .. })
        ));
    }
}
