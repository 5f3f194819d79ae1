//! Seeded samplers for matrices, unitaries and states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, trace, ComplexMatrix, DensityMatrix, Tolerance};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian entry: real and imaginary parts `N(0, 1/2)`.
pub fn gaussian(rng: &mut impl Rng) -> num_complex::Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = gaussian_matrix(n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let qr = gaussian_matrix(n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// `G G* / Tr(G G*)` for a Gaussian `G`.
pub fn random_state_matrix(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = gaussian_matrix(n, rng);
    let p = &g * g.adjoint();
    let tr = trace(&p).re;
    p.unscale(tr)
}

pub fn random_density(n: usize, rng: &mut impl Rng) -> DensityMatrix {
    loop {
        let m = random_state_matrix(n, rng);
        if let Ok(d) = DensityMatrix::new(m, Tolerance::default()) {
            return d;
        }
    }
}

/// Random positive matrix `G G*`.
pub fn random_positive(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = gaussian_matrix(n, rng);
    &g * g.adjoint()
}
