//! Finite classical dynamics.
//!
//! Functions on `n` points are coordinate vectors in the indicator basis, so
//! pointwise products are entrywise. An operator matrix has one row per
//! output point and one column per input point; rectangular operators map
//! functions on one finite space into functions on another.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::check::CheckConfig;
use crate::error::{Error, Result};
use crate::io::{MeasureSpaceJson, PointMapJson};
use crate::linalg::{c, ComplexMatrix, Tolerance};
use crate::lp::PExponent;
use crate::random::{gaussian, seeded};

/// Relative cut used to decide which entries of a row count as nonzero.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMeasureSpace {
    mu: Vec<f64>,
}

impl FiniteMeasureSpace {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::Invalid("mu: measure space has no points".into()));
        }
        if let Some(i) = mu.iter().position(|m| !m.is_finite() || *m <= 0.0) {
            return Err(Error::Invalid(format!(
                "mu[{i}] = {} is not a positive finite mass",
                mu[i]
            )));
        }
        Ok(Self { mu })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            mu: vec![1.0 / n as f64; n],
        }
    }

    pub fn from_json(js: &MeasureSpaceJson) -> Result<Self> {
        Self::new(js.mu.clone())
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn is_normalized(&self, tol: Tolerance) -> bool {
        (self.total_mass() - 1.0).abs() <= tol.bound(1.0)
    }

    /// `Σ μ_i f_i conj(g_i)`.
    pub fn pairing(&self, f: &DVector<Complex64>, g: &DVector<Complex64>) -> Complex64 {
        self.mu
            .iter()
            .zip(f.iter().zip(g.iter()))
            .map(|(m, (a, b))| a * b.conj() * *m)
            .sum()
    }

    pub fn lp_norm(&self, f: &DVector<Complex64>, p: PExponent) -> f64 {
        match p {
            PExponent::Infinity => f.iter().map(|z| z.norm()).fold(0.0, f64::max),
            PExponent::Finite(p) => {
                let top = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
                if top == 0.0 {
                    return 0.0;
                }
                let s: f64 = self
                    .mu
                    .iter()
                    .zip(f.iter())
                    .map(|(m, z)| m * (z.norm() / top).powf(p))
                    .sum();
                top * s.powf(1.0 / p)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PointMap {
    s: Vec<usize>,
}

impl PointMap {
    pub fn new(s: Vec<usize>) -> Result<Self> {
        let n = s.len();
        if let Some(i) = s.iter().position(|&x| x >= n) {
            return Err(Error::Invalid(format!(
                "map[{i}] = {} is outside 0..{n}",
                s[i]
            )));
        }
        Ok(Self { s })
    }

    pub fn from_json(js: &PointMapJson) -> Result<Self> {
        if js.map.len() != js.n {
            return Err(Error::Invalid(format!(
                "map: {} entries but n = {}",
                js.map.len(),
                js.n
            )));
        }
        Self::new(js.map.clone())
    }

    pub fn to_json(&self) -> PointMapJson {
        PointMapJson {
            n: self.n(),
            map: self.s.clone(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self { s: (0..n).collect() }
    }

    /// `i ↦ i + 1 mod n`.
    pub fn cyclic_shift(n: usize) -> Self {
        Self {
            s: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    pub fn constant(n: usize, target: usize) -> Result<Self> {
        Self::new(vec![target; n])
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.s[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.s
    }

    pub fn is_bijection(&self) -> bool {
        let mut hit = vec![false; self.n()];
        for &j in &self.s {
            if hit[j] {
                return false;
            }
            hit[j] = true;
        }
        true
    }

    /// Mass `Σ_{i: s(i) = j} μ_i` pushed onto each point `j`.
    pub fn pushforward(&self, sp: &FiniteMeasureSpace) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        for (i, &j) in self.s.iter().enumerate() {
            out[j] += sp.mu[i];
        }
        out
    }

    /// `max_j |(S_* μ)_j − μ_j| / μ_j`.
    pub fn measure_preservation_defect(&self, sp: &FiniteMeasureSpace) -> Result<f64> {
        check_len(sp.n(), self.n())?;
        Ok(self
            .pushforward(sp)
            .iter()
            .zip(&sp.mu)
            .map(|(a, m)| (a - m).abs() / m)
            .fold(0.0, f64::max))
    }

    pub fn is_measure_preserving(&self, sp: &FiniteMeasureSpace, tol: Tolerance) -> Result<bool> {
        Ok(self.measure_preservation_defect(sp)? <= tol.bound(1.0))
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalOperator {
    matrix: ComplexMatrix,
}

impl ClassicalOperator {
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        crate::linalg::ensure_finite(&matrix)?;
        Ok(Self { matrix })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        Self {
            matrix: crate::linalg::from_real_rows(rows),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: crate::linalg::identity(n),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Points of the output space.
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    /// Points of the input space.
    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn apply(&self, f: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * f
    }

    pub fn compose(&self, inner: &ClassicalOperator) -> ClassicalOperator {
        Self {
            matrix: &self.matrix * &inner.matrix,
        }
    }

    /// Adjoint for the pairings `⟨·,·⟩_ν` on the output and `⟨·,·⟩_μ` on
    /// the input: `M_μ^{-1} K* M_ν`.
    pub fn weighted_adjoint(
        &self,
        input: &FiniteMeasureSpace,
        output: &FiniteMeasureSpace,
    ) -> Result<ClassicalOperator> {
        check_len(self.cols(), input.n())?;
        check_len(self.rows(), output.n())?;
        let k = &self.matrix;
        let matrix = ComplexMatrix::from_fn(self.cols(), self.rows(), |j, i| {
            k[(i, j)].conj() * (output.mu[i] / input.mu[j])
        });
        Ok(Self { matrix })
    }
}

/// `(V f)_i = f_{s(i)}`.
pub fn koopman_of(s: &PointMap) -> ClassicalOperator {
    let n = s.n();
    let mut matrix = ComplexMatrix::zeros(n, n);
    for (i, &j) in s.s.iter().enumerate() {
        matrix[(i, j)] = c(1.0, 0.0);
    }
    ClassicalOperator { matrix }
}

/// Adjoint of [`koopman_of`] under `⟨f, g⟩_μ`.
pub fn frobenius_perron_of(s: &PointMap, sp: &FiniteMeasureSpace) -> Result<ClassicalOperator> {
    koopman_of(s).weighted_adjoint(sp, sp)
}

#[derive(Debug, Clone, Serialize)]
pub struct DoublyStochasticReport {
    pub ok: bool,
    /// Positivity: `max(0, −min Re W_ij)` together with the largest `|Im W_ij|`.
    pub a: f64,
    /// Integral preservation: `max_j |(μᵀW)_j − μ_j|` over the total mass.
    pub b: f64,
    /// Unitality: `max_i |(W 1)_i − 1|`.
    pub c: f64,
}

pub fn doubly_stochastic_check(
    w: &ClassicalOperator,
    sp: &FiniteMeasureSpace,
    tol: Tolerance,
) -> Result<DoublyStochasticReport> {
    check_len(sp.n(), w.rows())?;
    check_len(sp.n(), w.cols())?;
    let m = &w.matrix;
    let n = sp.n();

    let mut a = 0.0f64;
    for z in m.iter() {
        a = a.max(-z.re).max(z.im.abs());
    }
    let total = sp.total_mass();
    let mut b = 0.0f64;
    for j in 0..n {
        let col: Complex64 = (0..n).map(|i| m[(i, j)] * sp.mu[i]).sum();
        b = b.max((col - sp.mu[j]).norm() / total);
    }
    let mut cdef = 0.0f64;
    for i in 0..n {
        let row: Complex64 = m.row(i).iter().sum();
        cdef = cdef.max((row - 1.0).norm());
    }
    let bound = tol.bound(1.0);
    Ok(DoublyStochasticReport {
        ok: a <= bound && b <= bound && cdef <= bound,
        a,
        b,
        c: cdef,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightedPermutation {
    /// Every row has exactly one entry above the support threshold.
    pub ok: bool,
    /// First row violating the structure.
    pub failing_row: Option<usize>,
    pub h: Vec<[f64; 2]>,
    pub s: Option<PointMap>,
    /// `max_j |Σ_{i∈S⁻¹(j)} |h_i|^p μ_i − μ_j| / μ_j`; for `p = ∞`,
    /// `max_i ||h_i| − 1|`, or 1 when `S` misses a point.
    pub compatibility_defect: Option<f64>,
    /// Structure found and compatibility within tolerance, i.e. `V` is an
    /// `L^p` isometry of weighted-permutation form.
    pub isometric: bool,
}

/// Splits `V` as `(Vf)_i = h_i f_{S(i)}` when each row has a single
/// nonzero entry.
pub fn weighted_permutation_decompose(
    v: &ClassicalOperator,
    sp: &FiniteMeasureSpace,
    p: PExponent,
    tol: Tolerance,
) -> Result<WeightedPermutation> {
    check_len(sp.n(), v.rows())?;
    check_len(sp.n(), v.cols())?;
    let n = sp.n();
    let m = &v.matrix;
    let mut h = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    for i in 0..n {
        let top = m.row(i).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let support: Vec<usize> = (0..n)
            .filter(|&j| top > 0.0 && m[(i, j)].norm() > SUPPORT_THRESHOLD * top)
            .collect();
        if support.len() != 1 {
            return Ok(WeightedPermutation {
                ok: false,
                failing_row: Some(i),
                h: Vec::new(),
                s: None,
                compatibility_defect: None,
                isometric: false,
            });
        }
        h.push(m[(i, support[0])]);
        s.push(support[0]);
    }

    let defect = match p {
        PExponent::Finite(p) => {
            let mut mass = vec![0.0; n];
            for i in 0..n {
                mass[s[i]] += h[i].norm().powf(p) * sp.mu[i];
            }
            mass.iter()
                .zip(&sp.mu)
                .map(|(a, b)| (a - b).abs() / b)
                .fold(0.0, f64::max)
        }
        PExponent::Infinity => {
            let mut hit = vec![false; n];
            s.iter().for_each(|&j| hit[j] = true);
            let modulus = h.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
            if hit.iter().all(|&x| x) {
                modulus
            } else {
                modulus.max(1.0)
            }
        }
    };
    Ok(WeightedPermutation {
        ok: true,
        failing_row: None,
        h: h.iter().map(|z| [z.re, z.im]).collect(),
        s: Some(PointMap { s }),
        compatibility_defect: Some(defect),
        isometric: defect <= tol.bound(1.0),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicativityReport {
    pub multiplicative: bool,
    /// `product_defect + unitality_defect`.
    pub defect: f64,
    /// `max_{i,j} ‖K(e_i ⊙ e_j) − K(e_i) ⊙ K(e_j)‖_∞`.
    pub product_defect: f64,
    /// `‖K 1 − 1‖_∞`.
    pub unitality_defect: f64,
    /// Basis pair attaining `product_defect`.
    pub worst_pair: Option<(usize, usize)>,
}

/// Multiplicativity on the indicator basis plus unitality.
///
/// Uses `e_i ⊙ e_j = δ_ij e_i`: the off-diagonal pairs contribute
/// `|K_ri K_rj|` and the diagonal ones `|K_ri − K_ri²|`, so the maximum over
/// pairs is found row by row without enumerating them.
pub fn multiplicativity_check(k: &ClassicalOperator, tol: Tolerance) -> MultiplicativityReport {
    let m = &k.matrix;
    let mut product = 0.0f64;
    let mut worst = None;
    for r in 0..k.rows() {
        let mut first = (0.0f64, 0usize);
        let mut second = (0.0f64, 0usize);
        for i in 0..k.cols() {
            let z = m[(r, i)];
            let d = (z - z * z).norm();
            if d > product {
                product = d;
                worst = Some((i, i));
            }
            let a = z.norm();
            if a > first.0 {
                second = first;
                first = (a, i);
            } else if a > second.0 {
                second = (a, i);
            }
        }
        let cross = first.0 * second.0;
        if cross > product {
            product = cross;
            worst = Some((first.1.min(second.1), first.1.max(second.1)));
        }
    }
    let unitality = (0..k.rows())
        .map(|r| (m.row(r).iter().sum::<Complex64>() - 1.0).norm())
        .fold(0.0, f64::max);
    let defect = product + unitality;
    MultiplicativityReport {
        multiplicative: defect <= tol.bound(1.0),
        defect,
        product_defect: product,
        unitality_defect: unitality,
        worst_pair: worst,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassicalIsometryReport {
    pub is_isometry: bool,
    /// Largest `|‖Vf‖_p − ‖f‖_p| / ‖f‖_p` over indicators and samples.
    pub max_rel_defect: f64,
    pub samples: usize,
}

/// `L^p(μ)` isometry test on every indicator plus `cfg.trials` Gaussian
/// functions.
pub fn classical_isometry_check(
    v: &ClassicalOperator,
    sp: &FiniteMeasureSpace,
    p: PExponent,
    cfg: &CheckConfig,
) -> Result<ClassicalIsometryReport> {
    check_len(sp.n(), v.rows())?;
    check_len(sp.n(), v.cols())?;
    let n = sp.n();
    let mut rng = seeded(cfg.seed);
    let mut inputs: Vec<DVector<Complex64>> = (0..n)
        .map(|i| DVector::from_fn(n, |k, _| c(if k == i { 1.0 } else { 0.0 }, 0.0)))
        .collect();
    inputs.extend((0..cfg.trials).map(|_| DVector::from_fn(n, |_, _| gaussian(&mut rng))));
    let mut max_rel = 0.0f64;
    for f in &inputs {
        let nf = sp.lp_norm(f, p);
        let nv = sp.lp_norm(&v.apply(f), p);
        max_rel = max_rel.max((nv - nf).abs() / nf);
    }
    Ok(ClassicalIsometryReport {
        is_isometry: max_rel <= cfg.tol.bound(1.0),
        max_rel_defect: max_rel,
        samples: inputs.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GgmProbe {
    pub positive: bool,
    pub unital: bool,
    pub l2_isometry: bool,
    pub decomposed: bool,
    /// Recovered weights all equal to 1.
    pub h_is_one: bool,
    /// Hypotheses hold but the weighted-permutation conclusion fails.
    pub counterexample_candidate: bool,
}

/// Finite probe of "positive, unital `L²` isometry ⇒ Koopman operator".
pub fn ggm_probe(
    v: &ClassicalOperator,
    sp: &FiniteMeasureSpace,
    cfg: &CheckConfig,
) -> Result<GgmProbe> {
    let ds = doubly_stochastic_check(v, sp, cfg.tol)?;
    let positive = ds.a <= cfg.tol.bound(1.0);
    let unital = ds.c <= cfg.tol.bound(1.0);
    let l2 = PExponent::Finite(2.0);
    let l2_isometry = classical_isometry_check(v, sp, l2, cfg)?.is_isometry;
    let wp = weighted_permutation_decompose(v, sp, l2, cfg.tol)?;
    let h_is_one = wp.ok
        && wp
            .h
            .iter()
            .all(|z| (c(z[0], z[1]) - 1.0).norm() <= cfg.tol.bound(1.0));
    Ok(GgmProbe {
        positive,
        unital,
        l2_isometry,
        decomposed: wp.ok,
        h_is_one,
        counterexample_candidate: positive && unital && l2_isometry && !h_is_one,
    })
}

pub fn random_measure_space(n: usize, rng: &mut impl Rng) -> FiniteMeasureSpace {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    FiniteMeasureSpace {
        mu: raw.iter().map(|m| m / total).collect(),
    }
}

pub fn random_map(n: usize, rng: &mut impl Rng) -> PointMap {
    PointMap {
        s: (0..n).map(|_| rng.random_range(0..n)).collect(),
    }
}

/// Random permutation with a normalized measure constant on its cycles.
///
/// With every point of positive mass, a measure-preserving self-map of a
/// finite space is onto, hence a permutation, and must then be constant on
/// cycles; this samples all such pairs.
pub fn random_measure_preserving(n: usize, rng: &mut impl Rng) -> (PointMap, FiniteMeasureSpace) {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut mu = vec![0.0; n];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mass = rng.random_range(0.1..1.0);
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            mu[i] = mass;
            i = perm[i];
        }
    }
    let total: f64 = mu.iter().sum();
    mu.iter_mut().for_each(|m| *m /= total);
    (PointMap { s: perm }, FiniteMeasureSpace { mu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, frobenius, identity};
    use proptest::{prop_assert, prop_assert_eq, proptest};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn fin(p: f64) -> PExponent {
        PExponent::Finite(p)
    }

    #[test]
    fn koopman_examples() {
        assert_eq!(koopman_of(&PointMap::identity(4)).matrix, identity(4));
        let shift = koopman_of(&PointMap::cyclic_shift(3));
        let want = ClassicalOperator::from_real_rows(&[&[0., 1., 0.], &[0., 0., 1.], &[1., 0., 0.]]);
        assert_eq!(shift, want);
        let k = koopman_of(&PointMap::constant(3, 0).unwrap());
        for i in 0..3 {
            assert_eq!(k.matrix[(i, 0)], c(1.0, 0.0));
            assert_eq!(k.matrix.row(i).iter().map(|z| z.norm()).sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn frobenius_perron_examples() {
        let sp = FiniteMeasureSpace::uniform(3);
        let fp = frobenius_perron_of(&PointMap::identity(3), &sp).unwrap();
        assert_eq!(fp.matrix, identity(3));

        let s = PointMap::cyclic_shift(3);
        let fp = frobenius_perron_of(&s, &sp).unwrap();
        let v = koopman_of(&s);
        assert!(frobenius(&(&fp.matrix * &v.matrix - identity(3))) < 1e-15);
        assert_eq!(fp.matrix, v.matrix.transpose());

        let mut rng = seeded(3);
        for n in 2..=8 {
            let (s, sp) = random_measure_preserving(n, &mut rng);
            let v = koopman_of(&s);
            let u = frobenius_perron_of(&s, &sp).unwrap();
            assert!(frobenius(&(&u.matrix * &v.matrix - identity(n))) < 1e-12);
        }
    }

    #[test]
    fn adjoint_duality_holds_for_arbitrary_maps() {
        let mut rng = seeded(4);
        for n in 1..=10 {
            let s = random_map(n, &mut rng);
            let sp = random_measure_space(n, &mut rng);
            let v = koopman_of(&s);
            let u = frobenius_perron_of(&s, &sp).unwrap();
            let f = DVector::from_fn(n, |_, _| gaussian(&mut rng));
            let g = DVector::from_fn(n, |_, _| gaussian(&mut rng));
            let lhs = sp.pairing(&v.apply(&f), &g);
            let rhs = sp.pairing(&f, &u.apply(&g));
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn doubly_stochastic_examples() {
        let sp = FiniteMeasureSpace::uniform(3);
        let perm = koopman_of(&PointMap::cyclic_shift(3));
        let r = doubly_stochastic_check(&perm, &sp, tol()).unwrap();
        assert!(r.ok);
        assert_eq!((r.a, r.b, r.c), (0.0, 0.0, 0.0));

        let neg = ClassicalOperator::from_real_rows(&[&[1.1, -0.1], &[0.0, 1.0]]);
        let r = doubly_stochastic_check(&neg, &FiniteMeasureSpace::uniform(2), tol()).unwrap();
        assert!((r.a - 0.1).abs() < 1e-15);
        assert!(!r.ok);

        let collapse = ClassicalOperator::from_real_rows(&[&[1.0, 0.0], &[1.0, 0.0]]);
        for mu in [vec![0.5, 0.5], vec![1.0, 1.0]] {
            let sp = FiniteMeasureSpace::new(mu).unwrap();
            let r = doubly_stochastic_check(&collapse, &sp, tol()).unwrap();
            assert_eq!(r.a, 0.0);
            assert_eq!(r.c, 0.0);
            assert!((r.b - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn frobenius_perron_of_measure_preserving_map_is_doubly_stochastic() {
        let mut rng = seeded(5);
        for n in 1..=12 {
            let (s, sp) = random_measure_preserving(n, &mut rng);
            let r = doubly_stochastic_check(&frobenius_perron_of(&s, &sp).unwrap(), &sp, tol()).unwrap();
            assert!(r.ok, "{r:?}");
            assert!(r.a == 0.0 && r.b < 1e-15 && r.c < 1e-15);
        }
    }

    #[test]
    fn frobenius_perron_of_collapsing_map_is_not_unital() {
        let s = PointMap::constant(3, 0).unwrap();
        let sp = FiniteMeasureSpace::uniform(3);
        let r = doubly_stochastic_check(&frobenius_perron_of(&s, &sp).unwrap(), &sp, tol()).unwrap();
        assert!(!r.ok);
        assert!(r.c > 0.5);
    }

    #[test]
    fn decompose_koopman_recovers_map() {
        let mut rng = seeded(6);
        for _ in 0..100 {
            let n = rng.random_range(1..=12);
            let (s, sp) = random_measure_preserving(n, &mut rng);
            for p in [fin(1.0), fin(3.0), PExponent::Infinity] {
                let d = weighted_permutation_decompose(&koopman_of(&s), &sp, p, tol()).unwrap();
                assert!(d.ok && d.isometric);
                assert_eq!(d.s.as_ref(), Some(&s));
                assert!(d.h.iter().all(|z| *z == [1.0, 0.0]));
            }
        }
    }

    #[test]
    fn phased_permutation_round_trip() {
        let mut rng = seeded(7);
        let n = 5;
        let (s, sp) = random_measure_preserving(n, &mut rng);
        let theta: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        let phases = ComplexMatrix::from_diagonal(&DVector::from_fn(n, |i, _| {
            Complex64::from_polar(1.0, theta[i])
        }));
        let v = ClassicalOperator::from_matrix(phases * koopman_of(&s).matrix).unwrap();
        let d = weighted_permutation_decompose(&v, &sp, fin(1.5), tol()).unwrap();
        assert!(d.ok && d.isometric);
        assert_eq!(d.s.unwrap(), s);
        for (i, z) in d.h.iter().enumerate() {
            assert!((c(z[0], z[1]) - Complex64::from_polar(1.0, theta[i])).norm() < 1e-15);
        }
    }

    #[test]
    fn hadamard_is_an_l2_isometry_but_not_a_weighted_permutation() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let h = ClassicalOperator::from_real_rows(&[&[r, r], &[r, -r]]);
        let sp = FiniteMeasureSpace::uniform(2);
        let cfg = CheckConfig::default();
        assert!(classical_isometry_check(&h, &sp, fin(2.0), &cfg).unwrap().is_isometry);
        assert!(!classical_isometry_check(&h, &sp, fin(3.0), &cfg).unwrap().is_isometry);
        let d = weighted_permutation_decompose(&h, &sp, fin(2.0), tol()).unwrap();
        assert!(!d.ok);
        assert_eq!(d.failing_row, Some(0));
    }

    #[test]
    fn non_preserving_weights_are_reported() {
        let sp = FiniteMeasureSpace::new(vec![0.2, 0.8]).unwrap();
        let swap = koopman_of(&PointMap::new(vec![1, 0]).unwrap());
        let d = weighted_permutation_decompose(&swap, &sp, fin(2.0), tol()).unwrap();
        assert!(d.ok);
        assert!(!d.isometric);
        // point 1 receives μ_0 = 0.2 instead of 0.8
        assert!((d.compatibility_defect.unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn multiplicativity_examples() {
        let mut rng = seeded(8);
        for n in 1..=8 {
            let r = multiplicativity_check(&koopman_of(&random_map(n, &mut rng)), tol());
            assert!(r.multiplicative);
            assert_eq!(r.defect, 0.0);
        }

        let avg = ClassicalOperator::from_matrix(
            (identity(3) + koopman_of(&PointMap::cyclic_shift(3)).matrix).scale(0.5),
        )
        .unwrap();
        let r = multiplicativity_check(&avg, tol());
        assert!(!r.multiplicative);
        assert!(r.defect >= 0.25);
        assert_eq!(r.unitality_defect, 0.0);

        let r = multiplicativity_check(&ClassicalOperator::from_matrix(diag(&[2.0, 1.0])).unwrap(), tol());
        assert!(!r.multiplicative);
        assert_eq!(r.unitality_defect, 1.0);
    }

    #[test]
    fn row_scan_matches_pair_enumeration() {
        let mut rng = seeded(9);
        for _ in 0..20 {
            let (rows, cols) = (rng.random_range(1..6), rng.random_range(1..6));
            let m = ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(&mut rng));
            let k = ClassicalOperator::from_matrix(m.clone()).unwrap();
            let mut brute = 0.0f64;
            for i in 0..cols {
                for j in 0..cols {
                    let lhs = if i == j { m.column(i).into_owned() } else { DVector::zeros(rows) };
                    let rhs = m.column(i).component_mul(&m.column(j));
                    let d = (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
                    brute = brute.max(d);
                }
            }
            let r = multiplicativity_check(&k, tol());
            assert!((r.product_defect - brute).abs() < 1e-14);
        }
    }

    #[test]
    fn koopman_isometry_iff_measure_preserving() {
        let mut rng = seeded(10);
        let cfg = CheckConfig::default();
        for _ in 0..40 {
            let n = rng.random_range(2..=12);
            let (s, sp) = if rng.random_bool(0.5) {
                random_measure_preserving(n, &mut rng)
            } else {
                (random_map(n, &mut rng), random_measure_space(n, &mut rng))
            };
            let preserving = s.is_measure_preserving(&sp, cfg.tol).unwrap();
            for p in PExponent::grid() {
                let iso = classical_isometry_check(&koopman_of(&s), &sp, p, &cfg).unwrap();
                assert_eq!(iso.is_isometry, preserving, "n = {n}, p = {p}");
            }
        }
    }

    #[test]
    fn ggm_probe_on_koopman_and_averaging() {
        let cfg = CheckConfig::default();
        let mut rng = seeded(11);
        for n in 2..=8 {
            let (s, sp) = random_measure_preserving(n, &mut rng);
            let g = ggm_probe(&koopman_of(&s), &sp, &cfg).unwrap();
            assert!(g.positive && g.unital && g.l2_isometry && g.h_is_one);
            assert!(!g.counterexample_candidate);
        }
        // a positive unital contraction that is not an isometry
        let sp = FiniteMeasureSpace::uniform(3);
        let avg = ClassicalOperator::from_matrix(ComplexMatrix::from_element(3, 3, c(1.0 / 3.0, 0.0))).unwrap();
        let g = ggm_probe(&avg, &sp, &cfg).unwrap();
        assert!(g.positive && g.unital && !g.l2_isometry);
        assert!(!g.counterexample_candidate);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(FiniteMeasureSpace::new(vec![1.0, 0.0]).is_err());
        assert!(FiniteMeasureSpace::new(vec![]).is_err());
        assert!(PointMap::new(vec![0, 3, 1]).is_err());
        let js = PointMapJson { n: 3, map: vec![0, 1] };
        assert!(PointMap::from_json(&js).unwrap_err().to_string().contains("map"));
    }

    proptest! {
        #[test]
        fn lp_norm_is_monotone_in_p_for_probability_measures(seed in 0u64..500) {
            let mut rng = seeded(seed);
            let n = rng.random_range(1..8);
            let sp = random_measure_space(n, &mut rng);
            let f = DVector::from_fn(n, |_, _| gaussian(&mut rng));
            let mut last = 0.0;
            for p in PExponent::grid().into_iter().chain([PExponent::Infinity]) {
                let v = sp.lp_norm(&f, p);
                prop_assert!(v >= last * (1.0 - 1e-12));
                last = v;
            }
        }

        #[test]
        fn composition_of_koopman_is_koopman_of_reversed_composition(seed in 0u64..500) {
            let mut rng = seeded(seed);
            let n = rng.random_range(1..8);
            let s = random_map(n, &mut rng);
            let t = random_map(n, &mut rng);
            // V_S V_T f = f∘T∘S
            let ts = PointMap::new((0..n).map(|i| t.image(s.image(i))).collect()).unwrap();
            prop_assert_eq!(koopman_of(&s).compose(&koopman_of(&t)), koopman_of(&ts));
        }
    }
}
