//! The acceptance suite: ten property checks at fixed seeds and tolerances.
//!
//! Oracles used here (the eigenvalue route to weighted norms, the
//! coordinate-set pair scan) are written independently of the code paths
//! they check.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::check::CheckConfig;
use crate::classical::{
    koopman_of, random_measure_preserving, weighted_permutation_decompose, ClassicalOperator,
    FiniteMeasureSpace, classical_isometry_check,
};
use crate::error::{Error, Result};
use crate::linalg::{self, frobenius, identity, ComplexMatrix, DensityMatrix, Tolerance};
use crate::lp::{
    integrability_constant, scale_rows, schatten_norm, tau_conjugate, weighted_norm, Direction,
    NormScaleReport, PExponent, QuantumMeasure, ScaleDirection,
};
use crate::mpc::{
    self, build_shift, commutation_check, filtration_check, intertwining_check,
    mpc_implementability, semigroup_check, stochasticity_suite, wt_build, SpectralFunction,
    TruncatedKShift,
};
use crate::random::{gaussian, gaussian_matrix, random_density, random_unitary, seeded};
use crate::superop::{
    change_of_representation_demo, implementability_check, inverse_weighted_transport,
    lamperti_decompose, phase_distance, weighted_isometry_transport, JordanKind, SuperOperator,
};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

type Check = fn() -> Result<(bool, String)>;

const CRITERIA: [(u8, &str, Check); 10] = [
    (1, "weighted_norm_axioms", weighted_norm_axioms),
    (2, "tau_isometry", tau_isometry),
    (3, "lamperti_round_trip", lamperti_round_trip),
    (4, "implementability_collapse", implementability_collapse),
    (5, "integrability_constants", integrability_constants),
    (6, "classical_weighted_permutations", classical_weighted_permutations),
    (7, "mpc_exact_identities", mpc_exact_identities),
    (8, "mpc_verdicts", mpc_verdicts),
    (9, "change_of_representation", change_of_representation),
    (10, "norm_scale_direction", norm_scale_direction),
];

pub fn criterion_names() -> Vec<(u8, &'static str)> {
    CRITERIA.iter().map(|(i, n, _)| (*i, *n)).collect()
}

pub fn run_criterion(id: u8) -> Option<CriterionOutcome> {
    let (id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (passed, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionOutcome {
        id: *id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0)).collect()
}

fn fin(p: f64) -> PExponent {
    PExponent::Finite(p)
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

/// Faithful state `Q diag(d) Q*` with its eigenbasis.
fn structured_state(n: usize, rng: &mut impl Rng) -> (QuantumMeasure, ComplexMatrix, Vec<f64>) {
    let q = random_unitary(n, rng);
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let d: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let rho = &q * linalg::diag(&d) * q.adjoint();
    let rho = (&rho + rho.adjoint()).scale(0.5);
    let m = QuantumMeasure::new(DensityMatrix::new(rho, Tolerance::default()).expect("faithful state"));
    (m, q, d)
}

fn phases(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| {
        num_complex::Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
    }))
}

/// A Jordan automorphism preserving the state `Q D Q*` and commuting with
/// its powers: `Ad(Q Φ Q*)`, or `X ↦ U Xᵀ U*` with `U = Q Φ Qᵀ`.
fn state_preserving_jordan(
    q: &ComplexMatrix,
    kind: JordanKind,
    rng: &mut impl Rng,
) -> (SuperOperator, ComplexMatrix) {
    let n = q.nrows();
    let phi = phases(n, rng);
    match kind {
        JordanKind::StarIsomorphism => {
            let u = q * phi * q.adjoint();
            (SuperOperator::conjugation(&u), u)
        }
        JordanKind::StarAntiIsomorphism => {
            let u = q * phi * q.transpose();
            (
                SuperOperator::conjugation(&u).compose(&SuperOperator::transpose(n)),
                u,
            )
        }
    }
}

/// Weighted norm via the eigenvalues of `B*B`, `B = ρ^{1/2p} A ρ^{1/2p}`.
fn oracle_weighted_norm(a: &ComplexMatrix, rho: &ComplexMatrix, p: f64) -> Result<f64> {
    let eig = linalg::hermitian_eig(rho, Tolerance::default())?;
    let w = eig.map_spectrum(|x| x.powf(1.0 / (2.0 * p)));
    let b = &w * a * &w;
    let gram = b.adjoint() * &b;
    let s = linalg::hermitian_eig(&gram, Tolerance::default())?;
    let total: f64 = s.eigenvalues.iter().map(|x| x.max(0.0).powf(p / 2.0)).sum();
    Ok(total.powf(1.0 / p))
}

fn weighted_norm_axioms() -> Result<(bool, String)> {
    let start = Instant::now();
    let mut rng = seeded(101);
    let ps = [1.0, 1.5, 2.0, 3.0];
    let (mut homog, mut tri, mut faith) = (0.0f64, 0.0f64, 0.0f64);
    for trial in 0..200 {
        let n = 2 + trial % 5;
        let m = QuantumMeasure::new(random_density(n, &mut rng));
        let rho_min = m.rho().eig().min();
        let a = gaussian_matrix(n, &mut rng);
        let b = gaussian_matrix(n, &mut rng);
        let lam = gaussian(&mut rng);
        for &p in &ps {
            let na = weighted_norm(&a, &m, fin(p))?;
            let nb = weighted_norm(&b, &m, fin(p))?;
            let nla = weighted_norm(&(&a * lam), &m, fin(p))?;
            homog = homog.max((nla - lam.norm() * na).abs() / (lam.norm() * na));
            let nab = weighted_norm(&(&a + &b), &m, fin(p))?;
            tri = tri.max((nab - na - nb) / (na + nb));
            // ‖A‖_F ≤ λ_min^{-1/p} n^{max(0, 1/2 − 1/p)} ‖A‖_p
            let bound = rho_min.powf(-1.0 / p) * (n as f64).powf((0.5 - 1.0 / p).max(0.0)) * na;
            faith = faith.max(frobenius(&a) / bound - 1.0);
            if weighted_norm(&ComplexMatrix::zeros(n, n), &m, fin(p))? != 0.0 {
                faith = f64::INFINITY;
            }
        }
    }
    let mut unit = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(2..=6);
        let m = QuantumMeasure::new(random_density(n, &mut rng));
        for p in PExponent::grid().into_iter().chain([PExponent::Infinity]) {
            unit = unit.max((weighted_norm(&identity(n), &m, p)? - 1.0).abs());
        }
    }
    let elapsed = start.elapsed();
    let ok = homog <= 1e-9 && tri <= 1e-9 && faith <= 1e-9 && unit <= 1e-12 && within(elapsed, 10.0);
    Ok((
        ok,
        format!(
            "homogeneity {homog:.1e}, triangle excess {tri:.1e}, faithfulness excess {faith:.1e}, |‖1‖-1| {unit:.1e}, within 10 s: {}",
            within(elapsed, 10.0)
        ),
    ))
}

fn tau_isometry() -> Result<(bool, String)> {
    let mut rng = seeded(202);
    let ps = [1.0, 1.5, 2.0, 3.0, 4.0];
    let (mut iso, mut oracle, mut round) = (0.0f64, 0.0f64, 0.0f64);
    for trial in 0..100 {
        let n = 2 + trial % 5;
        let p = ps[trial % ps.len()];
        let m = QuantumMeasure::new(random_density(n, &mut rng));
        let x = gaussian_matrix(n, &mut rng);
        let fwd = tau_conjugate(&x, &m, fin(p), Direction::Forward)?;
        let schatten = schatten_norm(&fwd, fin(p))?;
        let weighted = weighted_norm(&x, &m, fin(p))?;
        let independent = oracle_weighted_norm(&x, m.rho().matrix(), p)?;
        iso = iso.max((schatten - weighted).abs() / weighted);
        oracle = oracle.max((schatten - independent).abs() / independent);
        let back = tau_conjugate(&fwd, &m, fin(p), Direction::Inverse)?;
        round = round.max(frobenius(&(back - &x)) / frobenius(&x));
    }
    Ok((
        iso <= 1e-9 && oracle <= 1e-9 && round <= 1e-9,
        format!("isometry {iso:.1e}, vs eigenvalue oracle {oracle:.1e}, round trip {round:.1e}"),
    ))
}

fn lamperti_round_trip() -> Result<(bool, String)> {
    let mut rng = seeded(303);
    let cfg = CheckConfig::with_seed(303);
    let (mut kinds, mut w_err, mut u_err, mut lam_err) = (0usize, 0.0f64, 0.0f64, 0.0f64);
    for trial in 0..100 {
        let n = 2 + trial % 4;
        let p = [1.0, 2.0, 3.0][(trial / 4) % 3];
        let w0 = random_unitary(n, &mut rng);
        let u0 = random_unitary(n, &mut rng);
        let (kind, j0) = if trial % 2 == 0 {
            (JordanKind::StarIsomorphism, SuperOperator::conjugation(&u0))
        } else {
            (
                JordanKind::StarAntiIsomorphism,
                SuperOperator::conjugation(&u0).compose(&SuperOperator::transpose(n)),
            )
        };
        let t = SuperOperator::left_multiply(&w0).compose(&j0);
        let d = lamperti_decompose(&t, fin(p), &cfg)?;
        if d.kind == kind {
            kinds += 1;
        }
        w_err = w_err.max(phase_distance(&d.w, &w0));
        u_err = u_err.max(phase_distance(&d.implementing_unitary, &u0));
        lam_err = lam_err.max((d.lambda - 1.0).abs());
    }
    Ok((
        kinds == 100 && w_err <= 1e-8 && u_err <= 1e-8 && lam_err <= 1e-9,
        format!("kind {kinds}/100, W error {w_err:.1e}, U error {u_err:.1e}, |λ-1| {lam_err:.1e}"),
    ))
}

fn implementability_collapse() -> Result<(bool, String)> {
    let mut rng = seeded(404);
    let (mut passed, mut rejected, mut worst_vj) = (0usize, 0usize, 0.0f64);
    let mut first_failure = None;
    for trial in 0..100u64 {
        let n = 2 + (trial % 4) as usize;
        let p = fin([1.0, 2.0, 3.0][(trial % 3) as usize]);
        let kind = if trial % 2 == 0 {
            JordanKind::StarIsomorphism
        } else {
            JordanKind::StarAntiIsomorphism
        };
        let (m, q, _) = structured_state(n, &mut rng);
        let (v, _) = state_preserving_jordan(&q, kind, &mut rng);
        let cfg = CheckConfig::with_seed(trial);
        let r = implementability_check(&v, &m, p, &cfg)?;
        let vj = r.v_equals_j_residual.unwrap_or(f64::INFINITY);
        worst_vj = worst_vj.max(vj);
        if r.implementable && vj <= 1e-8 && r.kind == Some(kind) {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = r.failure.clone();
        }

        let t = weighted_isometry_transport(&v, &m, p)?;
        let noise = SuperOperator::from_matrix(n, gaussian_matrix(n * n, &mut rng))?;
        let perturbed = t.add(&noise.scale(1e-3));
        let decomposable = !matches!(
            lamperti_decompose(&perturbed, p, &cfg),
            Err(Error::NotDecomposable { .. })
        );
        let v_pert = inverse_weighted_transport(&perturbed, &m, p)?;
        let rp = implementability_check(&v_pert, &m, p, &cfg)?;
        if !decomposable && !rp.implementable {
            rejected += 1;
        }
    }
    let mut detail = format!(
        "accepted {passed}/100 (worst V-J {worst_vj:.1e}), perturbations rejected {rejected}/100"
    );
    if let Some(f) = first_failure {
        detail.push_str(&format!("; first failure: {f}"));
    }
    Ok((passed == 100 && rejected == 100, detail))
}

fn integrability_constants() -> Result<(bool, String)> {
    let cfg = CheckConfig::with_seed(505);
    let mut rng = seeded(505);
    let mut exact = 0;
    for n in 2..=6 {
        let id = SuperOperator::identity(n);
        exact += (integrability_constant(&id, &QuantumMeasure::maximally_mixed(n), &cfg)? == 1.0) as usize;
        let m = QuantumMeasure::new(random_density(n, &mut rng));
        exact += (integrability_constant(&id, &m, &cfg)? == 1.0) as usize;
    }

    let x = linalg::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let rho = QuantumMeasure::from_matrix(linalg::diag(&[2.0 / 3.0, 1.0 / 3.0]), cfg.tol)?;
    let pauli = integrability_constant(&SuperOperator::conjugation(&x), &rho, &cfg)?;

    let mut jordan = 0.0f64;
    for trial in 0..40 {
        let n = 2 + trial % 4;
        let kind = if trial % 2 == 0 {
            JordanKind::StarIsomorphism
        } else {
            JordanKind::StarAntiIsomorphism
        };
        let (m, q, _) = structured_state(n, &mut rng);
        let (j, _) = state_preserving_jordan(&q, kind, &mut rng);
        jordan = jordan.max((integrability_constant(&j, &m, &cfg)? - 1.0).abs());
    }
    Ok((
        exact == 10 && (pauli - 2.0).abs() <= 1e-10 && jordan <= 1e-9,
        format!(
            "identity gives c = 1 exactly in {exact}/10 states, Pauli-X c = {pauli:.12}, state-preserving Jordan |c-1| {jordan:.1e}"
        ),
    ))
}

fn classical_weighted_permutations() -> Result<(bool, String)> {
    let mut rng = seeded(606);
    let tol = Tolerance::default();
    let mut recovered = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..=12);
        let (s, sp) = random_measure_preserving(n, &mut rng);
        let d = weighted_permutation_decompose(&koopman_of(&s), &sp, fin(1.5), tol)?;
        if d.ok && d.isometric && d.s.as_ref() == Some(&s) && d.h.iter().all(|h| *h == [1.0, 0.0]) {
            recovered += 1;
        }
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = ClassicalOperator::from_real_rows(&[&[r, r], &[r, -r]]);
    let sp = FiniteMeasureSpace::uniform(2);
    let l2 = classical_isometry_check(&hadamard, &sp, fin(2.0), &CheckConfig::with_seed(606))?;
    let had = weighted_permutation_decompose(&hadamard, &sp, fin(2.0), tol)?;
    Ok((
        recovered == 100 && l2.is_isometry && !had.ok,
        format!(
            "recovered {recovered}/100, Hadamard L² isometry {} and decomposable {}",
            l2.is_isometry, had.ok
        ),
    ))
}

fn mpc_exact_identities() -> Result<(bool, String)> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 1..=3 {
        let k = build_shift(n)?;
        worst = worst.max(filtration_check(&k)?.defect);
        for t in 1..=2 {
            worst = worst.max(commutation_check(&k, t).defect);
            for f in [SpectralFunction::Logistic, SpectralFunction::Constant] {
                worst = worst.max(intertwining_check(&k, &f, t)?.defect);
                for s in 1..=2 {
                    if (s + t) as usize <= 2 * n {
                        worst = worst.max(semigroup_check(&k, &f, s, t)?.defect);
                    }
                }
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    Ok((
        worst <= mpc::IDENTITY_BOUND && within(elapsed, 30.0),
        format!(
            "largest defect {worst:.1e} over {cases} (N, t, f) cases, within 30 s: {}",
            within(elapsed, 30.0)
        ),
    ))
}

/// Pair scan over coordinate sets: `max |g(R Δ Q) − g(R) g(Q)|` for the
/// multiplier `g(R) = f(max R)/f(max R − t)` of `W_t*` on sets
/// `R ⊆ {−N+t, …, N}`, `g(∅) = 1`, divided by the squared atom count.
pub fn pair_scan_oracle(n: i32, t: i32, f: impl Fn(i32) -> f64) -> (f64, f64) {
    let coords: Vec<i32> = (-n + t..=n).collect();
    let sets: Vec<BTreeSet<i32>> = (0..1usize << coords.len())
        .map(|bits| {
            coords
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, &k)| k)
                .collect()
        })
        .collect();
    let g = |s: &BTreeSet<i32>| match s.iter().next_back() {
        None => 1.0,
        Some(&top) => f(top) / f(top - t),
    };
    let mut best = 0.0f64;
    for r in &sets {
        for q in &sets {
            let sym: BTreeSet<i32> = r.symmetric_difference(q).copied().collect();
            best = best.max((g(&sym) - g(r) * g(q)).abs());
        }
    }
    let atoms = sets.len() as f64;
    (best, best / (atoms * atoms))
}

fn logistic(s: i32) -> f64 {
    1.0 / (1.0 + (s as f64).exp())
}

fn mpc_verdicts() -> Result<(bool, String)> {
    let k: TruncatedKShift = build_shift(3)?;
    let tol = Tolerance::default();
    let w = wt_build(&k, &SpectralFunction::Logistic, 1)?;
    let st = stochasticity_suite(&k, &w, 1, 100, 808)?;
    let logistic_run = mpc_implementability(&k, &SpectralFunction::Logistic, 1, tol)?;
    let (pair_max, bound) = pair_scan_oracle(3, 1, logistic);
    let library_scan = mpc::pair_scan_bound(&k, &SpectralFunction::Logistic, 1)?;
    let scans_agree = (library_scan.pair_max - pair_max).abs() <= 1e-15;
    let constant_run = mpc_implementability(&k, &SpectralFunction::Constant, 1, tol)?;
    let ok = st.a_defect <= 1e-10
        && st.b_defect <= 1e-10
        && st.c_defect <= 1e-10
        && !logistic_run.implementable
        && bound > 0.0
        && logistic_run.defect >= bound
        && scans_agree
        && constant_run.implementable
        && constant_run.defect == 0.0;
    Ok((
        ok,
        format!(
            "stochasticity a/b/c {:.1e}/{:.1e}/{:.1e}; logistic implementable {} with defect {:.4} >= oracle bound {:.2e} (pair max {:.4}); f = 1 implementable {} with defect {:.1e}",
            st.a_defect,
            st.b_defect,
            st.c_defect,
            logistic_run.implementable,
            logistic_run.defect,
            bound,
            pair_max,
            constant_run.implementable,
            constant_run.defect
        ),
    ))
}

fn change_of_representation() -> Result<(bool, String)> {
    let mut rng = seeded(909);
    let mut good = 0;
    let mut first_failure = None;
    for trial in 0..20u64 {
        let n = 2 + (trial % 3) as usize;
        let cfg = CheckConfig::with_seed(trial);
        let kind = if trial % 2 == 0 {
            JordanKind::StarIsomorphism
        } else {
            JordanKind::StarAntiIsomorphism
        };
        let (u, lambda, m) = if trial < 10 {
            // any pair on the tracial state
            let u = random_unitary(n, &mut rng);
            let w = random_unitary(n, &mut rng);
            let lambda = match kind {
                JordanKind::StarIsomorphism => SuperOperator::conjugation(&w),
                JordanKind::StarAntiIsomorphism => {
                    SuperOperator::conjugation(&w).compose(&SuperOperator::transpose(n))
                }
            };
            (u, lambda, QuantumMeasure::maximally_mixed(n))
        } else {
            // both maps preserve a generic faithful state
            let (m, q, _) = structured_state(n, &mut rng);
            let (lambda, _) = state_preserving_jordan(&q, kind, &mut rng);
            let u = &q * phases(n, &mut rng) * q.adjoint();
            (u, lambda, m)
        };
        let report = change_of_representation_demo(&u, &lambda, &m, 3, &cfg)?;
        if report.all_implementable {
            good += 1;
        } else if first_failure.is_none() {
            first_failure = report.steps.iter().find_map(|s| s.failure.clone());
        }
    }
    let mut detail = format!("{good}/20 pairs implementable at t = 1, 2, 3");
    if let Some(f) = first_failure {
        detail.push_str(&format!("; first failure: {f}"));
    }
    Ok((good == 20, detail))
}

/// Direction committed in `fixtures/norm_scale_direction.json`.
#[derive(Debug, Clone, Deserialize)]
pub struct NormScaleFixture {
    pub direction: ScaleDirection,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub seed: u64,
}

pub fn norm_scale_fixture() -> Result<NormScaleFixture> {
    serde_json::from_str(include_str!("../fixtures/norm_scale_direction.json"))
        .map_err(|e| Error::Invalid(format!("norm scale fixture: {e}")))
}

/// The norm-scale experiment at the fixture's settings: trial `i` uses
/// dimension `dims[i % dims.len()]` and a fresh random state.
pub fn norm_scale_experiment(fx: &NormScaleFixture) -> Result<NormScaleReport> {
    let mut rng = seeded(fx.seed);
    let mut rows = Vec::new();
    for trial in 0..fx.trials {
        let n = fx.dims[trial % fx.dims.len()];
        let m = QuantumMeasure::new(random_density(n, &mut rng));
        let a = gaussian_matrix(n, &mut rng);
        rows.extend(scale_rows(&a, &m, fx.seed, trial, Tolerance::default())?);
    }
    Ok(NormScaleReport::from_rows(rows))
}

fn norm_scale_direction() -> Result<(bool, String)> {
    let fx = norm_scale_fixture()?;
    let report = norm_scale_experiment(&fx)?;
    Ok((
        fx.trials == 500 && report.direction == fx.direction,
        format!(
            "{} trials: {} less, {} ties, {} greater, direction {:?} (committed {:?})",
            fx.trials, report.less, report.ties, report.greater, report.direction, fx.direction
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_matches_known_norms() {
        let rho = linalg::diag(&[2.0 / 3.0, 1.0 / 3.0]);
        let a = linalg::diag(&[1.0, 0.0]);
        assert!((oracle_weighted_norm(&a, &rho, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let half = linalg::diag(&[0.5, 0.5]);
        let z = linalg::diag(&[1.0, -1.0]);
        assert!((oracle_weighted_norm(&z, &half, 2.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pair_oracle_vanishes_for_constant_f() {
        assert_eq!(pair_scan_oracle(2, 1, |_| 1.0), (0.0, 0.0));
        let (max, bound) = pair_scan_oracle(1, 1, logistic);
        assert!(max > 0.5 && bound > 0.0);
    }

    #[test]
    fn structured_jordan_preserves_state() {
        let mut rng = seeded(1);
        for kind in [JordanKind::StarIsomorphism, JordanKind::StarAntiIsomorphism] {
            let (m, q, _) = structured_state(3, &mut rng);
            let (j, _) = state_preserving_jordan(&q, kind, &mut rng);
            let rho = m.rho().matrix();
            let pushed = j.predual().apply(rho);
            assert!(frobenius(&(pushed - rho)) < 1e-12);
            let h = m.power(0.25).unwrap();
            let x = gaussian_matrix(3, &mut rng);
            assert!(frobenius(&(j.apply(&(&h * &x * &h)) - &h * j.apply(&x) * &h)) < 1e-12);
        }
    }

    #[test]
    fn names_are_unique_and_complete() {
        let names = criterion_names();
        assert_eq!(names.len(), 10);
        assert!(names.iter().enumerate().all(|(i, (id, _))| *id as usize == i + 1));
        assert!(run_criterion(11).is_none());
    }
}
