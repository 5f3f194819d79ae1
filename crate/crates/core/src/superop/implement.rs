//! Implementability of isometries of weighted `L^p` spaces by Jordan
//! automorphisms.
//!
//! An isometry `V` of `L^p(ω)` is transported to the Schatten class by
//! `T = τ_p ∘ V ∘ τ_p^{-1}`, i.e.
//! `V(X) = ρ^{-1/2p} T(ρ^{1/2p} X ρ^{1/2p}) ρ^{-1/2p}`. When `V` is also
//! unital and positive, the factorization `T = W λ J` collapses to
//! `W ∝ 1`, `λ = 1` and `V = J`.

use serde::Serialize;

use super::jordan::{jordan_check, JordanKind};
use super::lamperti::lamperti_decompose;
use super::{
    isometry_check, phase_distance, positivity_check, IsometryReport, NormKind,
    PositivityReport, SuperOperator,
};
use crate::check::CheckConfig;
use crate::error::{Error, Result};
use crate::linalg::{self, identity, ComplexMatrix};
use crate::lp::{PExponent, QuantumMeasure};

fn check_dims(v: &SuperOperator, m: &QuantumMeasure) -> Result<()> {
    if v.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            got: v.dim(),
        });
    }
    Ok(())
}

/// `T = τ_p ∘ V ∘ τ_p^{-1}`, an operator on the Schatten class.
pub fn weighted_isometry_transport(
    v: &SuperOperator,
    m: &QuantumMeasure,
    p: PExponent,
) -> Result<SuperOperator> {
    check_dims(v, m)?;
    let fwd = m.power(p.half_inverse())?;
    let inv = m.power(-p.half_inverse())?;
    Ok(SuperOperator::sandwich(&fwd, &fwd)
        .compose(v)
        .compose(&SuperOperator::sandwich(&inv, &inv)))
}

/// `V = τ_p^{-1} ∘ T ∘ τ_p`.
pub fn inverse_weighted_transport(
    t: &SuperOperator,
    m: &QuantumMeasure,
    p: PExponent,
) -> Result<SuperOperator> {
    check_dims(t, m)?;
    let fwd = m.power(p.half_inverse())?;
    let inv = m.power(-p.half_inverse())?;
    Ok(SuperOperator::sandwich(&inv, &inv)
        .compose(t)
        .compose(&SuperOperator::sandwich(&fwd, &fwd)))
}

#[derive(Debug, Clone, Serialize)]
pub struct ImplementabilityReport {
    pub implementable: bool,
    /// First hypothesis or conclusion that failed, if any.
    pub failure: Option<String>,
    /// `‖V(1) − 1‖_F`.
    pub unitality_defect: f64,
    pub positivity: PositivityReport,
    pub isometry: IsometryReport,
    pub kind: Option<JordanKind>,
    #[serde(serialize_with = "crate::io::ser_opt_matrix")]
    pub implementing_unitary: Option<ComplexMatrix>,
    pub lambda: Option<f64>,
    /// `min_φ ‖W − e^{iφ}·1‖_F`.
    pub w_phase_defect: Option<f64>,
    pub decomposition_residual: Option<f64>,
    /// Largest `‖V(E_ij) − J(E_ij)‖_F` over matrix units.
    pub v_equals_j_residual: Option<f64>,
    #[serde(skip)]
    pub j: Option<SuperOperator>,
}

/// Checks unitality, positivity and the onto-isometry property of `V`,
/// then decomposes its transport and tests `V = J`.
pub fn implementability_check(
    v: &SuperOperator,
    m: &QuantumMeasure,
    p: PExponent,
    cfg: &CheckConfig,
) -> Result<ImplementabilityReport> {
    check_dims(v, m)?;
    let n = v.dim();
    let tol = cfg.tol;
    let root_n = (n as f64).sqrt();

    let unitality_defect = linalg::frobenius(&(v.apply(&identity(n)) - identity(n)));
    let positivity = positivity_check(v, cfg)?;
    let isometry = isometry_check(v, NormKind::Weighted(m), p, cfg)?;

    let mut failure = None;
    let mut note = |msg: String| {
        if failure.is_none() {
            failure = Some(msg);
        }
    };
    if unitality_defect > tol.bound(root_n) {
        note(format!("not unital (defect {unitality_defect:e})"));
    }
    if !positivity.positive {
        note(format!(
            "not positive (min eigenvalue {:e})",
            positivity.min_eigenvalue
        ));
    }
    if !isometry.onto {
        note("not onto".into());
    }
    if !isometry.is_isometry {
        note(format!(
            "not an L^p isometry (defect {:e})",
            isometry.max_rel_defect
        ));
    }

    let mut report = ImplementabilityReport {
        implementable: false,
        failure: None,
        unitality_defect,
        positivity,
        isometry,
        kind: None,
        implementing_unitary: None,
        lambda: None,
        w_phase_defect: None,
        decomposition_residual: None,
        v_equals_j_residual: None,
        j: None,
    };

    let t = weighted_isometry_transport(v, m, p)?;
    match lamperti_decompose(&t, p, cfg) {
        Ok(d) => {
            let j = SuperOperator::conjugation(&d.implementing_unitary);
            let j = match d.kind {
                JordanKind::StarIsomorphism => j,
                JordanKind::StarAntiIsomorphism => j.compose(&SuperOperator::transpose(n)),
            };
            let w_phase = phase_distance(&d.w, &identity(n));
            let v_eq_j = v.distance_on_units(&j);
            if (d.lambda - 1.0).abs() > tol.bound(1.0) {
                note(format!("lambda = {} differs from 1", d.lambda));
            }
            if w_phase > tol.bound(root_n) {
                note(format!("W is not a phase times identity (defect {w_phase:e})"));
            }
            if v_eq_j > tol.bound(1.0) {
                note(format!("V differs from the recovered J by {v_eq_j:e}"));
            }
            report.kind = Some(d.kind);
            report.implementing_unitary = Some(d.implementing_unitary);
            report.lambda = Some(d.lambda);
            report.w_phase_defect = Some(w_phase);
            report.decomposition_residual = Some(d.residual);
            report.v_equals_j_residual = Some(v_eq_j);
            report.j = Some(j);
        }
        Err(Error::NotDecomposable { reason, defect, .. }) => {
            note(format!("transport not decomposable: {reason} (defect {defect:e})"));
        }
        Err(e) => return Err(e),
    }

    report.implementable = failure.is_none();
    report.failure = failure;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct ChangeOfRepStep {
    pub t: u32,
    pub implementable: bool,
    pub kind: Option<JordanKind>,
    #[serde(serialize_with = "crate::io::ser_opt_matrix")]
    pub implementing_unitary: Option<ComplexMatrix>,
    pub v_equals_j_residual: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChangeOfRepReport {
    pub steps: Vec<ChangeOfRepStep>,
    pub all_implementable: bool,
}

/// Runs [`implementability_check`] at `p = 2` on `Λ ∘ Ad(U^t) ∘ Λ^{-1}`
/// for `t = 1..=t_steps`.
pub fn change_of_representation_demo(
    u: &ComplexMatrix,
    lambda: &SuperOperator,
    m: &QuantumMeasure,
    t_steps: u32,
    cfg: &CheckConfig,
) -> Result<ChangeOfRepReport> {
    let jr = jordan_check(lambda, cfg.tol)?;
    if !jr.is_jordan {
        return Err(Error::NotJordan(jr.defect));
    }
    let inv = lambda.inverse()?;
    let mut steps = Vec::with_capacity(t_steps as usize);
    let mut power = identity(u.nrows());
    for t in 1..=t_steps {
        power = &power * u;
        let composite = lambda
            .compose(&SuperOperator::conjugation(&power))
            .compose(&inv);
        let r = implementability_check(&composite, m, PExponent::Finite(2.0), cfg)?;
        steps.push(ChangeOfRepStep {
            t,
            implementable: r.implementable,
            kind: r.kind,
            implementing_unitary: r.implementing_unitary,
            v_equals_j_residual: r.v_equals_j_residual,
            failure: r.failure,
        });
    }
    let all_implementable = steps.iter().all(|s| s.implementable);
    Ok(ChangeOfRepReport {
        steps,
        all_implementable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, frobenius, trace};
    use crate::random::{gaussian_matrix, random_density, random_unitary, seeded};

    fn fin(p: f64) -> PExponent {
        PExponent::Finite(p)
    }

    fn commuting_unitary(m: &QuantumMeasure, phases: &[f64]) -> ComplexMatrix {
        let q = &m.rho().eig().eigenvectors;
        let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            phases.len(),
            phases.iter().map(|&t| num_complex::Complex64::from_polar(1.0, t)),
        ));
        q * d * q.adjoint()
    }

    #[test]
    fn transport_is_identity_for_maximally_mixed_state() {
        let m = QuantumMeasure::maximally_mixed(3);
        let v = SuperOperator::from_matrix(3, gaussian_matrix(9, &mut seeded(1))).unwrap();
        for p in [1.0, 2.0, 3.0] {
            let t = weighted_isometry_transport(&v, &m, fin(p)).unwrap();
            assert!(t.distance_on_units(&v) < 1e-12);
        }
    }

    #[test]
    fn transport_of_commuting_conjugation_is_itself() {
        let m = QuantumMeasure::new(random_density(3, &mut seeded(2)));
        let u = commuting_unitary(&m, &[0.3, -1.2, 2.0]);
        let v = SuperOperator::conjugation(&u);
        let t = weighted_isometry_transport(&v, &m, fin(3.0)).unwrap();
        assert!(t.distance_on_units(&v) < 1e-10);
    }

    #[test]
    fn transport_round_trip() {
        let mut rng = seeded(3);
        for n in 2..=4 {
            let m = QuantumMeasure::new(random_density(n, &mut rng));
            let v = SuperOperator::from_matrix(n, gaussian_matrix(n * n, &mut rng)).unwrap();
            for p in [1.0, 2.0, 3.0] {
                let t = weighted_isometry_transport(&v, &m, fin(p)).unwrap();
                let back = inverse_weighted_transport(&t, &m, fin(p)).unwrap();
                let scale = frobenius(v.matrix());
                assert!(frobenius(&(back.matrix() - v.matrix())) <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn transport_preserves_isometry_verdicts() {
        let mut rng = seeded(4);
        let cfg = CheckConfig::default();
        for trial in 0..10 {
            let m = QuantumMeasure::new(random_density(3, &mut rng));
            let v = if trial % 2 == 0 {
                SuperOperator::conjugation(&commuting_unitary(&m, &[1.0, 2.0, 3.0]))
            } else {
                SuperOperator::conjugation(&random_unitary(3, &mut rng))
            };
            for p in [1.0, 2.0, 3.0] {
                let t = weighted_isometry_transport(&v, &m, fin(p)).unwrap();
                let rv = isometry_check(&v, NormKind::Weighted(&m), fin(p), &cfg).unwrap();
                let rt = isometry_check(&t, NormKind::Trace, fin(p), &cfg).unwrap();
                assert_eq!(rv.is_isometry, rt.is_isometry);
                assert_eq!(rv.is_isometry, trial % 2 == 0);
            }
        }
    }

    #[test]
    fn commuting_conjugation_is_implementable() {
        let m = QuantumMeasure::new(random_density(3, &mut seeded(5)));
        let u = commuting_unitary(&m, &[0.1, 0.7, -2.2]);
        let v = SuperOperator::conjugation(&u);
        for p in [1.0, 2.0, 3.0] {
            let r = implementability_check(&v, &m, fin(p), &Default::default()).unwrap();
            assert!(r.implementable, "{:?}", r.failure);
            assert_eq!(r.kind, Some(JordanKind::StarIsomorphism));
            assert!(r.j.unwrap().distance_on_units(&v) < 1e-9);
        }
    }

    #[test]
    fn transpose_is_implementable_for_maximally_mixed_state() {
        let m = QuantumMeasure::maximally_mixed(3);
        let r = implementability_check(&SuperOperator::transpose(3), &m, fin(2.0), &Default::default())
            .unwrap();
        assert!(r.implementable, "{:?}", r.failure);
        assert_eq!(r.kind, Some(JordanKind::StarAntiIsomorphism));
    }

    #[test]
    fn conditional_expectation_onto_scalars_is_not_implementable() {
        let rho = diag(&[0.6, 0.4]);
        let m = QuantumMeasure::from_matrix(rho.clone(), Default::default()).unwrap();
        let v = SuperOperator::from_fn(2, |x| identity(2) * trace(&(&rho * x)));
        let r = implementability_check(&v, &m, fin(2.0), &Default::default()).unwrap();
        assert!(!r.implementable);
        assert!(!r.isometry.onto);
        assert!(r.failure.unwrap().contains("onto"));
        assert!(r.unitality_defect < 1e-12);
        assert!(r.positivity.positive);
    }

    #[test]
    fn change_of_representation_examples() {
        let mut rng = seeded(6);
        let cfg = CheckConfig::default();
        let m = QuantumMeasure::maximally_mixed(3);
        let u = random_unitary(3, &mut rng);

        let r = change_of_representation_demo(&u, &SuperOperator::identity(3), &m, 3, &cfg).unwrap();
        assert!(r.all_implementable);

        let r = change_of_representation_demo(&u, &SuperOperator::transpose(3), &m, 3, &cfg).unwrap();
        assert!(r.all_implementable);
        // transpose ∘ Ad(U^t) ∘ transpose = Ad(conj(U)^t)
        let mut conj_power = identity(3);
        for step in &r.steps {
            conj_power = &conj_power * u.map(|z| z.conj());
            let got = step.implementing_unitary.as_ref().unwrap();
            assert!(phase_distance(got, &conj_power) < 1e-8);
            assert_eq!(step.kind, Some(JordanKind::StarIsomorphism));
        }

        let w0 = random_unitary(3, &mut rng);
        let r = change_of_representation_demo(&u, &SuperOperator::conjugation(&w0), &m, 2, &cfg)
            .unwrap();
        let mut power = identity(3);
        for step in &r.steps {
            power = &power * &u;
            let want = &w0 * &power * w0.adjoint();
            assert!(phase_distance(step.implementing_unitary.as_ref().unwrap(), &want) < 1e-8);
        }
    }

    #[test]
    fn change_of_representation_rejects_non_jordan() {
        let m = QuantumMeasure::maximally_mixed(2);
        let lam = SuperOperator::identity(2).scale(2.0);
        let u = identity(2);
        assert!(matches!(
            change_of_representation_demo(&u, &lam, &m, 1, &Default::default()),
            Err(Error::NotJordan(_))
        ));
    }
}
