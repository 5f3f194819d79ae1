//! Change of representation on a truncated two-sided Bernoulli shift.
//!
//! The window holds the coordinates `−N..=N`; coordinate `k` is bit `k + N`
//! of a `usize` mask. A mask `S` names the Walsh function
//! `w_S(x) = (−1)^{|S ∧ x|}` on the grid `{0,1}^{2N+1}`, with `x` again a
//! mask. These are ±1-valued and orthonormal for the uniform probability on
//! the grid. The age of `S ≠ ∅` is its largest coordinate; `w_∅ = 1` has
//! none.
//!
//! Every operator here sends each Walsh function to a multiple of another
//! one and carries a domain mask. Shifts push indices out of the window, and
//! checks only ever quantify over in-domain indices; reports state the
//! fraction covered.

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::check::CheckConfig;
use crate::classical::{multiplicativity_check, ClassicalOperator, MultiplicativityReport};
use crate::error::{Error, Result};
use crate::io::DefectRow;
use crate::linalg::{c, ComplexMatrix, Tolerance};
use crate::random::seeded;

pub const MAX_WINDOW: usize = 6;

/// Sampled densities used by [`stochasticity_suite`] unless told otherwise.
pub const DEFAULT_DENSITIES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedKShift {
    n: usize,
}

/// Coordinates of a Walsh index, ascending.
pub type WalshIndex = Vec<i32>;

pub fn build_shift(n: usize) -> Result<TruncatedKShift> {
    if n > MAX_WINDOW {
        return Err(Error::WindowTooLarge(n));
    }
    if n == 0 {
        return Err(Error::Invalid("N: window half-width must be at least 1".into()));
    }
    Ok(TruncatedKShift { n })
}

impl TruncatedKShift {
    pub fn half_width(&self) -> usize {
        self.n
    }

    /// Number of window coordinates, `2N + 1`.
    pub fn bits(&self) -> usize {
        2 * self.n + 1
    }

    pub fn dim(&self) -> usize {
        1 << self.bits()
    }

    pub fn full_mask(&self) -> usize {
        self.dim() - 1
    }

    /// Mask of the coordinates `lo..=hi`, clipped to the window.
    pub fn coord_mask(&self, lo: i32, hi: i32) -> usize {
        let n = self.n as i32;
        let (lo, hi) = (lo.max(-n), hi.min(n));
        if lo > hi {
            return 0;
        }
        let width = (hi - lo + 1) as usize;
        ((1usize << width) - 1) << (lo + n) as usize
    }

    pub fn age(&self, s: usize) -> Option<i32> {
        if s == 0 {
            None
        } else {
            Some((usize::BITS - 1 - s.leading_zeros()) as i32 - self.n as i32)
        }
    }

    pub fn coords(&self, s: usize) -> WalshIndex {
        (0..self.bits())
            .filter(|b| s >> b & 1 == 1)
            .map(|b| b as i32 - self.n as i32)
            .collect()
    }

    pub fn index_of(&self, coords: &[i32]) -> Result<usize> {
        let n = self.n as i32;
        let mut s = 0usize;
        for &k in coords {
            if k < -n || k > n {
                return Err(Error::Invalid(format!(
                    "coordinate {k} lies outside the window -{n}..={n}"
                )));
            }
            s |= 1 << (k + n);
        }
        Ok(s)
    }

    /// `S + t`, or `None` when it leaves the window.
    pub fn shifted(&self, s: usize, t: i32) -> Option<usize> {
        if t >= 0 {
            let t = t as usize;
            if t >= self.bits() {
                return (s == 0).then_some(0);
            }
            let out = s << t;
            (out <= self.full_mask()).then_some(out)
        } else {
            let t = (-t) as usize;
            if t >= self.bits() {
                return (s == 0).then_some(0);
            }
            (s & ((1 << t) - 1) == 0).then_some(s >> t)
        }
    }

    /// `U_t w_S = w_{S+t}` wherever `S + t` stays in the window.
    pub fn shift_operator(&self, t: i32) -> WalshOperator {
        let d = self.dim();
        let mut op = WalshOperator::empty(d);
        for s in 0..d {
            if let Some(target) = self.shifted(s, t) {
                op.set(s, Some((target, 1.0)));
            }
        }
        op
    }
}

/// Operator sending each in-domain `w_S` to `coef · w_target` or to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WalshOperator {
    image: Vec<Option<(usize, f64)>>,
    domain: Vec<bool>,
}

impl WalshOperator {
    fn empty(dim: usize) -> Self {
        Self {
            image: vec![None; dim],
            domain: vec![false; dim],
        }
    }

    fn diagonal(dim: usize, entry: impl Fn(usize) -> Option<f64>) -> Self {
        let mut op = Self::empty(dim);
        for s in 0..dim {
            if let Some(v) = entry(s) {
                op.set(s, (v != 0.0).then_some((s, v)));
            }
        }
        op
    }

    fn set(&mut self, s: usize, image: Option<(usize, f64)>) {
        self.domain[s] = true;
        self.image[s] = image;
    }

    pub fn dim(&self) -> usize {
        self.image.len()
    }

    pub fn in_domain(&self, s: usize) -> bool {
        self.domain[s]
    }

    /// Image of `w_S`: `None` off the domain, `Some(None)` when killed.
    pub fn image(&self, s: usize) -> Option<Option<(usize, f64)>> {
        self.domain[s].then_some(self.image[s])
    }

    pub fn domain_size(&self) -> usize {
        self.domain.iter().filter(|&&d| d).count()
    }

    pub fn domain_fraction(&self) -> f64 {
        self.domain_size() as f64 / self.dim() as f64
    }

    /// `self ∘ inner`, defined where `inner` is and its image lands in
    /// the domain of `self`.
    pub fn compose(&self, inner: &WalshOperator) -> WalshOperator {
        let mut out = Self::empty(self.dim());
        for s in 0..self.dim() {
            match inner.image(s) {
                None => {}
                Some(None) => out.set(s, None),
                Some(Some((mid, a))) => {
                    if let Some(img) = self.image(mid) {
                        out.set(s, img.map(|(t, b)| (t, a * b)));
                    }
                }
            }
        }
        out
    }

    /// Applies the operator to Walsh coefficients supported on the domain.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        let mut out = vec![0.0; self.dim()];
        for (s, &x) in v.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            match self.image(s) {
                None => return Err(Error::OffDomain(s)),
                Some(None) => {}
                Some(Some((t, a))) => out[t] += a * x,
            }
        }
        Ok(out)
    }

    /// Dense matrix in the Walsh basis; off-domain columns are zero.
    pub fn to_classical(&self) -> ClassicalOperator {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for (s, img) in self.image.iter().enumerate() {
            if let (true, Some((t, a))) = (self.domain[s], img) {
                m[(*t, s)] = c(*a, 0.0);
            }
        }
        ClassicalOperator::from_matrix(m).expect("finite coefficients")
    }
}

/// A defect measured over the common domain of the operators involved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainDefect {
    pub defect: f64,
    pub domain_fraction: f64,
}

/// `max_S ‖Σ_k c_k A_k w_S‖_∞` over `S` in every `A_k`'s domain and accepted
/// by `keep`.
pub fn combination_defect(
    terms: &[(f64, &WalshOperator)],
    keep: impl Fn(usize) -> bool,
) -> DomainDefect {
    let dim = terms.first().map_or(0, |t| t.1.dim());
    let mut defect = 0.0f64;
    let mut count = 0usize;
    let mut acc: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
    for s in 0..dim {
        if !keep(s) || !terms.iter().all(|(_, a)| a.in_domain(s)) {
            continue;
        }
        count += 1;
        acc.clear();
        for (coef, a) in terms {
            if let Some(Some((t, v))) = a.image(s) {
                match acc.iter_mut().find(|e| e.0 == t) {
                    Some(e) => e.1 += coef * v,
                    None => acc.push((t, coef * v)),
                }
            }
        }
        defect = acc.iter().map(|e| e.1.abs()).fold(defect, f64::max);
    }
    DomainDefect {
        defect,
        domain_fraction: if dim == 0 { 0.0 } else { count as f64 / dim as f64 },
    }
}

/// Projection onto the span of `w_∅` and the `w_S` of age at most `t`;
/// `t = −N−1` gives the projection onto constants.
pub fn conditional_expectation(k: &TruncatedKShift, t: i32) -> Result<WalshOperator> {
    let n = k.n as i32;
    if t < -n - 1 || t > n {
        return Err(Error::Invalid(format!(
            "t = {t}: conditional expectations are indexed by -{}..={n}",
            n + 1
        )));
    }
    Ok(WalshOperator::diagonal(k.dim(), |s| {
        Some(if k.age(s).is_none_or(|a| a <= t) { 1.0 } else { 0.0 })
    }))
}

/// `T w_S = age(S) w_S`; `w_∅` is outside the domain.
pub fn time_operator(k: &TruncatedKShift) -> WalshOperator {
    let mut op = WalshOperator::diagonal(k.dim(), |s| k.age(s).map(f64::from));
    op.domain[0] = false;
    op
}

/// `max ‖(T U_t − U_t T − t U_t) w_S‖` over in-domain `S ≠ ∅`.
pub fn commutation_check(k: &TruncatedKShift, t: i32) -> DomainDefect {
    let time = time_operator(k);
    let u = k.shift_operator(t);
    let tu = time.compose(&u);
    let ut = u.compose(&time);
    combination_defect(&[(1.0, &tu), (-1.0, &ut), (-(t as f64), &u)], |s| s != 0)
}

/// `max_{s,t} ‖E_s E_t − E_{min(s,t)}‖` over all index pairs, both orders.
pub fn filtration_check(k: &TruncatedKShift) -> Result<DomainDefect> {
    let n = k.n as i32;
    let es: Vec<WalshOperator> = (-n - 1..=n)
        .map(|t| conditional_expectation(k, t))
        .collect::<Result<_>>()?;
    let mut worst = DomainDefect {
        defect: 0.0,
        domain_fraction: 1.0,
    };
    for (i, a) in es.iter().enumerate() {
        for (j, b) in es.iter().enumerate() {
            let d = combination_defect(&[(1.0, &a.compose(b)), (-1.0, &es[i.min(j)])], |_| true);
            worst.defect = worst.defect.max(d.defect);
            worst.domain_fraction = worst.domain_fraction.min(d.domain_fraction);
        }
    }
    Ok(worst)
}

/// `T − Σ_t t (E_t − E_{t−1})` on the domain of `T`.
pub fn spectral_consistency_check(k: &TruncatedKShift) -> Result<DomainDefect> {
    let n = k.n as i32;
    let time = time_operator(k);
    let es: Vec<WalshOperator> = (-n - 1..=n)
        .map(|t| conditional_expectation(k, t))
        .collect::<Result<_>>()?;
    let mut terms: Vec<(f64, &WalshOperator)> = vec![(1.0, &time)];
    for t in -n..=n {
        let idx = (t + n + 1) as usize;
        terms.push((-(t as f64), &es[idx]));
        terms.push((t as f64, &es[idx - 1]));
    }
    Ok(combination_defect(&terms, |_| true))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralFunction {
    /// `f(s) = 1 / (1 + e^s)`.
    Logistic,
    /// `f ≡ 1`.
    Constant,
    /// Values on the ages `−N..=N` (`2N+1` entries) or `−N−1..=N+1`
    /// (`2N+3` entries).
    Table { values: Vec<f64> },
    /// `1` up to `s0`, `0` beyond: the coarse-graining case.
    Step { s0: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpectralValidation {
    pub finite: bool,
    pub positive: bool,
    pub non_increasing: bool,
    pub strictly_decreasing: bool,
    /// `f(s)² ≥ f(s−1) f(s+1)` at the interior ages.
    pub log_concave: bool,
    /// Values within `(0, 1]`, compatible with `f(−∞) = 1`, `f(+∞) = 0`.
    pub limits_consistent: bool,
}

impl SpectralFunction {
    fn table_offset(values: &[f64], n: usize) -> Result<i32> {
        let n = n as i32;
        match values.len() as i32 {
            l if l == 2 * n + 1 => Ok(-n),
            l if l == 2 * n + 3 => Ok(-n - 1),
            l => Err(Error::InvalidSpectralFunction(format!(
                "f.values: {l} entries, expected {} or {} for N = {n}",
                2 * n + 1,
                2 * n + 3
            ))),
        }
    }

    /// Ages on which the function is sampled for validation.
    pub fn ages(&self, k: &TruncatedKShift) -> Result<Vec<i32>> {
        let n = k.n as i32;
        Ok(match self {
            Self::Table { values } => {
                let lo = Self::table_offset(values, k.n)?;
                (lo..lo + values.len() as i32).collect()
            }
            _ => (-n - 1..=n + 1).collect(),
        })
    }

    pub fn eval(&self, k: &TruncatedKShift, age: i32) -> Result<f64> {
        Ok(match self {
            Self::Logistic => 1.0 / (1.0 + (age as f64).exp()),
            Self::Constant => 1.0,
            Self::Step { s0 } => {
                if age <= *s0 {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Table { values } => {
                let lo = Self::table_offset(values, k.n)?;
                let i = age - lo;
                if i < 0 || i as usize >= values.len() {
                    return Err(Error::InvalidSpectralFunction(format!(
                        "age {age} outside the table"
                    )));
                }
                values[i as usize]
            }
        })
    }

    pub fn validate(&self, k: &TruncatedKShift) -> Result<SpectralValidation> {
        let ages = self.ages(k)?;
        let v: Vec<f64> = ages.iter().map(|&a| self.eval(k, a)).collect::<Result<_>>()?;
        let finite = v.iter().all(|x| x.is_finite());
        let positive = v.iter().all(|&x| x > 0.0);
        let non_increasing = v.windows(2).all(|w| w[1] <= w[0]);
        let strictly_decreasing = v.windows(2).all(|w| w[1] < w[0]);
        let log_concave = v
            .windows(3)
            .all(|w| w[1] * w[1] >= w[0] * w[2] * (1.0 - 1e-12));
        let limits_consistent = !matches!(self, Self::Constant) && v.iter().all(|&x| x <= 1.0);
        Ok(SpectralValidation {
            finite,
            positive,
            non_increasing,
            strictly_decreasing,
            log_concave,
            limits_consistent,
        })
    }

    /// Rejects functions unusable in `Λ = f(T) + E_{−∞}` or in the
    /// semigroup ratios; log-concavity is reported, not required.
    pub fn require_usable(&self, k: &TruncatedKShift) -> Result<SpectralValidation> {
        let v = self.validate(k)?;
        if !v.finite {
            return Err(Error::InvalidSpectralFunction("f has non-finite values".into()));
        }
        if !v.positive {
            return Err(Error::InvalidSpectralFunction(
                "f vanishes on the window, so the ratios f(s+t)/f(s) are 0/0; use the coarse-graining constructor".into(),
            ));
        }
        if !v.non_increasing {
            return Err(Error::InvalidSpectralFunction("f is not non-increasing".into()));
        }
        Ok(v)
    }
}

/// `Λ w_S = f(age S) w_S`, `Λ w_∅ = w_∅`.
pub fn lambda_build(k: &TruncatedKShift, f: &SpectralFunction) -> Result<WalshOperator> {
    f.require_usable(k)?;
    let mut diag = vec![1.0; k.dim()];
    for (s, d) in diag.iter_mut().enumerate().skip(1) {
        *d = f.eval(k, k.age(s).expect("nonempty"))?;
    }
    Ok(WalshOperator::diagonal(k.dim(), |s| Some(diag[s])))
}

fn check_step(k: &TruncatedKShift, t: i32) -> Result<()> {
    if t < 1 {
        return Err(Error::Invalid(format!("t = {t}: the semigroup is indexed by t >= 1")));
    }
    if t as usize > 2 * k.n {
        return Err(Error::DomainEmpty { t, n: k.n });
    }
    Ok(())
}

/// `W_t w_S = f(age S + t)/f(age S) · w_{S+t}` on the shift domain,
/// `W_t w_∅ = w_∅`.
pub fn wt_build(k: &TruncatedKShift, f: &SpectralFunction, t: i32) -> Result<WalshOperator> {
    f.require_usable(k)?;
    check_step(k, t)?;
    let mut op = WalshOperator::empty(k.dim());
    for s in 0..k.dim() {
        let Some(target) = k.shifted(s, t) else {
            continue;
        };
        let coef = match k.age(s) {
            None => 1.0,
            Some(a) => f.eval(k, a + t)? / f.eval(k, a)?,
        };
        op.set(s, Some((target, coef)));
    }
    Ok(op)
}

/// `E_{s0} ∘ U_t`, the semigroup for the coarse-graining `Λ = E_{s0}`.
pub fn coarse_grained_wt(k: &TruncatedKShift, s0: i32, t: i32) -> Result<WalshOperator> {
    check_step(k, t)?;
    let n = k.n as i32;
    let e = conditional_expectation(k, s0.clamp(-n - 1, n))?;
    Ok(e.compose(&k.shift_operator(t)))
}

/// `‖W_t Λ − Λ U_t‖` on the shift domain.
pub fn intertwining_check(k: &TruncatedKShift, f: &SpectralFunction, t: i32) -> Result<DomainDefect> {
    let w = wt_build(k, f, t)?;
    let lam = lambda_build(k, f)?;
    let u = k.shift_operator(t);
    Ok(combination_defect(
        &[(1.0, &w.compose(&lam)), (-1.0, &lam.compose(&u))],
        |_| true,
    ))
}

/// `‖W_s W_t − W_{s+t}‖` where all three are defined.
pub fn semigroup_check(
    k: &TruncatedKShift,
    f: &SpectralFunction,
    s: i32,
    t: i32,
) -> Result<DomainDefect> {
    let ws = wt_build(k, f, s)?;
    let wt = wt_build(k, f, t)?;
    let wst = wt_build(k, f, s + t)?;
    Ok(combination_defect(&[(1.0, &ws.compose(&wt)), (-1.0, &wst)], |_| true))
}

/// Unnormalized fast Walsh–Hadamard transform, in place.
fn fwht(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Point values `Σ_S v_S w_S(x)` for every grid point `x`.
pub fn walsh_to_grid(k: &TruncatedKShift, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: v.len(),
        });
    }
    let mut out = v.to_vec();
    fwht(&mut out);
    Ok(out)
}

/// Inverse of [`walsh_to_grid`].
pub fn grid_to_walsh(k: &TruncatedKShift, g: &[f64]) -> Result<Vec<f64>> {
    let mut out = walsh_to_grid(k, g)?;
    let d = k.dim() as f64;
    out.iter_mut().for_each(|x| *x /= d);
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct StochasticityReport {
    /// `max(0, −min_x (Wρ)(x))` over the sampled densities of mean 1.
    pub a_defect: f64,
    /// Change of the `w_∅` coefficient, structurally and on the samples.
    pub b_defect: f64,
    /// `‖W w_∅ − w_∅‖`.
    pub c_defect: f64,
    pub samples: usize,
    pub domain_fraction: f64,
}

/// Coordinates a density may depend on so that it lies in the domain of a
/// step-`t` operator: `−N..=N−t`.
pub fn density_mask(k: &TruncatedKShift, t: i32) -> usize {
    k.coord_mask(-(k.n as i32), k.n as i32 - t)
}

/// Walsh coefficients of a random nonnegative mean-one density of the
/// coordinates in `mask`, which must be the low bits.
fn sample_density(k: &TruncatedKShift, low_bits: usize, rng: &mut impl Rng) -> Vec<f64> {
    let m = 1usize << low_bits;
    let mut g: Vec<f64> = (0..m)
        .map(|_| if rng.random_bool(0.5) { 0.0 } else { rng.sample::<f64, _>(Exp1) })
        .collect();
    let mean = g.iter().sum::<f64>() / m as f64;
    if mean == 0.0 {
        g.iter_mut().for_each(|x| *x = 1.0);
    } else {
        g.iter_mut().for_each(|x| *x /= mean);
    }
    fwht(&mut g);
    let mut v = vec![0.0; k.dim()];
    for (s, x) in g.iter().enumerate() {
        v[s] = x / m as f64;
    }
    v
}

/// Conditions (positivity, integral, unit) of a doubly stochastic operator
/// for a step-`t` Walsh operator `w`.
pub fn stochasticity_suite(
    k: &TruncatedKShift,
    w: &WalshOperator,
    t: i32,
    samples: usize,
    seed: u64,
) -> Result<StochasticityReport> {
    let c_defect = match w.image(0) {
        Some(Some((0, a))) => (a - 1.0).abs(),
        _ => f64::INFINITY,
    };
    let mut b_defect = 0.0f64;
    for s in 1..k.dim() {
        if let Some(Some((0, a))) = w.image(s) {
            b_defect = b_defect.max(a.abs());
        }
    }

    let low_bits = (k.bits() as i32 - t).max(0) as usize;
    let mut rng = seeded(seed);
    let mut a_defect = 0.0f64;
    for _ in 0..samples {
        let rho = sample_density(k, low_bits, &mut rng);
        let out = w.apply(&rho)?;
        b_defect = b_defect.max((out[0] - rho[0]).abs());
        let grid = walsh_to_grid(k, &out)?;
        let min = grid.iter().copied().fold(f64::INFINITY, f64::min);
        a_defect = a_defect.max(-min);
    }
    Ok(StochasticityReport {
        a_defect,
        b_defect,
        c_defect,
        samples,
        domain_fraction: w.domain_fraction(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MpcImplementability {
    pub implementable: bool,
    pub defect: f64,
    pub multiplicativity: MultiplicativityReport,
    /// Atoms of the algebra the adjoint acts on.
    pub atoms: usize,
    pub grid_points: usize,
    pub domain_fraction: f64,
}

/// Walsh-coefficient vector of `W* w_R`, with `W*` the adjoint of the
/// partially defined `W` restricted to its domain.
fn adjoint_images(w: &WalshOperator) -> Vec<Vec<(usize, f64)>> {
    let mut out = vec![Vec::new(); w.dim()];
    for s in 0..w.dim() {
        if let Some(Some((r, a))) = w.image(s) {
            out[r].push((s, a));
        }
    }
    out
}

/// Grid matrix of `W*` on the functions of the coordinates in `algebra`:
/// one row per grid point, one column per atom of the algebra.
pub fn adjoint_grid_operator(
    k: &TruncatedKShift,
    w: &WalshOperator,
    algebra: usize,
) -> Result<ClassicalOperator> {
    let bits: Vec<usize> = (0..k.bits()).filter(|b| algebra >> b & 1 == 1).collect();
    let m = 1usize << bits.len();
    let spread = |a: usize| {
        bits.iter()
            .enumerate()
            .filter(|(i, _)| a >> i & 1 == 1)
            .fold(0usize, |acc, (_, b)| acc | 1 << b)
    };
    let subsets: Vec<usize> = (0..m).map(spread).collect();
    let adj = adjoint_images(w);
    let d = k.dim();
    let mut mat = ComplexMatrix::zeros(d, m);
    let mut v = vec![0.0; d];
    for a in 0..m {
        let x = spread(a);
        v.iter_mut().for_each(|e| *e = 0.0);
        // indicator of the atom x: (1/m) Σ_R w_R(x) w_R
        for &r in &subsets {
            let sign = if (r & x).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            for &(s, coef) in &adj[r] {
                v[s] += sign * coef / m as f64;
            }
        }
        let grid = walsh_to_grid(k, &v)?;
        for (row, val) in grid.iter().enumerate() {
            mat[(row, a)] = c(*val, 0.0);
        }
    }
    ClassicalOperator::from_matrix(mat)
}

/// Runs the multiplicativity test on `W*` over the algebra of the
/// coordinates in `algebra` (the image coordinates of `W`).
pub fn adjoint_implementability(
    k: &TruncatedKShift,
    w: &WalshOperator,
    algebra: usize,
    tol: Tolerance,
) -> Result<MpcImplementability> {
    let op = adjoint_grid_operator(k, w, algebra)?;
    let mult = multiplicativity_check(&op, tol);
    Ok(MpcImplementability {
        implementable: mult.multiplicative,
        defect: mult.defect,
        atoms: op.cols(),
        grid_points: op.rows(),
        domain_fraction: w.domain_fraction(),
        multiplicativity: mult,
    })
}

/// Image coordinates of the step-`t` semigroup: `−N+t..=N`.
pub fn wt_image_mask(k: &TruncatedKShift, t: i32) -> usize {
    k.coord_mask(-(k.n as i32) + t, k.n as i32)
}

/// Is the adjoint of `W_t` a Koopman operator on the functions of the
/// image coordinates?
pub fn mpc_implementability(
    k: &TruncatedKShift,
    f: &SpectralFunction,
    t: i32,
    tol: Tolerance,
) -> Result<MpcImplementability> {
    let w = wt_build(k, f, t)?;
    adjoint_implementability(k, &w, wt_image_mask(k, t), tol)
}

/// Same test for `E_{s0} U_t` on the functions of the coordinates
/// `−N+t..=s0`.
pub fn coarse_grained_implementability(
    k: &TruncatedKShift,
    s0: i32,
    t: i32,
    tol: Tolerance,
) -> Result<MpcImplementability> {
    let w = coarse_grained_wt(k, s0, t)?;
    adjoint_implementability(k, &w, k.coord_mask(-(k.n as i32) + t, s0), tol)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairScan {
    /// `max_{R,Q} |g(R Δ Q) − g(R) g(Q)|` over Walsh indices of the image
    /// algebra, with `g` the multiplier of `W_t*` and `g(∅) = 1`.
    pub pair_max: f64,
    pub worst: (usize, usize),
    pub atoms: usize,
    /// `pair_max / atoms²`, a lower bound for the indicator-basis
    /// multiplicativity defect.
    pub lower_bound: f64,
}

/// Brute-force scan over Walsh pairs computed from `f` alone.
///
/// `W_t*` acts on each `w_R` as `g(R)·w_{R−t}`, so the defect on the pair
/// `(w_R, w_Q)` has sup norm `|g(RΔQ) − g(R)g(Q)|`. Expanding both Walsh
/// functions in the `m` atom indicators writes it as a signed sum of `m²`
/// indicator-pair defects, hence the bound.
pub fn pair_scan_bound(k: &TruncatedKShift, f: &SpectralFunction, t: i32) -> Result<PairScan> {
    f.require_usable(k)?;
    check_step(k, t)?;
    let n = k.n as i32;
    let lo = -n + t;
    let width = (n - lo + 1) as usize;
    let m = 1usize << width;
    // subsets of lo..=n encoded relative to lo; the top set bit is the age
    let g = |r: usize| -> Result<f64> {
        if r == 0 {
            return Ok(1.0);
        }
        let age = lo + (usize::BITS - 1 - r.leading_zeros()) as i32;
        Ok(f.eval(k, age)? / f.eval(k, age - t)?)
    };
    let gs: Vec<f64> = (0..m).map(g).collect::<Result<_>>()?;
    let mut best = (0.0f64, (0usize, 0usize));
    for r in 0..m {
        for q in r..m {
            let d = (gs[r ^ q] - gs[r] * gs[q]).abs();
            if d > best.0 {
                best = (d, (r << (lo + n) as usize, q << (lo + n) as usize));
            }
        }
    }
    Ok(PairScan {
        pair_max: best.0,
        worst: best.1,
        atoms: m,
        lower_bound: best.0 / (m * m) as f64,
    })
}

/// `{"N": 3, "f": {"kind": "logistic"}, "t": 1, "seed": 7}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpcDescriptor {
    #[serde(rename = "N")]
    pub n: usize,
    pub f: SpectralFunction,
    pub t: i32,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MpcSuiteReport {
    pub descriptor: MpcDescriptor,
    pub spectral: SpectralValidation,
    /// `"wt"` or `"coarse_grained"`.
    pub construction: String,
    pub rows: Vec<DefectRow>,
    /// Exact identities within `1e-12`.
    pub identities_hold: bool,
    pub stochasticity: StochasticityReport,
    pub implementability: MpcImplementability,
    pub pair_scan: Option<PairScan>,
    pub note: String,
}

/// Bound for identities that hold exactly up to floating-point rounding.
pub const IDENTITY_BOUND: f64 = 1e-12;

/// Every identity, stochasticity condition and the implementability test
/// for one descriptor.
pub fn run_descriptor(desc: &MpcDescriptor, samples: usize, cfg: &CheckConfig) -> Result<MpcSuiteReport> {
    let k = build_shift(desc.n)?;
    let t = desc.t;
    check_step(&k, t)?;
    let spectral = desc.f.validate(&k)?;
    let mut rows = Vec::new();
    let mut push = |name: &str, d: DomainDefect| {
        rows.push(DefectRow::new("identities", name, d.defect, d.domain_fraction));
        d.defect
    };
    let mut worst = 0.0f64;
    worst = worst.max(push("commutation", commutation_check(&k, t)));
    worst = worst.max(push("filtration", filtration_check(&k)?));
    worst = worst.max(push("spectral_consistency", spectral_consistency_check(&k)?));

    let (construction, w, algebra, pair_scan) = match &desc.f {
        SpectralFunction::Step { s0 } => {
            let w = coarse_grained_wt(&k, *s0, t)?;
            let alg = k.coord_mask(-(k.n as i32) + t, *s0);
            ("coarse_grained", w, alg, None)
        }
        f => {
            worst = worst.max(push("intertwining", intertwining_check(&k, f, t)?));
            for s in 1..=t {
                if (s + t) as usize <= 2 * k.n {
                    worst = worst.max(push(&format!("semigroup_{s}_{t}"), semigroup_check(&k, f, s, t)?));
                }
            }
            let w = wt_build(&k, f, t)?;
            ("wt", w, wt_image_mask(&k, t), Some(pair_scan_bound(&k, f, t)?))
        }
    };

    let stochasticity = stochasticity_suite(&k, &w, t, samples, desc.seed)?;
    for (name, v) in [
        ("a_defect", stochasticity.a_defect),
        ("b_defect", stochasticity.b_defect),
        ("c_defect", stochasticity.c_defect),
    ] {
        rows.push(DefectRow::new("stochasticity", name, v, stochasticity.domain_fraction));
    }
    let implementability = adjoint_implementability(&k, &w, algebra, cfg.tol)?;
    rows.push(DefectRow::new(
        "implementability",
        "multiplicativity_defect",
        implementability.defect,
        implementability.domain_fraction,
    ));
    if let Some(ps) = &pair_scan {
        rows.push(DefectRow::new(
            "implementability",
            "pair_scan_lower_bound",
            ps.lower_bound,
            implementability.domain_fraction,
        ));
    }

    let note = if implementability.implementable {
        "adjoint is multiplicative: the semigroup is induced by a point map".to_string()
    } else {
        "adjoint is not multiplicative: no measure-preserving point map induces this semigroup"
            .to_string()
    };
    Ok(MpcSuiteReport {
        descriptor: desc.clone(),
        spectral,
        construction: construction.into(),
        rows,
        identities_hold: worst <= IDENTITY_BOUND,
        stochasticity,
        implementability,
        pair_scan,
        note,
    })
}
