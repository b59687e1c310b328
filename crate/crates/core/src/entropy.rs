//! Entropy functionals and their classical companions: η, Shannon H, von
//! Neumann S, generalized S_f, multinomial/Stirling asymptotics, and the
//! mixing-law / subadditivity checkers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{self, eig_hermitian, partial_trace, Keep};
use crate::root;
use crate::states::DensityOperator;
use crate::tol;

/// Nonnegative reals summing to one (within 1e-12).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for ProbabilityVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        ProbabilityVector::new(v)
    }
}

impl From<ProbabilityVector> for Vec<f64> {
    fn from(p: ProbabilityVector) -> Vec<f64> {
        p.probs
    }
}

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::BadProbabilityVector {
                reason: "empty".into(),
            });
        }
        if let Some(&bad) = probs.iter().find(|&&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::BadProbabilityVector {
                reason: format!("entry {bad} is negative or not finite"),
            });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadProbabilityVector {
                reason: format!("sum is {total}, must be 1"),
            });
        }
        Ok(ProbabilityVector { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityVector {
            probs: vec![1.0 / n as f64; n],
        }
    }
}

/// Integer occupation numbers of `m` boxes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Macrostate {
    occupations: Vec<u64>,
}

impl Macrostate {
    pub fn new(occupations: Vec<u64>) -> Result<Self> {
        if occupations.is_empty() || occupations.iter().sum::<u64>() == 0 {
            return Err(Error::BadFormat {
                reason: "macrostate needs a positive total occupation".into(),
            });
        }
        Ok(Macrostate { occupations })
    }

    pub fn occupations(&self) -> &[u64] {
        &self.occupations
    }

    pub fn total(&self) -> u64 {
        self.occupations.iter().sum()
    }

    /// Relative frequencies Nᵢ/N.
    pub fn frequencies(&self) -> ProbabilityVector {
        let n = self.total() as f64;
        ProbabilityVector {
            probs: self.occupations.iter().map(|&k| k as f64 / n).collect(),
        }
    }
}

/// η(t) = -t ln t, continuously extended by η(0) = 0.
pub fn eta(t: f64) -> Result<f64> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::DomainError { at: t });
    }
    Ok(eta_clamped(t))
}

/// η with tiny negative inputs (validation dust) treated as zero.
pub(crate) fn eta_clamped(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -t * t.ln()
    }
}

/// Shannon entropy Σ η(pᵢ), in nats.
pub fn shannon(p: &ProbabilityVector) -> f64 {
    p.probs().iter().map(|&x| eta_clamped(x)).sum()
}

/// Binary Shannon entropy h(λ) = η(λ) + η(1-λ).
pub fn binary_entropy(lam: f64) -> f64 {
    eta_clamped(lam) + eta_clamped(1.0 - lam)
}

/// Von Neumann entropy S(D) = Tr η(D), in nats.
pub fn von_neumann(d: &DensityOperator) -> Result<f64> {
    // Tr f(D) is the sum of f over the spectrum; negative dust below the
    // clip tolerance contributes zero.
    s_f(d, |t| eta_clamped(t.max(0.0)))
}

/// Generalized entropy S_f(D) = Tr f(D) = Σ f(λᵢ).
pub fn s_f(d: &DensityOperator, f: impl Fn(f64) -> f64) -> Result<f64> {
    let eig = eig_hermitian(d.matrix())?;
    let mut total = 0.0;
    for &lambda in &eig.values {
        let y = f(lambda);
        if !y.is_finite() {
            return Err(Error::DomainError { at: lambda });
        }
        total += y;
    }
    Ok(total)
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// ln of the multinomial coefficient N!/(N₁!…N_m!), exactly via summed
/// logarithms.
pub fn log_multinomial(ms: &Macrostate) -> f64 {
    ln_factorial(ms.total()) - ms.occupations().iter().map(|&k| ln_factorial(k)).sum::<f64>()
}

/// |(1/N) ln multinomial - H(Nᵢ/N)|: the Stirling remainder.
pub fn stirling_gap(ms: &Macrostate) -> f64 {
    let n = ms.total() as f64;
    (log_multinomial(ms) / n - shannon(&ms.frequencies())).abs()
}

/// Entropy-maximizing distribution under the mean constraint Σ pᵢEᵢ = e:
/// pᵢ = exp(-λEᵢ)/Z with λ solved by bracketed root-finding.
///
/// Returns the distribution and the multiplier λ.
pub fn maxwell_boltzmann(levels: &[f64], e: f64) -> Result<(ProbabilityVector, f64)> {
    if levels.len() < 2 || levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadFormat {
            reason: "levels must be strictly ascending with at least two entries".into(),
        });
    }
    let lo = levels[0];
    let hi = *levels.last().unwrap();
    if !(e > lo && e < hi) {
        return Err(Error::ConstraintOutOfRange {
            value: e,
            lo,
            hi,
        });
    }
    let probs_at = |lam: f64| -> Vec<f64> {
        // Shift by the max exponent for overflow safety.
        let shift = levels
            .iter()
            .map(|&ei| -lam * ei)
            .fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = levels.iter().map(|&ei| (-lam * ei - shift).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    };
    let mean_at = |lam: f64| -> f64 {
        probs_at(lam)
            .iter()
            .zip(levels)
            .map(|(p, ei)| p * ei)
            .sum()
    };
    let bracket = root::expand_bracket(mean_at, e, -1.0, 1.0, 200)?;
    let lam = root::solve_bracketed(mean_at, e, bracket, tol::ROOT_RESIDUAL, 200)?;
    Ok((ProbabilityVector::new(probs_at(lam))?, lam))
}

/// Gap |S(λD₁ + (1-λ)D₂) - λS(D₁) - (1-λ)S(D₂) - h(λ)| for operators with
/// orthogonal supports; the mixing law says this vanishes.
pub fn check_mixing_law(d1: &DensityOperator, d2: &DensityOperator, lam: f64) -> Result<f64> {
    assert!(lam > 0.0 && lam < 1.0, "lam must be in (0, 1)");
    let p1 = d1.range_projection()?;
    let p2 = d2.range_projection()?;
    let overlap = p1.mul(&p2).max_abs();
    if overlap > 1e-8 {
        return Err(Error::SupportsNotOrthogonal { overlap });
    }
    let mix = d1.mix(d2, lam)?;
    let s_mix = von_neumann(&mix)?;
    let expected = lam * von_neumann(d1)? + (1.0 - lam) * von_neumann(d2)? + binary_entropy(lam);
    Ok((s_mix - expected).abs())
}

/// Entropies (S(D₁₂), S(D₁), S(D₂)) of a bipartite state and its marginals;
/// subadditivity says the first is at most the sum of the others.
pub fn check_subadditivity(
    d12: &DensityOperator,
    dims: (usize, usize),
) -> Result<(f64, f64, f64)> {
    let m1 = partial_trace(d12.matrix(), dims, Keep::First)?;
    let m2 = partial_trace(d12.matrix(), dims, Keep::Second)?;
    Ok((
        von_neumann(d12)?,
        von_neumann(&DensityOperator::new(m1)?)?,
        von_neumann(&DensityOperator::new(m2)?)?,
    ))
}

/// Entropies (S(D₁₂₃), S(D₁₂), S(D₂₃), S(D₂)) of a tripartite state; strong
/// subadditivity says S(D₁₂₃) + S(D₂) ≤ S(D₁₂) + S(D₂₃).
pub fn check_ssa(
    d123: &DensityOperator,
    dims: (usize, usize, usize),
) -> Result<(f64, f64, f64, f64)> {
    let (d1, d2, d3) = dims;
    let m12 = partial_trace(d123.matrix(), (d1 * d2, d3), Keep::First)?;
    let m23 = partial_trace(d123.matrix(), (d1, d2 * d3), Keep::Second)?;
    let m2 = partial_trace(&m12, (d1, d2), Keep::Second)?;
    Ok((
        von_neumann(d123)?,
        von_neumann(&DensityOperator::new(m12)?)?,
        von_neumann(&DensityOperator::new(m23)?)?,
        von_neumann(&DensityOperator::new(m2)?)?,
    ))
}

/// Embed `d1` and `d2` on complementary diagonal blocks of a
/// `(dim1 + dim2)`-dimensional space; the supports are orthogonal by
/// construction. Helper for mixing-law studies.
pub fn block_embed(
    d1: &DensityOperator,
    d2: &DensityOperator,
) -> (DensityOperator, DensityOperator) {
    let n1 = d1.dim();
    let n = n1 + d2.dim();
    let top = matrices::ComplexMatrix::from_fn(n, |i, j| {
        if i < n1 && j < n1 {
            d1.matrix()[(i, j)]
        } else {
            num_complex::Complex64::new(0.0, 0.0)
        }
    });
    let bottom = matrices::ComplexMatrix::from_fn(n, |i, j| {
        if i >= n1 && j >= n1 {
            d2.matrix()[(i - n1, j - n1)]
        } else {
            num_complex::Complex64::new(0.0, 0.0)
        }
    });
    (
        DensityOperator::new(top).expect("block embedding preserves validity"),
        DensityOperator::new(bottom).expect("block embedding preserves validity"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::ComplexMatrix;
    use crate::states::{random_density, validate_density, DensityOperator, PureState};
    use approx::assert_abs_diff_eq;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn eta_values() {
        assert_eq!(eta(0.0).unwrap(), 0.0);
        assert_eq!(eta(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(eta(0.5).unwrap(), LN2 / 2.0, epsilon = 1e-12);
        assert!(matches!(eta(-0.1), Err(Error::DomainError { .. })));
    }

    #[test]
    fn shannon_values() {
        let sure = ProbabilityVector::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(shannon(&sure), 0.0);
        for n in 2..6 {
            assert_abs_diff_eq!(
                shannon(&ProbabilityVector::uniform(n)),
                (n as f64).ln(),
                epsilon = 1e-12
            );
        }
        let p = ProbabilityVector::new(vec![0.5, 0.25, 0.25]).unwrap();
        assert_abs_diff_eq!(shannon(&p), 1.5 * LN2, epsilon = 1e-12);
    }

    #[test]
    fn probability_vector_rejects_bad_input() {
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![-0.1, 1.1]).is_err());
    }

    #[test]
    fn von_neumann_values() {
        let pure = DensityOperator::pure(&PureState::basis(2, 0));
        assert_abs_diff_eq!(von_neumann(&pure).unwrap(), 0.0, epsilon = 1e-12);
        for n in 2..5 {
            let mixed = DensityOperator::maximally_mixed(n);
            assert_abs_diff_eq!(von_neumann(&mixed).unwrap(), (n as f64).ln(), epsilon = 1e-12);
        }
        // Eigenvalues of this matrix: (1 ± 1/sqrt 2)/2.
        let d = validate_density(ComplexMatrix::from_real_rows(&[
            &[0.75, 0.25],
            &[0.25, 0.25],
        ]))
        .unwrap();
        let lam = 0.5 - 0.125f64.sqrt();
        assert_abs_diff_eq!(
            von_neumann(&d).unwrap(),
            binary_entropy(lam),
            epsilon = 1e-10
        );
    }

    #[test]
    fn s_f_special_cases() {
        let d = random_density(3, 3).unwrap();
        assert_abs_diff_eq!(
            s_f(&d, |t| eta_clamped(t.max(0.0))).unwrap(),
            von_neumann(&d).unwrap(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(s_f(&d, |t| t).unwrap(), 1.0, epsilon = 1e-10);
        let mixed = DensityOperator::maximally_mixed(2);
        assert_abs_diff_eq!(s_f(&mixed, |t| t * (1.0 - t)).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn log_multinomial_values() {
        assert_eq!(log_multinomial(&Macrostate::new(vec![7]).unwrap()), 0.0);
        let ms = Macrostate::new(vec![2, 1, 1]).unwrap();
        assert_abs_diff_eq!(log_multinomial(&ms), 12.0f64.ln(), epsilon = 1e-12);
        let distinct = Macrostate::new(vec![1; 6]).unwrap();
        assert_abs_diff_eq!(log_multinomial(&distinct), ln_factorial(6), epsilon = 1e-12);
    }

    #[test]
    fn stirling_gap_values() {
        let ms = Macrostate::new(vec![2, 1, 1]).unwrap();
        let want = (12.0f64.ln() / 4.0 - 1.5 * LN2).abs();
        assert_abs_diff_eq!(stirling_gap(&ms), want, epsilon = 1e-12);
        assert_abs_diff_eq!(stirling_gap(&ms), 0.418494, epsilon = 1e-6);

        let large = Macrostate::new(vec![200, 100, 100]).unwrap();
        assert!(stirling_gap(&large) <= 0.03);
    }

    #[test]
    fn stirling_gap_decreases_along_geometric_n() {
        let mut prev = f64::INFINITY;
        for k in 0..=4u32 {
            let n = 4 * 4u64.pow(k);
            let ms = Macrostate::new(vec![n / 2, n / 4, n / 4]).unwrap();
            let gap = stirling_gap(&ms);
            assert!(gap < prev, "gap not decreasing at N={n}");
            prev = gap;
        }
    }

    #[test]
    fn maxwell_boltzmann_symmetric_case() {
        let (p, lam) = maxwell_boltzmann(&[0.0, 1.0], 0.5).unwrap();
        assert_abs_diff_eq!(lam, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(p.probs()[0], 0.5, epsilon = 1e-10);
    }

    #[test]
    fn maxwell_boltzmann_ratio_case() {
        let (p, lam) = maxwell_boltzmann(&[0.0, 1.0], 0.25).unwrap();
        assert_abs_diff_eq!(lam, 3.0f64.ln(), epsilon = 1e-8);
        assert_abs_diff_eq!(p.probs()[0], 0.75, epsilon = 1e-10);
        assert_abs_diff_eq!(p.probs()[1], 0.25, epsilon = 1e-10);
    }

    #[test]
    fn maxwell_boltzmann_out_of_range() {
        assert!(matches!(
            maxwell_boltzmann(&[0.0, 1.0], 1.5),
            Err(Error::ConstraintOutOfRange { .. })
        ));
    }

    #[test]
    fn maxwell_boltzmann_is_entropy_argmax() {
        let levels = [0.0, 0.7, 1.3];
        let e = 0.5;
        let (p_star, _) = maxwell_boltzmann(&levels, e).unwrap();
        let h_star = shannon(&p_star);
        // Feasible competitors: mix a random distribution with an extreme
        // point on the other side of the constraint so the mean is exact.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let raw: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let z: f64 = raw.iter().sum();
            let q0: Vec<f64> = raw.iter().map(|x| x / z).collect();
            let mean0: f64 = q0.iter().zip(&levels).map(|(q, l)| q * l).sum();
            let extreme = if mean0 > e { 0 } else { 2 };
            let t = (e - mean0) / (levels[extreme] - mean0);
            let q: Vec<f64> = q0
                .iter()
                .enumerate()
                .map(|(i, &x)| (1.0 - t) * x + if i == extreme { t } else { 0.0 })
                .collect();
            let q = ProbabilityVector::new(q).unwrap();
            assert!(h_star >= shannon(&q) - 1e-10);
        }
    }

    #[test]
    fn mixing_law_pure_orthogonal() {
        let d1 = DensityOperator::pure(&PureState::basis(2, 0));
        let d2 = DensityOperator::pure(&PureState::basis(2, 1));
        let gap = check_mixing_law(&d1, &d2, 0.5).unwrap();
        assert!(gap <= 1e-10);
        let mix = d1.mix(&d2, 0.5).unwrap();
        assert_abs_diff_eq!(von_neumann(&mix).unwrap(), LN2, epsilon = 1e-10);
    }

    #[test]
    fn mixing_law_block_diagonal() {
        let (b1, b2) = block_embed(&random_density(2, 1).unwrap(), &random_density(2, 2).unwrap());
        assert!(check_mixing_law(&b1, &b2, 0.3).unwrap() <= 1e-8);
    }

    #[test]
    fn mixing_law_rejects_overlapping_supports() {
        let d = DensityOperator::maximally_mixed(2);
        assert!(matches!(
            check_mixing_law(&d, &d, 0.5),
            Err(Error::SupportsNotOrthogonal { .. })
        ));
    }

    #[test]
    fn mixing_continuity_at_small_lambda() {
        let (b1, b2) = block_embed(&random_density(2, 3).unwrap(), &random_density(2, 4).unwrap());
        let s2 = von_neumann(&b2).unwrap();
        let mix = b1.mix(&b2, 1e-7).unwrap();
        assert!((von_neumann(&mix).unwrap() - s2).abs() < 1e-4);
    }

    #[test]
    fn subadditivity_bell_state() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(vec![
            num_complex::Complex64::new(inv, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(inv, 0.0),
        ])
        .unwrap();
        let (s12, s1, s2) = check_subadditivity(&DensityOperator::pure(&bell), (2, 2)).unwrap();
        assert_abs_diff_eq!(s12, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(s1, LN2, epsilon = 1e-10);
        assert_abs_diff_eq!(s2, LN2, epsilon = 1e-10);
    }

    #[test]
    fn subadditivity_additive_on_products() {
        let rho = random_density(2, 10).unwrap();
        let sigma = random_density(3, 11).unwrap();
        let joint = DensityOperator::new(
            crate::matrices::kron(rho.matrix(), sigma.matrix()).unwrap(),
        )
        .unwrap();
        let (s12, s1, s2) = check_subadditivity(&joint, (2, 3)).unwrap();
        assert_abs_diff_eq!(s12, s1 + s2, epsilon = 1e-8);
    }

    #[test]
    fn ssa_pure_product_three_qubits() {
        let psi = PureState::basis(8, 0);
        let vals = check_ssa(&DensityOperator::pure(&psi), (2, 2, 2)).unwrap();
        for v in [vals.0, vals.1, vals.2, vals.3] {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn ssa_reduces_to_subadditivity_without_middle_factor() {
        let d = random_density(4, 21).unwrap();
        let (s123, s12, s23, s2) = check_ssa(&d, (2, 1, 2)).unwrap();
        let (t12, t1, t2) = check_subadditivity(&d, (2, 2)).unwrap();
        assert_abs_diff_eq!(s123, t12, epsilon = 1e-10);
        assert_abs_diff_eq!(s12, t1, epsilon = 1e-10);
        assert_abs_diff_eq!(s23, t2, epsilon = 1e-10);
        assert_abs_diff_eq!(s2, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn shannon_axioms() {
        // (b) permutation invariance
        let p = ProbabilityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        let q = ProbabilityVector::new(vec![0.2, 0.5, 0.3]).unwrap();
        assert_abs_diff_eq!(shannon(&p), shannon(&q), epsilon = 1e-12);
        // (c) recursion H(p1, λp2, (1-λ)p2) = H(p1, p2) + p2 h(λ)
        let lam = 0.3;
        let split = ProbabilityVector::new(vec![0.5, lam * 0.5, (1.0 - lam) * 0.5]).unwrap();
        let base = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(
            shannon(&split),
            shannon(&base) + 0.5 * binary_entropy(lam),
            epsilon = 1e-12
        );
        // (a) continuity: |H(p,1-p) - H(p+δ,1-p-δ)| ≤ 3|δ ln δ|
        let delta = 1e-3;
        for &p0 in &[0.2, 0.5, 0.7] {
            let a = binary_entropy(p0);
            let b = binary_entropy(p0 + delta);
            assert!((a - b).abs() <= 3.0 * (delta * delta.ln()).abs());
        }
    }
}
