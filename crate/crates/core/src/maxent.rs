//! Constrained entropy maximization: Gibbs states, inverse-temperature
//! root-finding, the free-energy functional, and finite spin-chain
//! entropy-density profiles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entropy::von_neumann;
use crate::error::{Error, Result};
use crate::exec;
use crate::matrices::{eig_hermitian, kron, partial_trace, ComplexMatrix, Keep};
use crate::root;
use crate::states::DensityOperator;
use crate::tol;

/// Hermitian energy operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct Hamiltonian {
    matrix: ComplexMatrix,
}

impl TryFrom<ComplexMatrix> for Hamiltonian {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Hamiltonian::new(m)
    }
}

impl From<Hamiltonian> for ComplexMatrix {
    fn from(h: Hamiltonian) -> ComplexMatrix {
        h.matrix
    }
}

impl Hamiltonian {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let gap = matrix.hermiticity_gap();
        if gap > tol::HERMITIAN {
            return Err(Error::NotHermitian { gap });
        }
        Ok(Hamiltonian { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Tr(D H).
    pub fn energy(&self, d: &DensityOperator) -> f64 {
        d.matrix().mul(&self.matrix).trace().re
    }
}

/// Uniform nearest-neighbour chain with open boundary conditions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainSpec {
    pub site_dim: usize,
    pub length: usize,
    /// Hermitian term on each single site.
    pub site_term: ComplexMatrix,
    /// Hermitian term on each adjacent pair, `site_dim²`-dimensional.
    pub coupling_term: ComplexMatrix,
}

impl ChainSpec {
    fn validate(&self) -> Result<()> {
        if self.site_dim < 2 || self.length < 1 {
            return Err(Error::BadFormat {
                reason: "site_dim must be >= 2 and length >= 1".into(),
            });
        }
        if self.site_term.dim() != self.site_dim {
            return Err(Error::DimensionMismatch {
                expected: self.site_dim,
                found: self.site_term.dim(),
            });
        }
        if self.coupling_term.dim() != self.site_dim * self.site_dim {
            return Err(Error::DimensionMismatch {
                expected: self.site_dim * self.site_dim,
                found: self.coupling_term.dim(),
            });
        }
        let total = self.total_dim()?;
        if total > tol::DIM_CAP {
            return Err(Error::DimensionOverflow {
                dim: total,
                cap: tol::DIM_CAP,
            });
        }
        Ok(())
    }

    fn total_dim(&self) -> Result<usize> {
        let mut dim = 1usize;
        for _ in 0..self.length {
            dim = dim.checked_mul(self.site_dim).ok_or(Error::DimensionOverflow {
                dim: usize::MAX,
                cap: tol::DIM_CAP,
            })?;
        }
        Ok(dim)
    }
}

/// Gibbs state exp(-βH)/Tr exp(-βH), computed spectrally with a max-shift
/// so large |β| cannot overflow.
pub fn gibbs_state(h: &Hamiltonian, beta: f64) -> Result<DensityOperator> {
    assert!(beta.is_finite(), "beta must be finite");
    let eig = eig_hermitian(h.matrix())?;
    let exponents: Vec<f64> = eig.values.iter().map(|&lam| -beta * lam).collect();
    let shift = exponents.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let weights: Vec<f64> = exponents.iter().map(|&x| (x - shift).exp()).collect();
    let z: f64 = weights.iter().sum();
    let n = h.dim();
    let matrix = ComplexMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| eig.vectors[(i, k)] * eig.vectors[(j, k)].conj() * (weights[k] / z))
            .sum()
    });
    DensityOperator::new(matrix)
}

/// Entropy maximizer under the energy constraint Tr(D H) = e: the Gibbs
/// state at the β that matches the energy, found by bracketed root-finding.
/// Returns the state and β.
pub fn max_entropy_state(h: &Hamiltonian, e: f64) -> Result<(DensityOperator, f64)> {
    let eig = eig_hermitian(h.matrix())?;
    let lo = eig.values[0];
    let hi = *eig.values.last().unwrap();
    if !(e > lo && e < hi) {
        return Err(Error::ConstraintOutOfRange { value: e, lo, hi });
    }
    // Energy of the Gibbs state over the spectrum only; cheaper than
    // rebuilding the full operator at every iterate.
    let mean_at = |beta: f64| -> f64 {
        let exponents: Vec<f64> = eig.values.iter().map(|&lam| -beta * lam).collect();
        let shift = exponents.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let weights: Vec<f64> = exponents.iter().map(|&x| (x - shift).exp()).collect();
        let z: f64 = weights.iter().sum();
        weights
            .iter()
            .zip(&eig.values)
            .map(|(w, lam)| w / z * lam)
            .sum()
    };
    let bracket = root::expand_bracket(mean_at, e, -1.0, 1.0, 200)?;
    let beta = root::solve_bracketed(mean_at, e, bracket, tol::ROOT_RESIDUAL, 200)?;
    Ok((gibbs_state(h, beta)?, beta))
}

/// Free-energy functional F(D) = Tr(D H) - S(D)/β. At fixed β > 0 the Gibbs
/// state is its unique minimizer.
pub fn free_energy(d: &DensityOperator, h: &Hamiltonian, beta: f64) -> Result<f64> {
    assert!(beta > 0.0, "beta must be positive");
    Ok(h.energy(d) - von_neumann(d)? / beta)
}

/// Assemble the chain Hamiltonian Σ_n site(n) + Σ_n coupling(n, n+1) with
/// open boundaries.
pub fn build_chain(spec: &ChainSpec) -> Result<Hamiltonian> {
    spec.validate()?;
    let s = spec.site_dim;
    let len = spec.length;
    let total = spec.total_dim()?;
    let mut h = ComplexMatrix::zeros(total);

    let embed = |op: &ComplexMatrix, left_sites: usize, right_sites: usize| -> Result<ComplexMatrix> {
        let mut acc = op.clone();
        if left_sites > 0 {
            let left = ComplexMatrix::identity(s.pow(left_sites as u32));
            acc = kron(&left, &acc)?;
        }
        if right_sites > 0 {
            let right = ComplexMatrix::identity(s.pow(right_sites as u32));
            acc = kron(&acc, &right)?;
        }
        Ok(acc)
    };

    for n in 0..len {
        h = h.add(&embed(&spec.site_term, n, len - 1 - n)?);
    }
    for n in 0..len.saturating_sub(1) {
        h = h.add(&embed(&spec.coupling_term, n, len - 2 - n)?);
    }
    Hamiltonian::new(h)
}

/// Entropy densities S_N/N of the leading N-site marginals of a Gibbs
/// chain, plus the Fekete subadditivity gaps.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyProfile {
    /// (N, S_N/N) for N = 1..=up_to.
    pub densities: Vec<(usize, f64)>,
    /// Block entropies S_N, same indexing.
    pub entropies: Vec<f64>,
    /// (m, n, S_{m+n} - S_m - S_n) for every m + n <= up_to.
    pub fekete_gaps: Vec<(usize, usize, f64)>,
}

impl EntropyProfile {
    /// True when every Fekete gap is within the tolerance.
    pub fn fekete_holds(&self, tolerance: f64) -> bool {
        self.fekete_gaps.iter().all(|&(_, _, gap)| gap <= tolerance)
    }
}

/// Compute the entropy-density profile of the length-`up_to` Gibbs chain.
pub fn entropy_density_profile(
    spec: &ChainSpec,
    beta: f64,
    up_to: usize,
) -> Result<EntropyProfile> {
    let mut chain = spec.clone();
    chain.length = up_to;
    let h = build_chain(&chain)?;
    let gibbs = gibbs_state(&h, beta)?;
    let s = spec.site_dim;

    let entropies_res = exec::map_indexed(up_to, |i| -> Result<f64> {
        let n = i + 1;
        if n == up_to {
            return von_neumann(&gibbs);
        }
        let keep_dim = s.pow(n as u32);
        let rest_dim = s.pow((up_to - n) as u32);
        let marginal = partial_trace(gibbs.matrix(), (keep_dim, rest_dim), Keep::First)?;
        von_neumann(&DensityOperator::new(marginal)?)
    });
    let mut entropies = Vec::with_capacity(up_to);
    for r in entropies_res {
        entropies.push(r?);
    }

    let densities = entropies
        .iter()
        .enumerate()
        .map(|(i, &e)| (i + 1, e / (i + 1) as f64))
        .collect();
    let mut fekete_gaps = Vec::new();
    for m in 1..up_to {
        for n in m..=(up_to - m) {
            fekete_gaps.push((m, n, entropies[m + n - 1] - entropies[m - 1] - entropies[n - 1]));
        }
    }
    Ok(EntropyProfile {
        densities,
        entropies,
        fekete_gaps,
    })
}

/// Pauli σ_z in the computational basis.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, -1.0])
}

/// Pauli σ_x.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

/// Transverse-field Ising chain spec: -J σ_z⊗σ_z coupling and -g σ_x site
/// term on `length` qubits.
pub fn ising_chain(length: usize, j: f64, g: f64) -> ChainSpec {
    let zz = kron(&pauli_z(), &pauli_z()).expect("4 <= DIM_CAP");
    ChainSpec {
        site_dim: 2,
        length,
        site_term: pauli_x().scale(Complex64::new(-g, 0.0)),
        coupling_term: zz.scale(Complex64::new(-j, 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{binary_entropy, maxwell_boltzmann};
    use crate::states::random_density;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gibbs_infinite_temperature_is_maximally_mixed() {
        let h = Hamiltonian::new(ComplexMatrix::diag(&[0.0, 1.0, 2.5])).unwrap();
        let d = gibbs_state(&h, 0.0).unwrap();
        assert!(d
            .matrix()
            .sub(crate::states::DensityOperator::maximally_mixed(3).matrix())
            .max_abs()
            <= 1e-12);
    }

    #[test]
    fn gibbs_known_ratio() {
        let h = Hamiltonian::new(ComplexMatrix::diag(&[0.0, 1.0])).unwrap();
        let d = gibbs_state(&h, 3.0f64.ln()).unwrap();
        assert!(d.matrix().sub(&ComplexMatrix::diag(&[0.75, 0.25])).max_abs() <= 1e-12);
    }

    #[test]
    fn gibbs_low_temperature_projects_on_ground_state() {
        let h = Hamiltonian::new(ComplexMatrix::diag(&[0.0, 0.8, 2.0])).unwrap();
        let d = gibbs_state(&h, 50.0).unwrap();
        assert!(d.matrix().sub(&ComplexMatrix::diag(&[1.0, 0.0, 0.0])).max_abs() <= 1e-8);
    }

    #[test]
    fn gibbs_commutes_with_hamiltonian() {
        let m = random_density(4, 30).unwrap().matrix().clone();
        let h = Hamiltonian::new(m).unwrap();
        let d = gibbs_state(&h, 1.3).unwrap();
        let comm = d
            .matrix()
            .mul(h.matrix())
            .sub(&h.matrix().mul(d.matrix()));
        assert!(comm.max_abs() <= 1e-9);
    }

    #[test]
    fn max_entropy_symmetric_case() {
        let h = Hamiltonian::new(ComplexMatrix::diag(&[0.0, 1.0])).unwrap();
        let (d, beta) = max_entropy_state(&h, 0.5).unwrap();
        assert_abs_diff_eq!(beta, 0.0, epsilon = 1e-9);
        assert!(d.matrix().sub(&ComplexMatrix::diag(&[0.5, 0.5])).max_abs() <= 1e-9);
    }

    #[test]
    fn max_entropy_matches_classical_law() {
        let h = Hamiltonian::new(ComplexMatrix::diag(&[0.0, 1.0])).unwrap();
        let (d, beta) = max_entropy_state(&h, 0.25).unwrap();
        assert_abs_diff_eq!(beta, 3.0f64.ln(), epsilon = 1e-9);
        assert!(d.matrix().sub(&ComplexMatrix::diag(&[0.75, 0.25])).max_abs() <= 1e-9);
        let (p, lam) = maxwell_boltzmann(&[0.0, 1.0], 0.25).unwrap();
        assert_abs_diff_eq!(beta, lam, epsilon = 1e-8);
        assert_abs_diff_eq!(d.matrix()[(0, 0)].re, p.probs()[0], epsilon = 1e-9);
    }

    #[test]
    fn max_entropy_out_of_range() {
        let h = Hamiltonian::new(ComplexMatrix::diag(&[0.0, 1.0])).unwrap();
        assert!(matches!(
            max_entropy_state(&h, 1.5),
            Err(Error::ConstraintOutOfRange { .. })
        ));
    }

    #[test]
    fn max_entropy_beats_feasible_competitors() {
        let m = random_density(3, 31).unwrap().matrix().clone();
        let h = Hamiltonian::new(m).unwrap();
        let eig = eig_hermitian(h.matrix()).unwrap();
        let e = 0.4 * eig.values[0] + 0.6 * eig.values[2];
        let (g, _) = max_entropy_state(&h, e).unwrap();
        let s_star = von_neumann(&g).unwrap();
        // Feasible competitors: mix a random state with the extremal
        // eigenprojector on the other side of the constraint.
        for seed in 0..50u64 {
            let q0 = random_density(3, 400 + seed).unwrap();
            let e0 = h.energy(&q0);
            let extreme = if e0 > e { 0 } else { 2 };
            let v = eig.vector(extreme);
            let proj = crate::states::DensityOperator::new(crate::matrices::outer(&v, &v))
                .unwrap();
            let t = (e - e0) / (eig.values[extreme] - e0);
            let q = q0.mix(&proj, 1.0 - t).unwrap();
            assert!((h.energy(&q) - e).abs() <= 1e-9);
            assert!(s_star >= von_neumann(&q).unwrap() - 1e-10);
        }
    }

    #[test]
    fn free_energy_closed_form() {
        let h = Hamiltonian::new(ComplexMatrix::diag(&[0.0, 1.0])).unwrap();
        let beta = 3.0f64.ln();
        let d = gibbs_state(&h, beta).unwrap();
        let f = free_energy(&d, &h, beta).unwrap();
        assert_abs_diff_eq!(f, 0.25 - binary_entropy(0.25) / beta, epsilon = 1e-10);
    }

    #[test]
    fn free_energy_approaches_ground_energy() {
        let h = Hamiltonian::new(ComplexMatrix::diag(&[-0.3, 1.0, 2.0])).unwrap();
        let beta = 200.0;
        let d = gibbs_state(&h, beta).unwrap();
        assert_abs_diff_eq!(free_energy(&d, &h, beta).unwrap(), -0.3, epsilon = 1e-3);
    }

    #[test]
    fn gibbs_minimizes_free_energy() {
        let m = random_density(3, 33).unwrap().matrix().clone();
        let h = Hamiltonian::new(m).unwrap();
        let beta = 1.7;
        let g = gibbs_state(&h, beta).unwrap();
        let f_star = free_energy(&g, &h, beta).unwrap();
        for seed in 0..100u64 {
            let q = random_density(3, 500 + seed).unwrap();
            assert!(f_star <= free_energy(&q, &h, beta).unwrap() + 1e-8);
        }
    }

    #[test]
    fn chain_length_one_is_the_site_term() {
        let spec = ising_chain(1, 1.0, 0.7);
        let h = build_chain(&spec).unwrap();
        assert!(h.matrix().sub(&spec.site_term).max_abs() <= 1e-12);
    }

    #[test]
    fn chain_single_bond() {
        let mut spec = ising_chain(2, 1.0, 0.0);
        spec.site_term = ComplexMatrix::zeros(2);
        let h = build_chain(&spec).unwrap();
        assert!(h.matrix().sub(&ComplexMatrix::diag(&[-1.0, 1.0, 1.0, -1.0])).max_abs() <= 1e-12);
    }

    #[test]
    fn chain_trace_bookkeeping() {
        let site = ComplexMatrix::diag(&[0.2, -0.5]);
        let coupling = ComplexMatrix::diag(&[1.0, 0.0, 0.0, 0.5]);
        let spec = ChainSpec {
            site_dim: 2,
            length: 4,
            site_term: site.clone(),
            coupling_term: coupling.clone(),
        };
        let h = build_chain(&spec).unwrap();
        let s = 2f64;
        let want = s.powi(3) * 4.0 * site.trace().re + s.powi(2) * 3.0 * coupling.trace().re;
        assert_abs_diff_eq!(h.matrix().trace().re, want, epsilon = 1e-10);
    }

    #[test]
    fn profile_product_chain_has_constant_density() {
        let mut spec = ising_chain(4, 0.0, 0.9);
        spec.coupling_term = ComplexMatrix::zeros(4);
        let profile = entropy_density_profile(&spec, 1.0, 4).unwrap();
        let single = profile.densities[0].1;
        for &(_, rho) in &profile.densities {
            assert_abs_diff_eq!(rho, single, epsilon = 1e-9);
        }
        assert!(profile.fekete_holds(1e-8));
    }

    #[test]
    fn profile_first_entry_is_single_site_entropy() {
        let spec = ising_chain(3, 1.0, 0.5);
        let profile = entropy_density_profile(&spec, 0.8, 3).unwrap();
        let h = build_chain(&ChainSpec { length: 3, ..spec.clone() }).unwrap();
        let gibbs = gibbs_state(&h, 0.8).unwrap();
        let m1 = partial_trace(gibbs.matrix(), (2, 4), Keep::First).unwrap();
        let s1 = von_neumann(&DensityOperator::new(m1).unwrap()).unwrap();
        assert_abs_diff_eq!(profile.densities[0].1, s1, epsilon = 1e-10);
    }

    #[test]
    fn chain_overflow_guard() {
        let spec = ising_chain(13, 1.0, 1.0);
        assert!(matches!(
            build_chain(&spec),
            Err(Error::DimensionOverflow { .. })
        ));
    }
}
