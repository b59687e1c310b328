//! Density operators, pure states, Schatten decompositions, mixing-entropy
//! comparisons and seeded random sampling.
//!
//! Random sources are ChaCha8 streams seeded from a `u64`; normal variates
//! come from the Box-Muller transform, so every sample is reproducible from
//! the seed alone.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{self, eig_hermitian, outer, ComplexMatrix};
use crate::tol;

/// Hermitian, positive semidefinite, unit-trace operator.
///
/// Construction always goes through [`DensityOperator::new`]; the stored
/// matrix has any eigenvalue in `[-1e-10, 0)` clipped to zero with the trace
/// renormalized afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl TryFrom<ComplexMatrix> for DensityOperator {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        DensityOperator::new(m)
    }
}

impl From<DensityOperator> for ComplexMatrix {
    fn from(d: DensityOperator) -> ComplexMatrix {
        d.matrix
    }
}

impl DensityOperator {
    /// Validate `m` as a density operator. Eigenvalues in `[-1e-10, 0)` are
    /// clipped to zero and the trace renormalized; anything worse is an
    /// error naming the violated invariant.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let gap = m.hermiticity_gap();
        if gap > tol::HERMITIAN {
            return Err(Error::NotHermitian { gap });
        }
        let trace = m.trace().re;
        let drift = (trace - 1.0).abs();
        if drift > tol::TRACE_ONE {
            return Err(Error::TraceNotOne { trace, drift });
        }
        let eig = eig_hermitian(&m)?;
        let min_eig = eig.values[0];
        if min_eig < tol::EIG_CLIP {
            return Err(Error::NotPositive { min_eig });
        }
        if min_eig < 0.0 {
            // Clip the negative dust and renormalize.
            let clipped: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
            let total: f64 = clipped.iter().sum();
            let n = m.dim();
            let matrix = ComplexMatrix::from_fn(n, |i, j| {
                (0..n)
                    .map(|k| {
                        eig.vectors[(i, k)] * eig.vectors[(j, k)].conj() * (clipped[k] / total)
                    })
                    .sum()
            });
            return Ok(DensityOperator { matrix });
        }
        Ok(DensityOperator { matrix: m })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues above the range cutoff, i.e. the numerical rank.
    pub fn rank(&self) -> usize {
        eig_hermitian(&self.matrix)
            .map(|e| e.values.iter().filter(|&&v| v > tol::RANGE_CUTOFF).count())
            .unwrap_or(0)
    }

    /// Projector onto the operator's range (eigenvalues above 1e-12).
    pub fn range_projection(&self) -> Result<ComplexMatrix> {
        let eig = eig_hermitian(&self.matrix)?;
        let n = self.dim();
        Ok(ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .filter(|&k| eig.values[k] > tol::RANGE_CUTOFF)
                .map(|k| eig.vectors[(i, k)] * eig.vectors[(j, k)].conj())
                .sum()
        }))
    }

    /// Rank-one projector onto `psi`.
    pub fn pure(psi: &PureState) -> Self {
        DensityOperator {
            matrix: outer(psi.vector(), psi.vector()),
        }
    }

    /// I/n on an `n`-dimensional space.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator {
            matrix: ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)),
        }
    }

    /// Convex combination `lam * self + (1 - lam) * other`.
    pub fn mix(&self, other: &DensityOperator, lam: f64) -> Result<DensityOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        DensityOperator::new(
            self.matrix
                .scale(Complex64::new(lam, 0.0))
                .add(&other.matrix.scale(Complex64::new(1.0 - lam, 0.0))),
        )
    }
}

/// Unit vector in a complex Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: Vec<Complex64>,
}

impl PureState {
    pub fn new(vector: Vec<Complex64>) -> Result<Self> {
        let norm = matrices::norm(&vector);
        if (norm - 1.0).abs() > tol::ORTHONORMAL {
            return Err(Error::NotUnitNorm { norm });
        }
        // Renormalize the sub-tolerance drift so downstream algebra is exact.
        let vector = vector.into_iter().map(|z| z / norm).collect();
        Ok(PureState { vector })
    }

    /// Computational basis state |index⟩.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[index] = Complex64::new(1.0, 0.0);
        PureState { vector: v }
    }

    pub fn vector(&self) -> &[Complex64] {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    /// ⟨self|ρ|self⟩, the overlap fidelity with a target pure state.
    pub fn fidelity(&self, rho: &DensityOperator) -> f64 {
        let w = rho.matrix().mul_vec(&self.vector);
        matrices::dot(&self.vector, &w).re
    }
}

/// Convex decomposition of a density operator: weights plus component
/// operators of the same dimension.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub weights: Vec<f64>,
    pub components: Vec<DensityOperator>,
}

impl Decomposition {
    /// Σ λᵢ Dᵢ.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.components[0].dim();
        let mut acc = ComplexMatrix::zeros(dim);
        for (w, comp) in self.weights.iter().zip(&self.components) {
            acc = acc.add(&comp.matrix().scale(Complex64::new(*w, 0.0)));
        }
        acc
    }
}

/// Alias for [`DensityOperator::new`]; validates a raw matrix.
pub fn validate_density(m: ComplexMatrix) -> Result<DensityOperator> {
    DensityOperator::new(m)
}

/// Spectral decomposition into orthogonal rank-one projectors weighted by
/// the eigenvalues; zero-weight terms are dropped.
pub fn schatten(d: &DensityOperator) -> Result<Decomposition> {
    let eig = eig_hermitian(d.matrix())?;
    let mut weights = Vec::new();
    let mut components = Vec::new();
    // Descending weights read better in reports.
    for k in (0..eig.values.len()).rev() {
        let lambda = eig.values[k];
        if lambda <= tol::RANGE_CUTOFF {
            continue;
        }
        let v = eig.vector(k);
        weights.push(lambda);
        components.push(DensityOperator {
            matrix: outer(&v, &v),
        });
    }
    Ok(Decomposition { weights, components })
}

/// Shannon entropy of the decomposition weights, in nats.
pub fn mixing_entropy(dec: &Decomposition) -> f64 {
    dec.weights.iter().map(|&w| crate::entropy::eta_clamped(w)).sum()
}

pub(crate) fn normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; the clamp keeps ln away from zero.
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub(crate) fn normal_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Orthonormalize the columns of an `rows x cols` complex array in place
/// (modified Gram-Schmidt). Columns must be linearly independent.
fn orthonormalize_columns(cols: &mut [Vec<Complex64>]) {
    for j in 0..cols.len() {
        for k in 0..j {
            let proj = matrices::dot(&cols[k], &cols[j]);
            let prev = cols[k].clone();
            for (x, p) in cols[j].iter_mut().zip(&prev) {
                *x -= proj * p;
            }
        }
        let nrm = matrices::norm(&cols[j]);
        assert!(nrm > 1e-12, "columns must be independent");
        for x in cols[j].iter_mut() {
            *x /= nrm;
        }
    }
}

/// Decompose `d` into `count` pure states by mixing the Schatten square
/// roots through a seeded random isometry. Requires `count >= rank(d)`.
pub fn random_pure_decomposition(
    d: &DensityOperator,
    count: usize,
    seed: u64,
) -> Result<Decomposition> {
    let eig = eig_hermitian(d.matrix())?;
    let support: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] > tol::RANGE_CUTOFF)
        .collect();
    let rank = support.len();
    if count < rank {
        return Err(Error::InfeasibleCount { rank, count });
    }

    // A count x rank isometry U (orthonormal columns) from a Ginibre draw.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..rank)
        .map(|_| (0..count).map(|_| normal_complex(&mut rng)).collect())
        .collect();
    orthonormalize_columns(&mut cols);

    let dim = d.dim();
    let mut weights = Vec::new();
    let mut components = Vec::new();
    for i in 0..count {
        // |w_i⟩ = Σ_k U_{ik} sqrt(λ_k) |ψ_k⟩
        let mut w = vec![Complex64::new(0.0, 0.0); dim];
        for (c, &k) in support.iter().enumerate() {
            let coeff = cols[c][i] * eig.values[k].sqrt();
            for (x, wx) in w.iter_mut().enumerate() {
                *wx += coeff * eig.vectors[(x, k)];
            }
        }
        let mu = matrices::dot(&w, &w).re;
        if mu <= tol::RANGE_CUTOFF {
            continue;
        }
        let psi: Vec<Complex64> = w.iter().map(|z| z / mu.sqrt()).collect();
        weights.push(mu);
        components.push(DensityOperator {
            matrix: outer(&psi, &psi),
        });
    }
    Ok(Decomposition { weights, components })
}

/// Full-rank random density operator: `G G† / Tr(G G†)` with `G` a seeded
/// complex Ginibre matrix. Deterministic for a fixed seed.
pub fn random_density(dim: usize, seed: u64) -> Result<DensityOperator> {
    if !(2..=64).contains(&dim) {
        return Err(Error::BadDimension { dim, lo: 2, hi: 64 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(dim, |_, _| normal_complex(&mut rng));
    let gg = g.mul(&g.adjoint());
    let trace = gg.trace().re;
    DensityOperator::new(gg.scale(Complex64::new(1.0 / trace, 0.0)))
}

/// Random pure state from a seeded Ginibre vector.
pub fn random_pure(dim: usize, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<Complex64> = (0..dim).map(|_| normal_complex(&mut rng)).collect();
    let nrm = matrices::norm(&v);
    PureState {
        vector: v.into_iter().map(|z| z / nrm).collect(),
    }
}

/// Random orthonormal basis: Ginibre columns orthonormalized.
pub fn random_basis(dim: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| normal_complex(&mut rng)).collect())
        .collect();
    orthonormalize_columns(&mut cols);
    cols
}
