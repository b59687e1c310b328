//! Noiseless quantum channel model: ensembles of pure signal states, POVM
//! measurements, the induced classical channel, mutual information, and the
//! bound I ≤ S(D) with a projective-measurement optimizer that attains it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{eta_clamped, von_neumann, ProbabilityVector};
use crate::error::{Error, Result};
use crate::exec;
use crate::matrices::{self, eig_hermitian, outer, ComplexMatrix};
use crate::states::{DensityOperator, PureState};
use crate::tol;

/// Weighted family of pure signal states.
#[derive(Debug, Clone)]
pub struct Ensemble {
    weights: ProbabilityVector,
    states: Vec<PureState>,
}

/// Serde shape: `{"weights": [...], "vectors": [[[re, im], ...], ...]}`.
#[derive(Serialize, Deserialize)]
pub struct EnsembleRepr {
    pub weights: Vec<f64>,
    pub vectors: Vec<Vec<(f64, f64)>>,
}

impl TryFrom<EnsembleRepr> for Ensemble {
    type Error = Error;

    fn try_from(r: EnsembleRepr) -> Result<Self> {
        let weights = ProbabilityVector::new(r.weights)?;
        let states = r
            .vectors
            .into_iter()
            .map(|v| {
                PureState::new(
                    v.into_iter()
                        .map(|(re, im)| Complex64::new(re, im))
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(weights, states)
    }
}

impl From<Ensemble> for EnsembleRepr {
    fn from(e: Ensemble) -> EnsembleRepr {
        EnsembleRepr {
            weights: e.weights.probs().to_vec(),
            vectors: e
                .states
                .iter()
                .map(|s| s.vector().iter().map(|z| (z.re, z.im)).collect())
                .collect(),
        }
    }
}

impl Ensemble {
    pub fn new(weights: ProbabilityVector, states: Vec<PureState>) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                found: states.len(),
            });
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: states.iter().map(|s| s.dim()).find(|&d| d != dim).unwrap(),
            });
        }
        Ok(Ensemble { weights, states })
    }

    pub fn weights(&self) -> &ProbabilityVector {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }
}

/// Positive operators summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = elements.first().map(|m| m.dim()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::BadPovm {
                reason: "needs at least one element".into(),
            });
        }
        let mut total = ComplexMatrix::zeros(dim);
        for (i, a) in elements.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.dim(),
                });
            }
            if !a.is_hermitian(tol::PARTITION) {
                return Err(Error::BadPovm {
                    reason: format!("element {i} is not Hermitian"),
                });
            }
            let min_eig = eig_hermitian(a)?.values[0];
            if min_eig < -tol::PARTITION {
                return Err(Error::BadPovm {
                    reason: format!("element {i} has negative eigenvalue {min_eig:.3e}"),
                });
            }
            total = total.add(a);
        }
        let gap = total.sub(&ComplexMatrix::identity(dim)).max_abs();
        if gap > tol::PARTITION {
            return Err(Error::BadPovm {
                reason: format!("elements sum to I only within {gap:.3e}"),
            });
        }
        Ok(Povm { elements })
    }

    /// Projective POVM from an orthonormal basis.
    pub fn projective(basis: &[Vec<Complex64>]) -> Result<Self> {
        Povm::new(basis.iter().map(|v| outer(v, v)).collect())
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Conditional distribution p_{ji} of outcome j given message i; columns
/// sum to one by POVM completeness.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    /// Row-major p[j][i].
    conditionals: Vec<Vec<f64>>,
    input_weights: Vec<f64>,
}

impl JointDistribution {
    /// p_{ji}, outcome-major.
    pub fn conditionals(&self) -> &[Vec<f64>] {
        &self.conditionals
    }

    pub fn input_weights(&self) -> &[f64] {
        &self.input_weights
    }

    /// Output marginal Σᵢ λᵢ p_{ji}.
    pub fn output_distribution(&self) -> Vec<f64> {
        self.conditionals
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.input_weights)
                    .map(|(p, w)| p * w)
                    .sum()
            })
            .collect()
    }

    /// Standard mutual information of the joint law λᵢ p_{ji}, in nats:
    /// H(output) - Σᵢ λᵢ H(output | message i).
    pub fn mutual_information(&self) -> f64 {
        let h_out: f64 = self
            .output_distribution()
            .iter()
            .map(|&p| eta_clamped(p))
            .sum();
        let n_outcomes = self.conditionals.len();
        let h_cond: f64 = self
            .input_weights
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                w * (0..n_outcomes)
                    .map(|j| eta_clamped(self.conditionals[j][i]))
                    .sum::<f64>()
            })
            .sum();
        h_out - h_cond
    }
}

/// Σ λᵢ |ψᵢ⟩⟨ψᵢ|, the channel input state.
pub fn ensemble_state(ens: &Ensemble) -> Result<DensityOperator> {
    let dim = ens.dim();
    let mut acc = ComplexMatrix::zeros(dim);
    for (w, psi) in ens.weights().probs().iter().zip(ens.states()) {
        acc = acc.add(&outer(psi.vector(), psi.vector()).scale(Complex64::new(*w, 0.0)));
    }
    DensityOperator::new(acc)
}

/// The classical channel p_{ji} = ⟨ψᵢ|A_j|ψᵢ⟩ induced by measuring the
/// noiselessly transmitted signal states.
pub fn channel_matrix(ens: &Ensemble, povm: &Povm) -> Result<JointDistribution> {
    if ens.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: ens.dim(),
            found: povm.dim(),
        });
    }
    let conditionals = povm
        .elements()
        .iter()
        .map(|a| {
            ens.states()
                .iter()
                .map(|psi| {
                    matrices::dot(psi.vector(), &a.mul_vec(psi.vector()))
                        .re
                        .max(0.0)
                })
                .collect()
        })
        .collect();
    Ok(JointDistribution {
        conditionals,
        input_weights: ens.weights().probs().to_vec(),
    })
}

/// Mutual information through the noiseless channel, in nats.
pub fn mutual_information(ens: &Ensemble, povm: &Povm) -> Result<f64> {
    Ok(channel_matrix(ens, povm)?.mutual_information())
}

/// (I, S(D_in)); the information never exceeds the entropy of the carrier.
pub fn check_holevo_bound(ens: &Ensemble, povm: &Povm) -> Result<(f64, f64)> {
    Ok((
        mutual_information(ens, povm)?,
        von_neumann(&ensemble_state(ens)?)?,
    ))
}

fn rotate_columns(
    basis: &mut [Vec<Complex64>],
    p: usize,
    q: usize,
    angle: f64,
    imaginary: bool,
) {
    let c = angle.cos();
    let s = angle.sin();
    let s = if imaginary {
        Complex64::new(0.0, s)
    } else {
        Complex64::new(s, 0.0)
    };
    for i in 0..basis[p].len() {
        let a = basis[p][i];
        let b = basis[q][i];
        basis[p][i] = a * c + b * s;
        basis[q][i] = b * c - a * s.conj();
    }
}

fn projective_info(ens: &Ensemble, basis: &[Vec<Complex64>]) -> f64 {
    let povm = Povm::projective(basis).expect("orthonormal basis gives a projective POVM");
    mutual_information(ens, &povm).expect("dimensions already checked")
}

/// Search for the best projective measurement by seeded random restarts
/// plus coordinate descent over two-column rotations (real and imaginary
/// generators, step halving, stop below 1e-9 improvement). The eigenbasis
/// of the ensemble state is always among the starting points, so ensembles
/// of orthogonal states reach I = S(D) exactly.
pub fn optimize_measurement(
    ens: &Ensemble,
    restarts: usize,
    seed: u64,
) -> Result<(Povm, f64)> {
    assert!(restarts >= 1, "restarts must be at least 1");
    let dim = ens.dim();
    let d_in = ensemble_state(ens)?;
    let eigenbasis: Vec<Vec<Complex64>> = {
        let eig = eig_hermitian(d_in.matrix())?;
        (0..dim).map(|k| eig.vector(k)).collect()
    };

    let refine = |mut basis: Vec<Vec<Complex64>>| -> (Vec<Vec<Complex64>>, f64) {
        let mut best = projective_info(ens, &basis);
        let mut step = 0.4f64;
        while step > 1e-5 {
            let mut improved = false;
            for p in 0..dim {
                for q in (p + 1)..dim {
                    for imaginary in [false, true] {
                        for sign in [1.0f64, -1.0] {
                            rotate_columns(&mut basis, p, q, sign * step, imaginary);
                            let value = projective_info(ens, &basis);
                            if value > best + 1e-9 {
                                best = value;
                                improved = true;
                            } else {
                                rotate_columns(&mut basis, p, q, -sign * step, imaginary);
                            }
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        (basis, best)
    };

    let candidates = exec::map_indexed(restarts, |i| {
        let basis = if i == 0 {
            eigenbasis.clone()
        } else {
            crate::states::random_basis(dim, seed.wrapping_add(i as u64))
        };
        refine(basis)
    });

    let (basis, value) = candidates
        .into_iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .expect("restarts >= 1");
    Ok((Povm::projective(&basis)?, value))
}

/// Seeded random POVM: Ginibre-generated positive operators normalized by
/// the inverse square root of their sum.
pub fn random_povm(dim: usize, outcomes: usize, seed: u64) -> Result<Povm> {
    assert!(outcomes >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let g = ComplexMatrix::from_fn(dim, |_, _| crate::states::normal_complex(&mut rng));
            g.mul(&g.adjoint())
        })
        .collect();
    let mut total = ComplexMatrix::zeros(dim);
    for p in &parts {
        total = total.add(p);
    }
    let inv_sqrt = matrices::apply_function(&total, |t| 1.0 / t.sqrt())?;
    Povm::new(
        parts
            .iter()
            .map(|p| inv_sqrt.mul(p).mul(&inv_sqrt))
            .collect(),
    )
}

/// Seeded random ensemble of `count` pure states with a random weight
/// vector.
pub fn random_ensemble(dim: usize, count: usize, seed: u64) -> Result<Ensemble> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..count).map(|_| rng.gen::<f64>() + 1e-6).collect();
    let z: f64 = raw.iter().sum();
    let weights = ProbabilityVector::new(raw.iter().map(|x| x / z).collect())?;
    let states = (0..count)
        .map(|i| crate::states::random_pure(dim, seed.wrapping_mul(31).wrapping_add(i as u64)))
        .collect();
    Ensemble::new(weights, states)
}
