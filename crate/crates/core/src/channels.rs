//! Measurement conditional expectations (pinchings), operational partitions
//! of unity in both pictures, entropy monotonicity checks, and the
//! measurement-steering experiment.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrices::{self, outer, ComplexMatrix};
use crate::states::{DensityOperator, PureState};
use crate::tol;

/// Orthonormal basis used by a pinching map.
#[derive(Debug, Clone)]
pub struct PinchingBasis {
    vectors: Vec<Vec<Complex64>>,
}

impl PinchingBasis {
    /// Validates that `vectors` is a complete orthonormal system.
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = vectors.first().map(|v| v.len()).unwrap_or(0);
        if vectors.len() != dim || dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: vectors.len(),
            });
        }
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate() {
                let g = matrices::dot(a, b);
                let want = if i == j { 1.0 } else { 0.0 };
                if (g.norm() - want).abs() > tol::ORTHONORMAL {
                    return Err(Error::NotOrthogonal {
                        overlap: (g.norm() - want).abs(),
                    });
                }
            }
        }
        Ok(PinchingBasis { vectors })
    }

    /// The computational basis of an `n`-dimensional space.
    pub fn computational(dim: usize) -> Self {
        PinchingBasis {
            vectors: (0..dim)
                .map(|k| PureState::basis(dim, k).vector().to_vec())
                .collect(),
        }
    }

    /// Eigenbasis of a Hermitian matrix.
    pub fn eigenbasis(m: &ComplexMatrix) -> Result<Self> {
        let eig = matrices::eig_hermitian(m)?;
        Ok(PinchingBasis {
            vectors: (0..m.dim()).map(|k| eig.vector(k)).collect(),
        })
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Rank-one projectors |ψᵢ⟩⟨ψᵢ| as an operational partition.
    pub fn projectors(&self) -> OperationalPartition {
        OperationalPartition {
            kraus: self.vectors.iter().map(|v| outer(v, v)).collect(),
        }
    }
}

/// Kraus family (V₁,…,V_n) with Σ Vᵢ*Vᵢ = I.
#[derive(Debug, Clone)]
pub struct OperationalPartition {
    kraus: Vec<ComplexMatrix>,
}

impl OperationalPartition {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = kraus.first().map(|m| m.dim()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::BadFormat {
                reason: "partition needs at least one element".into(),
            });
        }
        let mut acc = ComplexMatrix::zeros(dim);
        for v in &kraus {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            acc = acc.add(&v.adjoint().mul(v));
        }
        let gap = acc.sub(&ComplexMatrix::identity(dim)).max_abs();
        if gap > tol::PARTITION {
            return Err(Error::NotAPartition { gap });
        }
        Ok(OperationalPartition { kraus })
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }
}

/// Measurement conditional expectation Σᵢ ⟨ψᵢ|T|ψᵢ⟩ |ψᵢ⟩⟨ψᵢ|.
pub fn pinch(t: &ComplexMatrix, basis: &PinchingBasis) -> Result<ComplexMatrix> {
    if t.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: t.dim(),
        });
    }
    let n = t.dim();
    let mut out = ComplexMatrix::zeros(n);
    for psi in basis.vectors() {
        let expect = matrices::dot(psi, &t.mul_vec(psi));
        out = out.add(&outer(psi, psi).scale(expect));
    }
    Ok(out)
}

/// Pinch of a density operator, revalidated.
pub fn pinch_density(d: &DensityOperator, basis: &PinchingBasis) -> Result<DensityOperator> {
    DensityOperator::new(pinch(d.matrix(), basis)?)
}

/// Block pinching Σᵢ Pᵢ T Pᵢ over pairwise orthogonal projections summing
/// to the identity.
pub fn pinch_projective(
    t: &ComplexMatrix,
    projections: &[ComplexMatrix],
) -> Result<ComplexMatrix> {
    let dim = t.dim();
    let mut total = ComplexMatrix::zeros(dim);
    for (i, p) in projections.iter().enumerate() {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        if !p.is_hermitian(tol::PARTITION) {
            return Err(Error::NotAProjectionFamily {
                reason: format!("element {i} is not Hermitian"),
            });
        }
        if p.mul(p).sub(p).max_abs() > tol::PARTITION {
            return Err(Error::NotAProjectionFamily {
                reason: format!("element {i} is not idempotent"),
            });
        }
        for (j, q) in projections.iter().enumerate().skip(i + 1) {
            if p.mul(q).max_abs() > tol::PARTITION {
                return Err(Error::NotAProjectionFamily {
                    reason: format!("elements {i} and {j} are not orthogonal"),
                });
            }
        }
        total = total.add(p);
    }
    if total.sub(&ComplexMatrix::identity(dim)).max_abs() > tol::PARTITION {
        return Err(Error::NotAProjectionFamily {
            reason: "projections do not sum to the identity".into(),
        });
    }
    let mut out = ComplexMatrix::zeros(dim);
    for p in projections {
        out = out.add(&p.mul(t).mul(p));
    }
    Ok(out)
}

/// Schrödinger-picture action D ↦ Σᵢ Vᵢ D Vᵢ*.
pub fn apply_schrodinger(
    w: &OperationalPartition,
    d: &DensityOperator,
) -> Result<DensityOperator> {
    if w.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: d.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(d.dim());
    for v in w.kraus() {
        out = out.add(&v.mul(d.matrix()).mul(&v.adjoint()));
    }
    DensityOperator::new(out)
}

/// Heisenberg-picture action A ↦ Σᵢ Vᵢ* A Vᵢ.
pub fn apply_heisenberg(w: &OperationalPartition, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if w.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: a.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(a.dim());
    for v in w.kraus() {
        out = out.add(&v.adjoint().mul(a).mul(v));
    }
    Ok(out)
}

/// (S_f(D), S_f(E(D))) for a concave `f`; the second entry is never smaller.
pub fn check_monotonicity(
    d: &DensityOperator,
    basis: &PinchingBasis,
    f: impl Fn(f64) -> f64,
) -> Result<(f64, f64)> {
    let before = crate::entropy::s_f(d, &f)?;
    let after = crate::entropy::s_f(&pinch_density(d, basis)?, &f)?;
    Ok((before, after))
}

/// Extend `seed_vector` to a complete orthonormal system by Gram-Schmidt
/// against the standard basis in index order, dropping whichever basis
/// vector becomes linearly dependent.
fn extend_to_basis(seed_vector: &[Complex64]) -> PinchingBasis {
    let dim = seed_vector.len();
    let mut vectors: Vec<Vec<Complex64>> = vec![seed_vector.to_vec()];
    let mut idx = 0usize;
    while vectors.len() < dim && idx < dim {
        let mut cand = PureState::basis(dim, idx).vector().to_vec();
        for prev in &vectors {
            let proj = matrices::dot(prev, &cand);
            for (c, p) in cand.iter_mut().zip(prev) {
                *c -= proj * p;
            }
        }
        let nrm = matrices::norm(&cand);
        if nrm > 1e-8 {
            for c in cand.iter_mut() {
                *c /= nrm;
            }
            vectors.push(cand);
        }
        idx += 1;
    }
    PinchingBasis { vectors }
}

/// Sequence of `k` states obtained by pinching |φ₁⟩⟨φ₁| step by step in
/// bases built around ψ⁽ⁿ⁾ = cos(πn/2k)|φ₁⟩ + sin(πn/2k)|φ₂⟩; the last
/// state approaches |φ₂⟩⟨φ₂| as k grows.
pub fn steering_sequence(
    phi1: &PureState,
    phi2: &PureState,
    k: usize,
) -> Result<Vec<DensityOperator>> {
    assert!(k >= 1, "k must be at least 1");
    if phi1.dim() != phi2.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi1.dim(),
            found: phi2.dim(),
        });
    }
    let overlap = matrices::dot(phi1.vector(), phi2.vector()).norm();
    if overlap > tol::ORTHONORMAL {
        return Err(Error::NotOrthogonal { overlap });
    }
    let mut states = Vec::with_capacity(k);
    let mut rho = DensityOperator::pure(phi1);
    for n in 1..=k {
        let theta = std::f64::consts::PI * n as f64 / (2.0 * k as f64);
        let psi: Vec<Complex64> = phi1
            .vector()
            .iter()
            .zip(phi2.vector())
            .map(|(a, b)| a * theta.cos() + b * theta.sin())
            .collect();
        let basis = extend_to_basis(&psi);
        rho = pinch_density(&rho, &basis)?;
        states.push(rho.clone());
    }
    Ok(states)
}

/// Closed-form final fidelity ½(1 + cosᵏ(π/k)) of the steering sequence for
/// an orthogonal pair; validated against the composed-pinching path in the
/// test suite.
pub fn steering_fidelity_closed_form(k: usize) -> f64 {
    0.5 * (1.0 + (std::f64::consts::PI / k as f64).cos().powi(k as i32))
}
