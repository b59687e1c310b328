//! Dense complex linear algebra: Hermitian eigendecomposition (cyclic
//! Jacobi), tensor products, partial traces, norms and matrix functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Which tensor factor to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Dense square complex matrix, row-major storage.
///
/// Serializes as `{"dim": n, "data": [[re, im], ...]}` with `n*n` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    data: Vec<(f64, f64)>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.dim == 0 {
            return Err(Error::BadFormat {
                reason: "dim must be positive".into(),
            });
        }
        if r.data.len() != r.dim * r.dim {
            return Err(Error::BadFormat {
                reason: format!(
                    "expected {} entries for dim {}, found {}",
                    r.dim * r.dim,
                    r.dim,
                    r.data.len()
                ),
            });
        }
        let data: Vec<Complex64> = r.data.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::BadFormat {
                reason: "entries must be finite".into(),
            });
        }
        Ok(ComplexMatrix { dim: r.dim, data })
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr {
            dim: m.dim,
            data: m.data.iter().map(|z| (z.re, z.im)).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Real matrix from nested rows; panics if the rows are not square.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must be square");
        Self::from_fn(dim, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn diag(entries: &[f64]) -> Self {
        Self::from_fn(entries.len(), |i, j| {
            if i == j {
                Complex64::new(entries[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entrywise absolute value.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max entrywise |M - M†|.
    pub fn hermiticity_gap(&self) -> f64 {
        let mut gap = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                gap = gap.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        gap
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.hermiticity_gap() <= tolerance
    }

    fn check_hermitian(&self) -> Result<()> {
        let gap = self.hermiticity_gap();
        if gap > tol::HERMITIAN {
            Err(Error::NotHermitian { gap })
        } else {
            Ok(())
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Conjugate-linear in the first argument.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    dot(v, v).re.sqrt()
}

/// |a⟩⟨b| as a matrix.
pub fn outer(a: &[Complex64], b: &[Complex64]) -> ComplexMatrix {
    assert_eq!(a.len(), b.len());
    ComplexMatrix::from_fn(a.len(), |i, j| a[i] * b[j].conj())
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues ascending,
/// orthonormal eigenvectors as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.dim()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// Σ λᵢ |vᵢ⟩⟨vᵢ|.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * self.values[k])
                .sum()
        })
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Rotations zero one off-diagonal pivot at a time; a sweep visits every
/// pivot once. Converges quadratically for the dimensions handled here.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenSystem> {
    m.check_hermitian()?;
    let n = m.dim();
    // Work on the Hermitian average so roundoff in the input cannot drift.
    let mut a = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    let scale = m.max_abs().max(1.0);
    let stop = 1e-14 * scale;
    let max_sweeps = 100 * n * n;

    let mut converged = n < 2;
    for _ in 0..max_sweeps {
        if converged {
            break;
        }
        let mut max_off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                max_off = max_off.max(r);
                if r <= stop {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / r;
                let d = (app - aqq) / (2.0 * r);
                let t = if d >= 0.0 {
                    1.0 / (d + (d * d + 1.0).sqrt())
                } else {
                    1.0 / (d - (d * d + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J acts on coordinates (p, q):
                //   J[p][p] = c, J[p][q] = -s e^{i a}, J[q][p] = s e^{-i a}, J[q][q] = c.
                let se = phase * s;
                // A <- A J and V <- V J (column update).
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c + aiq * se.conj();
                    a[(i, q)] = aiq * c - aip * se;
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * se.conj();
                    v[(i, q)] = viq * c - vip * se;
                }
                // A <- J† A (row update).
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c + aqj * se;
                    a[(q, j)] = aqj * c - apj * se.conj();
                }
                // Keep the pivot exactly zero and the diagonal exactly real.
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
        converged = max_off <= stop;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: max_sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(EigenSystem { values, vectors })
}

/// Kronecker (tensor) product with row-major composite indexing
/// `(i, k) -> i * dim(b) + k`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a.dim() * b.dim();
    if dim > tol::DIM_CAP {
        return Err(Error::DimensionOverflow {
            dim,
            cap: tol::DIM_CAP,
        });
    }
    let db = b.dim();
    Ok(ComplexMatrix::from_fn(dim, |r, c| {
        a[(r / db, c / db)] * b[(r % db, c % db)]
    }))
}

/// Partial trace of an operator on a bipartite space with factor dimensions
/// `dims`, keeping the factor selected by `keep`.
pub fn partial_trace(
    d: &ComplexMatrix,
    dims: (usize, usize),
    keep: Keep,
) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if d.dim() != da * db {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            found: d.dim(),
        });
    }
    match keep {
        Keep::First => Ok(ComplexMatrix::from_fn(da, |i, j| {
            (0..db).map(|k| d[(i * db + k, j * db + k)]).sum()
        })),
        Keep::Second => Ok(ComplexMatrix::from_fn(db, |k, l| {
            (0..da).map(|i| d[(i * db + k, i * db + l)]).sum()
        })),
    }
}

/// Trace distance ½ Σ |eig(a - b)| between Hermitian matrices.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    a.check_hermitian()?;
    b.check_hermitian()?;
    let eig = eig_hermitian(&a.sub(b))?;
    Ok(0.5 * eig.values.iter().map(|v| v.abs()).sum::<f64>())
}

/// Matrix function Σ f(λᵢ)|vᵢ⟩⟨vᵢ| on a Hermitian matrix.
pub fn apply_function(
    d: &ComplexMatrix,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(d)?;
    let n = d.dim();
    let mut fv = Vec::with_capacity(n);
    for &lambda in &eig.values {
        let y = f(lambda);
        if !y.is_finite() {
            return Err(Error::DomainError { at: lambda });
        }
        fv.push(y);
    }
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| eig.vectors[(i, k)] * eig.vectors[(j, k)].conj() * fv[k])
            .sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eig_identity() {
        let eig = eig_hermitian(&ComplexMatrix::identity(3)).unwrap();
        for v in &eig.values {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn eig_pauli_x() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let eig = eig_hermitian(&x).unwrap();
        assert_abs_diff_eq!(eig.values[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.values[1], 1.0, epsilon = 1e-12);
        // Eigenvectors are (1, ∓1)/√2 up to phase.
        for k in 0..2 {
            let v = eig.vector(k);
            assert_abs_diff_eq!(v[0].norm(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-10);
            assert_abs_diff_eq!(v[1].norm(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-10);
        }
    }

    #[test]
    fn eig_two_by_two_known_spectrum() {
        // Oracle: quadratic formula on trace 1, det 0.125.
        let m = ComplexMatrix::from_real_rows(&[&[0.75, 0.25], &[0.25, 0.25]]);
        let eig = eig_hermitian(&m).unwrap();
        let disc = (1.0f64 - 4.0 * 0.125).sqrt();
        assert_abs_diff_eq!(eig.values[0], (1.0 - disc) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.values[1], (1.0 + disc) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.values[0], 0.14644660940672624, epsilon = 1e-10);
    }

    #[test]
    fn eig_complex_hermitian_reconstructs() {
        let m = ComplexMatrix::from_fn(3, |i, j| match (i, j) {
            (0, 1) => c(0.2, 0.3),
            (1, 0) => c(0.2, -0.3),
            (0, 2) => c(-0.1, 0.4),
            (2, 0) => c(-0.1, -0.4),
            (1, 2) => c(0.0, -0.25),
            (2, 1) => c(0.0, 0.25),
            (k, l) if k == l => c(0.5 + 0.1 * k as f64, 0.0),
            _ => unreachable!(),
        });
        let eig = eig_hermitian(&m).unwrap();
        assert!(eig.reconstruct().sub(&m).max_abs() <= 1e-10);
        // Orthonormality of the eigenvector columns.
        for i in 0..3 {
            for j in 0..3 {
                let g = dot(&eig.vector(i), &eig.vector(j));
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(g.norm(), want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_diagonal_expansion() {
        let a = ComplexMatrix::diag(&[1.0, 2.0]);
        let b = ComplexMatrix::diag(&[3.0, 4.0]);
        assert_eq!(kron(&a, &b).unwrap(), ComplexMatrix::diag(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn kron_trace_multiplicative() {
        let a = ComplexMatrix::from_fn(2, |i, j| c(0.3 * i as f64 + 0.1, 0.2 * j as f64));
        let b = ComplexMatrix::from_fn(3, |i, j| c(0.1 * (i + j) as f64, -0.05 * i as f64));
        let t = kron(&a, &b).unwrap().trace();
        let want = a.trace() * b.trace();
        assert_abs_diff_eq!(t.re, want.re, epsilon = 1e-12);
        assert_abs_diff_eq!(t.im, want.im, epsilon = 1e-12);
    }

    #[test]
    fn kron_overflow_guard() {
        let a = ComplexMatrix::identity(80);
        let b = ComplexMatrix::identity(80);
        assert!(matches!(
            kron(&a, &b),
            Err(Error::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn partial_trace_bell_state() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let bell = vec![c(inv, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(inv, 0.0)];
        let rho = outer(&bell, &bell);
        let reduced = partial_trace(&rho, (2, 2), Keep::First).unwrap();
        assert!(reduced.sub(&ComplexMatrix::identity(2).scale(c(0.5, 0.0))).max_abs() <= 1e-12);
    }

    #[test]
    fn partial_trace_product_state() {
        let rho = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c(0.7, 0.0),
            (1, 1) => c(0.3, 0.0),
            (0, 1) => c(0.1, 0.2),
            (1, 0) => c(0.1, -0.2),
            _ => unreachable!(),
        });
        let sigma = ComplexMatrix::diag(&[0.4, 0.6]);
        let joint = kron(&rho, &sigma).unwrap();
        let back = partial_trace(&joint, (2, 2), Keep::First).unwrap();
        assert!(back.sub(&rho).max_abs() <= 1e-12);
        let second = partial_trace(&joint, (2, 2), Keep::Second).unwrap();
        assert!(second.sub(&sigma).max_abs() <= 1e-12);
    }

    #[test]
    fn partial_trace_observable_contract() {
        // Tr(A · Tr₂ D) = Tr((A ⊗ I) D) against a full operator basis.
        let d = crate::states::random_density(4, 7).unwrap();
        let dm = d.matrix();
        let reduced = partial_trace(dm, (2, 2), Keep::First).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for &(re, im) in &[(1.0, 0.0), (0.0, 1.0)] {
                    let mut obs = ComplexMatrix::zeros(2);
                    obs[(a, b)] = c(re, im);
                    let lhs = obs.mul(&reduced).trace();
                    let rhs = kron(&obs, &ComplexMatrix::identity(2))
                        .unwrap()
                        .mul(dm)
                        .trace();
                    assert_abs_diff_eq!(lhs.re, rhs.re, epsilon = 1e-10);
                    assert_abs_diff_eq!(lhs.im, rhs.im, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn partial_trace_dimension_guard() {
        let m = ComplexMatrix::identity(5);
        assert!(matches!(
            partial_trace(&m, (2, 2), Keep::First),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trace_distance_cases() {
        let p0 = ComplexMatrix::diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diag(&[0.0, 1.0]);
        let mixed = ComplexMatrix::diag(&[0.5, 0.5]);
        assert_abs_diff_eq!(trace_distance(&p0, &p0).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(trace_distance(&p0, &p1).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(trace_distance(&p0, &mixed).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn apply_function_identity_and_square() {
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.3], &[0.3, 0.5]]);
        let same = apply_function(&m, |t| t).unwrap();
        assert!(same.sub(&m).max_abs() <= 1e-10);

        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let sq = apply_function(&x, |t| t * t).unwrap();
        assert!(sq.sub(&ComplexMatrix::identity(2)).max_abs() <= 1e-10);
    }

    #[test]
    fn apply_function_eta_on_maximally_mixed() {
        let m = ComplexMatrix::diag(&[0.5, 0.5]);
        let out = apply_function(&m, |t| -t * t.ln()).unwrap();
        let want = ComplexMatrix::diag(&[0.5 * 2.0f64.ln(), 0.5 * 2.0f64.ln()]);
        assert!(out.sub(&want).max_abs() <= 1e-12);
    }

    #[test]
    fn apply_function_domain_error() {
        let m = ComplexMatrix::diag(&[-1.0, 1.0]);
        assert!(matches!(
            apply_function(&m, |t| t.ln()),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn matrix_json_round_trip_and_rejection() {
        let m = ComplexMatrix::from_fn(2, |i, j| c(i as f64, j as f64));
        let s = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);

        let bad = r#"{"dim": 2, "data": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
    }
}
