//! Numerical toolkit for the entropy of finite quantum systems.
//!
//! The crate is organized around dense complex matrices ([`matrices`]) and
//! validated density operators ([`states`]). On top of those sit the entropy
//! functionals ([`entropy`]), measurement channels and pinchings
//! ([`channels`]), constrained entropy maximization ([`maxent`]), operational
//! (Lindblad) entropy ([`lindblad`]) and the noiseless-channel capacity bound
//! ([`capacity`]).
//!
//! All quantities are in nats (natural logarithm) with the Boltzmann constant
//! set to 1. Every function is pure: no global state, randomness only through
//! explicit seeds (ChaCha8 with Box-Muller normals).
//!
//! Batch workloads (Monte-Carlo trials, optimizer restarts, chain profiles)
//! run on rayon when the default `parallel` feature is enabled and fall back
//! to plain iteration otherwise; see [`exec`].

pub mod capacity;
pub mod channels;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod lindblad;
pub mod matrices;
pub mod maxent;
pub mod states;

mod root;

pub use error::{Error, Result};
pub use matrices::{ComplexMatrix, EigenSystem};
pub use states::{DensityOperator, PureState};

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// Max entrywise |M - M†| for a matrix to count as Hermitian.
    pub const HERMITIAN: f64 = 1e-10;
    /// Orthonormality and unit-norm tolerance for vectors.
    pub const ORTHONORMAL: f64 = 1e-10;
    /// Trace-one tolerance for density operators.
    pub const TRACE_ONE: f64 = 1e-10;
    /// Eigenvalues above this are clipped to zero during validation.
    pub const EIG_CLIP: f64 = -1e-10;
    /// Partition-of-unity and POVM completeness tolerance.
    pub const PARTITION: f64 = 1e-8;
    /// Eigenvalue cutoff defining the numerical range of an operator.
    pub const RANGE_CUTOFF: f64 = 1e-12;
    /// Residual tolerance for root-finding on constraints.
    pub const ROOT_RESIDUAL: f64 = 1e-10;
    /// Hard cap on matrix dimensions produced by tensor products.
    pub const DIM_CAP: usize = 4096;
}
