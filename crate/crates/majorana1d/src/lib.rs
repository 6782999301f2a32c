//! Real-valued (Majorana) solutions of the one-dimensional Dirac equation
//! with a Lorentz scalar potential.
//!
//! In the Majorana representation the Dirac operator is real, so charge
//! conjugation is plain complex conjugation and the physical states are the
//! real wave functions (up to one global phase). Four scenarios share the
//! machinery here: a particle at rest in a box ([`rest_box`]), a free
//! particle with periodic boundary conditions ([`periodic_box`]), an
//! impenetrable box with the four current-cancelling wall conditions
//! ([`impenetrable_box`]), and a linear scalar potential on the line
//! ([`linear_potential`]). Eigenstates are closed-form; packets are
//! expansions over positive-energy modes whose coefficients are constrained
//! so the reconstructed field stays real; evolution is spectral, never
//! time-stepped. [`numerics`] provides the transcendental root-finding and
//! an independent finite-difference Hamiltonian oracle used to cross-check
//! every spectrum, and [`verify`] runs the full invariant suite
//! deterministically.
//!
//! Everything is generic over the scalar type through [`Real`]; the `*64`
//! aliases below are the working-precision entry points.

pub mod dirac;
pub mod impenetrable_box;
pub mod linear_potential;
pub mod numerics;
pub mod periodic_box;
pub mod rest_box;
mod scalar;
pub mod verify;

pub use scalar::{real, real_usize, to_f64, Real};

/// Complex scalar at working precision.
pub type C64 = num_complex::Complex<f64>;
/// Physics constants at working precision.
pub type Params64 = dirac::PhysicsParams<f64>;
/// Uniform grid at working precision.
pub type Grid64 = dirac::Grid<f64>;
/// Two-component field at working precision.
pub type Field64 = dirac::SpinorField<f64>;

/// Default numeric tolerances, kept in one place.
pub mod tol {
    /// Residual |f(z)| of accepted transcendental roots.
    pub const ROOT_RESIDUAL: f64 = 1e-10;
    /// Majorana reality defect along evolved trajectories.
    pub const REALITY_DEFECT: f64 = 1e-10;
    /// Gram-matrix deviation from identity for eigenstate sets.
    pub const ORTHONORMALITY: f64 = 1e-8;
    /// Mean values that vanish identically on real states.
    pub const MEAN_VALUE: f64 = 1e-9;
    /// Probability current at confining walls.
    pub const WALL_CURRENT: f64 = 1e-10;
    /// Slack accepted by the unit-norm precondition of mean values.
    pub const NORM_PRECONDITION: f64 = 1e-6;
    /// Packet coefficient sum rules (|deviation| from the exact constraint).
    pub const COEFF_CONSTRAINT: f64 = 1e-10;
    /// Gaussian tail magnitude allowed at truncated-domain endpoints.
    pub const DOMAIN_TAIL: f64 = 1e-12;
    /// Bisection bracket width at convergence.
    pub const BRACKET_WIDTH: f64 = 1e-13;
}

/// Library error type. Input errors are caller mistakes (precondition
/// violations); bracket/non-finite errors are numeric failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("field norm {norm} violates the unit-norm precondition")]
    Unnormalized { norm: f64 },
    #[error("no sign change on bracket [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(String),
}

impl Error {
    /// True for caller-side precondition violations, false for numeric
    /// failures inside a routine.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::GridMismatch(_) | Error::InvalidInput(_) | Error::Unnormalized { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
