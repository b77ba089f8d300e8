//! Error type shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by geometry construction, quadrature and state assembly.
#[derive(Debug, Clone, Error)]
pub enum UdwError {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Detector centers coincide spatially; the pointlike two-point
    /// distributions have no finite reduction at zero separation.
    #[error("singular geometry: spatial separation is zero")]
    SingularGeometry,

    /// The adaptive quadrature did not reach the requested tolerance
    /// within the subdivision budget. Carries the partial result.
    #[error("quadrature failed to converge: partial={partial}, est_error={est_error}")]
    QuadratureFailure {
        partial: Complex64,
        est_error: f64,
    },

    /// Equal-time Wightman self-energy of a pointlike detector diverges;
    /// a GaussianBall profile is required.
    #[error("divergent self-energy: pointlike profile has no finite equal-time self-term")]
    DivergentSelfEnergy,

    /// Delta-coupling protocols require the sender to act strictly before
    /// the receiver.
    #[error("ordering error: sender instant t_a={t_a} must precede receiver instant t_b={t_b}")]
    Ordering { t_a: f64, t_b: f64 },

    /// Receiver qubit has no coherence to signal into (alpha or beta is zero).
    #[error("degenerate receiver: |alpha_b| and |beta_b| must both be nonzero")]
    DegenerateReceiver,

    /// A density matrix failed its Hermiticity check.
    #[error("non-Hermitian input: defect {0}")]
    NonHermitian(f64),

    /// The leading-order quantum negativity formula assumes identical
    /// detectors (equal local noise terms).
    #[error("non-identical detectors: |L_aa - L_bb| = {0} exceeds tolerance")]
    NonIdenticalDetectors(f64),
}

pub type Result<T> = std::result::Result<T, UdwError>;
