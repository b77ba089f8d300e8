//! Simulation of two localized two-level probes interacting either through
//! a quantum massless scalar field or through a quantum-controlled
//! classical field in 3+1 Minkowski spacetime.
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`] — events, switchings, profiles, detectors, pair placement
//!   and causal classification (natural units, times in units of the
//!   Gaussian switching width).
//! * [`kernels`] — closed-form distributional reduction of the seven
//!   massless-vacuum two-point functions (lightcone deltas plus a principal
//!   value), with the identity table between them holding exactly.
//! * [`bilinear`] — the quadrature engine for smeared oscillatory double
//!   integrals, plus an independent epsilon-regulated brute-force oracle.
//! * [`models`] — assembly of the joint detector states for both mediation
//!   models and the instantaneous-coupling receiver states.
//! * [`information`] — negativity, purity, signalling terms and classical
//!   channel capacities.

pub mod bilinear;
pub mod error;
pub mod geometry;
pub mod information;
pub mod kernels;
mod linalg;
pub mod models;
pub mod quad;

pub use bilinear::{
    brute_force_bilinear, brute_force_extrapolated, brute_force_with_mass, self_bilinear,
    smeared_bilinear, BilinearResult, PhasePair, QuadratureSpec,
};
pub use error::{Result, UdwError};
pub use geometry::{
    causal_class, geometry_to_centers, CausalClass, Detector, Event, PairGeometry, Placement,
    QubitState, SpatialProfile, SwitchingFunction, STRONG_SUPPORT_SIGMAS,
};
pub use information::{
    binary_entropy, capacity_delta, capacity_delta_from, capacity_perturbative, negativity_exact,
    negativity_leading, signalling_term, ChannelReport, ParamEcho,
};
pub use kernels::{
    feynman_reduced, kernel_reduced, retarded_reduced, wightman_reduced, KernelKind, KernelShape,
    ReducedKernel,
};
pub use models::{
    assemble_qc_state, assemble_qft_state, compute_amplitudes, delta_receiver_state, AmplitudeSet,
    Model, OrderTag, ReceiverState, TwoQubitState,
};
