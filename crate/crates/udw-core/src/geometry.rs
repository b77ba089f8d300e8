//! Spacetime, detector and pair-placement data model.
//!
//! Natural units `hbar = c = 1`. Every time and length is expressed in
//! units of the Gaussian switching width `T` of detector A, so the
//! dimensionless inputs `Omega*T`, `L/T` and `t0/T` are the canonical
//! API surface.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, UdwError};

/// Half-width of the "strong support" of a Gaussian switching, in units
/// of its width: 99.9999% of the switching mass lies within `+/- 3.5 T`
/// of the peak. Used for causal classification.
pub const STRONG_SUPPORT_SIGMAS: f64 = 3.5;

/// An event in 3+1 Minkowski spacetime, mostly-plus signature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Event {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Event { t, x, y, z }
    }

    /// Minkowski interval `s^2 = -(dt)^2 + |dx|^2`.
    /// Negative for timelike, zero for lightlike, positive for spacelike.
    pub fn interval_squared(&self, other: &Event) -> f64 {
        let dt = self.t - other.t;
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        -dt * dt + dx * dx + dy * dy + dz * dz
    }

    /// Spatial distance between the two events.
    pub fn spatial_distance(&self, other: &Event) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Switching function controlling the time window of an interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SwitchingFunction {
    /// `chi(t) = exp(-(t - center)^2 / width^2)`.
    Gaussian { center: f64, width: f64 },
    /// Instantaneous switching `eta * delta(t - instant)`; `strength`
    /// carries units of time so the coupling stays dimensionless.
    DiracDelta { instant: f64, strength: f64 },
}

impl SwitchingFunction {
    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        if width <= 0.0 || !width.is_finite() || !center.is_finite() {
            return Err(UdwError::Domain(format!(
                "Gaussian switching needs finite center and width > 0, got ({center}, {width})"
            )));
        }
        Ok(SwitchingFunction::Gaussian { center, width })
    }

    pub fn dirac(instant: f64, strength: f64) -> Result<Self> {
        if !instant.is_finite() || !strength.is_finite() {
            return Err(UdwError::Domain(
                "Dirac switching needs finite instant and strength".into(),
            ));
        }
        Ok(SwitchingFunction::DiracDelta { instant, strength })
    }

    /// Pointwise value. A Dirac switching has no pointwise value; it only
    /// makes sense under an integral, so this returns its density formally
    /// as `None`.
    pub fn value(&self, t: f64) -> Option<f64> {
        match self {
            SwitchingFunction::Gaussian { center, width } => {
                let u = (t - center) / width;
                Some((-u * u).exp())
            }
            SwitchingFunction::DiracDelta { .. } => None,
        }
    }

    /// Time window carrying essentially all of the switching mass:
    /// `center +/- 3.5 width` for a Gaussian, the bare instant for a delta.
    pub fn strong_support(&self) -> (f64, f64) {
        match *self {
            SwitchingFunction::Gaussian { center, width } => (
                center - STRONG_SUPPORT_SIGMAS * width,
                center + STRONG_SUPPORT_SIGMAS * width,
            ),
            SwitchingFunction::DiracDelta { instant, .. } => (instant, instant),
        }
    }

    /// Same switching translated in time by `dt`.
    pub fn shifted(&self, dt: f64) -> Self {
        match *self {
            SwitchingFunction::Gaussian { center, width } => SwitchingFunction::Gaussian {
                center: center + dt,
                width,
            },
            SwitchingFunction::DiracDelta { instant, strength } => SwitchingFunction::DiracDelta {
                instant: instant + dt,
                strength,
            },
        }
    }
}

/// Spatial profile of a detector. `pos` is an offset relative to the
/// center assigned by the pair geometry (zero for the standard setups).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpatialProfile {
    /// `delta^(3)(x - pos)`.
    Point { pos: [f64; 3] },
    /// `exp(-|x - pos|^2 / sigma^2) / (pi^(3/2) sigma^3)`, unit spatial integral.
    GaussianBall { pos: [f64; 3], sigma: f64 },
}

impl SpatialProfile {
    pub fn point() -> Self {
        SpatialProfile::Point { pos: [0.0; 3] }
    }

    pub fn ball(sigma: f64) -> Result<Self> {
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(UdwError::Domain(format!(
                "GaussianBall width must be > 0, got {sigma}"
            )));
        }
        Ok(SpatialProfile::GaussianBall {
            pos: [0.0; 3],
            sigma,
        })
    }

    pub fn offset(&self) -> [f64; 3] {
        match *self {
            SpatialProfile::Point { pos } => pos,
            SpatialProfile::GaussianBall { pos, .. } => pos,
        }
    }

    /// Gaussian width, zero for a pointlike profile.
    pub fn width(&self) -> f64 {
        match *self {
            SpatialProfile::Point { .. } => 0.0,
            SpatialProfile::GaussianBall { sigma, .. } => sigma,
        }
    }
}

/// Pure state of a two-level probe, `alpha |g> + beta |e>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl QubitState {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(UdwError::Domain(format!(
                "qubit state must be normalized, |alpha|^2 + |beta|^2 = {norm}"
            )));
        }
        Ok(QubitState { alpha, beta })
    }

    pub fn ground() -> Self {
        QubitState {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    /// Equal superposition `(|g> + |e>)/sqrt(2)`, the optimal sender/receiver
    /// coherence for the communication protocols.
    pub fn plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        QubitState { alpha: h, beta: h }
    }

    /// From real amplitudes, normalizing.
    pub fn from_real(alpha: f64, beta: f64) -> Result<Self> {
        let n = (alpha * alpha + beta * beta).sqrt();
        if n <= 0.0 || !n.is_finite() {
            return Err(UdwError::Domain("qubit amplitudes must not both vanish".into()));
        }
        Ok(QubitState {
            alpha: Complex64::new(alpha / n, 0.0),
            beta: Complex64::new(beta / n, 0.0),
        })
    }

    /// 2x2 density matrix `|psi><psi|` in the `{g, e}` basis.
    pub fn density(&self) -> [[Complex64; 2]; 2] {
        let a = self.alpha;
        let b = self.beta;
        [[a * a.conj(), a * b.conj()], [b * a.conj(), b * b.conj()]]
    }

    /// Monopole expectation `<mu(t)> = 2 Re(alpha* beta e^(i Omega t))`.
    pub fn monopole_expectation(&self, gap: f64, t: f64) -> f64 {
        2.0 * (self.alpha.conj() * self.beta * Complex64::new(0.0, gap * t).exp()).re
    }
}

/// One localized two-level probe: energy gap, coupling strength, switching,
/// spatial profile and initial internal state. Trajectories are comoving
/// inertial, so the profile position is static.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detector {
    pub gap: f64,
    pub coupling: f64,
    pub switching: SwitchingFunction,
    pub profile: SpatialProfile,
    pub initial_state: QubitState,
}

impl Detector {
    pub fn new(
        gap: f64,
        coupling: f64,
        switching: SwitchingFunction,
        profile: SpatialProfile,
        initial_state: QubitState,
    ) -> Result<Self> {
        if gap < 0.0 || !gap.is_finite() {
            return Err(UdwError::Domain(format!("gap must be >= 0, got {gap}")));
        }
        if coupling < 0.0 || !coupling.is_finite() {
            return Err(UdwError::Domain(format!(
                "coupling must be >= 0, got {coupling}"
            )));
        }
        Ok(Detector {
            gap,
            coupling,
            switching,
            profile,
            initial_state,
        })
    }

    /// Pointlike detector with a unit-width Gaussian switching centered at
    /// the placement origin, starting in the ground state. `gap` is Omega*T.
    pub fn gaussian(gap: f64, coupling: f64) -> Result<Self> {
        Detector::new(
            gap,
            coupling,
            SwitchingFunction::gaussian(0.0, 1.0)?,
            SpatialProfile::point(),
            QubitState::ground(),
        )
    }

    /// Delta-switched detector with a Gaussian-ball profile, as used in the
    /// non-perturbative coupling. The instant is relative to the placement.
    pub fn delta_ball(gap: f64, coupling: f64, strength: f64, sigma: f64) -> Result<Self> {
        Detector::new(
            gap,
            coupling,
            SwitchingFunction::dirac(0.0, strength)?,
            SpatialProfile::ball(sigma)?,
            QubitState::ground(),
        )
    }

    pub fn with_state(mut self, state: QubitState) -> Self {
        self.initial_state = state;
        self
    }

    pub fn with_switching(mut self, sw: SwitchingFunction) -> Self {
        self.switching = sw;
        self
    }

    pub fn with_profile(mut self, p: SpatialProfile) -> Self {
        self.profile = p;
        self
    }
}

/// How detector B is placed relative to detector A.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Placement {
    /// B centered at `(L sin(theta), L cos(theta), 0, 0)`; `theta` in
    /// `[0, pi/2]` interpolates from purely spatial to purely temporal
    /// separation, with light contact at `pi/4`.
    Angle { theta: f64 },
    /// B centered at `(t0, L, 0, 0)`: spatial separation `L`, switching
    /// delay `t0`.
    Delay { t0: f64 },
}

/// Placement of probe B relative to probe A (A sits at the origin event).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairGeometry {
    pub separation: f64,
    pub placement: Placement,
}

impl PairGeometry {
    pub fn with_angle(separation: f64, theta: f64) -> Result<Self> {
        let g = PairGeometry {
            separation,
            placement: Placement::Angle { theta },
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_delay(separation: f64, t0: f64) -> Result<Self> {
        let g = PairGeometry {
            separation,
            placement: Placement::Delay { t0 },
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.separation <= 0.0 || !self.separation.is_finite() {
            return Err(UdwError::Domain(format!(
                "separation must be > 0, got {}",
                self.separation
            )));
        }
        if let Placement::Angle { theta } = self.placement {
            if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
                return Err(UdwError::Domain(format!(
                    "theta must lie in [0, pi/2], got {theta}"
                )));
            }
        }
        Ok(())
    }

    /// Geometry with the roles of A and B exchanged (delay reversed).
    pub fn swapped(&self) -> Self {
        match self.placement {
            Placement::Angle { theta } => PairGeometry {
                separation: self.separation,
                placement: Placement::Angle { theta },
            },
            Placement::Delay { t0 } => PairGeometry {
                separation: self.separation,
                placement: Placement::Delay { t0: -t0 },
            },
        }
    }
}

/// Center events of the two interaction regions.
///
/// In angle mode B sits at `(L sin(theta), L cos(theta), 0, 0)`; in delay
/// mode at `(t0, L, 0, 0)`. A is always at the origin event.
pub fn geometry_to_centers(g: &PairGeometry) -> Result<(Event, Event)> {
    g.validate()?;
    let a = Event::new(0.0, 0.0, 0.0, 0.0);
    let b = match g.placement {
        Placement::Angle { theta } => Event::new(
            g.separation * theta.sin(),
            g.separation * theta.cos(),
            0.0,
            0.0,
        ),
        Placement::Delay { t0 } => Event::new(t0, g.separation, 0.0, 0.0),
    };
    Ok((a, b))
}

/// Causal relation between the interaction regions of two detectors,
/// judged from the strong support of their switchings against the
/// lightcone of the spatial separation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalClass {
    EffectivelySpacelike,
    LightContact,
    Timelike,
}

impl std::fmt::Display for CausalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CausalClass::EffectivelySpacelike => "effectively-spacelike",
            CausalClass::LightContact => "light-contact",
            CausalClass::Timelike => "timelike",
        };
        f.write_str(s)
    }
}

/// Classify the causal relation of the two interaction regions.
///
/// The time windows are the strong supports of the switchings shifted to
/// their placement centers; the spatial distance is taken between the two
/// profile centers. If every pair of window instants is spacelike the
/// regions are effectively spacelike; if every pair is timelike they are
/// timelike; otherwise some pair sits on the lightcone.
pub fn causal_class(a: &Detector, b: &Detector, g: &PairGeometry) -> Result<CausalClass> {
    let (ca, cb) = geometry_to_centers(g)?;
    let (pa, pb) = (a.profile.offset(), b.profile.offset());
    let dx = [
        cb.x + pb[0] - ca.x - pa[0],
        cb.y + pb[1] - ca.y - pa[1],
        cb.z + pb[2] - ca.z - pa[2],
    ];
    let r = (dx[0] * dx[0] + dx[1] * dx[1] + dx[2] * dx[2]).sqrt();

    let (a_lo, a_hi) = a.switching.shifted(ca.t).strong_support();
    let (b_lo, b_hi) = b.switching.shifted(cb.t).strong_support();

    // Range of t_b - t_a over the two windows.
    let d_lo = b_lo - a_hi;
    let d_hi = b_hi - a_lo;
    let abs_min = if d_lo <= 0.0 && d_hi >= 0.0 {
        0.0
    } else {
        d_lo.abs().min(d_hi.abs())
    };
    let abs_max = d_lo.abs().max(d_hi.abs());

    Ok(if abs_max < r {
        CausalClass::EffectivelySpacelike
    } else if abs_min > r {
        CausalClass::Timelike
    } else {
        CausalClass::LightContact
    })
}
