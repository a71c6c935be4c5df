//! Time-ordered evolution of the unitary strokes and the adiabaticity
//! parameter ξ.
//!
//! The Schrödinger equation `dU/dt = −2πi (H(t)/h) U` is stepped with the
//! exponential midpoint rule `U ← exp(−2πi Δt H(t + Δt/2)/h) U` on a uniform
//! grid. Each factor is an exact 2×2 exponential, so unitarity holds to
//! rounding at every step. The step count is doubled until ξ moves by less
//! than the configured tolerance between successive refinements.

use std::f64::consts::TAU;

use crate::complex2::{exp_neg_i_h, Hermitian2, Unitary2};
use crate::error::{Error, Result};
use crate::pool::map_indexed;
use crate::tls::{
    hamiltonian_compression, hamiltonian_expansion, Axis, CycleFrequencies, StrokeDuration,
};

/// Agreement required between the two forms of ξ.
pub const XI_FORMS_TOL: f64 = 1e-10;

/// A time-dependent Hamiltonian `H(t)/h` (h·kHz) on `[0, τ]` (ms).
pub trait Drive: Sync {
    fn duration(&self) -> StrokeDuration;

    /// `t` is guaranteed to lie inside `[0, τ]`.
    fn hamiltonian_at(&self, t: f64) -> Hermitian2;
}

/// `H_exp(t)`: rotates `ν_c|+x⟩⟨+x|` into `ν_h|+y⟩⟨+y|`.
#[derive(Clone, Copy, Debug)]
pub struct ExpansionDrive {
    pub tau: StrokeDuration,
    pub freqs: CycleFrequencies,
}

impl Drive for ExpansionDrive {
    fn duration(&self) -> StrokeDuration {
        self.tau
    }

    fn hamiltonian_at(&self, t: f64) -> Hermitian2 {
        hamiltonian_expansion(t, self.tau, &self.freqs).expect("time inside stroke")
    }
}

/// `H_comp(t) = −H_exp(τ − t)`.
#[derive(Clone, Copy, Debug)]
pub struct CompressionDrive {
    pub tau: StrokeDuration,
    pub freqs: CycleFrequencies,
}

impl Drive for CompressionDrive {
    fn duration(&self) -> StrokeDuration {
        self.tau
    }

    fn hamiltonian_at(&self, t: f64) -> Hermitian2 {
        hamiltonian_compression(t, self.tau, &self.freqs).expect("time inside stroke")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    /// `None` selects `max(64, ⌈40·ν_h·τ⌉)`.
    pub initial_steps: Option<usize>,
    pub xi_tolerance: f64,
    pub max_doublings: u32,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            initial_steps: None,
            xi_tolerance: 1e-9,
            max_doublings: 20,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.initial_steps {
            if n < 2 {
                return Err(Error::domain(
                    "initial_steps",
                    n as f64,
                    "must be at least 2",
                ));
            }
        }
        if !(self.xi_tolerance > 0.0 && self.xi_tolerance < 1e-2) {
            return Err(Error::domain(
                "xi_tolerance",
                self.xi_tolerance,
                "must lie inside (0, 1e-2)",
            ));
        }
        Ok(())
    }

    pub fn initial_steps_for(&self, tau: StrokeDuration, freqs: &CycleFrequencies) -> usize {
        self.initial_steps
            .unwrap_or_else(|| default_initial_steps(tau, freqs))
    }
}

pub fn default_initial_steps(tau: StrokeDuration, freqs: &CycleFrequencies) -> usize {
    let by_phase = (40.0 * freqs.nu_h() * tau.millis()).ceil();
    // Saturating float → int cast.
    (by_phase as usize).max(64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagatorResult {
    pub unitary: Unitary2,
    pub steps_used: usize,
    /// `|ξ_n − ξ_2n|` of the final refinement.
    pub xi_error_estimate: f64,
    pub xi: f64,
}

/// One pass of the exponential midpoint rule with `steps` uniform steps.
pub fn midpoint_propagator<D: Drive + ?Sized>(drive: &D, steps: usize) -> Unitary2 {
    let tau = drive.duration().millis();
    let dt = tau / steps as f64;
    let mut u = Unitary2::identity();
    for k in 0..steps {
        let t_mid = ((k as f64 + 0.5) * dt).min(tau);
        let step = exp_neg_i_h(&drive.hamiltonian_at(t_mid), TAU * dt);
        u = step * u;
    }
    u
}

/// `|⟨to_±|U|from_∓⟩|²` computed both ways; they must agree for unitary `U`.
pub fn transition_probability_between(u: &Unitary2, from: Axis, to: Axis) -> Result<f64> {
    let m = u.matrix();
    let forward = m.sandwich(&to.excited(), &from.ground()).norm_sqr();
    let reverse = m.sandwich(&to.ground(), &from.excited()).norm_sqr();
    if (forward - reverse).abs() > XI_FORMS_TOL {
        return Err(Error::UnitarityViolation { forward, reverse });
    }
    Ok(forward)
}

/// ξ = `|⟨+y|U|−x⟩|²` for an expansion propagator.
pub fn transition_probability(u: &Unitary2) -> Result<f64> {
    transition_probability_between(u, Axis::X, Axis::Y)
}

/// Step-doubling driver shared by both strokes.
pub fn converge<D, F>(
    drive: &D,
    initial_steps: usize,
    cfg: &IntegratorConfig,
    xi_of: F,
) -> Result<PropagatorResult>
where
    D: Drive + ?Sized,
    F: Fn(&Unitary2) -> Result<f64>,
{
    cfg.validate()?;
    let mut steps = initial_steps.max(2);
    let mut coarse_xi = xi_of(&midpoint_propagator(drive, steps))?;
    let mut best = None;
    for _ in 0..cfg.max_doublings {
        steps = steps.saturating_mul(2);
        let unitary = midpoint_propagator(drive, steps);
        let xi = xi_of(&unitary)?;
        let result = PropagatorResult {
            unitary,
            steps_used: steps,
            xi_error_estimate: (xi - coarse_xi).abs(),
            xi,
        };
        if result.xi_error_estimate < cfg.xi_tolerance {
            return Ok(result);
        }
        coarse_xi = xi;
        best = Some(result);
    }
    let best = best.unwrap_or_else(|| {
        let unitary = midpoint_propagator(drive, steps);
        PropagatorResult {
            unitary,
            steps_used: steps,
            xi_error_estimate: f64::INFINITY,
            xi: coarse_xi,
        }
    });
    Err(Error::NotConverged {
        doublings: cfg.max_doublings,
        best: Box::new(best),
    })
}

/// Converged expansion propagator `U` and its ξ. The compression stroke is
/// driven by `U†` (see [`evolve_compression`]).
pub fn evolve_expansion(
    tau: StrokeDuration,
    freqs: &CycleFrequencies,
    cfg: &IntegratorConfig,
) -> Result<PropagatorResult> {
    let drive = ExpansionDrive { tau, freqs: *freqs };
    converge(
        &drive,
        cfg.initial_steps_for(tau, freqs),
        cfg,
        transition_probability,
    )
}

/// Integrates `H_comp(t)` directly. The result equals the adjoint of the
/// expansion propagator, and its ξ is `|⟨+x|V|−y⟩|²`.
pub fn evolve_compression(
    tau: StrokeDuration,
    freqs: &CycleFrequencies,
    cfg: &IntegratorConfig,
) -> Result<PropagatorResult> {
    let drive = CompressionDrive { tau, freqs: *freqs };
    converge(&drive, cfg.initial_steps_for(tau, freqs), cfg, |v| {
        transition_probability_between(v, Axis::Y, Axis::X)
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XiPoint {
    pub tau: StrokeDuration,
    pub xi: f64,
    pub error_estimate: f64,
    pub steps_used: usize,
    /// False when the step-doubling budget ran out; `xi` is then the best estimate.
    pub converged: bool,
}

impl XiPoint {
    fn from_outcome(tau: StrokeDuration, outcome: Result<PropagatorResult>) -> Result<Self> {
        match outcome {
            Ok(r) => Ok(XiPoint {
                tau,
                xi: r.xi,
                error_estimate: r.xi_error_estimate,
                steps_used: r.steps_used,
                converged: true,
            }),
            Err(Error::NotConverged { best, .. }) => Ok(XiPoint {
                tau,
                xi: best.xi,
                error_estimate: best.xi_error_estimate,
                steps_used: best.steps_used,
                converged: false,
            }),
            Err(e) => Err(e),
        }
    }
}

/// ξ for every τ, in input order. Points that fail to converge are returned
/// with `converged = false`; other errors abort.
pub fn xi_sweep(
    taus: &[StrokeDuration],
    freqs: &CycleFrequencies,
    cfg: &IntegratorConfig,
    threads: Option<usize>,
) -> Result<Vec<XiPoint>> {
    cfg.validate()?;
    map_indexed(threads, taus.len(), |i| {
        XiPoint::from_outcome(taus[i], evolve_expansion(taus[i], freqs, cfg))
    })
    .into_iter()
    .collect()
}
