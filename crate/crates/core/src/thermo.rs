//! Cycle energetics.
//!
//! All energies are in h·kHz. The sign convention is that of the working
//! substance: work done *on* the system is positive, so the cycle is an
//! engine when `W_net < 0` and heat flows in from the hot side (`Q_h > 0`).
//!
//! Two independent routes are provided:
//!
//! * [`cycle_energetics`]: closed forms in the populations `p_c`, `p_h` and
//!   the transition probability ξ.
//! * [`energetics_from_states`]: trace differences `tr(Hρ)` built from the
//!   actual post-stroke density matrices.
//!
//! Friction work additionally has an entropy-production route through
//! [`relative_entropy`] and [`friction_from_divergence`].

use std::fmt;

use crate::complex2::{eig_hermitian2, Density2, Unitary2};
use crate::error::{Error, Result};
use crate::propagator::transition_probability;
use crate::tls::{gibbs_state, Axis, CycleFrequencies, Population};

/// Tolerance on the two efficiency expressions agreeing.
pub const EFFICIENCY_CROSSCHECK_TOL: f64 = 1e-12;

/// Everything the closed-form energetics depend on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleInputs {
    pub freqs: CycleFrequencies,
    pub p_c: Population,
    pub p_h: Population,
    xi: f64,
}

impl CycleInputs {
    pub fn new(freqs: CycleFrequencies, p_c: Population, p_h: Population, xi: f64) -> Result<Self> {
        if !(xi.is_finite() && (0.0..=0.5).contains(&xi)) {
            return Err(Error::domain("xi", xi, "must lie inside [0, 1/2]"));
        }
        Ok(CycleInputs {
            freqs,
            p_c,
            p_h,
            xi,
        })
    }

    /// Convenience constructor from raw populations.
    pub fn from_values(nu_c: f64, nu_h: f64, p_c: f64, p_h: f64, xi: f64) -> Result<Self> {
        let freqs = CycleFrequencies::new(nu_c, nu_h)?;
        let p_c = Population::new(p_c)
            .map_err(|_| Error::domain("p_c", p_c, "must lie strictly inside (0, 1)"))?;
        let p_h = Population::new(p_h)
            .map_err(|_| Error::domain("p_h", p_h, "must lie strictly inside (0, 1)"))?;
        CycleInputs::new(freqs, p_c, p_h, xi)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// `ν_h(1 − 2p_c) + ν_c(1 − 2p_h)`: the sign of the friction work.
    pub fn friction_sign_factor(&self) -> f64 {
        friction_sign_factor(self.p_c.get(), self.p_h.get(), &self.freqs)
    }
}

pub fn friction_sign_factor(p_c: f64, p_h: f64, freqs: &CycleFrequencies) -> f64 {
    freqs.nu_h() * (1.0 - 2.0 * p_c) + freqs.nu_c() * (1.0 - 2.0 * p_h)
}

/// Which engine condition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotEngineReason {
    /// `W_net ≥ 0`.
    NoNetWork,
    /// `Q_h ≤ 0`.
    NoHeatAbsorbed,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Engine,
    NotEngine(NotEngineReason),
}

impl Mode {
    pub fn classify(w_net: f64, q_h: f64) -> Mode {
        match (w_net < 0.0, q_h > 0.0) {
            (true, true) => Mode::Engine,
            (false, true) => Mode::NotEngine(NotEngineReason::NoNetWork),
            (true, false) => Mode::NotEngine(NotEngineReason::NoHeatAbsorbed),
            (false, false) => Mode::NotEngine(NotEngineReason::Both),
        }
    }

    pub fn is_engine(self) -> bool {
        self == Mode::Engine
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Engine => "engine",
            Mode::NotEngine(NotEngineReason::NoNetWork) => "not-engine:w_net>=0",
            Mode::NotEngine(NotEngineReason::NoHeatAbsorbed) => "not-engine:q_h<=0",
            Mode::NotEngine(NotEngineReason::Both) => "not-engine:both",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleEnergetics {
    pub w_exp: f64,
    pub w_comp: f64,
    pub q_c: f64,
    pub q_h: f64,
    pub w_net: f64,
    /// Quasi-static part of `w_net`.
    pub w_ad: f64,
    /// Finite-time excess, `w_net − w_ad`.
    pub w_fric: f64,
    /// `−W_net/Q_h`; `None` outside engine mode.
    pub eta: Option<f64>,
    pub mode: Mode,
}

impl CycleEnergetics {
    fn assemble(w_exp: f64, w_comp: f64, q_c: f64, q_h: f64, w_ad: f64, w_fric: f64) -> Self {
        let w_net = w_exp + w_comp;
        let mode = Mode::classify(w_net, q_h);
        CycleEnergetics {
            w_exp,
            w_comp,
            q_c,
            q_h,
            w_net,
            w_ad,
            w_fric,
            eta: mode.is_engine().then(|| -w_net / q_h),
            mode,
        }
    }

    /// `W_exp + W_comp + Q_c + Q_h`, zero up to rounding.
    pub fn first_law_residual(&self) -> f64 {
        self.w_exp + self.w_comp + self.q_c + self.q_h
    }
}

/// Closed-form work, heat, friction and efficiency.
pub fn cycle_energetics(inputs: &CycleInputs) -> CycleEnergetics {
    let nu_c = inputs.freqs.nu_c();
    let nu_h = inputs.freqs.nu_h();
    let p_c = inputs.p_c.get();
    let p_h = inputs.p_h.get();
    let xi = inputs.xi;

    let w_exp = (nu_h - nu_c) * p_c + nu_h * xi * (1.0 - 2.0 * p_c);
    let w_comp = -(nu_h - nu_c) * p_h + nu_c * xi * (1.0 - 2.0 * p_h);
    let q_c = -nu_c * (p_h - p_c) - nu_c * xi * (1.0 - 2.0 * p_h);
    let q_h = nu_h * (p_h - p_c) - nu_h * xi * (1.0 - 2.0 * p_c);
    let w_ad = -(nu_h - nu_c) * (p_h - p_c);
    let w_fric = xi * inputs.friction_sign_factor();

    let out = CycleEnergetics::assemble(w_exp, w_comp, q_c, q_h, w_ad, w_fric);
    if let Some(eta) = out.eta {
        debug_assert!(
            (eta - efficiency_closed_form(inputs)).abs()
                <= EFFICIENCY_CROSSCHECK_TOL * eta.abs().max(1.0),
            "efficiency routes disagree"
        );
    }
    out
}

/// `η = 1 − (ν_c/ν_h)·[p_h − p_c + ξ(1 − 2p_h)] / [p_h − p_c − ξ(1 − 2p_c)]`.
///
/// Defined whenever `Q_h ≠ 0`; whether the cycle is actually an engine is
/// not checked here.
pub fn efficiency_closed_form(inputs: &CycleInputs) -> f64 {
    let p_c = inputs.p_c.get();
    let p_h = inputs.p_h.get();
    let xi = inputs.xi;
    let num = p_h - p_c + xi * (1.0 - 2.0 * p_h);
    let den = p_h - p_c - xi * (1.0 - 2.0 * p_c);
    1.0 - inputs.freqs.nu_c() / inputs.freqs.nu_h() * num / den
}

/// The four cycle states for given reservoirs and expansion propagator `U`.
#[derive(Clone, Copy, Debug)]
pub struct CycleStates {
    /// After cooling: Gibbs state of `H_c`.
    pub rho1: Density2,
    /// After expansion: `U ρ₁ U†`.
    pub rho2: Density2,
    /// After heating: Gibbs state of `H_h`.
    pub rho3: Density2,
    /// After compression: `U† ρ₃ U`.
    pub rho4: Density2,
}

impl CycleStates {
    pub fn new(p_c: Population, p_h: Population, u: &Unitary2) -> Self {
        let rho1 = gibbs_state(p_c, Axis::X);
        let rho3 = gibbs_state(p_h, Axis::Y);
        CycleStates {
            rho1,
            rho2: u.conjugate(&rho1),
            rho3,
            rho4: u.adjoint().conjugate(&rho3),
        }
    }
}

/// Energetics from trace differences of the actual cycle states:
/// `W_exp = tr(H_h ρ₂) − tr(H_c ρ₁)`, `Q_h = tr(H_h(ρ₃ − ρ₂))`, and so on.
///
/// `W_ad` uses the quasi-static states (populations carried over unchanged),
/// and `W_fric = W_net − W_ad`.
pub fn energetics_from_states(
    p_c: Population,
    p_h: Population,
    u: &Unitary2,
    freqs: &CycleFrequencies,
) -> Result<CycleEnergetics> {
    let h_c = freqs.cold_hamiltonian();
    let h_h = freqs.hot_hamiltonian();
    let s = CycleStates::new(p_c, p_h, u);

    let w_exp = h_h.expectation(&s.rho2) - h_c.expectation(&s.rho1);
    let w_comp = h_c.expectation(&s.rho4) - h_h.expectation(&s.rho3);
    let q_c = h_c.expectation(&s.rho1) - h_c.expectation(&s.rho4);
    let q_h = h_h.expectation(&s.rho3) - h_h.expectation(&s.rho2);

    let rho2_qe = gibbs_state(p_c, Axis::Y);
    let rho4_qe = gibbs_state(p_h, Axis::X);
    let w_ad = (h_h.expectation(&rho2_qe) - h_c.expectation(&s.rho1))
        + (h_c.expectation(&rho4_qe) - h_h.expectation(&s.rho3));
    let w_net = w_exp + w_comp;

    // Surface a non-unitary U here rather than silently returning garbage.
    transition_probability(u)?;
    Ok(CycleEnergetics::assemble(
        w_exp,
        w_comp,
        q_c,
        q_h,
        w_ad,
        w_net - w_ad,
    ))
}

/// Eigenvalues below this are treated as exact zeros.
const SUPPORT_TOL: f64 = 1e-14;

/// Quantum relative entropy `D(ρ‖σ) = tr(ρ ln ρ) − tr(ρ ln σ)` in nats.
///
/// Returns `f64::INFINITY` when `ρ` has weight outside the support of `σ`.
pub fn relative_entropy(rho: &Density2, sigma: &Density2) -> f64 {
    let er = eig_hermitian2(&rho.as_hermitian());
    let es = eig_hermitian2(&sigma.as_hermitian());

    let neg_entropy: f64 = er
        .values
        .iter()
        .filter(|&&l| l > SUPPORT_TOL)
        .map(|&l| l * l.ln())
        .sum();

    let mut cross = 0.0;
    for k in 0..2 {
        let weight = rho.population(&es.vector(k));
        let lambda = es.values[k];
        if lambda > SUPPORT_TOL {
            cross += weight * lambda.ln();
        } else if weight > SUPPORT_TOL {
            return f64::INFINITY;
        }
    }
    neg_entropy - cross
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stroke {
    Expansion,
    Compression,
}

/// How the divergence is converted into an energy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DivergencePrefactor {
    /// Effective temperature of the quasi-static reference at the stroke's
    /// final frequency: `1/β_eff = hν_final / ln((1−p)/p)`. Reproduces the
    /// closed-form friction terms.
    #[default]
    FinalFrequency,
    /// Temperature of the reservoir the stroke started from:
    /// `1/β = hν_initial / ln((1−p)/p)`. Differs from the closed form by the
    /// factor `ν_initial/ν_final`.
    InitialReservoir,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrictionTerm {
    /// Friction work of this stroke (h·kHz).
    pub work: f64,
    /// `D(ρ_final‖ρ_qe)`; `None` when the reference is the singular `p = 1/2` state.
    pub divergence: Option<f64>,
    /// Set when `p = 1/2`: the prefactor diverges, so `work` is the closed-form limit.
    pub singular_reference: bool,
}

/// Closed-form per-stroke friction: `hν_hξ(1−2p_c)` or `hν_cξ(1−2p_h)`.
pub fn friction_closed_form(
    p_init: Population,
    xi: f64,
    stroke: Stroke,
    freqs: &CycleFrequencies,
) -> f64 {
    let nu_final = match stroke {
        Stroke::Expansion => freqs.nu_h(),
        Stroke::Compression => freqs.nu_c(),
    };
    nu_final * xi * (1.0 - 2.0 * p_init.get())
}

/// Smallest `|ln((1−p)/p)|` treated as a regular reference.
const SINGULAR_EXPONENT: f64 = 1e-9;

/// Friction work of one stroke as (effective temperature) × (entropy
/// production).
///
/// `u` is the expansion propagator; the compression stroke uses `U†`. The
/// final state is compared against the quasi-static reference, which keeps
/// the initial Gibbs populations but sits in the final Hamiltonian's
/// eigenbasis.
pub fn friction_from_divergence(
    p_init: Population,
    prefactor: DivergencePrefactor,
    u: &Unitary2,
    stroke: Stroke,
    freqs: &CycleFrequencies,
) -> Result<FrictionTerm> {
    let (from, to, nu_initial, nu_final, propagator) = match stroke {
        Stroke::Expansion => (Axis::X, Axis::Y, freqs.nu_c(), freqs.nu_h(), *u),
        Stroke::Compression => (Axis::Y, Axis::X, freqs.nu_h(), freqs.nu_c(), u.adjoint()),
    };
    let exponent = p_init.exponent();
    if exponent.abs() < SINGULAR_EXPONENT {
        let xi = transition_probability(u)?;
        return Ok(FrictionTerm {
            work: friction_closed_form(p_init, xi, stroke, freqs),
            divergence: None,
            singular_reference: true,
        });
    }
    let initial = gibbs_state(p_init, from);
    let reference = gibbs_state(p_init, to);
    let divergence = relative_entropy(&propagator.conjugate(&initial), &reference);
    let nu = match prefactor {
        DivergencePrefactor::FinalFrequency => nu_final,
        DivergencePrefactor::InitialReservoir => nu_initial,
    };
    Ok(FrictionTerm {
        work: nu / exponent * divergence,
        divergence: Some(divergence),
        singular_reference: false,
    })
}

/// Open interval of `p_c` (or `p_h`) values producing negative friction work.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub lower: f64,
    pub upper: f64,
    /// Whether `upper` itself belongs to the window.
    pub upper_inclusive: bool,
}

impl Window {
    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lower && (x < self.upper || (self.upper_inclusive && x == self.upper))
    }
}

/// `p_c` range giving `W_fric < 0` for a hot population `p_h`:
/// `(1/2)(1 + (1−2p_h)ν_c/ν_h) < p_c < 1/2`. Empty unless `p_h > 1/2`.
pub fn negative_friction_window(p_h: f64, freqs: &CycleFrequencies) -> Result<Window> {
    if !(p_h.is_finite() && p_h > 0.0 && p_h <= 1.0) {
        return Err(Error::domain("p_h", p_h, "must lie inside (0, 1]"));
    }
    let lower = 0.5 * (1.0 + (1.0 - 2.0 * p_h) * freqs.nu_c() / freqs.nu_h());
    Ok(Window {
        lower,
        upper: 0.5,
        upper_inclusive: false,
    })
}

/// `p_h` range giving `W_fric < 0` for a cold population `p_c`:
/// `(1/2)(1 + (1−2p_c)ν_h/ν_c) < p_h ≤ 1`.
pub fn negative_friction_window_hot(p_c: f64, freqs: &CycleFrequencies) -> Result<Window> {
    if !(p_c.is_finite() && p_c > 0.0 && p_c < 0.5) {
        return Err(Error::domain("p_c", p_c, "must lie inside (0, 1/2)"));
    }
    let lower = 0.5 * (1.0 + (1.0 - 2.0 * p_c) * freqs.nu_h() / freqs.nu_c());
    Ok(Window {
        lower,
        upper: 1.0,
        upper_inclusive: true,
    })
}

/// `p_h > 1 − p_c`: finite-time strokes raise η above `1 − ν_c/ν_h`.
pub fn efficiency_exceeds_adiabatic(p_c: Population, p_h: Population) -> bool {
    p_h.get() > 1.0 - p_c.get()
}
