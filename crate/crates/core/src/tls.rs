//! Two-level working substance: stroke Hamiltonians, the frequency ramp,
//! Gibbs states and the population ↔ inverse-temperature map.
//!
//! Energies are in units of h·kHz and times in ms, so `H/h` is stored
//! directly and Planck's constant never appears numerically. A reservoir is
//! described by the dimensionless exponent `u = βhν` (Boltzmann constant
//! absorbed into β) or, equivalently, by the excited-state population it
//! imprints, `p = 1/(eᵘ + 1)`. Negative `u` is a negative temperature.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use crate::complex2::{Density2, Hermitian2, Ket, Matrix2, C64};
use crate::error::{Error, Result};

/// Eigenbasis of one of the two fixed Hamiltonians.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Eigenbasis of `H_c`: `|±x⟩ = (1, ±1)/√2`.
    X,
    /// Eigenbasis of `H_h`: `|±y⟩ = (1, ±i)/√2`.
    Y,
}

impl Axis {
    /// Excited eigenvector `|+⟩`.
    pub fn excited(self) -> Ket {
        match self {
            Axis::X => [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)],
            Axis::Y => [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2)],
        }
    }

    /// Ground eigenvector `|−⟩`.
    pub fn ground(self) -> Ket {
        match self {
            Axis::X => [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0)],
            Axis::Y => [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, -FRAC_1_SQRT_2)],
        }
    }
}

/// `|+⟩⟨+|` for the given axis.
pub fn projector_excited(axis: Axis) -> Hermitian2 {
    let v = axis.excited();
    Hermitian2::new(Matrix2::outer(&v, &v)).expect("outer product of a ket is Hermitian")
}

/// Cold and hot frequencies (kHz).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleFrequencies {
    nu_c: f64,
    nu_h: f64,
}

impl CycleFrequencies {
    pub fn new(nu_c: f64, nu_h: f64) -> Result<Self> {
        if !(nu_c.is_finite() && nu_c > 0.0) {
            return Err(Error::domain("nu_c", nu_c, "must be a positive frequency"));
        }
        if !(nu_h.is_finite() && nu_h > nu_c) {
            return Err(Error::domain("nu_h", nu_h, "must exceed nu_c"));
        }
        Ok(CycleFrequencies { nu_c, nu_h })
    }

    /// ν_c = 2 kHz, ν_h = 3.6 kHz.
    pub fn reference() -> Self {
        CycleFrequencies {
            nu_c: 2.0,
            nu_h: 3.6,
        }
    }

    pub fn nu_c(&self) -> f64 {
        self.nu_c
    }

    pub fn nu_h(&self) -> f64 {
        self.nu_h
    }

    /// `H_c / h = ν_c |+x⟩⟨+x|`.
    pub fn cold_hamiltonian(&self) -> Hermitian2 {
        projector_excited(Axis::X).scale(self.nu_c)
    }

    /// `H_h / h = ν_h |+y⟩⟨+y|`.
    pub fn hot_hamiltonian(&self) -> Hermitian2 {
        projector_excited(Axis::Y).scale(self.nu_h)
    }

    /// Quasi-static Otto efficiency `1 − ν_c/ν_h`.
    pub fn adiabatic_efficiency(&self) -> f64 {
        1.0 - self.nu_c / self.nu_h
    }
}

/// Excited-state population, strictly inside (0, 1).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Population(f64);

impl Population {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 && p < 1.0 {
            Ok(Population(p))
        } else {
            Err(Error::domain(
                "population",
                p,
                "must lie strictly inside (0, 1)",
            ))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `u = ln((1−p)/p)`.
    pub fn exponent(self) -> f64 {
        exponent_from_population(self)
    }

    pub fn is_inverted(self) -> bool {
        self.0 > 0.5
    }
}

/// `p = 1/(eᵘ + 1)`, evaluated without overflow for large `|u|`.
pub fn gibbs_population(u: f64) -> f64 {
    if u >= 0.0 {
        let e = (-u).exp();
        e / (1.0 + e)
    } else {
        1.0 / (u.exp() + 1.0)
    }
}

/// Inverse of [`gibbs_population`]: `u = ln((1−p)/p)`.
pub fn exponent_from_population(p: Population) -> f64 {
    let p = p.get();
    (-p).ln_1p() - p.ln()
}

/// Sign of the reservoir temperature implied by a population.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemperatureSign {
    Positive,
    /// `p = 1/2`, the infinite-temperature boundary.
    Infinite,
    Negative,
}

/// A thermal reservoir as seen by the two-level system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReservoirSpec {
    u: f64,
    p: Population,
}

impl ReservoirSpec {
    pub fn from_population(p: f64) -> Result<Self> {
        let p = Population::new(p)?;
        Ok(ReservoirSpec {
            u: exponent_from_population(p),
            p,
        })
    }

    pub fn from_exponent(u: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::domain("exponent", u, "must be finite"));
        }
        let p = Population::new(gibbs_population(u))
            .map_err(|_| Error::domain("exponent", u, "population underflows to 0 or 1"))?;
        Ok(ReservoirSpec { u, p })
    }

    /// `u = βhν`.
    pub fn exponent(&self) -> f64 {
        self.u
    }

    pub fn population(&self) -> Population {
        self.p
    }

    pub fn temperature_sign(&self) -> TemperatureSign {
        if self.u > 0.0 {
            TemperatureSign::Positive
        } else if self.u < 0.0 {
            TemperatureSign::Negative
        } else {
            TemperatureSign::Infinite
        }
    }
}

/// Duration of each unitary stroke (ms).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct StrokeDuration(f64);

impl StrokeDuration {
    pub fn from_millis(tau_ms: f64) -> Result<Self> {
        if tau_ms.is_finite() && tau_ms > 0.0 {
            Ok(StrokeDuration(tau_ms))
        } else {
            Err(Error::domain("tau", tau_ms, "must be a positive duration"))
        }
    }

    pub fn from_micros(tau_us: f64) -> Result<Self> {
        Self::from_millis(tau_us * 1e-3)
    }

    pub fn millis(self) -> f64 {
        self.0
    }

    pub fn micros(self) -> f64 {
        self.0 * 1e3
    }
}

fn check_time(t: f64, tau: f64) -> Result<()> {
    if t.is_finite() && (0.0..=tau).contains(&t) {
        Ok(())
    } else {
        Err(Error::domain("t", t, "must lie inside [0, tau]"))
    }
}

/// `ν(t) = (1 − t/τ)ν_c + (t/τ)ν_h`.
pub fn ramp_frequency(t: f64, tau: StrokeDuration, freqs: &CycleFrequencies) -> Result<f64> {
    check_time(t, tau.millis())?;
    let s = t / tau.millis();
    Ok((1.0 - s) * freqs.nu_c + s * freqs.nu_h)
}

/// `H_exp(t)/h = ν(t)[cos(πt/2τ)|+x⟩⟨+x| + sin(πt/2τ)|+y⟩⟨+y|]`.
pub fn hamiltonian_expansion(
    t: f64,
    tau: StrokeDuration,
    freqs: &CycleFrequencies,
) -> Result<Hermitian2> {
    let nu = ramp_frequency(t, tau, freqs)?;
    let s = t / tau.millis();
    // Exact endpoints: cos(π/2) is not zero in floating point.
    let (sin_a, cos_a) = if s == 0.0 {
        (0.0, 1.0)
    } else if s == 1.0 {
        (1.0, 0.0)
    } else {
        (FRAC_PI_2 * s).sin_cos()
    };
    Ok(Hermitian2::combine(&[
        (nu * cos_a, &projector_excited(Axis::X)),
        (nu * sin_a, &projector_excited(Axis::Y)),
    ]))
}

/// `H_comp(t) = −H_exp(τ − t)`.
pub fn hamiltonian_compression(
    t: f64,
    tau: StrokeDuration,
    freqs: &CycleFrequencies,
) -> Result<Hermitian2> {
    check_time(t, tau.millis())?;
    Ok(hamiltonian_expansion(tau.millis() - t, tau, freqs)?.neg())
}

/// `ρ = (1−p)|−⟩⟨−| + p|+⟩⟨+|` in the given eigenbasis.
pub fn gibbs_state(p: Population, axis: Axis) -> Density2 {
    let p = p.get();
    Density2::from_spectrum([1.0 - p, p], [&axis.ground(), &axis.excited()])
        .expect("convex combination of orthogonal projectors is a state")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex2::eig_hermitian2;

    fn tau(ms: f64) -> StrokeDuration {
        StrokeDuration::from_millis(ms).unwrap()
    }

    #[test]
    fn projectors() {
        let px = projector_excited(Axis::X);
        let py = projector_excited(Axis::Y);
        let ex = Matrix2::from_real(0.5, 0.5, 0.5, 0.5);
        let ey = Matrix2::new(
            C64::new(0.5, 0.0),
            C64::new(0.0, -0.5),
            C64::new(0.0, 0.5),
            C64::new(0.5, 0.0),
        );
        assert!(px.matrix().max_abs_diff(&ex) < 1e-15);
        assert!(py.matrix().max_abs_diff(&ey) < 1e-15);
        for p in [px, py] {
            assert!((*p.matrix() * *p.matrix()).max_abs_diff(p.matrix()) < 1e-15);
            assert!((p.matrix().trace().re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ramp_endpoints_and_midpoint() {
        let f = CycleFrequencies::reference();
        let t = tau(0.4);
        assert_eq!(ramp_frequency(0.0, t, &f).unwrap(), 2.0);
        assert!((ramp_frequency(0.4, t, &f).unwrap() - 3.6).abs() < 1e-15);
        assert!((ramp_frequency(0.2, t, &f).unwrap() - 2.8).abs() < 1e-15);
        assert!(ramp_frequency(-0.01, t, &f).is_err());
        assert!(ramp_frequency(0.41, t, &f).is_err());
    }

    #[test]
    fn expansion_endpoints() {
        let f = CycleFrequencies::reference();
        let t = tau(0.3);
        let h0 = hamiltonian_expansion(0.0, t, &f).unwrap();
        let h1 = hamiltonian_expansion(0.3, t, &f).unwrap();
        assert!(h0.matrix().max_abs_diff(f.cold_hamiltonian().matrix()) <= 1e-15);
        assert!(h1.matrix().max_abs_diff(f.hot_hamiltonian().matrix()) <= 1e-15);
    }

    #[test]
    fn expansion_midpoint() {
        let f = CycleFrequencies::reference();
        let t = tau(1.0);
        let h = hamiltonian_expansion(0.5, t, &f).unwrap();
        let w = 2.8 * FRAC_1_SQRT_2;
        let expected = Hermitian2::combine(&[
            (w, &projector_excited(Axis::X)),
            (w, &projector_excited(Axis::Y)),
        ]);
        assert!(h.matrix().max_abs_diff(expected.matrix()) < 1e-14);
        assert!(h.matrix().hermiticity_defect() == 0.0);
        // Closed form: w·(I + (σx+σy)/2) has eigenvalues w(1 ∓ 1/√2).
        let e = eig_hermitian2(&h);
        assert!((e.values[0] - w * (1.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
        assert!((e.values[1] - w * (1.0 + FRAC_1_SQRT_2)).abs() < 1e-12);
    }

    #[test]
    fn expansion_trace_and_positivity() {
        let f = CycleFrequencies::reference();
        let t = tau(0.7);
        for k in 0..=50 {
            let time = 0.7 * k as f64 / 50.0;
            let h = hamiltonian_expansion(time, t, &f).unwrap();
            let nu = ramp_frequency(time, t, &f).unwrap();
            let a = FRAC_PI_2 * time / 0.7;
            let tr = h.matrix().trace().re;
            assert!((tr - nu * (a.cos() + a.sin())).abs() < 1e-12);
            assert!(eig_hermitian2(&h).values[0] >= -1e-12);
        }
    }

    #[test]
    fn compression_mirrors_expansion() {
        let f = CycleFrequencies::reference();
        let t = tau(0.25);
        let c0 = hamiltonian_compression(0.0, t, &f).unwrap();
        let c1 = hamiltonian_compression(0.25, t, &f).unwrap();
        assert!(c0.matrix().max_abs_diff(&(-*f.hot_hamiltonian().matrix())) < 1e-15);
        assert!(c1.matrix().max_abs_diff(&(-*f.cold_hamiltonian().matrix())) < 1e-15);
        for time in [0.01, 0.1, 0.2] {
            let sum = *hamiltonian_compression(time, t, &f).unwrap().matrix()
                + *hamiltonian_expansion(0.25 - time, t, &f).unwrap().matrix();
            assert_eq!(sum.max_abs(), 0.0);
        }
    }

    #[test]
    fn gibbs_population_values() {
        assert_eq!(gibbs_population(0.0), 0.5);
        assert!(gibbs_population(800.0) < 1e-300);
        assert!(gibbs_population(800.0) >= 0.0);
        assert!((gibbs_population(-800.0) - 1.0).abs() < 1e-15);
        assert!((gibbs_population(0.25f64.ln()) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn exponent_values() {
        let u = exponent_from_population(Population::new(0.5).unwrap());
        assert_eq!(u, 0.0);
        let r = ReservoirSpec::from_population(0.8).unwrap();
        assert!((r.exponent() - 0.25f64.ln()).abs() < 1e-15);
        assert_eq!(r.temperature_sign(), TemperatureSign::Negative);
        let r = ReservoirSpec::from_population(0.25).unwrap();
        assert!((r.exponent() - 3f64.ln()).abs() < 1e-15);
        assert_eq!(r.temperature_sign(), TemperatureSign::Positive);
        assert!(Population::new(0.0).is_err());
        assert!(Population::new(1.0).is_err());
        assert!(ReservoirSpec::from_exponent(f64::INFINITY).is_err());
    }

    #[test]
    fn gibbs_states() {
        let half = gibbs_state(Population::new(0.5).unwrap(), Axis::X);
        assert!(
            half.matrix()
                .max_abs_diff(&Matrix2::identity().scale_real(0.5))
                < 1e-15
        );

        let rho = gibbs_state(Population::new(0.8).unwrap(), Axis::Y);
        let e = eig_hermitian2(&rho.as_hermitian());
        assert!((e.values[0] - 0.2).abs() < 1e-14);
        assert!((e.values[1] - 0.8).abs() < 1e-14);
        let up = e.vector(1);
        let plus_y = Axis::Y.excited();
        assert!((up[0] - plus_y[0]).norm() < 1e-14 && (up[1] - plus_y[1]).norm() < 1e-14);

        let f = CycleFrequencies::reference();
        let rho = gibbs_state(Population::new(0.3).unwrap(), Axis::X);
        assert!((f.cold_hamiltonian().expectation(&rho) - 2.0 * 0.3).abs() < 1e-14);
    }

    #[test]
    fn frequency_validation() {
        assert!(CycleFrequencies::new(2.0, 3.6).is_ok());
        assert!(CycleFrequencies::new(0.0, 3.6).is_err());
        assert!(CycleFrequencies::new(3.6, 2.0).is_err());
        assert!(StrokeDuration::from_micros(0.0).is_err());
        assert_eq!(StrokeDuration::from_micros(250.0).unwrap().millis(), 0.25);
    }
}
