//! Built-in self-consistency checks, run by `otto verify`.
//!
//! Each check pits two independent routes against each other (closed forms
//! against density-matrix traces, one propagator against its mirror
//! integration, and so on) on a fixed-seed random sample.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex2::{Matrix2, Unitary2, C64};
use crate::propagator::{
    evolve_compression, evolve_expansion, transition_probability, IntegratorConfig,
};
use crate::thermo::{
    cycle_energetics, energetics_from_states, friction_closed_form, friction_from_divergence,
    negative_friction_window, CycleInputs, DivergencePrefactor, Stroke,
};
use crate::tls::{CycleFrequencies, Population, StrokeDuration};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckOutcome {
            name,
            passed,
            detail,
        }
    }
}

/// Haar-random unitary conditioned on ξ ≤ 1/2, the range reachable by
/// the stroke protocol.
pub fn random_protocol_unitary<R: Rng + ?Sized>(rng: &mut R) -> (Unitary2, f64) {
    loop {
        let u = random_unitary(rng);
        let xi = transition_probability(&u).expect("unitary");
        if xi <= 0.5 {
            return (u, xi);
        }
    }
}

/// Haar-random element of U(2).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Unitary2 {
    let theta = rng.gen::<f64>().sqrt().asin();
    let alpha = rng.gen::<f64>() * TAU;
    let beta = rng.gen::<f64>() * TAU;
    let phi = rng.gen::<f64>() * TAU;
    let a = C64::from_polar(theta.cos(), alpha);
    let b = C64::from_polar(theta.sin(), beta);
    let m = Matrix2::new(a, -b.conj(), b, a.conj()).scale(C64::from_polar(1.0, phi));
    Unitary2::new(m).expect("SU(2) parametrization is unitary")
}

fn random_population<R: Rng + ?Sized>(rng: &mut R) -> Population {
    Population::new(rng.gen_range(1e-3..1.0 - 1e-3)).expect("inside (0, 1)")
}

const SAMPLES: usize = 500;
const SEED: u64 = 0x0770;

fn check_state_oracle() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let f = CycleFrequencies::reference();
    let mut worst = 0.0f64;
    for _ in 0..SAMPLES {
        let (u, xi) = random_protocol_unitary(&mut rng);
        let (p_c, p_h) = (random_population(&mut rng), random_population(&mut rng));
        let inputs = CycleInputs::new(f, p_c, p_h, xi).expect("valid inputs");
        let closed = cycle_energetics(&inputs);
        let traced = energetics_from_states(p_c, p_h, &u, &f).expect("valid states");
        for (a, b) in [
            (closed.w_exp, traced.w_exp),
            (closed.w_comp, traced.w_comp),
            (closed.q_c, traced.q_c),
            (closed.q_h, traced.q_h),
            (closed.w_fric, traced.w_fric),
        ] {
            worst = worst.max((a - b).abs());
        }
    }
    CheckOutcome::new(
        "closed-form energetics match trace energetics",
        worst <= 1e-10,
        format!("max deviation {worst:.3e} (tol 1e-10)"),
    )
}

fn check_closure() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let f = CycleFrequencies::reference();
    let mut worst = 0.0f64;
    for _ in 0..SAMPLES {
        let inputs = CycleInputs::new(
            f,
            random_population(&mut rng),
            random_population(&mut rng),
            rng.gen_range(0.0..=0.5),
        )
        .expect("valid inputs");
        let e = cycle_energetics(&inputs);
        worst = worst
            .max(e.first_law_residual().abs())
            .max((e.w_net - e.w_ad - e.w_fric).abs());
    }
    CheckOutcome::new(
        "first law and work decomposition",
        worst <= 1e-12,
        format!("max residual {worst:.3e} (tol 1e-12)"),
    )
}

fn check_divergence_route() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let f = CycleFrequencies::reference();
    let mut worst = 0.0f64;
    let mut min_divergence = f64::INFINITY;
    for _ in 0..SAMPLES {
        let u = random_unitary(&mut rng);
        let xi = transition_probability(&u).expect("unitary");
        let p = random_population(&mut rng);
        for stroke in [Stroke::Expansion, Stroke::Compression] {
            let term =
                friction_from_divergence(p, DivergencePrefactor::FinalFrequency, &u, stroke, &f)
                    .expect("valid inputs");
            if let Some(d) = term.divergence {
                min_divergence = min_divergence.min(d);
            }
            worst = worst.max((term.work - friction_closed_form(p, xi, stroke, &f)).abs());
        }
    }
    CheckOutcome::new(
        "entropy-production route reproduces friction work",
        worst <= 1e-10 && min_divergence >= -1e-12,
        format!("max deviation {worst:.3e} (tol 1e-10), min divergence {min_divergence:.3e}"),
    )
}

fn check_window() -> CheckOutcome {
    let w = negative_friction_window(0.8, &CycleFrequencies::reference()).expect("valid p_h");
    let err = (w.lower - 1.0 / 3.0).abs();
    CheckOutcome::new(
        "negative-friction window at p_h = 0.8",
        err <= 1e-12 && w.upper == 0.5,
        format!("p_c in ({}, {})", w.lower, w.upper),
    )
}

fn check_adiabatic_efficiency() -> CheckOutcome {
    let inputs = CycleInputs::from_values(2.0, 3.6, 0.4, 0.8, 0.0).expect("valid inputs");
    let eta = cycle_energetics(&inputs).eta.unwrap_or(f64::NAN);
    let err = (eta - (1.0 - 2.0 / 3.6)).abs();
    CheckOutcome::new(
        "quasi-static efficiency equals 1 - nu_c/nu_h",
        err <= 1e-12,
        format!("eta = {eta}"),
    )
}

fn check_xi_limits() -> CheckOutcome {
    let f = CycleFrequencies::reference();
    let cfg = IntegratorConfig::default();
    let tau = |us| StrokeDuration::from_micros(us).expect("positive");
    match (
        evolve_expansion(tau(0.1), &f, &cfg),
        evolve_expansion(tau(2000.0), &f, &cfg),
    ) {
        (Ok(fast), Ok(slow)) => CheckOutcome::new(
            "xi limits (sudden 1/2, adiabatic 0)",
            (0.499..=0.5).contains(&fast.xi) && slow.xi < 0.01,
            format!("xi(0.1 us) = {}, xi(2000 us) = {}", fast.xi, slow.xi),
        ),
        (a, b) => CheckOutcome::new(
            "xi limits (sudden 1/2, adiabatic 0)",
            false,
            format!("propagation failed: {:?} / {:?}", a.err(), b.err()),
        ),
    }
}

fn check_adjoint_identity() -> CheckOutcome {
    let f = CycleFrequencies::reference();
    let cfg = IntegratorConfig::default();
    let mut worst = 0.0f64;
    for us in [20.0, 150.0, 400.0, 900.0] {
        let tau = StrokeDuration::from_micros(us).expect("positive");
        match (
            evolve_expansion(tau, &f, &cfg),
            evolve_compression(tau, &f, &cfg),
        ) {
            (Ok(u), Ok(v)) => {
                worst = worst.max(
                    v.unitary
                        .matrix()
                        .max_abs_diff(u.unitary.adjoint().matrix()),
                );
            }
            _ => worst = f64::INFINITY,
        }
    }
    CheckOutcome::new(
        "compression propagator is the adjoint of expansion",
        worst <= 1e-9,
        format!("max deviation {worst:.3e} (tol 1e-9)"),
    )
}

fn check_sign_theorem() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let f = CycleFrequencies::reference();
    let w = negative_friction_window(0.8, &f).expect("valid p_h");
    let p_h = Population::new(0.8).expect("inside (0, 1)");
    let mut mismatches = 0;
    for _ in 0..SAMPLES {
        let p_c = rng.gen_range(1e-3..0.5);
        let xi = rng.gen_range(1e-6..=0.5);
        let e = cycle_energetics(
            &CycleInputs::new(f, Population::new(p_c).expect("inside"), p_h, xi).expect("valid"),
        );
        if (e.w_fric < 0.0) != w.contains(p_c) {
            mismatches += 1;
        }
    }
    CheckOutcome::new(
        "friction negative exactly inside the window",
        mismatches == 0,
        format!("{mismatches} mismatches in {SAMPLES} samples"),
    )
}

/// Runs every check.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        check_adiabatic_efficiency(),
        check_window(),
        check_closure(),
        check_state_oracle(),
        check_divergence_route(),
        check_sign_theorem(),
        check_xi_limits(),
        check_adjoint_identity(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert!(random_unitary(&mut rng).defect() < 1e-14);
        }
    }

    #[test]
    fn all_checks_pass() {
        for c in run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
