//! Transition probability ξ(τ) across the sudden-to-adiabatic crossover.

use qotto::propagator::{xi_sweep, IntegratorConfig};
use qotto::sweep::{spaced, Spacing};
use qotto::tls::{CycleFrequencies, StrokeDuration};

fn main() -> qotto::Result<()> {
    let freqs = CycleFrequencies::reference();
    let taus = spaced(1.0, 2000.0, 25, Spacing::Log)
        .into_iter()
        .map(StrokeDuration::from_micros)
        .collect::<qotto::Result<Vec<_>>>()?;
    let points = xi_sweep(&taus, &freqs, &IntegratorConfig::default(), None)?;

    println!(
        "{:>10}  {:>12}  {:>9}  {:>7}",
        "tau [us]", "xi", "error", "steps"
    );
    for p in points {
        println!(
            "{:>10.2}  {:>12.9}  {:>9.1e}  {:>7}",
            p.tau.micros(),
            p.xi,
            p.error_estimate,
            p.steps_used
        );
    }
    Ok(())
}
