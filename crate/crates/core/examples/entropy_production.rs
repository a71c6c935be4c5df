//! Friction work as effective temperature times entropy production, per
//! stroke, compared with the closed form.

use qotto::propagator::{evolve_expansion, IntegratorConfig};
use qotto::thermo::{friction_closed_form, friction_from_divergence, DivergencePrefactor, Stroke};
use qotto::tls::{CycleFrequencies, Population, StrokeDuration};

fn main() -> qotto::Result<()> {
    let freqs = CycleFrequencies::reference();
    let r = evolve_expansion(
        StrokeDuration::from_micros(150.0)?,
        &freqs,
        &IntegratorConfig::default(),
    )?;
    println!("tau = 150 us, xi = {:.9}", r.xi);
    println!(
        "{:>11}  {:>5}  {:>11}  {:>11}  {:>11}",
        "stroke", "p", "D", "W (D)", "W (closed)"
    );
    for (stroke, p) in [
        (Stroke::Expansion, 0.4),
        (Stroke::Expansion, 0.1),
        (Stroke::Compression, 0.8),
        (Stroke::Compression, 0.3),
    ] {
        let p = Population::new(p)?;
        let t = friction_from_divergence(
            p,
            DivergencePrefactor::FinalFrequency,
            &r.unitary,
            stroke,
            &freqs,
        )?;
        println!(
            "{:>11}  {:>5.2}  {:>11.3e}  {:>+11.6}  {:>+11.6}",
            format!("{stroke:?}"),
            p.get(),
            t.divergence.unwrap_or(f64::NAN),
            t.work,
            friction_closed_form(p, r.xi, stroke, &freqs)
        );
    }
    // An inverted initial state has a negative exponent, so positive
    // entropy production yields negative friction work.
    Ok(())
}
