//! Energetics of a single cycle with an inverted hot reservoir.

use qotto::thermo::{cycle_energetics, CycleInputs};
use qotto::tls::{CycleFrequencies, Population, ReservoirSpec};

fn main() -> qotto::Result<()> {
    let freqs = CycleFrequencies::reference();
    let cold = ReservoirSpec::from_population(0.4)?;
    // Population inversion: the hot bath sits at negative temperature.
    let hot = ReservoirSpec::from_population(0.8)?;
    println!(
        "cold u = {:+.4} ({:?}), hot u = {:+.4} ({:?})",
        cold.exponent(),
        cold.temperature_sign(),
        hot.exponent(),
        hot.temperature_sign()
    );

    let inputs = CycleInputs::new(freqs, Population::new(0.4)?, Population::new(0.8)?, 0.25)?;
    let e = cycle_energetics(&inputs);
    println!("W_exp  = {:+.6}", e.w_exp);
    println!("W_comp = {:+.6}", e.w_comp);
    println!("Q_h    = {:+.6}", e.q_h);
    println!("Q_c    = {:+.6}", e.q_c);
    println!(
        "W_net  = {:+.6}  (W_ad {:+.6}, W_fric {:+.6})",
        e.w_net, e.w_ad, e.w_fric
    );
    println!("mode   = {}", e.mode);
    if let Some(eta) = e.eta {
        println!(
            "eta    = {eta:.6}  vs quasi-static {:.6}",
            freqs.adiabatic_efficiency()
        );
    }
    Ok(())
}
