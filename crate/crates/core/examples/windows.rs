//! Reservoir populations for which friction does net negative work.

use qotto::thermo::{
    efficiency_exceeds_adiabatic, negative_friction_window, negative_friction_window_hot,
};
use qotto::tls::{CycleFrequencies, Population};

fn main() -> qotto::Result<()> {
    let freqs = CycleFrequencies::reference();
    for p_h in [0.3, 0.6, 0.8, 0.95, 1.0] {
        let w = negative_friction_window(p_h, &freqs)?;
        if w.is_empty() {
            println!("p_h = {p_h:.2}: no cold window");
        } else {
            println!("p_h = {p_h:.2}: p_c in ({:.4}, {:.4})", w.lower, w.upper);
        }
    }
    for p_c in [0.1, 0.25, 0.4] {
        let w = negative_friction_window_hot(p_c, &freqs)?;
        if w.is_empty() {
            println!("p_c = {p_c:.2}: no hot window");
            continue;
        }
        let close = if w.upper_inclusive { ']' } else { ')' };
        println!(
            "p_c = {p_c:.2}: p_h in ({:.4}, {:.4}{close}",
            w.lower, w.upper
        );
    }
    let (p_c, p_h) = (Population::new(0.4)?, Population::new(0.8)?);
    println!(
        "p_c = 0.4, p_h = 0.8 beats the quasi-static efficiency: {}",
        efficiency_exceeds_adiabatic(p_c, p_h)
    );
    Ok(())
}
