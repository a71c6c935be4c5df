//! Efficiency against stroke duration for an inverted hot bath (p_h = 0.8).
//!
//! Inside the negative-friction window (p_c = 0.4) faster strokes are more
//! efficient; on its edge (p_c = 1/3) friction vanishes; outside (p_c = 0.25)
//! it costs work as usual.

use qotto::sweep::{run_tau_sweep, TauSweepSpec};
use qotto::tls::{CycleFrequencies, Population};

fn main() -> qotto::Result<()> {
    let freqs = CycleFrequencies::reference();
    println!(
        "quasi-static efficiency {:.4}",
        freqs.adiabatic_efficiency()
    );
    for p_c in [0.4, 1.0 / 3.0, 0.25] {
        let mut spec = TauSweepSpec::new(freqs, Population::new(p_c)?, Population::new(0.8)?);
        spec.points = 12;
        println!("\np_c = {p_c:.4}");
        println!(
            "{:>9}  {:>9}  {:>10}  {:>10}  {:>8}",
            "tau [us]", "xi", "W_net", "W_fric", "eta"
        );
        for r in run_tau_sweep(&spec)? {
            let e = r.energetics;
            let eta = e.eta.map_or("-".to_owned(), |x| format!("{x:.4}"));
            println!(
                "{:>9.1}  {:>9.5}  {:>+10.5}  {:>+10.5}  {:>8}",
                r.tau_us, r.xi, e.w_net, e.w_fric, eta
            );
        }
    }
    Ok(())
}
