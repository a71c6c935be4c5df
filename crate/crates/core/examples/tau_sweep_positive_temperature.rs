//! Ordinary reservoirs (p_c = 0.2, p_h = 0.4): fast strokes stop the engine.

use qotto::sweep::{run_tau_sweep, TauSweepSpec};
use qotto::tls::{CycleFrequencies, Population};

fn main() -> qotto::Result<()> {
    let freqs = CycleFrequencies::reference();
    let mut spec = TauSweepSpec::new(freqs, Population::new(0.2)?, Population::new(0.4)?);
    spec.points = 20;
    println!(
        "{:>9}  {:>9}  {:>10}  {:>10}  {:>8}  mode",
        "tau [us]", "xi", "W_net", "Q_h", "eta"
    );
    for r in run_tau_sweep(&spec)? {
        let e = r.energetics;
        let eta = e.eta.map_or("-".to_owned(), |x| format!("{x:.4}"));
        println!(
            "{:>9.1}  {:>9.5}  {:>+10.5}  {:>+10.5}  {:>8}  {}",
            r.tau_us, r.xi, e.w_net, e.q_h, eta, e.mode
        );
    }
    Ok(())
}
