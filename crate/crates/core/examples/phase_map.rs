//! Sign of the friction work over (p_h, p_c), drawn as a character map.
//!
//! `-` marks negative friction, `+` positive, `0` cells on the zero line.

use qotto::sweep::{run_phase_map, Grid, PhaseMapSpec};
use qotto::tls::CycleFrequencies;

fn main() -> qotto::Result<()> {
    let mut spec = PhaseMapSpec::new(CycleFrequencies::reference());
    spec.p_h = Grid::cell_centers(0.0, 1.0, 60)?;
    spec.p_c = Grid::cell_centers(0.0, 0.5, 20)?;
    let map = run_phase_map(&spec)?;
    let n_c = spec.p_c.values().len();

    println!(
        "xi = {}; rows p_c from 0.5 down to 0, columns p_h from 0 to 1",
        map.xi
    );
    for j in (0..n_c).rev() {
        let row: String = map
            .cells
            .iter()
            .skip(j)
            .step_by(n_c)
            .map(|c| match (c.on_zero_line, c.w_fric < 0.0) {
                (true, _) => '0',
                (false, true) => '-',
                (false, false) => '+',
            })
            .collect();
        println!("{:.3} {row}", spec.p_c.values()[j]);
    }
    let worst = map
        .cells
        .iter()
        .min_by(|a, b| a.w_fric.total_cmp(&b.w_fric))
        .unwrap();
    println!(
        "most negative: W_fric = {:.4} at p_h = {:.3}, p_c = {:.3}",
        worst.w_fric, worst.p_h, worst.p_c
    );
    Ok(())
}
