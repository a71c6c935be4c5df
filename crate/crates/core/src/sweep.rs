//! Parameter sweeps: cycle energetics versus stroke duration, and the
//! friction-work map over reservoir populations.
//!
//! Every grid point is independent. Points may be evaluated on a worker pool
//! but results always come back in grid order, and the value at each point
//! does not depend on how the work was scheduled.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::pool::map_indexed;
use crate::propagator::{evolve_expansion, xi_sweep, IntegratorConfig};
use crate::thermo::{
    cycle_energetics, friction_sign_factor, negative_friction_window, CycleEnergetics, CycleInputs,
    Mode,
};
use crate::tls::{CycleFrequencies, Population, StrokeDuration};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

/// `points` values from `min` to `max` inclusive, endpoints exact.
pub fn spaced(min: f64, max: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let last = points - 1;
    (0..points)
        .map(|i| {
            if i == 0 {
                min
            } else if i == last {
                max
            } else {
                let s = i as f64 / last as f64;
                match spacing {
                    Spacing::Log => min * (max / min).powf(s),
                    Spacing::Linear => min + (max - min) * s,
                }
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TauSweepSpec {
    pub freqs: CycleFrequencies,
    pub p_c: Population,
    pub p_h: Population,
    pub tau_min_us: f64,
    pub tau_max_us: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub integrator: IntegratorConfig,
    /// Worker threads; `None` uses every available core.
    pub threads: Option<usize>,
}

impl TauSweepSpec {
    /// 10–1000 μs, 100 log-spaced points, default integrator.
    pub fn new(freqs: CycleFrequencies, p_c: Population, p_h: Population) -> Self {
        TauSweepSpec {
            freqs,
            p_c,
            p_h,
            tau_min_us: 10.0,
            tau_max_us: 1000.0,
            points: 100,
            spacing: Spacing::Log,
            integrator: IntegratorConfig::default(),
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_min_us.is_finite() && self.tau_min_us > 0.0) {
            return Err(Error::domain(
                "tau_min",
                self.tau_min_us,
                "must be positive",
            ));
        }
        if !(self.tau_max_us.is_finite() && self.tau_max_us > self.tau_min_us) {
            return Err(Error::domain(
                "tau_max",
                self.tau_max_us,
                "must exceed tau_min",
            ));
        }
        if self.points < 2 {
            return Err(Error::domain(
                "points",
                self.points as f64,
                "must be at least 2",
            ));
        }
        if self.p_c.get() >= 0.5 {
            return Err(Error::domain(
                "p_c",
                self.p_c.get(),
                "cold reservoir must be at positive temperature (p_c < 1/2)",
            ));
        }
        self.integrator.validate()
    }

    pub fn taus(&self) -> Result<Vec<StrokeDuration>> {
        spaced(self.tau_min_us, self.tau_max_us, self.points, self.spacing)
            .into_iter()
            .map(StrokeDuration::from_micros)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauRow {
    pub tau_us: f64,
    pub xi: f64,
    pub xi_error: f64,
    /// False when the propagator ran out of refinements at this τ.
    pub converged: bool,
    pub energetics: CycleEnergetics,
}

/// Propagates each stroke duration, extracts ξ and evaluates the cycle.
pub fn run_tau_sweep(spec: &TauSweepSpec) -> Result<Vec<TauRow>> {
    spec.validate()?;
    let taus = spec.taus()?;
    let points = xi_sweep(&taus, &spec.freqs, &spec.integrator, spec.threads)?;
    points
        .into_iter()
        .map(|pt| {
            // Round-off can push ξ a hair outside [0, 1/2].
            let xi = pt.xi.clamp(0.0, 0.5);
            let inputs = CycleInputs::new(spec.freqs, spec.p_c, spec.p_h, xi)?;
            Ok(TauRow {
                tau_us: pt.tau.micros(),
                xi: pt.xi,
                xi_error: pt.error_estimate,
                converged: pt.converged,
                energetics: cycle_energetics(&inputs),
            })
        })
        .collect()
}

/// A strictly increasing list of sample values.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(Vec<f64>);

impl Grid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::domain(
                "grid size",
                values.len() as f64,
                "must be at least 2",
            ));
        }
        if let Some(w) = values
            .windows(2)
            .find(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater))
        {
            return Err(Error::domain(
                "grid",
                w[1],
                "values must be strictly increasing",
            ));
        }
        Ok(Grid(values))
    }

    /// `n` equally spaced points from `lo` to `hi` inclusive.
    pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Grid::new(spaced(lo, hi, n, Spacing::Linear))
    }

    /// Centers of `n` equal cells spanning `[lo, hi]`, so no point touches either end.
    pub fn cell_centers(lo: f64, hi: f64, n: usize) -> Result<Self> {
        let w = (hi - lo) / n as f64;
        Grid::new((0..n).map(|i| lo + (i as f64 + 0.5) * w).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn max_spacing(&self) -> f64 {
        self.0.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    fn check_range(&self, name: &'static str, lo: f64, hi: f64) -> Result<()> {
        let first = self.0[0];
        let last = *self.0.last().expect("grid has at least two points");
        if first.partial_cmp(&lo) != Some(Ordering::Greater) {
            return Err(Error::domain(name, first, "below the allowed range"));
        }
        if last.partial_cmp(&hi) != Some(Ordering::Less) {
            return Err(Error::domain(name, last, "above the allowed range"));
        }
        Ok(())
    }
}

/// Where the phase map's ξ comes from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum XiSource {
    Fixed(f64),
    /// Propagate once at this stroke duration; ξ does not depend on populations.
    Tau {
        tau: StrokeDuration,
        integrator: IntegratorConfig,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseMapSpec {
    pub freqs: CycleFrequencies,
    pub xi: XiSource,
    /// Hot populations inside (0, 1).
    pub p_h: Grid,
    /// Cold populations inside (0, 1/2).
    pub p_c: Grid,
    pub threads: Option<usize>,
}

impl PhaseMapSpec {
    /// ξ = 0.25, 100 hot cells over (0, 1), 50 cold cells over (0, 1/2).
    pub fn new(freqs: CycleFrequencies) -> Self {
        PhaseMapSpec {
            freqs,
            xi: XiSource::Fixed(0.25),
            p_h: Grid::cell_centers(0.0, 1.0, 100).expect("valid default grid"),
            p_c: Grid::cell_centers(0.0, 0.5, 50).expect("valid default grid"),
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.p_h.check_range("p_h", 0.0, 1.0)?;
        self.p_c.check_range("p_c", 0.0, 0.5)?;
        if let XiSource::Fixed(xi) = self.xi {
            if !(xi.is_finite() && (0.0..=0.5).contains(&xi)) {
                return Err(Error::domain("xi", xi, "must lie inside [0, 1/2]"));
            }
        }
        Ok(())
    }

    /// Half a grid cell in each direction, expressed in the units of
    /// `ν_h(1−2p_c) + ν_c(1−2p_h)`.
    pub fn zero_line_tolerance(&self) -> f64 {
        self.freqs.nu_h() * self.p_c.max_spacing() + self.freqs.nu_c() * self.p_h.max_spacing()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseCell {
    pub p_h: f64,
    pub p_c: f64,
    pub w_fric: f64,
    pub mode: Mode,
    pub on_zero_line: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseMap {
    pub xi: f64,
    /// Row-major: `p_h` outer, `p_c` inner.
    pub cells: Vec<PhaseCell>,
    /// Analytic `W_fric = 0` line `(p_h, p_c)` for each `p_h` in the grid
    /// where it falls inside (0, 1/2).
    pub zero_line: Vec<(f64, f64)>,
}

/// Evaluates the friction work over the `(p_h, p_c)` grid.
pub fn run_phase_map(spec: &PhaseMapSpec) -> Result<PhaseMap> {
    spec.validate()?;
    let xi = match spec.xi {
        XiSource::Fixed(xi) => xi,
        XiSource::Tau { tau, integrator } => evolve_expansion(tau, &spec.freqs, &integrator)?
            .xi
            .clamp(0.0, 0.5),
    };
    let tol = spec.zero_line_tolerance();
    let hot = spec.p_h.values();
    let cold = spec.p_c.values();
    let n_c = cold.len();

    let cells = map_indexed(spec.threads, hot.len() * n_c, |idx| {
        let (p_h, p_c) = (hot[idx / n_c], cold[idx % n_c]);
        let inputs =
            CycleInputs::new(spec.freqs, Population::new(p_c)?, Population::new(p_h)?, xi)?;
        let e = cycle_energetics(&inputs);
        Ok(PhaseCell {
            p_h,
            p_c,
            w_fric: e.w_fric,
            mode: e.mode,
            on_zero_line: friction_sign_factor(p_c, p_h, &spec.freqs).abs() < tol,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut zero_line = Vec::new();
    for &p_h in hot {
        let w = negative_friction_window(p_h, &spec.freqs)?;
        if w.lower > 0.0 && w.lower < 0.5 {
            zero_line.push((p_h, w.lower));
        }
    }

    Ok(PhaseMap {
        xi,
        cells,
        zero_line,
    })
}
