//! The `otto` command line.
//!
//! Every subcommand writes CSV: two `#` metadata lines (units, then the
//! invocation parameters), a header row, then data rows. Numbers carry 12
//! significant digits and the output is byte-identical for identical inputs.
//!
//! Exit codes: 0 success, 1 verification failure or propagator
//! non-convergence, 2 argument or validation error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::propagator::{evolve_expansion, xi_sweep, IntegratorConfig};
use crate::sweep::{
    run_phase_map, run_tau_sweep, spaced, Grid, PhaseMapSpec, Spacing, TauSweepSpec, XiSource,
};
use crate::thermo::{
    cycle_energetics, negative_friction_window, negative_friction_window_hot, CycleInputs, Window,
};
use crate::tls::{CycleFrequencies, ReservoirSpec, StrokeDuration};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const UNITS_LINE: &str = "# energy unit: h*kHz; time unit: us";

#[derive(Debug, Parser)]
#[command(
    name = "otto",
    version,
    about = "Finite-time quantum Otto cycle of a two-level system"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transition probability xi versus stroke duration tau.
    Xi(XiArgs),
    /// Work, heat, friction and efficiency for a single operating point.
    Cycle(CycleArgs),
    /// Cycle energetics versus stroke duration tau.
    TauSweep(TauSweepArgs),
    /// Friction work over a grid of hot and cold populations.
    PhaseMap(PhaseMapArgs),
    /// Population intervals that make friction work negative.
    Windows(WindowsArgs),
    /// Run the built-in consistency checks.
    Verify,
}

#[derive(Debug, Args)]
pub struct FreqArgs {
    /// Cold frequency nu_c in kHz; H_c = h nu_c |+x><+x|.
    #[arg(long = "nu-c", default_value_t = 2.0)]
    pub nu_c: f64,
    /// Hot frequency nu_h in kHz (> nu_c); H_h = h nu_h |+y><+y|.
    #[arg(long = "nu-h", default_value_t = 3.6)]
    pub nu_h: f64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ColdReservoir {
    /// Cold excited-state population p_c = 1/(e^{u_c} + 1).
    #[arg(long = "pc", allow_negative_numbers = true)]
    pub pc: Option<f64>,
    /// Cold exponent u_c = beta_c h nu_c (negative means negative temperature).
    #[arg(long = "uc", allow_negative_numbers = true)]
    pub uc: Option<f64>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct HotReservoir {
    /// Hot excited-state population p_h = 1/(e^{u_h} + 1); p_h > 1/2 is a negative temperature.
    #[arg(long = "ph", allow_negative_numbers = true)]
    pub ph: Option<f64>,
    /// Hot exponent u_h = beta_h h nu_h.
    #[arg(long = "uh", allow_negative_numbers = true)]
    pub uh: Option<f64>,
}

#[derive(Debug, Args)]
pub struct IntegratorArgs {
    /// Step-doubling tolerance on xi.
    #[arg(long = "tol", default_value_t = 1e-9)]
    pub tol: f64,
    /// Initial step count (default max(64, ceil(40 nu_h tau))).
    #[arg(long = "steps")]
    pub steps: Option<usize>,
    /// Maximum number of step doublings.
    #[arg(long = "max-doublings", default_value_t = 20)]
    pub max_doublings: u32,
}

impl IntegratorArgs {
    fn config(&self) -> IntegratorConfig {
        IntegratorConfig {
            initial_steps: self.steps,
            xi_tolerance: self.tol,
            max_doublings: self.max_doublings,
        }
    }
}

#[derive(Debug, Args)]
pub struct TauRangeArgs {
    /// Shortest stroke duration in microseconds.
    #[arg(long = "tau-min", default_value_t = 10.0)]
    pub tau_min: f64,
    /// Longest stroke duration in microseconds.
    #[arg(long = "tau-max", default_value_t = 1000.0)]
    pub tau_max: f64,
    /// Number of tau values.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Space tau values linearly instead of logarithmically.
    #[arg(long)]
    pub linear: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write CSV here instead of standard output.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Worker threads for sweeps (default: all available cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct XiArgs {
    #[command(flatten)]
    pub freqs: FreqArgs,
    #[command(flatten)]
    pub range: TauRangeArgs,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[group(id = "xi_source", required = true, multiple = false)]
pub struct XiOrTau {
    /// Transition probability xi in [0, 1/2], used directly.
    #[arg(long)]
    pub xi: Option<f64>,
    /// Stroke duration in microseconds; xi is obtained by propagation.
    #[arg(long)]
    pub tau: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    #[command(flatten)]
    pub freqs: FreqArgs,
    #[command(flatten)]
    pub cold: ColdReservoir,
    #[command(flatten)]
    pub hot: HotReservoir,
    #[command(flatten)]
    pub source: XiOrTau,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TauSweepArgs {
    #[command(flatten)]
    pub freqs: FreqArgs,
    #[command(flatten)]
    pub cold: ColdReservoir,
    #[command(flatten)]
    pub hot: HotReservoir,
    #[command(flatten)]
    pub range: TauRangeArgs,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PhaseMapArgs {
    #[command(flatten)]
    pub freqs: FreqArgs,
    /// Transition probability xi (friction work is proportional to it).
    #[arg(long, conflicts_with = "tau")]
    pub xi: Option<f64>,
    /// Stroke duration in microseconds; xi is propagated once.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Number of p_h cells over (0, 1).
    #[arg(long = "ph-points", default_value_t = 100)]
    pub ph_points: usize,
    /// Number of p_c cells over (0, 1/2).
    #[arg(long = "pc-points", default_value_t = 50)]
    pub pc_points: usize,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WindowsArgs {
    #[command(flatten)]
    pub freqs: FreqArgs,
    /// Hot population; prints the p_c interval with negative friction.
    #[arg(long = "ph", required_unless_present = "pc")]
    pub ph: Option<f64>,
    /// Cold population; prints the p_h interval with negative friction.
    #[arg(long = "pc")]
    pub pc: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Formats with 12 significant digits, then prints the shortest decimal
/// that round-trips that rounded value.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("valid float literal");
    let a = rounded.abs();
    if a == 0.0 {
        "0".to_string()
    } else if (1e-4..1e6).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn reservoir(
    name_p: &'static str,
    name_u: &'static str,
    p: Option<f64>,
    u: Option<f64>,
) -> Result<ReservoirSpec> {
    match (p, u) {
        (Some(p), None) => ReservoirSpec::from_population(p)
            .map_err(|_| Error::domain(name_p, p, "must lie strictly inside (0, 1)")),
        (None, Some(u)) => ReservoirSpec::from_exponent(u)
            .map_err(|_| Error::domain(name_u, u, "must be finite and moderate")),
        _ => unreachable!("clap enforces exactly one of population/exponent"),
    }
}

fn freqs(args: &FreqArgs) -> Result<CycleFrequencies> {
    CycleFrequencies::new(args.nu_c, args.nu_h)
}

fn tau_range(args: &TauRangeArgs) -> Result<Vec<StrokeDuration>> {
    if !(args.tau_min.is_finite() && args.tau_min > 0.0) {
        return Err(Error::domain("tau-min", args.tau_min, "must be positive"));
    }
    if !(args.tau_max.is_finite() && args.tau_max > args.tau_min) {
        return Err(Error::domain(
            "tau-max",
            args.tau_max,
            "must exceed tau-min",
        ));
    }
    if args.points < 2 {
        return Err(Error::domain(
            "points",
            args.points as f64,
            "must be at least 2",
        ));
    }
    spaced(args.tau_min, args.tau_max, args.points, spacing(args))
        .into_iter()
        .map(StrokeDuration::from_micros)
        .collect()
}

fn spacing(args: &TauRangeArgs) -> Spacing {
    if args.linear {
        Spacing::Linear
    } else {
        Spacing::Log
    }
}

fn validate_integrator(cfg: &IntegratorConfig) -> Result<()> {
    cfg.validate().map_err(|e| match e {
        Error::Domain { value, reason, .. } if reason.contains("(0, 1e-2)") => {
            Error::domain("tol", value, reason)
        }
        Error::Domain { value, reason, .. } => Error::domain("steps", value, reason),
        other => other,
    })
}

/// Outcome of a subcommand once arguments have been validated.
enum Status {
    Ok,
    /// Output was written but something must be reported through the exit code.
    Failed(String),
}

/// Parses `argv` (including the program name) and runs the subcommand,
/// writing CSV to `out` (unless `--output` is given) and diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::Failed(msg)) => {
            let _ = writeln!(err, "otto: {msg}");
            EXIT_FAILURE
        }
        Err(CliError::Usage(e)) => {
            let _ = writeln!(err, "otto: {e}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(e)) => {
            let _ = writeln!(err, "otto: {e}");
            EXIT_FAILURE
        }
    }
}

/// Runs with the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    run_with(argv, &mut out, &mut err)
}

enum CliError {
    Usage(Error),
    Runtime(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e)
}

fn with_sink(
    target: &Option<PathBuf>,
    out: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> std::result::Result<(), CliError> {
    match target {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            body(out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> std::result::Result<Status, CliError> {
    match cmd {
        Command::Xi(a) => cmd_xi(a, out),
        Command::Cycle(a) => cmd_cycle(a, out),
        Command::TauSweep(a) => cmd_tau_sweep(a, out),
        Command::PhaseMap(a) => cmd_phase_map(a, out),
        Command::Windows(a) => cmd_windows(a, out),
        Command::Verify => cmd_verify(out),
    }
}

fn unconverged_status(count: usize) -> Status {
    if count == 0 {
        Status::Ok
    } else {
        Status::Failed(format!(
            "{count} point(s) did not converge; rows flagged with converged=false"
        ))
    }
}

fn cmd_xi(a: &XiArgs, out: &mut dyn Write) -> std::result::Result<Status, CliError> {
    let f = freqs(&a.freqs).map_err(usage)?;
    let taus = tau_range(&a.range).map_err(usage)?;
    let cfg = a.integrator.config();
    validate_integrator(&cfg).map_err(usage)?;

    let points =
        xi_sweep(&taus, &f, &cfg, a.out.threads).map_err(|e| CliError::Runtime(e.to_string()))?;
    let failed = points.iter().filter(|p| !p.converged).count();
    with_sink(&a.out.output, out, |w| {
        writeln!(w, "{UNITS_LINE}")?;
        writeln!(
            w,
            "# otto xi nu_c={} nu_h={} tol={}",
            fmt_num(f.nu_c()),
            fmt_num(f.nu_h()),
            fmt_num(cfg.xi_tolerance)
        )?;
        writeln!(w, "tau_us,xi,xi_error,steps,converged")?;
        for p in &points {
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_num(p.tau.micros()),
                fmt_num(p.xi),
                fmt_num(p.error_estimate),
                p.steps_used,
                p.converged
            )?;
        }
        Ok(())
    })?;
    Ok(unconverged_status(failed))
}

fn cmd_cycle(a: &CycleArgs, out: &mut dyn Write) -> std::result::Result<Status, CliError> {
    let f = freqs(&a.freqs).map_err(usage)?;
    let cold = reservoir("pc", "uc", a.cold.pc, a.cold.uc).map_err(usage)?;
    let hot = reservoir("ph", "uh", a.hot.ph, a.hot.uh).map_err(usage)?;
    let cfg = a.integrator.config();
    let (xi, tau_us) = match (a.source.xi, a.source.tau) {
        (Some(xi), None) => {
            if !(xi.is_finite() && (0.0..=0.5).contains(&xi)) {
                return Err(usage(Error::domain("xi", xi, "must lie inside [0, 1/2]")));
            }
            (xi, None)
        }
        (None, Some(tau_us)) => {
            let tau = StrokeDuration::from_micros(tau_us)
                .map_err(|_| usage(Error::domain("tau", tau_us, "must be positive")))?;
            validate_integrator(&cfg).map_err(usage)?;
            let r =
                evolve_expansion(tau, &f, &cfg).map_err(|e| CliError::Runtime(e.to_string()))?;
            (r.xi.clamp(0.0, 0.5), Some(tau_us))
        }
        _ => unreachable!("clap enforces exactly one of xi/tau"),
    };
    let inputs = CycleInputs::new(f, cold.population(), hot.population(), xi).map_err(usage)?;
    let e = cycle_energetics(&inputs);

    with_sink(&a.out.output, out, |w| {
        writeln!(w, "{UNITS_LINE}")?;
        writeln!(
            w,
            "# otto cycle nu_c={} nu_h={}{}",
            fmt_num(f.nu_c()),
            fmt_num(f.nu_h()),
            tau_us
                .map(|t| format!(" tau_us={}", fmt_num(t)))
                .unwrap_or_default()
        )?;
        writeln!(
            w,
            "p_c,p_h,u_c,u_h,xi,w_exp,w_comp,q_c,q_h,w_net,w_ad,w_fric,eta,eta_ad,mode"
        )?;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_num(cold.population().get()),
            fmt_num(hot.population().get()),
            fmt_num(cold.exponent()),
            fmt_num(hot.exponent()),
            fmt_num(xi),
            fmt_num(e.w_exp),
            fmt_num(e.w_comp),
            fmt_num(e.q_c),
            fmt_num(e.q_h),
            fmt_num(e.w_net),
            fmt_num(e.w_ad),
            fmt_num(e.w_fric),
            fmt_opt(e.eta),
            fmt_num(f.adiabatic_efficiency()),
            e.mode
        )
    })?;
    Ok(Status::Ok)
}

fn cmd_tau_sweep(a: &TauSweepArgs, out: &mut dyn Write) -> std::result::Result<Status, CliError> {
    let f = freqs(&a.freqs).map_err(usage)?;
    let cold = reservoir("pc", "uc", a.cold.pc, a.cold.uc).map_err(usage)?;
    let hot = reservoir("ph", "uh", a.hot.ph, a.hot.uh).map_err(usage)?;
    tau_range(&a.range).map_err(usage)?;
    let cfg = a.integrator.config();
    validate_integrator(&cfg).map_err(usage)?;

    let spec = TauSweepSpec {
        freqs: f,
        p_c: cold.population(),
        p_h: hot.population(),
        tau_min_us: a.range.tau_min,
        tau_max_us: a.range.tau_max,
        points: a.range.points,
        spacing: spacing(&a.range),
        integrator: cfg,
        threads: a.out.threads,
    };
    spec.validate().map_err(|e| match e {
        Error::Domain {
            name: "p_c",
            value,
            reason,
        } => usage(Error::domain("pc", value, reason)),
        other => usage(other),
    })?;
    let rows = run_tau_sweep(&spec).map_err(|e| CliError::Runtime(e.to_string()))?;
    let failed = rows.iter().filter(|r| !r.converged).count();

    with_sink(&a.out.output, out, |w| {
        writeln!(w, "{UNITS_LINE}")?;
        writeln!(
            w,
            "# otto tau-sweep nu_c={} nu_h={} p_c={} p_h={} eta_ad={}",
            fmt_num(f.nu_c()),
            fmt_num(f.nu_h()),
            fmt_num(spec.p_c.get()),
            fmt_num(spec.p_h.get()),
            fmt_num(f.adiabatic_efficiency())
        )?;
        writeln!(
            w,
            "tau_us,xi,xi_error,converged,w_net,w_ad,w_fric,q_h,q_c,w_exp,w_comp,eta,mode"
        )?;
        for r in &rows {
            let e = &r.energetics;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                fmt_num(r.tau_us),
                fmt_num(r.xi),
                fmt_num(r.xi_error),
                r.converged,
                fmt_num(e.w_net),
                fmt_num(e.w_ad),
                fmt_num(e.w_fric),
                fmt_num(e.q_h),
                fmt_num(e.q_c),
                fmt_num(e.w_exp),
                fmt_num(e.w_comp),
                fmt_opt(e.eta),
                e.mode
            )?;
        }
        Ok(())
    })?;
    Ok(unconverged_status(failed))
}

fn cmd_phase_map(a: &PhaseMapArgs, out: &mut dyn Write) -> std::result::Result<Status, CliError> {
    let f = freqs(&a.freqs).map_err(usage)?;
    let xi = match (a.xi, a.tau) {
        (Some(xi), _) => XiSource::Fixed(xi),
        (None, Some(tau_us)) => {
            let cfg = a.integrator.config();
            validate_integrator(&cfg).map_err(usage)?;
            XiSource::Tau {
                tau: StrokeDuration::from_micros(tau_us)
                    .map_err(|_| usage(Error::domain("tau", tau_us, "must be positive")))?,
                integrator: cfg,
            }
        }
        (None, None) => XiSource::Fixed(0.25),
    };
    let grid_err =
        |name: &'static str, n: usize| usage(Error::domain(name, n as f64, "must be at least 2"));
    let spec = PhaseMapSpec {
        freqs: f,
        xi,
        p_h: Grid::cell_centers(0.0, 1.0, a.ph_points)
            .map_err(|_| grid_err("ph-points", a.ph_points))?,
        p_c: Grid::cell_centers(0.0, 0.5, a.pc_points)
            .map_err(|_| grid_err("pc-points", a.pc_points))?,
        threads: a.out.threads,
    };
    spec.validate().map_err(usage)?;
    let map = run_phase_map(&spec).map_err(|e| CliError::Runtime(e.to_string()))?;

    with_sink(&a.out.output, out, |w| {
        writeln!(w, "{UNITS_LINE}")?;
        writeln!(
            w,
            "# otto phase-map nu_c={} nu_h={} xi={} zero_line_tol={}",
            fmt_num(f.nu_c()),
            fmt_num(f.nu_h()),
            fmt_num(map.xi),
            fmt_num(spec.zero_line_tolerance())
        )?;
        writeln!(w, "series,p_h,p_c,w_fric,mode,on_zero_line")?;
        for c in &map.cells {
            writeln!(
                w,
                "cell,{},{},{},{},{}",
                fmt_num(c.p_h),
                fmt_num(c.p_c),
                fmt_num(c.w_fric),
                c.mode,
                c.on_zero_line
            )?;
        }
        for &(p_h, p_c) in &map.zero_line {
            writeln!(w, "zero_line,{},{},0,,true", fmt_num(p_h), fmt_num(p_c))?;
        }
        Ok(())
    })?;
    Ok(Status::Ok)
}

fn window_row(w: &mut dyn Write, solve_for: &str, given: f64, win: &Window) -> io::Result<()> {
    writeln!(
        w,
        "{solve_for},{},{},{},{},{}",
        fmt_num(given),
        fmt_num(win.lower),
        fmt_num(win.upper),
        win.upper_inclusive,
        win.is_empty()
    )
}

fn cmd_windows(a: &WindowsArgs, out: &mut dyn Write) -> std::result::Result<Status, CliError> {
    let f = freqs(&a.freqs).map_err(usage)?;
    let cold_window =
        a.ph.map(|p_h| {
            negative_friction_window(p_h, &f)
                .map_err(|_| Error::domain("ph", p_h, "must lie inside (0, 1]"))
        })
        .transpose()
        .map_err(usage)?;
    let hot_window =
        a.pc.map(|p_c| {
            negative_friction_window_hot(p_c, &f)
                .map_err(|_| Error::domain("pc", p_c, "must lie inside (0, 1/2)"))
        })
        .transpose()
        .map_err(usage)?;

    with_sink(&a.out.output, out, |w| {
        writeln!(w, "{UNITS_LINE}")?;
        writeln!(
            w,
            "# otto windows nu_c={} nu_h={}",
            fmt_num(f.nu_c()),
            fmt_num(f.nu_h())
        )?;
        writeln!(w, "solve_for,given,lower,upper,upper_inclusive,empty")?;
        if let (Some(p_h), Some(win)) = (a.ph, cold_window) {
            window_row(w, "p_c", p_h, &win)?;
        }
        if let (Some(p_c), Some(win)) = (a.pc, hot_window) {
            window_row(w, "p_h", p_c, &win)?;
        }
        Ok(())
    })?;
    Ok(Status::Ok)
}

fn cmd_verify(out: &mut dyn Write) -> std::result::Result<Status, CliError> {
    let outcomes = verify::run_all();
    writeln!(out, "check,status,detail")?;
    for c in &outcomes {
        let status = if c.passed { "pass" } else { "FAIL" };
        writeln!(
            out,
            "{},{},\"{}\"",
            c.name,
            status,
            c.detail.replace('"', "'")
        )?;
    }
    out.flush()?;
    let failed = outcomes.iter().filter(|c| !c.passed).count();
    Ok(if failed == 0 {
        Status::Ok
    } else {
        Status::Failed(format!("{failed} verification check(s) failed"))
    })
}
