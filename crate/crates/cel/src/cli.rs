//! Command-line front end: single-point evaluation, figure presets,
//! custom parameter sweeps, and a self-check suite that cross-compares
//! the closed form against the numerical oracles.
//!
//! Exit-code contract, fixed for scripting: 0 success, 1 verify failure,
//! 2 invalid input, 3 numerical failure.  Identical invocations produce
//! byte-identical output files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::closed_form::{decompose, Solution};
use crate::error::{Error, Result};
use crate::fock_oracle::FockOracle;
use crate::moment_ode::MomentOde;
use crate::params::{DriftVariant, SystemParams};
use crate::sweep_io::{self, Axis, CurveRecord, Engine, Focus, SweepSpec};

/// Environment variable naming the default output directory for
/// `figure` and `sweep`.
pub const OUT_DIR_ENV: &str = "CEL_OUT_DIR";

/// Entry point of the `cel` binary; returns the process exit code.
pub fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests land here too; only real parse
            // errors take the validation exit code.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as u8
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cel",
    version,
    about = "Two-mode squeezing and photon-pair dynamics of a coherently pumped \
             correlated-emission laser",
    after_help = "Config file: flat key=value lines using the parameter flag names \
                  (A, kappa, Omega, gamma, Gamma, theta); `#` starts a comment; \
                  flags override config values, which override the defaults.\n\
                  Environment: CEL_OUT_DIR sets the default output directory for \
                  `figure` and `sweep`.\n\
                  Exit codes: 0 success, 1 verify failure, 2 invalid input, \
                  3 numerical failure.",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Optional key=value config file with parameter defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Print engine diagnostics to standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate observables at explicit times and print them to stdout.
    Evaluate(EvaluateArgs),
    /// Run one figure preset, write its records, and summarize each curve.
    Figure(FigureArgs),
    /// Run a custom one-axis sweep and write its records.
    Sweep(SweepArgs),
    /// Cross-check the closed form against identities and the oracles.
    Verify(VerifyArgs),
}

/// Physical parameters, named after the conventional symbols.
#[derive(Args)]
struct ParamFlags {
    /// Linear gain coefficient.
    #[arg(long = "A", value_name = "RATE")]
    gain: Option<f64>,
    /// Cavity decay rate.
    #[arg(long, value_name = "RATE")]
    kappa: Option<f64>,
    /// Coherent drive amplitude.
    #[arg(long = "Omega", value_name = "RATE")]
    drive: Option<f64>,
    /// Atomic coherence decay rate.
    #[arg(long, value_name = "RATE")]
    gamma: Option<f64>,
    /// Atomic population decay rate.
    #[arg(long = "Gamma", value_name = "RATE")]
    atomic_decay: Option<f64>,
    /// Pump phase-fluctuation variance.
    #[arg(long, value_name = "VAR")]
    theta: Option<f64>,
}

#[derive(Args)]
struct EngineFlags {
    /// Computation engine.
    #[arg(long, value_enum, default_value_t = EngineKind::ClosedForm)]
    engine: EngineKind,
    /// Integrator step for the numerical engines.
    #[arg(long, default_value_t = 1e-3, value_name = "DT")]
    dt: f64,
    /// Fock cutoff of the cavity mode (fock engine).
    #[arg(long, default_value_t = 12, value_name = "N")]
    n_max_a: usize,
    /// Fock cutoff of the auxiliary mode (fock engine).
    #[arg(long, default_value_t = 12, value_name = "N")]
    n_max_b: usize,
    /// Boundary occupancy above which a Fock sample is flagged.
    #[arg(long, default_value_t = 1e-6, value_name = "TOL")]
    tail_tol: f64,
}

impl EngineFlags {
    fn to_engine(&self) -> Engine {
        match self.engine {
            EngineKind::ClosedForm => Engine::ClosedForm,
            EngineKind::MomentOde => Engine::MomentOde { dt: self.dt },
            EngineKind::Fock => Engine::Fock {
                dt: self.dt,
                n_max_a: self.n_max_a,
                n_max_b: self.n_max_b,
                tail_tol: self.tail_tol,
            },
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EngineKind {
    /// Spectral closed form (exact).
    ClosedForm,
    /// Fourth-order integration of the moment equations.
    MomentOde,
    /// Truncated Fock-space master equation.
    Fock,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    engine: EngineFlags,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Sample time; repeat the flag for several times.
    #[arg(long = "t", value_name = "TIME", default_values_t = [1.0])]
    times: Vec<f64>,
}

#[derive(Args)]
struct FigureArgs {
    /// Preset name, fig1 through fig12.
    name: String,
    #[command(flatten)]
    engine: EngineFlags,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; defaults to <name>.<format> in the output directory.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    engine: EngineFlags,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; defaults to <label>.<format> in the output directory.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Name recorded in the `preset` column.
    #[arg(long, default_value = "custom")]
    label: String,
    /// Parameter the sweep varies.
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// Comma-separated axis values, one curve each.
    #[arg(long, value_delimiter = ',', required = true, value_name = "V,..")]
    values: Vec<f64>,
    /// End of the uniform time grid starting at 0.
    #[arg(long, default_value_t = 5.0, value_name = "TIME")]
    t_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 512, value_name = "N")]
    t_points: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    /// Vary the linear gain.
    #[value(name = "A")]
    Gain,
    /// Vary the drive amplitude.
    #[value(name = "Omega")]
    Drive,
    /// Vary the phase-fluctuation variance.
    #[value(name = "theta")]
    Theta,
    /// Vary the decay ratio gamma/Gamma at fixed gamma.
    #[value(name = "ratio")]
    Ratio,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Axis {
        match a {
            AxisArg::Gain => Axis::Gain,
            AxisArg::Drive => Axis::Drive,
            AxisArg::Theta => Axis::PhaseVariance,
            AxisArg::Ratio => Axis::DecayRatio,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Check depth; `full` adds the Fock-oracle comparison.
    #[arg(value_enum, default_value_t = Level::Fast)]
    level: Level,
    /// Drift split to test: the self-consistent one or the legacy
    /// as-printed variant (whose determinant check fails by design).
    #[arg(long, value_enum, default_value_t = DriftArg::Consistent)]
    drift_variant: DriftArg,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Level {
    Fast,
    Full,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DriftArg {
    Consistent,
    Legacy,
}

fn dispatch(cli: &Cli) -> Result<u8> {
    let config = cli.config.as_deref();
    match &cli.command {
        Command::Evaluate(a) => evaluate(a, config, cli.verbose),
        Command::Figure(a) => figure(a, config, cli.verbose),
        Command::Sweep(a) => sweep(a, config, cli.verbose),
        Command::Verify(a) => verify(a, cli.verbose),
    }
}

/// Defaults, overridden by the config file, overridden by flags.
fn resolve_params(flags: &ParamFlags, config: Option<&Path>) -> Result<SystemParams> {
    let mut p = SystemParams::default();
    if let Some(path) = config {
        apply_config(&mut p, path)?;
    }
    if let Some(v) = flags.gain {
        p.gain = v;
    }
    if let Some(v) = flags.kappa {
        p.kappa = v;
    }
    if let Some(v) = flags.drive {
        p.drive = v;
    }
    if let Some(v) = flags.gamma {
        p.coherence_decay = v;
    }
    if let Some(v) = flags.atomic_decay {
        p.atomic_decay = v;
    }
    if let Some(v) = flags.theta {
        p.phase_variance = v;
    }
    p.validate()?;
    Ok(p)
}

fn apply_config(p: &mut SystemParams, path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        context: format!("reading config {}", path.display()),
        source: e,
    })?;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse(format!(
                "config line {}: expected key=value, got `{raw}`",
                idx + 1
            )));
        };
        let key = key.trim();
        let value: f64 = value.trim().parse().map_err(|_| {
            Error::Parse(format!("config line {}: bad number for `{key}`", idx + 1))
        })?;
        match key {
            "A" => p.gain = value,
            "kappa" => p.kappa = value,
            "Omega" => p.drive = value,
            "gamma" => p.coherence_decay = value,
            "Gamma" => p.atomic_decay = value,
            "theta" => p.phase_variance = value,
            other => {
                return Err(Error::Parse(format!(
                    "config line {}: unknown key `{other}`",
                    idx + 1
                )))
            }
        }
    }
    Ok(())
}

/// `--out` wins; otherwise `<stem>.<ext>` under `CEL_OUT_DIR` or `.`.
fn resolve_out(out: Option<PathBuf>, stem: &str, format: Format) -> PathBuf {
    out.unwrap_or_else(|| {
        let dir = std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        dir.join(format!("{stem}.{}", format.ext()))
    })
}

fn write_records(path: &Path, records: &[CurveRecord], format: Format) -> Result<()> {
    let io_err = |e| Error::Io { context: format!("writing {}", path.display()), source: e };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    match format {
        Format::Csv => sweep_io::write_csv(&mut w, records)?,
        Format::Json => sweep_io::write_json(&mut w, records)?,
    }
    w.flush().map_err(io_err)
}

fn evaluate(args: &EvaluateArgs, config: Option<&Path>, verbose: bool) -> Result<u8> {
    let params = resolve_params(&args.params, config)?;
    let sol = Solution::new(params)?;
    let spec = SweepSpec {
        label: "evaluate".to_string(),
        base: params,
        axis: Axis::Gain,
        values: vec![params.gain],
        t_grid: args.times.clone(),
        focus: Focus::Squeezing,
    };
    let engine = args.engine.to_engine();
    if verbose {
        eprintln!(
            "evaluate: engine={} times={} A={} kappa={} Omega={} gamma={} Gamma={} theta={}",
            engine.label(),
            args.times.len(),
            params.gain,
            params.kappa,
            params.drive,
            params.coherence_decay,
            params.atomic_decay,
            params.phase_variance,
        );
    }
    let records = spec.run(&engine)?;
    let sp = sol.spectral();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let io_err = |e| Error::Io { context: "writing to stdout".to_string(), source: e };
    match args.format {
        Format::Csv => {
            writeln!(
                out,
                "# mu_plus_re={:.16e} mu_plus_im={:.16e} mu_minus_re={:.16e} \
                 mu_minus_im={:.16e} stable={} degenerate={}",
                sp.mu_plus.re,
                sp.mu_plus.im,
                sp.mu_minus.re,
                sp.mu_minus.im,
                sp.stable(),
                sol.degenerate(),
            )
            .map_err(io_err)?;
            sweep_io::write_csv(&mut out, &records)?;
        }
        Format::Json => {
            let doc = serde_json::json!({
                "mu_plus_re": sp.mu_plus.re,
                "mu_plus_im": sp.mu_plus.im,
                "mu_minus_re": sp.mu_minus.re,
                "mu_minus_im": sp.mu_minus.im,
                "stable": sp.stable(),
                "degenerate": sol.degenerate(),
                "records": records,
            });
            serde_json::to_writer_pretty(&mut out, &doc)
                .map_err(|e| io_err(std::io::Error::other(e)))?;
            writeln!(out).map_err(io_err)?;
        }
    }
    Ok(0)
}

fn figure(args: &FigureArgs, config: Option<&Path>, verbose: bool) -> Result<u8> {
    if config.is_some() && verbose {
        eprintln!("note: figure presets pin their parameters; config values are ignored");
    }
    let spec = sweep_io::preset(&args.name)?;
    let engine = args.engine.to_engine();
    let started = Instant::now();
    let records = spec.run(&engine)?;
    if verbose {
        eprintln!(
            "figure {}: {} curves x {} samples via {} in {:.2?}",
            spec.label,
            spec.values.len(),
            spec.t_grid.len(),
            engine.label(),
            started.elapsed(),
        );
    }
    let path = resolve_out(args.out.clone(), &spec.label, args.format);
    write_records(&path, &records, args.format)?;
    for (value, curve) in spec.values.iter().zip(records.chunks(spec.t_grid.len())) {
        let best = curve
            .iter()
            .min_by(|a, b| a.dc_minus_sq.total_cmp(&b.dc_minus_sq))
            .expect("preset grids are nonempty");
        println!(
            "{} {}={}: min dc_minus_sq {:.6} at t={:.4}",
            spec.label,
            spec.axis.label(),
            value,
            best.dc_minus_sq,
            best.t,
        );
    }
    println!("wrote {} ({} records)", path.display(), records.len());
    Ok(0)
}

fn sweep(args: &SweepArgs, config: Option<&Path>, verbose: bool) -> Result<u8> {
    let base = resolve_params(&args.params, config)?;
    if args.t_points < 2 {
        return Err(Error::InvalidGrid("sweep needs at least two grid points"));
    }
    if !args.t_max.is_finite() || args.t_max <= 0.0 {
        return Err(Error::InvalidGrid("sweep horizon must be positive and finite"));
    }
    let spec = SweepSpec {
        label: args.label.clone(),
        base,
        axis: args.axis.into(),
        values: args.values.clone(),
        t_grid: sweep_io::linspace(0.0, args.t_max, args.t_points),
        focus: Focus::Squeezing,
    };
    let engine = args.engine.to_engine();
    let started = Instant::now();
    let records = spec.run(&engine)?;
    if verbose {
        eprintln!(
            "sweep {}: {} curves x {} samples via {} in {:.2?}",
            spec.label,
            spec.values.len(),
            spec.t_grid.len(),
            engine.label(),
            started.elapsed(),
        );
    }
    let path = resolve_out(args.out.clone(), &spec.label, args.format);
    write_records(&path, &records, args.format)?;
    println!("wrote {} ({} records)", path.display(), records.len());
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify: deterministic identity checks plus oracle cross-comparisons.

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

/// Deterministic generator for reproducible verify draws
/// (splitmix64, Weyl increment).
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn draw_params(n: usize) -> Vec<SystemParams> {
    let mut rng = SplitMix64(0x00c0_ffee_5eed_cafe);
    (0..n)
        .map(|_| SystemParams {
            gain: rng.uniform(0.0, 20.0),
            kappa: rng.uniform(0.0, 2.0),
            drive: rng.uniform(0.0, 20.0),
            coherence_decay: rng.uniform(0.05, 5.0),
            atomic_decay: rng.uniform(0.05, 5.0),
            phase_variance: rng.uniform(0.0, 2.0),
        })
        .collect()
}

fn verify(args: &VerifyArgs, verbose: bool) -> Result<u8> {
    let variant = match args.drift_variant {
        DriftArg::Consistent => DriftVariant::Consistent,
        DriftArg::Legacy => DriftVariant::Legacy,
    };
    let level = match args.level {
        Level::Fast => "fast",
        Level::Full => "full",
    };
    let draws = draw_params(200);
    if verbose {
        eprintln!("verify: {} deterministic draws, drift variant {:?}", draws.len(), variant);
    }
    let mut checks = vec![
        check_normalization(&draws)?,
        check_trace(&draws, variant)?,
        check_determinant(&draws, variant)?,
        check_vacuum(&draws)?,
        check_wronskian(&draws)?,
        check_presets_ode()?,
        check_steady_state()?,
        check_heisenberg()?,
    ];
    if args.level == Level::Full {
        let started = Instant::now();
        checks.push(check_fock()?);
        if verbose {
            eprintln!("verify: fock comparison took {:.2?}", started.elapsed());
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        println!(
            "check={} status={} {}",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.detail,
        );
    }
    println!(
        "verify: level={level} checks={} passed={} failed={failed} result={}",
        checks.len(),
        checks.len() - failed,
        if failed == 0 { "pass" } else { "fail" },
    );
    Ok(u8::from(failed > 0))
}

/// Spectral normalization p^2 + q_plus*q_minus = 1 on every
/// non-degenerate draw.
fn check_normalization(draws: &[SystemParams]) -> Result<Check> {
    const TOL: f64 = 1e-10;
    let mut worst: f64 = 0.0;
    for p in draws {
        let r = p.reduced()?;
        let sp = decompose(p, &r);
        if sp.degenerate {
            continue;
        }
        let dev = (sp.p * sp.p + sp.q_plus * sp.q_minus - 1.0).norm();
        worst = worst.max(dev);
    }
    Ok(Check {
        name: "spectral-normalization",
        passed: worst <= TOL,
        detail: format!("max_dev={worst:.2e} tol={TOL:.0e}"),
    })
}

/// Rate sum mu_plus + mu_minus against the drift-matrix trace; holds for
/// both drift variants.
fn check_trace(draws: &[SystemParams], variant: DriftVariant) -> Result<Check> {
    const TOL: f64 = 1e-10;
    let mut worst: f64 = 0.0;
    for p in draws {
        let r = p.reduced()?;
        let sp = decompose(p, &r);
        let d = r.drift_diffusion_with(p, variant);
        let sum = sp.mu_plus + sp.mu_minus;
        let expect = d.eta_a + d.eta_b;
        let scale = (d.eta_a.abs() + d.eta_b.abs()).max(sum.norm()).max(1e-300);
        worst = worst.max((sum - expect).norm() / scale);
    }
    Ok(Check {
        name: "trace-consistency",
        passed: worst <= TOL,
        detail: format!("max_rel_dev={worst:.2e} tol={TOL:.0e}"),
    })
}

/// Rate product mu_plus * mu_minus against the drift-matrix determinant;
/// the check that separates the self-consistent drift from the legacy
/// as-printed variant.
fn check_determinant(draws: &[SystemParams], variant: DriftVariant) -> Result<Check> {
    const TOL: f64 = 1e-9;
    let mut worst: f64 = 0.0;
    for p in draws {
        let r = p.reduced()?;
        let sp = decompose(p, &r);
        let d = r.drift_diffusion_with(p, variant);
        let product = sp.mu_plus * sp.mu_minus;
        let expect = d.eta_a * d.eta_b - d.xi_a * d.xi_b;
        let scale = ((d.eta_a * d.eta_b).abs() + (d.xi_a * d.xi_b).abs())
            .max(product.norm())
            .max(1e-300);
        worst = worst.max((product - expect).norm() / scale);
    }
    Ok(Check {
        name: "determinant-consistency",
        passed: worst <= TOL,
        detail: format!("max_rel_dev={worst:.2e} tol={TOL:.0e}"),
    })
}

/// Moments start from exact vacuum: u = v = w = 0 and unit variances at
/// t = 0.
fn check_vacuum(draws: &[SystemParams]) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for p in draws.iter().take(20) {
        let m = Solution::new(*p)?.moments(0.0)?;
        for dev in [m.u, m.v, m.w, m.dc_minus_sq() - 1.0, m.dc_plus_sq() - 1.0, m.nbar()] {
            worst = worst.max(dev.abs());
        }
    }
    Ok(Check {
        name: "vacuum-start",
        passed: worst == 0.0,
        detail: format!("max_dev={worst:.2e} tol=0 (exact)"),
    })
}

/// Propagator Wronskian F+F- - G+G- = exp(-(mu_plus + mu_minus) t).
fn check_wronskian(draws: &[SystemParams]) -> Result<Check> {
    const TOL: f64 = 1e-9;
    let mut worst: f64 = 0.0;
    for p in draws {
        let r = p.reduced()?;
        let sp = decompose(p, &r);
        if sp.degenerate {
            continue;
        }
        for t in [0.3, 1.0] {
            // Products of growing propagators overflow past the moment
            // horizon; skip draws whose terms leave the comparable range.
            if 2.0 * (-sp.mu_minus.re).max(0.0) * t > 600.0 {
                continue;
            }
            let pr = sp.propagators(t);
            let wron = pr.f_plus * pr.f_minus - pr.g_plus * pr.g_minus;
            let expect = (-(sp.mu_plus + sp.mu_minus) * t).exp();
            let scale = (pr.f_plus * pr.f_minus).norm() + (pr.g_plus * pr.g_minus).norm();
            worst = worst.max((wron - expect).norm() / scale.max(expect.norm()).max(1e-300));
        }
    }
    Ok(Check {
        name: "propagator-wronskian",
        passed: worst <= TOL,
        detail: format!("max_rel_dev={worst:.2e} tol={TOL:.0e}"),
    })
}

/// Closed form against the moment integrator on every preset grid.
fn check_presets_ode() -> Result<Check> {
    const TOL: f64 = 1e-7;
    const DT: f64 = 1e-3;
    let mut worst: f64 = 0.0;
    for name in sweep_io::PRESET_NAMES {
        let spec = sweep_io::preset(name)?;
        let exact = spec.run(&Engine::ClosedForm)?;
        let ode = spec.run(&Engine::MomentOde { dt: DT })?;
        for (e, o) in exact.iter().zip(&ode) {
            for (x, y) in [(e.u, o.u), (e.v, o.v), (e.w, o.w)] {
                let scale = x.abs().max(y.abs());
                if scale > 0.0 {
                    worst = worst.max((x - y).abs() / scale.max(1e-9));
                }
            }
        }
    }
    Ok(Check {
        name: "moment-ode-agreement",
        passed: worst <= TOL,
        detail: format!("max_rel_dev={worst:.2e} tol={TOL:.0e} dt={DT:.0e} presets=12"),
    })
}

/// Large-time closed form against the algebraic steady state at a stable
/// point, plus the fixed-point residual of the integrator.
fn check_steady_state() -> Result<Check> {
    const TOL: f64 = 1e-9;
    let params = SystemParams { gain: 5.0, ..SystemParams::default() };
    let ode = MomentOde::from_params(&params)?;
    let ss = ode.steady_state()?;
    let late = Solution::new(params)?.moments(600.0)?;
    let scale = ss.u.abs().max(ss.v.abs()).max(ss.w.abs()).max(1.0);
    let mut worst: f64 = 0.0;
    for (a, b) in [(ss.u, late.u), (ss.v, late.v), (ss.w, late.w)] {
        worst = worst.max((a - b).abs() / scale);
    }
    let rhs = ode.rhs([ss.u, ss.v, ss.w]);
    let residual = rhs.iter().fold(0.0f64, |m, r| m.max(r.abs())) / scale;
    worst = worst.max(residual);
    Ok(Check {
        name: "steady-state-agreement",
        passed: worst <= TOL,
        detail: format!("max_rel_dev={worst:.2e} tol={TOL:.0e}"),
    })
}

/// Uncertainty product stays at or above the quantum limit on every
/// stable preset point.
fn check_heisenberg() -> Result<Check> {
    const BOUND: f64 = 1.0 - 1e-9;
    let mut min_product = f64::INFINITY;
    let mut stable_curves = 0u32;
    for name in sweep_io::PRESET_NAMES {
        let spec = sweep_io::preset(name)?;
        for &value in &spec.values {
            let sol = Solution::new(spec.params_at(value))?;
            if sol.unstable() {
                continue;
            }
            stable_curves += 1;
            for m in sol.moments_grid(&spec.t_grid)? {
                min_product = min_product.min(m.uncertainty_product());
            }
        }
    }
    Ok(Check {
        name: "heisenberg-bound",
        passed: min_product >= BOUND && stable_curves > 0,
        detail: format!("min_product={min_product:.12} bound=1-1e-9 stable_curves={stable_curves}"),
    })
}

/// Closed form against the truncated Fock master equation in the
/// small-gain regime.
fn check_fock() -> Result<Check> {
    const MOMENT_TOL: f64 = 1e-4;
    const TRACE_TOL: f64 = 1e-6;
    const TAIL_TOL: f64 = 1e-6;
    let params = SystemParams { gain: 2.0, ..SystemParams::default() };
    let oracle = FockOracle::new(&params, 12, 12)?;
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let samples = oracle.evolve_flagged(&grid, 1e-3, TAIL_TOL)?;
    let sol = Solution::new(params)?;
    let mut delta: f64 = 0.0;
    let mut trace_drift: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for s in &samples {
        let m = sol.moments(s.t)?;
        let f = s.moment_state();
        delta = delta.max((m.u - f.u).abs()).max((m.v - f.v).abs()).max((m.w - f.w).abs());
        trace_drift = trace_drift.max((s.trace - 1.0).abs());
        tail = tail.max(s.tail);
    }
    let passed = delta <= MOMENT_TOL && trace_drift <= TRACE_TOL && tail <= TAIL_TOL;
    Ok(Check {
        name: "fock-agreement",
        passed,
        detail: format!(
            "max_moment_delta={delta:.2e} trace_drift={trace_drift:.2e} max_tail={tail:.2e} \
             tols=({MOMENT_TOL:.0e},{TRACE_TOL:.0e},{TAIL_TOL:.0e}) cutoffs=(12,12)"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_structure_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn params_resolve_with_flag_precedence() {
        let dir = std::env::temp_dir().join("cel-cli-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("base.conf");
        std::fs::write(&path, "# base\nA = 4\nkappa=0.25\ntheta = 1.5\n").unwrap();
        let flags = ParamFlags {
            gain: Some(7.0),
            kappa: None,
            drive: None,
            gamma: None,
            atomic_decay: None,
            theta: None,
        };
        let p = resolve_params(&flags, Some(&path)).unwrap();
        assert_eq!(p.gain, 7.0); // flag beats config
        assert_eq!(p.kappa, 0.25); // config beats default
        assert_eq!(p.phase_variance, 1.5);
        assert_eq!(p.drive, 0.5); // untouched default
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn config_rejects_unknown_keys_and_bad_numbers() {
        let dir = std::env::temp_dir().join("cel-cli-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        for (name, text) in
            [("bad-key.conf", "zeta=1\n"), ("bad-num.conf", "A=ten\n"), ("bad-line.conf", "A\n")]
        {
            let path = dir.join(name);
            std::fs::write(&path, text).unwrap();
            let mut p = SystemParams::default();
            assert!(matches!(apply_config(&mut p, &path), Err(Error::Parse(_))));
            std::fs::remove_file(&path).unwrap();
        }
    }

    #[test]
    fn verify_draws_are_deterministic_and_valid() {
        let a = draw_params(64);
        let b = draw_params(64);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
            assert!(x.validate().is_ok());
        }
    }

    #[test]
    fn fast_checks_pass_for_consistent_and_flag_legacy() {
        let draws = draw_params(100);
        assert!(check_normalization(&draws).unwrap().passed);
        assert!(check_trace(&draws, DriftVariant::Consistent).unwrap().passed);
        assert!(check_trace(&draws, DriftVariant::Legacy).unwrap().passed);
        assert!(check_determinant(&draws, DriftVariant::Consistent).unwrap().passed);
        assert!(!check_determinant(&draws, DriftVariant::Legacy).unwrap().passed);
        assert!(check_vacuum(&draws).unwrap().passed);
        assert!(check_wronskian(&draws).unwrap().passed);
    }

    #[test]
    fn preset_and_steady_checks_pass() {
        assert!(check_steady_state().unwrap().passed);
        assert!(check_heisenberg().unwrap().passed);
    }
}
