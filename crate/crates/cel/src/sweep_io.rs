//! Parameter sweeps over the figure presets and their CSV/JSON output.
//!
//! A sweep evaluates one engine over a family of parameter points (one
//! axis varied, everything else held at the preset base) on a shared time
//! grid.  Records carry the physical inputs alongside the observables so
//! every row is self-describing, plus tri-state health flags:
//! `unstable` and `degenerate` describe the parameter point, while
//! `cutoff_limited` marks Fock samples that touched the truncation.

use std::io::{BufRead, Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{MomentState, Solution};
use crate::error::{Error, Result};
use crate::fock_oracle::FockOracle;
use crate::moment_ode::MomentOde;
use crate::params::SystemParams;

/// Exact header of the sweep CSV schema.
pub const CSV_HEADER: &str = "preset,engine,A,kappa,Omega,gamma,Gamma_,theta,t,\
dc_minus_sq,dc_plus_sq,nbar,u,v,w,unstable,degenerate,cutoff_limited";

/// All built-in preset names.
pub const PRESET_NAMES: [&str; 12] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11",
    "fig12",
];

/// Which parameter the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Linear gain coefficient `A`.
    Gain,
    /// Drive amplitude `Omega`.
    Drive,
    /// Phase-fluctuation variance `theta`.
    PhaseVariance,
    /// Ratio of coherence decay to atomic decay, `gamma / Gamma`; applied
    /// by scaling the atomic decay at fixed coherence decay (the reduced
    /// coefficients only see the ratio).
    DecayRatio,
}

impl Axis {
    /// Base parameters with the axis value substituted in.
    pub fn apply(&self, base: &SystemParams, value: f64) -> SystemParams {
        let mut p = *base;
        match self {
            Axis::Gain => p.gain = value,
            Axis::Drive => p.drive = value,
            Axis::PhaseVariance => p.phase_variance = value,
            Axis::DecayRatio => p.atomic_decay = base.coherence_decay / value,
        }
        p
    }

    /// Display symbol of the varied quantity.
    pub fn label(&self) -> &'static str {
        match self {
            Axis::Gain => "A",
            Axis::Drive => "Omega",
            Axis::PhaseVariance => "theta",
            Axis::DecayRatio => "gamma/Gamma",
        }
    }
}

/// Observable a preset was designed around (the records always carry both).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Focus {
    /// Collective quadrature variances.
    Squeezing,
    /// Mean photon-pair number.
    PairNumber,
}

/// Engine used to produce the records of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Engine {
    /// Spectral closed form; exact up to rounding.
    ClosedForm,
    /// Fixed-step fourth-order integration of the moment equations.
    MomentOde { dt: f64 },
    /// Truncated Fock-space master equation.
    Fock { dt: f64, n_max_a: usize, n_max_b: usize, tail_tol: f64 },
}

impl Engine {
    /// Label recorded in the `engine` output column.
    pub fn label(&self) -> &'static str {
        match self {
            Engine::ClosedForm => "closed_form",
            Engine::MomentOde { .. } => "moment_ode",
            Engine::Fock { .. } => "fock",
        }
    }
}

/// One sweep: a parameter family crossed with a time grid.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Name recorded in the `preset` output column.
    pub label: String,
    /// Parameters shared by every curve.
    pub base: SystemParams,
    /// Varied parameter.
    pub axis: Axis,
    /// Axis values, one curve each, in output order.
    pub values: Vec<f64>,
    /// Sample times shared by every curve.
    pub t_grid: Vec<f64>,
    /// Observable the preset highlights.
    pub focus: Focus,
}

/// One output row: inputs, observables, and health flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub preset: String,
    pub engine: String,
    #[serde(rename = "A")]
    pub gain: f64,
    pub kappa: f64,
    #[serde(rename = "Omega")]
    pub drive: f64,
    #[serde(rename = "gamma")]
    pub coherence_decay: f64,
    #[serde(rename = "Gamma_")]
    pub atomic_decay: f64,
    #[serde(rename = "theta")]
    pub phase_variance: f64,
    pub t: f64,
    pub dc_minus_sq: f64,
    pub dc_plus_sq: f64,
    pub nbar: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub unstable: bool,
    pub degenerate: bool,
    pub cutoff_limited: bool,
}

impl CurveRecord {
    fn new(
        label: &str,
        engine: &Engine,
        p: &SystemParams,
        s: &MomentState,
        unstable: bool,
        degenerate: bool,
        cutoff_limited: bool,
    ) -> Self {
        CurveRecord {
            preset: label.to_string(),
            engine: engine.label().to_string(),
            gain: p.gain,
            kappa: p.kappa,
            drive: p.drive,
            coherence_decay: p.coherence_decay,
            atomic_decay: p.atomic_decay,
            phase_variance: p.phase_variance,
            t: s.t,
            dc_minus_sq: s.dc_minus_sq(),
            dc_plus_sq: s.dc_plus_sq(),
            nbar: s.nbar(),
            u: s.u,
            v: s.v,
            w: s.w,
            unstable,
            degenerate,
            cutoff_limited,
        }
    }
}

/// Uniform grid of `n` points from `start` to `stop`, endpoints exact.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Built-in sweep matching one of the twelve figure presets.
///
/// All presets share the base point `kappa = 0.5`, unit decay rates, and
/// `theta = 0`; each fixes a drive strength and varies one axis.  The
/// squeezing presets fig1–fig9 and the pair-number presets fig10–fig12
/// produce the same record schema.
pub fn preset(name: &str) -> Result<SweepSpec> {
    let grid5 = || linspace(0.0, 5.0, 512);
    let short = || linspace(0.0, 0.85, 512);
    let spec = |drive: f64, axis: Axis, values: &[f64], t_grid: Vec<f64>, focus: Focus| SweepSpec {
        label: name.to_string(),
        base: SystemParams { drive, ..SystemParams::default() },
        axis,
        values: values.to_vec(),
        t_grid,
        focus,
    };
    use Axis::*;
    use Focus::*;
    match name {
        "fig1" => Ok(spec(0.5, Gain, &[5.0, 10.0, 15.0], grid5(), Squeezing)),
        "fig2" => Ok(spec(10.0, Gain, &[5.0, 10.0, 15.0], grid5(), Squeezing)),
        "fig3" => Ok(spec(2.5, Gain, &[5.0, 10.0, 15.0], grid5(), Squeezing)),
        "fig4" => Ok(spec(0.5, PhaseVariance, &[0.0, 0.5, 1.0], grid5(), Squeezing)),
        "fig5" => Ok(spec(2.5, PhaseVariance, &[0.0, 0.5, 1.0], grid5(), Squeezing)),
        "fig6" => Ok(spec(10.0, PhaseVariance, &[0.0, 0.5, 1.0], grid5(), Squeezing)),
        "fig7" => Ok(spec(0.5, DecayRatio, &[1.0, 1.5, 2.0], grid5(), Squeezing)),
        "fig8" => Ok(spec(10.0, DecayRatio, &[1.0, 1.5, 2.0], grid5(), Squeezing)),
        "fig9" => Ok(spec(10.0, DecayRatio, &[1.0, 1.25, 1.5, 1.75, 2.0], short(), Squeezing)),
        "fig10" => Ok(spec(0.5, Gain, &[5.0, 10.0, 15.0], grid5(), PairNumber)),
        "fig11" => Ok(spec(10.0, PhaseVariance, &[0.0, 0.5, 1.0], grid5(), PairNumber)),
        "fig12" => Ok(spec(10.0, DecayRatio, &[1.0, 1.25, 1.5, 1.75, 2.0], short(), PairNumber)),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

impl SweepSpec {
    /// Parameters of the curve at one axis value.
    pub fn params_at(&self, value: f64) -> SystemParams {
        self.axis.apply(&self.base, value)
    }

    /// Evaluates every curve of the sweep with the given engine.
    ///
    /// Curves run in parallel; records preserve axis order, then grid
    /// order.  Any curve error aborts the whole sweep.
    pub fn run(&self, engine: &Engine) -> Result<Vec<CurveRecord>> {
        let per_value: Result<Vec<Vec<CurveRecord>>> =
            self.values.par_iter().map(|&v| self.curve(v, engine)).collect();
        Ok(per_value?.into_iter().flatten().collect())
    }

    fn curve(&self, value: f64, engine: &Engine) -> Result<Vec<CurveRecord>> {
        let params = self.params_at(value);
        // The point flags come from the spectrum regardless of engine.
        let sol = Solution::new(params)?;
        let (unstable, degenerate) = (sol.unstable(), sol.degenerate());
        let record = |s: &MomentState, cutoff: bool| {
            CurveRecord::new(&self.label, engine, &params, s, unstable, degenerate, cutoff)
        };
        match *engine {
            Engine::ClosedForm => {
                let states = sol.moments_grid(&self.t_grid)?;
                Ok(states.iter().map(|s| record(s, false)).collect())
            }
            Engine::MomentOde { dt } => {
                let states = MomentOde::from_params(&params)?.integrate(&self.t_grid, dt)?;
                Ok(states.iter().map(|s| record(s, false)).collect())
            }
            Engine::Fock { dt, n_max_a, n_max_b, tail_tol } => {
                let samples = FockOracle::new(&params, n_max_a, n_max_b)?
                    .evolve_flagged(&self.t_grid, dt, tail_tol)?;
                Ok(samples
                    .iter()
                    .map(|s| record(&s.moment_state(), s.cutoff_limited))
                    .collect())
            }
        }
    }
}

/// Writes records as CSV with the fixed `CSV_HEADER` schema.
///
/// Floats are printed as `{:.16e}` (17 significant digits), which
/// round-trips `f64` exactly; no field ever needs quoting.
pub fn write_csv<W: Write>(mut w: W, records: &[CurveRecord]) -> Result<()> {
    let io_err = |source| Error::Io { context: "writing sweep CSV".to_string(), source };
    writeln!(w, "{CSV_HEADER}").map_err(io_err)?;
    for r in records {
        writeln!(
            w,
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},\
             {:.16e},{:.16e},{:.16e},{:.16e},{},{},{}",
            r.preset,
            r.engine,
            r.gain,
            r.kappa,
            r.drive,
            r.coherence_decay,
            r.atomic_decay,
            r.phase_variance,
            r.t,
            r.dc_minus_sq,
            r.dc_plus_sq,
            r.nbar,
            r.u,
            r.v,
            r.w,
            r.unstable,
            r.degenerate,
            r.cutoff_limited,
        )
        .map_err(io_err)?;
    }
    Ok(())
}

/// Writes the same records as a pretty-printed JSON array, mirroring the
/// CSV schema through the serde field names.
pub fn write_json<W: Write>(mut w: W, records: &[CurveRecord]) -> Result<()> {
    let io_err =
        |source| Error::Io { context: "writing sweep JSON".to_string(), source };
    serde_json::to_writer_pretty(&mut w, records)
        .map_err(|e| io_err(std::io::Error::other(e)))?;
    writeln!(w).map_err(io_err)
}

/// Reads records back from the `CSV_HEADER` schema; the inverse of
/// `write_csv`, reproducing every field bit-identically.
pub fn read_csv<R: BufRead>(r: R) -> Result<Vec<CurveRecord>> {
    let mut lines = r.lines().enumerate();
    let io_err = |source| Error::Io { context: "reading sweep CSV".to_string(), source };
    match lines.next() {
        Some((_, line)) => {
            if line.map_err(io_err)? != CSV_HEADER {
                return Err(Error::Parse("line 1: unrecognized CSV header".to_string()));
            }
        }
        None => return Err(Error::Parse("empty CSV input".to_string())),
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line = line.map_err(io_err)?;
        if line.is_empty() {
            continue;
        }
        records.push(parse_csv_row(&line).map_err(|what| {
            Error::Parse(format!("line {}: {what}", idx + 1))
        })?);
    }
    Ok(records)
}

fn parse_csv_row(line: &str) -> std::result::Result<CurveRecord, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 18 {
        return Err(format!("expected 18 fields, found {}", fields.len()));
    }
    let float = |i: usize| -> std::result::Result<f64, String> {
        fields[i].parse().map_err(|_| format!("field {}: bad float `{}`", i + 1, fields[i]))
    };
    let flag = |i: usize| -> std::result::Result<bool, String> {
        fields[i].parse().map_err(|_| format!("field {}: bad flag `{}`", i + 1, fields[i]))
    };
    match fields[1] {
        "closed_form" | "moment_ode" | "fock" => {}
        other => return Err(format!("field 2: unknown engine `{other}`")),
    }
    Ok(CurveRecord {
        preset: fields[0].to_string(),
        engine: fields[1].to_string(),
        gain: float(2)?,
        kappa: float(3)?,
        drive: float(4)?,
        coherence_decay: float(5)?,
        atomic_decay: float(6)?,
        phase_variance: float(7)?,
        t: float(8)?,
        dc_minus_sq: float(9)?,
        dc_plus_sq: float(10)?,
        nbar: float(11)?,
        u: float(12)?,
        v: float(13)?,
        w: float(14)?,
        unstable: flag(15)?,
        degenerate: flag(16)?,
        cutoff_limited: flag(17)?,
    })
}

/// Reads records back from the JSON mirror; the inverse of `write_json`.
pub fn read_json<R: Read>(r: R) -> Result<Vec<CurveRecord>> {
    serde_json::from_reader(r).map_err(|e| Error::Parse(e.to_string()))
}
