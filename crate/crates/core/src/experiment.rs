//! Runs a [`RunConfig`] and writes its artifacts.
//!
//! Every run writes `profile.csv` (`x,u,v`) and `history.csv`
//! (`step,t,max_update`); refinement studies add `report.csv`, comparisons
//! one profile per leg plus `compare.csv`, and the determinant kind
//! `determinant.csv` (`x,det`). `checkpoint.csv` holds the latest
//! checkpoint of a time-marching run and survives a divergence.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::info;

use crate::analysis::{
    lp_error, profile_metrics, restrict_to_coarse, ConvergenceReport, ProfileMetrics, ReferenceKind,
};
use crate::boundary::NeumannExtension;
use crate::config::{ExperimentKind, LegSpec, RunConfig, SolverKind};
use crate::error::{Error, Result};
use crate::integrate::Integrator;
use crate::kernels::{Kernel, KernelFamily};
use crate::model::{
    pulse_initial_conditions, quasilinear_det, ManufacturedCase, ManufacturedSources, SystemState,
};
use crate::quadrature::{DiscreteOperator, Grid, OperatorBuilder};
use crate::spectral::{SpectralOperator, SpectralSolver};
use crate::timestepper::{run, GrayScottRhs, HistoryEntry, NeumannPair, RunResult, StepperConfig};

/// Operators for one quadrature configuration.
pub struct QuadratureSetup {
    pub kernel: Kernel,
    pub grid: Grid,
    pub op_u: DiscreteOperator,
    pub op_v: DiscreteOperator,
    pub extensions: Option<(NeumannExtension, NeumannExtension)>,
}

impl QuadratureSetup {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        let kernel = cfg.kernel.build()?;
        let grid = cfg.operator_grid()?;
        let builder = OperatorBuilder::new(&kernel, grid)?;
        let l = cfg.grid.half_width;
        let op_u = builder.operator(&cfg.boundary.u.constraint(l)?)?;
        let op_v = builder.operator(&cfg.boundary.v.constraint(l)?)?;
        let extensions = if cfg.boundary.u.is_neumann() {
            let eu = NeumannExtension::new(&op_u)?;
            // The collar block only depends on the decay exponent.
            let ev = if op_u.couple_left() == op_v.couple_left() && op_u.couple_right() == op_v.couple_right() {
                eu.clone()
            } else {
                NeumannExtension::new(&op_v)?
            };
            Some((eu, ev))
        } else {
            None
        };
        Ok(Self {
            kernel,
            grid,
            op_u,
            op_v,
            extensions,
        })
    }

    /// Nodes on which results are reported (the physical domain).
    pub fn physical_range(&self) -> std::ops::RangeInclusive<usize> {
        match &self.extensions {
            Some((e, _)) => e.inner_range(),
            None => 0..=self.grid.m(),
        }
    }

    pub fn run(
        &self,
        cfg: &RunConfig,
        initial: &SystemState,
        stepper: &StepperConfig,
        checkpoint: Option<&Path>,
    ) -> Result<RunResult> {
        let mut rhs = GrayScottRhs {
            params: cfg.params,
            op_u: &self.op_u,
            op_v: &self.op_v,
            sources: None,
        };
        let pair = self.extensions.as_ref().map(|(eu, ev)| NeumannPair {
            op_u: &self.op_u,
            op_v: &self.op_v,
            ext_u: eu,
            ext_v: ev,
        });
        let x = self.grid.nodes();
        let mut write = |_: usize, s: &SystemState| -> Result<()> {
            if let Some(p) = checkpoint {
                write_profile(p, &x, s)?;
            }
            Ok(())
        };
        if let Some(p) = checkpoint {
            write_profile(p, &x, initial)?;
        }
        run(
            initial,
            stepper,
            &mut rhs,
            pair.as_ref().map(|p| p as &dyn crate::timestepper::Extension),
            Some(&mut write),
        )
    }
}

/// Outcome of one experiment.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

fn write_file(path: &Path, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(path, contents)?;
    files.push(path.to_path_buf());
    Ok(())
}

pub fn profile_csv(x: &[f64], s: &SystemState) -> String {
    let mut out = String::from("x,u,v\n");
    for i in 0..x.len() {
        let _ = writeln!(out, "{:e},{:e},{:e}", x[i], s.u[i], s.v[i]);
    }
    out
}

fn write_profile(path: &Path, x: &[f64], s: &SystemState) -> Result<()> {
    fs::write(path, profile_csv(x, s))?;
    Ok(())
}

pub fn history_csv(history: &[HistoryEntry]) -> String {
    let mut out = String::from("step,t,max_update\n");
    for h in history {
        let _ = writeln!(out, "{},{:e},{:e}", h.step, h.t, h.max_update);
    }
    out
}

/// Reads an `x,u,v` profile.
pub fn read_profile(path: &Path) -> Result<(Vec<f64>, SystemState)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "x,u,v" => {}
        _ => {
            return Err(Error::Config(format!(
                "{}: line 1: expected header x,u,v",
                path.display()
            )))
        }
    }
    let (mut x, mut u, mut v) = (Vec::new(), Vec::new(), Vec::new());
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let vals: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match vals.as_deref() {
            Ok([a, b, c]) => {
                x.push(*a);
                u.push(*b);
                v.push(*c);
            }
            _ => {
                return Err(Error::Config(format!(
                    "{}: line {}: expected three numbers",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    let s = SystemState::new(u, v, 0.0)?;
    Ok((x, s))
}

fn metrics_line(label: &str, m: &ProfileMetrics) -> String {
    format!(
        "{label}: max v {:.6} at x = {:.4}, plateau width {:.4}, oscillations {}, boundary v ({:e}, {:e})",
        m.max_value, m.max_location, m.plateau_width, m.oscillations, m.boundary_left, m.boundary_right
    )
}

/// Final state of a pulse simulation restricted to the physical domain.
pub struct PulseRun {
    pub x: Vec<f64>,
    pub state: SystemState,
    pub result: RunResult,
}

/// Runs one pulse simulation (quadrature or spectral) without writing files
/// other than the optional checkpoint.
pub fn simulate(cfg: &RunConfig, stepper: &StepperConfig, checkpoint: Option<&Path>) -> Result<PulseRun> {
    match cfg.solver {
        SolverKind::Quadrature => {
            let setup = QuadratureSetup::new(cfg)?;
            let initial = pulse_initial_conditions(&setup.grid, cfg.initial.alpha, cfg.initial.beta)?;
            let result = setup.run(cfg, &initial, stepper, checkpoint)?;
            let r = setup.physical_range();
            let x = setup.grid.nodes()[r.clone()].to_vec();
            let state = SystemState {
                u: result.state.u[r.clone()].to_vec(),
                v: result.state.v[r].to_vec(),
                t: result.state.t,
            };
            Ok(PulseRun { x, state, result })
        }
        SolverKind::Spectral => {
            let kernel = cfg.kernel.build()?;
            let op = SpectralOperator::new(&kernel, cfg.grid.half_width, cfg.grid.m)?;
            let x = op.nodes();
            let alpha = cfg.initial.alpha;
            let beta = cfg.initial.beta;
            // Same closed forms as the quadrature grid, sampled on [-L, L).
            let pulse = pulse_initial_conditions(&Grid::new(cfg.grid.half_width, cfg.grid.m)?, alpha, beta)?;
            let initial = SystemState {
                u: pulse.u[..cfg.grid.m].to_vec(),
                v: pulse.v[..cfg.grid.m].to_vec(),
                t: 0.0,
            };
            let solver = SpectralSolver {
                op: &op,
                params: cfg.params,
                scheme: cfg.spectral_scheme(),
            };
            let result = solver.run(&initial, stepper)?;
            if let Some(p) = checkpoint {
                write_profile(p, &x, &result.state)?;
            }
            Ok(PulseRun {
                x,
                state: result.state.clone(),
                result,
            })
        }
    }
}

/// Runs the experiment and writes all artifacts into `out`.
pub fn run_experiment(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    cfg.validate()?;
    fs::create_dir_all(out)?;
    let mut outcome = Outcome::default();
    match cfg.kind {
        ExperimentKind::Simulate => run_simulate(cfg, out, &mut outcome)?,
        ExperimentKind::Mms => run_mms(cfg, out, &mut outcome)?,
        ExperimentKind::PulseConvergence => run_pulse_convergence(cfg, out, &mut outcome)?,
        ExperimentKind::Compare => run_compare(cfg, out, &mut outcome)?,
        ExperimentKind::Determinant => run_determinant(cfg, out, &mut outcome)?,
    }
    if cfg.output.plot_script {
        let script = plot_script(cfg.kind, &outcome.files);
        write_file(&out.join("plot.py"), &script, &mut outcome.files)?;
    }
    Ok(outcome)
}

fn run_simulate(cfg: &RunConfig, out: &Path, o: &mut Outcome) -> Result<()> {
    let stepper = cfg.stepper.build()?;
    let p = simulate(cfg, &stepper, Some(&out.join("checkpoint.csv")))?;
    o.files.push(out.join("checkpoint.csv"));
    write_file(&out.join("profile.csv"), &profile_csv(&p.x, &p.state), &mut o.files)?;
    write_file(&out.join("history.csv"), &history_csv(&p.result.history), &mut o.files)?;
    o.summary.push(format!(
        "{} steps to t = {}, stop {:?}, last update {:e}",
        p.result.steps,
        p.state.t,
        p.result.reason,
        p.result.last_update()
    ));
    o.summary.push(metrics_line("profile", &profile_metrics(&p.state.v, &p.x)?));
    Ok(())
}

/// Final-time errors of the manufactured solution on one grid.
pub struct MmsLevel {
    pub grid: Grid,
    pub dt: f64,
    pub error_u: f64,
    pub error_v: f64,
    pub state: SystemState,
    pub exact: SystemState,
    pub result: RunResult,
}

pub fn mms_level(cfg: &RunConfig, m: usize, dt: f64) -> Result<MmsLevel> {
    let case = ManufacturedCase {
        half_width: cfg.grid.half_width,
        ..ManufacturedCase::benchmark()
    };
    let kernel = cfg.kernel.build()?;
    let grid = Grid::new(cfg.grid.half_width, m)?;
    let builder = OperatorBuilder::new(&kernel, grid)?;
    let l = cfg.grid.half_width;
    let op_u = builder.operator(&cfg.boundary.u.constraint(l)?)?;
    let op_v = builder.operator(&cfg.boundary.v.constraint(l)?)?;
    let sources = ManufacturedSources::new(&case, &grid, &kernel, &cfg.params, &Integrator::default())?;
    let mut rhs = GrayScottRhs {
        params: cfg.params,
        op_u: &op_u,
        op_v: &op_v,
        sources: Some(&sources),
    };
    let stepper = cfg.stepper.with_dt(dt)?;
    let result = run(&case.exact_state(&grid, 0.0), &stepper, &mut rhs, None, None)?;
    let exact = case.exact_state(&grid, result.state.t);
    let norm = cfg.convergence.as_ref().map_or(crate::analysis::Norm::L2, |c| c.norm);
    let error_u = lp_error(&result.state.u, &exact.u, norm, grid.h())?;
    let error_v = lp_error(&result.state.v, &exact.v, norm, grid.h())?;
    Ok(MmsLevel {
        grid,
        dt,
        error_u,
        error_v,
        state: result.state.clone(),
        exact,
        result,
    })
}

fn run_mms(cfg: &RunConfig, out: &Path, o: &mut Outcome) -> Result<()> {
    let conv = cfg.convergence.as_ref().expect("validated");
    let mut report = ConvergenceReport::new(conv.norm, ReferenceKind::Exact);
    let mut last = None;
    for (i, &m) in conv.levels.iter().enumerate() {
        let h = 2.0 * cfg.grid.half_width / m as f64;
        let dt = conv.dt(i, h)?;
        let level = mms_level(cfg, m, dt)?;
        info!("mms M = {m}: error_u {:e}, error_v {:e}", level.error_u, level.error_v);
        report.push(m, h, dt, level.error_u, level.error_v)?;
        last = Some(level);
    }
    let last = last.expect("at least two levels");
    write_file(&out.join("report.csv"), &report.to_csv(), &mut o.files)?;
    write_file(
        &out.join("profile.csv"),
        &profile_csv(&last.grid.nodes(), &last.state),
        &mut o.files,
    )?;
    write_file(&out.join("history.csv"), &history_csv(&last.result.history), &mut o.files)?;
    o.summary.push(format!(
        "average order u {:?}, v {:?}",
        report.average_order_u(),
        report.average_order_v()
    ));
    Ok(())
}

/// Self-convergence study against the finest level.
pub fn pulse_convergence(cfg: &RunConfig) -> Result<(ConvergenceReport, Vec<PulseRun>)> {
    let conv = cfg.convergence.as_ref().ok_or_else(|| {
        Error::Config("pulse convergence needs a [convergence] table".into())
    })?;
    let reference_m = conv
        .reference_m
        .ok_or_else(|| Error::Config("convergence.reference_m is required".into()))?;
    let ms: Vec<usize> = conv.levels.iter().copied().chain([reference_m]).collect();
    let mut runs = Vec::new();
    let mut dts = Vec::new();
    for (i, &m) in ms.iter().enumerate() {
        let mut c = cfg.clone();
        c.grid.m = m;
        let h = c.operator_grid()?.h();
        let dt = conv.dt(i, h)?;
        let stepper = c.stepper.with_dt(dt)?;
        info!("pulse convergence level M = {m}, dt = {dt}");
        dts.push(dt);
        runs.push(simulate(&c, &stepper, None)?);
    }
    let reference = runs.last().expect("reference");
    let mut report = ConvergenceReport::new(conv.norm, ReferenceKind::FinestMesh);
    for (i, run) in runs[..runs.len() - 1].iter().enumerate() {
        let n = run.state.len();
        let ru = restrict_to_coarse(&reference.state.u, n)?;
        let rv = restrict_to_coarse(&reference.state.v, n)?;
        let h = run.x[1] - run.x[0];
        let eu = lp_error(&run.state.u, &ru, conv.norm, h)?;
        let ev = lp_error(&run.state.v, &rv, conv.norm, h)?;
        report.push(ms[i], h, dts[i], eu, ev)?;
    }
    Ok((report, runs))
}

fn run_pulse_convergence(cfg: &RunConfig, out: &Path, o: &mut Outcome) -> Result<()> {
    let (report, runs) = pulse_convergence(cfg)?;
    let reference = runs.last().expect("reference");
    write_file(&out.join("report.csv"), &report.to_csv(), &mut o.files)?;
    write_file(
        &out.join("profile.csv"),
        &profile_csv(&reference.x, &reference.state),
        &mut o.files,
    )?;
    write_file(&out.join("history.csv"), &history_csv(&reference.result.history), &mut o.files)?;
    o.summary.push(format!(
        "average order u {:?}, v {:?}, errors decreasing: {}",
        report.average_order_u(),
        report.average_order_v(),
        report.errors_decrease()
    ));
    Ok(())
}

fn leg_config(base: &RunConfig, leg: &LegSpec) -> RunConfig {
    let mut c = base.clone();
    if let Some(s) = leg.solver {
        c.solver = s;
    }
    if let Some(l) = leg.half_width {
        c.grid.half_width = l;
    }
    if let Some(m) = leg.m {
        c.grid.m = m;
    }
    if let Some(dt) = leg.dt {
        c.stepper.dt = dt;
    }
    if let Some(b) = leg.boundary {
        c.boundary = b;
    }
    c.kind = ExperimentKind::Simulate;
    c
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn run_compare(cfg: &RunConfig, out: &Path, o: &mut Outcome) -> Result<()> {
    let legs = &cfg.compare.as_ref().expect("validated").legs;
    let configs: Vec<RunConfig> = legs.iter().map(|l| leg_config(cfg, l)).collect();
    for (leg, c) in legs.iter().zip(&configs) {
        c.validate()
            .map_err(|e| Error::Config(format!("compare leg {}: {e}", leg.name)))?;
    }
    let results: Vec<Result<PulseRun>> = std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| s.spawn(move || simulate(c, &c.stepper.build()?, None)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("compare leg panicked"))
            .collect()
    });
    let mut table = String::from("leg,max_v,max_location,plateau_width,oscillations,boundary_left,boundary_right\n");
    for (leg, r) in legs.iter().zip(results) {
        let r = r?;
        let stem = file_stem(&leg.name);
        write_file(
            &out.join(format!("profile_{stem}.csv")),
            &profile_csv(&r.x, &r.state),
            &mut o.files,
        )?;
        write_file(
            &out.join(format!("history_{stem}.csv")),
            &history_csv(&r.result.history),
            &mut o.files,
        )?;
        let m = profile_metrics(&r.state.v, &r.x)?;
        let _ = writeln!(
            table,
            "{},{:e},{:e},{:e},{},{:e},{:e}",
            leg.name, m.max_value, m.max_location, m.plateau_width, m.oscillations, m.boundary_left, m.boundary_right
        );
        o.summary.push(metrics_line(&leg.name, &m));
    }
    write_file(&out.join("compare.csv"), &table, &mut o.files)?;
    Ok(())
}

/// Default `ε = 1/σ` for exponential kernels.
pub fn determinant_eps(cfg: &RunConfig) -> Result<f64> {
    if let Some(e) = cfg.determinant.as_ref().and_then(|d| d.eps) {
        return Ok(e);
    }
    match cfg.kernel.family {
        KernelFamily::Exponential => Ok(1.0 / cfg.kernel.shape),
        KernelFamily::Algebraic => Err(Error::Config(
            "determinant.eps is required for the algebraic kernel".into(),
        )),
    }
}

pub fn determinant_csv(x: &[f64], det: &[f64]) -> String {
    let mut out = String::from("x,det\n");
    for (a, d) in x.iter().zip(det) {
        let _ = writeln!(out, "{a:e},{d:e}");
    }
    out
}

fn run_determinant(cfg: &RunConfig, out: &Path, o: &mut Outcome) -> Result<()> {
    let eps = determinant_eps(cfg)?;
    let profile = cfg.determinant.as_ref().and_then(|d| d.profile.clone());
    let (x, state) = match profile {
        Some(p) => read_profile(Path::new(&p))?,
        None => {
            let stepper = cfg.stepper.build()?;
            let r = simulate(cfg, &stepper, Some(&out.join("checkpoint.csv")))?;
            o.files.push(out.join("checkpoint.csv"));
            write_file(&out.join("profile.csv"), &profile_csv(&r.x, &r.state), &mut o.files)?;
            write_file(&out.join("history.csv"), &history_csv(&r.result.history), &mut o.files)?;
            (r.x, r.state)
        }
    };
    let det = quasilinear_det(&state, eps, &cfg.params);
    write_file(&out.join("determinant.csv"), &determinant_csv(&x, &det), &mut o.files)?;
    let min = det.iter().copied().fold(f64::INFINITY, f64::min);
    o.summary.push(format!("eps {eps}: min det {min:e}"));
    Ok(())
}

/// Matplotlib script laying out the written CSV files.
pub fn plot_script(kind: ExperimentKind, files: &[PathBuf]) -> String {
    let names: Vec<String> = files
        .iter()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .filter(|n| n.ends_with(".csv") && n != "checkpoint.csv")
        .collect();
    let mut s = String::from(
        "# Plots the CSV files next to this script.\n\
         import csv, os\n\
         import matplotlib.pyplot as plt\n\n\
         here = os.path.dirname(os.path.abspath(__file__))\n\n\
         def load(name):\n\
         \x20   with open(os.path.join(here, name)) as f:\n\
         \x20       rows = list(csv.reader(f))\n\
         \x20   head, body = rows[0], rows[1:]\n\
         \x20   cols = {}\n\
         \x20   for j, h in enumerate(head):\n\
         \x20       try:\n\
         \x20           cols[h] = [float(r[j]) for r in body]\n\
         \x20       except ValueError:\n\
         \x20           cols[h] = [r[j] for r in body]\n\
         \x20   return cols\n\n",
    );
    let profiles: Vec<&String> = names.iter().filter(|n| n.starts_with("profile")).collect();
    if !profiles.is_empty() {
        s.push_str("fig, (au, av) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))\n");
        for p in &profiles {
            let label = p.trim_start_matches("profile").trim_start_matches('_').trim_end_matches(".csv");
            let label = if label.is_empty() { "solution" } else { label };
            let _ = writeln!(
                s,
                "d = load({p:?})\nau.plot(d['x'], d['u'], label={label:?})\nav.plot(d['x'], d['v'], label={label:?})"
            );
        }
        s.push_str("au.set_ylabel('u')\nav.set_ylabel('v')\nav.set_xlabel('x')\nau.legend()\nfig.tight_layout()\nfig.savefig(os.path.join(here, 'profile.png'), dpi=150)\n\n");
    }
    if names.iter().any(|n| n == "history.csv") {
        s.push_str("d = load('history.csv')\nfig, ax = plt.subplots(figsize=(7, 3))\nax.semilogy(d['t'], d['max_update'])\nax.set_xlabel('t')\nax.set_ylabel('max update')\nfig.tight_layout()\nfig.savefig(os.path.join(here, 'history.png'), dpi=150)\n\n");
    }
    if names.iter().any(|n| n == "report.csv") {
        s.push_str("d = load('report.csv')\nfig, ax = plt.subplots(figsize=(5, 4))\nax.loglog(d['h'], d['error_u'], 'o-', label='u')\nax.loglog(d['h'], d['error_v'], 's-', label='v')\nax.set_xlabel('h')\nax.set_ylabel('error')\nax.legend()\nfig.tight_layout()\nfig.savefig(os.path.join(here, 'report.png'), dpi=150)\n\n");
    }
    if names.iter().any(|n| n == "determinant.csv") {
        s.push_str("d = load('determinant.csv')\nfig, ax = plt.subplots(figsize=(7, 3))\nax.plot(d['x'], d['det'])\nax.axhline(0.0, color='k', lw=0.5)\nax.set_xlabel('x')\nax.set_ylabel('det a(u, v; eps)')\nfig.tight_layout()\nfig.savefig(os.path.join(here, 'determinant.png'), dpi=150)\n\n");
    }
    let _ = writeln!(s, "# kind: {kind:?}");
    s
}
