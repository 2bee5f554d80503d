//! TOML run configuration and the named presets.
//!
//! Every table rejects unknown keys. Validation errors carry the line of the
//! offending key when the configuration came from text.

use serde::{Deserialize, Serialize};

use crate::analysis::Norm;
use crate::boundary::BoundaryConstraint;
use crate::error::{Error, Result};
use crate::kernels::{Kernel, KernelFamily};
use crate::model::GrayScottParams;
use crate::quadrature::Grid;
use crate::spectral::SpectralScheme;
use crate::timestepper::StepperConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    Mms,
    PulseConvergence,
    Compare,
    Determinant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    #[default]
    Quadrature,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub family: KernelFamily,
    /// `σ` for the exponential kernel, `a` for the algebraic one.
    pub shape: f64,
}

impl KernelSpec {
    pub fn build(&self) -> Result<Kernel> {
        Kernel::new(self.family, self.shape)
    }
}

/// `half_width` is the physical half-width. Under a Neumann constraint the
/// operator lives on twice that, and `m` counts intervals of the larger
/// domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub half_width: f64,
    pub m: usize,
}

fn default_decay() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BoundarySpec {
    Dirichlet {
        value: f64,
    },
    Free {
        #[serde(default = "default_decay")]
        decay: f64,
        #[serde(default)]
        far_field: f64,
    },
    Neumann {
        #[serde(default = "default_decay")]
        decay: f64,
        #[serde(default)]
        far_field: f64,
    },
    Periodic,
}

impl BoundarySpec {
    /// Constraint on a grid whose physical half-width is `half_width`.
    pub fn constraint(&self, half_width: f64) -> Result<BoundaryConstraint> {
        Ok(match *self {
            BoundarySpec::Dirichlet { value } => BoundaryConstraint::dirichlet_constant(value),
            BoundarySpec::Free { decay, far_field } => BoundaryConstraint::free(decay, far_field),
            BoundarySpec::Neumann { decay, far_field } => {
                BoundaryConstraint::neumann(half_width, decay, far_field)
            }
            BoundarySpec::Periodic => {
                return Err(Error::Config(
                    "periodic boundaries are handled by the spectral solver".into(),
                ))
            }
        })
    }

    pub fn is_neumann(&self) -> bool {
        matches!(self, BoundarySpec::Neumann { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpecs {
    pub u: BoundarySpec,
    pub v: BoundarySpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for InitialSpec {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            beta: 3.0,
        }
    }
}

fn default_tol() -> f64 {
    -1.0
}

fn default_checkpoint() -> usize {
    1000
}

/// Exactly one of `nmax` and `horizon` must be given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepperSpec {
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_checkpoint")]
    pub checkpoint_every: usize,
}

impl StepperSpec {
    pub fn with_dt(&self, dt: f64) -> Result<StepperConfig> {
        let nmax = match (self.nmax, self.horizon) {
            (Some(n), None) => n,
            (None, Some(t)) => (t / dt).round().max(1.0) as usize,
            _ => {
                return Err(Error::Config(
                    "stepper needs exactly one of nmax and horizon".into(),
                ))
            }
        };
        let cfg = StepperConfig {
            dt,
            nmax,
            tol: self.tol,
            checkpoint_every: self.checkpoint_every,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn build(&self) -> Result<StepperConfig> {
        self.with_dt(self.dt)
    }
}

fn default_out() -> String {
    "out".into()
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_out")]
    pub dir: String,
    #[serde(default = "default_true")]
    pub plot_script: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: default_out(),
            plot_script: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SpectralSpec {
    #[serde(default)]
    pub scheme: SpectralScheme,
}

/// Refinement study. Time steps come from `dts` (one per level, then one
/// for the reference) or from `dt_per_h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSpec {
    pub levels: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dts: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_per_h: Option<f64>,
    pub norm: Norm,
}

impl ConvergenceSpec {
    /// Time step of level `i`; `i == levels.len()` is the reference.
    pub fn dt(&self, i: usize, h: f64) -> Result<f64> {
        match (&self.dts, self.dt_per_h) {
            (Some(d), None) => d.get(i).copied().ok_or_else(|| {
                Error::Config(format!("convergence.dts has no entry for level {i}"))
            }),
            (None, Some(r)) => Ok(r * h),
            _ => Err(Error::Config(
                "convergence needs exactly one of dts and dt_per_h".into(),
            )),
        }
    }
}

/// One leg of a comparison; unset fields inherit from the base config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundarySpecs>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSpec {
    pub legs: Vec<LegSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DeterminantSpec {
    /// Profile CSV (`x,u,v`) to evaluate instead of simulating.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    /// Defaults to `1/σ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub solver: SolverKind,
    pub kernel: KernelSpec,
    pub grid: GridSpec,
    pub boundary: BoundarySpecs,
    pub params: GrayScottParams,
    #[serde(default)]
    pub initial: InitialSpec,
    pub stepper: StepperSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determinant: Option<DeterminantSpec>,
}

/// A failed check: dotted key path and message.
struct Invalid(&'static str, String);

fn positive(path: &'static str, v: f64) -> std::result::Result<(), Invalid> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Invalid(path, format!("must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn from_toml_str(src: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(src).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        if let Err(Invalid(path, msg)) = cfg.check() {
            let at = locate_key(src, path)
                .map(|l| format!("line {l}: "))
                .unwrap_or_default();
            return Err(Error::Config(format!("{at}{path}: {msg}")));
        }
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)?;
        Self::from_toml_str(&src).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.check()
            .map_err(|Invalid(path, msg)| Error::Config(format!("{path}: {msg}")))
    }

    fn check(&self) -> std::result::Result<(), Invalid> {
        positive("kernel.shape", self.kernel.shape)?;
        positive("grid.half_width", self.grid.half_width)?;
        if self.grid.m < 2 || self.grid.m % 2 != 0 {
            return Err(Invalid("grid.m", format!("must be even and ≥ 2, got {}", self.grid.m)));
        }
        for (path, v) in [
            ("params.d_u", self.params.d_u),
            ("params.d_v", self.params.d_v),
            ("params.feed", self.params.feed),
            ("params.removal", self.params.removal),
        ] {
            positive(path, v)?;
        }
        positive("initial.alpha", self.initial.alpha)?;
        positive("initial.beta", self.initial.beta)?;
        positive("stepper.dt", self.stepper.dt)?;
        match (self.stepper.nmax, self.stepper.horizon) {
            (Some(0), _) => return Err(Invalid("stepper.nmax", "must be at least 1".into())),
            (Some(_), Some(_)) => {
                return Err(Invalid("stepper.horizon", "give nmax or horizon, not both".into()))
            }
            (None, None) => {
                return Err(Invalid("stepper.dt", "stepper needs nmax or horizon".into()))
            }
            (None, Some(t)) => positive("stepper.horizon", t)?,
            _ => {}
        }
        if self.stepper.tol.is_nan() {
            return Err(Invalid("stepper.tol", "must be a number".into()));
        }

        let (bu, bv) = (self.boundary.u, self.boundary.v);
        for (path, b) in [("boundary.u", bu), ("boundary.v", bv)] {
            match b {
                BoundarySpec::Dirichlet { value } if !value.is_finite() => {
                    return Err(Invalid(path, "Dirichlet value must be finite".into()))
                }
                BoundarySpec::Free { decay, far_field } | BoundarySpec::Neumann { decay, far_field }
                    if !(decay.is_finite() && far_field.is_finite()) =>
                {
                    return Err(Invalid(path, "decay and far_field must be finite".into()))
                }
                _ => {}
            }
        }
        let periodic = matches!(bu, BoundarySpec::Periodic) || matches!(bv, BoundarySpec::Periodic);
        let both_periodic =
            matches!(bu, BoundarySpec::Periodic) && matches!(bv, BoundarySpec::Periodic);
        match self.solver {
            SolverKind::Spectral if !both_periodic => {
                return Err(Invalid("solver", "spectral solver needs periodic boundaries".into()))
            }
            SolverKind::Quadrature if periodic && self.kind != ExperimentKind::Compare => {
                return Err(Invalid("boundary", "periodic boundaries need solver = \"spectral\"".into()))
            }
            SolverKind::Spectral if !self.grid.m.is_power_of_two() => {
                return Err(Invalid("grid.m", "spectral grids need a power of two".into()))
            }
            _ => {}
        }
        if bu.is_neumann() != bv.is_neumann() {
            return Err(Invalid("boundary", "Neumann constraints must be set on both u and v".into()));
        }
        if bu.is_neumann() && self.grid.m % 4 != 0 {
            return Err(Invalid("grid.m", "Neumann grids need m divisible by 4".into()));
        }

        match self.kind {
            ExperimentKind::Mms | ExperimentKind::PulseConvergence => {
                let c = self
                    .convergence
                    .as_ref()
                    .ok_or_else(|| Invalid("kind", "this kind needs a [convergence] table".into()))?;
                if c.levels.len() < 2 {
                    return Err(Invalid("convergence.levels", "need at least two levels".into()));
                }
                if c.levels.windows(2).any(|w| w[1] != 2 * w[0]) {
                    return Err(Invalid("convergence.levels", "levels must double".into()));
                }
                if c.levels.iter().any(|m| m % 4 != 0) {
                    return Err(Invalid("convergence.levels", "levels must be multiples of 4".into()));
                }
                let needed = c.levels.len() + usize::from(self.kind == ExperimentKind::PulseConvergence);
                match (&c.dts, c.dt_per_h) {
                    (Some(d), None) if d.len() != needed => {
                        return Err(Invalid(
                            "convergence.dts",
                            format!("need {needed} time steps, got {}", d.len()),
                        ))
                    }
                    (Some(d), None) if d.iter().any(|x| !(*x > 0.0)) => {
                        return Err(Invalid("convergence.dts", "time steps must be positive".into()))
                    }
                    (None, Some(r)) => positive("convergence.dt_per_h", r)?,
                    (Some(_), None) => {}
                    _ => {
                        return Err(Invalid(
                            "convergence",
                            "give exactly one of dts and dt_per_h".into(),
                        ))
                    }
                }
                if self.kind == ExperimentKind::PulseConvergence {
                    let last = *c.levels.last().expect("checked");
                    match c.reference_m {
                        Some(r) if r > last && r % last == 0 => {}
                        _ => {
                            return Err(Invalid(
                                "convergence.reference_m",
                                "needs a reference finer than, and nested with, every level".into(),
                            ))
                        }
                    }
                }
            }
            ExperimentKind::Compare => {
                let c = self
                    .compare
                    .as_ref()
                    .ok_or_else(|| Invalid("kind", "compare needs a [compare] table".into()))?;
                if c.legs.len() < 2 {
                    return Err(Invalid("compare.legs", "need at least two legs".into()));
                }
            }
            ExperimentKind::Determinant => {
                if let Some(e) = self.determinant.as_ref().and_then(|d| d.eps) {
                    if !(e >= 0.0 && e.is_finite()) {
                        return Err(Invalid("determinant.eps", format!("must be ≥ 0, got {e}")));
                    }
                }
            }
            ExperimentKind::Simulate => {}
        }
        Ok(())
    }

    /// Grid of the quadrature operator (doubled half-width under Neumann).
    pub fn operator_grid(&self) -> Result<Grid> {
        let l = if self.boundary.u.is_neumann() {
            2.0 * self.grid.half_width
        } else {
            self.grid.half_width
        };
        Grid::new(l, self.grid.m)
    }

    pub fn spectral_scheme(&self) -> SpectralScheme {
        self.spectral.map(|s| s.scheme).unwrap_or_default()
    }
}

/// Line (1-based) of `table.key` in TOML text. Falls back to the table
/// header when the key itself is absent.
fn locate_key(src: &str, path: &str) -> Option<usize> {
    let (table, key) = match path.rsplit_once('.') {
        Some((t, k)) => (t, k),
        None => ("", path),
    };
    let mut current = String::new();
    let mut header_line = None;
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if let Some(h) = line.strip_prefix('[') {
            current = h.trim_start_matches('[').trim_end_matches(']').trim().to_string();
            if current == table || current == path {
                header_line = header_line.or(Some(i + 1));
            }
            continue;
        }
        if current == table {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    header_line
}

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
}

const PRESETS: &[Preset] = &[
    Preset { name: "mms-benchmark", summary: "manufactured solution on [-1, 1], dt = 2h" },
    Preset { name: "pulse-exp-dirichlet", summary: "exponential σ = 3.4, Dirichlet (u, v) = (1, 0)" },
    Preset { name: "pulse-exp-neumann", summary: "exponential σ = 3.4, Neumann collar" },
    Preset { name: "pulse-exp-free", summary: "exponential σ = 3.4, free decay q = 2" },
    Preset { name: "pulse-exp-periodic", summary: "exponential σ = 3.4, spectral IMEX-BDF2" },
    Preset { name: "pulse-exp4-dirichlet", summary: "exponential σ = 4, Dirichlet" },
    Preset { name: "pulse-exp4-neumann", summary: "exponential σ = 4, Neumann" },
    Preset { name: "pulse-exp4-free", summary: "exponential σ = 4, free" },
    Preset { name: "pulse-exp4-periodic", summary: "exponential σ = 4, spectral" },
    Preset { name: "pulse-alg-dirichlet", summary: "algebraic a = 0.42, Dirichlet" },
    Preset { name: "pulse-alg-neumann", summary: "algebraic a = 0.42, Neumann" },
    Preset { name: "pulse-alg-free", summary: "algebraic a = 0.42, free" },
    Preset { name: "pulse-alg-periodic", summary: "algebraic a = 0.42, spectral" },
    Preset { name: "pulse-alg039-dirichlet", summary: "algebraic a = 0.39, Dirichlet" },
    Preset { name: "pulse-alg039-neumann", summary: "algebraic a = 0.39, Neumann" },
    Preset { name: "pulse-alg039-free", summary: "algebraic a = 0.39, free" },
    Preset { name: "pulse-alg039-periodic", summary: "algebraic a = 0.39, spectral" },
    Preset { name: "self-convergence", summary: "Neumann σ = 4 self-convergence against a fine reference" },
    Preset { name: "domain-size-compare", summary: "σ = 3.4 free: L = 75/4 against L = 25" },
    Preset { name: "free-vs-periodic", summary: "σ = 3.4: free quadrature against periodic spectral" },
    Preset { name: "determinant", summary: "quasilinear determinant on the σ = 3.4 free pulse" },
];

pub fn presets() -> &'static [Preset] {
    PRESETS
}

/// Physical half-width of the pulse experiments.
pub const PULSE_HALF_WIDTH: f64 = 75.0 / 4.0;

/// Desk-scale pulse horizon.
pub const DESK_HORIZON: f64 = 300.0;

fn pulse_base(kernel: KernelSpec, boundary: &str, desk: bool) -> RunConfig {
    let (bu, bv, solver) = match boundary {
        "dirichlet" => (
            BoundarySpec::Dirichlet { value: 1.0 },
            BoundarySpec::Dirichlet { value: 0.0 },
            SolverKind::Quadrature,
        ),
        "neumann" => (
            BoundarySpec::Neumann { decay: 2.0, far_field: 1.0 },
            BoundarySpec::Neumann { decay: 2.0, far_field: 0.0 },
            SolverKind::Quadrature,
        ),
        "free" => (
            BoundarySpec::Free { decay: 2.0, far_field: 1.0 },
            BoundarySpec::Free { decay: 2.0, far_field: 0.0 },
            SolverKind::Quadrature,
        ),
        _ => (BoundarySpec::Periodic, BoundarySpec::Periodic, SolverKind::Spectral),
    };
    let neumann = boundary == "neumann";
    // Neumann grids cover twice the physical domain at the same mesh size.
    let m = match (desk, neumann) {
        (true, false) => 1 << 10,
        (true, true) => 1 << 11,
        (false, _) => 1 << 13,
    };
    let stepper = if desk {
        StepperSpec {
            dt: 0.02,
            nmax: None,
            horizon: Some(DESK_HORIZON),
            tol: -1.0,
            checkpoint_every: 1000,
        }
    } else {
        StepperSpec {
            dt: 1.5e-4,
            nmax: Some(100_000_000),
            horizon: None,
            tol: 1e-8,
            checkpoint_every: 100_000,
        }
    };
    RunConfig {
        kind: ExperimentKind::Simulate,
        solver,
        kernel,
        grid: GridSpec { half_width: PULSE_HALF_WIDTH, m },
        boundary: BoundarySpecs { u: bu, v: bv },
        params: GrayScottParams::pulse(),
        initial: InitialSpec::default(),
        stepper,
        output: OutputSpec::default(),
        spectral: (solver == SolverKind::Spectral).then(SpectralSpec::default),
        convergence: None,
        compare: None,
        determinant: None,
    }
}

/// Named configuration at full scale, or reduced with `desk`.
pub fn preset(name: &str, desk: bool) -> Result<RunConfig> {
    let exp = |s| KernelSpec { family: KernelFamily::Exponential, shape: s };
    let alg = |a| KernelSpec { family: KernelFamily::Algebraic, shape: a };
    if let Some(rest) = name.strip_prefix("pulse-") {
        let (kern, bc) = rest
            .split_once('-')
            .ok_or_else(|| Error::Config(format!("unknown preset {name}")))?;
        let kernel = match kern {
            "exp" => exp(3.4),
            "exp4" => exp(4.0),
            "alg" => alg(0.42),
            "alg039" => alg(0.39),
            _ => return Err(Error::Config(format!("unknown preset {name}"))),
        };
        if !["dirichlet", "neumann", "free", "periodic"].contains(&bc) {
            return Err(Error::Config(format!("unknown preset {name}")));
        }
        return Ok(pulse_base(kernel, bc, desk));
    }
    let cfg = match name {
        "mms-benchmark" => {
            let levels: Vec<usize> = if desk {
                vec![80, 160, 320, 640]
            } else {
                vec![80, 160, 320, 640, 1280, 2560]
            };
            RunConfig {
                kind: ExperimentKind::Mms,
                solver: SolverKind::Quadrature,
                kernel: exp(1.0),
                grid: GridSpec { half_width: 1.0, m: levels[0] },
                boundary: BoundarySpecs {
                    u: BoundarySpec::Dirichlet { value: 0.0 },
                    v: BoundarySpec::Dirichlet { value: 0.0 },
                },
                params: GrayScottParams::manufactured(),
                initial: InitialSpec::default(),
                stepper: StepperSpec {
                    dt: 0.05,
                    nmax: None,
                    horizon: Some(1.0),
                    tol: -1.0,
                    checkpoint_every: 0,
                },
                output: OutputSpec::default(),
                spectral: None,
                convergence: Some(ConvergenceSpec {
                    levels,
                    reference_m: None,
                    dts: None,
                    dt_per_h: Some(2.0),
                    norm: Norm::L2,
                }),
                compare: None,
                determinant: None,
            }
        }
        "self-convergence" => {
            let mut c = pulse_base(exp(4.0), "neumann", desk);
            c.kind = ExperimentKind::PulseConvergence;
            if desk {
                c.grid.half_width = DESK_CONVERGENCE_HALF_WIDTH;
                let h0 = 4.0 * DESK_CONVERGENCE_HALF_WIDTH / f64::from(1u32 << 8);
                c.stepper = StepperSpec {
                    dt: DESK_CONVERGENCE_DT_PER_H * h0,
                    nmax: None,
                    horizon: Some(DESK_CONVERGENCE_HORIZON),
                    tol: -1.0,
                    checkpoint_every: 0,
                };
                c.convergence = Some(ConvergenceSpec {
                    levels: vec![1 << 8, 1 << 9, 1 << 10, 1 << 11],
                    reference_m: Some(1 << 12),
                    dts: None,
                    dt_per_h: Some(DESK_CONVERGENCE_DT_PER_H),
                    norm: Norm::L1,
                });
            } else {
                c.convergence = Some(ConvergenceSpec {
                    levels: vec![1 << 9, 1 << 10, 1 << 11, 1 << 12, 1 << 13],
                    reference_m: Some(1 << 14),
                    dts: Some(vec![
                        0.0025, 0.00125, 0.000625, 0.0003125, 0.00015625, 0.000078125,
                    ]),
                    dt_per_h: None,
                    norm: Norm::L1,
                });
            }
            c.grid.m = c.convergence.as_ref().expect("set").levels[0];
            c
        }
        "domain-size-compare" => {
            let mut c = pulse_base(exp(3.4), "free", desk);
            c.kind = ExperimentKind::Compare;
            let (m1, m2) = if desk { (1 << 10, 1 << 11) } else { (1 << 12, 1 << 13) };
            c.compare = Some(CompareSpec {
                legs: vec![
                    LegSpec {
                        name: "L=75/4".into(),
                        solver: None,
                        half_width: Some(PULSE_HALF_WIDTH),
                        m: Some(m1),
                        dt: None,
                        boundary: None,
                    },
                    LegSpec {
                        name: "L=25".into(),
                        solver: None,
                        half_width: Some(25.0),
                        m: Some(m2),
                        dt: None,
                        boundary: None,
                    },
                ],
            });
            c
        }
        "free-vs-periodic" => {
            let mut c = pulse_base(exp(3.4), "free", desk);
            c.kind = ExperimentKind::Compare;
            c.spectral = Some(SpectralSpec::default());
            c.compare = Some(CompareSpec {
                legs: vec![
                    LegSpec {
                        name: "free".into(),
                        solver: None,
                        half_width: None,
                        m: None,
                        dt: None,
                        boundary: None,
                    },
                    LegSpec {
                        name: "periodic".into(),
                        solver: Some(SolverKind::Spectral),
                        half_width: None,
                        m: None,
                        dt: None,
                        boundary: Some(BoundarySpecs {
                            u: BoundarySpec::Periodic,
                            v: BoundarySpec::Periodic,
                        }),
                    },
                ],
            });
            c
        }
        "determinant" => {
            let mut c = pulse_base(exp(3.4), "free", desk);
            c.kind = ExperimentKind::Determinant;
            c.determinant = Some(DeterminantSpec::default());
            c
        }
        _ => return Err(Error::Config(format!("unknown preset {name}"))),
    };
    Ok(cfg)
}

/// Desk self-convergence setup: physical half-width, `dt / h` and horizon.
pub const DESK_CONVERGENCE_HALF_WIDTH: f64 = 75.0 / 16.0;
pub const DESK_CONVERGENCE_DT_PER_H: f64 = 0.25;
pub const DESK_CONVERGENCE_HORIZON: f64 = 10.0;
