//! Scenario configs, parameter sweeps, figure presets and CSV output.
//!
//! Config files are flat `key = value` text. `#` starts a comment.
//!
//! ```text
//! name = fig1
//! initial_state = horodecki      # or upb
//! a = 4
//! bath.kind = bosonic            # spin, analytic_gaussian, analytic_exponential
//! bath.L = 200
//! bath.g = 2
//! bath.T = 1
//! bath.lo = 50
//! bath.delta = 5
//! # bath.frequencies = 50.5, 51.25   (replaces sampling)
//! # bath.gamma = 1.0                 (analytic kinds)
//! t = 0
//! seed = 1
//! sweep = t 0 1 1001             # variable lo hi steps
//! sweep = T list 1, 10, 40       # or an explicit list
//! outputs = absF1, R
//! output_path = fig1.csv
//! ```
//!
//! Sweepable variables: `t`, `T`, `g`, `delta`, `L`, `a`. At most two
//! `sweep` lines; the first is the outer axis.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::baths::{sample_frequencies, BathKind, BathSpec, FactorTable, PRNG_ID};
use crate::dynamics::{dephase, horodecki_n_closed, horodecki_r_closed};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{horodecki_state, upb_state, DensityMatrix, DIM};
use crate::witnesses::{negativity, realignment_witness};

pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Seed used by every preset unless overridden.
pub const DEFAULT_SEED: u64 = 1;

/// Tolerance of the closed-form cross-check on Horodecki inputs.
pub const EQUIVALENCE_TOL: f64 = 1e-9;

/// Largest negativity accepted for the UPB state in a spin bath.
pub const SPIN_UPB_NEGATIVITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialState {
    Horodecki(f64),
    Upb,
}

impl InitialState {
    fn density_matrix(self) -> Result<DensityMatrix> {
        match self {
            InitialState::Horodecki(a) => horodecki_state(a),
            InitialState::Upb => Ok(upb_state()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    Time,
    Temperature,
    Coupling,
    Delta,
    Size,
    A,
}

impl Variable {
    pub fn key(self) -> &'static str {
        match self {
            Variable::Time => "t",
            Variable::Temperature => "T",
            Variable::Coupling => "g",
            Variable::Delta => "delta",
            Variable::Size => "L",
            Variable::A => "a",
        }
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "t" => Variable::Time,
            "T" => Variable::Temperature,
            "g" => Variable::Coupling,
            "delta" => Variable::Delta,
            "L" => Variable::Size,
            "a" => Variable::A,
            other => return Err(Error::Config(format!("unknown sweep variable '{other}'"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AxisValues {
    Range { lo: f64, hi: f64, steps: usize },
    List(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub variable: Variable,
    pub values: AxisValues,
}

impl Axis {
    pub fn range(variable: Variable, lo: f64, hi: f64, steps: usize) -> Self {
        Self {
            variable,
            values: AxisValues::Range { lo, hi, steps },
        }
    }

    pub fn list(variable: Variable, values: Vec<f64>) -> Self {
        Self {
            variable,
            values: AxisValues::List(values),
        }
    }

    /// Grid points in ascending order.
    pub fn points(&self) -> Vec<f64> {
        match &self.values {
            AxisValues::Range { lo, hi, steps } => {
                let n = *steps - 1;
                (0..*steps)
                    .map(|i| if i == n { *hi } else { lo + (hi - lo) * i as f64 / n as f64 })
                    .collect()
            }
            AxisValues::List(v) => v.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        let name = self.variable.key();
        match &self.values {
            AxisValues::Range { lo, hi, steps } => {
                if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
                    return Err(Error::Config(format!("sweep {name}: need lo < hi, got {lo} .. {hi}")));
                }
                if *steps < 2 {
                    return Err(Error::Config(format!("sweep {name}: need at least 2 steps, got {steps}")));
                }
            }
            AxisValues::List(v) => {
                if v.len() < 2 {
                    return Err(Error::Config(format!("sweep {name}: list needs at least 2 values")));
                }
                if v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Config(format!(
                        "sweep {name}: list values must be finite and strictly increasing"
                    )));
                }
            }
        }
        let pts = self.points();
        let (first, last) = (pts[0], pts[pts.len() - 1]);
        let ok = match self.variable {
            Variable::Time | Variable::Temperature | Variable::Delta => first >= 0.0,
            Variable::Coupling => first > 0.0,
            Variable::Size => first >= 1.0 && pts.iter().all(|x| x.fract() == 0.0),
            Variable::A => first >= 2.0 && last <= 5.0,
        };
        if !ok {
            return Err(Error::Config(format!("sweep {name}: values out of range")));
        }
        Ok(())
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.values {
            AxisValues::Range { lo, hi, steps } => write!(f, "{} {lo} {hi} {steps}", self.variable.key()),
            AxisValues::List(v) => {
                let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{} list {}", self.variable.key(), items.join(", "))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Output {
    R,
    N,
    AbsF1,
    AbsF3,
    RhoDump,
}

impl Output {
    pub fn key(self) -> &'static str {
        match self {
            Output::R => "R",
            Output::N => "N",
            Output::AbsF1 => "absF1",
            Output::AbsF3 => "absF3",
            Output::RhoDump => "rho_dump",
        }
    }
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "R" => Output::R,
            "N" => Output::N,
            "absF1" => Output::AbsF1,
            "absF3" => Output::AbsF3,
            "rho_dump" => Output::RhoDump,
            other => return Err(Error::Config(format!("unknown output '{other}'"))),
        })
    }
}

/// Recipe for the environment; frequencies are sampled at run time.
#[derive(Clone, Debug, PartialEq)]
pub struct BathConfig {
    pub kind: BathKind,
    pub size: usize,
    pub coupling: f64,
    pub temperature: f64,
    pub lo: f64,
    pub delta: f64,
    pub frequencies: Option<Vec<f64>>,
    pub rate: Option<f64>,
}

impl Default for BathConfig {
    fn default() -> Self {
        Self {
            kind: BathKind::Bosonic,
            size: 200,
            coupling: 1.0,
            temperature: 1.0,
            lo: 50.0,
            delta: 5.0,
            frequencies: None,
            rate: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub initial_state: InitialState,
    pub bath: BathConfig,
    /// Time used when `t` is not swept.
    pub time: f64,
    pub axes: Vec<Axis>,
    pub outputs: Vec<Output>,
    pub output_path: Option<String>,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = String::from("scenario");
        let mut state_kind: Option<String> = None;
        let mut a: Option<f64> = None;
        let mut bath = BathConfig::default();
        let mut time = 0.0;
        let mut axes = Vec::new();
        let mut outputs = None;
        let mut output_path = None;
        let mut seed = DEFAULT_SEED;
        let mut seen = BTreeSet::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ctx = |msg: String| Error::Config(format!("line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| ctx(format!("expected 'key = value', got '{line}'")))?;
            if key != "sweep" && !seen.insert(key.to_string()) {
                return Err(ctx(format!("duplicate key '{key}'")));
            }
            let num = |v: &str| -> Result<f64> {
                v.parse::<f64>()
                    .map_err(|_| ctx(format!("'{key}' expects a number, got '{v}'")))
            };
            let int = |v: &str| -> Result<u64> {
                v.parse::<u64>()
                    .map_err(|_| ctx(format!("'{key}' expects a non-negative integer, got '{v}'")))
            };
            match key {
                "name" => name = value.to_string(),
                "initial_state" => state_kind = Some(value.to_string()),
                "a" => a = Some(num(value)?),
                "t" => time = num(value)?,
                "seed" => seed = int(value)?,
                "output_path" => output_path = Some(value.to_string()),
                "outputs" => {
                    outputs = Some(
                        split_list(value)
                            .map(Output::from_str)
                            .collect::<Result<Vec<_>>>()
                            .map_err(|e| ctx(e.to_string()))?,
                    )
                }
                "bath.kind" => bath.kind = value.parse().map_err(|e: Error| ctx(e.to_string()))?,
                "bath.L" => bath.size = int(value)? as usize,
                "bath.g" => bath.coupling = num(value)?,
                "bath.T" => bath.temperature = num(value)?,
                "bath.lo" => bath.lo = num(value)?,
                "bath.delta" => bath.delta = num(value)?,
                "bath.gamma" => bath.rate = Some(num(value)?),
                "bath.frequencies" => {
                    bath.frequencies = Some(split_list(value).map(num).collect::<Result<Vec<_>>>()?)
                }
                "sweep" => axes.push(parse_axis(value).map_err(|e| ctx(e.to_string()))?),
                other => return Err(ctx(format!("unknown key '{other}'"))),
            }
        }

        let initial_state = match state_kind.as_deref() {
            Some("horodecki") => InitialState::Horodecki(a.unwrap_or(4.0)),
            Some("upb") => {
                if a.is_some() {
                    return Err(Error::Config("'a' only applies to the horodecki state".into()));
                }
                InitialState::Upb
            }
            Some(other) => return Err(Error::Config(format!("unknown initial_state '{other}'"))),
            None => return Err(Error::Config("missing 'initial_state'".into())),
        };
        let cfg = Self {
            name,
            initial_state,
            bath,
            time,
            axes,
            outputs: outputs.ok_or_else(|| Error::Config("missing 'outputs'".into()))?,
            output_path,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn swept(&self, v: Variable) -> bool {
        self.axes.iter().any(|a| a.variable == v)
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.len() > 2 {
            return Err(Error::Config(format!("at most 2 sweep axes, got {}", self.axes.len())));
        }
        if self.axes.len() == 2 && self.axes[0].variable == self.axes[1].variable {
            return Err(Error::Config("the two sweep axes must differ".into()));
        }
        for axis in &self.axes {
            axis.validate()?;
        }
        if self.outputs.is_empty() {
            return Err(Error::Config("'outputs' is empty".into()));
        }
        let mut uniq = BTreeSet::new();
        if !self.outputs.iter().all(|o| uniq.insert(o.key())) {
            return Err(Error::Config("duplicate entry in 'outputs'".into()));
        }
        if !(self.time.is_finite() && self.time >= 0.0) {
            return Err(Error::Config(format!("t must be >= 0, got {}", self.time)));
        }
        match self.initial_state {
            InitialState::Horodecki(a) if !(2.0..=5.0).contains(&a) => {
                return Err(Error::Config(format!("a = {a} is outside [2, 5]")));
            }
            InitialState::Upb if self.swept(Variable::A) => {
                return Err(Error::Config("sweeping 'a' requires the horodecki state".into()));
            }
            _ => {}
        }
        let b = &self.bath;
        if b.kind.is_analytic() {
            let rate = b.rate.ok_or_else(|| Error::Config("analytic baths need 'bath.gamma'".into()))?;
            if !(rate.is_finite() && rate > 0.0) {
                return Err(Error::Config(format!("bath.gamma must be positive, got {rate}")));
            }
            for v in [Variable::Temperature, Variable::Coupling, Variable::Delta, Variable::Size] {
                if self.swept(v) {
                    return Err(Error::Config(format!(
                        "analytic baths cannot sweep '{}'",
                        v.key()
                    )));
                }
            }
            return Ok(());
        }
        if b.rate.is_some() {
            return Err(Error::Config("'bath.gamma' only applies to analytic baths".into()));
        }
        if !(b.coupling.is_finite() && b.coupling > 0.0) {
            return Err(Error::Config(format!("bath.g must be positive, got {}", b.coupling)));
        }
        if !(b.temperature.is_finite() && b.temperature >= 0.0) {
            return Err(Error::Config(format!("bath.T must be >= 0, got {}", b.temperature)));
        }
        match &b.frequencies {
            Some(freqs) => {
                if self.swept(Variable::Size) || self.swept(Variable::Delta) {
                    return Err(Error::Config(
                        "explicit bath.frequencies cannot be combined with L or delta sweeps".into(),
                    ));
                }
                if freqs.is_empty() || freqs.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                    return Err(Error::Config("bath.frequencies must be positive".into()));
                }
            }
            None => {
                if !self.swept(Variable::Size) && b.size == 0 {
                    return Err(Error::Config("bath.L must be at least 1".into()));
                }
                let delta_ok = self.swept(Variable::Delta) || b.delta >= 0.0;
                if !(b.lo.is_finite() && b.lo >= 0.0 && b.delta.is_finite() && delta_ok) {
                    return Err(Error::Config(format!(
                        "invalid frequency range lo = {}, delta = {}",
                        b.lo, b.delta
                    )));
                }
            }
        }
        Ok(())
    }

    /// Canonical text form; parses back to an equal config.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let b = &self.bath;
        let _ = writeln!(s, "name = {}", self.name);
        match self.initial_state {
            InitialState::Horodecki(a) => {
                let _ = writeln!(s, "initial_state = horodecki");
                let _ = writeln!(s, "a = {a}");
            }
            InitialState::Upb => {
                let _ = writeln!(s, "initial_state = upb");
            }
        }
        let _ = writeln!(s, "bath.kind = {}", b.kind);
        if let Some(rate) = b.rate {
            let _ = writeln!(s, "bath.gamma = {rate}");
        } else {
            let _ = writeln!(s, "bath.L = {}", b.size);
            let _ = writeln!(s, "bath.g = {}", b.coupling);
            let _ = writeln!(s, "bath.T = {}", b.temperature);
            let _ = writeln!(s, "bath.lo = {}", b.lo);
            let _ = writeln!(s, "bath.delta = {}", b.delta);
            if let Some(freqs) = &b.frequencies {
                let items: Vec<String> = freqs.iter().map(|w| w.to_string()).collect();
                let _ = writeln!(s, "bath.frequencies = {}", items.join(", "));
            }
        }
        let _ = writeln!(s, "t = {}", self.time);
        let _ = writeln!(s, "seed = {}", self.seed);
        for axis in &self.axes {
            let _ = writeln!(s, "sweep = {axis}");
        }
        let outs: Vec<&str> = self.outputs.iter().map(|o| o.key()).collect();
        let _ = writeln!(s, "outputs = {}", outs.join(", "));
        if let Some(p) = &self.output_path {
            let _ = writeln!(s, "output_path = {p}");
        }
        s
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_axis(value: &str) -> Result<Axis> {
    let (var, rest) = value
        .trim()
        .split_once(char::is_whitespace)
        .ok_or_else(|| Error::Config(format!("bad sweep '{value}'")))?;
    let variable: Variable = var.parse()?;
    let rest = rest.trim();
    if let Some(list) = rest.strip_prefix("list") {
        let values = split_list(list)
            .map(|v| v.parse::<f64>().map_err(|_| Error::Config(format!("bad list value '{v}'"))))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Axis::list(variable, values));
    }
    let parts: Vec<&str> = rest.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("sweep '{value}': expected 'var lo hi steps' or 'var list v1, v2, ...'")));
    }
    let bad = |p: &str| Error::Config(format!("sweep '{value}': bad number '{p}'"));
    let lo = parts[0].parse::<f64>().map_err(|_| bad(parts[0]))?;
    let hi = parts[1].parse::<f64>().map_err(|_| bad(parts[1]))?;
    let steps = parts[2].parse::<usize>().map_err(|_| bad(parts[2]))?;
    Ok(Axis::range(variable, lo, hi, steps))
}

/// Parameters at one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Point {
    t: f64,
    temperature: f64,
    coupling: f64,
    delta: f64,
    size: usize,
    a: f64,
}

impl Point {
    fn set(&mut self, v: Variable, x: f64) {
        match v {
            Variable::Time => self.t = x,
            Variable::Temperature => self.temperature = x,
            Variable::Coupling => self.coupling = x,
            Variable::Delta => self.delta = x,
            Variable::Size => self.size = x as usize,
            Variable::A => self.a = x,
        }
    }

    fn bath_key(&self) -> (usize, u64, u64, u64) {
        (
            self.size,
            self.delta.to_bits(),
            self.coupling.to_bits(),
            self.temperature.to_bits(),
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t = {}, T = {}, g = {}, delta = {}, L = {}, a = {}",
            self.t, self.temperature, self.coupling, self.delta, self.size, self.a
        )
    }
}

/// One grid point: axis values followed by the requested quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub axis_values: Vec<f64>,
    pub values: Vec<f64>,
}

/// Output of [`run_scenario`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioResult {
    pub config: ScenarioConfig,
    pub columns: Vec<String>,
    pub rows: Vec<ResultRow>,
}

impl ScenarioResult {
    /// Values of column `name`, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        let n_axes = self.config.axes.len();
        Some(
            self.rows
                .iter()
                .map(|r| if idx < n_axes { r.axis_values[idx] } else { r.values[idx - n_axes] })
                .collect(),
        )
    }
}

fn quantity_columns(outputs: &[Output]) -> Vec<String> {
    let mut cols = Vec::new();
    for o in outputs {
        match o {
            Output::RhoDump => {
                for i in 0..DIM {
                    for j in 0..DIM {
                        cols.push(format!("rho_{i}{j}_re"));
                        cols.push(format!("rho_{i}{j}_im"));
                    }
                }
            }
            other => cols.push(other.key().to_string()),
        }
    }
    cols
}

fn build_bath(cfg: &ScenarioConfig, p: &Point, freqs: &HashMap<(usize, u64), Vec<f64>>) -> Result<BathSpec> {
    let b = &cfg.bath;
    if b.kind.is_analytic() {
        return BathSpec::analytic(b.kind, b.rate.unwrap_or(f64::NAN));
    }
    let frequencies = match &b.frequencies {
        Some(f) => f.clone(),
        None => freqs[&(p.size, p.delta.to_bits())].clone(),
    };
    BathSpec::new(b.kind, p.coupling, p.temperature, frequencies)
}

fn evaluate(cfg: &ScenarioConfig, p: &Point, bath: &BathSpec) -> Result<Vec<f64>> {
    let state = match cfg.initial_state {
        InitialState::Horodecki(_) => InitialState::Horodecki(p.a),
        InitialState::Upb => InitialState::Upb,
    };
    let table: FactorTable = bath.factor_table(p.t)?;
    let rho = dephase(&state.density_matrix()?, &table)?;
    let needs = |o: Output| cfg.outputs.contains(&o);
    let spin_upb = state == InitialState::Upb && bath.kind() == BathKind::Spin;
    let horodecki = matches!(state, InitialState::Horodecki(_));

    let r = if needs(Output::R) || horodecki { Some(realignment_witness(&rho)?) } else { None };
    let n = if needs(Output::N) || horodecki || spin_upb { Some(negativity(&rho)?) } else { None };
    let (f1, f3) = (table.f1().norm(), table.f3().norm());

    if horodecki {
        let f2 = table.f2().norm();
        let rc = horodecki_r_closed(p.a, f1, f2, f3)?;
        let nc = horodecki_n_closed(p.a, f1, f2, f3)?;
        let (r, n) = (r.unwrap(), n.unwrap());
        if (r - rc).abs() > EQUIVALENCE_TOL || (n - nc).abs() > EQUIVALENCE_TOL {
            return Err(Error::InvariantViolation(format!(
                "closed forms disagree with the matrix pipeline: R {r} vs {rc}, N {n} vs {nc}"
            )));
        }
    }
    if spin_upb && n.unwrap() > SPIN_UPB_NEGATIVITY_TOL {
        return Err(Error::InvariantViolation(format!(
            "UPB state acquired negativity {} in a spin bath",
            n.unwrap()
        )));
    }

    let mut values = Vec::new();
    for o in &cfg.outputs {
        match o {
            Output::R => values.push(r.unwrap()),
            Output::N => values.push(n.unwrap()),
            Output::AbsF1 => values.push(f1),
            Output::AbsF3 => values.push(f3),
            Output::RhoDump => {
                for z in rho.matrix().as_slice() {
                    values.push(z.re);
                    values.push(z.im);
                }
            }
        }
    }
    for (o, v) in cfg.outputs.iter().zip(values.iter()) {
        let ok = match o {
            Output::R | Output::N => v.is_finite() && *v >= 0.0,
            Output::AbsF1 | Output::AbsF3 => (0.0..=1.0).contains(v),
            Output::RhoDump => true,
        };
        if !ok {
            return Err(Error::InvariantViolation(format!("{} = {v} is out of range", o.key())));
        }
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvariantViolation("non-finite output".into()));
    }
    Ok(values)
}

/// Evaluates every grid point of `cfg`. Rows come out ordered by the first
/// axis, then the second; grid points are evaluated in parallel.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    cfg.validate()?;
    let base = Point {
        t: cfg.time,
        temperature: cfg.bath.temperature,
        coupling: cfg.bath.coupling,
        delta: cfg.bath.delta,
        size: cfg.bath.size,
        a: match cfg.initial_state {
            InitialState::Horodecki(a) => a,
            InitialState::Upb => f64::NAN,
        },
    };

    let mut grid: Vec<(Vec<f64>, Point)> = vec![(Vec::new(), base)];
    for axis in &cfg.axes {
        let pts = axis.points();
        grid = grid
            .into_iter()
            .flat_map(|(vals, p)| {
                pts.iter().map(move |&x| {
                    let mut q = p;
                    q.set(axis.variable, x);
                    let mut v = vals.clone();
                    v.push(x);
                    (v, q)
                })
            })
            .collect();
    }

    // frequencies drawn once per (L, delta); lo and seed are fixed per config
    let mut freqs: HashMap<(usize, u64), Vec<f64>> = HashMap::new();
    if !cfg.bath.kind.is_analytic() && cfg.bath.frequencies.is_none() {
        for (_, p) in &grid {
            if let std::collections::hash_map::Entry::Vacant(slot) = freqs.entry((p.size, p.delta.to_bits())) {
                slot.insert(sample_frequencies(cfg.bath.lo, p.delta, p.size, cfg.seed)?);
            }
        }
    }

    let mut bath_keys: Vec<(usize, u64, u64, u64)> = grid.iter().map(|(_, p)| p.bath_key()).collect();
    bath_keys.sort_unstable();
    bath_keys.dedup();
    let representative: HashMap<_, Point> = grid.iter().map(|(_, p)| (p.bath_key(), *p)).collect();
    let baths: HashMap<_, BathSpec> = bath_keys
        .par_iter()
        .map(|k| build_bath(cfg, &representative[k], &freqs).map(|b| (*k, b)))
        .collect::<Result<_>>()?;

    let rows = grid
        .par_iter()
        .map(|(axis_values, p)| {
            evaluate(cfg, p, &baths[&p.bath_key()])
                .map(|values| ResultRow {
                    axis_values: axis_values.clone(),
                    values,
                })
                .map_err(|e| match e {
                    Error::InvariantViolation(msg) => Error::InvariantViolation(format!("at {p}: {msg}")),
                    other => other,
                })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut columns: Vec<String> = cfg.axes.iter().map(|a| a.variable.key().to_string()).collect();
    columns.extend(quantity_columns(&cfg.outputs));
    Ok(ScenarioResult {
        config: cfg.clone(),
        columns,
        rows,
    })
}

fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the comment block, header and rows.
pub fn write_csv<W: Write>(result: &ScenarioResult, mut out: W) -> Result<()> {
    if result.rows.is_empty() {
        return Err(Error::Config("no rows to write".into()));
    }
    let width = result.columns.len();
    writeln!(out, "# version = {VERSION}")?;
    writeln!(out, "# seed = {}", result.config.seed)?;
    writeln!(out, "# prng = {PRNG_ID}")?;
    writeln!(out, "# config:")?;
    for line in result.config.to_config_string().lines() {
        writeln!(out, "#   {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&result.columns)?;
    for row in &result.rows {
        if row.axis_values.len() + row.values.len() != width {
            return Err(Error::Shape("row width does not match header".into()));
        }
        w.write_record(row.axis_values.iter().chain(row.values.iter()).map(|&x| fmt_num(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `result` to `path` as CSV.
pub fn emit_csv(result: &ScenarioResult, path: impl AsRef<Path>) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_csv(result, file)
}

/// Dumps a density matrix as 9 rows of 18 columns (re, im interleaved).
pub fn write_state_csv<W: Write>(rho: &DensityMatrix, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for i in 0..DIM {
        let mut rec = Vec::with_capacity(2 * DIM);
        for j in 0..DIM {
            let z = rho.entry(i, j);
            rec.push(fmt_num(z.re));
            rec.push(fmt_num(z.im));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a matrix written by [`write_state_csv`]; `#` lines are ignored.
pub fn read_state_csv<R: BufRead>(input: R) -> Result<DensityMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut data = Vec::with_capacity(DIM * DIM);
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != 2 * DIM {
            return Err(Error::Shape(format!("expected {} columns, got {}", 2 * DIM, rec.len())));
        }
        let nums = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| Error::Shape(format!("bad number '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        data.extend(nums.chunks(2).map(|c| C64::new(c[0], c[1])));
        rows += 1;
    }
    if rows != DIM {
        return Err(Error::Shape(format!("expected {DIM} rows, got {rows}")));
    }
    DensityMatrix::new(ComplexMatrix::new(DIM, DIM, data)?)
}

/// Names accepted by [`figure_preset`].
pub const PRESET_NAMES: &[&str] = &[
    "fig1", "fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig4c", "fig5a", "fig5b", "fig5c", "fig5d",
    "fig6a", "fig6b", "fig7a", "fig7b", "fig7c", "fig8",
];

fn bath(kind: BathKind, size: usize, coupling: f64, temperature: f64, lo: f64, delta: f64) -> BathConfig {
    BathConfig {
        kind,
        size,
        coupling,
        temperature,
        lo,
        delta,
        frequencies: None,
        rate: None,
    }
}

/// Config reproducing one of the figure setups. `fig3`..`fig7` alias the
/// `(a)` panel. Frequencies use [`DEFAULT_SEED`].
pub fn figure_preset(name: &str) -> Result<ScenarioConfig> {
    use BathKind::{Bosonic, Spin};
    use Output::{AbsF1, N, R};
    use Variable::*;

    let canonical = match name {
        "fig3" | "fig4" | "fig5" | "fig6" | "fig7" => format!("{name}a"),
        other => other.to_string(),
    };
    let horodecki = InitialState::Horodecki(4.0);
    let upb = InitialState::Upb;
    let t_axis = |hi: f64, steps: usize| Axis::range(Time, 0.0, hi, steps);
    let (initial_state, bath, time, axes, outputs) = match canonical.as_str() {
        // |F1| crossing the threshold line, collapse and revival
        "fig1" => (horodecki, bath(Bosonic, 200, 2.0, 1.0, 50.0, 5.0), 0.0, vec![t_axis(1.0, 1001)], vec![AbsF1, R]),
        // low-frequency region: Gaussian decay, faster for larger g
        "fig2" => (
            horodecki,
            bath(Bosonic, 200, 0.1, 1.0, 0.0, 5.0),
            0.0,
            vec![Axis::list(Coupling, vec![0.1, 0.2, 0.3]), t_axis(0.2, 401)],
            vec![R],
        ),
        "fig3a" => (
            horodecki,
            bath(Bosonic, 200, 2.0, 1.0, 50.0, 5.0),
            0.0,
            vec![Axis::list(Coupling, vec![0.5, 1.0, 2.0, 5.0]), t_axis(1.0, 1001)],
            vec![R],
        ),
        "fig3b" => (
            horodecki,
            bath(Bosonic, 200, 2.0, 1.0, 50.0, 0.0),
            0.0,
            vec![Axis::list(Delta, vec![0.0, 1.0, 5.0, 10.0]), t_axis(1.0, 1001)],
            vec![R],
        ),
        "fig4a" => (
            horodecki,
            bath(Bosonic, 200, 3.0, 1.0, 50.0, 8.0),
            0.0,
            vec![t_axis(0.3, 151), Axis::range(Temperature, 1.0, 100.0, 100)],
            vec![R],
        ),
        "fig4b" => (
            horodecki,
            bath(Bosonic, 200, 3.0, 1.0, 50.0, 8.0),
            0.0,
            vec![Axis::list(Temperature, vec![1.0, 20.0, 50.0, 100.0]), t_axis(0.3, 301)],
            vec![R],
        ),
        "fig4c" => (
            horodecki,
            bath(Bosonic, 200, 3.0, 1.0, 50.0, 8.0),
            0.003,
            vec![Axis::list(Size, vec![200.0, 1000.0, 5000.0]), Axis::range(Temperature, 0.0, 300.0, 301)],
            vec![R],
        ),
        // free entanglement appears for the UPB state
        "fig5a" => (upb, bath(Bosonic, 300, 1.0, 10.0, 50.0, 5.0), 0.0, vec![t_axis(1.0, 1001)], vec![R, N]),
        "fig5b" => (upb, bath(Bosonic, 300, 5.0, 10.0, 50.0, 5.0), 0.0, vec![t_axis(1.0, 1001)], vec![R, N]),
        "fig5c" => (upb, bath(Bosonic, 300, 5.0, 10.0, 50.0, 9.0), 0.0, vec![t_axis(1.0, 1001)], vec![R, N]),
        "fig5d" => (
            upb,
            bath(Bosonic, 300, 1.0, 10.0, 50.0, 5.0),
            0.0,
            vec![Axis::list(Time, vec![0.005, 0.115]), Axis::range(Temperature, 0.0, 300.0, 301)],
            vec![R, N],
        ),
        "fig6a" => (
            horodecki,
            bath(Spin, 300, 0.5, 15.0, 50.0, 5.0),
            0.0,
            vec![Axis::list(Coupling, vec![0.1, 0.5, 1.0]), t_axis(0.5, 1001)],
            vec![R],
        ),
        "fig6b" => (
            horodecki,
            bath(Spin, 300, 0.5, 15.0, 50.0, 0.0),
            0.0,
            vec![Axis::list(Delta, vec![0.0, 1.0, 5.0, 10.0]), t_axis(0.5, 1001)],
            vec![R],
        ),
        // flat at low T, sharp decay at high T
        "fig7a" => (
            horodecki,
            bath(Spin, 300, 0.5, 1.0, 50.0, 5.0),
            0.0,
            vec![t_axis(0.5, 251), Axis::range(Temperature, 1.0, 40.0, 40)],
            vec![R],
        ),
        "fig7b" => (
            horodecki,
            bath(Spin, 300, 0.5, 1.0, 50.0, 5.0),
            0.0,
            vec![Axis::list(Temperature, vec![1.0, 10.0, 40.0]), t_axis(0.5, 501)],
            vec![R],
        ),
        "fig7c" => (
            horodecki,
            bath(Spin, 300, 0.5, 1.0, 50.0, 5.0),
            0.005,
            vec![Axis::list(Size, vec![300.0, 1000.0, 5000.0]), Axis::range(Temperature, 1.0, 100.0, 100)],
            vec![R],
        ),
        // negativity must stay zero
        "fig8" => (
            upb,
            bath(Spin, 300, 0.5, 10.0, 50.0, 5.0),
            0.0,
            vec![Axis::list(Temperature, vec![10.0, 15.0, 35.0]), t_axis(0.5, 501)],
            vec![R, N],
        ),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    let cfg = ScenarioConfig {
        name: canonical.clone(),
        initial_state,
        bath,
        time,
        axes,
        outputs,
        output_path: Some(format!("{canonical}.csv")),
        seed: DEFAULT_SEED,
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const SAMPLE: &str = "
        # comment
        name = demo
        initial_state = horodecki
        a = 4
        bath.kind = bosonic
        bath.L = 20
        bath.g = 2
        bath.T = 1
        bath.lo = 50
        bath.delta = 5
        seed = 3
        sweep = t 0 0.2 5
        outputs = R, absF1
    ";

    #[test]
    fn parse_and_round_trip() {
        let cfg = ScenarioConfig::parse(SAMPLE).unwrap();
        assert_eq!(cfg.name, "demo");
        assert_eq!(cfg.initial_state, InitialState::Horodecki(4.0));
        assert_eq!(cfg.bath.size, 20);
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.axes, vec![Axis::range(Variable::Time, 0.0, 0.2, 5)]);
        assert_eq!(cfg.outputs, vec![Output::R, Output::AbsF1]);
        assert_eq!(ScenarioConfig::parse(&cfg.to_config_string()).unwrap(), cfg);
    }

    #[test]
    fn presets_round_trip() {
        for name in PRESET_NAMES {
            let cfg = figure_preset(name).unwrap();
            assert_eq!(&ScenarioConfig::parse(&cfg.to_config_string()).unwrap(), &cfg);
        }
    }

    #[test]
    fn config_errors() {
        let with = |extra: &str| ScenarioConfig::parse(&format!("{SAMPLE}\n{extra}"));
        assert!(matches!(with("sweep = T 1 1 10"), Err(Error::Config(_))));
        assert!(matches!(with("sweep = T 2 1 10"), Err(Error::Config(_))));
        assert!(matches!(with("sweep = T 0 1 1"), Err(Error::Config(_))));
        assert!(matches!(with("sweep = T 0 1 3\nsweep = g 1 2 3"), Err(Error::Config(_))));
        assert!(matches!(with("sweep = t 0 1 3"), Err(Error::Config(_))));
        assert!(matches!(with("sweep = L list 10, 5"), Err(Error::Config(_))));
        assert!(matches!(with("sweep = L list 10.5, 20"), Err(Error::Config(_))));
        assert!(matches!(with("sweep = a 1 4 3"), Err(Error::Config(_))));
        assert!(matches!(with("bogus = 1"), Err(Error::Config(_))));
        assert!(matches!(with("seed = 4"), Err(Error::Config(_))));
        assert!(matches!(with("bath.gamma = 1"), Err(Error::Config(_))));
        assert!(ScenarioConfig::parse("initial_state = upb\nbath.kind = spin").is_err());
        assert!(ScenarioConfig::parse("initial_state = upb\na = 4\noutputs = R").is_err());
        assert!(ScenarioConfig::parse("initial_state = ghz\noutputs = R").is_err());
        assert!(ScenarioConfig::parse("initial_state = upb\noutputs = R, Q").is_err());
        assert!(ScenarioConfig::parse("initial_state = upb\noutputs = R\nbath.kind = analytic_gaussian").is_err());
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(figure_preset("fig9"), Err(Error::UnknownPreset(_))));
        assert_eq!(figure_preset("fig7").unwrap(), figure_preset("fig7a").unwrap());
    }

    #[test]
    fn preset_parameters() {
        let fig5 = figure_preset("fig5").unwrap();
        assert_eq!(fig5.initial_state, InitialState::Upb);
        assert_eq!((fig5.bath.kind, fig5.bath.size, fig5.bath.temperature), (BathKind::Bosonic, 300, 10.0));
        assert_eq!((fig5.bath.lo, fig5.bath.delta), (50.0, 5.0));
        assert_eq!(fig5.outputs, vec![Output::R, Output::N]);

        let fig7 = figure_preset("fig7").unwrap();
        assert_eq!((fig7.bath.kind, fig7.bath.size, fig7.bath.coupling), (BathKind::Spin, 300, 0.5));
        let vars: Vec<Variable> = fig7.axes.iter().map(|a| a.variable).collect();
        assert_eq!(vars, vec![Variable::Time, Variable::Temperature]);

        let fig4c = figure_preset("fig4c").unwrap();
        assert_eq!(fig4c.time, 0.003);
        assert!(fig4c.axes.iter().any(|a| a.variable == Variable::Temperature));
        assert!(fig4c.axes.iter().any(|a| a.variable == Variable::Size));
    }

    #[test]
    fn axis_points() {
        let a = Axis::range(Variable::Temperature, 1.0, 40.0, 40);
        let pts = a.points();
        assert_eq!(pts.len(), 40);
        assert_eq!(pts[0], 1.0);
        assert_eq!(pts[39], 40.0);
        assert_abs_diff_eq!(pts[9], 10.0, epsilon = 1e-12);
    }

    #[test]
    fn run_orders_rows_and_checks_equivalence() {
        let mut cfg = ScenarioConfig::parse(SAMPLE).unwrap();
        cfg.axes.push(Axis::list(Variable::A, vec![3.5, 4.5]));
        let res = run_scenario(&cfg).unwrap();
        assert_eq!(res.columns, vec!["t", "a", "R", "absF1"]);
        assert_eq!(res.rows.len(), 10);
        let keys: Vec<(f64, f64)> = res.rows.iter().map(|r| (r.axis_values[0], r.axis_values[1])).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(keys, sorted);
        assert_abs_diff_eq!(res.rows[0].values[1], 1.0, epsilon = 0.0);
        let r0 = horodecki_r_closed(3.5, 1.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(res.rows[0].values[0], r0, epsilon = 1e-12);
    }

    #[test]
    fn analytic_scenario() {
        let cfg = ScenarioConfig::parse(
            "initial_state = horodecki\nbath.kind = analytic_gaussian\nbath.gamma = 2\nsweep = t 0 1 11\noutputs = absF1, absF3",
        )
        .unwrap();
        let res = run_scenario(&cfg).unwrap();
        for row in &res.rows {
            let t = row.axis_values[0];
            assert_abs_diff_eq!(row.values[0], (-2.0 * t * t).exp(), epsilon = 1e-15);
            assert_abs_diff_eq!(row.values[1], (-8.0 * t * t).exp(), epsilon = 1e-15);
        }
    }

    #[test]
    fn rho_dump_columns() {
        let cfg = ScenarioConfig::parse("initial_state = upb\nbath.L = 5\nt = 0\noutputs = rho_dump").unwrap();
        let res = run_scenario(&cfg).unwrap();
        assert_eq!(res.columns.len(), 162);
        assert_eq!(res.rows.len(), 1);
        let expected = upb_state();
        for (k, z) in expected.matrix().as_slice().iter().enumerate() {
            assert_eq!(res.rows[0].values[2 * k], z.re);
            assert_eq!(res.rows[0].values[2 * k + 1], z.im);
        }
    }

    #[test]
    fn csv_layout() {
        let cfg = ScenarioConfig::parse("initial_state = horodecki\nt = 0\nbath.L = 3\noutputs = R").unwrap();
        let res = run_scenario(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&res, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "R");
        let r: f64 = body[1].parse().unwrap();
        assert_abs_diff_eq!(r, 2.0 / 21.0 * (7f64.sqrt() - 1.0), epsilon = 1e-15);
        assert_eq!(body[1].split('e').next().unwrap().replace('.', "").len(), 17);
        assert!(text.contains("# seed = 1"));
        assert!(text.contains(PRNG_ID));
        assert!(text.contains("#   outputs = R"));
    }

    #[test]
    fn state_csv_round_trip() {
        for rho in [upb_state(), horodecki_state(4.3).unwrap()] {
            let mut buf = Vec::new();
            write_state_csv(&rho, &mut buf).unwrap();
            let back = read_state_csv(buf.as_slice()).unwrap();
            assert_eq!(back.matrix().max_abs_diff(rho.matrix()), 0.0);
        }
        assert!(read_state_csv("1,0\n".as_bytes()).is_err());
    }
}
