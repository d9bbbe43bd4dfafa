//! Run configuration: a TOML file of flat sections, plus command-line
//! overrides.
//!
//! ```text
//! [run]       mode, workers
//! [model]     n, delta0, delta, topology, coupling, seed
//! [scan]      grid, realizations, window, width, bandwidth
//! [simulate]  couplings, realizations, eigenstates, register_states, dump_spectra, verify
//! [reaction]  spectra, angular, r0, fit_window, max_order, gamma_down_mev, gamma_cn_kev,
//!             mass_number, level_density_a, excitation_mev, beam_mev, separation_mev, emission_mev
//! [synth]     temperature, endpoint_mev, e_min, e_step, zt, at, r0, direct_fraction, angles,
//!             rel_noise, amplitude, window, beam_mev, seed
//! [output]    dir, format
//! ```
//!
//! Every key is optional except `model.n` for `simulate` and `scan`, and at
//! least one input file for `analyze`. Parsing collects every error instead
//! of stopping at the first; unknown keys produce warnings.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use meltdown_core::mixing::WidthMethod;
use meltdown_core::model::{CouplingOp, ModelConfig, ModelError, Topology, MAX_QUBITS};
use meltdown_core::reaction::{CoulombBarrier, ReactionError, SynthParams, DEFAULT_R0, DEFAULT_SEPARATION_MEV};
use meltdown_core::scan::DEFAULT_WINDOW_FRACTION;
use serde::Serialize;
use sha2::{Digest, Sha256};
use toml::{Table, Value};

/// Default coupling grid: the weak and strong cases of the two-point comparison.
pub const DEFAULT_GRID: [f64; 2] = [0.02, 0.48];
pub const DEFAULT_BANDWIDTH: f64 = 0.02;
pub const DEFAULT_GAMMA_DOWN_MEV: f64 = 1.0;
pub const DEFAULT_GAMMA_CN_KEV: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Simulate,
    Scan,
    Analyze,
    Synth,
    Report,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::Scan => "scan",
            Mode::Analyze => "analyze",
            Mode::Synth => "synth",
            Mode::Report => "report",
        }
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "simulate" => Mode::Simulate,
            "scan" => Mode::Scan,
            "analyze" => Mode::Analyze,
            "synth" => Mode::Synth,
            "report" => Mode::Report,
            _ => return Err(format!("unknown mode {s:?} (simulate, scan, analyze, synth, report)")),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanBlock {
    pub grid: Vec<f64>,
    pub realizations: u64,
    pub window_fraction: f64,
    pub width_method: WidthMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulateBlock {
    /// J/Δ0 values.
    pub couplings: Vec<f64>,
    pub realizations: u64,
    /// Eigenstates whose mixing profile is written; empty selects the middle one.
    pub eigenstates: Vec<usize>,
    /// Register states whose LDOS is written; empty selects the middle one.
    pub register_states: Vec<usize>,
    pub dump_spectra: bool,
    /// Check the eigensolver contract (residual, orthonormality) per realization.
    pub verify: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReactionBlock {
    pub spectra: Vec<String>,
    pub angular: Vec<String>,
    pub r0: f64,
    pub fit_window: Option<(f64, f64)>,
    pub max_order: usize,
    pub gamma_down_mev: f64,
    pub gamma_cn_kev: f64,
    pub mass_number: Option<f64>,
    pub level_density_a: Option<f64>,
    pub excitation_mev: Option<f64>,
    pub beam_mev: Option<f64>,
    pub separation_mev: f64,
    pub emission_mev: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputBlock {
    pub dir: PathBuf,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub workers: usize,
    pub model: ModelConfig,
    pub scan: ScanBlock,
    pub simulate: SimulateBlock,
    pub reaction: ReactionBlock,
    pub synth: SynthParams,
    pub output: OutputBlock,
    /// Directory that relative input paths are resolved against.
    pub base_dir: PathBuf,
}

/// The part of a configuration that determines result payloads. Worker
/// count and output location are deliberately absent.
#[derive(Serialize)]
struct HashedView<'a> {
    mode: Mode,
    model: &'a ModelConfig,
    scan: &'a ScanBlock,
    simulate: &'a SimulateBlock,
    reaction: &'a ReactionBlock,
    synth: &'a SynthParams,
}

impl RunConfig {
    /// SHA-256 (hex) of the payload-relevant configuration.
    pub fn config_hash(&self) -> String {
        let view = HashedView {
            mode: self.mode,
            model: &self.model,
            scan: &self.scan,
            simulate: &self.simulate,
            reaction: &self.reaction,
            synth: &self.synth,
        };
        let bytes = serde_json::to_vec(&view).expect("configuration serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn resolve(&self, path: &str) -> PathBuf {
        let p = Path::new(path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn seed(&self) -> u64 {
        match self.mode {
            Mode::Synth => self.synth.seed,
            _ => self.model.master_seed,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub base_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    /// Dotted key, e.g. `model.n`.
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration ({} error{})", self.0.len(), if self.0.len() == 1 { "" } else { "s" })?;
        for e in &self.0 {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

impl ConfigErrors {
    pub fn fields(&self) -> Vec<&str> {
        self.0.iter().map(|e| e.field.as_str()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub config: RunConfig,
    pub warnings: Vec<String>,
}

struct Errors(Vec<ConfigError>);

impl Errors {
    fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.0.push(ConfigError { field: field.into(), message: message.into() });
    }
}

struct Section<'t> {
    name: &'static str,
    table: Option<&'t Table>,
    known: BTreeSet<&'static str>,
}

fn type_name(v: &Value) -> &'static str {
    v.type_str()
}

impl<'t> Section<'t> {
    fn get(&mut self, key: &'static str) -> Option<&'t Value> {
        self.known.insert(key);
        self.table.and_then(|t| t.get(key))
    }

    fn field(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }

    fn opt_float(&mut self, key: &'static str, errs: &mut Errors) -> Option<f64> {
        match self.get(key)? {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            v => {
                errs.push(self.field(key), format!("expected a number, found {}", type_name(v)));
                None
            }
        }
    }

    fn float(&mut self, key: &'static str, default: f64, errs: &mut Errors) -> f64 {
        self.opt_float(key, errs).unwrap_or(default)
    }

    fn opt_uint(&mut self, key: &'static str, errs: &mut Errors) -> Option<u64> {
        match self.get(key)? {
            Value::Integer(i) if *i >= 0 => Some(*i as u64),
            Value::Integer(i) => {
                errs.push(self.field(key), format!("must be non-negative (got {i})"));
                None
            }
            v => {
                errs.push(self.field(key), format!("expected an integer, found {}", type_name(v)));
                None
            }
        }
    }

    fn uint(&mut self, key: &'static str, default: u64, errs: &mut Errors) -> u64 {
        self.opt_uint(key, errs).unwrap_or(default)
    }

    fn boolean(&mut self, key: &'static str, default: bool, errs: &mut Errors) -> bool {
        match self.get(key) {
            None => default,
            Some(Value::Boolean(b)) => *b,
            Some(v) => {
                errs.push(self.field(key), format!("expected true or false, found {}", type_name(v)));
                default
            }
        }
    }

    fn opt_string(&mut self, key: &'static str, errs: &mut Errors) -> Option<String> {
        match self.get(key)? {
            Value::String(s) => Some(s.clone()),
            v => {
                errs.push(self.field(key), format!("expected a string, found {}", type_name(v)));
                None
            }
        }
    }

    fn array(&mut self, key: &'static str, errs: &mut Errors) -> Option<&'t Vec<Value>> {
        match self.get(key)? {
            Value::Array(a) => Some(a),
            v => {
                errs.push(self.field(key), format!("expected an array, found {}", type_name(v)));
                None
            }
        }
    }

    fn floats(&mut self, key: &'static str, errs: &mut Errors) -> Option<Vec<f64>> {
        let arr = self.array(key, errs)?;
        let mut out = Vec::with_capacity(arr.len());
        for (i, v) in arr.iter().enumerate() {
            match v {
                Value::Float(x) => out.push(*x),
                Value::Integer(x) => out.push(*x as f64),
                v => {
                    errs.push(format!("{}[{i}]", self.field(key)), format!("expected a number, found {}", type_name(v)));
                    return None;
                }
            }
        }
        Some(out)
    }

    fn uints(&mut self, key: &'static str, errs: &mut Errors) -> Option<Vec<usize>> {
        let arr = self.array(key, errs)?;
        let mut out = Vec::with_capacity(arr.len());
        for (i, v) in arr.iter().enumerate() {
            match v {
                Value::Integer(x) if *x >= 0 => out.push(*x as usize),
                v => {
                    errs.push(format!("{}[{i}]", self.field(key)), format!("expected a non-negative integer, found {v}"));
                    return None;
                }
            }
        }
        Some(out)
    }

    fn strings(&mut self, key: &'static str, errs: &mut Errors) -> Vec<String> {
        let Some(arr) = self.array(key, errs) else { return Vec::new() };
        let mut out = Vec::with_capacity(arr.len());
        for (i, v) in arr.iter().enumerate() {
            match v {
                Value::String(s) => out.push(s.clone()),
                v => errs.push(format!("{}[{i}]", self.field(key)), format!("expected a string, found {}", type_name(v))),
            }
        }
        out
    }

    fn pair(&mut self, key: &'static str, errs: &mut Errors) -> Option<(f64, f64)> {
        let v = self.floats(key, errs)?;
        if v.len() != 2 {
            errs.push(self.field(key), format!("expected [low, high], found {} values", v.len()));
            return None;
        }
        Some((v[0], v[1]))
    }

    fn finish(self, warnings: &mut Vec<String>) {
        if let Some(t) = self.table {
            for key in t.keys() {
                if !self.known.contains(key.as_str()) {
                    warnings.push(format!("unknown key {}.{key} ignored", self.name));
                }
            }
        }
    }
}

const SECTIONS: [&str; 7] = ["run", "model", "scan", "simulate", "reaction", "synth", "output"];

fn section<'t>(root: &'t Table, name: &'static str, errs: &mut Errors) -> Section<'t> {
    let table = match root.get(name) {
        None => None,
        Some(Value::Table(t)) => Some(t),
        Some(v) => {
            errs.push(name, format!("expected a [{name}] section, found {}", type_name(v)));
            None
        }
    };
    Section { name, table, known: BTreeSet::new() }
}

/// Parses and validates `text` with no command-line overrides.
pub fn parse_config(text: &str) -> Result<Parsed, ConfigErrors> {
    parse_config_with(text, &Overrides::default())
}

/// Parses `text`, applies `overrides`, and validates the result. All problems
/// are reported together.
pub fn parse_config_with(text: &str, overrides: &Overrides) -> Result<Parsed, ConfigErrors> {
    let root: Table = text.parse().map_err(|e: toml::de::Error| {
        ConfigErrors(vec![ConfigError { field: "<syntax>".into(), message: e.to_string().trim().to_string() }])
    })?;
    let mut errs = Errors(Vec::new());
    let mut warnings = Vec::new();
    for key in root.keys() {
        if !SECTIONS.contains(&key.as_str()) {
            warnings.push(format!("unknown section or key {key} ignored"));
        }
    }

    // [run]
    let mut run = section(&root, "run", &mut errs);
    let file_mode = run.opt_string("mode", &mut errs).and_then(|s| match s.parse::<Mode>() {
        Ok(m) => Some(m),
        Err(e) => {
            errs.push("run.mode", e);
            None
        }
    });
    let file_workers = run.opt_uint("workers", &mut errs);
    run.finish(&mut warnings);
    let mode = match (overrides.mode, file_mode) {
        (Some(cli), Some(file)) if cli != file => {
            warnings.push(format!("run.mode = {} in the file is overridden by the {} subcommand", file.as_str(), cli.as_str()));
            cli
        }
        (Some(m), _) | (None, Some(m)) => m,
        (None, None) => {
            errs.push("run.mode", "no mode given (use a subcommand or run.mode)");
            Mode::Report
        }
    };
    let workers = overrides.workers.map(|w| w as u64).or(file_workers).unwrap_or(1);
    if workers == 0 {
        errs.push("run.workers", "must be at least 1");
    }

    // [model]
    let mut m = section(&root, "model", &mut errs);
    let n = m.opt_uint("n", &mut errs);
    if n.is_none() && matches!(mode, Mode::Simulate | Mode::Scan) && !errs.0.iter().any(|e| e.field == "model.n") {
        errs.push("model.n", format!("required for {}", mode.as_str()));
    }
    let mut model = ModelConfig::new(n.unwrap_or(1) as usize);
    model.delta0 = m.float("delta0", model.delta0, &mut errs);
    model.delta = m.float("delta", model.delta, &mut errs);
    if let Some(t) = m.opt_string("topology", &mut errs) {
        match t.as_str() {
            "chain" => model.topology = Topology::Chain,
            "all-pairs" => model.topology = Topology::AllPairs,
            "lattice" => model.topology = Topology::Lattice,
            other => errs.push("model.topology", format!("unknown topology {other:?} (chain, all-pairs, lattice)")),
        }
    }
    if let Some(c) = m.opt_string("coupling", &mut errs) {
        match c.as_str() {
            "transverse-xx" => model.coupling_op = CouplingOp::TransverseXx,
            "diagonal-zz" => model.coupling_op = CouplingOp::DiagonalZz,
            other => errs.push("model.coupling", format!("unknown coupling {other:?} (transverse-xx, diagonal-zz)")),
        }
    }
    model.master_seed = overrides.seed.unwrap_or_else(|| m.uint("seed", 0, &mut errs));
    m.known.insert("seed");
    m.finish(&mut warnings);
    if n.is_some() {
        if let Err(e) = model.validate() {
            let field = match e {
                ModelError::NoQubits(_) | ModelError::DimensionOverflow { .. } => "model.n".to_string(),
                ModelError::NegativeSpread(_) | ModelError::NonPositiveSplitting { .. } => "model.delta".to_string(),
                ModelError::NonFinite { field } => format!("model.{field}"),
                _ => "model".to_string(),
            };
            errs.push(field, e.to_string());
        }
    }
    let dim = if (1..=MAX_QUBITS as u64).contains(&n.unwrap_or(0)) { Some(1usize << n.unwrap_or(0)) } else { None };

    // [scan]
    let mut s = section(&root, "scan", &mut errs);
    let grid = s.floats("grid", &mut errs).unwrap_or_else(|| DEFAULT_GRID.to_vec());
    check_grid("scan.grid", &grid, &mut errs);
    let realizations = s.uint("realizations", 1, &mut errs);
    if realizations == 0 {
        errs.push("scan.realizations", "must be at least 1");
    }
    let window_fraction = s.float("window", DEFAULT_WINDOW_FRACTION, &mut errs);
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        errs.push("scan.window", format!("must lie in (0, 1] (got {window_fraction})"));
    }
    let bandwidth = s.float("bandwidth", DEFAULT_BANDWIDTH, &mut errs);
    let width_method = match s.opt_string("width", &mut errs).as_deref() {
        None | Some("gaussian-equivalent") => WidthMethod::GaussianEquivalent,
        Some("histogram-fwhm") => {
            if !(bandwidth > 0.0 && bandwidth.is_finite()) {
                errs.push("scan.bandwidth", format!("must be positive (got {bandwidth})"));
            }
            WidthMethod::HistogramFwhm { bandwidth }
        }
        Some(other) => {
            errs.push("scan.width", format!("unknown width method {other:?} (gaussian-equivalent, histogram-fwhm)"));
            WidthMethod::GaussianEquivalent
        }
    };
    s.finish(&mut warnings);
    let scan = ScanBlock { grid, realizations, window_fraction, width_method };

    // [simulate]
    let mut sim = section(&root, "simulate", &mut errs);
    let couplings = sim.floats("couplings", &mut errs).unwrap_or_else(|| DEFAULT_GRID.to_vec());
    check_grid("simulate.couplings", &couplings, &mut errs);
    let sim_realizations = sim.uint("realizations", 1, &mut errs);
    if sim_realizations == 0 {
        errs.push("simulate.realizations", "must be at least 1");
    }
    let eigenstates = sim.uints("eigenstates", &mut errs).unwrap_or_default();
    let register_states = sim.uints("register_states", &mut errs).unwrap_or_default();
    if let Some(dim) = dim {
        for (key, list) in [("simulate.eigenstates", &eigenstates), ("simulate.register_states", &register_states)] {
            if let Some(bad) = list.iter().find(|&&k| k >= dim) {
                errs.push(key, format!("index {bad} out of range for dimension {dim}"));
            }
        }
    }
    let dump_spectra = sim.boolean("dump_spectra", false, &mut errs);
    let verify = sim.boolean("verify", false, &mut errs);
    sim.finish(&mut warnings);
    let simulate =
        SimulateBlock { couplings, realizations: sim_realizations, eigenstates, register_states, dump_spectra, verify };

    // [reaction]
    let mut r = section(&root, "reaction", &mut errs);
    let spectra = r.strings("spectra", &mut errs);
    let angular = r.strings("angular", &mut errs);
    if mode == Mode::Analyze && spectra.is_empty() && angular.is_empty() {
        errs.push("reaction.spectra", "analyze needs at least one spectrum or angular file");
    }
    let reaction = ReactionBlock {
        spectra,
        angular,
        r0: r.float("r0", DEFAULT_R0, &mut errs),
        fit_window: r.pair("fit_window", &mut errs),
        max_order: r.uint("max_order", 2, &mut errs) as usize,
        gamma_down_mev: r.float("gamma_down_mev", DEFAULT_GAMMA_DOWN_MEV, &mut errs),
        gamma_cn_kev: r.float("gamma_cn_kev", DEFAULT_GAMMA_CN_KEV, &mut errs),
        mass_number: r.opt_float("mass_number", &mut errs),
        level_density_a: r.opt_float("level_density_a", &mut errs),
        excitation_mev: r.opt_float("excitation_mev", &mut errs),
        beam_mev: r.opt_float("beam_mev", &mut errs),
        separation_mev: r.float("separation_mev", DEFAULT_SEPARATION_MEV, &mut errs),
        emission_mev: r.float("emission_mev", 0.0, &mut errs),
    };
    r.finish(&mut warnings);
    check_positive("reaction.r0", reaction.r0, &mut errs);
    check_positive("reaction.gamma_down_mev", reaction.gamma_down_mev, &mut errs);
    check_positive("reaction.gamma_cn_kev", reaction.gamma_cn_kev, &mut errs);
    for (key, v) in [
        ("reaction.mass_number", reaction.mass_number),
        ("reaction.level_density_a", reaction.level_density_a),
        ("reaction.excitation_mev", reaction.excitation_mev),
        ("reaction.beam_mev", reaction.beam_mev),
    ] {
        if let Some(v) = v {
            check_positive(key, v, &mut errs);
        }
    }
    if let Some((lo, hi)) = reaction.fit_window {
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
            errs.push("reaction.fit_window", format!("low {lo} must be below high {hi}"));
        }
    }
    if reaction.max_order > 8 {
        errs.push("reaction.max_order", format!("at most 8 (got {})", reaction.max_order));
    }

    // [synth]
    let mut sy = section(&root, "synth", &mut errs);
    let base = SynthParams::platinum_like(0);
    let synth = SynthParams {
        temperature: sy.float("temperature", base.temperature, &mut errs),
        endpoint_mev: sy.float("endpoint_mev", base.endpoint_mev, &mut errs),
        e_min: sy.float("e_min", base.e_min, &mut errs),
        e_step: sy.float("e_step", base.e_step, &mut errs),
        barrier: CoulombBarrier::proton(
            sy.float("zt", base.barrier.zt, &mut errs),
            sy.float("at", base.barrier.at, &mut errs),
            sy.float("r0", base.barrier.r0, &mut errs),
        ),
        direct_fraction: sy.float("direct_fraction", base.direct_fraction, &mut errs),
        angles_deg: sy.floats("angles", &mut errs).unwrap_or(base.angles_deg),
        rel_noise: sy.float("rel_noise", base.rel_noise, &mut errs),
        amplitude: sy.float("amplitude", base.amplitude, &mut errs),
        angular_window: sy.pair("window", &mut errs).unwrap_or(base.angular_window),
        beam_mev: sy.float("beam_mev", base.beam_mev, &mut errs),
        seed: overrides.seed.unwrap_or_else(|| sy.uint("seed", 0, &mut errs)),
    };
    sy.known.insert("seed");
    sy.finish(&mut warnings);
    if let Err(e) = synth.validate() {
        let field = match e {
            ReactionError::NonPositive("temperature") => "synth.temperature",
            ReactionError::NonPositive(_) => "synth.amplitude",
            ReactionError::NonPositiveRadius(_) => "synth.r0",
            ReactionError::InvalidNucleus(_) => "synth.at",
            ReactionError::AngleOutOfRange { .. } => "synth.angles",
            ReactionError::InvalidParameter(m) if m.contains("direct") => "synth.direct_fraction",
            ReactionError::InvalidParameter(m) if m.contains("noise") => "synth.rel_noise",
            ReactionError::InvalidParameter(m) if m.contains("window") => "synth.window",
            _ => "synth",
        };
        errs.push(field, e.to_string());
    }

    // [output]
    let mut o = section(&root, "output", &mut errs);
    let dir = o.opt_string("dir", &mut errs).map(PathBuf::from);
    let format = match o.opt_string("format", &mut errs).as_deref() {
        None | Some("json") => OutputFormat::Json,
        Some("csv") => OutputFormat::Csv,
        Some(other) => {
            errs.push("output.format", format!("unknown format {other:?} (json, csv)"));
            OutputFormat::Json
        }
    };
    o.finish(&mut warnings);
    let output = OutputBlock {
        // a directory named in the file is relative to the file; --out is relative to the caller
        dir: overrides.out.clone().unwrap_or_else(|| {
            let base = overrides.base_dir.clone().unwrap_or_default();
            base.join(dir.unwrap_or_else(|| PathBuf::from("results")))
        }),
        format: overrides.format.unwrap_or(format),
    };

    if !errs.0.is_empty() {
        return Err(ConfigErrors(errs.0));
    }
    let config = RunConfig {
        mode,
        workers: workers as usize,
        model,
        scan,
        simulate,
        reaction,
        synth,
        output,
        base_dir: overrides.base_dir.clone().unwrap_or_default(),
    };
    Ok(Parsed { config, warnings })
}

fn check_grid(field: &str, grid: &[f64], errs: &mut Errors) {
    if grid.is_empty() {
        errs.push(field, "must not be empty");
    }
    if let Some(bad) = grid.iter().find(|j| !(j.is_finite() && **j >= 0.0)) {
        errs.push(field, format!("values must be finite and >= 0 (got {bad})"));
    }
}

fn check_positive(field: &str, v: f64, errs: &mut Errors) {
    if !(v > 0.0 && v.is_finite()) {
        errs.push(field, format!("must be positive (got {v})"));
    }
}
