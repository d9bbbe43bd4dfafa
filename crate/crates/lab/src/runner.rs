//! Mode execution on a worker pool.
//!
//! Units of work are (grid index, realization index) pairs. Workers share
//! nothing mutable except the progress log; results are collected in unit
//! order, so payloads do not depend on the worker count or on scheduling.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use meltdown_core::mixing::{ldos, mixing_weights, participation_ratio, spreading_width, WidthMethod};
use meltdown_core::reaction::{
    asymmetry_report, default_fit_window, fit_legendre, fit_temperature, phase_time_proxy, scale_spectrum,
    synthesize_spectrum, timescale_report, LevelDensity, ReactionError,
};
use meltdown_core::scan::{aggregate_point, build_realization, window_stats, Realization, ScanError, ScanFailure, ScanResult};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigError, ConfigErrors, Mode, RunConfig};
use crate::dump::{write_dump, DumpHeader};
use crate::emit::emit;
use crate::error::LabError;
use crate::ingest::{ingest_angular, ingest_spectrum, write_angular, write_spectrum};
use crate::record::{
    hash_file, Diagnostics, LdosRecord, Payload, ProfileRecord, Provenance, RealizationRecord, ResultRecord,
    ScaledRecord, SynthRecord, TemperatureRecord, LegendreRecord, TOOL_VERSION,
};

pub const PROGRESS_FILE: &str = "progress.jsonl";
pub const META_FILE: &str = "run_meta.json";

/// Append-only JSON-lines log of finished units, flushed after every line.
pub struct Progress {
    out: Option<Mutex<BufWriter<File>>>,
}

#[derive(Serialize)]
struct ProgressLine<'a> {
    grid_index: usize,
    j_over_delta0: f64,
    realization: u64,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma_down: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    participation_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spacing_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl Progress {
    pub fn disabled() -> Self {
        Progress { out: None }
    }

    pub fn create(path: &Path) -> Result<Self, LabError> {
        let f = File::create(path).map_err(|e| LabError::io(path, e))?;
        Ok(Progress { out: Some(Mutex::new(BufWriter::new(f))) })
    }

    fn log(&self, line: &ProgressLine) {
        if let Some(out) = &self.out {
            let mut w = out.lock().unwrap_or_else(|p| p.into_inner());
            // progress is advisory; a failed write must not abort the run
            let _ = serde_json::to_writer(&mut *w, line).map(|_| ()).map_err(std::io::Error::from).and_then(|_| {
                w.write_all(b"\n")?;
                w.flush()
            });
        }
    }
}

fn provenance(config: &RunConfig, inputs: BTreeMap<String, String>) -> Provenance {
    Provenance { config_hash: config.config_hash(), inputs, seed: config.seed(), tool_version: TOOL_VERSION.to_string() }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, LabError> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(workers).build()?)
}

fn units(grid: &[f64], realizations: u64) -> Vec<(usize, u64)> {
    (0..grid.len()).flat_map(|g| (0..realizations).map(move |r| (g, r))).collect()
}

/// First error in unit order, so the reported failure is deterministic too.
fn collect_ordered<T>(results: Vec<Result<T, ScanError>>) -> Result<Vec<T>, LabError> {
    results.into_iter().map(|r| r.map_err(LabError::Scan)).collect()
}

fn scan(config: &RunConfig, progress: &Progress) -> Result<Vec<Payload>, LabError> {
    let s = &config.scan;
    let work = units(&s.grid, s.realizations);
    let results: Vec<_> = pool(config.workers)?.install(|| {
        work.par_iter()
            .map(|&(g, r)| {
                let j = s.grid[g];
                let res = build_realization(&config.model, j, r)
                    .and_then(|real| window_stats(&real, s.window_fraction, s.width_method))
                    .map_err(|failure| ScanError { grid_index: g, j_over_delta0: j, realization: r, failure });
                progress.log(&ProgressLine {
                    grid_index: g,
                    j_over_delta0: j,
                    realization: r,
                    status: if res.is_ok() { "ok" } else { "error" },
                    gamma_down: res.as_ref().ok().map(|x| x.gamma_down),
                    participation_ratio: res.as_ref().ok().map(|x| x.participation_ratio),
                    spacing_ratio: res.as_ref().ok().and_then(|x| x.spacing_ratio),
                    error: res.as_ref().err().map(|e| e.to_string()),
                });
                res
            })
            .collect()
    });
    let stats = collect_ordered(results)?;
    let per_point = s.realizations as usize;
    let points = s
        .grid
        .iter()
        .enumerate()
        .map(|(g, &j)| aggregate_point(j, &stats[g * per_point..(g + 1) * per_point]))
        .collect();
    Ok(vec![Payload::Scan(ScanResult {
        n: config.model.n,
        window_fraction: s.window_fraction,
        width_method: s.width_method,
        points,
    })])
}

fn moment_errors(real: &Realization, i: usize, weights: &[f64]) -> (f64, f64) {
    let h = &real.hamiltonian.matrix;
    let lambda = real.spectrum.eigenvalues();
    let scale = lambda.iter().fold(0.0f64, |m, l| m.max(l.abs())).max(f64::MIN_POSITIVE);
    let m1: f64 = weights.iter().zip(lambda).map(|(w, l)| w * l).sum();
    let m2: f64 = weights.iter().zip(lambda).map(|(w, l)| w * l * l).sum();
    let row_sq: f64 = h.row(i).iter().map(|x| x * x).sum();
    ((m1 - h.get(i, i)).abs() / scale, (m2 - row_sq).abs() / (scale * scale))
}

fn simulate_unit(config: &RunConfig, g: usize, r: u64, dump_dir: Option<&Path>) -> Result<Vec<Payload>, ScanFailure> {
    let sim = &config.simulate;
    let method: WidthMethod = config.scan.width_method;
    let j = sim.couplings[g];
    let real = build_realization(&config.model, j, r)?;
    let stats = window_stats(&real, config.scan.window_fraction, method)?;
    let diagnostics = sim.verify.then(|| {
        let norm = real.hamiltonian.matrix.frobenius_norm_sq().sqrt().max(f64::MIN_POSITIVE);
        Diagnostics {
            max_residual: real.spectrum.max_residual(&real.hamiltonian.matrix) / norm,
            orthonormality_error: real.spectrum.orthonormality_error(),
        }
    });
    let mut out = vec![Payload::Realization(RealizationRecord { j_over_delta0: j, n: config.model.n, stats, diagnostics })];

    let dim = real.spectrum.dim();
    let eigenstates = if sim.eigenstates.is_empty() { vec![dim / 2] } else { sim.eigenstates.clone() };
    for k in eigenstates {
        let p = mixing_weights(&real.spectrum, &real.basis, k).map_err(ScanFailure::Mixing)?;
        let w = spreading_width(&p, method).map_err(ScanFailure::Mixing)?;
        out.push(Payload::Profile(ProfileRecord {
            j_over_delta0: j,
            realization: r,
            eigenstate: k,
            eigenvalue: p.eigenvalue,
            participation_ratio: participation_ratio(&p),
            gamma_down: w.gamma_down,
            width_method: method,
            energies: p.energies,
            weights: p.weights,
        }));
    }
    let registers = if sim.register_states.is_empty() { vec![real.basis.mid_state()] } else { sim.register_states.clone() };
    for i in registers {
        let s = ldos(&real.spectrum, &real.basis, i).map_err(ScanFailure::Mixing)?;
        let w = spreading_width(&s, method).map_err(ScanFailure::Mixing)?;
        let (first_moment_error, second_moment_error) = moment_errors(&real, i, &s.weights);
        out.push(Payload::Ldos(LdosRecord {
            j_over_delta0: j,
            realization: r,
            register_index: i,
            register_energy: s.register_energy,
            participation_ratio: participation_ratio(&s),
            gamma_down: w.gamma_down,
            width_method: method,
            first_moment_error,
            second_moment_error,
            energies: s.energies,
            weights: s.weights,
        }));
    }
    if let Some(dir) = dump_dir {
        let mut config_hash = [0u8; 32];
        hex::decode_to_slice(config.config_hash(), &mut config_hash).expect("hash is 64 hex digits");
        let header = DumpHeader { config_hash, realization: r, j_over_delta0: j };
        let path = dir.join(dump_name(g, r));
        // dump failures surface as runtime errors through the settings channel
        write_dump(&path, &header, &real.spectrum).map_err(|_| ScanFailure::Settings("could not write spectrum dump"))?;
    }
    Ok(out)
}

/// File name of the spectrum dump for grid point `g`, realization `r`.
pub fn dump_name(g: usize, r: u64) -> String {
    format!("spectrum_g{g}_r{r}.bin")
}

fn simulate(config: &RunConfig, progress: &Progress) -> Result<Vec<Payload>, LabError> {
    let sim = &config.simulate;
    let dump_dir = if sim.dump_spectra {
        let d = config.output.dir.join("spectra");
        fs::create_dir_all(&d).map_err(|e| LabError::io(&d, e))?;
        Some(d)
    } else {
        None
    };
    let work = units(&sim.couplings, sim.realizations);
    let results: Vec<_> = pool(config.workers)?.install(|| {
        work.par_iter()
            .map(|&(g, r)| {
                let j = sim.couplings[g];
                let res = simulate_unit(config, g, r, dump_dir.as_deref())
                    .map_err(|failure| ScanError { grid_index: g, j_over_delta0: j, realization: r, failure });
                let stats = res.as_ref().ok().and_then(|p| match p.first() {
                    Some(Payload::Realization(x)) => Some(&x.stats),
                    _ => None,
                });
                progress.log(&ProgressLine {
                    grid_index: g,
                    j_over_delta0: j,
                    realization: r,
                    status: if res.is_ok() { "ok" } else { "error" },
                    gamma_down: stats.map(|s| s.gamma_down),
                    participation_ratio: stats.map(|s| s.participation_ratio),
                    spacing_ratio: stats.and_then(|s| s.spacing_ratio),
                    error: res.as_ref().err().map(|e| e.to_string()),
                });
                res
            })
            .collect()
    });
    Ok(collect_ordered(results)?.into_iter().flatten().collect())
}

fn reaction_err(context: impl Into<String>) -> impl FnOnce(ReactionError) -> LabError {
    let context = context.into();
    move |source| LabError::Reaction { context, source }
}

fn level_density(config: &RunConfig, mass: Option<f64>, beam: Option<f64>) -> Result<LevelDensity, LabError> {
    let r = &config.reaction;
    let missing = |field: &str, why: &str| {
        LabError::Config(ConfigErrors(vec![ConfigError { field: field.into(), message: why.into() }]))
    };
    let a = match (r.level_density_a, r.mass_number.or(mass)) {
        (Some(a), _) => a,
        (None, Some(mass)) => mass / 8.0,
        (None, None) => return Err(missing("reaction.mass_number", "needed for the level density (no spectrum metadata to take At from)")),
    };
    let u = match (r.excitation_mev, r.beam_mev.or(beam)) {
        (Some(u), _) => u,
        (None, Some(beam)) => beam + r.separation_mev - r.emission_mev,
        (None, None) => return Err(missing("reaction.beam_mev", "needed for the excitation energy (no spectrum metadata to take it from)")),
    };
    Ok(LevelDensity { a, u })
}

/// Records for one spectrum file plus its target mass and beam energy.
type SpectrumOutcome = (Vec<Payload>, Option<f64>, Option<f64>);

fn analyze(config: &RunConfig, inputs: &mut BTreeMap<String, String>) -> Result<Vec<Payload>, LabError> {
    let r = &config.reaction;
    for name in r.spectra.iter().chain(&r.angular) {
        inputs.insert(name.clone(), hash_file(&config.resolve(name))?);
    }
    let pool = pool(config.workers)?;
    let spectra: Vec<Result<SpectrumOutcome, LabError>> = pool.install(|| {
        r.spectra
            .par_iter()
            .map(|name| {
                let spec = ingest_spectrum(&config.resolve(name))?;
                let scaled = scale_spectrum(&spec, r.r0).map_err(reaction_err(format!("scaling {name}")))?;
                let window = r
                    .fit_window
                    .or_else(|| default_fit_window(&scaled))
                    .ok_or_else(|| LabError::Reaction { context: format!("fitting {name}"), source: ReactionError::TooFewPoints { needed: 3, got: 0 } })?;
                let fit = fit_temperature(&scaled, window).map_err(reaction_err(format!("temperature fit of {name}")))?;
                let angle_deg = scaled.angle_deg;
                Ok((
                    vec![
                        Payload::ScaledSpectrum(ScaledRecord { source: name.clone(), spectrum: scaled }),
                        Payload::Temperature(TemperatureRecord { source: name.clone(), angle_deg, fit }),
                    ],
                    spec.meta.at,
                    spec.meta.beam_mev,
                ))
            })
            .collect()
    });
    let angular: Vec<Result<Payload, LabError>> = pool.install(|| {
        r.angular
            .par_iter()
            .map(|name| {
                let dist = ingest_angular(&config.resolve(name))?;
                let fit = fit_legendre(&dist, r.max_order).map_err(reaction_err(format!("Legendre fit of {name}")))?;
                let asymmetry = asymmetry_report(&fit).map_err(reaction_err(format!("asymmetry of {name}")))?;
                let phase_proxy = phase_time_proxy(&fit).map_err(reaction_err(format!("phase proxy of {name}")))?;
                Ok(Payload::Legendre(LegendreRecord {
                    source: name.clone(),
                    e_min: dist.e_min,
                    e_max: dist.e_max,
                    fit,
                    asymmetry,
                    phase_proxy,
                }))
            })
            .collect()
    });

    let mut out = Vec::new();
    let (mut mass, mut beam) = (None, None);
    for s in spectra {
        let (payloads, at, b) = s?;
        mass = mass.or(at);
        beam = beam.or(b);
        out.extend(payloads);
    }
    for a in angular {
        out.push(a?);
    }
    let ld = level_density(config, mass, beam)?;
    let report = timescale_report(r.gamma_down_mev, r.gamma_cn_kev, ld).map_err(reaction_err("time-scale report"))?;
    out.push(Payload::Timescale(report));
    Ok(out)
}

fn report(config: &RunConfig) -> Result<Vec<Payload>, LabError> {
    let ld = level_density(config, Some(config.synth.barrier.at), Some(config.synth.beam_mev))?;
    let r = &config.reaction;
    let report = timescale_report(r.gamma_down_mev, r.gamma_cn_kev, ld).map_err(reaction_err("time-scale report"))?;
    Ok(vec![Payload::Timescale(report)])
}

/// Name of the synthetic spectrum file at `angle` degrees.
pub fn synth_spectrum_name(angle: f64) -> String {
    format!("spectrum_{angle}deg.csv")
}

pub const SYNTH_ANGULAR_FILE: &str = "angular.csv";

fn synth(config: &RunConfig) -> Result<Vec<Payload>, LabError> {
    let out = synthesize_spectrum(&config.synth).map_err(reaction_err("synthesis"))?;
    let dir = &config.output.dir;
    let mut files = Vec::new();
    for spec in &out.spectra {
        let name = synth_spectrum_name(spec.meta.angle_deg);
        write_spectrum(&dir.join(&name), spec)?;
        files.push(name);
    }
    write_angular(&dir.join(SYNTH_ANGULAR_FILE), &out.angular)?;
    files.push(SYNTH_ANGULAR_FILE.to_string());
    Ok(vec![Payload::Synth(SynthRecord { params: config.synth.clone(), files })])
}

/// Runs the configured mode and returns its records. `progress` receives a
/// line per finished realization in simulate and scan modes.
pub fn execute(config: &RunConfig, progress: &Progress) -> Result<Vec<ResultRecord>, LabError> {
    let mut inputs = BTreeMap::new();
    let payloads = match config.mode {
        Mode::Scan => scan(config, progress)?,
        Mode::Simulate => simulate(config, progress)?,
        Mode::Analyze => analyze(config, &mut inputs)?,
        Mode::Synth => synth(config)?,
        Mode::Report => report(config)?,
    };
    let prov = provenance(config, inputs);
    Ok(payloads.into_iter().map(|payload| ResultRecord { payload, provenance: prov.clone() }).collect())
}

#[derive(Serialize)]
struct RunMeta<'a> {
    tool_version: &'a str,
    mode: Mode,
    workers: usize,
    config_hash: String,
    seed: u64,
    started_unix_s: f64,
    finished_unix_s: f64,
    elapsed_s: f64,
    records: usize,
    files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

#[derive(Debug)]
pub struct RunSummary {
    pub records: Vec<ResultRecord>,
    /// Payload files, sorted.
    pub files: Vec<PathBuf>,
}

/// Executes `config`, writes the payload files, the progress log and the
/// `run_meta.json` sidecar (timestamps live only there).
pub fn run(config: &RunConfig) -> Result<RunSummary, LabError> {
    let dir = &config.output.dir;
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let started = unix_now();
    let clock = Instant::now();
    let progress = match config.mode {
        Mode::Scan | Mode::Simulate => Progress::create(&dir.join(PROGRESS_FILE))?,
        _ => Progress::disabled(),
    };
    let result = execute(config, &progress).and_then(|records| {
        let files = emit(&records, config.output.format, dir)?;
        Ok(RunSummary { records, files })
    });
    let meta = RunMeta {
        tool_version: TOOL_VERSION,
        mode: config.mode,
        workers: config.workers,
        config_hash: config.config_hash(),
        seed: config.seed(),
        started_unix_s: started,
        finished_unix_s: unix_now(),
        elapsed_s: clock.elapsed().as_secs_f64(),
        records: result.as_ref().map_or(0, |s| s.records.len()),
        files: result
            .as_ref()
            .map(|s| s.files.iter().filter_map(|f| f.file_name()).map(|f| f.to_string_lossy().into_owned()).collect())
            .unwrap_or_default(),
        error: result.as_ref().err().map(|e| e.to_string()),
    };
    let meta_path = dir.join(META_FILE);
    let mut bytes = serde_json::to_vec_pretty(&meta)?;
    bytes.push(b'\n');
    fs::write(&meta_path, bytes).map_err(|e| LabError::io(&meta_path, e))?;
    result
}
