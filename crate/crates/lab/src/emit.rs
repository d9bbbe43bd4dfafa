//! Writing records to disk, one file per record kind.
//!
//! JSON: `<kind>.json` holds an array of records, fields in declaration
//! order. An empty record set produces `records.json` containing `[]`.
//!
//! CSV: `<kind>.csv` starts with `# key: value` provenance lines followed by
//! one header row. Column layouts:
//!
//! | kind            | columns |
//! |-----------------|---------|
//! | scan            | j_over_delta0, realizations, gamma_down_mean, gamma_down_std, gamma_down_stderr, pr_mean, pr_std, pr_stderr, r_mean, r_stderr, zero_gaps |
//! | realization     | j_over_delta0, realization, gamma_down, participation_ratio, spacing_ratio, ratios, zero_gaps, states, max_residual, orthonormality_error |
//! | profile         | j_over_delta0, realization, eigenstate, eigenvalue, E_i, W_i |
//! | ldos            | j_over_delta0, realization, register_index, register_energy, lambda_k, weight |
//! | scaled-spectrum | source, angle_deg, E_MeV, I, I_err |
//! | temperature     | source, angle_deg, T_MeV, T_err, chi2_dof, slope, intercept, E_lo, E_hi, points, weighting |
//! | legendre        | source, E_min, E_max, max_order, a0..aK, sigma0..sigmaK, chi2_dof, a1_over_a0, a1_over_a0_err, forward_backward, forward_backward_err, phase_proxy |
//! | timescale       | gamma_down_MeV, gamma_cn_keV, time_ratio, tau_relax_s, tau_process_s, log10_N_eff, log2_N_eff, qubit_equiv, a_per_MeV, U_MeV |
//! | synth           | file |
//!
//! Missing values are empty fields. Floats use the shortest representation
//! that parses back to the same value, so identical inputs give identical
//! files.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use meltdown_core::reaction::Weighting;

use crate::config::OutputFormat;
use crate::error::LabError;
use crate::record::{Payload, Provenance, ResultRecord};

fn partition(records: &[ResultRecord]) -> BTreeMap<&'static str, Vec<&ResultRecord>> {
    let mut by_kind: BTreeMap<&'static str, Vec<&ResultRecord>> = BTreeMap::new();
    for r in records {
        by_kind.entry(r.kind()).or_default().push(r);
    }
    by_kind
}

/// Writes `records` into `dir` and returns the files written, sorted.
pub fn emit(records: &[ResultRecord], format: OutputFormat, dir: &Path) -> Result<Vec<PathBuf>, LabError> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let mut written = Vec::new();
    if records.is_empty() {
        let (name, body) = match format {
            OutputFormat::Json => ("records.json", "[]\n"),
            OutputFormat::Csv => ("records.csv", "kind\n"),
        };
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| LabError::io(&path, e))?;
        return Ok(vec![path]);
    }
    for (kind, group) in partition(records) {
        let path = match format {
            OutputFormat::Json => dir.join(format!("{kind}.json")),
            OutputFormat::Csv => dir.join(format!("{kind}.csv")),
        };
        let bytes = match format {
            OutputFormat::Json => {
                let mut b = serde_json::to_vec_pretty(&group)?;
                b.push(b'\n');
                b
            }
            OutputFormat::Csv => csv_bytes(kind, &group, &path)?,
        };
        fs::write(&path, bytes).map_err(|e| LabError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Reads back a `<kind>.json` file.
pub fn read_records(path: &Path) -> Result<Vec<ResultRecord>, LabError> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn num(x: f64) -> String {
    x.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn provenance_lines(buf: &mut Vec<u8>, kind: &str, prov: &Provenance) {
    let mut line = |k: &str, v: &str| writeln!(buf, "# {k}: {v}").expect("write to memory");
    line("kind", kind);
    line("config_hash", &prov.config_hash);
    line("seed", &prov.seed.to_string());
    line("tool_version", &prov.tool_version);
    for (path, hash) in &prov.inputs {
        line("input", &format!("{path} sha256={hash}"));
    }
}

fn csv_bytes(kind: &str, group: &[&ResultRecord], path: &Path) -> Result<Vec<u8>, LabError> {
    let mut buf = Vec::new();
    provenance_lines(&mut buf, kind, &group[0].provenance);
    let (header, rows) = table(group);
    let mut w = csv::Writer::from_writer(buf);
    let err = |e: csv::Error| LabError::Format { path: path.to_path_buf(), message: e.to_string() };
    w.write_record(&header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    w.into_inner().map_err(|e| LabError::Format { path: path.to_path_buf(), message: e.to_string() })
}

fn strings(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

fn table(group: &[&ResultRecord]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rows = Vec::new();
    let header = match &group[0].payload {
        Payload::Scan(_) => strings(&[
            "j_over_delta0",
            "realizations",
            "gamma_down_mean",
            "gamma_down_std",
            "gamma_down_stderr",
            "pr_mean",
            "pr_std",
            "pr_stderr",
            "r_mean",
            "r_stderr",
            "zero_gaps",
        ]),
        Payload::Realization(_) => strings(&[
            "j_over_delta0",
            "realization",
            "gamma_down",
            "participation_ratio",
            "spacing_ratio",
            "ratios",
            "zero_gaps",
            "states",
            "max_residual",
            "orthonormality_error",
        ]),
        Payload::Profile(_) => strings(&["j_over_delta0", "realization", "eigenstate", "eigenvalue", "E_i", "W_i"]),
        Payload::Ldos(_) => strings(&["j_over_delta0", "realization", "register_index", "register_energy", "lambda_k", "weight"]),
        Payload::ScaledSpectrum(_) => strings(&["source", "angle_deg", "E_MeV", "I", "I_err"]),
        Payload::Temperature(_) => strings(&[
            "source",
            "angle_deg",
            "T_MeV",
            "T_err",
            "chi2_dof",
            "slope",
            "intercept",
            "E_lo",
            "E_hi",
            "points",
            "weighting",
        ]),
        Payload::Legendre(_) => {
            let k_max = group
                .iter()
                .filter_map(|r| match &r.payload {
                    Payload::Legendre(l) => Some(l.fit.max_order),
                    _ => None,
                })
                .max()
                .unwrap_or(0);
            let mut h = strings(&["source", "E_min", "E_max", "max_order"]);
            h.extend((0..=k_max).map(|k| format!("a{k}")));
            h.extend((0..=k_max).map(|k| format!("sigma{k}")));
            h.extend(strings(&[
                "chi2_dof",
                "a1_over_a0",
                "a1_over_a0_err",
                "forward_backward",
                "forward_backward_err",
                "phase_proxy",
            ]));
            h
        }
        Payload::Timescale(_) => strings(&[
            "gamma_down_MeV",
            "gamma_cn_keV",
            "time_ratio",
            "tau_relax_s",
            "tau_process_s",
            "log10_N_eff",
            "log2_N_eff",
            "qubit_equiv",
            "a_per_MeV",
            "U_MeV",
        ]),
        Payload::Synth(_) => strings(&["file"]),
    };
    for r in group {
        match &r.payload {
            Payload::Scan(s) => {
                for p in &s.points {
                    rows.push(vec![
                        num(p.j_over_delta0),
                        p.realizations.to_string(),
                        num(p.gamma_down_mean),
                        num(p.gamma_down_std),
                        num(p.gamma_down_stderr),
                        num(p.pr_mean),
                        num(p.pr_std),
                        num(p.pr_stderr),
                        opt(p.r_mean),
                        opt(p.r_stderr),
                        p.zero_gaps.to_string(),
                    ]);
                }
            }
            Payload::Realization(x) => {
                let s = &x.stats;
                rows.push(vec![
                    num(x.j_over_delta0),
                    s.realization.to_string(),
                    num(s.gamma_down),
                    num(s.participation_ratio),
                    opt(s.spacing_ratio),
                    s.ratios.to_string(),
                    s.zero_gaps.to_string(),
                    s.states.to_string(),
                    opt(x.diagnostics.as_ref().map(|d| d.max_residual)),
                    opt(x.diagnostics.as_ref().map(|d| d.orthonormality_error)),
                ]);
            }
            Payload::Profile(p) => {
                for (e, w) in p.energies.iter().zip(&p.weights) {
                    rows.push(vec![
                        num(p.j_over_delta0),
                        p.realization.to_string(),
                        p.eigenstate.to_string(),
                        num(p.eigenvalue),
                        num(*e),
                        num(*w),
                    ]);
                }
            }
            Payload::Ldos(l) => {
                for (e, w) in l.energies.iter().zip(&l.weights) {
                    rows.push(vec![
                        num(l.j_over_delta0),
                        l.realization.to_string(),
                        l.register_index.to_string(),
                        num(l.register_energy),
                        num(*e),
                        num(*w),
                    ]);
                }
            }
            Payload::ScaledSpectrum(s) => {
                for x in &s.spectrum.samples {
                    rows.push(vec![s.source.clone(), num(s.spectrum.angle_deg), num(x.energy), num(x.value), num(x.error)]);
                }
            }
            Payload::Temperature(t) => {
                let f = &t.fit;
                rows.push(vec![
                    t.source.clone(),
                    num(t.angle_deg),
                    num(f.temperature),
                    num(f.temperature_err),
                    num(f.chi2_dof),
                    num(f.slope),
                    num(f.intercept),
                    num(f.window.0),
                    num(f.window.1),
                    f.points.to_string(),
                    match f.weighting {
                        Weighting::InverseVariance => "inverse-variance".into(),
                        Weighting::Unit => "unit".into(),
                    },
                ]);
            }
            Payload::Legendre(l) => {
                let k_max = header.iter().filter(|h| h.starts_with('a') && h[1..].parse::<usize>().is_ok()).count();
                let mut row = vec![l.source.clone(), num(l.e_min), num(l.e_max), l.fit.max_order.to_string()];
                row.extend((0..k_max).map(|k| if k <= l.fit.max_order { num(l.fit.coefficient(k)) } else { String::new() }));
                row.extend((0..k_max).map(|k| if k <= l.fit.max_order { num(l.fit.sigma(k)) } else { String::new() }));
                row.extend([
                    opt(l.fit.chi2_dof),
                    num(l.asymmetry.a1_over_a0),
                    num(l.asymmetry.a1_over_a0_err),
                    opt(l.asymmetry.forward_backward),
                    opt(l.asymmetry.forward_backward_err),
                    num(l.phase_proxy.value),
                ]);
                rows.push(row);
            }
            Payload::Timescale(t) => {
                rows.push(vec![
                    num(t.gamma_down_mev),
                    num(t.gamma_cn_kev),
                    num(t.time_ratio),
                    num(t.tau_relax_s),
                    num(t.tau_process_s),
                    num(t.log10_n_eff),
                    num(t.log2_n_eff),
                    t.qubit_equiv.to_string(),
                    num(t.level_density.a),
                    num(t.level_density.u),
                ]);
            }
            Payload::Synth(s) => {
                rows.extend(s.files.iter().map(|f| vec![f.clone()]));
            }
        }
    }
    (header, rows)
}
