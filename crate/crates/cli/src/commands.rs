//! Subcommand bodies. Each returns its files in memory so that running and
//! replaying share one code path.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use chipnoise_core::constants::MICRON;
use chipnoise_core::gpe::run_ensemble;
use chipnoise_core::rates::{rate_report, RateReport};
use chipnoise_core::spectra::{current_noise_tensor, halfspace_spectrum_with, normalized_shot_spectrum, shot_noise_spectrum, thin_wire_spectrum, Axes};
use chipnoise_core::transport::{analytic_coherence, evolve_master, ScatteringKernel, WignerState};
use chipnoise_core::units::{format_si, Dimension};
use chipnoise_core::{NoiseTensor, SideGuideConfig, WireKind};
use serde::Serialize;

use crate::config::{Command, RawConfig, Settings};
use crate::output::{CsvTable, OutputSet};
use crate::sweep::SweepSpec;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything that determines a run's outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub command: Command,
    pub raw: RawConfig,
    pub sweep: Option<SweepSpec>,
    pub json: bool,
    /// Worker cap for ensembles; does not affect results.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOutput {
    pub outputs: OutputSet,
    pub echo: BTreeMap<String, String>,
    pub derived: BTreeMap<String, String>,
    pub seed: Option<u64>,
    /// Human-readable summary for the terminal.
    pub text: String,
}

pub fn execute(inv: &Invocation) -> Result<RunOutput> {
    let settings = Settings::from_raw(&inv.raw, inv.command)?;
    if let Some(sweep) = &inv.sweep {
        if inv.command == Command::Gpe {
            bail!("the gpe subcommand does not take sweeps");
        }
        if !crate::config::key_spec(&sweep.key).is_some_and(|k| k.commands.contains(&inv.command)) {
            bail!("'{}' is not a parameter of '{}'", sweep.key, inv.command);
        }
    }
    let mut out = match inv.command {
        Command::Spectrum => spectrum(&settings, inv)?,
        Command::Rates => rates(&settings, inv)?,
        Command::Decohere => decohere(&settings, inv)?,
        Command::Gpe => gpe(&settings, inv)?,
    };
    out.echo = settings.echo();
    Ok(out)
}

/// Settings at each sweep point, or the base settings alone.
fn sweep_points(settings: &Settings, sweep: Option<&SweepSpec>) -> Result<Vec<(Option<f64>, Settings)>> {
    match sweep {
        None => Ok(vec![(None, settings.clone())]),
        Some(s) => s.points().into_iter().map(|v| Ok((Some(v), settings.with_number(&s.key, v)?))).collect(),
    }
}

fn header(table: &mut CsvTable, command: Command, settings: &Settings, derived: &BTreeMap<String, String>, sweep: Option<&SweepSpec>) {
    table.comment(format!("chipnoise {command} {VERSION}"));
    table.echo(&settings.echo());
    for (k, v) in derived {
        table.comment(format!("derived.{k} = {v}"));
    }
    if let Some(s) = sweep {
        table.comment(format!("sweep = {s}"));
    }
}

fn guide_derived(guide: &SideGuideConfig) -> Result<BTreeMap<String, String>> {
    let h = guide.height().map_err(|e| anyhow!("{e}"))?;
    let w = guide.larmor_frequency();
    let mut d = BTreeMap::new();
    d.insert("height".into(), format_si(h, Dimension::Length));
    d.insert("gradient".into(), format!("{:e} T/m", guide.gradient().map_err(|e| anyhow!("{e}"))?));
    d.insert("larmor_frequency".into(), format_si(w, Dimension::AngularFrequency));
    d.insert("larmor_frequency_hz".into(), format!("{:e} Hz (/2pi)", w / (2.0 * std::f64::consts::PI)));
    d.insert("longitudinal_field".into(), format_si(guide.longitudinal_field, Dimension::MagneticField));
    d.insert("current".into(), format_si(guide.current, Dimension::Current));
    Ok(d)
}

/// Tensor and its value normalized to the same source at `ω = 0`.
fn spectrum_point(settings: &Settings, guide: &SideGuideConfig, omega: f64) -> Result<(NoiseTensor, f64)> {
    let h = guide.height().map_err(|e| anyhow!("{e}"))?;
    let material = &guide.material;
    let err = |e: chipnoise_core::Error| anyhow!("{e}");
    Ok(match settings.text("spectrum.source")? {
        "current" => {
            let t = current_noise_tensor(guide.current, h, settings.number("noise_ratio")?, omega).map_err(err)?;
            (t, 1.0)
        }
        "shot" => {
            let dist = settings.electrons()?;
            let dz = settings.number("spectrum.separation")?;
            let s = shot_noise_spectrum(guide.current, h, h, dz, omega, &dist).map_err(err)?;
            let n = normalized_shot_spectrum(h, h, dz, omega, &dist).map_err(err)?;
            let mut t = NoiseTensor::diagonal([s, 0.0, 0.0], Axes::CylindricalWire, h, omega);
            t.frequency = omega;
            (t, n)
        }
        _ => {
            let occupation = settings.occupation()?;
            let thermal = |w: f64| match guide.wire.kind {
                WireKind::HalfSpace => halfspace_spectrum_with(material, h, w, occupation),
                WireKind::ThinWire => thin_wire_spectrum(material, guide.wire.radius, h, w),
            };
            let t = thermal(omega).map_err(err)?;
            let zero = thermal(0.0).map_err(err)?;
            let n = t.trace() / zero.trace();
            (t, n)
        }
    })
}

fn spectrum(settings: &Settings, inv: &Invocation) -> Result<RunOutput> {
    let guide = settings.side_guide()?;
    let derived = guide_derived(&guide)?;
    let sweep = inv.sweep.as_ref();
    let lead = sweep.filter(|s| s.key != "frequency").map(|s| s.key.as_str());
    let mut columns: Vec<&str> = lead.into_iter().collect();
    columns.extend(["omega_rad_s", "S_xx", "S_yy", "S_zz", "S_offdiag_max", "S_normalized"]);
    let mut table = CsvTable::new(&columns);
    header(&mut table, Command::Spectrum, settings, &derived, sweep);
    let mut axes = None;
    let mut json_rows = Vec::new();
    for (value, point) in sweep_points(settings, sweep)? {
        let guide = point.side_guide()?;
        let omega = point.opt_number("frequency").unwrap_or_else(|| guide.larmor_frequency());
        let (tensor, normalized) = spectrum_point(&point, &guide, omega)?;
        axes.get_or_insert(tensor.axes);
        let d = tensor.diag();
        let mut row: Vec<f64> = lead.and(value).into_iter().collect();
        row.extend([omega, d[0], d[1], d[2], tensor.offdiag_max(), normalized]);
        json_rows.push(row.clone());
        table.push(row);
    }
    if let Some(axes) = axes {
        let labels = axes.labels();
        table.comments.insert(1, format!("axes: xx = {}, yy = {}, zz = {}; S in T^2/Hz, omega in rad/s", labels[0], labels[1], labels[2]));
    }
    let mut outputs = OutputSet::default();
    outputs.add("spectrum.csv", table.render());
    if inv.json {
        outputs.add_json("spectrum.json", &JsonTable { columns: table.columns.clone(), rows: json_rows })?;
    }
    let text = format!("spectrum: {} rows written to spectrum.csv\n", table.rows.len());
    Ok(RunOutput { outputs, derived, text, ..RunOutput::default() })
}

#[derive(Serialize)]
struct JsonTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct RatesDocument<'a> {
    schema_version: u32,
    config_echo: BTreeMap<String, String>,
    sweep: Option<String>,
    points: Vec<RatesPoint<'a>>,
}

#[derive(Serialize)]
struct RatesPoint<'a> {
    sweep_value: Option<f64>,
    report: &'a RateReport,
}

/// Aligned text rendering of a rate report.
pub fn render_report(report: &RateReport) -> String {
    let mut out = String::new();
    let two_pi = 2.0 * std::f64::consts::PI;
    let _ = writeln!(out, "guide height          {:>14.6e} m ({:.4} um)", report.height, report.height / MICRON);
    let _ = writeln!(out, "Larmor frequency      {:>14.6e} rad/s ({:.6e} Hz, /2pi)", report.larmor_frequency, report.larmor_frequency / two_pi);
    let _ = writeln!(out, "ground-state size     {:>14.6e} m", report.ground_state_size);
    let _ = writeln!(out, "correlation length    {:>14.6e} m", report.correlation_length);
    let _ = writeln!(out, "flip rate             {:>14.6e} 1/s", report.flip_rate);
    let _ = writeln!(out, "loss timescale        {:>14.6e} s", report.loss_timescale);
    let _ = writeln!(out, "dephasing rate        {:>14.6e} 1/s", report.dephasing_rate);
    let _ = writeln!(out, "heating 0->1          {:>14.6e} 1/s", report.heating_01);
    let _ = writeln!(out, "heating 0->2          {:>14.6e} 1/s", report.heating_02);
    let _ = writeln!(out, "temperature rise      {:>14.6e} K/s", report.temperature_rise);
    let _ = writeln!(out, "dominant channel      {}", report.dominant_channel.tag());
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<34} {:<16} {:>14}", "tag", "method", "value");
    for e in &report.entries {
        let _ = writeln!(out, "{:<34} {:<16} {:>14.6e}", e.tag, format!("{:?}", e.method), e.value);
    }
    out
}

fn rates(settings: &Settings, inv: &Invocation) -> Result<RunOutput> {
    let options = settings.rate_options()?;
    let guide = settings.side_guide()?;
    let mut derived = guide_derived(&guide)?;
    let sweep = inv.sweep.as_ref();
    let mut reports = Vec::new();
    for (value, point) in sweep_points(settings, sweep)? {
        let guide = point.side_guide()?;
        let options = point.rate_options()?;
        let report = rate_report(&guide, &options).map_err(|e| anyhow!("{e}"))?;
        reports.push((value, report));
    }
    let base = rate_report(&guide, &options).map_err(|e| anyhow!("{e}"))?;
    derived.insert("ground_state_size".into(), format_si(base.ground_state_size, Dimension::Length));
    derived.insert("correlation_length".into(), format_si(base.correlation_length, Dimension::Length));

    let mut outputs = OutputSet::default();
    let text = match sweep {
        None => render_report(&base),
        Some(s) => {
            let mut columns: Vec<String> = vec![s.key.clone()];
            columns.extend(
                ["height_m", "larmor_rad_s", "flip_rate", "loss_timescale", "dephasing_rate", "heating_01", "heating_02", "temperature_rise"]
                    .map(String::from),
            );
            columns.extend(base.entries.iter().map(|e| e.tag.to_string()));
            let names: Vec<&str> = columns.iter().map(String::as_str).collect();
            let mut table = CsvTable::new(&names);
            header(&mut table, Command::Rates, settings, &derived, sweep);
            table.comments.insert(1, "units: SI; rates in 1/s, temperature_rise in K/s".to_string());
            for (value, r) in &reports {
                let mut row = vec![value.unwrap_or(f64::NAN), r.height, r.larmor_frequency, r.flip_rate, r.loss_timescale, r.dephasing_rate, r.heating_01, r.heating_02, r.temperature_rise];
                row.extend(r.entries.iter().map(|e| e.value));
                table.push(row);
            }
            outputs.add("rates.csv", table.render());
            format!("rates: {} sweep points written to rates.csv\n", reports.len())
        }
    };
    if inv.json {
        let doc = RatesDocument {
            schema_version: crate::manifest::SCHEMA_VERSION,
            config_echo: settings.echo(),
            sweep: sweep.map(|s| s.text.clone()),
            points: reports.iter().map(|(v, r)| RatesPoint { sweep_value: *v, report: r }).collect(),
        };
        outputs.add_json("rates.json", &doc)?;
    }
    Ok(RunOutput { outputs, derived, text, ..RunOutput::default() })
}

#[derive(Serialize)]
struct DecohereSidecar {
    schema_version: u32,
    gamma: f64,
    correlation: chipnoise_core::CorrelationForm,
    correlation_length: Option<f64>,
    n_z: usize,
    n_p: usize,
    length: f64,
    dt: f64,
    sigma_z: f64,
    sigma_p: f64,
    times: Vec<f64>,
    units: &'static str,
}

fn decohere(settings: &Settings, inv: &Invocation) -> Result<RunOutput> {
    let sweep = inv.sweep.as_ref();
    let lead = sweep.map(|s| s.key.as_str());
    let mut columns: Vec<&str> = lead.into_iter().collect();
    columns.extend(["t", "s", "rho_normalized", "analytic"]);
    let mut table = CsvTable::new(&columns);
    header(&mut table, Command::Decohere, settings, &BTreeMap::new(), sweep);
    table.comments.insert(1, "units: hbar = M = 1; rho_normalized = |rho(s,t)|/|rho(0,t)|".to_string());
    let mut sidecars = Vec::new();
    for (value, point) in sweep_points(settings, sweep)? {
        let d = point.decohere()?;
        let sigma_p = 0.5 / d.sigma_z;
        let err = |e: chipnoise_core::Error| anyhow!("{e}");
        let initial = WignerState::gaussian(d.n_z, d.length, d.n_p, 1.0, 1.0, d.sigma_z, sigma_p, 0.0).map_err(err)?;
        let kernel = ScatteringKernel::from_correlation(&d.model, d.gamma, d.length, d.n_p).map_err(err)?;
        let max_m = ((d.s_max / initial.dual_separation(1)).floor() as i64).min(d.n_p as i64 / 2);
        let mut state = initial.clone();
        let mut elapsed = 0.0;
        for &t in &d.times {
            if t > elapsed {
                state = evolve_master(&state, &kernel, t - elapsed, d.dt).map_err(err)?;
                elapsed = t;
            }
            let rho0 = state.coherence(0.0).norm();
            let free0 = initial.coherence(0.0).norm();
            for m in 0..=max_m {
                let s = initial.dual_separation(m);
                let analytic = initial.coherence(s).norm() / free0 * analytic_coherence(s, t, d.gamma, &d.model);
                let mut row: Vec<f64> = lead.and(value).into_iter().collect();
                row.extend([t, s, state.coherence(s).norm() / rho0, analytic]);
                table.push(row);
            }
        }
        sidecars.push(DecohereSidecar {
            schema_version: crate::manifest::SCHEMA_VERSION,
            gamma: d.gamma,
            correlation: d.model.form.clone(),
            correlation_length: d.model.correlation_length().ok().filter(|l| l.is_finite()),
            n_z: d.n_z,
            n_p: d.n_p,
            length: d.length,
            dt: d.dt,
            sigma_z: d.sigma_z,
            sigma_p,
            times: d.times.clone(),
            units: "hbar = M = 1",
        });
    }
    let mut outputs = OutputSet::default();
    outputs.add("decohere.csv", table.render());
    if sweep.is_some() {
        outputs.add_json("decohere.json", &sidecars)?;
    } else {
        outputs.add_json("decohere.json", &sidecars[0])?;
    }
    let text = format!("decohere: {} rows written to decohere.csv\n", table.rows.len());
    Ok(RunOutput { outputs, text, ..RunOutput::default() })
}

#[derive(Serialize)]
struct GpeSummary {
    schema_version: u32,
    times: Vec<f64>,
    initial_width: f64,
    chemical_potential: f64,
    max_norm_error: f64,
    files: Vec<String>,
    units: &'static str,
}

fn gpe(settings: &Settings, inv: &Invocation) -> Result<RunOutput> {
    let config = settings.condensate(inv.threads)?;
    let result = run_ensemble(&config).map_err(|e| anyhow!("{e}"))?;
    let mut derived = BTreeMap::new();
    derived.insert("initial_width".to_string(), format!("{:e}", result.initial_width));
    derived.insert("chemical_potential".to_string(), format!("{:e}", result.chemical_potential));
    let mut outputs = OutputSet::default();
    let mut files = Vec::new();
    for (i, snap) in result.snapshots.iter().enumerate() {
        let mut table = CsvTable::new(&["s", "re_rho", "im_rho", "abs_rho_normalized", "stderr", "mean_abs_rho", "free_abs_normalized"]);
        header(&mut table, Command::Gpe, settings, &derived, None);
        table.comments.insert(1, format!("time = {:e} (harmonic-oscillator units)", snap.time));
        let normalized = snap.normalized_abs();
        let free0 = snap.rho_reference[0].norm();
        for (m, &s) in result.s_grid.iter().enumerate() {
            let r = snap.rho_mean[m];
            table.push(vec![s, r.re, r.im, normalized[m], snap.rho_stderr[m], snap.rho_abs_mean[m], snap.rho_reference[m].norm() / free0]);
        }
        let name = format!("gpe_snapshot_{i}.csv");
        outputs.add(name.clone(), table.render());
        files.push(name);
    }
    let summary = GpeSummary {
        schema_version: crate::manifest::SCHEMA_VERSION,
        times: result.times.clone(),
        initial_width: result.initial_width,
        chemical_potential: result.chemical_potential,
        max_norm_error: result.max_norm_error,
        files,
        units: "hbar = M = Omega = 1",
    };
    outputs.add_json("gpe.json", &summary)?;
    let text = format!(
        "gpe: {} realizations, {} snapshots; initial width {:.6}, chemical potential {:.6}\n",
        config.n_realizations,
        result.snapshots.len(),
        result.initial_width,
        result.chemical_potential
    );
    Ok(RunOutput { outputs, derived, seed: Some(config.seed), text, ..RunOutput::default() })
}
