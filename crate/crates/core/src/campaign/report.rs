//! Statistics, fit, CDF and SIR files derived from case runs.

use std::path::{Path, PathBuf};

use super::io::{finish, opt, write_row, writer};
use super::{read_trace, write_trace, CaseRun, CaseSpec, SYSTEMS};
use crate::attenuation::Weather;
use crate::chanstats::{empirical_cdf, fit_normal, SnapshotStats};
use crate::error::{Error, Result};
use crate::interference::{coverage_probability, sir_series, weather_delta, SirSeries};

/// Fitted parameters, in table column order.
pub const PARAMETERS: [&str; 6] = ["DS_ns", "KF_dB", "ASA_deg", "ASD_deg", "ESA_deg", "ESD_deg"];

pub const COVERAGE_THRESHOLDS_DB: [f64; 2] = [0.0, 40.0];

fn parameter_values(stats: &SnapshotStats<f64>) -> [Option<f64>; 6] {
    [stats.ds_s.map(|d| d * 1e9), stats.kf_db, stats.asa_deg, stats.asd_deg, stats.esa_deg, stats.esd_deg]
}

/// Finite samples of each parameter across the run, and how many were dropped.
fn samples(stats: &[SnapshotStats<f64>]) -> Vec<(Vec<f64>, usize)> {
    (0..PARAMETERS.len())
        .map(|p| {
            let all: Vec<Option<f64>> = stats.iter().map(|s| parameter_values(s)[p]).collect();
            let finite: Vec<f64> = all.iter().flatten().copied().filter(|v| v.is_finite()).collect();
            let excluded = all.len() - finite.len();
            (finite, excluded)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitRow {
    pub case: String,
    pub parameter: &'static str,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub n: usize,
    pub n_excluded: usize,
}

pub fn fit_rows(run: &CaseRun) -> Vec<FitRow> {
    let stats = run.stats();
    samples(&stats)
        .into_iter()
        .zip(PARAMETERS)
        .map(|((values, n_excluded), parameter)| {
            if n_excluded > 0 {
                log::debug!("{}: {n_excluded} non-finite {parameter} values left out of the fit", run.case);
            }
            let fit = fit_normal(&values).ok();
            FitRow {
                case: run.case.id(),
                parameter,
                mu: fit.map(|f| f.mu),
                sigma: fit.map(|f| f.sigma),
                n: values.len(),
                n_excluded,
            }
        })
        .collect()
}

const FIT_HEADER: [&str; 6] = ["case", "parameter", "mu", "sigma", "n", "n_excluded"];

fn write_fits(rows: &[FitRow], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    write_row(&mut w, path, &FIT_HEADER.map(String::from))?;
    for r in rows {
        let row = [
            r.case.clone(),
            r.parameter.to_string(),
            opt(r.mu),
            opt(r.sigma),
            r.n.to_string(),
            r.n_excluded.to_string(),
        ];
        write_row(&mut w, path, &row)?;
    }
    finish(w, path)
}

fn write_stats(run: &CaseRun, stats: &[SnapshotStats<f64>], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    let header =
        ["snapshot_index", "track_distance_m", "los_blocked", "n_mpc", "p_los_dbm", "p_nlos_dbm", "p_total_dbm"];
    let mut head: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    head.extend(PARAMETERS.iter().map(|s| s.to_string()));
    write_row(&mut w, path, &head)?;
    for ((set, dist), s) in run.snapshots.iter().zip(&run.track_distance_m).zip(stats) {
        let mut row = vec![
            set.snapshot_index.to_string(),
            dist.to_string(),
            set.los_blocked.to_string(),
            set.len().to_string(),
            opt(s.power.p_los),
            opt(s.power.p_nlos),
            s.power.p_total.to_string(),
        ];
        row.extend(parameter_values(s).map(opt));
        write_row(&mut w, path, &row)?;
    }
    finish(w, path)
}

fn write_cdfs(stats: &[SnapshotStats<f64>], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    write_row(&mut w, path, &["parameter", "value", "cdf"].map(String::from))?;
    for ((values, _), parameter) in samples(stats).into_iter().zip(PARAMETERS) {
        let Ok(cdf) = empirical_cdf(&values) else { continue };
        for (v, f) in cdf.steps() {
            write_row(&mut w, path, &[parameter.to_string(), v.to_string(), f.to_string()])?;
        }
    }
    finish(w, path)
}

/// Writes `<CASE>_mpc.csv`, `_stats.csv`, `_fits.csv` and `_cdf.csv`.
pub fn write_case_outputs(run: &CaseRun, dir: &Path) -> Result<Vec<PathBuf>> {
    let id = run.case.id();
    let paths: Vec<PathBuf> =
        ["mpc", "stats", "fits", "cdf"].iter().map(|kind| dir.join(format!("{id}_{kind}.csv"))).collect();
    let stats = run.stats();
    write_trace(run, &paths[0])?;
    write_stats(run, &stats, &paths[1])?;
    write_fits(&fit_rows(run), &paths[2])?;
    write_cdfs(&stats, &paths[3])?;
    Ok(paths)
}

fn find<'a>(runs: &'a [CaseRun], id: &str) -> Result<&'a CaseRun> {
    runs.iter().find(|r| r.case.id() == id).ok_or_else(|| Error::UnknownCase(id.to_string()))
}

/// Writes SIR series, coverage, weather delta and the combined fit table for all cases.
pub fn write_system_outputs(runs: &[CaseRun], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let coverage_path = dir.join("coverage.csv");
    let delta_path = dir.join("weather_delta.csv");
    let mut cov = writer(&coverage_path)?;
    write_row(
        &mut cov,
        &coverage_path,
        &["system", "weather", "threshold_db", "coverage", "n", "n_excluded"].map(String::from),
    )?;
    let mut delta = writer(&delta_path)?;
    write_row(
        &mut delta,
        &delta_path,
        &["system", "snapshot_index", "track_distance_m", "delta_db"].map(String::from),
    )?;

    for system in SYSTEMS {
        let path = dir.join(format!("sir_{}.csv", system.name));
        let mut w = writer(&path)?;
        write_row(
            &mut w,
            &path,
            &["weather", "snapshot_index", "track_distance_m", "p_signal_dbm", "p_interference_dbm", "sir_db"]
                .map(String::from),
        )?;
        let mut by_weather: Vec<SirSeries<f64>> = Vec::new();
        let mut distances = Vec::new();
        for weather in Weather::ALL {
            let sig = find(runs, &system.signal.with_weather(weather).id())?;
            let int = find(runs, &system.interference.with_weather(weather).id())?;
            let series = sir_series(&sig.case.id(), &sig.total_power(), &int.case.id(), &int.total_power())?;
            for (i, d) in sig.track_distance_m.iter().enumerate() {
                let row = [
                    weather.to_string(),
                    i.to_string(),
                    d.to_string(),
                    series.p_signal_dbm[i].to_string(),
                    series.p_interference_dbm[i].to_string(),
                    series.sir_db[i].to_string(),
                ];
                write_row(&mut w, &path, &row)?;
            }
            let n = series.finite().len();
            for threshold in COVERAGE_THRESHOLDS_DB {
                let row = [
                    system.name.to_string(),
                    weather.to_string(),
                    threshold.to_string(),
                    opt(coverage_probability(&series, threshold).ok()),
                    n.to_string(),
                    (series.len() - n).to_string(),
                ];
                write_row(&mut cov, &coverage_path, &row)?;
            }
            distances = sig.track_distance_m.clone();
            by_weather.push(series);
        }
        finish(w, &path)?;
        written.push(path);
        for (i, d) in weather_delta(&by_weather[0], &by_weather[1])?.into_iter().enumerate() {
            let row = [system.name.to_string(), i.to_string(), distances[i].to_string(), d.to_string()];
            write_row(&mut delta, &delta_path, &row)?;
        }
    }
    finish(cov, &coverage_path)?;
    finish(delta, &delta_path)?;

    let fits_path = dir.join("fits.csv");
    let rows: Vec<FitRow> = runs.iter().flat_map(fit_rows).collect();
    write_fits(&rows, &fits_path)?;
    written.extend([coverage_path, delta_path, fits_path]);
    Ok(written)
}

/// Rebuilds every derived file in `dir` from the trace files found there.
pub fn regenerate(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut runs = Vec::new();
    for case in CaseSpec::ALL {
        let path = dir.join(format!("{}_mpc.csv", case.id()));
        if path.exists() {
            runs.push(read_trace(case, &path)?);
        }
    }
    if runs.is_empty() {
        return Err(Error::MalformedTrace { path: dir.to_path_buf(), reason: "no trace files found".into() });
    }
    let mut written = Vec::new();
    for run in &runs {
        written.extend(write_case_outputs(run, dir)?);
    }
    if runs.len() == CaseSpec::ALL.len() {
        written.extend(write_system_outputs(&runs, dir)?);
    } else {
        log::warn!("only {} of {} cases present; skipping SIR reports", runs.len(), CaseSpec::ALL.len());
    }
    Ok(written)
}
