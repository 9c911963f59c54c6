//! Multipath trace files.

use std::path::Path;

use super::{CaseRun, CaseSpec};
use crate::error::{Error, Result};
use crate::mpc::{Mpc, MpcSet};

pub(super) const TRACE_HEADER: [&str; 13] = [
    "snapshot_index",
    "track_distance_m",
    "los_blocked",
    "excess_db",
    "rank",
    "power_dbm",
    "delay_s",
    "aod_az_deg",
    "aod_el_deg",
    "aoa_az_deg",
    "aoa_el_deg",
    "phase_rad",
    "chain",
];

pub(super) fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))
}

pub(super) fn write_row<W: std::io::Write>(w: &mut csv::Writer<W>, path: &Path, row: &[String]) -> Result<()> {
    w.write_record(row).map_err(|e| Error::csv(path, e))
}

pub(super) fn finish<W: std::io::Write>(mut w: csv::Writer<W>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Empty string for absent values.
pub(super) fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes every component of every snapshot. A snapshot without components is one row with empty fields.
pub fn write_trace(run: &CaseRun, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    write_row(&mut w, path, &TRACE_HEADER.map(String::from))?;
    for (set, dist) in run.snapshots.iter().zip(&run.track_distance_m) {
        let lead =
            [set.snapshot_index.to_string(), dist.to_string(), set.los_blocked.to_string(), run.excess_db.to_string()];
        if set.is_empty() {
            let mut row = lead.to_vec();
            row.resize(TRACE_HEADER.len(), String::new());
            write_row(&mut w, path, &row)?;
        }
        for (rank, m) in set.mpcs.iter().enumerate() {
            let mut row = lead.to_vec();
            row.extend([
                rank.to_string(),
                m.power_dbm.to_string(),
                m.delay_s.to_string(),
                m.aod_az_deg.to_string(),
                m.aod_el_deg.to_string(),
                m.aoa_az_deg.to_string(),
                m.aoa_el_deg.to_string(),
                m.phase_rad.to_string(),
                m.chain.to_string(),
            ]);
            write_row(&mut w, path, &row)?;
        }
    }
    finish(w, path)
}

/// Reads a trace written by [`write_trace`].
pub fn read_trace(case: CaseSpec, path: &Path) -> Result<CaseRun> {
    let bad = |reason: String| Error::MalformedTrace { path: path.to_path_buf(), reason };
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let header = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    if header.iter().ne(TRACE_HEADER) {
        return Err(bad("unexpected header".into()));
    }
    let mut run = CaseRun { case, excess_db: 0.0, track_distance_m: Vec::new(), snapshots: Vec::new() };
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let num = |i: usize| -> Result<f64> {
            field(i)
                .parse::<f64>()
                .map_err(|_| bad(format!("row {}: bad `{}` value `{}`", line + 2, TRACE_HEADER[i], field(i))))
        };
        let index: usize = field(0).parse().map_err(|_| bad(format!("row {}: bad snapshot index", line + 2)))?;
        let los_blocked: bool = field(2).parse().map_err(|_| bad(format!("row {}: bad los flag", line + 2)))?;
        run.excess_db = num(3)?;
        if index == run.snapshots.len() {
            run.track_distance_m.push(num(1)?);
            run.snapshots.push(MpcSet { snapshot_index: index, mpcs: Vec::new(), los_blocked });
        } else if index + 1 != run.snapshots.len() {
            return Err(bad(format!("row {}: snapshot {index} out of order", line + 2)));
        }
        if field(4).is_empty() {
            continue;
        }
        let chain = field(12).parse().map_err(|e: Error| bad(e.to_string()))?;
        run.snapshots[index].mpcs.push(Mpc {
            power_dbm: num(5)?,
            delay_s: num(6)?,
            aod_az_deg: num(7)?,
            aod_el_deg: num(8)?,
            aoa_az_deg: num(9)?,
            aoa_el_deg: num(10)?,
            phase_rad: num(11)?,
            chain,
        });
    }
    Ok(run)
}
