//! CSV artifacts and console summaries.
//!
//! Files carry full-precision numbers (shortest round-trip formatting), so
//! re-running with the same inputs reproduces them byte for byte. Console
//! output rounds costs to cents.
//!
//! `periods.csv` columns:
//! `period,operating_cost,generation_cost,curtailment_penalty,shed_penalty,shed_energy,normal,lte,ste,dca_iters,status`
//!
//! `lmp.csv` columns: `period` followed by one column per bus id, in case
//! order, values in $/MWh.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::GridRow;
use crate::network::Case;
use crate::rolling::{PeriodReport, Simulation, Summary};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

fn finish<W: Write>(w: csv::Writer<W>) -> std::io::Result<()> {
    w.into_inner().map_err(|e| e.into_error())?.flush()
}

pub fn write_periods<W: Write>(w: W, reports: &[PeriodReport]) -> std::io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record([
        "period",
        "operating_cost",
        "generation_cost",
        "curtailment_penalty",
        "shed_penalty",
        "shed_energy",
        "normal",
        "lte",
        "ste",
        "dca_iters",
        "status",
    ])?;
    for r in reports {
        out.write_record([
            r.period.to_string(),
            r.operating_cost().to_string(),
            r.cost.generation.to_string(),
            r.cost.curtailment.to_string(),
            r.cost.shed.to_string(),
            r.cost.shed_energy.to_string(),
            r.zones.normal.to_string(),
            r.zones.lte.to_string(),
            r.zones.ste.to_string(),
            r.dca_iterations.to_string(),
            r.status.to_string(),
        ])?;
    }
    finish(out)
}

pub fn write_lmps<W: Write>(w: W, case: &Case, reports: &[PeriodReport]) -> std::io::Result<()> {
    let mut out = csv_writer(w);
    let header: Vec<String> = std::iter::once("period".to_string())
        .chain(case.buses.iter().map(|b| b.id.to_string()))
        .collect();
    out.write_record(&header)?;
    for r in reports {
        let row: Vec<String> = std::iter::once(r.period.to_string())
            .chain(r.lmp.iter().map(|p| p.to_string()))
            .collect();
        out.write_record(&row)?;
    }
    finish(out)
}

pub fn write_grid<W: Write>(w: W, rows: &[GridRow]) -> std::io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record([
        "epsilon",
        "gamma_l",
        "gamma_s",
        "total_cost",
        "total_shed",
        "avg_normal",
        "avg_lte",
        "avg_ste",
        "dca_iters",
        "status",
    ])?;
    for r in rows {
        let mut rec = vec![r.epsilon.to_string(), r.gamma_l.to_string(), r.gamma_s.to_string()];
        match &r.summary {
            Some(s) => {
                let (n, l, e) = s.average_zones();
                rec.extend([
                    s.total_cost.to_string(),
                    s.total_shed.to_string(),
                    n.to_string(),
                    l.to_string(),
                    e.to_string(),
                    s.dca_iterations.to_string(),
                ]);
            }
            None => rec.extend(std::iter::repeat_n(String::new(), 6)),
        }
        rec.push(r.status.clone());
        out.write_record(&rec)?;
    }
    finish(out)
}

/// One scenario of the CMP-versus-strict comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub scenario: String,
    pub cmp: Summary,
    pub strict: Summary,
}

impl CompareRow {
    /// Relative cost decrease of CMP against strict, percent.
    pub fn decrease_percent(&self) -> f64 {
        if self.strict.total_cost == 0.0 {
            0.0
        } else {
            100.0 * (self.strict.total_cost - self.cmp.total_cost) / self.strict.total_cost
        }
    }
}

fn zones_triple(s: &Summary, digits: usize) -> String {
    let (n, l, e) = s.average_zones();
    format!("{n:.digits$}/{l:.digits$}/{e:.digits$}")
}

pub fn write_compare<W: Write>(w: W, rows: &[CompareRow]) -> std::io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record([
        "scenario",
        "cmp_cost",
        "strict_cost",
        "cmp_shed",
        "strict_shed",
        "cmp_zones",
        "strict_zones",
        "decrease_percent",
    ])?;
    for r in rows {
        let (cn, cl, cs) = r.cmp.average_zones();
        let (sn, sl, ss) = r.strict.average_zones();
        out.write_record([
            r.scenario.clone(),
            r.cmp.total_cost.to_string(),
            r.strict.total_cost.to_string(),
            r.cmp.total_shed.to_string(),
            r.strict.total_shed.to_string(),
            format!("{cn}/{cl}/{cs}"),
            format!("{sn}/{sl}/{ss}"),
            r.decrease_percent().to_string(),
        ])?;
    }
    finish(out)
}

/// Console table in the layout of a cost/shed/zone comparison.
pub fn compare_table(rows: &[CompareRow]) -> String {
    let mut s = format!(
        "{:<12} {:>16} {:>16} {:>12} {:>12} {:>22} {:>22}\n",
        "scenario", "cost cmp", "cost strict", "shed cmp", "shed strict", "zones cmp", "zones strict"
    );
    for r in rows {
        s.push_str(&format!(
            "{:<12} {:>16.2} {:>16.2} {:>12.2} {:>12.2} {:>22} {:>22}\n",
            r.scenario,
            r.cmp.total_cost,
            r.strict.total_cost,
            r.cmp.total_shed,
            r.strict.total_shed,
            zones_triple(&r.cmp, 3),
            zones_triple(&r.strict, 3)
        ));
    }
    s
}

/// `total_cost=… total_shed=… zones(normal/lte/ste)=…`
pub fn summary_line(s: &Summary) -> String {
    format!(
        "total_cost={:.2} total_shed={:.2} zones(normal/lte/ste)={} dca_iters={}",
        s.total_cost,
        s.total_shed,
        zones_triple(s, 3),
        s.dca_iterations
    )
}

fn write_file(path: &Path, f: impl FnOnce(fs::File) -> std::io::Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    f(file).map_err(io_err(path))
}

/// Writes `periods.csv` and `lmp.csv` under `dir` (created if needed) and
/// returns their paths.
pub fn write_simulation(dir: &Path, case: &Case, sim: &Simulation) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let periods = dir.join("periods.csv");
    let lmp = dir.join("lmp.csv");
    write_file(&periods, |f| write_periods(f, &sim.reports))?;
    write_file(&lmp, |f| write_lmps(f, case, &sim.reports))?;
    Ok((periods, lmp))
}

pub fn write_grid_file(path: &Path, rows: &[GridRow]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    write_file(path, |f| write_grid(f, rows))
}

pub fn write_compare_file(path: &Path, rows: &[CompareRow]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    write_file(path, |f| write_compare(f, rows))
}
