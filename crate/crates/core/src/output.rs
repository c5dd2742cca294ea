//! Result files: entropy time series, nodal snapshots and error tables.
//!
//! Floats are printed with 17 significant digits so every value round-trips.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::dgsem::{EntropyReport, Semidiscretization, SolutionField};
use crate::error::{Error, Result};

pub const ENTROPY_HEADER: &str = "t,E,dEdt,budget,margin,min_h,max_speed";
/// Overrides the output directory of every scenario.
pub const OUTPUT_DIR_ENV: &str = "DGBOUND_OUTPUT_DIR";

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn entropy_csv(reports: &[EntropyReport]) -> String {
    let mut s = String::from(ENTROPY_HEADER);
    s.push('\n');
    for r in reports {
        let row = [r.t, r.entropy, r.rate, r.budget, r.margin, r.min_h, r.max_speed].map(fmt_f64);
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn variable_names(nvar: usize) -> &'static [&'static str] {
    if nvar == 1 {
        &["u"]
    } else {
        &["h", "hv1", "hv2"]
    }
}

pub fn snapshot_csv(disc: &dyn Semidiscretization, q: &SolutionField) -> String {
    let names = variable_names(q.nvar);
    let mut s = format!("elem,i,j,x,y,{}\n", names.join(","));
    for (k, (e, i, j, x, y)) in disc.node_coords().into_iter().enumerate() {
        let _ = write!(s, "{e},{i},{j},{},{}", fmt_f64(x), fmt_f64(y));
        for v in &q.data[k * q.nvar..(k + 1) * q.nvar] {
            let _ = write!(s, ",{}", fmt_f64(*v));
        }
        s.push('\n');
    }
    s
}

pub fn errors_csv(nvar: usize, errors: &[f64]) -> String {
    let mut s = String::from("variable,l2_error\n");
    for (name, e) in variable_names(nvar).iter().zip(errors) {
        let _ = writeln!(s, "{name},{}", fmt_f64(*e));
    }
    s
}

/// One parsed snapshot row.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotRecord {
    pub elem: usize,
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub state: Vec<f64>,
}

pub fn parse_snapshot(text: &str) -> Result<Vec<SnapshotRecord>> {
    let bad = |line: usize, what: &str| Error::Config(format!("snapshot line {line}: {what}"));
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
    let ncols = header.split(',').count();
    if ncols < 6 || !header.starts_with("elem,i,j,x,y,") {
        return Err(bad(1, "unexpected header"));
    }
    lines
        .map(|(k, line)| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != ncols {
                return Err(bad(k + 1, "wrong column count"));
            }
            let int = |s: &str| s.parse::<usize>().map_err(|e| bad(k + 1, &e.to_string()));
            let float = |s: &str| s.parse::<f64>().map_err(|e| bad(k + 1, &e.to_string()));
            Ok(SnapshotRecord {
                elem: int(cols[0])?,
                i: int(cols[1])?,
                j: int(cols[2])?,
                x: float(cols[3])?,
                y: float(cols[4])?,
                state: cols[5..].iter().map(|c| float(c)).collect::<Result<_>>()?,
            })
        })
        .collect()
}

/// Environment override, then the configured directory, then `output`.
pub fn resolve_output_dir(configured: Option<&Path>) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => configured
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("output")),
    }
}

/// Writes `contents` to `dir/name`, creating `dir` when needed.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}
