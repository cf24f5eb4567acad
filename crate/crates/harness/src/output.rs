//! CSV metrics output.

use std::fs;
use std::path::Path;

use clap::ValueEnum;
use parsubmod::RunMetrics;

use crate::config::{Algorithm, Problem};
use crate::error::{HarnessError, Result};
use crate::experiment::{normalize, ResultRow};

pub const HEADER: [&str; 11] = [
    "algorithm",
    "problem",
    "n",
    "param",
    "seed",
    "utility",
    "rounds",
    "queries",
    "max_queries_per_round",
    "independence_checks",
    "wall_ms",
];

/// Renders rows as CSV text: header, one line per row, LF endings.
pub fn to_csv_string(rows: &[ResultRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(HEADER).unwrap();
    for r in rows {
        let m = &r.metrics;
        w.write_record([
            r.algorithm.as_str().to_string(),
            r.problem.as_str().to_string(),
            r.n.to_string(),
            r.param.to_string(),
            r.seed.to_string(),
            format!("{:.6}", m.utility),
            m.rounds.to_string(),
            m.queries.to_string(),
            m.max_queries_per_round.to_string(),
            m.independence_checks.to_string(),
            m.wall_ms.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub fn write_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(HarnessError::Input("no rows to write".into()));
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    fs::write(path, to_csv_string(rows)).map_err(|e| HarnessError::io(path, e))
}

/// Reads rows written by [`write_csv`] and recomputes normalized utilities.
pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| HarnessError::io(path, e))?;
    let header = reader.headers().map_err(|e| HarnessError::io(path, e))?.clone();
    if header.iter().ne(HEADER) {
        return Err(HarnessError::at(path, 1, "unexpected header"));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let rec = record.map_err(|e| HarnessError::at(path, line, e))?;
        let field = |j: usize| rec.get(j).unwrap_or("");
        let num = |j: usize| -> Result<u64> {
            field(j)
                .parse()
                .map_err(|_| HarnessError::at(path, line, format!("invalid {} {:?}", HEADER[j], field(j))))
        };
        let real = |j: usize| -> Result<f64> {
            field(j)
                .parse()
                .map_err(|_| HarnessError::at(path, line, format!("invalid {} {:?}", HEADER[j], field(j))))
        };
        let algorithm = Algorithm::from_str(field(0), false)
            .map_err(|_| HarnessError::at(path, line, format!("unknown algorithm {:?}", field(0))))?;
        let problem = Problem::from_str(field(1), false)
            .map_err(|_| HarnessError::at(path, line, format!("unknown problem {:?}", field(1))))?;
        rows.push(ResultRow {
            algorithm,
            problem,
            n: num(2)? as usize,
            param: real(3)?,
            seed: num(4)?,
            metrics: RunMetrics {
                utility: real(5)?,
                rounds: num(6)?,
                queries: num(7)?,
                max_queries_per_round: num(8)?,
                independence_checks: num(9)?,
                wall_ms: num(10)?,
            },
            normalized: f64::NAN,
        });
    }
    normalize(&mut rows);
    Ok(rows)
}
