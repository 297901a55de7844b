//! Exploitability traces in CSV form.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::controller::Phase;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "iter,exploitability,sccp_n,phase,w,wall_ms";

/// One checkpoint. `sccp` and `weight` are 0 for runs without an RT term.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iter: u64,
    pub exploitability: f64,
    pub sccp: u64,
    pub phase: Option<Phase>,
    pub weight: f64,
    pub wall_ms: u64,
}

impl TraceRow {
    /// The row without its wall-clock column, for determinism checks.
    pub fn deterministic_part(&self) -> String {
        let line = self.to_line();
        line[..line.rfind(',').unwrap_or(line.len())].to_string()
    }

    pub fn to_line(&self) -> String {
        let phase = self.phase.map_or("none", Phase::as_str);
        format!("{},{:e},{},{},{},{}", self.iter, self.exploitability, self.sccp, phase, self.weight, self.wall_ms)
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let bad = |what: &str| Error::Trace(format!("{what} in `{line}`"));
        let fields: Vec<&str> = line.split(',').collect();
        let [iter, eps, sccp, phase, w, wall] = fields[..] else {
            return Err(bad("expected 6 fields"));
        };
        Ok(Self {
            iter: iter.parse().map_err(|_| bad("bad iter"))?,
            exploitability: eps.parse().map_err(|_| bad("bad exploitability"))?,
            sccp: sccp.parse().map_err(|_| bad("bad sccp_n"))?,
            phase: match phase {
                "none" => None,
                p => Some(p.parse()?),
            },
            weight: w.parse().map_err(|_| bad("bad w"))?,
            wall_ms: wall.parse().map_err(|_| bad("bad wall_ms"))?,
        })
    }
}

/// Parses a trace. A final line without a trailing newline is treated as
/// an interrupted write and dropped.
pub fn parse_csv(text: &str) -> Result<Vec<TraceRow>> {
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    let mut lines = complete.lines();
    match lines.next() {
        Some(h) if h.trim_end() == CSV_HEADER => {}
        Some(h) => return Err(Error::Trace(format!("unexpected header `{h}`"))),
        None => return Err(Error::Trace("empty trace".into())),
    }
    lines.filter(|l| !l.trim().is_empty()).map(|l| TraceRow::parse_line(l.trim_end())).collect()
}

pub fn read_csv(path: &Path) -> Result<Vec<TraceRow>> {
    parse_csv(&std::fs::read_to_string(path)?)
}

pub fn write_csv(path: &Path, rows: &[TraceRow]) -> Result<()> {
    let mut w = TraceWriter::create(path)?;
    for row in rows {
        w.push(row)?;
    }
    Ok(())
}

/// Appends rows to a CSV file, flushing after each so that an interrupted
/// run leaves a readable prefix.
#[derive(Debug)]
pub struct TraceWriter {
    out: BufWriter<File>,
}

impl TraceWriter {
    pub fn create(path: &Path) -> Result<Self> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{CSV_HEADER}")?;
        out.flush()?;
        Ok(Self { out })
    }

    pub fn push(&mut self, row: &TraceRow) -> Result<()> {
        writeln!(self.out, "{}", row.to_line())?;
        self.out.flush()?;
        Ok(())
    }
}
