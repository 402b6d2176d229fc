use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::models::EnergyRecord;
use crate::spectral::Field;

pub const ENERGY_HEADER: &str = "step,time,original_energy,modified_energy,sav_value,psi,psi_bar,mass";

/// Floats are written in shortest round-trip scientific notation.
pub struct EnergyWriter {
    out: BufWriter<File>,
}

impl EnergyWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{ENERGY_HEADER}")?;
        Ok(EnergyWriter { out })
    }

    pub fn write(&mut self, r: &EnergyRecord) -> Result<()> {
        writeln!(
            self.out,
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            r.step, r.time, r.original_energy, r.modified_energy, r.sav_value, r.psi, r.psi_bar, r.mass
        )?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Text snapshot: a line `N L time`, then `N` rows of `N` values.
pub fn write_snapshot_text(path: &Path, f: &Field, time: f64) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{} {:e} {:e}", f.grid.n(), f.grid.length(), time)?;
    for row in f.values.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct SnapshotSidecar {
    pub n: usize,
    pub length: f64,
    pub time: f64,
    pub order: String,
}

/// Raw little-endian `f64`, row-major, plus a `.json` sidecar next to it.
pub fn write_snapshot_binary(path: &Path, f: &Field, time: f64) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for v in f.values.iter() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    let side = SnapshotSidecar { n: f.grid.n(), length: f.grid.length(), time, order: "row-major".into() };
    std::fs::write(path.with_extension("json"), serde_json::to_string_pretty(&side).expect("sidecar serializes"))?;
    Ok(())
}

pub fn snapshot_path(dir: &Path, step: usize, binary: bool) -> PathBuf {
    dir.join(format!("snapshot_{step:06}.{}", if binary { "bin" } else { "txt" }))
}

/// Reads a text snapshot back as `(n, length, time, row-major values)`.
pub fn read_snapshot_text(path: &Path) -> Result<(usize, f64, f64, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let bad = || crate::error::Error::Io(format!("{}: malformed snapshot", path.display()));
    let head: Vec<&str> = lines.next().ok_or_else(bad)?.split_whitespace().collect();
    if head.len() != 3 {
        return Err(bad());
    }
    let n: usize = head[0].parse().map_err(|_| bad())?;
    let length: f64 = head[1].parse().map_err(|_| bad())?;
    let time: f64 = head[2].parse().map_err(|_| bad())?;
    let mut values = Vec::with_capacity(n * n);
    for line in lines {
        for tok in line.split_whitespace() {
            values.push(tok.parse().map_err(|_| bad())?);
        }
    }
    if values.len() != n * n {
        return Err(bad());
    }
    Ok((n, length, time, values))
}
