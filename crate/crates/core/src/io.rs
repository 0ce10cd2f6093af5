//! Field and trajectory serialization.
//!
//! One fixed CSV layout so external tooling can read solver output without
//! linking this crate:
//!
//! ```text
//! dim,points,period,ncomp
//! 2,64,6.283185307179586,2
//! comp,index,re,im
//! 0,0,0.125,-0.5
//! ...
//! ```
//!
//! Rows are component-major, flat row-major spatial index inside each
//! component (last axis fastest). Floats print in shortest round-trip form,
//! so write-then-read reproduces every sample bit for bit. A trajectory is
//! a sequence of such files plus a `manifest.json` naming the frame files
//! in time order alongside their sample times.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::SpaceTimeField;
use crate::field::{ScalarField, VectorField};
use crate::grid::Grid;

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Writes one vector field in the fixed CSV layout.
pub fn write_field_csv<W: Write>(mut w: W, f: &VectorField) -> Result<()> {
    let grid = f.grid();
    writeln!(w, "dim,points,period,ncomp")?;
    writeln!(
        w,
        "{},{},{},{}",
        grid.dim(),
        grid.points(),
        grid.period(),
        f.comps().len()
    )?;
    writeln!(w, "comp,index,re,im")?;
    for (c, comp) in f.comps().iter().enumerate() {
        for (i, v) in comp.samples().iter().enumerate() {
            writeln!(w, "{c},{i},{},{}", v.re, v.im)?;
        }
    }
    Ok(())
}

pub fn write_field_csv_path(path: &Path, f: &VectorField) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_field_csv(&mut w, f)?;
    Ok(w.flush()?)
}

/// Reads a vector field written by [`write_field_csv`].
pub fn read_field_csv<R: BufRead>(r: R) -> Result<VectorField> {
    let mut lines = r.lines();
    let mut next = |what: &str| -> Result<String> {
        lines
            .next()
            .ok_or_else(|| bad(format!("missing {what}")))?
            .map_err(Error::Io)
    };
    if next("header")? != "dim,points,period,ncomp" {
        return Err(bad("first line must be `dim,points,period,ncomp`"));
    }
    let meta = next("header values")?;
    let parts: Vec<&str> = meta.split(',').collect();
    if parts.len() != 4 {
        return Err(bad("header needs exactly four values"));
    }
    let dim: usize = parts[0].parse().map_err(|_| bad("bad dim"))?;
    let points: usize = parts[1].parse().map_err(|_| bad("bad points"))?;
    let period: f64 = parts[2].parse().map_err(|_| bad("bad period"))?;
    let ncomp: usize = parts[3].parse().map_err(|_| bad("bad ncomp"))?;
    if ncomp == 0 {
        return Err(bad("ncomp must be positive"));
    }
    if next("column names")? != "comp,index,re,im" {
        return Err(bad("third line must be `comp,index,re,im`"));
    }
    let grid = Grid::new(dim, points, period)?;
    let len = grid.len();
    let mut comps = vec![vec![Complex64::default(); len]; ncomp];
    let mut seen = vec![0usize; ncomp];
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let mut it = line.split(',');
        let mut field = |what: &str| -> Result<&str> {
            it.next().ok_or_else(|| bad(format!("row missing {what}")))
        };
        let c: usize = field("comp")?.parse().map_err(|_| bad("bad comp"))?;
        let i: usize = field("index")?.parse().map_err(|_| bad("bad index"))?;
        let re: f64 = field("re")?.parse().map_err(|_| bad("bad re"))?;
        let im: f64 = field("im")?.parse().map_err(|_| bad("bad im"))?;
        if c >= ncomp || i >= len {
            return Err(bad(format!("row ({c},{i}) outside field shape")));
        }
        comps[c][i] = Complex64::new(re, im);
        seen[c] += 1;
    }
    if seen.iter().any(|&s| s != len) {
        return Err(bad("sample rows do not cover every component exactly once"));
    }
    let fields = comps
        .into_iter()
        .map(|samples| ScalarField::from_samples(grid, samples))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(fields)
}

pub fn read_field_csv_path(path: &Path) -> Result<VectorField> {
    read_field_csv(BufReader::new(File::open(path)?))
}

/// Index of an exported trajectory: grid geometry, frame times, and the
/// frame file names (relative to the manifest's directory) in time order.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryManifest {
    pub dim: usize,
    pub points: usize,
    pub period: f64,
    pub ncomp: usize,
    pub times: Vec<f64>,
    pub frames: Vec<String>,
    /// Velocity frame files for wave trajectories, absent for Schrödinger.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity_frames: Option<Vec<String>>,
}

/// Writes every frame of `traj` (and optionally a velocity trajectory on
/// the same grid and times) into `dir`, plus `manifest.json`. Returns the
/// manifest that was written.
pub fn export_trajectory(
    dir: &Path,
    traj: &SpaceTimeField,
    velocity: Option<&SpaceTimeField>,
) -> Result<TrajectoryManifest> {
    if let Some(v) = velocity {
        if !v.grid().same_as(traj.grid()) {
            return Err(Error::GridMismatch);
        }
        if v.times().len() != traj.times().len() {
            return Err(Error::TimeGridMismatch(
                "velocity frames do not match solution frames".into(),
            ));
        }
    }
    fs::create_dir_all(dir)?;
    let times = traj.times().times();
    let mut frames = Vec::with_capacity(times.len());
    let mut velocity_frames = velocity.map(|_| Vec::with_capacity(times.len()));
    for i in 0..times.len() {
        let name = format!("frame_{i:05}.csv");
        let field = VectorField::new(traj.frame(i).to_vec())?;
        write_field_csv_path(&dir.join(&name), &field)?;
        frames.push(name);
        if let Some(v) = velocity {
            let name = format!("velocity_{i:05}.csv");
            let field = VectorField::new(v.frame(i).to_vec())?;
            write_field_csv_path(&dir.join(&name), &field)?;
            velocity_frames.as_mut().unwrap().push(name);
        }
    }
    let manifest = TrajectoryManifest {
        dim: traj.grid().dim(),
        points: traj.grid().points(),
        period: traj.grid().period(),
        ncomp: traj.ncomp(),
        times,
        frames,
        velocity_frames,
    };
    let file = BufWriter::new(File::create(dir.join("manifest.json"))?);
    serde_json::to_writer_pretty(file, &manifest)?;
    Ok(manifest)
}

pub fn read_manifest(path: &Path) -> Result<TrajectoryManifest> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}
