//! File formats: moment samples, ladder curves with a JSON sidecar, zero
//! lists and geometry records.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zeta4_core::ladder::{Convention, LadderCurve};
use zeta4_core::zeros::{CorollaryCheck, ZeroGeometry};

use crate::Error;

/// One row of a moment sample file: `∫_1^T Z⁴` and its error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    #[serde(rename = "T")]
    pub t: f64,
    pub value: f64,
    pub err_bound: f64,
}

pub fn write_samples<W: Write>(w: W, samples: &[Sample]) -> Result<(), Error> {
    let mut out = csv::Writer::from_writer(w);
    for s in samples {
        out.serialize(s)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_samples<R: Read>(r: R) -> Result<Vec<Sample>, Error> {
    let mut rows = csv::Reader::from_reader(r);
    rows.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct CurveRow {
    t: f64,
    phi: f64,
}

/// Everything about a ladder curve except its samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderMeta {
    pub t0: f64,
    pub t1: f64,
    pub step: f64,
    pub convention: Convention,
    pub anchor: f64,
    pub tol_ladder: f64,
}

impl LadderMeta {
    pub fn of(curve: &LadderCurve) -> Self {
        LadderMeta {
            t0: curve.t0,
            t1: curve.t1,
            step: curve.step,
            convention: curve.convention,
            anchor: curve.anchor,
            tol_ladder: curve.tol,
        }
    }
}

/// `curve.csv` → `curve.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Writes the `t,phi` rows.
pub fn write_curve_csv<W: Write>(w: W, curve: &LadderCurve) -> Result<(), Error> {
    let mut out = csv::Writer::from_writer(w);
    for (i, &phi) in curve.phi.iter().enumerate() {
        out.serialize(CurveRow {
            t: curve.abscissa(i),
            phi,
        })?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `path` and its sidecar.
pub fn write_ladder(path: &Path, curve: &LadderCurve) -> Result<(), Error> {
    write_curve_csv(File::create(path)?, curve)?;
    let meta = serde_json::to_string_pretty(&LadderMeta::of(curve))?;
    std::fs::write(sidecar_path(path), meta + "\n")?;
    Ok(())
}

/// Reads a curve written by [`write_ladder`].
pub fn read_ladder(path: &Path) -> Result<LadderCurve, Error> {
    let meta: LadderMeta = serde_json::from_reader(File::open(sidecar_path(path))?)?;
    let mut rows = csv::Reader::from_reader(File::open(path)?);
    let mut phi = Vec::new();
    for row in rows.deserialize() {
        let row: CurveRow = row?;
        phi.push(row.phi);
    }
    Ok(LadderCurve::from_samples(
        meta.t0,
        meta.t1,
        meta.step,
        phi,
        meta.convention,
        meta.anchor,
        meta.tol_ladder,
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct ZeroRow {
    gamma: f64,
}

pub fn write_zeros<W: Write>(w: W, zeros: &[f64]) -> Result<(), Error> {
    let mut out = csv::Writer::from_writer(w);
    for &gamma in zeros {
        out.serialize(ZeroRow { gamma })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_zeros<R: Read>(r: R) -> Result<Vec<f64>, Error> {
    let mut rows = csv::Reader::from_reader(r);
    rows.deserialize::<ZeroRow>()
        .map(|row| row.map(|z| z.gamma).map_err(Error::from))
        .collect()
}

/// A zero pair with its derived points and the checks run on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryRecord {
    pub gamma: f64,
    pub gamma_next: f64,
    pub rho: Option<f64>,
    pub tan_beta: Option<f64>,
    pub gamma_bar: Option<f64>,
    pub delta_gap: Option<f64>,
    pub rho_bar: Option<f64>,
    pub checks: Vec<CorollaryCheck>,
}

impl GeometryRecord {
    pub fn new(geom: &ZeroGeometry, checks: Vec<CorollaryCheck>) -> Self {
        GeometryRecord {
            gamma: geom.gamma,
            gamma_next: geom.gamma_next,
            rho: geom.rho,
            tan_beta: geom.tan_beta,
            gamma_bar: geom.gamma_bar,
            delta_gap: geom.delta_gap,
            rho_bar: geom.rho_bar,
            checks,
        }
    }
}
