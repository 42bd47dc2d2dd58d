//! File formats: binary PGM rasters, CSV point clouds and JSON reports.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::dynamics::{PointCloud, RasterGrid};
use crate::error::Result;

/// 8-bit grey levels, `log(1 + count)` scaled so the fullest pixel is 255.
pub fn pgm_bytes(grid: &RasterGrid) -> Vec<u8> {
    let (w, h) = (grid.resolution.w, grid.resolution.h);
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    let max = grid.cells.iter().copied().max().unwrap_or(0);
    let scale = if max > 0 { 255.0 / (max as f64).ln_1p() } else { 0.0 };
    out.extend(grid.cells.iter().map(|&c| ((c as f64).ln_1p() * scale).round() as u8));
    out
}

pub fn write_pgm(grid: &RasterGrid, path: &Path) -> Result<()> {
    std::fs::write(path, pgm_bytes(grid))?;
    Ok(())
}

/// Header `re,im`, then one line per finite point with 17 significant
/// digits; ∞ is skipped.
pub fn write_cloud_csv(cloud: &PointCloud, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "re,im")?;
    for z in cloud.finite_points() {
        writeln!(w, "{:.16e},{:.16e}", z.re, z.im)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a cloud written by [`write_cloud_csv`].
pub fn read_cloud_csv(path: &Path) -> Result<PointCloud> {
    let text = std::fs::read_to_string(path)?;
    let mut points = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        let parsed = line.split_once(',').and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)));
        let Some((re, im)) = parsed else {
            return Err(crate::Error::InvalidSpec(format!("{}: bad line {}", path.display(), n + 1)));
        };
        points.push(crate::dynamics::SpherePoint::new(re, im));
    }
    Ok(PointCloud::new(points, path.display().to_string()))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_report<T: Serialize>(report: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
