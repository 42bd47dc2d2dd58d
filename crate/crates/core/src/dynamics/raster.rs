use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::orbit::PointCloud;
use crate::error::{Error, Result};

/// Axis-aligned rectangle `[cx - width/2, cx + width/2] × [cy - height/2,
/// cy + height/2]` in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub cx: f64,
    pub cy: f64,
    pub width: f64,
    pub height: f64,
}

/// Pixel dimensions of a raster.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resolution {
    pub w: usize,
    pub h: usize,
}

impl Window {
    pub fn new(cx: f64, cy: f64, width: f64, height: f64) -> Self {
        Self { cx, cy, width, height }
    }

    pub fn centered(width: f64, height: f64) -> Self {
        Self::new(0.0, 0.0, width, height)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.cx, self.cy, self.width, self.height].iter().all(|v| v.is_finite())
            && self.width > 0.0
            && self.height > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("window {self:?} must be finite with positive size")))
        }
    }

    pub fn left(&self) -> f64 {
        self.cx - self.width / 2.0
    }

    pub fn right(&self) -> f64 {
        self.cx + self.width / 2.0
    }

    pub fn top(&self) -> f64 {
        self.cy + self.height / 2.0
    }

    pub fn bottom(&self) -> f64 {
        self.cy - self.height / 2.0
    }

    /// Column and row of `z` on a `cols × rows` grid, row 0 at the top.
    pub fn cell_of(&self, z: Complex64, cols: usize, rows: usize) -> Option<(usize, usize)> {
        let u = (z.re - self.left()) / self.width * cols as f64;
        let v = (self.top() - z.im) / self.height * rows as f64;
        if u >= 0.0 && v >= 0.0 && u < cols as f64 && v < rows as f64 {
            Some((u as usize, v as usize))
        } else {
            None
        }
    }
}

impl Resolution {
    pub fn new(w: usize, h: usize) -> Self {
        Self { w, h }
    }

    pub fn validate(&self) -> Result<()> {
        if self.w == 0 || self.h == 0 {
            return Err(Error::InvalidSpec("resolution must be at least 1×1".into()));
        }
        Ok(())
    }

    pub fn cells(&self) -> usize {
        self.w * self.h
    }
}

/// Per-pixel counts over a window, row-major from the top row. Points that
/// fall outside the window, and ∞, are tallied in `overflow`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RasterGrid {
    pub window: Window,
    pub resolution: Resolution,
    pub cells: Vec<u64>,
    pub overflow: u64,
}

/// Result of comparing a raster against a real segment `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BandCheck {
    /// Columns whose center lies in the segment.
    pub columns_checked: usize,
    /// Checked columns with no occupied pixel within one pixel of the axis,
    /// counting the two neighbouring columns.
    pub uncovered_columns: usize,
    /// Occupied pixels farther than one pixel from the segment.
    pub stray_cells: usize,
}

impl BandCheck {
    pub fn pass(&self) -> bool {
        self.uncovered_columns == 0 && self.stray_cells == 0
    }
}

impl RasterGrid {
    pub fn empty(window: Window, resolution: Resolution) -> Self {
        Self { window, resolution, cells: vec![0; resolution.cells()], overflow: 0 }
    }

    pub fn get(&self, col: usize, row: usize) -> u64 {
        self.cells[row * self.resolution.w + col]
    }

    pub fn add(&mut self, z: Complex64, count: u64) -> bool {
        match self.window.cell_of(z, self.resolution.w, self.resolution.h) {
            Some((c, r)) => {
                self.cells[r * self.resolution.w + c] += count;
                true
            }
            None => {
                self.overflow += count;
                false
            }
        }
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|&&c| c > 0).count()
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().sum()
    }

    pub fn pixel_size(&self) -> (f64, f64) {
        (
            self.window.width / self.resolution.w as f64,
            self.window.height / self.resolution.h as f64,
        )
    }

    /// `[x0, x1] × [y0, y1]` covered by a pixel.
    pub fn cell_rect(&self, col: usize, row: usize) -> [f64; 4] {
        let (pw, ph) = self.pixel_size();
        let x0 = self.window.left() + col as f64 * pw;
        let y1 = self.window.top() - row as f64 * ph;
        [x0, x0 + pw, y1 - ph, y1]
    }

    /// Occupancy pattern, for comparing rasters built with different counts.
    pub fn mask(&self) -> Vec<bool> {
        self.cells.iter().map(|&c| c > 0).collect()
    }

    /// Checks that the occupied pixels form a band along the real segment
    /// `[lo, hi]` (infinite ends allowed) clipped to the window.
    pub fn real_segment_band(&self, lo: f64, hi: f64) -> BandCheck {
        let (pw, ph) = self.pixel_size();
        let reach = pw.max(ph) * (1.0 + 1e-9);
        let (cols, rows) = (self.resolution.w, self.resolution.h);
        let dist_to_axis = |r: &[f64; 4]| {
            if r[2] > 0.0 {
                r[2]
            } else if r[3] < 0.0 {
                -r[3]
            } else {
                0.0
            }
        };
        let mut stray = 0;
        let mut near_axis = vec![false; cols];
        for row in 0..rows {
            for (col, near) in near_axis.iter_mut().enumerate() {
                if self.get(col, row) == 0 {
                    continue;
                }
                let r = self.cell_rect(col, row);
                let dy = dist_to_axis(&r);
                let dx = (lo - r[1]).max(r[0] - hi).max(0.0);
                if dx.hypot(dy) > reach {
                    stray += 1;
                }
                if dy <= ph * (1.0 + 1e-9) {
                    *near = true;
                }
            }
        }
        let mut checked = 0;
        let mut uncovered = 0;
        for col in 0..cols {
            let center = self.window.left() + (col as f64 + 0.5) * pw;
            if center < lo || center > hi {
                continue;
            }
            checked += 1;
            let lo_col = col.saturating_sub(1);
            let hi_col = (col + 1).min(cols - 1);
            if !(lo_col..=hi_col).any(|c| near_axis[c]) {
                uncovered += 1;
            }
        }
        BandCheck { columns_checked: checked, uncovered_columns: uncovered, stray_cells: stray }
    }
}

/// Counts each finite point of `cloud` in its pixel.
pub fn rasterize(cloud: &PointCloud, window: Window, resolution: Resolution) -> RasterGrid {
    let mut grid = RasterGrid::empty(window, resolution);
    for p in &cloud.points {
        match p.finite() {
            Some(z) => {
                grid.add(z, 1);
            }
            None => grid.overflow += 1,
        }
    }
    grid
}
