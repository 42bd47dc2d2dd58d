//! Closure of a seed set under forward images and full preimages of every
//! generator, approximating the smallest closed completely invariant set
//! that contains the seed.
//!
//! The closure is tracked as a set of occupied cells. Inside the window the
//! cells subdivide each output pixel `REFINE × REFINE` times; outside the
//! window (and at ∞) they are boxes of side `SPHERE_CELL` on the unit
//! sphere, so orbits that leave the window can still come back. Every cell
//! remembers the first actual point that landed in it, and only those
//! witness points are mapped. A round maps the witnesses found in the
//! previous round; the closure is complete when a round finds no new cell.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::orbit::{PointCloud, SemigroupSpec, PREIMAGE_TOL};
use super::raster::{RasterGrid, Window};
use super::sphere::{FloatMap, SpherePoint};
use crate::error::Result;

pub const REFINE: usize = 4;
pub const SPHERE_CELL: f64 = 1e-3;

/// Outcome of [`e_set_saturation`].
#[derive(Clone, Debug, Serialize)]
pub struct Saturation {
    /// Occupied cells clipped to the window; each pixel counts its occupied
    /// subcells.
    pub grid: RasterGrid,
    /// Rounds actually performed.
    pub rounds: usize,
    /// True when the last round added no new cell.
    pub converged: bool,
    /// Occupied output pixels after the seed and after each round.
    pub history: Vec<usize>,
    /// Occupied cells outside the window, including the one holding ∞.
    pub outside_cells: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Cell {
    Window(usize, usize),
    Sphere(i64, i64, i64),
}

struct Closure {
    window: Window,
    cols: usize,
    rows: usize,
    seen: HashSet<Cell>,
    grid: RasterGrid,
    outside: usize,
}

impl Closure {
    fn cell(&self, p: SpherePoint) -> Cell {
        if let Some(z) = p.finite() {
            if let Some((c, r)) = self.window.cell_of(z, self.cols, self.rows) {
                return Cell::Window(c, r);
            }
        }
        let s = p.to_unit_sphere();
        let q = |x: f64| (x / SPHERE_CELL).floor() as i64;
        Cell::Sphere(q(s[0]), q(s[1]), q(s[2]))
    }

    /// Records `p`; true when its cell was new.
    fn insert(&mut self, p: SpherePoint) -> bool {
        let cell = self.cell(p);
        if !self.seen.insert(cell) {
            return false;
        }
        match cell {
            Cell::Window(c, r) => {
                let idx = (r / REFINE) * self.grid.resolution.w + c / REFINE;
                self.grid.cells[idx] += 1;
            }
            Cell::Sphere(..) => self.outside += 1,
        }
        true
    }
}

fn images(gens: &[FloatMap], p: SpherePoint) -> Result<Vec<SpherePoint>> {
    let mut out = Vec::with_capacity(gens.len() * 4);
    for g in gens {
        out.push(g.eval(p));
        out.extend(g.preimages(p, PREIMAGE_TOL)?);
    }
    Ok(out)
}

/// Saturates `seed` under every generator for at most `rounds` rounds.
pub fn e_set_saturation(spec: &SemigroupSpec, seed: &PointCloud, rounds: usize) -> Result<Saturation> {
    spec.validate()?;
    let gens = spec.float_generators();
    let mut closure = Closure {
        window: spec.window,
        cols: spec.resolution.w * REFINE,
        rows: spec.resolution.h * REFINE,
        seen: HashSet::new(),
        grid: RasterGrid::empty(spec.window, spec.resolution),
        outside: 0,
    };
    let mut frontier: Vec<SpherePoint> = seed.points.iter().copied().filter(|&p| closure.insert(p)).collect();
    let mut history = vec![closure.grid.occupied()];
    let mut done = 0;
    let mut converged = frontier.is_empty();
    while done < rounds && !converged {
        let mapped = spec.in_pool(|| frontier.par_iter().map(|&p| images(&gens, p)).collect::<Result<Vec<_>>>())??;
        frontier = mapped.into_iter().flatten().filter(|&p| closure.insert(p)).collect();
        done += 1;
        history.push(closure.grid.occupied());
        converged = frontier.is_empty();
    }
    closure.grid.overflow = closure.outside as u64;
    Ok(Saturation {
        grid: closure.grid,
        rounds: done,
        converged,
        history,
        outside_cells: closure.outside,
    })
}
