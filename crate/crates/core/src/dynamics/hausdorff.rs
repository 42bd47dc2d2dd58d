//! Spherical Hausdorff distance between point clouds.
//!
//! Points are embedded on the unit sphere, where Euclidean distance is the
//! chordal metric. Small inputs are compared by brute force; larger ones
//! query a static k-d tree built over the target set.

use rayon::prelude::*;

use super::orbit::PointCloud;
use super::sphere::SpherePoint;

const BRUTE_FORCE_BELOW: usize = 2000;

type P3 = [f64; 3];

fn dist2(a: &P3, b: &P3) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

/// Median-split k-d tree stored implicitly: the node of a slice is its
/// middle element, split on axis `depth % 3`.
struct KdTree {
    points: Vec<P3>,
}

impl KdTree {
    fn new(mut points: Vec<P3>) -> Self {
        fn build(s: &mut [P3], depth: usize) {
            if s.len() <= 1 {
                return;
            }
            let axis = depth % 3;
            let mid = s.len() / 2;
            s.select_nth_unstable_by(mid, |a, b| a[axis].total_cmp(&b[axis]));
            let (left, right) = s.split_at_mut(mid);
            build(left, depth + 1);
            build(&mut right[1..], depth + 1);
        }
        build(&mut points, 0);
        Self { points }
    }

    /// Squared distance from `q` to the nearest point, or any value at most
    /// `stop` once a point that close is found.
    fn nearest2(&self, q: &P3, stop: f64) -> f64 {
        fn go(s: &[P3], depth: usize, q: &P3, best: &mut f64, stop: f64) {
            if s.is_empty() || *best <= stop {
                return;
            }
            let mid = s.len() / 2;
            let node = &s[mid];
            *best = best.min(dist2(node, q));
            let axis = depth % 3;
            let delta = q[axis] - node[axis];
            let (near, far) = if delta < 0.0 { (&s[..mid], &s[mid + 1..]) } else { (&s[mid + 1..], &s[..mid]) };
            go(near, depth + 1, q, best, stop);
            if delta * delta < *best {
                go(far, depth + 1, q, best, stop);
            }
        }
        let mut best = f64::INFINITY;
        go(&self.points, 0, q, &mut best, stop);
        best
    }
}

fn embed(points: &[SpherePoint]) -> Vec<P3> {
    points.iter().map(SpherePoint::to_unit_sphere).collect()
}

fn directed(a: &[P3], b: &[P3]) -> f64 {
    if a.len() < BRUTE_FORCE_BELOW && b.len() < BRUTE_FORCE_BELOW {
        let worst = a
            .iter()
            .map(|p| b.iter().map(|q| dist2(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        return worst.sqrt();
    }
    let tree = KdTree::new(b.to_vec());
    // Chunks keep a running maximum so most queries stop early.
    let worst = a
        .par_chunks(4096)
        .map(|chunk| {
            let mut worst: f64 = 0.0;
            for p in chunk {
                worst = worst.max(tree.nearest2(p, worst));
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    worst.sqrt()
}

/// `max_{p ∈ a} min_{q ∈ b} d(p, q)` in the chordal metric.
pub fn directed_hausdorff(a: &[SpherePoint], b: &[SpherePoint]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "Hausdorff distance needs nonempty sets");
    directed(&embed(a), &embed(b))
}

/// Symmetric spherical Hausdorff distance between two nonempty clouds.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "Hausdorff distance needs nonempty sets");
    let (ea, eb) = (embed(&a.points), embed(&b.points));
    directed(&ea, &eb).max(directed(&eb, &ea))
}
