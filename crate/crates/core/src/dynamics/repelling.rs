use num_complex::Complex64;
use rayon::prelude::*;

use super::orbit::{PointCloud, SemigroupSpec};
use super::roots::polynomial_roots;
use super::sphere::{spherical_dist, FloatMap, SpherePoint};
use crate::error::Result;
use crate::exact::{Polynomial, RationalMap};

const DEDUPE_RADIUS: f64 = 1e-8;

/// Every composition `g_{j1} ∘ ... ∘ g_{jn}` with `1 <= n <= max_len`,
/// shortest first and lexicographic within a length.
pub fn words(generators: &[RationalMap], max_len: usize) -> Vec<RationalMap> {
    let mut all = Vec::new();
    let mut level: Vec<RationalMap> = generators.to_vec();
    for len in 1..=max_len {
        if len > 1 {
            level = level.iter().flat_map(|w| generators.iter().map(move |g| w.compose(g))).collect();
        }
        all.extend(level.iter().cloned());
    }
    all
}

/// Repelling fixed points of one map, with their multipliers.
pub fn repelling_points_of(g: &RationalMap) -> Result<Vec<(SpherePoint, Complex64)>> {
    let mut out = Vec::new();
    let fixed = g.num() - &(g.den() * &Polynomial::z());
    let dg = FloatMap::new(&g.derivative());
    if !fixed.is_zero() {
        for z in polynomial_roots(&fixed.to_complex())? {
            if let Some(m) = dg.eval(SpherePoint::Finite(z)).finite() {
                if m.norm() > 1.0 {
                    out.push((SpherePoint::Finite(z), m));
                }
            }
        }
    }
    // ∞ is fixed iff deg num > deg den. In the chart w = 1/z the multiplier
    // is lc(den)/lc(num) when the degrees differ by one and 0 otherwise.
    let (dn, dd) = (g.num().degree_or_zero(), g.den().degree_or_zero());
    if dn == dd + 1 {
        let m = (g.den().leading().expect("nonzero den") / g.num().leading().expect("nonzero num")).to_complex();
        if m.norm() > 1.0 {
            out.push((SpherePoint::Infinity, m));
        }
    }
    Ok(out)
}

fn dedupe(points: Vec<SpherePoint>) -> Vec<SpherePoint> {
    let mut kept: Vec<SpherePoint> = Vec::new();
    for p in points {
        if kept.iter().all(|&q| spherical_dist(p, q) > DEDUPE_RADIUS) {
            kept.push(p);
        }
    }
    kept
}

/// Repelling fixed points of all words of length at most `word_length_max`,
/// deduplicated within spherical distance 10⁻⁸.
pub fn repelling_fixed_points(spec: &SemigroupSpec) -> Result<PointCloud> {
    spec.validate()?;
    let ws = words(&spec.generators, spec.word_length_max);
    let per_word = spec.in_pool(|| ws.par_iter().map(repelling_points_of).collect::<Result<Vec<_>>>())??;
    let points = dedupe(per_word.into_iter().flatten().map(|(p, _)| p).collect());
    Ok(PointCloud::new(points, "repelling fixed points"))
}
