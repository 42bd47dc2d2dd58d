//! `f = z² - 2` and `g = 4z² - 2`: the semigroup has the Julia set of `f`
//! although `J_f ≠ J_g`.

use super::*;
use crate::exact::{conjugate, find_commutation_moebius, GaussianRational, MoebiusMap};
use crate::expr::parse_rational_map;
use crate::dynamics::FloatMap;

/// Maps of the experiment; replace either to inject a fault.
#[derive(Clone, Debug)]
pub struct Example3Inputs {
    pub f: RationalMap,
    pub g: RationalMap,
}

impl Default for Example3Inputs {
    fn default() -> Self {
        let m = |s: &str| parse_rational_map(s).expect("built-in map parses");
        Self { f: m("z^2-2"), g: m("4*z^2-2") }
    }
}

/// Width and height of the square window used for rasters.
pub const WINDOW: f64 = 5.0;

/// Number of sample points for the two-to-one check.
const TWO_TO_ONE_SAMPLES: usize = 20;

pub fn run_example3(opts: &ExperimentOptions) -> Result<ExperimentReport> {
    run_example3_with(&Example3Inputs::default(), opts)
}

/// Largest distance by which a preimage under `g` of a point of `[-2, 2]`
/// leaves the band `[-1, 1] × {0}`, over evenly spaced sample points.
fn two_to_one_excess(g: &RationalMap) -> Result<f64> {
    let gm = FloatMap::new(g);
    let mut worst: f64 = 0.0;
    for k in 0..TWO_TO_ONE_SAMPLES {
        let w = -2.0 + 4.0 * k as f64 / (TWO_TO_ONE_SAMPLES - 1) as f64;
        let pre = gm.preimages(SpherePoint::real(w), crate::dynamics::PREIMAGE_TOL)?;
        let cloud = PointCloud::new(pre, "preimages");
        if cloud.len() != 2 {
            return Ok(f64::INFINITY);
        }
        worst = worst.max(box_excess(&cloud, 1.0, 0.0));
    }
    Ok(worst)
}

pub fn run_example3_with(inputs: &Example3Inputs, opts: &ExperimentOptions) -> Result<ExperimentReport> {
    let Example3Inputs { f, g } = inputs;
    let mut rec = Recorder::new("example3", opts);
    rec.map("f", f);
    rec.map("g", g);

    let cheb = parse_rational_map("2*z^2-1")?;
    let conj = conjugate(&cheb, &MoebiusMap::scaling(GaussianRational::from_int(2)));
    let target = parse_rational_map("z^2-2")?;
    rec.exact("conjugate of 2z^2-1 by 2z equals z^2-2", conj.to_string(), conj.equals(&target));
    match find_commutation_moebius(f, g) {
        None => rec.exact("no Moebius map with f o g = m o g o f", "absent", true),
        Some(m) => rec.exact("no Moebius map with f o g = m o g o f", m.to_string(), false),
    }

    let j_f = rec.cloud("j_f", &[f], WINDOW);
    let j_g = rec.cloud("j_g", &[g], WINDOW);
    let j_fg = rec.cloud("j_fg", &[f, g], WINDOW);

    rec.at_most("J_f within 0.02 of [-2,2]", measure(&j_f, |c| distance_to_segment(c, -2.0, 2.0)), 0.02);
    rec.at_most("J_g inside [-1,1] band", measure(&j_g, |c| box_excess(c, 1.0, 0.0)), 0.01);
    rec.at_most("J(<f,g>) within 0.02 of [-2,2]", measure(&j_fg, |c| distance_to_segment(c, -2.0, 2.0)), 0.02);
    rec.at_least("J_f differs from J_g", measure2(&j_f, &j_g, hausdorff), 0.5);
    rec.at_most("g maps [-1,1] two-to-one onto [-2,2]", two_to_one_excess(g).map_err(|e| e.to_string()), 0.01);

    // g(2) = 14 and f(-4) = 14, so -4 lies in E(G); its f-preimages ±i√2
    // are not real, hence the closure of J_f leaves the real axis.
    let sat = rec.saturate("e_fg", &[f, g], WINDOW, &j_f);
    let settled = sat.as_ref().is_ok_and(|s| s.converged && s.history.windows(2).all(|w| w[0] <= w[1]));
    rec.at_most_and(
        "E-saturation of <f,g> from J_f reaches a fixed point",
        measure(&sat, |s| s.rounds as f64),
        opts.saturation_rounds as f64,
        settled,
    );
    rec.at_least(
        "E-saturation of <f,g> from J_f leaves the real axis",
        measure(&sat, |s| s.grid.real_segment_band(-2.0, f64::INFINITY).stray_cells as f64),
        1.0,
    );
    rec.note("E(G) contains -4 and its non-real f-preimages, so it is not a subset of the real line.");

    let rep = rec.repelling_distance(&[f, g], &j_fg);
    rec.at_most("repelling points of <f,g> lie on its cloud", rep, 0.02);

    rec.finish()
}
