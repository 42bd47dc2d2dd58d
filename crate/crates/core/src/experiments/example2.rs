//! `f = 2z - 1/z` together with its conjugate `g = 2z - 4/z` under `z ↦ 2z`.

use super::*;
use crate::dynamics::{forward_orbit, pushforward};
use crate::exact::{conjugate, phi, GaussianRational, MoebiusMap};
use crate::expr::parse_rational_map;
use crate::lift::{lift, verify_semiconjugacy};

/// Maps of the experiment; replace any of them to inject a fault.
#[derive(Clone, Debug)]
pub struct Example2Inputs {
    pub f: RationalMap,
    /// Claimed conjugate of `f` by `z ↦ 2z`.
    pub g: RationalMap,
    /// A published formula for the lift of `g` that does not satisfy the
    /// semi-conjugacy.
    pub printed_g_tilde: RationalMap,
    /// Width and height of the square saturation window.
    pub window: f64,
}

impl Default for Example2Inputs {
    fn default() -> Self {
        let m = |s: &str| parse_rational_map(s).expect("built-in map parses");
        Self {
            f: m("2*z - 1/z"),
            g: m("2*z - 4/z"),
            printed_g_tilde: m("(5*z^2+40*z-29)/(3*z^2+40*z-27)"),
            window: 20.0,
        }
    }
}

pub fn run_example2(opts: &ExperimentOptions) -> Result<ExperimentReport> {
    run_example2_with(&Example2Inputs::default(), opts)
}

pub fn run_example2_with(inputs: &Example2Inputs, opts: &ExperimentOptions) -> Result<ExperimentReport> {
    let Example2Inputs { f, g, printed_g_tilde, window } = inputs;
    let phi = phi();
    let double = MoebiusMap::scaling(GaussianRational::from_int(2));
    let mut rec = Recorder::new("example2", opts);
    rec.map("f", f);
    rec.map("g", g);
    rec.map("printed_g_tilde", printed_g_tilde);

    let conj = conjugate(f, &double);
    rec.exact("conjugate of f by 2z equals g", conj.to_string(), conj.equals(g));

    let mut built_g_tilde = None;
    for (name, lower) in [("f", f), ("g", g)] {
        let check = format!("lift of {name} satisfies the semi-conjugacy");
        match lift(lower) {
            Ok(up) => {
                rec.exact(&check, up.to_string(), verify_semiconjugacy(lower, &up, &phi));
                if name == "g" {
                    built_g_tilde = Some(up);
                }
            }
            Err(e) => rec.exact(&check, e.to_string(), false),
        }
    }

    let printed_ok = verify_semiconjugacy(g, printed_g_tilde, &phi);
    rec.exact(
        "printed g_tilde fails the semi-conjugacy",
        printed_ok.to_string(),
        !printed_ok && built_g_tilde.is_some(),
    );
    if let Some(built) = &built_g_tilde {
        rec.note(format!(
            "The printed lift {printed_g_tilde} of g does not satisfy phi o g = g_tilde o phi; the constructed lift {built} does."
        ));
    }

    let j_f = rec.cloud("j_f", &[f], *window);
    let j_g = rec.cloud("j_g", &[g], *window);
    let j_fg = rec.cloud("j_fg", &[f, g], *window);
    let double_map = double.to_map();
    rec.at_most(
        "J_g equals 2 J_f",
        measure2(&j_g, &j_f, |a, b| hausdorff(a, &pushforward(b, &double_map))),
        0.02,
    );

    let sat = rec.saturate("e_fg", &[f, g], *window, &j_g);
    let converged = sat.as_ref().is_ok_and(|s| s.converged);
    rec.at_most_and(
        "E-saturation of <f,g> covers the real axis",
        measure(&sat, |s| band_defects(s, f64::NEG_INFINITY, f64::INFINITY)),
        0.0,
        converged,
    );

    let orbit: Vec<f64> = forward_orbit(f, SpherePoint::real(2.0), 30)
        .iter()
        .map(|p| p.finite().map_or(f64::INFINITY, |z| z.re))
        .collect();
    let increasing = orbit.windows(2).all(|w| w[1] > w[0]);
    rec.at_least_and("f^n(2) increases past 1e6", Ok(orbit[30]), 1e6, increasing);

    rec.at_most("J(<f,g>) is bounded", measure(&j_fg, PointCloud::max_modulus), 2.5);
    let rep = rec.repelling_distance(&[f, g], &j_fg);
    rec.at_most("repelling points of <f,g> lie on its cloud", rep, 0.02);

    rec.finish()
}
