//! `f = 2z - 1/z` and `g = (z² - 1)/(2z)` on the sphere, and their lifts
//! through `φ(z) = (z² - 1)/(z² + 1)`.

use super::*;
use crate::dynamics::pushforward;
use crate::exact::phi;
use crate::expr::parse_rational_map;
use crate::lift::{lift, verify_semiconjugacy};

/// Maps of the experiment; replace any of them to inject a fault.
#[derive(Clone, Debug)]
pub struct Example1Inputs {
    pub f: RationalMap,
    pub g: RationalMap,
    /// Claimed lift of `f`.
    pub f_tilde: RationalMap,
    /// Claimed lift of `g`.
    pub g_tilde: RationalMap,
}

impl Default for Example1Inputs {
    fn default() -> Self {
        let m = |s: &str| parse_rational_map(s).expect("built-in map parses");
        Self {
            f: m("2*z - 1/z"),
            g: m("(z^2-1)/(2*z)"),
            f_tilde: m("(3*z+5*z^2)/(1+3*z+4*z^2)"),
            g_tilde: m("2*z^2-1"),
        }
    }
}

/// Width and height of the square window used for rasters.
pub const WINDOW: f64 = 5.0;

pub fn run_example1(opts: &ExperimentOptions) -> Result<ExperimentReport> {
    run_example1_with(&Example1Inputs::default(), opts)
}

pub fn run_example1_with(inputs: &Example1Inputs, opts: &ExperimentOptions) -> Result<ExperimentReport> {
    let Example1Inputs { f, g, f_tilde, g_tilde } = inputs;
    let phi = phi();
    let mut rec = Recorder::new("example1", opts);
    rec.map("f", f);
    rec.map("g", g);
    rec.map("f_tilde", f_tilde);
    rec.map("g_tilde", g_tilde);

    for (name, lower, upper) in [("f", f, f_tilde), ("g", g, g_tilde)] {
        let check = format!("lift of {name} equals {name}_tilde");
        match lift(lower) {
            Ok(built) => rec.exact(&check, built.to_string(), built.equals(upper)),
            Err(e) => rec.exact(&check, e.to_string(), false),
        }
        let ok = verify_semiconjugacy(lower, upper, &phi);
        rec.exact(&format!("phi o {name} = {name}_tilde o phi"), ok.to_string(), ok);
    }

    let j_f = rec.cloud("j_f", &[f], WINDOW);
    let j_g = rec.cloud("j_g", &[g], WINDOW);
    let j_fg = rec.cloud("j_fg", &[f, g], WINDOW);
    let j_f_tilde = rec.cloud("j_f_tilde", &[f_tilde], WINDOW);
    let j_g_tilde = rec.cloud("j_g_tilde", &[g_tilde], WINDOW);
    let j_fg_tilde = rec.cloud("j_fg_tilde", &[f_tilde, g_tilde], WINDOW);

    rec.at_most("J_f inside [-1,1] band", measure(&j_f, |c| box_excess(c, 1.0, 0.0)), 0.01);
    rec.at_least("J_f misses a gap around 0", measure(&j_f, min_modulus), 0.49);
    rec.at_most(
        "J_g_tilde within 0.02 of [-1,1]",
        measure(&j_g_tilde, |c| distance_to_segment(c, -1.0, 1.0)),
        0.02,
    );

    let sat = rec.saturate("e_fg_tilde", &[f_tilde, g_tilde], WINDOW, &j_g_tilde);
    let converged = sat.as_ref().is_ok_and(|s| s.converged);
    rec.at_most_and(
        "E-saturation of <f_tilde,g_tilde> bands [-1,1]",
        measure(&sat, |s| band_defects(s, -1.0, 1.0)),
        0.0,
        converged,
    );

    let sat = rec.saturate("e_fg", &[f, g], WINDOW, &j_g);
    let converged = sat.as_ref().is_ok_and(|s| s.converged);
    rec.at_most_and(
        "E-saturation of <f,g> covers the real axis",
        measure(&sat, |s| band_defects(s, f64::NEG_INFINITY, f64::INFINITY)),
        0.0,
        converged,
    );

    rec.at_most(
        "phi(J(<f,g>)) matches J(<f_tilde,g_tilde>)",
        measure2(&j_fg, &j_fg_tilde, |a, b| hausdorff(&pushforward(a, &phi), b)),
        0.03,
    );
    rec.at_least("J_f_tilde differs from J_g_tilde", measure2(&j_f_tilde, &j_g_tilde, hausdorff), 0.1);

    let rep = rec.repelling_distance(&[f, g], &j_fg);
    rec.at_most("repelling points of <f,g> lie on its cloud", rep, 0.02);
    let rep = rec.repelling_distance(&[f_tilde, g_tilde], &j_fg_tilde);
    rec.at_most("repelling points of <f_tilde,g_tilde> lie on its cloud", rep, 0.02);

    rec.note("J_f is checked for containment in [-1,1] and for a gap around 0; total disconnectedness is not certified.");
    rec.finish()
}
