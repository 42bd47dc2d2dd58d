//! All-roots solver for complex polynomials.
//!
//! Degrees one and two use closed forms; higher degrees use Aberth-Ehrlich
//! simultaneous iteration. Every returned root passes the residual test
//! `|p(z)| <= 1e-10 * max|a_k| * max(1, |z|)^deg`.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 500;
const RESIDUAL_FACTOR: f64 = 1e-10;

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// `p(z)` and `p'(z)` together.
fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
}

fn residual_bound(coeffs: &[Complex64], z: Complex64) -> f64 {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let deg = coeffs.len().saturating_sub(1) as i32;
    RESIDUAL_FACTOR * scale * z.norm().max(1.0).powi(deg)
}

/// Relative residual `|p(z)| / bound`; at most 1 for an accepted root.
pub fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    horner(coeffs, z).norm() / residual_bound(coeffs, z)
}

fn quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - a * c * 4.0).sqrt();
    // Pick the sign that avoids cancellation in b ± sqrt(disc).
    let s = if (b.conj() * disc).re >= 0.0 { disc } else { -disc };
    let q = -(b + s) * 0.5;
    if q.norm() == 0.0 {
        // b = 0 and disc = 0, so c = 0 too.
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let center = -coeffs[n - 1] / (lead * n as f64);
    // Radius from the size of the shifted polynomial's constant term.
    let radius = {
        let shifted = horner(coeffs, center).norm() / lead.norm();
        shifted.powf(1.0 / n as f64).max(1e-3)
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
        if z.iter().all(|&r| relative_residual(coeffs, r) <= 1e-3) && max_step < 1e-12 {
            break;
        }
    }
    z
}

/// All `deg` roots of `sum coeffs[k] z^k`, with multiplicity. The leading
/// coefficient must be nonzero.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    debug_assert!(coeffs[n].norm() > 0.0, "leading coefficient must be nonzero");
    let roots = match n {
        1 => vec![-coeffs[0] / coeffs[1]],
        2 => quadratic(coeffs[2], coeffs[1], coeffs[0]).to_vec(),
        _ => aberth(coeffs),
    };
    let worst = roots
        .iter()
        .map(|&r| if r.is_finite() { relative_residual(coeffs, r) } else { f64::INFINITY })
        .fold(0.0, f64::max);
    if worst.is_nan() || worst > 1.0 {
        let residual = roots.iter().map(|&r| horner(coeffs, r).norm()).fold(0.0, f64::max);
        return Err(Error::RootSolver { residual });
    }
    Ok(roots)
}
