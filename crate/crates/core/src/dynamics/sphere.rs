use std::fmt;

use num_complex::Complex64;

use super::roots::polynomial_roots;
use crate::error::{Error, Result};
use crate::exact::RationalMap;

/// A point of the Riemann sphere in floating point. `∞` is its own tag and
/// is never encoded as a large number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn new(re: f64, im: f64) -> Self {
        Self::Finite(Complex64::new(re, im))
    }

    pub fn real(x: f64) -> Self {
        Self::new(x, 0.0)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            Self::Finite(z) => Some(z),
            Self::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    /// Non-finite complex values collapse to `∞`.
    pub fn from_complex(z: Complex64) -> Self {
        if z.is_finite() {
            Self::Finite(z)
        } else {
            Self::Infinity
        }
    }

    /// Image on the unit sphere under inverse stereographic projection;
    /// Euclidean distance there is the chordal metric.
    pub fn to_unit_sphere(&self) -> [f64; 3] {
        match *self {
            Self::Infinity => [0.0, 0.0, 1.0],
            Self::Finite(z) => {
                let r2 = z.norm_sqr();
                if r2 <= 1.0 {
                    let s = 1.0 + r2;
                    [2.0 * z.re / s, 2.0 * z.im / s, (r2 - 1.0) / s]
                } else {
                    // Divide through by r2 to stay finite for huge z.
                    let inv = 1.0 / r2;
                    let s = 1.0 + inv;
                    [2.0 * z.re * inv / s, 2.0 * z.im * inv / s, (1.0 - inv) / s]
                }
            }
        }
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

/// Chordal distance `2|p-q| / sqrt((1+|p|²)(1+|q|²))`, in `[0, 2]`.
pub fn spherical_dist(p: SpherePoint, q: SpherePoint) -> f64 {
    const BIG: f64 = 1e150;
    match (p, q) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
        (SpherePoint::Finite(z), SpherePoint::Infinity) | (SpherePoint::Infinity, SpherePoint::Finite(z)) => {
            let r = z.norm();
            if r > BIG {
                2.0 / r
            } else {
                2.0 / (1.0 + r * r).sqrt()
            }
        }
        (SpherePoint::Finite(z), SpherePoint::Finite(w)) => {
            if z.norm() > BIG || w.norm() > BIG {
                let (a, b) = (p.to_unit_sphere(), q.to_unit_sphere());
                return ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
            }
            let d = 2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt());
            d.min(2.0)
        }
    }
}

/// Floating-point copy of a [`RationalMap`], converted once for the hot
/// loops.
#[derive(Clone, Debug)]
pub struct FloatMap {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
    degree: usize,
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k)
}

impl FloatMap {
    pub fn new(f: &RationalMap) -> Self {
        Self {
            num: f.num().to_complex(),
            den: f.den().to_complex(),
            degree: f.degree(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn deg_num(&self) -> Option<usize> {
        self.num.len().checked_sub(1)
    }

    fn deg_den(&self) -> usize {
        self.den.len() - 1
    }

    pub fn eval(&self, z: SpherePoint) -> SpherePoint {
        let Some(dn) = self.deg_num() else {
            return SpherePoint::real(0.0);
        };
        let dd = self.deg_den();
        match z {
            SpherePoint::Infinity => match dn.cmp(&dd) {
                std::cmp::Ordering::Greater => SpherePoint::Infinity,
                std::cmp::Ordering::Equal => SpherePoint::from_complex(self.num[dn] / self.den[dd]),
                std::cmp::Ordering::Less => SpherePoint::real(0.0),
            },
            SpherePoint::Finite(z) if z.norm() <= 1.0 => {
                let d = horner(&self.den, z);
                if d.norm() == 0.0 {
                    return SpherePoint::Infinity;
                }
                SpherePoint::from_complex(horner(&self.num, z) / d)
            }
            SpherePoint::Finite(z) => {
                // z^(dn-dd) * Nrev(1/z) / Drev(1/z) avoids overflow for large z.
                let w = z.inv();
                let n = self.num.iter().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * w + k);
                let d = self.den.iter().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * w + k);
                if d.norm() == 0.0 {
                    return SpherePoint::Infinity;
                }
                let ratio = n / d;
                let e = dn as i32 - dd as i32;
                let v = if e >= 0 { ratio * z.powi(e) } else { ratio / z.powi(-e) };
                SpherePoint::from_complex(v)
            }
        }
    }

    /// The `degree` solutions of `f(z) = w`, with multiplicity. Every finite
    /// solution is checked to satisfy `spherical_dist(f(z), w) <= tol`.
    pub fn preimages(&self, w: SpherePoint, tol: f64) -> Result<Vec<SpherePoint>> {
        let d = self.degree;
        let dn = self.deg_num().unwrap_or(0);
        let dd = self.deg_den();
        let mut out = Vec::with_capacity(d);
        let finite_roots = match w {
            SpherePoint::Infinity => {
                out.extend(std::iter::repeat_n(SpherePoint::Infinity, dn.saturating_sub(dd)));
                polynomial_roots(&self.den)?
            }
            SpherePoint::Finite(w) => {
                let mut p: Vec<Complex64> = (0..=d)
                    .map(|k| {
                        let a = self.num.get(k).copied().unwrap_or_default();
                        let b = self.den.get(k).copied().unwrap_or_default();
                        a - w * b
                    })
                    .collect();
                let max_abs = |c: &[Complex64]| c.iter().map(|x| x.norm()).fold(0.0, f64::max);
                let scale = max_abs(&self.num).max(w.norm() * max_abs(&self.den));
                // Leading cancellation means ∞ is a preimage.
                while p.len() > 1 && p.last().unwrap().norm() <= 1e-13 * scale {
                    p.pop();
                    out.push(SpherePoint::Infinity);
                }
                polynomial_roots(&p)?
            }
        };
        for z in finite_roots {
            let z = SpherePoint::Finite(z);
            let residual = spherical_dist(self.eval(z), w);
            if residual.is_nan() || residual > tol {
                return Err(Error::PreimageResidual { residual, tol });
            }
            out.push(z);
        }
        Ok(out)
    }
}

/// Preimages of `w` under an exact map; see [`FloatMap::preimages`].
pub fn preimages(f: &RationalMap, w: SpherePoint, tol: f64) -> Result<Vec<SpherePoint>> {
    FloatMap::new(f).preimages(w, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_rational_map;

    fn fm(s: &str) -> FloatMap {
        FloatMap::new(&parse_rational_map(s).unwrap())
    }

    #[test]
    fn distances() {
        let (zero, one, minus_one) = (SpherePoint::real(0.0), SpherePoint::real(1.0), SpherePoint::real(-1.0));
        assert_eq!(spherical_dist(zero, zero), 0.0);
        assert_eq!(spherical_dist(zero, SpherePoint::Infinity), 2.0);
        assert!((spherical_dist(one, minus_one) - 2.0).abs() < 1e-15);
        assert!((spherical_dist(zero, one) - 2f64.sqrt()).abs() < 1e-15);
        assert!(spherical_dist(SpherePoint::real(1e200), SpherePoint::Infinity) < 1e-199);
    }

    #[test]
    fn eval_projective() {
        let f = fm("(2*z^2-1)/z");
        assert_eq!(f.eval(SpherePoint::real(1.0)), SpherePoint::real(1.0));
        assert_eq!(f.eval(SpherePoint::real(0.0)), SpherePoint::Infinity);
        assert_eq!(f.eval(SpherePoint::Infinity), SpherePoint::Infinity);
        assert_eq!(fm("(z^2-1)/(z^2+1)").eval(SpherePoint::Infinity), SpherePoint::real(1.0));
        let big = f.eval(SpherePoint::real(1e308));
        assert_eq!(big, SpherePoint::Infinity);
        let v = f.eval(SpherePoint::real(4.0)).finite().unwrap();
        assert!((v.re - 7.75).abs() < 1e-14);
    }

    fn sorted(v: Vec<SpherePoint>) -> Vec<SpherePoint> {
        let mut v = v;
        v.sort_by(|a, b| match (a, b) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => std::cmp::Ordering::Equal,
            (SpherePoint::Infinity, _) => std::cmp::Ordering::Greater,
            (_, SpherePoint::Infinity) => std::cmp::Ordering::Less,
            (SpherePoint::Finite(x), SpherePoint::Finite(y)) => x.re.partial_cmp(&y.re).unwrap(),
        });
        v
    }

    #[test]
    fn preimage_examples() {
        let p = sorted(fm("z^2").preimages(SpherePoint::real(4.0), 1e-9).unwrap());
        assert_eq!(p, vec![SpherePoint::real(-2.0), SpherePoint::real(2.0)]);
        let p = fm("z^2-2").preimages(SpherePoint::real(-2.0), 1e-9).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.iter().all(|z| z.finite().unwrap().norm() == 0.0));
        let p = sorted(fm("(2*z^2-1)/z").preimages(SpherePoint::Infinity, 1e-9).unwrap());
        assert_eq!(p, vec![SpherePoint::real(0.0), SpherePoint::Infinity]);
    }

    #[test]
    fn preimage_of_lead_ratio_includes_infinity() {
        // φ(∞) = 1, and φ(z) = 1 has no finite solution.
        let p = fm("(z^2-1)/(z^2+1)").preimages(SpherePoint::real(1.0), 1e-9).unwrap();
        assert_eq!(p, vec![SpherePoint::Infinity, SpherePoint::Infinity]);
    }
}
