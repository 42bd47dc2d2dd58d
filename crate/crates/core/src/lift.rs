//! Odd maps of the upper half-plane and their lifts through
//! `φ(z) = (z² - 1)/(z² + 1)`.
//!
//! An odd rational map with `f(U) = U` is exactly one of the form
//!
//! ```text
//! f(z) = a z - b/z - sum_j B_j z / (z² - A_j),      a, b, A_j, B_j >= 0
//! ```
//!
//! and an odd `f` has a unique `f̃` with `φ ∘ f = f̃ ∘ φ`, built as
//! `f̃ = ψ ∘ h ∘ ψ⁻¹` where `h(z²) = [f(z)]²` and `ψ(w) = (w-1)/(w+1)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::dynamics::roots::polynomial_roots;
use crate::error::{Error, Result};
use crate::exact::{conjugate, phi, poly_gcd, psi, GaussianRational, Parity, Polynomial, RationalMap};

/// A rational number as `(numerator, denominator)`.
pub type Ratio = (i64, i64);

/// Coefficients of the half-plane normal form. `pairs` holds `(A_j, B_j)`
/// sorted by strictly increasing `A_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfPlaneParams {
    #[serde(serialize_with = "ser_rational")]
    pub a: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub b: BigRational,
    #[serde(serialize_with = "ser_pairs")]
    pub pairs: Vec<(BigRational, BigRational)>,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_pairs<S: serde::Serializer>(p: &[(BigRational, BigRational)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.len()))?;
    for (a, b) in p {
        seq.serialize_element(&[a.to_string(), b.to_string()])?;
    }
    seq.end()
}

impl HalfPlaneParams {
    pub fn new(a: BigRational, b: BigRational, pairs: Vec<(BigRational, BigRational)>) -> Result<Self> {
        let p = Self { a, b, pairs };
        p.validate()?;
        Ok(p)
    }

    /// Integer-ratio shorthand: `(numerator, denominator)` for each entry.
    pub fn from_ratios(a: Ratio, b: Ratio, pairs: &[(Ratio, Ratio)]) -> Result<Self> {
        let q = |(n, d): Ratio| BigRational::new(BigInt::from(n), BigInt::from(d));
        Self::new(q(a), q(b), pairs.iter().map(|&(x, y)| (q(x), q(y))).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let all = std::iter::once(&self.a)
            .chain(std::iter::once(&self.b))
            .chain(self.pairs.iter().flat_map(|(a, b)| [a, b]));
        if all.into_iter().any(Signed::is_negative) {
            return Err(Error::InvalidParams("all coefficients must be >= 0".into()));
        }
        if self.pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidParams("pole pairs must have strictly increasing A_j".into()));
        }
        Ok(())
    }
}

fn gq(q: &BigRational) -> GaussianRational {
    GaussianRational::real(q.clone())
}

/// `a z - b/z - sum B_j z/(z² - A_j)`, normalized.
pub fn build_from_params(p: &HalfPlaneParams) -> Result<RationalMap> {
    p.validate()?;
    let z = RationalMap::identity();
    let c = |q: &BigRational| RationalMap::constant(gq(q));
    let mut f = &c(&p.a) * &z;
    if !p.b.is_zero() {
        f = &f - &c(&p.b).checked_div(&z)?;
    }
    for (a_j, b_j) in &p.pairs {
        let pole = RationalMap::from_poly(Polynomial::new(vec![-gq(a_j), GaussianRational::zero(), GaussianRational::one()]));
        f = &f - &(&c(b_j) * &z).checked_div(&pole)?;
    }
    if f.degree() < 2 {
        return Err(Error::NotAGenerator(f.degree()));
    }
    Ok(f)
}

/// Continued-fraction convergents of `x`, smallest denominators first.
fn convergents(x: f64) -> impl Iterator<Item = BigRational> {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    std::iter::from_fn(move || {
        if !rest.is_finite() || k1.bits() > 60 {
            return None;
        }
        let a = rest.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        (h0, h1, k0, k1) = (h1.clone(), h2.clone(), k1.clone(), k2.clone());
        let frac = rest - a;
        rest = if frac.abs() < 1e-300 { f64::INFINITY } else { 1.0 / frac };
        Some(BigRational::new(h2, k2))
    })
    .take(64)
}

/// All roots of a real polynomial if every one is rational, else `None`.
/// Float roots seed a continued-fraction search; each candidate is
/// confirmed exactly and deflated out.
fn rational_roots(p: &Polynomial) -> Option<Vec<BigRational>> {
    if !p.is_real() {
        return None;
    }
    let mut rest = p.monic();
    let mut found = Vec::new();
    while rest.degree()? > 0 {
        let approx = polynomial_roots(&rest.to_complex()).ok()?;
        let root = approx.iter().find_map(|r| {
            if r.im.abs() > 1e-6 * r.norm().max(1.0) {
                return None;
            }
            convergents(r.re).find(|q| rest.eval(&gq(q)).is_zero())
        })?;
        let linear = Polynomial::new(vec![-gq(&root), GaussianRational::one()]);
        rest = rest.exact_div(&linear).ok()?;
        found.push(root);
    }
    Some(found)
}

/// Recover the normal-form coefficients of `f`, if it has that shape.
///
/// Poles are located in the coordinate `w = z²`, so each pair `±√A_j` only
/// needs `A_j` to be rational. Maps whose pole pairs sit at irrational
/// `A_j` are reported as absent.
pub fn recognize_halfplane_form(f: &RationalMap) -> Option<HalfPlaneParams> {
    if f.parity() != Parity::Odd || !f.is_real() {
        return None;
    }
    let (num, den) = (f.num(), f.den());
    let (quot, rem) = num.div_rem(den)?;
    if quot.degree().unwrap_or(0) > 1 || !quot.coeff(0).is_zero() {
        return None;
    }
    let a = quot.coeff(1).re().clone();
    if a.is_negative() {
        return None;
    }
    // Simple poles only.
    if poly_gcd(den, &den.derivative()).ok()?.degree() != Some(0) {
        return None;
    }
    let pole_at_zero = den.coeff(0).is_zero();
    let z = Polynomial::z();
    let even_den = if pole_at_zero { den.exact_div(&z).ok()? } else { den.clone() };
    let rem_even = if pole_at_zero { rem.clone() } else { rem.exact_div(&z).ok()? };
    let p = even_den.halve_exponents()?;
    let t = rem_even.halve_exponents()?;

    let b = if pole_at_zero {
        let b = -(t.coeff(0).re() / p.coeff(0).re());
        if !b.is_positive() {
            return None;
        }
        b
    } else {
        BigRational::zero()
    };

    let dp = p.derivative();
    let mut pairs = Vec::new();
    for root in rational_roots(&p)? {
        if !root.is_positive() {
            return None;
        }
        let mut denom = dp.eval(&gq(&root)).re().clone();
        if pole_at_zero {
            denom *= &root;
        }
        let b_j = -(t.eval(&gq(&root)).re() / denom);
        if !b_j.is_positive() {
            return None;
        }
        pairs.push((root, b_j));
    }
    pairs.sort_by(|x, y| x.0.cmp(&y.0));
    let params = HalfPlaneParams { a, b, pairs };
    // The decomposition must reproduce f exactly.
    (build_from_params(&params).ok()? == *f).then_some(params)
}

/// True iff `link ∘ lower = upper ∘ link` as an exact identity.
pub fn verify_semiconjugacy(lower: &RationalMap, upper: &RationalMap, link: &RationalMap) -> bool {
    link.compose(lower).equals(&upper.compose(link))
}

/// The map `f̃` with `φ ∘ f = f̃ ∘ φ`, for odd `f`.
pub fn lift(f: &RationalMap) -> Result<RationalMap> {
    let parity = f.parity();
    if parity != Parity::Odd {
        return Err(Error::WrongParity {
            found: parity,
            operation: "lift",
            required: Parity::Odd,
        });
    }
    let h = f.square().even_decompose()?;
    let lifted = conjugate(&h, &psi());
    if !verify_semiconjugacy(f, &lifted, &phi()) {
        return Err(Error::LiftVerification(f.to_string()));
    }
    Ok(lifted)
}

/// Rough float view of the parameters, for reports.
pub fn params_to_f64(p: &HalfPlaneParams) -> (f64, f64, Vec<(f64, f64)>) {
    let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
    (f(&p.a), f(&p.b), p.pairs.iter().map(|(x, y)| (f(x), f(y))).collect())
}
