//! Rational maps of the Riemann sphere with exact coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{poly_gcd, GaussianRational, Polynomial};
use crate::error::{Error, Result};

/// A point of the sphere with an exact finite coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactPoint {
    Finite(GaussianRational),
    Infinity,
}

impl ExactPoint {
    pub fn int(n: i64) -> Self {
        Self::Finite(GaussianRational::from_int(n))
    }

    pub fn finite(&self) -> Option<&GaussianRational> {
        match self {
            Self::Finite(z) => Some(z),
            Self::Infinity => None,
        }
    }
}

impl From<GaussianRational> for ExactPoint {
    fn from(z: GaussianRational) -> Self {
        Self::Finite(z)
    }
}

impl fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(z) => z.fmt(f),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

/// Even, odd, or neither under `z -> -z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Parity {
    Even,
    Odd,
    Neither,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "Even",
            Parity::Odd => "Odd",
            Parity::Neither => "Neither",
        })
    }
}

/// `num / den` in canonical form: coprime, monic denominator, and a
/// denominator of exactly `1` when it is constant. Two maps are the same
/// function of the sphere iff their canonical forms are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
}

impl RationalMap {
    /// Reduce `num / den` to canonical form.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::constant(GaussianRational::zero()));
        }
        let g = poly_gcd(&num, &den)?;
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let lc_inv = den.leading().and_then(GaussianRational::inv).ok_or(Error::ZeroDenominator)?;
        Ok(Self {
            num: num.scale(&lc_inv),
            den: den.scale(&lc_inv),
        })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn identity() -> Self {
        Self::from_poly(Polynomial::z())
    }

    /// Shorthand for tests and fixtures: integer coefficient lists, lowest
    /// power first.
    pub fn from_ints(num: &[i64], den: &[i64]) -> Result<Self> {
        Self::new(Polynomial::from_ints(num), Polynomial::from_ints(den))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// Sphere degree `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.degree_or_zero().max(self.den.degree_or_zero())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `outer ∘ inner`, via the homogenized substitution
    /// `sum p_k A^k B^(d-k) / sum q_k A^k B^(d-k)`.
    ///
    /// # Panics
    ///
    /// When `inner` is a constant at a pole of `self`; see
    /// [`RationalMap::checked_compose`].
    pub fn compose(&self, inner: &RationalMap) -> RationalMap {
        self.checked_compose(inner).expect("composition with a constant at a pole")
    }

    /// `outer ∘ inner`, or [`Error::ConstantInfinity`] when `inner` is a
    /// constant at a pole of `self`.
    pub fn checked_compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        let d = self.degree();
        if d == 0 {
            return Ok(self.clone());
        }
        let mut a_pows = Vec::with_capacity(d + 1);
        let mut b_pows = Vec::with_capacity(d + 1);
        a_pows.push(Polynomial::one());
        b_pows.push(Polynomial::one());
        for k in 1..=d {
            a_pows.push(&a_pows[k - 1] * &inner.num);
            b_pows.push(&b_pows[k - 1] * &inner.den);
        }
        let homogenize = |p: &Polynomial| {
            p.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .fold(Polynomial::zero(), |acc, (k, c)| {
                    &acc + &(&a_pows[k] * &b_pows[d - k]).scale(c)
                })
        };
        let den = homogenize(&self.den);
        if den.is_zero() {
            return Err(Error::ConstantInfinity);
        }
        RationalMap::new(homogenize(&self.num), den)
    }

    /// Cross-multiplication identity `num_f * den_g == num_g * den_f`.
    pub fn equals(&self, other: &RationalMap) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Projective evaluation.
    pub fn eval(&self, z: &ExactPoint) -> ExactPoint {
        match z {
            ExactPoint::Finite(z) => {
                let d = self.den.eval(z);
                if d.is_zero() {
                    ExactPoint::Infinity
                } else {
                    ExactPoint::Finite(&self.num.eval(z) / &d)
                }
            }
            ExactPoint::Infinity => {
                let (dn, dd) = (self.num.degree(), self.den.degree_or_zero());
                match dn {
                    None => ExactPoint::Finite(GaussianRational::zero()),
                    Some(dn) if dn > dd => ExactPoint::Infinity,
                    Some(dn) if dn == dd => ExactPoint::Finite(
                        self.num.leading().unwrap() / self.den.leading().unwrap(),
                    ),
                    Some(_) => ExactPoint::Finite(GaussianRational::zero()),
                }
            }
        }
    }

    /// `f(-z)`
    pub fn reflect(&self) -> RationalMap {
        RationalMap::new(self.num.reflect(), self.den.reflect())
            .expect("reflection keeps the denominator nonzero")
    }

    pub fn parity(&self) -> Parity {
        let r = self.reflect();
        if r.equals(self) {
            Parity::Even
        } else if r.equals(&-self) {
            Parity::Odd
        } else {
            Parity::Neither
        }
    }

    /// Pointwise square `[f(z)]^2`, not `f ∘ f`.
    pub fn square(&self) -> RationalMap {
        self * self
    }

    /// For even `g`, the map `h` with `h(z^2) = g(z)`.
    ///
    /// In lowest terms `num(-z) = λ num(z)` with `λ^2 = 1`, and `λ = -1`
    /// would put a factor `z` in both `num` and `den`. So both halves of an
    /// even map are even polynomials, and `h` is read off by halving
    /// exponents.
    pub fn even_decompose(&self) -> Result<RationalMap> {
        let parity = self.parity();
        if parity != Parity::Even {
            return Err(Error::WrongParity {
                found: parity,
                operation: "even_decompose",
                required: Parity::Even,
            });
        }
        let (Some(n), Some(d)) = (self.num.halve_exponents(), self.den.halve_exponents()) else {
            return Err(Error::Internal(format!(
                "even map {self} has an odd-power coefficient in lowest terms"
            )));
        };
        RationalMap::new(n, d)
    }

    /// `h(z^k)`
    pub fn precompose_power(&self, k: usize) -> RationalMap {
        RationalMap::new(self.num.spread_exponents(k), self.den.spread_exponents(k))
            .expect("substitution keeps the denominator nonzero")
    }

    /// `f'` as a rational map.
    pub fn derivative(&self) -> RationalMap {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RationalMap::new(num, &self.den * &self.den).expect("nonzero denominator squared")
    }

    pub fn checked_div(&self, rhs: &RationalMap) -> Result<RationalMap> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZeroMap);
        }
        RationalMap::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, exp: u32) -> RationalMap {
        if exp > 0 && self.is_zero() {
            return self.clone();
        }
        RationalMap {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }
}

impl Add for &RationalMap {
    type Output = RationalMap;
    fn add(self, rhs: &RationalMap) -> RationalMap {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalMap::new(num, &self.den * &rhs.den).expect("nonzero product denominator")
    }
}

impl Sub for &RationalMap {
    type Output = RationalMap;
    fn sub(self, rhs: &RationalMap) -> RationalMap {
        self + &-rhs
    }
}

impl Mul for &RationalMap {
    type Output = RationalMap;
    fn mul(self, rhs: &RationalMap) -> RationalMap {
        RationalMap::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero product denominator")
    }
}

impl Neg for &RationalMap {
    type Output = RationalMap;
    fn neg(self) -> RationalMap {
        RationalMap {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format_map(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(num: &[i64], den: &[i64]) -> RationalMap {
        RationalMap::from_ints(num, den).unwrap()
    }

    #[test]
    fn normalize_keeps_coprime_monic() {
        let f = m(&[-1, 0, 2], &[0, 1]);
        assert_eq!(f.num(), &Polynomial::from_ints(&[-1, 0, 2]));
        assert_eq!(f.den(), &Polynomial::from_ints(&[0, 1]));
    }

    #[test]
    fn normalize_cancels() {
        assert_eq!(m(&[-1, 0, 1], &[-1, 1]), m(&[1, 1], &[1]));
        assert!(m(&[1, 1], &[1]).den().is_monic());
    }

    #[test]
    fn normalize_scales_denominator_monic() {
        // (6z + 10z^2) / (2 + 6z + 8z^2) = (5/4 z^2 + 3/4 z) / (z^2 + 3/4 z + 1/4)
        let f = m(&[0, 6, 10], &[2, 6, 8]);
        let q = GaussianRational::ratio;
        assert_eq!(f.num(), &Polynomial::new(vec![q(0, 1), q(3, 4), q(5, 4)]));
        assert_eq!(f.den(), &Polynomial::new(vec![q(1, 4), q(3, 4), q(1, 1)]));
        assert!(f.equals(&m(&[0, 3, 5], &[1, 3, 4])));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(RationalMap::from_ints(&[1], &[0]), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn normalization_idempotent() {
        let f = m(&[0, 6, 10], &[2, 6, 8]);
        assert_eq!(RationalMap::new(f.num().clone(), f.den().clone()).unwrap(), f);
    }

    #[test]
    fn compose_polynomials() {
        let sq = m(&[0, 0, 1], &[1]);
        let shift = m(&[1, 1], &[1]);
        assert_eq!(sq.compose(&shift), m(&[1, 2, 1], &[1]));
    }

    #[test]
    fn compose_self_of_two_z_minus_inverse() {
        // 2f - 1/f = (8z^4 - 9z^2 + 2) / (2z^3 - z), expanded by hand.
        let f = m(&[-1, 0, 2], &[0, 1]);
        let ff = f.compose(&f);
        assert!(ff.equals(&m(&[2, 0, -9, 0, 8], &[0, -1, 0, 2])));
        assert_eq!(ff.degree(), 4);
    }

    #[test]
    fn evaluate_projective() {
        let f = m(&[-1, 0, 2], &[0, 1]);
        assert_eq!(f.eval(&ExactPoint::int(1)), ExactPoint::int(1));
        assert_eq!(f.eval(&ExactPoint::int(0)), ExactPoint::Infinity);
        assert_eq!(f.eval(&ExactPoint::Infinity), ExactPoint::Infinity);
        let phi = m(&[-1, 0, 1], &[1, 0, 1]);
        assert_eq!(phi.eval(&ExactPoint::Infinity), ExactPoint::int(1));
        let recip = m(&[1], &[0, 0, 1]);
        assert_eq!(recip.eval(&ExactPoint::Infinity), ExactPoint::int(0));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(m(&[-1, 0, 2], &[0, 1]).parity(), Parity::Odd);
        assert_eq!(m(&[-2, 0, 1], &[1]).parity(), Parity::Even);
        assert_eq!(m(&[0, 1, 1], &[1]).parity(), Parity::Neither);
    }

    #[test]
    fn even_decompose_examples() {
        assert_eq!(m(&[0, 0, 0, 0, 1], &[1]).even_decompose().unwrap(), m(&[0, 0, 1], &[1]));
        let f = m(&[-1, 0, 2], &[0, 1]);
        let h = f.square().even_decompose().unwrap();
        assert_eq!(h, m(&[1, -4, 4], &[0, 1]));
        assert_eq!(h.precompose_power(2), f.square());
        let phi = m(&[-1, 0, 1], &[1, 0, 1]);
        assert_eq!(phi.even_decompose().unwrap(), m(&[-1, 1], &[1, 1]));
    }

    #[test]
    fn even_decompose_rejects_odd() {
        let err = m(&[0, 1], &[1]).even_decompose().unwrap_err();
        assert!(matches!(err, Error::WrongParity { found: Parity::Odd, .. }));
    }

    #[test]
    fn equals_after_normalization() {
        let raw = RationalMap::new(Polynomial::from_ints(&[-1, 0, 1]), Polynomial::from_ints(&[-1, 1])).unwrap();
        assert!(raw.equals(&m(&[1, 1], &[1])));
        assert!(m(&[0, 0, 1], &[1]).equals(&m(&[0, 0, 1], &[1])));
    }

    #[test]
    fn derivative_of_quotient() {
        // (2z^2 - 1)/z = 2z - 1/z, derivative 2 + 1/z^2
        let f = m(&[-1, 0, 2], &[0, 1]);
        assert_eq!(f.derivative(), m(&[1, 0, 2], &[0, 0, 1]));
    }
}
