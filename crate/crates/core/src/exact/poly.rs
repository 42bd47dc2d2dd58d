//! Dense univariate polynomials over `Q(i)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::GaussianRational;
use crate::error::{Error, Result};

/// Coefficients indexed by power of `z`; the highest stored coefficient is
/// nonzero. The zero polynomial stores no coefficients and has degree `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<GaussianRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(GaussianRational::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Integer coefficients, lowest power first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: GaussianRational, k: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the sentinel degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(GaussianRational::is_one)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Divide through by the leading coefficient. The zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division. Returns `None` when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lc_inv = divisor.leading()?.inv()?;
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Some((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![GaussianRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * dc);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; errors if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        match self.div_rem(divisor) {
            Some((q, r)) if r.is_zero() => Ok(q),
            Some(_) => Err(Error::Internal("inexact polynomial division".into())),
            None => Err(Error::ZeroDenominator),
        }
    }

    /// Horner evaluation at an exact point.
    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, c| &(&acc * z) + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from_int(k as i64))
                .collect(),
        )
    }

    /// `p(-z)`
    pub fn reflect(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// True when every odd-index coefficient is exactly zero.
    pub fn is_even_poly(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(GaussianRational::is_zero)
    }

    /// `q(w)` with `q(z^2) = p(z)`; `None` if `p` has an odd-power term.
    pub fn halve_exponents(&self) -> Option<Self> {
        if !self.is_even_poly() {
            return None;
        }
        Some(Self::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// `p(z) -> p(z^k)`
    pub fn spread_exponents(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![GaussianRational::zero(); self.coeffs.len() * k];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[j * k] = c.clone();
        }
        Self::new(coeffs)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(GaussianRational::to_complex).collect()
    }
}

/// Monic greatest common divisor by the Euclidean algorithm over `Q(i)`.
pub fn poly_gcd(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::GcdUndefined);
    }
    let (mut a, mut b) = (p.monic(), q.monic());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b).expect("b is nonzero");
        a = b;
        b = r.monic();
    }
    Ok(a.monic())
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format_polynomial(self))
    }
}
