//! Exact algebra of polynomials and rational maps over the Gaussian
//! rationals. Nothing in here rounds.

mod gaussian;
mod map;
mod moebius;
mod poly;

pub use gaussian::GaussianRational;
pub use map::{ExactPoint, Parity, RationalMap};
pub use moebius::{conjugate, find_commutation_moebius, try_conjugate, MoebiusMap};
pub use poly::{poly_gcd, Polynomial};

use crate::error::Result;

pub fn normalize(num: Polynomial, den: Polynomial) -> Result<RationalMap> {
    RationalMap::new(num, den)
}

pub fn compose(outer: &RationalMap, inner: &RationalMap) -> RationalMap {
    outer.compose(inner)
}

pub fn equals(f: &RationalMap, g: &RationalMap) -> bool {
    f.equals(g)
}

pub fn evaluate_exact(f: &RationalMap, z: &ExactPoint) -> ExactPoint {
    f.eval(z)
}

pub fn parity(f: &RationalMap) -> Parity {
    f.parity()
}

pub fn even_decompose(g: &RationalMap) -> Result<RationalMap> {
    g.even_decompose()
}

/// `φ(z) = (z² - 1) / (z² + 1)`, the link map from the upper half-plane
/// picture to the slit-plane picture.
pub fn phi() -> RationalMap {
    RationalMap::from_ints(&[-1, 0, 1], &[1, 0, 1]).expect("constant fixture")
}

/// `ψ(w) = (w - 1) / (w + 1)`, with `φ(z) = ψ(z²)`.
pub fn psi() -> MoebiusMap {
    MoebiusMap::new(1.into(), (-1).into(), 1.into(), 1.into()).expect("constant fixture")
}
