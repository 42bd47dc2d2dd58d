use std::fmt;

use super::{ExactPoint, GaussianRational, Polynomial, RationalMap};
use crate::error::{Error, Result};

/// `z -> (a z + b) / (c z + d)` with `ad - bc != 0`, scaled so that the
/// first nonzero entry of `(a, b, c, d)` is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoebiusMap {
    a: GaussianRational,
    b: GaussianRational,
    c: GaussianRational,
    d: GaussianRational,
}

impl MoebiusMap {
    pub fn new(
        a: GaussianRational,
        b: GaussianRational,
        c: GaussianRational,
        d: GaussianRational,
    ) -> Result<Self> {
        let det = &(&a * &d) - &(&b * &c);
        if det.is_zero() {
            return Err(Error::SingularMoebius);
        }
        let lead = [&a, &b, &c, &d]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("nonzero determinant")
            .inv()
            .expect("nonzero entry");
        Ok(Self {
            a: &a * &lead,
            b: &b * &lead,
            c: &c * &lead,
            d: &d * &lead,
        })
    }

    pub fn identity() -> Self {
        Self::scaling(GaussianRational::one())
    }

    /// `z -> k z`
    pub fn scaling(k: GaussianRational) -> Self {
        Self::new(k, GaussianRational::zero(), GaussianRational::zero(), GaussianRational::one())
            .expect("nonzero scale factor")
    }

    /// `z -> z + t`
    pub fn translation(t: GaussianRational) -> Self {
        Self::new(GaussianRational::one(), t, GaussianRational::zero(), GaussianRational::one())
            .expect("translations are invertible")
    }

    /// Read a degree-one rational map as a Möbius map.
    pub fn from_map(f: &RationalMap) -> Result<Self> {
        if f.degree() != 1 {
            return Err(Error::NotMoebius(f.degree()));
        }
        let (n, d) = (f.num(), f.den());
        Self::new(n.coeff(1), n.coeff(0), d.coeff(1), d.coeff(0))
    }

    pub fn entries(&self) -> [&GaussianRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn to_map(&self) -> RationalMap {
        RationalMap::new(
            Polynomial::new(vec![self.b.clone(), self.a.clone()]),
            Polynomial::new(vec![self.d.clone(), self.c.clone()]),
        )
        .expect("nonsingular Möbius map has a nonzero denominator")
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
            .expect("inverse of a nonsingular map is nonsingular")
    }

    /// `self ∘ other` by matrix product.
    pub fn compose(&self, other: &Self) -> Self {
        let m = |x: &GaussianRational, y: &GaussianRational, u: &GaussianRational, v: &GaussianRational| {
            &(x * y) + &(u * v)
        };
        Self::new(
            m(&self.a, &other.a, &self.b, &other.c),
            m(&self.a, &other.b, &self.b, &other.d),
            m(&self.c, &other.a, &self.d, &other.c),
            m(&self.c, &other.b, &self.d, &other.d),
        )
        .expect("product of nonsingular matrices is nonsingular")
    }

    pub fn eval(&self, z: &ExactPoint) -> ExactPoint {
        self.to_map().eval(z)
    }

    /// The map sending three distinct finite points to `0, 1, ∞`.
    fn to_standard_frame(w: [&GaussianRational; 3]) -> Result<Self> {
        let [w1, w2, w3] = w;
        let d23 = w2 - w3;
        let d21 = w2 - w1;
        Self::new(d23.clone(), -&(w1 * &d23), d21.clone(), -&(w3 * &d21))
    }

    /// The unique Möbius map with `from[i] -> to[i]`, for pairwise distinct
    /// finite `from` and `to`.
    pub fn interpolate(from: [&GaussianRational; 3], to: [&GaussianRational; 3]) -> Result<Self> {
        let s = Self::to_standard_frame(from)?;
        let t = Self::to_standard_frame(to)?;
        Ok(t.inverse().compose(&s))
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_map().fmt(f)
    }
}

/// `m ∘ f ∘ m⁻¹`
///
/// # Panics
///
/// When `f` is a constant at the pole of `m`; see [`try_conjugate`].
pub fn conjugate(f: &RationalMap, m: &MoebiusMap) -> RationalMap {
    try_conjugate(f, m).expect("conjugation of a constant at the pole of m")
}

/// `m ∘ f ∘ m⁻¹`, or [`Error::ConstantInfinity`] when `f` is a constant
/// that `m` sends to ∞.
pub fn try_conjugate(f: &RationalMap, m: &MoebiusMap) -> Result<RationalMap> {
    m.to_map().checked_compose(f)?.checked_compose(&m.inverse().to_map())
}

/// Sample points tried, in order, when interpolating a commutation map.
fn candidate_points() -> Vec<GaussianRational> {
    let i = GaussianRational::i();
    let g = |re: i64, im: i64| &GaussianRational::from_int(re) + &(&i * &GaussianRational::from_int(im));
    vec![
        g(0, 0),
        g(1, 0),
        g(-1, 0),
        g(2, 0),
        g(-2, 0),
        g(3, 0),
        g(0, 1),
        g(0, -1),
        g(1, 1),
        g(-3, 0),
        g(1, -1),
        g(-1, 1),
        g(-1, -1),
        g(0, 2),
        g(0, -2),
        g(2, 1),
        g(1, 2),
        g(4, 0),
        g(-4, 0),
        g(2, -1),
    ]
}

/// Search for a Möbius `φ` with `f ∘ g = φ ∘ g ∘ f`.
///
/// Three points with distinct finite images under `g ∘ f` fix the only
/// possible candidate; it is then checked as an exact identity. `None`
/// when the identity fails or no usable triple exists among the candidate
/// points.
pub fn find_commutation_moebius(f: &RationalMap, g: &RationalMap) -> Option<MoebiusMap> {
    let fg = f.compose(g);
    let gf = g.compose(f);
    let mut src: Vec<GaussianRational> = Vec::with_capacity(3);
    let mut dst: Vec<GaussianRational> = Vec::with_capacity(3);
    for z in candidate_points() {
        let z = ExactPoint::Finite(z);
        let (ExactPoint::Finite(w), ExactPoint::Finite(t)) = (gf.eval(&z), fg.eval(&z)) else {
            continue;
        };
        if src.contains(&w) {
            continue;
        }
        // φ is injective, so equal targets for distinct sources rule it out.
        if dst.contains(&t) {
            return None;
        }
        src.push(w);
        dst.push(t);
        if src.len() == 3 {
            break;
        }
    }
    if src.len() < 3 {
        return None;
    }
    let phi = MoebiusMap::interpolate([&src[0], &src[1], &src[2]], [&dst[0], &dst[1], &dst[2]]).ok()?;
    fg.equals(&phi.to_map().compose(&gf)).then_some(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(num: &[i64], den: &[i64]) -> RationalMap {
        RationalMap::from_ints(num, den).unwrap()
    }

    #[test]
    fn normalized_first_entry_is_one() {
        let mm = MoebiusMap::new(2.into(), 4.into(), 0.into(), 2.into()).unwrap();
        assert!(mm.entries()[0].is_one());
        assert_eq!(mm.to_map(), m(&[2, 1], &[1]));
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            MoebiusMap::new(1.into(), 2.into(), 2.into(), 4.into()),
            Err(Error::SingularMoebius)
        ));
    }

    #[test]
    fn conjugate_chebyshev_by_doubling() {
        let t2 = m(&[-1, 0, 2], &[1]);
        assert_eq!(conjugate(&t2, &MoebiusMap::scaling(2.into())), m(&[-2, 0, 1], &[1]));
    }

    #[test]
    fn conjugate_two_z_minus_inverse_by_doubling() {
        let f = m(&[-1, 0, 2], &[0, 1]);
        assert_eq!(conjugate(&f, &MoebiusMap::scaling(2.into())), m(&[-4, 0, 2], &[0, 1]));
    }

    #[test]
    fn conjugate_by_identity() {
        let f = m(&[0, 3, 5], &[1, 3, 4]);
        assert_eq!(conjugate(&f, &MoebiusMap::identity()), f);
    }

    #[test]
    fn interpolation_hits_targets() {
        let pts: Vec<GaussianRational> = [0, 1, 5].map(GaussianRational::from_int).into();
        let tgt: Vec<GaussianRational> = [2, -3, 7].map(GaussianRational::from_int).into();
        let phi = MoebiusMap::interpolate([&pts[0], &pts[1], &pts[2]], [&tgt[0], &tgt[1], &tgt[2]]).unwrap();
        for (p, t) in pts.iter().zip(&tgt) {
            assert_eq!(phi.eval(&ExactPoint::Finite(p.clone())), ExactPoint::Finite(t.clone()));
        }
    }

    #[test]
    fn commuting_powers() {
        let sq = m(&[0, 0, 1], &[1]);
        let cube = m(&[0, 0, 0, 1], &[1]);
        assert_eq!(find_commutation_moebius(&sq, &sq), Some(MoebiusMap::identity()));
        assert_eq!(find_commutation_moebius(&sq, &cube), Some(MoebiusMap::identity()));
    }

    #[test]
    fn chebyshev_pair_has_no_commutation_map() {
        // f∘g = 16z^4 - 16z^2 + 2, g∘f = 4z^4 - 16z^2 + 14
        let f = m(&[-2, 0, 1], &[1]);
        let g = m(&[-2, 0, 4], &[1]);
        assert_eq!(f.compose(&g), m(&[2, 0, -16, 0, 16], &[1]));
        assert_eq!(g.compose(&f), m(&[14, 0, -16, 0, 4], &[1]));
        assert_eq!(find_commutation_moebius(&f, &g), None);
    }

    #[test]
    fn finds_nontrivial_commutation_map() {
        // f = -z^2 and g = z^2: f∘g = -z^4, g∘f = z^4, so φ(z) = -z.
        let f = m(&[0, 0, -1], &[1]);
        let g = m(&[0, 0, 1], &[1]);
        let phi = find_commutation_moebius(&f, &g).unwrap();
        assert_eq!(phi.to_map(), m(&[0, -1], &[1]));
    }
}
