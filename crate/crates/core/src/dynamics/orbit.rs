use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::raster::{Resolution, Window};
use super::sphere::{spherical_dist, FloatMap, SpherePoint};
use crate::error::{Error, Result};
use crate::exact::RationalMap;

/// Residual tolerance for every preimage the engine computes.
pub const PREIMAGE_TOL: f64 = 1e-9;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ORBIT_LENGTH: usize = 100_000;
pub const DEFAULT_BURN_IN: usize = 100;
pub const DEFAULT_WORD_LENGTH: usize = 4;

/// A finitely generated semigroup together with the numerical budgets used
/// to approximate its dynamics.
#[derive(Clone, Debug)]
pub struct SemigroupSpec {
    pub generators: Vec<RationalMap>,
    pub seed: u64,
    pub orbit_length: usize,
    pub burn_in: usize,
    pub word_length_max: usize,
    pub window: Window,
    pub resolution: Resolution,
    /// Number of independent chaos-game walkers. Results are deterministic
    /// for a fixed value.
    pub workers: usize,
}

impl SemigroupSpec {
    /// Spec with default budgets: seed 42, 10⁵ orbit points, burn-in 100,
    /// words up to length 4, a 5×5 window at the origin, 400×400 pixels and
    /// one walker.
    pub fn new(generators: Vec<RationalMap>) -> Result<Self> {
        let spec = Self {
            generators,
            seed: DEFAULT_SEED,
            orbit_length: DEFAULT_ORBIT_LENGTH,
            burn_in: DEFAULT_BURN_IN,
            word_length_max: DEFAULT_WORD_LENGTH,
            window: Window::centered(5.0, 5.0),
            resolution: Resolution::new(400, 400),
            workers: 1,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::InvalidSpec("at least one generator is required".into()));
        }
        for g in &self.generators {
            if g.degree() < 2 {
                return Err(Error::NotAGenerator(g.degree()));
            }
        }
        if self.orbit_length == 0 || self.word_length_max == 0 || self.workers == 0 {
            return Err(Error::InvalidSpec(
                "orbit_length, word_length_max and workers must be positive".into(),
            ));
        }
        if self.burn_in >= self.orbit_length {
            return Err(Error::InvalidSpec(format!(
                "burn_in ({}) must be smaller than orbit_length ({})",
                self.burn_in, self.orbit_length
            )));
        }
        self.window.validate()?;
        self.resolution.validate()?;
        Ok(())
    }

    pub fn float_generators(&self) -> Vec<FloatMap> {
        self.generators.iter().map(FloatMap::new).collect()
    }

    /// Runs `op` on a thread pool sized to `workers`.
    pub(crate) fn in_pool<T: Send>(&self, op: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        Ok(pool.install(op))
    }
}

/// A finite set of sphere points standing in for a Julia set, an E-set or a
/// set of repelling points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    #[serde(with = "points_serde")]
    pub points: Vec<SpherePoint>,
    pub label: String,
}

mod points_serde {
    use super::SpherePoint;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    /// `[re, im]` for finite points, `null` for ∞.
    pub fn serialize<S: Serializer>(points: &[SpherePoint], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<Option<[f64; 2]>> = points.iter().map(|p| p.finite().map(|z| [z.re, z.im])).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<SpherePoint>, D::Error> {
        let raw = Vec::<Option<[f64; 2]>>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|p| match p {
                Some([re, im]) => SpherePoint::Finite(Complex64::new(re, im)),
                None => SpherePoint::Infinity,
            })
            .collect())
    }
}

impl PointCloud {
    pub fn new(points: Vec<SpherePoint>, label: impl Into<String>) -> Self {
        Self { points, label: label.into() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn finite_points(&self) -> impl Iterator<Item = num_complex::Complex64> + '_ {
        self.points.iter().filter_map(SpherePoint::finite)
    }

    /// Evenly spaced points of the real segment `[a, b]` with spacing at
    /// most `step`.
    pub fn real_segment(a: f64, b: f64, step: f64) -> Self {
        let n = (((b - a) / step).ceil() as usize).max(1);
        let points = (0..=n).map(|k| SpherePoint::real(a + (b - a) * k as f64 / n as f64)).collect();
        Self::new(points, format!("segment [{a}, {b}]"))
    }

    /// Largest modulus over finite points; ∞ counts as `f64::INFINITY`.
    pub fn max_modulus(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.finite().map_or(f64::INFINITY, |z| z.norm()))
            .fold(0.0, f64::max)
    }
}

/// True when every preimage of `z0` under every generator is `z0` itself,
/// in which case backward orbits from `z0` never leave it.
fn is_exceptional(gens: &[FloatMap], z0: SpherePoint) -> Result<bool> {
    for g in gens {
        let pre = g.preimages(z0, PREIMAGE_TOL)?;
        if pre.iter().any(|&p| spherical_dist(p, z0) > 1e-9) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn walker(gens: &[FloatMap], z0: SpherePoint, seed: u64, index: usize, burn_in: usize, keep: usize) -> Result<Vec<SpherePoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut z = z0;
    let mut out = Vec::with_capacity(keep);
    for step in 0..burn_in + keep {
        let g = &gens[rng.random_range(0..gens.len())];
        let pre = g.preimages(z, PREIMAGE_TOL)?;
        z = pre[rng.random_range(0..pre.len())];
        if step >= burn_in {
            out.push(z);
        }
    }
    Ok(out)
}

/// Chaos-game approximation of `J(G)`: from `z0`, repeatedly move to a
/// uniformly chosen preimage under a uniformly chosen generator. Each of the
/// `workers` walkers records its share of `orbit_length - burn_in` points
/// after its own burn-in; clouds are concatenated in walker order.
pub fn random_backward_orbit(spec: &SemigroupSpec, z0: SpherePoint) -> Result<PointCloud> {
    spec.validate()?;
    let gens = spec.float_generators();
    if is_exceptional(&gens, z0)? {
        return Err(Error::ExceptionalStart(z0.to_string()));
    }
    let total = spec.orbit_length - spec.burn_in;
    let w = spec.workers.min(total);
    let shares: Vec<usize> = (0..w).map(|i| total / w + usize::from(i < total % w)).collect();
    let parts = spec.in_pool(|| {
        shares
            .par_iter()
            .enumerate()
            .map(|(i, &keep)| walker(&gens, z0, spec.seed, i, spec.burn_in, keep))
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(PointCloud::new(parts.concat(), "backward orbit"))
}

/// `z0, f(z0), ..., f^n(z0)` in floating point.
pub fn forward_orbit(f: &RationalMap, z0: SpherePoint, n: usize) -> Vec<SpherePoint> {
    let fm = FloatMap::new(f);
    let mut out = Vec::with_capacity(n + 1);
    let mut z = z0;
    out.push(z);
    for _ in 0..n {
        z = fm.eval(z);
        out.push(z);
    }
    out
}

/// Image of every point of `cloud` under `k`.
pub fn pushforward(cloud: &PointCloud, k: &RationalMap) -> PointCloud {
    let km = FloatMap::new(k);
    PointCloud::new(
        cloud.points.iter().map(|&p| km.eval(p)).collect(),
        format!("{} pushed forward by {}", cloud.label, k),
    )
}
