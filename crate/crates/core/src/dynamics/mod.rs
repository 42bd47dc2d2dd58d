//! Floating-point dynamics on the Riemann sphere.

mod hausdorff;
mod orbit;
mod raster;
mod repelling;
pub mod roots;
mod saturate;
mod sphere;

pub use hausdorff::{directed_hausdorff, hausdorff};
pub use orbit::{
    forward_orbit, pushforward, random_backward_orbit, PointCloud, SemigroupSpec, DEFAULT_BURN_IN,
    DEFAULT_ORBIT_LENGTH, DEFAULT_SEED, DEFAULT_WORD_LENGTH, PREIMAGE_TOL,
};
pub use raster::{rasterize, BandCheck, RasterGrid, Resolution, Window};
pub use repelling::{repelling_fixed_points, repelling_points_of, words};
pub use saturate::{e_set_saturation, Saturation, REFINE, SPHERE_CELL};
pub use sphere::{preimages, spherical_dist, FloatMap, SpherePoint};
