//! JSON scene configuration for the `julia` and `eset` commands.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{Resolution, SemigroupSpec, Window, DEFAULT_BURN_IN, DEFAULT_ORBIT_LENGTH, DEFAULT_SEED, DEFAULT_WORD_LENGTH};
use crate::error::{Error, Result};
use crate::expr::parse_rational_map;

/// A scene: generators as expression strings plus numerical budgets. Every
/// field but `generators` has a default, and unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub generators: Vec<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_orbit_length")]
    pub orbit_length: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    #[serde(default = "default_word_length")]
    pub word_length_max: usize,
    #[serde(default = "default_window")]
    pub window: Window,
    #[serde(default = "default_resolution")]
    pub resolution: Resolution,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_orbit_length() -> usize {
    DEFAULT_ORBIT_LENGTH
}

fn default_burn_in() -> usize {
    DEFAULT_BURN_IN
}

fn default_word_length() -> usize {
    DEFAULT_WORD_LENGTH
}

fn default_window() -> Window {
    Window::centered(5.0, 5.0)
}

fn default_resolution() -> Resolution {
    Resolution::new(400, 400)
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl SceneConfig {
    pub fn new(generators: Vec<String>) -> Self {
        Self {
            generators,
            seed: default_seed(),
            orbit_length: default_orbit_length(),
            burn_in: default_burn_in(),
            word_length_max: default_word_length(),
            window: default_window(),
            resolution: default_resolution(),
            output_dir: default_output_dir(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(format!("scene config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Parses the generators and checks every invariant of the resulting
    /// [`SemigroupSpec`].
    pub fn to_spec(&self, workers: usize) -> Result<SemigroupSpec> {
        let generators = self.generators.iter().map(|g| parse_rational_map(g)).collect::<Result<Vec<_>>>()?;
        let spec = SemigroupSpec {
            generators,
            seed: self.seed,
            orbit_length: self.orbit_length,
            burn_in: self.burn_in,
            word_length_max: self.word_length_max,
            window: self.window,
            resolution: self.resolution,
            workers,
        };
        spec.validate()?;
        Ok(spec)
    }
}
