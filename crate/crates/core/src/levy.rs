//! Lévy(location, scale) sampling for cuckoo-search flights.
//!
//! The Lévy distribution is heavy-tailed: most draws land near the location
//! parameter, but occasional draws are very large, which is what lets a
//! flight escape local optima. Draws use the inverse-square-normal transform
//! `location + scale / Z^2` with `Z` standard normal, which is exact and
//! constant time; the support is `(location, +inf)`.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::SearchRng;

/// Location (shift) and scale of a Lévy distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyParams {
    pub location: f64,
    pub scale: f64,
}

impl LevyParams {
    pub fn new(location: f64, scale: f64) -> Result<Self> {
        if !scale.is_finite() || scale <= 0.0 || !location.is_finite() {
            return Err(Error::InvalidInput(format!(
                "Levy scale must be positive and finite, got location {location}, scale {scale}"
            )));
        }
        Ok(Self { location, scale })
    }

    /// Analytic median: `location + scale / (2 * erfcinv(1/2)^2)`.
    pub fn median(&self) -> f64 {
        // 1 / (2 * erfcinv(1/2)^2) = 2.1981093021198563
        self.location + self.scale * 2.198_109_302_119_856_3
    }
}

/// One draw from Lévy(location, scale). Always strictly above the location.
pub fn sample_levy(params: &LevyParams, rng: &mut SearchRng) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    params.location + params.scale / (z * z)
}

/// A flight length: the Lévy draw truncated toward zero and clamped below at
/// zero. A zero-length flight is legal; the cloned configuration still gets
/// scored.
pub fn flight_distance(params: &LevyParams, rng: &mut SearchRng) -> u64 {
    truncate_distance(sample_levy(params, rng))
}

/// Truncation used by [`flight_distance`]; saturates on overflow.
fn truncate_distance(sample: f64) -> u64 {
    if sample <= 0.0 {
        0
    } else {
        sample as u64
    }
}
