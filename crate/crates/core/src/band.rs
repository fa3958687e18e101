//! The frequency band D_α = {|t| ≤ α} ∪ {π − α ≤ |t| ≤ π} and the uniform torus grid.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid points within this distance of a band edge count as in-band.
pub const BAND_EDGE_TOL: f64 = 1e-12;

/// Band parameter α together with the derived per-layer growth base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBand")]
pub struct BandParameters {
    alpha: f64,
    growth_base: f64,
}

#[derive(Deserialize)]
struct RawBand {
    alpha: f64,
}

impl TryFrom<RawBand> for BandParameters {
    type Error = Error;

    fn try_from(raw: RawBand) -> Result<Self> {
        BandParameters::new(raw.alpha)
    }
}

impl BandParameters {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < FRAC_PI_2) {
            return Err(Error::InvalidBand(alpha));
        }
        Ok(BandParameters {
            alpha,
            growth_base: growth_base(alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// cos α / (1 − sin α), the modulus of e_{−α}(0, 1).
    pub fn growth_base(&self) -> f64 {
        self.growth_base
    }

    /// Membership in the closed band, with edge tolerance [`BAND_EDGE_TOL`].
    pub fn contains(&self, t: f64) -> bool {
        let a = wrap_torus(t).abs();
        a <= self.alpha + BAND_EDGE_TOL || a >= PI - self.alpha - BAND_EDGE_TOL
    }

    /// Lebesgue measure of D_α divided by 2π, i.e. K_{(n,0)}(n,0) = 2α/π.
    pub fn density(&self) -> f64 {
        2.0 * self.alpha / PI
    }

    /// Sufficient-condition threshold π/α on the parity gaps.
    pub fn max_gap(&self) -> f64 {
        PI / self.alpha
    }
}

/// cos a / (1 − sin a), evaluated as (1 + sin a)/cos a when that is better conditioned.
pub fn growth_base(a: f64) -> f64 {
    let (s, c) = a.sin_cos();
    if s > 0.0 {
        (1.0 + s) / c
    } else {
        c / (1.0 - s)
    }
}

/// Reduce an angle to the torus representative in [−π, π).
pub fn wrap_torus(t: f64) -> f64 {
    let r = (t + PI).rem_euclid(TAU) - PI;
    // rem_euclid can round up to exactly TAU
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// Uniform torus grid t_j = −π + 2πj/L, j = 0..L−1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    len: usize,
}

impl TorusGrid {
    pub fn new(len: usize) -> Result<Self> {
        if len < 8 || !len.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "grid size L = {len} must be even and at least 8"
            )));
        }
        Ok(TorusGrid { len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn point(&self, j: usize) -> f64 {
        -PI + TAU * j as f64 / self.len as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|j| self.point(j))
    }

    /// In-band indicator over the grid.
    pub fn mask(&self, band: &BandParameters) -> Vec<bool> {
        self.points().map(|t| band.contains(t)).collect()
    }
}
