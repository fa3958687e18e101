//! In-band spectra used by the checkers, the CLI and the test suites.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::band::{wrap_torus, BandParameters, TorusGrid};
use crate::error::{Error, Result};
use crate::spectral::SpectralFunction;

/// Sharpness used for random ensembles; see [`Bump`].
pub const ENSEMBLE_SHARPNESS: f64 = 16.0;

/// Peak-normalised C^∞ bump exp(a − a/(1 − x²)) on |x| < 1, zero elsewhere.
pub fn bump_profile(x: f64, sharpness: f64) -> f64 {
    if x.abs() >= 1.0 {
        return 0.0;
    }
    (sharpness - sharpness / (1.0 - x * x)).exp()
}

/// amplitude · bump_profile((t − center)/half_width), read on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: f64,
    pub half_width: f64,
    #[serde(default = "default_sharpness")]
    pub sharpness: f64,
    #[serde(default = "unit_amplitude")]
    pub amplitude: Complex64,
}

fn default_sharpness() -> f64 {
    1.0
}

fn unit_amplitude() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl Bump {
    /// exp(1 − 1/(1 − (t/α)²)) filling the low band.
    pub fn centered(band: &BandParameters) -> Self {
        Bump {
            center: 0.0,
            half_width: band.alpha(),
            sharpness: 1.0,
            amplitude: unit_amplitude(),
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let x = wrap_torus(t - self.center) / self.half_width;
        self.amplitude * bump_profile(x, self.sharpness)
    }
}

/// Sample a sum of bumps on the L-grid; fails if any bump leaves D_α.
pub fn bump_spectrum(band: &BandParameters, l: usize, bumps: &[Bump]) -> Result<SpectralFunction> {
    let grid = TorusGrid::new(l)?;
    let values = grid
        .points()
        .map(|t| bumps.iter().map(|b| b.eval(t)).sum())
        .collect();
    SpectralFunction::new(*band, values)
}

/// f ≡ 1 on D_α.
pub fn indicator(band: &BandParameters, l: usize) -> Result<SpectralFunction> {
    SpectralFunction::from_fn(*band, l, |_| Complex64::new(1.0, 0.0))
}

/// A single nonzero grid value `w` at index `j`.
pub fn single_frequency(
    band: &BandParameters,
    l: usize,
    j: usize,
    w: Complex64,
) -> Result<SpectralFunction> {
    if j >= l {
        return Err(Error::InvalidInput(format!(
            "grid index {j} out of range for L = {l}"
        )));
    }
    let mut values = vec![Complex64::new(0.0, 0.0); l];
    values[j] = w;
    SpectralFunction::new(*band, values)
}

/// A random sharp bump in the low band, plus with probability ½ a second one
/// in the π-band.
pub fn random_bumps<R: Rng + ?Sized>(rng: &mut R, band: &BandParameters) -> Vec<Bump> {
    let alpha = band.alpha();
    let one = |offset: f64, rng: &mut R| {
        let half_width = rng.gen_range(0.8 * alpha..=alpha);
        let slack = alpha - half_width;
        let center = offset
            + if slack > 0.0 {
                rng.gen_range(-slack..=slack)
            } else {
                0.0
            };
        let amplitude = Complex64::from_polar(
            rng.gen_range(0.5..1.5),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
        Bump {
            center,
            half_width,
            sharpness: ENSEMBLE_SHARPNESS,
            amplitude,
        }
    };
    let mut bumps = vec![one(0.0, rng)];
    if rng.gen_bool(0.5) {
        bumps.push(one(std::f64::consts::PI, rng));
    }
    bumps
}

pub fn random_bump_spectrum<R: Rng + ?Sized>(
    rng: &mut R,
    band: &BandParameters,
    l: usize,
) -> Result<SpectralFunction> {
    let bumps = random_bumps(rng, band);
    bump_spectrum(band, l, &bumps)
}
