use thiserror::Error;

use crate::lattice::LatticePoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Frequency within the pole tolerance of ±π/2, where φ_t is undefined.
    #[error("frequency t = {t} lies on the excluded pole ±π/2")]
    Pole { t: f64 },

    #[error("point {point} lies outside the window [{m_min}, {m_max}] x [{n_min}, {n_max}]")]
    OutOfWindow {
        point: LatticePoint,
        m_min: i64,
        m_max: i64,
        n_min: i64,
        n_max: i64,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("contour needs at least 2 vertices, got {0}")]
    DegenerateContour(usize),

    #[error("contour step {index} from {from} to {to} is not a unit lattice step")]
    NonUnitStep {
        index: usize,
        from: LatticePoint,
        to: LatticePoint,
    },

    #[error("out-of-band spectral mass {out_of_band:e} exceeds {tolerance:e} of total {total:e}")]
    BandLeakage {
        out_of_band: f64,
        total: f64,
        tolerance: f64,
    },

    #[error(
        "grid size {l} too coarse for window width {width} (need L >= 4 * width or L == width)"
    )]
    GridTooCoarse { l: usize, width: usize },

    #[error("window width {width} is not a full period of the grid L = {l}")]
    NotPeriodic { l: usize, width: usize },

    #[error("alpha + eps = {0} must stay below π/2")]
    BadEpsilon(f64),

    #[error("height-0 values do not show (1+|m|)^-4 decay inside the window")]
    SlowDecay,

    #[error("sampling set has no {0} points")]
    EmptyParity(Parity),

    #[error("{parity} samples miss the window edge point {missing}")]
    BoundaryGap { parity: Parity, missing: i64 },

    #[error("window point {0} is not covered by an interpolation cell")]
    CoverageGap(i64),

    #[error("window too small: radius {radius} cannot host balls of radius {r_max}")]
    WindowTooSmall { radius: i64, r_max: i64 },

    #[error("no convergence after {iterations} iterations (residual ratio {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("endpoints must vanish: s(0) = {first}, s(N) = {last}")]
    BadEndpoints { first: String, last: String },

    #[error("invalid band: alpha = {0} must lie in (0, π/2)")]
    InvalidBand(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Even or odd sublattice of ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: i64) -> Parity {
        if m.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}
