//! Nonuniform sampling at height 0 and iterative reconstruction.
//!
//! A sampling set Λ ⊂ ℤ is split into its even part {p_k} and odd part {q_k}.
//! T interpolates samples linearly along each parity class, P projects onto
//! PW_α, and A = PT. When max(δ_e, δ_o) < π/α the operator I − A is a
//! contraction with norm at most sin²α / sin²(π/δ), and F is recovered from
//! its samples as the Neumann series Σ_k (I − A)^k A F.
//!
//! Reconstruction runs on the periodic model: the window is one full period of
//! the L-grid, so P is the exact 0/1 spectral mask.

pub mod inequalities;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::band::{BandParameters, TorusGrid};
use crate::error::{Error, Parity, Result};
use crate::fft;
use crate::lattice::{LatticePoint, Window};
use crate::spectral::{l2, project, synthesize, PWFunction, SpectralFunction};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Λ within the height-0 window [m_min, m_max], with its parity gaps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSamplingSet", into = "RawSamplingSet")]
pub struct SamplingSet {
    lambda: Vec<i64>,
    m_min: i64,
    m_max: i64,
    evens: Vec<i64>,
    odds: Vec<i64>,
    delta_e: i64,
    delta_o: i64,
}

#[derive(Serialize, Deserialize)]
struct RawSamplingSet {
    lambda: Vec<i64>,
    delta_e: i64,
    delta_o: i64,
    window: [i64; 2],
}

impl TryFrom<RawSamplingSet> for SamplingSet {
    type Error = Error;

    fn try_from(raw: RawSamplingSet) -> Result<Self> {
        let s = gaps(&raw.lambda, raw.window[0], raw.window[1])?;
        if s.delta_e != raw.delta_e || s.delta_o != raw.delta_o {
            return Err(Error::InvalidInput(format!(
                "stated gaps ({}, {}) differ from computed ({}, {})",
                raw.delta_e, raw.delta_o, s.delta_e, s.delta_o
            )));
        }
        Ok(s)
    }
}

impl From<SamplingSet> for RawSamplingSet {
    fn from(s: SamplingSet) -> Self {
        RawSamplingSet {
            lambda: s.lambda,
            delta_e: s.delta_e,
            delta_o: s.delta_o,
            window: [s.m_min, s.m_max],
        }
    }
}

fn first_of(parity: Parity, m_min: i64) -> i64 {
    if Parity::of(m_min) == parity {
        m_min
    } else {
        m_min + 1
    }
}

fn last_of(parity: Parity, m_max: i64) -> i64 {
    if Parity::of(m_max) == parity {
        m_max
    } else {
        m_max - 1
    }
}

fn max_gap(points: &[i64]) -> i64 {
    points.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(2)
}

/// Split Λ by parity and compute δ_e, δ_o.
///
/// Each parity class must contain the first and last point of its parity in
/// the window, so that every interpolation cell lies inside the window.
pub fn gaps(lambda: &[i64], m_min: i64, m_max: i64) -> Result<SamplingSet> {
    if m_max - m_min < 3 {
        return Err(Error::InvalidInput(format!(
            "sampling window [{m_min}, {m_max}] needs at least 4 points"
        )));
    }
    if let Some(w) = lambda.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(format!(
            "sampling set must be strictly increasing: {} then {}",
            w[0], w[1]
        )));
    }
    if let Some(&x) = lambda.iter().find(|&&x| x < m_min || x > m_max) {
        return Err(Error::InvalidInput(format!(
            "sample point {x} outside window [{m_min}, {m_max}]"
        )));
    }
    let (evens, odds): (Vec<i64>, Vec<i64>) =
        lambda.iter().partition(|&&x| Parity::of(x) == Parity::Even);
    for (parity, class) in [(Parity::Even, &evens), (Parity::Odd, &odds)] {
        if class.is_empty() {
            return Err(Error::EmptyParity(parity));
        }
        for edge in [first_of(parity, m_min), last_of(parity, m_max)] {
            if class.binary_search(&edge).is_err() {
                return Err(Error::BoundaryGap {
                    parity,
                    missing: edge,
                });
            }
        }
    }
    Ok(SamplingSet {
        lambda: lambda.to_vec(),
        m_min,
        m_max,
        delta_e: max_gap(&evens),
        delta_o: max_gap(&odds),
        evens,
        odds,
    })
}

fn check_step(delta: i64) -> Result<()> {
    if delta < 2 || delta % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "parity gaps must be even and at least 2, got {delta}"
        )));
    }
    Ok(())
}

fn merge(mut evens: Vec<i64>, odds: Vec<i64>) -> Vec<i64> {
    evens.extend(odds);
    evens.sort_unstable();
    evens.dedup();
    evens
}

impl SamplingSet {
    /// Every integer of the window.
    pub fn full(m_min: i64, m_max: i64) -> Result<Self> {
        gaps(&(m_min..=m_max).collect::<Vec<_>>(), m_min, m_max)
    }

    /// Progressions from the first even and first odd window points with
    /// steps δ_e and δ_o, plus the last point of each parity.
    pub fn two_progression(m_min: i64, m_max: i64, delta_e: i64, delta_o: i64) -> Result<Self> {
        check_step(delta_e)?;
        check_step(delta_o)?;
        let class = |parity: Parity, step: i64| {
            let (a, b) = (first_of(parity, m_min), last_of(parity, m_max));
            let mut v: Vec<i64> = (a..=b).step_by(step as usize).collect();
            if v.last() != Some(&b) {
                v.push(b);
            }
            v
        };
        let lambda = merge(class(Parity::Even, delta_e), class(Parity::Odd, delta_o));
        gaps(&lambda, m_min, m_max)
    }

    /// Gaps drawn uniformly from {2, 4, …, δ} for each parity class.
    pub fn random_gaps<R: Rng + ?Sized>(
        rng: &mut R,
        m_min: i64,
        m_max: i64,
        delta_e: i64,
        delta_o: i64,
    ) -> Result<Self> {
        check_step(delta_e)?;
        check_step(delta_o)?;
        let mut class = |parity: Parity, delta: i64| {
            let (a, b) = (first_of(parity, m_min), last_of(parity, m_max));
            let mut v = vec![a];
            let mut x = a;
            loop {
                x += 2 * rng.gen_range(1..=delta / 2);
                if x >= b {
                    break;
                }
                v.push(x);
            }
            v.push(b);
            v
        };
        let evens = class(Parity::Even, delta_e);
        let odds = class(Parity::Odd, delta_o);
        gaps(&merge(evens, odds), m_min, m_max)
    }

    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    pub fn evens(&self) -> &[i64] {
        &self.evens
    }

    pub fn odds(&self) -> &[i64] {
        &self.odds
    }

    pub fn delta_e(&self) -> i64 {
        self.delta_e
    }

    pub fn delta_o(&self) -> i64 {
        self.delta_o
    }

    /// δ = max(δ_e, δ_o).
    pub fn delta(&self) -> i64 {
        self.delta_e.max(self.delta_o)
    }

    pub fn m_range(&self) -> (i64, i64) {
        (self.m_min, self.m_max)
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }
}

/// max(δ_e, δ_o) < π/α, strict by a margin of 1e−12 so that δ = π/α is
/// rejected even when π/α rounds up.
pub fn sufficient_condition(s: &SamplingSet, band: &BandParameters) -> bool {
    sufficient_for_gaps(s.delta_e, s.delta_o, band)
}

pub fn sufficient_for_gaps(delta_e: i64, delta_o: i64, band: &BandParameters) -> bool {
    (delta_e.max(delta_o) as f64) < band.max_gap() - 1e-12
}

/// 1/δ_e + 1/δ_o ≥ 2α/π; meaningful for two-progression sets only
/// (see [`is_two_progression`]).
pub fn necessary_condition(s: &SamplingSet, band: &BandParameters) -> bool {
    necessary_for_gaps(s.delta_e, s.delta_o, band)
}

pub fn necessary_for_gaps(delta_e: i64, delta_o: i64, band: &BandParameters) -> bool {
    1.0 / delta_e as f64 + 1.0 / delta_o as f64 >= band.density() - 1e-12
}

/// Whether each parity class is an arithmetic progression.
pub fn is_two_progression(s: &SamplingSet) -> bool {
    let uniform = |v: &[i64]| v.windows(2).all(|w| w[1] - w[0] == v[1] - v[0]);
    uniform(&s.evens) && uniform(&s.odds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub r_max: i64,
    /// min over balls [m − r_max, m + r_max] inside the window of #(Λ ∩ ball)/(2 r_max + 1).
    pub density: f64,
    /// The same ratio at r = 8, 16, …, and r_max.
    pub trajectory: Vec<(i64, f64)>,
}

/// Finite-radius proxy for the lower Beurling density.
pub fn beurling_lower_density(s: &SamplingSet, r_max: i64) -> Result<DensityReport> {
    let radius = (s.m_max - s.m_min) / 2;
    if r_max < 1 || 2 * r_max > radius {
        return Err(Error::WindowTooSmall { radius, r_max });
    }
    let width = (s.m_max - s.m_min + 1) as usize;
    // prefix[k] = #Λ ∩ [m_min, m_min + k)
    let mut prefix = vec![0usize; width + 1];
    let mut it = s.lambda.iter().peekable();
    for k in 0..width {
        let m = s.m_min + k as i64;
        let hit = it.next_if(|&&x| x == m).is_some();
        prefix[k + 1] = prefix[k] + hit as usize;
    }
    let ratio = |r: i64| {
        let mut worst = f64::INFINITY;
        for c in (s.m_min + r)..=(s.m_max - r) {
            let lo = (c - r - s.m_min) as usize;
            let hi = (c + r - s.m_min) as usize + 1;
            let count = prefix[hi] - prefix[lo];
            worst = worst.min(count as f64 / (2 * r + 1) as f64);
        }
        worst
    };
    let mut radii: Vec<i64> = (1..).map(|k| 8 * k).take_while(|&r| r < r_max).collect();
    radii.push(r_max);
    let trajectory: Vec<(i64, f64)> = radii.iter().map(|&r| (r, ratio(r))).collect();
    Ok(DensityReport {
        r_max,
        density: trajectory.last().map(|p| p.1).unwrap_or(f64::NAN),
        trajectory,
    })
}

/// F(λ, 0) for every λ ∈ Λ.
pub fn sample(f: &PWFunction, s: &SamplingSet) -> Result<Vec<Complex64>> {
    s.lambda
        .iter()
        .map(|&m| f.get(LatticePoint::new(m, 0)))
        .collect()
}

fn interpolate_class(
    points: &[i64],
    values: &[Complex64],
    s: &SamplingSet,
    out: &mut [Complex64],
    parity: Parity,
) -> Result<()> {
    let (first, last) = (first_of(parity, s.m_min), last_of(parity, s.m_max));
    if points[0] > first {
        return Err(Error::CoverageGap(first));
    }
    if *points.last().expect("nonempty") < last {
        return Err(Error::CoverageGap(last));
    }
    for (j, w) in points.windows(2).enumerate() {
        let (p0, p1) = (w[0], w[1]);
        let (v0, v1) = (values[j], values[j + 1]);
        let span = (p1 - p0) as f64;
        for m in (p0..p1).step_by(2) {
            out[(m - s.m_min) as usize] = v0 + (v1 - v0) * ((m - p0) as f64 / span);
        }
    }
    let p_last = *points.last().expect("nonempty");
    out[(p_last - s.m_min) as usize] = values[points.len() - 1];
    Ok(())
}

/// TF on the window: parity-wise piecewise-linear interpolation of the samples.
pub fn interpolate_t(samples: &[Complex64], s: &SamplingSet) -> Result<Vec<Complex64>> {
    if samples.len() != s.lambda.len() {
        return Err(Error::LengthMismatch {
            expected: s.lambda.len(),
            got: samples.len(),
        });
    }
    let mut even_vals = Vec::with_capacity(s.evens.len());
    let mut odd_vals = Vec::with_capacity(s.odds.len());
    for (&m, &v) in s.lambda.iter().zip(samples) {
        match Parity::of(m) {
            Parity::Even => even_vals.push(v),
            Parity::Odd => odd_vals.push(v),
        }
    }
    let mut out = vec![ZERO; (s.m_max - s.m_min + 1) as usize];
    interpolate_class(&s.evens, &even_vals, s, &mut out, Parity::Even)?;
    interpolate_class(&s.odds, &odd_vals, s, &mut out, Parity::Odd)?;
    Ok(out)
}

fn check_window(s: &SamplingSet, window: &Window) -> Result<()> {
    if (window.m_min, window.m_max) != (s.m_min, s.m_max) {
        return Err(Error::InvalidInput(format!(
            "sampling window [{}, {}] differs from function window [{}, {}]",
            s.m_min, s.m_max, window.m_min, window.m_max
        )));
    }
    Ok(())
}

/// A F = P T F, extended to the heights of `window`.
pub fn approx_a(
    samples: &[Complex64],
    s: &SamplingSet,
    band: &BandParameters,
    window: Window,
    l: usize,
) -> Result<PWFunction> {
    check_window(s, &window)?;
    project(&interpolate_t(samples, s)?, window, band, l)
}

/// Diagnostics of [`reconstruct`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    /// Number of correction terms φ_1, φ_2, … added after φ_0.
    pub iterations: usize,
    /// ‖φ_k‖ for k = 0..=iterations.
    pub residuals: Vec<f64>,
    /// Largest observed ‖φ_{k+1}‖ / ‖φ_k‖.
    pub measured_ratio: f64,
    /// sin²α / sin²(π/δ).
    pub bound_ratio: f64,
    /// A-posteriori relative error bound ‖φ_K‖ q/(1−q) / ‖Σ φ_k‖.
    pub final_error: f64,
    /// (1 − bound_ratio)² / (4δ), the analytic lower frame bound.
    pub frame_lower: f64,
    /// Σ_λ |S(λ)|² / ‖S‖² for the reconstruction S.
    pub frame_lower_empirical: f64,
    /// Whether max(δ_e, δ_o) < π/α held.
    pub guarantee: bool,
    pub converged: bool,
    pub delta: i64,
}

/// sin²α / sin²(π/δ).
pub fn contraction_bound(band: &BandParameters, delta: i64) -> f64 {
    (band.alpha().sin() / (PI / delta as f64).sin()).powi(2)
}

/// Orthogonal projection of one period of a layer-0 sequence.
fn periodic_projection(v: &[Complex64], m_min: i64, mask: &[bool]) -> Vec<Complex64> {
    let mut spec = fft::series_on_grid(v, m_min, mask.len());
    for (x, &inside) in spec.iter_mut().zip(mask) {
        if !inside {
            *x = ZERO;
        }
    }
    fft::grid_to_sequence(&spec, m_min, v.len())
}

/// Neumann-series reconstruction φ_0 = AF, φ_{k+1} = φ_k − Aφ_k, F = Σ φ_k.
///
/// Stops once ‖φ_k‖ ≤ tol ‖φ_0‖ or after `max_iter` corrections. Fails with
/// [`Error::NoConvergence`] only when the sufficient condition held.
pub fn reconstruct(
    samples: &[Complex64],
    s: &SamplingSet,
    band: &BandParameters,
    window: Window,
    l: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(PWFunction, ReconstructionReport)> {
    check_window(s, &window)?;
    if window.width() != l {
        return Err(Error::NotPeriodic {
            l,
            width: window.width(),
        });
    }
    let mask = TorusGrid::new(l)?.mask(band);
    let index = |m: i64| (m - s.m_min) as usize;
    let apply_a = |v: &[Complex64]| -> Result<Vec<Complex64>> {
        let on_lambda: Vec<Complex64> = s.lambda.iter().map(|&m| v[index(m)]).collect();
        Ok(periodic_projection(
            &interpolate_t(&on_lambda, s)?,
            s.m_min,
            &mask,
        ))
    };

    let guarantee = sufficient_condition(s, band);
    let delta = s.delta();
    let bound_ratio = contraction_bound(band, delta);

    let mut phi = periodic_projection(&interpolate_t(samples, s)?, s.m_min, &mask);
    let mut sum = phi.clone();
    let r0 = l2(&phi);
    let mut residuals = vec![r0];
    let mut converged = r0 == 0.0;
    let mut iterations = 0;
    while !converged && iterations < max_iter {
        let a_phi = apply_a(&phi)?;
        for (p, a) in phi.iter_mut().zip(&a_phi) {
            *p -= a;
        }
        for (acc, p) in sum.iter_mut().zip(&phi) {
            *acc += p;
        }
        iterations += 1;
        let r = l2(&phi);
        residuals.push(r);
        converged = r <= tol * r0;
    }

    if !converged && guarantee {
        return Err(Error::NoConvergence {
            iterations,
            residual: residuals.last().copied().unwrap_or(0.0) / r0,
        });
    }

    let measured_ratio = residuals
        .windows(2)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .fold(0.0, f64::max);
    let q = if guarantee {
        bound_ratio
    } else {
        measured_ratio
    };
    let sum_norm = l2(&sum);
    let last = residuals.last().copied().unwrap_or(0.0);
    let final_error = if sum_norm == 0.0 {
        0.0
    } else if q < 1.0 {
        last * q / (1.0 - q) / sum_norm
    } else {
        f64::INFINITY
    };
    let sampled: f64 = s.lambda.iter().map(|&m| sum[index(m)].norm_sqr()).sum();
    let frame_lower_empirical = if sum_norm == 0.0 {
        0.0
    } else {
        sampled / (sum_norm * sum_norm)
    };
    let frame_lower = if bound_ratio < 1.0 {
        (1.0 - bound_ratio).powi(2) / (4.0 * delta as f64)
    } else {
        0.0
    };

    let spectrum = SpectralFunction::masked(*band, fft::series_on_grid(&sum, s.m_min, l))?;
    let f = synthesize(&spectrum, window)?;
    let report = ReconstructionReport {
        iterations,
        residuals,
        measured_ratio,
        bound_ratio,
        final_error,
        frame_lower,
        frame_lower_empirical,
        guarantee,
        converged,
        delta,
    };
    Ok((f, report))
}

/// Σ_λ |F(λ,0)|² / ‖F‖²; the upper inequality asks for ratio ≤ 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingRatio {
    pub ratio: f64,
    pub upper_ok: bool,
    pub zero_function: bool,
}

pub fn sampling_inequality_check(f: &PWFunction, s: &SamplingSet) -> Result<SamplingRatio> {
    let sampled: f64 = sample(f, s)?.iter().map(|v| v.norm_sqr()).sum();
    let norm2 = f.layer0_norm().powi(2);
    if norm2 == 0.0 {
        return Ok(SamplingRatio {
            ratio: f64::NAN,
            upper_ok: true,
            zero_function: true,
        });
    }
    let ratio = sampled / norm2;
    Ok(SamplingRatio {
        ratio,
        upper_ok: ratio <= 1.0 + 1e-10,
        zero_function: false,
    })
}
