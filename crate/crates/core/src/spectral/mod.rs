//! The Fourier side of PW_α: synthesis, analysis, projection and the
//! reproducing kernel.
//!
//! Everything band-limited is represented by its samples on the torus grid
//! t_j = −π + 2πj/L. Synthesis is the rectangle rule
//! F(m,n) = (1/L) Σ_{t_j ∈ D_α} f(t_j) e_{t_j}(m,n), so its output is a finite
//! combination of discrete exponentials and therefore exactly discrete entire.

pub mod checks;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::band::{BandParameters, TorusGrid};
use crate::error::{Error, Result};
use crate::fft;
use crate::lattice::{
    discrete_exponential, max_holomorphicity_residual, phi, phi_real, GridFunction, LatticePoint,
    Window,
};
use crate::quadrature::BandQuadrature;

/// Relative out-of-band spectral mass above which a sequence is not in PW_α.
pub const LEAK_TOL: f64 = 1e-8;

/// Holomorphicity tolerance for [`PWFunction::new`], relative to the sup norm.
pub const HOLOMORPHIC_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Samples of f on the L-point torus grid, zero outside D_α.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpectrum", into = "RawSpectrum")]
pub struct SpectralFunction {
    band: BandParameters,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RawSpectrum {
    #[serde(rename = "L")]
    l: usize,
    alpha: f64,
    values: Vec<Complex64>,
}

impl TryFrom<RawSpectrum> for SpectralFunction {
    type Error = Error;

    fn try_from(raw: RawSpectrum) -> Result<Self> {
        if raw.values.len() != raw.l {
            return Err(Error::LengthMismatch {
                expected: raw.l,
                got: raw.values.len(),
            });
        }
        SpectralFunction::new(BandParameters::new(raw.alpha)?, raw.values)
    }
}

impl From<SpectralFunction> for RawSpectrum {
    fn from(f: SpectralFunction) -> Self {
        RawSpectrum {
            l: f.values.len(),
            alpha: f.band.alpha(),
            values: f.values,
        }
    }
}

impl SpectralFunction {
    /// Fails with [`Error::BandLeakage`] if any out-of-band value is nonzero.
    pub fn new(band: BandParameters, values: Vec<Complex64>) -> Result<Self> {
        let grid = TorusGrid::new(values.len())?;
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite spectral value {v}"
            )));
        }
        let mask = grid.mask(&band);
        let (mut out, mut total) = (0.0, 0.0);
        for (v, &inside) in values.iter().zip(&mask) {
            let e = v.norm_sqr();
            total += e;
            if !inside {
                out += e;
            }
        }
        if out > 0.0 {
            return Err(Error::BandLeakage {
                out_of_band: out,
                total,
                tolerance: 0.0,
            });
        }
        Ok(SpectralFunction { band, values })
    }

    /// Zero the out-of-band values instead of rejecting them.
    pub fn masked(band: BandParameters, mut values: Vec<Complex64>) -> Result<Self> {
        let grid = TorusGrid::new(values.len())?;
        for (v, inside) in values.iter_mut().zip(grid.mask(&band)) {
            if !inside {
                *v = ZERO;
            }
        }
        SpectralFunction::new(band, values)
    }

    /// Sample `f` at the in-band grid points.
    pub fn from_fn(band: BandParameters, l: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let grid = TorusGrid::new(l)?;
        let values = grid
            .points()
            .map(|t| if band.contains(t) { f(t) } else { ZERO })
            .collect();
        SpectralFunction::new(band, values)
    }

    pub fn zeros(band: BandParameters, l: usize) -> Result<Self> {
        SpectralFunction::new(band, vec![ZERO; l])
    }

    pub fn band(&self) -> &BandParameters {
        &self.band
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid(&self) -> TorusGrid {
        TorusGrid::new(self.values.len()).expect("validated on construction")
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// ‖f‖_{L²(𝕋)} by the grid rule, (2π/L · Σ|f_j|²)^{1/2}.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (2.0 * PI / self.len() as f64 * s).sqrt()
    }
}

/// A discrete entire function on a window, with its height-0 norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PWFunction {
    grid: GridFunction,
    band: BandParameters,
    layer0_norm: f64,
}

impl PWFunction {
    /// Checks that the window contains height 0 and that the values are
    /// discrete entire to [`HOLOMORPHIC_TOL`] relative to their sup norm.
    pub fn new(grid: GridFunction, band: BandParameters) -> Result<Self> {
        let w = grid.window();
        if w.width() >= 2 && w.height() >= 2 {
            let r = max_holomorphicity_residual(&grid)?;
            if r > HOLOMORPHIC_TOL * grid.sup_norm() {
                return Err(Error::InvalidInput(format!(
                    "grid is not discrete entire: residual {r:e}"
                )));
            }
        }
        PWFunction::from_entire(grid, band)
    }

    fn from_entire(grid: GridFunction, band: BandParameters) -> Result<Self> {
        let layer0_norm = l2(grid.layer(0)?);
        Ok(PWFunction {
            grid,
            band,
            layer0_norm,
        })
    }

    pub fn grid(&self) -> &GridFunction {
        &self.grid
    }

    pub fn window(&self) -> Window {
        self.grid.window()
    }

    pub fn band(&self) -> &BandParameters {
        &self.band
    }

    /// ‖F‖_{PW_α} truncated to the window: (Σ_m |F(m,0)|²)^{1/2}.
    pub fn layer0_norm(&self) -> f64 {
        self.layer0_norm
    }

    pub fn layer0(&self) -> &[Complex64] {
        self.grid.layer(0).expect("height 0 is in the window")
    }

    pub fn get(&self, p: LatticePoint) -> Result<Complex64> {
        self.grid.get(p)
    }
}

pub(crate) fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn require_height_zero(window: &Window) -> Result<()> {
    if window.n_min > 0 || window.n_max < 0 {
        return Err(window.out_of_window(LatticePoint::new(window.m_min, 0)));
    }
    Ok(())
}

/// F(m,n) = (1/L) Σ_j f(t_j) e_{t_j}(m,n) over the window.
pub fn synthesize(f: &SpectralFunction, window: Window) -> Result<PWFunction> {
    require_height_zero(&window)?;
    let grid = f.grid();
    let mut active = Vec::new();
    for (j, v) in f.values().iter().enumerate() {
        if *v != ZERO {
            // surfaces Pole for a nonzero value sitting on ±π/2
            phi(grid.point(j), 0)?;
            active.push(j);
        }
    }
    let mut layers = Vec::with_capacity(window.height());
    let mut g = vec![ZERO; f.len()];
    for n in window.ns() {
        for &j in &active {
            g[j] = f.values()[j] * phi_real(grid.point(j), n);
        }
        layers.push(fft::grid_to_sequence(&g, window.m_min, window.width()));
    }
    let grid_fn = GridFunction::from_layers(window, layers)?;
    PWFunction::from_entire(grid_fn, *f.band())
}

/// Σ_m c_m e^{−imt_j} on the L-grid for a height-0 sequence starting at `m_start`, unmasked.
pub fn fourier_series(layer0: &[Complex64], m_start: i64, l: usize) -> Result<Vec<Complex64>> {
    TorusGrid::new(l)?;
    Ok(fft::series_on_grid(layer0, m_start, l))
}

/// Spectrum of F together with the leakage diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub spectrum: SpectralFunction,
    /// Σ |f(t_j)|² over out-of-band grid points, before masking.
    pub out_of_band_mass: f64,
    pub total_mass: f64,
}

/// f(t_j) = Σ_{m in window} F(m,0) e^{−imt_j}, masked to D_α.
pub fn analyze(f: &PWFunction, l: usize) -> Result<Analysis> {
    analyze_layer(f.layer0(), f.window().m_min, f.band(), l)
}

pub(crate) fn analyze_layer(
    layer0: &[Complex64],
    m_start: i64,
    band: &BandParameters,
    l: usize,
) -> Result<Analysis> {
    let raw = fourier_series(layer0, m_start, l)?;
    let mask = TorusGrid::new(l)?.mask(band);
    let (mut out, mut total) = (0.0, 0.0);
    let mut values = raw;
    for (v, &inside) in values.iter_mut().zip(&mask) {
        let e = v.norm_sqr();
        total += e;
        if !inside {
            out += e;
            *v = ZERO;
        }
    }
    if out > LEAK_TOL * total {
        return Err(Error::BandLeakage {
            out_of_band: out,
            total,
            tolerance: LEAK_TOL,
        });
    }
    Ok(Analysis {
        spectrum: SpectralFunction::new(*band, values)?,
        out_of_band_mass: out,
        total_mass: total,
    })
}

/// How [`project`] realises P for a given window and grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionMode {
    /// Window is one full period of the grid: exact orthogonal projection.
    Periodic,
    /// g is zero outside the window: band integral by Gauss–Legendre quadrature.
    ZeroPadded,
}

pub fn projection_mode(window: &Window, l: usize) -> Result<ProjectionMode> {
    let width = window.width();
    if width == l {
        Ok(ProjectionMode::Periodic)
    } else if l >= 4 * width {
        Ok(ProjectionMode::ZeroPadded)
    } else {
        Err(Error::GridTooCoarse { l, width })
    }
}

/// Orthogonal projection of a height-0 sequence onto PW_α, extended to all
/// heights of `window`.
///
/// When the window width equals L the sequence is read as one period of an
/// L-periodic sequence and the projection is the exact 0/1 spectral mask.
/// Otherwise (L ≥ 4 × width) g is zero-padded and
/// Pg(m,n) = (1/2π) ∫_{D_α} ĝ(t) e_t(m,n) dt is evaluated by band quadrature.
pub fn project(
    g: &[Complex64],
    window: Window,
    band: &BandParameters,
    l: usize,
) -> Result<PWFunction> {
    require_height_zero(&window)?;
    if g.len() != window.width() {
        return Err(Error::LengthMismatch {
            expected: window.width(),
            got: g.len(),
        });
    }
    TorusGrid::new(l)?;
    match projection_mode(&window, l)? {
        ProjectionMode::Periodic => {
            let spectrum =
                SpectralFunction::masked(*band, fft::series_on_grid(g, window.m_min, l))?;
            synthesize(&spectrum, window)
        }
        ProjectionMode::ZeroPadded => project_zero_padded(g, window, band, l),
    }
}

fn max_abs_m(window: &Window) -> f64 {
    window.m_min.unsigned_abs().max(window.m_max.unsigned_abs()) as f64
}

fn max_abs_n(window: &Window) -> f64 {
    window.n_min.unsigned_abs().max(window.n_max.unsigned_abs()) as f64
}

/// Σ_i c_i e^{imt_i} for consecutive m, by per-node phase recurrence.
fn nonuniform_sum(
    nodes: &[f64],
    coeffs: &[Complex64],
    m_start: i64,
    count: usize,
) -> Vec<Complex64> {
    let mut out = vec![ZERO; count];
    for (&t, &c) in nodes.iter().zip(coeffs) {
        if c == ZERO {
            continue;
        }
        let step = Complex64::from_polar(1.0, t);
        let mut z = c * Complex64::from_polar(1.0, t * m_start as f64);
        for (k, o) in out.iter_mut().enumerate() {
            // re-anchor periodically to keep the recurrence from drifting
            if k % 64 == 0 && k > 0 {
                z = c * Complex64::from_polar(1.0, t * (m_start + k as i64) as f64);
            }
            *o += z;
            z *= step;
        }
    }
    out
}

/// Σ_k g_k e^{−i(m_start+k)t}.
fn series_at(t: f64, g: &[Complex64], m_start: i64) -> Complex64 {
    let mut acc = ZERO;
    let step = Complex64::from_polar(1.0, -t);
    let mut z = Complex64::from_polar(1.0, -t * m_start as f64);
    for (k, v) in g.iter().enumerate() {
        if k % 64 == 0 && k > 0 {
            z = Complex64::from_polar(1.0, -t * (m_start + k as i64) as f64);
        }
        acc += v * z;
        z *= step;
    }
    acc
}

fn project_zero_padded(
    g: &[Complex64],
    window: Window,
    band: &BandParameters,
    l: usize,
) -> Result<PWFunction> {
    let freq = 2.0 * max_abs_m(&window) + 8.0 * max_abs_n(&window) + 1.0;
    let quad = BandQuadrature::for_grid(band, freq, l);
    let ghat: Vec<Complex64> = quad
        .nodes()
        .iter()
        .map(|&t| series_at(t, g, window.m_min))
        .collect();
    let mut layers = Vec::with_capacity(window.height());
    for n in window.ns() {
        let coeffs: Vec<Complex64> = quad
            .pairs()
            .zip(&ghat)
            .map(|((t, w), gh)| gh * (w * phi_real(t, n)))
            .collect();
        layers.push(nonuniform_sum(
            quad.nodes(),
            &coeffs,
            window.m_min,
            window.width(),
        ));
    }
    let grid = GridFunction::from_layers(window, layers)?;
    PWFunction::from_entire(grid, *band)
}

/// A kernel evaluation K_{center}(probe).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelQuery {
    pub center: LatticePoint,
    pub probe: LatticePoint,
}

impl KernelQuery {
    pub fn new(center: LatticePoint, probe: LatticePoint) -> Self {
        KernelQuery { center, probe }
    }
}

/// (α/π)(1 + (−1)^d) sinc(αd), the kernel at v = −n with d = u − m.
pub fn kernel_closed_form(d: i64, band: &BandParameters) -> f64 {
    if d.rem_euclid(2) == 1 {
        return 0.0;
    }
    let a = band.alpha();
    if d == 0 {
        return 2.0 * a / PI;
    }
    let x = a * d as f64;
    2.0 * a / PI * x.sin() / x
}

/// K_{(m,n)}(u,v) = (1/2π) ∫_{D_α} e_t(u − m, v + n) dt by band quadrature,
/// with L setting the minimum node budget.
pub fn kernel(q: KernelQuery, band: &BandParameters, l: usize) -> Result<Complex64> {
    let d = q.probe.m - q.center.m;
    let h = q.probe.n + q.center.n;
    let quad = BandQuadrature::for_grid(
        band,
        d.unsigned_abs() as f64 + 8.0 * h.unsigned_abs() as f64 + 1.0,
        l,
    );
    let p = LatticePoint::new(d, h);
    let mut acc = ZERO;
    for (t, w) in quad.pairs() {
        acc += discrete_exponential(t, p)? * w;
    }
    Ok(acc)
}

/// The same kernel by the uniform grid rule, (1/L) Σ_{t_j ∈ D_α} e_{t_j}(u − m, v + n).
pub fn grid_kernel(q: KernelQuery, band: &BandParameters, l: usize) -> Result<Complex64> {
    let grid = TorusGrid::new(l)?;
    let p = LatticePoint::new(q.probe.m - q.center.m, q.probe.n + q.center.n);
    let mut acc = ZERO;
    for t in grid.points().filter(|&t| band.contains(t)) {
        acc += discrete_exponential(t, p)?;
    }
    Ok(acc / l as f64)
}

/// Σ_{u in window} F(u,0) · conj K_{(m,n)}(u,0).
///
/// On a full-period window (width = L) the grid kernel is used and the
/// reproduction is exact for grid-synthesized F; otherwise the quadrature
/// kernel is used and the sum is truncated to the window.
pub fn reproduce(f: &PWFunction, p: LatticePoint, l: usize) -> Result<Complex64> {
    let window = f.window();
    if !window.contains(p) {
        return Err(window.out_of_window(p));
    }
    let layer = f.layer0();
    let band = f.band();
    if window.width() == l {
        // conj K(u − m, n) = (1/L) Σ_j e^{−i(u−m)t_j} φ_{t_j}(n), for all u at once
        let grid = TorusGrid::new(l)?;
        let mut row = vec![ZERO; l];
        for (j, t) in grid.points().enumerate() {
            if band.contains(t) {
                row[j] = Complex64::new(phi_real(t, p.n), 0.0);
            }
        }
        let offsets = fft::grid_to_sequence(&row, window.m_min - p.m, window.width());
        let mut acc = ZERO;
        for (k, fu) in layer.iter().enumerate() {
            acc += fu * offsets[k].conj();
        }
        return Ok(acc);
    }
    let freq = window.width() as f64 + 8.0 * p.n.unsigned_abs() as f64 + 1.0;
    let quad = BandQuadrature::for_grid(band, freq, l);
    let mut acc = ZERO;
    for (t, w) in quad.pairs() {
        let phase = Complex64::from_polar(1.0, t);
        let mut e = Complex64::from_polar(1.0, t * (window.m_min - p.m) as f64);
        let mut s = ZERO;
        for (k, fu) in layer.iter().enumerate() {
            if k % 64 == 0 && k > 0 {
                e = Complex64::from_polar(1.0, t * (window.m_min + k as i64 - p.m) as f64);
            }
            s += fu * e.conj();
            e *= phase;
        }
        acc += s * (w * phi_real(t, p.n));
    }
    Ok(acc)
}
