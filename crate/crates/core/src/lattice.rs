//! Discrete complex analysis on ℤ²: discrete exponentials, the holomorphicity
//! residual, the layer-extension recursion and Duffin's contour integral.
//!
//! A function F: ℤ² → ℂ is discrete entire when on every plaquette
//!
//! ```text
//! F(m+1,n+1) − F(m,n) = −i (F(m,n+1) − F(m+1,n)).
//! ```
//!
//! Everything here works on finite rectangular windows; reads outside the
//! window fail with [`Error::OutOfWindow`] instead of zero-padding.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::band::wrap_torus;
use crate::error::{Error, Result};

/// Distance from ±π/2 below which a frequency is treated as the pole.
pub const POLE_TOL: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub m: i64,
    pub n: i64,
}

impl LatticePoint {
    pub const fn new(m: i64, n: i64) -> Self {
        LatticePoint { m, n }
    }

    /// The Gaussian integer m + in.
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.m as f64, self.n as f64)
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from([m, n]: [i64; 2]) -> Self {
        LatticePoint { m, n }
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.m, p.n]
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// Inclusive rectangle [m_min, m_max] × [n_min, n_max].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct Window {
    pub m_min: i64,
    pub m_max: i64,
    pub n_min: i64,
    pub n_max: i64,
}

impl TryFrom<[i64; 4]> for Window {
    type Error = Error;

    fn try_from([m_min, m_max, n_min, n_max]: [i64; 4]) -> Result<Self> {
        Window::new(m_min, m_max, n_min, n_max)
    }
}

impl From<Window> for [i64; 4] {
    fn from(w: Window) -> Self {
        [w.m_min, w.m_max, w.n_min, w.n_max]
    }
}

impl Window {
    pub fn new(m_min: i64, m_max: i64, n_min: i64, n_max: i64) -> Result<Self> {
        if m_min > m_max || n_min > n_max {
            return Err(Error::InvalidInput(format!(
                "empty window [{m_min}, {m_max}] x [{n_min}, {n_max}]"
            )));
        }
        Ok(Window {
            m_min,
            m_max,
            n_min,
            n_max,
        })
    }

    /// |m| ≤ radius, |n| ≤ height.
    pub fn centered(radius: i64, height: i64) -> Result<Self> {
        Window::new(-radius, radius, -height, height)
    }

    /// One full period m ∈ [−L/2, L/2 − 1] of an L-point torus grid.
    pub fn period(l: usize, n_min: i64, n_max: i64) -> Result<Self> {
        let half = (l / 2) as i64;
        Window::new(-half, half - 1, n_min, n_max)
    }

    pub fn width(&self) -> usize {
        (self.m_max - self.m_min + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        (self.m_min..=self.m_max).contains(&p.m) && (self.n_min..=self.n_max).contains(&p.n)
    }

    pub fn contains_m(&self, m: i64) -> bool {
        (self.m_min..=self.m_max).contains(&m)
    }

    pub fn ms(&self) -> std::ops::RangeInclusive<i64> {
        self.m_min..=self.m_max
    }

    pub fn ns(&self) -> std::ops::RangeInclusive<i64> {
        self.n_min..=self.n_max
    }

    /// Same horizontal extent, heights replaced.
    pub fn with_heights(&self, n_min: i64, n_max: i64) -> Result<Self> {
        Window::new(self.m_min, self.m_max, n_min, n_max)
    }

    fn index(&self, p: LatticePoint) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let row = (p.n - self.n_min) as usize;
        let col = (p.m - self.m_min) as usize;
        Some(row * self.width() + col)
    }

    pub(crate) fn out_of_window(&self, point: LatticePoint) -> Error {
        Error::OutOfWindow {
            point,
            m_min: self.m_min,
            m_max: self.m_max,
            n_min: self.n_min,
            n_max: self.n_max,
        }
    }
}

/// Complex values on a finite window of ℤ².
///
/// Values are stored row-major with one row per height n (rows ordered
/// n_min..=n_max, each row ordered m_min..=m_max), which is also the JSON layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct GridFunction {
    window: Window,
    values: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawGrid {
    window: Window,
    values: Vec<Complex64>,
}

impl TryFrom<RawGrid> for GridFunction {
    type Error = Error;

    fn try_from(raw: RawGrid) -> Result<Self> {
        GridFunction::new(raw.window, raw.values)
    }
}

impl GridFunction {
    pub fn new(window: Window, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != window.len() {
            return Err(Error::LengthMismatch {
                expected: window.len(),
                got: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite grid value {v}")));
        }
        Ok(GridFunction { window, values })
    }

    pub fn zeros(window: Window) -> Self {
        GridFunction {
            window,
            values: vec![Complex64::new(0.0, 0.0); window.len()],
        }
    }

    /// Sample a closure over the window.
    pub fn from_fn(window: Window, mut f: impl FnMut(LatticePoint) -> Complex64) -> Result<Self> {
        let mut values = Vec::with_capacity(window.len());
        for n in window.ns() {
            for m in window.ms() {
                values.push(f(LatticePoint::new(m, n)));
            }
        }
        GridFunction::new(window, values)
    }

    /// Like [`from_fn`](Self::from_fn) for fallible samplers.
    pub fn try_from_fn(
        window: Window,
        mut f: impl FnMut(LatticePoint) -> Result<Complex64>,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(window.len());
        for n in window.ns() {
            for m in window.ms() {
                values.push(f(LatticePoint::new(m, n))?);
            }
        }
        GridFunction::new(window, values)
    }

    /// Assemble from whole layers, one per height in `window.ns()`.
    pub fn from_layers(window: Window, layers: Vec<Vec<Complex64>>) -> Result<Self> {
        if layers.len() != window.height() {
            return Err(Error::LengthMismatch {
                expected: window.height(),
                got: layers.len(),
            });
        }
        let mut values = Vec::with_capacity(window.len());
        for layer in layers {
            if layer.len() != window.width() {
                return Err(Error::LengthMismatch {
                    expected: window.width(),
                    got: layer.len(),
                });
            }
            values.extend(layer);
        }
        GridFunction::new(window, values)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, p: LatticePoint) -> Result<Complex64> {
        self.window
            .index(p)
            .map(|i| self.values[i])
            .ok_or_else(|| self.window.out_of_window(p))
    }

    pub fn at(&self, m: i64, n: i64) -> Option<Complex64> {
        self.window
            .index(LatticePoint::new(m, n))
            .map(|i| self.values[i])
    }

    /// Values at height n over m_min..=m_max.
    pub fn layer(&self, n: i64) -> Result<&[Complex64]> {
        if !(self.window.n_min..=self.window.n_max).contains(&n) {
            return Err(self
                .window
                .out_of_window(LatticePoint::new(self.window.m_min, n)));
        }
        let w = self.window.width();
        let start = (n - self.window.n_min) as usize * w;
        Ok(&self.values[start..start + w])
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus along the given points (which must lie in the window).
    pub fn sup_on<'a>(&self, points: impl IntoIterator<Item = &'a LatticePoint>) -> Result<f64> {
        points
            .into_iter()
            .try_fold(0.0f64, |acc, &p| Ok(acc.max(self.get(p)?.norm())))
    }
}

fn pole_check(t: f64) -> Result<f64> {
    let w = wrap_torus(t);
    if (w - FRAC_PI_2).abs() < POLE_TOL || (w + FRAC_PI_2).abs() < POLE_TOL {
        return Err(Error::Pole { t });
    }
    Ok(w)
}

/// Real per-layer factor of e_t, returned as (cos t/(1+sin t), (1+sin t)/cos t),
/// each in the form free of cancellation for the sign of sin t.
fn phi_ratios(t: f64) -> (f64, f64) {
    let (s, c) = t.sin_cos();
    if s >= 0.0 {
        (c / (1.0 + s), (1.0 + s) / c)
    } else {
        ((1.0 - s) / c, c / (1.0 - s))
    }
}

/// φ_t(n) as a real number; caller has already excluded the pole.
pub(crate) fn phi_real(t: f64, n: i64) -> f64 {
    let (up, down) = phi_ratios(t);
    let k = i32::try_from(n.unsigned_abs()).expect("height fits in i32");
    if n >= 0 {
        up.powi(k)
    } else {
        down.powi(k)
    }
}

/// φ_t(n) = ((1 + i e^{it}) / (i + e^{it}))^n.
///
/// The base simplifies to the real number cos t/(1 + sin t); negative powers
/// use its reciprocal (1 + sin t)/cos t directly.
pub fn phi(t: f64, n: i64) -> Result<Complex64> {
    let t = pole_check(t)?;
    Ok(Complex64::new(phi_real(t, n), 0.0))
}

/// The discrete exponential e_t(m, n) = e^{itm} φ_t(n).
pub fn discrete_exponential(t: f64, p: LatticePoint) -> Result<Complex64> {
    let t = pole_check(t)?;
    Ok(Complex64::from_polar(1.0, t * p.m as f64) * phi_real(t, p.n))
}

/// F(m+1,n+1) − F(m,n) + i (F(m,n+1) − F(m+1,n)) on the plaquette with lower-left corner p.
pub fn holomorphicity_residual(f: &GridFunction, p: LatticePoint) -> Result<Complex64> {
    let LatticePoint { m, n } = p;
    let f00 = f.get(p)?;
    let f11 = f.get(LatticePoint::new(m + 1, n + 1))?;
    let f01 = f.get(LatticePoint::new(m, n + 1))?;
    let f10 = f.get(LatticePoint::new(m + 1, n))?;
    Ok(f11 - f00 + I * (f01 - f10))
}

/// Largest residual modulus over all plaquettes inside the window.
pub fn max_holomorphicity_residual(f: &GridFunction) -> Result<f64> {
    let w = f.window();
    if w.width() < 2 || w.height() < 2 {
        return Err(w.out_of_window(LatticePoint::new(w.m_max + 1, w.n_max + 1)));
    }
    let width = w.width();
    let mut worst = 0.0f64;
    for row in 0..w.height() - 1 {
        let lo = &f.values[row * width..(row + 1) * width];
        let hi = &f.values[(row + 1) * width..(row + 2) * width];
        for k in 0..width - 1 {
            let r = hi[k + 1] - lo[k] + I * (hi[k] - lo[k + 1]);
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}

/// Which neighbouring layer is known and which way along m the new layer grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerDirection {
    /// F(m, n) for m ≥ 0 from the layer at n − 1.
    UpRight,
    /// F(−m, n) for m ≥ 0 from the layer at n − 1.
    UpLeft,
    /// F(m, n) for m ≥ 0 from the layer at n + 1.
    DownRight,
    /// F(−m, n) for m ≥ 0 from the layer at n + 1.
    DownLeft,
}

/// Rebuild a layer from its neighbour and the anchor value F(0, n).
///
/// `boundary[k]` holds F(k, n−1), output `[k]` is F(k, n), for k = 0..=M.
/// Element 0 of the output is the anchor; every later element follows from
/// one plaquette, F(k+1,n) = F(k,n−1) + i F(k+1,n−1) − i F(k,n), which unrolls
/// to the closed layer formula
/// F(m,n) = (−i)^m (F(0,n) + 2i Σ_{k=1}^{m−1} i^k F(k,n−1) + i F(0,n−1) + i^{m+1} F(m,n−1)).
pub fn extend_layer(boundary: &[Complex64], anchor: Complex64) -> Result<Vec<Complex64>> {
    if boundary.is_empty() {
        return Err(Error::LengthMismatch {
            expected: 1,
            got: 0,
        });
    }
    let mut out = Vec::with_capacity(boundary.len());
    out.push(anchor);
    for k in 0..boundary.len() - 1 {
        let next = boundary[k] + I * boundary[k + 1] - I * out[k];
        out.push(next);
    }
    Ok(out)
}

/// [`extend_layer`] in any of the four directions.
///
/// `boundary[k]` is the known neighbour layer at horizontal offset ±k (sign
/// given by the direction) and output `[k]` is the new layer at the same offset.
/// The other three directions reuse the base recursion through the entire
/// reflections (−1)^{m+n} F(−m,n), (−1)^{m+n} F(m,−n) and F(−m,−n).
pub fn extend_layer_towards(
    boundary: &[Complex64],
    anchor: Complex64,
    direction: LayerDirection,
) -> Result<Vec<Complex64>> {
    let alternate = |v: &mut [Complex64], flip: f64| {
        for (k, x) in v.iter_mut().enumerate() {
            if k % 2 == 1 {
                *x = -*x;
            }
            *x *= flip;
        }
    };
    match direction {
        LayerDirection::UpRight | LayerDirection::DownLeft => extend_layer(boundary, anchor),
        LayerDirection::UpLeft | LayerDirection::DownRight => {
            // reflected layer below carries (−1)^{k+1}, anchor unchanged
            let mut reflected = boundary.to_vec();
            alternate(&mut reflected, -1.0);
            let mut out = extend_layer(&reflected, anchor)?;
            alternate(&mut out, 1.0);
            Ok(out)
        }
    }
}

pub fn extend_layer_neg(boundary: &[Complex64], anchor: Complex64) -> Result<Vec<Complex64>> {
    extend_layer_towards(boundary, anchor, LayerDirection::UpLeft)
}

pub fn extend_layer_down(boundary: &[Complex64], anchor: Complex64) -> Result<Vec<Complex64>> {
    extend_layer_towards(boundary, anchor, LayerDirection::DownRight)
}

pub fn extend_layer_down_neg(boundary: &[Complex64], anchor: Complex64) -> Result<Vec<Complex64>> {
    extend_layer_towards(boundary, anchor, LayerDirection::DownLeft)
}

/// A lattice path z_0, …, z_M with unit steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<LatticePoint>", into = "Vec<LatticePoint>")]
pub struct DiscreteContour {
    vertices: Vec<LatticePoint>,
}

impl TryFrom<Vec<LatticePoint>> for DiscreteContour {
    type Error = Error;

    fn try_from(v: Vec<LatticePoint>) -> Result<Self> {
        DiscreteContour::new(v)
    }
}

impl From<DiscreteContour> for Vec<LatticePoint> {
    fn from(c: DiscreteContour) -> Self {
        c.vertices
    }
}

impl DiscreteContour {
    pub fn new(vertices: Vec<LatticePoint>) -> Result<Self> {
        for (index, w) in vertices.windows(2).enumerate() {
            let d = (w[1].m - w[0].m).abs() + (w[1].n - w[0].n).abs();
            if d != 1 {
                return Err(Error::NonUnitStep {
                    index,
                    from: w[0],
                    to: w[1],
                });
            }
        }
        Ok(DiscreteContour { vertices })
    }

    /// Counterclockwise boundary of [m0, m1] × [n0, n1], closed.
    pub fn rectangle(m0: i64, n0: i64, m1: i64, n1: i64) -> Result<Self> {
        if m0 >= m1 || n0 >= n1 {
            return Err(Error::InvalidInput(format!(
                "degenerate rectangle [{m0}, {m1}] x [{n0}, {n1}]"
            )));
        }
        let mut v = Vec::new();
        v.extend((m0..m1).map(|m| LatticePoint::new(m, n0)));
        v.extend((n0..n1).map(|n| LatticePoint::new(m1, n)));
        v.extend((m0 + 1..=m1).rev().map(|m| LatticePoint::new(m, n1)));
        v.extend((n0 + 1..=n1).rev().map(|n| LatticePoint::new(m0, n)));
        v.push(LatticePoint::new(m0, n0));
        DiscreteContour::new(v)
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.len() >= 2 && self.vertices.first() == self.vertices.last()
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        DiscreteContour { vertices }
    }
}

/// Duffin's pairing ∫_Γ F:G = ¼ Σ_k (F(z_k)+F(z_{k+1}))(G(z_k)+G(z_{k+1}))(z_k − z_{k+1}).
///
/// Orientation-sensitive: reversing the contour negates the result.
pub fn contour_integral(
    f: &GridFunction,
    g: &GridFunction,
    gamma: &DiscreteContour,
) -> Result<Complex64> {
    let v = gamma.vertices();
    if v.len() < 2 {
        return Err(Error::DegenerateContour(v.len()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for w in v.windows(2) {
        let (a, b) = (w[0], w[1]);
        let fs = f.get(a)? + f.get(b)?;
        let gs = g.get(a)? + g.get(b)?;
        acc += fs * gs * (a.as_complex() - b.as_complex());
    }
    Ok(acc / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn power_grid(k: i32, window: Window) -> GridFunction {
        GridFunction::from_fn(window, |p| p.as_complex().powi(k)).unwrap()
    }

    fn exp_grid(t: f64, window: Window) -> GridFunction {
        GridFunction::try_from_fn(window, |p| discrete_exponential(t, p)).unwrap()
    }

    #[test]
    fn phi_trivial_values() {
        for t in [-3.0, -1.0, 0.0, 0.3, 1.2, 2.5] {
            assert_eq!(phi(t, 0).unwrap(), c(1.0, 0.0));
        }
        for n in -10..=10 {
            assert!((phi(0.0, n).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn phi_at_quarter_pi_is_sqrt2_minus_1() {
        // cos(π/4)/(1 + sin(π/4)) = √2 − 1
        let expected = 0.414_213_562_373_095_05;
        assert!((phi(PI / 4.0, 1).unwrap().re - expected).abs() < 1e-15);
    }

    #[test]
    fn phi_matches_complex_power_form() {
        for &t in &[-2.9, -1.2, -0.4, 0.1, 0.7, 1.3, 2.2, 3.0] {
            let e = Complex64::from_polar(1.0, t);
            let base = (c(1.0, 0.0) + I * e) / (I + e);
            for n in -6..=6 {
                let direct = base.powi(n as i32);
                let got = phi(t, n).unwrap();
                assert!(
                    (got - direct).norm() <= 1e-12 * direct.norm().max(1.0),
                    "t={t} n={n}"
                );
            }
        }
    }

    #[test]
    fn phi_rejects_poles() {
        assert!(matches!(phi(FRAC_PI_2, 1), Err(Error::Pole { .. })));
        assert!(matches!(
            phi(-FRAC_PI_2 + 1e-10, 1),
            Err(Error::Pole { .. })
        ));
        assert!(matches!(phi(3.0 * FRAC_PI_2, 1), Err(Error::Pole { .. })));
        assert!(phi(FRAC_PI_2 + 1e-8, 1).is_ok());
    }

    #[test]
    fn discrete_exponential_restricts_to_exponential() {
        for m in -5..=5 {
            let got = discrete_exponential(0.7, LatticePoint::new(m, 0)).unwrap();
            let want = Complex64::from_polar(1.0, 0.7 * m as f64);
            assert!((got - want).norm() < 1e-15);
            let one = discrete_exponential(0.0, LatticePoint::new(m, 3)).unwrap();
            assert!((one - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn discrete_exponential_modulus_at_minus_pi_over_six() {
        let v = discrete_exponential(-PI / 6.0, LatticePoint::new(0, 1)).unwrap();
        assert!((v.norm() - 1.732_050_807_568_877_2).abs() < 1e-15);
    }

    #[test]
    fn z_squared_is_entire_z_cubed_is_not() {
        let w = Window::new(-3, 3, -3, 3).unwrap();
        let z2 = power_grid(2, w);
        let r = holomorphicity_residual(&z2, LatticePoint::new(0, 0)).unwrap();
        assert_eq!(r, c(0.0, 0.0));
        assert!(max_holomorphicity_residual(&z2).unwrap() < 1e-12);

        let z3 = power_grid(3, w);
        let r = holomorphicity_residual(&z3, LatticePoint::new(0, 0)).unwrap();
        assert!((r - c(-1.0, 1.0)).norm() < 1e-14);
        assert!(max_holomorphicity_residual(&z3).unwrap() >= 2f64.sqrt() - 1e-12);
    }

    #[test]
    fn sampled_exponential_is_entire() {
        let w = Window::new(-16, 15, -16, 15).unwrap();
        let e = exp_grid(0.3, w);
        assert!(max_holomorphicity_residual(&e).unwrap() <= 1e-12);
        let constant = GridFunction::from_fn(w, |_| c(2.0, -1.0)).unwrap();
        assert_eq!(max_holomorphicity_residual(&constant).unwrap(), 0.0);
    }

    #[test]
    fn residual_outside_window_fails() {
        let w = Window::new(0, 3, 0, 3).unwrap();
        let e = exp_grid(0.3, w);
        assert!(matches!(
            holomorphicity_residual(&e, LatticePoint::new(3, 0)),
            Err(Error::OutOfWindow { .. })
        ));
        let thin = GridFunction::zeros(Window::new(0, 5, 0, 0).unwrap());
        assert!(max_holomorphicity_residual(&thin).is_err());
    }

    // Printed layer formula, summed term by term.
    fn layer_formula(below: &[Complex64], anchor: Complex64, m: usize) -> Complex64 {
        if m == 0 {
            return anchor;
        }
        let mut s = anchor + I * below[0] + I.powi(m as i32 + 1) * below[m];
        for (k, &b) in below.iter().enumerate().take(m).skip(1) {
            s += 2.0 * I * I.powi(k as i32) * b;
        }
        (-I).powi(m as i32) * s
    }

    #[test]
    fn extend_layer_matches_printed_formula() {
        let below: Vec<Complex64> = (0..12)
            .map(|k| c((k as f64).sin(), 0.3 * k as f64))
            .collect();
        let anchor = c(0.5, -1.5);
        let out = extend_layer(&below, anchor).unwrap();
        for m in 0..below.len() {
            let want = layer_formula(&below, anchor, m);
            assert!((out[m] - want).norm() < 1e-12, "m={m}");
        }
    }

    // The three reflected layer formulas as printed, with (sign of i inside, outer power base).
    fn printed_variant(
        below: &[Complex64],
        anchor: Complex64,
        m: usize,
        dir: LayerDirection,
    ) -> Complex64 {
        if m == 0 {
            return anchor;
        }
        let (outer, inner) = match dir {
            LayerDirection::UpLeft | LayerDirection::DownRight => (I, -I),
            _ => (-I, I),
        };
        let mut s = anchor;
        for (k, &b) in below.iter().enumerate().take(m).skip(1) {
            s += 2.0 * inner * inner.powi(k as i32) * b;
        }
        s += inner * below[0] + inner.powi(m as i32 + 1) * below[m];
        outer.powi(m as i32) * s
    }

    #[test]
    fn variants_match_printed_formulas() {
        let below: Vec<Complex64> = (0..10)
            .map(|k| c((0.7 * k as f64).cos(), -0.2 * k as f64))
            .collect();
        let anchor = c(-0.4, 0.9);
        for dir in [
            LayerDirection::UpLeft,
            LayerDirection::DownRight,
            LayerDirection::DownLeft,
        ] {
            let out = extend_layer_towards(&below, anchor, dir).unwrap();
            for m in 0..below.len() {
                let want = printed_variant(&below, anchor, m, dir);
                assert!((out[m] - want).norm() < 1e-12, "{dir:?} m={m}");
            }
        }
    }

    #[test]
    fn extend_layer_small_cases() {
        let k = c(1.5, 2.0);
        let out = extend_layer(&[k; 6], k).unwrap();
        assert!(out.iter().all(|v| (*v - k).norm() < 1e-15));

        let below = [c(1.0, 2.0), c(-0.5, 0.25)];
        let anchor = c(0.3, 0.1);
        let out = extend_layer(&below, anchor).unwrap();
        let want = -I * (anchor + I * below[0] - below[1]);
        assert!((out[1] - want).norm() < 1e-15);

        assert!(matches!(
            extend_layer(&[], anchor),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn extend_layer_reproduces_exponential() {
        let t = 0.4;
        let e = |m: i64, n: i64| discrete_exponential(t, LatticePoint::new(m, n)).unwrap();
        let n = 3;
        let below: Vec<_> = (0..=20).map(|m| e(m, n - 1)).collect();
        let out = extend_layer(&below, e(0, n)).unwrap();
        for (m, v) in out.iter().enumerate() {
            assert!((*v - e(m as i64, n)).norm() < 1e-12);
        }
    }

    #[test]
    fn all_directions_reproduce_exponential_layers() {
        let t = -0.35;
        let e = |m: i64, n: i64| discrete_exponential(t, LatticePoint::new(m, n)).unwrap();
        let cases = [
            (LayerDirection::UpRight, 1i64, -1i64),
            (LayerDirection::UpLeft, -1, -1),
            (LayerDirection::DownRight, 1, 1),
            (LayerDirection::DownLeft, -1, 1),
        ];
        for (dir, sm, dn) in cases {
            for n in -4..=4 {
                let below: Vec<_> = (0..=16).map(|k| e(sm * k, n + dn)).collect();
                let out = extend_layer_towards(&below, e(0, n), dir).unwrap();
                for (k, v) in out.iter().enumerate() {
                    let want = e(sm * k as i64, n);
                    assert!(
                        (*v - want).norm() < 1e-12 * want.norm().max(1.0),
                        "{dir:?} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn rectangle_contour_is_closed_and_unit_step() {
        let g = DiscreteContour::rectangle(0, 0, 5, 5).unwrap();
        assert!(g.is_closed());
        assert_eq!(g.vertices().len(), 21);
        assert!(
            DiscreteContour::new(vec![LatticePoint::new(0, 0), LatticePoint::new(1, 1)]).is_err()
        );
        let open =
            DiscreteContour::new(vec![LatticePoint::new(0, 0), LatticePoint::new(1, 0)]).unwrap();
        assert!(!open.is_closed());
    }

    #[test]
    fn contour_integral_trivial_cases() {
        let w = Window::new(-1, 6, -1, 6).unwrap();
        let gamma = DiscreteContour::rectangle(0, 0, 5, 5).unwrap();
        let zero = GridFunction::zeros(w);
        let z2 = power_grid(2, w);
        assert_eq!(contour_integral(&zero, &z2, &gamma).unwrap(), c(0.0, 0.0));
        let one = GridFunction::from_fn(w, |_| c(1.0, 0.0)).unwrap();
        assert!(contour_integral(&one, &one, &gamma).unwrap().norm() < 1e-14);
        let degenerate = DiscreteContour::new(vec![LatticePoint::new(0, 0)]).unwrap();
        assert!(matches!(
            contour_integral(&one, &one, &degenerate),
            Err(Error::DegenerateContour(1))
        ));
    }

    #[test]
    fn contour_integral_of_entire_pair_vanishes_on_closed_square() {
        let w = Window::new(0, 5, 0, 5).unwrap();
        let gamma = DiscreteContour::rectangle(0, 0, 5, 5).unwrap();
        let f = exp_grid(0.3, w);
        let g = power_grid(2, w);
        assert!(contour_integral(&f, &g, &gamma).unwrap().norm() < 1e-10);
    }

    #[test]
    fn contour_orientation_negates() {
        let w = Window::new(0, 4, 0, 4).unwrap();
        let f = exp_grid(0.3, w);
        let g = power_grid(3, w);
        let path = DiscreteContour::new(vec![
            LatticePoint::new(0, 0),
            LatticePoint::new(1, 0),
            LatticePoint::new(1, 1),
            LatticePoint::new(2, 1),
        ])
        .unwrap();
        let a = contour_integral(&f, &g, &path).unwrap();
        let b = contour_integral(&f, &g, &path.reversed()).unwrap();
        assert!((a + b).norm() < 1e-14);
        assert!(a.norm() > 1e-3);
    }

    #[test]
    fn grid_json_layout_rows_are_heights() {
        let w = Window::new(0, 1, 0, 1).unwrap();
        let g = GridFunction::from_fn(w, |p| c(p.m as f64, p.n as f64)).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(
            s,
            r#"{"window":[0,1,0,1],"values":[[0.0,0.0],[1.0,0.0],[0.0,1.0],[1.0,1.0]]}"#
        );
        let back: GridFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"window":[0,1,0,1],"values":[[0.0,0.0]]}"#;
        assert!(serde_json::from_str::<GridFunction>(bad).is_err());
        let contour: DiscreteContour = serde_json::from_str("[[0,0],[1,0],[1,1]]").unwrap();
        assert_eq!(contour.vertices().len(), 3);
        assert!(serde_json::from_str::<DiscreteContour>("[[0,0],[2,0]]").is_err());
    }
}
