//! Numerical checks of the growth, anchor and decimation identities for PW_α.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{l2, PWFunction};
use crate::band::growth_base;
use crate::error::{Error, Parity, Result};
use crate::fft;
use crate::lattice::LatticePoint;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Generic inequality report: ok iff lhs ≤ bound · (1 + tolerance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub lhs: f64,
    pub bound: f64,
    pub ok: bool,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, lhs: f64, bound: f64, tolerance: f64) -> Self {
        CheckReport {
            name: name.into(),
            lhs,
            bound,
            ok: lhs <= bound * (1.0 + tolerance),
            tolerance,
        }
    }
}

/// Σ_m |F(m,n)|² against growth_base^{2|n|} · ‖F‖².
pub fn plancherel_polya_check(f: &PWFunction, n: i64) -> Result<CheckReport> {
    let layer = f.grid().layer(n)?;
    let lhs: f64 = layer.iter().map(|v| v.norm_sqr()).sum();
    let gb = f.band().growth_base();
    let bound = gb.powi(2 * n.unsigned_abs() as i32) * f.layer0_norm().powi(2);
    Ok(CheckReport::new("plancherel_polya", lhs, bound, 1e-8))
}

/// Smallest c with |F(m,n)| ≤ c (1+|m|)^{−k} growth_base(α+ε)^{|n|} on the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub k: u32,
    pub eps: f64,
    pub c: f64,
    /// The same fit restricted to |m| ≤ half the window radius.
    pub c_inner: f64,
    pub ok: bool,
}

impl EnvelopeFit {
    /// Whether the fitted constant is attained well inside the window.
    pub fn is_stable(&self) -> bool {
        self.c <= self.c_inner
    }
}

pub fn growth_envelope_check(f: &PWFunction, k: u32, eps: f64) -> Result<EnvelopeFit> {
    let a = f.band().alpha() + eps;
    if eps.is_nan() || eps <= 0.0 || a >= FRAC_PI_2 {
        return Err(Error::BadEpsilon(a));
    }
    let gb = growth_base(a);
    let w = f.window();
    let radius = w.m_min.unsigned_abs().max(w.m_max.unsigned_abs());
    let (mut c, mut c_inner) = (0.0f64, 0.0f64);
    for n in w.ns() {
        let layer = f.grid().layer(n)?;
        let scale = gb.powi(-(n.unsigned_abs() as i32));
        for (m, v) in w.ms().zip(layer) {
            let weight = (1.0 + m.unsigned_abs() as f64).powi(k as i32);
            let r = v.norm() * weight * scale;
            c = c.max(r);
            if 2 * m.unsigned_abs() <= radius {
                c_inner = c_inner.max(r);
            }
        }
    }
    Ok(EnvelopeFit {
        k,
        eps,
        c,
        c_inner,
        ok: c.is_finite(),
    })
}

/// F(0,n) against −iF(0,n−1) − 2i Σ_{k≥1} i^k F(k,n−1), summed over the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorCheck {
    pub n: i64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub difference: f64,
    /// Bound on the dropped terms k > m_max from the k = 4 envelope, plus rounding.
    pub tail_estimate: f64,
    pub ok: bool,
}

pub fn anchor_identity_check(f: &PWFunction, n: i64) -> Result<AnchorCheck> {
    if n < 1 {
        return Err(Error::InvalidInput(format!(
            "anchor identity needs n >= 1, got {n}"
        )));
    }
    let w = f.window();
    if w.m_min > 0 || w.m_max < 1 {
        return Err(w.out_of_window(LatticePoint::new(0, n)));
    }
    let lhs = f.get(LatticePoint::new(0, n))?;
    f.get(LatticePoint::new(0, n - 1))?;

    let eps = 0.5 * (FRAC_PI_2 - f.band().alpha());
    let fit = growth_envelope_check(f, 4, eps)?;
    if !fit.is_stable() {
        return Err(Error::SlowDecay);
    }

    let below = f.grid().layer(n - 1)?;
    let offset = (-w.m_min) as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    let mut ik = Complex64::new(1.0, 0.0);
    for v in &below[offset + 1..] {
        ik *= I;
        sum += ik * v;
        magnitude += v.norm();
    }
    let rhs = -I * below[offset] - 2.0 * I * sum;

    let gb = growth_base(f.band().alpha() + eps);
    let edge = 1.0 + w.m_max as f64;
    let tail = 2.0 * fit.c * gb.powi((n - 1).unsigned_abs() as i32) / (3.0 * edge.powi(3));
    let rounding = 64.0 * f64::EPSILON * (2.0 * magnitude + below[offset].norm() + lhs.norm());
    let difference = (lhs - rhs).norm();
    let tail_estimate = tail + rounding;
    Ok(AnchorCheck {
        n,
        lhs,
        rhs,
        difference,
        tail_estimate,
        ok: difference <= tail_estimate,
    })
}

/// Spectrum of m ↦ F(2m, 0) or F(2m+1, 0) measured against the band |t| ≤ 2α.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecimationReport {
    pub parity: Parity,
    pub out_of_band_mass: f64,
    pub total_mass: f64,
    /// ω_α = 2 sin² α.
    pub omega_alpha: f64,
    /// |2 arcsin √(ω_α/2) − 2α|.
    pub band_identity_error: f64,
}

impl DecimationReport {
    pub fn relative_leakage(&self) -> f64 {
        if self.total_mass == 0.0 {
            0.0
        } else {
            self.out_of_band_mass / self.total_mass
        }
    }
}

pub fn decimate_check(f: &PWFunction, parity: Parity) -> Result<DecimationReport> {
    let w = f.window();
    if w.width() < 32 {
        return Err(Error::InvalidInput(format!(
            "decimation needs window width >= 32, got {}",
            w.width()
        )));
    }
    let alpha = f.band().alpha();
    let omega = 2.0 * alpha.sin().powi(2);
    let band_identity_error = (2.0 * (omega / 2.0).sqrt().asin() - 2.0 * alpha).abs();

    let layer = f.layer0();
    let mut start = None;
    let mut seq = Vec::new();
    for (m, v) in w.ms().zip(layer) {
        if Parity::of(m) == parity {
            start.get_or_insert(m.div_euclid(2));
            seq.push(*v);
        }
    }
    let size = (8 * seq.len()).next_power_of_two().max(64);
    let spectrum = fft::series_on_grid(&seq, start.unwrap_or(0), size);
    let (mut out, mut total) = (0.0, 0.0);
    for (j, v) in spectrum.iter().enumerate() {
        let t = -PI + 2.0 * PI * j as f64 / size as f64;
        let e = v.norm_sqr();
        total += e;
        if t.abs() > 2.0 * alpha + 1e-12 {
            out += e;
        }
    }
    Ok(DecimationReport {
        parity,
        out_of_band_mass: out,
        total_mass: total,
        omega_alpha: omega,
        band_identity_error,
    })
}

/// ‖F(·,0)‖ over the window, for callers that only need the norm of a layer.
pub fn layer_norm(f: &PWFunction, n: i64) -> Result<f64> {
    Ok(l2(f.grid().layer(n)?))
}
