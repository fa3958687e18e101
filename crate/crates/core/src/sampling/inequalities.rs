//! Bernstein and discrete Wirtinger inequalities.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::checks::CheckReport;
use crate::spectral::PWFunction;

/// ‖∇₂^order F‖ against (2 sin α)^order ‖F‖ at height 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernsteinReport {
    pub order: u32,
    /// ‖∇₂^order F‖ over the m with m + 2·order inside the window.
    pub lhs: f64,
    /// ‖F‖ over the same m.
    pub norm: f64,
    pub ratio: f64,
    pub bound: f64,
    pub ok: bool,
}

/// ∇₂F(m) = F(m) − F(m+2) for order 1, ∇₂²F(m) = F(m+4) − 2F(m+2) + F(m) for order 2.
pub fn bernstein_check(f: &PWFunction, order: u32) -> Result<BernsteinReport> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidInput(format!(
            "Bernstein order must be 1 or 2, got {order}"
        )));
    }
    let layer = f.layer0();
    let reach = 2 * order as usize;
    if layer.len() <= reach {
        let w = f.window();
        return Err(w.out_of_window(crate::lattice::LatticePoint::new(w.m_min + reach as i64, 0)));
    }
    let count = layer.len() - reach;
    let (mut diff, mut norm) = (0.0, 0.0);
    for m in 0..count {
        let d: Complex64 = if order == 1 {
            layer[m] - layer[m + 2]
        } else {
            layer[m + 4] - 2.0 * layer[m + 2] + layer[m]
        };
        diff += d.norm_sqr();
        norm += layer[m].norm_sqr();
    }
    let (lhs, norm) = (diff.sqrt(), norm.sqrt());
    let factor = (2.0 * f.band().alpha().sin()).powi(order as i32);
    let bound = factor * norm;
    Ok(BernsteinReport {
        order,
        lhs,
        norm,
        ratio: if norm == 0.0 { 0.0 } else { lhs / norm },
        bound,
        ok: lhs <= bound * (1.0 + 1e-8),
    })
}

/// Σ_{ℓ=0}^{N} |s(ℓ)|² ≤ Σ_{ℓ=0}^{N−2} |∇₁²s(ℓ)|² / (16 sin⁴(π/2N)) for s(0) = s(N) = 0.
pub fn wirtinger_check(s: &[Complex64]) -> Result<CheckReport> {
    if s.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "Wirtinger check needs N >= 2, got {} values",
            s.len()
        )));
    }
    let n = s.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    if s[0] != zero || s[n] != zero {
        return Err(Error::BadEndpoints {
            first: s[0].to_string(),
            last: s[n].to_string(),
        });
    }
    let lhs: f64 = s.iter().map(|v| v.norm_sqr()).sum();
    let second: f64 = s
        .windows(3)
        .map(|w| (w[2] - 2.0 * w[1] + w[0]).norm_sqr())
        .sum();
    let bound = second / (16.0 * (PI / (2.0 * n as f64)).sin().powi(4));
    Ok(CheckReport::new("wirtinger", lhs, bound, 1e-12))
}
