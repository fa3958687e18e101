//! Composite Gauss–Legendre rule on the two arcs of D_α.
//!
//! Used where a band integral must be accurate for an oscillatory integrand
//! (kernel values, zero-padded projection). The uniform grid rule is kept for
//! synthesis and analysis.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;

use crate::band::BandParameters;

const POINTS_PER_PANEL: usize = 16;
/// Target phase swing e^{iωt} across one panel, in radians.
const PANEL_PHASE: f64 = 4.0;

/// Nodes t_i and weights w_i with Σ w_i g(t_i) ≈ (1/2π) ∫_{D_α} g(t) dt.
#[derive(Debug, Clone)]
pub struct BandQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl BandQuadrature {
    /// Rule resolving integrands up to angular frequency `max_freq`, with at
    /// least `min_panels` panels per arc.
    pub fn new(band: &BandParameters, max_freq: f64, min_panels: usize) -> Self {
        let alpha = band.alpha();
        let span = 2.0 * alpha;
        let panels = ((span * max_freq.abs() / PANEL_PHASE).ceil() as usize).max(min_panels.max(1));
        let rule = GaussLegendre::new(POINTS_PER_PANEL).expect("degree 16 is valid");
        let pairs = rule.as_node_weight_pairs();

        let h = span / panels as f64;
        let mut nodes = Vec::with_capacity(2 * panels * POINTS_PER_PANEL);
        let mut weights = Vec::with_capacity(nodes.capacity());
        // the π-band is the arc [π − α, π + α] read on the torus
        for start in [-alpha, PI - alpha] {
            for p in 0..panels {
                let mid = start + (p as f64 + 0.5) * h;
                for &(x, w) in pairs {
                    nodes.push(mid + 0.5 * h * x);
                    weights.push(0.5 * h * w / (2.0 * PI));
                }
            }
        }
        BandQuadrature { nodes, weights }
    }

    /// Node budget tied to a torus grid of size L (one panel per 1024 grid points).
    pub fn for_grid(band: &BandParameters, max_freq: f64, l: usize) -> Self {
        BandQuadrature::new(band, max_freq, l.div_ceil(1024))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}
