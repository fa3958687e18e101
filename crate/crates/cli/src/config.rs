//! Experiment configuration: defaults, JSON file, command-line overrides.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use discrete_pw::band::growth_base;
use discrete_pw::testfns::Bump;
use discrete_pw::{BandParameters, Window};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Largest tolerated growth_base(α)^{max|n|}; beyond it the upper layers
/// carry no significant digits and α is treated as sitting on the pole.
pub const MAX_LAYER_GROWTH: f64 = 1e10;

/// Heights used when no window is given.
pub const DEFAULT_HEIGHT: i64 = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment name, echoed in every report and error.
    pub name: String,
    pub alpha: f64,
    #[serde(rename = "L")]
    pub l: usize,
    /// [m_min, m_max, n_min, n_max]; defaults to one full period with |n| ≤ 8.
    pub window: Option<Window>,
    pub f_spec: FSpec,
    pub lambda_spec: LambdaSpec,
    pub tol: f64,
    pub max_iter: usize,
    /// Seed for random bumps and noise (0 when absent) and fallback seed for Λ.
    pub seed: Option<u64>,
    /// Report and table names to emit; empty means all.
    pub outputs: Vec<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            name: "experiment".into(),
            alpha: PI / 8.0,
            l: 512,
            window: None,
            f_spec: FSpec::default(),
            lambda_spec: LambdaSpec::default(),
            tol: 1e-9,
            max_iter: 200,
            seed: None,
            outputs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FSpec {
    /// Explicit bumps, a random draw from the ensemble (`random`), or the
    /// centred bump filling the low band when both are absent.
    Bump {
        #[serde(default)]
        bumps: Vec<Bump>,
        #[serde(default)]
        random: bool,
    },
    Indicator,
    SingleFrequency {
        index: usize,
        #[serde(default = "unit")]
        amplitude: Complex64,
    },
    CustomGrid {
        values: Vec<Complex64>,
    },
}

fn unit() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl Default for FSpec {
    fn default() -> Self {
        FSpec::Bump {
            bumps: Vec::new(),
            random: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LambdaSpec {
    Full,
    TwoProgression {
        delta_e: i64,
        delta_o: i64,
    },
    RandomGaps {
        delta_e: i64,
        delta_o: i64,
        #[serde(default)]
        seed: Option<u64>,
    },
    Explicit {
        points: Vec<i64>,
    },
}

impl Default for LambdaSpec {
    fn default() -> Self {
        LambdaSpec::TwoProgression {
            delta_e: 4,
            delta_o: 4,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub name: Option<String>,
    pub alpha: Option<f64>,
    pub l: Option<usize>,
    pub window: Option<Window>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub f_spec: Option<FSpec>,
    pub lambda_spec: Option<LambdaSpec>,
    /// Gap overrides; turn a `full` or `explicit` Λ into a two-progression.
    pub delta_e: Option<i64>,
    pub delta_o: Option<i64>,
    pub outputs: Option<Vec<String>>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config {
            experiment: "config".into(),
            field: field_from_serde(&e),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Defaults, then the file (if any), then the overrides.
    pub fn resolve(path: Option<&Path>, o: Overrides) -> Result<Self, CliError> {
        let mut c = match path {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        c.apply(o);
        c.validate()?;
        Ok(c)
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(v) = o.name {
            self.name = v;
        }
        if let Some(v) = o.alpha {
            self.alpha = v;
        }
        if let Some(v) = o.l {
            self.l = v;
        }
        if let Some(v) = o.window {
            self.window = Some(v);
        }
        if let Some(v) = o.tol {
            self.tol = v;
        }
        if let Some(v) = o.max_iter {
            self.max_iter = v;
        }
        if let Some(v) = o.f_spec {
            self.f_spec = v;
        }
        if let Some(v) = o.lambda_spec {
            self.lambda_spec = v;
        }
        if o.delta_e.is_some() || o.delta_o.is_some() {
            if matches!(
                self.lambda_spec,
                LambdaSpec::Full | LambdaSpec::Explicit { .. }
            ) {
                self.lambda_spec = LambdaSpec::default();
            }
            if let LambdaSpec::TwoProgression { delta_e, delta_o }
            | LambdaSpec::RandomGaps {
                delta_e, delta_o, ..
            } = &mut self.lambda_spec
            {
                *delta_e = o.delta_e.unwrap_or(*delta_e);
                *delta_o = o.delta_o.unwrap_or(*delta_o);
            }
        }
        if let Some(v) = o.outputs {
            self.outputs = v;
        }
        if let Some(seed) = o.seed {
            self.seed = Some(seed);
            if let LambdaSpec::RandomGaps { seed: s, .. } = &mut self.lambda_spec {
                *s = Some(seed);
            }
        }
    }

    fn config_error(&self, field: &str, message: impl Into<String>) -> CliError {
        CliError::Config {
            experiment: self.name.clone(),
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn band(&self) -> Result<BandParameters, CliError> {
        BandParameters::new(self.alpha).map_err(|e| self.config_error("alpha", e.to_string()))
    }

    pub fn resolved_window(&self) -> Result<Window, CliError> {
        match self.window {
            Some(w) => Ok(w),
            None => Window::period(self.l, -DEFAULT_HEIGHT, DEFAULT_HEIGHT)
                .map_err(|e| self.config_error("window", e.to_string())),
        }
    }

    /// Seed for Λ when it is drawn at random.
    pub fn lambda_seed(&self) -> Option<u64> {
        match &self.lambda_spec {
            LambdaSpec::RandomGaps { seed, .. } => seed.or(self.seed),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.alpha.is_finite() && self.alpha > 0.0 && self.alpha < FRAC_PI_2) {
            return Err(self.config_error("alpha", format!("{} must lie in (0, π/2)", self.alpha)));
        }
        if self.l < 8 || !self.l.is_multiple_of(2) {
            return Err(self.config_error("L", format!("{} must be even and at least 8", self.l)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(self.config_error("tol", format!("{} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(self.config_error("max_iter", "must be at least 1"));
        }
        let window = self.resolved_window()?;
        let height = window.n_min.abs().max(window.n_max.abs());
        let growth = growth_base(self.alpha).powi(height as i32);
        if growth.is_nan() || growth > MAX_LAYER_GROWTH {
            return Err(CliError::Pole {
                experiment: self.name.clone(),
                field: "alpha".into(),
                alpha: self.alpha,
                distance: FRAC_PI_2 - self.alpha,
                height,
                growth,
            });
        }
        match &self.f_spec {
            FSpec::SingleFrequency { index, .. } if *index >= self.l => {
                return Err(self.config_error(
                    "f_spec.index",
                    format!("{index} out of range for L = {}", self.l),
                ));
            }
            FSpec::CustomGrid { values } if values.len() != self.l => {
                return Err(self.config_error(
                    "f_spec.values",
                    format!("expected L = {} values, got {}", self.l, values.len()),
                ));
            }
            _ => {}
        }
        match &self.lambda_spec {
            LambdaSpec::TwoProgression { delta_e, delta_o }
            | LambdaSpec::RandomGaps {
                delta_e, delta_o, ..
            } => {
                for (field, d) in [
                    ("lambda_spec.delta_e", delta_e),
                    ("lambda_spec.delta_o", delta_o),
                ] {
                    if *d < 2 || d % 2 != 0 {
                        return Err(
                            self.config_error(field, format!("{d} must be even and at least 2"))
                        );
                    }
                }
                if matches!(self.lambda_spec, LambdaSpec::RandomGaps { .. })
                    && self.lambda_seed().is_none()
                {
                    return Err(self.config_error("lambda_spec.seed", "random_gaps needs a seed"));
                }
            }
            LambdaSpec::Explicit { points } if points.is_empty() => {
                return Err(self.config_error("lambda_spec.points", "no sampling points"));
            }
            _ => {}
        }
        Ok(())
    }
}

/// Best-effort field name from a serde error message ("unknown field `x`", "missing field `x`").
fn field_from_serde(e: &serde_json::Error) -> String {
    let msg = e.to_string();
    msg.split('`')
        .nth(1)
        .map(str::to_owned)
        .unwrap_or_else(|| format!("line {} column {}", e.line(), e.column()))
}
