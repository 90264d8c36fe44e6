//! Named numerical tolerances.
//!
//! Every threshold used by the verifications lives here so that the command
//! line can override it by name (`--tol.<name>=<value>`).

use serde::{Deserialize, Serialize};

/// Tolerance set shared by all modules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Unit-length check on simple 2-vectors.
    pub unit: f64,
    /// Plücker residual for simple 2-vectors.
    pub plucker: f64,
    /// Step-norm convergence threshold of the comass optimizer.
    pub optimizer_step: f64,
    /// Slack on the sign-sum bound (maximum must not exceed `3 + bound`).
    pub bound: f64,
    /// Agreement between the closed-form comass and the optimizer.
    pub comass_oracle: f64,
    /// Agreement between the pointwise plane supremum and the sign enumeration.
    pub pointwise: f64,
    /// Jacobian identity residual.
    pub jacobian: f64,
    /// Floating slack on exact areas.
    pub area: f64,
    /// Relative discretisation slack on the union-area lower bound.
    pub disc: f64,
    /// Relative tolerance of the product measure identity.
    pub product_identity: f64,
    /// Geometric incidence tolerance (points on faces, centers off sets).
    pub geometric: f64,
    /// Singular-value rank threshold.
    pub rank: f64,
    /// Frame-equation roots and residuals.
    pub frame: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unit: 1e-10,
            plucker: 1e-10,
            optimizer_step: 1e-12,
            bound: 1e-9,
            comass_oracle: 1e-6,
            pointwise: 1e-4,
            jacobian: 1e-9,
            area: 1e-12,
            disc: 0.05,
            product_identity: 0.02,
            geometric: 1e-9,
            rank: 1e-9,
            frame: 1e-10,
        }
    }
}

/// Error raised when a tolerance override is malformed.
#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ToleranceError {
    #[error("unknown tolerance `{0}`")]
    Unknown(String),
    #[error("tolerance `{name}` must be positive and finite, got {value}")]
    NonPositive { name: String, value: f64 },
}

impl Tolerances {
    /// Names accepted by [`Tolerances::set`].
    pub const NAMES: [&'static str; 13] = [
        "unit",
        "plucker",
        "optimizer_step",
        "bound",
        "comass_oracle",
        "pointwise",
        "jacobian",
        "area",
        "disc",
        "product_identity",
        "geometric",
        "rank",
        "frame",
    ];

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ToleranceError> {
        if !(value.is_finite() && value > 0.0) {
            return Err(ToleranceError::NonPositive {
                name: name.to_string(),
                value,
            });
        }
        let slot = match name {
            "unit" => &mut self.unit,
            "plucker" => &mut self.plucker,
            "optimizer_step" => &mut self.optimizer_step,
            "bound" => &mut self.bound,
            "comass_oracle" => &mut self.comass_oracle,
            "pointwise" => &mut self.pointwise,
            "jacobian" => &mut self.jacobian,
            "area" => &mut self.area,
            "disc" => &mut self.disc,
            "product_identity" => &mut self.product_identity,
            "geometric" => &mut self.geometric,
            "rank" => &mut self.rank,
            "frame" => &mut self.frame,
            other => return Err(ToleranceError::Unknown(other.to_string())),
        };
        *slot = value;
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "unit" => self.unit,
            "plucker" => self.plucker,
            "optimizer_step" => self.optimizer_step,
            "bound" => self.bound,
            "comass_oracle" => self.comass_oracle,
            "pointwise" => self.pointwise,
            "jacobian" => self.jacobian,
            "area" => self.area,
            "disc" => self.disc,
            "product_identity" => self.product_identity,
            "geometric" => self.geometric,
            "rank" => self.rank,
            "frame" => self.frame,
            _ => return None,
        })
    }
}
