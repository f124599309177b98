//! Serializable closed-loop documents. A loop file pins a geometry, the
//! parameter space it lives in, and optionally the coefficient its Berry
//! phase is expected to quantize to.

use serde::{Deserialize, Serialize};
use vortexel::ClosedPath;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Which parameter space the loop coordinates refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// 2x2 model, coordinates (beta, gamma, alpha).
    Pauli,
    /// Lattice model, coordinates (lambda, Delta, delta).
    Rm,
}

impl Space {
    pub fn as_str(&self) -> &'static str {
        match self {
            Space::Pauli => "pauli",
            Space::Rm => "rm",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Circle {
        center: [f64; 3],
        normal: [f64; 3],
        radius: f64,
        samples: usize,
        orientation: i8,
    },
    Polyline {
        vertices: Vec<[f64; 3]>,
        samples: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoopSpec {
    pub schema_version: u32,
    pub space: Space,
    #[serde(flatten)]
    pub geometry: Geometry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_coefficient: Option<i64>,
}

impl LoopSpec {
    pub fn kind(&self) -> &'static str {
        match self.geometry {
            Geometry::Circle { .. } => "circle",
            Geometry::Polyline { .. } => "polyline",
        }
    }

    pub fn samples(&self) -> usize {
        match self.geometry {
            Geometry::Circle { samples, .. } => samples,
            Geometry::Polyline { samples, .. } => samples,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::invalid(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match &self.geometry {
            Geometry::Circle {
                center,
                normal,
                radius,
                samples,
                orientation,
            } => {
                if !center.iter().chain(normal.iter()).all(|v| v.is_finite())
                    || !radius.is_finite()
                {
                    return Err(CliError::invalid("circle fields must be finite"));
                }
                if *radius <= 0.0 {
                    return Err(CliError::invalid("circle radius must be positive"));
                }
                let n2: f64 = normal.iter().map(|v| v * v).sum();
                if n2 <= 0.0 {
                    return Err(CliError::invalid("circle normal must be nonzero"));
                }
                if *samples < 64 {
                    return Err(CliError::invalid("circle loops need at least 64 samples"));
                }
                if orientation.abs() != 1 {
                    return Err(CliError::invalid("orientation must be +1 or -1"));
                }
            }
            Geometry::Polyline { vertices, samples } => {
                if vertices.len() < 4 {
                    return Err(CliError::invalid(
                        "a closed polyline needs at least 4 vertices",
                    ));
                }
                if !vertices.iter().flatten().all(|v| v.is_finite()) {
                    return Err(CliError::invalid("polyline vertices must be finite"));
                }
                if vertices.first() != vertices.last() {
                    return Err(CliError::invalid(
                        "polyline must be closed (first vertex equal to last)",
                    ));
                }
                if *samples < 64 {
                    return Err(CliError::invalid("polyline loops need at least 64 samples"));
                }
            }
        }
        Ok(())
    }

    /// Discretize the geometry, optionally overriding the stored sample
    /// count (used for convergence checks at doubled resolution).
    pub fn build_path(&self, samples_override: Option<usize>) -> Result<ClosedPath, CliError> {
        self.validate()?;
        match &self.geometry {
            Geometry::Circle {
                center,
                normal,
                radius,
                samples,
                orientation,
            } => Ok(ClosedPath::circle(
                *center,
                *normal,
                *radius,
                samples_override.unwrap_or(*samples),
                *orientation,
            )?),
            Geometry::Polyline { vertices, samples } => Ok(ClosedPath::polyline(
                vertices,
                samples_override.unwrap_or(*samples),
            )?),
        }
    }
}

pub const BUNDLED_NAMES: [&str; 6] = ["fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f"];

/// Loop documents shipped with the binary, one per quantized coefficient
/// in {0, -1, 0, +1, -2, +2}.
pub fn bundled(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig4a" => include_str!("../loops/fig4a.json"),
        "fig4b" => include_str!("../loops/fig4b.json"),
        "fig4c" => include_str!("../loops/fig4c.json"),
        "fig4d" => include_str!("../loops/fig4d.json"),
        "fig4e" => include_str!("../loops/fig4e.json"),
        "fig4f" => include_str!("../loops/fig4f.json"),
        _ => return None,
    })
}

pub fn parse(text: &str) -> Result<LoopSpec, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::invalid(format!("invalid loop document: {e}")))
}

/// Resolve `arg` as a bundled loop name first, then as a file path.
pub fn load(arg: &str) -> Result<LoopSpec, CliError> {
    match bundled(arg) {
        Some(text) => parse(text),
        None => {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| CliError::invalid(format!("cannot read loop file {arg}: {e}")))?;
            parse(&text)
        }
    }
}
