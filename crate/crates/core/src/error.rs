use thiserror::Error;

/// Failure modes shared by every module in this crate.
///
/// The variant names follow the error vocabulary of the public interface:
/// `EP_*` variants signal eigenvalue coalescence or dangerous proximity to an
/// exceptional line, the remaining variants are plain input validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Eigenvectors coalesce: `|eps|` fell below tolerance where a
    /// biorthogonal pair was requested.
    #[error("EP_DEGENERATE: |eps| = {eps_abs:.3e} is below tolerance; the eigenvectors coalesce")]
    EpDegenerate { eps_abs: f64 },

    /// A connection or canonical coefficient has a pole here.
    #[error("EP_DIVERGENT: |eps| = {eps_abs:.3e} is below tolerance; the expression diverges")]
    EpDivergent { eps_abs: f64 },

    /// A sample sits closer to an exceptional line than the accuracy
    /// contract allows.
    #[error(
        "EP_PROXIMITY: sample {index} is {distance:.3e} from an exceptional line, needs {required:.3e}"
    )]
    EpProximity {
        index: usize,
        distance: f64,
        required: f64,
    },

    /// A point or path touches a vortex filament.
    #[error("ON_FILAMENT: squared filament distance {min_d:.3e} is below tolerance")]
    OnFilament { min_d: f64 },

    /// Rotation axis is not normalized.
    #[error("BAD_AXIS: |axis| deviates from 1 by {deviation:.3e}")]
    BadAxis { deviation: f64 },

    /// Band continuity could not be maintained along a Wilson loop.
    #[error("TRACKING_LOST: at step {step} the best overlap magnitude {overlap:.3e} fell below 0.1")]
    TrackingLost { step: usize, overlap: f64 },

    /// A phase failed to land on the pi/2 lattice within tolerance.
    #[error("NOT_QUANTIZED: nearest coefficient {coefficient}, residual {residual:.3e}")]
    NotQuantized { coefficient: i64, residual: f64 },

    /// Lattice sizes must be even so that k = pi sits on the grid.
    #[error("ODD_N: n_cells = {n} is not an even integer >= 2")]
    OddN { n: usize },

    /// The core matrix vanishes identically (diagonalizable zero, not an EP).
    #[error("DEGENERATE: the core matrix is zero here; this is a degeneracy, not an EP")]
    Degenerate,

    #[error("INVALID_PATH: {reason}")]
    InvalidPath { reason: String },

    #[error("INVALID_INPUT: {reason}")]
    InvalidInput { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
