//! Biorthogonal Berry phases for finite non-Hermitian two-band models.
//!
//! The crate computes exact biorthogonal eigensystems of 2x2 non-Hermitian
//! Hamiltonians, Berry connections over three-dimensional parameter
//! spaces (closed-form, finite-difference, and Wilson-loop discretizations),
//! and closed-loop Berry phases, and verifies that the exceptional lines of
//! these models act as classical vortex filaments: every admissible loop
//! acquires a phase quantized in integer multiples of pi/2 fixed by its
//! signed winding numbers around the filaments.
//!
//! Two parameter spaces are covered: the bare two-band model over
//! (beta, gamma, alpha) and the ground state of a finite non-Hermitian
//! Rice-Mele chain over (lambda, Delta, delta).

pub mod berry;
pub mod error;
pub mod path;
pub mod pauli;
pub mod rice_mele;
pub mod sampling;
pub mod vortex;

pub use berry::{
    berry_phase_line_integral, berry_phase_wilson, connection_analytic, connection_numeric,
    connection_numeric_o4, quantize, ConnectionField, ConnectionVector, EigenpairField,
    PauliSpace, Quantized, RotatedPauliSpace, WilsonResult,
};
pub use error::{Error, Result};
pub use path::{transverse_frame, ClosedPath};
pub use pauli::{
    biorth_pair, branch_sqrt, eigenvalues, el_distance, inner, is_exceptional, spin_rotate,
    spin_rotation_operator, Band, BiorthPair, ComplexEigenvalue, PauliParams, PauliVector3,
};
pub use rice_mele::{
    a0_closed, api_closed, boundary_filaments, canonical_coeffs, chiral_obstruction,
    connection_k, el_curves, el_distance_rm, ground_energy, k_grid, real_spectrum_check,
    rm_berry_phase, spectrum_k, total_connection, CanonicalCoeffs, CurveKind, ELCurve, ElPoint,
    ModeK, RmLoopReport, RmParams, RmSpace,
};
pub use vortex::{
    combined_vortex, curl_fields, gauge_residual_loop, pauli_filaments, predicted_phase,
    winding_number, winding_numbers, Filament, FilamentLabel, VortexFieldValue,
};
