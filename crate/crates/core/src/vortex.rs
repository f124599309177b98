//! Classical vortex-filament picture of the exceptional lines: real vector
//! fields with the circulation of ideal vortices, signed winding numbers of
//! loops around each filament, and the resulting phase predictor.

use num_complex::Complex64 as C64;

use crate::berry::{berry_phase_line_integral, connection_analytic, ConnectionField, ConnectionVector, EL_MARGIN_STEPS};
use crate::error::{Error, Result};
use crate::path::{transverse_frame, ClosedPath};
use crate::pauli::{self, PauliParams};

/// Filament labels across both models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilamentLabel {
    /// gamma = +alpha, beta = 0 (2x2 model).
    GammaPlusAlpha,
    /// gamma = -alpha, beta = 0 (2x2 model).
    GammaMinusAlpha,
    /// Delta = +J0, lambda = 0 (lattice boundary mode k = 2 pi).
    BigDeltaPlusJ0,
    /// Delta = -J0, lambda = 0 (lattice boundary mode k = 2 pi).
    BigDeltaMinusJ0,
    /// Delta = +delta, lambda = 0 (lattice boundary mode k = pi).
    BigDeltaPlusDelta,
    /// Delta = -delta, lambda = 0 (lattice boundary mode k = pi).
    BigDeltaMinusDelta,
}

impl FilamentLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            FilamentLabel::GammaPlusAlpha => "gamma=+alpha",
            FilamentLabel::GammaMinusAlpha => "gamma=-alpha",
            FilamentLabel::BigDeltaPlusJ0 => "Delta=+J0",
            FilamentLabel::BigDeltaMinusJ0 => "Delta=-J0",
            FilamentLabel::BigDeltaPlusDelta => "Delta=+delta",
            FilamentLabel::BigDeltaMinusDelta => "Delta=-delta",
        }
    }
}

/// A straight exceptional line treated as a vortex filament.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Filament {
    /// A point on the line.
    pub anchor: [f64; 3],
    /// Unit direction fixing the positive circulation sense by the
    /// right-hand rule.
    pub direction: [f64; 3],
    /// +1 for the plus family, -1 for the minus family: the sign its
    /// winding enters the phase predictor with.
    pub sign: i32,
    pub label: FilamentLabel,
}

/// The two exceptional lines of the 2x2 model in (beta, gamma, alpha)
/// coordinates. Orientations put positive circulation on counterclockwise
/// loops in the (beta, gamma) plane at alpha > 0.
pub fn pauli_filaments() -> [Filament; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        Filament {
            anchor: [0.0, 0.0, 0.0],
            direction: [0.0, s, s],
            sign: 1,
            label: FilamentLabel::GammaPlusAlpha,
        },
        Filament {
            anchor: [0.0, 0.0, 0.0],
            direction: [0.0, -s, s],
            sign: -1,
            label: FilamentLabel::GammaMinusAlpha,
        },
    ]
}

/// The two real vortex fields of the 2x2 model with their denominators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexFieldValue {
    pub a_plus: [f64; 3],
    pub a_minus: [f64; 3],
    /// D_+ = (gamma + alpha)^2 + beta^2, vanishing on the minus filament.
    pub d_plus: f64,
    /// D_- = (gamma - alpha)^2 + beta^2, vanishing on the plus filament.
    pub d_minus: f64,
}

/// Evaluate both filament fields
/// `a_(+-) = (-gamma +- alpha, beta, -+ beta) / (4 D_(-+))`
/// in (beta, gamma, alpha) ordering. Each is curl-free away from its own
/// filament and carries circulation pi/2 per positive winding.
pub fn curl_fields(p: &PauliParams) -> Result<VortexFieldValue> {
    let d_plus = (p.gamma + p.alpha).powi(2) + p.beta * p.beta;
    let d_minus = (p.gamma - p.alpha).powi(2) + p.beta * p.beta;
    let scale = p.scale().max(1.0);
    let tol = 1e-18 * scale * scale;
    if d_plus.min(d_minus) < tol {
        return Err(Error::OnFilament {
            min_d: d_plus.min(d_minus),
        });
    }
    // a_+ diverges on D_- = 0 (the gamma = +alpha line) and vice versa.
    let a_plus = [
        (-p.gamma + p.alpha) / (4.0 * d_minus),
        p.beta / (4.0 * d_minus),
        -p.beta / (4.0 * d_minus),
    ];
    let a_minus = [
        (-p.gamma - p.alpha) / (4.0 * d_plus),
        p.beta / (4.0 * d_plus),
        p.beta / (4.0 * d_plus),
    ];
    Ok(VortexFieldValue {
        a_plus,
        a_minus,
        d_plus,
        d_minus,
    })
}

/// Difference field `a_+ - a_-`: the real part of the Berry connection up
/// to a single-valued gradient, so loop integrals agree exactly.
pub fn combined_vortex(p: &PauliParams) -> Result<[f64; 3]> {
    let v = curl_fields(p)?;
    Ok([
        v.a_plus[0] - v.a_minus[0],
        v.a_plus[1] - v.a_minus[1],
        v.a_plus[2] - v.a_minus[2],
    ])
}

/// Adapter exposing the combined vortex field as a (real) connection, for
/// quadrature reuse.
#[derive(Debug, Clone, Copy, Default)]
pub struct CombinedVortexField;

impl ConnectionField for CombinedVortexField {
    fn connection(&self, x: [f64; 3]) -> Result<ConnectionVector> {
        let a = combined_vortex(&PauliParams::from_coords(x))?;
        Ok(ConnectionVector {
            a1: C64::new(a[0], 0.0),
            a2: C64::new(a[1], 0.0),
            a3: C64::new(a[2], 0.0),
        })
    }

    fn el_distance(&self, x: [f64; 3]) -> f64 {
        pauli::el_distance(x)
    }
}

/// Loop integral of `A - (a_+ - a_-)`: the gauge remainder, which must
/// vanish (mod nothing: it is exactly zero in exact arithmetic) on every
/// admissible loop.
pub fn gauge_residual_loop(path: &ClosedPath) -> Result<C64> {
    struct Residual;
    impl ConnectionField for Residual {
        fn connection(&self, x: [f64; 3]) -> Result<ConnectionVector> {
            let p = PauliParams::from_coords(x);
            let full = connection_analytic(&p)?;
            let a = combined_vortex(&p)?;
            Ok(ConnectionVector {
                a1: full.a1 - C64::new(a[0], 0.0),
                a2: full.a2 - C64::new(a[1], 0.0),
                a3: full.a3 - C64::new(a[2], 0.0),
            })
        }

        fn el_distance(&self, x: [f64; 3]) -> f64 {
            pauli::el_distance(x)
        }
    }
    berry_phase_line_integral(&Residual, path)
}

/// Signed winding number of a closed path around one filament, computed in
/// the filament's transverse plane. Fails with ON_FILAMENT when a sample
/// projects inside 1e-12 of the axis.
pub fn winding_number(path: &ClosedPath, filament: &Filament) -> Result<i64> {
    let (e1, e2) = transverse_frame(filament.direction);
    let pts = path.points();
    let project = |x: &[f64; 3]| -> (f64, f64) {
        let rel = [
            x[0] - filament.anchor[0],
            x[1] - filament.anchor[1],
            x[2] - filament.anchor[2],
        ];
        (
            rel[0] * e1[0] + rel[1] * e1[1] + rel[2] * e1[2],
            rel[0] * e2[0] + rel[1] * e2[1] + rel[2] * e2[2],
        )
    };
    let mut total = 0.0_f64;
    let (mut u_prev, mut v_prev) = project(&pts[0]);
    if (u_prev * u_prev + v_prev * v_prev).sqrt() < 1e-12 {
        return Err(Error::OnFilament { min_d: 0.0 });
    }
    for x in &pts[1..] {
        let (u, v) = project(x);
        let r = (u * u + v * v).sqrt();
        if r < 1e-12 {
            return Err(Error::OnFilament { min_d: r });
        }
        // Signed angle increment between consecutive projected samples.
        total += (u_prev * v - v_prev * u).atan2(u_prev * u + v_prev * v);
        u_prev = u;
        v_prev = v;
    }
    Ok((total / std::f64::consts::TAU).round() as i64)
}

/// Winding numbers of a loop around both 2x2 filaments, (plus, minus).
pub fn winding_numbers(path: &ClosedPath) -> Result<(i64, i64)> {
    let [fp, fm] = pauli_filaments();
    Ok((winding_number(path, &fp)?, winding_number(path, &fm)?))
}

/// Vortex-filament phase predictor: `(pi/2) (w_+ - w_-)`.
pub fn predicted_phase(w_plus: i64, w_minus: i64) -> f64 {
    std::f64::consts::FRAC_PI_2 * (w_plus - w_minus) as f64
}

/// Convenience: quadrature phase, both windings, and the predictor for one
/// loop of the 2x2 model.
#[derive(Debug, Clone, Copy)]
pub struct LoopReport {
    pub phase: C64,
    pub w_plus: i64,
    pub w_minus: i64,
    pub predicted: f64,
}

pub fn pauli_loop_report(path: &ClosedPath) -> Result<LoopReport> {
    let phase = berry_phase_line_integral(&crate::berry::PauliSpace, path)?;
    let (w_plus, w_minus) = winding_numbers(path)?;
    Ok(LoopReport {
        phase,
        w_plus,
        w_minus,
        predicted: predicted_phase(w_plus, w_minus),
    })
}

/// Margin rule shared with quadrature, exposed for callers that sample the
/// vortex fields directly.
pub fn check_el_margin(path: &ClosedPath) -> Result<()> {
    for (j, &x) in path.points().iter().take(path.n_samples()).enumerate() {
        let distance = pauli::el_distance(x);
        let required = EL_MARGIN_STEPS * path.local_step(j);
        if distance < required {
            return Err(Error::EpProximity {
                index: j,
                distance,
                required,
            });
        }
    }
    Ok(())
}
