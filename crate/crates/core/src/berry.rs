//! Berry connections (analytic and finite-difference) and closed-loop Berry
//! phases by trapezoid quadrature and by a biorthogonal Wilson loop with
//! branch tracking across band swaps.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::path::ClosedPath;
use crate::pauli::{
    self, biorth_pair, ep_tolerance, inner, Band, BiorthPair, PauliParams,
};

/// Default finite-difference step for eigenvector differentiation.
pub const FD_STEP: f64 = 1e-5;

/// A path sample must stay this many local step lengths away from the
/// nearest exceptional line for quadrature to proceed.
pub const EL_MARGIN_STEPS: f64 = 10.0;

/// Wilson tracking gives up below this overlap magnitude.
pub const MIN_TRACKING_OVERLAP: f64 = 0.1;

/// Complex connection components along the fixed coordinate ordering of the
/// ambient parameter space: (beta, gamma, alpha) for the 2x2 model,
/// (lambda, Delta, delta) for the lattice model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionVector {
    pub a1: C64,
    pub a2: C64,
    pub a3: C64,
}

impl ConnectionVector {
    pub fn components(&self) -> [C64; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn add(&self, other: &ConnectionVector) -> ConnectionVector {
        ConnectionVector {
            a1: self.a1 + other.a1,
            a2: self.a2 + other.a2,
            a3: self.a3 + other.a3,
        }
    }

    pub fn sub(&self, other: &ConnectionVector) -> ConnectionVector {
        ConnectionVector {
            a1: self.a1 - other.a1,
            a2: self.a2 - other.a2,
            a3: self.a3 - other.a3,
        }
    }

    /// Complex line element `A . dx` against a real displacement.
    pub fn dot(&self, dx: [f64; 3]) -> C64 {
        self.a1 * dx[0] + self.a2 * dx[1] + self.a3 * dx[2]
    }

    pub fn norm(&self) -> f64 {
        (self.a1.norm_sqr() + self.a2.norm_sqr() + self.a3.norm_sqr()).sqrt()
    }
}

/// Provider of a Berry connection over a 3-dimensional parameter space.
pub trait ConnectionField {
    fn connection(&self, x: [f64; 3]) -> Result<ConnectionVector>;
    /// Distance (exact or estimated) from `x` to the nearest exceptional
    /// set of the model.
    fn el_distance(&self, x: [f64; 3]) -> f64;
}

/// Provider of biorthogonal eigenpairs over a 3-dimensional parameter space.
pub trait EigenpairField {
    fn pair(&self, x: [f64; 3]) -> Result<BiorthPair>;
    fn el_distance(&self, x: [f64; 3]) -> f64;
}

/// The plain 2x2 model over (beta, gamma, alpha) coordinates.
#[derive(Debug, Clone, Copy, Default)]
pub struct PauliSpace;

impl ConnectionField for PauliSpace {
    fn connection(&self, x: [f64; 3]) -> Result<ConnectionVector> {
        connection_analytic(&PauliParams::from_coords(x))
    }

    fn el_distance(&self, x: [f64; 3]) -> f64 {
        pauli::el_distance(x)
    }
}

impl EigenpairField for PauliSpace {
    fn pair(&self, x: [f64; 3]) -> Result<BiorthPair> {
        biorth_pair(&PauliParams::from_coords(x))
    }

    fn el_distance(&self, x: [f64; 3]) -> f64 {
        pauli::el_distance(x)
    }
}

/// The 2x2 model conjugated by a fixed spin rotation: eigenpairs are
/// (U psi, U phi). Connection values are invariant under this transport.
#[derive(Debug, Clone, Copy)]
pub struct RotatedPauliSpace {
    u: [[C64; 2]; 2],
}

impl RotatedPauliSpace {
    pub fn new(axis: [f64; 3], theta: f64) -> Result<Self> {
        Ok(Self {
            u: pauli::spin_rotation_operator(axis, theta)?,
        })
    }
}

impl EigenpairField for RotatedPauliSpace {
    fn pair(&self, x: [f64; 3]) -> Result<BiorthPair> {
        let base = biorth_pair(&PauliParams::from_coords(x))?;
        let apply = |v: [C64; 2]| -> [C64; 2] {
            [
                self.u[0][0] * v[0] + self.u[0][1] * v[1],
                self.u[1][0] * v[0] + self.u[1][1] * v[1],
            ]
        };
        Ok(BiorthPair {
            psi_plus: apply(base.psi_plus),
            psi_minus: apply(base.psi_minus),
            phi_plus: apply(base.phi_plus),
            phi_minus: apply(base.phi_minus),
            eps: base.eps,
        })
    }

    fn el_distance(&self, x: [f64; 3]) -> f64 {
        pauli::el_distance(x)
    }
}

/// Closed-form connection of the 2x2 model:
/// `(alpha, i alpha, -beta - i gamma) / (2 eps^2)` in (beta, gamma, alpha)
/// ordering. The same expression serves both bands.
pub fn connection_analytic(p: &PauliParams) -> Result<ConnectionVector> {
    let eps = pauli::eigenvalues(p).eps;
    let tol = ep_tolerance(p.scale());
    if eps.norm() < tol {
        return Err(Error::EpDivergent {
            eps_abs: eps.norm(),
        });
    }
    let d = 2.0 * eps * eps;
    Ok(ConnectionVector {
        a1: C64::new(p.alpha, 0.0) / d,
        a2: C64::new(0.0, p.alpha) / d,
        a3: C64::new(-p.beta, -p.gamma) / d,
    })
}

/// Rescale a displaced eigenpair onto the branch continued from `phi_ref`:
/// pick the band with the largest overlap magnitude against the reference
/// left vector, then fix the residual sign so the overlap has positive real
/// part. Returns the aligned right and left vectors with the winning
/// overlap.
fn align_to(phi_ref: &[C64; 2], pair: &BiorthPair, band_hint: Band) -> ([C64; 2], [C64; 2], C64) {
    let candidates = match band_hint {
        Band::Plus => [Band::Plus, Band::Minus],
        Band::Minus => [Band::Minus, Band::Plus],
    };
    let mut best_band = candidates[0];
    let mut best = inner(phi_ref, &pair.psi(candidates[0]));
    let other = inner(phi_ref, &pair.psi(candidates[1]));
    if other.norm() > best.norm() {
        best_band = candidates[1];
        best = other;
    }
    let sign = if best.re < 0.0 { -1.0 } else { 1.0 };
    let scale = C64::new(sign, 0.0);
    let psi = pair.psi(best_band);
    let phi = pair.phi(best_band);
    (
        [scale * psi[0], scale * psi[1]],
        [scale * phi[0], scale * phi[1]],
        scale * best,
    )
}

fn displaced(x: [f64; 3], axis: usize, h: f64) -> [f64; 3] {
    let mut y = x;
    y[axis] += h;
    y
}

/// Central finite difference `A_g = i <phi | d_g psi>` of the right
/// eigenvector, with each displaced eigenvector rescaled onto the branch of
/// the undisplaced pair (band of maximal overlap, sign fixed so the overlap
/// against the undisplaced left vector is real positive). Agrees with the
/// analytic connection to O(h^2).
pub fn connection_numeric<F: EigenpairField + ?Sized>(
    field: &F,
    x: [f64; 3],
    h: f64,
) -> Result<ConnectionVector> {
    connection_fd(field, x, h, Band::Plus, false)
}

/// Fourth-order variant of [`connection_numeric`] on a 5-point stencil, for
/// consumers that need agreement at the 1e-8 level.
pub fn connection_numeric_o4<F: EigenpairField + ?Sized>(
    field: &F,
    x: [f64; 3],
    h: f64,
) -> Result<ConnectionVector> {
    connection_fd(field, x, h, Band::Plus, true)
}

/// Shared implementation; `band` selects the reference band at the center
/// point (the connection is band-symmetric for every model in this crate,
/// which tests assert through this switch).
pub fn connection_fd<F: EigenpairField + ?Sized>(
    field: &F,
    x: [f64; 3],
    h: f64,
    band: Band,
    five_point: bool,
) -> Result<ConnectionVector> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput {
            reason: format!("finite-difference step must be positive, got {h}"),
        });
    }
    let distance = field.el_distance(x);
    let required = EL_MARGIN_STEPS * h;
    if distance < required {
        return Err(Error::EpProximity {
            index: 0,
            distance,
            required,
        });
    }
    let center = field.pair(x)?;
    let phi0 = center.phi(band);
    let mut out = [C64::new(0.0, 0.0); 3];
    for (g, slot) in out.iter_mut().enumerate() {
        let diff = if five_point {
            let at = |step: f64| -> Result<[C64; 2]> {
                let pair = field.pair(displaced(x, g, step))?;
                Ok(align_to(&phi0, &pair, band).0)
            };
            let p1 = at(h)?;
            let p2 = at(2.0 * h)?;
            let m1 = at(-h)?;
            let m2 = at(-2.0 * h)?;
            let mut d = [C64::new(0.0, 0.0); 2];
            for i in 0..2 {
                d[i] = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h);
            }
            d
        } else {
            let plus = align_to(&phi0, &field.pair(displaced(x, g, h))?, band).0;
            let minus = align_to(&phi0, &field.pair(displaced(x, g, -h))?, band).0;
            [
                (plus[0] - minus[0]) / (2.0 * h),
                (plus[1] - minus[1]) / (2.0 * h),
            ]
        };
        *slot = C64::i() * inner(&phi0, &diff);
    }
    Ok(ConnectionVector {
        a1: out[0],
        a2: out[1],
        a3: out[2],
    })
}

/// Composite trapezoid approximation of the loop integral `oint A . dl`.
/// Every sample must keep `EL_MARGIN_STEPS` local step lengths of distance
/// from the exceptional set.
pub fn berry_phase_line_integral<F: ConnectionField + ?Sized>(
    field: &F,
    path: &ClosedPath,
) -> Result<C64> {
    let pts = path.points();
    let n = path.n_samples();
    let mut values = Vec::with_capacity(n + 1);
    for (j, &x) in pts.iter().take(n).enumerate() {
        let distance = field.el_distance(x);
        let required = EL_MARGIN_STEPS * path.local_step(j);
        if distance < required {
            return Err(Error::EpProximity {
                index: j,
                distance,
                required,
            });
        }
        values.push(field.connection(x)?);
    }
    values.push(values[0]);
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..n {
        let dx = [
            pts[j + 1][0] - pts[j][0],
            pts[j + 1][1] - pts[j][1],
            pts[j + 1][2] - pts[j][2],
        ];
        acc += 0.5 * (values[j].dot(dx) + values[j + 1].dot(dx));
    }
    Ok(acc)
}

/// Result of a discretized Wilson-loop evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilsonResult {
    /// Per-loop phase (complex; the imaginary part measures decay).
    pub phase: C64,
    /// True when a single traversal returned on the opposite branch, which
    /// forces the double traversal below.
    pub band_swapped: bool,
    /// 1, or 2 when the loop was traversed twice to close the branch cycle.
    pub traversals: u8,
}

/// Phase of the ordered product of biorthogonal overlaps along the loop,
/// with band continuity enforced by maximal-overlap tracking.
///
/// Each step contributes the symmetrized log
/// `(Log<phi_j|psi_{j+1}> - Log<phi_{j+1}|psi_j>) / 2`, which cancels the
/// second-order expansion error of the plain forward product. If the
/// tracked band returns swapped after one traversal (square-root monodromy
/// around a single EL), the loop is traversed twice and the accumulated
/// phase halved, with `band_swapped = true`.
pub fn berry_phase_wilson<F: EigenpairField + ?Sized>(
    field: &F,
    path: &ClosedPath,
) -> Result<WilsonResult> {
    let pts = path.points();
    let n = path.n_samples();
    let mut pairs = Vec::with_capacity(n);
    for (j, &x) in pts.iter().take(n).enumerate() {
        match field.pair(x) {
            Ok(pair) => pairs.push(pair),
            Err(Error::EpDegenerate { eps_abs } | Error::EpDivergent { eps_abs }) => {
                return Err(Error::EpProximity {
                    index: j,
                    distance: eps_abs,
                    required: ep_tolerance(1.0),
                })
            }
            Err(e) => return Err(e),
        }
    }

    let mut band = Band::Plus;
    let mut sign = 1.0;
    let mut acc = C64::new(0.0, 0.0);
    let mut traversals: u8 = 1;
    let mut steps_done = 0usize;
    loop {
        for j in 0..n {
            let here = &pairs[j];
            let next = &pairs[(j + 1) % n];
            let phi_here = {
                let raw = here.phi(band);
                [sign * raw[0], sign * raw[1]]
            };
            let psi_here = {
                let raw = here.psi(band);
                [sign * raw[0], sign * raw[1]]
            };
            let (psi_next, phi_next, overlap) = align_to(&phi_here, next, band);
            if overlap.norm() < MIN_TRACKING_OVERLAP {
                return Err(Error::TrackingLost {
                    step: steps_done + j,
                    overlap: overlap.norm(),
                });
            }
            let forward = overlap;
            let backward = inner(&phi_next, &psi_here);
            acc += 0.5 * (forward.ln() - backward.ln());
            // Carry the tracked frame: recover band and sign of the aligned
            // vectors relative to the stored pair.
            let (new_band, new_sign) = frame_of(next, &psi_next);
            band = new_band;
            sign = new_sign;
        }
        steps_done += n;
        if band == Band::Plus {
            if sign < 0.0 {
                // A closed cycle cannot return -psi_plus for this model
                // family; fold the sign into the closing factor defensively.
                acc += C64::new(0.0, std::f64::consts::PI);
            }
            break;
        }
        if traversals == 2 {
            // Two traversals must close the square-root cycle.
            return Err(Error::TrackingLost {
                step: steps_done,
                overlap: 0.0,
            });
        }
        traversals = 2;
    }

    let mut phase = C64::i() * acc;
    if traversals == 2 {
        phase /= 2.0;
    }
    Ok(WilsonResult {
        phase,
        band_swapped: traversals == 2,
        traversals,
    })
}

/// Identify which stored band (up to sign) an aligned vector came from.
fn frame_of(pair: &BiorthPair, psi: &[C64; 2]) -> (Band, f64) {
    let dp = psi[0] - pair.psi_plus[0];
    let dp2 = psi[1] - pair.psi_plus[1];
    if dp.norm_sqr() + dp2.norm_sqr() < 1e-20 {
        return (Band::Plus, 1.0);
    }
    let sp = psi[0] + pair.psi_plus[0];
    let sp2 = psi[1] + pair.psi_plus[1];
    if sp.norm_sqr() + sp2.norm_sqr() < 1e-20 {
        return (Band::Plus, -1.0);
    }
    let dm = psi[0] - pair.psi_minus[0];
    let dm2 = psi[1] - pair.psi_minus[1];
    if dm.norm_sqr() + dm2.norm_sqr() < 1e-20 {
        return (Band::Minus, 1.0);
    }
    (Band::Minus, -1.0)
}

/// Nearest multiple of pi/2 with its residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantized {
    /// Coefficient c in `phase ~ c pi/2`.
    pub coefficient: i64,
    /// `max(|Re(phase) - c pi/2|, |Im(phase)|)`.
    pub residual: f64,
}

/// Snap a complex phase onto the pi/2 lattice. Fails with NOT_QUANTIZED
/// when the residual (including any imaginary part) exceeds `tol`.
pub fn quantize(phase: C64, tol: f64) -> Result<Quantized> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let coefficient = (phase.re / half_pi).round();
    let residual = (phase.re - coefficient * half_pi).abs().max(phase.im.abs());
    let coefficient = coefficient as i64;
    if residual > tol {
        return Err(Error::NotQuantized {
            coefficient,
            residual,
        });
    }
    Ok(Quantized {
        coefficient,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

    #[test]
    fn analytic_connection_examples() {
        // (beta, gamma, alpha) = (0, 0, 1): (1/2, i/2, 0).
        let a = connection_analytic(&PauliParams::new(1.0, 0.0, 0.0)).unwrap();
        assert!((a.a1 - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((a.a2 - C64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(a.a3.norm() < 1e-15);
        // (beta, gamma, alpha) = (1, 0, 0): (0, 0, -1/2).
        let b = connection_analytic(&PauliParams::new(0.0, 1.0, 0.0)).unwrap();
        assert!(b.a1.norm() < 1e-15);
        assert!(b.a2.norm() < 1e-15);
        assert!((b.a3 - C64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn analytic_connection_diverges_on_el() {
        match connection_analytic(&PauliParams::new(1.0, 0.0, 1.0)) {
            Err(Error::EpDivergent { .. }) => {}
            other => panic!("expected EP_DIVERGENT, got {other:?}"),
        }
    }

    #[test]
    fn numeric_connection_matches_analytic() {
        for x in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.4, -0.7, 1.2]] {
            let numeric = connection_numeric(&PauliSpace, x, 1e-5).unwrap();
            let analytic = connection_analytic(&PauliParams::from_coords(x)).unwrap();
            assert!(
                numeric.sub(&analytic).norm() < 1e-6,
                "mismatch at {x:?}: {:?} vs {analytic:?}",
                numeric
            );
        }
    }

    #[test]
    fn numeric_connection_rejects_el_proximity() {
        match connection_numeric(&PauliSpace, [0.0, 1.0, 1.0], 1e-5) {
            Err(Error::EpProximity { .. }) => {}
            other => panic!("expected EP_PROXIMITY, got {other:?}"),
        }
    }

    #[test]
    fn numeric_connection_is_band_symmetric() {
        let x = [0.3, 0.6, 0.9];
        let plus = connection_fd(&PauliSpace, x, 1e-5, Band::Plus, false).unwrap();
        let minus = connection_fd(&PauliSpace, x, 1e-5, Band::Minus, false).unwrap();
        assert!(plus.sub(&minus).norm() < 1e-9);
    }

    fn single_el_circle(samples: usize) -> ClosedPath {
        ClosedPath::circle([0.0, 1.0, 1.0], [0.0, 0.0, 1.0], 0.5, samples, 1).unwrap()
    }

    #[test]
    fn quadrature_no_el_enclosed_is_zero() {
        let path = ClosedPath::circle([0.0, 2.5, 1.0], [0.0, 0.0, 1.0], 0.5, 1024, 1).unwrap();
        let phase = berry_phase_line_integral(&PauliSpace, &path).unwrap();
        assert!(phase.norm() < 1e-6);
    }

    #[test]
    fn quadrature_single_el_gives_half_pi() {
        let phase = berry_phase_line_integral(&PauliSpace, &single_el_circle(4096)).unwrap();
        assert!((phase.re - HALF_PI).abs() < 1e-4, "got {phase}");
        assert!(phase.im.abs() < 1e-4);
    }

    #[test]
    fn quadrature_both_els_cancel() {
        let path = ClosedPath::circle([0.0, 0.0, 1.0], [0.0, 0.0, 1.0], 3.0, 4096, 1).unwrap();
        let phase = berry_phase_line_integral(&PauliSpace, &path).unwrap();
        assert!(phase.norm() < 1e-4, "got {phase}");
    }

    #[test]
    fn quadrature_rejects_sample_near_el() {
        // Tight circle around a point of the gamma = alpha line: sample
        // distance (<= 0.02) is under ten local steps (~0.08).
        let path = ClosedPath::circle([0.0, 1.0, 1.0], [0.0, 0.0, 1.0], 0.02, 16, 1).unwrap();
        match berry_phase_line_integral(&PauliSpace, &path) {
            Err(Error::EpProximity { .. }) => {}
            other => panic!("expected EP_PROXIMITY, got {other:?}"),
        }
    }

    #[test]
    fn wilson_no_el_no_swap() {
        let path = ClosedPath::circle([0.0, 2.5, 1.0], [0.0, 0.0, 1.0], 0.5, 1024, 1).unwrap();
        let res = berry_phase_wilson(&PauliSpace, &path).unwrap();
        assert!(!res.band_swapped);
        assert_eq!(res.traversals, 1);
        assert!(res.phase.norm() < 1e-4, "got {:?}", res.phase);
    }

    #[test]
    fn wilson_single_el_swaps_and_quantizes() {
        let res = berry_phase_wilson(&PauliSpace, &single_el_circle(4096)).unwrap();
        assert!(res.band_swapped);
        assert_eq!(res.traversals, 2);
        assert!((res.phase.re.abs() - HALF_PI).abs() < 1e-4, "got {:?}", res.phase);
        assert!(res.phase.im.abs() < 1e-4);
    }

    #[test]
    fn wilson_both_els_no_swap() {
        let path = ClosedPath::circle([0.0, 0.0, 1.0], [0.0, 0.0, 1.0], 3.0, 4096, 1).unwrap();
        let res = berry_phase_wilson(&PauliSpace, &path).unwrap();
        assert!(!res.band_swapped);
        let wrapped = (res.phase.re + std::f64::consts::PI)
            .rem_euclid(2.0 * std::f64::consts::PI)
            - std::f64::consts::PI;
        assert!(wrapped.abs() < 1e-4, "got {:?}", res.phase);
    }

    #[test]
    fn wilson_agrees_with_quadrature_on_swap_loop() {
        let path = single_el_circle(4096);
        let quad = berry_phase_line_integral(&PauliSpace, &path).unwrap();
        let wil = berry_phase_wilson(&PauliSpace, &path).unwrap();
        assert!((quad.re - wil.phase.re).abs() < 1e-4);
    }

    #[test]
    fn quantize_examples() {
        let q = quantize(C64::new(1.5707, 0.0), 1e-3).unwrap();
        assert_eq!(q.coefficient, 1);
        assert!((q.residual - 9.63e-5).abs() < 1e-6);

        let q0 = quantize(C64::new(0.0, 0.0), 1e-3).unwrap();
        assert_eq!(q0.coefficient, 0);
        assert_eq!(q0.residual, 0.0);

        let qneg = quantize(C64::new(-3.1416, 0.0), 1e-3).unwrap();
        assert_eq!(qneg.coefficient, -2);
        assert!(qneg.residual < 1e-4);
    }

    #[test]
    fn quantize_rejects_off_lattice() {
        match quantize(C64::new(1.0, 0.0), 1e-3) {
            Err(Error::NotQuantized { coefficient, .. }) => assert_eq!(coefficient, 1),
            other => panic!("expected NOT_QUANTIZED, got {other:?}"),
        }
        match quantize(C64::new(HALF_PI, 0.01), 1e-3) {
            Err(Error::NotQuantized { .. }) => {}
            other => panic!("expected NOT_QUANTIZED, got {other:?}"),
        }
    }
}
