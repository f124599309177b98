//! Finite non-Hermitian Rice-Mele chain with periodic boundaries: k-space
//! core matrices, canonical-mode coefficients, exceptional-line phase
//! diagrams, the many-body ground-state Berry connection over
//! (lambda, Delta, delta), and the boundary-filament flux predictor.
//!
//! Parameter-space coordinate ordering is (lambda, Delta, delta) throughout.

use num_complex::Complex64 as C64;

use crate::berry::{
    berry_phase_line_integral, connection_fd, ConnectionField, ConnectionVector, PauliSpace,
    EL_MARGIN_STEPS,
};
use crate::error::{Error, Result};
use crate::path::ClosedPath;
use crate::pauli::{branch_sqrt, ep_tolerance, Band, PauliParams, PauliVector3};
use crate::vortex::{curl_fields, winding_number, Filament, FilamentLabel, VortexFieldValue};

/// Default finite-difference step for coefficient differentiation.
///
/// Sized for the five-point stencil: rounding error grows as 1/h while
/// truncation shrinks as h^4, and 1e-4 keeps both near 1e-12 so mode sums
/// stay comparable across different chain lengths.
pub const RM_FD_STEP: f64 = 1e-4;

/// Points per branch in the exceptional-curve sweep.
pub const EL_SWEEP_POINTS: usize = 601;

/// Chain parameters. `j0` is the nominal hopping held constant along any
/// Berry-phase path; `delta_hop` the hopping stagger; `lambda` and
/// `big_delta` the real and imaginary on-site staggers; `n_cells` the even
/// cell count N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmParams {
    j0: f64,
    delta_hop: f64,
    lambda: f64,
    big_delta: f64,
    n_cells: usize,
}

impl RmParams {
    pub fn new(
        j0: f64,
        delta_hop: f64,
        lambda: f64,
        big_delta: f64,
        n_cells: usize,
    ) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::InvalidInput {
                reason: format!("n_cells must be at least 2, got {n_cells}"),
            });
        }
        if n_cells % 2 != 0 {
            return Err(Error::OddN { n: n_cells });
        }
        Ok(Self {
            j0,
            delta_hop,
            lambda,
            big_delta,
            n_cells,
        })
    }

    pub fn j0(&self) -> f64 {
        self.j0
    }

    pub fn delta_hop(&self) -> f64 {
        self.delta_hop
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn big_delta(&self) -> f64 {
        self.big_delta
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Same chain at another point of (lambda, Delta, delta)-space.
    pub fn with_point(&self, lambda: f64, big_delta: f64, delta_hop: f64) -> RmParams {
        RmParams {
            lambda,
            big_delta,
            delta_hop,
            ..*self
        }
    }

    /// The point of (lambda, Delta, delta)-space this chain sits at.
    pub fn point(&self) -> [f64; 3] {
        [self.lambda, self.big_delta, self.delta_hop]
    }

    fn scale(&self) -> f64 {
        self.j0
            .abs()
            .max(self.delta_hop.abs())
            .max(self.lambda.abs())
            .max(self.big_delta.abs())
    }

    /// lambda + i Delta, the complex stagger entering every spectrum.
    fn stagger(&self) -> C64 {
        C64::new(self.lambda, self.big_delta)
    }
}

/// One grid momentum k = 2 pi n / N, n in [1, N]. Stored by its integer
/// index so half-angle trig can be made exact at the critical momenta and
/// exactly reflection-antisymmetric elsewhere, which the mode-pair
/// cancellation tests rely on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeK {
    n: usize,
    n_cells: usize,
}

impl ModeK {
    pub fn new(n: usize, n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::InvalidInput {
                reason: format!("n_cells must be at least 2, got {n_cells}"),
            });
        }
        if n_cells % 2 != 0 {
            return Err(Error::OddN { n: n_cells });
        }
        if n == 0 || n > n_cells {
            return Err(Error::InvalidInput {
                reason: format!("mode index {n} outside 1..={n_cells}"),
            });
        }
        Ok(Self { n, n_cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn k(&self) -> f64 {
        std::f64::consts::TAU * self.n as f64 / self.n_cells as f64
    }

    pub fn k_over_pi(&self) -> f64 {
        2.0 * self.n as f64 / self.n_cells as f64
    }

    /// k = pi, the green-boundary critical momentum.
    pub fn is_pi(&self) -> bool {
        2 * self.n == self.n_cells
    }

    /// k = 2 pi, the grid representative of the red-boundary momentum 0.
    pub fn is_two_pi(&self) -> bool {
        self.n == self.n_cells
    }

    pub fn is_boundary(&self) -> bool {
        self.is_pi() || self.is_two_pi()
    }

    /// The partner momentum 2 pi - k (k = pi and k = 2 pi are their own
    /// partners on the grid).
    pub fn reflected(&self) -> ModeK {
        ModeK {
            n: if self.n == self.n_cells {
                self.n_cells
            } else {
                self.n_cells - self.n
            },
            n_cells: self.n_cells,
        }
    }

    /// cos(k/2), exact at the critical momenta and exactly odd under
    /// n -> N - n.
    pub fn cos_half(&self) -> f64 {
        let (n, nn) = (self.n, self.n_cells);
        if n == nn {
            -1.0
        } else if 2 * n == nn {
            0.0
        } else if 2 * n > nn {
            -Self::raw_cos(nn - n, nn)
        } else {
            Self::raw_cos(n, nn)
        }
    }

    /// sin(k/2), exact at the critical momenta and exactly even under
    /// n -> N - n.
    pub fn sin_half(&self) -> f64 {
        let (n, nn) = (self.n, self.n_cells);
        if n == nn {
            0.0
        } else if 2 * n == nn {
            1.0
        } else if 2 * n > nn {
            Self::raw_sin(nn - n, nn)
        } else {
            Self::raw_sin(n, nn)
        }
    }

    fn raw_cos(n: usize, nn: usize) -> f64 {
        (std::f64::consts::PI * n as f64 / nn as f64).cos()
    }

    fn raw_sin(n: usize, nn: usize) -> f64 {
        (std::f64::consts::PI * n as f64 / nn as f64).sin()
    }
}

/// All N grid momenta in index order n = 1..N.
pub fn k_grid(n_cells: usize) -> Result<Vec<ModeK>> {
    if n_cells < 2 {
        return Err(Error::InvalidInput {
            reason: format!("n_cells must be at least 2, got {n_cells}"),
        });
    }
    if n_cells % 2 != 0 {
        return Err(Error::OddN { n: n_cells });
    }
    Ok((1..=n_cells).map(|n| ModeK { n, n_cells }).collect())
}

/// Core matrix of one momentum subspace as a complex Pauli vector:
/// B = (J0 cos(k/2), delta sin(k/2), -lambda - i Delta), H_k = B . sigma.
pub fn core_matrix(p: &RmParams, k: &ModeK) -> PauliVector3 {
    PauliVector3 {
        bx: C64::new(p.j0 * k.cos_half(), 0.0),
        by: C64::new(p.delta_hop * k.sin_half(), 0.0),
        bz: -p.stagger(),
    }
}

/// Single-particle spectrum
/// eps_k = sqrt(J0^2 cos^2(k/2) + delta^2 sin^2(k/2) + (lambda + i Delta)^2)
/// on the fixed branch Re >= 0 (ties to Im >= 0). Zero is allowed.
pub fn spectrum_k(p: &RmParams, k: &ModeK) -> C64 {
    core_matrix(p, k).eigenvalue().eps
}

/// Many-body ground-state energy -sum_k eps_k, summed in index order.
pub fn ground_energy(p: &RmParams) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for k in k_grid(p.n_cells)? {
        acc += spectrum_k(p, &k);
    }
    Ok(-acc)
}

/// The eight canonical-mode coefficients of one momentum subspace plus its
/// eigenvalue. (u^+, v^+) and (zeta^+, xi^+) are right eigenvectors of the
/// core matrix for +eps_k and -eps_k; the minus-superscript partners pair
/// with them bilinearly: u^- u^+ + v^- v^+ = zeta^- zeta^+ + xi^- xi^+ = 1.
/// The printed v and xi do not depend on the superscript sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalCoeffs {
    pub u_plus: C64,
    pub u_minus: C64,
    pub v_plus: C64,
    pub v_minus: C64,
    pub zeta_plus: C64,
    pub zeta_minus: C64,
    pub xi_plus: C64,
    pub xi_minus: C64,
    pub eps_k: C64,
}

/// Evaluate the canonical coefficients on the principal branch.
///
/// Fails DEGENERATE when the core matrix vanishes entirely (a degeneracy
/// point, not an EP) and EP_DIVERGENT when eps_k or either normalization
/// denominator collapses (the exceptional line, where the coefficients
/// diverge).
pub fn canonical_coeffs(p: &RmParams, k: &ModeK) -> Result<CanonicalCoeffs> {
    let bx = p.j0 * k.cos_half();
    let by = p.delta_hop * k.sin_half();
    let mtil = p.stagger();
    let tol = ep_tolerance(p.scale());
    let b_norm = (bx * bx + by * by + mtil.norm_sqr()).sqrt();
    if b_norm < tol {
        return Err(Error::Degenerate);
    }
    let eps = branch_sqrt(C64::new(bx * bx + by * by, 0.0) + mtil * mtil);
    if eps.norm() < tol || (eps + mtil).norm() < tol || (eps - mtil).norm() < tol {
        return Err(Error::EpDivergent {
            eps_abs: eps.norm(),
        });
    }
    let num_plus = C64::new(bx, -by);
    let num_minus = C64::new(bx, by);
    let den_uv = (2.0 * eps * (eps + mtil)).sqrt();
    let den_zx = (2.0 * eps * (eps - mtil)).sqrt();
    let v = (eps + mtil) / den_uv;
    let xi = (mtil - eps) / den_zx;
    Ok(CanonicalCoeffs {
        u_plus: num_plus / den_uv,
        u_minus: num_minus / den_uv,
        v_plus: v,
        v_minus: v,
        zeta_plus: num_plus / den_zx,
        zeta_minus: num_minus / den_zx,
        xi_plus: xi,
        xi_minus: xi,
        eps_k: eps,
    })
}

/// First-order distance estimate from the chain's parameter point to the
/// exceptional set of one momentum subspace: |eps_k^2| / ||grad eps_k^2||
/// over (lambda, Delta, delta).
pub fn mode_el_distance(p: &RmParams, k: &ModeK) -> f64 {
    let bx = p.j0 * k.cos_half();
    let by = p.delta_hop * k.sin_half();
    let mtil = p.stagger();
    let eps_sq = C64::new(bx * bx + by * by, 0.0) + mtil * mtil;
    let s2 = k.sin_half() * k.sin_half();
    let grad = (8.0 * mtil.norm_sqr() + 4.0 * p.delta_hop * p.delta_hop * s2 * s2)
        .sqrt()
        .max(1e-12);
    eps_sq.norm() / grad
}

/// Minimum of [`mode_el_distance`] over the whole grid.
pub fn el_distance_rm(p: &RmParams) -> f64 {
    let mut min = f64::INFINITY;
    for n in 1..=p.n_cells {
        let k = ModeK { n, n_cells: p.n_cells };
        min = min.min(mode_el_distance(p, &k));
    }
    min
}

/// (zeta^+, zeta^-, xi) evaluated on one explicit branch choice.
#[derive(Debug, Clone, Copy)]
struct CoeffTriple {
    zp: C64,
    zm: C64,
    xi: C64,
}

impl CoeffTriple {
    fn dist_sq(&self, other: &CoeffTriple) -> f64 {
        (self.zp - other.zp).norm_sqr()
            + (self.zm - other.zm).norm_sqr()
            + (self.xi - other.xi).norm_sqr()
    }
}

/// The four admissible branch evaluations at a point: eigenvalue sign x
/// overall normalization sign. Ordering is deterministic so the reflected
/// mode walks mirror-image branches.
fn coeff_candidates(j0: f64, delta_hop: f64, c: f64, s: f64, mtil: C64) -> [CoeffTriple; 4] {
    let bx = j0 * c;
    let by = delta_hop * s;
    let num_plus = C64::new(bx, -by);
    let num_minus = C64::new(bx, by);
    let eps_p = branch_sqrt(C64::new(bx * bx + by * by, 0.0) + mtil * mtil);
    let mut out = [CoeffTriple {
        zp: C64::new(0.0, 0.0),
        zm: C64::new(0.0, 0.0),
        xi: C64::new(0.0, 0.0),
    }; 4];
    let mut slot = 0;
    for eps in [eps_p, -eps_p] {
        let den = (2.0 * eps * (eps - mtil)).sqrt();
        for sign in [1.0, -1.0] {
            let scale = C64::new(sign, 0.0) / den;
            out[slot] = CoeffTriple {
                zp: num_plus * scale,
                zm: num_minus * scale,
                xi: (mtil - eps) * scale,
            };
            slot += 1;
        }
    }
    out
}

/// Continue the coefficient branch from `reference` to the displaced point.
fn continued_triple(
    reference: &CoeffTriple,
    j0: f64,
    delta_hop: f64,
    c: f64,
    s: f64,
    mtil: C64,
) -> CoeffTriple {
    let candidates = coeff_candidates(j0, delta_hop, c, s, mtil);
    let mut best = candidates[0];
    let mut best_d = best.dist_sq(reference);
    for cand in &candidates[1..] {
        let d = cand.dist_sq(reference);
        if d < best_d {
            best = *cand;
            best_d = d;
        }
    }
    best
}

/// Five-point derivative of the branch-continued (zeta^+, zeta^-, xi)
/// along coordinate `g` of (lambda, Delta, delta).
fn coeff_derivative(
    p: &RmParams,
    k: &ModeK,
    center: &CoeffTriple,
    g: usize,
    h: f64,
) -> CoeffTriple {
    let c = k.cos_half();
    let s = k.sin_half();
    let eval = |reference: &CoeffTriple, step: f64| -> CoeffTriple {
        let mut x = p.point();
        x[g] += step;
        continued_triple(reference, p.j0, x[2], c, s, C64::new(x[0], x[1]))
    };
    let p1 = eval(center, h);
    let p2 = eval(&p1, 2.0 * h);
    let m1 = eval(center, -h);
    let m2 = eval(&m1, -2.0 * h);
    let d = |f2: C64, f1: C64, b1: C64, b2: C64| (-f2 + 8.0 * f1 - 8.0 * b1 + b2) / (12.0 * h);
    CoeffTriple {
        zp: d(p2.zp, p1.zp, m1.zp, m2.zp),
        zm: d(p2.zm, p1.zm, m1.zm, m2.zm),
        xi: d(p2.xi, p1.xi, m1.xi, m2.xi),
    }
}

/// Berry connection A_k of one filled single-particle mode, components
/// ordered (lambda, Delta, delta), computed as
/// i (zeta^- d_g zeta^+ + xi^- d_g xi^+) by central differences.
///
/// The printed coefficient gauge is smooth for interior momenta but not at
/// the critical ones, where differentiating it yields a connection missing
/// its lambda component entirely. There the mode reduces exactly to a 2x2
/// submodel - (alpha, beta, gamma) = (J0, lambda, Delta) at k = 2 pi and
/// (delta, lambda, Delta) at k = pi - so the eigenvector difference is
/// taken in that submodel instead, reproducing the closed forms
/// A_0 = (J0, i J0, 0) / (2 eps_0^2) and
/// A_pi = (delta, i delta, -lambda - i Delta) / (2 eps_pi^2).
pub fn connection_k(p: &RmParams, k: &ModeK, h: f64) -> Result<ConnectionVector> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput {
            reason: format!("finite-difference step must be positive, got {h}"),
        });
    }
    let distance = mode_el_distance(p, k);
    let required = EL_MARGIN_STEPS * h;
    if distance < required {
        return Err(Error::EpProximity {
            index: k.n,
            distance,
            required,
        });
    }
    if k.is_two_pi() {
        let a = connection_fd(
            &PauliSpace,
            [p.lambda, p.big_delta, p.j0],
            h,
            Band::Plus,
            true,
        )?;
        return Ok(ConnectionVector {
            a1: a.a1,
            a2: a.a2,
            a3: C64::new(0.0, 0.0),
        });
    }
    if k.is_pi() {
        return connection_fd(
            &PauliSpace,
            [p.lambda, p.big_delta, p.delta_hop],
            h,
            Band::Plus,
            true,
        );
    }
    let coeffs = canonical_coeffs(p, k)?;
    let center = CoeffTriple {
        zp: coeffs.zeta_plus,
        zm: coeffs.zeta_minus,
        xi: coeffs.xi_plus,
    };
    let mut a = [C64::new(0.0, 0.0); 3];
    for (g, slot) in a.iter_mut().enumerate() {
        let d = coeff_derivative(p, k, &center, g, h);
        *slot = C64::i() * (center.zm * d.zp + center.xi * d.xi);
    }
    Ok(ConnectionVector {
        a1: a[0],
        a2: a[1],
        a3: a[2],
    })
}

/// Ground-state Berry connection: sum of the per-mode connections in index
/// order. Interior mode pairs (k, 2 pi - k) cancel, leaving the two
/// critical-momentum contributions.
pub fn total_connection(p: &RmParams, h: f64) -> Result<ConnectionVector> {
    let mut acc = ConnectionVector {
        a1: C64::new(0.0, 0.0),
        a2: C64::new(0.0, 0.0),
        a3: C64::new(0.0, 0.0),
    };
    for k in k_grid(p.n_cells)? {
        let term = connection_k(p, &k, h)?;
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Closed form of the k = 2 pi contribution, (J0, i J0, 0) / (2 eps_0^2).
pub fn a0_closed(p: &RmParams) -> Result<ConnectionVector> {
    let mtil = p.stagger();
    let eps_sq = C64::new(p.j0 * p.j0, 0.0) + mtil * mtil;
    let tol = ep_tolerance(p.scale());
    if eps_sq.norm() < tol * tol {
        return Err(Error::EpDivergent {
            eps_abs: eps_sq.norm().sqrt(),
        });
    }
    let d = 2.0 * eps_sq;
    Ok(ConnectionVector {
        a1: C64::new(p.j0, 0.0) / d,
        a2: C64::new(0.0, p.j0) / d,
        a3: C64::new(0.0, 0.0),
    })
}

/// Closed form of the k = pi contribution,
/// (delta, i delta, -lambda - i Delta) / (2 eps_pi^2).
pub fn api_closed(p: &RmParams) -> Result<ConnectionVector> {
    let mtil = p.stagger();
    let eps_sq = C64::new(p.delta_hop * p.delta_hop, 0.0) + mtil * mtil;
    let tol = ep_tolerance(p.scale());
    if eps_sq.norm() < tol * tol {
        return Err(Error::EpDivergent {
            eps_abs: eps_sq.norm().sqrt(),
        });
    }
    let d = 2.0 * eps_sq;
    Ok(ConnectionVector {
        a1: C64::new(p.delta_hop, 0.0) / d,
        a2: C64::new(0.0, p.delta_hop) / d,
        a3: -mtil / d,
    })
}

/// One point of an exceptional curve at lambda = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElPoint {
    pub delta_hop: f64,
    pub big_delta: f64,
    /// Which sign of the Delta square root this point sits on.
    pub branch: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// k_c in {pi, 2 pi}: the topological phase boundaries.
    Boundary,
    /// Interior critical momentum: an EL that moves no phase boundary.
    NonBoundary,
}

/// One family of exceptional-line solutions
/// Delta^2 = J0^2 cos^2(k_c/2) + delta^2 sin^2(k_c/2) at lambda = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ELCurve {
    /// Smallest grid index n representing this family.
    pub k_index: usize,
    pub k_c: f64,
    pub cos2_half: f64,
    pub kind: CurveKind,
    /// True exactly for the boundary curves.
    pub topological: bool,
    pub samples: Vec<ElPoint>,
}

/// Exceptional curves of the lambda = 0 plane, one per distinct
/// cos^2(k/2) value on the grid, swept over delta in [-3 J0, 3 J0].
/// The boundary families are emitted in exact closed form
/// (Delta = +-delta and Delta = +-J0).
pub fn el_curves(p: &RmParams) -> Vec<ELCurve> {
    let nn = p.n_cells;
    let j0 = p.j0;
    // Families are indexed by r = min(n, N - n): cos^2 is injective in r,
    // with r = 0 reached only by n = N.
    let mut reps: Vec<usize> = (1..=nn / 2).collect();
    reps.push(nn);
    let span = 3.0 * j0.abs().max(1e-9);
    let mut curves = Vec::with_capacity(reps.len());
    for rep in reps {
        let k = ModeK { n: rep, n_cells: nn };
        let c = k.cos_half();
        let s = k.sin_half();
        let cos2 = c * c;
        let boundary = k.is_boundary();
        let mut samples = Vec::with_capacity(2 * EL_SWEEP_POINTS);
        for i in 0..EL_SWEEP_POINTS {
            let t = i as f64 / (EL_SWEEP_POINTS - 1) as f64;
            let delta_hop = -span + 2.0 * span * t;
            for branch in [1i8, -1i8] {
                let big_delta = if k.is_two_pi() {
                    branch as f64 * j0
                } else if k.is_pi() {
                    branch as f64 * delta_hop
                } else {
                    branch as f64 * (j0 * j0 * cos2 + delta_hop * delta_hop * s * s).sqrt()
                };
                samples.push(ElPoint {
                    delta_hop,
                    big_delta,
                    branch,
                });
            }
        }
        curves.push(ELCurve {
            k_index: rep,
            k_c: k.k(),
            cos2_half: cos2,
            kind: if boundary {
                CurveKind::Boundary
            } else {
                CurveKind::NonBoundary
            },
            topological: boundary,
            samples,
        });
    }
    curves
}

/// The four boundary exceptional lines as oriented vortex filaments in
/// (lambda, Delta, delta)-space. Orientations put positive winding on
/// counterclockwise loops in the (lambda, Delta) plane.
pub fn boundary_filaments(j0: f64) -> [Filament; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        Filament {
            anchor: [0.0, j0, 0.0],
            direction: [0.0, 0.0, 1.0],
            sign: 1,
            label: FilamentLabel::BigDeltaPlusJ0,
        },
        Filament {
            anchor: [0.0, -j0, 0.0],
            direction: [0.0, 0.0, 1.0],
            sign: -1,
            label: FilamentLabel::BigDeltaMinusJ0,
        },
        Filament {
            anchor: [0.0, 0.0, 0.0],
            direction: [0.0, s, s],
            sign: 1,
            label: FilamentLabel::BigDeltaPlusDelta,
        },
        Filament {
            anchor: [0.0, 0.0, 0.0],
            direction: [0.0, -s, s],
            sign: -1,
            label: FilamentLabel::BigDeltaMinusDelta,
        },
    ]
}

/// Vortex fields of the k = 2 pi sector:
/// a_(0,+-) = (-Delta +- J0, lambda, 0) / (4 D_(0,-+)),
/// D_(0,+-) = (Delta +- J0)^2 + lambda^2. Realized through the 2x2
/// submodel so the component conventions cannot drift apart.
pub fn vortex_fields_0(j0: f64, x: [f64; 3]) -> Result<VortexFieldValue> {
    let v = curl_fields(&PauliParams::new(j0, x[0], x[1]))?;
    Ok(VortexFieldValue {
        a_plus: [v.a_plus[0], v.a_plus[1], 0.0],
        a_minus: [v.a_minus[0], v.a_minus[1], 0.0],
        d_plus: v.d_plus,
        d_minus: v.d_minus,
    })
}

/// Vortex fields of the k = pi sector:
/// a_(pi,+-) = (-Delta +- delta, lambda, -+ lambda) / (4 D_(pi,-+)),
/// D_(pi,+-) = (Delta +- delta)^2 + lambda^2.
pub fn vortex_fields_pi(x: [f64; 3]) -> Result<VortexFieldValue> {
    curl_fields(&PauliParams::new(x[2], x[0], x[1]))
}

/// Real part of the total connection as the four-filament vortex sum
/// (a_(0,+) - a_(0,-)) + (a_(pi,+) - a_(pi,-)).
pub fn combined_vortex_rm(j0: f64, x: [f64; 3]) -> Result<[f64; 3]> {
    let v0 = vortex_fields_0(j0, x)?;
    let vp = vortex_fields_pi(x)?;
    let mut out = [0.0; 3];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = v0.a_plus[i] - v0.a_minus[i] + vp.a_plus[i] - vp.a_minus[i];
    }
    Ok(out)
}

/// The chain's ground-state connection as a [`ConnectionField`] over
/// (lambda, Delta, delta), for loop quadrature.
#[derive(Debug, Clone, Copy)]
pub struct RmSpace {
    template: RmParams,
    h: f64,
}

impl RmSpace {
    pub fn new(j0: f64, n_cells: usize) -> Result<Self> {
        Ok(Self {
            template: RmParams::new(j0, 0.0, 0.0, 0.0, n_cells)?,
            h: RM_FD_STEP,
        })
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn params_at(&self, x: [f64; 3]) -> RmParams {
        self.template.with_point(x[0], x[1], x[2])
    }
}

impl ConnectionField for RmSpace {
    fn connection(&self, x: [f64; 3]) -> Result<ConnectionVector> {
        total_connection(&self.params_at(x), self.h)
    }

    fn el_distance(&self, x: [f64; 3]) -> f64 {
        el_distance_rm(&self.params_at(x))
    }
}

/// Quadrature phase, per-filament windings, and the flux prediction for a
/// closed loop in (lambda, Delta, delta)-space.
#[derive(Debug, Clone)]
pub struct RmLoopReport {
    pub phase: C64,
    pub windings: [(FilamentLabel, i64); 4],
    /// (pi/2) sum of signed windings over the four boundary filaments.
    pub predicted: f64,
}

/// Integrate the ground-state connection around a loop and compare against
/// the boundary-filament flux rule. The loop must keep the EL margin at
/// every sample; non-boundary ELs bound the margin but carry no flux.
pub fn rm_berry_phase(path: &ClosedPath, p: &RmParams) -> Result<RmLoopReport> {
    let space = RmSpace::new(p.j0, p.n_cells)?;
    let phase = berry_phase_line_integral(&space, path)?;
    let filaments = boundary_filaments(p.j0);
    let mut windings = [(FilamentLabel::BigDeltaPlusJ0, 0i64); 4];
    let mut weighted = 0i64;
    for (slot, f) in windings.iter_mut().zip(filaments.iter()) {
        let w = winding_number(path, f)?;
        *slot = (f.label, w);
        weighted += f.sign as i64 * w;
    }
    Ok(RmLoopReport {
        phase,
        windings,
        predicted: std::f64::consts::FRAC_PI_2 * weighted as f64,
    })
}

/// PT-unbroken test: the many-body spectrum is entirely real iff lambda
/// vanishes and every momentum bracket
/// J0^2 cos^2(k/2) + delta^2 sin^2(k/2) - Delta^2 stays positive.
pub fn real_spectrum_check(p: &RmParams) -> bool {
    if p.lambda != 0.0 {
        return false;
    }
    for n in 1..=p.n_cells {
        let k = ModeK { n, n_cells: p.n_cells };
        let c = k.cos_half();
        let s = k.sin_half();
        let bracket = p.j0 * p.j0 * c * c + p.delta_hop * p.delta_hop * s * s
            - p.big_delta * p.big_delta;
        if bracket <= 0.0 {
            return false;
        }
    }
    true
}

/// Obstruction to a parameter-independent chiral symmetry of one momentum
/// subspace.
///
/// A traceless involution C = c . sigma anticommutes with H = B . sigma
/// iff the bilinear c . B vanishes (the identity component of C is forced
/// to zero whenever B is nonzero), so a C working across parameter choices
/// exists iff the stacked B rows share a null vector. The absolute
/// determinant of three stacked rows measures that: zero at the critical
/// momenta (where one Pauli component dies for all parameters), bounded
/// away from zero at interior momenta.
pub fn chiral_obstruction(j0: f64, k: &ModeK, probes: &[[f64; 3]; 3]) -> f64 {
    let row = |x: &[f64; 3]| -> [C64; 3] {
        [
            C64::new(j0 * k.cos_half(), 0.0),
            C64::new(x[2] * k.sin_half(), 0.0),
            C64::new(-x[0], -x[1]),
        ]
    };
    let m: Vec<[C64; 3]> = probes.iter().map(row).collect();
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    det.norm()
}
