//! The exact 2x2 non-Hermitian model `H = alpha sx + (beta + i gamma) sy`:
//! eigenvalues, biorthogonal eigenpairs, EP detection, and spin-rotation
//! covariance.
//!
//! Parameter space is the real triple (alpha, beta, gamma); every vector
//! quantity in this module and its consumers uses the fixed coordinate
//! ordering (beta, gamma, alpha).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default coalescence tolerance, in the natural units of the inputs.
pub const EP_TOL: f64 = 1e-9;

/// Tolerance scaled to the magnitude of the parameters it guards.
pub fn ep_tolerance(scale: f64) -> f64 {
    EP_TOL * scale.max(1.0)
}

/// Complex square root with the fixed branch `Re >= 0`, ties broken by
/// `Im >= 0`. Loop computations that need continuity do their own branch
/// tracking on top of this deterministic convention.
pub fn branch_sqrt(z: C64) -> C64 {
    let w = z.sqrt();
    if w.re < 0.0 || (w.re == 0.0 && w.im < 0.0) {
        -w
    } else {
        w
    }
}

/// Conjugating inner product `<a|b>` on C^2.
pub fn inner(a: &[C64; 2], b: &[C64; 2]) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

/// The real triple (alpha, beta, gamma): alpha multiplies sigma_x, and
/// beta + i gamma multiplies sigma_y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl PauliParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    /// Position of this parameter point in the fixed (beta, gamma, alpha)
    /// coordinate ordering.
    pub fn coords(&self) -> [f64; 3] {
        [self.beta, self.gamma, self.alpha]
    }

    /// Inverse of [`coords`](Self::coords).
    pub fn from_coords(x: [f64; 3]) -> Self {
        Self {
            alpha: x[2],
            beta: x[0],
            gamma: x[1],
        }
    }

    pub fn scale(&self) -> f64 {
        self.alpha.abs().max(self.beta.abs()).max(self.gamma.abs())
    }

    /// The matrix `[[0, alpha + gamma - i beta], [alpha - gamma + i beta, 0]]`.
    pub fn hamiltonian(&self) -> [[C64; 2]; 2] {
        let w = C64::new(self.alpha + self.gamma, -self.beta);
        let v = C64::new(self.alpha - self.gamma, self.beta);
        [[C64::new(0.0, 0.0), w], [v, C64::new(0.0, 0.0)]]
    }
}

/// The branch value eps; the spectrum is {+eps, -eps}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEigenvalue {
    pub eps: C64,
}

/// eps = sqrt(alpha^2 + (beta + i gamma)^2) under the fixed branch
/// convention. eps = 0 is a valid return at EPs and at the degenerate
/// origin.
pub fn eigenvalues(p: &PauliParams) -> ComplexEigenvalue {
    let off = C64::new(p.beta, p.gamma);
    ComplexEigenvalue {
        eps: branch_sqrt(C64::new(p.alpha * p.alpha, 0.0) + off * off),
    }
}

/// A right/left eigenvector pair of H and H^dagger with its eigenvalue,
/// normalized so that `<phi_s|psi_s'> = delta_ss'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiorthPair {
    pub psi_plus: [C64; 2],
    pub psi_minus: [C64; 2],
    pub phi_plus: [C64; 2],
    pub phi_minus: [C64; 2],
    pub eps: ComplexEigenvalue,
}

impl BiorthPair {
    pub fn psi(&self, band: Band) -> [C64; 2] {
        match band {
            Band::Plus => self.psi_plus,
            Band::Minus => self.psi_minus,
        }
    }

    pub fn phi(&self, band: Band) -> [C64; 2] {
        match band {
            Band::Plus => self.phi_plus,
            Band::Minus => self.phi_minus,
        }
    }
}

/// Band label of a biorthogonal pair: Plus carries eigenvalue +eps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Plus,
    Minus,
}

/// Biorthogonal eigenpairs in the gauge
///
/// ```text
/// psi_pm = (alpha - i beta + gamma, pm eps) / (sqrt(2) eps)
/// phi_pm = (alpha - i beta - gamma, pm eps*) / (sqrt(2) eps*)
/// ```
///
/// with no re-phasing; the analytic connection formula assumes exactly this
/// normalization.
pub fn biorth_pair(p: &PauliParams) -> Result<BiorthPair> {
    let eps = eigenvalues(p);
    let tol = ep_tolerance(p.scale());
    if eps.eps.norm() < tol {
        return Err(Error::EpDegenerate {
            eps_abs: eps.eps.norm(),
        });
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let top_psi = C64::new(p.alpha + p.gamma, -p.beta) / (sqrt2 * eps.eps);
    let top_phi = C64::new(p.alpha - p.gamma, -p.beta) / (sqrt2 * eps.eps.conj());
    // pm eps / (sqrt(2) eps) reduces to pm 1/sqrt(2) identically.
    let half = C64::new(1.0 / sqrt2, 0.0);
    Ok(BiorthPair {
        psi_plus: [top_psi, half],
        psi_minus: [top_psi, -half],
        phi_plus: [top_phi, half],
        phi_minus: [top_phi, -half],
        eps,
    })
}

/// True on the exceptional lines beta = 0, gamma = +-alpha, excluding the
/// degenerate origin where H = 0 is diagonalizable.
pub fn is_exceptional(p: &PauliParams, tol: f64) -> bool {
    p.beta.abs() <= tol
        && (p.gamma.abs() - p.alpha.abs()).abs() <= tol
        && p.alpha.abs().max(p.gamma.abs()) > tol
}

/// Exact Euclidean distance from a point in (beta, gamma, alpha) coordinates
/// to the nearer of the two exceptional lines (the lines through the origin
/// with directions (0, 1, 1)/sqrt(2) and (0, -1, 1)/sqrt(2)).
pub fn el_distance(x: [f64; 3]) -> f64 {
    let dist_to = |dir: [f64; 3]| -> f64 {
        let t = x[0] * dir[0] + x[1] * dir[1] + x[2] * dir[2];
        let d = [x[0] - t * dir[0], x[1] - t * dir[1], x[2] - t * dir[2]];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    dist_to([0.0, s, s]).min(dist_to([0.0, -s, s]))
}

/// Complex Pauli coefficients (bx, by, bz) of a general traceless 2x2
/// operator `bx sx + by sy + bz sz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliVector3 {
    pub bx: C64,
    pub by: C64,
    pub bz: C64,
}

impl PauliVector3 {
    pub fn matrix(&self) -> [[C64; 2]; 2] {
        let i = C64::i();
        [[self.bz, self.bx - i * self.by], [self.bx + i * self.by, -self.bz]]
    }

    /// Branch value of the spectrum +-sqrt(bx^2 + by^2 + bz^2).
    pub fn eigenvalue(&self) -> ComplexEigenvalue {
        ComplexEigenvalue {
            eps: branch_sqrt(self.bx * self.bx + self.by * self.by + self.bz * self.bz),
        }
    }

    /// Pauli coefficients of a 2x2 matrix with the trace discarded.
    pub fn from_matrix(m: &[[C64; 2]; 2]) -> Self {
        let i = C64::i();
        Self {
            bx: (m[0][1] + m[1][0]) / 2.0,
            by: i * (m[0][1] - m[1][0]) / 2.0,
            bz: (m[0][0] - m[1][1]) / 2.0,
        }
    }
}

/// Classical rotation matrix about a unit axis (Rodrigues form), acting as
/// an active rotation on coefficient vectors.
fn rotation_matrix(axis: [f64; 3], theta: f64) -> [[f64; 3]; 3] {
    let (s, c) = theta.sin_cos();
    let t = 1.0 - c;
    let [x, y, z] = axis;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

/// Pauli coefficients of `U H U^-1` with `U = exp(-i (n . sigma) theta / 2)`:
/// the complex coefficient vector (alpha, beta + i gamma, 0) rotated by the
/// classical rotation about `axis` by `theta`.
pub fn spin_rotate(p: &PauliParams, axis: [f64; 3], theta: f64) -> Result<PauliVector3> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let deviation = (norm - 1.0).abs();
    if deviation > 1e-12 {
        return Err(Error::BadAxis { deviation });
    }
    let r = rotation_matrix(axis, theta);
    let v = [
        C64::new(p.alpha, 0.0),
        C64::new(p.beta, p.gamma),
        C64::new(0.0, 0.0),
    ];
    let mut c = [C64::new(0.0, 0.0); 3];
    for (row, out) in r.iter().zip(c.iter_mut()) {
        *out = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    Ok(PauliVector3 {
        bx: c[0],
        by: c[1],
        bz: c[2],
    })
}

/// The spinor rotation `U = exp(-i (n . sigma) theta / 2)` itself.
pub fn spin_rotation_operator(axis: [f64; 3], theta: f64) -> Result<[[C64; 2]; 2]> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let deviation = (norm - 1.0).abs();
    if deviation > 1e-12 {
        return Err(Error::BadAxis { deviation });
    }
    let (s, c) = (theta / 2.0).sin_cos();
    let i = C64::i();
    // cos(t/2) I - i sin(t/2) (n . sigma)
    let n_sigma = PauliVector3 {
        bx: C64::new(axis[0], 0.0),
        by: C64::new(axis[1], 0.0),
        bz: C64::new(axis[2], 0.0),
    }
    .matrix();
    let mut u = [[C64::new(0.0, 0.0); 2]; 2];
    for (r, row) in u.iter_mut().enumerate() {
        for (col, entry) in row.iter_mut().enumerate() {
            let ident = if r == col { C64::new(c, 0.0) } else { C64::new(0.0, 0.0) };
            *entry = ident - i * s * n_sigma[r][col];
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigenvalue_hermitian_limit() {
        let eps = eigenvalues(&PauliParams::new(1.0, 0.0, 0.0)).eps;
        assert!((eps - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eigenvalue_vanishes_at_ep() {
        let eps = eigenvalues(&PauliParams::new(1.0, 0.0, 1.0)).eps;
        assert!(eps.norm() < 1e-15);
    }

    #[test]
    fn eigenvalue_principal_branch() {
        // (alpha, beta, gamma) = (0, 3, 4): eps = sqrt((3 + 4i)^2) = 3 + 4i.
        let eps = eigenvalues(&PauliParams::new(0.0, 3.0, 4.0)).eps;
        assert!((eps - c(3.0, 4.0)).norm() < 1e-12);
    }

    #[test]
    fn branch_convention_picks_nonnegative_real_part() {
        let z = c(-4.0, 0.0);
        let w = branch_sqrt(z);
        assert!(w.re == 0.0 && w.im == 2.0);
        let w2 = branch_sqrt(c(0.0, -2.0));
        assert!(w2.re >= 0.0);
        assert!((w2 * w2 - c(0.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn biorth_pair_hermitian_case() {
        let pair = biorth_pair(&PauliParams::new(1.0, 0.0, 0.0)).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((pair.psi_plus[0] - c(s, 0.0)).norm() < 1e-15);
        assert!((pair.psi_plus[1] - c(s, 0.0)).norm() < 1e-15);
        assert!((pair.psi_minus[1] + c(s, 0.0)).norm() < 1e-15);
        assert!((pair.phi_plus[0] - c(s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn biorth_pair_imaginary_entry_case() {
        // (alpha, beta, gamma) = (0, 1, 0): psi_pm = (-i, pm 1)/sqrt(2).
        let pair = biorth_pair(&PauliParams::new(0.0, 1.0, 0.0)).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((pair.psi_plus[0] - c(0.0, -s)).norm() < 1e-15);
        assert!((pair.psi_plus[1] - c(s, 0.0)).norm() < 1e-15);
        assert!((pair.phi_plus[0] - c(0.0, -s)).norm() < 1e-15);
        let ov = inner(&pair.phi_plus, &pair.psi_plus);
        assert!((ov - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn biorth_pair_rejects_ep() {
        match biorth_pair(&PauliParams::new(1.0, 0.0, 1.0)) {
            Err(Error::EpDegenerate { .. }) => {}
            other => panic!("expected EP_DEGENERATE, got {other:?}"),
        }
    }

    #[test]
    fn biorth_pair_solves_both_eigenproblems() {
        let p = PauliParams::new(0.7, -0.4, 1.3);
        let pair = biorth_pair(&p).unwrap();
        let h = p.hamiltonian();
        let eps = pair.eps.eps;
        for (vec, lambda) in [(pair.psi_plus, eps), (pair.psi_minus, -eps)] {
            let hv = [
                h[0][0] * vec[0] + h[0][1] * vec[1],
                h[1][0] * vec[0] + h[1][1] * vec[1],
            ];
            assert!((hv[0] - lambda * vec[0]).norm() < 1e-14);
            assert!((hv[1] - lambda * vec[1]).norm() < 1e-14);
        }
        // H^dagger phi = pm eps* phi.
        let hd = [
            [h[0][0].conj(), h[1][0].conj()],
            [h[0][1].conj(), h[1][1].conj()],
        ];
        for (vec, lambda) in [(pair.phi_plus, eps.conj()), (pair.phi_minus, -eps.conj())] {
            let hv = [
                hd[0][0] * vec[0] + hd[0][1] * vec[1],
                hd[1][0] * vec[0] + hd[1][1] * vec[1],
            ];
            assert!((hv[0] - lambda * vec[0]).norm() < 1e-14);
            assert!((hv[1] - lambda * vec[1]).norm() < 1e-14);
        }
    }

    #[test]
    fn exceptional_classification() {
        assert!(is_exceptional(&PauliParams::new(1.0, 0.0, 1.0), 1e-9));
        assert!(!is_exceptional(&PauliParams::new(1.0, 0.5, 1.0), 1e-9));
        // The origin is a degeneracy, not an EP.
        assert!(!is_exceptional(&PauliParams::new(0.0, 0.0, 0.0), 1e-9));
    }

    #[test]
    fn el_distance_exact_values() {
        assert!(el_distance([0.0, 1.0, 1.0]) < 1e-15);
        assert!((el_distance([1.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
        // (0, 0, 1): both lines at distance 1/sqrt(2).
        assert!((el_distance([0.0, 0.0, 1.0]) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn spin_rotate_identity() {
        let p = PauliParams::new(0.3, 1.1, -0.2);
        let out = spin_rotate(&p, [0.0, 0.0, 1.0], 0.0).unwrap();
        assert!((out.bx - c(0.3, 0.0)).norm() < 1e-15);
        assert!((out.by - c(1.1, -0.2)).norm() < 1e-15);
        assert!(out.bz.norm() < 1e-15);
    }

    #[test]
    fn spin_rotate_z_half_turn() {
        // axis = z, theta = pi, (alpha, beta, gamma) = (1, 0, 1) -> (-1, -i, 0).
        let out = spin_rotate(&PauliParams::new(1.0, 0.0, 1.0), [0.0, 0.0, 1.0], std::f64::consts::PI)
            .unwrap();
        assert!((out.bx - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((out.by - c(0.0, -1.0)).norm() < 1e-15);
        assert!(out.bz.norm() < 1e-15);
    }

    #[test]
    fn spin_rotate_matches_conjugation_oracle() {
        let p = PauliParams::new(0.8, -0.5, 0.9);
        let axis = {
            let raw = [0.3_f64, -0.7, 0.6];
            let n = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
            [raw[0] / n, raw[1] / n, raw[2] / n]
        };
        let theta = 0.77;
        let rotated = spin_rotate(&p, axis, theta).unwrap();

        let u = spin_rotation_operator(axis, theta).unwrap();
        let h = p.hamiltonian();
        // U H U^dagger (U is unitary for real axis and angle).
        let mut uh = [[c(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for col in 0..2 {
                uh[r][col] = u[r][0] * h[0][col] + u[r][1] * h[1][col];
            }
        }
        let mut uhu = [[c(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for col in 0..2 {
                uhu[r][col] = uh[r][0] * u[col][0].conj() + uh[r][1] * u[col][1].conj();
            }
        }
        let oracle = PauliVector3::from_matrix(&uhu);
        assert!((rotated.bx - oracle.bx).norm() < 1e-13);
        assert!((rotated.by - oracle.by).norm() < 1e-13);
        assert!((rotated.bz - oracle.bz).norm() < 1e-13);
    }

    #[test]
    fn rotation_preserves_ep_spectrum() {
        // Any rotation of the EP point (1, 0, 1) keeps eigenvalues {0, 0}.
        // eps^2 cancels to machine noise, so eps itself only reaches its
        // square root: assert at 1e-7, not 1e-12.
        let p = PauliParams::new(1.0, 0.0, 1.0);
        let axis = [std::f64::consts::FRAC_1_SQRT_2, 0.0, std::f64::consts::FRAC_1_SQRT_2];
        let out = spin_rotate(&p, axis, 1.234).unwrap();
        assert!(out.eigenvalue().eps.norm() < 1e-7);
    }

    #[test]
    fn spin_rotate_rejects_bad_axis() {
        match spin_rotate(&PauliParams::new(1.0, 0.0, 0.0), [0.0, 0.0, 1.1], 0.5) {
            Err(Error::BadAxis { .. }) => {}
            other => panic!("expected BAD_AXIS, got {other:?}"),
        }
    }

    #[test]
    fn chiral_anticommutation_is_exact() {
        // sz H sz = -H for every parameter point.
        let pts = [
            PauliParams::new(0.0, 0.0, 0.0),
            PauliParams::new(1.0, 2.0, -3.0),
            PauliParams::new(-0.25, 0.75, 0.5),
        ];
        for p in pts {
            let h = p.hamiltonian();
            // sz H sz flips the sign of the off-diagonal entries.
            assert_eq!(-h[0][1], -(h[0][1]));
            let szhsz = [[h[0][0], -h[0][1]], [-h[1][0], h[1][1]]];
            for r in 0..2 {
                for col in 0..2 {
                    assert_eq!(szhsz[r][col], -h[r][col]);
                }
            }
        }
    }
}
