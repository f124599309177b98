//! Seeded random geometry and parameter generators for the verification
//! suites. Everything is deterministic given the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::path::ClosedPath;
use crate::pauli;
use crate::rice_mele::{el_distance_rm, RmParams};

/// Deterministic generator for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction by rejection from the cube.
pub fn unit_vector<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n2: f64 = v.iter().map(|c| c * c).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Uniform rotation sample as (axis, angle).
pub fn random_rotation<R: Rng>(rng: &mut R) -> ([f64; 3], f64) {
    (unit_vector(rng), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn loop_margin_ok(path: &ClosedPath, min_distance: f64, el_distance: impl Fn([f64; 3]) -> f64) -> bool {
    let n = path.n_samples();
    for (j, &x) in path.points().iter().take(n).enumerate() {
        let d = el_distance(x);
        if d < min_distance || d < 10.0 * path.local_step(j) {
            return false;
        }
    }
    true
}

/// Random admissible closed loop in (beta, gamma, alpha)-space: mostly
/// circles of random center, orientation, and radius, sometimes random
/// closed polylines. Every sample keeps `min_distance` and the ten-step
/// quadrature margin from both exceptional lines. Rejection sampling;
/// panics only if the margin is impossible to satisfy.
pub fn random_pauli_loop<R: Rng>(rng: &mut R, samples: usize, min_distance: f64) -> ClosedPath {
    for _ in 0..10_000 {
        let candidate = if rng.gen_bool(0.7) {
            let center = [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ];
            let normal = unit_vector(rng);
            let radius = rng.gen_range(0.2..1.5);
            let orientation = if rng.gen_bool(0.5) { 1 } else { -1 };
            ClosedPath::circle(center, normal, radius, samples, orientation)
        } else {
            let n_verts = rng.gen_range(5..=9);
            let mut verts = Vec::with_capacity(n_verts + 1);
            for _ in 0..n_verts {
                verts.push([
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                ]);
            }
            verts.push(verts[0]);
            ClosedPath::polyline(&verts, samples)
        };
        let Ok(path) = candidate else { continue };
        if loop_margin_ok(&path, min_distance, pauli::el_distance) {
            return path;
        }
    }
    panic!("no admissible loop found at margin {min_distance}");
}

/// Random 2x2 parameter point at least `margin` from both exceptional
/// lines. Rejection sampling.
pub fn random_pauli_point<R: Rng>(rng: &mut R, margin: f64) -> pauli::PauliParams {
    for _ in 0..10_000 {
        let x = [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ];
        if pauli::el_distance(x) >= margin {
            return pauli::PauliParams::from_coords(x);
        }
    }
    panic!("no admissible 2x2 point found at margin {margin}");
}

/// Random chain parameters with the given EL margin in
/// (lambda, Delta, delta)-space. Rejection sampling.
pub fn random_rm_point<R: Rng>(rng: &mut R, j0: f64, n_cells: usize, margin: f64) -> RmParams {
    for _ in 0..10_000 {
        let p = RmParams::new(
            j0,
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.5..1.5),
            n_cells,
        )
        .expect("even n_cells");
        if el_distance_rm(&p) >= margin {
            return p;
        }
    }
    panic!("no admissible chain point found at margin {margin}");
}

/// Random chain parameters for the reality-of-spectrum dichotomy: lambda
/// is exactly zero half the time and bounded away from zero otherwise, and
/// Delta stays away from zero so the PT test is sharp on both sides.
pub fn random_spectrum_probe<R: Rng>(rng: &mut R, j0: f64, n_cells: usize) -> RmParams {
    let lambda = if rng.gen_bool(0.5) {
        0.0
    } else {
        let mag = rng.gen_range(1e-3..0.8);
        if rng.gen_bool(0.5) {
            mag
        } else {
            -mag
        }
    };
    let big_delta = {
        let mag = rng.gen_range(0.05..1.4);
        if rng.gen_bool(0.5) {
            mag
        } else {
            -mag
        }
    };
    let delta_hop = rng.gen_range(-1.5..1.5);
    RmParams::new(j0, delta_hop, lambda, big_delta, n_cells).expect("even n_cells")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let mut a = rng(42);
        let mut b = rng(42);
        let la = random_pauli_loop(&mut a, 256, 0.1);
        let lb = random_pauli_loop(&mut b, 256, 0.1);
        assert_eq!(la.points(), lb.points());
        let pa = random_rm_point(&mut a, 1.0, 8, 0.1);
        let pb = random_rm_point(&mut b, 1.0, 8, 0.1);
        assert_eq!(pa.point(), pb.point());
    }

    #[test]
    fn unit_vectors_are_unit() {
        let mut r = rng(7);
        for _ in 0..100 {
            let v = unit_vector(&mut r);
            let n: f64 = v.iter().map(|c| c * c).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn loops_respect_margin() {
        let mut r = rng(3);
        for _ in 0..20 {
            let path = random_pauli_loop(&mut r, 512, 0.1);
            for &x in path.points() {
                assert!(pauli::el_distance(x) >= 0.1);
            }
        }
    }

    #[test]
    fn rm_points_respect_margin() {
        let mut r = rng(5);
        for _ in 0..50 {
            let p = random_rm_point(&mut r, 1.0, 8, 0.05);
            assert!(el_distance_rm(&p) >= 0.05);
        }
    }
}
