//! Acceptance gate: one test per shipped claim, each printing a single
//! pass/fail line. Seeds are fixed so every run exercises the same cases.

use std::time::Instant;

use vortexel::berry::connection_fd;
use vortexel::rice_mele::{self, ModeK, RmParams, RM_FD_STEP};
use vortexel::sampling::{self, random_pauli_loop, random_rm_point, random_rotation};
use vortexel::{
    berry_phase_line_integral, berry_phase_wilson, connection_analytic, eigenvalues, el_curves,
    gauge_residual_loop, k_grid, quantize, real_spectrum_check, rm_berry_phase, spectrum_k,
    spin_rotate, winding_numbers, Band, CurveKind, PauliSpace, RotatedPauliSpace,
};
use vortexel_cli::loopspec;

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

const QUANTIZATION_SEED: u64 = 1001;
const GAUGE_SEED: u64 = 1003;

fn wrap_angle(x: f64) -> f64 {
    (x + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI
}

fn fig4_params() -> RmParams {
    RmParams::new(1.0, 0.0, 0.0, 0.0, 8).unwrap()
}

#[test]
fn criterion_1_loop_phases_quantize() {
    let start = Instant::now();
    let mut rng = sampling::rng(QUANTIZATION_SEED);
    let mut max_residual = 0.0_f64;
    for i in 0..200 {
        let path = random_pauli_loop(&mut rng, 4096, 0.1);
        let phase = berry_phase_line_integral(&PauliSpace, &path).unwrap();
        let q = quantize(phase, 1e-4)
            .unwrap_or_else(|e| panic!("loop {i} not quantized: {e} (phase {phase})"));
        max_residual = max_residual.max(q.residual);
        assert!(phase.im.abs() < 1e-4, "loop {i}: Im = {}", phase.im);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "criterion 1: PASS - 200 random loops quantized to pi/2 multiples \
         (max residual {max_residual:.2e}, {elapsed:.2?})"
    );
}

#[test]
fn criterion_2_bundled_loops_reproduce_expected_coefficients() {
    let start = Instant::now();
    let params = fig4_params();
    let expected = [0i64, -1, 0, 1, -2, 2];
    for (name, want) in loopspec::BUNDLED_NAMES.iter().zip(expected) {
        let spec = loopspec::load(name).unwrap();
        assert_eq!(spec.expected_coefficient, Some(want), "{name} metadata");
        let path = spec.build_path(None).unwrap();
        let report = rm_berry_phase(&path, &params).unwrap();
        let err = (report.phase.re - want as f64 * HALF_PI).abs();
        assert!(err < 1e-3, "{name}: phase {} vs {want} pi/2", report.phase);
        assert!(report.phase.im.abs() < 1e-3, "{name}: Im {}", report.phase.im);
        let q = quantize(report.phase, 1e-3).unwrap();
        assert_eq!(q.coefficient, want, "{name}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 2: PASS - bundled loops give coefficients {{0, -1, 0, +1, -2, +2}} \
         within 1e-3 ({elapsed:.2?})"
    );
}

#[test]
fn criterion_3_vortex_gauge_residual_vanishes() {
    let mut rng = sampling::rng(GAUGE_SEED);
    let mut max_residual = 0.0_f64;
    for i in 0..100 {
        let path = random_pauli_loop(&mut rng, 4096, 0.1);
        let r = gauge_residual_loop(&path).unwrap().norm();
        assert!(r < 1e-4, "loop {i}: residual {r}");
        max_residual = max_residual.max(r);
    }
    println!(
        "criterion 3: PASS - 100 loops with |loop integral of (A - sum of vortex fields)| \
         < 1e-4 (max {max_residual:.2e})"
    );
}

#[test]
fn criterion_4_winding_predictor_matches_every_loop() {
    // Re-walk the loop streams of criteria 1-3 plus the bundled loops.
    let mut checked = 0;
    for (seed, count) in [(QUANTIZATION_SEED, 200), (GAUGE_SEED, 100)] {
        let mut rng = sampling::rng(seed);
        for i in 0..count {
            let path = random_pauli_loop(&mut rng, 4096, 0.1);
            let phase = berry_phase_line_integral(&PauliSpace, &path).unwrap();
            let q = quantize(phase, 1e-4).unwrap();
            let (wp, wm) = winding_numbers(&path).unwrap();
            assert_eq!(q.coefficient, wp - wm, "seed {seed} loop {i}");
            checked += 1;
        }
    }
    let params = fig4_params();
    for name in loopspec::BUNDLED_NAMES {
        let spec = loopspec::load(name).unwrap();
        let path = spec.build_path(None).unwrap();
        let report = rm_berry_phase(&path, &params).unwrap();
        let q = quantize(report.phase, 1e-3).unwrap();
        let predicted = (report.predicted / HALF_PI).round() as i64;
        assert_eq!(q.coefficient, predicted, "{name}");
        checked += 1;
    }
    println!(
        "criterion 4: PASS - flux predictor equals the quantized coefficient on all \
         {checked} loops"
    );
}

#[test]
fn criterion_5_reduction_and_cancellation() {
    let mut rng = sampling::rng(1005);
    let mut max_cancel = 0.0_f64;
    let mut max_reduce = 0.0_f64;
    for i in 0..100 {
        let p = random_rm_point(&mut rng, 1.0, 8, 0.05);
        for n in [1usize, 2, 3] {
            let k = ModeK::new(n, 8).unwrap();
            let a = rice_mele::connection_k(&p, &k, RM_FD_STEP).unwrap();
            let b = rice_mele::connection_k(&p, &k.reflected(), RM_FD_STEP).unwrap();
            let r = a.add(&b).norm();
            assert!(r < 1e-8, "point {i} pair {n}: {r}");
            max_cancel = max_cancel.max(r);
        }
        let total = rice_mele::total_connection(&p, RM_FD_STEP).unwrap();
        let closed = rice_mele::a0_closed(&p)
            .unwrap()
            .add(&rice_mele::api_closed(&p).unwrap());
        let r = total.sub(&closed).norm();
        assert!(r < 1e-8, "point {i}: reduction residual {r}");
        max_reduce = max_reduce.max(r);
    }
    println!(
        "criterion 5: PASS - 100 chain points: pair cancellation (max {max_cancel:.2e}) \
         and reduction to the two critical momenta (max {max_reduce:.2e}), both < 1e-8"
    );
}

#[test]
fn criterion_6_phase_diagram_fidelity() {
    let start = Instant::now();
    for n in [4usize, 8, 24] {
        let params = RmParams::new(1.0, 0.0, 0.0, 0.0, n).unwrap();
        let curves = el_curves(&params);
        assert_eq!(curves.len(), n / 2 + 1, "family count at N = {n}");
        let mut cos2: Vec<f64> = curves.iter().map(|c| c.cos2_half).collect();
        cos2.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cos2.dedup();
        assert_eq!(cos2.len(), curves.len(), "cos^2 values must be distinct");
        for c in &curves {
            let s2 = 1.0 - c.cos2_half;
            for p in &c.samples {
                let residual =
                    (p.big_delta * p.big_delta - (c.cos2_half + p.delta_hop * p.delta_hop * s2))
                        .abs();
                assert!(
                    residual < 1e-10,
                    "N = {n}, k_index {}: EL residual {residual}",
                    c.k_index
                );
                match c.kind {
                    // k_index n is the k = 2 pi family, n/2 is k = pi.
                    CurveKind::Boundary if c.k_index == n => assert!(
                        p.big_delta == p.branch as f64 * 1.0,
                        "red row must be exactly +-J0"
                    ),
                    CurveKind::Boundary => assert!(
                        p.big_delta == p.branch as f64 * p.delta_hop,
                        "green row must be exactly +-delta"
                    ),
                    CurveKind::NonBoundary => {}
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 6: PASS - N in {{4, 8, 24}} diagrams satisfy the EL condition to 1e-10 \
         with exact boundary rows and one family per distinct cos^2(k/2) ({elapsed:.2?})"
    );
}

#[test]
fn criterion_7_rotation_invariance() {
    let mut rng = sampling::rng(1007);
    let mut max_spec = 0.0_f64;
    let mut max_conn = 0.0_f64;
    for i in 0..100 {
        let p = sampling::random_pauli_point(&mut rng, 0.3);
        let x = p.coords();
        let (axis, theta) = random_rotation(&mut rng);
        let rotated = spin_rotate(&p, axis, theta).unwrap();
        let ds = (eigenvalues(&p).eps - rotated.eigenvalue().eps).norm();
        assert!(ds < 1e-10, "triple {i}: spectrum moved by {ds}");
        max_spec = max_spec.max(ds);

        let frame = RotatedPauliSpace::new(axis, theta).unwrap();
        let a_rot = connection_fd(&frame, x, 1e-4, Band::Plus, true).unwrap();
        let a_plain = connection_fd(&PauliSpace, x, 1e-4, Band::Plus, true).unwrap();
        let dc = a_rot.sub(&a_plain).norm();
        assert!(dc < 1e-10, "triple {i}: connection moved by {dc}");
        max_conn = max_conn.max(dc);

        let analytic = connection_analytic(&p).unwrap();
        assert!(a_plain.sub(&analytic).norm() < 1e-6 * (1.0 + analytic.norm()));
    }
    println!(
        "criterion 7: PASS - 100 rotated frames leave the spectrum (max {max_spec:.2e}) \
         and connection (max {max_conn:.2e}) invariant, both < 1e-10"
    );
}

#[test]
fn criterion_8_real_spectrum_dichotomy() {
    let mut rng = sampling::rng(1008);
    let grid = k_grid(8).unwrap();
    let mut real_count = 0;
    let mut binding_checked = 0;
    for i in 0..200 {
        let p = sampling::random_spectrum_probe(&mut rng, 1.0, 8);
        let predicted = real_spectrum_check(&p);
        let actual = grid.iter().all(|k| spectrum_k(&p, k).im.abs() < 1e-12);
        assert_eq!(predicted, actual, "probe {i} at {:?}", p.point());
        real_count += usize::from(actual);

        let [lambda, big_delta, delta_hop] = p.point();
        if lambda == 0.0 && delta_hop.abs() < p.j0() {
            // With |delta| < J0 the smallest bracket sits at k = pi.
            let bracket = |k: &ModeK| {
                let c = k.cos_half();
                let s = k.sin_half();
                p.j0() * p.j0() * c * c + delta_hop * delta_hop * s * s
                    - big_delta * big_delta
            };
            let k_pi = ModeK::new(4, 8).unwrap();
            let min = grid.iter().map(bracket).fold(f64::INFINITY, f64::min);
            assert!(
                bracket(&k_pi) <= min + 1e-12,
                "probe {i}: k = pi bracket is not the binding minimum"
            );
            binding_checked += 1;
        }
    }
    assert!(real_count > 10, "sweep never hit the real-spectrum side");
    assert!(real_count < 190, "sweep never hit the complex side");
    assert!(binding_checked > 10, "binding-bracket branch unexercised");
    println!(
        "criterion 8: PASS - 200 probes: spectrum is real iff lambda = 0 with positive \
         brackets ({real_count} real cases; k = pi binding in {binding_checked} checks)"
    );
}

#[test]
fn criterion_9_wilson_quadrature_agreement() {
    let mut rng = sampling::rng(QUANTIZATION_SEED);
    let mut swapped = 0;
    let mut max_diff = 0.0_f64;
    for i in 0..200 {
        let path = random_pauli_loop(&mut rng, 4096, 0.1);
        let quad = berry_phase_line_integral(&PauliSpace, &path).unwrap();
        let wil = berry_phase_wilson(&PauliSpace, &path).unwrap();
        let diff = wrap_angle(quad.re - wil.phase.re)
            .abs()
            .max(wil.phase.im.abs());
        assert!(diff < 1e-4, "loop {i}: disagreement {diff}");
        max_diff = max_diff.max(diff);
        swapped += usize::from(wil.band_swapped);
    }
    assert!(swapped > 0, "no band-swap loop was exercised");
    println!(
        "criterion 9: PASS - Wilson and quadrature phases agree mod 2 pi on 200 loops \
         (max {max_diff:.2e}; {swapped} band-swap cases)"
    );
}
