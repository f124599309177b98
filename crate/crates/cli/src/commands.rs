//! Subcommand implementations. Each command renders either a
//! delimiter-separated table or a JSON document and writes it to stdout or
//! to `--out`.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64 as C64;
use serde_json::json;

use vortexel::berry::connection_fd;
use vortexel::rice_mele::{self, ModeK, RmParams, RM_FD_STEP};
use vortexel::sampling::{self, random_pauli_loop, random_rm_point, random_rotation};
use vortexel::{
    berry_phase_line_integral, berry_phase_wilson, boundary_filaments, connection_k, el_curves,
    eigenvalues, gauge_residual_loop, ground_energy, k_grid, pauli_filaments, predicted_phase,
    quantize, real_spectrum_check, rm_berry_phase, spectrum_k, spin_rotate, winding_numbers, Band,
    CurveKind, Error, Filament, PauliSpace, RotatedPauliSpace, WilsonResult,
};

use crate::loopspec::{self, LoopSpec, Space};
use crate::{emit, CliError, Format};

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

/// Quantization looser than the test suites: past this the phase is
/// reported but flagged NOT_QUANTIZED.
const REPORT_QUANTIZE_TOL: f64 = 1e-3;

pub fn phase_diagram(
    n: usize,
    j0: f64,
    out: Option<&PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    let params = RmParams::new(j0, 0.0, 0.0, 0.0, n)?;
    let curves = el_curves(&params);
    let kind_str = |k: &CurveKind| match k {
        CurveKind::Boundary => "boundary",
        CurveKind::NonBoundary => "non_boundary",
    };
    let text = match format {
        Format::Table => {
            let mut t = String::from("k_index,k_over_pi,branch,delta_hop,big_delta,kind\n");
            for c in &curves {
                let k_over_pi = c.k_c / std::f64::consts::PI;
                for s in &c.samples {
                    let _ = writeln!(
                        t,
                        "{},{},{},{},{},{}",
                        c.k_index,
                        k_over_pi,
                        s.branch,
                        s.delta_hop,
                        s.big_delta,
                        kind_str(&c.kind)
                    );
                }
            }
            t
        }
        Format::Doc => {
            let rows: Vec<_> = curves
                .iter()
                .flat_map(|c| {
                    let k_over_pi = c.k_c / std::f64::consts::PI;
                    let kind = kind_str(&c.kind);
                    c.samples.iter().map(move |s| {
                        json!({
                            "k_index": c.k_index,
                            "k_over_pi": k_over_pi,
                            "branch": s.branch,
                            "delta_hop": s.delta_hop,
                            "big_delta": s.big_delta,
                            "kind": kind,
                        })
                    })
                })
                .collect();
            let doc = json!({
                "schema_version": 1,
                "j0": j0,
                "n_cells": n,
                "curve_families": curves.len(),
                "rows": rows,
            });
            let mut t = doc.to_string();
            t.push('\n');
            t
        }
    };
    emit(out, &text)
}

struct LoopComputation {
    phase: C64,
    refined_phase: C64,
    refined_samples: usize,
    windings: Vec<(&'static str, i64)>,
    predicted: f64,
    wilson: Option<WilsonResult>,
}

fn compute_loop(spec: &LoopSpec, path: &vortexel::ClosedPath, n: usize, j0: f64) -> Result<LoopComputation, CliError> {
    let refined = path.refine();
    match spec.space {
        Space::Pauli => {
            let phase = berry_phase_line_integral(&PauliSpace, path)?;
            let refined_phase = berry_phase_line_integral(&PauliSpace, &refined)?;
            let (wp, wm) = winding_numbers(path)?;
            let filaments = pauli_filaments();
            Ok(LoopComputation {
                phase,
                refined_phase,
                refined_samples: refined.n_samples(),
                windings: vec![
                    (filaments[0].label.as_str(), wp),
                    (filaments[1].label.as_str(), wm),
                ],
                predicted: predicted_phase(wp, wm),
                wilson: Some(berry_phase_wilson(&PauliSpace, path)?),
            })
        }
        Space::Rm => {
            let params = RmParams::new(j0, 0.0, 0.0, 0.0, n)?;
            let report = rm_berry_phase(path, &params)?;
            let refined_report = rm_berry_phase(&refined, &params)?;
            Ok(LoopComputation {
                phase: report.phase,
                refined_phase: refined_report.phase,
                refined_samples: refined.n_samples(),
                windings: report
                    .windings
                    .iter()
                    .map(|(label, w)| (label.as_str(), *w))
                    .collect(),
                predicted: report.predicted,
                wilson: None,
            })
        }
    }
}

pub fn berry_phase(
    loop_arg: &str,
    samples: Option<usize>,
    n: usize,
    j0: f64,
    out: Option<&PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    let spec = loopspec::load(loop_arg)?;
    let path = spec.build_path(samples)?;
    let c = compute_loop(&spec, &path, n, j0)?;

    let (coefficient, residual, quantized) = match quantize(c.phase, REPORT_QUANTIZE_TOL) {
        Ok(q) => (q.coefficient, q.residual, true),
        Err(Error::NotQuantized {
            coefficient,
            residual,
        }) => {
            eprintln!(
                "warning: NOT_QUANTIZED: residual {residual:e} exceeds {REPORT_QUANTIZE_TOL:e} \
                 (nearest coefficient {coefficient})"
            );
            (coefficient, residual, false)
        }
        Err(e) => return Err(e.into()),
    };
    let predicted_coefficient = (c.predicted / HALF_PI).round() as i64;
    let convergence_delta = (c.phase - c.refined_phase).norm();
    let expected_match = spec
        .expected_coefficient
        .map(|e| e == coefficient && e == predicted_coefficient);

    let text = match format {
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "loop {loop_arg}");
            let _ = writeln!(t, "space {}", spec.space.as_str());
            let _ = writeln!(t, "kind {}", spec.kind());
            let _ = writeln!(t, "samples {}", path.n_samples());
            let _ = writeln!(t, "phase_re {}", c.phase.re);
            let _ = writeln!(t, "phase_im {}", c.phase.im);
            let _ = writeln!(t, "coefficient {coefficient}");
            let _ = writeln!(t, "residual {residual:e}");
            let _ = writeln!(t, "quantized {quantized}");
            let _ = writeln!(t, "predicted_coefficient {predicted_coefficient}");
            let _ = writeln!(t, "predicted_phase {}", c.predicted);
            for (label, w) in &c.windings {
                let _ = writeln!(t, "winding_{label} {w}");
            }
            let _ = writeln!(t, "refined_samples {}", c.refined_samples);
            let _ = writeln!(t, "refined_phase_re {}", c.refined_phase.re);
            let _ = writeln!(t, "refined_phase_im {}", c.refined_phase.im);
            let _ = writeln!(t, "convergence_delta {convergence_delta:e}");
            if let Some(w) = &c.wilson {
                let _ = writeln!(t, "wilson_phase_re {}", w.phase.re);
                let _ = writeln!(t, "wilson_phase_im {}", w.phase.im);
                let _ = writeln!(t, "wilson_band_swapped {}", w.band_swapped);
                let _ = writeln!(t, "wilson_traversals {}", w.traversals);
            }
            if let Some(e) = spec.expected_coefficient {
                let _ = writeln!(t, "expected_coefficient {e}");
                let _ = writeln!(t, "expected_match {}", expected_match.unwrap());
            }
            t
        }
        Format::Doc => {
            let windings: Vec<_> = c
                .windings
                .iter()
                .map(|(label, w)| json!({"filament": label, "winding": w}))
                .collect();
            let doc = json!({
                "schema_version": 1,
                "loop": loop_arg,
                "space": spec.space.as_str(),
                "kind": spec.kind(),
                "samples": path.n_samples(),
                "phase": {"re": c.phase.re, "im": c.phase.im},
                "coefficient": coefficient,
                "residual": residual,
                "quantized": quantized,
                "predicted_coefficient": predicted_coefficient,
                "predicted_phase": c.predicted,
                "windings": windings,
                "refined": {
                    "samples": c.refined_samples,
                    "phase": {"re": c.refined_phase.re, "im": c.refined_phase.im},
                    "convergence_delta": convergence_delta,
                },
                "wilson": c.wilson.as_ref().map(|w| json!({
                    "phase": {"re": w.phase.re, "im": w.phase.im},
                    "band_swapped": w.band_swapped,
                    "traversals": w.traversals,
                })),
                "expected_coefficient": spec.expected_coefficient,
                "expected_match": expected_match,
            });
            let mut t = serde_json::to_string_pretty(&doc).expect("serializable");
            t.push('\n');
            t
        }
    };
    emit(out, &text)
}

pub fn filaments(j0: f64, out: Option<&PathBuf>, format: Format) -> Result<(), CliError> {
    let pauli = pauli_filaments();
    let rm = boundary_filaments(j0);
    let rows: Vec<(&str, &Filament)> = pauli
        .iter()
        .map(|f| ("pauli", f))
        .chain(rm.iter().map(|f| ("rm", f)))
        .collect();
    let text = match format {
        Format::Table => {
            let mut t = String::from(
                "space,label,anchor_1,anchor_2,anchor_3,direction_1,direction_2,direction_3,sign\n",
            );
            for (space, f) in &rows {
                let _ = writeln!(
                    t,
                    "{},{},{},{},{},{},{},{},{}",
                    space,
                    f.label.as_str(),
                    f.anchor[0],
                    f.anchor[1],
                    f.anchor[2],
                    f.direction[0],
                    f.direction[1],
                    f.direction[2],
                    f.sign
                );
            }
            t
        }
        Format::Doc => {
            let items: Vec<_> = rows
                .iter()
                .map(|(space, f)| {
                    json!({
                        "space": space,
                        "label": f.label.as_str(),
                        "anchor": f.anchor,
                        "direction": f.direction,
                        "sign": f.sign,
                    })
                })
                .collect();
            let doc = json!({"schema_version": 1, "j0": j0, "filaments": items});
            let mut t = serde_json::to_string_pretty(&doc).expect("serializable");
            t.push('\n');
            t
        }
    };
    emit(out, &text)
}

pub fn eig(
    n: usize,
    j0: f64,
    delta: f64,
    lambda: f64,
    big_delta: f64,
    out: Option<&PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    let p = RmParams::new(j0, delta, lambda, big_delta, n)?;
    let grid = k_grid(n)?;
    let ground = ground_energy(&p)?;
    let real = real_spectrum_check(&p);
    let text = match format {
        Format::Table => {
            let mut t = String::from("n,k_over_pi,eps_re,eps_im\n");
            for k in &grid {
                let eps = spectrum_k(&p, k);
                let _ = writeln!(t, "{},{},{},{}", k.n(), k.k_over_pi(), eps.re, eps.im);
            }
            let _ = writeln!(t, "# ground_energy_re {}", ground.re);
            let _ = writeln!(t, "# ground_energy_im {}", ground.im);
            let _ = writeln!(t, "# real_spectrum {real}");
            t
        }
        Format::Doc => {
            let modes: Vec<_> = grid
                .iter()
                .map(|k| {
                    let eps = spectrum_k(&p, k);
                    json!({
                        "n": k.n(),
                        "k_over_pi": k.k_over_pi(),
                        "eps": {"re": eps.re, "im": eps.im},
                    })
                })
                .collect();
            let doc = json!({
                "schema_version": 1,
                "params": {"n_cells": n, "j0": j0, "delta_hop": delta,
                           "lambda": lambda, "big_delta": big_delta},
                "modes": modes,
                "ground_energy": {"re": ground.re, "im": ground.im},
                "real_spectrum": real,
            });
            let mut t = serde_json::to_string_pretty(&doc).expect("serializable");
            t.push('\n');
            t
        }
    };
    emit(out, &text)
}

/// One verification suite: a named batch of randomized cases reduced to
/// its worst residual.
pub struct Suite {
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub threshold: f64,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.threshold
    }
}

fn wrap_angle(x: f64) -> f64 {
    (x + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI
}

fn suite_quantization(seed: u64) -> Result<Suite, CliError> {
    let mut rng = sampling::rng(seed);
    let mut max_r = 0.0_f64;
    for _ in 0..24 {
        let path = random_pauli_loop(&mut rng, 4096, 0.1);
        let phase = berry_phase_line_integral(&PauliSpace, &path)?;
        let q = quantize(phase, f64::MAX)?;
        max_r = max_r.max(q.residual);
    }
    Ok(Suite {
        name: "quantization_2x2",
        cases: 24,
        max_residual: max_r,
        threshold: 1e-4,
    })
}

fn suite_predictor(seed: u64) -> Result<Suite, CliError> {
    // Same loop stream as the quantization suite; checks the integer side.
    let mut rng = sampling::rng(seed);
    let mut max_r = 0.0_f64;
    for _ in 0..24 {
        let path = random_pauli_loop(&mut rng, 4096, 0.1);
        let phase = berry_phase_line_integral(&PauliSpace, &path)?;
        let q = quantize(phase, f64::MAX)?;
        let (wp, wm) = winding_numbers(&path)?;
        max_r = max_r.max((q.coefficient - (wp - wm)).abs() as f64);
    }
    Ok(Suite {
        name: "winding_predictor",
        cases: 24,
        max_residual: max_r,
        threshold: 0.5,
    })
}

fn suite_wilson(seed: u64) -> Result<Suite, CliError> {
    let mut rng = sampling::rng(seed);
    let mut max_r = 0.0_f64;
    for _ in 0..8 {
        let path = random_pauli_loop(&mut rng, 4096, 0.1);
        let quad = berry_phase_line_integral(&PauliSpace, &path)?;
        let wil = berry_phase_wilson(&PauliSpace, &path)?;
        max_r = max_r
            .max(wrap_angle(quad.re - wil.phase.re).abs())
            .max(wil.phase.im.abs())
            .max(quad.im.abs());
    }
    Ok(Suite {
        name: "wilson_agreement",
        cases: 8,
        max_residual: max_r,
        threshold: 1e-4,
    })
}

fn suite_gauge(seed: u64) -> Result<Suite, CliError> {
    let mut rng = sampling::rng(seed);
    let mut max_r = 0.0_f64;
    for _ in 0..12 {
        let path = random_pauli_loop(&mut rng, 4096, 0.1);
        max_r = max_r.max(gauge_residual_loop(&path)?.norm());
    }
    Ok(Suite {
        name: "gauge_residual",
        cases: 12,
        max_residual: max_r,
        threshold: 1e-4,
    })
}

fn suite_rm_cancellation(seed: u64) -> Result<Suite, CliError> {
    let mut rng = sampling::rng(seed);
    let mut max_r = 0.0_f64;
    for _ in 0..16 {
        let p = random_rm_point(&mut rng, 1.0, 8, 0.1);
        for n in [1usize, 2, 3] {
            let k = ModeK::new(n, 8)?;
            let a = connection_k(&p, &k, RM_FD_STEP)?;
            let b = connection_k(&p, &k.reflected(), RM_FD_STEP)?;
            max_r = max_r.max(a.add(&b).norm());
        }
    }
    Ok(Suite {
        name: "rm_cancellation",
        cases: 16,
        max_residual: max_r,
        threshold: 1e-8,
    })
}

fn suite_rm_reduction(seed: u64) -> Result<Suite, CliError> {
    let mut rng = sampling::rng(seed);
    let mut max_r = 0.0_f64;
    for _ in 0..16 {
        let p = random_rm_point(&mut rng, 1.0, 8, 0.1);
        let total = rice_mele::total_connection(&p, RM_FD_STEP)?;
        let closed = rice_mele::a0_closed(&p)?.add(&rice_mele::api_closed(&p)?);
        max_r = max_r.max(total.sub(&closed).norm());
    }
    Ok(Suite {
        name: "rm_reduction",
        cases: 16,
        max_residual: max_r,
        threshold: 1e-8,
    })
}

fn suite_rotation(seed: u64) -> Result<Suite, CliError> {
    let mut rng = sampling::rng(seed);
    let mut max_r = 0.0_f64;
    for _ in 0..30 {
        let p = sampling::random_pauli_point(&mut rng, 0.3);
        let x = p.coords();
        let (axis, theta) = random_rotation(&mut rng);
        let rotated = spin_rotate(&p, axis, theta)?;
        let spectrum_r = (eigenvalues(&p).eps - rotated.eigenvalue().eps).norm();
        let frame = RotatedPauliSpace::new(axis, theta)?;
        let a_rot = connection_fd(&frame, x, 1e-4, Band::Plus, true)?;
        let a_plain = connection_fd(&PauliSpace, x, 1e-4, Band::Plus, true)?;
        max_r = max_r.max(spectrum_r).max(a_rot.sub(&a_plain).norm());
    }
    Ok(Suite {
        name: "rotation_invariance",
        cases: 30,
        max_residual: max_r,
        threshold: 1e-10,
    })
}

fn suite_real_spectrum(seed: u64) -> Result<Suite, CliError> {
    let mut rng = sampling::rng(seed);
    let grid = k_grid(8)?;
    let mut max_r = 0.0_f64;
    for _ in 0..100 {
        let p = sampling::random_spectrum_probe(&mut rng, 1.0, 8);
        let predicted = real_spectrum_check(&p);
        let actual = grid.iter().all(|k| spectrum_k(&p, k).im.abs() < 1e-12);
        if predicted != actual {
            max_r = 1.0;
        }
        let [lambda, big_delta, delta_hop] = p.point();
        if lambda == 0.0 && delta_hop.abs() < p.j0() {
            // The k = pi bracket must be the binding minimum.
            let bracket = |k: &ModeK| {
                let c = k.cos_half();
                let s = k.sin_half();
                p.j0() * p.j0() * c * c + delta_hop * delta_hop * s * s - big_delta * big_delta
            };
            let pi_mode = ModeK::new(4, 8)?;
            let min = grid.iter().map(|k| bracket(k)).fold(f64::INFINITY, f64::min);
            if bracket(&pi_mode) > min + 1e-12 {
                max_r = 1.0;
            }
        }
    }
    Ok(Suite {
        name: "real_spectrum",
        cases: 100,
        max_residual: max_r,
        threshold: 0.5,
    })
}

fn suite_fig4(_seed: u64) -> Result<Suite, CliError> {
    let params = RmParams::new(1.0, 0.0, 0.0, 0.0, 8)?;
    let mut max_r = 0.0_f64;
    for name in loopspec::BUNDLED_NAMES {
        let spec = loopspec::parse(loopspec::bundled(name).expect("bundled"))?;
        let path = spec.build_path(None)?;
        let report = rm_berry_phase(&path, &params)?;
        let expected = spec
            .expected_coefficient
            .ok_or_else(|| CliError::invalid(format!("{name} lacks expected_coefficient")))?;
        max_r = max_r
            .max((report.phase.re - expected as f64 * HALF_PI).abs())
            .max(report.phase.im.abs());
    }
    Ok(Suite {
        name: "fig4_loops",
        cases: 6,
        max_residual: max_r,
        threshold: 1e-3,
    })
}

pub fn run_suites(seed: u64) -> Result<Vec<Suite>, CliError> {
    // Distinct sub-streams per suite so adding one never reshuffles the rest.
    let sub = |i: u64| seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(i + 1));
    Ok(vec![
        suite_quantization(sub(0))?,
        suite_predictor(sub(0))?,
        suite_wilson(sub(1))?,
        suite_gauge(sub(2))?,
        suite_rm_cancellation(sub(3))?,
        suite_rm_reduction(sub(4))?,
        suite_rotation(sub(5))?,
        suite_real_spectrum(sub(6))?,
        suite_fig4(sub(7))?,
    ])
}

pub fn verify(
    seed: u64,
    threshold_override: Option<f64>,
    out: Option<&PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    let mut suites = run_suites(seed)?;
    if let Some(t) = threshold_override {
        for s in &mut suites {
            s.threshold = t;
        }
    }
    let failed = suites.iter().filter(|s| !s.passed()).count();
    let overall = if failed == 0 { "PASS" } else { "FAIL" };
    let text = match format {
        Format::Table => {
            let mut t = String::from("suite,cases,max_residual,threshold,status\n");
            for s in &suites {
                let _ = writeln!(
                    t,
                    "{},{},{:e},{:e},{}",
                    s.name,
                    s.cases,
                    s.max_residual,
                    s.threshold,
                    if s.passed() { "PASS" } else { "FAIL" }
                );
            }
            let _ = writeln!(t, "# seed {seed}");
            let _ = writeln!(t, "# overall {overall}");
            t
        }
        Format::Doc => {
            let items: Vec<_> = suites
                .iter()
                .map(|s| {
                    json!({
                        "name": s.name,
                        "cases": s.cases,
                        "max_residual": s.max_residual,
                        "threshold": s.threshold,
                        "status": if s.passed() { "PASS" } else { "FAIL" },
                    })
                })
                .collect();
            let doc = json!({
                "schema_version": 1,
                "seed": seed,
                "suites": items,
                "overall": overall,
            });
            let mut t = serde_json::to_string_pretty(&doc).expect("serializable");
            t.push('\n');
            t
        }
    };
    emit(out, &text)?;
    if failed > 0 {
        return Err(CliError::Failed(format!(
            "{failed} suite(s) exceeded their thresholds"
        )));
    }
    Ok(())
}
