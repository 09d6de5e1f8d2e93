//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines as they complete.

use std::sync::Arc;

use num_complex::Complex64;

use dkp_s3::assembler::{assemble, AssemblyOptions, ComponentId, Field10};
use dkp_s3::field::PointEval;
use dkp_s3::geometry;
use dkp_s3::modes::{
    energy_nonzero_sigma, enumerate_modes, lambda_of, HelicityClass, ModeOutcome, ModeSpec,
};
use dkp_s3::profiles::{axial_phi2, barred_pair, radial_phi2};
use dkp_s3::verifier::{
    radial_oracle, spectrum_crosscheck, verify_all, verify_first_order_system, verify_helicity,
    verify_lorentz, verify_second_order, Grid2D, SecondOrderTarget,
};

const PI: f64 = std::f64::consts::PI;
const ORACLE_MESH: usize = 2000;

fn announce(index: u32, name: &str, passed: bool, detail: &str) {
    println!(
        "acceptance {:02} {:<26} {} ({})",
        index,
        name,
        if passed { "PASS" } else { "FAIL" },
        detail
    );
}

fn modes_up_to(max_n: u32) -> Vec<(i32, u32, u32)> {
    let mut out = Vec::new();
    for m in -(max_n as i32)..=(max_n as i32) {
        for n_r in 0..=(max_n - m.unsigned_abs()) {
            for n_z in 0..=(max_n - m.unsigned_abs() - n_r) {
                out.push((m, n_r, n_z));
            }
        }
    }
    out
}

#[test]
fn acceptance_01_radial_quantization() {
    let mut worst = 0.0f64;
    let mut passed = true;
    for m in [0i32, 1, -1, 2, -2, 3, -3] {
        let oracle = radial_oracle(m, 4, ORACLE_MESH).expect("radial oracle");
        for n_r in 0..4u32 {
            let exact = lambda_of(m, n_r);
            let dev = (oracle.eigenvalues[n_r as usize] - exact).abs();
            let tol = (1e-6 * exact).max(1e-7);
            worst = worst.max(dev / tol);
            if dev > tol {
                passed = false;
            }
        }
    }
    announce(
        1,
        "radial_quantization",
        passed,
        &format!("worst dev/tol {worst:.3e}"),
    );
    assert!(passed);
}

#[test]
fn acceptance_02_spectrum_nonzero_sigma() {
    let mut worst = 0.0f64;
    for mass in [0.0, 1.0, 3.0] {
        let table = spectrum_crosscheck(4, mass, HelicityClass::NonzeroSigmaPlus, ORACLE_MESH)
            .expect("crosscheck");
        worst = worst.max(table.max_rel_dev);
        for row in &table.rows {
            let expect = energy_nonzero_sigma(mass, row.m, row.n_r, row.n_z);
            assert!((row.epsilon_analytic - expect).abs() < 1e-14);
        }
    }
    let passed = worst <= 1e-6;
    announce(
        2,
        "spectrum_nonzero_sigma",
        passed,
        &format!("max rel dev {worst:.3e}"),
    );
    assert!(passed);
}

#[test]
fn acceptance_03_spectrum_zero_sigma() {
    let mut worst = 0.0f64;
    for mass in [1.0, 2.0] {
        let table = spectrum_crosscheck(4, mass, HelicityClass::ZeroSigma, ORACLE_MESH)
            .expect("crosscheck");
        worst = worst.max(table.max_rel_dev);
    }
    let passed = worst <= 1e-6;
    announce(
        3,
        "spectrum_zero_sigma",
        passed,
        &format!("max rel dev {worst:.3e}"),
    );
    assert!(passed);
}

fn assembled_nonzero_modes(max_n: u32, masses: &[f64]) -> Vec<Field10> {
    let opts = AssemblyOptions::default();
    let mut fields = Vec::new();
    for &mass in masses {
        for class in [
            HelicityClass::NonzeroSigmaPlus,
            HelicityClass::NonzeroSigmaMinus,
        ] {
            for (m, n_r, n_z) in modes_up_to(max_n) {
                let mode = ModeSpec::new(m, n_r, n_z, mass, class);
                fields.push(assemble(&mode, &opts).expect("assembly"));
            }
        }
    }
    fields
}

#[test]
fn acceptance_04_first_order_system() {
    let grid = Grid2D::default_verification();
    let mut worst = 0.0f64;
    let mut passed = true;
    for field in assembled_nonzero_modes(3, &[1.0, 3.0]) {
        let report = verify_first_order_system(&field, &field.mode, &grid, 1e-8);
        worst = worst.max(report.worst_relative());
        if !report.passed {
            passed = false;
            eprintln!("first-order failure for {:?}", field.mode);
        }
    }
    announce(
        4,
        "first_order_system",
        passed,
        &format!("worst rel {worst:.3e}"),
    );
    assert!(passed);
}

#[test]
fn acceptance_05_helicity_eigenequation() {
    let grid = Grid2D::default_verification();
    let mut worst = 0.0f64;
    let mut passed = true;
    for field in assembled_nonzero_modes(3, &[1.0, 3.0]) {
        let report = verify_helicity(&field, field.point.sigma, &grid, 1e-8);
        worst = worst.max(report.worst_relative());
        if !report.passed {
            passed = false;
            eprintln!("helicity failure for {:?}", field.mode);
        }
    }
    // mass shell: sigma^2 + epsilon^2 = M^2 for every spectral point
    let mut shell_worst = 0.0f64;
    for mass in [0.0, 1.0, 3.0] {
        let rows = enumerate_modes(
            4,
            mass,
            &[
                HelicityClass::NonzeroSigmaPlus,
                HelicityClass::NonzeroSigmaMinus,
            ],
        );
        for row in rows {
            if let ModeOutcome::Bound(p) = row.outcome {
                let shell = (p.sigma * p.sigma + p.epsilon * p.epsilon - mass * mass).norm();
                shell_worst = shell_worst.max(shell);
            }
        }
    }
    let shell_ok = shell_worst <= 1e-12;
    announce(
        5,
        "helicity_eigenequation",
        passed && shell_ok,
        &format!("worst rel {worst:.3e}, shell {shell_worst:.3e}"),
    );
    assert!(passed && shell_ok);
}

#[test]
fn acceptance_06_lorentz_condition() {
    let grid = Grid2D::default_verification();
    let opts = AssemblyOptions::default();
    let mut worst = 0.0f64;
    let mut passed = true;
    let representatives = [
        ModeSpec::new(1, 1, 0, 1.0, HelicityClass::NonzeroSigmaPlus),
        ModeSpec::new(-1, 0, 1, 3.0, HelicityClass::NonzeroSigmaMinus),
        ModeSpec::new(0, 0, 0, 1.0, HelicityClass::NonzeroSigmaPlus),
        ModeSpec::new(2, 0, 1, 0.0, HelicityClass::NonzeroSigmaPlus),
        ModeSpec::new(1, 0, 0, 1.0, HelicityClass::ZeroSigma),
        ModeSpec::new(0, 1, 1, 2.0, HelicityClass::ZeroSigma),
    ];
    for mode in representatives {
        let field = assemble(&mode, &opts).expect("assembly");
        let report = verify_lorentz(&field, &mode, &grid, 1e-8);
        worst = worst.max(report.worst_relative());
        if !report.passed {
            passed = false;
            eprintln!("lorentz failure for {mode:?}");
        }
    }

    // analytic identity: the barred combinations sum to -d_z phi2
    let mut identity_worst = 0.0f64;
    for mode in [
        ModeSpec::new(1, 1, 1, 1.0, HelicityClass::NonzeroSigmaPlus),
        ModeSpec::new(0, 2, 1, 3.0, HelicityClass::NonzeroSigmaMinus),
    ] {
        let point = mode.spectral_point().unwrap();
        let radial = Arc::new(radial_phi2(mode.m, mode.n_r));
        let axial = Arc::new(axial_phi2(&mode).unwrap());
        let pair = barred_pair(Arc::clone(&radial), Arc::clone(&axial), point.sigma);
        let mut scale = 0.0f64;
        let mut dev = 0.0f64;
        for &r in &grid.r_points {
            for &z in &grid.z_points {
                let b1 = pair.phi_bar_1.eval(r, z).v;
                let b3 = pair.phi_bar_3.eval(r, z).v;
                let dz = radial.eval(r).v * axial.eval_f(z).d1;
                scale = scale.max(b1.norm()).max(b3.norm()).max(dz.norm());
                dev = dev.max((b1 + b3 + dz).norm());
            }
        }
        identity_worst = identity_worst.max(dev / scale);
    }
    let identity_ok = identity_worst <= 1e-12;
    announce(
        6,
        "lorentz_condition",
        passed && identity_ok,
        &format!("worst rel {worst:.3e}, barred identity {identity_worst:.3e}"),
    );
    assert!(passed && identity_ok);
}

#[test]
fn acceptance_07_massless_transition() {
    // closed form is exact
    let mut exact_ok = true;
    for (m, n_r, n_z) in modes_up_to(4) {
        let n = m.unsigned_abs() + n_r + n_z;
        if energy_nonzero_sigma(0.0, m, n_r, n_z) != (n + 1) as f64 {
            exact_ok = false;
        }
    }
    // oracle composition at M = 0
    let table = spectrum_crosscheck(4, 0.0, HelicityClass::NonzeroSigmaPlus, ORACLE_MESH)
        .expect("crosscheck");
    let oracle_ok = table.max_rel_dev <= 1e-6;

    // assembled massless fields pass the full system, the helicity
    // equations, and the divergence constraint
    let grid = Grid2D::default_verification();
    let opts = AssemblyOptions::default();
    let mut residual_ok = true;
    let mut worst = 0.0f64;
    for class in [
        HelicityClass::NonzeroSigmaPlus,
        HelicityClass::NonzeroSigmaMinus,
    ] {
        for (m, n_r, n_z) in modes_up_to(3) {
            let mode = ModeSpec::new(m, n_r, n_z, 0.0, class);
            let field = assemble(&mode, &opts).expect("assembly");
            for report in verify_all(&field, &grid, 1e-8) {
                worst = worst.max(report.worst_relative());
                if !report.passed {
                    residual_ok = false;
                    eprintln!("massless residual failure for {mode:?}");
                }
            }
        }
    }
    let passed = exact_ok && oracle_ok && residual_ok;
    announce(
        7,
        "massless_transition",
        passed,
        &format!(
            "oracle dev {:.3e}, system worst rel {worst:.3e}",
            table.max_rel_dev
        ),
    );
    assert!(passed);
}

fn delta_of(p: &PointEval, r: f64, m: i32) -> Complex64 {
    let sr = r.sin();
    let cot = r.cos() / sr;
    let m2 = (m * m) as f64;
    0.5 * (-p.drr - cot * p.dr + m2 / (sr * sr) * p.v)
}

#[test]
fn acceptance_08_zero_sigma_structure() {
    let grid = Grid2D::default_verification();
    let opts = AssemblyOptions::default();
    let mut passed = true;
    let mut worst = 0.0f64;
    for mode in [
        ModeSpec::new(1, 0, 0, 1.0, HelicityClass::ZeroSigma),
        ModeSpec::new(0, 1, 0, 2.0, HelicityClass::ZeroSigma),
        ModeSpec::new(2, 0, 1, 1.0, HelicityClass::ZeroSigma),
        ModeSpec::new(0, 0, 1, 1.0, HelicityClass::ZeroSigma),
    ] {
        let field = assemble(&mode, &opts).expect("assembly");
        for j in 0..3 {
            if !field.h[j].is_zero() {
                passed = false;
            }
        }
        let q = field.point.epsilon * field.point.epsilon - mode.mass * mode.mass;
        let phi0_report = verify_second_order(
            SecondOrderTarget::ScalarPotential {
                field: &field.phi0,
                m: mode.m,
                weight: q,
            },
            &grid,
            1e-8,
        );
        let aux = field.zero_sigma_aux.as_ref().expect("zero-helicity aux");
        let bar_report = verify_second_order(
            SecondOrderTarget::BarredScalar {
                field: &aux.phi_bar,
                m: mode.m,
                weight: q,
            },
            &grid,
            1e-8,
        );
        worst = worst
            .max(phi0_report.worst_relative())
            .max(bar_report.worst_relative());
        if !phi0_report.passed || !bar_report.passed {
            passed = false;
            eprintln!("second-order failure for {mode:?}");
        }

        // consistency chain: Delta phi2 = -cos^2 z d_z phi_bar, and
        // i eps Delta Phi0 + (eps^2 - M^2) phi_bar = 0
        let i = Complex64::new(0.0, 1.0);
        let eps = field.point.epsilon;
        let mut chain_scale = 0.0f64;
        let mut chain_dev = 0.0f64;
        for &r in &grid.r_points {
            for &z in &grid.z_points {
                let c2 = z.cos() * z.cos();
                let p2 = aux.phi2_lower.eval(r, z);
                let pb = aux.phi_bar.eval(r, z);
                let p0 = field.phi0.eval(r, z);
                let t1 = delta_of(&p2, r, mode.m);
                let t2 = c2 * pb.dz;
                chain_scale = chain_scale.max(t1.norm()).max(t2.norm());
                chain_dev = chain_dev.max((t1 + t2).norm());
                let u1 = i * eps * delta_of(&p0, r, mode.m);
                let u2 = q * pb.v;
                chain_scale = chain_scale.max(u1.norm()).max(u2.norm());
                chain_dev = chain_dev.max((u1 + u2).norm());
            }
        }
        let chain_rel = if chain_scale > 0.0 {
            chain_dev / chain_scale
        } else {
            0.0
        };
        worst = worst.max(chain_rel);
        if chain_rel > 1e-8 {
            passed = false;
            eprintln!("chain failure for {mode:?}: {chain_rel:.3e}");
        }
    }
    announce(
        8,
        "zero_sigma_structure",
        passed,
        &format!("worst rel {worst:.3e}"),
    );
    assert!(passed);
}

#[test]
fn acceptance_09_geometry() {
    // deterministic pseudo-random interior points
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut tetrad_worst = 0.0f64;
    let mut christoffel_worst = 0.0f64;
    for _ in 0..100 {
        let r = 0.05 + (PI - 0.1) * next();
        let z = -PI / 2.0 + 0.05 + (PI - 0.1) * next();
        let e = geometry::tetrad_at(r, z).unwrap();
        let g = geometry::metric_at(r, z).unwrap();
        let eta = e.frame_metric(&g);
        for a in 0..4 {
            for b in 0..4 {
                let expect = match (a, b) {
                    (0, 0) => 1.0,
                    (x, y) if x == y => -1.0,
                    _ => 0.0,
                };
                tetrad_worst = tetrad_worst.max((eta[a][b] - expect).abs());
            }
        }
        let exact = geometry::christoffel_closed_form(r, z).unwrap();
        let fd = geometry::christoffel_numeric(r, z, geometry::DEFAULT_FD_STEP).unwrap();
        for lam in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    christoffel_worst = christoffel_worst
                        .max((exact.christoffel[lam][j][k] - fd.christoffel[lam][j][k]).abs());
                }
            }
        }
    }
    let passed = tetrad_worst <= 1e-12 && christoffel_worst <= 1e-6;
    announce(
        9,
        "geometry",
        passed,
        &format!("tetrad {tetrad_worst:.3e}, christoffel {christoffel_worst:.3e}"),
    );
    assert!(passed);
}

#[test]
fn acceptance_10_no_vacuous_passes() {
    let grid = Grid2D::default_verification();
    let opts = AssemblyOptions::default();
    let mut passed = true;
    let representatives = [
        ModeSpec::new(1, 0, 0, 1.0, HelicityClass::NonzeroSigmaPlus),
        ModeSpec::new(1, 0, 0, 0.0, HelicityClass::NonzeroSigmaPlus),
        ModeSpec::new(1, 0, 0, 1.0, HelicityClass::ZeroSigma),
    ];
    let mut checked = 0usize;
    for mode in representatives {
        let field = assemble(&mode, &opts).expect("assembly");
        assert!(
            verify_all(&field, &grid, 1e-8).iter().all(|r| r.passed),
            "clean field must pass before perturbation: {mode:?}"
        );
        for id in field.nonzero_components() {
            let perturbed = field.with_perturbed(id, 1e-3);
            let any_failed = verify_all(&perturbed, &grid, 1e-8)
                .iter()
                .any(|report| !report.passed);
            checked += 1;
            if !any_failed {
                passed = false;
                eprintln!("perturbing {} of {mode:?} went undetected", id.name());
            }
        }
    }
    announce(
        10,
        "no_vacuous_passes",
        passed,
        &format!("{checked} perturbed components all detected"),
    );
    assert!(passed);
}

#[test]
fn acceptance_components_stay_finite() {
    // supporting sanity: every assembled component used above is finite on
    // the verification grid
    let grid = Grid2D::default_verification();
    for field in assembled_nonzero_modes(2, &[1.0]) {
        for id in ComponentId::ALL {
            for &r in &grid.r_points {
                for &z in &grid.z_points {
                    assert!(field.component(id).eval(r, z).v.is_finite());
                }
            }
        }
    }
}
