//! Implementations of the five subcommands. Each returns the machine
//! payload, a one-line human summary, and whether the run counts as a
//! verification failure.

use num_complex::Complex64;

use dkp_s3::assembler::{assemble, AssemblyOptions, ComponentId, Field10};
use dkp_s3::geometry;
use dkp_s3::modes::{enumerate_modes, lambda_of, HelicityClass, ModeOutcome, ModeSpec};
use dkp_s3::profiles::{axial_phi2, radial_phi2};
use dkp_s3::verifier::{
    axial_oracle, radial_oracle, spectrum_crosscheck, verify_first_order_system, verify_helicity,
    verify_lorentz, verify_second_order, AxialShift, Grid2D, OracleResult, ResidualReport,
    SecondOrderTarget,
};

use crate::jsonout::{complex, Json};

pub const SCHEMA: &str = "dkp_s3/1";

pub struct Emitted {
    pub payload: String,
    pub summary: String,
    /// The run completed but a check failed (exit 1).
    pub failed: bool,
}

fn schema_header(command: &str) -> Vec<(&'static str, Json)> {
    vec![
        ("schema", Json::Str(SCHEMA.into())),
        ("command", Json::Str(command.to_string())),
    ]
}

pub fn parse_class(s: &str) -> Result<HelicityClass, String> {
    match s {
        "nonzero-plus" => Ok(HelicityClass::NonzeroSigmaPlus),
        "nonzero-minus" => Ok(HelicityClass::NonzeroSigmaMinus),
        "zero-sigma" => Ok(HelicityClass::ZeroSigma),
        other => Err(format!(
            "unknown class '{other}' (expected nonzero-plus, nonzero-minus, or zero-sigma)"
        )),
    }
}

pub fn parse_shift(s: &str) -> Result<AxialShift, String> {
    match s {
        "none" => Ok(AxialShift::None),
        "plus-one" => Ok(AxialShift::PlusOne),
        other => Err(format!(
            "unknown shift '{other}' (expected none or plus-one)"
        )),
    }
}

pub fn parse_perturbation(s: &str) -> Result<(ComponentId, f64), String> {
    let (name, amount) = s
        .split_once(':')
        .ok_or_else(|| format!("perturbation '{s}' must look like Phi2:1e-3"))?;
    let id = ComponentId::parse(name).ok_or_else(|| format!("unknown component '{name}'"))?;
    let amount: f64 = amount
        .parse()
        .map_err(|e| format!("bad perturbation amount '{amount}': {e}"))?;
    Ok((id, amount))
}

fn mode_json(mode: &ModeSpec) -> Json {
    Json::Object(vec![
        ("class", Json::Str(mode.class.name().into())),
        ("m", Json::Int(mode.m as i64)),
        ("n_r", Json::Int(mode.n_r as i64)),
        ("n_z", Json::Int(mode.n_z as i64)),
        ("M", Json::Float(mode.mass)),
    ])
}

pub fn cmd_spectrum(mass: f64, max_n: u32, classes: &[HelicityClass]) -> Emitted {
    let rows = enumerate_modes(max_n, mass, classes);
    let mut out_rows = Vec::with_capacity(rows.len());
    let mut bound = 0usize;
    let mut degenerate = 0usize;
    for row in &rows {
        let mut fields = vec![
            ("m", Json::Int(row.mode.m as i64)),
            ("n_r", Json::Int(row.mode.n_r as i64)),
            ("n_z", Json::Int(row.mode.n_z as i64)),
            ("class", Json::Str(row.mode.class.name().into())),
            ("M", Json::Float(row.mode.mass)),
        ];
        match &row.outcome {
            ModeOutcome::Bound(point) => {
                bound += 1;
                fields.push(("lambda", Json::Float(point.lambda)));
                fields.push(("epsilon", Json::Float(point.epsilon)));
                fields.push(("sigma_im", Json::Float(point.sigma.im)));
                fields.push(("degenerate", Json::Bool(false)));
            }
            ModeOutcome::Degenerate { reason } => {
                degenerate += 1;
                fields.push(("lambda", Json::Float(lambda_of(row.mode.m, row.mode.n_r))));
                fields.push(("epsilon", Json::Null));
                fields.push(("sigma_im", Json::Null));
                fields.push(("degenerate", Json::Bool(true)));
                fields.push(("reason", Json::Str(reason.clone())));
            }
        }
        out_rows.push(Json::Object(fields));
    }
    let mut doc = schema_header("spectrum");
    doc.push(("M", Json::Float(mass)));
    doc.push(("max_n", Json::Int(max_n as i64)));
    doc.push((
        "classes",
        Json::Array(classes.iter().map(|c| Json::Str(c.name().into())).collect()),
    ));
    doc.push(("rows", Json::Array(out_rows)));
    Emitted {
        payload: Json::Object(doc).render(),
        summary: format!(
            "spectrum: {bound} bound modes, {degenerate} degenerate (M={mass}, max_n={max_n})"
        ),
        failed: false,
    }
}

fn residual_report_json(name: &str, report: &ResidualReport) -> Json {
    let equations = report
        .per_equation
        .iter()
        .map(|eq| {
            Json::Object(vec![
                ("id", Json::Str(eq.id.into())),
                ("max_abs", Json::Float(eq.max_abs)),
                ("rms", Json::Float(eq.rms)),
                ("relative", Json::Float(eq.relative())),
                ("scale", Json::Float(eq.scale)),
                (
                    "worst_point",
                    Json::Object(vec![
                        ("r", Json::Float(eq.worst_point.0)),
                        ("z", Json::Float(eq.worst_point.1)),
                    ]),
                ),
                (
                    "worst_terms",
                    Json::Array(eq.worst_terms.iter().map(|t| Json::Float(*t)).collect()),
                ),
            ])
        })
        .collect();
    Json::Object(vec![
        ("name", Json::Str(name.to_string())),
        ("passed", Json::Bool(report.passed)),
        ("worst_relative", Json::Float(report.worst_relative())),
        ("scale", Json::Float(report.scale)),
        ("tolerance", Json::Float(report.tolerance)),
        ("equations", Json::Array(equations)),
    ])
}

pub struct VerifyConfig {
    pub mode: ModeSpec,
    pub tol: f64,
    pub grid_nr: usize,
    pub grid_nz: usize,
    pub margin: f64,
    pub ode_steps: usize,
    pub perturb: Option<(ComponentId, f64)>,
}

pub fn cmd_verify(config: &VerifyConfig) -> Result<Emitted, dkp_s3::Error> {
    let opts = AssemblyOptions {
        ode_steps: config.ode_steps,
        ..Default::default()
    };
    let clean = assemble(&config.mode, &opts)?;
    let field: Field10 = match config.perturb {
        Some((id, amount)) => clean.with_perturbed(id, amount),
        None => clean,
    };
    let grid = Grid2D::chebyshev(config.grid_nr, config.grid_nz, config.margin, config.margin);
    let tol = config.tol;

    let mut suites = vec![
        (
            "first_order_system",
            verify_first_order_system(&field, &config.mode, &grid, tol),
        ),
        (
            "helicity",
            verify_helicity(&field, field.point.sigma, &grid, tol),
        ),
        ("lorentz", verify_lorentz(&field, &config.mode, &grid, tol)),
    ];

    let radial = radial_phi2(config.mode.m, config.mode.n_r);
    suites.push((
        "radial_ode",
        verify_second_order(SecondOrderTarget::RadialOde(&radial), &grid, tol),
    ));
    let axial = axial_phi2(&config.mode)?;
    suites.push((
        "axial_ode",
        verify_second_order(SecondOrderTarget::AxialOscillator(&axial), &grid, tol),
    ));
    if let Some(aux) = &field.zero_sigma_aux {
        let q = field.point.epsilon * field.point.epsilon - config.mode.mass * config.mode.mass;
        suites.push((
            "scalar_potential_pde",
            verify_second_order(
                SecondOrderTarget::ScalarPotential {
                    field: &field.phi0,
                    m: config.mode.m,
                    weight: q,
                },
                &grid,
                tol,
            ),
        ));
        suites.push((
            "barred_scalar_pde",
            verify_second_order(
                SecondOrderTarget::BarredScalar {
                    field: &aux.phi_bar,
                    m: config.mode.m,
                    weight: q,
                },
                &grid,
                tol,
            ),
        ));
    }

    let passed = suites.iter().all(|(_, report)| report.passed);
    let worst = suites
        .iter()
        .fold(0.0f64, |a, (_, r)| a.max(r.worst_relative()));

    let mut doc = schema_header("verify");
    doc.push(("mode", mode_json(&config.mode)));
    doc.push((
        "spectral_point",
        Json::Object(vec![
            ("lambda", Json::Float(field.point.lambda)),
            ("epsilon", Json::Float(field.point.epsilon)),
            ("sigma", complex(field.point.sigma.re, field.point.sigma.im)),
            ("principal_n", Json::Int(field.point.principal_n as i64)),
        ]),
    ));
    doc.push(("tolerance", Json::Float(tol)));
    doc.push((
        "perturbation",
        match config.perturb {
            Some((id, amount)) => Json::Object(vec![
                ("component", Json::Str(id.name().into())),
                ("amount", Json::Float(amount)),
            ]),
            None => Json::Null,
        },
    ));
    doc.push((
        "grid",
        Json::Object(vec![
            ("nr", Json::Int(config.grid_nr as i64)),
            ("nz", Json::Int(config.grid_nz as i64)),
            ("margin", Json::Float(config.margin)),
        ]),
    ));
    doc.push((
        "suites",
        Json::Array(
            suites
                .iter()
                .map(|(name, report)| residual_report_json(name, report))
                .collect(),
        ),
    ));
    doc.push(("passed", Json::Bool(passed)));

    Ok(Emitted {
        payload: Json::Object(doc).render(),
        summary: format!(
            "verify: {} (worst relative residual {worst:.3e} at tol {:.1e})",
            if passed { "PASS" } else { "FAIL" },
            tol
        ),
        failed: !passed,
    })
}

pub struct ProfileConfig {
    pub mode: ModeSpec,
    pub grid_nr: usize,
    pub grid_nz: usize,
    pub margin: f64,
    pub ode_steps: usize,
}

pub fn cmd_profile(config: &ProfileConfig) -> Result<Emitted, dkp_s3::Error> {
    let opts = AssemblyOptions {
        ode_steps: config.ode_steps,
        ..Default::default()
    };
    let field = assemble(&config.mode, &opts)?;
    let grid = Grid2D::uniform(config.grid_nr, config.grid_nz, config.margin, config.margin);

    let mut csv = String::from("r,z");
    for id in ComponentId::ALL {
        let lower = id.name().to_ascii_lowercase();
        csv.push_str(&format!(",{lower}_re,{lower}_im"));
    }
    csv.push('\n');
    for &r in &grid.r_points {
        for &z in &grid.z_points {
            csv.push_str(&crate::jsonout::fmt_f64(r));
            csv.push(',');
            csv.push_str(&crate::jsonout::fmt_f64(z));
            for id in ComponentId::ALL {
                let v: Complex64 = field.component(id).eval(r, z).v;
                csv.push(',');
                csv.push_str(&crate::jsonout::fmt_f64(v.re));
                csv.push(',');
                csv.push_str(&crate::jsonout::fmt_f64(v.im));
            }
            csv.push('\n');
        }
    }
    let rows = config.grid_nr * config.grid_nz;
    Ok(Emitted {
        payload: csv,
        summary: format!(
            "profile: {rows} samples on a {}x{} grid",
            config.grid_nr, config.grid_nz
        ),
        failed: false,
    })
}

fn oracle_rows(
    result: &OracleResult,
    analytic: impl Fn(usize) -> f64,
    tol: impl Fn(f64) -> f64,
) -> (Vec<Json>, bool, f64) {
    let mut rows = Vec::new();
    let mut passed = true;
    let mut worst = 0.0f64;
    for (k, (num, est)) in result
        .eigenvalues
        .iter()
        .zip(result.richardson_estimate.iter())
        .enumerate()
    {
        let exact = analytic(k);
        let dev = (num - exact).abs();
        let ok = dev <= tol(exact);
        passed &= ok;
        worst = worst.max(dev / tol(exact));
        rows.push(Json::Object(vec![
            ("index", Json::Int(k as i64)),
            ("analytic", Json::Float(exact)),
            ("numeric", Json::Float(*num)),
            ("abs_dev", Json::Float(dev)),
            ("richardson_error", Json::Float(*est)),
            ("passed", Json::Bool(ok)),
        ]));
    }
    (rows, passed, worst)
}

pub fn cmd_oracle_radial(
    m: i32,
    count: usize,
    mesh: usize,
    tol: f64,
) -> Result<Emitted, dkp_s3::Error> {
    let result = radial_oracle(m, count, mesh)?;
    let (rows, passed, worst) = oracle_rows(
        &result,
        |k| lambda_of(m, k as u32),
        |exact| (tol * exact).max(1e-7),
    );
    let mut doc = schema_header("oracle");
    doc.push(("kind", Json::Str("radial".into())));
    doc.push(("m", Json::Int(m as i64)));
    doc.push(("mesh", Json::Int(mesh as i64)));
    doc.push(("fine_mesh", Json::Int(result.mesh_size as i64)));
    doc.push(("tolerance", Json::Float(tol)));
    doc.push(("rows", Json::Array(rows)));
    doc.push(("passed", Json::Bool(passed)));
    Ok(Emitted {
        payload: Json::Object(doc).render(),
        summary: format!(
            "oracle radial m={m}: {} (worst dev/tol {worst:.3e})",
            if passed { "PASS" } else { "FAIL" }
        ),
        failed: !passed,
    })
}

pub fn cmd_oracle_axial(
    lambda: f64,
    shift: AxialShift,
    count: usize,
    mesh: usize,
    tol: f64,
) -> Result<Emitted, dkp_s3::Error> {
    let result = axial_oracle(lambda, shift, count, mesh)?;
    // bound-state levels of the trigonometric well: s_k = k + 1/2 + sqrt(4 lambda + 1)/2
    let order = 0.5 + 0.5 * (4.0 * lambda + 1.0).sqrt();
    let (rows, passed, worst) = oracle_rows(
        &result,
        |k| {
            let s = k as f64 + order;
            s * s
        },
        |exact| (tol * exact).max(1e-7),
    );
    let mut doc = schema_header("oracle");
    doc.push(("kind", Json::Str("axial".into())));
    doc.push(("lambda", Json::Float(lambda)));
    doc.push((
        "shift",
        Json::Str(match shift {
            AxialShift::None => "none".into(),
            AxialShift::PlusOne => "plus-one".into(),
        }),
    ));
    doc.push(("mesh", Json::Int(mesh as i64)));
    doc.push(("fine_mesh", Json::Int(result.mesh_size as i64)));
    doc.push(("tolerance", Json::Float(tol)));
    doc.push(("rows", Json::Array(rows)));
    doc.push(("passed", Json::Bool(passed)));
    Ok(Emitted {
        payload: Json::Object(doc).render(),
        summary: format!(
            "oracle axial lambda={lambda}: {} (worst dev/tol {worst:.3e})",
            if passed { "PASS" } else { "FAIL" }
        ),
        failed: !passed,
    })
}

pub fn cmd_oracle_crosscheck(
    max_n: u32,
    mass: f64,
    class: HelicityClass,
    mesh: usize,
    tol: f64,
) -> Result<Emitted, dkp_s3::Error> {
    let table = spectrum_crosscheck(max_n, mass, class, mesh)?;
    let rows: Vec<Json> = table
        .rows
        .iter()
        .map(|row| {
            Json::Object(vec![
                ("m", Json::Int(row.m as i64)),
                ("n_r", Json::Int(row.n_r as i64)),
                ("n_z", Json::Int(row.n_z as i64)),
                ("lambda_analytic", Json::Float(row.lambda_analytic)),
                ("lambda_numeric", Json::Float(row.lambda_numeric)),
                ("s_analytic", Json::Float(row.s_analytic)),
                ("s_numeric", Json::Float(row.s_numeric)),
                ("epsilon_analytic", Json::Float(row.epsilon_analytic)),
                ("epsilon_numeric", Json::Float(row.epsilon_numeric)),
                ("rel_dev", Json::Float(row.rel_dev)),
                ("degenerate", Json::Bool(row.degenerate)),
            ])
        })
        .collect();
    let passed = table.max_rel_dev <= tol;
    let mut doc = schema_header("oracle");
    doc.push(("kind", Json::Str("crosscheck".into())));
    doc.push(("class", Json::Str(class.name().into())));
    doc.push(("M", Json::Float(mass)));
    doc.push(("max_n", Json::Int(max_n as i64)));
    doc.push(("mesh", Json::Int(mesh as i64)));
    doc.push(("tolerance", Json::Float(tol)));
    doc.push(("max_rel_dev", Json::Float(table.max_rel_dev)));
    doc.push(("rows", Json::Array(rows)));
    doc.push(("passed", Json::Bool(passed)));
    Ok(Emitted {
        payload: Json::Object(doc).render(),
        summary: format!(
            "oracle crosscheck {} M={mass}: {} (max rel dev {:.3e})",
            class.name(),
            if passed { "PASS" } else { "FAIL" },
            table.max_rel_dev
        ),
        failed: !passed,
    })
}

/// Deterministic xorshift64* stream for the geometry spot checks.
struct XorShift(u64);

impl XorShift {
    fn next_unit(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0.wrapping_mul(0x2545_f491_4f6c_dd1d) >> 11) as f64 / (1u64 << 53) as f64
    }
}

pub fn cmd_geometry_check(
    points: usize,
    seed: u64,
    fd_step: f64,
) -> Result<Emitted, dkp_s3::Error> {
    const PI: f64 = std::f64::consts::PI;
    let mut rng = XorShift(seed | 1);
    let mut tetrad_max = 0.0f64;
    let mut christoffel_max = 0.0f64;
    let mut ricci_max = 0.0f64;
    let mut det_max = 0.0f64;
    for _ in 0..points {
        let r = 0.05 + (PI - 0.1) * rng.next_unit();
        let z = -PI / 2.0 + 0.05 + (PI - 0.1) * rng.next_unit();
        let e = geometry::tetrad_at(r, z)?;
        let g = geometry::metric_at(r, z)?;
        let eta = e.frame_metric(&g);
        for a in 0..4 {
            for b in 0..4 {
                let expect = match (a, b) {
                    (0, 0) => 1.0,
                    (x, y) if x == y => -1.0,
                    _ => 0.0,
                };
                tetrad_max = tetrad_max.max((eta[a][b] - expect).abs());
            }
        }
        let exact = geometry::christoffel_closed_form(r, z)?;
        let fd = geometry::christoffel_numeric(r, z, fd_step)?;
        for lam in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    christoffel_max = christoffel_max
                        .max((exact.christoffel[lam][j][k] - fd.christoffel[lam][j][k]).abs());
                }
            }
        }
        ricci_max = ricci_max
            .max((exact.ricci_rotation.gamma_122 - fd.ricci_rotation.gamma_122).abs())
            .max((exact.ricci_rotation.gamma_311 - fd.ricci_rotation.gamma_311).abs())
            .max((exact.ricci_rotation.gamma_322 - fd.ricci_rotation.gamma_322).abs());
        let det = geometry::metric_determinant_negated(r, z)?;
        let expect = z.cos().powi(4) * r.sin() * r.sin();
        det_max = det_max.max((det - expect).abs());
    }
    let passed =
        tetrad_max <= 1e-12 && christoffel_max <= 1e-6 && ricci_max <= 1e-6 && det_max <= 1e-12;
    let mut doc = schema_header("geometry-check");
    doc.push(("points", Json::Int(points as i64)));
    doc.push(("seed", Json::Int(seed as i64)));
    doc.push(("fd_step", Json::Float(fd_step)));
    doc.push(("tetrad_max_err", Json::Float(tetrad_max)));
    doc.push(("christoffel_max_err", Json::Float(christoffel_max)));
    doc.push(("ricci_max_err", Json::Float(ricci_max)));
    doc.push(("det_max_err", Json::Float(det_max)));
    doc.push(("tetrad_tolerance", Json::Float(1e-12)));
    doc.push(("christoffel_tolerance", Json::Float(1e-6)));
    doc.push(("passed", Json::Bool(passed)));
    Ok(Emitted {
        payload: Json::Object(doc).render(),
        summary: format!(
            "geometry-check: {} (tetrad {tetrad_max:.3e}, christoffel {christoffel_max:.3e})",
            if passed { "PASS" } else { "FAIL" }
        ),
        failed: !passed,
    })
}

pub fn error_payload(err: &dkp_s3::Error) -> String {
    let kind = match err {
        dkp_s3::Error::Domain { .. } => "domain",
        dkp_s3::Error::Convergence { .. } => "convergence",
        dkp_s3::Error::Pole { .. } => "pole",
        dkp_s3::Error::DegenerateEnergy { .. } => "degenerate-energy",
        dkp_s3::Error::BelowThreshold { .. } => "below-threshold",
        dkp_s3::Error::InternalConsistency { .. } => "internal-consistency",
        dkp_s3::Error::Assembly(_) => "assembly",
        dkp_s3::Error::Inversion(_) => "inversion",
        dkp_s3::Error::Eigensolver(_) => "eigensolver",
    };
    Json::Object(vec![
        ("schema", Json::Str(SCHEMA.into())),
        (
            "error",
            Json::Object(vec![
                ("kind", Json::Str(kind.into())),
                ("message", Json::Str(err.to_string())),
            ]),
        ),
    ])
    .render()
}
