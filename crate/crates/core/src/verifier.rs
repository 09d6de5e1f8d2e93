//! Residual engines for every equation family and independent
//! finite-difference eigenvalue oracles.
//!
//! The residual engines evaluate the assembled components with their
//! analytic derivatives, so every reported residual reflects the algebraic
//! construction rather than finite-difference noise. Residuals are
//! normalized per equation by the largest term magnitude seen on the grid;
//! profiles carry no physical normalization, so only relative residuals are
//! meaningful.
//!
//! The oracles discretize the separated radial and axial operators as
//! symmetric tridiagonal matrices and extract the lowest eigenvalues by
//! Sturm-sequence bisection, then Richardson-extrapolate over a mesh
//! doubling. They never touch the closed-form spectra, which is what makes
//! the spectrum crosscheck meaningful.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::assembler::Field10;
use crate::error::{Error, Result};
use crate::field::{Component, PointEval};
use crate::modes::{energy_nonzero_sigma, energy_zero_sigma, lambda_of, HelicityClass, ModeSpec};
use crate::profiles::{
    ladder_coefficients, AxialKind, AxialProfile, Ladder, RadialProfile, LADDER_GAMMA,
};

const PI: f64 = std::f64::consts::PI;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Interior evaluation lattice with boundary margins and Chebyshev-like
/// clustering toward the singular edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    pub r_points: Vec<f64>,
    pub z_points: Vec<f64>,
    pub margin_r: f64,
    pub margin_z: f64,
}

fn chebyshev_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut pts: Vec<f64> = (0..n)
        .map(|j| mid + half * (PI * (2.0 * j as f64 + 1.0) / (2.0 * n as f64)).cos())
        .collect();
    pts.sort_by(f64::total_cmp);
    pts
}

impl Grid2D {
    pub fn chebyshev(nr: usize, nz: usize, margin_r: f64, margin_z: f64) -> Grid2D {
        Grid2D {
            r_points: chebyshev_points(margin_r, PI - margin_r, nr),
            z_points: chebyshev_points(-PI / 2.0 + margin_z, PI / 2.0 - margin_z, nz),
            margin_r,
            margin_z,
        }
    }

    /// 64 x 64 lattice with margins wide enough to keep the 1/sin r and
    /// 1/cos z factors below ~1e3.
    pub fn default_verification() -> Grid2D {
        Grid2D::chebyshev(64, 64, 1e-3, 1e-3)
    }

    /// Uniform interior lattice, used by the profile sampler.
    pub fn uniform(nr: usize, nz: usize, margin_r: f64, margin_z: f64) -> Grid2D {
        let r_span = PI - 2.0 * margin_r;
        let z_span = PI - 2.0 * margin_z;
        Grid2D {
            r_points: (0..nr)
                .map(|i| margin_r + r_span * (i as f64 + 0.5) / nr as f64)
                .collect(),
            z_points: (0..nz)
                .map(|i| -PI / 2.0 + margin_z + z_span * (i as f64 + 0.5) / nz as f64)
                .collect(),
            margin_r,
            margin_z,
        }
    }
}

/// Residual statistics for a single equation.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationResidual {
    pub id: &'static str,
    pub max_abs: f64,
    pub rms: f64,
    pub worst_point: (f64, f64),
    /// Magnitudes of the individual terms at the worst point.
    pub worst_terms: Vec<f64>,
    /// Largest term magnitude over the whole grid; the relative residual is
    /// max_abs / scale.
    pub scale: f64,
}

impl EquationResidual {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.max_abs / self.scale
        } else {
            0.0
        }
    }
}

/// Pass/fail report over one family of equations.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub per_equation: Vec<EquationResidual>,
    /// Largest term magnitude across all equations.
    pub scale: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ResidualReport {
    fn from_accumulators(accs: Vec<EqAcc>, tolerance: f64) -> ResidualReport {
        let per_equation: Vec<EquationResidual> = accs.into_iter().map(EqAcc::finish).collect();
        let scale = per_equation.iter().fold(0.0f64, |a, e| a.max(e.scale));
        let passed = per_equation
            .iter()
            .all(|e| e.max_abs <= tolerance * e.scale);
        ResidualReport {
            per_equation,
            scale,
            tolerance,
            passed,
        }
    }

    /// Largest relative residual over the equations.
    pub fn worst_relative(&self) -> f64 {
        self.per_equation
            .iter()
            .fold(0.0f64, |a, e| a.max(e.relative()))
    }
}

struct EqAcc {
    id: &'static str,
    max_abs: f64,
    sum_sq: f64,
    count: usize,
    worst_point: (f64, f64),
    worst_terms: Vec<f64>,
    scale: f64,
}

impl EqAcc {
    fn new(id: &'static str) -> EqAcc {
        EqAcc {
            id,
            max_abs: 0.0,
            sum_sq: 0.0,
            count: 0,
            worst_point: (0.0, 0.0),
            worst_terms: Vec::new(),
            scale: 0.0,
        }
    }

    fn add(&mut self, r: f64, z: f64, terms: &[Complex64]) {
        let mut sum = c64(0.0, 0.0);
        let mut local = 0.0f64;
        for t in terms {
            sum += t;
            local = local.max(t.norm());
        }
        let resid = sum.norm();
        self.scale = self.scale.max(local);
        self.sum_sq += resid * resid;
        self.count += 1;
        if resid > self.max_abs {
            self.max_abs = resid;
            self.worst_point = (r, z);
            self.worst_terms = terms.iter().map(|t| t.norm()).collect();
        }
    }

    fn finish(self) -> EquationResidual {
        let rms = if self.count > 0 {
            (self.sum_sq / self.count as f64).sqrt()
        } else {
            0.0
        };
        EquationResidual {
            id: self.id,
            max_abs: self.max_abs,
            rms,
            worst_point: self.worst_point,
            worst_terms: self.worst_terms,
            scale: self.scale,
        }
    }
}

struct FieldPoint {
    phi0: PointEval,
    phi: [PointEval; 3],
    e: [PointEval; 3],
    h: [PointEval; 3],
}

fn eval_field(field: &Field10, r: f64, z: f64) -> FieldPoint {
    FieldPoint {
        phi0: field.phi0.eval(r, z),
        phi: [
            field.phi[0].eval(r, z),
            field.phi[1].eval(r, z),
            field.phi[2].eval(r, z),
        ],
        e: [
            field.e[0].eval(r, z),
            field.e[1].eval(r, z),
            field.e[2].eval(r, z),
        ],
        h: [
            field.h[0].eval(r, z),
            field.h[1].eval(r, z),
            field.h[2].eval(r, z),
        ],
    }
}

fn lad(which: Ladder, p: &PointEval, r: f64, m: i32) -> Complex64 {
    let (sign, c) = ladder_coefficients(which, r, m);
    LADDER_GAMMA * (sign * p.dr + c * p.v)
}

/// Residuals of the ten coupled first-order equations of the mass-M system.
pub fn verify_first_order_system(
    field: &Field10,
    mode: &ModeSpec,
    grid: &Grid2D,
    tol: f64,
) -> ResidualReport {
    let m = mode.m;
    let mass = mode.mass;
    let eps = field.point.epsilon;
    let i = c64(0.0, 1.0);
    let mut accs = vec![
        EqAcc::new("scalar_source"),
        EqAcc::new("vector_phi_1"),
        EqAcc::new("vector_phi_2"),
        EqAcc::new("vector_phi_3"),
        EqAcc::new("vector_e_1"),
        EqAcc::new("vector_e_2"),
        EqAcc::new("vector_e_3"),
        EqAcc::new("vector_h_1"),
        EqAcc::new("vector_h_2"),
        EqAcc::new("vector_h_3"),
    ];
    for &r in &grid.r_points {
        for &z in &grid.z_points {
            let p = eval_field(field, r, z);
            let cz = z.cos();
            let sz = z.sin();

            accs[0].add(
                r,
                z,
                &[
                    -lad(Ladder::BMinus, &p.e[0], r, m),
                    -lad(Ladder::APlus, &p.e[2], r, m),
                    -(cz * p.e[1].dz - 2.0 * sz * p.e[1].v),
                    -mass * cz * p.phi0.v,
                ],
            );
            accs[1].add(
                r,
                z,
                &[
                    i * lad(Ladder::A, &p.h[1], r, m),
                    i * eps * cz * p.e[0].v,
                    i * (cz * p.h[0].dz - sz * p.h[0].v),
                    -mass * cz * p.phi[0].v,
                ],
            );
            accs[2].add(
                r,
                z,
                &[
                    -i * lad(Ladder::BMinus, &p.h[0], r, m),
                    i * lad(Ladder::APlus, &p.h[2], r, m),
                    i * eps * cz * p.e[1].v,
                    -mass * cz * p.phi[1].v,
                ],
            );
            accs[3].add(
                r,
                z,
                &[
                    -i * lad(Ladder::B, &p.h[1], r, m),
                    i * eps * cz * p.e[2].v,
                    -i * (cz * p.h[2].dz - sz * p.h[2].v),
                    -mass * cz * p.phi[2].v,
                ],
            );
            accs[4].add(
                r,
                z,
                &[
                    lad(Ladder::A, &p.phi0, r, m),
                    -i * eps * cz * p.phi[0].v,
                    -mass * cz * p.e[0].v,
                ],
            );
            accs[5].add(r, z, &[-i * eps * p.phi[1].v, -p.phi0.dz, -mass * p.e[1].v]);
            accs[6].add(
                r,
                z,
                &[
                    lad(Ladder::B, &p.phi0, r, m),
                    -i * eps * cz * p.phi[2].v,
                    -mass * cz * p.e[2].v,
                ],
            );
            accs[7].add(
                r,
                z,
                &[
                    -i * lad(Ladder::A, &p.phi[1], r, m),
                    -i * (cz * p.phi[0].dz - sz * p.phi[0].v),
                    -mass * cz * p.h[0].v,
                ],
            );
            accs[8].add(
                r,
                z,
                &[
                    i * lad(Ladder::BMinus, &p.phi[0], r, m),
                    -i * lad(Ladder::APlus, &p.phi[2], r, m),
                    -mass * cz * p.h[1].v,
                ],
            );
            accs[9].add(
                r,
                z,
                &[
                    i * lad(Ladder::B, &p.phi[1], r, m),
                    i * (cz * p.phi[2].dz - sz * p.phi[2].v),
                    -mass * cz * p.h[2].v,
                ],
            );
        }
    }
    ResidualReport::from_accumulators(accs, tol)
}

/// Residuals of the generalized helicity eigenvalue equations: the scalar
/// line plus three lines for each of the Phi, E, H triplets.
pub fn verify_helicity(
    field: &Field10,
    sigma: Complex64,
    grid: &Grid2D,
    tol: f64,
) -> ResidualReport {
    let m = field.mode.m;
    let mut accs = vec![
        EqAcc::new("helicity_scalar"),
        EqAcc::new("helicity_phi_1"),
        EqAcc::new("helicity_phi_2"),
        EqAcc::new("helicity_phi_3"),
        EqAcc::new("helicity_e_1"),
        EqAcc::new("helicity_e_2"),
        EqAcc::new("helicity_e_3"),
        EqAcc::new("helicity_h_1"),
        EqAcc::new("helicity_h_2"),
        EqAcc::new("helicity_h_3"),
    ];
    for &r in &grid.r_points {
        for &z in &grid.z_points {
            let p = eval_field(field, r, z);
            let cz = z.cos();
            let sz = z.sin();
            accs[0].add(r, z, &[sigma * p.phi0.v]);
            for (block, triple) in [(0usize, &p.phi), (1, &p.e), (2, &p.h)] {
                let base = 1 + 3 * block;
                accs[base].add(
                    r,
                    z,
                    &[
                        cz * triple[0].dz - sz * triple[0].v,
                        -sigma * cz * triple[0].v,
                        lad(Ladder::A, &triple[1], r, m),
                    ],
                );
                accs[base + 1].add(
                    r,
                    z,
                    &[
                        -lad(Ladder::BMinus, &triple[0], r, m),
                        lad(Ladder::APlus, &triple[2], r, m),
                        -sigma * cz * triple[1].v,
                    ],
                );
                accs[base + 2].add(
                    r,
                    z,
                    &[
                        -(cz * triple[2].dz - sz * triple[2].v),
                        -sigma * cz * triple[2].v,
                        -lad(Ladder::B, &triple[1], r, m),
                    ],
                );
            }
        }
    }
    ResidualReport::from_accumulators(accs, tol)
}

/// Residual of the divergence (Lorentz) constraint.
pub fn verify_lorentz(field: &Field10, mode: &ModeSpec, grid: &Grid2D, tol: f64) -> ResidualReport {
    let m = mode.m;
    let eps = field.point.epsilon;
    let i = c64(0.0, 1.0);
    let mut acc = EqAcc::new("lorentz");
    for &r in &grid.r_points {
        for &z in &grid.z_points {
            let p = eval_field(field, r, z);
            let cz = z.cos();
            let tz = z.tan();
            acc.add(
                r,
                z,
                &[
                    -i * eps * p.phi0.v,
                    -lad(Ladder::BMinus, &p.phi[0], r, m) / cz,
                    -lad(Ladder::APlus, &p.phi[2], r, m) / cz,
                    -(p.phi[1].dz - 2.0 * tz * p.phi[1].v),
                ],
            );
        }
    }
    ResidualReport::from_accumulators(vec![acc], tol)
}

/// Second-order residual targets.
pub enum SecondOrderTarget<'a> {
    /// Radial separated equation on a 1D profile.
    RadialOde(&'a RadialProfile),
    /// Axial oscillator equation on the hypergeometric-form function; the
    /// spectral weight is shifted by one for the zero-helicity kind.
    AxialOscillator(&'a AxialProfile),
    /// Separated PDE for the zero-helicity scalar potential.
    ScalarPotential {
        field: &'a Component,
        m: i32,
        weight: f64,
    },
    /// The same operator acting on the common barred combination.
    BarredScalar {
        field: &'a Component,
        m: i32,
        weight: f64,
    },
}

/// Pointwise residual of the named second-order equation.
pub fn verify_second_order(
    target: SecondOrderTarget<'_>,
    grid: &Grid2D,
    tol: f64,
) -> ResidualReport {
    let acc = match target {
        SecondOrderTarget::RadialOde(profile) => {
            let mut acc = EqAcc::new("radial_ode");
            let m2 = (profile.m() * profile.m()) as f64;
            let lambda = profile.lambda();
            for &r in &grid.r_points {
                let e = profile.eval(r);
                let sr = r.sin();
                let cot = r.cos() / sr;
                acc.add(
                    r,
                    0.0,
                    &[
                        c64(e.d2, 0.0),
                        c64(cot * e.d1, 0.0),
                        c64(-m2 / (sr * sr) * e.v, 0.0),
                        c64(lambda * e.v, 0.0),
                    ],
                );
            }
            acc
        }
        SecondOrderTarget::AxialOscillator(profile) => {
            let id = match profile.kind() {
                AxialKind::Helical => "axial_ode",
                AxialKind::ZeroHelicity => "axial_ode_shifted",
            };
            let mut acc = EqAcc::new(id);
            let s2 = profile.exponent_s * profile.exponent_s;
            let lambda = profile.lambda();
            for &z in &grid.z_points {
                let e = profile.eval_f(z);
                let c2 = z.cos() * z.cos();
                acc.add(0.0, z, &[e.d2, s2 * e.v, -lambda / c2 * e.v]);
            }
            acc
        }
        SecondOrderTarget::ScalarPotential { field, m, weight }
        | SecondOrderTarget::BarredScalar { field, m, weight } => {
            let id = if matches!(target, SecondOrderTarget::ScalarPotential { .. }) {
                "scalar_potential_pde"
            } else {
                "barred_scalar_pde"
            };
            let mut acc = EqAcc::new(id);
            let m2 = (m * m) as f64;
            for &r in &grid.r_points {
                for &z in &grid.z_points {
                    let p = field.eval(r, z);
                    let sr = r.sin();
                    let cot = r.cos() / sr;
                    let cz = z.cos();
                    let sz = z.sin();
                    let c2 = cz * cz;
                    acc.add(
                        r,
                        z,
                        &[
                            p.drr,
                            cot * p.dr,
                            -m2 / (sr * sr) * p.v,
                            c2 * p.dzz,
                            -2.0 * cz * sz * p.dz,
                            weight * c2 * p.v,
                        ],
                    );
                }
            }
            acc
        }
    };
    ResidualReport::from_accumulators(vec![acc], tol)
}

/// Runs the three first-order residual suites on an assembled field.
pub fn verify_all(field: &Field10, grid: &Grid2D, tol: f64) -> [ResidualReport; 3] {
    [
        verify_first_order_system(field, &field.mode, grid, tol),
        verify_helicity(field, field.point.sigma, grid, tol),
        verify_lorentz(field, &field.mode, grid, tol),
    ]
}

mod tridiag {
    //! Lowest eigenvalues of a symmetric tridiagonal matrix by
    //! Sturm-sequence bisection.

    use crate::error::{Error, Result};

    /// Number of eigenvalues strictly below x (LDL^T pivot sign count).
    /// `pivmin` floors vanishing pivots so the recurrence stays finite when
    /// the bisection point lands exactly on an eigenvalue of a leading
    /// submatrix.
    fn count_below(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..diag.len() {
            let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
            d = diag[i] - x - b2 / d;
            if d < 0.0 {
                count += 1;
            } else if d == 0.0 {
                count += 1;
                d = -pivmin;
            }
        }
        count
    }

    /// The `count` smallest eigenvalues, ascending.
    pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Result<Vec<f64>> {
        let n = diag.len();
        if n == 0 || off.len() + 1 != n {
            return Err(Error::Eigensolver("inconsistent tridiagonal shape".into()));
        }
        if count > n {
            return Err(Error::Eigensolver(format!(
                "requested {count} eigenvalues from a {n}-dimensional operator"
            )));
        }
        // Gershgorin bounds
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut max_b2 = 0.0f64;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += off[i - 1].abs();
            }
            if i + 1 < n {
                radius += off[i].abs();
            }
            lo = lo.min(diag[i] - radius);
            hi = hi.max(diag[i] + radius);
            max_b2 = max_b2.max(radius * radius);
        }
        let pivmin = f64::MIN_POSITIVE * max_b2.max(1.0);
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let mut a = lo;
            let mut b = hi;
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if count_below(diag, off, mid, pivmin) > k {
                    b = mid;
                } else {
                    a = mid;
                }
                if (b - a) <= 1e-13 * mid.abs().max(1.0) {
                    break;
                }
            }
            out.push(0.5 * (a + b));
        }
        Ok(out)
    }
}

/// Numeric eigenvalues with Richardson refinement over a mesh doubling.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Extrapolated eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// The finer of the two mesh resolutions used.
    pub mesh_size: usize,
    /// Per-eigenvalue error estimate |lambda_2K - lambda_K| / 3.
    pub richardson_estimate: Vec<f64>,
}

/// Lowest eigenvalues of the radial separation operator for azimuthal
/// number m, with weight sin r, discretized in flux form on a cell-centered
/// mesh so the vanishing weight imposes regularity at both poles.
pub fn radial_oracle(m: i32, count: usize, mesh: usize) -> Result<OracleResult> {
    if mesh < 200 {
        return Err(Error::Eigensolver(format!(
            "radial mesh {mesh} is below the supported minimum of 200"
        )));
    }
    let coarse = radial_eigenvalues(m, count, mesh)?;
    let fine = radial_eigenvalues(m, count, 2 * mesh)?;
    Ok(richardson(coarse, fine, 2 * mesh))
}

fn radial_eigenvalues(m: i32, count: usize, cells: usize) -> Result<Vec<f64>> {
    let h = PI / cells as f64;
    let m2 = (m * m) as f64;
    // face weights sin(i h); exact zeros at both poles
    let face = |i: usize| -> f64 {
        if i == 0 || i == cells {
            0.0
        } else {
            (i as f64 * h).sin()
        }
    };
    let mut diag = Vec::with_capacity(cells);
    let mut off = Vec::with_capacity(cells - 1);
    let mut weight = Vec::with_capacity(cells);
    for i in 0..cells {
        let center = (i as f64 + 0.5) * h;
        let s = center.sin();
        weight.push(s);
        // cell average of the centrifugal term already carries one factor
        // of the sin r weight: integral of (m^2 / sin^2) * sin over the cell
        diag.push((face(i) + face(i + 1)) / (h * h) + m2 / s);
    }
    for i in 0..cells - 1 {
        off.push(-face(i + 1) / (h * h));
    }
    // symmetrize the generalized problem A v = lambda W v
    for i in 0..cells {
        diag[i] /= weight[i];
    }
    for i in 0..cells - 1 {
        off[i] /= (weight[i] * weight[i + 1]).sqrt();
    }
    tridiag::lowest_eigenvalues(&diag, &off, count)
}

/// Interpretation of the axial oracle eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxialShift {
    /// Eigenvalue is epsilon^2 - M^2 (nonzero-helicity classes).
    None,
    /// Eigenvalue is epsilon^2 - M^2 + 1 (zero-helicity class).
    PlusOne,
}

/// Lowest eigenvalues of -d2/dz2 + lambda / cos^2 z on (-pi/2, pi/2) with
/// decaying boundary conditions. The matrix is identical for both shift
/// conventions; the shift changes only how the eigenvalue maps to energy.
pub fn axial_oracle(
    lambda: f64,
    shift: AxialShift,
    count: usize,
    mesh: usize,
) -> Result<OracleResult> {
    if lambda < 0.0 {
        return Err(Error::Eigensolver(format!(
            "axial potential strength lambda = {lambda} must be nonnegative"
        )));
    }
    let _ = shift;
    let coarse = axial_eigenvalues(lambda, count, mesh)?;
    let fine = axial_eigenvalues(lambda, count, 2 * mesh)?;
    Ok(richardson(coarse, fine, 2 * mesh))
}

fn axial_eigenvalues(lambda: f64, count: usize, mesh: usize) -> Result<Vec<f64>> {
    let h = PI / mesh as f64;
    let n = mesh - 1;
    let mut diag = Vec::with_capacity(n);
    for i in 1..mesh {
        let z = -PI / 2.0 + i as f64 * h;
        let c = z.cos();
        diag.push(2.0 / (h * h) + lambda / (c * c));
    }
    let off = vec![-1.0 / (h * h); n - 1];
    tridiag::lowest_eigenvalues(&diag, &off, count)
}

fn richardson(coarse: Vec<f64>, fine: Vec<f64>, fine_mesh: usize) -> OracleResult {
    let eigenvalues: Vec<f64> = coarse
        .iter()
        .zip(fine.iter())
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    let richardson_estimate: Vec<f64> = coarse
        .iter()
        .zip(fine.iter())
        .map(|(c, f)| (f - c).abs() / 3.0)
        .collect();
    OracleResult {
        eigenvalues,
        mesh_size: fine_mesh,
        richardson_estimate,
    }
}

/// One mode of the analytic-vs-oracle spectrum comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckRow {
    pub m: i32,
    pub n_r: u32,
    pub n_z: u32,
    pub lambda_analytic: f64,
    pub lambda_numeric: f64,
    /// sqrt of the axial eigenvalue: n + 1 analytically.
    pub s_analytic: f64,
    pub s_numeric: f64,
    pub epsilon_analytic: f64,
    pub epsilon_numeric: f64,
    /// Relative deviation of s_numeric from s_analytic.
    pub rel_dev: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckTable {
    pub class: HelicityClass,
    pub mass: f64,
    pub max_n: u32,
    pub mesh_base: usize,
    pub rows: Vec<CrosscheckRow>,
    pub max_rel_dev: f64,
}

/// Composes the radial and axial oracles into a full numeric spectrum and
/// compares with the closed form: the axial potential strength is taken
/// from the numeric radial eigenvalue, not from the analytic rule.
pub fn spectrum_crosscheck(
    max_n: u32,
    mass: f64,
    class: HelicityClass,
    mesh_base: usize,
) -> Result<CrosscheckTable> {
    let mut radial_cache: HashMap<u32, OracleResult> = HashMap::new();
    let mut rows = Vec::new();
    let mut max_rel_dev = 0.0f64;

    for abs_m in 0..=max_n {
        let radial = match radial_cache.get(&abs_m) {
            Some(r) => r.clone(),
            None => {
                let r = radial_oracle(abs_m as i32, (max_n - abs_m + 1) as usize, mesh_base)?;
                radial_cache.insert(abs_m, r.clone());
                r
            }
        };
        for n_r in 0..=(max_n - abs_m) {
            let lambda_numeric = radial.eigenvalues[n_r as usize];
            let lambda_analytic = lambda_of(abs_m as i32, n_r);
            let count = (max_n - abs_m - n_r + 1) as usize;
            let shift = if class == HelicityClass::ZeroSigma {
                AxialShift::PlusOne
            } else {
                AxialShift::None
            };
            let axial = axial_oracle(lambda_numeric.max(0.0), shift, count, mesh_base)?;
            for n_z in 0..count as u32 {
                let n = abs_m + n_r + n_z;
                let s_analytic = (n + 1) as f64;
                let s2 = axial.eigenvalues[n_z as usize];
                let s_numeric = s2.max(0.0).sqrt();
                let (eps_analytic, degenerate) = match class {
                    HelicityClass::ZeroSigma => {
                        match energy_zero_sigma(mass, abs_m as i32, n_r, n_z) {
                            Ok(e) => (e, false),
                            Err(_) => (0.0, true),
                        }
                    }
                    _ => (energy_nonzero_sigma(mass, abs_m as i32, n_r, n_z), false),
                };
                let eps_numeric = match class {
                    HelicityClass::ZeroSigma => {
                        let e2 = mass * mass - 1.0 + s2;
                        if e2 > 0.0 {
                            e2.sqrt()
                        } else {
                            0.0
                        }
                    }
                    _ => (mass * mass + s2).sqrt(),
                };
                let rel_dev = (s_numeric - s_analytic).abs() / s_analytic;
                max_rel_dev = max_rel_dev.max(rel_dev);
                rows.push(CrosscheckRow {
                    m: abs_m as i32,
                    n_r,
                    n_z,
                    lambda_analytic,
                    lambda_numeric,
                    s_analytic,
                    s_numeric,
                    epsilon_analytic: eps_analytic,
                    epsilon_numeric: eps_numeric,
                    rel_dev,
                    degenerate,
                });
            }
        }
    }
    rows.sort_by(|a, b| {
        (a.epsilon_analytic, a.m, a.n_r, a.n_z)
            .partial_cmp(&(b.epsilon_analytic, b.m, b.n_r, b.n_z))
            .unwrap()
    });
    Ok(CrosscheckTable {
        class,
        mass,
        max_n,
        mesh_base,
        rows,
        max_rel_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembler::{assemble, AssemblyOptions, ComponentId};
    use crate::modes::SigmaBranch;
    use crate::profiles::{axial_phi2, radial_phi2};

    #[test]
    fn grid_is_interior_and_sorted() {
        let grid = Grid2D::default_verification();
        assert_eq!(grid.r_points.len(), 64);
        assert_eq!(grid.z_points.len(), 64);
        for w in grid.r_points.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(grid.r_points[0] > grid.margin_r);
        assert!(*grid.r_points.last().unwrap() < PI - grid.margin_r);
        assert!(grid.z_points[0] > -PI / 2.0 + grid.margin_z);
        assert!(*grid.z_points.last().unwrap() < PI / 2.0 - grid.margin_z);
    }

    #[test]
    fn radial_oracle_reproduces_quantization() {
        let result = radial_oracle(0, 3, 400).unwrap();
        assert!(result.eigenvalues[0].abs() < 1e-7, "lowest should be 0");
        assert!((result.eigenvalues[1] - 2.0).abs() < 1e-5);
        assert!((result.eigenvalues[2] - 6.0).abs() < 1e-5);
        let result = radial_oracle(1, 1, 400).unwrap();
        assert!((result.eigenvalues[0] - 2.0).abs() < 1e-5);
        let result = radial_oracle(2, 1, 400).unwrap();
        assert!((result.eigenvalues[0] - 6.0).abs() < 1e-5);
    }

    #[test]
    fn axial_oracle_reproduces_quantization() {
        let result = axial_oracle(0.0, AxialShift::None, 3, 400).unwrap();
        for (k, expect) in [(0usize, 1.0), (1, 4.0), (2, 9.0)] {
            assert!(
                (result.eigenvalues[k] - expect).abs() < 1e-5,
                "free eigenvalue {k}: {}",
                result.eigenvalues[k]
            );
        }
        let result = axial_oracle(2.0, AxialShift::None, 1, 400).unwrap();
        assert!((result.eigenvalues[0] - 4.0).abs() < 1e-5);
        let result = axial_oracle(6.0, AxialShift::PlusOne, 1, 400).unwrap();
        assert!((result.eigenvalues[0] - 9.0).abs() < 1e-5);
    }

    #[test]
    fn oracle_error_decreases_at_second_order() {
        for (m, exact) in [(0i32, 2.0f64), (1, 2.0)] {
            let idx = if m == 0 { 1 } else { 0 };
            let coarse = radial_eigenvalues(m, idx + 1, 200).unwrap()[idx];
            let fine = radial_eigenvalues(m, idx + 1, 400).unwrap()[idx];
            let e_coarse = (coarse - exact).abs();
            let e_fine = (fine - exact).abs();
            assert!(
                e_coarse / e_fine > 3.5,
                "radial m={m}: errors {e_coarse:.3e} -> {e_fine:.3e}"
            );
        }
        let coarse = axial_eigenvalues(2.0, 1, 200).unwrap()[0];
        let fine = axial_eigenvalues(2.0, 1, 400).unwrap()[0];
        assert!(((coarse - 4.0) / (fine - 4.0)).abs() > 3.5);
    }

    #[test]
    fn crosscheck_massless_modes() {
        let table = spectrum_crosscheck(2, 0.0, HelicityClass::NonzeroSigmaPlus, 600).unwrap();
        assert!(
            table.max_rel_dev <= 1e-6,
            "max relative deviation {:.3e}",
            table.max_rel_dev
        );
        assert!(!table.rows.is_empty());
    }

    #[test]
    fn crosscheck_zero_sigma_with_shift() {
        let table = spectrum_crosscheck(2, 1.0, HelicityClass::ZeroSigma, 600).unwrap();
        assert!(
            table.max_rel_dev <= 1e-6,
            "max relative deviation {:.3e}",
            table.max_rel_dev
        );
        for row in &table.rows {
            assert!(!row.degenerate);
            let expect = (row.epsilon_analytic - row.epsilon_numeric).abs();
            assert!(expect <= 2e-6 * row.epsilon_analytic.max(1.0));
        }
    }

    #[test]
    fn residual_suites_pass_for_assembled_modes() {
        let grid = Grid2D::chebyshev(24, 24, 1e-3, 1e-3);
        let opts = AssemblyOptions::default();
        let cases = [
            ModeSpec::new(0, 0, 0, 1.0, HelicityClass::NonzeroSigmaPlus),
            ModeSpec::new(1, 1, 0, 3.0, HelicityClass::NonzeroSigmaMinus),
            ModeSpec::new(-2, 0, 1, 1.0, HelicityClass::NonzeroSigmaPlus),
            ModeSpec::new(1, 0, 0, 0.0, HelicityClass::NonzeroSigmaPlus),
            ModeSpec::new(1, 1, 1, 2.0, HelicityClass::ZeroSigma),
            ModeSpec::new(0, 0, 2, 1.0, HelicityClass::ZeroSigma),
        ];
        for mode in cases {
            let field = assemble(&mode, &opts).unwrap();
            for report in verify_all(&field, &grid, 1e-8) {
                assert!(
                    report.passed,
                    "suite failed for {mode:?}: worst {:.3e} in {}",
                    report.worst_relative(),
                    report
                        .per_equation
                        .iter()
                        .max_by(|a, b| a.relative().total_cmp(&b.relative()))
                        .map(|e| e.id)
                        .unwrap_or("?")
                );
            }
        }
    }

    #[test]
    fn perturbed_component_fails_some_suite() {
        let grid = Grid2D::chebyshev(16, 16, 1e-3, 1e-3);
        let mode = ModeSpec::new(1, 0, 0, 1.0, HelicityClass::NonzeroSigmaPlus);
        let field = assemble(&mode, &AssemblyOptions::default()).unwrap();
        let perturbed = field.with_perturbed(ComponentId::Phi2, 1e-3);
        let failed = verify_all(&perturbed, &grid, 1e-8)
            .iter()
            .any(|report| !report.passed);
        assert!(failed, "perturbation must be detected");
        // and the clean field still passes
        assert!(verify_all(&field, &grid, 1e-8).iter().all(|r| r.passed));
    }

    #[test]
    fn second_order_residuals() {
        let grid = Grid2D::chebyshev(48, 48, 1e-3, 1e-3);
        let radial = radial_phi2(1, 0);
        let report = verify_second_order(SecondOrderTarget::RadialOde(&radial), &grid, 1e-10);
        assert!(report.passed, "radial: {:.3e}", report.worst_relative());

        let mode = ModeSpec::new(0, 0, 0, 0.0, HelicityClass::NonzeroSigmaPlus);
        let axial = axial_phi2(&mode).unwrap();
        let report = verify_second_order(SecondOrderTarget::AxialOscillator(&axial), &grid, 1e-10);
        assert!(report.passed, "axial: {:.3e}", report.worst_relative());

        let mode = ModeSpec::new(1, 0, 1, 1.0, HelicityClass::ZeroSigma);
        let field = assemble(&mode, &AssemblyOptions::default()).unwrap();
        let q = field.point.epsilon * field.point.epsilon - mode.mass * mode.mass;
        let report = verify_second_order(
            SecondOrderTarget::ScalarPotential {
                field: &field.phi0,
                m: mode.m,
                weight: q,
            },
            &grid,
            1e-8,
        );
        assert!(report.passed, "potential: {:.3e}", report.worst_relative());
        let aux = field.zero_sigma_aux.as_ref().unwrap();
        let report = verify_second_order(
            SecondOrderTarget::BarredScalar {
                field: &aux.phi_bar,
                m: mode.m,
                weight: q,
            },
            &grid,
            1e-8,
        );
        assert!(report.passed, "barred: {:.3e}", report.worst_relative());
    }

    #[test]
    fn massless_sigma_matches_branch() {
        let mode = ModeSpec::new(0, 1, 0, 0.0, HelicityClass::NonzeroSigmaMinus);
        let field = assemble(&mode, &AssemblyOptions::default()).unwrap();
        let sigma = crate::modes::sigma_of(field.point.epsilon, 0.0, SigmaBranch::Minus).unwrap();
        assert!((field.point.sigma - sigma).norm() < 1e-15);
        let grid = Grid2D::chebyshev(16, 16, 1e-3, 1e-3);
        let report = verify_helicity(&field, field.point.sigma, &grid, 1e-8);
        assert!(report.passed);
    }
}
