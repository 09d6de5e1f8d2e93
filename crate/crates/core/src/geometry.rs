//! Static background geometry: the spatial 3-sphere in quasi-cylindrical
//! coordinates (r, phi, z) with line element
//!
//! ```text
//! dS^2 = dt^2 - cos^2(z) (dr^2 + sin^2(r) dphi^2) - dz^2
//! ```
//!
//! (curvature radius and c set to 1). The module holds the diagonal tetrad,
//! the closed-form Christoffel symbols and Ricci rotation coefficients, and
//! finite-difference oracles that rederive them from the metric alone.

use crate::error::{Error, Result};

/// Exclusion margin around the coordinate singularities r in {0, pi} and
/// z = +-pi/2. 1/sin(r) and 1/cos(z) factors make evaluation meaningless
/// closer than this.
pub const BOUNDARY_MARGIN: f64 = 1e-6;

/// Default step for the central-difference oracles.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

const PI: f64 = std::f64::consts::PI;

/// A spacetime point. `t` and `phi` are carried for completeness; nothing
/// in the static metric depends on them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coordinates {
    pub t: f64,
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl Coordinates {
    pub fn new(t: f64, r: f64, phi: f64, z: f64) -> Result<Self> {
        check_interior(r, z, BOUNDARY_MARGIN)?;
        Ok(Self { t, r, phi, z })
    }
}

/// Diagonal metric tensor with signature (+,-,-,-), index order (t, r, phi, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTensor {
    pub components: [[f64; 4]; 4],
}

impl MetricTensor {
    /// Diagonal of the inverse metric.
    pub fn inverse_diagonal(&self) -> [f64; 4] {
        [
            1.0 / self.components[0][0],
            1.0 / self.components[1][1],
            1.0 / self.components[2][2],
            1.0 / self.components[3][3],
        ]
    }

    pub fn determinant(&self) -> f64 {
        self.components[0][0]
            * self.components[1][1]
            * self.components[2][2]
            * self.components[3][3]
    }
}

/// Orthonormal frame e_(a)^beta, rows indexed by the frame label a,
/// columns by the coordinate index beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrad {
    pub components: [[f64; 4]; 4],
}

impl Tetrad {
    /// e_(a)^alpha e_(b)^beta g_{alpha beta}, which must reproduce
    /// diag(1, -1, -1, -1).
    pub fn frame_metric(&self, metric: &MetricTensor) -> [[f64; 4]; 4] {
        let mut eta = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let mut sum = 0.0;
                for alpha in 0..4 {
                    sum += self.components[a][alpha]
                        * self.components[b][alpha]
                        * metric.components[alpha][alpha];
                }
                eta[a][b] = sum;
            }
        }
        eta
    }
}

/// Named Ricci rotation coefficients that appear in the separated wave
/// equations. Frame labels: 1 = r, 2 = phi, 3 = z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciRotation {
    pub gamma_122: f64,
    pub gamma_311: f64,
    pub gamma_322: f64,
}

/// Spatial Christoffel symbols Gamma^lambda_{jk} (indices over r, phi, z)
/// together with the named Ricci rotation coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionSet {
    pub christoffel: [[[f64; 3]; 3]; 3],
    pub ricci_rotation: RicciRotation,
}

pub fn check_interior(r: f64, z: f64, margin: f64) -> Result<()> {
    if r < margin || r > PI - margin || z.abs() > PI / 2.0 - margin {
        return Err(Error::Domain { r, z, margin });
    }
    Ok(())
}

/// Metric at an interior point (curvature radius 1, c = 1).
pub fn metric_at(r: f64, z: f64) -> Result<MetricTensor> {
    check_interior(r, z, BOUNDARY_MARGIN)?;
    let cz2 = z.cos() * z.cos();
    let sr = r.sin();
    let mut g = [[0.0; 4]; 4];
    g[0][0] = 1.0;
    g[1][1] = -cz2;
    g[2][2] = -cz2 * sr * sr;
    g[3][3] = -1.0;
    Ok(MetricTensor { components: g })
}

/// -det g = cos^4(z) sin^2(r); enters the divergence constraint through
/// 1/sqrt(-g).
pub fn metric_determinant_negated(r: f64, z: f64) -> Result<f64> {
    Ok(-metric_at(r, z)?.determinant())
}

/// The diagonal tetrad adapted to the metric.
pub fn tetrad_at(r: f64, z: f64) -> Result<Tetrad> {
    check_interior(r, z, BOUNDARY_MARGIN)?;
    let cz = z.cos();
    let sr = r.sin();
    let mut e = [[0.0; 4]; 4];
    e[0][0] = 1.0;
    e[1][1] = 1.0 / cz;
    e[2][2] = 1.0 / (cz * sr);
    e[3][3] = 1.0;
    Ok(Tetrad { components: e })
}

/// Covariant tetrad legs e_(a)_beta = g_{beta alpha} e_(a)^alpha.
fn tetrad_covariant(r: f64, z: f64) -> Result<[[f64; 4]; 4]> {
    let e = tetrad_at(r, z)?;
    let g = metric_at(r, z)?;
    let mut cov = [[0.0; 4]; 4];
    for a in 0..4 {
        for beta in 0..4 {
            cov[a][beta] = g.components[beta][beta] * e.components[a][beta];
        }
    }
    Ok(cov)
}

/// Closed-form spatial connection. Spatial index order: 0 = r, 1 = phi, 2 = z.
pub fn christoffel_closed_form(r: f64, z: f64) -> Result<ConnectionSet> {
    check_interior(r, z, BOUNDARY_MARGIN)?;
    let (sr, cr) = (r.sin(), r.cos());
    let (sz, cz) = (z.sin(), z.cos());
    let tz = sz / cz;
    let mut gamma = [[[0.0; 3]; 3]; 3];

    // Gamma^r
    gamma[0][0][2] = -tz;
    gamma[0][2][0] = -tz;
    gamma[0][1][1] = -sr * cr;
    // Gamma^phi
    gamma[1][0][1] = cr / sr;
    gamma[1][1][0] = cr / sr;
    gamma[1][1][2] = -tz;
    gamma[1][2][1] = -tz;
    // Gamma^z
    gamma[2][0][0] = sz * cz;
    gamma[2][1][1] = sz * cz * sr * sr;

    Ok(ConnectionSet {
        christoffel: gamma,
        ricci_rotation: RicciRotation {
            gamma_122: cr / (cz * sr),
            gamma_311: -tz,
            gamma_322: -tz,
        },
    })
}

/// Spatial metric diagonal (g_rr, g_phiphi, g_zz) as a function of (r, z);
/// shared by the finite-difference oracles.
fn spatial_metric_diag(r: f64, z: f64) -> [f64; 3] {
    let cz2 = z.cos() * z.cos();
    let sr = r.sin();
    [-cz2, -cz2 * sr * sr, -1.0]
}

/// Central difference of the spatial metric diagonal with respect to
/// coordinate `dir` (0 = r, 2 = z; the metric is phi-independent).
fn metric_diag_derivative(r: f64, z: f64, dir: usize, h: f64) -> [f64; 3] {
    let (plus, minus) = match dir {
        0 => (spatial_metric_diag(r + h, z), spatial_metric_diag(r - h, z)),
        1 => return [0.0; 3],
        2 => (spatial_metric_diag(r, z + h), spatial_metric_diag(r, z - h)),
        _ => unreachable!(),
    };
    [
        (plus[0] - minus[0]) / (2.0 * h),
        (plus[1] - minus[1]) / (2.0 * h),
        (plus[2] - minus[2]) / (2.0 * h),
    ]
}

/// Finite-difference oracle for the connection: Christoffels from central
/// differences of the metric, Ricci rotation coefficients from central
/// differences of the covariant tetrad legs.
pub fn christoffel_numeric(r: f64, z: f64, h: f64) -> Result<ConnectionSet> {
    check_interior(r, z, BOUNDARY_MARGIN + h)?;
    let diag = spatial_metric_diag(r, z);
    let mut d = [[0.0; 3]; 3]; // d[dir][component]
    for dir in 0..3 {
        d[dir] = metric_diag_derivative(r, z, dir, h);
    }
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for lam in 0..3 {
        let ginv = 1.0 / diag[lam];
        for j in 0..3 {
            for k in 0..3 {
                // Only the diagonal mu = lam survives.
                let dj_gmk = if lam == k { d[j][lam] } else { 0.0 };
                let dk_gmj = if lam == j { d[k][lam] } else { 0.0 };
                let dm_gjk = if j == k { d[lam][j] } else { 0.0 };
                gamma[lam][j][k] = 0.5 * ginv * (dj_gmk + dk_gmj - dm_gjk);
            }
        }
    }

    let full = ricci_rotation_numeric(r, z, h)?;
    Ok(ConnectionSet {
        christoffel: gamma,
        ricci_rotation: RicciRotation {
            gamma_122: full[1][2][2],
            gamma_311: full[3][1][1],
            gamma_322: full[3][2][2],
        },
    })
}

/// Full numeric table of Ricci rotation coefficients
/// gamma_{a b c} = e_(a)^alpha (d_beta e_(b)_alpha
///                 - Gamma^lambda_{alpha beta} e_(b)_lambda) e_(c)^beta,
/// frame indices 0..3 = (t, r, phi, z). The convention is fixed by matching
/// the three named coefficients of the closed form.
///
/// The closed form lists only three nonzero coefficients; this table lets
/// callers inspect the rest numerically instead of assuming they vanish.
pub fn ricci_rotation_numeric(r: f64, z: f64, h: f64) -> Result<[[[f64; 4]; 4]; 4]> {
    check_interior(r, z, BOUNDARY_MARGIN + h)?;
    let e_up = tetrad_at(r, z)?.components;
    let e_dn = tetrad_covariant(r, z)?;
    let e_dn_rp = tetrad_covariant(r + h, z)?;
    let e_dn_rm = tetrad_covariant(r - h, z)?;
    let e_dn_zp = tetrad_covariant(r, z + h)?;
    let e_dn_zm = tetrad_covariant(r, z - h)?;

    // d_beta e_(b)_alpha: beta in coordinate order (t, r, phi, z); only the
    // r and z derivatives are nonzero for this static axial metric.
    let mut de = [[[0.0; 4]; 4]; 4]; // [beta][b][alpha]
    for b in 0..4 {
        for alpha in 0..4 {
            de[1][b][alpha] = (e_dn_rp[b][alpha] - e_dn_rm[b][alpha]) / (2.0 * h);
            de[3][b][alpha] = (e_dn_zp[b][alpha] - e_dn_zm[b][alpha]) / (2.0 * h);
        }
    }

    // 4D Christoffels: all components with a t index vanish; spatial block
    // from the closed form (the numeric Christoffel test covers it).
    let spatial = christoffel_closed_form(r, z)?.christoffel;
    let gamma4 = |lam: usize, alpha: usize, beta: usize| -> f64 {
        if lam == 0 || alpha == 0 || beta == 0 {
            0.0
        } else {
            spatial[lam - 1][alpha - 1][beta - 1]
        }
    };

    let mut out = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c_idx in 0..4 {
                let mut sum = 0.0;
                for alpha in 0..4 {
                    for beta in 0..4 {
                        if e_up[a][alpha] == 0.0 || e_up[c_idx][beta] == 0.0 {
                            continue;
                        }
                        let mut cov = de[beta][b][alpha];
                        for lam in 0..4 {
                            let g = gamma4(lam, alpha, beta);
                            if g != 0.0 {
                                cov -= g * e_dn[b][lam];
                            }
                        }
                        sum += e_up[a][alpha] * cov * e_up[c_idx][beta];
                    }
                }
                out[a][b][c_idx] = sum;
            }
        }
    }
    Ok(out)
}
