//! Quantum-number bookkeeping and the closed-form spectra.
//!
//! A bound state is labeled by the azimuthal number m, the radial and axial
//! node counts n_r and n_z, the mass M, and a helicity class. The radial
//! separation constant quantizes as Lambda = N(N+1) with N = n_r + |m|; the
//! energy depends only on the principal number n = n_r + n_z + |m|:
//!
//! * nonzero helicity:  epsilon = sqrt(M^2 + (n+1)^2), sigma = +-i(n+1)
//! * zero helicity:     epsilon = sqrt(M^2 - 1 + (n+1)^2), sigma = 0
//!
//! Only the positive energy root is exposed.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Solution class under the generalized helicity operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HelicityClass {
    NonzeroSigmaPlus,
    NonzeroSigmaMinus,
    ZeroSigma,
}

impl HelicityClass {
    pub const ALL: [HelicityClass; 3] = [
        HelicityClass::NonzeroSigmaPlus,
        HelicityClass::NonzeroSigmaMinus,
        HelicityClass::ZeroSigma,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            HelicityClass::NonzeroSigmaPlus => "nonzero-plus",
            HelicityClass::NonzeroSigmaMinus => "nonzero-minus",
            HelicityClass::ZeroSigma => "zero-sigma",
        }
    }
}

/// Sign branch of the imaginary helicity eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaBranch {
    Plus,
    Minus,
}

/// Only the positive energy root is part of the bound-state spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonSign {
    #[default]
    Positive,
}

/// Full specification of one bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub m: i32,
    pub n_r: u32,
    pub n_z: u32,
    pub mass: f64,
    pub class: HelicityClass,
    pub epsilon_sign: EpsilonSign,
}

impl ModeSpec {
    pub fn new(m: i32, n_r: u32, n_z: u32, mass: f64, class: HelicityClass) -> Self {
        Self {
            m,
            n_r,
            n_z,
            mass,
            class,
            epsilon_sign: EpsilonSign::Positive,
        }
    }

    /// Principal quantum number n = n_r + n_z + |m|.
    pub fn principal_n(&self) -> u32 {
        self.n_r + self.n_z + self.m.unsigned_abs()
    }

    /// Radial level N = n_r + |m| with Lambda = N(N+1).
    pub fn radial_level(&self) -> u32 {
        self.n_r + self.m.unsigned_abs()
    }

    /// Analytic eigenvalues for this mode.
    pub fn spectral_point(&self) -> Result<SpectralPoint> {
        let lambda = lambda_of(self.m, self.n_r);
        let n = self.principal_n();
        match self.class {
            HelicityClass::NonzeroSigmaPlus | HelicityClass::NonzeroSigmaMinus => {
                let epsilon = energy_nonzero_sigma(self.mass, self.m, self.n_r, self.n_z);
                let branch = if self.class == HelicityClass::NonzeroSigmaPlus {
                    SigmaBranch::Plus
                } else {
                    SigmaBranch::Minus
                };
                let sigma = sigma_of(epsilon, self.mass, branch)?;
                Ok(SpectralPoint {
                    lambda,
                    epsilon,
                    sigma,
                    principal_n: n,
                })
            }
            HelicityClass::ZeroSigma => {
                let epsilon = energy_zero_sigma(self.mass, self.m, self.n_r, self.n_z)?;
                Ok(SpectralPoint {
                    lambda,
                    epsilon,
                    sigma: Complex64::new(0.0, 0.0),
                    principal_n: n,
                })
            }
        }
    }
}

/// Analytic eigenvalues attached to a mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    /// Radial separation constant Lambda = N(N+1).
    pub lambda: f64,
    /// Positive energy root.
    pub epsilon: f64,
    /// Helicity eigenvalue; purely imaginary (or zero), stored complex to
    /// keep sign conventions out of the residual checks.
    pub sigma: Complex64,
    /// n = n_r + n_z + |m|.
    pub principal_n: u32,
}

/// Radial separation constant solving sqrt(1 + 4 Lambda)/2 = N + 1/2:
/// Lambda = N(N+1) with N = n_r + |m|.
pub fn lambda_of(m: i32, n_r: u32) -> f64 {
    let n = (n_r + m.unsigned_abs()) as f64;
    n * (n + 1.0)
}

/// Energy of the nonzero-helicity classes:
/// epsilon = sqrt(M^2 + (n_z + n_r + |m| + 1)^2).
pub fn energy_nonzero_sigma(mass: f64, m: i32, n_r: u32, n_z: u32) -> f64 {
    let step = (n_z + n_r + m.unsigned_abs() + 1) as f64;
    (mass * mass + step * step).sqrt()
}

/// Energy of the zero-helicity class:
/// epsilon = sqrt(M^2 - 1 + (n + 1)^2); the n = 0, M = 0 corner gives
/// epsilon = 0 and is reported as degenerate instead of returned.
pub fn energy_zero_sigma(mass: f64, m: i32, n_r: u32, n_z: u32) -> Result<f64> {
    let step = (n_z + n_r + m.unsigned_abs() + 1) as f64;
    let eps_sq = mass * mass - 1.0 + step * step;
    if eps_sq <= 0.0 {
        return Err(Error::DegenerateEnergy { epsilon_sq: eps_sq });
    }
    Ok(eps_sq.sqrt())
}

/// Helicity eigenvalue sigma = +-i sqrt(epsilon^2 - M^2); satisfies
/// sigma^2 = M^2 - epsilon^2 exactly.
pub fn sigma_of(epsilon: f64, mass: f64, branch: SigmaBranch) -> Result<Complex64> {
    if epsilon < mass {
        return Err(Error::BelowThreshold { epsilon, mass });
    }
    let root = (epsilon * epsilon - mass * mass).sqrt();
    let sign = match branch {
        SigmaBranch::Plus => 1.0,
        SigmaBranch::Minus => -1.0,
    };
    Ok(Complex64::new(0.0, sign * root))
}

/// Spectral data for one enumerated mode; degenerate corners are carried as
/// diagnostics so tables can report them instead of dropping rows.
#[derive(Debug, Clone, PartialEq)]
pub enum ModeOutcome {
    Bound(SpectralPoint),
    Degenerate { reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeRow {
    pub mode: ModeSpec,
    pub outcome: ModeOutcome,
}

impl ModeRow {
    fn sort_epsilon(&self) -> f64 {
        match &self.outcome {
            ModeOutcome::Bound(p) => p.epsilon,
            ModeOutcome::Degenerate { .. } => 0.0,
        }
    }
}

/// All modes with n_r + n_z + |m| <= max_n for each requested class, each
/// paired with its spectral data and sorted by
/// (epsilon, |m|, n_r, n_z, m, class).
pub fn enumerate_modes(max_n: u32, mass: f64, classes: &[HelicityClass]) -> Vec<ModeRow> {
    let mut rows = Vec::new();
    for &class in classes {
        let n = max_n as i64;
        for m in -n..=n {
            let abs_m = m.unsigned_abs() as u32;
            for n_r in 0..=(max_n - abs_m) {
                for n_z in 0..=(max_n - abs_m - n_r) {
                    let mode = ModeSpec::new(m as i32, n_r, n_z, mass, class);
                    let outcome = match mode.spectral_point() {
                        Ok(point) => ModeOutcome::Bound(point),
                        Err(err) => ModeOutcome::Degenerate {
                            reason: err.to_string(),
                        },
                    };
                    rows.push(ModeRow { mode, outcome });
                }
            }
        }
    }
    rows.sort_by(|a, b| {
        let ka = (
            a.sort_epsilon(),
            a.mode.m.unsigned_abs(),
            a.mode.n_r,
            a.mode.n_z,
            a.mode.m,
            a.mode.class,
        );
        let kb = (
            b.sort_epsilon(),
            b.mode.m.unsigned_abs(),
            b.mode.n_r,
            b.mode.n_z,
            b.mode.m,
            b.mode.class,
        );
        ka.0.total_cmp(&kb.0)
            .then((ka.1, ka.2, ka.3, ka.4, ka.5).cmp(&(kb.1, kb.2, kb.3, kb.4, kb.5)))
    });
    rows
}
