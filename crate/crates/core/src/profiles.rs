//! Closed-form separated profiles and the first-order radial ladder
//! operators.
//!
//! The radial factor of the separable scalar is
//!
//! ```text
//! R(r) = (sin(r/2) cos(r/2))^|m| F(-n_r, 2|m|+1+n_r, |m|+1; sin^2(r/2))
//! ```
//!
//! a polynomial profile satisfying 2 Delta R = Lambda R. The axial factor is
//!
//! ```text
//! Z(z) = cos^s(z) F(alpha, beta, gamma; y),   y = (1 + i tan z)/2
//! ```
//!
//! with s = n + 1 on the decaying branch, which terminates at degree n_z for
//! every bound mode. The zero-helicity class uses the same construction for
//! an auxiliary function f with the spectral weight shifted by one; its
//! physical profile is f / cos z.
//!
//! All factors carry analytic first and second derivatives; the residual
//! checks never fall back to finite differences.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Component, Factor, FactorEval};
use crate::modes::{HelicityClass, ModeSpec};
use crate::specfun::{terminating_coefficients, HypParams};

/// Overall normalization of the ladder operators.
pub const LADDER_GAMMA: f64 = FRAC_1_SQRT_2;

/// Margin around r in {0, pi} inside which the 1/sin r coefficients are
/// refused.
pub const RADIAL_MARGIN: f64 = 1e-6;

const PI: f64 = std::f64::consts::PI;

/// The six first-order radial operators
/// gamma (+-d/dr + (m, m - cos r, or m + cos r)/sin r).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    A,
    APlus,
    AMinus,
    B,
    BPlus,
    BMinus,
}

fn check_radial_interior(r: f64) -> Result<()> {
    if r < RADIAL_MARGIN || r > PI - RADIAL_MARGIN {
        return Err(Error::Domain {
            r,
            z: 0.0,
            margin: RADIAL_MARGIN,
        });
    }
    Ok(())
}

/// Derivative sign and multiplier c(r) such that the operator is
/// gamma (sign d/dr + c(r)).
///
/// The m -+ cos r forms are rewritten as (m -+ 1)/sin r +- tan(r/2), which
/// avoids the 1 - cos r cancellation near the poles.
pub fn ladder_coefficients(which: Ladder, r: f64, m: i32) -> (f64, f64) {
    let sr = r.sin();
    let th = (0.5 * r).tan();
    let mf = m as f64;
    match which {
        Ladder::A => (1.0, mf / sr),
        Ladder::B => (-1.0, mf / sr),
        Ladder::AMinus => (1.0, (mf - 1.0) / sr + th),
        Ladder::BMinus => (-1.0, (mf - 1.0) / sr + th),
        Ladder::APlus => (1.0, (mf + 1.0) / sr - th),
        Ladder::BPlus => (-1.0, (mf + 1.0) / sr - th),
    }
}

/// d/dr of the multiplier c(r) for the same operator.
pub fn ladder_coefficient_derivative(which: Ladder, r: f64, m: i32) -> f64 {
    let sr = r.sin();
    let cr = r.cos();
    let th = (0.5 * r).tan();
    let dth = 0.5 * (1.0 + th * th);
    let mf = m as f64;
    match which {
        Ladder::A | Ladder::B => -mf * cr / (sr * sr),
        Ladder::AMinus | Ladder::BMinus => -(mf - 1.0) * cr / (sr * sr) + dth,
        Ladder::APlus | Ladder::BPlus => -(mf + 1.0) * cr / (sr * sr) - dth,
    }
}

/// Applies one ladder operator to a function value and its r-derivative.
pub fn ladder_apply(which: Ladder, f: f64, df_dr: f64, r: f64, m: i32) -> Result<f64> {
    check_radial_interior(r)?;
    let (sign, c) = ladder_coefficients(which, r, m);
    Ok(LADDER_GAMMA * (sign * df_dr + c * f))
}

/// Complex variant of [`ladder_apply`] used by the residual engines.
pub fn ladder_apply_complex(
    which: Ladder,
    f: Complex64,
    df_dr: Complex64,
    r: f64,
    m: i32,
) -> Result<Complex64> {
    check_radial_interior(r)?;
    let (sign, c) = ladder_coefficients(which, r, m);
    Ok(LADDER_GAMMA * (sign * df_dr + c * f))
}

/// The second-order radial operator
/// Delta = (1/2)(-d2/dr2 - cot r d/dr + m^2/sin^2 r),
/// which factorizes as b_minus a and as a_plus b.
pub fn delta_apply(f: f64, df_dr: f64, d2f_dr2: f64, r: f64, m: i32) -> Result<f64> {
    check_radial_interior(r)?;
    let sr = r.sin();
    let cot = r.cos() / sr;
    let mf = m as f64;
    Ok(0.5 * (-d2f_dr2 - cot * df_dr + mf * mf / (sr * sr) * f))
}

/// Real value with two derivatives, for the radial profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealEval {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Radial bound-state profile; a polynomial object, finite on [0, pi].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    m: i32,
    n_r: u32,
    lambda: f64,
    coeffs: Vec<f64>,
}

impl RadialProfile {
    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn n_r(&self) -> u32 {
        self.n_r
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eval(&self, r: f64) -> RealEval {
        let p = self.m.unsigned_abs() as i32;
        let x = {
            let s = (0.5 * r).sin();
            s * s
        };
        let x1 = 0.5 * r.sin();
        let x2 = 0.5 * r.cos();
        let (f, f1, f2) = horner3(&self.coeffs, x);

        if p == 0 {
            return RealEval {
                v: f,
                d1: f1 * x1,
                d2: f2 * x1 * x1 + f1 * x2,
            };
        }

        let q = 0.5 * r.sin();
        let q1 = 0.5 * r.cos();
        let q2 = -0.5 * r.sin();
        let pf = p as f64;
        let pre = q.powi(p);
        let pre1 = pf * q.powi(p - 1) * q1;
        let pre2 = if p >= 2 {
            pf * (pf - 1.0) * q.powi(p - 2) * q1 * q1 + pf * q.powi(p - 1) * q2
        } else {
            pf * q2
        };
        RealEval {
            v: pre * f,
            d1: pre1 * f + pre * f1 * x1,
            d2: pre2 * f + 2.0 * pre1 * f1 * x1 + pre * (f2 * x1 * x1 + f1 * x2),
        }
    }
}

fn horner3(coeffs: &[f64], x: f64) -> (f64, f64, f64) {
    let mut v = 0.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for k in (0..coeffs.len()).rev() {
        let kf = k as f64;
        v = v * x + coeffs[k];
        if k >= 1 {
            d1 = d1 * x + kf * coeffs[k];
        }
        if k >= 2 {
            d2 = d2 * x + kf * (kf - 1.0) * coeffs[k];
        }
    }
    (v, d1, d2)
}

fn horner3_complex(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let (mut v, mut d1, mut d2) = (zero, zero, zero);
    for k in (0..coeffs.len()).rev() {
        let kf = k as f64;
        v = v * x + coeffs[k];
        if k >= 1 {
            d1 = d1 * x + coeffs[k] * kf;
        }
        if k >= 2 {
            d2 = d2 * x + coeffs[k] * (kf * (kf - 1.0));
        }
    }
    (v, d1, d2)
}

/// Builds the radial profile for (m, n_r), normalized so the hypergeometric
/// factor is 1 at r = 0; the leading behavior is then (r/2)^|m|.
pub fn radial_phi2(m: i32, n_r: u32) -> RadialProfile {
    let p = m.unsigned_abs() as f64;
    let params = HypParams::real(-(n_r as f64), 2.0 * p + 1.0 + n_r as f64, p + 1.0);
    let coeffs = terminating_coefficients(params)
        .expect("third parameter |m|+1 is a positive integer; the series terminates")
        .into_iter()
        .map(|c| c.re)
        .collect();
    RadialProfile {
        m,
        n_r,
        lambda: crate::modes::lambda_of(m, n_r),
        coeffs,
    }
}

/// Whether the axial construction is the direct one (nonzero helicity) or
/// the shifted auxiliary one whose physical profile is f / cos z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxialKind {
    Helical,
    ZeroHelicity,
}

/// Axial bound-state profile on the decaying branch.
#[derive(Debug, Clone, PartialEq)]
pub struct AxialProfile {
    /// Decay exponent s = n + 1 of the cos^s(z) prefactor.
    pub exponent_s: f64,
    /// Parameters of the terminating hypergeometric factor.
    pub hyp: HypParams,
    /// Helicity eigenvalue of the owning mode (zero for the shifted kind).
    pub sigma: Complex64,
    lambda: f64,
    kind: AxialKind,
    n_z: u32,
    coeffs: Vec<Complex64>,
}

impl AxialProfile {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kind(&self) -> AxialKind {
        self.kind
    }

    pub fn n_z(&self) -> u32 {
        self.n_z
    }

    /// The hypergeometric-form function cos^s(z) F(y(z)). For the helical
    /// kind this is the profile itself; for the zero-helicity kind it is the
    /// auxiliary f whose shifted oscillator equation has weight s^2.
    pub fn eval_f(&self, z: f64) -> FactorEval {
        let c = z.cos();
        let sz = z.sin();
        let t = sz / c;
        let y = Complex64::new(0.5, 0.5 * t);
        let y1 = Complex64::new(0.0, 0.5 / (c * c));
        let y2 = Complex64::new(0.0, sz / (c * c * c));
        let (f, f1, f2) = horner3_complex(&self.coeffs, y);

        let s = self.exponent_s;
        let pre = c.powf(s);
        let pre1 = -s * c.powf(s - 1.0) * sz;
        let pre2 = s * (s - 1.0) * c.powf(s - 2.0) * sz * sz - s * pre;

        FactorEval {
            v: f * pre,
            d1: f1 * y1 * pre + f * pre1,
            d2: f2 * y1 * y1 * pre + f1 * (y2 * pre + 2.0 * y1 * pre1) + f * pre2,
        }
    }

    /// Third derivative of the hypergeometric-form function, from its own
    /// oscillator equation f'' = (Lambda / cos^2 z - s^2) f.
    pub fn eval_f3(&self, z: f64, f: &FactorEval) -> Complex64 {
        let c = z.cos();
        let w = self.lambda / (c * c) - self.exponent_s * self.exponent_s;
        let w1 = 2.0 * self.lambda * z.sin() / (c * c * c);
        f.d1 * w + f.v * w1
    }

    /// The physical profile: identical to `eval_f` for the helical kind,
    /// f / cos z for the zero-helicity kind.
    pub fn eval_physical(&self, z: f64) -> FactorEval {
        let f = self.eval_f(z);
        match self.kind {
            AxialKind::Helical => f,
            AxialKind::ZeroHelicity => {
                let c = z.cos();
                let sz = z.sin();
                let u = 1.0 / c;
                let u1 = sz / (c * c);
                let u2 = u + 2.0 * sz * sz / (c * c * c);
                FactorEval {
                    v: f.v * u,
                    d1: f.d1 * u + f.v * u1,
                    d2: f.d2 * u + 2.0 * f.d1 * u1 + f.v * u2,
                }
            }
        }
    }
}

/// Builds the axial profile for a mode. The terminating index must come out
/// at n_z; a mode whose spectral data breaks that is rejected.
pub fn axial_phi2(mode: &ModeSpec) -> Result<AxialProfile> {
    let point = mode.spectral_point()?;
    let n = mode.principal_n();
    let big_n = mode.radial_level();
    let (weight, kind) = match mode.class {
        HelicityClass::ZeroSigma => (
            point.epsilon * point.epsilon - mode.mass * mode.mass + 1.0,
            AxialKind::ZeroHelicity,
        ),
        _ => (
            point.epsilon * point.epsilon - mode.mass * mode.mass,
            AxialKind::Helical,
        ),
    };
    let s = weight.sqrt();
    let s_exact = (n + 1) as f64;
    if (s - s_exact).abs() > 1e-9 {
        return Err(Error::InternalConsistency {
            context: "axial decay exponent is not n + 1; series would not terminate",
            value: s,
        });
    }
    // alpha = N + 1 - s = -n_z exactly for the quantized mode
    let alpha = -(mode.n_z as f64);
    let beta = -((n + 1 + big_n) as f64);
    let gamma = -(n as f64);
    let hyp = HypParams::real(alpha, beta, gamma);
    let coeffs = terminating_coefficients(hyp)?;
    Ok(AxialProfile {
        exponent_s: s_exact,
        hyp,
        sigma: point.sigma,
        lambda: point.lambda,
        kind,
        n_z: mode.n_z,
        coeffs,
    })
}

/// The pair obtained by splitting the axial derivative of a separable
/// scalar phi2 = R(r) Z(z):
///
/// ```text
/// phi_bar_1 = (1/2)(-sigma - d/dz) phi2,
/// phi_bar_3 = (1/2)(+sigma - d/dz) phi2.
/// ```
#[derive(Debug, Clone)]
pub struct BarredPair {
    pub phi_bar_1: Component,
    pub phi_bar_3: Component,
}

/// Shared-factor view of a radial profile.
pub fn radial_factor(profile: Arc<RadialProfile>) -> Factor {
    Arc::new(move |r: f64| {
        let e = profile.eval(r);
        FactorEval::real(e.v, e.d1, e.d2)
    })
}

/// Shared-factor view of the hypergeometric-form axial function.
pub fn axial_f_factor(profile: Arc<AxialProfile>) -> Factor {
    Arc::new(move |z: f64| profile.eval_f(z))
}

/// Shared-factor view of the physical axial profile.
pub fn axial_physical_factor(profile: Arc<AxialProfile>) -> Factor {
    Arc::new(move |z: f64| profile.eval_physical(z))
}

/// Axial factor (1/2)(sign * sigma - d/dz) applied to the hypergeometric-form
/// function of `profile`.
pub fn barred_axial_factor(profile: Arc<AxialProfile>, sigma: Complex64, sign: f64) -> Factor {
    Arc::new(move |z: f64| {
        let f = profile.eval_f(z);
        let f3 = profile.eval_f3(z, &f);
        FactorEval {
            v: 0.5 * (sign * sigma * f.v - f.d1),
            d1: 0.5 * (sign * sigma * f.d1 - f.d2),
            d2: 0.5 * (sign * sigma * f.d2 - f3),
        }
    })
}

/// Builds both barred combinations of the separable scalar with radial
/// factor `radial` and axial factor `axial` (hypergeometric form).
pub fn barred_pair(
    radial: Arc<RadialProfile>,
    axial: Arc<AxialProfile>,
    sigma: Complex64,
) -> BarredPair {
    let one = Complex64::new(1.0, 0.0);
    BarredPair {
        phi_bar_1: Component::new(
            one,
            radial_factor(Arc::clone(&radial)),
            barred_axial_factor(Arc::clone(&axial), sigma, -1.0),
        ),
        phi_bar_3: Component::new(
            one,
            radial_factor(radial),
            barred_axial_factor(axial, sigma, 1.0),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::SigmaBranch;

    fn interior_r_grid(n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| 1e-3 + (PI - 2e-3) * (i as f64 + 0.5) / n as f64)
            .collect()
    }

    fn interior_z_grid(n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| -PI / 2.0 + 1e-3 + (PI - 2e-3) * (i as f64 + 0.5) / n as f64)
            .collect()
    }

    #[test]
    fn ladder_on_constants_and_sine() {
        // a annihilates constants at the equator when m = 0
        let v = ladder_apply(Ladder::A, 3.0, 0.0, PI / 2.0, 0).unwrap();
        assert!(v.abs() < 1e-15);
        // a applied to sin r with m = 1 at r = pi/2
        let r = PI / 2.0;
        let v = ladder_apply(Ladder::A, r.sin(), r.cos(), r, 1).unwrap();
        assert!((v - LADDER_GAMMA).abs() < 1e-15);
    }

    #[test]
    fn ladder_rejects_singular_radius() {
        assert!(ladder_apply(Ladder::A, 1.0, 0.0, 1e-9, 0).is_err());
        assert!(ladder_apply(Ladder::B, 1.0, 0.0, PI - 1e-9, 0).is_err());
    }

    #[test]
    fn delta_examples() {
        let r = 0.9;
        assert_eq!(delta_apply(1.0, 0.0, 0.0, r, 0).unwrap(), 0.0);
        // Delta sin r = sin r for m = 1
        let r = PI / 3.0;
        let v = delta_apply(r.sin(), r.cos(), -r.sin(), r, 1).unwrap();
        assert!((v - r.sin()).abs() < 1e-15);
    }

    #[test]
    fn delta_matches_ladder_compositions() {
        // b_minus(a f) = a_plus(b f) = Delta f for smooth f
        let f = |r: f64| (r.cos() * 1.3).exp();
        let f1 = |r: f64| -1.3 * r.sin() * f(r);
        let f2 = |r: f64| (-1.3 * r.cos() + 1.3 * 1.3 * r.sin() * r.sin()) * f(r);
        for m in [-2, 0, 1, 3] {
            for &r in &interior_r_grid(17) {
                let af = ladder_apply(Ladder::A, f(r), f1(r), r, m).unwrap();
                let (_, ca) = ladder_coefficients(Ladder::A, r, m);
                let ca1 = ladder_coefficient_derivative(Ladder::A, r, m);
                let daf = LADDER_GAMMA * (f2(r) + ca1 * f(r) + ca * f1(r));
                let bma = ladder_apply(Ladder::BMinus, af, daf, r, m).unwrap();

                let bf = ladder_apply(Ladder::B, f(r), f1(r), r, m).unwrap();
                let (_, cb) = ladder_coefficients(Ladder::B, r, m);
                let cb1 = ladder_coefficient_derivative(Ladder::B, r, m);
                let dbf = LADDER_GAMMA * (-f2(r) + cb1 * f(r) + cb * f1(r));
                let apb = ladder_apply(Ladder::APlus, bf, dbf, r, m).unwrap();

                let delta = delta_apply(f(r), f1(r), f2(r), r, m).unwrap();
                assert!(
                    (bma - apb).abs() <= 1e-10,
                    "factorization split at r={r}, m={m}: {bma} vs {apb}"
                );
                assert!(
                    (bma - delta).abs() <= 1e-10,
                    "composition vs direct at r={r}, m={m}"
                );
            }
        }
    }

    #[test]
    fn radial_profile_base_cases() {
        let p = radial_phi2(0, 0);
        assert_eq!(p.lambda(), 0.0);
        for &r in &interior_r_grid(9) {
            let e = p.eval(r);
            assert!((e.v - 1.0).abs() < 1e-15);
            assert!(e.d1.abs() < 1e-15);
        }

        let p = radial_phi2(1, 0);
        assert_eq!(p.lambda(), 2.0);
        for &r in &interior_r_grid(9) {
            let e = p.eval(r);
            assert!((e.v - 0.5 * r.sin()).abs() < 1e-14);
        }

        let p = radial_phi2(0, 1);
        assert_eq!(p.lambda(), 2.0);
        for &r in &interior_r_grid(9) {
            let e = p.eval(r);
            assert!((e.v - r.cos()).abs() < 1e-14, "cos r identity at r={r}");
        }
    }

    #[test]
    fn radial_profile_vanishes_at_poles_for_nonzero_m() {
        for m in [1, -1, 2, 3] {
            let p = radial_phi2(m, 1);
            let near0 = p.eval(1e-4).v.abs();
            let near_pi = p.eval(PI - 1e-4).v.abs();
            let peak = interior_r_grid(101)
                .iter()
                .map(|&r| p.eval(r).v.abs())
                .fold(0.0f64, f64::max);
            assert!(near0 < 1e-3 * peak);
            assert!(near_pi < 1e-3 * peak);
        }
    }

    #[test]
    fn radial_ode_residual_small() {
        for m in [-3i32, -1, 0, 1, 2, 3] {
            for n_r in 0..=3u32 {
                if (n_r + m.unsigned_abs()) > 6 {
                    continue;
                }
                let p = radial_phi2(m, n_r);
                let lambda = p.lambda();
                let mut scale = 0.0f64;
                let mut worst = 0.0f64;
                for &r in &interior_r_grid(101) {
                    let e = p.eval(r);
                    let cot = r.cos() / r.sin();
                    let m2 = (m * m) as f64 / (r.sin() * r.sin());
                    let terms = [e.d2, cot * e.d1, -m2 * e.v, lambda * e.v];
                    let resid = terms.iter().sum::<f64>().abs();
                    let local = terms.iter().fold(0.0f64, |a, t| a.max(t.abs()));
                    scale = scale.max(local);
                    worst = worst.max(resid);
                }
                assert!(
                    worst <= 1e-9 * scale.max(1e-30),
                    "radial ODE residual {worst:.2e} (scale {scale:.2e}) at m={m}, n_r={n_r}"
                );
            }
        }
    }

    #[test]
    fn radial_eigenproperty_of_delta() {
        for m in [-3, 0, 1, 2] {
            for n_r in 0..=3u32 {
                let p = radial_phi2(m, n_r);
                let lambda = p.lambda();
                for &r in &interior_r_grid(61) {
                    let e = p.eval(r);
                    let twice_delta = 2.0 * delta_apply(e.v, e.d1, e.d2, r, m).unwrap();
                    let scale = e.v.abs().max(1.0);
                    assert!(
                        (twice_delta - lambda * e.v).abs() <= 1e-9 * scale.max(lambda.abs()),
                        "eigenproperty failed at m={m}, n_r={n_r}, r={r}"
                    );
                }
            }
        }
    }

    fn helical_mode(m: i32, n_r: u32, n_z: u32, mass: f64) -> ModeSpec {
        ModeSpec::new(m, n_r, n_z, mass, HelicityClass::NonzeroSigmaPlus)
    }

    #[test]
    fn axial_ground_profile_is_cosine() {
        let profile = axial_phi2(&helical_mode(0, 0, 0, 0.0)).unwrap();
        assert_eq!(profile.exponent_s, 1.0);
        for &z in &interior_z_grid(11) {
            let e = profile.eval_f(z);
            assert!((e.v - Complex64::new(z.cos(), 0.0)).norm() < 1e-14);
            assert!((e.d1 - Complex64::new(-z.sin(), 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn axial_profile_obeys_conjugation_symmetry() {
        let profile = axial_phi2(&helical_mode(1, 1, 2, 1.5)).unwrap();
        let at_zero = profile.eval_f(0.0).v;
        assert!(at_zero.im.abs() < 1e-12 * at_zero.re.abs().max(1e-30));
        for &z in &interior_z_grid(15) {
            let plus = profile.eval_f(z).v;
            let minus = profile.eval_f(-z).v;
            assert!((minus - plus.conj()).norm() <= 1e-12 * plus.norm().max(1e-30));
        }
    }

    #[test]
    fn axial_node_count_matches_n_z() {
        // |Z| has exactly n_z interior zeros
        for (n_z, expected) in [(0u32, 0usize), (1, 1), (2, 2)] {
            let profile = axial_phi2(&helical_mode(0, 1, n_z, 0.5)).unwrap();
            let grid = interior_z_grid(4001);
            let mags: Vec<f64> = grid.iter().map(|&z| profile.eval_f(z).v.norm()).collect();
            let peak = mags.iter().cloned().fold(0.0f64, f64::max);
            let mut zeros = 0;
            for i in 1..mags.len() - 1 {
                if mags[i] < mags[i - 1] && mags[i] <= mags[i + 1] && mags[i] < 1e-3 * peak {
                    zeros += 1;
                }
            }
            assert_eq!(zeros, expected, "node count for n_z={n_z}");
        }
    }

    #[test]
    fn axial_oscillator_residual_small() {
        let modes = [
            helical_mode(0, 0, 0, 0.0),
            helical_mode(1, 0, 1, 1.0),
            helical_mode(2, 1, 1, 3.0),
            ModeSpec::new(1, 0, 1, 1.0, HelicityClass::ZeroSigma),
            ModeSpec::new(0, 1, 2, 2.0, HelicityClass::ZeroSigma),
        ];
        for mode in modes {
            let profile = axial_phi2(&mode).unwrap();
            let s2 = profile.exponent_s * profile.exponent_s;
            let lambda = profile.lambda();
            let mut worst = 0.0f64;
            let mut scale = 0.0f64;
            for &z in &interior_z_grid(201) {
                let e = profile.eval_f(z);
                let c2 = z.cos() * z.cos();
                let terms = [e.d2, s2 * e.v, -lambda / c2 * e.v];
                let resid = (terms[0] + terms[1] + terms[2]).norm();
                let local = terms.iter().fold(0.0f64, |a, t| a.max(t.norm()));
                worst = worst.max(resid);
                scale = scale.max(local);
            }
            assert!(
                worst <= 1e-9 * scale,
                "oscillator residual {worst:.2e} vs scale {scale:.2e} for {mode:?}"
            );
        }
    }

    #[test]
    fn axial_derivatives_match_finite_differences() {
        let profile = axial_phi2(&helical_mode(1, 1, 1, 2.0)).unwrap();
        let h = 1e-6;
        for &z in &interior_z_grid(21) {
            let e = profile.eval_f(z);
            let fd = (profile.eval_f(z + h).v - profile.eval_f(z - h).v) / (2.0 * h);
            assert!(
                (e.d1 - fd).norm() <= 1e-7 * e.d1.norm().max(1.0),
                "axial derivative mismatch at z={z}"
            );
        }
        let radial = radial_phi2(2, 1);
        for &r in &interior_r_grid(21) {
            let e = radial.eval(r);
            let fd = (radial.eval(r + h).v - radial.eval(r - h).v) / (2.0 * h);
            assert!(
                (e.d1 - fd).abs() <= 1e-7 * e.d1.abs().max(1.0),
                "radial derivative mismatch at r={r}"
            );
        }
    }

    #[test]
    fn axial_boundary_decay_exponent() {
        // nodeless profiles decay exactly like cos^s z; fitted log-log slope
        // must land on s
        for (m, n_r, mass) in [(0, 0, 0.0), (1, 0, 1.0), (1, 1, 2.0)] {
            let mode = helical_mode(m, n_r, 0, mass);
            let profile = axial_phi2(&mode).unwrap();
            let s = profile.exponent_s;
            let z1 = PI / 2.0 - 1e-2;
            let z2 = PI / 2.0 - 1e-3;
            let v1 = profile.eval_f(z1).v.norm();
            let v2 = profile.eval_f(z2).v.norm();
            let slope = (v1.ln() - v2.ln()) / (z1.cos().ln() - z2.cos().ln());
            assert!(
                (slope - s).abs() <= 1e-2,
                "fitted decay exponent {slope} vs s={s} for m={m}, n_r={n_r}"
            );
        }
        // with axial nodes the polynomial eats n_z powers: the observed
        // exponent is N + 1, still positive, so the profile vanishes
        let mode = helical_mode(1, 0, 2, 0.0);
        let profile = axial_phi2(&mode).unwrap();
        let z1 = PI / 2.0 - 1e-2;
        let z2 = PI / 2.0 - 1e-3;
        let slope = (profile.eval_f(z1).v.norm().ln() - profile.eval_f(z2).v.norm().ln())
            / (z1.cos().ln() - z2.cos().ln());
        assert!(
            (slope - 2.0).abs() <= 1e-2,
            "observed exponent {slope} vs N+1=2"
        );
    }

    #[test]
    fn barred_pair_identities() {
        let mode = helical_mode(1, 1, 1, 1.0);
        let point = mode.spectral_point().unwrap();
        let radial = Arc::new(radial_phi2(mode.m, mode.n_r));
        let axial = Arc::new(axial_phi2(&mode).unwrap());
        let pair = barred_pair(Arc::clone(&radial), Arc::clone(&axial), point.sigma);

        for &r in &interior_r_grid(9) {
            for &z in &interior_z_grid(9) {
                let b1 = pair.phi_bar_1.eval(r, z);
                let b3 = pair.phi_bar_3.eval(r, z);
                let re = radial.eval(r);
                let ze = axial.eval_f(z);
                let phi2 = re.v * ze.v;
                let dz_phi2 = re.v * ze.d1;
                // difference reproduces sigma * phi2
                assert!((b3.v - b1.v - point.sigma * phi2).norm() <= 1e-12 * phi2.norm().max(1.0));
                // sum reproduces -d_z phi2
                assert!((b1.v + b3.v + dz_phi2).norm() <= 1e-12 * dz_phi2.norm().max(1.0));
            }
        }
    }

    #[test]
    fn barred_pair_coincides_for_zero_sigma() {
        let mode = ModeSpec::new(0, 1, 1, 1.0, HelicityClass::ZeroSigma);
        let radial = Arc::new(radial_phi2(mode.m, mode.n_r));
        let axial = Arc::new(axial_phi2(&mode).unwrap());
        let pair = barred_pair(
            Arc::clone(&radial),
            Arc::clone(&axial),
            Complex64::new(0.0, 0.0),
        );
        for &r in &interior_r_grid(5) {
            for &z in &interior_z_grid(5) {
                let b1 = pair.phi_bar_1.eval(r, z);
                let b3 = pair.phi_bar_3.eval(r, z);
                assert!((b1.v - b3.v).norm() <= 1e-14 * b1.v.norm().max(1e-30));
                let dz = radial.eval(r).v * axial.eval_f(z).d1;
                assert!((b1.v + 0.5 * dz).norm() <= 1e-13 * dz.norm().max(1e-30));
            }
        }
    }

    #[test]
    fn massless_sigma_branches_share_profiles() {
        let plus = helical_mode(1, 0, 0, 0.0);
        let minus = ModeSpec::new(1, 0, 0, 0.0, HelicityClass::NonzeroSigmaMinus);
        let sp = plus.spectral_point().unwrap();
        let sm = minus.spectral_point().unwrap();
        assert!((sp.sigma + sm.sigma).norm() < 1e-15);
        assert!(
            (sp.sigma - Complex64::new(0.0, sp.epsilon)).norm() < 1e-15,
            "massless sigma is +-i epsilon"
        );
        let _ = sigma_branch_guard(&sp.sigma, SigmaBranch::Plus);
    }

    fn sigma_branch_guard(sigma: &Complex64, branch: SigmaBranch) -> bool {
        match branch {
            SigmaBranch::Plus => sigma.im > 0.0,
            SigmaBranch::Minus => sigma.im < 0.0,
        }
    }
}
