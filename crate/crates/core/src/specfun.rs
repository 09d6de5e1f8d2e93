//! Gauss hypergeometric series F(alpha, beta, gamma; x) for complex
//! parameters and argument, specialized to the terminating (polynomial)
//! cases that bound states produce.
//!
//! Bound-state quantum numbers make `alpha` a nonpositive integer, so the
//! series is a polynomial and can be evaluated exactly anywhere in the
//! complex plane, including on the line Re y = 1/2 where |y| > 1. The
//! infinite series is only used for |x| < 1 and stops once the running term
//! is negligible relative to the partial sum.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Detection threshold for "this parameter is a nonpositive integer".
///
/// Quantized modes produce exactly representable integers, so the threshold
/// only needs to absorb rounding from arithmetic on small integers.
pub const INTEGER_DETECTION_TOL: f64 = 1e-12;

/// Default relative tolerance for truncating the non-terminating series.
pub const DEFAULT_SERIES_TOL: f64 = 1e-14;

/// Hard cap on series length before reporting non-convergence.
const MAX_TERMS: usize = 20_000;

/// Parameter triple of the Gauss hypergeometric function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

impl HypParams {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn real(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self {
            alpha: Complex64::new(alpha, 0.0),
            beta: Complex64::new(beta, 0.0),
            gamma: Complex64::new(gamma, 0.0),
        }
    }

    /// Order of the terminating series, if any: the smallest n such that
    /// alpha = -n or beta = -n with n a nonnegative integer.
    pub fn termination_order(&self) -> Option<usize> {
        match (
            nonpositive_integer(self.alpha),
            nonpositive_integer(self.beta),
        ) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }

    /// Index of the first series term whose denominator vanishes, if gamma
    /// is a nonpositive integer: (gamma)_k contains the factor gamma + g = 0
    /// from k = g + 1 onward.
    fn pole_term(&self) -> Option<usize> {
        nonpositive_integer(self.gamma).map(|g| g + 1)
    }

    /// Checks that a terminating series finishes before any gamma pole and
    /// returns its order.
    fn checked_termination(&self) -> Result<Option<usize>> {
        let n = self.termination_order();
        if let Some(pole) = self.pole_term() {
            match n {
                Some(n) if n < pole => Ok(Some(n)),
                _ => Err(Error::Pole {
                    gamma: self.gamma.re,
                    pole_term: pole,
                }),
            }
        } else {
            Ok(n)
        }
    }
}

/// Tests whether `v` is within [`INTEGER_DETECTION_TOL`] of a nonpositive
/// integer and returns that integer's magnitude.
fn nonpositive_integer(v: Complex64) -> Option<usize> {
    if v.im.abs() > INTEGER_DETECTION_TOL {
        return None;
    }
    let rounded = v.re.round();
    if (v.re - rounded).abs() > INTEGER_DETECTION_TOL || rounded > 0.5 {
        return None;
    }
    Some((-rounded) as usize)
}

/// Pochhammer symbol (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
pub fn pochhammer(a: Complex64, k: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..k {
        acc *= a + j as f64;
    }
    acc
}

/// Coefficient list of the terminating series: c_k = (a)_k (b)_k / ((g)_k k!)
/// for k = 0..=n, so that F(x) = sum c_k x^k.
pub fn terminating_coefficients(params: HypParams) -> Result<Vec<Complex64>> {
    let n = params.checked_termination()?.ok_or(Error::Convergence {
        abs_x: f64::INFINITY,
    })?;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = Complex64::new(1.0, 0.0);
    coeffs.push(c);
    for k in 0..n {
        let kf = k as f64;
        c *= (params.alpha + kf) * (params.beta + kf) / ((params.gamma + kf) * (kf + 1.0));
        coeffs.push(c);
    }
    Ok(coeffs)
}

fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Horner evaluation of the d-th derivative of the polynomial with the
/// given coefficients.
fn horner_derivative(coeffs: &[Complex64], x: Complex64, d: usize) -> Complex64 {
    if coeffs.len() <= d {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (d..coeffs.len()).rev() {
        let mut fac = 1.0;
        for j in 0..d {
            fac *= (k - j) as f64;
        }
        acc = acc * x + coeffs[k] * fac;
    }
    acc
}

/// Gauss hypergeometric function F(alpha, beta, gamma; x).
///
/// Terminating parameter sets are summed exactly term by term and are valid
/// for any finite x. Otherwise the series is summed for |x| < 1 and stops
/// once three consecutive terms fall below `tol` relative to the partial sum.
pub fn hyp2f1(params: HypParams, x: Complex64, tol: f64) -> Result<Complex64> {
    if let Some(n) = params.checked_termination()? {
        let mut sum = Complex64::new(1.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let kf = k as f64;
            term *=
                (params.alpha + kf) * (params.beta + kf) / ((params.gamma + kf) * (kf + 1.0)) * x;
            sum += term;
        }
        return Ok(sum);
    }

    if x.norm() >= 1.0 {
        return Err(Error::Convergence { abs_x: x.norm() });
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut small_streak = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (params.alpha + kf) * (params.beta + kf) / ((params.gamma + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.norm() < tol * sum.norm() {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::Convergence { abs_x: x.norm() })
}

/// First derivative dF/dx.
///
/// Terminating series are differentiated term by term; otherwise the
/// contiguous relation dF/dx = (alpha beta / gamma) F(alpha+1, beta+1,
/// gamma+1; x) is used.
pub fn hyp2f1_derivative(params: HypParams, x: Complex64, tol: f64) -> Result<Complex64> {
    if params.checked_termination()?.is_some() {
        let coeffs = terminating_coefficients(params)?;
        return Ok(horner_derivative(&coeffs, x, 1));
    }
    let shifted = HypParams::new(params.alpha + 1.0, params.beta + 1.0, params.gamma + 1.0);
    Ok(params.alpha * params.beta / params.gamma * hyp2f1(shifted, x, tol)?)
}

/// Second derivative d2F/dx2, via term-by-term differentiation for
/// polynomials and the doubly shifted contiguous relation otherwise.
pub fn hyp2f1_second_derivative(params: HypParams, x: Complex64, tol: f64) -> Result<Complex64> {
    if params.checked_termination()?.is_some() {
        let coeffs = terminating_coefficients(params)?;
        return Ok(horner_derivative(&coeffs, x, 2));
    }
    let shifted = HypParams::new(params.alpha + 2.0, params.beta + 2.0, params.gamma + 2.0);
    let prefactor = params.alpha * (params.alpha + 1.0) * params.beta * (params.beta + 1.0)
        / (params.gamma * (params.gamma + 1.0));
    Ok(prefactor * hyp2f1(shifted, x, tol)?)
}

/// Evaluates a terminating F by explicit coefficient construction and
/// Horner's scheme. Used as an independent route against the term-recursion
/// sum in tests.
pub fn hyp2f1_horner(params: HypParams, x: Complex64) -> Result<Complex64> {
    let coeffs = terminating_coefficients(params)?;
    Ok(horner(&coeffs, x))
}
