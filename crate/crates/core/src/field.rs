//! Evaluation plumbing for separable field components.
//!
//! Every component handled here is a product coeff * f(r) * g(z) whose 1D
//! factors carry analytic first and second derivatives. Components are
//! immutable and cheap to clone (factors are shared), and evaluation is
//! pure, so they can be used from any number of threads.

use std::sync::Arc;

use num_complex::Complex64;

/// Value and first two derivatives of a 1D factor at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorEval {
    pub v: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl FactorEval {
    pub const ZERO: FactorEval = FactorEval {
        v: Complex64::new(0.0, 0.0),
        d1: Complex64::new(0.0, 0.0),
        d2: Complex64::new(0.0, 0.0),
    };

    pub fn real(v: f64, d1: f64, d2: f64) -> Self {
        Self {
            v: Complex64::new(v, 0.0),
            d1: Complex64::new(d1, 0.0),
            d2: Complex64::new(d2, 0.0),
        }
    }
}

/// Shared 1D factor with analytic derivatives.
pub type Factor = Arc<dyn Fn(f64) -> FactorEval + Send + Sync>;

/// Constant-one factor.
pub fn unit_factor() -> Factor {
    Arc::new(|_| FactorEval {
        v: Complex64::new(1.0, 0.0),
        d1: Complex64::new(0.0, 0.0),
        d2: Complex64::new(0.0, 0.0),
    })
}

/// Wraps a factor with division by cos^power(z), propagating derivatives.
pub fn over_cos_power(inner: Factor, power: i32) -> Factor {
    Arc::new(move |z: f64| {
        let f = inner(z);
        let c = z.cos();
        let s = z.sin();
        let u = c.powi(-power);
        let p = power as f64;
        // d/dz c^-p = p s c^(-p-1); d2/dz2 c^-p = p(p+1) s^2 c^(-p-2) + p c^-p
        let u1 = p * s * c.powi(-power - 1);
        let u2 = p * (p + 1.0) * s * s * c.powi(-power - 2) + p * u;
        FactorEval {
            v: f.v * u,
            d1: f.d1 * u + f.v * u1,
            d2: f.d2 * u + 2.0 * f.d1 * u1 + f.v * u2,
        }
    })
}

/// Field value and analytic partial derivatives at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEval {
    pub v: Complex64,
    pub dr: Complex64,
    pub dz: Complex64,
    pub drr: Complex64,
    pub dzz: Complex64,
}

impl PointEval {
    pub const ZERO: PointEval = PointEval {
        v: Complex64::new(0.0, 0.0),
        dr: Complex64::new(0.0, 0.0),
        dz: Complex64::new(0.0, 0.0),
        drr: Complex64::new(0.0, 0.0),
        dzz: Complex64::new(0.0, 0.0),
    };
}

/// One separable field component coeff * radial(r) * axial(z).
#[derive(Clone)]
pub struct Component {
    coeff: Complex64,
    radial: Factor,
    axial: Factor,
}

impl std::fmt::Debug for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Component")
            .field("coeff", &self.coeff)
            .finish()
    }
}

impl Component {
    pub fn new(coeff: Complex64, radial: Factor, axial: Factor) -> Self {
        Self {
            coeff,
            radial,
            axial,
        }
    }

    pub fn zero() -> Self {
        Self {
            coeff: Complex64::new(0.0, 0.0),
            radial: unit_factor(),
            axial: unit_factor(),
        }
    }

    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }

    /// Identically-zero components short-circuit evaluation.
    pub fn is_zero(&self) -> bool {
        self.coeff == Complex64::new(0.0, 0.0)
    }

    /// Same component with the coefficient multiplied by `factor`; used for
    /// proportional blocks and perturbation injection.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            coeff: self.coeff * factor,
            radial: Arc::clone(&self.radial),
            axial: Arc::clone(&self.axial),
        }
    }

    pub fn eval(&self, r: f64, z: f64) -> PointEval {
        if self.is_zero() {
            return PointEval::ZERO;
        }
        let fr = (self.radial)(r);
        let fz = (self.axial)(z);
        PointEval {
            v: self.coeff * fr.v * fz.v,
            dr: self.coeff * fr.d1 * fz.v,
            dz: self.coeff * fr.v * fz.d1,
            drr: self.coeff * fr.d2 * fz.v,
            dzz: self.coeff * fr.v * fz.d2,
        }
    }
}
