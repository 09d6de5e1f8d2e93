//! Assembly of the full ten-component field (Phi0, Phi, E, H) for one mode.
//!
//! The separable scalar phi2 = R(r) Z(z) fixes everything else:
//!
//! * the barred combinations (1/2)(-+sigma - d/dz) phi2 give the axial
//!   factors of the 1- and 3-components;
//! * their radial factors come from inverting the first-order ladder
//!   operators, b_minus f = R and a_plus f = R, on the branch regular at the
//!   pole where the homogeneous solution blows up;
//! * the E and H blocks are algebraically proportional to the Phi block,
//!   with coefficients fixed by requiring every line of the first-order
//!   system to vanish identically on the sigma^2 = M^2 - epsilon^2 shell.
//!
//! In the massless limit the potential-like Phi block is forced to zero and
//! the E block carries the separable profile, with H = (sigma/epsilon) E.
//! The zero-helicity class instead grows from the scalar Phi0, has H = 0,
//! and E = -i (M/epsilon) Phi.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{over_cos_power, Component, Factor, FactorEval};
use crate::modes::{HelicityClass, ModeSpec, SpectralPoint};
use crate::profiles::{
    axial_f_factor, axial_phi2, axial_physical_factor, barred_axial_factor,
    ladder_coefficient_derivative, ladder_coefficients, radial_factor, radial_phi2, Ladder,
    LADDER_GAMMA,
};

const PI: f64 = std::f64::consts::PI;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Knobs for the assembly step.
#[derive(Debug, Clone, Copy)]
pub struct AssemblyOptions {
    /// Reconstruct the 1- and 3-components by ladder inversion. Disabling
    /// this leaves them zero and yields a partial field useful only for
    /// sampling the closed-form components.
    pub reconstruct_unbarred: bool,
    /// Number of quadrature cells for the ladder inversion (min 256).
    pub ode_steps: usize,
    /// Domain margin passed through to evaluation guards.
    pub margin: f64,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self {
            reconstruct_unbarred: true,
            ode_steps: 2048,
            margin: 1e-6,
        }
    }
}

impl AssemblyOptions {
    fn effective_steps(&self) -> usize {
        self.ode_steps.max(256)
    }
}

/// Names of the ten field components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentId {
    Phi0,
    Phi1,
    Phi2,
    Phi3,
    E1,
    E2,
    E3,
    H1,
    H2,
    H3,
}

impl ComponentId {
    pub const ALL: [ComponentId; 10] = [
        ComponentId::Phi0,
        ComponentId::Phi1,
        ComponentId::Phi2,
        ComponentId::Phi3,
        ComponentId::E1,
        ComponentId::E2,
        ComponentId::E3,
        ComponentId::H1,
        ComponentId::H2,
        ComponentId::H3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ComponentId::Phi0 => "Phi0",
            ComponentId::Phi1 => "Phi1",
            ComponentId::Phi2 => "Phi2",
            ComponentId::Phi3 => "Phi3",
            ComponentId::E1 => "E1",
            ComponentId::E2 => "E2",
            ComponentId::E3 => "E3",
            ComponentId::H1 => "H1",
            ComponentId::H2 => "H2",
            ComponentId::H3 => "H3",
        }
    }

    pub fn parse(s: &str) -> Option<ComponentId> {
        ComponentId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s))
    }
}

/// Auxiliary zero-helicity scalars kept for the second-order checks.
#[derive(Debug, Clone)]
pub struct ZeroSigmaAux {
    /// The unscaled axial-substituted scalar phi2 (before the 1/cos^2 z
    /// rescaling of the physical component).
    pub phi2_lower: Component,
    /// The common barred combination.
    pub phi_bar: Component,
}

/// The assembled ten-component field with analytic derivatives.
#[derive(Debug, Clone)]
pub struct Field10 {
    pub phi0: Component,
    pub phi: [Component; 3],
    pub e: [Component; 3],
    pub h: [Component; 3],
    pub mode: ModeSpec,
    pub point: SpectralPoint,
    pub zero_sigma_aux: Option<ZeroSigmaAux>,
}

impl Field10 {
    pub fn component(&self, id: ComponentId) -> &Component {
        match id {
            ComponentId::Phi0 => &self.phi0,
            ComponentId::Phi1 => &self.phi[0],
            ComponentId::Phi2 => &self.phi[1],
            ComponentId::Phi3 => &self.phi[2],
            ComponentId::E1 => &self.e[0],
            ComponentId::E2 => &self.e[1],
            ComponentId::E3 => &self.e[2],
            ComponentId::H1 => &self.h[0],
            ComponentId::H2 => &self.h[1],
            ComponentId::H3 => &self.h[2],
        }
    }

    fn component_mut(&mut self, id: ComponentId) -> &mut Component {
        match id {
            ComponentId::Phi0 => &mut self.phi0,
            ComponentId::Phi1 => &mut self.phi[0],
            ComponentId::Phi2 => &mut self.phi[1],
            ComponentId::Phi3 => &mut self.phi[2],
            ComponentId::E1 => &mut self.e[0],
            ComponentId::E2 => &mut self.e[1],
            ComponentId::E3 => &mut self.e[2],
            ComponentId::H1 => &mut self.h[0],
            ComponentId::H2 => &mut self.h[1],
            ComponentId::H3 => &mut self.h[2],
        }
    }

    /// Copy of the field with one component multiplied by (1 + rel).
    pub fn with_perturbed(&self, id: ComponentId, rel: f64) -> Field10 {
        let mut out = self.clone();
        let scaled = out.component(id).scaled(c64(1.0 + rel, 0.0));
        *out.component_mut(id) = scaled;
        out
    }

    /// Components that are not identically zero for this mode.
    pub fn nonzero_components(&self) -> Vec<ComponentId> {
        ComponentId::ALL
            .iter()
            .copied()
            .filter(|id| !self.component(*id).is_zero())
            .collect()
    }
}

/// Which first-order ladder operator to invert.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvertibleLadder {
    BMinus,
    APlus,
}

impl InvertibleLadder {
    fn ladder(&self) -> Ladder {
        match self {
            InvertibleLadder::BMinus => Ladder::BMinus,
            InvertibleLadder::APlus => Ladder::APlus,
        }
    }

    /// Exponent of tan(r/2) in the homogeneous solution tan^k(r/2)/sin r.
    fn hom_exponent(&self, m: i32) -> i32 {
        match self {
            InvertibleLadder::BMinus => m,
            InvertibleLadder::APlus => -m,
        }
    }
}

/// Pole at which integration is anchored: the end where the homogeneous
/// solution of the ladder operator diverges, so the regular branch is the
/// unique one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Anchor {
    Zero,
    Pi,
}

/// 8-point Gauss-Legendre rule on [-1, 1].
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Solution of gamma (-+ f' + c(r) f) = target(r) on the branch regular at
/// the anchored pole, realized as the integrating-factor quadrature
/// f = A hom(r) S(r) with S the cumulative integral of target / hom.
pub struct LadderInverse {
    which: InvertibleLadder,
    m: i32,
    target: Factor,
    amplitude: f64,
    anchor: Anchor,
    /// Integral of the weighted target from the anchored pole to each cell
    /// boundary, accumulated from the anchor side so values near it are
    /// sums of small pieces rather than differences of large ones.
    cums: Vec<Complex64>,
    step: f64,
}

impl LadderInverse {
    fn hom(&self, r: f64) -> f64 {
        (0.5 * r).tan().powi(self.which.hom_exponent(self.m)) / r.sin()
    }

    fn weight(&self, r: f64) -> f64 {
        // 1 / hom, written without dividing through the pole factors
        r.sin() * (0.5 * r).tan().powi(-self.which.hom_exponent(self.m))
    }

    fn integrand(&self, r: f64) -> Complex64 {
        (self.target)(r).v * self.weight(r)
    }

    fn gauss_segment(&self, a: f64, b: f64) -> Complex64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = c64(0.0, 0.0);
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
            acc += self.integrand(mid + half * x) * *w;
        }
        acc * half
    }

    /// Integral of the weighted target from the anchored pole to r.
    fn cumulative(&self, r: f64) -> Complex64 {
        let idx = ((r / self.step) as usize).min(self.cums.len() - 2);
        match self.anchor {
            Anchor::Zero => self.cums[idx] + self.gauss_segment(idx as f64 * self.step, r),
            Anchor::Pi => self.cums[idx + 1] - self.gauss_segment(r, (idx + 1) as f64 * self.step),
        }
    }

    pub fn eval(&self, r: f64) -> FactorEval {
        let s = self.cumulative(r);
        let v = self.amplitude * self.hom(r) * s;
        let t = (self.target)(r);
        let (_, c) = ladder_coefficients(self.which.ladder(), r, self.m);
        let c1 = ladder_coefficient_derivative(self.which.ladder(), r, self.m);
        // first and second derivatives recovered from the defining equation
        let (d1, d2) = match self.which {
            InvertibleLadder::BMinus => {
                let d1 = c * v - t.v / LADDER_GAMMA;
                (d1, c1 * v + c * d1 - t.d1 / LADDER_GAMMA)
            }
            InvertibleLadder::APlus => {
                let d1 = t.v / LADDER_GAMMA - c * v;
                (d1, t.d1 / LADDER_GAMMA - c1 * v - c * d1)
            }
        };
        FactorEval { v, d1, d2 }
    }

    pub fn into_factor(self) -> Factor {
        let me = Arc::new(self);
        Arc::new(move |r: f64| me.eval(r))
    }
}

/// Inverts b_minus f = target or a_plus f = target for the branch that is
/// regular wherever the homogeneous solution tan^(+-m)(r/2)/sin r diverges.
pub fn invert_ladder(
    target: Factor,
    which: InvertibleLadder,
    m: i32,
    opts: &AssemblyOptions,
) -> Result<LadderInverse> {
    let anchor = match which {
        InvertibleLadder::BMinus => {
            if m <= 0 {
                Anchor::Zero
            } else {
                Anchor::Pi
            }
        }
        InvertibleLadder::APlus => {
            if m >= 0 {
                Anchor::Zero
            } else {
                Anchor::Pi
            }
        }
    };
    let amplitude = match which {
        InvertibleLadder::BMinus => -1.0 / LADDER_GAMMA,
        InvertibleLadder::APlus => 1.0 / LADDER_GAMMA,
    };
    let cells = opts.effective_steps();
    let step = PI / cells as f64;
    let mut inverse = LadderInverse {
        which,
        m,
        target,
        amplitude,
        anchor,
        cums: vec![c64(0.0, 0.0); cells + 1],
        step,
    };
    let mut acc = c64(0.0, 0.0);
    match anchor {
        Anchor::Zero => {
            for i in 0..cells {
                acc += inverse.gauss_segment(i as f64 * step, (i + 1) as f64 * step);
                inverse.cums[i + 1] = acc;
            }
        }
        Anchor::Pi => {
            for i in (0..cells).rev() {
                acc -= inverse.gauss_segment(i as f64 * step, (i + 1) as f64 * step);
                inverse.cums[i] = acc;
            }
        }
    }
    if !acc.is_finite() {
        return Err(Error::Inversion(format!(
            "weighted integral diverged over {cells} cells"
        )));
    }
    Ok(inverse)
}

/// Proportionality coefficients (c_E, c_H) with E_j = c_E Phi_j and
/// H_j = c_H Phi_j for the massive nonzero-helicity classes. They are the
/// unique pair closing the first-order system given
/// sigma^2 = M^2 - epsilon^2.
pub fn proportionality_coefficients(point: &SpectralPoint, mass: f64) -> (Complex64, Complex64) {
    let i = c64(0.0, 1.0);
    (-i * point.epsilon / mass, -i * point.sigma / mass)
}

/// Assembles a mode of either nonzero-helicity class with M > 0.
pub fn assemble_nonzero_sigma(mode: &ModeSpec, opts: &AssemblyOptions) -> Result<Field10> {
    if mode.class == HelicityClass::ZeroSigma {
        return Err(Error::Assembly(
            "zero-helicity mode passed to the nonzero-helicity assembler".into(),
        ));
    }
    if mode.mass == 0.0 {
        return Err(Error::Assembly(
            "massless mode: the E/H blocks decouple, use the massless assembler".into(),
        ));
    }
    let point = mode.spectral_point()?;
    let (c_e, c_h) = proportionality_coefficients(&point, mode.mass);
    let (phi1, phi2, phi3) = helicity_block(mode, &point, opts)?;
    let e = [phi1.scaled(c_e), phi2.scaled(c_e), phi3.scaled(c_e)];
    let h = [phi1.scaled(c_h), phi2.scaled(c_h), phi3.scaled(c_h)];
    Ok(Field10 {
        phi0: Component::zero(),
        phi: [phi1, phi2, phi3],
        e,
        h,
        mode: *mode,
        point,
        zero_sigma_aux: None,
    })
}

/// Assembles a massless mode: the Phi block is forced to zero by the
/// first-order system, the separable profile lives in the E block, and
/// H = (sigma / epsilon) E.
pub fn assemble_massless(mode: &ModeSpec, opts: &AssemblyOptions) -> Result<Field10> {
    if mode.class == HelicityClass::ZeroSigma {
        return Err(Error::Assembly(
            "zero-helicity mode passed to the massless assembler".into(),
        ));
    }
    if mode.mass != 0.0 {
        return Err(Error::Assembly(format!(
            "massless assembler called with M = {}",
            mode.mass
        )));
    }
    let point = mode.spectral_point()?;
    let i = c64(0.0, 1.0);
    let (amp1, amp2, amp3) = helicity_block(mode, &point, opts)?;
    let e = [
        amp1.scaled(-i * point.epsilon),
        amp2.scaled(-i * point.epsilon),
        amp3.scaled(-i * point.epsilon),
    ];
    let h = [
        amp1.scaled(-i * point.sigma),
        amp2.scaled(-i * point.sigma),
        amp3.scaled(-i * point.sigma),
    ];
    Ok(Field10 {
        phi0: Component::zero(),
        phi: [Component::zero(), Component::zero(), Component::zero()],
        e,
        h,
        mode: *mode,
        point,
        zero_sigma_aux: None,
    })
}

/// Shared construction of one helicity eigenblock (V1, V2, V3) from the
/// separable scalar, in physical normalization (cos z rescalings applied).
fn helicity_block(
    mode: &ModeSpec,
    point: &SpectralPoint,
    opts: &AssemblyOptions,
) -> Result<(Component, Component, Component)> {
    let radial = Arc::new(radial_phi2(mode.m, mode.n_r));
    let axial = Arc::new(axial_phi2(mode)?);
    let one = c64(1.0, 0.0);

    let v2 = Component::new(
        one,
        radial_factor(Arc::clone(&radial)),
        over_cos_power(axial_f_factor(Arc::clone(&axial)), 2),
    );
    if !opts.reconstruct_unbarred {
        return Ok((Component::zero(), v2, Component::zero()));
    }

    let f_b = invert_ladder(
        radial_factor(Arc::clone(&radial)),
        InvertibleLadder::BMinus,
        mode.m,
        opts,
    )?;
    let f_a = invert_ladder(
        radial_factor(Arc::clone(&radial)),
        InvertibleLadder::APlus,
        mode.m,
        opts,
    )?;
    let v1 = Component::new(
        one,
        f_b.into_factor(),
        over_cos_power(
            barred_axial_factor(Arc::clone(&axial), point.sigma, -1.0),
            1,
        ),
    );
    let v3 = Component::new(
        one,
        f_a.into_factor(),
        over_cos_power(barred_axial_factor(axial, point.sigma, 1.0), 1),
    );
    Ok((v1, v2, v3))
}

/// Assembles a zero-helicity mode from its scalar potential.
pub fn assemble_zero_sigma(mode: &ModeSpec, opts: &AssemblyOptions) -> Result<Field10> {
    if mode.class != HelicityClass::ZeroSigma {
        return Err(Error::Assembly(
            "nonzero-helicity mode passed to the zero-helicity assembler".into(),
        ));
    }
    let point = mode.spectral_point()?;
    let q = point.epsilon * point.epsilon - mode.mass * mode.mass;
    if q.abs() < 1e-12 {
        return Err(Error::Assembly(format!(
            "epsilon^2 - M^2 = {q:.3e}: the scalar-to-vector relations degenerate at n = 0"
        )));
    }
    let lambda = point.lambda;
    let eps = point.epsilon;
    let i = c64(0.0, 1.0);

    let radial = Arc::new(radial_phi2(mode.m, mode.n_r));
    let axial = Arc::new(axial_phi2(mode)?);
    let phi0_z = axial_physical_factor(Arc::clone(&axial));
    let one = c64(1.0, 0.0);

    let phi0 = Component::new(one, radial_factor(Arc::clone(&radial)), Arc::clone(&phi0_z));

    // phi2 = (i eps / q) cos^2 z d_z Phi0; the second derivative of the
    // axial factor uses the separated equation for the Phi0 z-factor once.
    let w_axial: Factor = {
        let phi0_z = Arc::clone(&phi0_z);
        Arc::new(move |z: f64| {
            let g = phi0_z(z);
            let c = z.cos();
            let s = z.sin();
            let c2 = c * c;
            let v = c2 * g.d1;
            let d1 = c2 * g.d2 - 2.0 * c * s * g.d1;
            // d/dz of (lambda - q cos^2 z) g, using (c^2 g')' = (lambda - q c^2) g
            let d2 = lambda * g.d1 - q * (c2 * g.d1 - 2.0 * c * s * g.v);
            FactorEval { v, d1, d2 }
        })
    };
    let k_phi2 = i * eps / q;
    let phi2_lower = Component::new(
        k_phi2,
        radial_factor(Arc::clone(&radial)),
        Arc::clone(&w_axial),
    );
    let phi2 = Component::new(
        k_phi2,
        radial_factor(Arc::clone(&radial)),
        over_cos_power(w_axial, 2),
    );

    let k_bar = -i * eps * lambda / (2.0 * q);
    let phi_bar = phi0.scaled(k_bar);

    let (phi1, phi3) = if lambda == 0.0 || !opts.reconstruct_unbarred {
        (Component::zero(), Component::zero())
    } else {
        let f_b = invert_ladder(
            radial_factor(Arc::clone(&radial)),
            InvertibleLadder::BMinus,
            mode.m,
            opts,
        )?;
        let f_a = invert_ladder(
            radial_factor(Arc::clone(&radial)),
            InvertibleLadder::APlus,
            mode.m,
            opts,
        )?;
        (
            Component::new(
                k_bar,
                f_b.into_factor(),
                over_cos_power(Arc::clone(&phi0_z), 1),
            ),
            Component::new(k_bar, f_a.into_factor(), over_cos_power(phi0_z, 1)),
        )
    };

    let c_e = -i * mode.mass / eps;
    let e = [phi1.scaled(c_e), phi2.scaled(c_e), phi3.scaled(c_e)];
    Ok(Field10 {
        phi0,
        phi: [phi1, phi2, phi3],
        e,
        h: [Component::zero(), Component::zero(), Component::zero()],
        mode: *mode,
        point,
        zero_sigma_aux: Some(ZeroSigmaAux {
            phi2_lower,
            phi_bar,
        }),
    })
}

/// Dispatches to the class-appropriate assembler.
pub fn assemble(mode: &ModeSpec, opts: &AssemblyOptions) -> Result<Field10> {
    match mode.class {
        HelicityClass::ZeroSigma => assemble_zero_sigma(mode, opts),
        _ if mode.mass == 0.0 => assemble_massless(mode, opts),
        _ => assemble_nonzero_sigma(mode, opts),
    }
}
