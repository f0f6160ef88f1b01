//! The separable kernel `K(x,y) = g(x)e^{iax} h(y)e^{iby}` and its four
//! fundamental integrals.
//!
//! For Yamaguchi form factors `exp(-c|x|)` everything is available in closed
//! form; generic even form factors fall back to nested adaptive quadrature.
//!
//! ```
//! use dirac_pt::kernel::{FormFactor, PotentialSpec, kernel_integrals};
//! use num_complex::Complex64;
//!
//! let g = FormFactor::yamaguchi(1.0).unwrap();
//! let spec = PotentialSpec::new(0.0, 0.0, 0.0, 0.0, g.clone(), g).unwrap();
//! let ints = kernel_integrals(&spec, Complex64::new(1.0, 0.0)).unwrap();
//! // symmetric kernel at a = b = 0: the difference combination vanishes
//! assert!(ints.d_plus.norm() < 1e-12);
//! ```

use crate::kinematics::Kinematics;
use crate::mat2::Mat2;
use crate::quad::{self, QuadError};
use num_complex::Complex64;
use std::cell::Cell;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Relative envelope level at which the semi-infinite integration axes are
/// truncated for quadrature.
pub const TRUNCATION_ENVELOPE: f64 = 1e-14;

/// Guard against evaluating the continued Lorentzian transform `2c/(c²+q²)`
/// too close to its poles at `q = ±ic`.
pub const POLE_GUARD: f64 = 1e-10;

const QUAD_REL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("form-factor decay constant must be positive, got {0}")]
    InvalidDecay(f64),
    #[error("generic form factor is not even at x = {x}: |f(x) - f(-x)| = {gap:.3e}")]
    NotEven { x: f64, gap: f64 },
    #[error("parameter {name} must be finite")]
    NonFinite { name: &'static str },
    #[error("momentum must lie in the closed upper half plane, got Im k = {0}")]
    LowerHalfPlane(f64),
    #[error("Fourier transform evaluated within {0:.3e} of a Lorentzian pole")]
    PoleProximity(f64),
    #[error("complex-argument transform requires a Yamaguchi form factor")]
    GenericComplexTransform,
    #[error("green function requires scattering kinematics (real k > 0)")]
    NotScatteringKinematics,
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Real even profile shaping one side of the kernel.
#[derive(Clone)]
pub enum FormFactor {
    /// `g(x) = exp(-c|x|)` with Lorentzian transform `2c/(c² + q²)`.
    Yamaguchi { decay: f64 },
    /// Arbitrary even profile with a stated exponential decay bound, handled
    /// by adaptive quadrature.
    GenericEven {
        eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        decay_bound: f64,
    },
}

impl fmt::Debug for FormFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Yamaguchi { decay } => write!(f, "Yamaguchi({decay})"),
            Self::GenericEven { decay_bound, .. } => write!(f, "GenericEven(decay≥{decay_bound})"),
        }
    }
}

impl FormFactor {
    pub fn yamaguchi(decay: f64) -> Result<Self, KernelError> {
        if decay <= 0.0 || !decay.is_finite() {
            return Err(KernelError::InvalidDecay(decay));
        }
        Ok(Self::Yamaguchi { decay })
    }

    /// Wrap an even profile. Evenness is spot-checked on a sample grid at
    /// construction; `decay_bound` states the exponential envelope used to
    /// truncate integrals.
    pub fn generic_even<F>(eval: F, decay_bound: f64) -> Result<Self, KernelError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if decay_bound <= 0.0 || !decay_bound.is_finite() {
            return Err(KernelError::InvalidDecay(decay_bound));
        }
        for &x in &[0.13, 0.47, 0.91, 1.73, 2.61, 3.7, 5.9] {
            let gap = (eval(x) - eval(-x)).abs();
            if gap > 1e-12 * eval(x).abs().max(1.0) {
                return Err(KernelError::NotEven { x, gap });
            }
        }
        Ok(Self::GenericEven {
            eval: Arc::new(eval),
            decay_bound,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Yamaguchi { decay } => (-decay * x.abs()).exp(),
            Self::GenericEven { eval, .. } => eval(x),
        }
    }

    pub fn decay(&self) -> f64 {
        match self {
            Self::Yamaguchi { decay } => *decay,
            Self::GenericEven { decay_bound, .. } => *decay_bound,
        }
    }

    pub fn is_yamaguchi(&self) -> bool {
        matches!(self, Self::Yamaguchi { .. })
    }

    /// Half-width of the truncated integration domain: the point where the
    /// decay envelope falls below [`TRUNCATION_ENVELOPE`] of its peak.
    pub fn cutoff(&self) -> f64 {
        -TRUNCATION_ENVELOPE.ln() / self.decay()
    }

    /// Real Fourier transform `∫ f(x) cos(qx) dx` (even profile, so the
    /// transform is real and even in `q`).
    pub fn transform(&self, q: f64) -> Result<f64, KernelError> {
        match self {
            Self::Yamaguchi { decay } => Ok(2.0 * decay / (decay * decay + q * q)),
            Self::GenericEven { eval, .. } => {
                let l = self.cutoff();
                let f = |x: f64| Complex64::new(eval(x) * (q * x).cos(), 0.0);
                Ok(quad::integrate(f, -l, l, QUAD_REL_TOL)?.re)
            }
        }
    }

    /// Analytic continuation of the transform to complex argument.
    /// Closed form only: the bound-branch formulas need `g̃(a ± i·k̄)`,
    /// which is well defined for the Lorentzian but not provided for
    /// generic profiles.
    pub fn transform_complex(&self, q: Complex64) -> Result<Complex64, KernelError> {
        match self {
            Self::Yamaguchi { decay } => {
                let den = decay * decay + q * q;
                if den.norm() < POLE_GUARD {
                    return Err(KernelError::PoleProximity(den.norm()));
                }
                Ok(2.0 * decay / den)
            }
            Self::GenericEven { .. } => {
                if q.im == 0.0 {
                    Ok(Complex64::new(self.transform(q.re)?, 0.0))
                } else {
                    Err(KernelError::GenericComplexTransform)
                }
            }
        }
    }
}

/// Full parameter set of the non-local potential: couplings, kernel phases
/// and the two form factors. PT symmetry `K(x,y) = K*(-x,-y)` holds by
/// construction for even `g`, `h` and real `a`, `b`.
#[derive(Debug, Clone)]
pub struct PotentialSpec {
    pub c_s: f64,
    pub c_v: f64,
    pub a: f64,
    pub b: f64,
    pub g: FormFactor,
    pub h: FormFactor,
}

impl PotentialSpec {
    pub fn new(
        c_s: f64,
        c_v: f64,
        a: f64,
        b: f64,
        g: FormFactor,
        h: FormFactor,
    ) -> Result<Self, KernelError> {
        for (name, v) in [("c_s", c_s), ("c_v", c_v), ("a", a), ("b", b)] {
            if !v.is_finite() {
                return Err(KernelError::NonFinite { name });
            }
        }
        Ok(Self { c_s, c_v, a, b, g, h })
    }

    /// Yamaguchi kernel shorthand: `g = exp(-c|x|)`, `h = exp(-d|y|)`.
    pub fn yamaguchi(
        c_s: f64,
        c_v: f64,
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    ) -> Result<Self, KernelError> {
        Self::new(
            c_s,
            c_v,
            a,
            b,
            FormFactor::yamaguchi(c)?,
            FormFactor::yamaguchi(d)?,
        )
    }

    pub fn is_yamaguchi(&self) -> bool {
        self.g.is_yamaguchi() && self.h.is_yamaguchi()
    }

    pub fn g_tilde(&self, q: f64) -> Result<f64, KernelError> {
        self.g.transform(q)
    }

    pub fn h_tilde(&self, q: f64) -> Result<f64, KernelError> {
        self.h.transform(q)
    }

    pub fn g_tilde_c(&self, q: Complex64) -> Result<Complex64, KernelError> {
        self.g.transform_complex(q)
    }

    pub fn h_tilde_c(&self, q: Complex64) -> Result<Complex64, KernelError> {
        self.h.transform_complex(q)
    }
}

/// Which Green-function branch an object belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// The four fundamental kernel integrals and their sum/difference
/// combinations at a fixed `(a, b, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelIntegrals {
    pub n1_plus: Complex64,
    pub n2_plus: Complex64,
    pub n1_minus: Complex64,
    pub n2_minus: Complex64,
    pub s_plus: Complex64,
    pub d_plus: Complex64,
    pub s_minus: Complex64,
    pub d_minus: Complex64,
}

impl KernelIntegrals {
    fn from_n(
        n1_plus: Complex64,
        n2_plus: Complex64,
        n1_minus: Complex64,
        n2_minus: Complex64,
    ) -> Self {
        Self {
            n1_plus,
            n2_plus,
            n1_minus,
            n2_minus,
            s_plus: n1_plus + n2_plus,
            d_plus: n1_plus - n2_plus,
            s_minus: n1_minus + n2_minus,
            d_minus: n1_minus - n2_minus,
        }
    }
}

/// Evaluate all four `N` integrals at momentum `k` (real positive for
/// scattering, positive imaginary for the bound branch).
pub fn kernel_integrals(spec: &PotentialSpec, k: Complex64) -> Result<KernelIntegrals, KernelError> {
    if k.im < 0.0 {
        return Err(KernelError::LowerHalfPlane(k.im));
    }
    if spec.is_yamaguchi() {
        let (n1p, n2p) = yamaguchi_pair(spec, k, Branch::Plus)?;
        let (n1m, n2m) = yamaguchi_pair(spec, k, Branch::Minus)?;
        Ok(KernelIntegrals::from_n(n1p, n2p, n1m, n2m))
    } else {
        let (n1p, n2p) = quadrature_pair(spec, k, Branch::Plus)?;
        let (n1m, n2m) = quadrature_pair(spec, k, Branch::Minus)?;
        Ok(KernelIntegrals::from_n(n1p, n2p, n1m, n2m))
    }
}

/// Closed forms for the Yamaguchi kernel, analytically continued in `k`.
fn yamaguchi_pair(
    spec: &PotentialSpec,
    k: Complex64,
    branch: Branch,
) -> Result<(Complex64, Complex64), KernelError> {
    let s = branch.sign();
    let (a, b) = (spec.a, spec.b);
    let c = spec.g.decay();
    let d = spec.h.decay();
    let i = Complex64::i();
    let phase_norm = (a + b) * (a + b) + (c + d) * (c + d);

    // N^(1): arguments a ∓ k, b ± k for the ± branch
    let q1 = a - s * k;
    let gt1 = spec.g_tilde_c(q1)?;
    let ht1 = spec.h_tilde_c(b + s * k)?;
    let n1 = -i / c * gt1 * (((a + b) * c + (c + d) * q1) / phase_norm)
        + gt1 * ht1 / 2.0 * (1.0 + i * (b + s * k) / d);

    // N^(2): arguments a ± k, b ∓ k
    let q2 = a + s * k;
    let gt2 = spec.g_tilde_c(q2)?;
    let ht2 = spec.h_tilde_c(b - s * k)?;
    let n2 = i / c * gt2 * (((a + b) * c + (c + d) * q2) / phase_norm)
        + gt2 * ht2 / 2.0 * (1.0 - i * (b - s * k) / d);

    Ok((n1, n2))
}

/// Nested adaptive quadrature of the defining double integrals. The inner
/// domain is split at the Heaviside boundary `x' = x`, never sampled across
/// it.
fn quadrature_pair(
    spec: &PotentialSpec,
    k: Complex64,
    branch: Branch,
) -> Result<(Complex64, Complex64), KernelError> {
    let s = branch.sign();
    let lg = spec.g.cutoff();
    let lh = spec.h.cutoff();
    let i = Complex64::i();
    let a = spec.a;
    let b = spec.b;

    let inner_err: Cell<Option<QuadError>> = Cell::new(None);

    // N^(1): x' ≤ x, phase e^{± ik(x - x')}
    let n1 = {
        let outer = |x: f64| {
            let hi = x.min(lg);
            if hi <= -lg {
                return Complex64::default();
            }
            let inner = quad::integrate(
                |xp: f64| spec.g.eval(xp) * (i * (a * xp) + s * i * k * (x - xp)).exp(),
                -lg,
                hi,
                QUAD_REL_TOL,
            );
            match inner {
                Ok(v) => spec.h.eval(x) * (i * b * x).exp() * v,
                Err(e) => {
                    inner_err.set(Some(e));
                    Complex64::default()
                }
            }
        };
        quad::integrate(outer, -lh, lh, QUAD_REL_TOL)?
    };
    if let Some(e) = inner_err.take() {
        return Err(e.into());
    }

    // N^(2): x' ≥ x, phase e^{∓ ik(x - x')}
    let n2 = {
        let outer = |x: f64| {
            let lo = x.max(-lg);
            if lo >= lg {
                return Complex64::default();
            }
            let inner = quad::integrate(
                |xp: f64| spec.g.eval(xp) * (i * (a * xp) - s * i * k * (x - xp)).exp(),
                lo,
                lg,
                QUAD_REL_TOL,
            );
            match inner {
                Ok(v) => spec.h.eval(x) * (i * b * x).exp() * v,
                Err(e) => {
                    inner_err.set(Some(e));
                    Complex64::default()
                }
            }
        };
        quad::integrate(outer, -lh, lh, QUAD_REL_TOL)?
    };
    if let Some(e) = inner_err.take() {
        return Err(e.into());
    }

    Ok((n1, n2))
}

/// Free Dirac Green function `G±(dx)` at scattering kinematics:
/// `±(i/2k)·e^{±ik|dx|}·(±k·σx·sgn(dx) + m·σz + E)`, with `sgn(0) := +1`.
pub fn green_function(kin: &Kinematics, dx: f64, branch: Branch) -> Result<Mat2, KernelError> {
    if kin.is_bound() {
        return Err(KernelError::NotScatteringKinematics);
    }
    let s = branch.sign();
    let k = kin.k.re;
    let sgn = if dx < 0.0 { -1.0 } else { 1.0 };
    let phase = (Complex64::i() * s * k * dx.abs()).exp();
    let spatial = Mat2::sigma_x().scale((s * k * sgn).into())
        + Mat2::sigma_z().scale(kin.mass.into())
        + Mat2::identity().scale(kin.energy.into());
    Ok(spatial.scale(s * Complex64::i() / (2.0 * k) * phase))
}
