//! Non-relativistic closed forms for the two decoupling cases
//! `c_V = c_S` (spin symmetry) and `c_V = -c_S` (pseudo-spin symmetry).
//!
//! Both cases share one structure: a Schrödinger-like single-channel
//! problem with strength `2c` (spin) or the energy-dependent
//! `c'k²/(2m²)` (pseudo-spin). The module reuses the kernel integrals at
//! real `k`; there is no separate integral code path.
//!
//! ```
//! use dirac_pt::kernel::PotentialSpec;
//! use dirac_pt::kinematics::Kinematics;
//! use dirac_pt::nonrel::{nr_scatter, NRCase};
//! use dirac_pt::scattering::scatter;
//!
//! let geometry = PotentialSpec::yamaguchi(0.0, 0.0, 2.0, 1.0, 1.0, 1.0).unwrap();
//! let rel = PotentialSpec::yamaguchi(5.0, 5.0, 2.0, 1.0, 1.0, 1.0).unwrap();
//! let k: f64 = 0.1;
//! let kin = Kinematics::scattering((1.0 + k * k).sqrt(), 1.0).unwrap();
//! let full = scatter(&rel, &kin).unwrap();
//! let nr = nr_scatter(&NRCase::spin(5.0), &geometry, k, 1.0).unwrap();
//! // the limit closes in on the relativistic value as O(k²)
//! assert!((full.t_lr - nr.t_lr).norm() < 1e-3);
//! ```

use crate::kernel::{kernel_integrals, KernelError, PotentialSpec};
use crate::scattering::ScatteringResult;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NRCaseKind {
    /// `c_V = c_S = c`
    Spin,
    /// `c_V = -c_S = c'`
    Pseudospin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NRCase {
    pub kind: NRCaseKind,
    pub strength: f64,
}

impl NRCase {
    pub fn spin(strength: f64) -> Self {
        Self { kind: NRCaseKind::Spin, strength }
    }

    pub fn pseudospin(strength: f64) -> Self {
        Self { kind: NRCaseKind::Pseudospin, strength }
    }

    /// Schrödinger-equivalent coupling strength: `2c` for the spin case,
    /// `c'k²/(2m²)` for the pseudo-spin case.
    pub fn effective_strength(&self, k: f64, m: f64) -> f64 {
        match self.kind {
            NRCaseKind::Spin => 2.0 * self.strength,
            NRCaseKind::Pseudospin => self.strength * k * k / (2.0 * m * m),
        }
    }

    /// Dimensionless prefactor multiplying the transform products:
    /// `2cm/k` for spin, `c'k/(2m)` for pseudo-spin.
    fn prefactor(&self, k: f64, m: f64) -> f64 {
        match self.kind {
            NRCaseKind::Spin => 2.0 * self.strength * m / k,
            NRCaseKind::Pseudospin => self.strength * k / (2.0 * m),
        }
    }

    /// Sign of the reflection amplitudes relative to `-i·w`: the pseudo-spin
    /// formulas flip it.
    fn reflection_sign(&self) -> f64 {
        match self.kind {
            NRCaseKind::Spin => -1.0,
            NRCaseKind::Pseudospin => 1.0,
        }
    }
}

/// Non-relativistic coefficients at momentum `k > 0`. Only the kernel
/// geometry (`a`, `b`, `g`, `h`) of `geometry` is used; its couplings are
/// ignored in favour of the case strength.
pub fn nr_scatter(
    case: &NRCase,
    geometry: &PotentialSpec,
    k: f64,
    m: f64,
) -> Result<ScatteringResult, KernelError> {
    let ints = kernel_integrals(geometry, Complex64::new(k, 0.0))?;
    let i = Complex64::i();
    let w = case.prefactor(k, m);
    let sgn = case.reflection_sign();
    let (a, b) = (geometry.a, geometry.b);

    let g_km = geometry.g_tilde(k - a)?;
    let g_kp = geometry.g_tilde(k + a)?;
    let h_kp = geometry.h_tilde(k + b)?;
    let h_km = geometry.h_tilde(k - b)?;

    let den_prog = 1.0 + i * w * ints.s_plus;
    let den_reg = 1.0 + i * w * (-ints.s_minus + g_km * h_kp + g_kp * h_km);

    let t_lr = 1.0 - i * w * g_km * h_kp / den_prog;
    let r_lr = sgn * i * w * g_kp * h_kp / den_prog;
    let t_rl = 1.0 - i * w * g_kp * h_km / den_reg;
    let r_rl = sgn * i * w * g_km * h_km / den_reg;

    Ok(ScatteringResult::assemble(
        t_lr, r_lr, t_rl, r_rl, den_prog, den_reg,
    ))
}
