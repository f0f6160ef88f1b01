//! M matrices, transmission/reflection coefficients, the S matrix and its
//! PT diagnostics.
//!
//! The regressive coefficients are computed twice on purpose: once from the
//! simplified closed forms and once by solving the underlying linear system.
//! The two routes must agree, which guards against transcription slips in
//! the long formulas.
//!
//! ```
//! use dirac_pt::kernel::PotentialSpec;
//! use dirac_pt::kinematics::Kinematics;
//! use dirac_pt::scattering::scatter;
//!
//! let spec = PotentialSpec::yamaguchi(5.0, 5.0, 2.0, 1.0, 1.0, 1.0).unwrap();
//! let kin = Kinematics::scattering(2.0, 1.0).unwrap();
//! let result = scatter(&spec, &kin).unwrap();
//! // PT symmetry survives in the S matrix even though unitarity is broken
//! assert!(result.diagnostics.det_s_modulus_minus_one.abs() < 1e-10);
//! ```

use crate::kernel::{kernel_integrals, Branch, KernelError, KernelIntegrals, PotentialSpec};
use crate::kinematics::Kinematics;
use crate::mat2::Mat2;
use num_complex::Complex64;
use thiserror::Error;

/// Below this determinant magnitude a transmission pole sits on the real
/// axis and the coefficients are meaningless.
pub const DET_SINGULAR: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatteringError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("det M+ = {0:.3e} is singular: transmission pole on the real axis")]
    SingularDenominator(f64),
}

/// `M± = 1 + N±(c_S β + c_V)` with its determinant from the closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MMatrix {
    pub entries: Mat2,
    pub det: Complex64,
    pub branch: Branch,
}

/// Assemble `M±` from precomputed kernel integrals.
pub fn m_matrix_from(
    spec: &PotentialSpec,
    kin: &Kinematics,
    ints: &KernelIntegrals,
    branch: Branch,
) -> MMatrix {
    let s = branch.sign();
    let i = Complex64::i();
    let (big_s, big_d) = match branch {
        Branch::Plus => (ints.s_plus, ints.d_plus),
        Branch::Minus => (ints.s_minus, ints.d_minus),
    };
    let lam = kin.lambda;
    let cvps = spec.c_v + spec.c_s;
    let cvms = spec.c_v - spec.c_s;
    let entries = Mat2::new([
        [
            1.0 + s * i / 2.0 * big_s / lam * cvps,
            i / 2.0 * big_d * cvms,
        ],
        [
            i / 2.0 * big_d * cvps,
            1.0 + s * i / 2.0 * lam * big_s * cvms,
        ],
    ]);
    let det = 1.0
        + s * i * big_s / kin.k * (spec.c_v * kin.energy + spec.c_s * kin.mass)
        + (spec.c_v * spec.c_v - spec.c_s * spec.c_s) / 4.0 * (big_d * big_d - big_s * big_s);
    MMatrix { entries, det, branch }
}

pub fn m_matrix(
    spec: &PotentialSpec,
    kin: &Kinematics,
    branch: Branch,
) -> Result<MMatrix, ScatteringError> {
    let ints = kernel_integrals(spec, kin.k)?;
    Ok(m_matrix_from(spec, kin, &ints, branch))
}

/// Residuals of the PT S-matrix conditions: all three vanish for a
/// PT-symmetric potential at any non-threshold energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTDiagnostics {
    /// `|det S| - 1`
    pub det_s_modulus_minus_one: f64,
    /// `|T_LR| - |T_RL|`
    pub t_modulus_gap: f64,
    /// `Im(R_LR · conj(R_RL))`
    pub reflection_phase_residual: f64,
}

impl PTDiagnostics {
    pub fn from_coefficients(
        t_lr: Complex64,
        r_lr: Complex64,
        t_rl: Complex64,
        r_rl: Complex64,
    ) -> Self {
        let det_s = t_lr * t_rl - r_lr * r_rl;
        Self {
            det_s_modulus_minus_one: det_s.norm() - 1.0,
            t_modulus_gap: t_lr.norm() - t_rl.norm(),
            reflection_phase_residual: (r_lr * r_rl.conj()).im,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.det_s_modulus_minus_one
            .abs()
            .max(self.t_modulus_gap.abs())
            .max(self.reflection_phase_residual.abs())
    }
}

/// All four coefficients, the assembled S matrix and PT residuals at one
/// scattering energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult {
    pub t_lr: Complex64,
    pub r_lr: Complex64,
    pub t_rl: Complex64,
    pub r_rl: Complex64,
    pub det_m_plus: Complex64,
    pub det_m_minus: Complex64,
    pub s_matrix: Mat2,
    pub diagnostics: PTDiagnostics,
}

impl ScatteringResult {
    pub(crate) fn assemble(
        t_lr: Complex64,
        r_lr: Complex64,
        t_rl: Complex64,
        r_rl: Complex64,
        det_m_plus: Complex64,
        det_m_minus: Complex64,
    ) -> Self {
        Self {
            t_lr,
            r_lr,
            t_rl,
            r_rl,
            det_m_plus,
            det_m_minus,
            s_matrix: Mat2::new([[t_lr, r_rl], [r_lr, t_rl]]),
            diagnostics: PTDiagnostics::from_coefficients(t_lr, r_lr, t_rl, r_rl),
        }
    }
}

/// Full scattering computation at one energy: progressive coefficients from
/// the Green-function asymptotics, regressive ones from the simplified
/// closed forms.
pub fn scatter(spec: &PotentialSpec, kin: &Kinematics) -> Result<ScatteringResult, ScatteringError> {
    let ints = kernel_integrals(spec, kin.k)?;
    let mp = m_matrix_from(spec, kin, &ints, Branch::Plus);
    let mm = m_matrix_from(spec, kin, &ints, Branch::Minus);
    if mp.det.norm() < DET_SINGULAR {
        return Err(ScatteringError::SingularDenominator(mp.det.norm()));
    }
    let k = kin.k.re;
    let e = kin.energy;
    let m = kin.mass;
    let i = Complex64::i();
    let cv = spec.c_v;
    let cs = spec.c_s;
    let c2 = cv * cv - cs * cs;

    let g_am = spec.g_tilde(spec.a - k)?;
    let g_ap = spec.g_tilde(spec.a + k)?;
    let h_bp = spec.h_tilde(spec.b + k)?;
    let h_bm = spec.h_tilde(spec.b - k)?;

    let t_lr = 1.0
        - i / 2.0 * g_am * h_bp * (2.0 / k * (cv * e + cs * m)
            + i * c2 * (ints.s_plus - ints.d_plus))
            / mp.det;
    let r_lr = -i / k * g_ap * h_bp * (cv * m + cs * e) / mp.det;

    let t_rl = (mm.det + g_am * h_bp * (i * (cv * e + cs * m) / k + c2 * ints.n1_minus)) / mp.det;
    // in P+^(D) - P+^(S) the kernel-integral terms cancel identically,
    // leaving the same structure as R_LR with the other transform arguments
    let r_rl = -i / k * g_am * h_bm * (cv * m + cs * e) / mp.det;

    Ok(ScatteringResult::assemble(
        t_lr, r_lr, t_rl, r_rl, mp.det, mm.det,
    ))
}

/// Regressive coefficients by solving the original two-equation linear
/// system, without the Appendix-B simplification. Used as the second route
/// of the dual-formulation cross-check.
pub fn regressive_via_linear_system(
    spec: &PotentialSpec,
    kin: &Kinematics,
) -> Result<(Complex64, Complex64), ScatteringError> {
    let ints = kernel_integrals(spec, kin.k)?;
    let mm = m_matrix_from(spec, kin, &ints, Branch::Minus);
    let parts = RegressiveParts::new(spec, kin, &ints, mm.det)?;
    if parts.d_frak.norm() < DET_SINGULAR {
        return Err(ScatteringError::SingularDenominator(parts.d_frak.norm()));
    }
    Ok((parts.t_rl(), parts.r_rl()))
}

/// Relative residual of the determinant identity
/// `d_S = 2 · det M+ · det M-` linking the two regressive formulations.
pub fn determinant_identity_residual(
    spec: &PotentialSpec,
    kin: &Kinematics,
) -> Result<f64, ScatteringError> {
    let ints = kernel_integrals(spec, kin.k)?;
    let mp = m_matrix_from(spec, kin, &ints, Branch::Plus);
    let mm = m_matrix_from(spec, kin, &ints, Branch::Minus);
    let parts = RegressiveParts::new(spec, kin, &ints, mm.det)?;
    let lhs = parts.d_frak;
    let rhs = 2.0 * mp.det * mm.det;
    Ok((lhs - rhs).norm() / lhs.norm().max(1e-300))
}

struct RegressiveParts {
    det_m_minus: Complex64,
    g_am: f64,
    h_bp: f64,
    h_bm: f64,
    ps_plus: Complex64,
    pd_plus: Complex64,
    d_frak: Complex64,
}

impl RegressiveParts {
    fn new(
        spec: &PotentialSpec,
        kin: &Kinematics,
        ints: &KernelIntegrals,
        det_m_minus: Complex64,
    ) -> Result<Self, ScatteringError> {
        let k = kin.k.re;
        let i = Complex64::i();
        let lam = kin.lambda;
        let cv = spec.c_v;
        let cs = spec.c_s;
        let c2 = cv * cv - cs * cs;

        let g_am = spec.g_tilde(spec.a - k)?;
        let g_ap = spec.g_tilde(spec.a + k)?;
        let h_bp = spec.h_tilde(spec.b + k)?;
        let h_bm = spec.h_tilde(spec.b - k)?;

        let sd_plus = ints.s_minus + ints.d_minus;
        let sd_minus = ints.s_minus - ints.d_minus;
        let ps = |sd: Complex64| (cs + cv) / lam - i / 2.0 * c2 * sd;
        let pd = |sign: f64, sd: Complex64| sign * (lam * (cv - cs) - i / 2.0 * c2 * sd);
        let ps_plus = ps(sd_plus);
        let ps_minus = ps(sd_minus);
        let pd_plus = pd(1.0, sd_plus);
        let pd_minus = pd(-1.0, sd_minus);

        let d_frak = 2.0 * det_m_minus * det_m_minus
            + i * g_am * h_bp * det_m_minus * (pd_plus + ps_plus)
            - i * g_ap * h_bm * det_m_minus * (pd_minus - ps_minus)
            + g_ap * g_am * h_bp * h_bm * (ps_plus * pd_minus - ps_minus * pd_plus);

        Ok(Self {
            det_m_minus,
            g_am,
            h_bp,
            h_bm,
            ps_plus,
            pd_plus,
            d_frak,
        })
    }

    fn t_rl(&self) -> Complex64 {
        let i = Complex64::i();
        self.det_m_minus
            * (2.0 * self.det_m_minus
                + i * self.g_am * self.h_bp * (self.pd_plus + self.ps_plus))
            / self.d_frak
    }

    fn r_rl(&self) -> Complex64 {
        let i = Complex64::i();
        i * self.g_am * self.h_bm * self.det_m_minus * (self.pd_plus - self.ps_plus) / self.d_frak
    }
}

/// Max residual of the parity relations
/// `T_LR(-a,-b) = T_RL(a,b)` and `R_LR(-a,-b) = R_RL(a,b)`,
/// evaluated by two full scattering computations.
pub fn parity_flip_check(spec: &PotentialSpec, kin: &Kinematics) -> Result<f64, ScatteringError> {
    let flipped = PotentialSpec {
        a: -spec.a,
        b: -spec.b,
        ..spec.clone()
    };
    let direct = scatter(spec, kin)?;
    let mirror = scatter(&flipped, kin)?;
    Ok((mirror.t_lr - direct.t_rl)
        .norm()
        .max((mirror.r_lr - direct.r_rl).norm()))
}

/// Progressive transmission coefficient analytically continued to complex
/// momentum (Yamaguchi kernel). Bound states show up as its poles on the
/// positive imaginary `k` axis.
pub fn transmission_lr_at(
    spec: &PotentialSpec,
    energy: f64,
    mass: f64,
    k: Complex64,
) -> Result<Complex64, ScatteringError> {
    let ints = kernel_integrals(spec, k)?;
    let i = Complex64::i();
    let cv = spec.c_v;
    let cs = spec.c_s;
    let c2 = cv * cv - cs * cs;
    let det = 1.0
        + i * ints.s_plus / k * (cv * energy + cs * mass)
        + c2 / 4.0 * (ints.d_plus * ints.d_plus - ints.s_plus * ints.s_plus);
    let g_am = spec.g_tilde_c(spec.a - k)?;
    let h_bp = spec.h_tilde_c(spec.b + k)?;
    Ok(1.0
        - i / 2.0 * g_am * h_bp
            * (2.0 / k * (cv * energy + cs * mass) + i * c2 * (ints.s_plus - ints.d_plus))
            / det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fig1_spec(sign: f64) -> PotentialSpec {
        PotentialSpec::yamaguchi(sign * 5.0, 5.0, 2.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn zero_coupling_is_free_particle() {
        let spec = PotentialSpec::yamaguchi(0.0, 0.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        let kin = Kinematics::scattering(2.0, 1.0).unwrap();
        let mp = m_matrix(&spec, &kin, Branch::Plus).unwrap();
        assert!((mp.entries - Mat2::identity()).max_norm() < 1e-15);
        assert!((mp.det - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let r = scatter(&spec, &kin).unwrap();
        assert!((r.t_lr - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((r.t_rl - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(r.r_lr.norm() < 1e-15);
        assert!(r.r_rl.norm() < 1e-15);
        assert_eq!(r.diagnostics.max_abs(), 0.0);
    }

    #[test]
    fn closed_form_determinant_matches_entries() {
        let spec = fig1_spec(1.0);
        for &e in &[2.0, -3.0, 4.7] {
            let kin = Kinematics::scattering(e, 1.0).unwrap();
            for branch in [Branch::Plus, Branch::Minus] {
                let m = m_matrix(&spec, &kin, branch).unwrap();
                let direct = m.entries.det();
                assert!(
                    (m.det - direct).norm() < 1e-12 * direct.norm().max(1.0),
                    "E = {e}, {branch:?}"
                );
            }
        }
    }

    #[test]
    fn determinant_branch_conjugation() {
        // det M-(-a,-b,k) = conj(det M+(a,b,k))
        let spec = fig1_spec(1.0);
        let flipped = PotentialSpec {
            a: -spec.a,
            b: -spec.b,
            ..spec.clone()
        };
        let kin = Kinematics::scattering(2.0, 1.0).unwrap();
        let mp = m_matrix(&spec, &kin, Branch::Plus).unwrap();
        let mm = m_matrix(&flipped, &kin, Branch::Minus).unwrap();
        assert!((mm.det - mp.det.conj()).norm() < 1e-12 * mp.det.norm());
    }

    #[test]
    fn dual_formulation_agreement() {
        let spec = PotentialSpec::yamaguchi(-5.0, 5.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        let kin = Kinematics::scattering(2.0, 1.0).unwrap();
        let r = scatter(&spec, &kin).unwrap();
        let (t_rl, r_rl) = regressive_via_linear_system(&spec, &kin).unwrap();
        assert!((r.t_rl - t_rl).norm() < 1e-10 * t_rl.norm().max(1.0));
        assert!((r.r_rl - r_rl).norm() < 1e-10 * r_rl.norm().max(1.0));
        assert!(determinant_identity_residual(&spec, &kin).unwrap() < 1e-10);
    }

    #[test]
    fn pt_conditions_hold_over_random_specs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let spec = PotentialSpec::yamaguchi(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.5..2.0),
            )
            .unwrap();
            let e = rng.gen_range(1.05..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let kin = Kinematics::scattering(e, 1.0).unwrap();
            let r = scatter(&spec, &kin).unwrap();
            assert!(
                r.diagnostics.max_abs() < 1e-10,
                "PT residual {} for {spec:?} at E = {e}",
                r.diagnostics.max_abs()
            );
        }
    }

    #[test]
    fn parity_flip_relations() {
        let kin = Kinematics::scattering(2.0, 1.0).unwrap();
        assert!(parity_flip_check(&fig1_spec(1.0), &kin).unwrap() < 1e-10);
        let fig2 = PotentialSpec::yamaguchi(2.0, 2.0, -2.0, 1.0, 1.0, 1.0).unwrap();
        let kin_neg = Kinematics::scattering(-3.0, 1.0).unwrap();
        assert!(parity_flip_check(&fig2, &kin_neg).unwrap() < 1e-10);
        // a = b = 0 degenerates to T_LR = T_RL
        let local = PotentialSpec::yamaguchi(1.0, 2.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(parity_flip_check(&local, &kin).unwrap() < 1e-12);
    }

    #[test]
    fn real_symmetric_kernel_is_reciprocal() {
        let spec = PotentialSpec::yamaguchi(1.5, -0.7, 0.0, 0.0, 1.0, 1.0).unwrap();
        let kin = Kinematics::scattering(2.3, 1.0).unwrap();
        let r = scatter(&spec, &kin).unwrap();
        assert!((r.t_lr - r.t_rl).norm() < 1e-12);
        assert!((r.r_lr - r.r_rl).norm() < 1e-12);
    }

    #[test]
    fn hermitian_kernel_gives_unitary_s() {
        // g = h, a = -b makes the kernel Hermitian
        let spec = PotentialSpec::yamaguchi(1.2, -2.0, 1.0, -1.0, 1.0, 1.0).unwrap();
        let kin = Kinematics::scattering(2.0, 1.0).unwrap();
        let r = scatter(&spec, &kin).unwrap();
        let ssd = r.s_matrix * r.s_matrix.adjoint();
        assert!((ssd - Mat2::identity()).max_norm() < 1e-10);
    }

    #[test]
    fn energy_reflection_relation() {
        // T_LR(c_V, c_S, E) = T_LR(-c_V, c_S, -E)
        let spec = fig1_spec(1.0);
        let mirrored = PotentialSpec {
            c_v: -spec.c_v,
            ..spec.clone()
        };
        let kin = Kinematics::scattering(2.4, 1.0).unwrap();
        let kin_neg = Kinematics::scattering(-2.4, 1.0).unwrap();
        let t1 = scatter(&spec, &kin).unwrap().t_lr;
        let t2 = scatter(&mirrored, &kin_neg).unwrap().t_lr;
        assert!((t1 - t2).norm() < 1e-10 * t1.norm());
    }

    #[test]
    fn large_phase_transparency() {
        let spec = PotentialSpec::yamaguchi(5.0, 5.0, 1e3, 1e3, 1.0, 1.0).unwrap();
        for &e in &[-4.0, -1.5, 1.5, 4.0] {
            let kin = Kinematics::scattering(e, 1.0).unwrap();
            let r = scatter(&spec, &kin).unwrap();
            assert!((r.t_lr.norm() - 1.0).abs() < 1e-3, "E = {e}");
            assert!((r.t_rl.norm() - 1.0).abs() < 1e-3, "E = {e}");
            assert!(r.r_lr.norm() < 1e-3, "E = {e}");
            assert!(r.r_rl.norm() < 1e-3, "E = {e}");
        }
    }
}
