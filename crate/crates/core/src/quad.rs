//! Adaptive Simpson quadrature for complex-valued integrands.
//!
//! Used by the generic-form-factor paths (Fourier transforms, kernel
//! integrals, wavefunction norms). The Yamaguchi closed forms never touch
//! this module.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("adaptive quadrature failed to converge on [{a}, {b}] (depth {depth})")]
    Nonconvergence { a: f64, b: f64, depth: u32 },
}

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DEPTH: u32 = 40;

/// Integrate `f` over `[a, b]` with adaptive Simpson refinement.
///
/// The tolerance is relative to the accumulated magnitude of the result,
/// with an absolute floor so that integrals near zero still terminate.
pub fn integrate<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Complex64, QuadError>
where
    F: Fn(f64) -> Complex64,
{
    integrate_with_depth(&f, a, b, rel_tol, DEFAULT_MAX_DEPTH)
}

pub fn integrate_with_depth<F>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<Complex64, QuadError>
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    // scale-aware absolute floor
    let scale = fa.norm().max(fm.norm()).max(fb.norm()) * (b - a).abs();
    let abs_floor = 1e-300f64.max(scale * 1e-16);
    adapt(f, a, b, fa, fm, fb, whole, rel_tol, abs_floor, max_depth)
}

pub fn integrate_real<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64, QuadError>
where
    F: Fn(f64) -> f64,
{
    integrate(|x| Complex64::new(f(x), 0.0), a, b, rel_tol).map(|z| z.re)
}

fn simpson(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
    (fa + 4.0 * fm + fb) * (h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    rel_tol: f64,
    abs_floor: f64,
    depth: u32,
) -> Result<Complex64, QuadError>
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let refined = left + right;
    let err = (refined - whole).norm();
    let tol = (rel_tol * refined.norm()).max(abs_floor);
    if err <= 15.0 * tol || (b - a).abs() < 1e-300 {
        // Richardson extrapolation term
        return Ok(refined + (refined - whole) / 15.0);
    }
    if depth == 0 {
        return Err(QuadError::Nonconvergence { a, b, depth });
    }
    let l = adapt(f, a, m, fa, flm, fm, left, rel_tol, 0.5 * abs_floor, depth - 1)?;
    let r = adapt(f, m, b, fm, frm, fb, right, rel_tol, 0.5 * abs_floor, depth - 1)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomial_exactly() {
        let v = integrate_real(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12).unwrap();
        assert_relative_eq!(v, 16.0, max_relative = 1e-12);
    }

    #[test]
    fn integrates_oscillatory_exponential() {
        // ∫_0^10 e^{-x} cos(5x) dx = (1 - e^{-10}(cos 50 - 5 sin 50))/26
        let exact = (1.0 - (-10.0f64).exp() * ((50.0f64).cos() - 5.0 * (50.0f64).sin())) / 26.0;
        let v = integrate_real(|x| (-x).exp() * (5.0 * x).cos(), 0.0, 10.0, 1e-12).unwrap();
        assert_relative_eq!(v, exact, max_relative = 1e-10);
    }

    #[test]
    fn complex_phase_integral() {
        // ∫_0^1 e^{2ix} dx = (e^{2i} - 1)/(2i)
        let exact = (Complex64::new(0.0, 2.0).exp() - 1.0) / Complex64::new(0.0, 2.0);
        let v = integrate(|x| Complex64::new(0.0, 2.0 * x).exp(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - exact).norm() < 1e-12);
    }
}
