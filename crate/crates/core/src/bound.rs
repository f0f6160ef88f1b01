//! Bound states: real-energy roots of `det M+ = 0` on `(-m, m)`, coupling
//! strengths producing a prescribed bound energy, and the closed-form
//! bound-state wavefunctions with their PT-eigenstate property.
//!
//! ```
//! use dirac_pt::bound::{find_bound_states, SearchConfig};
//! use dirac_pt::kernel::PotentialSpec;
//!
//! // c_V = -c_S = 5m, a = 2, b = 1, c = d = 1: a single bound state
//! let spec = PotentialSpec::yamaguchi(-5.0, 5.0, 2.0, 1.0, 1.0, 1.0).unwrap();
//! let states = find_bound_states(&spec, 1.0, &SearchConfig::default()).unwrap();
//! assert_eq!(states.len(), 1);
//! assert!((states[0].energy - 0.3835).abs() < 5e-4);
//! ```

use crate::kernel::{kernel_integrals, FormFactor, KernelError, PotentialSpec};
use crate::kinematics::{Kinematics, KinematicsError};
use crate::quad::{self, QuadError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("det M+ acquired an imaginary part {im:.3e} on the bound branch")]
    ComplexDeterminant { im: f64 },
    #[error("strength solver requires c_S = 0, got {0}")]
    ScalarCouplingPresent(f64),
    #[error("|N+^(1)| = {0:.3e} is degenerate")]
    DegenerateIntegral(f64),
    #[error("wavefunction denominator within {0:.3e} of a pole (k̄ ≈ c)")]
    PoleProximity(f64),
    #[error("PT ratio r has imaginary part {im:.3e}; kernel is not PT-symmetric")]
    NonRealRatio { im: f64 },
    #[error("root refinement failed to bracket")]
    RefinementFailed,
}

/// One bound state found by the scan, with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    /// Energy in `(-m, m)`.
    pub energy: f64,
    /// `k̄ = sqrt(m² - E²)`.
    pub kbar: f64,
    /// `|det M+|` at the refined root.
    pub det_residual: f64,
    /// Max over a sample grid of `|Ψ(x) - conj(Ψ(-x))|` relative to the
    /// largest sampled amplitude. NaN when the wavefunction could not be
    /// evaluated (pole proximity).
    pub pt_residual: f64,
    /// The real component ratio `r = I+²/I+¹`.
    pub i_plus_ratio: f64,
}

/// Scan-and-refine parameters for [`find_bound_states`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub grid_points: usize,
    /// Energy tolerance of the refined root.
    pub tol: f64,
    /// Inset (in units of m) excluded at both `±m` edges. Near-threshold
    /// states require shrinking this below the default `1e-6`.
    pub edge_inset: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_points: 2048,
            tol: 1e-10,
            edge_inset: 1e-6,
        }
    }
}

/// Real determinant `det M+(E)` on the bound branch.
///
/// On `k = i·k̄` the two plus-branch integrals are complex conjugates, so
/// the determinant is real; an imaginary part above `1e-9` flags a
/// non-PT-symmetric kernel and is reported as an error.
pub fn detm_bound(spec: &PotentialSpec, energy: f64, mass: f64) -> Result<f64, BoundError> {
    let kin = Kinematics::bound(energy, mass)?;
    let ints = kernel_integrals(spec, kin.k)?;
    let i = Complex64::i();
    let c2 = spec.c_v * spec.c_v - spec.c_s * spec.c_s;
    let det = 1.0
        + i * ints.s_plus / kin.k * (spec.c_v * energy + spec.c_s * mass)
        + c2 / 4.0 * (ints.d_plus * ints.d_plus - ints.s_plus * ints.s_plus);
    if det.im.abs() > 1e-9 {
        return Err(BoundError::ComplexDeterminant { im: det.im });
    }
    Ok(det.re)
}

/// Scan `det M+` on a uniform grid over `(-m + δ, m - δ)`, bracket sign
/// changes, and refine each by a bisection/secant hybrid. Deterministic for
/// fixed inputs; an empty list is a valid outcome.
pub fn find_bound_states(
    spec: &PotentialSpec,
    mass: f64,
    config: &SearchConfig,
) -> Result<Vec<BoundState>, BoundError> {
    let n = config.grid_points.max(16);
    let delta = config.edge_inset * mass;
    let lo = -mass + delta;
    let hi = mass - delta;
    let step = (hi - lo) / (n - 1) as f64;

    let f = |e: f64| detm_bound(spec, e, mass).ok();

    let values: Vec<Option<f64>> = (0..n).map(|i| f(lo + i as f64 * step)).collect();

    let mut roots: Vec<f64> = Vec::new();
    for i in 0..n - 1 {
        let (e1, e2) = (lo + i as f64 * step, lo + (i + 1) as f64 * step);
        let (Some(f1), Some(f2)) = (values[i], values[i + 1]) else {
            continue;
        };
        if f1 == 0.0 {
            roots.push(e1);
            continue;
        }
        if f1 * f2 >= 0.0 {
            continue;
        }
        if let Some(root) = refine(&f, e1, f1, e2, f2, config.tol) {
            // a pole also flips the sign; there the refined value blows up
            // instead of shrinking below the bracket endpoints
            if let Some(fr) = f(root) {
                if fr.abs() <= f1.abs().max(f2.abs()) {
                    roots.push(root);
                }
            }
        }
    }
    if let Some(last) = values[n - 1] {
        if last == 0.0 {
            roots.push(hi);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 10.0 * config.tol);

    let mut states = Vec::with_capacity(roots.len());
    for root in roots {
        states.push(make_state(spec, root, mass)?);
    }
    Ok(states)
}

fn make_state(spec: &PotentialSpec, energy: f64, mass: f64) -> Result<BoundState, BoundError> {
    let kin = Kinematics::bound(energy, mass)?;
    let det_residual = detm_bound(spec, energy, mass)?.abs();
    let ratio = pt_component_ratio(spec, energy, mass)?;
    let pt_residual = match BoundWavefunction::new(spec, energy, mass) {
        Ok(wf) => {
            let xs: Vec<f64> = (0..41).map(|i| -10.0 + 0.5 * i as f64).collect();
            wf.pt_residual(&xs)
        }
        Err(_) => f64::NAN,
    };
    Ok(BoundState {
        energy,
        kbar: kin.kbar.unwrap(),
        det_residual,
        pt_residual,
        i_plus_ratio: ratio,
    })
}

/// Bisection with secant acceleration on a sign-changing bracket.
fn refine<F>(f: &F, mut lo: f64, mut flo: f64, mut hi: f64, mut fhi: f64, tol: f64) -> Option<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    for _ in 0..200 {
        if (hi - lo).abs() < tol {
            return Some(0.5 * (lo + hi));
        }
        // secant candidate, clamped away from the bracket edges
        let sec = lo - flo * (hi - lo) / (fhi - flo);
        let mid = 0.5 * (lo + hi);
        let trial = if sec > lo + 0.01 * (hi - lo) && sec < hi - 0.01 * (hi - lo) {
            sec
        } else {
            mid
        };
        let ft = match f(trial) {
            Some(v) => v,
            None => {
                // fall back to pure bisection when the secant point is
                // unevaluable (pole guard)
                let v = f(mid)?;
                if flo * v <= 0.0 {
                    hi = mid;
                    fhi = v;
                } else {
                    lo = mid;
                    flo = v;
                }
                continue;
            }
        };
        if ft == 0.0 {
            return Some(trial);
        }
        if flo * ft < 0.0 {
            hi = trial;
            fhi = ft;
        } else {
            lo = trial;
            flo = ft;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Roots of the strength equation for a purely vector potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrengthRoots {
    Real { c_v_plus: f64, c_v_minus: f64 },
    ComplexPair { re: f64, im: f64 },
}

/// Solve the quadratic bound-state condition for `c_V` (with `c_S = 0`) at
/// a prescribed energy `E ∈ (-m, m)`. One real root is always positive.
pub fn solve_vector_strength(
    spec: &PotentialSpec,
    energy: f64,
    mass: f64,
) -> Result<StrengthRoots, BoundError> {
    if spec.c_s != 0.0 {
        return Err(BoundError::ScalarCouplingPresent(spec.c_s));
    }
    let kin = Kinematics::bound(energy, mass)?;
    let ints = kernel_integrals(spec, kin.k)?;
    let n1 = ints.n1_plus;
    let nsq = n1.norm_sqr();
    if nsq.sqrt() < 1e-13 {
        return Err(BoundError::DegenerateIntegral(nsq.sqrt()));
    }
    let t = energy * n1.re / kin.kbar.unwrap();
    let disc = t * t + nsq;
    if disc < 0.0 {
        return Ok(StrengthRoots::ComplexPair {
            re: t / nsq,
            im: (-disc).sqrt() / nsq,
        });
    }
    Ok(StrengthRoots::Real {
        c_v_plus: (t + disc.sqrt()) / nsq,
        c_v_minus: (t - disc.sqrt()) / nsq,
    })
}

/// Component ratio `r = I+²/I+¹` of the bound spinor; real for a
/// PT-symmetric kernel.
///
/// Computed from the null vector of the singular `M+`, taken from whichever
/// adjugate column is better conditioned. (The one-row shortcut breaks down
/// when `c_V = -c_S`, where the diagonal entry it divides by is itself the
/// vanishing determinant factor.)
pub fn pt_component_ratio(spec: &PotentialSpec, energy: f64, mass: f64) -> Result<f64, BoundError> {
    let kin = Kinematics::bound(energy, mass)?;
    let ints = kernel_integrals(spec, kin.k)?;
    let i = Complex64::i();
    let cvps = spec.c_v + spec.c_s;
    let cvms = spec.c_v - spec.c_s;
    let m11 = 1.0 + i / 2.0 * ints.s_plus / kin.lambda * cvps;
    let m12 = i / 2.0 * ints.d_plus * cvms;
    let m21 = i / 2.0 * ints.d_plus * cvps;
    let m22 = 1.0 + i / 2.0 * kin.lambda * ints.s_plus * cvms;
    let col1 = (m22, -m21);
    let col2 = (-m12, m11);
    let (v1, v2) = if m22.norm_sqr() + m21.norm_sqr() >= m12.norm_sqr() + m11.norm_sqr() {
        col1
    } else {
        col2
    };
    if v1.norm() < 1e-300 {
        return Err(BoundError::DegenerateIntegral(v1.norm()));
    }
    let r = v2 / v1;
    if r.im.abs() > 1e-8 * r.norm().max(1.0) {
        return Err(BoundError::NonRealRatio { im: r.im });
    }
    Ok(r.re)
}

/// The exponential-weighted spatial integrals `e^{∓k̄x}·I_{1,2}(x)` entering
/// the bound-state wavefunction. Closed forms for the Yamaguchi factor,
/// adaptive quadrature otherwise.
#[derive(Debug, Clone)]
pub struct SpatialIntegrals {
    g: FormFactor,
    a: f64,
    kbar: f64,
}

impl SpatialIntegrals {
    pub fn new(g: &FormFactor, a: f64, kbar: f64) -> Result<Self, BoundError> {
        if let FormFactor::Yamaguchi { decay } = g {
            // closed-form denominators c ± k̄ ± ia
            let min_den = [
                Complex64::new(decay + kbar, a),
                Complex64::new(decay - kbar, a),
            ]
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min);
            if min_den < 1e-8 {
                return Err(BoundError::PoleProximity(min_den));
            }
        }
        Ok(Self {
            g: g.clone(),
            a,
            kbar,
        })
    }

    /// `e^{-k̄x}·I₁(x)` where `I₁(x) = ∫_{-∞}^{x} g(x') e^{(ia + k̄)x'} dx'`.
    pub fn i1_weighted(&self, x: f64) -> Result<Complex64, BoundError> {
        let (a, kb) = (self.a, self.kbar);
        match &self.g {
            FormFactor::Yamaguchi { decay } => {
                let c = *decay;
                let d_pp = Complex64::new(c + kb, a);
                let d_mp = Complex64::new(-c + kb, a);
                if x <= 0.0 {
                    Ok((Complex64::new(c, a) * x).exp() / d_pp)
                } else {
                    let e_kb = (-kb * x).exp();
                    Ok(e_kb / d_pp + ((Complex64::new(-c, a) * x).exp() - e_kb) / d_mp)
                }
            }
            _ => {
                let l = self.g.cutoff();
                let g = &self.g;
                let f =
                    |xp: f64| g.eval(xp) * (Complex64::new(kb, a) * xp - kb * x).exp();
                Ok(quad::integrate(f, -l, x.min(l), 1e-10)?)
            }
        }
    }

    /// `e^{k̄x}·I₂(x)` where `I₂(x) = ∫_{x}^{∞} g(x') e^{(ia - k̄)x'} dx'`.
    pub fn i2_weighted(&self, x: f64) -> Result<Complex64, BoundError> {
        let (a, kb) = (self.a, self.kbar);
        match &self.g {
            FormFactor::Yamaguchi { decay } => {
                let c = *decay;
                let d_pm = Complex64::new(c + kb, -a);
                let d_mm = Complex64::new(c - kb, a);
                if x < 0.0 {
                    let e_kb = (kb * x).exp();
                    Ok((e_kb - (Complex64::new(c, a) * x).exp()) / d_mm + e_kb / d_pm)
                } else {
                    Ok((Complex64::new(-c, a) * x).exp() / d_pm)
                }
            }
            _ => {
                let l = self.g.cutoff();
                let g = &self.g;
                let f =
                    |xp: f64| g.eval(xp) * (Complex64::new(-kb, a) * xp + kb * x).exp();
                Ok(quad::integrate(f, x.max(-l), l, 1e-10)?)
            }
        }
    }
}

/// Closed-form bound-state spinor evaluator.
///
/// Built with `I+¹ = scale` real and positive, so the PT-eigenstate
/// property `Ψ(x) = conj(Ψ(-x))` holds pointwise. Call [`normalize`] to set
/// the scale from the quadrature norm.
///
/// [`normalize`]: BoundWavefunction::normalize
#[derive(Debug, Clone)]
pub struct BoundWavefunction {
    pub energy: f64,
    pub mass: f64,
    pub kbar: f64,
    /// Component ratio `r` (real).
    pub ratio: f64,
    spatial: SpatialIntegrals,
    cvps: f64,
    cvms: f64,
    scale: f64,
    g_decay: f64,
}

impl BoundWavefunction {
    pub fn new(spec: &PotentialSpec, energy: f64, mass: f64) -> Result<Self, BoundError> {
        let kin = Kinematics::bound(energy, mass)?;
        let kbar = kin.kbar.unwrap();
        let ratio = pt_component_ratio(spec, energy, mass)?;
        let spatial = SpatialIntegrals::new(&spec.g, spec.a, kbar)?;
        Ok(Self {
            energy,
            mass,
            kbar,
            ratio,
            spatial,
            cvps: spec.c_v + spec.c_s,
            cvms: spec.c_v - spec.c_s,
            scale: 1.0,
            g_decay: spec.g.decay(),
        })
    }

    /// Default half-width of the normalization domain.
    pub fn default_half_width(&self) -> f64 {
        40.0 / self.kbar.min(self.g_decay)
    }

    pub fn eval(&self, x: f64) -> Result<[Complex64; 2], BoundError> {
        let i = Complex64::i();
        let (e, m, kb) = (self.energy, self.mass, self.kbar);
        let w1 = self.spatial.i1_weighted(x)?;
        let w2 = self.spatial.i2_weighted(x)?;
        // (w1·A1 + w2·A2)·v with A_{1,2} the ±ik̄ spinor matrices
        let v = [Complex64::from(self.cvps), Complex64::from(self.cvms * self.ratio)];
        let row = |m11: Complex64, m12: Complex64| m11 * v[0] + m12 * v[1];
        let psi1 = w1 * row((e + m).into(), i * kb) + w2 * row((e + m).into(), -i * kb);
        let psi2 = w1 * row(i * kb, (e - m).into()) + w2 * row(-i * kb, (e - m).into());
        let pref = -self.scale / (2.0 * kb);
        Ok([pref * psi1, pref * psi2])
    }

    /// `∫ (|Ψ₁|² + |Ψ₂|²) dx` over `[-half_width, half_width]` at the
    /// current scale.
    pub fn norm_integral(&self, half_width: f64) -> Result<f64, BoundError> {
        let err = std::cell::Cell::new(None);
        let f = |x: f64| match self.eval(x) {
            Ok([p1, p2]) => Complex64::new(p1.norm_sqr() + p2.norm_sqr(), 0.0),
            Err(e) => {
                err.set(Some(e));
                Complex64::default()
            }
        };
        let v = quad::integrate(f, -half_width, half_width, 1e-9)?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(v.re)
    }

    /// Fix `I+¹` so that the quadrature norm over the default domain is 1.
    pub fn normalize(&mut self) -> Result<(), BoundError> {
        let n = self.norm_integral(self.default_half_width())?;
        self.scale /= n.sqrt();
        Ok(())
    }

    /// Max over the sample points of `|Ψ(x) - conj(Ψ(-x))|`, divided by the
    /// largest sampled amplitude (scale-invariant).
    pub fn pt_residual(&self, xs: &[f64]) -> f64 {
        let mut max_gap = 0.0f64;
        let mut max_amp = 0.0f64;
        for &x in xs {
            let (Ok(p), Ok(q)) = (self.eval(x), self.eval(-x)) else {
                return f64::NAN;
            };
            for j in 0..2 {
                max_gap = max_gap.max((p[j] - q[j].conj()).norm());
                max_amp = max_amp.max(p[j].norm());
            }
        }
        if max_amp == 0.0 {
            return f64::NAN;
        }
        max_gap / max_amp
    }
}
