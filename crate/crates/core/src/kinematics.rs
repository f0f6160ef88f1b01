//! Energy/momentum relations and branch choices shared by the whole crate.
//!
//! Units are `ħ = c = 1` with the particle mass `m` as the energy scale.
//! Scattering states live at `|E| > m` with real momentum `k > 0`; bound
//! states live at `|E| < m` where `k = i·k̄` is purely imaginary.
//!
//! ```
//! use dirac_pt::kinematics::Kinematics;
//!
//! let kin = Kinematics::scattering(5.0, 1.0).unwrap();
//! assert!((kin.k.re - 24f64.sqrt()).abs() < 1e-12);
//!
//! let bound = Kinematics::bound(0.5, 1.0).unwrap();
//! assert!((bound.kbar.unwrap() - 0.75f64.sqrt()).abs() < 1e-12);
//! ```

use num_complex::Complex64;
use thiserror::Error;

/// Half-width (in units of m²) of the excluded band around the `|E| = m`
/// threshold in scattering mode. Transmission and reflection carry explicit
/// `1/k` factors, so sweeps must skip the band rather than emit infinities.
pub const THRESHOLD_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("scattering states require |E| > m (E = {e}, m = {m})")]
    NotScattering { e: f64, m: f64 },
    #[error("bound states require |E| < m (E = {e}, m = {m})")]
    NotBound { e: f64, m: f64 },
    #[error("|E² - m²| = {0:.3e} lies inside the threshold exclusion band")]
    Threshold(f64),
}

/// Kinematic state at a fixed energy: momentum `k` (real or positive
/// imaginary) and the spinor ratio `λ = k/(E + m)`.
///
/// For `E < -m` the two textbook expressions for `λ` disagree in sign; this
/// crate always uses `λ = k/(E + m)` with `k > 0`, which is the form every
/// downstream coefficient formula is derived with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub energy: f64,
    pub mass: f64,
    pub k: Complex64,
    pub lambda: Complex64,
    /// Populated only in the bound regime, where `k = i·k̄`.
    pub kbar: Option<f64>,
}

impl Kinematics {
    /// Scattering kinematics at `|E| > m`: `k = +sqrt(E² - m²)` real.
    pub fn scattering(energy: f64, mass: f64) -> Result<Self, KinematicsError> {
        if mass <= 0.0 || mass.is_nan() {
            return Err(KinematicsError::NonPositiveMass(mass));
        }
        let k2 = energy * energy - mass * mass;
        if k2 <= 0.0 {
            return Err(KinematicsError::NotScattering { e: energy, m: mass });
        }
        if k2 < THRESHOLD_EPS * mass * mass {
            return Err(KinematicsError::Threshold(k2));
        }
        let k = Complex64::new(k2.sqrt(), 0.0);
        Ok(Self {
            energy,
            mass,
            k,
            lambda: k / (energy + mass),
            kbar: None,
        })
    }

    /// Bound-regime kinematics at `|E| < m`: `k = i·k̄` with
    /// `k̄ = +sqrt(m² - E²) > 0`, so `λ` is purely imaginary.
    pub fn bound(energy: f64, mass: f64) -> Result<Self, KinematicsError> {
        if mass <= 0.0 || mass.is_nan() {
            return Err(KinematicsError::NonPositiveMass(mass));
        }
        if energy.abs() >= mass {
            return Err(KinematicsError::NotBound { e: energy, m: mass });
        }
        let kbar = (mass * mass - energy * energy).sqrt();
        let k = Complex64::new(0.0, kbar);
        Ok(Self {
            energy,
            mass,
            k,
            lambda: k / (energy + mass),
            kbar: Some(kbar),
        })
    }

    pub fn is_bound(&self) -> bool {
        self.kbar.is_some()
    }
}
