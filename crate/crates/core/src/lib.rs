//! Scattering and bound states of the one-dimensional Dirac equation with a
//! non-local separable PT-symmetric potential.
//!
//! The potential kernel is `K(x, y) = g(x) e^{iax} h(y) e^{iby}` with even
//! real envelopes `g`, `h` and coupling strengths `c_S` (scalar) and `c_V`
//! (vector). Because the kernel is rank one in each Dirac channel, the
//! Lippmann-Schwinger equation closes after a single 2×2 linear solve and
//! every observable reduces to the four Fourier-type integrals collected in
//! [`kernel::KernelIntegrals`].
//!
//! Modules, bottom-up:
//! - [`kinematics`]: energy/momentum bookkeeping on both branches,
//! - [`quad`]: adaptive quadrature for the generic-kernel paths,
//! - [`mat2`]: complex 2×2 matrix arithmetic,
//! - [`kernel`]: form factors, transforms and the branch integrals,
//! - [`scattering`]: transmission/reflection coefficients and PT
//!   diagnostics, with an independent dual formulation,
//! - [`nonrel`]: the non-relativistic spin and pseudo-spin closed forms,
//! - [`bound`]: bound-state search, strength solver and wavefunctions.
//!
//! Units: `ħ = c = 1`; the fermion mass `m` sets the scale and every energy
//! or momentum argument is understood in units of `m` when `m = 1`.

pub mod bound;
pub mod kernel;
pub mod kinematics;
pub mod mat2;
pub mod nonrel;
pub mod quad;
pub mod scattering;

pub use bound::{
    detm_bound, find_bound_states, solve_vector_strength, BoundState, BoundWavefunction,
    SearchConfig, StrengthRoots,
};
pub use kernel::{kernel_integrals, Branch, FormFactor, KernelIntegrals, PotentialSpec};
pub use kinematics::Kinematics;
pub use nonrel::{nr_scatter, NRCase, NRCaseKind};
pub use scattering::{scatter, PTDiagnostics, ScatteringResult};
