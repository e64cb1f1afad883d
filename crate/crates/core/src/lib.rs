//! Casimir pressure between planar multilayer mirrors made of dispersive
//! magnetodielectric materials.
//!
//! Everything is expressed in units built from a reference frequency Ω:
//! frequencies in Ω, lengths in c/Ω (so the resonance wavelength
//! Λ = 2πc/Ω is `2π`), temperature as τ = k_BT/(ħΩ) and pressures as
//! F·d³/(ħΩ). Positive pressure means attraction.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the
//! `*F64` / `*F32` aliases below name the common instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod lifshitz;
pub mod materials;
pub mod quadrature;
pub mod reflection;
pub mod scalar;
pub mod stackspec;
pub mod sweep;

pub use asymptotics::{
    asymptotic_report, exp_integral_e1, hamaker_c3, hamaker_c3_in_gap, ideal_limits,
    matched_media_force, nonretarded_r, polylog3, thermal_wavelength, upper_gamma,
    AsymptoticError, AsymptoticReport, IdealLimits, Regime,
};
pub use lifshitz::{
    bound_envelope, force, force_finite_t, force_zero_t, integrand, matsubara_xi, ForceResult,
    LifshitzError, PlanarCavity, QuadratureConfig,
};
pub use materials::{preset, LorentzDrude, MaterialError, Preset, PresetMirrors, ResponseModel};
pub use reflection::{
    fresnel, kappa_in_medium, stack_reflection, Kinematics, Layer, Limit, MediumAt, MirrorStack,
    Polarization, ReflectionError,
};
pub use scalar::{Real, ZETA3};
pub use stackspec::{parse, parse_bytes, serialize, validate_passivity, ParseError, Scenario};
pub use sweep::{run_sweep, write_csv, SweepError, SweepRow};

pub type ResponseModelF64 = ResponseModel<f64>;
pub type ResponseModelF32 = ResponseModel<f32>;
pub type MirrorStackF64 = MirrorStack<f64>;
pub type MirrorStackF32 = MirrorStack<f32>;
pub type PlanarCavityF64 = PlanarCavity<f64>;
pub type PlanarCavityF32 = PlanarCavity<f32>;
pub type ForceResultF64 = ForceResult<f64>;
pub type QuadratureConfigF64 = QuadratureConfig<f64>;
pub type ScenarioF64 = Scenario<f64>;

/// Runs `f` on a dedicated pool of `workers` threads.
///
/// Results never depend on the worker count: every parallel reduction in the
/// crate collects in index order before summing.
pub fn with_workers<R, F>(workers: usize, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
