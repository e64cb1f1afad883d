//! Closed-form limits: ideal mirrors, the Hamaker constant of the
//! short-distance 1/d³ law, the repulsive series for a matched liquid gap,
//! and the distance-regime ladder.

mod special;

use std::fmt;

use thiserror::Error;

use crate::materials::{LorentzDrude, MaterialError, ResponseModel};
use crate::quadrature::{integrate_half_line, Tolerance};
use crate::reflection::{contrast, Limit, MirrorStack};
use crate::scalar::{lit, Real, ZETA3};

pub use special::{
    bose_tail, exp_integral_e1, fermi_tail, nonretarded_r, polylog3, upper_gamma, SpecialError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticError {
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error("nonretarded limit diverges: both mirrors are ideal in the {0} channel")]
    Divergent(&'static str),
    #[error("series does not converge: term {n} has magnitude {magnitude:e}")]
    SeriesDivergence { n: usize, magnitude: f64 },
    #[error("{name} out of range: {value}")]
    Domain { name: &'static str, value: f64 },
    #[error("frequency integral did not converge (error estimate {0:e})")]
    Quadrature(f64),
}

fn domain<T: Real>(name: &'static str, value: T) -> AsymptoticError {
    AsymptoticError::Domain {
        name,
        value: value.to_f64().unwrap_or(f64::NAN),
    }
}

fn tolerance<T: Real>() -> Tolerance<T> {
    let rel = if T::epsilon() < lit(1e-10) { 1e-11 } else { 1e-5 };
    Tolerance::new(lit(rel), lit(1e-300_f64.max(rel * 1e-6)), 2000)
}

fn half_line<T, F>(f: F) -> Result<T, AsymptoticError>
where
    T: Real,
    F: Fn(T) -> T + Sync,
{
    let est = integrate_half_line(f, T::zero(), T::one(), tolerance());
    if est.converged || est.error <= lit::<T>(1e-6) * est.value[0].abs() {
        Ok(est.value[0])
    } else {
        Err(AsymptoticError::Quadrature(est.error.to_f64().unwrap_or(f64::NAN)))
    }
}

/// Σ'_n f(ξ_n) over the Matsubara frequencies of `tau`, n = 0 weighted ½.
///
/// Terms are summed directly up to ξ ≈ 50 and the rest is integrated with
/// the midpoint rule, adequate for the algebraic decay of response
/// contrasts.
fn matsubara_sum<T, F>(f: F, tau: T) -> Result<T, AsymptoticError>
where
    T: Real,
    F: Fn(T) -> T + Sync,
{
    let step = lit::<T>(2.0) * T::PI() * tau;
    let cut: T = lit(50.0);
    let n_direct = (cut / step).ceil().to_usize().unwrap_or(usize::MAX).max(64);
    if n_direct > 4_000_000 {
        // Matsubara spacing far below every material scale.
        return Ok(half_line(&f)? / step);
    }
    let mut sum = f(T::zero()) * lit(0.5);
    for n in 1..=n_direct {
        sum = sum + f(step * lit(n as f64));
    }
    let start = step * (lit::<T>(n_direct as f64) + lit(0.5));
    let tail = integrate_half_line(&f, start, start.max(T::one()), tolerance());
    Ok(sum + tail.value[0] / step)
}

/// Nonretarded contrast of one response channel against the gap.
fn channel<T: Real>(a: Limit<T>, gap: Limit<T>) -> T {
    contrast(a, gap)
}

fn check_channels<T: Real>(
    mat1: &ResponseModel<T>,
    mat2: &ResponseModel<T>,
) -> Result<(), AsymptoticError> {
    use ResponseModel::*;
    match (mat1, mat2) {
        (PerfectElectric, PerfectElectric) => Err(AsymptoticError::Divergent("electric")),
        (PerfectMagnetic, PerfectMagnetic) => Err(AsymptoticError::Divergent("magnetic")),
        _ => Ok(()),
    }
}

/// Li₃ contributions of the electric and magnetic channels at iξ.
fn c3_integrand<T: Real>(
    mat1: &ResponseModel<T>,
    mat2: &ResponseModel<T>,
    gap: &ResponseModel<T>,
    xi: T,
) -> Result<T, AsymptoticError> {
    let a = mat1.at(xi)?;
    let b = mat2.at(xi)?;
    let g = gap.at(xi)?;
    let re = channel(a.eps, g.eps) * channel(b.eps, g.eps);
    let rm = channel(a.mu, g.mu) * channel(b.mu, g.mu);
    Ok(polylog3(re)? + polylog3(rm)?)
}

/// Hamaker constant c₃ (units ħΩ) of two homogeneous plates across vacuum.
///
/// F·d³ → c₃ as d → 0. At `tau == 0` the Matsubara sum becomes
/// (1/8π²)∫dξ[Li₃(R_ε1 R_ε2) + Li₃(R_μ1 R_μ2)] with R(x) = (x − 1)/(x + 1).
pub fn hamaker_c3<T: Real>(
    mat1: &ResponseModel<T>,
    mat2: &ResponseModel<T>,
    tau: T,
) -> Result<T, AsymptoticError> {
    hamaker_c3_in_gap(mat1, mat2, &ResponseModel::Vacuum, tau)
}

/// As [`hamaker_c3`] across a gap medium; R becomes (x_j − x₀)/(x_j + x₀).
pub fn hamaker_c3_in_gap<T: Real>(
    mat1: &ResponseModel<T>,
    mat2: &ResponseModel<T>,
    gap: &ResponseModel<T>,
    tau: T,
) -> Result<T, AsymptoticError> {
    if !(tau >= T::zero()) || !tau.is_finite() {
        return Err(domain("tau", tau));
    }
    check_channels(mat1, mat2)?;
    if gap.is_ideal() {
        return Err(domain("gap", T::infinity()));
    }
    let f = |xi: T| c3_integrand(mat1, mat2, gap, xi).unwrap_or(T::nan());
    let value = if tau == T::zero() {
        half_line(f)? / (lit::<T>(8.0) * T::PI() * T::PI())
    } else {
        matsubara_sum(f, tau)? * tau / (lit::<T>(4.0) * T::PI())
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(AsymptoticError::Quadrature(f64::NAN))
    }
}

/// Product of mirror-1 electric contrast and mirror-2 magnetic excess,
/// A(ξ) = (ε₁ − ε₀)/(ε₁ + ε₀)·(μ₂ − μ₁).
fn mismatch<T: Real>(
    mirror1: &ResponseModel<T>,
    mirror2: &ResponseModel<T>,
    gap: &ResponseModel<T>,
    xi: T,
) -> Result<T, AsymptoticError> {
    let m1 = mirror1.at(xi)?;
    let m2 = mirror2.at(xi)?;
    let g = gap.at(xi)?;
    let r = channel(m1.eps, g.eps);
    let dmu = (m2.mu - m1.mu).value();
    Ok(r * dmu)
}

/// Short-distance series for a gap matched to mirror 2 in ε and to mirror 1
/// in μ (T = 0, units ħΩ/d³ like every normalized pressure).
///
/// Returns F·d³ summed over `n_max` terms of
/// (1/π)(2nd)^{2n−3} ∫dξ/2π Γ(3 − 2n, 2nξd)(−A ξ²/4)^n,
/// A from the ε contrast of mirror 1 and the μ excess of mirror 2.
/// Only the TM cross-term enters; see [`c1_two_channel`].
pub fn matched_media_force<T: Real>(
    mirror1: &ResponseModel<T>,
    mirror2: &ResponseModel<T>,
    gap: &ResponseModel<T>,
    d: T,
    n_max: usize,
) -> Result<T, AsymptoticError> {
    if !(d > T::zero()) || !d.is_finite() {
        return Err(domain("d", d));
    }
    if n_max == 0 {
        return Err(domain("n_max", T::zero()));
    }
    let two = lit::<T>(2.0);
    let mut sum = T::zero();
    let mut previous = T::infinity();
    for n in 1..=n_max {
        let nf: T = lit(n as f64);
        let k = 3 - 2 * n as i32;
        let scale = two * nf * d;
        let term = half_line(|xi: T| {
            if xi <= T::zero() {
                return T::zero();
            }
            let a = mismatch(mirror1, mirror2, gap, xi).unwrap_or(T::nan());
            let base = -a * xi * xi / lit(4.0);
            let z = scale * xi;
            let gamma = upper_gamma(k, z).unwrap_or(T::nan());
            // (2nd)^{2n−3}·Γ(3−2n, z) = ξ^{2n−3}·z^{3−2n}Γ(3−2n, z)
            scale.powi(2 * n as i32 - 3) * gamma * base.powi(n as i32)
        })? / (two * T::PI() * T::PI());
        if !term.is_finite() || (n > 2 && term.abs() > previous) {
            return Err(AsymptoticError::SeriesDivergence {
                n,
                magnitude: term.abs().to_f64().unwrap_or(f64::INFINITY),
            });
        }
        sum = sum + term;
        previous = term.abs();
        if term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    Ok(sum * d * d * d)
}

/// c₁ of the leading repulsive law F ≈ −c₁/d (units ħΩ³/c²):
/// c₁ = (1/16π²)∫A ξ² dξ.
pub fn c1<T: Real>(
    mirror1: &ResponseModel<T>,
    mirror2: &ResponseModel<T>,
    gap: &ResponseModel<T>,
) -> Result<T, AsymptoticError> {
    let v = half_line(|xi: T| mismatch(mirror1, mirror2, gap, xi).unwrap_or(T::nan()) * xi * xi)?;
    Ok(v / (lit::<T>(16.0) * T::PI() * T::PI()))
}

/// c₁ from the small-κ⁻¹ expansion of both polarizations.
///
/// With ε₀ = ε₂ and μ₀ = μ₁ = 1 the round-trip products are, to order
/// ξ²/κ², ρ_TM ≈ −R_ε1·ε₀(μ₂ − 1)ξ²/(4κ²) and
/// ρ_TE ≈ −R_μ2·(ε₁ − ε₀)ξ²/(4κ²), giving
/// c₁ = (1/16π²)∫ξ²[R_ε1 ε₀(μ₂ − 1) + R_μ2(ε₁ − ε₀)] dξ.
pub fn c1_two_channel<T: Real>(
    mirror1: &ResponseModel<T>,
    mirror2: &ResponseModel<T>,
    gap: &ResponseModel<T>,
) -> Result<T, AsymptoticError> {
    let f = |xi: T| -> Result<T, AsymptoticError> {
        let m1 = mirror1.at(xi)?;
        let m2 = mirror2.at(xi)?;
        let g = gap.at(xi)?;
        let tm = channel(m1.eps, g.eps) * (g.eps * (m2.mu - m1.mu)).value();
        let te = channel(m2.mu, g.mu) * (m1.eps - g.eps).value();
        Ok(xi * xi * (tm + te))
    };
    let v = half_line(|xi: T| f(xi).unwrap_or(T::nan()))?;
    Ok(v / (lit::<T>(16.0) * T::PI() * T::PI()))
}

/// Whether the gap copies mirror 2 in ε and mirror 1 (non-magnetic) in μ.
pub fn is_matched_gap<T: Real>(
    mirror1: &ResponseModel<T>,
    mirror2: &ResponseModel<T>,
    gap: &ResponseModel<T>,
) -> bool {
    let vacuum = LorentzDrude::new(T::zero(), T::zero(), T::zero(), T::zero()).expect("zero is passive");
    let g = match gap {
        ResponseModel::Vacuum => vacuum,
        ResponseModel::LorentzDrude(g) => *g,
        _ => return false,
    };
    match (mirror1, mirror2) {
        (ResponseModel::LorentzDrude(a), ResponseModel::LorentzDrude(b)) => {
            a.mu_strength() == T::zero()
                && g.mu_strength() == T::zero()
                && g.eps_strength() == b.eps_strength()
                && (g.eps_resonance() == b.eps_resonance() || b.eps_strength() == T::zero())
        }
        _ => false,
    }
}

/// Closed-form forces between ideal mirrors (units of the dimensionless
/// force, not multiplied by d³).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdealLimits<T> {
    /// π²/(240 d⁴).
    pub f_casimir: T,
    /// ζ(3)τ/(8π d³), the customary high-temperature expression.
    pub f_thermal: T,
    /// ζ(3)τ/(4π d³), the n = 0 term of the Matsubara sum for ideal mirrors.
    pub f_thermal_lifshitz: T,
}

impl<T: Real> IdealLimits<T> {
    /// The two high-temperature expressions differ by a factor of two.
    pub fn thermal_forms_disagree(&self) -> bool {
        self.f_thermal != self.f_thermal_lifshitz
    }
}

pub fn ideal_limits<T: Real>(d: T, tau: T) -> Result<IdealLimits<T>, AsymptoticError> {
    if !(d > T::zero()) || !d.is_finite() {
        return Err(domain("d", d));
    }
    if !(tau >= T::zero()) {
        return Err(domain("tau", tau));
    }
    let pi = T::PI();
    let d3 = d * d * d;
    let zeta3: T = lit(ZETA3);
    Ok(IdealLimits {
        f_casimir: pi * pi / (lit::<T>(240.0) * d3 * d),
        f_thermal: zeta3 * tau / (lit::<T>(8.0) * pi * d3),
        f_thermal_lifshitz: zeta3 * tau / (lit::<T>(4.0) * pi * d3),
    })
}

/// Λ_T = 1/τ in units of c/Ω.
pub fn thermal_wavelength<T: Real>(tau: T) -> Result<T, AsymptoticError> {
    if tau > T::zero() && tau.is_finite() {
        Ok(T::one() / tau)
    } else {
        Err(domain("tau", tau))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// d < Λ/2π: the Hamaker 1/d³ law.
    Short,
    /// Λ/2π ≤ d < Λ_T/2π: retarded 1/d⁴ behaviour.
    Intermediate,
    /// d ≥ Λ_T/2π: the static Matsubara term dominates.
    Thermal,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Short => "short",
            Regime::Intermediate => "intermediate",
            Regime::Thermal => "thermal",
        })
    }
}

pub fn regime<T: Real>(d: T, tau: T) -> Regime {
    let two_pi = lit::<T>(2.0) * T::PI();
    if tau > T::zero() && d * two_pi * tau >= T::one() {
        Regime::Thermal
    } else if d < T::one() {
        Regime::Short
    } else {
        Regime::Intermediate
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticReport<T> {
    /// c₃/(ħΩ); absent for layered mirrors or divergent ideal pairs.
    pub c3_norm: Option<T>,
    /// Why `c3_norm` is absent.
    pub c3_note: Option<String>,
    /// c₁/(ħΩ³/c²) of the matched-gap repulsion; only for matched gaps.
    pub c1_norm: Option<T>,
    pub f_casimir: T,
    pub f_thermal: T,
    pub f_thermal_lifshitz: T,
    pub regime: Regime,
    /// 1/τ, infinite at τ = 0.
    pub lambda_t: T,
}

pub fn asymptotic_report<T: Real>(
    mirror1: &MirrorStack<T>,
    mirror2: &MirrorStack<T>,
    gap: &ResponseModel<T>,
    d: T,
    tau: T,
) -> Result<AsymptoticReport<T>, AsymptoticError> {
    let limits = ideal_limits(d, tau)?;
    let (c3_norm, c3_note) = if !(mirror1.is_homogeneous() && mirror2.is_homogeneous()) {
        (None, Some("layered mirror: Hamaker constant not defined".to_string()))
    } else {
        match hamaker_c3_in_gap(&mirror1.substrate, &mirror2.substrate, gap, tau) {
            Ok(c3) => (Some(c3), None),
            Err(AsymptoticError::Divergent(ch)) => (
                None,
                Some(format!("ideal mirrors in the {ch} channel: nonretarded limit diverges")),
            ),
            Err(e) => return Err(e),
        }
    };
    let c1_norm = if mirror1.is_homogeneous()
        && mirror2.is_homogeneous()
        && is_matched_gap(&mirror1.substrate, &mirror2.substrate, gap)
    {
        Some(c1(&mirror1.substrate, &mirror2.substrate, gap)?)
    } else {
        None
    };
    let lambda_t = if tau > T::zero() {
        thermal_wavelength(tau)?
    } else {
        T::infinity()
    };
    Ok(AsymptoticReport {
        c3_norm,
        c3_note,
        c1_norm,
        f_casimir: limits.f_casimir,
        f_thermal: limits.f_thermal,
        f_thermal_lifshitz: limits.f_thermal_lifshitz,
        regime: regime(d, tau),
        lambda_t,
    })
}
