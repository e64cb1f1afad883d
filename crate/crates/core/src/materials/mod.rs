//! Passive magnetodielectric response functions on the imaginary frequency
//! axis.

mod presets;

use thiserror::Error;

use crate::reflection::{Limit, MediumAt};
use crate::scalar::Real;

pub use presets::{preset, Preset, PresetMirrors};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaterialError {
    #[error("imaginary frequency must be non-negative and finite, got {0}")]
    NegativeFrequency(f64),
    #[error("{name} must be finite and non-negative, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
}

/// Lossless Lorentz–Drude oscillator pair for ε and μ.
///
/// At imaginary frequency iξ:
/// ε(iξ) = 1 + Ω_ε²/(ω_ε² + ξ²) and μ(iξ) = 1 + Θ²/(ϑ² + ξ²).
/// A vanishing resonance with non-zero strength is a Drude (free-carrier)
/// response whose value diverges as ξ → 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzDrude<T> {
    eps_strength: T,
    eps_resonance: T,
    mu_strength: T,
    mu_resonance: T,
}

impl<T: Real> LorentzDrude<T> {
    pub fn new(
        eps_strength: T,
        eps_resonance: T,
        mu_strength: T,
        mu_resonance: T,
    ) -> Result<Self, MaterialError> {
        for (name, value) in [
            ("eps_strength", eps_strength),
            ("eps_resonance", eps_resonance),
            ("mu_strength", mu_strength),
            ("mu_resonance", mu_resonance),
        ] {
            if !(value.is_finite() && value >= T::zero()) {
                return Err(MaterialError::InvalidParameter {
                    name,
                    value: value.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self {
            eps_strength,
            eps_resonance,
            mu_strength,
            mu_resonance,
        })
    }

    /// Non-magnetic material.
    pub fn dielectric(eps_strength: T, eps_resonance: T) -> Result<Self, MaterialError> {
        Self::new(eps_strength, eps_resonance, T::zero(), T::zero())
    }

    /// Drude metal with plasma frequency `plasma`.
    pub fn drude(plasma: T) -> Result<Self, MaterialError> {
        Self::dielectric(plasma, T::zero())
    }

    pub fn eps_strength(&self) -> T {
        self.eps_strength
    }
    pub fn eps_resonance(&self) -> T {
        self.eps_resonance
    }
    pub fn mu_strength(&self) -> T {
        self.mu_strength
    }
    pub fn mu_resonance(&self) -> T {
        self.mu_resonance
    }
}

fn oscillator<T: Real>(strength: T, resonance: T, xi: T) -> Limit<T> {
    if strength == T::zero() {
        return Limit::finite(T::one());
    }
    let denom = resonance * resonance + xi * xi;
    if denom > T::zero() {
        Limit::finite(T::one() + strength * strength / denom)
    } else {
        // ε ≈ Ω²/ξ² near ξ = 0.
        Limit::pole(strength * strength)
    }
}

/// One material's response model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResponseModel<T = f64> {
    Vacuum,
    /// ε = ∞ at every frequency.
    PerfectElectric,
    /// μ = ∞ at every frequency.
    PerfectMagnetic,
    LorentzDrude(LorentzDrude<T>),
}

impl<T: Real> ResponseModel<T> {
    pub fn lorentz_drude(
        eps_strength: T,
        eps_resonance: T,
        mu_strength: T,
        mu_resonance: T,
    ) -> Result<Self, MaterialError> {
        LorentzDrude::new(eps_strength, eps_resonance, mu_strength, mu_resonance)
            .map(Self::LorentzDrude)
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self, Self::PerfectElectric | Self::PerfectMagnetic)
    }

    /// ε and μ at iξ, keeping the leading behaviour of any ξ → 0 pole.
    pub fn at(&self, xi: T) -> Result<MediumAt<T>, MaterialError> {
        check_frequency(xi)?;
        Ok(match self {
            Self::Vacuum => MediumAt::vacuum(),
            Self::PerfectElectric => MediumAt::perfect_electric(),
            Self::PerfectMagnetic => MediumAt::perfect_magnetic(),
            Self::LorentzDrude(m) => MediumAt {
                eps: oscillator(m.eps_strength, m.eps_resonance, xi),
                mu: oscillator(m.mu_strength, m.mu_resonance, xi),
            },
        })
    }

    /// Static limits are singular only for Drude-type terms.
    pub fn has_pole(&self) -> bool {
        match self {
            Self::LorentzDrude(m) => {
                (m.eps_strength > T::zero() && m.eps_resonance == T::zero())
                    || (m.mu_strength > T::zero() && m.mu_resonance == T::zero())
            }
            _ => false,
        }
    }
}

fn check_frequency<T: Real>(xi: T) -> Result<(), MaterialError> {
    if xi >= T::zero() && !xi.is_nan() {
        Ok(())
    } else {
        Err(MaterialError::NegativeFrequency(xi.to_f64().unwrap_or(f64::NAN)))
    }
}

/// ε(iξ); `+∞` for ideal conductors and for a Drude term at ξ = 0.
pub fn epsilon_i<T: Real>(model: &ResponseModel<T>, xi: T) -> Result<T, MaterialError> {
    model.at(xi).map(|m| m.eps.value())
}

/// μ(iξ); `+∞` for ideal magnetic mirrors and for a Drude term at ξ = 0.
pub fn mu_i<T: Real>(model: &ResponseModel<T>, xi: T) -> Result<T, MaterialError> {
    model.at(xi).map(|m| m.mu.value())
}
