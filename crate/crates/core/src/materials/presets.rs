//! Parameter sets for the attraction/repulsion, temperature and dielectric
//! mismatch families.

use std::fmt;
use std::str::FromStr;

use super::{MaterialError, ResponseModel};
use crate::reflection::{Layer, MirrorStack};
use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Two identical non-magnetic Drude metals (Ω_p = Ω).
    Fig1a,
    /// Two identical left-handed materials with overlapping ε and μ resonances.
    Fig1b,
    /// Drude metals (Ω_p = 3Ω), mirror 2 coated with a left-handed layer.
    Fig1c,
    /// Purely dielectric mirror 1 against a mainly magnetic mirror 2.
    Fig1d,
    /// As `Fig1d` with ε₂(0) = 1.
    Fig3a,
    /// As `Fig1d` with ε₂(0) = 1.01.
    Fig3b,
    /// As `Fig1d` with ε₂(0) = 1.03.
    Fig3c,
    /// As `Fig1d` with ε₂(0) = 1.1.
    Fig3d,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Fig1a,
        Preset::Fig1b,
        Preset::Fig1c,
        Preset::Fig1d,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig3c,
        Preset::Fig3d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig1c => "fig1c",
            Preset::Fig1d => "fig1d",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig3c => "fig3c",
            Preset::Fig3d => "fig3d",
        }
    }

    /// Static permittivity of mirror 2 in the mismatch family.
    pub fn mismatch_eps2_static(self) -> Option<f64> {
        self.mismatch_excess().map(|x| 1.0 + x)
    }

    /// ε₂(0) − 1 in the mismatch family.
    fn mismatch_excess(self) -> Option<f64> {
        match self {
            Preset::Fig3a => Some(0.0),
            Preset::Fig3b => Some(0.01),
            Preset::Fig3c => Some(0.03),
            Preset::Fig3d => Some(0.1),
            _ => None,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = MaterialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| MaterialError::UnknownPreset(s.to_string()))
    }
}

/// Two mirrors and the gap medium between them.
#[derive(Clone, Debug, PartialEq)]
pub struct PresetMirrors<T = f64> {
    pub mirror1: MirrorStack<T>,
    pub mirror2: MirrorStack<T>,
    pub gap: ResponseModel<T>,
}

fn model<T: Real>(eps_s: f64, eps_r: f64, mu_s: f64, mu_r: f64) -> ResponseModel<T> {
    ResponseModel::lorentz_drude(lit(eps_s), lit(eps_r), lit(mu_s), lit(mu_r))
        .expect("preset parameters are passive")
}

fn bulk<T: Real>(m: ResponseModel<T>) -> MirrorStack<T> {
    MirrorStack::homogeneous(m)
}

/// Thickness of the left-handed coating: ten resonance wavelengths, 10·2πc/Ω.
pub(crate) fn coating_thickness<T: Real>() -> T {
    lit(20.0 * std::f64::consts::PI)
}

pub fn preset<T: Real>(which: Preset) -> PresetMirrors<T> {
    let gap = ResponseModel::Vacuum;
    match which {
        Preset::Fig1a => {
            let metal = model(1.0, 0.0, 0.0, 0.0);
            PresetMirrors {
                mirror1: bulk(metal),
                mirror2: bulk(metal),
                gap,
            }
        }
        Preset::Fig1b => {
            let lh = model(0.3, 1.0, 0.3, 1.0);
            PresetMirrors {
                mirror1: bulk(lh),
                mirror2: bulk(lh),
                gap,
            }
        }
        Preset::Fig1c => {
            let metal = model(3.0, 0.0, 0.0, 0.0);
            let coating = model(0.1, 1.0, 0.3, 1.0);
            let layer = Layer::new(coating, coating_thickness()).expect("positive thickness");
            PresetMirrors {
                mirror1: bulk(metal),
                mirror2: MirrorStack::new(vec![layer], metal),
                gap,
            }
        }
        Preset::Fig1d => PresetMirrors {
            mirror1: bulk(model(3.0, 1.0, 0.0, 0.0)),
            mirror2: bulk(model(0.1, 1.0, 0.3, 1.0)),
            gap,
        },
        Preset::Fig3a | Preset::Fig3b | Preset::Fig3c | Preset::Fig3d => {
            let excess = which.mismatch_excess().expect("mismatch preset");
            // Resonance fixed at Ω; the strength sets ε₂(0) = 1 + Ω₂²/ω₂².
            let resonance = 1.0;
            let strength = (excess * resonance * resonance).sqrt();
            PresetMirrors {
                mirror1: bulk(model(3.0, 1.0, 0.0, 0.0)),
                mirror2: bulk(model(strength, resonance, 0.3, 1.0)),
                gap,
            }
        }
    }
}
