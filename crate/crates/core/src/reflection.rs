//! Fresnel coefficients at imaginary frequency and the layer recursion for
//! multilayer mirrors.
//!
//! With k_z = iκ every quantity here is real. For passive media all
//! coefficients lie in [−1, 1], and the layer map
//! r ↦ (r_ab + r e)/(1 + r_ab r e) keeps that interval invariant, so the
//! bound survives any number of layers.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use thiserror::Error;

use crate::materials::{MaterialError, ResponseModel};
use crate::scalar::{lit, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReflectionError {
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error("incident medium of an interface cannot be an ideal mirror")]
    IdealIncidentMedium,
    #[error("gap medium must be penetrable (no ideal mirror, no double static pole)")]
    OpaqueGap,
    #[error("layer thickness must be positive and finite, got {0}")]
    InvalidThickness(f64),
    #[error("invalid kinematics: xi = {xi}, kappa = {kappa}")]
    InvalidKinematics { xi: f64, kappa: f64 },
}

/// Field polarization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarization {
    Te,
    Tm,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Te, Polarization::Tm];

    pub(crate) fn index(self) -> usize {
        match self {
            Polarization::Te => 0,
            Polarization::Tm => 1,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::Te => "TE",
            Polarization::Tm => "TM",
        })
    }
}

const IDEAL_ORDER: i32 = 1 << 20;

/// Leading behaviour `coeff · ξ^(−order)` of a response quantity.
///
/// Off the static point every quantity is an ordinary number with
/// `order == 0`. At ξ = 0 a Drude term keeps its residue as an order-2 pole
/// and ξ² itself is order −2, so products such as ξ²ε stay finite. Ideal
/// mirrors carry an order no physical combination can reach.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limit<T> {
    pub coeff: T,
    pub order: i32,
}

impl<T: Real> Limit<T> {
    pub fn finite(value: T) -> Self {
        Self {
            coeff: value,
            order: 0,
        }
    }

    /// `residue / ξ²` as ξ → 0.
    pub fn pole(residue: T) -> Self {
        Self {
            coeff: residue,
            order: 2,
        }
    }

    pub fn ideal() -> Self {
        Self {
            coeff: T::one(),
            order: IDEAL_ORDER,
        }
    }

    /// ξ² at the given frequency.
    pub fn xi_squared(xi: T) -> Self {
        if xi == T::zero() {
            Self {
                coeff: T::one(),
                order: -2,
            }
        } else {
            Self::finite(xi * xi)
        }
    }

    fn zero() -> Self {
        Self::finite(T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == T::zero()
    }

    pub fn is_ideal(&self) -> bool {
        self.order >= IDEAL_ORDER / 2
    }

    /// The plain value: `+∞` for a divergence, `0` for a vanishing power.
    pub fn value(&self) -> T {
        if self.is_zero() {
            T::zero()
        } else if self.order > 0 {
            T::infinity() * self.coeff.signum()
        } else if self.order < 0 {
            T::zero()
        } else {
            self.coeff
        }
    }

    /// Square root, flushing round-off negatives to zero.
    pub fn sqrt(self) -> Self {
        if self.coeff <= T::zero() {
            return Self::zero();
        }
        Self {
            coeff: self.coeff.sqrt(),
            order: self.order / 2,
        }
    }
}

impl<T: Real> Mul for Limit<T> {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self {
            coeff: self.coeff * other.coeff,
            order: self.order + other.order,
        }
    }
}

/// Keeps the leading order only.
impl<T: Real> Add for Limit<T> {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        match self.order.cmp(&other.order) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => Self {
                coeff: self.coeff + other.coeff,
                order: self.order,
            },
        }
    }
}

impl<T: Real> Sub for Limit<T> {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        self + Self {
            coeff: -other.coeff,
            order: other.order,
        }
    }
}

/// (a − b)/(a + b) for two positive leading-order quantities.
pub(crate) fn contrast<T: Real>(a: Limit<T>, b: Limit<T>) -> T {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return T::zero(),
        (true, false) => return -T::one(),
        (false, true) => return T::one(),
        _ => {}
    }
    match a.order.cmp(&b.order) {
        std::cmp::Ordering::Greater => T::one(),
        std::cmp::Ordering::Less => -T::one(),
        std::cmp::Ordering::Equal => clamp_unit((a.coeff - b.coeff) / (a.coeff + b.coeff)),
    }
}

fn clamp_unit<T: Real>(r: T) -> T {
    r.max(-T::one()).min(T::one())
}

/// ε and μ of one medium at a fixed imaginary frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MediumAt<T> {
    pub eps: Limit<T>,
    pub mu: Limit<T>,
}

impl<T: Real> MediumAt<T> {
    pub fn vacuum() -> Self {
        Self::finite(T::one(), T::one())
    }

    pub fn perfect_electric() -> Self {
        Self {
            eps: Limit::ideal(),
            mu: Limit::finite(T::one()),
        }
    }

    pub fn perfect_magnetic() -> Self {
        Self {
            eps: Limit::finite(T::one()),
            mu: Limit::ideal(),
        }
    }

    /// From plain values; `+∞` stands for an ideal response.
    pub fn finite(eps: T, mu: T) -> Self {
        let wrap = |v: T| {
            if v.is_infinite() {
                Limit::ideal()
            } else {
                Limit::finite(v)
            }
        };
        Self {
            eps: wrap(eps),
            mu: wrap(mu),
        }
    }

    pub fn is_ideal(&self) -> bool {
        self.eps.is_ideal() || self.mu.is_ideal()
    }

    /// ξ²εμ.
    fn index2(&self, xi2: Limit<T>) -> Limit<T> {
        xi2 * self.eps * self.mu
    }
}

/// Imaginary frequency ξ and gap decay constant κ at one quadrature node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kinematics<T> {
    xi: T,
    kappa: T,
}

impl<T: Real> Kinematics<T> {
    pub fn new(xi: T, kappa: T) -> Result<Self, ReflectionError> {
        if xi >= T::zero() && xi.is_finite() && kappa > T::zero() && kappa.is_finite() {
            Ok(Self { xi, kappa })
        } else {
            Err(ReflectionError::InvalidKinematics {
                xi: xi.to_f64().unwrap_or(f64::NAN),
                kappa: kappa.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    pub fn xi(&self) -> T {
        self.xi
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }
}

/// Decay constant inside a medium for a given gap decay constant.
fn decay<T: Real>(medium: &MediumAt<T>, kappa2: Limit<T>, xi2: Limit<T>, gap_index2: Limit<T>) -> Limit<T> {
    (kappa2 + medium.index2(xi2) - gap_index2).sqrt()
}

/// Decay constant √(κ² + (εμ − ε₀μ₀)ξ²) of a medium with plain (possibly
/// infinite) response values.
pub fn kappa_in_medium<T: Real>(eps: T, mu: T, kin: Kinematics<T>, gap_eps: T, gap_mu: T) -> T {
    let xi2 = Limit::xi_squared(kin.xi);
    let medium = MediumAt::finite(eps, mu);
    let gap = MediumAt::finite(gap_eps, gap_mu);
    decay(
        &medium,
        Limit::finite(kin.kappa * kin.kappa),
        xi2,
        gap.index2(xi2),
    )
    .value()
}

fn interface<T: Real>(
    a: &MediumAt<T>,
    kappa_a: Limit<T>,
    b: &MediumAt<T>,
    kappa_b: Limit<T>,
) -> [T; 2] {
    let te = contrast(b.mu * kappa_a, a.mu * kappa_b);
    let tm = contrast(b.eps * kappa_a, a.eps * kappa_b);
    [te, tm]
}

/// Reflection coefficient for a wave in medium `a` hitting medium `b`.
///
/// TM: (ε_b κ_a − ε_a κ_b)/(ε_b κ_a + ε_a κ_b); TE swaps ε and μ. With a
/// vacuum incident medium an ideal conductor gives r_TM = +1, r_TE = −1.
pub fn fresnel<T: Real>(
    pol: Polarization,
    medium_a: &MediumAt<T>,
    medium_b: &MediumAt<T>,
    gap: &MediumAt<T>,
    kin: Kinematics<T>,
) -> Result<T, ReflectionError> {
    if medium_a.is_ideal() {
        return Err(ReflectionError::IdealIncidentMedium);
    }
    if gap.is_ideal() {
        return Err(ReflectionError::OpaqueGap);
    }
    let xi2 = Limit::xi_squared(kin.xi);
    let gap_index2 = gap.index2(xi2);
    let kappa2 = Limit::finite(kin.kappa * kin.kappa);
    let ka = decay(medium_a, kappa2, xi2, gap_index2);
    let kb = decay(medium_b, kappa2, xi2, gap_index2);
    Ok(interface(medium_a, ka, medium_b, kb)[pol.index()])
}

/// One step of the layer recursion: r_abc from r_ab, r_bc and e^{−2κ_b w}.
pub fn compose<T: Real>(r_ab: T, r_bc: T, attenuation: T) -> T {
    let inner = r_bc * attenuation;
    clamp_unit((r_ab + inner) / (T::one() + r_ab * inner))
}

/// A finite slab inside a mirror.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Layer<T = f64> {
    material: ResponseModel<T>,
    thickness: T,
}

impl<T: Real> Layer<T> {
    pub fn new(material: ResponseModel<T>, thickness: T) -> Result<Self, ReflectionError> {
        if thickness > T::zero() && thickness.is_finite() {
            Ok(Self {
                material,
                thickness,
            })
        } else {
            Err(ReflectionError::InvalidThickness(
                thickness.to_f64().unwrap_or(f64::NAN),
            ))
        }
    }

    pub fn material(&self) -> &ResponseModel<T> {
        &self.material
    }

    pub fn thickness(&self) -> T {
        self.thickness
    }
}

/// Layers listed from the gap side inward, on top of a semi-infinite substrate.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorStack<T = f64> {
    pub layers: Vec<Layer<T>>,
    pub substrate: ResponseModel<T>,
}

impl<T: Real> MirrorStack<T> {
    pub fn new(layers: Vec<Layer<T>>, substrate: ResponseModel<T>) -> Self {
        Self { layers, substrate }
    }

    pub fn homogeneous(substrate: ResponseModel<T>) -> Self {
        Self::new(Vec::new(), substrate)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.layers.is_empty()
    }

    /// Evaluates every material at iξ.
    pub fn at(&self, xi: T) -> Result<FrozenStack<T>, MaterialError> {
        let layers = self
            .layers
            .iter()
            .map(|l| Ok((l.material.at(xi)?, l.thickness)))
            .collect::<Result<Vec<_>, MaterialError>>()?;
        Ok(FrozenStack {
            layers,
            substrate: self.substrate.at(xi)?,
        })
    }
}

/// A mirror with its materials evaluated at one imaginary frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct FrozenStack<T> {
    layers: Vec<(MediumAt<T>, T)>,
    substrate: MediumAt<T>,
}

impl<T: Real> FrozenStack<T> {
    /// [r_TE, r_TM] seen from the gap.
    ///
    /// The gap must not be ideal; an ideal layer simply hides whatever lies
    /// beneath it.
    pub fn reflect(&self, gap: &MediumAt<T>, xi2: Limit<T>, gap_index2: Limit<T>, kappa: T) -> [T; 2] {
        let kappa2 = Limit::finite(kappa * kappa);
        let k_gap = Limit::finite(kappa);
        let n = self.layers.len();
        let medium = |j: usize| -> &MediumAt<T> {
            match j {
                0 => gap,
                j if j <= n => &self.layers[j - 1].0,
                _ => &self.substrate,
            }
        };
        let decay_of = |j: usize| {
            if j == 0 {
                k_gap
            } else {
                decay(medium(j), kappa2, xi2, gap_index2)
            }
        };
        let mut k_inner = decay_of(n + 1);
        let mut k_outer = decay_of(n);
        let mut r = interface(medium(n), k_outer, medium(n + 1), k_inner);
        for j in (1..=n).rev() {
            let thickness = self.layers[j - 1].1;
            let attenuation = if k_outer.order > 0 {
                T::zero()
            } else {
                (-lit::<T>(2.0) * k_outer.value() * thickness).exp()
            };
            k_inner = k_outer;
            k_outer = decay_of(j - 1);
            let outer = interface(medium(j - 1), k_outer, medium(j), k_inner);
            r = [
                compose(outer[0], r[0], attenuation),
                compose(outer[1], r[1], attenuation),
            ];
        }
        r
    }
}

/// ξ²ε₀μ₀ of a gap medium; fails for media no wave can propagate through.
pub(crate) fn gap_index2<T: Real>(gap: &MediumAt<T>, xi2: Limit<T>) -> Result<Limit<T>, ReflectionError> {
    if gap.is_ideal() {
        return Err(ReflectionError::OpaqueGap);
    }
    let g = gap.index2(xi2);
    if g.order > 0 {
        return Err(ReflectionError::OpaqueGap);
    }
    Ok(g)
}

/// Reflection coefficient of a whole mirror stack for a wave arriving
/// through `gap`.
pub fn stack_reflection<T: Real>(
    stack: &MirrorStack<T>,
    gap: &ResponseModel<T>,
    pol: Polarization,
    kin: Kinematics<T>,
) -> Result<T, ReflectionError> {
    let gap_at = gap.at(kin.xi)?;
    let xi2 = Limit::xi_squared(kin.xi);
    let g = gap_index2(&gap_at, xi2)?;
    let floor = g.value();
    // κ² ≥ ξ²ε₀μ₀ up to round-off
    if kin.kappa * kin.kappa < floor * (T::one() - lit(1e-12)) {
        return Err(ReflectionError::InvalidKinematics {
            xi: kin.xi.to_f64().unwrap_or(f64::NAN),
            kappa: kin.kappa.to_f64().unwrap_or(f64::NAN),
        });
    }
    let frozen = stack.at(kin.xi)?;
    Ok(frozen.reflect(&gap_at, xi2, g, kin.kappa)[pol.index()])
}
