//! Casimir pressure from the Lifshitz formula.
//!
//! With x = 2κd the normalized pressure at temperature τ is
//!
//! ```text
//! F·d³ = (τ/8π) Σ'_n I(ξ_n),   I(ξ) = Σ_λ ∫_{2dξ√(ε₀μ₀)}^∞ x² ρ_λ e^{−x}/(1 − ρ_λ e^{−x}) dx
//! ```
//!
//! where ρ_λ = r_λ1 r_λ2 at κ = x/2d and the n = 0 term carries weight ½.
//! At T = 0 the sum becomes (1/16π²)∫dξ I(ξ).

use rayon::prelude::*;
use thiserror::Error;

use crate::materials::{MaterialError, ResponseModel};
use crate::quadrature::{integrate, integrate_parallel, Tolerance};
use crate::reflection::{
    gap_index2, FrozenStack, Kinematics, Limit, MediumAt, MirrorStack, Polarization,
    ReflectionError,
};
use crate::scalar::{lit, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LifshitzError {
    #[error(transparent)]
    Reflection(#[from] ReflectionError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error("{name} out of range: {value}")]
    Domain { name: &'static str, value: f64 },
    #[error(
        "Matsubara sum not converged after {terms} terms \
         (last term {last_term:e}, partial sum {partial:e})"
    )]
    Truncation {
        terms: usize,
        last_term: f64,
        partial: f64,
    },
    #[error("quadrature did not reach tolerance (error estimate {error:e} on {value:e})")]
    Quadrature { value: f64, error: f64 },
    #[error("round-trip factor reached {0} (must stay below 1)")]
    Internal(f64),
}

fn domain<T: Real>(name: &'static str, value: T) -> LifshitzError {
    LifshitzError::Domain {
        name,
        value: value.to_f64().unwrap_or(f64::NAN),
    }
}

fn f64_of<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Accuracy and effort controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig<T = f64> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_matsubara: usize,
    /// Panel budget of one κ integral.
    pub kappa_panels: usize,
    /// Panel budget of the T = 0 frequency integral.
    pub xi_panels: usize,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        let single = T::epsilon() > lit(1e-10);
        Self {
            rel_tol: lit(if single { 1e-5 } else { 1e-8 }),
            abs_tol: lit(if single { 1e-10 } else { 1e-14 }),
            max_matsubara: 1_000_000,
            kappa_panels: 400,
            xi_panels: 400,
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_matsubara(mut self, max_matsubara: usize) -> Self {
        self.max_matsubara = max_matsubara;
        self
    }

    fn validate(&self) -> Result<(), LifshitzError> {
        if !(self.rel_tol > T::zero()) {
            return Err(domain("rel_tol", self.rel_tol));
        }
        if !(self.abs_tol > T::zero()) {
            return Err(domain("abs_tol", self.abs_tol));
        }
        if self.kappa_panels < 2 || self.xi_panels < 2 {
            return Err(domain("panel budget", T::one()));
        }
        Ok(())
    }
}

/// Normalized pressure F·d³/(ħΩ) and its breakdown. Positive is attractive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForceResult<T = f64> {
    pub pressure_norm: T,
    pub te_part: T,
    pub tm_part: T,
    /// Matsubara terms summed; 0 for the T = 0 integral.
    pub n_terms_used: usize,
    pub est_error: T,
    pub bound_lo: T,
    pub bound_hi: T,
}

impl<T: Real> ForceResult<T> {
    /// Whether the pressure lies inside its envelope, up to the error estimate.
    pub fn within_bounds(&self) -> bool {
        let slack = self.est_error + lit::<T>(1e-12) * self.bound_hi.abs();
        self.pressure_norm >= self.bound_lo - slack && self.pressure_norm <= self.bound_hi + slack
    }
}

/// Two mirrors facing each other across a gap medium.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarCavity<T = f64> {
    pub mirror1: MirrorStack<T>,
    pub mirror2: MirrorStack<T>,
    pub gap: ResponseModel<T>,
}

impl<T: Real> PlanarCavity<T> {
    /// Fails if no wave can cross the gap.
    pub fn new(
        mirror1: MirrorStack<T>,
        mirror2: MirrorStack<T>,
        gap: ResponseModel<T>,
    ) -> Result<Self, LifshitzError> {
        if gap.is_ideal() {
            return Err(ReflectionError::OpaqueGap.into());
        }
        let at0 = gap.at(T::zero())?;
        gap_index2(&at0, Limit::xi_squared(T::zero()))?;
        Ok(Self {
            mirror1,
            mirror2,
            gap,
        })
    }

    pub fn vacuum_gap(mirror1: MirrorStack<T>, mirror2: MirrorStack<T>) -> Self {
        Self {
            mirror1,
            mirror2,
            gap: ResponseModel::Vacuum,
        }
    }

    fn freeze(&self, xi: T) -> Result<FrozenCavity<T>, LifshitzError> {
        let gap = self.gap.at(xi)?;
        let xi2 = Limit::xi_squared(xi);
        let g = gap_index2(&gap, xi2)?;
        Ok(FrozenCavity {
            m1: self.mirror1.at(xi)?,
            m2: self.mirror2.at(xi)?,
            gap,
            xi2,
            g,
            kappa_floor: g.value().max(T::zero()).sqrt(),
        })
    }
}

/// The cavity with all materials evaluated at one frequency.
struct FrozenCavity<T> {
    m1: FrozenStack<T>,
    m2: FrozenStack<T>,
    gap: MediumAt<T>,
    xi2: Limit<T>,
    g: Limit<T>,
    kappa_floor: T,
}

impl<T: Real> FrozenCavity<T> {
    /// [ρ_TE, ρ_TM] = r₁r₂ per polarization.
    fn round_trip(&self, kappa: T) -> [T; 2] {
        let kappa = kappa.max(self.kappa_floor);
        let a = self.m1.reflect(&self.gap, self.xi2, self.g, kappa);
        let b = self.m2.reflect(&self.gap, self.xi2, self.g, kappa);
        [a[0] * b[0], a[1] * b[1]]
    }
}

/// ρe^{−x}/(1 − ρe^{−x}) without forming e^{+x}; NaN if the denominator
/// is not positive.
fn damped<T: Real>(rho: T, x: T) -> T {
    if rho == T::zero() {
        return T::zero();
    }
    let e = (-x).exp();
    // 1 − ρe^{−x} = (1 − ρ) − ρ·expm1(−x)
    let denom = (T::one() - rho) - rho * (-x).exp_m1();
    if denom > T::zero() {
        rho * e / denom
    } else {
        T::nan()
    }
}

/// ξ_n = 2πnτ.
pub fn matsubara_xi<T: Real>(n: usize, tau: T) -> Result<T, LifshitzError> {
    if !(tau > T::zero()) || !tau.is_finite() {
        return Err(domain("tau", tau));
    }
    Ok(lit::<T>(2.0) * T::PI() * lit(n as f64) * tau)
}

/// κ²/D_λ = κ² ρ e^{−2κd}/(1 − ρ e^{−2κd}) at one (ξ, κ) node.
pub fn integrand<T: Real>(
    cavity: &PlanarCavity<T>,
    pol: Polarization,
    d: T,
    kin: Kinematics<T>,
) -> Result<T, LifshitzError> {
    if !(d > T::zero()) || !d.is_finite() {
        return Err(domain("d", d));
    }
    let frozen = cavity.freeze(kin.xi())?;
    let k = kin.kappa();
    if k * k < frozen.g.value() * (T::one() - lit(1e-12)) {
        return Err(ReflectionError::InvalidKinematics {
            xi: f64_of(kin.xi()),
            kappa: f64_of(k),
        }
        .into());
    }
    let rho = frozen.round_trip(k)[pol.index()];
    let g = damped(rho, lit::<T>(2.0) * k * d);
    if g.is_nan() {
        return Err(LifshitzError::Internal(f64_of(rho)));
    }
    Ok(k * k * g)
}

const X_SPAN: f64 = 60.0;
const X_BREAKS: [f64; 9] = [0.0, 0.25, 1.0, 2.5, 5.0, 10.0, 20.0, 35.0, X_SPAN];

/// [I_TE, I_TM] at one frequency with error estimate.
fn kappa_integral<T: Real>(
    cavity: &PlanarCavity<T>,
    xi: T,
    d: T,
    tol: Tolerance<T>,
) -> Result<([T; 2], T), LifshitzError> {
    let frozen = cavity.freeze(xi)?;
    let two_d = lit::<T>(2.0) * d;
    let x0 = two_d * frozen.kappa_floor;
    let breaks: Vec<T> = X_BREAKS.iter().map(|&b| x0 + lit(b)).collect();
    let est = integrate(
        |x: T| {
            let rho = frozen.round_trip(x / two_d);
            let w = x * x;
            [w * damped(rho[0], x), w * damped(rho[1], x)]
        },
        &breaks,
        tol,
    );
    if est.value.iter().any(|v| v.is_nan()) {
        return Err(LifshitzError::Internal(1.0));
    }
    Ok((est.value, est.error))
}

fn inner_tolerance<T: Real>(cfg: &QuadratureConfig<T>) -> Tolerance<T> {
    Tolerance::new(cfg.rel_tol * lit(0.1), cfg.abs_tol * lit(1e-3), cfg.kappa_panels)
}

fn validate_inputs<T: Real>(d: T, cfg: &QuadratureConfig<T>) -> Result<(), LifshitzError> {
    if !(d > T::zero()) || !d.is_finite() {
        return Err(domain("d", d));
    }
    cfg.validate()
}

/// Envelope-based bound on Σ_{m>n} |I_m| once x_n ≥ 1.
///
/// Uses |ρe^{−x}/(1 − ρe^{−x})| ≤ e^{−x}/(1 − e^{−1}) and x_m ≥ mΔ.
fn tail_bound<T: Real>(n: usize, step: T) -> Option<T> {
    let x = step * lit(n as f64);
    if x < T::one() {
        return None;
    }
    let c: T = lit(2.0 / (1.0 - (-1.0f64).exp()));
    Some(c / step * (-x).exp() * (x * x + lit::<T>(4.0) * x + lit(6.0)))
}

const CHUNK: usize = 16;

/// Pressure at temperature `tau > 0`.
pub fn force_finite_t<T: Real>(
    cavity: &PlanarCavity<T>,
    d: T,
    tau: T,
    cfg: &QuadratureConfig<T>,
) -> Result<ForceResult<T>, LifshitzError> {
    validate_inputs(d, cfg)?;
    matsubara_xi(0, tau)?;
    let prefactor = tau / (lit::<T>(8.0) * T::PI());
    let step = lit::<T>(4.0) * T::PI() * tau * d;
    let tol = inner_tolerance(cfg);

    let mut parts = [T::zero(); 2];
    let mut quad_error = T::zero();
    let mut magnitudes: Vec<T> = Vec::new();
    let mut next = 0usize;
    loop {
        if next >= cfg.max_matsubara {
            let last = magnitudes.last().copied().unwrap_or(T::zero());
            return Err(LifshitzError::Truncation {
                terms: next,
                last_term: f64_of(last * prefactor),
                partial: f64_of((parts[0] + parts[1]) * prefactor),
            });
        }
        let end = (next + CHUNK).min(cfg.max_matsubara);
        let chunk: Vec<Result<([T; 2], T), LifshitzError>> = (next..end)
            .into_par_iter()
            .map(|n| {
                let xi = matsubara_xi(n, tau)?;
                kappa_integral(cavity, xi, d, tol)
            })
            .collect();
        for (offset, item) in chunk.into_iter().enumerate() {
            let n = next + offset;
            let (value, error) = item?;
            let weight: T = if n == 0 { lit(0.5) } else { T::one() };
            parts[0] = parts[0] + weight * value[0];
            parts[1] = parts[1] + weight * value[1];
            quad_error = quad_error + weight * error;
            magnitudes.push((value[0] + value[1]).abs());

            let total = (parts[0] + parts[1]).abs();
            let target = (cfg.rel_tol * total + cfg.abs_tol / prefactor) * lit(0.5);
            if let Some(tail) = stopping_tail(&magnitudes, n, step, target) {
                let pressure = (parts[0] + parts[1]) * prefactor;
                let (bound_lo, bound_hi) = bound_envelope(d, tau)?;
                return Ok(ForceResult {
                    pressure_norm: pressure,
                    te_part: parts[0] * prefactor,
                    tm_part: parts[1] * prefactor,
                    n_terms_used: n + 1,
                    est_error: (tail + quad_error) * prefactor,
                    bound_lo,
                    bound_hi,
                });
            }
        }
        next = end;
    }
}

/// Tail estimate if the sum may stop after term `n`.
fn stopping_tail<T: Real>(magnitudes: &[T], n: usize, step: T, target: T) -> Option<T> {
    if let Some(bound) = tail_bound(n, step) {
        if bound <= target {
            return Some(bound);
        }
    }
    // Geometric extrapolation after three monotonically shrinking terms.
    if n < 3 {
        return None;
    }
    let last = &magnitudes[n - 3..=n];
    if !last.windows(2).all(|w| w[1] <= w[0]) {
        return None;
    }
    let current = last[3];
    if current == T::zero() {
        return if last[2] == T::zero() { Some(T::zero()) } else { None };
    }
    let q = current / last[2];
    if q >= T::one() {
        return None;
    }
    // doubled, since q is still drifting towards its limit when we stop
    let tail = lit::<T>(2.0) * current * q / (T::one() - q);
    if current <= target && tail <= target {
        Some(tail)
    } else {
        None
    }
}

/// Pressure at T = 0.
pub fn force_zero_t<T: Real>(
    cavity: &PlanarCavity<T>,
    d: T,
    cfg: &QuadratureConfig<T>,
) -> Result<ForceResult<T>, LifshitzError> {
    validate_inputs(d, cfg)?;
    // Outer variable y = 2dξ; the κ integrand decays like e^{−y}.
    let two_d = lit::<T>(2.0) * d;
    let mut breaks: Vec<T> = [0.2, 2.0, 20.0]
        .iter()
        .map(|&s| two_d * lit(s * 0.5))
        .chain([0.5, 2.0, 6.0, 15.0].iter().map(|&y| lit(y)))
        .filter(|&y| y > T::zero() && y < lit(X_SPAN))
        .collect();
    breaks.push(T::zero());
    breaks.push(lit(X_SPAN));
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    breaks.dedup();

    let tol = inner_tolerance(cfg);
    let outer = integrate_parallel(
        |y: T| match kappa_integral(cavity, y / two_d, d, tol) {
            Ok((v, e)) => [v[0], v[1], e],
            Err(_) => [T::nan(); 3],
        },
        &breaks,
        Tolerance::new(cfg.rel_tol, cfg.abs_tol, cfg.xi_panels).tracking(2),
    );
    if outer.value.iter().any(|v| v.is_nan()) {
        // Re-run a failing node serially to surface its error.
        for &y in &breaks {
            kappa_integral(cavity, y / two_d + T::min_positive_value(), d, tol)?;
        }
        return Err(LifshitzError::Internal(f64::NAN));
    }
    let prefactor = T::one() / (lit::<T>(32.0) * T::PI() * T::PI() * d);
    let te = outer.value[0] * prefactor;
    let tm = outer.value[1] * prefactor;
    let est_error = (outer.error + outer.value[2]) * prefactor;
    if !outer.converged && outer.error > lit::<T>(1e3) * cfg.rel_tol * (te + tm).abs() / prefactor {
        return Err(LifshitzError::Quadrature {
            value: f64_of(te + tm),
            error: f64_of(est_error),
        });
    }
    let (bound_lo, bound_hi) = bound_envelope(d, T::zero())?;
    Ok(ForceResult {
        pressure_norm: te + tm,
        te_part: te,
        tm_part: tm,
        n_terms_used: 0,
        est_error,
        bound_lo,
        bound_hi,
    })
}

/// Pressure at `tau`, dispatching to the T = 0 integral when `tau == 0`.
pub fn force<T: Real>(
    cavity: &PlanarCavity<T>,
    d: T,
    tau: T,
    cfg: &QuadratureConfig<T>,
) -> Result<ForceResult<T>, LifshitzError> {
    if tau == T::zero() {
        force_zero_t(cavity, d, cfg)
    } else {
        force_finite_t(cavity, d, tau, cfg)
    }
}

/// ∫_a^∞ x²/(eˣ − 1) dx.
fn bose<T: Real>(a: T) -> T {
    crate::asymptotics::bose_tail(a)
}

/// ∫_a^∞ x²/(eˣ + 1) dx.
fn fermi<T: Real>(a: T) -> T {
    crate::asymptotics::fermi_tail(a)
}

/// Pressure between mirrors with ρ ≡ +1 (hi) and ρ ≡ −1 (lo) at every node.
///
/// No pair of passive mirrors leaves this interval. At τ = 0 it is
/// (−7/8, 1)·π²/(240d); at high temperature it tends to
/// (−3/4, 1)·ζ(3)τ/(4π).
pub fn bound_envelope<T: Real>(d: T, tau: T) -> Result<(T, T), LifshitzError> {
    if !(d > T::zero()) || !d.is_finite() {
        return Err(domain("d", d));
    }
    if !(tau >= T::zero()) || !tau.is_finite() {
        return Err(domain("tau", tau));
    }
    let pi = T::PI();
    let casimir = pi * pi / (lit::<T>(240.0) * d);
    if tau == T::zero() {
        return Ok((-casimir * lit(7.0 / 8.0), casimir));
    }
    let prefactor = tau / (lit::<T>(8.0) * pi);
    let step = lit::<T>(4.0) * pi * tau * d;
    if step < lit(1e-2) {
        // Euler–Maclaurin: the leading correction to the integral is
        // Δ³f‴(0)/720 with f‴(0) = 2 for both envelopes.
        let correction = prefactor * step * step * step / lit(360.0);
        return Ok((-casimir * lit(7.0 / 8.0) + correction, casimir + correction));
    }
    let two: T = lit(2.0);
    let mut hi = bose(T::zero());
    let mut lo = -fermi(T::zero());
    for n in 1.. {
        let a = step * lit(n as f64);
        let h = two * bose(a);
        let l = two * fermi(a);
        hi = hi + h;
        lo = lo - l;
        if h <= T::epsilon() * lit(1e-2) * hi {
            break;
        }
    }
    Ok((lo * prefactor, hi * prefactor))
}
