//! Trilogarithm, exponential integral, upper incomplete gamma at integer
//! order, and tails of the Bose/Fermi integrals ∫ x²/(eˣ ∓ 1).

use thiserror::Error;

use crate::scalar::{lit, Real, ZETA3};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("trilogarithm argument {0} outside [-1, 1]")]
    PolylogDomain(f64),
    #[error("incomplete gamma needs z > 0, got {0}")]
    GammaDomain(f64),
    #[error("nonretarded reflection needs x >= 1, got {0}")]
    NonretardedDomain(f64),
}

/// B_2, B_4, …, B_38.
#[allow(clippy::excessive_precision)]
const BERNOULLI_EVEN: [f64; 19] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
];

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Li₃(z) = Σ z^k/k³ for real z ∈ [−1, 1].
pub fn polylog3<T: Real>(z: T) -> Result<T, SpecialError> {
    if !(z.abs() <= T::one()) {
        return Err(SpecialError::PolylogDomain(to_f64(z)));
    }
    Ok(li3(z))
}

fn li3<T: Real>(z: T) -> T {
    let half: T = lit(0.5);
    if z == T::one() {
        lit(ZETA3)
    } else if z.abs() <= half {
        li3_series(z)
    } else if z > T::zero() {
        li3_near_one(z)
    } else {
        // Li₃(z) + Li₃(−z) = Li₃(z²)/4
        li3(z * z) * lit(0.25) - li3(-z)
    }
}

fn li3_series<T: Real>(z: T) -> T {
    let mut sum = T::zero();
    let mut power = z;
    let mut k = 1u32;
    loop {
        let kf: T = lit(k as f64);
        let term = power / (kf * kf * kf);
        sum = sum + term;
        if term.abs() <= T::epsilon() * lit(1e-3) * sum.abs() || k > 200 {
            return sum;
        }
        power = power * z;
        k += 1;
    }
}

/// Expansion in u = ln z, convergent for |u| < 2π.
fn li3_near_one<T: Real>(z: T) -> T {
    let u = z.ln();
    let zeta2 = T::PI() * T::PI() / lit(6.0);
    let mut sum = lit::<T>(ZETA3) + zeta2 * u + u * u * (lit::<T>(1.5) - (-u).ln()) * lit(0.5)
        - u * u * u / lit(12.0);
    // −Σ B_{2m}/(2m) · u^{2m+2}/(2m+2)!
    let u2 = u * u;
    let mut power = u2 * u2; // u^{2m+2} for m = 1
    let mut factorial: f64 = 24.0; // (2m+2)! for m = 1
    for (i, &b) in BERNOULLI_EVEN.iter().enumerate() {
        let m = (i + 1) as f64;
        let term = power * lit(b / (2.0 * m) / factorial);
        sum = sum - term;
        if term.abs() <= T::epsilon() * lit(1e-3) * sum.abs() {
            break;
        }
        power = power * u2;
        factorial *= (2.0 * m + 3.0) * (2.0 * m + 4.0);
    }
    sum
}

/// Exponential integral E₁(z) = Γ(0, z) for z > 0.
pub fn exp_integral_e1<T: Real>(z: T) -> Result<T, SpecialError> {
    if !(z > T::zero()) || !z.is_finite() {
        return Err(SpecialError::GammaDomain(to_f64(z)));
    }
    if z <= T::one() {
        let mut sum = T::zero();
        let mut term = T::one();
        let mut k = 1u32;
        loop {
            let kf: T = lit(k as f64);
            term = -term * z / kf;
            let contrib = term / kf;
            sum = sum - contrib;
            if contrib.abs() < T::epsilon() * lit(1e-3) * sum.abs().max(T::one()) || k > 100 {
                break;
            }
            k += 1;
        }
        Ok(-lit::<T>(EULER_GAMMA) - z.ln() + sum)
    } else {
        Ok(gamma_continued_fraction(T::zero(), z))
    }
}

/// Γ(a, z) by the Legendre continued fraction (modified Lentz), z ≳ 1.
fn gamma_continued_fraction<T: Real>(a: T, z: T) -> T {
    let tiny: T = lit(1e-300_f64.max(to_f64(T::min_positive_value())) * 1e3);
    let eps: T = T::epsilon();
    let two: T = lit(2.0);
    let mut b = z + T::one() - a;
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..10_000 {
        let fi: T = lit(i as f64);
        let an = -fi * (fi - a);
        b = b + two;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let del = d * c;
        h = h * del;
        if (del - T::one()).abs() <= eps {
            break;
        }
    }
    (-z + a * z.ln()).exp() * h
}

/// Upper incomplete gamma Γ(k, z) = ∫_z^∞ t^{k−1} e^{−t} dt at integer
/// order, z > 0.
///
/// For z < 1 the value follows from Γ(0, z) = E₁(z) and Γ(1, z) = e^{−z}
/// by the recurrence Γ(a, z) = [Γ(a+1, z) − z^a e^{−z}]/a (downward for
/// negative orders, upward for positive ones). For z ≥ 1 the continued
/// fraction is used directly.
pub fn upper_gamma<T: Real>(k: i32, z: T) -> Result<T, SpecialError> {
    if !(z > T::zero()) || !z.is_finite() {
        return Err(SpecialError::GammaDomain(to_f64(z)));
    }
    let ez = (-z).exp();
    if k >= 1 {
        // Γ(a+1) = aΓ(a) + z^a e^{−z}
        let mut g = ez;
        for a in 1..k {
            let af: T = lit(a as f64);
            g = af * g + z.powi(a) * ez;
        }
        return Ok(g);
    }
    if z >= T::one() {
        return Ok(gamma_continued_fraction(lit(k as f64), z));
    }
    let mut g = exp_integral_e1(z)?;
    for a in (k..0).rev() {
        let af: T = lit(a as f64);
        g = (g - z.powi(a) * ez) / af;
    }
    Ok(g)
}

/// R(x) = (x − 1)/(x + 1), with R(∞) = 1.
pub fn nonretarded_r<T: Real>(x: T) -> Result<T, SpecialError> {
    if x.is_infinite() && x > T::zero() {
        return Ok(T::one());
    }
    if !(x >= T::one()) {
        return Err(SpecialError::NonretardedDomain(to_f64(x)));
    }
    Ok((x - T::one()) / (x + T::one()))
}

/// ∫_a^∞ x²/(eˣ − 1) dx for a ≥ 0.
pub fn bose_tail<T: Real>(a: T) -> T {
    let two: T = lit(2.0);
    if a >= two {
        let mut sum = T::zero();
        for k in 1..200 {
            let kf: T = lit(k as f64);
            let term = (-kf * a).exp() * (a * a / kf + two * a / (kf * kf) + two / (kf * kf * kf));
            sum = sum + term;
            if term <= T::epsilon() * lit(1e-3) * sum {
                break;
            }
        }
        sum
    } else {
        // 2ζ(3) − ∫_0^a, using x/(eˣ − 1) = Σ B_j x^j / j!
        let mut head = a * a / two - a * a * a / lit(6.0);
        let a2 = a * a;
        let mut power = a2 * a2; // a^{2m+2}
        let mut factorial: f64 = 2.0; // (2m)!
        for (i, &b) in BERNOULLI_EVEN.iter().enumerate() {
            let m = (i + 1) as f64;
            let term = power * lit(b / (factorial * (2.0 * m + 2.0)));
            head = head + term;
            if term.abs() <= T::epsilon() * lit(1e-3) * head.abs() {
                break;
            }
            power = power * a2;
            factorial *= (2.0 * m + 1.0) * (2.0 * m + 2.0);
        }
        two * lit::<T>(ZETA3) - head
    }
}

/// ∫_a^∞ x²/(eˣ + 1) dx for a ≥ 0.
pub fn fermi_tail<T: Real>(a: T) -> T {
    bose_tail(a) - bose_tail(a + a) * lit(0.25)
}
