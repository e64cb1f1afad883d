#![allow(dead_code)]

use casimir::{
    stack_reflection, Kinematics, Layer, MirrorStack, PlanarCavity, Polarization, ResponseModel,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre with 20 nodes per panel over consecutive breakpoints,
/// each interval split into `panels` equal pieces.
pub fn integrate(f: impl Fn(f64) -> f64, breaks: &[f64], panels: usize) -> f64 {
    let rule = gauss_legendre(20);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let h = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let a = w[0] + p as f64 * h;
            let mid = a + 0.5 * h;
            for &(x, wt) in &rule {
                total += 0.5 * h * wt * f(mid + 0.5 * h * x);
            }
        }
    }
    total
}

/// Σ z^k/k³ summed until the terms are negligible, with an integral
/// correction for the slow z = ±1 tails.
pub fn li3_series(z: f64) -> f64 {
    let n = 2_000_000usize;
    let mut sum = 0.0;
    let mut zk = 1.0;
    for k in 1..=n {
        zk *= z;
        let term = zk / (k as f64).powi(3);
        sum += term;
        if term.abs() < 1e-20 {
            return sum;
        }
    }
    // Euler–Maclaurin remainder of Σ_{k>n} 1/k³ (z = 1) or the alternating tail
    let nf = n as f64;
    if z > 0.0 {
        sum + 1.0 / (2.0 * nf * nf) - 1.0 / (2.0 * nf.powi(3))
    } else {
        sum + zk * z / (2.0 * (nf + 1.0).powi(3))
    }
}

/// Γ(k, z) = ∫_z^∞ t^{k−1}e^{−t} dt by quadrature in t = z + u.
pub fn upper_gamma_quadrature(k: i32, z: f64) -> f64 {
    let f = |u: f64| (z + u).powi(k - 1) * (-u).exp();
    let mut breaks = vec![0.0];
    let mut b = z.min(1.0) * 1e-3;
    while b < 80.0 {
        breaks.push(b);
        b *= 4.0;
    }
    breaks.push(80.0);
    (-z).exp() * integrate(f, &breaks, 2)
}

pub fn log_uniform(rng: &mut TestRng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Lorentz–Drude material with every parameter in [0.05, 5].
pub fn random_material(rng: &mut TestRng) -> ResponseModel<f64> {
    let mut p = || rng.gen_range(0.05..5.0);
    ResponseModel::lorentz_drude(p(), p(), p(), p()).unwrap()
}

/// 0–4 layers of random thickness over a random substrate.
pub fn random_stack(rng: &mut TestRng) -> MirrorStack<f64> {
    let n = rng.gen_range(0..=4);
    let layers = (0..n)
        .map(|_| {
            let m = random_material(rng);
            Layer::new(m, log_uniform(rng, 0.01, 10.0)).unwrap()
        })
        .collect();
    MirrorStack::new(layers, random_material(rng))
}

pub fn random_cavity(rng: &mut TestRng) -> PlanarCavity<f64> {
    PlanarCavity::vacuum_gap(random_stack(rng), random_stack(rng))
}

/// Independent finite-temperature pressure for a vacuum gap: plain Matsubara
/// sum, fixed dense Gauss–Legendre grid in x = 2κd, reflection coefficients
/// taken straight from `stack_reflection` with `te_sign` applied to both
/// mirrors' TE coefficients.
pub fn pressure_oracle(cavity: &PlanarCavity<f64>, d: f64, tau: f64, te_sign: f64) -> f64 {
    let rho = |xi: f64, kappa: f64, pol: Polarization| {
        let kin = Kinematics::new(xi, kappa).unwrap();
        let sign = if pol == Polarization::Te { te_sign } else { 1.0 };
        let r1 = sign * stack_reflection(&cavity.mirror1, &cavity.gap, pol, kin).unwrap();
        let r2 = sign * stack_reflection(&cavity.mirror2, &cavity.gap, pol, kin).unwrap();
        r1 * r2
    };
    let mut total = 0.0;
    for n in 0.. {
        let xi = 2.0 * std::f64::consts::PI * n as f64 * tau;
        let x0 = 2.0 * d * xi;
        let weight = if n == 0 { 0.5 } else { 1.0 };
        let mut term = 0.0;
        for pol in Polarization::BOTH {
            let f = |x: f64| {
                let kappa = (x / (2.0 * d)).max(1e-300);
                let r = rho(xi, kappa, pol);
                let e = (-x).exp();
                x * x * r * e / (1.0 - r * e)
            };
            let breaks: Vec<f64> = [0.0, 0.5, 2.0, 6.0, 15.0, 30.0, 60.0]
                .iter()
                .map(|b| x0 + b)
                .collect();
            term += integrate(f, &breaks, 8);
        }
        total += weight * term;
        if n > 0 && x0 > 45.0 {
            break;
        }
    }
    tau / (8.0 * std::f64::consts::PI) * total
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn preset_cavity<T: casimir::Real>(which: casimir::Preset) -> PlanarCavity<T> {
    let p = casimir::preset::<T>(which);
    PlanarCavity::new(p.mirror1, p.mirror2, p.gap).unwrap()
}

/// 64 log-spaced distances from 0.01 to 1000.
pub fn figure_grid() -> Vec<f64> {
    (0..64)
        .map(|i| 0.01 * 1e5f64.powf(i as f64 / 63.0))
        .collect()
}

/// A few random byte-level edits: deletions, insertions, overwrites and
/// duplicated or dropped spans.
pub fn mutate(r: &mut TestRng, bytes: &mut Vec<u8>) {
    const ALPHABET: &[u8] = b" =[]#\n\t0123456789.-+eE abcdxyz_\xff\xc3";
    for _ in 0..r.gen_range(1..6) {
        let len = bytes.len();
        match r.gen_range(0..5) {
            0 if len > 0 => {
                bytes.remove(r.gen_range(0..len));
            }
            1 => {
                let at = r.gen_range(0..=len);
                bytes.insert(at, ALPHABET[r.gen_range(0..ALPHABET.len())]);
            }
            2 if len > 0 => {
                let at = r.gen_range(0..len);
                bytes[at] = r.gen();
            }
            3 if len > 1 => {
                let a = r.gen_range(0..len);
                let b = r.gen_range(a..len);
                let chunk: Vec<u8> = bytes[a..b].to_vec();
                let at = r.gen_range(0..=len);
                bytes.splice(at..at, chunk);
            }
            _ if len > 1 => {
                let a = r.gen_range(0..len);
                let b = r.gen_range(a..len);
                bytes.drain(a..b);
            }
            _ => {}
        }
    }
}

/// Independent zero-temperature pressure: (1/32π²d)∫dy Σ_λ∫_y^∞ x²ρe^{−x}/(1 − ρe^{−x}) dx
/// with y = 2ξd, on a fixed dense Gauss–Legendre grid.
pub fn pressure_oracle_zero_t(cavity: &PlanarCavity<f64>, d: f64) -> f64 {
    let inner = |y: f64| {
        let xi = y / (2.0 * d);
        let mut sum = 0.0;
        for pol in Polarization::BOTH {
            let f = |x: f64| {
                let kappa = (x / (2.0 * d)).max(xi).max(1e-300);
                let kin = Kinematics::new(xi, kappa).unwrap();
                let r = stack_reflection(&cavity.mirror1, &cavity.gap, pol, kin).unwrap()
                    * stack_reflection(&cavity.mirror2, &cavity.gap, pol, kin).unwrap();
                let e = (-x).exp();
                x * x * r * e / (1.0 - r * e)
            };
            let breaks: Vec<f64> = [0.0, 0.5, 2.0, 6.0, 15.0, 30.0, 60.0].iter().map(|b| y + b).collect();
            sum += integrate(f, &breaks, 4);
        }
        sum
    };
    let mut breaks: Vec<f64> = [0.0, 0.5, 2.0, 6.0, 15.0, 30.0, 60.0]
        .into_iter()
        .chain([0.01, 0.1, 1.0, 10.0].map(|s| 2.0 * d * s).into_iter().filter(|&y| y < 60.0))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    integrate(inner, &breaks, 3) / (32.0 * std::f64::consts::PI.powi(2) * d)
}
