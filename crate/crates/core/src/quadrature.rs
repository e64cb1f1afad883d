//! Globally adaptive 21-point Gauss–Kronrod quadrature over vector-valued
//! integrands.
//!
//! Panels are bisected in a fixed, data-driven order and summed in panel
//! order, so the result is bit-for-bit independent of how many threads
//! evaluate the nodes.

use rayon::prelude::*;

use crate::scalar::{lit, Real};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Nodes per panel.
pub const NODES_PER_PANEL: usize = 21;

/// Stopping rule for [`integrate`].
#[derive(Clone, Copy, Debug)]
pub struct Tolerance<T> {
    pub rel: T,
    pub abs: T,
    pub max_panels: usize,
    /// Number of leading components that drive refinement; the rest ride along.
    pub tracked: usize,
}

impl<T: Real> Tolerance<T> {
    pub fn new(rel: T, abs: T, max_panels: usize) -> Self {
        Self {
            rel,
            abs,
            max_panels,
            tracked: usize::MAX,
        }
    }

    pub fn tracking(mut self, tracked: usize) -> Self {
        self.tracked = tracked;
        self
    }
}

/// Outcome of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Estimate<T, const N: usize> {
    pub value: [T; N],
    /// Summed error estimate over the tracked components.
    pub error: T,
    pub panels: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
struct Panel<T, const N: usize> {
    a: T,
    b: T,
    value: [T; N],
    error: T,
}

fn panel_nodes<T: Real>(a: T, b: T) -> [T; NODES_PER_PANEL] {
    let center = (a + b) * lit(0.5);
    let half = (b - a) * lit(0.5);
    let mut nodes = [center; NODES_PER_PANEL];
    for i in 0..10 {
        let dx = half * lit(XGK[i]);
        nodes[2 * i] = center - dx;
        nodes[2 * i + 1] = center + dx;
    }
    nodes
}

fn assemble<T: Real, const N: usize>(
    a: T,
    b: T,
    f: &[[T; N]],
    tracked: usize,
) -> Panel<T, N> {
    let half = (b - a) * lit(0.5);
    let center = &f[20];
    let mut value = [T::zero(); N];
    let mut error = T::zero();
    for c in 0..N {
        let mut resk = center[c] * lit(WGK[10]);
        let mut resg = T::zero();
        let mut resabs = resk.abs();
        for i in 0..10 {
            let pair = f[2 * i][c] + f[2 * i + 1][c];
            resk = resk + pair * lit(WGK[i]);
            resabs = resabs + (f[2 * i][c].abs() + f[2 * i + 1][c].abs()) * lit(WGK[i]);
            if i % 2 == 1 {
                resg = resg + pair * lit(WG[i / 2]);
            }
        }
        let mean = resk * lit(0.5);
        let mut resasc = (center[c] - mean).abs() * lit(WGK[10]);
        for i in 0..10 {
            resasc = resasc
                + ((f[2 * i][c] - mean).abs() + (f[2 * i + 1][c] - mean).abs()) * lit(WGK[i]);
        }
        value[c] = resk * half;
        if c < tracked {
            let resasc = resasc * half.abs();
            let resabs = resabs * half.abs();
            let mut err = ((resk - resg) * half).abs();
            if resasc > T::zero() && err > T::zero() {
                let scaled: T = (lit::<T>(200.0) * err / resasc).powf(lit(1.5));
                err = resasc * scaled.min(T::one());
            }
            let floor = lit::<T>(50.0) * T::epsilon() * resabs;
            error = error + err.max(floor);
        }
    }
    Panel { a, b, value, error }
}

fn evaluate<T, const N: usize, F>(
    f: &F,
    intervals: &[(T, T)],
    tracked: usize,
    parallel: bool,
) -> Vec<Panel<T, N>>
where
    T: Real,
    F: Fn(T) -> [T; N] + Sync,
{
    let nodes: Vec<T> = intervals
        .iter()
        .flat_map(|&(a, b)| panel_nodes(a, b))
        .collect();
    let values: Vec<[T; N]> = if parallel {
        nodes.par_iter().map(|&x| f(x)).collect()
    } else {
        nodes.iter().map(|&x| f(x)).collect()
    };
    intervals
        .iter()
        .zip(values.chunks(NODES_PER_PANEL))
        .map(|(&(a, b), vals)| assemble(a, b, vals, tracked))
        .collect()
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the panels
/// delimited by `breaks` (which must be increasing).
pub fn integrate<T, const N: usize, F>(f: F, breaks: &[T], tol: Tolerance<T>) -> Estimate<T, N>
where
    T: Real,
    F: Fn(T) -> [T; N] + Sync,
{
    integrate_impl(&f, breaks, tol, false)
}

/// As [`integrate`], with node evaluations spread over the rayon pool.
pub fn integrate_parallel<T, const N: usize, F>(
    f: F,
    breaks: &[T],
    tol: Tolerance<T>,
) -> Estimate<T, N>
where
    T: Real,
    F: Fn(T) -> [T; N] + Sync,
{
    integrate_impl(&f, breaks, tol, true)
}

fn integrate_impl<T, const N: usize, F>(
    f: &F,
    breaks: &[T],
    tol: Tolerance<T>,
    parallel: bool,
) -> Estimate<T, N>
where
    T: Real,
    F: Fn(T) -> [T; N] + Sync,
{
    let tracked = tol.tracked.min(N);
    let initial: Vec<(T, T)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .collect();
    if initial.is_empty() {
        return Estimate {
            value: [T::zero(); N],
            error: T::zero(),
            panels: 0,
            converged: true,
        };
    }
    let mut panels = evaluate(f, &initial, tracked, parallel);
    loop {
        let (value, error) = totals(&panels);
        let magnitude = value[..tracked]
            .iter()
            .fold(T::zero(), |acc, v| acc + v.abs());
        let target = tol.abs.max(tol.rel * magnitude);
        if error <= target || panels.len() >= tol.max_panels {
            return Estimate {
                value,
                error,
                panels: panels.len(),
                converged: error <= target,
            };
        }
        // Bisect every panel carrying at least half the worst error.
        let worst = panels.iter().fold(T::zero(), |m, p| m.max(p.error));
        let budget = (tol.max_panels - panels.len()).max(1);
        let mut split: Vec<usize> = (0..panels.len())
            .filter(|&i| panels[i].error >= worst * lit(0.5))
            .collect();
        split.truncate(budget);
        let mut halves = Vec::with_capacity(2 * split.len());
        for &i in &split {
            let p = &panels[i];
            let mid = (p.a + p.b) * lit(0.5);
            if !(mid > p.a && mid < p.b) {
                // Interval exhausted at machine precision.
                return Estimate {
                    value,
                    error,
                    panels: panels.len(),
                    converged: false,
                };
            }
            halves.push((p.a, mid));
            halves.push((mid, p.b));
        }
        let fresh = evaluate(f, &halves, tracked, parallel);
        let mut next = Vec::with_capacity(panels.len() + split.len());
        let mut fresh_iter = fresh.into_iter();
        let mut cursor = 0;
        for (i, p) in panels.into_iter().enumerate() {
            if cursor < split.len() && split[cursor] == i {
                cursor += 1;
                next.push(fresh_iter.next().expect("left half"));
                next.push(fresh_iter.next().expect("right half"));
            } else {
                next.push(p);
            }
        }
        panels = next;
    }
}

fn totals<T: Real, const N: usize>(panels: &[Panel<T, N>]) -> ([T; N], T) {
    let mut value = [T::zero(); N];
    let mut error = T::zero();
    for p in panels {
        for (v, &pv) in value.iter_mut().zip(&p.value) {
            *v = *v + pv;
        }
        error = error + p.error;
    }
    (value, error)
}

/// Integrates a scalar function over `[a, ∞)`.
///
/// `[a, scale]` is integrated directly and the tail through ξ = scale/u.
pub fn integrate_half_line<T, F>(f: F, a: T, scale: T, tol: Tolerance<T>) -> Estimate<T, 1>
where
    T: Real,
    F: Fn(T) -> T + Sync,
{
    let split = scale.max(a + scale.abs().max(T::one()));
    let head = integrate(|x| [f(x)], &[a, (a + split) * lit(0.5), split], tol);
    let tail = integrate(
        |u: T| {
            let x = split / u;
            [f(x) * split / (u * u)]
        },
        &[T::zero(), lit(0.25), T::one()],
        tol,
    );
    Estimate {
        value: [head.value[0] + tail.value[0]],
        error: head.error + tail.error,
        panels: head.panels + tail.panels,
        converged: head.converged && tail.converged,
    }
}
