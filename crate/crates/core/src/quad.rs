//! One-dimensional quadrature rules shared by the contour and segment
//! integrals.
//!
//! * [`trapezoid_circle`]: periodic trapezoid rule on a circle, geometrically
//!   convergent for integrands analytic in an annulus.
//! * [`adaptive_gk`]: globally adaptive Gauss–Kronrod (7/15) for complex
//!   integrands on a finite interval; used where the integrand has a nearby
//!   pole (evaluation points close to a cut).
//! * [`tanh_sinh`]: double-exponential rule for integrands with algebraic
//!   endpoint singularities.

use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

/// `(1/2πi) ∮_{|z-center|=r} g(z) dz` by the n-point trapezoid rule.
pub fn trapezoid_circle<G>(center: Complex64, radius: f64, n: usize, mut g: G) -> Complex64
where
    G: FnMut(Complex64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
        let z = center + radius * e;
        acc += g(z) * (radius * e);
    }
    acc / n as f64
}

// Kronrod 15-point nodes/weights and the embedded Gauss 7-point weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<G>(g: &mut G, lo: f64, hi: f64) -> (Complex64, f64)
where
    G: FnMut(f64) -> Complex64,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = g(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = g(center - dx);
        let f2 = g(center + dx);
        kron += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let result = kron * half;
    let err = ((kron - gauss) * half).norm();
    (result, err)
}

struct Interval {
    lo: f64,
    hi: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub converged: bool,
}

/// Adaptive Gauss–Kronrod over `[lo, hi]`, optionally pre-split at interior
/// `breaks`. Bisects the interval with the largest error estimate until the
/// total estimate is below `max(abs_tol, rel_tol·|I|)`.
pub fn adaptive_gk<G>(
    mut g: G,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Integral
where
    G: FnMut(f64) -> Complex64,
{
    const MAX_INTERVALS: usize = 4000;

    let mut points = vec![lo];
    points.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
    points.push(hi);
    points.sort_by(f64::total_cmp);

    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    for w in points.windows(2) {
        let (value, err) = gk15(&mut g, w[0], w[1]);
        total += value;
        total_err += err;
        heap.push(Interval {
            lo: w[0],
            hi: w[1],
            value,
            err,
        });
    }

    while total_err > abs_tol.max(rel_tol * total.norm()) && heap.len() < MAX_INTERVALS {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&mut g, worst.lo, mid);
        let (v2, e2) = gk15(&mut g, mid, worst.hi);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Interval {
            lo: worst.lo,
            hi: mid,
            value: v1,
            err: e1,
        });
        heap.push(Interval {
            lo: mid,
            hi: worst.hi,
            value: v2,
            err: e2,
        });
    }

    // Re-sum to shed the drift of the running update.
    let value = heap.iter().map(|iv| iv.value).sum();
    let error: f64 = heap.iter().map(|iv| iv.err).sum();
    Integral {
        value,
        error,
        converged: error <= abs_tol.max(rel_tol * total.norm()),
    }
}

/// Tanh-sinh rule on `[lo, hi]`.
///
/// The integrand receives `(x, x - lo, hi - x)` so that it can evaluate
/// endpoint factors such as `√(hi - x)` without cancellation.
pub fn tanh_sinh<G>(mut g: G, lo: f64, hi: f64, levels: u32) -> Complex64
where
    G: FnMut(f64, f64, f64) -> Complex64,
{
    let half = 0.5 * (hi - lo);
    let h0 = 1.0 / 8.0;
    let t_max = 4.0;

    let mut node = |t: f64| -> Complex64 {
        let s = FRAC_PI_2 * t.sinh();
        let cosh_s = s.cosh();
        // 1 - tanh(s) and 1 + tanh(s) computed without cancellation
        let em = (-2.0 * s).exp();
        let ep = (2.0 * s).exp();
        let one_minus = 2.0 * em / (1.0 + em);
        let one_plus = 2.0 * ep / (1.0 + ep);
        let weight = FRAC_PI_2 * t.cosh() / (cosh_s * cosh_s);
        let dlo = half * one_plus;
        let dhi = half * one_minus;
        if dlo <= 0.0 || dhi <= 0.0 || !weight.is_finite() || weight == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        g(lo + dlo, dlo, dhi) * weight
    };

    let mut sum = node(0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * h0;
        if t > t_max {
            break;
        }
        sum += node(t) + node(-t);
        k += 1;
    }
    let mut h = h0;
    for _ in 0..levels {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > t_max {
                break;
            }
            sum += node(t) + node(-t);
            k += 2;
        }
    }
    sum * (h * half)
}
