//! The conformal map `f: D → D_p` whose rotation into R⁴ is a quadrature
//! domain.
//!
//! The map is defined through the odd-in-inversion function
//!
//! ```text
//! h(z) = C (z² - 1)/z · √((1 + a/z)(1 + a z)),     h(1/z) = -h(z),
//! ```
//!
//! whose Laurent expansion on the unit circle is `Σ c_k z^k` with
//! `c_{-k} = -c_k`. Keeping the non-negative powers gives
//! `f(z) = Σ_{j≥1} c_j z^j`, so that `h(z) = f(z) - f(1/z)` and
//! `g = h² = C²(z²-1)²(z+a)(1+az)/z³` is rational.

use crate::error::{fmt_c, Error, Result};
use crate::quad::trapezoid_circle;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Distance below which a point counts as sitting on a branch point.
pub const BRANCH_POINT_EPS: f64 = 1e-14;
/// Trailing-coefficient size (relative to `C`) above which a grid is too coarse.
pub const TAIL_TOLERANCE: f64 = 1e-13;
/// Tolerance on the antisymmetry and realness of the Laurent coefficients.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Floor on `min |f'|` below which a boundary is not certified univalent.
pub const DERIVATIVE_FLOOR: f64 = 1e-6;

/// The two real parameters of the map family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    pub a: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl MapParams {
    /// Validates `0 ≤ a < 1` and `C > 0`.
    pub fn new(a: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && (0.0..1.0).contains(&a)) {
            return Err(Error::Parameter(format!("a = {a} must satisfy 0 <= a < 1")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Parameter(format!("C = {c} must be positive")));
        }
        Ok(Self { a, c })
    }

    /// Branch points of the square root: `0`, `-a` and `-1/a`.
    pub fn branch_points(&self) -> Vec<Complex64> {
        let mut pts = vec![Complex64::new(0.0, 0.0), Complex64::new(-self.a, 0.0)];
        if self.a > 0.0 {
            pts.push(Complex64::new(-1.0 / self.a, 0.0));
        }
        pts
    }

    /// Smallest power-of-two grid size at which the Laurent tail of `h`
    /// drops below double-precision noise.
    pub fn auto_samples(&self) -> usize {
        if self.a < 1e-3 {
            return 256;
        }
        // c_k decays like k^{-3/2} a^k; aim for a^{K} < 1e-17.
        let k = (-17.0 * std::f64::consts::LN_10 / self.a.ln()).ceil() as usize + 16;
        (2 * k).next_power_of_two().clamp(256, 1 << 22)
    }
}

/// `√((1 + a/z)(1 + a z))` on the branch that is positive on the unit
/// circle. Both principal logarithms are continuous on `a < |z| < 1/a`,
/// so their half-sum unwinds the root continuously from `z = 1`.
pub(crate) fn sqrt_factor(z: Complex64, a: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (0.5 * ((one + a / z).ln() + (one + a * z).ln())).exp()
}

fn check_branch_points(z: Complex64, p: &MapParams) -> Result<()> {
    for bp in p.branch_points() {
        let d = (z - bp).norm();
        if d < BRANCH_POINT_EPS {
            return Err(Error::Domain {
                point: fmt_c(z),
                singular: fmt_c(bp),
                distance: d,
            });
        }
    }
    Ok(())
}

/// `h(z) = C (z² - 1)/z · √((z+a)/z · (1+az))`, positive root at `z = 1`.
pub fn eval_h(z: Complex64, p: &MapParams) -> Result<Complex64> {
    check_branch_points(z, p)?;
    Ok(p.c * (z - 1.0 / z) * sqrt_factor(z, p.a))
}

/// `g(z) = C²(z² - 1)²(z + a)(1 + az)/z³`.
pub fn eval_g(z: Complex64, p: &MapParams) -> Result<Complex64> {
    if z.norm() < BRANCH_POINT_EPS {
        return Err(Error::Domain {
            point: fmt_c(z),
            singular: fmt_c(Complex64::new(0.0, 0.0)),
            distance: z.norm(),
        });
    }
    Ok(g_unchecked(z, p))
}

fn g_unchecked(z: Complex64, p: &MapParams) -> Complex64 {
    let w = z * z - 1.0;
    p.c * p.c * w * w * (z + p.a) * (1.0 + p.a * z) / (z * z * z)
}

/// Samples of `h` on the unit circle and the Laurent coefficients
/// `c_k, -K ≤ k ≤ K`, obtained by a discrete Fourier transform.
#[derive(Debug, Clone)]
pub struct CircleGrid {
    pub params: MapParams,
    pub n: usize,
    pub theta: Vec<f64>,
    pub hvals: Vec<Complex64>,
    /// `c_0 ..= c_K`; negative indices follow from `c_{-k} = -c_k`.
    coeffs: Vec<f64>,
    /// `|c_K|`, the last retained coefficient.
    pub tail: f64,
}

impl CircleGrid {
    /// `K = n/2 - 1`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_k` for `|k| ≤ K`, zero beyond.
    pub fn coeff(&self, k: i64) -> f64 {
        let idx = k.unsigned_abs() as usize;
        match self.coeffs.get(idx) {
            Some(&c) if k >= 0 => c,
            Some(&c) => -c,
            None => 0.0,
        }
    }

    /// Positive-index coefficients `c_0 ..= c_K` (with `c_0 = 0`).
    pub fn positive_coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Builds a [`CircleGrid`] from `n` equispaced samples of `h`.
pub fn laurent_coeffs(p: &MapParams, n: usize) -> Result<CircleGrid> {
    if !n.is_power_of_two() || n < 256 {
        return Err(Error::Parameter(format!(
            "sample count {n} must be a power of two >= 256"
        )));
    }
    let half = n / 2;
    let mut theta = vec![0.0; n];
    let mut nodes = vec![Complex64::new(0.0, 0.0); n];
    // Mirror the lower half so that z_{n-j} = conj(z_j) exactly.
    for j in 0..=half {
        let t = 2.0 * PI * j as f64 / n as f64;
        theta[j] = t;
        nodes[j] = Complex64::from_polar(1.0, t);
        if j > 0 && j < half {
            theta[n - j] = 2.0 * PI - t;
            nodes[n - j] = nodes[j].conj();
        }
    }
    nodes[half] = Complex64::new(-1.0, 0.0);
    let hvals: Vec<Complex64> = nodes.iter().map(|&z| eval_h(z, p)).collect::<Result<_>>()?;

    let mut buf = hvals.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for x in buf.iter_mut() {
        *x *= scale;
    }

    let tol = SYMMETRY_TOLERANCE * p.c.max(1.0);
    if buf[0].norm() > tol {
        return Err(Error::Resolution(format!(
            "c_0 = {} violates h(1/z) = -h(z)",
            fmt_c(buf[0])
        )));
    }
    let mut coeffs = vec![0.0; half];
    for k in 1..half {
        let ck = buf[k];
        let cmk = buf[n - k];
        if ck.im.abs() > tol || cmk.im.abs() > tol || (ck + cmk).norm() > tol {
            return Err(Error::Resolution(format!(
                "coefficient pair k = {k}: c_k = {}, c_-k = {} breaks realness/antisymmetry",
                fmt_c(ck),
                fmt_c(cmk)
            )));
        }
        coeffs[k] = 0.5 * (ck.re - cmk.re);
    }
    let tail = coeffs[half - 1].abs();
    if tail > TAIL_TOLERANCE * p.c {
        return Err(Error::Resolution(format!(
            "|c_{}| = {tail:e} exceeds {TAIL_TOLERANCE:e}·C; use more than {n} samples for a = {}",
            half - 1,
            p.a
        )));
    }
    Ok(CircleGrid {
        params: *p,
        n,
        theta,
        hvals,
        coeffs,
        tail,
    })
}

/// [`laurent_coeffs`] at [`MapParams::auto_samples`].
pub fn laurent_coeffs_auto(p: &MapParams) -> Result<CircleGrid> {
    laurent_coeffs(p, p.auto_samples())
}

fn horner(coeffs: impl DoubleEndedIterator<Item = f64>, w: Complex64) -> Complex64 {
    coeffs
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c)
}

fn check_series_domain(w: Complex64) -> Result<()> {
    if w.norm() > 1.0 + 1e-12 {
        return Err(Error::Parameter(format!(
            "series evaluation needs |w| <= 1, got |w| = {}; use eval_f_contour",
            w.norm()
        )));
    }
    Ok(())
}

/// `f(w) = Σ_{j≥1} c_j w^j` for `|w| ≤ 1`.
pub fn eval_f(w: Complex64, grid: &CircleGrid) -> Result<Complex64> {
    check_series_domain(w)?;
    Ok(series_f(w, grid))
}

fn series_f(w: Complex64, grid: &CircleGrid) -> Complex64 {
    horner(grid.coeffs.iter().copied(), w)
}

fn series_fprime(w: Complex64, grid: &CircleGrid) -> Complex64 {
    horner(
        grid.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| j as f64 * c),
        w,
    )
}

/// `f'(w) = Σ j c_j w^{j-1}` for `|w| ≤ 1`.
pub fn eval_fprime(w: Complex64, grid: &CircleGrid) -> Result<Complex64> {
    check_series_domain(w)?;
    Ok(series_fprime(w, grid))
}

/// Radius of the deformed Cauchy contour used for `|w|` close to 1.
pub fn deformed_radius(a: f64) -> f64 {
    if a == 0.0 {
        1.25
    } else {
        1.0 + (0.25 * (1.0 / a - 1.0)).min(0.25)
    }
}

pub(crate) fn trapezoid_nodes(inner_ratio: f64, outer_ratio: f64) -> usize {
    let q = inner_ratio.max(outer_ratio);
    if q <= 0.0 {
        return 64;
    }
    let n = (-38.0 / q.ln()).ceil().max(64.0) as usize;
    n.next_power_of_two().min(1 << 20)
}

/// `f(w) = (1/2πi) ∮ h(z)/(z - w) dz` by the trapezoid rule, on `|z| = 1`
/// when `|w| ≤ 0.95` and on the deformed circle `|z| = 1 + ε` otherwise.
pub fn eval_f_contour(w: Complex64, p: &MapParams) -> Result<Complex64> {
    let r = if w.norm() <= 0.95 {
        1.0
    } else {
        deformed_radius(p.a)
    };
    let dist = (w.norm() - r).abs();
    if dist < 1e-8 || w.norm() > r {
        return Err(Error::Path {
            point: fmt_c(w),
            distance: r - w.norm(),
        });
    }
    let inner = p.a.max(w.norm()) / r;
    let outer = r * p.a;
    let n = trapezoid_nodes(inner, outer);
    Ok(trapezoid_circle(Complex64::new(0.0, 0.0), r, n, |z| {
        p.c * (z - 1.0 / z) * sqrt_factor(z, p.a) / (z - w)
    }))
}

/// `A₀` and `A₁` of the split `f(w) = A₀ + A₁ w + C (w² - 1) F(w)`:
/// `A₀ = (C/2πi)∮ s(z) dz`, `A₁ = (C/2πi)∮ s(z)/z dz` with
/// `s = √((1 + a/z)(1 + az))`.
pub fn decomposition_constants(p: &MapParams) -> Result<(f64, f64)> {
    let n = trapezoid_nodes(p.a, p.a);
    let zero = Complex64::new(0.0, 0.0);
    let a0 = p.c * trapezoid_circle(zero, 1.0, n, |z| sqrt_factor(z, p.a));
    let a1 = p.c * trapezoid_circle(zero, 1.0, n, |z| sqrt_factor(z, p.a) / z);
    let tol = 1e-12 * p.c;
    if a0.im.abs() > tol || a1.im.abs() > tol {
        return Err(Error::Resolution(format!(
            "decomposition constants not real: A0 = {}, A1 = {}",
            fmt_c(a0),
            fmt_c(a1)
        )));
    }
    Ok((a0.re, a1.re))
}

/// A map of the closed unit disk with real Taylor coefficients.
///
/// `g` is `(f(z) - f(1/z))²` continued to a punctured neighbourhood of
/// `z = 0`; for a quadrature domain it is meromorphic there.
pub trait ConformalMap {
    fn f(&self, z: Complex64) -> Complex64;
    fn fprime(&self, z: Complex64) -> Complex64;
    fn g(&self, z: Complex64) -> Complex64;

    /// Radius of a circle `|z| = r` inside which `g · f^k · f'` has no
    /// singularity other than `z = 0`.
    fn pole_circle_radius(&self) -> f64 {
        0.5
    }

    fn params(&self) -> Option<MapParams> {
        None
    }
}

/// The map family `f(z) = Σ c_j z^j` built from a [`CircleGrid`].
#[derive(Debug, Clone)]
pub struct PaperMap {
    pub grid: CircleGrid,
}

impl PaperMap {
    pub fn new(p: &MapParams) -> Result<Self> {
        Ok(Self {
            grid: laurent_coeffs_auto(p)?,
        })
    }

    pub fn with_samples(p: &MapParams, n: usize) -> Result<Self> {
        Ok(Self {
            grid: laurent_coeffs(p, n)?,
        })
    }

    pub fn boundary(&self, m: usize) -> BoundaryCurve {
        BoundaryCurve::from_grid(&self.grid, m)
    }
}

impl ConformalMap for PaperMap {
    fn f(&self, z: Complex64) -> Complex64 {
        series_f(z, &self.grid)
    }
    fn fprime(&self, z: Complex64) -> Complex64 {
        series_fprime(z, &self.grid)
    }
    fn g(&self, z: Complex64) -> Complex64 {
        g_unchecked(z, &self.grid.params)
    }
    fn params(&self) -> Option<MapParams> {
        Some(self.grid.params)
    }
}

/// θ-sampled image of the unit circle.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    pub params: Option<MapParams>,
    pub m: usize,
    /// `f(e^{iθ_j})`, `θ_j = 2πj/m`.
    pub zeta: Vec<Complex64>,
    /// `f'(e^{iθ_j})`.
    pub dfd: Vec<Complex64>,
    pub min_abs_df: f64,
    pub simple: bool,
}

impl BoundaryCurve {
    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.m as f64
    }

    /// Boundary of the map family, evaluated by folding the Taylor
    /// coefficients modulo `m` and one inverse FFT.
    pub fn from_grid(grid: &CircleGrid, m: usize) -> Self {
        let mut zb = vec![Complex64::new(0.0, 0.0); m];
        let mut db = vec![Complex64::new(0.0, 0.0); m];
        for (j, &c) in grid.coeffs.iter().enumerate().skip(1) {
            zb[j % m] += c;
            db[j % m] += j as f64 * c;
        }
        let fft = FftPlanner::new().plan_fft_inverse(m);
        fft.process(&mut zb);
        fft.process(&mut db);
        for (k, d) in db.iter_mut().enumerate() {
            *d *= Complex64::from_polar(1.0, -2.0 * PI * k as f64 / m as f64);
        }
        Self::assemble(Some(grid.params), zb, db)
    }

    pub fn from_map<M: ConformalMap + ?Sized>(map: &M, m: usize) -> Self {
        let (zeta, dfd) = (0..m)
            .map(|j| {
                let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
                (map.f(z), map.fprime(z))
            })
            .unzip();
        Self::assemble(map.params(), zeta, dfd)
    }

    fn assemble(params: Option<MapParams>, zeta: Vec<Complex64>, dfd: Vec<Complex64>) -> Self {
        let mut curve = Self {
            params,
            m: zeta.len(),
            zeta,
            dfd,
            min_abs_df: 0.0,
            simple: false,
        };
        let (simple, min_abs_df) = check_univalent(&curve);
        curve.simple = simple;
        curve.min_abs_df = min_abs_df;
        curve
    }

    /// `simple ∧ min|f'| > DERIVATIVE_FLOOR`.
    pub fn is_univalent(&self) -> bool {
        self.simple && self.min_abs_df > DERIVATIVE_FLOOR
    }

    /// Largest `|ζ|` on the boundary.
    pub fn max_radius(&self) -> f64 {
        self.zeta.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn orient(p: Complex64, q: Complex64, r: Complex64) -> f64 {
    (q - p).re * (r - p).im - (q - p).im * (r - p).re
}

fn on_segment(p: Complex64, q: Complex64, r: Complex64) -> bool {
    r.re >= p.re.min(q.re)
        && r.re <= p.re.max(q.re)
        && r.im >= p.im.min(q.im)
        && r.im <= p.im.max(q.im)
}

fn segments_intersect(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Self-intersection test of the closed polyline through `curve.zeta`
/// (sweep over x-extents, exact pairwise test for overlapping candidates)
/// together with `min_j |f'(e^{iθ_j})|`.
pub fn check_univalent(curve: &BoundaryCurve) -> (bool, f64) {
    let m = curve.zeta.len();
    let min_abs_df = curve
        .dfd
        .iter()
        .map(|d| d.norm())
        .fold(f64::INFINITY, f64::min);
    if m < 3 {
        return (false, min_abs_df);
    }
    let seg = |i: usize| (curve.zeta[i], curve.zeta[(i + 1) % m]);
    let mut order: Vec<usize> = (0..m).collect();
    let xmin = |i: usize| {
        let (p, q) = seg(i);
        p.re.min(q.re)
    };
    let xmax = |i: usize| {
        let (p, q) = seg(i);
        p.re.max(q.re)
    };
    order.sort_by(|&i, &j| xmin(i).total_cmp(&xmin(j)));

    for (pos, &i) in order.iter().enumerate() {
        let hi = xmax(i);
        let (p1, p2) = seg(i);
        for &j in &order[pos + 1..] {
            if xmin(j) > hi {
                break;
            }
            let gap = i.abs_diff(j);
            if gap <= 1 || gap == m - 1 {
                continue;
            }
            let (q1, q2) = seg(j);
            if segments_intersect(p1, p2, q1, q2) {
                return (false, min_abs_df);
            }
        }
    }
    (true, min_abs_df)
}
