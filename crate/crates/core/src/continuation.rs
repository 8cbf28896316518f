//! The function `F(w)` of the split `f(w) = A₀ + A₁ w + C(w² - 1) F(w)`,
//! its jump across the cut `(-∞, -1/a]` and its continuation to other
//! sheets.
//!
//! Collapsing the unit-circle contour onto the cut gives
//!
//! ```text
//! F(w) = (1/πi) ∫_{-∞}^{-1/a} √G(z)/(z - w) dz,     G(z) = (z + a)(1 + az)/z³,
//! ```
//!
//! and the substitution `z = -1/(a sin²φ)` turns this into the regular
//! integral
//!
//! ```text
//! F(w) = (2a/π) ∫₀^{π/2} cos²φ √(1 - a² sin²φ) / (1 + a w sin²φ) dφ,
//! ```
//!
//! whose only singularity is the pole at `w = -1/(a sin²φ)`, i.e. on the cut.
//!
//! `F` jumps by `-2√G` across the cut. Continuing `F` along a closed path
//! therefore lands on `F₀ + 2m·r`, with `r` the continued value of `√G` and
//! `m` the signed number of cut crossings. A loop around `-1/a` changes both
//! `m` and the sign of `r`; a loop around `0` alone only flips `r`. Their
//! alternation climbs the ladder `F₀ + 2(k+1)√G` without bound.

use crate::conformal::{sqrt_factor, trapezoid_nodes};
use crate::error::{fmt_c, Error, Result};
use crate::quad::{adaptive_gk, tanh_sinh, trapezoid_circle};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::str::FromStr;

pub use crate::elliptic::carlson_pi;
use crate::elliptic::{ellip_e, ellip_k};

/// Minimum distance from an evaluation point to the cut.
pub const CUT_EPS: f64 = 1e-10;
/// Minimum distance from a continuation path to a branch point of `√G`.
pub const PATH_EPS: f64 = 1e-6;
/// Default ε-sequence for [`jump`].
pub const JUMP_EPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

const GK_ABS: f64 = 1e-15;
const GK_REL: f64 = 1e-14;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Branch data of `√G` for a fixed `0 < a < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutGeometry {
    pub a: f64,
}

impl CutGeometry {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Parameter(format!("a = {a} must satisfy 0 < a < 1")));
        }
        Ok(Self { a })
    }

    /// Right end `-1/a` of the cut.
    pub fn cut_end(&self) -> f64 {
        -1.0 / self.a
    }

    /// Odd-order zeros and poles of `G`: `0`, `-a`, `-1/a`.
    pub fn branch_points(&self) -> [Complex64; 3] {
        [c(0.0, 0.0), c(-self.a, 0.0), c(self.cut_end(), 0.0)]
    }

    /// Euclidean distance from `w` to the ray `(-∞, -1/a]`.
    pub fn distance_to_cut(&self, w: Complex64) -> f64 {
        if w.re <= self.cut_end() {
            w.im.abs()
        } else {
            (w - self.cut_end()).norm()
        }
    }

    fn check_off_cut(&self, w: Complex64) -> Result<()> {
        let d = self.distance_to_cut(w);
        if d < CUT_EPS {
            return Err(Error::Cut {
                point: fmt_c(w),
                distance: d,
            });
        }
        Ok(())
    }
}

/// Branch index of `F`: the value on sheet `(m, s)` is `F₀(w) + 2 m s √G(w)`
/// with the principal root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SheetState {
    pub m: i64,
    pub s: i8,
}

impl SheetState {
    pub const PRINCIPAL: SheetState = SheetState { m: 0, s: 1 };
}

impl Default for SheetState {
    fn default() -> Self {
        Self::PRINCIPAL
    }
}

/// `G(z) = (z + a)(1 + az)/z³`.
#[allow(non_snake_case)]
pub fn eval_G(z: Complex64, a: f64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain {
            point: fmt_c(z),
            singular: fmt_c(c(0.0, 0.0)),
            distance: 0.0,
        });
    }
    Ok((z + a) * (1.0 + a * z) / (z * z * z))
}

fn check_a(a: f64) -> Result<()> {
    if !(a.is_finite() && (0.0..1.0).contains(&a)) {
        return Err(Error::Parameter(format!("a = {a} must satisfy 0 <= a < 1")));
    }
    Ok(())
}

/// Principal-sheet `F(w)` from the segment integral, for `w` off the cut.
/// At `a = 0` the function vanishes identically.
#[allow(non_snake_case)]
pub fn eval_F(w: Complex64, a: f64) -> Result<Complex64> {
    check_a(a)?;
    if a == 0.0 {
        return Ok(c(0.0, 0.0));
    }
    CutGeometry { a }.check_off_cut(w)?;
    Ok(segment_integral(w, a))
}

fn segment_integral(w: Complex64, a: f64) -> Complex64 {
    let m = a * a;
    let integrand = |phi: f64| {
        let s2 = phi.sin().powi(2);
        let num = phi.cos().powi(2) * (1.0 - m * s2).sqrt();
        num / (1.0 + a * w * s2)
    };
    // A pole close to the real φ-axis when w hugs the cut.
    let mut breaks = Vec::new();
    if w.re < -1.0 / a {
        let s2 = -1.0 / (a * w.re);
        breaks.push(s2.sqrt().asin());
    }
    let r = adaptive_gk(integrand, 0.0, FRAC_PI_2, &breaks, GK_ABS, GK_REL);
    r.value * (2.0 * a / PI)
}

/// `F(w) = (1/2πi) ∮ √((1 + a/z)(1 + az)) / (z (z - w)) dz` over `|z| = 1`
/// (or the deformed circle for `|w| > 0.95`). Independent of the segment
/// form; valid inside the contour.
#[allow(non_snake_case)]
pub fn eval_F_circle(w: Complex64, a: f64) -> Result<Complex64> {
    check_a(a)?;
    let r = if w.norm() <= 0.95 {
        1.0
    } else {
        crate::conformal::deformed_radius(a)
    };
    if r - w.norm() < 1e-8 {
        return Err(Error::Path {
            point: fmt_c(w),
            distance: r - w.norm(),
        });
    }
    let n = trapezoid_nodes(a.max(w.norm()) / r, r * a);
    Ok(trapezoid_circle(c(0.0, 0.0), r, n, |z| {
        sqrt_factor(z, a) / (z * (z - w))
    }))
}

/// `C₀ = F(0) = (2a/π)((1 + m)E(m) - (1 - m)K(m))/(3m)`, `m = a²`.
pub fn c0(a: f64) -> Result<f64> {
    check_a(a)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    let m = a * a;
    if m < 1e-4 {
        // Series to dodge the 1/m cancellation: ∫cos²φ Δ dφ = π/4 (1 - m/8 - m²/64 ...)
        return Ok(0.5 * a * (1.0 - m / 8.0 - m * m / 64.0 - 5.0 * m * m * m / 1024.0));
    }
    let (k, e) = (ellip_k(m)?, ellip_e(m)?);
    Ok(2.0 * a / PI * ((1.0 + m) * e - (1.0 - m) * k) / (3.0 * m))
}

/// `F(w) = C₀ - (1/π) ∫₀^a √((1 - aξ)(a - ξ)ξ) / (ξ + 1/w) dξ`, the form
/// reached by `z = -1/ξ`. The integral is done by tanh-sinh.
pub fn xi_form(w: Complex64, a: f64) -> Result<Complex64> {
    check_a(a)?;
    let base = c0(a)?;
    if a == 0.0 || w.norm() == 0.0 {
        return Ok(c(base, 0.0));
    }
    CutGeometry { a }.check_off_cut(w)?;
    let p = -1.0 / w;
    let integral = tanh_sinh(
        |xi, dl, dh| {
            let root = ((1.0 - a * xi) * dh * dl).sqrt();
            root / (xi - p)
        },
        0.0,
        a,
        7,
    );
    Ok(base - integral / PI)
}

/// [`xi_form`] for real `w > -1/a` in closed form. With `ξ = a t` and
/// `N(t) = t(1-t)(1-a²t) = (at - p) q(t) + r`, the integral splits into
/// `∫ tᵏ/√N` (first and second kind) and `∫ 1/((at - p)√N)`, which is
/// `-(2/p) Π(a/p, a²)`. Loses about `|log₁₀ a⁴|` digits to cancellation
/// for small `a`.
pub fn xi_form_elliptic(w: f64, a: f64) -> Result<f64> {
    check_a(a)?;
    let base = c0(a)?;
    if a == 0.0 || w == 0.0 {
        return Ok(base);
    }
    if w <= -1.0 / a + CUT_EPS {
        return Err(Error::Cut {
            point: fmt_c(c(w, 0.0)),
            distance: (w + 1.0 / a).abs(),
        });
    }
    let m = a * a;
    let p = -1.0 / w;
    let (k, e) = (ellip_k(m)?, ellip_e(m)?);
    let j0 = 2.0 * k;
    let j1 = 2.0 * (k - e) / m;
    let j2 = 2.0 * ((2.0 + m) * k - 2.0 * (1.0 + m) * e) / (3.0 * m * m);
    let jp = -2.0 / p * carlson_pi(a / p, m)?;
    // Synthetic division of m t³ - (1 + m) t² + t by (a t - p).
    let q2 = m / a;
    let q1 = (-(1.0 + m) + q2 * p) / a;
    let q0 = (1.0 + q1 * p) / a;
    let r = q0 * p;
    let integral = m * (q2 * j2 + q1 * j1 + q0 * j0 + r * jp);
    Ok(base - integral / PI)
}

/// `lim_{ε→0} F(x + iε) - F(x - iε)` at a point `x < -1/a` of the cut,
/// by Richardson extrapolation over the decreasing sequence `eps`.
pub fn jump(x: f64, a: f64, eps: &[f64]) -> Result<Complex64> {
    let geom = CutGeometry::new(a)?;
    if x >= geom.cut_end() {
        return Err(Error::Parameter(format!(
            "x = {x} is not on the open cut x < {}",
            geom.cut_end()
        )));
    }
    if eps.is_empty() || eps.windows(2).any(|w| w[1] >= w[0]) || eps[0] <= 0.0 {
        return Err(Error::Parameter(
            "ε-sequence must be positive and strictly decreasing".into(),
        ));
    }
    let diffs: Vec<Complex64> = eps
        .iter()
        .map(|&e| segment_integral(c(x, e), a) - segment_integral(c(x, -e), a))
        .collect();

    // Neville-style table for an expansion in integer powers of ε.
    let n = diffs.len();
    let mut table = diffs.clone();
    let mut diagonal = vec![diffs[0]];
    for j in 1..n {
        for i in (j..n).rev() {
            let ratio = (eps[i - j] / eps[i]).powi(j as i32);
            table[i] = table[i] + (table[i] - table[i - 1]) / (ratio - 1.0);
        }
        diagonal.push(table[n - 1]);
    }
    let steps: Vec<f64> = diagonal.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    if steps.len() >= 2 {
        let (prev, last) = (steps[steps.len() - 2], steps[steps.len() - 1]);
        if last > prev && last > 1e-8 {
            let list = diagonal
                .iter()
                .map(|z| fmt_c(*z))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::Extrapolation(format!("diverge: {list}")));
        }
    }
    Ok(table[n - 1])
}

/// `-2√G(x)` on the cut, with `√G(x) = i√|G(x)|`.
pub fn jump_exact(x: f64, a: f64) -> Result<Complex64> {
    let g = eval_G(c(x, 0.0), a)?;
    Ok(c(0.0, -2.0 * g.re.abs().sqrt()))
}

fn principal_sqrt_g(w: Complex64, a: f64) -> Complex64 {
    ((w + a) * (1.0 + a * w) / (w * w * w)).sqrt()
}

fn segment_distance(p: Complex64, q: Complex64, x: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (x - p).norm();
    }
    let t = (((x - p) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p + d * t - x).norm()
}

fn nearest(r: Complex64, candidate: Complex64) -> Complex64 {
    if (candidate - r).norm() <= (candidate + r).norm() {
        candidate
    } else {
        -candidate
    }
}

/// Continues `F` from `start` at `path[0]` along the polyline `path`.
///
/// `√G` is followed by continuity on a subdivision fine relative to the
/// distance to its branch points; each transversal crossing of the cut
/// shifts the crossing count by the sign of the continued root there.
/// Returns the sheet at the end point and the value of `F` there.
pub fn continue_along(
    path: &[Complex64],
    start: SheetState,
    a: f64,
) -> Result<(SheetState, Complex64)> {
    let geom = CutGeometry::new(a)?;
    let Some(&first) = path.first() else {
        return Err(Error::Parameter("empty path".into()));
    };
    if start.s != 1 && start.s != -1 {
        return Err(Error::Parameter(format!(
            "sheet sign {} must be ±1",
            start.s
        )));
    }
    let bps = geom.branch_points();
    let cut = geom.cut_end();
    let check_vertex = |w: Complex64| -> Result<()> {
        if w.im == 0.0 && w.re <= cut {
            return Err(Error::Cut {
                point: fmt_c(w),
                distance: 0.0,
            });
        }
        Ok(())
    };
    check_vertex(first)?;

    let mut r = f64::from(start.s) * principal_sqrt_g(first, a);
    let mut m = start.m;
    for seg in path.windows(2) {
        let (p, q) = (seg[0], seg[1]);
        check_vertex(q)?;
        let dmin = bps
            .iter()
            .map(|&b| segment_distance(p, q, b))
            .fold(f64::INFINITY, f64::min);
        if dmin < PATH_EPS {
            return Err(Error::Path {
                point: fmt_c(p),
                distance: dmin,
            });
        }
        let pieces = ((q - p).norm() / (0.1 * dmin)).ceil().clamp(1.0, 1e6) as usize;
        let mut prev = p;
        for j in 1..=pieces {
            let next = p + (q - p) * (j as f64 / pieces as f64);
            if (prev.im > 0.0 && next.im < 0.0) || (prev.im < 0.0 && next.im > 0.0) {
                let t = prev.im / (prev.im - next.im);
                let x = prev.re + t * (next.re - prev.re);
                if x < cut {
                    let on_cut = c(0.0, principal_sqrt_g(c(x, 0.0), a).norm());
                    let sigma = if (nearest(r, on_cut) - on_cut).norm() < on_cut.norm() {
                        1
                    } else {
                        -1
                    };
                    m += if prev.im > 0.0 { -sigma } else { sigma };
                }
            }
            r = nearest(r, principal_sqrt_g(next, a));
            prev = next;
        }
    }

    let end = *path.last().unwrap_or(&first);
    let principal = principal_sqrt_g(end, a);
    let s: i8 = if (r - principal).norm() <= (r + principal).norm() {
        1
    } else {
        -1
    };
    let state = SheetState { m, s };
    let value = segment_integral(end, a) + 2.0 * m as f64 * f64::from(s) * principal;
    Ok((state, value))
}

/// Base point of the ladder loops: above the gap `(-1/a, -a)`.
pub fn base_point(a: f64) -> Complex64 {
    let gap = 1.0 / a - a;
    c(-0.5 * (1.0 / a + a), 0.25 * gap)
}

const LOOP_POINTS: usize = 257;

fn circle_through(center: Complex64, start: Complex64, points: usize) -> Vec<Complex64> {
    let rel = start - center;
    let (radius, phase) = rel.to_polar();
    (0..=points)
        .map(|j| {
            if j == points {
                start
            } else {
                center + Complex64::from_polar(radius, phase + 2.0 * PI * j as f64 / points as f64)
            }
        })
        .collect()
}

/// Counter-clockwise loop from [`base_point`] around `-1/a` alone.
pub fn gamma1(a: f64) -> Vec<Complex64> {
    circle_through(c(-1.0 / a, 0.0), base_point(a), LOOP_POINTS)
}

/// Loop from [`base_point`] around `0` alone: out to `i a/2`, once around
/// `|w| = a/2`, and back.
pub fn gamma2(a: f64) -> Vec<Complex64> {
    let w0 = base_point(a);
    let anchor = c(0.0, 0.5 * a);
    let mut path = vec![w0];
    path.extend(circle_through(c(0.0, 0.0), anchor, LOOP_POINTS));
    path.push(w0);
    path
}

/// A named loop at the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Loop {
    G1,
    G2,
}

impl Loop {
    pub fn path(self, a: f64) -> Vec<Complex64> {
        match self {
            Loop::G1 => gamma1(a),
            Loop::G2 => gamma2(a),
        }
    }
}

impl FromStr for Loop {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "g1" => Ok(Loop::G1),
            "g2" => Ok(Loop::G2),
            other => Err(Error::Parameter(format!(
                "unknown loop token `{other}` (use g1, g2)"
            ))),
        }
    }
}

/// `γ₁ (γ₂ γ₁)^k`: `k + 1` copies of `γ₁` separated by `γ₂`.
pub fn ladder_word(k: usize) -> Vec<Loop> {
    let mut word = vec![Loop::G1];
    for _ in 0..k {
        word.push(Loop::G2);
        word.push(Loop::G1);
    }
    word
}

/// Outcome of continuing `F` around a word of loops at [`base_point`].
#[derive(Debug, Clone, Serialize)]
pub struct MonodromyReport {
    pub a: f64,
    pub base_point: Complex64,
    pub loops: Vec<Loop>,
    pub sheets_visited: Vec<SheetState>,
    pub f0: Complex64,
    pub sqrt_g: Complex64,
    pub value: Complex64,
    /// `(value - F₀)/√G(w₀)`.
    pub offset_multiple: Complex64,
}

/// Continues the principal branch around each loop of `word` in turn.
pub fn monodromy(a: f64, word: &[Loop]) -> Result<MonodromyReport> {
    CutGeometry::new(a)?;
    let w0 = base_point(a);
    let f0 = segment_integral(w0, a);
    let sqrt_g = principal_sqrt_g(w0, a);
    let mut state = SheetState::PRINCIPAL;
    let mut value = f0;
    let mut sheets = vec![state];
    for lp in word {
        let (next, v) = continue_along(&lp.path(a), state, a)?;
        state = next;
        value = v;
        sheets.push(state);
    }
    Ok(MonodromyReport {
        a,
        base_point: w0,
        loops: word.to_vec(),
        sheets_visited: sheets,
        f0,
        sqrt_g,
        value,
        offset_multiple: (value - f0) / sqrt_g,
    })
}
