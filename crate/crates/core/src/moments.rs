//! Harmonic moments of planar domains and of their rotations into R⁴, and
//! the coefficients of point quadrature formulas at the origin.
//!
//! For a domain `Ω ⊂ R⁴` obtained by rotating `D ⊂ C` about the real
//! axis, the axially symmetric harmonics `U_k = Im ζᵏ / y` have moments
//!
//! ```text
//! M_k = ∫_Ω U_k dV = 2π ∫_D Im(ζᵏ) y dA
//!     = -(π/2) [I(k+1,0) - I(k,1) - I(1,k) + I(0,k+1)],
//! I(p,q) = ∫_D ζᵖ ζ̄^q dA = (1/(2i(q+1))) ∮ ζᵖ ζ̄^{q+1} dζ.
//! ```
//!
//! A formula `∫_Ω u dV = Σ_j a_j ∂₁ʲu(0)` holds for all harmonic `u` iff
//! `M_k = k! a_{k-1}` for every `k`, because `∂₁ʲ U_k(0) = k! δ_{j,k-1}`.

use crate::conformal::{BoundaryCurve, ConformalMap, MapParams, PaperMap};
use crate::error::{fmt_c, Error, Result};
use crate::quad::trapezoid_circle;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative change under grid halving above which a moment is reported
/// as under-resolved.
pub const MOMENT_RESOLUTION: f64 = 1e-10;
/// Normalised residual above which a domain is not a quadrature domain of
/// the requested order.
pub const RESIDUAL_THRESHOLD: f64 = 1e-4;
/// Highest moment order examined by default.
pub const DEFAULT_MAX_ORDER: usize = 8;

const LAURENT_NODES: usize = 512;

/// Extracted quadrature coefficients and the leftover higher moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureData {
    pub a0: f64,
    pub a1: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a2: Option<f64>,
    /// Order of the first residual moment.
    pub residual_start: usize,
    /// `|M_k| / (a0 L^{k-1})` for `k = residual_start ..`, `L` the largest
    /// boundary radius.
    pub residuals: Vec<f64>,
    pub is_quadrature: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub params: Option<MapParams>,
}

impl QuadratureData {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// `(k, residual_k)` pairs.
    pub fn residual_table(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.residuals
            .iter()
            .enumerate()
            .map(|(i, &r)| (self.residual_start + i, r))
    }
}

fn moment_sum(curve: &BoundaryCurve, k: usize, m: usize, stride: usize) -> Complex64 {
    let n = curve.m / stride;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in (0..curve.m).step_by(stride) {
        let zeta = curve.zeta[j];
        let z = Complex64::from_polar(1.0, curve.theta(j));
        let dzeta = curve.dfd[j] * z * Complex64::i();
        acc += zeta.powu(k as u32) * zeta.conj().powu(m as u32 + 1) * dzeta;
    }
    acc * (2.0 * PI / n as f64) / (Complex64::new(0.0, 2.0) * (m as f64 + 1.0))
}

/// `∫_D ζᵏ ζ̄ᵐ dA` by the trapezoid rule on the sampled boundary.
///
/// Fails with a resolution error if the rule on every other sample
/// differs by more than [`MOMENT_RESOLUTION`] relative to
/// `max(|I|, L^{k+m+2})`.
pub fn complex_moment(curve: &BoundaryCurve, k: usize, m: usize) -> Result<Complex64> {
    if curve.m < 8 || !curve.m.is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "moment quadrature needs an even sample count >= 8, got {}",
            curve.m
        )));
    }
    let full = moment_sum(curve, k, m, 1);
    let half = moment_sum(curve, k, m, 2);
    let scale = full.norm().max(curve.max_radius().powi((k + m + 2) as i32));
    if (full - half).norm() > MOMENT_RESOLUTION * scale {
        return Err(Error::Resolution(format!(
            "moment ({k}, {m}) changes by {:e} between {} and {} samples",
            (full - half).norm(),
            curve.m / 2,
            curve.m
        )));
    }
    Ok(full)
}

/// `M_1 ..= M_K` of the rotation of the curve's interior into R⁴.
pub fn harmonic_moments_4d(curve: &BoundaryCurve, max_order: usize) -> Result<Vec<f64>> {
    let l = curve.max_radius();
    (1..=max_order)
        .map(|k| {
            let i = |p, q| complex_moment(curve, p, q);
            let sum = i(k + 1, 0)? - i(k, 1)? - i(1, k)? + i(0, k + 1)?;
            let mk = -0.5 * PI * sum;
            let scale = mk.norm().max(l.powi(k as i32 + 3));
            if mk.im.abs() > 1e-12 * scale {
                return Err(Error::Resolution(format!(
                    "M_{k} = {} is not real",
                    fmt_c(mk)
                )));
            }
            Ok(mk.re)
        })
        .collect()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn assemble(
    moments: &[f64],
    order: usize,
    l: f64,
    params: Option<MapParams>,
) -> Result<QuadratureData> {
    if moments.len() < order + 1 {
        return Err(Error::Parameter(format!(
            "need at least {} moments for order {order}",
            order + 1
        )));
    }
    let coeff = |j: usize| moments[j] / factorial(j + 1);
    let a0 = coeff(0);
    if !(a0 > 0.0) {
        return Err(Error::Resolution(format!(
            "volume a0 = {a0} is not positive"
        )));
    }
    let residual_start = order + 2;
    let residuals: Vec<f64> = (residual_start..=moments.len())
        .map(|k| moments[k - 1].abs() / (a0 * l.powi(k as i32 - 1)))
        .collect();
    let is_quadrature = residuals.iter().all(|&r| r <= RESIDUAL_THRESHOLD);
    Ok(QuadratureData {
        a0,
        a1: if order >= 1 { coeff(1) } else { 0.0 },
        a2: (order >= 2).then(|| coeff(2)),
        residual_start,
        residuals,
        is_quadrature,
        params,
    })
}

/// Quadrature data of order `order` (1 or 2) from the boundary moments
/// `M_1 ..= M_K`: `a_j = M_{j+1}/(j+1)!`, residuals from `M_{order+2}`.
pub fn extract_quadrature_direct_order(
    curve: &BoundaryCurve,
    order: usize,
    max_order: usize,
) -> Result<QuadratureData> {
    if !(1..=2).contains(&order) {
        return Err(Error::Parameter(format!("order {order} must be 1 or 2")));
    }
    if !curve.simple {
        return Err(Error::Parameter("boundary curve is not simple".into()));
    }
    let moments = harmonic_moments_4d(curve, max_order)?;
    assemble(&moments, order, curve.max_radius(), curve.params)
}

/// [`extract_quadrature_direct_order`] with `order = 1`, `K = 8`.
pub fn extract_quadrature_direct(curve: &BoundaryCurve) -> Result<QuadratureData> {
    extract_quadrature_direct_order(curve, 1, DEFAULT_MAX_ORDER)
}

/// Boundary sample count for moment quadrature of the map family.
pub fn moment_samples(p: &MapParams) -> usize {
    p.auto_samples().max(2048)
}

/// Direct-path quadrature data of the map family at `p`.
pub fn quadrature_of_params(p: &MapParams) -> Result<QuadratureData> {
    let map = PaperMap::new(p)?;
    extract_quadrature_direct(&map.boundary(moment_samples(p)))
}

/// `c₋ⱼ` of `V(ζ) = (i/4) g(f⁻¹(ζ))` at `ζ = 0`, for `j = 1 ..= jmax`,
/// computed in the disk variable:
/// `c₋ⱼ = (1/2πi) ∮ (i/4) g(z) f(z)^{j-1} f'(z) dz` over `|z| = r`.
pub fn singular_laurent_coeffs<M: ConformalMap + ?Sized>(
    map: &M,
    jmax: usize,
) -> Result<Vec<Complex64>> {
    let r = map.pole_circle_radius();
    // The image of the circle must wind once around ζ = 0.
    let winding: f64 = (0..LAURENT_NODES)
        .map(|j| {
            let t0 = 2.0 * PI * j as f64 / LAURENT_NODES as f64;
            let t1 = 2.0 * PI * (j + 1) as f64 / LAURENT_NODES as f64;
            let z0 = map.f(Complex64::from_polar(r, t0));
            let z1 = map.f(Complex64::from_polar(r, t1));
            (z1 / z0).arg()
        })
        .sum::<f64>()
        / (2.0 * PI);
    if (winding - 1.0).abs() > 1e-6 {
        return Err(Error::Branch(format!(
            "image of |z| = {r} winds {winding:.6} times around ζ = 0"
        )));
    }
    let quarter_i = Complex64::new(0.0, 0.25);
    Ok((1..=jmax)
        .map(|j| {
            trapezoid_circle(Complex64::new(0.0, 0.0), r, LAURENT_NODES, |z| {
                quarter_i * map.g(z) * map.f(z).powu(j as u32 - 1) * map.fprime(z)
            })
        })
        .collect())
}

/// Quadrature data from the singular part of the Schwarz potential:
/// `M_k = -2iπ² c₋₍ₖ₊₁₎`, hence `a0 = -2iπ² c₋₂`, `a1 = -iπ² c₋₃`.
///
/// `L` for the residual normalisation is the largest radius of 1024
/// boundary samples.
pub fn extract_quadrature_laurent<M: ConformalMap + ?Sized>(
    map: &M,
    order: usize,
    max_order: usize,
) -> Result<QuadratureData> {
    if !(1..=2).contains(&order) {
        return Err(Error::Parameter(format!("order {order} must be 1 or 2")));
    }
    let coeffs = singular_laurent_coeffs(map, max_order + 1)?;
    let pi2 = PI * PI;
    let mut moments = Vec::with_capacity(max_order);
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        let mk = Complex64::new(0.0, -2.0 * pi2) * c;
        let scale = mk.norm().max(1e-300);
        if mk.im.abs() > 1e-10 * scale.max(pi2) {
            return Err(Error::Resolution(format!(
                "Laurent moment M_{k} = {} is not real",
                fmt_c(mk)
            )));
        }
        moments.push(mk.re);
    }
    let l = BoundaryCurve::from_map(map, 1024).max_radius();
    assemble(&moments, order, l, map.params())
}

/// Axially symmetric harmonics `U_k(x, y) = Im((x + iy)ᵏ)/y` of R⁴.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicTestFamily {
    pub max_order: usize,
}

impl HarmonicTestFamily {
    /// `U_k(x, y)` as the polynomial `Σ_{j odd} C(k,j) (-1)^{(j-1)/2} x^{k-j} y^{j-1}`,
    /// regular at `y = 0`.
    pub fn u(&self, k: usize, x: f64, y: f64) -> f64 {
        let mut binom = 1.0;
        let mut acc = 0.0;
        for j in 0..=k {
            if j > 0 {
                binom *= (k - j + 1) as f64 / j as f64;
            }
            if j % 2 == 1 {
                let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binom * x.powi((k - j) as i32) * y.powi(j as i32 - 1);
            }
        }
        acc
    }

    /// `U_k` at a point of R⁴, with `y = √(x₂² + x₃² + x₄²)`.
    pub fn u4(&self, k: usize, x: [f64; 4]) -> f64 {
        let y = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        self.u(k, x[0], y)
    }

    /// Fourth-order central-difference Laplacian of `U_k` on R⁴.
    pub fn laplacian_fd(&self, k: usize, x: [f64; 4], h: f64) -> f64 {
        let centre = self.u4(k, x);
        (0..4)
            .map(|i| {
                let at = |d: f64| {
                    let mut p = x;
                    p[i] += d;
                    self.u4(k, p)
                };
                (-at(2.0 * h) + 16.0 * at(h) - 30.0 * centre + 16.0 * at(-h) - at(-2.0 * h))
                    / (12.0 * h * h)
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{karp_quadrature_4d, limacon_quadrature_2d, Limacon};
    use approx::assert_relative_eq;

    fn disk_curve() -> BoundaryCurve {
        PaperMap::with_samples(&MapParams::new(0.0, 1.0).unwrap(), 256)
            .unwrap()
            .boundary(1024)
    }

    #[test]
    fn disk_area_and_centroid() {
        let curve = disk_curve();
        assert_relative_eq!(
            complex_moment(&curve, 0, 0).unwrap().re,
            PI,
            max_relative = 1e-14
        );
        assert!(complex_moment(&curve, 1, 0).unwrap().norm() < 1e-15);
    }

    #[test]
    fn conjugation_symmetry() {
        let curve = PaperMap::new(&MapParams::new(0.4, 1.2).unwrap())
            .unwrap()
            .boundary(2048);
        let a = complex_moment(&curve, 3, 1).unwrap();
        let b = complex_moment(&curve, 1, 3).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn under_resolved_moment_is_reported() {
        let curve = PaperMap::new(&MapParams::new(0.8, 1.0).unwrap())
            .unwrap()
            .boundary(16);
        assert!(matches!(
            complex_moment(&curve, 2, 0),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn limacon_area() {
        let curve = BoundaryCurve::from_map(&Limacon { sigma: 0.25 }, 1024);
        let (q0, q1) = limacon_quadrature_2d(0.25).unwrap();
        assert_relative_eq!(
            complex_moment(&curve, 0, 0).unwrap().re,
            q0,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            complex_moment(&curve, 1, 0).unwrap().re,
            q1,
            max_relative = 1e-13
        );
    }

    #[test]
    fn ball_moments() {
        let m = harmonic_moments_4d(&disk_curve(), 8).unwrap();
        assert_relative_eq!(m[0], PI * PI / 2.0, max_relative = 1e-14);
        assert!(m[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn karp_moments() {
        let sigma = 0.25;
        let curve = BoundaryCurve::from_map(&Limacon { sigma }, 1024);
        let (a0, a1, a2) = karp_quadrature_4d(sigma).unwrap();
        let m = harmonic_moments_4d(&curve, 8).unwrap();
        assert_relative_eq!(m[0], a0, max_relative = 1e-13);
        assert_relative_eq!(m[1], 2.0 * a1, max_relative = 1e-13);
        assert_relative_eq!(m[2], 6.0 * a2, max_relative = 1e-13);
        let first = extract_quadrature_direct(&curve).unwrap();
        assert!(!first.is_quadrature);
        assert_eq!(first.residual_start, 3);
        let second = extract_quadrature_direct_order(&curve, 2, 8).unwrap();
        assert!(second.is_quadrature);
        assert_relative_eq!(second.a2.unwrap(), a2, max_relative = 1e-13);
    }

    #[test]
    fn limacon_laurent_path() {
        let (a0, a1, a2) = karp_quadrature_4d(0.25).unwrap();
        let q = extract_quadrature_laurent(&Limacon { sigma: 0.25 }, 2, 8).unwrap();
        assert_relative_eq!(q.a0, a0, max_relative = 1e-13);
        assert_relative_eq!(q.a1, a1, max_relative = 1e-13);
        assert_relative_eq!(q.a2.unwrap(), a2, max_relative = 1e-13);
    }

    #[test]
    fn paper_family_dual_path() {
        // Direct-path regression values at C = 1.
        for (a, m1, m2) in [
            (0.1, 5.095_699_72, 0.499_050_385),
            (0.3, 6.419_959_92, 1.634_847_08),
            (0.5, 9.264_767_81, 3.219_667_54),
        ] {
            let p = MapParams::new(a, 1.0).unwrap();
            let direct = quadrature_of_params(&p).unwrap();
            assert_relative_eq!(direct.a0, m1, max_relative = 1e-8);
            assert_relative_eq!(direct.a1, m2 / 2.0, max_relative = 1e-8);
            assert!(direct.is_quadrature && direct.max_residual() < 1e-10);
            let laurent = extract_quadrature_laurent(&PaperMap::new(&p).unwrap(), 1, 8).unwrap();
            assert_relative_eq!(laurent.a0, direct.a0, max_relative = 1e-12);
            assert_relative_eq!(laurent.a1, direct.a1, max_relative = 1e-12);
        }
    }

    #[test]
    fn scaling_law() {
        let q1 = quadrature_of_params(&MapParams::new(0.3, 1.0).unwrap()).unwrap();
        let q2 = quadrature_of_params(&MapParams::new(0.3, 1.5).unwrap()).unwrap();
        assert_relative_eq!(q2.a0, 1.5f64.powi(4) * q1.a0, max_relative = 1e-13);
        assert_relative_eq!(q2.a1, 1.5f64.powi(5) * q1.a1, max_relative = 1e-13);
    }

    #[test]
    fn harmonic_family() {
        let fam = HarmonicTestFamily { max_order: 8 };
        assert_eq!(fam.u(1, 0.3, 0.7), 1.0);
        assert_relative_eq!(fam.u(2, 0.3, 0.7), 0.6, epsilon = 1e-15);
        assert_relative_eq!(fam.u(3, 0.3, 0.7), 3.0 * 0.09 - 0.49, epsilon = 1e-15);
        for k in 1..=fam.max_order {
            let v = fam.laplacian_fd(k, [0.3, -0.2, 0.5, 0.1], 1e-2);
            assert!(v.abs() < 1e-6, "k = {k}: {v}");
        }
    }

    #[test]
    fn quadrature_data_json() {
        let q = quadrature_of_params(&MapParams::new(0.3, 1.0).unwrap()).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert!(s.contains("\"C\":1.0") && !s.contains("a2"));
        let back: QuadratureData = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
