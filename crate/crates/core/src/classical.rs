//! Closed-form reference shapes: Neumann's oval, the limaçon and its
//! rotation into R⁴, the Polubarinova-Kochina cardioid, and balls.

use crate::conformal::{BoundaryCurve, ConformalMap};
use crate::error::{fmt_c, Error, Result};
use crate::quad::trapezoid_circle;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A classical shape and its defining parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassicalShape {
    NeumannOval { a: f64 },
    Limacon { sigma: f64 },
    PkCardioid { a: f64, b: f64 },
    Ball { r: f64, n: u32 },
}

impl ClassicalShape {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ClassicalShape::NeumannOval { a } if !(a.is_finite() && a > 0.0) => Err(
                Error::Parameter(format!("oval parameter a = {a} must be positive")),
            ),
            ClassicalShape::Limacon { sigma } => check_sigma(sigma),
            ClassicalShape::PkCardioid { a, b } if !(a > 0.0 && b > 2.0 * a) => Err(
                Error::Parameter(format!("cardioid needs b > 2a > 0, got a = {a}, b = {b}")),
            ),
            ClassicalShape::Ball { r, n } if !(r > 0.0 && n >= 2) => Err(Error::Parameter(
                format!("ball needs r > 0 and n >= 2, got r = {r}, n = {n}"),
            )),
            _ => Ok(()),
        }
    }

    /// The planar profile as a map of the unit disk.
    pub fn map(&self) -> Result<Box<dyn ConformalMap + Send + Sync>> {
        self.validate()?;
        Ok(match *self {
            ClassicalShape::NeumannOval { a } => Box::new(NeumannOval::new(a)?),
            ClassicalShape::Limacon { sigma } => Box::new(Limacon { sigma }),
            ClassicalShape::PkCardioid { a, b } => Box::new(PkCardioid { a, b }),
            ClassicalShape::Ball { r, .. } => Box::new(Disk { r }),
        })
    }

    pub fn boundary(&self, m: usize) -> Result<BoundaryCurve> {
        Ok(BoundaryCurve::from_map(self.map()?.as_ref(), m))
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && (0.0..0.5).contains(&sigma)) {
        return Err(Error::Parameter(format!(
            "limaçon parameter σ = {sigma} must satisfy 0 <= σ < 1/2"
        )));
    }
    Ok(())
}

fn reflected_square<M: ConformalMap + ?Sized>(map: &M, z: Complex64) -> Complex64 {
    let d = map.f(z) - map.f(1.0 / z);
    d * d
}

/// `ζ = r z`.
#[derive(Debug, Clone, Copy)]
pub struct Disk {
    pub r: f64,
}

impl ConformalMap for Disk {
    fn f(&self, z: Complex64) -> Complex64 {
        self.r * z
    }
    fn fprime(&self, _z: Complex64) -> Complex64 {
        c(self.r, 0.0)
    }
    fn g(&self, z: Complex64) -> Complex64 {
        reflected_square(self, z)
    }
}

/// `ζ = z + σ z²`.
#[derive(Debug, Clone, Copy)]
pub struct Limacon {
    pub sigma: f64,
}

impl ConformalMap for Limacon {
    fn f(&self, z: Complex64) -> Complex64 {
        z + self.sigma * z * z
    }
    fn fprime(&self, z: Complex64) -> Complex64 {
        1.0 + 2.0 * self.sigma * z
    }
    fn g(&self, z: Complex64) -> Complex64 {
        reflected_square(self, z)
    }
}

/// `ζ = b z + a z²`.
#[derive(Debug, Clone, Copy)]
pub struct PkCardioid {
    pub a: f64,
    pub b: f64,
}

impl ConformalMap for PkCardioid {
    fn f(&self, z: Complex64) -> Complex64 {
        pk_cardioid_map(z, self.a, self.b)
    }
    fn fprime(&self, z: Complex64) -> Complex64 {
        self.b + 2.0 * self.a * z
    }
    fn g(&self, z: Complex64) -> Complex64 {
        reflected_square(self, z)
    }
}

/// `R = (a + √(a² + 4))/2`, the parameter of the oval's disk map.
pub fn oval_radius(a: f64) -> f64 {
    0.5 * (a + (a * a + 4.0).sqrt())
}

/// Neumann's oval `(x² + y²)² = a²(x² + y²) + 4x²` as the image of the
/// unit disk under `f(z) = (R⁴ - 1) z / (R (R² - z²))`.
#[derive(Debug, Clone, Copy)]
pub struct NeumannOval {
    pub a: f64,
    pub r: f64,
}

impl NeumannOval {
    pub fn new(a: f64) -> Result<Self> {
        ClassicalShape::NeumannOval { a }.validate()?;
        Ok(Self {
            a,
            r: oval_radius(a),
        })
    }
}

impl ConformalMap for NeumannOval {
    fn f(&self, z: Complex64) -> Complex64 {
        oval_map(z, self.a)
    }
    fn fprime(&self, z: Complex64) -> Complex64 {
        let r2 = self.r * self.r;
        let d = r2 - z * z;
        (r2 * r2 - 1.0) / self.r * (r2 + z * z) / (d * d)
    }
    fn g(&self, z: Complex64) -> Complex64 {
        reflected_square(self, z)
    }
    fn pole_circle_radius(&self) -> f64 {
        0.5 / self.r
    }
}

/// `f_R(z) = (R⁴ - 1) z / (R (R² - z²))`.
pub fn oval_map(z: Complex64, a: f64) -> Complex64 {
    let r = oval_radius(a);
    let r2 = r * r;
    (r2 * r2 - 1.0) * z / (r * (r2 - z * z))
}

/// `(x² + y²)² - a²(x² + y²) - 4x²`.
pub fn oval_quartic(zeta: Complex64, a: f64) -> f64 {
    let rho = zeta.norm_sqr();
    rho * rho - a * a * rho - 4.0 * zeta.re * zeta.re
}

/// Schwarz function of Neumann's oval,
/// `S(ζ) = [ζ(a² + 2) + 2ζ√(a⁴/4 + a² + ζ²)] / (2(ζ² - 1))`.
///
/// The principal root is positive at `ζ = 0` and its cut lies on the
/// imaginary axis beyond `|Im ζ| = a√(1 + a²/4)`, outside the oval.
pub fn oval_schwarz(zeta: Complex64, a: f64) -> Result<Complex64> {
    for pole in [1.0, -1.0] {
        let d = (zeta - pole).norm();
        if d < 1e-12 {
            return Err(Error::Domain {
                point: fmt_c(zeta),
                singular: fmt_c(c(pole, 0.0)),
                distance: d,
            });
        }
    }
    let a2 = a * a;
    let root = (0.25 * a2 * a2 + a2 + zeta * zeta).sqrt();
    Ok((zeta * (a2 + 2.0) + 2.0 * zeta * root) / (2.0 * (zeta * zeta - 1.0)))
}

/// Weights of the two-point formula `∫ u dA = w₊ u(1) + w₋ u(-1)` as
/// `π · Res S` at `ζ = ±1`, from contour integrals of radius 1/4.
pub fn oval_quadrature_weights(a: f64) -> Result<(f64, f64)> {
    ClassicalShape::NeumannOval { a }.validate()?;
    let residue = |center: f64| {
        trapezoid_circle(c(center, 0.0), 0.25, 256, |z| {
            let a2 = a * a;
            let root = (0.25 * a2 * a2 + a2 + z * z).sqrt();
            (z * (a2 + 2.0) + 2.0 * z * root) / (2.0 * (z * z - 1.0))
        })
    };
    Ok((PI * residue(1.0).re, PI * residue(-1.0).re))
}

/// `∫_D u dA = q₀ u(0) + q₁ u'(0)` for the limaçon `w + σw²`:
/// `(π(1 + 2σ²), πσ)`.
pub fn limacon_quadrature_2d(sigma: f64) -> Result<(f64, f64)> {
    check_sigma(sigma)?;
    Ok((PI * (1.0 + 2.0 * sigma * sigma), PI * sigma))
}

/// Coefficients of `∫_Ω u dV = a₀ u(0) + a₁ ∂₁u(0) + a₂ ∂₁²u(0)` for the
/// limaçon rotated about the real axis into R⁴.
pub fn karp_quadrature_4d(sigma: f64) -> Result<(f64, f64, f64)> {
    check_sigma(sigma)?;
    let s2 = sigma * sigma;
    let pi2 = PI * PI;
    Ok((
        0.5 * pi2 * (1.0 + 6.0 * s2 + 2.0 * s2 * s2),
        0.5 * pi2 * sigma * (1.0 + 2.0 * s2),
        pi2 * s2 / 12.0,
    ))
}

/// Volume of the unit-normalised ball of radius `r` in R⁴, `π² r⁴ / 2`.
pub fn ball_volume_4d(r: f64) -> f64 {
    0.5 * PI * PI * r.powi(4)
}

/// Schwarz potential of the sphere `‖x‖ = r` in Rⁿ as a function of `‖x‖`:
/// `r²(log‖x‖ + ½ - log r)` for `n = 2` and
/// `n r²/(2(n-2)) - rⁿ/((n-2)‖x‖^{n-2})` for `n ≥ 3`.
pub fn sphere_schwarz_potential(x_norm: f64, r: f64, n: u32) -> Result<f64> {
    if !(r > 0.0) || n < 2 {
        return Err(Error::Parameter(format!(
            "sphere needs r > 0 and n >= 2, got r = {r}, n = {n}"
        )));
    }
    if !(x_norm > 0.0) {
        return Err(Error::Domain {
            point: format!("|x| = {x_norm}"),
            singular: "0".into(),
            distance: x_norm.abs(),
        });
    }
    let r2 = r * r;
    if n == 2 {
        return Ok(r2 * (x_norm.ln() + 0.5 - r.ln()));
    }
    let k = f64::from(n - 2);
    Ok(f64::from(n) * r2 / (2.0 * k) - r.powi(n as i32) / (k * x_norm.powi(n as i32 - 2)))
}

/// `ζ = a z² + b z`.
pub fn pk_cardioid_map(z: Complex64, a: f64, b: f64) -> Complex64 {
    a * z * z + b * z
}

/// Schwarz function of the cardioid `a z² + b z`:
/// `S(ζ) = -2ab/(b - √(b² + 4aζ)) + 4a³/(b - √(b² + 4aζ))²`.
///
/// The principal root is valid on the closed domain for `b > 2a`: the
/// cut `ζ < -b²/(4a)` lies to the left of `f(-1) = a - b`.
pub fn pk_schwarz(zeta: Complex64, a: f64, b: f64) -> Result<Complex64> {
    let q = b - (b * b + 4.0 * a * zeta).sqrt();
    if q.norm() < 1e-14 * b {
        return Err(Error::Domain {
            point: fmt_c(zeta),
            singular: fmt_c(c(0.0, 0.0)),
            distance: zeta.norm(),
        });
    }
    Ok(-2.0 * a * b / q + 4.0 * a * a * a / (q * q))
}

/// Area `M₀ = π(b² + 2a²)` and first moment `M₁ = ∫ζ dA = π a b²` of the
/// cardioid `a z² + b z`.
pub fn pk_moments(a: f64, b: f64) -> (f64, f64) {
    (PI * (b * b + 2.0 * a * a), PI * a * b * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn circle(j: usize, m: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)
    }

    #[test]
    fn oval_boundary_identities() {
        for a in [0.5, 1.0, 2.0] {
            for j in 0..64 {
                let zeta = oval_map(circle(j, 64), a);
                assert!(oval_quartic(zeta, a).abs() < 1e-12 * (1.0 + a).powi(4));
                let s = oval_schwarz(zeta, a).unwrap();
                assert!((s - zeta.conj()).norm() < 1e-12, "a = {a}, j = {j}");
            }
        }
        assert_eq!(oval_schwarz(c(0.0, 0.0), 1.0).unwrap(), c(0.0, 0.0));
        assert!(oval_schwarz(c(1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn oval_weights_sum_to_area() {
        for a in [0.5, 1.0, 2.0] {
            let (wp, wm) = oval_quadrature_weights(a).unwrap();
            assert_relative_eq!(wp, 0.5 * PI * (a * a + 2.0), max_relative = 1e-13);
            assert_relative_eq!(wm, wp, max_relative = 1e-13);
        }
    }

    #[test]
    fn oval_map_derivative() {
        let oval = NeumannOval::new(1.0).unwrap();
        let z = c(0.3, 0.4);
        let h = 1e-6;
        let fd = (oval.f(z + h) - oval.f(z - h)) / (2.0 * h);
        assert!((fd - oval.fprime(z)).norm() < 1e-8);
    }

    #[test]
    fn limacon_and_karp_values() {
        let (q0, q1) = limacon_quadrature_2d(0.25).unwrap();
        assert_relative_eq!(q0, PI * 1.125, max_relative = 1e-15);
        assert_relative_eq!(q1, 0.25 * PI, max_relative = 1e-15);
        assert_eq!(limacon_quadrature_2d(0.0).unwrap(), (PI, 0.0));
        assert!(limacon_quadrature_2d(0.6).is_err());

        let (a0, a1, a2) = karp_quadrature_4d(0.25).unwrap();
        let pi2 = PI * PI;
        assert_relative_eq!(
            a0,
            pi2 * (1.0 + 0.375 + 0.007_812_5) / 2.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(a1, pi2 * 0.25 * 1.125 / 2.0, max_relative = 1e-15);
        assert_relative_eq!(a2, pi2 * 0.0625 / 12.0, max_relative = 1e-15);
        let (b0, b1, b2) = karp_quadrature_4d(0.0).unwrap();
        assert_eq!((b0, b1, b2), (pi2 / 2.0, 0.0, 0.0));
    }

    #[test]
    fn sphere_potential_cauchy_data() {
        assert_relative_eq!(
            sphere_schwarz_potential(1.0, 1.0, 4).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            sphere_schwarz_potential(2.0, 2.0, 2).unwrap(),
            2.0,
            epsilon = 1e-15
        );
        let h = 1e-5;
        let d = (sphere_schwarz_potential(1.0 + h, 1.0, 4).unwrap()
            - sphere_schwarz_potential(1.0 - h, 1.0, 4).unwrap())
            / (2.0 * h);
        assert!((d - 1.0).abs() < 1e-6);
        assert!(sphere_schwarz_potential(0.0, 1.0, 3).is_err());
        assert!(sphere_schwarz_potential(1.0, 1.0, 1).is_err());
    }

    #[test]
    fn cardioid_schwarz_on_boundary() {
        let (a, b) = (0.2, 1.0);
        for j in 0..128 {
            let zeta = pk_cardioid_map(circle(j, 128), a, b);
            let s = pk_schwarz(zeta, a, b).unwrap();
            assert!(
                (s - zeta.conj()).norm() < 1e-12,
                "j = {j}: {s} vs {}",
                zeta.conj()
            );
        }
        assert_eq!(pk_cardioid_map(c(0.0, 0.0), a, b), c(0.0, 0.0));
        assert!(pk_schwarz(c(0.0, 0.0), a, b).is_err());
    }

    #[test]
    fn shape_validation() {
        assert!(ClassicalShape::PkCardioid { a: 0.6, b: 1.0 }
            .validate()
            .is_err());
        assert!(ClassicalShape::Limacon { sigma: 0.5 }.validate().is_err());
        assert!(ClassicalShape::NeumannOval { a: -1.0 }.validate().is_err());
        assert!(ClassicalShape::Ball { r: 1.0, n: 1 }.validate().is_err());
        let curve = ClassicalShape::Limacon { sigma: 0.25 }
            .boundary(1024)
            .unwrap();
        assert!(curve.is_univalent());
    }
}
