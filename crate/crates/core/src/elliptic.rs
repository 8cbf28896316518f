//! Carlson symmetric elliptic integrals by the duplication algorithm, and
//! the complete Legendre integrals built from them.
//!
//! ```text
//! R_F(x,y,z)   = ½ ∫₀^∞ dt / √((t+x)(t+y)(t+z))
//! R_J(x,y,z,p) = 3/2 ∫₀^∞ dt / ((t+p) √((t+x)(t+y)(t+z)))
//! R_D(x,y,z)   = R_J(x,y,z,z)
//! R_C(x,y)     = R_F(x,y,y)
//! ```
//!
//! The complete integrals, with parameter `m = k²`:
//!
//! ```text
//! K(m)    = R_F(0, 1-m, 1)
//! E(m)    = R_F(0, 1-m, 1) - (m/3) R_D(0, 1-m, 1)
//! Π(n, m) = R_F(0, 1-m, 1) + (n/3) R_J(0, 1-m, 1, 1-n)
//! ```

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

// Duplication stops once the arguments agree to this relative spread; the
// fifth-order Taylor tail then sits below 1e-16.
const SPREAD: f64 = 1.5e-4;
const MAX_ITER: usize = 200;

/// Carlson's `R_C(x, y)` for `x ≥ 0`, `y > 0`.
pub fn rc(x: f64, y: f64) -> f64 {
    let (mut x, mut y) = (x, y);
    for _ in 0..MAX_ITER {
        let mu = (x + 2.0 * y) / 3.0;
        let s = (y - x) / (3.0 * mu);
        if s.abs() < SPREAD {
            let s2 = s * s;
            return (1.0 + s2 * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / mu.sqrt();
        }
        let lambda = 2.0 * (x * y).sqrt() + y;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
    }
    f64::NAN
}

/// Carlson's `R_F(x, y, z)`; at most one argument may vanish.
pub fn rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..MAX_ITER {
        let mu = (x + y + z) / 3.0;
        let dx = 1.0 - x / mu;
        let dy = 1.0 - y / mu;
        let dz = 1.0 - z / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < SPREAD {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / mu.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    f64::NAN
}

/// Carlson's `R_J(x, y, z, p)` for `x, y, z ≥ 0` (at most one zero) and `p > 0`.
pub fn rj(x: f64, y: f64, z: f64, p: f64) -> f64 {
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let mut sum = 0.0;
    let mut fac = 1.0;
    for _ in 0..MAX_ITER {
        let mu = (x + y + z + 2.0 * p) / 5.0;
        let dx = (mu - x) / mu;
        let dy = (mu - y) / mu;
        let dz = (mu - z) / mu;
        let dp = (mu - p) / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()).max(dp.abs()) < SPREAD {
            let ea = dx * (dy + dz) + dy * dz;
            let eb = dx * dy * dz;
            let ec = dp * dp;
            let e2 = ea - 3.0 * ec;
            let e3 = eb + 2.0 * dp * (ea - ec);
            let e4 = (2.0 * eb + dp * (ea - 3.0 * ec)) * dp;
            let e5 = eb * ec;
            let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
                - 3.0 * e4 / 22.0
                - 9.0 * e2 * e3 / 52.0
                + 3.0 * e5 / 26.0;
            return 3.0 * sum + fac * series / (mu * mu.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        let alpha = p * (sx + sy + sz) + sx * sy * sz;
        let beta = p.sqrt() * (p + lambda);
        sum += fac * rc(alpha * alpha, beta * beta);
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        p = 0.25 * (p + lambda);
    }
    f64::NAN
}

/// Carlson's `R_D(x, y, z) = R_J(x, y, z, z)`.
pub fn rd(x: f64, y: f64, z: f64) -> f64 {
    rj(x, y, z, z)
}

fn check_parameter(m: f64) -> Result<()> {
    if !(m.is_finite() && m < 1.0) {
        return Err(Error::Parameter(format!(
            "elliptic parameter m = {m} must be < 1"
        )));
    }
    Ok(())
}

/// Complete elliptic integral of the first kind, `K(m)`.
pub fn ellip_k(m: f64) -> Result<f64> {
    check_parameter(m)?;
    Ok(rf(0.0, 1.0 - m, 1.0))
}

/// Complete elliptic integral of the second kind, `E(m)`.
pub fn ellip_e(m: f64) -> Result<f64> {
    check_parameter(m)?;
    let y = 1.0 - m;
    Ok(rf(0.0, y, 1.0) - m / 3.0 * rd(0.0, y, 1.0))
}

/// Complete elliptic integral of the third kind
/// `Π(n, m) = ∫₀^{π/2} dθ / ((1 - n sin²θ) √(1 - m sin²θ))`, for `n < 1`, `m < 1`.
pub fn carlson_pi(n: f64, m: f64) -> Result<f64> {
    check_parameter(m)?;
    if !(n.is_finite() && n < 1.0) {
        return Err(Error::Parameter(format!(
            "characteristic n = {n} must be < 1"
        )));
    }
    let y = 1.0 - m;
    Ok(rf(0.0, y, 1.0) + n / 3.0 * rj(0.0, y, 1.0, 1.0 - n))
}

/// `K(m)` from the arithmetic–geometric mean, `π / (2 AGM(1, √(1-m)))`.
pub fn ellip_k_agm(m: f64) -> Result<f64> {
    check_parameter(m)?;
    let (mut a, mut b) = (1.0f64, (1.0 - m).sqrt());
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(FRAC_PI_2 / a)
}
