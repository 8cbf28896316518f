//! Laplacian growth with a point source at the origin.
//!
//! By Richardson's theorem the harmonic moments of the domain evolve as
//! `d/dt ∫ u = Q u(0)`. For the R⁴ family this means `a0(t) = a0(0) + Q t`
//! and `a1(t) = a1(0)`, so a trajectory is a path in moment space pulled
//! back to `(a, C)` by Newton inversion at every step; there is no time
//! discretisation error. `Q > 0` is injection.
//!
//! The planar cardioid `ζ = b z + a z²` is evolved the same way with its
//! closed-form area and first moment.

use crate::classical::pk_moments;
use crate::conformal::{MapParams, PaperMap, DERIVATIVE_FLOOR};
use crate::error::{Error, Result};
use crate::moments::{moment_samples, quadrature_of_params};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `min |f'|` below which an R⁴ trajectory stops with a cusp flag.
pub const CUSP_THRESHOLD: f64 = 1e-3;
/// Largest `a` the inversion may visit.
pub const A_MAX: f64 = 0.9995;
/// Relative tolerance of [`invert_parameters`], in units of the target `a0`.
pub const INVERSION_TOLERANCE: f64 = 1e-8;
/// Bisection width of [`find_cusp_parameter`].
pub const CUSP_BRACKET_WIDTH: f64 = 1e-5;
/// `b - 2a` below which a cardioid trajectory is at its cusp.
pub const PK_CUSP_GAP: f64 = 1e-6;

const MAX_NEWTON: usize = 50;

/// A point on an R⁴ trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthState {
    pub t: f64,
    pub params: MapParams,
    pub a0: f64,
    pub a1: f64,
    pub min_abs_df: f64,
    pub cusp: bool,
}

/// `(a0, a1)` of the family at `p`.
pub fn forward(p: &MapParams) -> Result<(f64, f64)> {
    let q = quadrature_of_params(p)?;
    Ok((q.a0, q.a1))
}

/// `min_θ |f'(e^{iθ})|` and the simplicity flag of the boundary.
pub fn boundary_diagnostics(p: &MapParams) -> Result<(f64, bool)> {
    let curve = PaperMap::new(p)?.boundary(moment_samples(p));
    Ok((curve.min_abs_df, curve.simple))
}

impl GrowthState {
    pub fn at(t: f64, params: MapParams) -> Result<Self> {
        let (a0, a1) = forward(&params)?;
        let (min_abs_df, _) = boundary_diagnostics(&params)?;
        Ok(Self {
            t,
            params,
            a0,
            a1,
            min_abs_df,
            cusp: min_abs_df < CUSP_THRESHOLD,
        })
    }
}

fn admissible(a: f64, c: f64) -> Result<MapParams> {
    if !(a < A_MAX) || !(c > 0.0) || !a.is_finite() || !c.is_finite() {
        return Err(Error::OutOfFamily(format!(
            "iterate (a, C) = ({a}, {c}) outside 0 <= a < {A_MAX}, C > 0"
        )));
    }
    MapParams::new(a.max(0.0), c)
}

/// Solves `(a0, a1)(a, C) = (target_a0, target_a1)` by damped Newton
/// iteration with a finite-difference Jacobian, clamping `a ≥ 0`.
pub fn invert_parameters(target_a0: f64, target_a1: f64, seed: MapParams) -> Result<MapParams> {
    if !(target_a0 > 0.0) || !target_a1.is_finite() || target_a1 < 0.0 {
        return Err(Error::Parameter(format!(
            "targets need a0 > 0 and a1 >= 0, got ({target_a0}, {target_a1})"
        )));
    }
    let tol = INVERSION_TOLERANCE * target_a0;
    // Newton keeps polishing towards rounding level; the contract only needs `tol`.
    let polish = 1e-13 * target_a0;
    let residual = |v: (f64, f64)| (v.0 - target_a0, v.1 - target_a1);
    let norm = |r: (f64, f64)| r.0.abs() + r.1.abs();

    let mut p = admissible(seed.a, seed.c)?;
    let mut r = residual(forward(&p)?);
    for _ in 0..MAX_NEWTON {
        if norm(r) < polish {
            return Ok(p);
        }
        let ha = 1e-6;
        let hc = 1e-6 * p.c;
        // One-sided in a at the clamp.
        let (alo, ahi) = if p.a < ha {
            (p.a, p.a + ha)
        } else {
            (p.a - ha, p.a + ha)
        };
        let fa_hi = forward(&MapParams::new(ahi, p.c)?)?;
        let fa_lo = forward(&MapParams::new(alo, p.c)?)?;
        let fc_hi = forward(&MapParams::new(p.a, p.c + hc)?)?;
        let fc_lo = forward(&MapParams::new(p.a, p.c - hc)?)?;
        let j11 = (fa_hi.0 - fa_lo.0) / (ahi - alo);
        let j21 = (fa_hi.1 - fa_lo.1) / (ahi - alo);
        let j12 = (fc_hi.0 - fc_lo.0) / (2.0 * hc);
        let j22 = (fc_hi.1 - fc_lo.1) / (2.0 * hc);
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NoConvergence {
                iterations: 0,
                residual: norm(r),
            });
        }
        let da = -(j22 * r.0 - j12 * r.1) / det;
        let dc = -(-j21 * r.0 + j11 * r.1) / det;

        let mut step = 1.0;
        loop {
            let a_new = (p.a + step * da).max(0.0);
            let c_new = p.c + step * dc;
            let candidate = admissible(a_new, c_new).and_then(|q| Ok((q, residual(forward(&q)?))));
            match candidate {
                Ok((q, rn)) if norm(rn) < norm(r) => {
                    p = q;
                    r = rn;
                    break;
                }
                // Halve the step on a residual increase or a leap out of the family.
                _ if step > 1.0 / 1024.0 => step *= 0.5,
                Ok(_) if norm(r) < tol => return Ok(p),
                Ok(_) => {
                    return Err(Error::NoConvergence {
                        iterations: MAX_NEWTON,
                        residual: norm(r),
                    })
                }
                Err(e) => return Err(e),
            }
        }
    }
    if norm(r) < tol {
        return Ok(p);
    }
    Err(Error::NoConvergence {
        iterations: MAX_NEWTON,
        residual: norm(r),
    })
}

/// An R⁴ trajectory; `cusp` is set when it stopped at `min |f'| < CUSP_THRESHOLD`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub q: f64,
    pub states: Vec<GrowthState>,
    pub cusp: bool,
}

/// Steps `a0 ← a0(0) + Q t_n` with `a1` held, inverting for `(a, C)` from
/// the previous step.
pub fn evolve(initial: GrowthState, q: f64, dt: f64, steps: usize) -> Result<Trajectory> {
    if !(dt > 0.0) || !q.is_finite() {
        return Err(Error::Parameter(format!(
            "need dt > 0 and finite Q, got dt = {dt}, Q = {q}"
        )));
    }
    if initial.a0 + q * dt * steps as f64 <= 0.0 {
        return Err(Error::Parameter(format!(
            "suction Q·T = {} would exhaust the volume a0 = {}",
            q * dt * steps as f64,
            initial.a0
        )));
    }
    let mut states = vec![initial];
    let mut cusp = initial.cusp;
    let mut prev = initial;
    for n in 1..=steps {
        if cusp {
            break;
        }
        let t = initial.t + n as f64 * dt;
        let target = initial.a0 + q * (n as f64 * dt);
        let params = if q == 0.0 {
            prev.params
        } else {
            invert_parameters(target, initial.a1, prev.params)?
        };
        let (a0, a1) = forward(&params)?;
        let (min_abs_df, _) = boundary_diagnostics(&params)?;
        let state = GrowthState {
            t,
            params,
            a0,
            a1,
            min_abs_df,
            cusp: min_abs_df < CUSP_THRESHOLD,
        };
        cusp = state.cusp;
        states.push(state);
        prev = state;
    }
    Ok(Trajectory { q, states, cusp })
}

fn certified_margin(a: f64, c: f64) -> Result<f64> {
    let p = MapParams::new(a, c)?;
    let (min_abs_df, simple) = boundary_diagnostics(&p)?;
    Ok(if simple {
        min_abs_df / c - DERIVATIVE_FLOOR
    } else {
        -1.0
    })
}

/// Smallest `a ∈ (0.5, 0.99)` at which the boundary stops being certified
/// univalent (`min |f'|/C` at the floor, or a self-intersection), by
/// bisection to width [`CUSP_BRACKET_WIDTH`].
pub fn find_cusp_parameter(c: f64) -> Result<f64> {
    const LO: f64 = 0.5;
    const HI: f64 = 0.99;
    let (mut lo, mut hi) = (LO, HI);
    let (m_lo, m_hi) = (certified_margin(lo, c)?, certified_margin(hi, c)?);
    if m_lo <= 0.0 || m_hi > 0.0 {
        return Err(Error::Bracket(format!(
            "min|f'|/C - {DERIVATIVE_FLOOR:e} is {m_lo:.6e} at a = {LO} and {m_hi:.6e} at a = {HI}; \
             no sign change"
        )));
    }
    while hi - lo > CUSP_BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        if certified_margin(mid, c)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One row of a cusp scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspScanRow {
    pub a: f64,
    pub min_abs_df: f64,
    pub simple: bool,
}

/// `min |f'|` and simplicity over a list of `a` values at fixed `C`.
pub fn cusp_scan(c: f64, a_values: &[f64]) -> Result<Vec<CuspScanRow>> {
    a_values
        .iter()
        .map(|&a| {
            let (min_abs_df, simple) = boundary_diagnostics(&MapParams::new(a, c)?)?;
            Ok(CuspScanRow {
                a,
                min_abs_df,
                simple,
            })
        })
        .collect()
}

/// A point on a cardioid trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PKState {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub m0: f64,
    pub m1: f64,
}

impl PKState {
    pub fn new(t: f64, a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b > 2.0 * a) {
            return Err(Error::Parameter(format!(
                "cardioid needs b > 2a >= 0, got a = {a}, b = {b}"
            )));
        }
        let (m0, m1) = pk_moments(a, b);
        Ok(Self { t, a, b, m0, m1 })
    }

    pub fn gap(&self) -> f64 {
        self.b - 2.0 * self.a
    }
}

/// A cardioid trajectory; `cusp` marks termination at `b = 2a`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PkTrajectory {
    pub q: f64,
    pub states: Vec<PKState>,
    pub cusp: bool,
}

/// `b` on the classical branch `b³ ≥ 2M₁/π` with `b² + 2(M₁/π)²/b⁴ = M₀/π`,
/// or `None` when `M₀` is below the branch minimum.
fn pk_solve_b(m0: f64, m1: f64) -> Option<f64> {
    let k = m1 / PI;
    let target = m0 / PI;
    let phi = |b: f64| b * b + 2.0 * k * k / b.powi(4);
    let b_cusp = (2.0 * k).cbrt();
    if k == 0.0 {
        return (target > 0.0).then(|| target.sqrt());
    }
    if target < phi(b_cusp) {
        return None;
    }
    // φ is increasing on [b_cusp, ∞) and φ(b) ≥ b².
    let (mut lo, mut hi) = (b_cusp, target.sqrt().max(b_cusp));
    while phi(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Evolves the cardioid with `M₁` fixed and `M₀ = M₀(0) + Q t`. Under
/// suction `M₀` reaches its minimum over the family at `b = 2a`; the
/// trajectory then ends at that exact state and time.
pub fn pk_evolve(initial: PKState, q: f64, dt: f64, steps: usize) -> Result<PkTrajectory> {
    if !(dt > 0.0) || !q.is_finite() {
        return Err(Error::Parameter(format!(
            "need dt > 0 and finite Q, got dt = {dt}, Q = {q}"
        )));
    }
    let mut states = vec![initial];
    let m1 = initial.m1;
    let k = m1 / PI;
    let b_cusp = (2.0 * k).cbrt();
    let m0_cusp = PI * (b_cusp * b_cusp + 2.0 * k * k / b_cusp.powi(4));
    for n in 1..=steps {
        let t = initial.t + n as f64 * dt;
        let m0 = initial.m0 + q * (n as f64 * dt);
        match pk_solve_b(m0, m1) {
            Some(b) => {
                let a = if b > 0.0 { k / (b * b) } else { 0.0 };
                let state = PKState { t, a, b, m0, m1 };
                states.push(state);
                if state.gap() < PK_CUSP_GAP {
                    return Ok(PkTrajectory {
                        q,
                        states,
                        cusp: true,
                    });
                }
            }
            None => {
                let t_cusp = initial.t + (m0_cusp - initial.m0) / q;
                states.push(PKState {
                    t: t_cusp,
                    a: b_cusp / 2.0,
                    b: b_cusp,
                    m0: m0_cusp,
                    m1,
                });
                return Ok(PkTrajectory {
                    q,
                    states,
                    cusp: true,
                });
            }
        }
    }
    Ok(PkTrajectory {
        q,
        states,
        cusp: false,
    })
}
