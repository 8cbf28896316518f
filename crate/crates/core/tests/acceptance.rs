//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every criterion is reported even
//! when an earlier one fails. Exit status is non-zero if any fails.

use num_complex::Complex64;
use qdom::classical::{
    karp_quadrature_4d, limacon_quadrature_2d, oval_quartic, oval_schwarz,
    sphere_schwarz_potential, ClassicalShape, Limacon,
};
use qdom::conformal::{decomposition_constants, eval_f, laurent_coeffs_auto, BoundaryCurve};
use qdom::continuation::{
    eval_F, jump, jump_exact, ladder_word, monodromy, xi_form, Loop, JUMP_EPS,
};
use qdom::elliptic::{carlson_pi, ellip_k_agm};
use qdom::growth::{evolve, find_cusp_parameter, forward, pk_evolve, GrowthState, PKState};
use qdom::moments::{
    complex_moment, extract_quadrature_direct_order, extract_quadrature_laurent,
    harmonic_moments_4d, moment_samples, quadrature_of_params,
};
use qdom::{MapParams, PaperMap};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

fn within(label: &str, err: f64, tol: f64) -> Result<(), String> {
    if err < tol {
        Ok(())
    } else {
        Err(format!("{label} = {err:.3e} exceeds {tol:e}"))
    }
}

fn budget(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    if elapsed.as_secs_f64() < limit_s {
        Ok(())
    } else {
        Err(format!(
            "took {:.2} s, limit {limit_s} s",
            elapsed.as_secs_f64()
        ))
    }
}

fn ball_regression() -> Outcome {
    let start = Instant::now();
    let p = MapParams::new(0.0, 1.0).map_err(|e| e.to_string())?;
    let direct = quadrature_of_params(&p).map_err(|e| e.to_string())?;
    let laurent = extract_quadrature_laurent(&PaperMap::new(&p).map_err(|e| e.to_string())?, 1, 8)
        .map_err(|e| e.to_string())?;
    let want = PI * PI / 2.0;
    let mut worst: f64 = 0.0;
    for (name, q) in [("direct", &direct), ("laurent", &laurent)] {
        let e0 = rel(q.a0, want);
        let e1 = q.a1.abs() / want;
        within(&format!("{name} a0 rel err"), e0, 1e-8)?;
        within(&format!("{name} |a1|/a0"), e1, 1e-8)?;
        worst = worst.max(e0).max(e1);
    }
    budget(start.elapsed(), 1.0)?;
    Ok(format!("max rel err {worst:.1e}"))
}

fn karp_limacon() -> Outcome {
    let start = Instant::now();
    let sigma = 0.25;
    let curve = BoundaryCurve::from_map(&Limacon { sigma }, 2048);
    let m = harmonic_moments_4d(&curve, 8).map_err(|e| e.to_string())?;
    let (a0, a1, a2) = karp_quadrature_4d(sigma).map_err(|e| e.to_string())?;
    let e = [rel(m[0], a0), rel(m[1], 2.0 * a1), rel(m[2], 6.0 * a2)];
    for (k, err) in e.iter().enumerate() {
        within(&format!("M{} rel err", k + 1), *err, 1e-8)?;
    }
    let q = extract_quadrature_direct_order(&curve, 2, 8).map_err(|e| e.to_string())?;
    let worst_res = q.max_residual();
    within("M4..M8 residual", worst_res, 1e-8)?;
    budget(start.elapsed(), 1.0)?;
    Ok(format!(
        "max rel err {:.1e}, max residual {worst_res:.1e}",
        e.iter().cloned().fold(0.0, f64::max)
    ))
}

fn planar_limacon() -> Outcome {
    let sigma = 0.25;
    let curve = BoundaryCurve::from_map(&Limacon { sigma }, 2048);
    let (q0, q1) = limacon_quadrature_2d(sigma).map_err(|e| e.to_string())?;
    within(
        "q0 vs π(1+2σ²)",
        rel(q0, PI * (1.0 + 2.0 * sigma * sigma)),
        1e-15,
    )?;
    within("q1 vs πσ", rel(q1, PI * sigma), 1e-15)?;
    // u = ζᵏ: ∫ u dA = q0 u(0) + q1 u'(0).
    let mut worst: f64 = 0.0;
    for k in 0..=4 {
        let got = complex_moment(&curve, k, 0).map_err(|e| e.to_string())?;
        let want = match k {
            0 => q0,
            1 => q1,
            _ => 0.0,
        };
        let err = (got - want).norm() / q0;
        within(&format!("∫ζ^{k} dA err"), err, 1e-10)?;
        worst = worst.max(err);
    }
    Ok(format!("max err {worst:.1e} over ζ^0..ζ^4"))
}

fn family_witness() -> Outcome {
    let start = Instant::now();
    let mut worst_res: f64 = 0.0;
    let mut worst_dual: f64 = 0.0;
    for a in [0.1, 0.3, 0.5] {
        let p = MapParams::new(a, 1.0).map_err(|e| e.to_string())?;
        let map = PaperMap::new(&p).map_err(|e| e.to_string())?;
        let curve = map.boundary(moment_samples(&p));
        if !curve.simple {
            return Err(format!("a = {a}: boundary not simple"));
        }
        let m = harmonic_moments_4d(&curve, 8).map_err(|e| e.to_string())?;
        let direct = quadrature_of_params(&p).map_err(|e| e.to_string())?;
        if !(direct.a0 > 0.0 && direct.a1 > 0.0) {
            return Err(format!("a = {a}: a0 = {}, a1 = {}", direct.a0, direct.a1));
        }
        for (k, mk) in m.iter().enumerate().skip(2) {
            let r = mk.abs() / direct.a0;
            within(&format!("a = {a}: |M{}|/a0", k + 1), r, 1e-6)?;
            worst_res = worst_res.max(r);
        }
        let laurent = extract_quadrature_laurent(&map, 1, 8).map_err(|e| e.to_string())?;
        let d = rel(laurent.a0, direct.a0).max(rel(laurent.a1, direct.a1));
        within(&format!("a = {a}: dual-path rel diff"), d, 1e-6)?;
        worst_dual = worst_dual.max(d);
    }
    budget(start.elapsed(), 10.0)?;
    Ok(format!(
        "max |M3..M8|/a0 {worst_res:.1e}, dual-path {worst_dual:.1e}"
    ))
}

fn decomposition_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [0.1, 0.3, 0.5] {
        let p = MapParams::new(a, 1.0).map_err(|e| e.to_string())?;
        let grid = laurent_coeffs_auto(&p).map_err(|e| e.to_string())?;
        let (a0, a1) = decomposition_constants(&p).map_err(|e| e.to_string())?;
        for i in 0..5 {
            for j in 0..5 {
                let w = c(-0.9 + 0.45 * i as f64, -0.9 + 0.45 * j as f64);
                let w = if w.norm() > 0.9 {
                    w * (0.9 / w.norm())
                } else {
                    w
                };
                let f = eval_f(w, &grid).map_err(|e| e.to_string())?;
                let big_f = eval_F(w, a).map_err(|e| e.to_string())?;
                let err = (f - a0 - a1 * w - p.c * (w * w - 1.0) * big_f).norm();
                within(&format!("a = {a}, w = {w}"), err, 1e-8)?;
                worst = worst.max(err);
            }
        }
    }
    Ok(format!("max residual {worst:.1e}"))
}

fn jump_relation() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [0.3, 0.5, 0.8] {
        for s in [1.5, 2.0, 3.0, 5.0, 10.0] {
            let x = -s / a;
            let got = jump(x, a, &JUMP_EPS).map_err(|e| e.to_string())?;
            let want = jump_exact(x, a).map_err(|e| e.to_string())?;
            let err = (got - want).norm();
            within(&format!("a = {a}, x = {x}"), err, 1e-6)?;
            worst = worst.max(err);
        }
    }
    Ok(format!("max |jump + 2√G| {worst:.1e}"))
}

fn monodromy_ladder() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [0.3, 0.5] {
        for k in 0..=3 {
            let r = monodromy(a, &ladder_word(k)).map_err(|e| e.to_string())?;
            let want = 2.0 * (k as f64 + 1.0) * r.sqrt_g;
            let err = (r.value - r.f0 - want).norm();
            within(&format!("a = {a}, k = {k}"), err, 1e-6)?;
            worst = worst.max(err);
        }
        let r = monodromy(a, &[Loop::G1, Loop::G1]).map_err(|e| e.to_string())?;
        let err = (r.value - r.f0).norm();
        within(&format!("a = {a}, γ₁γ₁ offset"), err, 1e-6)?;
        if r.sheets_visited.last() != r.sheets_visited.first() {
            return Err(format!(
                "a = {a}: γ₁γ₁ ends on {:?}",
                r.sheets_visited.last()
            ));
        }
    }
    Ok(format!("max offset err {worst:.1e}; γ₁γ₁ is the identity"))
}

fn cusp_parameter() -> Outcome {
    let start = Instant::now();
    let mut found = Vec::new();
    for cc in [0.5, 1.0, 2.0] {
        let a_star = find_cusp_parameter(cc).map_err(|e| format!("C = {cc}: {e}"))?;
        within(
            &format!("C = {cc}: |a* - 0.82217|"),
            (a_star - 0.82217).abs(),
            1e-3,
        )?;
        found.push(a_star);
    }
    let spread = found.iter().cloned().fold(f64::MIN, f64::max)
        - found.iter().cloned().fold(f64::MAX, f64::min);
    within("spread over C", spread, 1e-6)?;
    budget(start.elapsed(), 30.0)?;
    Ok(format!("a* = {:.6}", found[1]))
}

fn growth_conservation() -> Outcome {
    let p = MapParams::new(0.5, 1.0).map_err(|e| e.to_string())?;
    let init = GrowthState::at(0.0, p).map_err(|e| e.to_string())?;
    let q = -0.25;
    let tr = evolve(init, q, 0.025, 40).map_err(|e| e.to_string())?;
    if tr.states.len() != 41 || tr.cusp {
        return Err(format!(
            "suction run stopped after {} states (cusp = {})",
            tr.states.len(),
            tr.cusp
        ));
    }
    let (mut e1, mut e0): (f64, f64) = (0.0, 0.0);
    for s in &tr.states {
        let (a0, a1) = forward(&s.params).map_err(|e| e.to_string())?;
        e1 = e1.max(rel(a1, init.a1));
        e0 = e0.max((a0 - (init.a0 + q * s.t)).abs() / init.a0);
    }
    within("a1 drift", e1, 1e-6)?;
    within("a0 deviation from affine", e0, 1e-8)?;

    let pk0 = PKState::new(0.0, 0.2, 1.0).map_err(|e| e.to_string())?;
    let pk = pk_evolve(pk0, -1.0, 0.025, 40).map_err(|e| e.to_string())?;
    let m1_err = pk
        .states
        .iter()
        .map(|s| {
            let (_, m1) = qdom::classical::pk_moments(s.a, s.b);
            rel(m1, pk0.m1)
        })
        .fold(0.0, f64::max);
    within("cardioid M1 drift", m1_err, 1e-8)?;
    let last = pk.states.last().expect("non-empty trajectory");
    if !pk.cusp {
        return Err("cardioid trajectory did not reach b = 2a".into());
    }
    within("terminal |b - 2a|/b", last.gap().abs() / last.b, 1e-8)?;
    Ok(format!(
        "a1 drift {e1:.1e}, a0 affine {e0:.1e}, M1 drift {m1_err:.1e}, cusp at t = {:.6}",
        last.t
    ))
}

fn neumann_oval() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [0.5, 1.0, 2.0] {
        let curve = ClassicalShape::NeumannOval { a }
            .boundary(1024)
            .map_err(|e| e.to_string())?;
        for z in &curve.zeta {
            let q = oval_quartic(*z, a).abs();
            let s = (oval_schwarz(*z, a).map_err(|e| e.to_string())? - z.conj()).norm();
            within(&format!("a = {a}: quartic residual"), q, 1e-10)?;
            within(&format!("a = {a}: |S(ζ) - ζ̄|"), s, 1e-10)?;
            worst = worst.max(q).max(s);
        }
    }
    Ok(format!("max residual {worst:.1e}"))
}

fn elliptic_cross_checks() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in [-0.5, 0.0, 0.1, 0.5, 0.9, 0.99] {
        let e = rel(
            carlson_pi(0.0, m).map_err(|e| e.to_string())?,
            ellip_k_agm(m).map_err(|e| e.to_string())?,
        );
        within(&format!("Π(0, {m}) vs K"), e, 1e-12)?;
        worst = worst.max(e);
    }
    for n in [-2.0_f64, -0.5, 0.0, 0.3, 0.7, 0.95] {
        let want = PI / (2.0 * (1.0 - n).sqrt());
        let e = rel(carlson_pi(n, 0.0).map_err(|e| e.to_string())?, want);
        within(&format!("Π({n}, 0)"), e, 1e-12)?;
        worst = worst.max(e);
    }
    let points = [
        (0.3, c(0.5, 0.0)),
        (0.3, c(-0.7, 0.45)),
        (0.3, c(-2.5, 0.0)),
        (0.3, c(50.0, 0.0)),
        (0.5, c(0.0, 0.8)),
        (0.5, c(-0.25, -0.1)),
        (0.5, c(2.0, 3.0)),
        (0.8, c(0.9, 0.0)),
        (0.8, c(-3.0, 1.0)),
        (0.8, c(-0.5, 0.0)),
    ];
    let mut worst_xi: f64 = 0.0;
    for (a, w) in points {
        let e = (xi_form(w, a).map_err(|e| e.to_string())?
            - eval_F(w, a).map_err(|e| e.to_string())?)
        .norm();
        within(&format!("a = {a}, w = {w}: xi_form - F"), e, 1e-8)?;
        worst_xi = worst_xi.max(e);
    }
    Ok(format!(
        "Π max rel err {worst:.1e}, xi_form max err {worst_xi:.1e}"
    ))
}

fn sphere_potential() -> Outcome {
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    let directions: [[f64; 4]; 4] = [
        [1.0, 0.0, 0.0, 0.0],
        [0.6, -0.8, 0.0, 0.0],
        [0.5, 0.5, 0.5, -0.5],
        [-0.48, 0.6, 0.64, 0.0],
    ];
    for n in [2usize, 3, 4] {
        for r in [0.5, 1.0, 2.0] {
            for dir in &directions {
                let norm: f64 = dir[..n].iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm == 0.0 {
                    continue;
                }
                let x: Vec<f64> = dir[..n].iter().map(|v| r * v / norm).collect();
                let pot = |y: &[f64]| {
                    let yn = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                    sphere_schwarz_potential(yn, r, n as u32).map_err(|e| e.to_string())
                };
                let value_err = (pot(&x)? - 0.5 * r * r).abs();
                within(&format!("n = {n}, r = {r}: value"), value_err, 1e-12)?;
                for i in 0..n {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[i] += h;
                    xm[i] -= h;
                    let d = (pot(&xp)? - pot(&xm)?) / (2.0 * h);
                    let err = (d - x[i]).abs();
                    within(&format!("n = {n}, r = {r}: ∂{i}"), err, 1e-6)?;
                    worst = worst.max(err);
                }
            }
        }
    }
    Ok(format!("max gradient err {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("ball regression", ball_regression),
        ("Karp limaçon in R⁴", karp_limacon),
        ("planar limaçon moments", planar_limacon),
        ("map family is a quadrature domain", family_witness),
        ("decomposition identity", decomposition_identity),
        ("jump relation", jump_relation),
        ("monodromy ladder", monodromy_ladder),
        ("cusp parameter", cusp_parameter),
        ("growth conservation", growth_conservation),
        ("Neumann oval", neumann_oval),
        ("elliptic cross-checks", elliptic_cross_checks),
        ("sphere Schwarz potential", sphere_potential),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2} s)", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {reason} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
