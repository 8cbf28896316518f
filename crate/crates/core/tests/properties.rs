use num_complex::Complex64;
use proptest::prelude::*;
use qdom::classical::{oval_map, oval_quartic, pk_moments, sphere_schwarz_potential};
use qdom::conformal::{eval_f, eval_f_contour, eval_fprime, eval_g, eval_h, laurent_coeffs_auto};
use qdom::continuation::{eval_F, eval_F_circle, xi_form, CutGeometry};
use qdom::elliptic::{carlson_pi, ellip_e, ellip_k};
use qdom::growth::{evolve, pk_evolve, GrowthState, PKState};
use qdom::moments::quadrature_of_params;
use qdom::MapParams;
use std::f64::consts::PI;

fn polar(r: f64, t: f64) -> Complex64 {
    Complex64::from_polar(r, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_is_antisymmetric_under_inversion(a in 0.0..0.95f64, c in 0.2..3.0f64, t in 0.0..2.0 * PI) {
        let p = MapParams::new(a, c).unwrap();
        let z = polar(1.0, t);
        prop_assume!((z + a).norm() > 1e-3 && (z + 1.0 / a.max(1e-9)).norm() > 1e-3);
        let d = eval_h(1.0 / z, &p).unwrap() + eval_h(z, &p).unwrap();
        prop_assert!(d.norm() < 1e-12 * c.max(1.0), "{d}");
    }

    #[test]
    fn g_is_h_squared(a in 0.0..0.95f64, r in 0.3..2.0f64, t in 0.0..2.0 * PI) {
        let p = MapParams::new(a, 1.0).unwrap();
        let z = polar(r, t);
        prop_assume!((z + a).norm() > 1e-2 && (z * a + 1.0).norm() > 1e-2);
        let h = eval_h(z, &p).unwrap();
        let g = eval_g(z, &p).unwrap();
        prop_assert!((g - h * h).norm() <= 1e-12 * g.norm().max(1.0));
    }

    #[test]
    fn f_is_real_on_real_axis_and_reflects(a in 0.0..0.9f64, r in 0.0..0.9f64, t in 0.0..2.0 * PI) {
        let p = MapParams::new(a, 1.0).unwrap();
        let grid = laurent_coeffs_auto(&p).unwrap();
        let w = polar(r, t);
        let d = eval_f(w.conj(), &grid).unwrap() - eval_f(w, &grid).unwrap().conj();
        prop_assert!(d.norm() < 1e-12);
    }

    #[test]
    fn fprime_matches_central_difference(a in 0.0..0.8f64, r in 0.0..0.8f64, t in 0.0..2.0 * PI) {
        let p = MapParams::new(a, 1.0).unwrap();
        let grid = laurent_coeffs_auto(&p).unwrap();
        let w = polar(r, t);
        let h = 1e-5;
        let fd = (eval_f(w + h, &grid).unwrap() - eval_f(w - h, &grid).unwrap()) / (2.0 * h);
        let exact = eval_fprime(w, &grid).unwrap();
        prop_assert!((fd - exact).norm() < 1e-7 * exact.norm());
    }

    #[test]
    fn reflection_of_cauchy_integral(a in 0.05..0.9f64, x in -4.0..4.0f64, y in 0.01..3.0f64) {
        let w = Complex64::new(x, y);
        let d = eval_F(w.conj(), a).unwrap() - eval_F(w, a).unwrap().conj();
        prop_assert!(d.norm() < 1e-14);
    }

    #[test]
    fn three_forms_of_cauchy_integral_agree(a in 0.05..0.9f64, x in -6.0..6.0f64, y in -3.0..3.0f64) {
        let w = Complex64::new(x, y);
        let geom = CutGeometry::new(a).unwrap();
        prop_assume!(geom.distance_to_cut(w) > 0.05 && w.norm() > 0.05);
        let s = eval_F(w, a).unwrap();
        let xi = xi_form(w, a).unwrap();
        prop_assert!((s - xi).norm() < 1e-8, "segment {s} vs xi {xi}");
        if w.norm() < 0.9 {
            let circle = eval_F_circle(w, a).unwrap();
            prop_assert!((s - circle).norm() < 1e-8, "segment {s} vs circle {circle}");
        }
    }

    #[test]
    fn pi_with_zero_parameter(n in -5.0..0.99f64) {
        let want = PI / (2.0 * (1.0 - n).sqrt());
        prop_assert!((carlson_pi(n, 0.0).unwrap() - want).abs() < 1e-12 * want);
    }

    #[test]
    fn legendre_relation(m in 0.01..0.99f64) {
        let (k, e) = (ellip_k(m).unwrap(), ellip_e(m).unwrap());
        let (k1, e1) = (ellip_k(1.0 - m).unwrap(), ellip_e(1.0 - m).unwrap());
        prop_assert!((e * k1 + e1 * k - k * k1 - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn oval_points_on_quartic(a in 0.3..3.0f64, t in 0.0..2.0 * PI) {
        let z = oval_map(polar(1.0, t), a);
        prop_assert!(oval_quartic(z, a).abs() < 1e-10);
    }

    #[test]
    fn sphere_potential_cauchy_data(r in 0.2..3.0f64, n in 2u32..7) {
        let v = sphere_schwarz_potential(r, r, n).unwrap();
        prop_assert!((v - 0.5 * r * r).abs() < 1e-12 * r * r);
        let h = 1e-5 * r;
        let d = (sphere_schwarz_potential(r + h, r, n).unwrap()
            - sphere_schwarz_potential(r - h, r, n).unwrap()) / (2.0 * h);
        prop_assert!((d - r).abs() < 1e-6 * r.max(1.0));
    }

    #[test]
    fn cardioid_growth_moments(a in 0.05..0.3f64, q in -2.0..2.0f64) {
        let init = PKState::new(0.0, a, 1.0).unwrap();
        let tr = pk_evolve(init, q, 0.01, 30).unwrap();
        for s in &tr.states {
            let (m0, m1) = pk_moments(s.a, s.b);
            prop_assert!((m1 - init.m1).abs() < 1e-8 * init.m1);
            prop_assert!((m0 - (init.m0 + q * s.t)).abs() < 1e-8 * init.m0);
            prop_assert!(s.gap() > -1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn series_and_contour_agree(a in 0.1..0.8f64, r in 0.0..0.9f64, t in 0.0..2.0 * PI) {
        let p = MapParams::new(a, 1.0).unwrap();
        let grid = laurent_coeffs_auto(&p).unwrap();
        let w = polar(r, t);
        let d = eval_f(w, &grid).unwrap() - eval_f_contour(w, &p).unwrap();
        prop_assert!(d.norm() < 1e-10, "{d}");
    }

    #[test]
    fn dilation_scales_moments(a in 0.05..0.6f64, lam in 0.5..2.0f64) {
        let q1 = quadrature_of_params(&MapParams::new(a, 1.0).unwrap()).unwrap();
        let ql = quadrature_of_params(&MapParams::new(a, lam).unwrap()).unwrap();
        prop_assert!((ql.a0 - lam.powi(4) * q1.a0).abs() < 1e-10 * ql.a0);
        prop_assert!((ql.a1 - lam.powi(5) * q1.a1).abs() < 1e-10 * ql.a1.abs().max(ql.a0));
    }
}

#[test]
fn growth_is_reversible() {
    let p = MapParams::new(0.3, 1.0).unwrap();
    let start = GrowthState::at(0.0, p).unwrap();
    let fwd = evolve(start, 0.5, 0.05, 10).unwrap();
    let mid = *fwd.states.last().unwrap();
    let back = evolve(mid, -0.5, 0.05, 10).unwrap();
    let end = back.states.last().unwrap();
    assert!((end.params.a - p.a).abs() < 1e-6, "{:?}", end.params);
    assert!((end.params.c - p.c).abs() < 1e-6, "{:?}", end.params);
}

#[test]
fn growth_conserves_a1_at_every_tenth_step() {
    let p = MapParams::new(0.3, 1.0).unwrap();
    let start = GrowthState::at(0.0, p).unwrap();
    let tr = evolve(start, 1.0, 0.02, 30).unwrap();
    for s in tr.states.iter().step_by(10) {
        let q = quadrature_of_params(&s.params).unwrap();
        assert!((q.a1 - start.a1).abs() < 1e-6 * start.a0);
        assert!((q.a0 - start.a0 - 1.0 * s.t).abs() < 1e-8 * start.a0);
    }
}
