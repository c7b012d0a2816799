mod common;

use std::f64::consts::PI;

use common::{euler_function_series, stieltjes_quadrature};
use germsum_core::borel::{
    borel_transform, continue_on_ray, laplace_sum, p_k_sum, singular_directions, sum_series,
    specialize, ContinuationMethod, LaplaceOptions, OneVarSeries,
};
use germsum_core::harness::{euler_exp_smallness, euler_series, gen_example, ode_one_var_series, remark79_expansions};
use germsum_core::weierstrass::{p_expand, Germ};
use germsum_core::{Error, MonomialOrder, TieBreak, TruncatedSeries};
use rug::Complex;

const PREC: u32 = 128;

fn c(re: f64, im: f64) -> Complex {
    Complex::with_val(PREC, (re, im))
}

fn polar(r: f64, a: f64) -> Complex {
    c(r * a.cos(), r * a.sin())
}

fn parts(z: &Complex) -> (f64, f64) {
    (z.real().to_f64(), z.imag().to_f64())
}

fn dist(z: &Complex, w: (f64, f64)) -> f64 {
    let (a, b) = parts(z);
    (a - w.0).hypot(b - w.1)
}

fn opts() -> LaplaceOptions {
    LaplaceOptions::default()
}

#[test]
fn euler_oracles_agree() {
    for t in [0.02, 0.1, 0.3, 1.0] {
        let a = euler_function_series(t, 512);
        let (b, im) = stieltjes_quadrature((-t, 0.0));
        assert!((a - b).abs() < 1e-13, "t = {t}: {a} vs {b}");
        assert_eq!(im, 0.0);
    }
}

#[test]
fn euler_sum_matches_oracle() {
    let s = euler_series(32, PREC);
    let r = sum_series(&s, 1.0, 0.0, &c(0.1, 0.0), &opts()).unwrap();
    let want = euler_function_series(0.1, 512);
    assert!(dist(&r.value, (want, 0.0)) < 1e-9);
    assert!(r.total_error() < 1e-9);
}

#[test]
fn euler_sum_is_asymptotic_to_the_series() {
    // the Stieltjes remainder bound |f − Σ_{n<N} aₙtⁿ| ≤ N!·tᴺ
    let s = euler_series(32, PREC);
    for t in [0.05, 0.1, 0.2] {
        let r = sum_series(&s, 1.0, 0.0, &c(t, 0.0), &opts()).unwrap();
        let mut fact = 1.0;
        for n in 1..=8usize {
            fact *= n as f64;
            if n < 2 {
                continue;
            }
            let partial = s.partial_sum(&c(t, 0.0), n);
            let rem = dist(&r.value, parts(&partial));
            assert!(rem <= fact * t.powi(n as i32) * (1.0 + 1e-9), "t = {t}, N = {n}: {rem}");
        }
    }
}

#[test]
fn euler_has_one_singular_direction() {
    let b = borel_transform(&euler_series(32, PREC), 1.0).unwrap();
    let rep = singular_directions(&b).unwrap();
    assert_eq!(rep.directions.len(), 1);
    assert!((rep.directions[0].abs() - PI).abs() < 0.05);
}

#[test]
fn sums_on_one_side_of_the_singular_direction_agree() {
    let s = euler_series(32, PREC);
    let t = polar(0.1, 0.3);
    let a = sum_series(&s, 1.0, 0.1, &t, &opts()).unwrap();
    let b = sum_series(&s, 1.0, 0.6, &t, &opts()).unwrap();
    let d = Complex::with_val(64, &a.value - &b.value).abs().real().to_f64();
    assert!(d <= a.total_error() + b.total_error() + 1e-25, "{d}");
    let want = stieltjes_quadrature((-0.1 * 0.3f64.cos(), -0.1 * 0.3f64.sin()));
    assert!(dist(&a.value, want) < 1e-12);
}

#[test]
fn sums_across_the_singular_direction_differ_by_exponentially_small_amounts() {
    let radii = [0.3, 0.2, 0.15, 0.1, 0.07, 0.05, 0.04, 0.03];
    let rep = euler_exp_smallness(&radii, 0.3, PREC).unwrap();
    assert!(rep.bounded(), "{}", rep.to_json());
    for (d, r) in rep.differences.iter().zip(&radii) {
        assert!(*d < 100.0 * (-0.5 / r).exp(), "{d} at {r}");
    }
}

#[test]
fn log_series_sum_matches_closed_form() {
    // Σ m! t^{m+1} at t = −r is −r times the Euler function of r
    let s = ode_one_var_series(64, PREC);
    for r in [0.05, 0.1, 0.25] {
        let res = sum_series(&s, 1.0, PI, &c(-r, 0.0), &opts()).unwrap();
        let want = -r * euler_function_series(r, 512);
        assert!(dist(&res.value, (want, 0.0)) < 1e-10, "r = {r}");
        // derivative of the same closed form: t²F′ = F − t
        let lhs = Complex::with_val(PREC, &res.derivative * &c(r * r, 0.0));
        assert!(dist(&lhs, (want + r, 0.0)) < 1e-10);
    }
}

#[test]
fn log_series_is_singular_only_along_the_positive_axis() {
    let b = borel_transform(&ode_one_var_series(64, PREC), 1.0).unwrap();
    let rep = singular_directions(&b).unwrap();
    assert!(!rep.directions.is_empty());
    for d in &rep.directions {
        assert!(d.abs() < 0.05, "{d}");
    }
    let err = continue_on_ray(&b, 0.0, &[2.0], ContinuationMethod::Rational).unwrap_err();
    assert!(matches!(err, Error::SingularRay { .. }));
    // inside the disc of convergence the ray is still usable
    assert!(continue_on_ray(&b, 0.0, &[0.5], ContinuationMethod::Rational).is_ok());
}

#[test]
fn convergent_series_is_reproduced() {
    // Σ (t/2)ⁿ = 1/(1 − t/2)
    let coeffs = (0..48).map(|n| c(0.5f64.powi(n), 0.0)).collect();
    let s = OneVarSeries::new(coeffs);
    for t in [c(0.3, 0.0), polar(0.4, 1.0)] {
        let direct = s.partial_sum(&t, 48);
        let theta = t.imag().to_f64().atan2(t.real().to_f64());
        let r = sum_series(&s, 1.0, theta, &t, &opts()).unwrap();
        let d = Complex::with_val(64, &r.value - &direct).abs().real().to_f64();
        assert!(d < 1e-14 && d <= r.total_error().max(1e-20) * 1e6, "{d}");
    }
}

#[test]
fn entire_borel_transform_has_no_singular_directions() {
    let coeffs = (0..40).map(|_| c(1.0, 0.0)).collect();
    let b = borel_transform(&OneVarSeries::new(coeffs), 1.0).unwrap();
    assert!(singular_directions(&b).unwrap().directions.is_empty());
}

#[test]
fn order_two_borel_transform() {
    // aₙ = Γ(1 + n/2) gives bₙ = 1
    let coeffs = (0..20)
        .map(|n| {
            let g = rug::Float::with_val(PREC, 1.0 + n as f64 / 2.0).gamma();
            Complex::with_val(PREC, (g, 0))
        })
        .collect();
    let b = borel_transform(&OneVarSeries::new(coeffs), 2.0).unwrap();
    for x in b.coeffs() {
        assert!(dist(x, (1.0, 0.0)) < 1e-30);
    }
}

#[test]
fn reexpansion_reproduces_the_geometric_continuation() {
    let b = borel_transform(&euler_series(200, PREC), 1.0).unwrap();
    let rc = continue_on_ray(&b, 0.0, &[0.5, 1.2], ContinuationMethod::Reexpansion).unwrap();
    for s in &rc.samples {
        let want = Complex::with_val(PREC, &s.tau + 1u32).recip();
        let d = Complex::with_val(64, &s.value - &want).abs().real().to_f64();
        assert!(d < 1e-6 && d <= s.error.max(1e-12) * 10.0, "{d} vs {}", s.error);
    }
}

#[test]
fn laplace_of_a_rational_continuation_on_a_tilted_ray() {
    let b = borel_transform(&euler_series(32, PREC), 1.0).unwrap();
    let rc = continue_on_ray(&b, -0.4, &[], ContinuationMethod::Rational).unwrap();
    let t = polar(0.05, -0.2);
    let r = laplace_sum(&rc, &t, &opts()).unwrap();
    let want = stieltjes_quadrature((-0.05 * 0.2f64.cos(), 0.05 * 0.2f64.sin()));
    assert!(dist(&r.value, want) < 1e-12);
    assert!(matches!(laplace_sum(&rc, &polar(0.05, 1.5), &opts()), Err(Error::IncompatibleDirection { .. })));
}

#[test]
fn expansion_with_only_a_constant_coefficient() {
    let germ = Germ::new(TruncatedSeries::poly(2, &[(&[1, 1], 1)]), MonomialOrder::graded(2, TieBreak::Lex)).unwrap();
    let f = TruncatedSeries::poly(2, &[(&[0, 0], 2), (&[3, 0], 1), (&[0, 1], -1)]);
    let exp = p_expand(&f, &germ, 4).unwrap();
    let x0 = [c(0.2, 0.1), c(-0.3, 0.05)];
    let t = Complex::with_val(PREC, &x0[0] * &x0[1]);
    let theta = t.imag().to_f64().atan2(t.real().to_f64());
    let r = p_k_sum(&exp, &x0, 1.0, theta, &opts()).unwrap();
    let direct = f.eval(&x0, PREC).unwrap();
    assert_eq!(r.value, direct);
    assert_eq!(r.total_error(), 0.0);
}

#[test]
fn blown_up_example_singular_direction() {
    let r = remark79_expansions().unwrap();
    let phi: f64 = 0.3;
    let singular = -2.0 * phi;
    let x2 = polar(0.5, phi);
    let x1 = polar(0.2, singular + PI / 6.0 - phi);
    let x0 = [x1, x2.clone()];
    let err = p_k_sum(&r.direct, &x0, 1.0, singular, &opts()).unwrap_err();
    assert!(matches!(err, Error::SingularRay { .. }), "{err}");

    let a = p_k_sum(&r.direct, &x0, 1.0, singular + PI / 4.0, &opts()).unwrap();
    let b = p_k_sum(&r.direct, &x0, 1.0, singular + PI / 3.0, &opts()).unwrap();
    // Σ n! zⁿ with z = x₂²·t
    let z = Complex::with_val(PREC, &x2 * &x2) * &a.t;
    let want = stieltjes_quadrature(parts(&z));
    assert!(dist(&a.value, want) < 1e-12);
    assert!(dist(&b.value, want) < 1e-12);
    assert!(a.total_error() < 1e-12);
}

#[test]
fn point_outside_the_sector() {
    let r = remark79_expansions().unwrap();
    let x0 = [c(0.2, 0.0), c(0.5, 0.0)];
    let err = p_k_sum(&r.direct, &x0, 1.0, PI / 2.0 + 0.1, &opts()).unwrap_err();
    assert!(matches!(err, Error::PointOutsideSector { .. }));
}

#[test]
fn truncated_expansion_with_few_coefficients() {
    let ex = gen_example("remark79", 20).unwrap();
    let exp = p_expand(&ex.series, &ex.germ, 5).unwrap();
    let x0 = [c(0.2, 0.0), c(0.5, 0.0)];
    let err = p_k_sum(&exp, &x0, 1.0, 0.3, &opts()).unwrap_err();
    assert!(matches!(err, Error::TooFewCoefficients { .. }));
}

#[test]
fn unknown_coefficients_are_not_read_as_zeros() {
    // trunc 40 leaves g_n unknown from n = 20 on
    let ex = gen_example("remark79", 40).unwrap();
    let exp = p_expand(&ex.series, &ex.germ, 24).unwrap();
    let (s, _) = specialize(&exp, &[c(0.2, 0.0), c(0.5, 0.0)], PREC).unwrap();
    assert_eq!(s.len(), 20);
    let rep = singular_directions(&borel_transform(&s, 1.0).unwrap()).unwrap();
    assert_eq!(rep.directions.len(), 1);
    assert!(rep.directions[0].abs() < 0.05);
}
