#![allow(dead_code)]

use std::collections::BTreeMap;

use germsum_core::weierstrass::Germ;
use germsum_core::{Exponent, MonomialOrder, Scalar, TieBreak, TruncatedSeries, EXACT};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rug::float::Constant;
use rug::Float;

pub fn rational(rng: &mut ChaCha8Rng) -> Scalar {
    let mut num = rng.gen_range(-9i64..=9);
    if num == 0 {
        num = 1;
    }
    Scalar::from_ratio(num, rng.gen_range(1i64..=5))
}

pub fn random_exponent(rng: &mut ChaCha8Rng, dim: usize, max_deg: i64) -> Exponent {
    let deg = rng.gen_range(0..=max_deg.max(0));
    let mut e = vec![0u32; dim];
    for _ in 0..deg {
        e[rng.gen_range(0..dim)] += 1;
    }
    Exponent::new(e)
}

/// Random exact series with up to `max_terms` terms of degree ≤ `max_deg`.
pub fn random_series(rng: &mut ChaCha8Rng, dim: usize, trunc: i64, max_deg: i64, max_terms: usize) -> TruncatedSeries {
    let n = rng.gen_range(0..=max_terms);
    let terms: Vec<(Exponent, Scalar)> = (0..n)
        .map(|_| (random_exponent(rng, dim, max_deg), rational(rng)))
        .collect();
    TruncatedSeries::from_terms(dim, trunc, terms).unwrap()
}

/// Random polynomial without constant term whose lowest-degree part is nonzero.
pub fn random_germ_series(rng: &mut ChaCha8Rng, dim: usize, max_deg: i64) -> TruncatedSeries {
    loop {
        let s = random_series(rng, dim, EXACT, max_deg, 5);
        let s = s.map_terms(|e, c| (e.degree() > 0).then(|| (e.clone(), c.clone())));
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn embed(p: &TruncatedSeries, dim: usize) -> TruncatedSeries {
    let terms = p.terms().iter().map(|(e, c)| {
        let mut v = e.as_slice().to_vec();
        v.resize(dim, 0);
        (Exponent::new(v), c.clone())
    });
    TruncatedSeries::from_terms(dim, p.trunc(), terms).unwrap()
}

/// The germs named in the division benchmark, in two variables.
pub fn named_germs() -> Vec<TruncatedSeries> {
    vec![
        TruncatedSeries::poly(2, &[(&[1, 1], 1)]),
        TruncatedSeries::poly(2, &[(&[2, 1], 1)]),
        TruncatedSeries::poly(2, &[(&[0, 2], 1), (&[3, 0], -1)]),
        TruncatedSeries::poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]),
    ]
}

pub fn random_order(rng: &mut ChaCha8Rng, dim: usize) -> MonomialOrder {
    let tb = if rng.gen_bool(0.5) {
        TieBreak::Lex
    } else {
        TieBreak::InvLex
    };
    if rng.gen_bool(0.5) {
        MonomialOrder::graded(dim, tb)
    } else {
        let w = (0..dim)
            .map(|_| rug::Rational::from((rng.gen_range(1u32..=4), rng.gen_range(1u32..=3))))
            .collect();
        MonomialOrder::new(w, tb).unwrap()
    }
}

/// A random germ from the named set (embedded if `dim = 3`) or a random polynomial.
pub fn random_germ(rng: &mut ChaCha8Rng, dim: usize) -> Germ {
    loop {
        let p = if rng.gen_bool(0.6) {
            let named = named_germs();
            embed(&named[rng.gen_range(0..named.len())], dim)
        } else {
            random_germ_series(rng, dim, 3)
        };
        if let Ok(g) = Germ::new(p, random_order(rng, dim)) {
            return g;
        }
    }
}

pub fn monomials2(max_deg: i64) -> Vec<Exponent> {
    let mut out = Vec::new();
    for d in 0..=max_deg as u32 {
        for a in 0..=d {
            out.push(Exponent::new(vec![a, d - a]));
        }
    }
    out
}

/// Solves `Σ gₙ Pⁿ ≡ f` through degree `trunc` for Δ-supported `gₙ` by
/// exact Gaussian elimination. Only valid for graded orders, where every
/// unknown `x^γ Pⁿ` with `deg γ + n·deg L ≤ trunc` has a visible, distinct
/// leading term.
pub fn p_expand_oracle(f: &TruncatedSeries, germ: &Germ, trunc: i64) -> Vec<BTreeMap<Exponent, Scalar>> {
    assert_eq!(f.dim(), 2);
    let lead = germ.lead_exp().clone();
    let deg_l = lead.degree();
    let rows = monomials2(trunc);
    let row_of: BTreeMap<Exponent, usize> = rows.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let p = germ.series().truncate(trunc);

    let mut unknowns: Vec<(usize, Exponent)> = Vec::new();
    let mut columns: Vec<Vec<Scalar>> = Vec::new();
    let mut power = TruncatedSeries::constant(2, Scalar::one());
    let mut n = 0usize;
    while n as i64 * deg_l <= trunc {
        for g in monomials2(trunc - n as i64 * deg_l) {
            if g.dominates(&lead) {
                continue;
            }
            let col = power.mul_monomial(&g, &Scalar::one()).truncate(trunc);
            let mut v = vec![Scalar::zero(); rows.len()];
            for (e, c) in col.terms() {
                v[row_of[e]] = c.clone();
            }
            unknowns.push((n, g));
            columns.push(v);
        }
        power = power.mul(&p).unwrap().truncate(trunc);
        n += 1;
    }

    // augmented matrix, row-major
    let ncol = columns.len();
    let mut m: Vec<Vec<Scalar>> = (0..rows.len())
        .map(|i| {
            let mut r: Vec<Scalar> = columns.iter().map(|c| c[i].clone()).collect();
            r.push(f.coeff(&rows[i]).cloned().unwrap_or_else(Scalar::zero));
            r
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..ncol {
        let Some(r) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            panic!("oracle system is rank deficient at column {col}");
        };
        m.swap(pivot_row, r);
        let inv = m[pivot_row][col].inv().unwrap();
        for j in col..=ncol {
            m[pivot_row][j] = &m[pivot_row][j] * &inv;
        }
        for i in 0..m.len() {
            if i != pivot_row && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..=ncol {
                    let sub = &factor * &m[pivot_row][j];
                    m[i][j] = &m[i][j] - &sub;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    for row in m.iter().skip(pivot_row) {
        assert!(row[ncol].is_zero(), "oracle system is inconsistent");
    }

    let mut gs: Vec<BTreeMap<Exponent, Scalar>> = vec![BTreeMap::new(); n];
    for (col, (k, g)) in unknowns.into_iter().enumerate() {
        let v = m[pivots[col]][ncol].clone();
        if !v.is_zero() {
            gs[k].insert(g, v);
        }
    }
    gs
}

/// `Σ (−1)ⁿ n! tⁿ` summed along the positive axis, `t > 0`, as
/// `(1/t) e^{1/t} E₁(1/t)` with `E₁` from its convergent series.
pub fn euler_function_series(t: f64, prec: u32) -> f64 {
    let x = Float::with_val(prec, 1) / Float::with_val(prec, t);
    let gamma = Float::with_val(prec, Constant::Euler);
    let mut sum = Float::new(prec);
    let mut term = Float::with_val(prec, 1);
    for k in 1..2000u32 {
        term *= -x.clone();
        term /= k;
        let add = Float::with_val(prec, &term / k);
        sum += &add;
        if add.clone().abs() < Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 20)) {
            break;
        }
    }
    let e1 = -gamma - x.clone().ln() - sum;
    let f = e1 * x.clone().exp() * &x;
    f.to_f64()
}

/// `∫₀^∞ e^{−u} / (1 − z·u) du` for `z` off the positive axis, by
/// double-exponential quadrature in `f64`. Equals the sum of `Σ n! zⁿ` along
/// the ray `arg τ = arg z`; the Euler function is `z = −t`.
pub fn stieltjes_quadrature(z: (f64, f64)) -> (f64, f64) {
    let h: f64 = 1.0 / 64.0;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let (mut re, mut im) = (0.0, 0.0);
    let mut k: f64 = -6.0 / h;
    while k <= 6.0 / h {
        let s = k * h;
        let u = (half_pi * s.sinh()).exp();
        let du = half_pi * s.cosh() * u;
        let w = (1.0 - z.0 * u, -z.1 * u);
        let den = w.0 * w.0 + w.1 * w.1;
        let scale = (-u).exp() * du / den;
        if scale.is_finite() {
            re += w.0 * scale;
            im -= w.1 * scale;
        }
        k += 1.0;
    }
    (re * h, im * h)
}
