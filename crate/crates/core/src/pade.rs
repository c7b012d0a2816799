//! Robust Padé approximants with rank detection and Froissart-doublet removal.
//!
//! The denominator is a null vector of the Toeplitz system for the requested
//! type `[m/n]`; when the system is numerically rank deficient both degrees are
//! lowered by the deficiency, as in the SVD-based method of Gonnet, Güttel and
//! Trefethen, with complete-pivoting elimination in place of the SVD.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::roots::poly_roots;

/// Pole–zero pairs closer than this (relative to the pole modulus) are treated
/// as spurious and divided out.
pub const DOUBLET_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct Pade {
    prec: u32,
    // approximant in u = τ / scale
    scale: Float,
    p: Vec<Complex>,
    q: Vec<Complex>,
    poles: Vec<Complex>,
    zeros: Vec<Complex>,
    doublets: Vec<(Complex, Complex)>,
}

fn cabs(z: &Complex) -> Float {
    Float::with_val(64, z.abs_ref())
}

fn max_abs(cs: &[Complex]) -> Float {
    cs.iter().map(cabs).fold(Float::new(64), |a, b| a.max(&b))
}

/// Radius-of-convergence estimate from the root test on the upper half of
/// the coefficients.
fn radius_estimate(c: &[Complex]) -> Float {
    let mut est: Vec<f64> = c
        .iter()
        .enumerate()
        .skip((c.len() / 2).max(1))
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| {
            let l = cabs(x).ln().to_f64();
            (-l / j as f64).exp()
        })
        .filter(|r| r.is_finite() && *r > 0.0)
        .collect();
    if est.is_empty() {
        return Float::with_val(64, 1);
    }
    est.sort_by(f64::total_cmp);
    Float::with_val(64, est[est.len() / 2])
}

/// Rank and a null vector of an `n × (n+1)` matrix by complete pivoting.
fn rank_and_null(mut a: Vec<Vec<Complex>>, tol: &Float, prec: u32) -> (usize, Option<Vec<Complex>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    for i in 0..rows.min(cols) {
        let mut best = (i, i);
        let mut best_v = Float::new(64);
        for (r, row) in a.iter().enumerate().skip(i) {
            for (c, v) in row.iter().enumerate().skip(i) {
                let m = cabs(v);
                if m > best_v {
                    best_v = m;
                    best = (r, c);
                }
            }
        }
        if best_v <= *tol {
            break;
        }
        a.swap(i, best.0);
        for row in a.iter_mut() {
            row.swap(i, best.1);
        }
        perm.swap(i, best.1);
        for r in i + 1..rows {
            let f = Complex::with_val(prec, &a[r][i] / &a[i][i]);
            for c in i..cols {
                let t = Complex::with_val(prec, &f * &a[i][c]);
                a[r][c] -= t;
            }
        }
        rank += 1;
    }
    if rank < rows || cols != rows + 1 {
        return (rank, None);
    }
    // free variable is the last permuted column
    let mut x = vec![Complex::new(prec); cols];
    x[cols - 1] = Complex::with_val(prec, 1);
    for i in (0..rows).rev() {
        let mut s = Complex::new(prec);
        for c in i + 1..cols {
            s += Complex::with_val(prec, &a[i][c] * &x[c]);
        }
        x[i] = Complex::with_val(prec, -s / &a[i][i]);
    }
    let mut out = vec![Complex::new(prec); cols];
    for (k, &p) in perm.iter().enumerate() {
        out[p] = x[k].clone();
    }
    (rank, Some(out))
}

fn horner(c: &[Complex], u: &Complex, prec: u32) -> Complex {
    let mut acc = Complex::new(prec);
    for x in c.iter().rev() {
        acc *= u;
        acc += x;
    }
    acc
}

fn trim_trailing(v: &mut Vec<Complex>, tol: &Float) {
    let scale = max_abs(v);
    while v.len() > 1 && cabs(v.last().unwrap()) <= Float::with_val(64, tol * &scale) {
        v.pop();
    }
}

impl Pade {
    /// Approximant of type at most `[m/n]` from `coeffs[0..=m+n]`.
    pub fn new(coeffs: &[Complex], m: usize, n: usize, prec: u32) -> Pade {
        assert!(coeffs.len() > m + n, "need m+n+1 coefficients");
        let tol = Float::with_val(64, Float::i_exp(1, -(prec as i32) / 2));
        let scale = radius_estimate(&coeffs[..=m + n]);
        let sc = Float::with_val(prec, &scale);
        let c: Vec<Complex> = coeffs[..=m + n]
            .iter()
            .enumerate()
            .map(|(j, x)| Complex::with_val(prec, x * Float::with_val(prec, (&sc).pow(j as u32))))
            .collect();
        let cnorm = max_abs(&c);
        let zero_result = || Pade {
            prec,
            scale: scale.clone(),
            p: vec![Complex::new(prec)],
            q: vec![Complex::with_val(prec, 1)],
            poles: vec![],
            zeros: vec![],
            doublets: vec![],
        };
        if cnorm.is_zero() {
            return zero_result();
        }
        let abs_tol = Float::with_val(64, &tol * &cnorm);
        let cc = |i: isize| -> Complex {
            if i < 0 {
                Complex::new(prec)
            } else {
                c[i as usize].clone()
            }
        };
        let (mut m, mut n) = (m, n);
        let mut q = vec![Complex::with_val(prec, 1)];
        while n > 0 {
            let z: Vec<Vec<Complex>> = (0..n)
                .map(|i| (0..=n).map(|k| cc((m + 1 + i) as isize - k as isize)).collect())
                .collect();
            let (rank, null) = rank_and_null(z, &abs_tol, prec);
            if rank < n {
                let d = n - rank;
                n = rank;
                m = m.saturating_sub(d);
                continue;
            }
            q = null.expect("full rank gives a null vector");
            break;
        }
        // numerator: first m+1 coefficients of c·q
        let mut p: Vec<Complex> = (0..=m)
            .map(|i| {
                let mut s = Complex::new(prec);
                for (k, qk) in q.iter().enumerate().take(i + 1) {
                    s += Complex::with_val(prec, &c[i - k] * qk);
                }
                s
            })
            .collect();
        // common factors u^λ
        let qnorm = max_abs(&q);
        let qtol = Float::with_val(64, &tol * &qnorm);
        while q.len() > 1 && cabs(&q[0]) <= qtol && p.len() > 1 && cabs(&p[0]) <= abs_tol {
            q.remove(0);
            p.remove(0);
        }
        trim_trailing(&mut q, &tol);
        trim_trailing(&mut p, &tol);
        if !q[0].is_zero() {
            let q0 = q[0].clone();
            for x in q.iter_mut().chain(p.iter_mut()) {
                *x /= &q0;
            }
        }
        if p.iter().all(|x| cabs(x) <= abs_tol) {
            return zero_result();
        }

        let to_tau = |u: Complex| Complex::with_val(prec, u * &sc);
        let all_poles: Vec<Complex> = poly_roots(&q, prec).into_iter().map(to_tau).collect();
        let all_zeros: Vec<Complex> = poly_roots(&p, prec).into_iter().map(to_tau).collect();
        let mut zero_used = vec![false; all_zeros.len()];
        let mut poles = Vec::new();
        let mut doublets = Vec::new();
        for pole in all_poles {
            let pm = cabs(&pole).to_f64().max(f64::MIN_POSITIVE);
            let hit = all_zeros
                .iter()
                .enumerate()
                .filter(|(i, _)| !zero_used[*i])
                .map(|(i, z)| (i, cabs(&Complex::with_val(prec, &pole - z)).to_f64()))
                .filter(|&(_, d)| d < DOUBLET_TOL * pm)
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match hit {
                Some((i, _)) => {
                    zero_used[i] = true;
                    doublets.push((pole, all_zeros[i].clone()));
                }
                None => poles.push(pole),
            }
        }
        let zeros = all_zeros
            .into_iter()
            .zip(zero_used)
            .filter(|(_, used)| !used)
            .map(|(z, _)| z)
            .collect();
        Pade {
            prec,
            scale,
            p,
            q,
            poles,
            zeros,
            doublets,
        }
    }

    /// Actual numerator and denominator degrees after reduction.
    pub fn degrees(&self) -> (usize, usize) {
        (self.p.len() - 1, self.q.len() - 1)
    }

    /// Poles in the τ-plane, doublets excluded.
    pub fn poles(&self) -> &[Complex] {
        &self.poles
    }

    pub fn zeros(&self) -> &[Complex] {
        &self.zeros
    }

    pub fn doublets(&self) -> &[(Complex, Complex)] {
        &self.doublets
    }

    pub fn eval(&self, tau: &Complex) -> Complex {
        let prec = self.prec;
        let u = Complex::with_val(prec, tau / Float::with_val(prec, &self.scale));
        let num = horner(&self.p, &u, prec);
        let den = horner(&self.q, &u, prec);
        let mut v = Complex::with_val(prec, num / den);
        for (pole, zero) in &self.doublets {
            let a = Complex::with_val(prec, tau - pole);
            let b = Complex::with_val(prec, tau - zero);
            if !b.is_zero() {
                v *= a;
                v /= b;
            }
        }
        v
    }
}
