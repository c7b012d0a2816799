//! Univariate polynomial roots by Aberth–Ehrlich iteration.

use rug::ops::Pow;
use rug::{Complex, Float};

const MAX_ITER: usize = 2000;

/// A group of roots closer than the clustering radius.
#[derive(Clone, Debug)]
pub struct RootCluster {
    pub center: Complex,
    pub mult: usize,
}

fn horner(coeffs: &[Complex], z: &Complex, prec: u32) -> (Complex, Complex) {
    let mut p = Complex::new(prec);
    let mut dp = Complex::new(prec);
    for c in coeffs.iter().rev() {
        dp *= z;
        dp += &p;
        p *= z;
        p += c;
    }
    (p, dp)
}

/// All complex roots of `Σ coeffs[j] zʲ`, with multiplicity. Trailing zero
/// coefficients are ignored; an empty or constant polynomial has no roots.
pub fn poly_roots(coeffs: &[Complex], prec: u32) -> Vec<Complex> {
    let work = prec + 32;
    let mut c: Vec<Complex> = coeffs.iter().map(|x| Complex::with_val(work, x)).collect();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let mut zeros_at_origin = 0;
    while c.len() > 1 && c[0].is_zero() {
        c.remove(0);
        zeros_at_origin += 1;
    }
    let n = c.len().saturating_sub(1);
    let mut out: Vec<Complex> = (0..zeros_at_origin).map(|_| Complex::new(prec)).collect();
    if n == 0 {
        return out;
    }
    if n == 1 {
        let z = Complex::with_val(work, -&c[0]) / &c[1];
        out.push(Complex::with_val(prec, z));
        return out;
    }

    // starting circle: geometric mean of the root moduli
    let ratio = Float::with_val(work, c[0].abs_ref()) / Float::with_val(work, c[n].abs_ref());
    let radius = ratio.pow(1.0 / n as f64);
    let mut z: Vec<Complex> = (0..n)
        .map(|j| {
            let angle = Float::with_val(work, rug::float::Constant::Pi) * 2u32 * (j as f64 + 0.25)
                / n as f64;
            Complex::with_val(work, (Float::with_val(work, angle.cos_ref()) * &radius,
                Float::with_val(work, angle.sin_ref()) * &radius))
        })
        .collect();

    let tol = Float::with_val(work, Float::i_exp(1, -(work as i32) + 8));
    // coefficients carry only about `prec` bits, so corrections may stall at
    // the noise level; a few extra sweeps past 2^(−prec/2) are enough
    let loose = Float::with_val(64, Float::i_exp(1, -(prec as i32) / 2));
    let mut settled = 0;
    let mut best = Float::with_val(64, f64::INFINITY);
    let mut since_best = 0;
    for _ in 0..MAX_ITER {
        let mut max_rel = Float::new(64);
        for i in 0..n {
            let (p, dp) = horner(&c, &z[i], work);
            if p.is_zero() {
                continue;
            }
            let ratio = Complex::with_val(work, &p / &dp);
            let mut s = Complex::new(work);
            for j in 0..n {
                if j != i {
                    let diff = Complex::with_val(work, &z[i] - &z[j]);
                    if !diff.is_zero() {
                        s += diff.recip();
                    }
                }
            }
            let denom = Complex::with_val(work, 1) - Complex::with_val(work, &ratio * &s);
            let w = if denom.is_zero() { ratio } else { ratio / denom };
            if !w.real().is_finite() || !w.imag().is_finite() {
                continue;
            }
            let scale = Float::with_val(64, z[i].abs_ref()).max(&Float::with_val(64, 1));
            let rel = Float::with_val(64, w.abs_ref()) / scale;
            if rel > max_rel {
                max_rel = rel;
            }
            z[i] -= w;
        }
        if max_rel <= tol {
            break;
        }
        if max_rel <= loose {
            settled += 1;
            if settled >= 8 {
                break;
            }
        }
        if max_rel < best {
            best = max_rel;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= 100 {
                break;
            }
        }
    }
    out.extend(z.into_iter().map(|x| Complex::with_val(prec, x)));
    out
}

/// Groups roots lying within `radius` (relative to max(1, |z|)) of one another.
pub fn cluster(roots: &[Complex], radius: f64) -> Vec<RootCluster> {
    let prec = roots.first().map_or(64, |r| r.prec().0);
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![i];
        // grow transitively so a cluster does not depend on the seed member
        let mut k = 0;
        while k < members.len() {
            let m = members[k];
            for j in 0..roots.len() {
                if used[j] {
                    continue;
                }
                let d = Complex::with_val(64, &roots[m] - &roots[j]).abs().real().to_f64();
                let s = roots[m].clone().abs().real().to_f64().max(1.0);
                if d <= radius * s {
                    used[j] = true;
                    members.push(j);
                }
            }
            k += 1;
        }
        let mut center = Complex::new(prec);
        for &m in &members {
            center += &roots[m];
        }
        center /= members.len() as u32;
        out.push(RootCluster {
            center,
            mult: members.len(),
        });
    }
    out
}
