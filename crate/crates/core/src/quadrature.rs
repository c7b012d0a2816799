//! Adaptive Gauss–Legendre quadrature of complex vector-valued integrands.

use rug::{Complex, Float};

/// Nodes per panel.
pub const ORDER: usize = 20;
const MAX_DEPTH: u32 = 60;

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    prec: u32,
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

fn legendre(n: usize, x: &Float, prec: u32) -> (Float, Float) {
    // P_n(x) and P_n'(x) by the three-term recurrence
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = Float::with_val(prec, x);
    for k in 2..=n {
        let kf = k as u32;
        let t = (Float::with_val(prec, x * &p1) * (2 * kf - 1) - Float::with_val(prec, &p0 * (kf - 1))) / kf;
        p0 = p1;
        p1 = t;
    }
    let one_minus = Float::with_val(prec, 1) - Float::with_val(prec, x * x);
    let dp = (Float::with_val(prec, &p0 - Float::with_val(prec, x * &p1)) * n as u32) / one_minus;
    (p1, dp)
}

impl GaussLegendre {
    pub fn new(n: usize, prec: u32) -> Self {
        let work = prec + 32;
        let pi = Float::with_val(work, rug::float::Constant::Pi);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let tol = Float::with_val(work, Float::i_exp(1, -(work as i32) + 4));
        for i in 1..=n {
            let guess = Float::with_val(work, &pi * (i as f64 - 0.25)) / (n as f64 + 0.5);
            let mut x = guess.cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, &x, work);
                let dx = Float::with_val(work, &p / &dp);
                x -= &dx;
                if dx.abs() < tol {
                    break;
                }
            }
            let (_, dp) = legendre(n, &x, work);
            let w = Float::with_val(work, 2)
                / (Float::with_val(work, 1) - Float::with_val(work, &x * &x))
                / Float::with_val(work, &dp * &dp);
            nodes.push(Float::with_val(prec, &x));
            weights.push(Float::with_val(prec, w));
        }
        GaussLegendre {
            prec,
            nodes,
            weights,
        }
    }

    /// `∫_a^b f` on one panel; `f` returns `dim` components.
    pub fn panel<F>(&self, f: &mut F, a: &Float, b: &Float, dim: usize) -> Vec<Complex>
    where
        F: FnMut(&Float) -> Vec<Complex>,
    {
        let prec = self.prec;
        let half = Float::with_val(prec, b - a) / 2u32;
        let mid = Float::with_val(prec, a + b) / 2u32;
        let mut acc = vec![Complex::new(prec); dim];
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let s = Float::with_val(prec, &mid + Float::with_val(prec, &half * x));
            let v = f(&s);
            for (a, vi) in acc.iter_mut().zip(v) {
                *a += vi * w;
            }
        }
        for a in acc.iter_mut() {
            *a *= &half;
        }
        acc
    }
}

/// Result of [`integrate`]: per-component integrals and the error estimate
/// of component 0.
#[derive(Clone, Debug)]
pub struct Integral {
    pub values: Vec<Complex>,
    pub error: f64,
    pub panels: usize,
}

/// Sum in a fixed binary tree so the result does not depend on how panels
/// were produced.
fn pairwise_sum(mut v: Vec<Complex>, prec: u32) -> Complex {
    if v.is_empty() {
        return Complex::new(prec);
    }
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        v = next;
    }
    v.pop().unwrap()
}

/// Adaptive bisection of `[a, b]` until each panel's estimate (difference
/// between one panel and its two halves, on component 0) is below `eps / 4`.
pub fn integrate<F>(gl: &GaussLegendre, mut f: F, a: &Float, b: &Float, dim: usize, eps: f64) -> Integral
where
    F: FnMut(&Float) -> Vec<Complex>,
{
    let prec = gl.prec;
    let mut accepted: Vec<Vec<Complex>> = Vec::new();
    let mut error = 0.0;
    let whole = gl.panel(&mut f, a, b, dim);
    // explicit stack, left panel processed first
    let mut stack = vec![(a.clone(), b.clone(), whole, 0u32)];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        let left = gl.panel(&mut f, &lo, &mid, dim);
        let right = gl.panel(&mut f, &mid, &hi, dim);
        let split = Complex::with_val(prec, &left[0] + &right[0]);
        let est = Complex::with_val(64, &whole[0] - &split).abs().real().to_f64();
        if est <= eps / 4.0 || depth >= MAX_DEPTH || !est.is_finite() {
            error += est;
            let sum: Vec<Complex> = left
                .into_iter()
                .zip(right)
                .map(|(l, r)| Complex::with_val(prec, l + r))
                .collect();
            accepted.push(sum);
        } else {
            stack.push((mid.clone(), hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    let panels = accepted.len();
    let values = (0..dim)
        .map(|i| pairwise_sum(accepted.iter().map(|v| v[i].clone()).collect(), prec))
        .collect();
    Integral {
        values,
        error,
        panels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        let gl = GaussLegendre::new(ORDER, 128);
        let a = Float::with_val(128, 0);
        let b = Float::with_val(128, 2);
        let v = gl.panel(&mut |x: &Float| vec![Complex::with_val(128, x.clone().pow(39u32))], &a, &b, 1);
        // ∫₀² x³⁹ dx = 2⁴⁰/40
        let exact = 2f64.powi(40) / 40.0;
        assert!((v[0].real().to_f64() / exact - 1.0).abs() < 1e-30);
    }

    #[test]
    fn adaptive_exponential() {
        let gl = GaussLegendre::new(ORDER, 128);
        let a = Float::with_val(128, 0);
        let b = Float::with_val(128, 50);
        let r = integrate(
            &gl,
            |x: &Float| vec![Complex::with_val(128, (-x.clone()).exp())],
            &a,
            &b,
            1,
            1e-30,
        );
        let exact = 1.0 - (-50f64).exp();
        assert!((r.values[0].real().to_f64() - exact).abs() < 1e-15);
        assert!(r.error < 1e-25);
    }

    #[test]
    fn sqrt_endpoint_behaviour() {
        let gl = GaussLegendre::new(ORDER, 128);
        let a = Float::with_val(128, 0);
        let b = Float::with_val(128, 1);
        let r = integrate(&gl, |x: &Float| vec![Complex::with_val(128, x.clone().sqrt())], &a, &b, 1, 1e-20);
        assert!((r.values[0].real().to_f64() - 2.0 / 3.0).abs() < 1e-15);
    }
}
