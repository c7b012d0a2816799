//! Gevrey order of an expansion from the growth of its coefficient norms.
//!
//! The model is `‖gₙ‖ ≈ K·Aⁿ·Γ(sn+1)`, fitted as
//! `log‖gₙ‖ ≈ log K + n·log A + s·log Γ(n+1)`.

use rug::Float;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::series::PolyRadius;
use crate::weierstrass::PExpansion;

/// Fewest stored norms accepted by [`fit_gevrey`].
pub const MIN_LEN: usize = 8;
/// Fewest nonzero norms inside the fit window.
pub const MIN_POINTS: usize = 4;
/// Default first index of the fit window.
pub const DEFAULT_N_MIN: usize = 5;

const FIT_PREC: u32 = 256;

/// Coefficient norms `‖gₙ‖` stored as logarithms so factorial growth
/// cannot overflow.
#[derive(Clone, Debug, PartialEq)]
pub struct NormSequence {
    pub rho: PolyRadius,
    log_norms: Vec<f64>,
}

impl NormSequence {
    /// From plain norms; zeros are kept and masked.
    pub fn from_norms(rho: PolyRadius, norms: &[f64]) -> Result<Self> {
        if let Some(bad) = norms.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidArgument(format!("norms must be finite and ≥ 0, got {bad}")));
        }
        Ok(NormSequence {
            rho,
            log_norms: norms
                .iter()
                .map(|&x| if x == 0.0 { f64::NEG_INFINITY } else { x.ln() })
                .collect(),
        })
    }

    /// From natural logs; `-inf` marks a zero entry.
    pub fn from_log_norms(rho: PolyRadius, log_norms: Vec<f64>) -> Result<Self> {
        if log_norms.iter().any(|x| x.is_nan() || *x == f64::INFINITY) {
            return Err(Error::InvalidArgument("log-norms must be finite or -inf".into()));
        }
        Ok(NormSequence { rho, log_norms })
    }

    pub fn len(&self) -> usize {
        self.log_norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_norms.is_empty()
    }

    pub fn log_norms(&self) -> &[f64] {
        &self.log_norms
    }

    /// The norms themselves; may be `inf` for very large entries.
    pub fn norms(&self) -> Vec<f64> {
        self.log_norms.iter().map(|x| x.exp()).collect()
    }

    pub fn zero_mask(&self) -> Vec<bool> {
        self.log_norms.iter().map(|x| *x == f64::NEG_INFINITY).collect()
    }

    pub fn to_json(&self) -> Value {
        let finite_or_null = |x: f64| if x.is_finite() { json!(x) } else { Value::Null };
        json!({
            "rho": self.rho.get(),
            "norms": self.norms().into_iter().map(finite_or_null).collect::<Vec<_>>(),
            "log_norms": self.log_norms.iter().map(|&x| finite_or_null(x)).collect::<Vec<_>>(),
            "zero_mask": self.zero_mask(),
        })
    }
}

/// `‖gₙ‖ = majorant_norm(gₙ, ρ)` for every coefficient of the expansion.
pub fn norm_sequence(exp: &PExpansion, rho: PolyRadius) -> NormSequence {
    NormSequence {
        rho,
        log_norms: exp.coeffs().iter().map(|g| g.log_majorant_norm(rho)).collect(),
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    Float::with_val(FIT_PREC, x).ln_gamma().to_f64()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GevreyEstimate {
    pub s: f64,
    pub log_k: f64,
    pub log_a: f64,
    pub rms_residual: f64,
    /// First and last index that entered the fit.
    pub n_range: (usize, usize),
    pub points: usize,
    /// Set when the unconstrained fit gave `s < 0`; `s` is then 0 and
    /// `log K`, `log A` come from the fit without the Γ column.
    pub convergent_type: bool,
}

impl GevreyEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "s": self.s,
            "k": if self.s > 0.0 { json!(1.0 / self.s) } else { Value::Null },
            "logK": self.log_k,
            "logA": self.log_a,
            "rms_residual": self.rms_residual,
            "n_range": [self.n_range.0, self.n_range.1],
            "points": self.points,
            "convergent_type": self.convergent_type,
        })
    }
}

/// Least squares for `y ≈ X β` through the normal equations, in high precision.
fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let p = rows[0].len();
    let f = |x: f64| Float::with_val(FIT_PREC, x);
    let mut a: Vec<Vec<Float>> = vec![vec![f(0.0); p + 1]; p];
    for (row, &yi) in rows.iter().zip(y) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += f(row[i]) * f(row[j]);
            }
            a[i][p] += f(row[i]) * f(yi);
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..p {
        let piv = (col..p).max_by(|&i, &j| {
            Float::with_val(64, a[i][col].abs_ref())
                .partial_cmp(&Float::with_val(64, a[j][col].abs_ref()))
                .unwrap()
        })?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        for r in 0..p {
            if r != col {
                let factor = Float::with_val(FIT_PREC, &a[r][col] / &a[col][col]);
                for c in col..=p {
                    let t = Float::with_val(FIT_PREC, &factor * &a[col][c]);
                    a[r][c] -= t;
                }
            }
        }
    }
    Some((0..p).map(|i| Float::with_val(FIT_PREC, &a[i][p] / &a[i][i]).to_f64()).collect())
}

/// Fits `s`, `log K`, `log A` over the nonzero entries with index ≥ `n_min`.
pub fn fit_gevrey(ns: &NormSequence, n_min: usize) -> Result<GevreyEstimate> {
    if ns.len() < MIN_LEN {
        return Err(Error::TooFewCoefficients {
            needed: MIN_LEN,
            found: ns.len(),
        });
    }
    let pts: Vec<(usize, f64)> = ns
        .log_norms
        .iter()
        .enumerate()
        .filter(|(n, y)| *n >= n_min && y.is_finite())
        .map(|(n, &y)| (n, y))
        .collect();
    if pts.len() < MIN_POINTS {
        return Err(Error::TooFewCoefficients {
            needed: MIN_POINTS,
            found: pts.len(),
        });
    }
    let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let full: Vec<Vec<f64>> = pts
        .iter()
        .map(|&(n, _)| vec![1.0, n as f64, ln_gamma(n as f64 + 1.0)])
        .collect();
    let beta = least_squares(&full, &y)
        .ok_or_else(|| Error::InvalidArgument("degenerate fit window".into()))?;
    let (beta, rows, convergent_type) = if beta[2] < 0.0 {
        let rows: Vec<Vec<f64>> = pts.iter().map(|&(n, _)| vec![1.0, n as f64]).collect();
        let b = least_squares(&rows, &y)
            .ok_or_else(|| Error::InvalidArgument("degenerate fit window".into()))?;
        (vec![b[0], b[1], 0.0], full, true)
    } else {
        (beta, full, false)
    };
    let ss: f64 = rows
        .iter()
        .zip(&y)
        .map(|(r, yi)| {
            let pred = beta[0] + beta[1] * r[1] + beta[2] * r[2];
            (yi - pred).powi(2)
        })
        .sum();
    Ok(GevreyEstimate {
        s: beta[2],
        log_k: beta[0],
        log_a: beta[1],
        rms_residual: (ss / pts.len() as f64).sqrt(),
        n_range: (pts[0].0, pts[pts.len() - 1].0),
        points: pts.len(),
        convergent_type,
    })
}

/// True iff `‖gₙ‖ ≤ K·Aⁿ·Γ(sn+1)` for every stored `n`, compared in log space.
pub fn check_gevrey_bound(ns: &NormSequence, s: f64, k: f64, a: f64) -> Result<bool> {
    if !(s > 0.0 && k > 0.0 && a > 0.0) {
        return Err(Error::InvalidArgument("s, K and A must be positive".into()));
    }
    let (lk, la) = (k.ln(), a.ln());
    Ok(ns.log_norms.iter().enumerate().all(|(n, &y)| {
        if y == f64::NEG_INFINITY {
            return true;
        }
        let rhs = lk + n as f64 * la + ln_gamma(s * n as f64 + 1.0);
        y <= rhs + 1e-12 * rhs.abs().max(1.0)
    }))
}
