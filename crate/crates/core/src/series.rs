//! Multivariate power series truncated by total degree.
//!
//! A [`TruncatedSeries`] stores the terms of total degree at most `trunc`;
//! everything above is unknown. The truncation [`EXACT`] marks a series whose
//! stored terms are the whole series (a polynomial).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::order::MonomialOrder;
use crate::scalar::Scalar;

/// Truncation of a series that is known exactly.
pub const EXACT: i64 = i64::MAX;

/// `t + d` for truncation orders, keeping [`EXACT`] absorbing.
pub fn trunc_add(t: i64, d: i64) -> i64 {
    if t == EXACT {
        EXACT
    } else {
        t.saturating_add(d).min(EXACT - 1)
    }
}

/// `t · m` for truncation orders, keeping [`EXACT`] absorbing.
pub fn trunc_mul(t: i64, m: i64) -> i64 {
    if t == EXACT {
        EXACT
    } else {
        t.saturating_mul(m).min(EXACT - 1)
    }
}

/// Multi-index α ∈ ℕ^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Exponent(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Exponent(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        Exponent(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&a| i64::from(a)).sum()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u32> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other` when every component stays nonnegative.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    /// Componentwise `self ≥ other`, i.e. `self ∈ other + ℕ^d`.
    pub fn dominates(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn scale(&self, k: u32) -> Exponent {
        Exponent(self.0.iter().map(|a| a * k).collect())
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

/// Radius ρ > 0 of the polydisk used by the majorant norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyRadius(f64);

impl PolyRadius {
    pub fn new(rho: f64) -> Result<Self> {
        if rho.is_finite() && rho > 0.0 {
            Ok(PolyRadius(rho))
        } else {
            Err(Error::InvalidArgument(format!("radius must be positive, got {rho}")))
        }
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    dim: usize,
    trunc: i64,
    terms: BTreeMap<Exponent, Scalar>,
}

fn magnitude(c: &Scalar) -> Float {
    c.abs(64)
}

impl TruncatedSeries {
    pub fn zero(dim: usize, trunc: i64) -> Self {
        TruncatedSeries {
            dim,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a series from terms, summing repeated exponents and dropping
    /// terms above the truncation.
    pub fn from_terms<I>(dim: usize, trunc: i64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Scalar)>,
    {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        let mut map: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            if e.degree() > trunc {
                continue;
            }
            accumulate(&mut map, e, c);
        }
        let mut s = TruncatedSeries {
            dim,
            trunc,
            terms: map,
        };
        s.prune(None);
        Ok(s)
    }

    /// Polynomial with integer coefficients, given as `(exponent, coefficient)` pairs.
    pub fn poly(dim: usize, terms: &[(&[u32], i64)]) -> Self {
        TruncatedSeries::from_terms(
            dim,
            EXACT,
            terms
                .iter()
                .map(|(e, c)| (Exponent::new(e.to_vec()), Scalar::from_int(*c))),
        )
        .expect("well-formed polynomial")
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        TruncatedSeries::monomial(dim, Exponent::zero(dim), c)
    }

    pub fn monomial(dim: usize, e: Exponent, c: Scalar) -> Self {
        TruncatedSeries::from_terms(dim, EXACT, [(e, c)]).expect("monomial")
    }

    /// The coordinate function x_i (0-based).
    pub fn variable(dim: usize, i: usize) -> Self {
        TruncatedSeries::monomial(dim, Exponent::unit(dim, i), Scalar::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_exact_trunc(&self) -> bool {
        self.trunc == EXACT
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero up to the truncation.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exponent) -> Option<&Scalar> {
        self.terms.get(e)
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Exponent::zero(self.dim))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// True when every stored coefficient is exact.
    pub fn has_exact_coeffs(&self) -> bool {
        self.terms.values().all(Scalar::is_exact)
    }

    /// Largest float precision among the coefficients.
    pub fn float_prec(&self) -> Option<u32> {
        self.terms.values().filter_map(Scalar::prec).max()
    }

    /// Lowest total degree among stored terms.
    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().map(Exponent::degree).min()
    }

    /// Highest total degree among stored terms.
    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().map(Exponent::degree).max()
    }

    /// Lower bound for the order of the full (untruncated) series.
    pub fn effective_order(&self) -> i64 {
        let unknown = trunc_add(self.trunc, 1);
        self.min_degree().map_or(unknown, |d| d.min(unknown))
    }

    /// Lower bound for the degree of the nonconstant part of the full series.
    fn positive_order(&self) -> i64 {
        let unknown = trunc_add(self.trunc, 1);
        self.terms
            .keys()
            .map(Exponent::degree)
            .filter(|&d| d > 0)
            .min()
            .map_or(unknown, |d| d.min(unknown))
    }

    fn check_dim(&self, other: &TruncatedSeries) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub(crate) fn max_magnitude(&self) -> Option<Float> {
        self.terms.values().map(magnitude).max_by(|a, b| {
            a.partial_cmp(b).unwrap_or(Ordering::Equal)
        })
    }

    /// Removes exact zeros, and float coefficients below `2^(-prec/2)` times
    /// `scale` (default: the largest stored magnitude).
    fn prune(&mut self, scale: Option<Float>) {
        self.terms.retain(|_, c| !c.is_zero());
        let Some(prec) = self.float_prec() else {
            return;
        };
        let Some(scale) = scale.or_else(|| self.max_magnitude()) else {
            return;
        };
        if scale.is_zero() {
            return;
        }
        let threshold = scale * Float::with_val(64, Float::i_exp(1, -(prec as i32) / 2));
        self.terms
            .retain(|_, c| c.is_exact() || magnitude(c) > threshold);
    }

    /// Drops everything of degree above `t` and lowers the truncation.
    pub fn truncate(&self, t: i64) -> TruncatedSeries {
        let t = t.min(self.trunc);
        TruncatedSeries {
            dim: self.dim,
            trunc: t,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() <= t)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Returns the same terms with a different truncation label; terms above
    /// `t` are dropped.
    pub fn with_trunc(&self, t: i64) -> TruncatedSeries {
        let mut s = self.truncate(t);
        s.trunc = t;
        s
    }

    /// Equality of the two series through degree `t`.
    pub fn agrees_with(&self, other: &TruncatedSeries, t: i64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let a = self.terms.iter().filter(|(e, _)| e.degree() <= t);
        let b = other.terms.iter().filter(|(e, _)| e.degree() <= t);
        a.eq(b)
    }

    /// Equality through the smaller of the two truncations.
    pub fn agrees(&self, other: &TruncatedSeries) -> bool {
        self.agrees_with(other, self.trunc.min(other.trunc))
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_dim(other)?;
        let t = self.trunc.min(other.trunc);
        let scale = match (self.max_magnitude(), other.max_magnitude()) {
            (Some(a), Some(b)) => Some(a.max(&b)),
            (a, b) => a.or(b),
        };
        let mut map = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            if e.degree() <= t {
                accumulate(&mut map, e.clone(), c.clone());
            }
        }
        let mut s = TruncatedSeries {
            dim: self.dim,
            trunc: t,
            terms: map,
        };
        s.prune(scale);
        Ok(s)
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            dim: self.dim,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> TruncatedSeries {
        let mut s = TruncatedSeries {
            dim: self.dim,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        };
        s.prune(None);
        s
    }

    /// Product with the monomial `c·x^e`; the truncation rises by `|e|`.
    pub fn mul_monomial(&self, e: &Exponent, c: &Scalar) -> TruncatedSeries {
        let mut s = TruncatedSeries {
            dim: self.dim,
            trunc: trunc_add(self.trunc, e.degree()),
            terms: self
                .terms
                .iter()
                .map(|(a, b)| (a.add(e), b * c))
                .collect(),
        };
        s.prune(None);
        s
    }

    /// Cauchy product keeping terms of degree ≤ `t`, labelled with truncation `t`.
    pub(crate) fn mul_to(&self, other: &TruncatedSeries, t: i64) -> TruncatedSeries {
        let mut map = BTreeMap::new();
        let other_terms: Vec<(&Exponent, &Scalar, i64)> = other
            .terms
            .iter()
            .map(|(e, c)| (e, c, e.degree()))
            .collect();
        for (ea, ca) in &self.terms {
            let da = ea.degree();
            if da > t {
                continue;
            }
            for &(eb, cb, db) in &other_terms {
                if da + db > t {
                    continue;
                }
                accumulate(&mut map, ea.add(eb), ca * cb);
            }
        }
        let scale = match (self.max_magnitude(), other.max_magnitude()) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        let mut s = TruncatedSeries {
            dim: self.dim,
            trunc: t,
            terms: map,
        };
        s.prune(scale);
        s
    }

    /// Product truncated at the smaller operand truncation.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_dim(other)?;
        Ok(self.mul_to(other, self.trunc.min(other.trunc)))
    }

    /// Product whose truncation accounts for the operands' orders:
    /// `min(a.trunc + ord b, b.trunc + ord a)`. Never less precise than [`Self::mul`].
    pub fn mul_sharp(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_dim(other)?;
        let t1 = trunc_add(self.trunc, other.effective_order());
        let t2 = trunc_add(other.trunc, self.effective_order());
        Ok(self.mul_to(other, t1.min(t2)))
    }

    pub fn pow(&self, n: u32) -> TruncatedSeries {
        let mut acc = TruncatedSeries::constant(self.dim, Scalar::one()).with_trunc(self.trunc);
        for _ in 0..n {
            acc = acc.mul_to(self, self.trunc.min(acc.trunc));
        }
        acc
    }

    /// `f(images)`: variable i is replaced by `images[i]`.
    ///
    /// Images with a nonzero constant term are only accepted for exactly known
    /// `f`, since unrepresented terms would otherwise leak into every degree.
    pub fn substitute(&self, images: &[TruncatedSeries]) -> Result<TruncatedSeries> {
        if images.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: images.len(),
            });
        }
        let out_dim = images[0].dim;
        for im in images {
            if im.dim != out_dim {
                return Err(Error::DimensionMismatch {
                    expected: out_dim,
                    found: im.dim,
                });
            }
        }
        let image_trunc = images.iter().map(|i| i.trunc).min().unwrap_or(EXACT);
        let has_constant = images.iter().any(|i| !i.constant_term().is_zero());
        let t = if self.trunc == EXACT {
            image_trunc
        } else if has_constant {
            return Err(Error::InsufficientTruncation(
                "substitution with a nonzero constant term needs an exactly known series".into(),
            ));
        } else {
            let o_min = images.iter().map(TruncatedSeries::positive_order).min().unwrap_or(EXACT);
            if o_min == EXACT {
                if self.trunc >= 0 {
                    image_trunc
                } else {
                    -1
                }
            } else {
                image_trunc.min(trunc_mul(trunc_add(self.trunc, 1), o_min) - 1)
            }
        };
        let o_min = images
            .iter()
            .map(|i| {
                if i.constant_term().is_zero() {
                    i.positive_order()
                } else {
                    0
                }
            })
            .collect::<Vec<_>>();

        // powers of each image, built on demand
        let mut powers: Vec<Vec<TruncatedSeries>> = images
            .iter()
            .map(|_| vec![TruncatedSeries::constant(out_dim, Scalar::one()).with_trunc(t)])
            .collect();
        let mut out = TruncatedSeries::zero(out_dim, t);
        let mut acc_terms: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (e, c) in &self.terms {
            let low: i64 = e
                .iter()
                .zip(&o_min)
                .map(|(&a, &o)| i64::from(a).saturating_mul(o))
                .fold(0i64, |x, y| x.saturating_add(y));
            if low > t {
                continue;
            }
            let mut prod = TruncatedSeries::constant(out_dim, c.clone()).with_trunc(t);
            for (i, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                while powers[i].len() <= a as usize {
                    let next = powers[i].last().unwrap().mul_to(&images[i], t);
                    powers[i].push(next);
                }
                prod = prod.mul_to(&powers[i][a as usize], t);
            }
            for (pe, pc) in prod.terms {
                accumulate(&mut acc_terms, pe, pc);
            }
        }
        out.terms = acc_terms;
        out.prune(None);
        Ok(out)
    }

    /// Order-minimal exponent v_ℓ(f) among the stored terms.
    pub fn v_ell(&self, ord: &MonomialOrder) -> Result<Exponent> {
        if ord.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: ord.dim(),
            });
        }
        self.terms
            .keys()
            .min_by(|a, b| ord.cmp(a, b))
            .cloned()
            .ok_or(Error::NoValuation)
    }

    /// Σ |c_α| ρ^{|α|}, an upper bound for sup |f| on the polydisk of radius ρ.
    pub fn majorant_norm(&self, rho: PolyRadius) -> f64 {
        self.majorant_norm_float(rho).to_f64()
    }

    /// Natural log of the majorant norm; `-inf` for the zero series. Does not
    /// overflow for huge coefficients.
    pub fn log_majorant_norm(&self, rho: PolyRadius) -> f64 {
        let n = self.majorant_norm_float(rho);
        if n.is_zero() {
            f64::NEG_INFINITY
        } else {
            n.ln().to_f64()
        }
    }

    fn majorant_norm_float(&self, rho: PolyRadius) -> Float {
        let r = Float::with_val(64, rho.get());
        let mut sum = Float::new(64);
        for (e, c) in &self.terms {
            let deg = e.degree().clamp(i64::from(i32::MIN), i64::from(i32::MAX)) as i32;
            let pw = Float::with_val(64, rug::ops::Pow::pow(&r, deg));
            sum += magnitude(c) * pw;
        }
        sum
    }

    /// ∂f/∂x_i; truncation drops by one.
    pub fn derivative(&self, i: usize) -> TruncatedSeries {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let a = e.get(i);
            if a == 0 {
                continue;
            }
            let mut v = e.as_slice().to_vec();
            v[i] -= 1;
            terms.insert(Exponent(v), c * &Scalar::from_int(i64::from(a)));
        }
        TruncatedSeries {
            dim: self.dim,
            trunc: trunc_add(self.trunc, -1),
            terms,
        }
    }

    /// x_i ∂f/∂x_i; truncation unchanged.
    pub fn euler_derivative(&self, i: usize) -> TruncatedSeries {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let a = e.get(i);
            if a == 0 {
                continue;
            }
            terms.insert(e.clone(), c * &Scalar::from_int(i64::from(a)));
        }
        TruncatedSeries {
            dim: self.dim,
            trunc: self.trunc,
            terms,
        }
    }

    /// Value of the stored polynomial at a complex point.
    pub fn eval(&self, point: &[Complex], prec: u32) -> Result<Complex> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        let mut sum = Complex::new(prec);
        let mut pow_cache: Vec<Vec<Complex>> = point
            .iter()
            .map(|p| vec![Complex::with_val(prec, (1, 0)), Complex::with_val(prec, p)])
            .collect();
        for (e, c) in &self.terms {
            let mut term = c.to_complex(prec);
            for (i, &a) in e.iter().enumerate() {
                let a = a as usize;
                while pow_cache[i].len() <= a {
                    let next = Complex::with_val(prec, pow_cache[i].last().unwrap() * &point[i]);
                    pow_cache[i].push(next);
                }
                term *= &pow_cache[i][a];
            }
            sum += term;
        }
        Ok(sum)
    }

    /// Map over the stored terms, keeping dimension and truncation.
    pub fn map_terms<F>(&self, mut f: F) -> TruncatedSeries
    where
        F: FnMut(&Exponent, &Scalar) -> Option<(Exponent, Scalar)>,
    {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if let Some((e2, c2)) = f(e, c) {
                accumulate(&mut terms, e2, c2);
            }
        }
        let mut s = TruncatedSeries {
            dim: self.dim,
            trunc: self.trunc,
            terms,
        };
        s.prune(None);
        s
    }

    /// Assembles a series from terms of matching dimension, dropping those
    /// above `trunc`. Float coefficients below the relative threshold of
    /// `scale` are pruned.
    pub(crate) fn from_parts(
        dim: usize,
        trunc: i64,
        terms: BTreeMap<Exponent, Scalar>,
        scale: Option<Float>,
    ) -> Self {
        let mut s = TruncatedSeries { dim, trunc, terms };
        s.terms.retain(|e, _| e.degree() <= trunc);
        s.prune(scale);
        s
    }
}

pub(crate) fn accumulate(map: &mut BTreeMap<Exponent, Scalar>, e: Exponent, c: Scalar) {
    use std::collections::btree_map::Entry;
    match map.entry(e) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = &*o.get() + &c;
            if s.is_exact() && s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, a)?,
                }
            }
        }
        if self.trunc != EXACT {
            write!(f, " + O({})", self.trunc + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::TieBreak;

    fn e(v: &[u32]) -> Exponent {
        Exponent::new(v.to_vec())
    }

    #[test]
    fn additive_inverse_is_zero() {
        let x = TruncatedSeries::variable(2, 0);
        assert!(x.add(&x.neg()).unwrap().is_zero());
    }

    #[test]
    fn disjoint_sum() {
        let a = TruncatedSeries::poly(2, &[(&[0, 0], 1), (&[1, 1], 1)]);
        let b = TruncatedSeries::poly(2, &[(&[0, 2], 1)]);
        let s = a.add(&b).unwrap();
        assert_eq!(s, TruncatedSeries::poly(2, &[(&[0, 0], 1), (&[1, 1], 1), (&[0, 2], 1)]));
    }

    #[test]
    fn sum_takes_smaller_truncation() {
        let a = TruncatedSeries::poly(2, &[(&[1, 0], 1)]).with_trunc(3);
        let b = TruncatedSeries::poly(2, &[(&[0, 1], 1)]).with_trunc(5);
        assert_eq!(a.add(&b).unwrap().trunc(), 3);
    }

    #[test]
    fn products() {
        let a = TruncatedSeries::poly(1, &[(&[0], 1), (&[1], 1)]).with_trunc(4);
        let b = TruncatedSeries::poly(1, &[(&[0], 1), (&[1], -1)]).with_trunc(4);
        assert_eq!(
            a.mul(&b).unwrap(),
            TruncatedSeries::poly(1, &[(&[0], 1), (&[2], -1)]).with_trunc(4)
        );
        let p = TruncatedSeries::poly(2, &[(&[0, 2], 1), (&[3, 0], -1)]);
        let q = TruncatedSeries::poly(2, &[(&[3, 0], -1), (&[0, 2], -1)]);
        assert_eq!(
            p.mul(&q).unwrap(),
            TruncatedSeries::poly(2, &[(&[6, 0], 1), (&[0, 4], -1)])
        );
        assert!(p.mul(&TruncatedSeries::zero(2, EXACT)).unwrap().is_zero());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = TruncatedSeries::variable(2, 0);
        let b = TruncatedSeries::variable(3, 0);
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn substitution_examples() {
        // x1 x2 under (v2, (1+v1) v2)
        let f = TruncatedSeries::poly(2, &[(&[1, 1], 1)]);
        let images = [
            TruncatedSeries::poly(2, &[(&[0, 1], 1)]),
            TruncatedSeries::poly(2, &[(&[0, 1], 1), (&[1, 1], 1)]),
        ];
        assert_eq!(
            f.substitute(&images).unwrap(),
            TruncatedSeries::poly(2, &[(&[0, 2], 1), (&[1, 2], 1)])
        );
        // x1 + x2 under (t1^2, t2)
        let f = TruncatedSeries::poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let images = [
            TruncatedSeries::poly(2, &[(&[2, 0], 1)]),
            TruncatedSeries::poly(2, &[(&[0, 1], 1)]),
        ];
        assert_eq!(
            f.substitute(&images).unwrap(),
            TruncatedSeries::poly(2, &[(&[2, 0], 1), (&[0, 1], 1)])
        );
    }

    #[test]
    fn substitution_truncation_bookkeeping() {
        // one variable, x -> t^3: unknown degree > 4 maps to degree > 14
        let f = TruncatedSeries::poly(1, &[(&[1], 1)]).with_trunc(4);
        let img = [TruncatedSeries::poly(1, &[(&[3], 1)])];
        assert_eq!(f.substitute(&img).unwrap().trunc(), 14);
        // constant term with a truncated series is refused
        let img = [TruncatedSeries::poly(1, &[(&[0], 1), (&[1], 1)])];
        assert!(matches!(
            f.substitute(&img),
            Err(Error::InsufficientTruncation(_))
        ));
        // but fine for a polynomial
        let g = TruncatedSeries::poly(1, &[(&[2], 1)]);
        assert_eq!(
            g.substitute(&img).unwrap(),
            TruncatedSeries::poly(1, &[(&[0], 1), (&[1], 2), (&[2], 1)])
        );
    }

    #[test]
    fn valuation_examples() {
        let f = TruncatedSeries::poly(2, &[(&[0, 2], 1), (&[3, 0], -1)]);
        let ord = MonomialOrder::from_ints(&[1, 2]).unwrap();
        assert_eq!(f.v_ell(&ord).unwrap(), e(&[3, 0]));
        let g = TruncatedSeries::poly(2, &[(&[1, 1], 1), (&[2, 1], 1)]);
        for w in [[1, 1], [1, 5], [7, 2]] {
            let ord = MonomialOrder::from_ints(&w).unwrap();
            assert_eq!(g.v_ell(&ord).unwrap(), e(&[1, 1]));
        }
        let h = TruncatedSeries::poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(
            h.v_ell(&MonomialOrder::graded(2, TieBreak::Lex)).unwrap(),
            e(&[1, 0])
        );
        assert!(matches!(
            TruncatedSeries::zero(2, 5).v_ell(&ord),
            Err(Error::NoValuation)
        ));
    }

    #[test]
    fn majorant_norm_examples() {
        let rho = PolyRadius::new(0.5).unwrap();
        assert_eq!(TruncatedSeries::zero(2, 3).majorant_norm(rho), 0.0);
        let f = TruncatedSeries::poly(2, &[(&[0, 8], 24)]);
        assert!((f.majorant_norm(rho) - 24.0 / 256.0).abs() < 1e-15);
        let g = TruncatedSeries::poly(2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(g.majorant_norm(PolyRadius::new(1.0).unwrap()), 3.0);
        assert!(PolyRadius::new(0.0).is_err());
    }

    #[test]
    fn sharp_product_keeps_more_order() {
        let p = TruncatedSeries::poly(2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        let y = TruncatedSeries::poly(2, &[(&[1, 0], 1)]).with_trunc(6);
        assert_eq!(p.mul(&y).unwrap().trunc(), 6);
        assert_eq!(p.mul_sharp(&y).unwrap().trunc(), 8);
    }

    #[test]
    fn float_cancellation_is_pruned() {
        let a = TruncatedSeries::from_terms(
            1,
            EXACT,
            [(e(&[1]), Scalar::from_f64(0.1, 0.0, 64))],
        )
        .unwrap();
        let b = a.scale(&Scalar::from_f64(3.0, 0.0, 64));
        let c = b.sub(&a.scale(&Scalar::from_f64(3.0, 0.0, 64))).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn derivatives() {
        let f = TruncatedSeries::poly(2, &[(&[3, 1], 2), (&[0, 2], 1)]).with_trunc(6);
        let d = f.derivative(0);
        assert_eq!(d.trunc(), 5);
        assert_eq!(d, TruncatedSeries::poly(2, &[(&[2, 1], 6)]).with_trunc(5));
        let ed = f.euler_derivative(1);
        assert_eq!(ed, TruncatedSeries::poly(2, &[(&[3, 1], 2), (&[0, 2], 2)]).with_trunc(6));
    }
}
