//! Blow-up charts, ramification, chart changes, rotation averaging and the
//! dominant-term data of a germ.

use std::fmt;

use rug::{Complex, Integer, Rational};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{order_to_json, scalar_to_json};
use crate::order::MonomialOrder;
use crate::roots::{cluster, poly_roots};
use crate::scalar::Scalar;
use crate::series::{trunc_add, Exponent, TruncatedSeries, EXACT};
use crate::weierstrass::Germ;

/// Chart of the point blow-up at the origin: a finite slope ξ or ∞.
#[derive(Clone, Debug, PartialEq)]
pub enum BlowupChart {
    Finite(Scalar),
    Infinity,
}

impl BlowupChart {
    /// Parses `inf` or a complex literal such as `1/2`, `-i`, `0.3+0.1i`.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(BlowupChart::Infinity),
            other => Scalar::parse_complex(other, prec).map(BlowupChart::Finite),
        }
    }
}

impl fmt::Display for BlowupChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowupChart::Finite(x) => write!(f, "{x}"),
            BlowupChart::Infinity => write!(f, "inf"),
        }
    }
}

fn var(dim: usize, i: usize) -> TruncatedSeries {
    TruncatedSeries::variable(dim, i)
}

/// `f ∘ b_ξ` with `b_ξ(v) = (v₂, (ξ+v₁)v₂, v″)`, or `b_∞(v) = (v₁v₂, v₂, v″)`.
pub fn blowup(f: &TruncatedSeries, chart: &BlowupChart) -> Result<TruncatedSeries> {
    let d = f.dim();
    if d < 2 {
        return Err(Error::InvalidArgument("blow-up needs at least two variables".into()));
    }
    let mut images: Vec<TruncatedSeries> = (0..d).map(|i| var(d, i)).collect();
    let v1 = var(d, 0);
    let v2 = var(d, 1);
    match chart {
        BlowupChart::Finite(xi) => {
            let shifted = v1.add(&TruncatedSeries::constant(d, xi.clone()))?;
            images[0] = v2.clone();
            images[1] = shifted.mul(&v2)?;
        }
        BlowupChart::Infinity => {
            images[0] = v1.mul(&v2)?;
            images[1] = v2;
        }
    }
    f.substitute(&images)
}

/// `f(t₁ᵏ, t′)`.
pub fn ramify(f: &TruncatedSeries, k: u32) -> Result<TruncatedSeries> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("ramification order must be ≥ 2, got {k}")));
    }
    let d = f.dim();
    let mut images: Vec<TruncatedSeries> = (0..d).map(|i| var(d, i)).collect();
    images[0] = TruncatedSeries::monomial(d, Exponent::unit(d, 0).scale(k), Scalar::one());
    f.substitute(&images)
}

/// Average of `g` over `t₁ ↦ e^{2πij/k} t₁`, and the same series written in
/// `x₁ = t₁ᵏ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationAverage {
    pub averaged: TruncatedSeries,
    pub descended: TruncatedSeries,
}

pub fn rotation_average(g: &TruncatedSeries, k: u32) -> Result<RotationAverage> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("rotation order must be ≥ 2, got {k}")));
    }
    let averaged = g.map_terms(|e, c| (e.get(0) % k == 0).then(|| (e.clone(), c.clone())));
    let t = if g.trunc() == EXACT {
        EXACT
    } else {
        g.trunc().div_euclid(i64::from(k))
    };
    let descended_terms = averaged.terms().iter().map(|(e, c)| {
        let mut v = e.as_slice().to_vec();
        v[0] /= k;
        (Exponent::new(v), c.clone())
    });
    let descended = TruncatedSeries::from_terms(g.dim(), t, descended_terms)?;
    Ok(RotationAverage {
        averaged,
        descended,
    })
}

/// Rewrites `f ∘ b_ξ` in the chart at ζ by `v₁ ↦ v₁ + ζ − ξ`.
///
/// A truncated input must have the shape of a pulled-back series (each term
/// `v₁ʲ v₂ᵐ ⋯` with `j ≤ m`); the result is then reliable through degree
/// `⌊N/2⌋`.
pub fn chart_shift(f_xi: &TruncatedSeries, xi: &Scalar, zeta: &Scalar) -> Result<TruncatedSeries> {
    let d = f_xi.dim();
    if d < 2 {
        return Err(Error::InvalidArgument("chart change needs at least two variables".into()));
    }
    let delta = zeta - xi;
    if delta.is_zero() {
        return Ok(f_xi.clone());
    }
    let mut images: Vec<TruncatedSeries> = (0..d).map(|i| var(d, i)).collect();
    images[0] = var(d, 0).add(&TruncatedSeries::constant(d, delta))?;
    if f_xi.is_exact_trunc() {
        return f_xi.substitute(&images);
    }
    if let Some((e, _)) = f_xi.terms().iter().find(|(e, _)| e.get(0) > e.get(1)) {
        return Err(Error::InsufficientTruncation(format!(
            "term {:?} is not of blown-up form; chart change of a truncated series needs v1-exponent ≤ v2-exponent",
            e.as_slice()
        )));
    }
    let t = f_xi.trunc().div_euclid(2);
    Ok(f_xi.with_trunc(EXACT).substitute(&images)?.truncate(t).with_trunc(t))
}

/// Order on the variables `x₃,…,x_d`; absent in two dimensions.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseOrder {
    Empty,
    Order(MonomialOrder),
}

/// A root of `H(1, ξ)` or the point at infinity, with multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartRoot {
    /// `None` stands for ∞.
    pub value: Option<Scalar>,
    pub mult: usize,
}

impl ChartRoot {
    pub fn is_infinite(&self) -> bool {
        self.value.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DominantData {
    pub base_order: BaseOrder,
    pub completed_order: MonomialOrder,
    pub h: u32,
    /// Homogeneous bivariate form of degree `h` in `(x₁, x₂)`.
    pub form: TruncatedSeries,
    pub a: Exponent,
    pub roots: Vec<ChartRoot>,
}

impl DominantData {
    /// `H(ξ)` for the chart at ξ: `H(1, ξ)`, or `H(0, 1)` at infinity.
    pub fn form_at(&self, chart: &BlowupChart) -> Scalar {
        let mut acc = Scalar::zero();
        for (e, c) in self.form.terms() {
            let w = match chart {
                BlowupChart::Finite(xi) => xi.pow(e.get(1)),
                BlowupChart::Infinity if e.get(0) == 0 => Scalar::one(),
                BlowupChart::Infinity => Scalar::zero(),
            };
            acc = &acc + &(c * &w);
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let form: Vec<Value> = self
            .form
            .terms()
            .iter()
            .map(|(e, c)| json!([e.get(0), e.get(1), scalar_to_json(c)]))
            .collect();
        let roots: Vec<Value> = self
            .roots
            .iter()
            .map(|r| match &r.value {
                None => json!({"value": "inf", "mult": r.mult}),
                Some(v) => json!({"value": v.to_string(), "mult": r.mult}),
            })
            .collect();
        json!({
            "h": self.h,
            "H": form,
            "a": self.a.as_slice(),
            "roots": roots,
            "completed_order": order_to_json(&self.completed_order),
        })
    }
}

/// Leading form data of `P` used to choose blow-up charts.
///
/// For `d = 2`, `H` is the lowest-degree homogeneous part of `P`. For `d > 2`,
/// `a` is the base-order minimum of the `x″`-exponents, and `H` the lowest
/// homogeneous part of the coefficient of `x″ᵃ`; the weights on `x₁, x₂` are
/// then `1/(2·h·L)` with `L` the common denominator of the base weights.
pub fn dominant_data(germ: &Germ, base: &BaseOrder, prec: u32) -> Result<DominantData> {
    let p = germ.series();
    let d = p.dim();
    if d < 2 {
        return Err(Error::InvalidArgument("dominant data needs at least two variables".into()));
    }
    if p.is_zero() {
        return Err(Error::ZeroGerm);
    }
    let (a, slice, completed) = match (d, base) {
        (2, BaseOrder::Empty) => (Exponent::new(vec![]), p.clone(), germ.order().clone()),
        (2, BaseOrder::Order(_)) => {
            return Err(Error::InvalidArgument(
                "a base order is only meaningful for d > 2".into(),
            ))
        }
        (_, BaseOrder::Empty) => {
            return Err(Error::InvalidArgument(format!(
                "d = {d} needs a base order on the last {} variables",
                d - 2
            )))
        }
        (_, BaseOrder::Order(ord)) => {
            if ord.dim() != d - 2 {
                return Err(Error::DimensionMismatch {
                    expected: d - 2,
                    found: ord.dim(),
                });
            }
            let tail = |e: &Exponent| Exponent::new(e.as_slice()[2..].to_vec());
            let a = p
                .terms()
                .keys()
                .map(tail)
                .min_by(|x, y| ord.cmp(x, y))
                .expect("nonzero");
            let wa = ord.weight(&a);
            if let Some(b) = p
                .terms()
                .keys()
                .map(tail)
                .find(|b| *b != a && ord.weight(b) == wa)
            {
                return Err(Error::InvalidArgument(format!(
                    "base weights do not separate x'' exponents {:?} and {:?}",
                    a.as_slice(),
                    b.as_slice()
                )));
            }
            let slice = TruncatedSeries::from_terms(
                2,
                trunc_add(p.trunc(), -a.degree()),
                p.terms()
                    .iter()
                    .filter(|(e, _)| tail(e) == a)
                    .map(|(e, c)| (Exponent::new(e.as_slice()[..2].to_vec()), c.clone())),
            )?;
            (a, slice, ord.clone())
        }
    };
    let h = slice.min_degree().expect("slice is nonzero");
    if h > slice.trunc() {
        return Err(Error::InsufficientTruncation(
            "lowest homogeneous part is not determined by the stored terms".into(),
        ));
    }
    let form = TruncatedSeries::from_terms(
        2,
        EXACT,
        slice
            .terms()
            .iter()
            .filter(|(e, _)| e.degree() == h)
            .map(|(e, c)| (Exponent::new(e.as_slice()[..2].to_vec()), c.clone())),
    )?;
    let h = h as u32;

    let completed_order = if d == 2 {
        completed
    } else {
        let lcm = completed
            .weights()
            .iter()
            .fold(Integer::from(1), |acc, w| acc.lcm(w.denom()));
        let small = Rational::from((Integer::from(1), Integer::from(2 * h.max(1)) * lcm));
        let mut weights = vec![small.clone(), small];
        weights.extend(completed.weights().iter().cloned());
        MonomialOrder::new(weights, completed.tiebreak())?
    };

    // H(1, ξ) = Σ c_j ξʲ with c_j the coefficient of x₁^{h−j} x₂ʲ
    let mut xi_coeffs = vec![Scalar::zero(); h as usize + 1];
    for (e, c) in form.terms() {
        xi_coeffs[e.get(1) as usize] = c.clone();
    }
    let deg_xi = xi_coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    let low = xi_coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(ChartRoot {
            value: Some(Scalar::zero()),
            mult: low,
        });
    }
    let reduced: Vec<Scalar> = xi_coeffs[low..=deg_xi].to_vec();
    if reduced.len() == 2 && reduced.iter().all(Scalar::is_exact) {
        roots.push(ChartRoot {
            value: Some(&(-&reduced[0]) / &reduced[1]),
            mult: 1,
        });
    } else if reduced.len() > 2 {
        let cs: Vec<Complex> = reduced.iter().map(|c| c.to_complex(prec)).collect();
        let found = poly_roots(&cs, prec);
        let radius = 2f64.powi(-(prec as i32) / 4);
        for cl in cluster(&found, radius) {
            roots.push(ChartRoot {
                value: Some(Scalar::Float(cl.center)),
                mult: cl.mult,
            });
        }
    }
    let inf = h as usize - deg_xi;
    if inf > 0 {
        roots.push(ChartRoot {
            value: None,
            mult: inf,
        });
    }
    Ok(DominantData {
        base_order: base.clone(),
        completed_order,
        h,
        form,
        a,
        roots,
    })
}
