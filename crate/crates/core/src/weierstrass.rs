//! Generalized Weierstrass division by a germ and the unique rewriting
//! `f = Σ gₙ Pⁿ` with every `gₙ` supported off the cone `v_ℓ(P) + ℕ^d`.
//!
//! Finite truncations are handled in a truncated model: `f` and `P` are
//! replaced by their jets of degree `N = min(f.trunc, P.trunc)` and every
//! intermediate term of degree above `N` is discarded. Within that model the
//! results are the unique solutions of the corresponding linear systems, so
//! they do not depend on the order in which terms are eliminated.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{order_from_json, order_to_json, series_from_json, series_to_json, trunc_to_json};
use crate::order::{MonomialOrder, OrderKey};
use crate::scalar::Scalar;
use crate::series::{accumulate, trunc_add, trunc_mul, Exponent, TruncatedSeries, EXACT};

/// Steps allowed when both inputs are exact before giving up on termination.
const EXACT_STEP_LIMIT: usize = 200_000;

/// A non-unit, nonzero series `P` together with its leading data under an order.
#[derive(Clone, Debug, PartialEq)]
pub struct Germ {
    p: TruncatedSeries,
    ord: MonomialOrder,
    lead_exp: Exponent,
    lead_coeff: Scalar,
}

impl Germ {
    pub fn new(p: TruncatedSeries, ord: MonomialOrder) -> Result<Self> {
        if ord.dim() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                found: ord.dim(),
            });
        }
        if p.is_zero() {
            return Err(Error::ZeroGerm);
        }
        if !p.constant_term().is_zero() {
            return Err(Error::UnitGerm);
        }
        let lead_exp = p.v_ell(&ord)?;
        if !p.is_exact_trunc() {
            // an unknown term has degree > trunc and so weight ≥ (trunc+1)·min ℓᵢ
            let min_w = (0..p.dim())
                .map(|i| ord.scaled_weight(&Exponent::unit(p.dim(), i)))
                .min()
                .unwrap_or(1);
            let bound = u128::try_from(p.trunc() + 1).unwrap_or(0) * min_w;
            if ord.scaled_weight(&lead_exp) > bound {
                return Err(Error::InsufficientTruncation(format!(
                    "leading exponent {:?} of the germ is not determined by terms of degree ≤ {}",
                    lead_exp.as_slice(),
                    p.trunc()
                )));
            }
        }
        let lead_coeff = p.coeff(&lead_exp).cloned().expect("lead is stored");
        Ok(Germ {
            p,
            ord,
            lead_exp,
            lead_coeff,
        })
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.p
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.ord
    }

    pub fn lead_exp(&self) -> &Exponent {
        &self.lead_exp
    }

    pub fn lead_coeff(&self) -> &Scalar {
        &self.lead_coeff
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    /// Total degree of the leading exponent.
    pub fn lead_degree(&self) -> i64 {
        self.lead_exp.degree()
    }

    /// Order (lowest total degree) of `P`.
    pub fn p_order(&self) -> i64 {
        self.p.effective_order()
    }
}

/// True iff `e` lies outside the cone `v_ℓ(P) + ℕ^d`.
pub fn delta_member(e: &Exponent, germ: &Germ) -> bool {
    !e.dominates(&germ.lead_exp)
}

/// True iff no stored exponent of `s` lies in the cone of the germ.
pub fn is_delta_supported(s: &TruncatedSeries, germ: &Germ) -> bool {
    s.terms().keys().all(|e| delta_member(e, germ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisionResult {
    pub q: TruncatedSeries,
    pub r: TruncatedSeries,
}

impl DivisionResult {
    pub fn to_json(&self) -> Value {
        json!({"q": series_to_json(&self.q), "r": series_to_json(&self.r)})
    }
}

/// Which pending term the division eliminates next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// The order-minimal one; terminates in finitely many steps.
    OrderMinimal,
    /// A uniformly random one drawn from a seeded generator. Terminates with
    /// probability one and yields the same result.
    Shuffled(u64),
}

/// Running remainder with an index of the terms still to be eliminated.
struct Running<'a> {
    ord: &'a MonomialOrder,
    lead: &'a Exponent,
    limit: i64,
    track_all: bool,
    terms: BTreeMap<Exponent, Scalar>,
    pending: BTreeMap<OrderKey, Exponent>,
}

impl<'a> Running<'a> {
    fn new(ord: &'a MonomialOrder, lead: &'a Exponent, limit: i64, track_all: bool) -> Self {
        Running {
            ord,
            lead,
            limit,
            track_all,
            terms: BTreeMap::new(),
            pending: BTreeMap::new(),
        }
    }

    fn tracked(&self, e: &Exponent) -> bool {
        self.track_all || e.dominates(self.lead)
    }

    fn add(&mut self, e: Exponent, c: Scalar) {
        use std::collections::btree_map::Entry;
        if e.degree() > self.limit || c.is_zero() {
            return;
        }
        let tracked = self.tracked(&e);
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if tracked {
                    self.pending.insert(self.ord.key(v.key()), v.key().clone());
                }
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    let (e, _) = o.remove_entry();
                    if tracked {
                        self.pending.remove(&self.ord.key(&e));
                    }
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn take(&mut self, e: &Exponent) -> Scalar {
        self.pending.remove(&self.ord.key(e));
        self.terms.remove(e).expect("pending term is stored")
    }

    fn next(&mut self, rng: Option<&mut ChaCha8Rng>) -> Option<(Exponent, Scalar)> {
        let e = match rng {
            None => self.pending.values().next()?.clone(),
            Some(rng) => {
                if self.pending.is_empty() {
                    return None;
                }
                let i = rng.gen_range(0..self.pending.len());
                self.pending.values().nth(i)?.clone()
            }
        };
        let c = self.take(&e);
        Some((e, c))
    }
}

fn check_dims(f: &TruncatedSeries, germ: &Germ) -> Result<()> {
    if f.dim() != germ.dim() {
        return Err(Error::DimensionMismatch {
            expected: germ.dim(),
            found: f.dim(),
        });
    }
    Ok(())
}

fn exact_budget_exceeded(steps: usize) -> Result<()> {
    if steps > EXACT_STEP_LIMIT {
        return Err(Error::InsufficientTruncation(
            "elimination on exact inputs does not terminate; give the series a finite truncation"
                .into(),
        ));
    }
    Ok(())
}

fn scale_of(a: &TruncatedSeries, b: &TruncatedSeries) -> Option<Float> {
    match (a.max_magnitude(), b.max_magnitude()) {
        (Some(x), Some(y)) => Some(x * y),
        (x, _) => x,
    }
}

/// Division `g = q·P + r` with `r` supported off the cone of `v_ℓ(P)`.
pub fn wdivide(g: &TruncatedSeries, germ: &Germ) -> Result<DivisionResult> {
    wdivide_with(g, germ, Selection::OrderMinimal)
}

pub fn wdivide_with(g: &TruncatedSeries, germ: &Germ, selection: Selection) -> Result<DivisionResult> {
    check_dims(g, germ)?;
    let n = g.trunc().min(germ.p.trunc());
    let exact = n == EXACT;
    let lead = &germ.lead_exp;
    let inv_lc = germ.lead_coeff.inv()?;
    let rest: Vec<(Exponent, Scalar)> = germ
        .p
        .terms()
        .iter()
        .filter(|(e, _)| *e != lead && e.degree() <= n)
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();

    let mut run = Running::new(&germ.ord, lead, n, false);
    for (e, c) in g.terms() {
        run.add(e.clone(), c.clone());
    }
    let mut rng = match selection {
        Selection::OrderMinimal => None,
        Selection::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut q_terms = BTreeMap::new();
    let mut steps = 0usize;
    while let Some((beta, c)) = run.next(rng.as_mut()) {
        steps += 1;
        if exact {
            exact_budget_exceeded(steps)?;
        }
        let gamma = beta.checked_sub(lead).expect("pending terms lie in the cone");
        let m = &c * &inv_lc;
        for (e, pc) in &rest {
            run.add(e.add(&gamma), -&(&m * pc));
        }
        accumulate(&mut q_terms, gamma, m);
    }
    let dim = g.dim();
    let q_trunc = if exact {
        EXACT
    } else {
        n - germ.lead_degree()
    };
    let scale = scale_of(g, &TruncatedSeries::constant(dim, Scalar::one()));
    let q_scale = scale_of(g, &TruncatedSeries::constant(dim, inv_lc.clone()));
    Ok(DivisionResult {
        q: TruncatedSeries::from_parts(dim, q_trunc, q_terms, q_scale),
        r: TruncatedSeries::from_parts(dim, n, run.terms, scale),
    })
}

/// Coefficients `g₀,…,g_{M−1}` of `f = Σ gₙ Pⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PExpansion {
    germ: Germ,
    coeffs: Vec<TruncatedSeries>,
    trunc: i64,
}

impl PExpansion {
    /// Assembles an expansion from given coefficients. Each must have the
    /// germ's dimension and avoid the cone of its leading exponent.
    pub fn new(germ: Germ, coeffs: Vec<TruncatedSeries>, trunc: i64) -> Result<Self> {
        for g in &coeffs {
            check_dims(g, &germ)?;
            if !is_delta_supported(g, &germ) {
                return Err(Error::InvalidArgument(
                    "expansion coefficient has a term in the cone of the leading exponent".into(),
                ));
            }
        }
        Ok(PExpansion {
            germ,
            coeffs,
            trunc,
        })
    }

    pub fn germ(&self) -> &Germ {
        &self.germ
    }

    pub fn coeffs(&self) -> &[TruncatedSeries] {
        &self.coeffs
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    /// Degree up to which `Σ gₙ Pⁿ` reproduces the source series.
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// The expansion read as a series in `(x₁,…,x_d,t)`: `Σ gₙ(x) tⁿ`.
    pub fn to_series_with_t(&self) -> TruncatedSeries {
        let d = self.germ.dim();
        let mut trunc = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, g)| trunc_add(g.trunc(), n as i64))
            .min()
            .unwrap_or(EXACT);
        if self.trunc != EXACT {
            trunc = trunc.min(self.coeffs.len() as i64 - 1);
        }
        let mut terms = Vec::new();
        for (n, g) in self.coeffs.iter().enumerate() {
            for (e, c) in g.terms() {
                let mut v = e.as_slice().to_vec();
                v.push(n as u32);
                terms.push((Exponent::new(v), c.clone()));
            }
        }
        TruncatedSeries::from_terms(d + 1, trunc, terms).expect("dimensions agree")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "germ": series_to_json(&self.germ.p),
            "order": order_to_json(&self.germ.ord),
            "trunc": trunc_to_json(self.trunc),
            "coeffs": self.coeffs.iter().map(series_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, prec: u32) -> Result<Self> {
        let m = v
            .as_object()
            .ok_or_else(|| Error::Parse("$: expected an expansion object".into()))?;
        let get = |k: &str| {
            m.get(k)
                .ok_or_else(|| Error::Parse(format!("$: missing field {k:?}")))
        };
        let p = series_from_json(get("germ")?, prec, "$.germ")?;
        let ord = order_from_json(get("order")?, "$.order")?;
        let germ = Germ::new(p, ord)?;
        let coeffs = get("coeffs")?
            .as_array()
            .ok_or_else(|| Error::Parse("$.coeffs: expected an array".into()))?
            .iter()
            .enumerate()
            .map(|(i, c)| series_from_json(c, prec, &format!("$.coeffs[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let trunc = match m.get("trunc") {
            Some(Value::Null) => EXACT,
            Some(t) => t
                .as_i64()
                .ok_or_else(|| Error::Parse("$.trunc: expected an integer or null".into()))?,
            None => coeffs
                .iter()
                .enumerate()
                .map(|(n, g)| trunc_add(g.trunc(), trunc_mul(germ.lead_degree(), n as i64)))
                .min()
                .unwrap_or(EXACT),
        };
        PExpansion::new(germ, coeffs, trunc)
    }
}

/// Largest `k` with `β − k·L ∈ ℕ^d`.
fn cone_depth(beta: &Exponent, lead: &Exponent) -> u32 {
    beta.iter()
        .zip(lead.iter())
        .filter(|(_, &l)| l > 0)
        .map(|(&b, &l)| b / l)
        .min()
        .unwrap_or(0)
}

/// The unique `f = Σ gₙ Pⁿ` with Δ-supported coefficients, first `depth` terms.
///
/// Terms are eliminated jointly: the order-minimal pending term `c·x^β` goes
/// to `g_n` with `n` the number of times the leading exponent fits into `β`.
/// `g_n` is reliable through degree `N − n·deg v_ℓ(P)`.
pub fn p_expand(f: &TruncatedSeries, germ: &Germ, depth: usize) -> Result<PExpansion> {
    check_dims(f, germ)?;
    if depth == 0 {
        return Err(Error::InvalidArgument("expansion depth must be at least 1".into()));
    }
    let n_tr = f.trunc().min(germ.p.trunc());
    let exact = n_tr == EXACT;
    let lead = &germ.lead_exp;
    let dim = f.dim();
    let p = germ.p.truncate(n_tr);
    let inv_lc = germ.lead_coeff.inv()?;

    let mut powers: Vec<TruncatedSeries> = vec![TruncatedSeries::constant(dim, Scalar::one())];
    let mut inv_lc_pows: Vec<Scalar> = vec![Scalar::one()];
    let mut run = Running::new(&germ.ord, lead, n_tr, true);
    for (e, c) in f.terms() {
        run.add(e.clone(), c.clone());
    }
    let mut gs: Vec<BTreeMap<Exponent, Scalar>> = Vec::new();
    let mut steps = 0usize;
    while let Some((beta, c)) = run.next(None) {
        steps += 1;
        if exact {
            exact_budget_exceeded(steps)?;
        }
        let k = cone_depth(&beta, lead) as usize;
        while powers.len() <= k {
            let next = powers.last().unwrap().mul_to(&p, n_tr);
            powers.push(next);
            let next_inv = inv_lc_pows.last().unwrap() * &inv_lc;
            inv_lc_pows.push(next_inv);
        }
        let lead_k = lead.scale(k as u32);
        let gamma = beta.checked_sub(&lead_k).expect("k fits");
        let m = &c * &inv_lc_pows[k];
        for (e, pc) in powers[k].terms() {
            if *e == lead_k {
                continue;
            }
            run.add(e.add(&gamma), -&(&m * pc));
        }
        if gs.len() <= k {
            gs.resize_with(k + 1, BTreeMap::new);
        }
        accumulate(&mut gs[k], gamma, m);
    }

    let deg_l = germ.lead_degree();
    let discarded = gs.iter().skip(depth).any(|g| !g.is_empty());
    let trunc = if exact {
        if discarded {
            trunc_mul(germ.p_order(), depth as i64) - 1
        } else {
            EXACT
        }
    } else if depth as i64 > n_tr / deg_l {
        n_tr
    } else {
        n_tr.min(trunc_mul(germ.p_order(), depth as i64) - 1)
    };
    gs.resize_with(depth.max(gs.len()), BTreeMap::new);
    let scale = f.max_magnitude();
    let coeffs = gs
        .into_iter()
        .take(depth)
        .enumerate()
        .map(|(n, terms)| {
            let t = if exact {
                EXACT
            } else {
                n_tr - n as i64 * deg_l
            };
            TruncatedSeries::from_parts(dim, t, terms, scale.clone())
        })
        .collect();
    Ok(PExpansion {
        germ: germ.clone(),
        coeffs,
        trunc,
    })
}

/// `T_ℓ f` as the coefficient list of `Σ gₙ(x) tⁿ`; same data as [`p_expand`].
pub fn t_map(f: &TruncatedSeries, germ: &Germ, depth: usize) -> Result<PExpansion> {
    p_expand(f, germ, depth)
}

/// `Σ gₙ Pⁿ`, the left inverse of [`t_map`].
pub fn t_substitute(exp: &PExpansion) -> TruncatedSeries {
    let germ = &exp.germ;
    let dim = germ.dim();
    let deg_l = germ.lead_degree();
    let t = exp
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, g)| trunc_add(g.trunc(), trunc_mul(deg_l, n as i64)))
        .min()
        .unwrap_or(EXACT)
        .min(exp.trunc)
        .min(germ.p.trunc());
    let mut power = TruncatedSeries::constant(dim, Scalar::one()).with_trunc(t);
    let mut sum = TruncatedSeries::zero(dim, t);
    for (n, g) in exp.coeffs.iter().enumerate() {
        if n > 0 {
            power = power.mul_to(&germ.p, t);
        }
        if !g.is_zero() {
            let term = g.mul_to(&power, t);
            sum = sum.add(&term).expect("same dimension");
        }
    }
    sum.with_trunc(t)
}

pub fn germ_to_json(germ: &Germ) -> Value {
    json!({
        "series": series_to_json(&germ.p),
        "order": order_to_json(&germ.ord),
        "lead_exp": germ.lead_exp.as_slice(),
    })
}
