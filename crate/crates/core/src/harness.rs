//! Example series and residual checks for the worked examples.
//!
//! The ODE example `y = Σ m! P^{m+1}` solves `P² y_x = P_x y − P P_x`. Writing
//! `y = F(P)` gives `P² y_x − P_x y + P P_x = P_x·(t²F′(t) − F(t) + t)` at
//! `t = P`, so the numeric check is done on the one-variable equation
//! `t²F′ = F − t` along a ray.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float, Integer, Rational};
use serde_json::{json, Value};

use crate::borel::{
    borel_transform, p_k_sum, singular_directions, specialize, sum_series, wrap_angle, LaplaceOptions,
    OneVarSeries, SingularDirectionReport, SumResult,
};
use crate::error::{Error, Result};
use crate::gevrey::{fit_gevrey, norm_sequence, GevreyEstimate, NormSequence, DEFAULT_N_MIN};
use crate::json::{series_to_json, trunc_to_json};
use crate::order::{MonomialOrder, TieBreak};
use crate::scalar::Scalar;
use crate::series::{Exponent, PolyRadius, TruncatedSeries, EXACT};
use crate::transforms::{blowup, BlowupChart};
use crate::weierstrass::{germ_to_json, p_expand, wdivide, Germ, PExpansion};

fn factorial(n: u32) -> Scalar {
    Scalar::from_rational(Rational::from(Integer::from(Integer::factorial(n))))
}

fn cabs(z: &Complex) -> f64 {
    Float::with_val(64, z.abs_ref()).to_f64()
}

fn complex_json(z: &Complex) -> Value {
    json!([z.real().to_f64(), z.imag().to_f64()])
}

/// Names accepted by [`gen_example`].
pub const EXAMPLES: [&str; 3] = ["remark79", "ode-euler", "pde-quasihom"];

#[derive(Clone, Debug)]
pub struct GeneratedExample {
    pub name: String,
    pub series: TruncatedSeries,
    pub germ: Germ,
    pub description: String,
}

impl GeneratedExample {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "description": self.description,
            "series": series_to_json(&self.series),
            "germ": germ_to_json(&self.germ),
        })
    }
}

/// `x₁² − x₂²`, variables `(x, ε)`.
pub fn ode_germ_series() -> TruncatedSeries {
    TruncatedSeries::poly(2, &[(&[2, 0], 1), (&[0, 2], -1)])
}

/// `x₂² − x₁³`, quasi-homogeneous for the weights `(2, 3)`.
pub fn pde_germ_series() -> TruncatedSeries {
    TruncatedSeries::poly(2, &[(&[0, 2], 1), (&[3, 0], -1)])
}

/// `Σ_{n≥0} n!·Pⁿ⁺¹·m` truncated at degree `trunc`, where every `Pⁿ⁺¹·m`
/// has order at least `base + step·n`.
fn factorial_p_series(p: &TruncatedSeries, m: &TruncatedSeries, base: i64, step: i64, trunc: i64) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::zero(p.dim(), trunc);
    let mut pw = p.truncate(trunc);
    let mut n = 0u32;
    while base + step * i64::from(n) <= trunc {
        let term = pw.mul(m)?.scale(&factorial(n)).with_trunc(trunc);
        acc = acc.add(&term)?;
        pw = pw.mul(p)?.with_trunc(trunc);
        n += 1;
    }
    Ok(acc.with_trunc(trunc))
}

/// One of the worked examples, truncated at total degree `trunc`.
pub fn gen_example(name: &str, trunc: i64) -> Result<GeneratedExample> {
    if trunc < 0 {
        return Err(Error::InvalidArgument("truncation must be ≥ 0".into()));
    }
    match name {
        "remark79" => {
            // Σ n! x₂^{2n} (x₁x₂)ⁿ, the n-th term has degree 4n
            let terms = (0..)
                .take_while(|n| 4 * i64::from(*n) <= trunc)
                .map(|n: u32| (Exponent::new(vec![n, 3 * n]), factorial(n)));
            let series = TruncatedSeries::from_terms(2, trunc, terms)?;
            let germ = Germ::new(TruncatedSeries::poly(2, &[(&[1, 1], 1)]), MonomialOrder::graded(2, TieBreak::Lex))?;
            Ok(GeneratedExample {
                name: name.into(),
                series,
                germ,
                description: "sum of n! x2^(2n) (x1 x2)^n".into(),
            })
        }
        "ode-euler" => {
            let p = ode_germ_series();
            let one = TruncatedSeries::constant(2, Scalar::one());
            let series = factorial_p_series(&p, &one, 2, 2, trunc)?;
            Ok(GeneratedExample {
                name: name.into(),
                series,
                germ: Germ::new(p, MonomialOrder::graded(2, TieBreak::Lex))?,
                description: "y = sum of m! P^(m+1), P = x^2 - eps^2; solves P^2 y' = P' y - P P'".into(),
            })
        }
        "pde-quasihom" => {
            let p = pde_germ_series();
            let x1 = TruncatedSeries::variable(2, 0);
            let series = factorial_p_series(&p, &x1, 3, 2, trunc)?;
            Ok(GeneratedExample {
                name: name.into(),
                series,
                germ: Germ::new(p, MonomialOrder::from_ints(&[2, 3])?)?,
                description: "f = x1 * sum of n! P^(n+1), P = x2^2 - x1^3".into(),
            })
        }
        other => Err(Error::UnknownExample(other.into())),
    }
}

/// Outcome of a residual check.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    /// Lowest degree of the formal residual; `None` when it vanishes to the
    /// residual's truncation.
    pub formal_valuation: Option<i64>,
    pub residual_trunc: i64,
    pub numeric_max_residual: Option<f64>,
    pub parameters: Value,
}

impl ResidualReport {
    pub fn exact_to_truncation(&self) -> bool {
        self.formal_valuation.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "formal_valuation": match self.formal_valuation {
                Some(v) => json!(v),
                None => json!("exact-to-truncation"),
            },
            "residual_trunc": trunc_to_json(self.residual_trunc),
            "numeric_max_residual": self.numeric_max_residual,
            "parameters": self.parameters,
        })
    }
}

fn formal_report(residual: &TruncatedSeries, parameters: Value) -> ResidualReport {
    ResidualReport {
        formal_valuation: residual.min_degree(),
        residual_trunc: residual.trunc(),
        numeric_max_residual: None,
        parameters,
    }
}

fn check_dim2(s: &TruncatedSeries, what: &str) -> Result<()> {
    if s.dim() != 2 {
        return Err(Error::InvalidArgument(format!("{what} must have two variables")));
    }
    Ok(())
}

/// `P² ∂y/∂x₁ − (∂P/∂x₁)·y + P·∂P/∂x₁`, computed exactly.
pub fn ode_residual(y: &TruncatedSeries, p: &TruncatedSeries) -> Result<TruncatedSeries> {
    check_dim2(y, "y")?;
    check_dim2(p, "P")?;
    let px = p.derivative(0);
    let lhs = p.mul_sharp(p)?.mul_sharp(&y.derivative(0))?;
    lhs.sub(&px.mul_sharp(y)?)?.add(&p.mul_sharp(&px)?)
}

pub fn verify_ode_formal(y: &TruncatedSeries, p: &TruncatedSeries) -> Result<ResidualReport> {
    let r = ode_residual(y, p)?;
    Ok(formal_report(
        &r,
        json!({"equation": "P^2 y_x - P_x y + P P_x", "y_trunc": trunc_to_json(y.trunc())}),
    ))
}

/// Parameters of `(x₂P₂ + αP^{k+1} + PA)·x₁f₁ − (x₁P₁ + βP^{k+1} + PB)·x₂f₂ = h`.
#[derive(Clone, Debug)]
pub struct PdeParams {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub k: u32,
    pub a: Option<TruncatedSeries>,
    pub b: Option<TruncatedSeries>,
}

impl PdeParams {
    /// `α = 0, β = 1, k = 1, A = B = 0`.
    pub fn example() -> Self {
        PdeParams {
            alpha: Scalar::zero(),
            beta: Scalar::one(),
            k: 1,
            a: None,
            b: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PdeReport {
    /// Left-hand side evaluated on `f`.
    pub h: TruncatedSeries,
    /// The stated right-hand side `x₂·∂P/∂x₂·P`.
    pub stated_h: TruncatedSeries,
    /// `h / (x₂·∂P/∂x₂·P)` when the division leaves no remainder.
    pub cofactor: Option<TruncatedSeries>,
    pub matches_stated: bool,
    /// Set when the computed `h` differs from the stated form.
    pub discrepancy: Option<String>,
    /// Residual `h − x₂·∂P/∂x₂·P`.
    pub residual: ResidualReport,
}

impl PdeReport {
    pub fn to_json(&self) -> Value {
        json!({
            "h": series_to_json(&self.h),
            "stated_h": series_to_json(&self.stated_h),
            "cofactor": self.cofactor.as_ref().map(series_to_json),
            "matches_stated": self.matches_stated,
            "discrepancy": self.discrepancy,
            "residual": self.residual.to_json(),
        })
    }
}

/// Evaluates the left-hand side on `f` exactly and compares it with the
/// stated right-hand side `x₂·∂P/∂x₂·P`.
pub fn verify_pde_formal(f: &TruncatedSeries, p: &TruncatedSeries, params: &PdeParams) -> Result<PdeReport> {
    check_dim2(f, "f")?;
    check_dim2(p, "P")?;
    let pk1 = p.pow(params.k + 1);
    let coef = |euler: TruncatedSeries, c: &Scalar, extra: &Option<TruncatedSeries>| -> Result<TruncatedSeries> {
        let mut s = euler.add(&pk1.scale(c))?;
        if let Some(x) = extra {
            check_dim2(x, "coefficient series")?;
            s = s.add(&p.mul_sharp(x)?)?;
        }
        Ok(s)
    };
    let c1 = coef(p.euler_derivative(1), &params.alpha, &params.a)?;
    let c2 = coef(p.euler_derivative(0), &params.beta, &params.b)?;
    let h = c1
        .mul_sharp(&f.euler_derivative(0))?
        .sub(&c2.mul_sharp(&f.euler_derivative(1))?)?;
    let stated_h = p.euler_derivative(1).mul_sharp(p)?;
    let diff = h.sub(&stated_h)?;
    let residual = formal_report(
        &diff,
        json!({
            "alpha": crate::json::scalar_to_json(&params.alpha),
            "beta": crate::json::scalar_to_json(&params.beta),
            "k": params.k,
            "A": params.a.as_ref().map(series_to_json),
            "B": params.b.as_ref().map(series_to_json),
        }),
    );
    let matches_stated = residual.exact_to_truncation();
    let cofactor = if h.is_zero() {
        Some(TruncatedSeries::zero(2, h.trunc()))
    } else if stated_h.is_zero() {
        None
    } else {
        let germ = Germ::new(stated_h.clone(), MonomialOrder::graded(2, TieBreak::Lex))?;
        let d = wdivide(&h, &germ)?;
        d.r.is_zero().then_some(d.q)
    };
    let discrepancy = (!matches_stated).then(|| match &cofactor {
        Some(q) => format!("computed h = ({q}) * x2*dP/dx2*P, stated h = x2*dP/dx2*P"),
        None => "computed h is not a multiple of the stated x2*dP/dx2*P".to_string(),
    });
    Ok(PdeReport {
        h,
        stated_h,
        cofactor,
        matches_stated,
        discrepancy,
        residual,
    })
}

/// Coefficients of `Σ_{m≥0} m!·t^{m+1}`, `len` of them.
pub fn ode_one_var_series(len: usize, prec: u32) -> OneVarSeries {
    let mut f = Float::with_val(prec, 1);
    let mut cs = vec![Complex::new(prec)];
    for m in 0..len.saturating_sub(1) {
        if m > 0 {
            f *= m as u32;
        }
        cs.push(Complex::with_val(prec, (&f, 0)));
    }
    OneVarSeries::new(cs)
}

/// Coefficients used for the numeric ODE check.
pub const ODE_COEFFS: usize = 96;

/// Sums `F = Σ m! t^{m+1}` at `t = |t|·e^{iθ}` and reports
/// `max |t²F′ − F + t|` over the samples.
pub fn verify_ode_numeric(k: f64, theta: f64, t_abs: &[f64], prec: u32) -> Result<ResidualReport> {
    if wrap_angle(theta).abs() < crate::borel::DELTA_MIN {
        let (pole_re, pole_im) = (1.0, 0.0);
        return Err(Error::SingularRay { theta, pole_re, pole_im });
    }
    let s = ode_one_var_series(ODE_COEFFS, prec);
    let mut worst: f64 = 0.0;
    let mut samples = Vec::new();
    for &r in t_abs {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!("sample radius must be positive, got {r}")));
        }
        let t = Complex::with_val(prec, (Float::with_val(prec, r), 0)) * Complex::with_val(prec, (0, theta)).exp();
        let res = sum_series(&s, k, theta, &t, &LaplaceOptions::default())?;
        let resid = ode_reduced_residual(&res);
        worst = worst.max(resid);
        samples.push(json!({"t_abs": r, "residual": resid, "error_estimate": res.total_error()}));
    }
    Ok(ResidualReport {
        formal_valuation: None,
        residual_trunc: EXACT,
        numeric_max_residual: Some(worst),
        parameters: json!({"k": k, "theta": theta, "coefficients": ODE_COEFFS, "samples": samples}),
    })
}

/// `|t²F′ − F + t|` for a computed sum.
pub fn ode_reduced_residual(r: &SumResult) -> f64 {
    let prec = r.value.prec().0;
    let t2 = Complex::with_val(prec, r.t.square_ref());
    let lhs = Complex::with_val(prec, &t2 * &r.derivative);
    let res = Complex::with_val(prec, lhs - &r.value + &r.t);
    cabs(&res)
}

/// Points with `|xⱼ| < R` and `arg P(x) ∈ (a, b)`.
#[derive(Clone, Debug)]
pub struct PSectorSample {
    pub a: f64,
    pub b: f64,
    pub radius: f64,
    pub points: Vec<Vec<Complex>>,
}

fn arg_in(phi: f64, a: f64, b: f64) -> bool {
    let shifted = a + (phi - a).rem_euclid(2.0 * PI);
    shifted > a && shifted < b
}

impl PSectorSample {
    /// Rejection sampling from the polydisk, deterministic in `seed`.
    pub fn generate(p: &TruncatedSeries, a: f64, b: f64, radius: f64, count: usize, seed: u64, prec: u32) -> Result<Self> {
        if !(a < b && b - a <= 2.0 * PI) {
            return Err(Error::InvalidArgument("sector needs a < b ≤ a + 2π".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument("radius must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::with_capacity(count);
        let mut attempts = 0usize;
        while points.len() < count {
            attempts += 1;
            if attempts > 10_000 * count.max(1) {
                return Err(Error::InvalidArgument("sector too thin to sample".into()));
            }
            let x: Vec<Complex> = (0..p.dim())
                .map(|_| {
                    let r = radius * rng.gen::<f64>().sqrt() * (1.0 - 1e-9);
                    let phi = rng.gen_range(-PI..PI);
                    Complex::with_val(prec, (r * phi.cos(), r * phi.sin()))
                })
                .collect();
            let v = p.eval(&x, prec)?;
            if !v.is_zero() && arg_in(Float::with_val(64, v.arg_ref()).to_f64(), a, b) {
                points.push(x);
            }
        }
        Ok(PSectorSample { a, b, radius, points })
    }

    /// Rechecks the radius and argument constraints for every point.
    pub fn verify(&self, p: &TruncatedSeries) -> Result<bool> {
        for x in &self.points {
            if x.iter().any(|c| cabs(c) >= self.radius) {
                return Ok(false);
            }
            let v = p.eval(x, x[0].prec().0)?;
            if v.is_zero() || !arg_in(Float::with_val(64, v.arg_ref()).to_f64(), self.a, self.b) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a,
            "b": self.b,
            "R": self.radius,
            "points": self.points.iter().map(|x| x.iter().map(complex_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// The ODE residual `P²y_x − P_x y + P P_x` at sector points, with `y` the
/// P-1-sum of the expansion of `gen(ode-euler)` in direction θ.
pub fn verify_ode_on_sector(sample: &PSectorSample, theta: f64, depth: usize, prec: u32) -> Result<ResidualReport> {
    let trunc = 2 * depth as i64 + 2;
    let ex = gen_example("ode-euler", trunc)?;
    let exp = p_expand(&ex.series, &ex.germ, depth)?;
    let px = ex.germ.series().derivative(0);
    let mut worst: f64 = 0.0;
    for x in &sample.points {
        let r = p_k_sum(&exp, x, 1.0, theta, &LaplaceOptions::default())?;
        let scale = cabs(&px.eval(x, prec)?);
        worst = worst.max(scale * ode_reduced_residual(&r));
    }
    Ok(ResidualReport {
        formal_valuation: None,
        residual_trunc: EXACT,
        numeric_max_residual: Some(worst),
        parameters: json!({"theta": theta, "depth": depth, "points": sample.points.len()}),
    })
}

/// Expansions of the Remark 7.9 series and of its pullbacks by the blow-up
/// charts at 0 and ∞.
#[derive(Clone, Debug)]
pub struct Remark79 {
    pub direct: PExpansion,
    pub chart0: PExpansion,
    pub chart_inf: PExpansion,
}

/// Truncation that keeps 61 coefficients in every chart.
pub const REMARK79_TRUNC: i64 = 7 * 30 + 33;

pub fn remark79_expansions() -> Result<Remark79> {
    let ex = gen_example("remark79", REMARK79_TRUNC)?;
    let ord = MonomialOrder::graded(2, TieBreak::Lex);
    let depth = 61;
    let direct = p_expand(&ex.series, &ex.germ, depth)?;
    let pull = |chart: BlowupChart| -> Result<PExpansion> {
        let f = blowup(&ex.series, &chart)?;
        let p = blowup(ex.germ.series(), &chart)?;
        p_expand(&f, &Germ::new(p, ord.clone())?, depth)
    };
    Ok(Remark79 {
        direct,
        chart0: pull(BlowupChart::Finite(Scalar::zero()))?,
        chart_inf: pull(BlowupChart::Infinity)?,
    })
}

#[derive(Clone, Debug)]
pub struct GevreyTriple {
    pub labels: [&'static str; 3],
    pub fits: Vec<GevreyEstimate>,
    pub expected: [f64; 3],
    pub tolerance: f64,
}

impl GevreyTriple {
    pub fn pass(&self) -> bool {
        self.fits
            .iter()
            .zip(self.expected)
            .all(|(f, e)| (f.s - e).abs() <= self.tolerance)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "fits": self.labels.iter().zip(&self.fits).zip(self.expected).map(|((l, f), e)| json!({
                "case": l,
                "expected_s": e,
                "fit": f.to_json(),
            })).collect::<Vec<_>>(),
            "tolerance": self.tolerance,
            "pass": self.pass(),
        })
    }
}

fn leading(ns: NormSequence, len: usize) -> Result<NormSequence> {
    NormSequence::from_log_norms(ns.rho, ns.log_norms()[..len.min(ns.len())].to_vec())
}

/// Gevrey orders of the direct expansion (coefficients 0..=40), the chart-0
/// pullback (0..=60, every other one vanishes) and the chart-∞ pullback
/// (0..=40), at `ρ = ½`.
pub fn remark79_gevrey(r: &Remark79) -> Result<GevreyTriple> {
    let rho = PolyRadius::new(0.5)?;
    let fit = |e: &PExpansion, len: usize| fit_gevrey(&leading(norm_sequence(e, rho), len)?, DEFAULT_N_MIN);
    Ok(GevreyTriple {
        labels: ["x1*x2", "chart 0: v1*v2^2", "chart inf: v1*v2^2"],
        fits: vec![fit(&r.direct, 41)?, fit(&r.chart0, 61)?, fit(&r.chart_inf, 41)?],
        expected: [1.0, 0.5, 1.0],
        tolerance: 0.1,
    })
}

/// Direct sum versus chart sum at one point of a blow-up chart.
#[derive(Clone, Debug)]
pub struct ConsistencyPoint {
    pub chart: BlowupChart,
    pub v: Vec<Complex>,
    pub t: Complex,
    pub theta: f64,
    pub direct: std::result::Result<SumResult, String>,
    pub pulled: std::result::Result<SumResult, String>,
    pub direct_directions: SingularDirectionReport,
    pub pulled_directions: SingularDirectionReport,
}

impl ConsistencyPoint {
    /// Both singular, or both summable with agreeing values.
    pub fn consistent(&self) -> bool {
        match (&self.direct, &self.pulled) {
            (Err(_), Err(_)) => true,
            (Ok(a), Ok(b)) => {
                let prec = a.value.prec().0;
                let d = cabs(&Complex::with_val(prec, &a.value - &b.value));
                d <= 1e-8 * cabs(&a.value).max(1.0) + a.total_error() + b.total_error()
            }
            (Ok(_), Err(_)) => false,
            // the chart sum may exist where the direct one is singular,
            // never the other way round
            (Err(_), Ok(_)) => true,
        }
    }

    pub fn to_json(&self) -> Value {
        let side = |r: &std::result::Result<SumResult, String>| match r {
            Ok(s) => s.to_json(),
            Err(e) => json!({"error": e}),
        };
        json!({
            "chart": self.chart.to_string(),
            "v": self.v.iter().map(complex_json).collect::<Vec<_>>(),
            "t": complex_json(&self.t),
            "theta": self.theta,
            "direct": side(&self.direct),
            "pulled": side(&self.pulled),
            "direct_directions": self.direct_directions.to_json(),
            "pulled_directions": self.pulled_directions.to_json(),
            "consistent": self.consistent(),
        })
    }
}

/// Sums the direct expansion at `x = b(v)` and the chart expansion at `v`,
/// both in direction `θ = arg t`; the chart-0 pullback is summed with `k = 2`.
pub fn remark79_consistency(r: &Remark79, chart: &BlowupChart, v: &[Complex], prec: u32) -> Result<ConsistencyPoint> {
    if v.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: v.len() });
    }
    let x = match chart {
        BlowupChart::Finite(xi) => {
            let s = Complex::with_val(prec, &v[0] + xi.to_complex(prec));
            vec![v[1].clone(), Complex::with_val(prec, s * &v[1])]
        }
        BlowupChart::Infinity => vec![Complex::with_val(prec, &v[0] * &v[1]), v[1].clone()],
    };
    let (exp, k) = match chart {
        BlowupChart::Finite(xi) if xi.is_zero() => (&r.chart0, 2.0),
        BlowupChart::Infinity => (&r.chart_inf, 1.0),
        BlowupChart::Finite(_) => {
            return Err(Error::InvalidArgument("only the charts 0 and inf carry the example".into()))
        }
    };
    let t = r.direct.germ().series().eval(&x, prec)?;
    let theta = Float::with_val(64, t.arg_ref()).to_f64();
    let opts = LaplaceOptions::default();
    let direct = p_k_sum(&r.direct, &x, 1.0, theta, &opts).map_err(|e| e.to_string());
    let pulled = p_k_sum(exp, v, k, theta, &opts).map_err(|e| e.to_string());
    let (sd, _) = specialize(&r.direct, &x, prec)?;
    let (sp, _) = specialize(exp, v, prec)?;
    Ok(ConsistencyPoint {
        chart: chart.clone(),
        v: v.to_vec(),
        t,
        theta,
        direct,
        pulled,
        direct_directions: singular_directions(&borel_transform(&sd, 1.0)?)?,
        pulled_directions: singular_directions(&borel_transform(&sp, k)?)?,
    })
}

/// Both charts at the same point `x`, with `v = b⁻¹(x)` in each.
pub fn remark79_both_charts(r: &Remark79, x: &[Complex], prec: u32) -> Result<Vec<ConsistencyPoint>> {
    if x.len() != 2 || x.iter().any(|c| c.is_zero()) {
        return Err(Error::InvalidArgument("needs a point with both coordinates nonzero".into()));
    }
    let v0 = vec![Complex::with_val(prec, &x[1] / &x[0]), x[0].clone()];
    let vinf = vec![Complex::with_val(prec, &x[0] / &x[1]), x[1].clone()];
    Ok(vec![
        remark79_consistency(r, &BlowupChart::Finite(Scalar::zero()), &v0, prec)?,
        remark79_consistency(r, &BlowupChart::Infinity, &vinf, prec)?,
    ])
}

/// Each chart is consistent with the direct sum, and a singular direct sum
/// is matched by a singular sum in at least one chart.
pub fn charts_consistent(points: &[ConsistencyPoint]) -> bool {
    let direct_singular = points.iter().any(|p| p.direct.is_err());
    let some_chart_singular = points.iter().any(|p| p.pulled.is_err());
    points.iter().all(ConsistencyPoint::consistent) && (!direct_singular || some_chart_singular)
}

/// Points `x` for [`remark79_both_charts`]: one on a singular direction
/// (`arg x₁ + 3 arg x₂ ≡ 0`) and two off it.
pub fn remark79_points(prec: u32) -> Vec<Vec<Complex>> {
    let polar = |r: f64, a: f64| Complex::with_val(prec, (r * a.cos(), r * a.sin()));
    vec![
        vec![polar(0.4, 0.0), polar(0.3, 0.0)],
        vec![polar(0.3, 0.5), polar(0.4, 0.0)],
        vec![polar(0.4, -1.0), polar(0.3, 0.4)],
    ]
}

/// Sums on both sides of the Euler singular direction `π`, at `t = −r`.
#[derive(Clone, Debug)]
pub struct ExpSmallReport {
    pub radii: Vec<f64>,
    /// `|f_{π−δ}(t) − f_{π+δ}(t)|`.
    pub differences: Vec<f64>,
    /// Differences times `e^{0.5/|t|}`.
    pub scaled: Vec<f64>,
}

impl ExpSmallReport {
    /// The scaled differences for the smaller half of the radii stay below
    /// the maximum over the larger half.
    pub fn bounded(&self) -> bool {
        let mut idx: Vec<usize> = (0..self.radii.len()).collect();
        idx.sort_by(|&a, &b| self.radii[b].total_cmp(&self.radii[a]));
        let half = idx.len() / 2;
        let big = idx[..half].iter().map(|&i| self.scaled[i]).fold(0.0, f64::max);
        let small = idx[half..].iter().map(|&i| self.scaled[i]).fold(0.0, f64::max);
        self.scaled.iter().all(|x| x.is_finite()) && small <= big
    }

    pub fn to_json(&self) -> Value {
        json!({
            "radii": self.radii,
            "differences": self.differences,
            "scaled": self.scaled,
            "bounded": self.bounded(),
        })
    }
}

/// Euler series `Σ (−1)ⁿ n! tⁿ`, `len` coefficients.
pub fn euler_series(len: usize, prec: u32) -> OneVarSeries {
    let mut f = Float::with_val(prec, 1);
    let cs = (0..len)
        .map(|n| {
            if n > 0 {
                f *= n as u32;
            }
            let v = if n % 2 == 0 { f.clone() } else { Float::with_val(prec, -&f) };
            Complex::with_val(prec, (v, 0))
        })
        .collect();
    OneVarSeries::new(cs)
}

pub fn euler_exp_smallness(radii: &[f64], delta: f64, prec: u32) -> Result<ExpSmallReport> {
    let s = euler_series(32, prec);
    let opts = LaplaceOptions::default();
    let mut differences = Vec::new();
    let mut scaled = Vec::new();
    for &r in radii {
        let t = Complex::with_val(prec, (-r, 0));
        let a = sum_series(&s, 1.0, PI - delta, &t, &opts)?;
        let b = sum_series(&s, 1.0, -PI + delta, &t, &opts)?;
        let d = cabs(&Complex::with_val(prec, &a.value - &b.value));
        differences.push(d);
        scaled.push(d * (0.5 / r).exp());
    }
    Ok(ExpSmallReport {
        radii: radii.to_vec(),
        differences,
        scaled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remark79_generator() {
        let ex = gen_example("remark79", 20).unwrap();
        assert_eq!(ex.series.len(), 6);
        assert_eq!(ex.series.coeff(&Exponent::new(vec![5, 15])), Some(&Scalar::from_int(120)));
        assert!(gen_example("nope", 3).is_err());
    }

    #[test]
    fn ode_generator_and_residual() {
        let ex = gen_example("ode-euler", 12).unwrap();
        // m = 0..5
        let want = factorial_p_series(&ode_germ_series(), &TruncatedSeries::constant(2, Scalar::one()), 2, 2, 12).unwrap();
        assert_eq!(ex.series, want);
        let rep = verify_ode_formal(&ex.series, ex.germ.series()).unwrap();
        assert!(rep.exact_to_truncation());
        assert_eq!(rep.residual_trunc, 13);
        let bad = ex.series.add(&TruncatedSeries::variable(2, 0)).unwrap();
        let rep = verify_ode_formal(&bad, ex.germ.series()).unwrap();
        // P²·1 − x₁·P_x starts with −2x₁²
        assert_eq!(rep.formal_valuation, Some(2));
    }

    #[test]
    fn pde_cofactor() {
        let ex = gen_example("pde-quasihom", 13).unwrap();
        let rep = verify_pde_formal(&ex.series, ex.germ.series(), &PdeParams::example()).unwrap();
        assert!(!rep.matches_stated);
        let q = rep.cofactor.unwrap();
        assert_eq!(q.terms().len(), 1);
        assert_eq!(q.coeff(&Exponent::new(vec![1, 0])), Some(&Scalar::one()));
        let zero = TruncatedSeries::zero(2, 10);
        let rep = verify_pde_formal(&zero, ex.germ.series(), &PdeParams::example()).unwrap();
        assert!(rep.h.is_zero());
    }

    #[test]
    fn sector_sample_is_rechecked() {
        let p = ode_germ_series();
        let s = PSectorSample::generate(&p, 2.5, 3.5, 0.5, 10, 7, 128).unwrap();
        assert_eq!(s.points.len(), 10);
        assert!(s.verify(&p).unwrap());
    }
}
