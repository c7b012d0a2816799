//! Numerical Borel–Laplace summation of one-variable specializations of a
//! P-expansion.
//!
//! For `F(t) = Σ aₙ tⁿ` of Gevrey order `1/k` the Borel transform
//! `g(τ) = Σ aₙ τⁿ / Γ(1 + n/k)` converges near 0. It is continued along the
//! ray `arg τ = θ` and the sum is
//! `f(t) = k t^{−k} ∫₀^{∞e^{iθ}} e^{−(τ/t)^k} g(τ) τ^{k−1} dτ`.

use std::f64::consts::PI;

use rug::ops::Pow;
use rug::{Complex, Float};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::scalar_to_json;
use crate::pade::Pade;
use crate::quadrature::{integrate, GaussLegendre, ORDER};
use crate::scalar::Scalar;
use crate::series::EXACT;
use crate::weierstrass::PExpansion;

/// Poles closer than this angle to the ray make it singular.
pub const DELTA_MIN: f64 = 0.02;
/// Required distance of `k(θ − arg t)` from `±π/2`.
pub const DIRECTION_MARGIN: f64 = 0.05;
/// The Laplace integral is cut where the kernel drops below this.
pub const TAIL_EPS: f64 = 1e-20;
/// Fewest Borel coefficients for continuation.
pub const MIN_COEFFS: usize = 8;
/// Fewest Borel coefficients for singular-direction detection.
pub const MIN_DIRECTION_COEFFS: usize = 16;
/// Relative distance within which poles of different approximant orders match.
pub const STABILITY_TOL: f64 = 1e-2;
const MIN_TAYLOR_TERMS: usize = 6;
/// Directions closer than this are reported once.
const DIRECTION_MERGE: f64 = 0.05;

/// Angle reduced to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

fn cabs(z: &Complex) -> f64 {
    Float::with_val(64, z.abs_ref()).to_f64()
}

fn carg(z: &Complex) -> f64 {
    Float::with_val(64, z.arg_ref()).to_f64()
}

fn complex_json(z: &Complex) -> Value {
    scalar_to_json(&Scalar::Float(z.clone()))
}

fn max_prec(cs: &[Complex]) -> u32 {
    cs.iter().map(|c| c.prec().0.max(c.prec().1)).max().unwrap_or(crate::scalar::DEFAULT_PREC)
}

/// `Σ aₙ tⁿ`, typically `Σ gₙ(x₀) tⁿ`.
#[derive(Clone, Debug)]
pub struct OneVarSeries {
    coeffs: Vec<Complex>,
    prec: u32,
}

impl OneVarSeries {
    pub fn new(coeffs: Vec<Complex>) -> Self {
        let prec = max_prec(&coeffs);
        OneVarSeries { coeffs, prec }
    }

    pub fn from_scalars(cs: &[Scalar], prec: u32) -> Self {
        OneVarSeries {
            coeffs: cs.iter().map(|c| c.to_complex(prec)).collect(),
            prec,
        }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ_{n<N} aₙ tⁿ`.
    pub fn partial_sum(&self, t: &Complex, n: usize) -> Complex {
        let mut acc = Complex::new(self.prec);
        for c in self.coeffs.iter().take(n).rev() {
            acc *= t;
            acc += c;
        }
        acc
    }
}

/// Coefficients `gₙ(x₀)` and the point `t = P(x₀)`. Stops before the first
/// `gₙ` with no known terms.
pub fn specialize(exp: &PExpansion, x0: &[Complex], prec: u32) -> Result<(OneVarSeries, Complex)> {
    let coeffs = exp
        .coeffs()
        .iter()
        .take_while(|g| g.trunc() > 0)
        .map(|g| g.eval(x0, prec))
        .collect::<Result<Vec<_>>>()?;
    let t = exp.germ().series().eval(x0, prec)?;
    Ok((OneVarSeries { coeffs, prec }, t))
}

/// `bₙ = aₙ / Γ(1 + n/k)`.
#[derive(Clone, Debug)]
pub struct BorelSeries {
    k: f64,
    coeffs: Vec<Complex>,
    prec: u32,
}

impl BorelSeries {
    /// Borel coefficients given directly.
    pub fn from_coeffs(k: f64, coeffs: Vec<Complex>) -> Result<Self> {
        check_k(k)?;
        let prec = max_prec(&coeffs);
        Ok(BorelSeries { k, coeffs, prec })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "coeffs": self.coeffs.iter().map(complex_json).collect::<Vec<_>>(),
        })
    }
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("summation order k must be positive, got {k}")))
    }
}

pub fn borel_transform(s: &OneVarSeries, k: f64) -> Result<BorelSeries> {
    check_k(k)?;
    let prec = s.prec;
    let kf = Float::with_val(prec, k);
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| {
            let g = (Float::with_val(prec, n) / &kf + 1u32).gamma();
            Complex::with_val(prec, a / g)
        })
        .collect();
    Ok(BorelSeries { k, coeffs, prec })
}

/// How the Borel sum is continued along the ray.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContinuationMethod {
    /// Diagonal robust Padé approximants.
    Rational,
    /// Chain of Taylor re-expansions, each step at most a third of the
    /// distance to the nearest detected pole.
    Reexpansion,
}

impl ContinuationMethod {
    fn tag(self) -> &'static str {
        match self {
            ContinuationMethod::Rational => "rational",
            ContinuationMethod::Reexpansion => "reexpansion",
        }
    }
}

#[derive(Clone, Debug)]
struct TaylorChain {
    centers: Vec<Complex>,
    /// Accurate leading coefficients at each center.
    series: Vec<Vec<Complex>>,
    reach: f64,
}

impl TaylorChain {
    fn eval(&self, tau: &Complex, lower: bool) -> Complex {
        let r = cabs(tau);
        let j = self
            .centers
            .iter()
            .rposition(|c| cabs(c) <= r)
            .unwrap_or(0);
        let prec = tau.prec().0;
        let h = Complex::with_val(prec, tau - &self.centers[j]);
        let len = self.series[j].len();
        let terms = if lower { (3 * len).div_ceil(4) } else { len };
        let mut acc = Complex::new(prec);
        for c in self.series[j].iter().take(terms).rev() {
            acc *= &h;
            acc += c;
        }
        acc
    }
}

/// `p(x + h)` from the coefficients of `p(x)`.
fn taylor_shift(a: &[Complex], h: &Complex, prec: u32) -> Vec<Complex> {
    let mut b: Vec<Complex> = a.to_vec();
    let n = b.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = Complex::with_val(prec, h * &b[j + 1]);
            b[j] += t;
        }
    }
    b
}

#[derive(Clone, Debug)]
enum Continuant {
    Rational(Box<Pade>),
    Taylor(Box<TaylorChain>, bool),
}

impl Continuant {
    fn eval(&self, tau: &Complex) -> Complex {
        match self {
            Continuant::Rational(p) => p.eval(tau),
            Continuant::Taylor(chain, lower) => chain.eval(tau, *lower),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RaySample {
    pub tau: Complex,
    pub value: Complex,
    pub error: f64,
}

/// Borel sum continued along `arg τ = θ`.
#[derive(Clone, Debug)]
pub struct RayContinuation {
    pub theta: f64,
    pub k: f64,
    pub method: ContinuationMethod,
    pub samples: Vec<RaySample>,
    prec: u32,
    main: Continuant,
    lower: Continuant,
    /// Poles of the main approximant confirmed by the lower one.
    poles: Vec<Complex>,
    reach: Option<f64>,
}

impl RayContinuation {
    /// Continued value and its error estimate at `τ`.
    pub fn eval(&self, tau: &Complex) -> (Complex, f64) {
        let a = self.main.eval(tau);
        let b = self.lower.eval(tau);
        let err = cabs(&Complex::with_val(self.prec, &a - &b));
        (a, err)
    }

    pub fn poles(&self) -> &[Complex] {
        &self.poles
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn to_json(&self) -> Value {
        json!({
            "theta": self.theta,
            "k": self.k,
            "method": self.method.tag(),
            "samples": self.samples.iter().map(|s| json!({
                "tau": complex_json(&s.tau),
                "value": complex_json(&s.value),
                "error": s.error,
            })).collect::<Vec<_>>(),
            "poles": self.poles.iter().map(complex_json).collect::<Vec<_>>(),
        })
    }
}

/// Poles of `main` that `other` reproduces within [`STABILITY_TOL`].
fn confirmed_poles(main: &Pade, other: &Pade) -> Vec<Complex> {
    main.poles()
        .iter()
        .filter(|p| matched(p, other.poles()))
        .cloned()
        .collect()
}

fn matched(p: &Complex, others: &[Complex]) -> bool {
    let pm = cabs(p).max(f64::MIN_POSITIVE);
    others
        .iter()
        .any(|q| cabs(&Complex::with_val(64, p - q)) <= STABILITY_TOL * pm)
}

fn check_ray(poles: &[Complex], theta: f64, limit: f64) -> Result<()> {
    for p in poles {
        let r = cabs(p);
        if r <= limit && (r == 0.0 || wrap_angle(carg(p) - theta).abs() < DELTA_MIN) {
            return Err(Error::SingularRay {
                theta,
                pole_re: p.real().to_f64(),
                pole_im: p.imag().to_f64(),
            });
        }
    }
    Ok(())
}

fn unit(theta: f64, prec: u32) -> Complex {
    Complex::with_val(prec, (0, Float::with_val(prec, theta))).exp()
}

fn diagonal(coeffs: &[Complex], m: usize, prec: u32) -> Pade {
    Pade::new(&coeffs[..=2 * m], m, m, prec)
}

/// Continues `b` along `arg τ = θ` and samples it at `τ = r·e^{iθ}`.
///
/// Fails with a singular-ray error when a confirmed pole lies within
/// [`DELTA_MIN`] of the ray and not beyond the largest radius (any pole if
/// `radii` is empty and the method needs a reach).
pub fn continue_on_ray(
    b: &BorelSeries,
    theta: f64,
    radii: &[f64],
    method: ContinuationMethod,
) -> Result<RayContinuation> {
    if b.len() < MIN_COEFFS {
        return Err(Error::TooFewCoefficients {
            needed: MIN_COEFFS,
            found: b.len(),
        });
    }
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("radii must be positive and increasing".into()));
    }
    let prec = b.prec;
    let m = (b.len() - 1) / 2;
    let main = diagonal(&b.coeffs, m, prec);
    let lower = diagonal(&b.coeffs, m - 1, prec);
    let poles = confirmed_poles(&main, &lower);
    let r_max = radii.last().copied();
    check_ray(&poles, theta, r_max.unwrap_or(0.0))?;

    let (main_c, lower_c, reach) = match method {
        ContinuationMethod::Rational => (
            Continuant::Rational(Box::new(main)),
            Continuant::Rational(Box::new(lower)),
            None,
        ),
        ContinuationMethod::Reexpansion => {
            let target = r_max.ok_or_else(|| {
                Error::InvalidArgument("re-expansion needs the radii to continue to".into())
            })?;
            let chain = taylor_chain(b, theta, target, &poles)?;
            let reach = chain.reach;
            (
                Continuant::Taylor(Box::new(chain.clone()), false),
                Continuant::Taylor(Box::new(chain), true),
                Some(reach),
            )
        }
    };
    let mut rc = RayContinuation {
        theta,
        k: b.k,
        method,
        samples: Vec::new(),
        prec,
        main: main_c,
        lower: lower_c,
        poles,
        reach,
    };
    let dir = unit(theta, prec);
    rc.samples = radii
        .iter()
        .map(|&r| {
            let tau = Complex::with_val(prec, &dir * Float::with_val(prec, r));
            let (value, error) = rc.eval(&tau);
            RaySample { tau, value, error }
        })
        .collect();
    Ok(rc)
}

fn taylor_chain(b: &BorelSeries, theta: f64, target: f64, poles: &[Complex]) -> Result<TaylorChain> {
    let prec = b.prec;
    let dir = unit(theta, prec);
    let nearest = |c: &Complex| -> f64 {
        poles
            .iter()
            .map(|p| cabs(&Complex::with_val(prec, p - c)))
            .fold(f64::INFINITY, f64::min)
    };
    let mut centers = vec![Complex::new(prec)];
    let mut series = vec![b.coeffs.clone()];
    let mut pos = 0.0;
    let tol = 2f64.powi(-(prec.min(1000) as i32) / 8);
    let reach = loop {
        if centers.len() > 10_000 {
            return Err(Error::InvalidArgument("re-expansion chain did not reach the target".into()));
        }
        let c = centers.last().unwrap();
        let dist = nearest(c);
        if dist < 1e-12 {
            return Err(Error::SingularRay {
                theta,
                pole_re: c.real().to_f64(),
                pole_im: c.imag().to_f64(),
            });
        }
        if pos + dist / 3.0 >= target {
            break pos + dist / 3.0;
        }
        let step = dist / 3.0;
        let h = Complex::with_val(prec, &dir * Float::with_val(prec, step));
        let cur = series.last().unwrap();
        let full = taylor_shift(cur, &h, prec);
        let short = taylor_shift(&cur[..cur.len() - 2], &h, prec);
        let next = Complex::with_val(prec, &dir * Float::with_val(prec, pos + step));
        let r = nearest(&next);
        // keep the prefix on which dropping the last terms changes nothing,
        // relative to the size of the coefficients at the new center
        let weighted = |j: usize, x: f64| x * r.powi(j as i32);
        let mut size = 0.0f64;
        let mut keep = 0;
        for (j, (a, b)) in full.iter().zip(&short).enumerate() {
            size = size.max(weighted(j, cabs(a)));
            if weighted(j, cabs(&Complex::with_val(prec, a - b))) > tol * size {
                break;
            }
            keep += 1;
        }
        if keep < MIN_TAYLOR_TERMS {
            return Err(Error::InvalidArgument(format!(
                "re-expansion lost accuracy at |τ| = {pos}"
            )));
        }
        pos += step;
        centers.push(Complex::with_val(prec, &dir * Float::with_val(prec, pos)));
        series.push(full[..keep].to_vec());
    };
    Ok(TaylorChain {
        centers,
        series,
        reach,
    })
}

/// Options for [`laplace_sum`] and [`p_k_sum`].
#[derive(Clone, Debug, Default)]
pub struct LaplaceOptions {
    /// Fail with [`Error::ContinuationInaccurate`] above this continuation error.
    pub max_continuation_error: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SumResult {
    pub t: Complex,
    pub x0: Option<Vec<Complex>>,
    pub k: f64,
    pub theta: f64,
    pub value: Complex,
    /// `df/dt`, from differentiating under the integral.
    pub derivative: Complex,
    /// Panel error estimate plus a bound for the integral beyond the cut.
    pub quadrature_error: f64,
    pub continuation_error: f64,
    /// `τ_max` where the integral is cut.
    pub tail_cut: f64,
}

impl SumResult {
    pub fn total_error(&self) -> f64 {
        self.quadrature_error + self.continuation_error
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "t": complex_json(&self.t),
            "k": self.k,
            "theta": self.theta,
            "value": complex_json(&self.value),
            "derivative": complex_json(&self.derivative),
            "quadrature_error": self.quadrature_error,
            "continuation_error": self.continuation_error,
            "total_error": self.total_error(),
            "tail_cut": self.tail_cut,
        });
        if let Some(x0) = &self.x0 {
            v["x0"] = Value::Array(x0.iter().map(complex_json).collect());
        }
        v
    }
}

/// Laplace integral of the continued Borel sum at `t`.
///
/// Needs `|k(θ − arg t)| < π/2 − margin` so that the kernel decays along the ray.
pub fn laplace_sum(rc: &RayContinuation, t: &Complex, opts: &LaplaceOptions) -> Result<SumResult> {
    let prec = rc.prec;
    let k = rc.k;
    let theta = rc.theta;
    let t_abs = cabs(t);
    if t_abs == 0.0 {
        return Err(Error::InvalidArgument("evaluation point t must be nonzero".into()));
    }
    let arg_t = carg(t);
    let phase = wrap_angle(k * (theta - arg_t));
    if phase.abs() >= PI / 2.0 - DIRECTION_MARGIN {
        return Err(Error::IncompatibleDirection { theta, arg_t, k });
    }
    check_ray(&rc.poles, theta, f64::INFINITY)?;

    // w = e^{ikθ}/t^k on the principal branch; it is also the prefactor
    let t_k = Complex::with_val(prec, Complex::with_val(prec, t.ln_ref()) * Float::with_val(prec, k)).exp();
    let w = Complex::with_val(prec, unit(k * theta, prec) / &t_k);
    let c = w.real().to_f64();
    let pref = w.clone();
    let dir = unit(theta, prec);
    let kinv = Float::with_val(prec, 1.0 / k);
    let tau_at = |s: &Float| -> Complex {
        let r = if s.is_zero() {
            Float::new(prec)
        } else {
            Float::with_val(prec, s.pow(&kinv))
        };
        Complex::with_val(prec, &dir * r)
    };

    // tail cut, widened once for the growth of g
    let mut s_max = (1.0 / TAIL_EPS).ln() / c;
    let g_end = cabs(&rc.main.eval(&tau_at(&Float::with_val(prec, s_max))));
    if g_end > 1.0 && g_end.is_finite() {
        s_max += g_end.ln() / c;
    }
    let tail_cut = s_max.powf(1.0 / k);
    // ∫_{s_max}^∞ |e^{−ws} g| ds for g of at most the size it has at the cut
    let g_cut = cabs(&rc.main.eval(&tau_at(&Float::with_val(prec, s_max))));
    let tail = if g_cut.is_finite() {
        g_cut * (-c * s_max).exp() / c
    } else {
        f64::INFINITY
    };
    if let Some(reach) = rc.reach {
        if tail_cut > reach * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "continuation reaches |τ| = {reach}, the Laplace integral needs {tail_cut}"
            )));
        }
    }

    let integrand = |s: &Float| -> Vec<Complex> {
        let tau = tau_at(s);
        let kern = Complex::with_val(prec, -Complex::with_val(prec, &w * s)).exp();
        let gm = rc.main.eval(&tau);
        let gl = rc.lower.eval(&tau);
        let sw = Complex::with_val(prec, &w * s);
        let d = Complex::with_val(prec, &gm * &sw);
        vec![
            Complex::with_val(prec, &kern * &gm),
            Complex::with_val(prec, &kern * &gl),
            Complex::with_val(prec, &kern * &d),
        ]
    };
    let gl = GaussLegendre::new(ORDER, prec);
    let a = Float::new(prec);
    let b = Float::with_val(prec, s_max);
    // rough magnitude of the integral fixes the absolute target
    let coarse = gl.panel(&mut |s: &Float| vec![Complex::with_val(prec, integrand(s)[0].abs_ref())], &a, &b, 1);
    let scale = cabs(&coarse[0]).max(f64::MIN_POSITIVE);
    let eps = scale * 2f64.powi(-(prec.min(1000) as i32) / 2);
    let res = integrate(&gl, integrand, &a, &b, 3, eps);

    let value = Complex::with_val(prec, &pref * &res.values[0]);
    let lower = Complex::with_val(prec, &pref * &res.values[1]);
    let moment = Complex::with_val(prec, &pref * &res.values[2]);
    let kt = Complex::with_val(prec, Complex::with_val(prec, (k, 0)) / t);
    let derivative = Complex::with_val(prec, &kt * Complex::with_val(prec, &moment - &value));
    let continuation_error = cabs(&Complex::with_val(prec, &value - &lower));
    let quadrature_error = cabs(&pref) * (res.error + tail);
    if let Some(tol) = opts.max_continuation_error {
        if continuation_error > tol {
            return Err(Error::ContinuationInaccurate {
                continuation_error,
                tolerance: tol,
            });
        }
    }
    Ok(SumResult {
        t: t.clone(),
        x0: None,
        k,
        theta,
        value,
        derivative,
        quadrature_error,
        continuation_error,
        tail_cut,
    })
}

/// Borel–Laplace sum of a one-variable series at `t` in direction θ.
pub fn sum_series(
    s: &OneVarSeries,
    k: f64,
    theta: f64,
    t: &Complex,
    opts: &LaplaceOptions,
) -> Result<SumResult> {
    let b = borel_transform(s, k)?;
    let rc = continue_on_ray(&b, theta, &[], ContinuationMethod::Rational)?;
    laplace_sum(&rc, t, opts)
}

/// P-k-sum of an expansion at `x₀` in direction θ.
pub fn p_k_sum(
    exp: &PExpansion,
    x0: &[Complex],
    k: f64,
    theta: f64,
    opts: &LaplaceOptions,
) -> Result<SumResult> {
    check_k(k)?;
    let prec = x0.iter().map(|z| z.prec().0).max().unwrap_or(crate::scalar::DEFAULT_PREC);
    let (mut s, t) = specialize(exp, x0, prec)?;
    if t.is_zero() {
        return Err(Error::InvalidArgument("P vanishes at the evaluation point".into()));
    }
    let arg_p = carg(&t);
    if wrap_angle(arg_p - theta).abs() >= PI / (2.0 * k) {
        return Err(Error::PointOutsideSector { arg_p, theta, k });
    }
    let trivial = s.coeffs.iter().skip(1).all(|c| c.is_zero());
    if trivial {
        let zero = Complex::new(prec);
        return Ok(SumResult {
            t,
            x0: Some(x0.to_vec()),
            k,
            theta,
            value: s.coeffs.first().cloned().unwrap_or_else(|| zero.clone()),
            derivative: zero,
            quadrature_error: 0.0,
            continuation_error: 0.0,
            tail_cut: 0.0,
        });
    }
    if s.len() < MIN_COEFFS {
        if exp.trunc() == EXACT {
            s.coeffs.resize(MIN_COEFFS, Complex::new(prec));
        } else {
            return Err(Error::TooFewCoefficients {
                needed: MIN_COEFFS,
                found: s.len(),
            });
        }
    }
    let mut r = sum_series(&s, k, theta, &t, opts)?;
    r.x0 = Some(x0.to_vec());
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct PoleCluster {
    pub modulus: f64,
    pub argument: f64,
    /// Fraction of approximant orders reproducing the pole.
    pub stability: f64,
}

#[derive(Clone, Debug)]
pub struct SingularDirectionReport {
    pub k: f64,
    pub clusters: Vec<PoleCluster>,
    /// Arguments in `(−π, π]` of the stable singularities, nearest first.
    pub directions: Vec<f64>,
    /// `2π/g` with `g` the gcd of the indices of nonzero coefficients: the
    /// Borel sum is invariant under rotation by this angle, so singular
    /// directions repeat with this period.
    pub rotational_period: Option<f64>,
}

impl SingularDirectionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "clusters": self.clusters.iter().map(|c| json!({
                "modulus": c.modulus,
                "argument": c.argument,
                "stability": c.stability,
            })).collect::<Vec<_>>(),
            "directions": self.directions,
            "rotational_period": self.rotational_period,
        })
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Singularities of the Borel sum seen consistently by four diagonal
/// approximant orders; a pole counts when at least three orders agree.
pub fn singular_directions(b: &BorelSeries) -> Result<SingularDirectionReport> {
    if b.len() < MIN_DIRECTION_COEFFS {
        return Err(Error::TooFewCoefficients {
            needed: MIN_DIRECTION_COEFFS,
            found: b.len(),
        });
    }
    let prec = b.prec;
    let m0 = (b.len() - 1) / 2;
    let approximants: Vec<Pade> = (0..4).map(|j| diagonal(&b.coeffs, m0 - j, prec)).collect();
    let mut clusters: Vec<PoleCluster> = approximants[0]
        .poles()
        .iter()
        .filter_map(|p| {
            let hits = 1 + approximants[1..]
                .iter()
                .filter(|a| matched(p, a.poles()))
                .count();
            (hits >= 3).then(|| PoleCluster {
                modulus: cabs(p),
                argument: carg(p),
                stability: hits as f64 / 4.0,
            })
        })
        .collect();
    clusters.sort_by(|a, b| a.modulus.total_cmp(&b.modulus));
    let mut directions: Vec<f64> = Vec::new();
    for c in &clusters {
        if !directions
            .iter()
            .any(|d| wrap_angle(d - c.argument).abs() < DIRECTION_MERGE)
        {
            directions.push(c.argument);
        }
    }
    let g = b
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .fold(0, |acc, (n, _)| gcd(acc, n));
    Ok(SingularDirectionReport {
        k: b.k,
        clusters,
        directions,
        rotational_period: (g > 0).then(|| 2.0 * PI / g as f64),
    })
}
