//! `germsum`: command-line front end. Reads a JSON document from a file or
//! stdin and writes one JSON document to stdout.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 domain error (zero germ,
//! singular ray, failed verification, …).

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rug::Complex;
use serde_json::{json, Value};

use germsum_core::borel::{
    borel_transform, p_k_sum, singular_directions, specialize, sum_series, LaplaceOptions, OneVarSeries,
};
use germsum_core::gevrey::{fit_gevrey, norm_sequence};
use germsum_core::harness::{
    charts_consistent, gen_example, remark79_both_charts, remark79_expansions, remark79_gevrey, remark79_points,
    verify_ode_formal, verify_ode_numeric, verify_pde_formal, PdeParams,
};
use germsum_core::json::{order_from_json, scalar_from_json, series_from_json, series_to_json};
use germsum_core::scalar::{prec_from_env, Scalar};
use germsum_core::transforms::{blowup, dominant_data, ramify, rotation_average, BaseOrder, BlowupChart};
use germsum_core::weierstrass::{p_expand, t_map, t_substitute, wdivide, Germ, PExpansion};
use germsum_core::{Error, MonomialOrder, PolyRadius, TieBreak, TruncatedSeries};

#[derive(Parser)]
#[command(name = "germsum", version, about = "Weierstrass division, P-expansions and Borel-Laplace summation")]
struct Cli {
    /// Mantissa bits for floating-point work (default: $GERMSUM_PREC_BITS or 128)
    #[arg(long, global = true)]
    prec: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct GermArgs {
    /// Germ P as a series JSON file
    #[arg(long)]
    germ: Option<PathBuf>,
    /// Monomial order "w1,w2,...[:lex|:invlex]" (default: total degree, lex)
    #[arg(long)]
    order: Option<String>,
}

#[derive(Args, Clone)]
struct Input {
    /// Input JSON file; stdin when absent or "-"
    input: Option<PathBuf>,
    /// Lower the truncation of the input series to N
    #[arg(long)]
    trunc: Option<i64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generalized Weierstrass division g = q·P + r
    Divide {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        input: Input,
    },
    /// P-expansion f = Σ gₙ Pⁿ
    Expand {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Expansion read as a series in (x, t); with --inverse, substitute t = P back
    Tmap {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Pull back along a blow-up chart
    Blowup {
        /// Chart: complex slope or "inf"
        #[arg(long)]
        xi: String,
        #[command(flatten)]
        input: Input,
    },
    /// Substitute x₁ = t₁ᵏ; with --inverse, average over rotations and descend
    Ramify {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Dominant data of the germ given as input
    Dominant {
        /// Order of the germ
        #[arg(long)]
        order: Option<String>,
        /// Order on x₃,…,x_d
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Gevrey order of a P-expansion (or of a series expanded with --germ)
    Gevrey {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
        #[arg(long, default_value_t = 5)]
        n_min: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Borel-Laplace sum of an expansion at a point, or of a coefficient list at t
    BorelSum {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, default_value_t = 24)]
        depth: usize,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        /// Evaluation point "c1,c2,..."
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        /// Evaluation value of t for a coefficient list
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Fail when the continuation error exceeds this
        #[arg(long)]
        max_continuation_error: Option<f64>,
        #[command(flatten)]
        input: Input,
    },
    /// Singular directions of the Borel transform
    Directions {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, default_value_t = 24)]
        depth: usize,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Run a built-in verification: remark79, ode-euler or pde-quasihom
    Verify {
        name: String,
        #[arg(long)]
        trunc: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
    },
    /// Print a built-in example series
    Gen {
        name: String,
        #[arg(long, default_value_t = 20)]
        trunc: i64,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Out = Result<Value, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_json(path: Option<&PathBuf>) -> Result<Value, Failure> {
    let (name, text) = match path {
        Some(p) if p.as_os_str() != "-" => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            (p.display().to_string(), text)
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| usage(format!("stdin: {e}")))?;
            ("stdin".to_string(), s)
        }
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("{name}: malformed JSON at $ (line {}, column {}): {e}", e.line(), e.column())))
}

/// A series document, or an object carrying one under `"series"` (the
/// output of `gen`, or a germ).
fn series_in(v: &Value, prec: u32) -> Result<TruncatedSeries, Error> {
    match v.get("series") {
        Some(inner) if v.get("dim").is_none() => series_from_json(inner, prec, "$.series"),
        _ => series_from_json(v, prec, "$"),
    }
}

fn read_series(input: &Input, prec: u32) -> Result<TruncatedSeries, Failure> {
    let v = read_json(input.input.as_ref())?;
    let s = series_in(&v, prec)?;
    Ok(match input.trunc {
        Some(t) => s.truncate(t),
        None => s,
    })
}

fn parse_order(spec: Option<&str>, dim: usize) -> Result<MonomialOrder, Failure> {
    let ord = match spec {
        Some(s) => MonomialOrder::parse(s).map_err(|e| usage(format!("--order: {e}")))?,
        None => MonomialOrder::graded(dim, TieBreak::Lex),
    };
    if ord.dim() != dim {
        return Err(usage(format!("--order has {} weights, the germ has {dim} variables", ord.dim())));
    }
    Ok(ord)
}

fn read_germ(args: &GermArgs, prec: u32) -> Result<Germ, Failure> {
    let path = args.germ.as_ref().ok_or_else(|| usage("--germ is required"))?;
    let v = read_json(Some(path))?;
    let in_file = |e: Error| usage(format!("{}: {e}", path.display()));
    let (p, ord) = match v.get("germ").filter(|_| v.get("dim").is_none()) {
        // the "germ" member of a generated example
        Some(g) => (series_in(g, prec).map_err(in_file)?, g.get("order")),
        None => (series_in(&v, prec).map_err(in_file)?, v.get("order")),
    };
    let ord = match (&args.order, ord) {
        (None, Some(o)) => order_from_json(o, "$.order").map_err(in_file)?,
        _ => parse_order(args.order.as_deref(), p.dim())?,
    };
    Ok(Germ::new(p, ord)?)
}

fn parse_point(s: &str, prec: u32) -> Result<Vec<Complex>, Failure> {
    s.split(',')
        .map(|c| {
            Scalar::parse_complex(c, prec)
                .map(|x| x.to_complex(prec))
                .map_err(|e| usage(format!("--at: {e}")))
        })
        .collect()
}

/// What a summation command works on.
enum SumInput {
    Expansion(PExpansion),
    OneVar(OneVarSeries),
}

fn read_sum_input(germ: &GermArgs, depth: usize, input: &Input, prec: u32) -> Result<SumInput, Failure> {
    let v = read_json(input.input.as_ref())?;
    if let Some(cs) = v.get("coefficients") {
        let arr = cs
            .as_array()
            .ok_or_else(|| usage("$.coefficients: expected an array"))?;
        let scalars = arr
            .iter()
            .enumerate()
            .map(|(i, c)| scalar_from_json(c, prec, &format!("$.coefficients[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(SumInput::OneVar(OneVarSeries::from_scalars(&scalars, prec)));
    }
    if v.get("coeffs").is_some() {
        return Ok(SumInput::Expansion(PExpansion::from_json(&v, prec)?));
    }
    let mut f = series_in(&v, prec)?;
    if let Some(t) = input.trunc {
        f = f.truncate(t);
    }
    let g = read_germ(germ, prec)?;
    Ok(SumInput::Expansion(p_expand(&f, &g, depth)?))
}

fn verify(name: &str, trunc: Option<i64>, theta: Option<f64>, prec: u32) -> Out {
    match name {
        "remark79" => {
            let r = remark79_expansions()?;
            let triple = remark79_gevrey(&r)?;
            let groups = remark79_points(prec)
                .iter()
                .map(|x| remark79_both_charts(&r, x, prec))
                .collect::<Result<Vec<_>, _>>()?;
            let consistent = groups.iter().all(|g| charts_consistent(g));
            let points: Vec<_> = groups.into_iter().flatten().collect();
            Ok(json!({
                "example": name,
                "gevrey": triple.to_json(),
                "consistency": points.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
                "pass": triple.pass() && consistent,
            }))
        }
        "ode-euler" => {
            let n = trunc.unwrap_or(24);
            let ex = gen_example(name, n)?;
            let formal = verify_ode_formal(&ex.series, ex.germ.series())?;
            let theta = theta.unwrap_or(PI);
            let numeric = verify_ode_numeric(1.0, theta, &[0.02, 0.05, 0.1, 0.2, 0.3], prec)?;
            let pass = formal.exact_to_truncation() && numeric.numeric_max_residual.is_some_and(|r| r < 1e-8);
            Ok(json!({
                "example": name,
                "formal": formal.to_json(),
                "numeric": numeric.to_json(),
                "pass": pass,
            }))
        }
        "pde-quasihom" => {
            let n = trunc.unwrap_or(13);
            let ex = gen_example(name, n)?;
            let rep = verify_pde_formal(&ex.series, ex.germ.series(), &PdeParams::example())?;
            let pass = rep.cofactor.is_some();
            Ok(json!({"example": name, "report": rep.to_json(), "pass": pass}))
        }
        other => Err(Error::UnknownExample(other.into()).into()),
    }
}

fn run(cli: Cli) -> Out {
    let prec = cli.prec.unwrap_or_else(prec_from_env);
    if prec < 16 {
        return Err(usage("--prec must be at least 16"));
    }
    match cli.cmd {
        Cmd::Divide { germ, input } => {
            let g = read_series(&input, prec)?;
            let p = read_germ(&germ, prec)?;
            Ok(wdivide(&g, &p)?.to_json())
        }
        Cmd::Expand { germ, depth, input } => {
            let f = read_series(&input, prec)?;
            let p = read_germ(&germ, prec)?;
            Ok(p_expand(&f, &p, depth)?.to_json())
        }
        Cmd::Tmap {
            germ,
            depth,
            inverse,
            input,
        } => {
            if inverse {
                let v = read_json(input.input.as_ref())?;
                let exp = PExpansion::from_json(&v, prec)?;
                return Ok(series_to_json(&t_substitute(&exp)));
            }
            let f = read_series(&input, prec)?;
            let p = read_germ(&germ, prec)?;
            let exp = t_map(&f, &p, depth)?;
            Ok(json!({
                "expansion": exp.to_json(),
                "series_with_t": series_to_json(&exp.to_series_with_t()),
            }))
        }
        Cmd::Blowup { xi, input } => {
            let chart = BlowupChart::parse(&xi, prec).map_err(|e| usage(format!("--xi: {e}")))?;
            let f = read_series(&input, prec)?;
            Ok(series_to_json(&blowup(&f, &chart)?))
        }
        Cmd::Ramify { k, inverse, input } => {
            let f = read_series(&input, prec)?;
            if inverse {
                let r = rotation_average(&f, k)?;
                Ok(json!({
                    "averaged": series_to_json(&r.averaged),
                    "descended": series_to_json(&r.descended),
                }))
            } else {
                Ok(series_to_json(&ramify(&f, k)?))
            }
        }
        Cmd::Dominant { order, base, input } => {
            let p = read_series(&input, prec)?;
            let ord = parse_order(order.as_deref(), p.dim())?;
            let base = match base {
                Some(s) => BaseOrder::Order(MonomialOrder::parse(&s).map_err(|e| usage(format!("--base: {e}")))?),
                None => BaseOrder::Empty,
            };
            Ok(dominant_data(&Germ::new(p, ord)?, &base, prec)?.to_json())
        }
        Cmd::Gevrey {
            germ,
            depth,
            rho,
            n_min,
            input,
        } => {
            let rho = PolyRadius::new(rho)?;
            let exp = match read_sum_input(&germ, depth, &input, prec)? {
                SumInput::Expansion(e) => e,
                SumInput::OneVar(_) => return Err(usage("gevrey needs an expansion or a series with --germ")),
            };
            let ns = norm_sequence(&exp, rho);
            let fit = fit_gevrey(&ns, n_min)?;
            Ok(json!({"norms": ns.to_json(), "fit": fit.to_json()}))
        }
        Cmd::BorelSum {
            germ,
            depth,
            k,
            theta,
            at,
            t,
            max_continuation_error,
            input,
        } => {
            let opts = LaplaceOptions { max_continuation_error };
            match read_sum_input(&germ, depth, &input, prec)? {
                SumInput::Expansion(exp) => {
                    let at = at.ok_or_else(|| usage("--at is required for an expansion"))?;
                    let x0 = parse_point(&at, prec)?;
                    Ok(p_k_sum(&exp, &x0, k, theta, &opts)?.to_json())
                }
                SumInput::OneVar(s) => {
                    let t = t.ok_or_else(|| usage("--t is required for a coefficient list"))?;
                    let t = Scalar::parse_complex(&t, prec)
                        .map_err(|e| usage(format!("--t: {e}")))?
                        .to_complex(prec);
                    Ok(sum_series(&s, k, theta, &t, &opts)?.to_json())
                }
            }
        }
        Cmd::Directions {
            germ,
            depth,
            k,
            at,
            input,
        } => {
            let s = match read_sum_input(&germ, depth, &input, prec)? {
                SumInput::Expansion(exp) => {
                    let at = at.ok_or_else(|| usage("--at is required for an expansion"))?;
                    specialize(&exp, &parse_point(&at, prec)?, prec)?.0
                }
                SumInput::OneVar(s) => s,
            };
            Ok(singular_directions(&borel_transform(&s, k)?)?.to_json())
        }
        Cmd::Verify { name, trunc, theta } => {
            let v = verify(&name, trunc, theta, prec)?;
            if v["pass"] == json!(true) {
                Ok(v)
            } else {
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
                Err(Failure::Domain(format!("verification of {name} failed")))
            }
        }
        Cmd::Gen { name, trunc } => Ok(gen_example(&name, trunc)?.to_json()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(v) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&v).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
