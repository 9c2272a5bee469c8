//! Command-line front end: `integrate`, `volume`, `sweep`, `rule`.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cubature::{
    apply_rule_spec, conical_product_rule, grundmann_moller_rule, monte_carlo_integrate, transplant,
    transplant_exact, CubatureRule,
};
use crate::error::{Error, Result};
use crate::exact_integration::{
    integrate_affine_power, integrate_exp_affine, integrate_polynomial, integrate_qhomogeneous,
    AffinePowerMethod, PolyMethod,
};
use crate::functions::FunctionSpec;
use crate::geometry::{AnySimplex, Region, Simplex};
use crate::relaxations::{
    cutoff_report, integrate_function, simplex_rule, sweep, Quantity, RelaxConfig, RelaxationReport,
    SweepFamily, SweepRow,
};
use crate::scalar::{format_decimal, format_rational, parse_rational, Rational, Scalar, Value};

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "simplexvol", version, about = "Integration over simplices and relaxation volumes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate a function over a simplex.
    Integrate(IntegrateArgs),
    /// Perspective and naive relaxation volumes with the cut-off amount and ratio.
    Volume(VolumeArgs),
    /// Cut-off ratios over a grid of scale parameters.
    Sweep(SweepArgs),
    /// Export a cubature rule.
    Rule(RuleArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum IntegrateMethod {
    Auto,
    Pullback,
    #[value(alias = "taylor_expansion")]
    Taylor,
    #[value(alias = "linform_decomp")]
    Linform,
    Brion,
    Residue,
    Series,
    Polarization,
    Conical,
    Gm,
    #[value(alias = "monte_carlo", alias = "mc")]
    MonteCarlo,
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    /// `std:d`, `scaled:d,u`, `shifted:d,u,v0…`, `interval:l,u` or `file:path`.
    #[arg(long)]
    simplex: String,
    /// `poly:…`, `linpow:c=…;b=…;q=…`, `exp:c=…;b=…[;minus1]` or `logsumexp:d=…`.
    #[arg(long = "f")]
    function: String,
    #[arg(long, value_enum, default_value = "auto")]
    method: IntegrateMethod,
    /// Rule parameter for cubature (degree 2s+1).
    #[arg(long, default_value_t = 2)]
    s: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct VolumeArgs {
    #[arg(long)]
    simplex: String,
    #[arg(long = "f")]
    function: String,
    #[arg(long, default_value_t = 2)]
    s: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Midpoint-convexity audit on random segments.
    #[arg(long)]
    audit: bool,
    /// Skip the cubature check of the exponential closed form.
    #[arg(long)]
    no_validate: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Logsumexp,
    ExpA,
    ExpB,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    d: Option<usize>,
    /// `start:stop:step` (inclusive) or a comma-separated list.
    #[arg(long)]
    u_grid: String,
    /// Odd cubature degree for the simplex and radial rules.
    #[arg(long, default_value_t = 5)]
    degree: u32,
    /// Apex multiplier for `exp-a`.
    #[arg(long, default_value = "1")]
    k: f64,
    /// Base vertex for `exp-b`, comma separated.
    #[arg(long)]
    v0: Option<String>,
    #[arg(long)]
    no_validate: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("kind").required(true).args(["gm", "conical"]))]
struct RuleArgs {
    #[arg(long)]
    gm: bool,
    #[arg(long)]
    conical: bool,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    s: usize,
    /// Transplant the rule onto this simplex instead of Δ_d.
    #[arg(long)]
    simplex: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// Runs the command line `args` (program name first) and captures its output.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Output {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let result = match thread_limit() {
        Ok(Some(n)) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => Err(Error::Numeric(format!("thread pool: {e}"))),
        },
        Ok(None) => execute(cli.command),
        Err(e) => Err(e),
    };
    match result {
        Ok(stdout) => Output {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Output {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn thread_limit() -> Result<Option<usize>> {
    match std::env::var("SIMPLEXVOL_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::parse(v, "SIMPLEXVOL_THREADS must be a positive integer")),
        },
        Err(_) => Ok(None),
    }
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Integrate(a) => integrate(a),
        Command::Volume(a) => volume(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Rule(a) => rule(a),
    }
}

/// Parses a simplex shorthand.
pub fn parse_simplex(text: &str) -> Result<AnySimplex> {
    let (tag, body) = text
        .split_once(':')
        .ok_or_else(|| Error::parse(text, "expected `kind:parameters`"))?;
    if tag == "file" {
        let data = std::fs::read_to_string(body).map_err(|source| Error::Io {
            path: body.to_string(),
            source,
        })?;
        return AnySimplex::from_json(&data);
    }
    let nums: Vec<&str> = body.split(',').map(str::trim).collect();
    let dim = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::parse(s, "dimension must be a positive integer"))
    };
    let arity = |n: usize| -> Result<()> {
        if nums.len() == n {
            Ok(())
        } else {
            Err(Error::parse(body, format!("`{tag}` takes {n} parameters")))
        }
    };
    let simplex = match tag {
        "std" => {
            arity(1)?;
            Simplex::standard(dim(nums[0])?)
        }
        "scaled" => {
            arity(2)?;
            Simplex::scaled(dim(nums[0])?, parse_rational(nums[1])?)
        }
        "shifted" => {
            let d = dim(nums[0])?;
            arity(d + 2)?;
            let v0 = nums[2..].iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            Simplex::shifted(v0, parse_rational(nums[1])?)
        }
        "interval" => {
            arity(2)?;
            Simplex::new(vec![vec![parse_rational(nums[0])?], vec![parse_rational(nums[1])?]])?
        }
        other => return Err(Error::parse(other, "unknown simplex kind")),
    };
    // a zero scale collapses the shape
    simplex.affine_map()?;
    Ok(AnySimplex::Exact(simplex))
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serialization");
    s.push('\n');
    s
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Exact(r) => format_rational(r),
        Value::Approx(x) => format_decimal(*x),
    }
}

fn integrate(a: IntegrateArgs) -> Result<String> {
    let j = parse_simplex(&a.simplex)?;
    let f = FunctionSpec::parse(&a.function)?.for_dim(j.dim())?;
    let cfg = RelaxConfig {
        s: a.s,
        seed: a.seed,
        ..RelaxConfig::default()
    };
    let (value, method, error) = integrate_with(&j, &f, a.method, &cfg, a.samples)?;
    Ok(match a.format {
        Format::Csv => csv(
            &["value", "decimal", "method", "error"],
            &[vec![value_text(&value), format_decimal(value.to_f64()), method.clone(), format_decimal(error)]],
        ),
        Format::Json => json_text(&json!({
            "value": format_decimal(value.to_f64()),
            "rational": value.exact().map(format_rational),
            "method": method,
            "error": format_decimal(error),
        })),
    })
}

fn exact_poly(f: &FunctionSpec) -> Result<crate::polynomial::Polynomial> {
    f.to_polynomial()
        .ok_or_else(|| Error::Unsupported(format!("{f} is not a polynomial")))
}

fn affine_power_parts(f: &FunctionSpec) -> Result<(Vec<Rational>, Rational, u32)> {
    match f {
        FunctionSpec::LinPow { c, b, q } => {
            let n = crate::scalar::as_small_nonneg_int(q)
                .ok_or_else(|| Error::Unsupported("vertex formulas need a nonnegative integer power".into()))?;
            Ok((c.clone(), b.clone(), n))
        }
        _ => Err(Error::Unsupported(format!("{f} is not a power of an affine form"))),
    }
}

fn integrate_with(
    j: &AnySimplex,
    f: &FunctionSpec,
    method: IntegrateMethod,
    cfg: &RelaxConfig,
    samples: usize,
) -> Result<(Value, String, f64)> {
    let poly = |m: PolyMethod| -> Result<(Value, String, f64)> {
        let v = integrate_polynomial(&j.to_exact()?, &exact_poly(f)?, m)?;
        Ok((Value::Exact(v), m.tag().to_string(), 0.0))
    };
    let vertex = |m: AffinePowerMethod, tag: &str| -> Result<(Value, String, f64)> {
        if let FunctionSpec::ExpAffine { c, b, subtract_one } = f {
            let jf = j.to_f64();
            let cf: Vec<f64> = c.iter().map(Scalar::as_f64).collect();
            let r = integrate_exp_affine(&jf, &cf, b.as_f64())?;
            let vol = crate::geometry::simplex_volume(&jf)?;
            let v = if *subtract_one { r.value - vol } else { r.value };
            return Ok((Value::Approx(v), r.method.tag().to_string(), r.error_estimate));
        }
        let (c, b, n) = affine_power_parts(f)?;
        let v = integrate_affine_power(&j.to_exact()?, &c, &b, n, m)?;
        Ok((Value::Exact(v), tag.to_string(), 0.0))
    };
    let rule = |gm: bool| -> Result<(Value, String, f64)> {
        let jf = j.to_f64();
        let r = simplex_rule(&jf, cfg.s, gm)?;
        let v = apply_rule_spec(&r, f)?;
        // the other family of the same degree serves as the error estimate
        let other = apply_rule_spec(&simplex_rule(&jf, cfg.s, !gm)?, f)?;
        Ok((Value::Approx(v), format!("cubature:{}:{}", r.name, r.degree), (v - other).abs()))
    };
    match method {
        IntegrateMethod::Auto => {
            let q: Quantity = integrate_function(j, f, cfg)?;
            Ok((q.value.clone(), q.method.to_string(), q.error))
        }
        IntegrateMethod::Pullback => poly(PolyMethod::Pullback),
        IntegrateMethod::Taylor => poly(PolyMethod::TaylorExpansion),
        IntegrateMethod::Linform => poly(PolyMethod::LinformDecomp),
        IntegrateMethod::Brion => vertex(AffinePowerMethod::Brion, "brion"),
        IntegrateMethod::Residue => vertex(AffinePowerMethod::Residue, "residue"),
        IntegrateMethod::Series => vertex(AffinePowerMethod::Series, "series"),
        IntegrateMethod::Polarization => {
            let q = f
                .homogeneous_degree()
                .filter(|q| q.fract() == 0.0 && *q >= 1.0)
                .ok_or_else(|| Error::Unsupported(format!("{f} has no positive integer homogeneity degree")))?
                as u32;
            match integrate_qhomogeneous(&j.to_exact()?, f, q) {
                Ok(v) => Ok((Value::Exact(v), "polarization".into(), 0.0)),
                Err(Error::NotExact(_)) => {
                    let v = integrate_qhomogeneous(&j.to_f64(), f, q)?;
                    Ok((Value::Approx(v), "polarization".into(), 1e-15 * v.abs()))
                }
                Err(e) => Err(e),
            }
        }
        IntegrateMethod::Conical => rule(false),
        IntegrateMethod::Gm => rule(true),
        IntegrateMethod::MonteCarlo => {
            let jf = j.to_f64();
            let est = monte_carlo_integrate(Region::Simplex(&jf), |x| f.evaluate(x), samples, cfg.seed)?;
            Ok((Value::Approx(est.estimate), "monte_carlo".into(), est.stderr))
        }
    }
}

fn report_rows(r: &RelaxationReport) -> Vec<Vec<String>> {
    let row = |name: &str, q: Option<&Quantity>| match q {
        Some(q) => vec![
            name.to_string(),
            format_decimal(q.to_f64()),
            q.exact_value().map(format_rational).unwrap_or_default(),
            q.method.to_string(),
            format_decimal(q.error),
        ],
        None => vec![name.to_string(), "undefined".into(), String::new(), String::new(), String::new()],
    };
    vec![
        row("integral", Some(&r.integral)),
        row("perspective_volume", Some(&r.perspective_volume)),
        row("naive_volume", Some(&r.naive_volume)),
        row("cutoff_amount", Some(&r.cutoff_amount)),
        row("cutoff_ratio", r.cutoff_ratio.as_ref()),
    ]
}

fn volume(a: VolumeArgs) -> Result<String> {
    let j = parse_simplex(&a.simplex)?;
    let f = FunctionSpec::parse(&a.function)?;
    let cfg = RelaxConfig {
        s: a.s,
        seed: a.seed,
        audit_convexity: a.audit,
        validate_exp: !a.no_validate,
        ..RelaxConfig::default()
    };
    let report = cutoff_report(&j, &f, &cfg)?;
    Ok(match a.format {
        Format::Json => json_text(&report.to_json()),
        Format::Csv => csv(&["quantity", "value", "rational", "method", "error"], &report_rows(&report)),
    })
}

/// `start:stop:step` with an inclusive end, or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::parse(s, "expected a number"))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.len() {
        1 => text.split(',').map(num).collect(),
        3 => {
            let (a, b, h) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if h <= 0.0 || b < a {
                return Err(Error::parse(text, "grid needs start ≤ stop and a positive step"));
            }
            let n = ((b - a) / h + 1e-9).floor() as usize + 1;
            if n > 1_000_000 {
                return Err(Error::parse(text, "grid has too many points"));
            }
            Ok((0..n).map(|i| a + i as f64 * h).collect())
        }
        _ => Err(Error::parse(text, "expected start:stop:step")),
    }
}

fn run_sweep(a: SweepArgs) -> Result<String> {
    if a.degree % 2 == 0 {
        return Err(Error::parse(a.degree.to_string(), "cubature degree must be odd"));
    }
    let grid = parse_grid(&a.u_grid)?;
    let family = match a.family {
        Family::Logsumexp => SweepFamily::LogSumExp { d: a.d.unwrap_or(3) },
        Family::ExpA => SweepFamily::ExpA {
            d: a.d.unwrap_or(2),
            k: a.k,
        },
        Family::ExpB => {
            let v0 = match &a.v0 {
                Some(s) => s
                    .split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|_| Error::parse(x, "expected a number")))
                    .collect::<Result<Vec<_>>>()?,
                None => vec![1.0; a.d.unwrap_or(2)],
            };
            if let Some(d) = a.d {
                if d != v0.len() {
                    return Err(Error::parse(a.v0.unwrap_or_default(), "v0 length differs from --d"));
                }
            }
            SweepFamily::ExpB { v0 }
        }
    };
    if family.dim() == 0 {
        return Err(Error::parse("d", "dimension must be positive"));
    }
    let cfg = RelaxConfig {
        s: (a.degree as usize - 1) / 2,
        validate_exp: !a.no_validate,
        ..RelaxConfig::default()
    };
    let rows = sweep(&family, &grid, &cfg)?;
    Ok(match a.format {
        Format::Csv => csv(
            &["u", "perspective", "naive", "ratio"],
            &rows.iter().map(sweep_row).collect::<Vec<_>>(),
        ),
        Format::Json => json_text(&serde_json::Value::Array(
            rows.iter()
                .map(|r| {
                    json!({
                        "u": format_decimal(r.u),
                        "perspective": format_decimal(r.perspective),
                        "naive": format_decimal(r.naive),
                        "ratio": r.ratio.map(format_decimal),
                    })
                })
                .collect(),
        )),
    })
}

fn sweep_row(r: &SweepRow) -> Vec<String> {
    vec![
        format_decimal(r.u),
        format_decimal(r.perspective),
        format_decimal(r.naive),
        r.ratio.map(format_decimal).unwrap_or_else(|| "undefined".into()),
    ]
}

fn rule(a: RuleArgs) -> Result<String> {
    let base: CubatureRule = if a.gm {
        grundmann_moller_rule(a.d, a.s)?
    } else {
        conical_product_rule(a.d, a.s)?
    };
    let rule = match &a.simplex {
        None => base,
        Some(text) => {
            let j = parse_simplex(text)?;
            if j.dim() != a.d {
                return Err(Error::parse(text, "simplex dimension differs from --d"));
            }
            match (&j, base.exact_points.is_some()) {
                (AnySimplex::Exact(ex), true) => transplant_exact(&base, ex)?,
                _ => transplant(&base, &j.to_f64())?,
            }
        }
    };
    Ok(match a.format {
        Format::Json => json_text(&rule.to_json()),
        Format::Csv => {
            let mut header: Vec<String> = (1..=a.d).map(|i| format!("x{i}")).collect();
            header.push("weight".into());
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = (0..rule.len())
                .map(|i| {
                    match (&rule.exact_points, &rule.exact_weights) {
                        (Some(p), Some(w)) => {
                            let mut r: Vec<String> = p[i].iter().map(format_rational).collect();
                            r.push(format_rational(&w[i]));
                            r
                        }
                        _ => {
                            let mut r: Vec<String> = rule.points[i].iter().map(|x| format_decimal(*x)).collect();
                            r.push(format_decimal(rule.weights[i]));
                            r
                        }
                    }
                })
                .collect();
            csv(&header, &rows)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> Output {
        run(std::iter::once("simplexvol").chain(args.iter().copied()))
    }

    #[test]
    fn integrate_example() {
        let out = call(&["integrate", "--simplex", "std:2", "--f", "poly:x1*x2", "--method", "pullback"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let row = out.stdout.lines().nth(1).unwrap();
        assert_eq!(row.split(',').next().unwrap(), "1/24");
    }

    #[test]
    fn volume_example() {
        let out = call(&["volume", "--simplex", "interval:1,2", "--f", "poly:x1^2"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["cutoff_amount"]["rational"], "7/36");
    }

    #[test]
    fn rule_example() {
        let out = call(&["rule", "--gm", "--d", "2", "--s", "0"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["points"].as_array().unwrap().len(), 1);
        assert_eq!(v["points"][0][0], "1/3");
        assert_eq!(v["points"][0][1], "1/3");
        assert_eq!(v["weights"][0], "1/2");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["integrate", "--simplex", "std:x", "--f", "poly:x1"]).code, 2);
        let bad = call(&["integrate", "--simplex", "std:2", "--f", "poly:x1 +* x2"]);
        assert_eq!(bad.code, 2);
        assert!(bad.stderr.contains('`'));
        assert_eq!(call(&["volume", "--bogus"]).code, 2);
        assert_eq!(call(&["volume", "--simplex", "interval:1,2", "--f", "poly:x1^2 + 1"]).code, 3);
        assert_eq!(call(&["volume", "--simplex", "file:/nonexistent/simplex.json", "--f", "poly:x1"]).code, 5);
        assert_eq!(call(&["integrate", "--simplex", "std:1", "--f", "exp:c=900"]).code, 4);
    }

    #[test]
    fn shorthands() {
        assert_eq!(parse_simplex("shifted:2,1/2,1,3").unwrap().to_f64().vertex(1), &[1.5, 3.0]);
        assert_eq!(parse_simplex("scaled:3,2").unwrap().dim(), 3);
        assert!(parse_simplex("shifted:2,1,1").is_err());
        assert!(parse_simplex("interval:1,1").is_err());
        assert_eq!(parse_grid("2:4:1").unwrap(), vec![2.0, 3.0, 4.0]);
        assert_eq!(parse_grid("1,5").unwrap(), vec![1.0, 5.0]);
        assert!(parse_grid("3:1:1").is_err());
    }
}
