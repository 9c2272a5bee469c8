//! Integrand descriptions, evaluation, and the secant plane through the vertex values.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{simplex_volume, Simplex};
use crate::polynomial::Polynomial;
use crate::scalar::{as_small_nonneg_int, format_rational, parse_rational, Rational, Scalar};

/// A pure function of a point.
pub type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// The integrand families understood by the integrators.
#[derive(Clone)]
pub enum FunctionSpec {
    Poly(Polynomial),
    /// `(c·x + b)^q`.
    LinPow {
        c: Vec<Rational>,
        b: Rational,
        q: Rational,
    },
    /// `e^{c·x + b}`, minus one when `subtract_one` is set.
    ExpAffine {
        c: Vec<Rational>,
        b: Rational,
        subtract_one: bool,
    },
    /// `log((1/d) Σⱼ e^{xⱼ})`.
    LogSumExp { d: usize },
    /// A user evaluator satisfying `f(λx) = λ^q f(x)` for `λ ≥ 0`.
    QHomogeneous {
        eval: Evaluator,
        dim: usize,
        degree: f64,
        convex: bool,
    },
    BlackBox {
        eval: Evaluator,
        dim: usize,
        convex: bool,
    },
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionSpec({self})")
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |c: &[Rational]| c.iter().map(format_rational).collect::<Vec<_>>().join(",");
        match self {
            FunctionSpec::Poly(p) => write!(f, "poly:{p}"),
            FunctionSpec::LinPow { c, b, q } => write!(
                f,
                "linpow:c={};b={};q={}",
                join(c),
                format_rational(b),
                format_rational(q)
            ),
            FunctionSpec::ExpAffine { c, b, subtract_one } => {
                write!(f, "exp:c={};b={}", join(c), format_rational(b))?;
                if *subtract_one {
                    f.write_str(";minus1")?;
                }
                Ok(())
            }
            FunctionSpec::LogSumExp { d } => write!(f, "logsumexp:d={d}"),
            FunctionSpec::QHomogeneous { dim, degree, .. } => {
                write!(f, "qhomogeneous:d={dim};q={degree}")
            }
            FunctionSpec::BlackBox { dim, .. } => write!(f, "blackbox:d={dim}"),
        }
    }
}

impl FunctionSpec {
    pub fn q_homogeneous(
        dim: usize,
        degree: f64,
        convex: bool,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FunctionSpec::QHomogeneous {
            eval: Arc::new(eval),
            dim,
            degree,
            convex,
        }
    }

    pub fn black_box(
        dim: usize,
        convex: bool,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FunctionSpec::BlackBox {
            eval: Arc::new(eval),
            dim,
            convex,
        }
    }

    /// Parses the tagged mini-language: `poly:…`, `linpow:c=…;b=…;q=…`,
    /// `exp:c=…;b=…[;minus1]`, `logsumexp:d=…`.
    pub fn parse(text: &str) -> Result<Self> {
        let (tag, body) = text
            .split_once(':')
            .ok_or_else(|| Error::parse(text, "expected `tag:body`"))?;
        match tag.trim() {
            "poly" => Ok(FunctionSpec::Poly(Polynomial::parse(body)?)),
            "linpow" => {
                let fields = parse_fields(body, &["c", "b", "q"], &[])?;
                let c = parse_vector(fields.get("c").ok_or_else(|| Error::parse(body, "missing c="))?)?;
                let b = match fields.get("b") {
                    Some(s) => parse_rational(s)?,
                    None => Rational::zero(),
                };
                let q = parse_rational(fields.get("q").ok_or_else(|| Error::parse(body, "missing q="))?)?;
                Ok(FunctionSpec::LinPow { c, b, q })
            }
            "exp" => {
                let fields = parse_fields(body, &["c", "b"], &["minus1"])?;
                let c = parse_vector(fields.get("c").ok_or_else(|| Error::parse(body, "missing c="))?)?;
                let b = match fields.get("b") {
                    Some(s) => parse_rational(s)?,
                    None => Rational::zero(),
                };
                Ok(FunctionSpec::ExpAffine {
                    c,
                    b,
                    subtract_one: fields.contains_key("minus1"),
                })
            }
            "logsumexp" => {
                let fields = parse_fields(body, &["d"], &[])?;
                let d_str = fields.get("d").ok_or_else(|| Error::parse(body, "missing d="))?;
                let d: usize = d_str
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(d_str.as_str(), "dimension must be a positive integer"))?;
                if d == 0 {
                    return Err(Error::parse(d_str.as_str(), "dimension must be positive"));
                }
                Ok(FunctionSpec::LogSumExp { d })
            }
            other => Err(Error::parse(other, "unknown function tag")),
        }
    }

    /// Number of variables the spec expects; polynomials report the largest index used.
    pub fn dim(&self) -> usize {
        match self {
            FunctionSpec::Poly(p) => p.nvars(),
            FunctionSpec::LinPow { c, .. } | FunctionSpec::ExpAffine { c, .. } => c.len(),
            FunctionSpec::LogSumExp { d } => *d,
            FunctionSpec::QHomogeneous { dim, .. } | FunctionSpec::BlackBox { dim, .. } => *dim,
        }
    }

    /// Adapts the spec to dimension `d`, widening polynomials; errors on a mismatch.
    pub fn for_dim(&self, d: usize) -> Result<Self> {
        match self {
            FunctionSpec::Poly(p) => Ok(FunctionSpec::Poly(p.with_nvars(d)?)),
            _ if self.dim() == d => Ok(self.clone()),
            _ => Err(Error::Shape(format!(
                "function has {} variables but the simplex has dimension {d}",
                self.dim()
            ))),
        }
    }

    /// Degree of homogeneity when known from the representation.
    pub fn homogeneous_degree(&self) -> Option<f64> {
        match self {
            FunctionSpec::Poly(p) => {
                let parts = p.homogeneous_parts();
                match parts.len() {
                    1 => parts.keys().next().map(|&k| k as f64),
                    _ => None,
                }
            }
            FunctionSpec::LinPow { b, q, .. } if b.is_zero() => Some(q.as_f64()),
            FunctionSpec::QHomogeneous { degree, .. } => Some(*degree),
            _ => None,
        }
    }

    /// Whether the user asserted convexity; representations with known structure return `None`.
    pub fn asserted_convex(&self) -> Option<bool> {
        match self {
            FunctionSpec::QHomogeneous { convex, .. } | FunctionSpec::BlackBox { convex, .. } => {
                Some(*convex)
            }
            _ => None,
        }
    }

    /// The spec as an explicit polynomial, when it is one.
    pub fn to_polynomial(&self) -> Option<Polynomial> {
        match self {
            FunctionSpec::Poly(p) => Some(p.clone()),
            FunctionSpec::LinPow { c, b, q } => {
                let n = as_small_nonneg_int(q)?;
                Some(Polynomial::affine(c, b.clone()).pow(n))
            }
            _ => None,
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() && !matches!(self, FunctionSpec::Poly(_)) {
            return Err(Error::Shape(format!(
                "point has {} coordinates, function expects {}",
                x.len(),
                self.dim()
            )));
        }
        let value = match self {
            FunctionSpec::Poly(p) => {
                if x.len() < p.nvars() {
                    return Err(Error::Shape(format!(
                        "point has {} coordinates, polynomial uses {}",
                        x.len(),
                        p.nvars()
                    )));
                }
                p.eval(&x[..p.nvars()])
            }
            FunctionSpec::LinPow { c, b, q } => {
                let base = dot_f64(c, x) + b.as_f64();
                linpow_f64(base, q, x)?
            }
            FunctionSpec::ExpAffine { c, b, subtract_one } => {
                let t = dot_f64(c, x) + b.as_f64();
                if *subtract_one {
                    t.exp_m1()
                } else {
                    t.exp()
                }
            }
            FunctionSpec::LogSumExp { d } => log_sum_exp(x) - (*d as f64).ln(),
            FunctionSpec::QHomogeneous { eval, .. } | FunctionSpec::BlackBox { eval, .. } => eval(x),
        };
        if value.is_nan() {
            return Err(Error::Evaluation {
                point: x.to_vec(),
                message: "evaluator returned NaN".into(),
            });
        }
        Ok(value)
    }

    /// Exact value for polynomial-type specs; `None` for transcendental or black-box specs.
    pub fn evaluate_exact(&self, x: &[Rational]) -> Result<Option<Rational>> {
        match self {
            FunctionSpec::Poly(p) => {
                if x.len() < p.nvars() {
                    return Err(Error::Shape("point too short for polynomial".into()));
                }
                Ok(Some(p.eval(&x[..p.nvars()])))
            }
            FunctionSpec::LinPow { c, b, q } if q.is_integer() => {
                let base = c
                    .iter()
                    .zip(x)
                    .fold(b.clone(), |acc, (ci, xi)| acc + ci * xi);
                let n = q.to_integer().to_i32().ok_or_else(|| {
                    Error::Unsupported(format!("exponent {} too large", format_rational(q)))
                })?;
                if n < 0 && base.is_zero() {
                    return Err(Error::Domain("zero base with negative exponent".into()));
                }
                let v = num_traits::pow::pow(base, n.unsigned_abs() as usize);
                Ok(Some(if n < 0 { v.recip() } else { v }))
            }
            FunctionSpec::ExpAffine { c, b, subtract_one: true } => {
                let t = c.iter().zip(x).fold(b.clone(), |acc, (ci, xi)| acc + ci * xi);
                Ok(t.is_zero().then(Rational::zero))
            }
            FunctionSpec::LogSumExp { .. } => Ok(x.iter().all(Zero::is_zero).then(Rational::zero)),
            _ => Ok(None),
        }
    }

    /// Value at a vertex in the scalar type of the simplex.
    pub fn value_at<S: Scalar>(&self, x: &[S]) -> Result<S> {
        if S::EXACT {
            let xr = x.iter().map(Scalar::to_rational).collect::<Result<Vec<_>>>()?;
            match self.evaluate_exact(&xr)? {
                Some(v) => Ok(S::from_rational(&v)),
                None => Err(Error::NotExact(format!(
                    "{self} has no exact value at {:?}",
                    x.iter().map(Scalar::as_f64).collect::<Vec<_>>()
                ))),
            }
        } else {
            let xf: Vec<f64> = x.iter().map(Scalar::as_f64).collect();
            Ok(S::from_double(self.evaluate(&xf)?))
        }
    }

    /// `f(0)`, exactly when possible.
    pub fn value_at_origin(&self) -> Result<f64> {
        let d = self.dim();
        match self.evaluate_exact(&vec![Rational::zero(); d]) {
            Ok(Some(v)) => Ok(v.as_f64()),
            _ => self.evaluate(&vec![0.0; d]),
        }
    }
}

fn dot_f64(c: &[Rational], x: &[f64]) -> f64 {
    c.iter().zip(x).map(|(ci, xi)| ci.as_f64() * xi).sum()
}

fn linpow_f64(base: f64, q: &Rational, x: &[f64]) -> Result<f64> {
    if q.is_integer() {
        if let Some(n) = q.to_integer().to_i32() {
            if n < 0 && base == 0.0 {
                return Err(Error::Domain("zero base with negative exponent".into()));
            }
            return Ok(base.powi(n));
        }
    }
    let qf = q.as_f64();
    if base < 0.0 {
        return Err(Error::Domain(format!(
            "negative base {base} with fractional exponent {} at {x:?}",
            format_rational(q)
        )));
    }
    if base == 0.0 {
        return if q.is_positive() {
            Ok(0.0)
        } else {
            Err(Error::Domain("zero base with nonpositive exponent".into()))
        };
    }
    Ok(base.powf(qf))
}

/// `log Σ e^{xⱼ}` without overflow.
pub fn log_sum_exp(x: &[f64]) -> f64 {
    let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

fn parse_fields(
    body: &str,
    keys: &[&str],
    flags: &[&str],
) -> Result<std::collections::BTreeMap<String, String>> {
    let mut out = std::collections::BTreeMap::new();
    for part in body.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('=') {
            Some((k, v)) => {
                let k = k.trim();
                if !keys.contains(&k) {
                    return Err(Error::parse(k, "unknown field"));
                }
                if out.insert(k.to_string(), v.trim().to_string()).is_some() {
                    return Err(Error::parse(k, "duplicate field"));
                }
            }
            None => {
                if !flags.contains(&part) {
                    return Err(Error::parse(part, "unknown flag"));
                }
                out.insert(part.to_string(), String::new());
            }
        }
    }
    Ok(out)
}

fn parse_vector(s: &str) -> Result<Vec<Rational>> {
    let v = s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
    if v.is_empty() {
        return Err(Error::parse(s, "empty vector"));
    }
    Ok(v)
}

/// `μ(x) = gradient·x + constant`, the affine interpolant of `f` at the vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct SecantPlane<S> {
    pub gradient: Vec<S>,
    pub constant: S,
}

impl<S: Scalar> SecantPlane<S> {
    /// Interpolates the given vertex values.
    pub fn from_values(j: &Simplex<S>, values: &[S]) -> Result<Self> {
        let d = j.dim();
        if values.len() != d + 1 {
            return Err(Error::Shape(format!("need {} vertex values", d + 1)));
        }
        let map = j.affine_map()?;
        let w: Vec<S> = values[1..]
            .iter()
            .map(|v| v.clone() - values[0].clone())
            .collect();
        // gradientᵀ = wᵀ B⁻¹
        let gradient: Vec<S> = (0..d)
            .map(|i| {
                (0..d).fold(S::zero(), |acc, k| {
                    acc + w[k].clone() * map.inverse[k][i].clone()
                })
            })
            .collect();
        let constant = values[0].clone()
            - gradient
                .iter()
                .zip(j.vertex(0))
                .fold(S::zero(), |acc, (g, x)| acc + g.clone() * x.clone());
        Ok(SecantPlane { gradient, constant })
    }

    pub fn eval(&self, x: &[S]) -> S {
        self.gradient
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (g, xi)| acc + g.clone() * xi.clone())
    }

    pub fn to_polynomial(&self) -> Result<Polynomial> {
        let c = self
            .gradient
            .iter()
            .map(Scalar::to_rational)
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::affine(&c, self.constant.to_rational()?))
    }
}

pub fn vertex_values<S: Scalar>(spec: &FunctionSpec, j: &Simplex<S>) -> Result<Vec<S>> {
    j.vertices().iter().map(|v| spec.value_at(v)).collect()
}

pub fn secant_plane<S: Scalar>(spec: &FunctionSpec, j: &Simplex<S>) -> Result<SecantPlane<S>> {
    SecantPlane::from_values(j, &vertex_values(spec, j)?)
}

/// `∫_J μ = vol(J)/(d+1) · Σⱼ f(vⱼ)`.
pub fn secant_mean<S: Scalar>(spec: &FunctionSpec, j: &Simplex<S>) -> Result<S> {
    let values = vertex_values(spec, j)?;
    secant_mean_from_values(j, &values)
}

pub fn secant_mean_from_values<S: Scalar>(j: &Simplex<S>, values: &[S]) -> Result<S> {
    let vol = simplex_volume(j)?;
    let n = S::from_u64(values.len() as u64);
    let sum = values.iter().fold(S::zero(), |acc, v| acc + v.clone());
    Ok(vol * sum / n)
}

/// Checks `|f(λx) − λ^q f(x)| ≤ 1e-10·(1 + |f(x)|)` on the given samples.
pub fn check_homogeneity(spec: &FunctionSpec, degree: f64, samples: &[(f64, Vec<f64>)]) -> Result<()> {
    for (lambda, x) in samples {
        let fx = spec.evaluate(x)?;
        let scaled: Vec<f64> = x.iter().map(|v| v * lambda).collect();
        let fl = spec.evaluate(&scaled)?;
        let expected = lambda.powf(degree) * fx;
        if (fl - expected).abs() > 1e-10 * (1.0 + fx.abs()) {
            return Err(Error::Precondition(format!(
                "function is not {degree}-homogeneous: f({lambda}·x) = {fl}, expected {expected} at x = {x:?}"
            )));
        }
    }
    Ok(())
}

impl FunctionSpec {
    /// Whether `f` is affine (so `μ ≡ f`).
    pub fn is_affine(&self) -> bool {
        match self {
            FunctionSpec::Poly(p) => p.degree() <= 1,
            FunctionSpec::LinPow { q, c, .. } => {
                q.is_zero() || q.is_one() || c.iter().all(Zero::is_zero)
            }
            FunctionSpec::ExpAffine { c, .. } => c.iter().all(Zero::is_zero),
            _ => false,
        }
    }
}
