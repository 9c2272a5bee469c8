//! Volumes of the perspective and naive relaxations of `{0} ∪ {(x, z=1, y) : x ∈ J, f(x) ≤ y ≤ μ(x)}`.
//!
//! With `μ` the secant plane and `F = d!·vol(J)`:
//!
//! * perspective: `(∫_J μ − ∫_J f)/(d+2)`
//! * naive: `(∫_J μ)/(d+2) − ∫₀¹ z^d ∫_J f(zx) dx dz`

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

pub use crate::combinatorics::h_complete;
use crate::combinatorics::{factorial_f64, factorial_q};
use crate::cubature::{
    apply_rule, cone_product_rule, conical_product_rule, grundmann_moller_rule, monte_carlo_integrate,
    radial_rule, transplant, CubatureRule,
};
use crate::error::{Error, Result};
use crate::exact_integration::{
    exp_tail_scaled, integrate_affine_power, integrate_exp_affine, integrate_polynomial,
    integrate_qhomogeneous, AffinePowerMethod, ExpMethod, PolyMethod,
};
use crate::functions::{check_homogeneity, secant_mean_from_values, vertex_values, FunctionSpec};
use crate::geometry::{sample_uniform, simplex_volume, AnySimplex, ConeRegion, Region, Simplex, UniformSampler};
use crate::scalar::{format_decimal, format_rational, rational_from_f64, Rational, Scalar, Value};

/// Largest `|f(0)|` accepted by the naive relaxation.
pub const ORIGIN_TOL: f64 = 1e-12;
/// The ratio is undefined when the naive volume is at most this times the problem scale.
pub const RATIO_GUARD: f64 = 1e-14;
/// Relative agreement demanded between the exponential closed form and cone cubature.
pub const EXP_VALIDATION_TOL: f64 = 1e-6;

/// Cone rules used to check the exponential closed form stop growing past this many points.
const VALIDATION_POINT_CAP: usize = 4_000_000;

/// How a reported quantity was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MethodTag {
    ClosedForm,
    ExactPoly,
    Brion,
    Series,
    Cubature { rule: String, degree: u32 },
    MonteCarlo,
}

impl MethodTag {
    fn rank(&self) -> u8 {
        match self {
            MethodTag::ExactPoly => 0,
            MethodTag::ClosedForm => 1,
            MethodTag::Brion => 2,
            MethodTag::Series => 3,
            MethodTag::Cubature { .. } => 4,
            MethodTag::MonteCarlo => 5,
        }
    }

    /// The less exact of two routes.
    pub fn weaker(&self, other: &MethodTag) -> MethodTag {
        if other.rank() > self.rank() {
            other.clone()
        } else {
            self.clone()
        }
    }

    fn from_exp(m: ExpMethod) -> Self {
        match m {
            ExpMethod::Brion => MethodTag::Brion,
            ExpMethod::EqualDifference => MethodTag::ClosedForm,
            ExpMethod::Series => MethodTag::Series,
        }
    }
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodTag::ClosedForm => f.write_str("closed_form"),
            MethodTag::ExactPoly => f.write_str("exact_poly"),
            MethodTag::Brion => f.write_str("brion"),
            MethodTag::Series => f.write_str("series"),
            MethodTag::Cubature { rule, degree } => write!(f, "cubature:{rule}:{degree}"),
            MethodTag::MonteCarlo => f.write_str("monte_carlo"),
        }
    }
}

/// A value with its route and an absolute error estimate (zero when exact).
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub value: Value,
    pub method: MethodTag,
    pub error: f64,
}

impl Quantity {
    pub fn exact(r: Rational, method: MethodTag) -> Self {
        Quantity {
            value: Value::Exact(r),
            method,
            error: 0.0,
        }
    }

    pub fn approx(x: f64, method: MethodTag, error: f64) -> Self {
        Quantity {
            value: Value::Approx(x),
            method,
            error: error.abs(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.value.exact()
    }

    pub fn sub(&self, other: &Quantity) -> Quantity {
        let value = match (&self.value, &other.value) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a - b),
            (a, b) => Value::Approx(a.to_f64() - b.to_f64()),
        };
        Quantity {
            value,
            method: self.method.weaker(&other.method),
            error: self.error + other.error,
        }
    }

    pub fn scale(&self, r: &Rational) -> Quantity {
        let value = match &self.value {
            Value::Exact(a) => Value::Exact(a * r),
            Value::Approx(x) => Value::Approx(x * r.as_f64()),
        };
        Quantity {
            value,
            method: self.method.clone(),
            error: self.error * r.as_f64().abs(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "value": format_decimal(self.to_f64()),
            "rational": self.exact_value().map(format_rational),
            "method": self.method.to_string(),
            "error": format_decimal(self.error),
        })
    }
}

fn value_json(v: &Value) -> serde_json::Value {
    json!({
        "value": format_decimal(v.to_f64()),
        "rational": v.exact().map(format_rational),
    })
}

/// Settings shared by the relaxation routines.
#[derive(Debug, Clone)]
pub struct RelaxConfig {
    /// Rule parameter: conical and radial rules of degree `2s+1`.
    pub s: usize,
    pub seed: u64,
    /// Run the stochastic midpoint-convexity audit.
    pub audit_convexity: bool,
    pub audit_checks: usize,
    /// Exact polynomial method; `None` picks by dimension.
    pub poly_method: Option<PolyMethod>,
    /// Check the exponential closed form against cone cubature.
    pub validate_exp: bool,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        RelaxConfig {
            s: 2,
            seed: 0x5eed,
            audit_convexity: false,
            audit_checks: 1000,
            poly_method: None,
            validate_exp: true,
        }
    }
}

/// Outcome of checking the exponential naive closed form against cone cubature.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpValidation {
    pub closed: f64,
    pub cubature: f64,
    /// Difference between the last two cone rules.
    pub cubature_error: f64,
    pub relative: f64,
    pub rule_degree: u32,
    /// Whether the cubature was accurate enough to judge the closed form.
    pub conclusive: bool,
}

impl ExpValidation {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "closed": format_decimal(self.closed),
            "cubature": format_decimal(self.cubature),
            "cubature_error": format_decimal(self.cubature_error),
            "relative": format_decimal(self.relative),
            "rule_degree": self.rule_degree,
            "conclusive": self.conclusive,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationReport {
    pub dim: usize,
    /// Which closed form or fallback produced the volumes.
    pub route: &'static str,
    pub integral: Quantity,
    pub secant_mean: Value,
    pub perspective_volume: Quantity,
    pub naive_volume: Quantity,
    pub cutoff_amount: Quantity,
    /// `None` when the naive volume is too small to divide by.
    pub cutoff_ratio: Option<Quantity>,
    pub validation: Option<ExpValidation>,
}

impl RelaxationReport {
    /// Fills in the cut-off amount and ratio and checks `naive ≥ perspective ≥ 0`
    /// up to the error estimates.
    fn assemble(
        dim: usize,
        route: &'static str,
        integral: Quantity,
        secant_mean: Value,
        perspective: Quantity,
        naive: Quantity,
        scale: f64,
    ) -> Result<Self> {
        let cutoff = naive.sub(&perspective);
        let slack = 1e-12 * scale;
        if perspective.to_f64() < -(2.0 * perspective.error + slack) {
            return Err(Error::Numeric(format!(
                "perspective volume {} is negative beyond its error {}",
                perspective.to_f64(),
                perspective.error
            )));
        }
        if cutoff.to_f64() < -(2.0 * cutoff.error + slack) {
            return Err(Error::Numeric(format!(
                "naive volume {} is below the perspective volume {}",
                naive.to_f64(),
                perspective.to_f64()
            )));
        }
        let n = naive.to_f64();
        let cutoff_ratio = if n <= RATIO_GUARD * scale || n <= 0.0 {
            None
        } else {
            let value = match (&cutoff.value, &naive.value) {
                (Value::Exact(c), Value::Exact(nv)) => Value::Exact(c / nv),
                (c, _) => Value::Approx(c.to_f64() / n),
            };
            let r = value.to_f64();
            let error = if cutoff.error == 0.0 && naive.error == 0.0 {
                0.0
            } else {
                (cutoff.error + r.abs() * naive.error) / n
            };
            Some(Quantity {
                value,
                method: cutoff.method.clone(),
                error,
            })
        };
        Ok(RelaxationReport {
            dim,
            route,
            integral,
            secant_mean,
            perspective_volume: perspective,
            naive_volume: naive,
            cutoff_amount: cutoff,
            cutoff_ratio,
            validation: None,
        })
    }

    pub fn ratio_undefined(&self) -> bool {
        self.cutoff_ratio.is_none()
    }

    pub fn ratio_f64(&self) -> Option<f64> {
        self.cutoff_ratio.as_ref().map(Quantity::to_f64)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "dimension": self.dim,
            "route": self.route,
            "integral": self.integral.to_json(),
            "secant_mean": value_json(&self.secant_mean),
            "perspective_volume": self.perspective_volume.to_json(),
            "naive_volume": self.naive_volume.to_json(),
            "cutoff_amount": self.cutoff_amount.to_json(),
            "cutoff_ratio": self.cutoff_ratio.as_ref().map(Quantity::to_json),
            "ratio_undefined": self.ratio_undefined(),
            "validation": self.validation.as_ref().map(ExpValidation::to_json),
        })
    }
}

// ---------------------------------------------------------------------------
// preconditions

/// `J` must lie in the nonnegative orthant; the origin may only sit on its boundary.
pub fn check_domain(j: &AnySimplex) -> Result<()> {
    let negative = match j {
        AnySimplex::Exact(s) => s.vertices().iter().flatten().any(Signed::is_negative),
        AnySimplex::Numeric(s) => s.vertices().iter().flatten().any(|x| *x < 0.0),
    };
    if negative {
        return Err(Error::Domain(
            "relaxation simplex must lie in the nonnegative orthant".into(),
        ));
    }
    // With every coordinate nonnegative the origin can only be a boundary point of J.
    Ok(())
}

fn check_origin(f: &FunctionSpec) -> Result<()> {
    let f0 = f.value_at_origin()?;
    if f0.abs() > ORIGIN_TOL {
        return Err(Error::Precondition(format!(
            "naive relaxation needs f(0) = 0, got {f0}"
        )));
    }
    Ok(())
}

fn check_asserted_convex(f: &FunctionSpec) -> Result<()> {
    if f.asserted_convex() == Some(false) {
        return Err(Error::Precondition(format!("{f} is not asserted convex")));
    }
    Ok(())
}

/// Midpoint-convexity audit on random segments of `J` (or of `conv(J ∪ {0})` when `with_origin`).
pub fn audit_convexity(j: &Simplex<f64>, f: &FunctionSpec, checks: usize, seed: u64, with_origin: bool) -> Result<()> {
    let cone = ConeRegion::new(j.clone());
    let region = if with_origin {
        Region::Cone(&cone)
    } else {
        Region::Simplex(j)
    };
    let d = j.dim();
    let mut sampler = UniformSampler::new(region, seed)?;
    let mut a = vec![0.0; region.point_dim()];
    let mut b = vec![0.0; region.point_dim()];
    for _ in 0..checks {
        sampler.next_into(&mut a);
        sampler.next_into(&mut b);
        let (x, y) = (&a[..d], &b[..d]);
        let mid: Vec<f64> = x.iter().zip(y).map(|(p, q)| 0.5 * (p + q)).collect();
        let fx = f.evaluate(x)?;
        let fy = f.evaluate(y)?;
        let fm = f.evaluate(&mid)?;
        let chord = 0.5 * (fx + fy);
        if fm > chord + 1e-9 * (1.0 + fx.abs() + fy.abs()) {
            return Err(Error::Precondition(format!(
                "convexity audit failed: f(midpoint) = {fm} exceeds the chord value {chord} between {x:?} and {y:?}"
            )));
        }
    }
    Ok(())
}

fn homogeneity_samples(j: &Simplex<f64>, seed: u64, count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let points = sample_uniform(Region::Simplex(j), count, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    Ok(points
        .into_iter()
        .map(|x| (rng.random_range(0.0..2.0), x))
        .collect())
}

// ---------------------------------------------------------------------------
// building blocks

fn poly_method(cfg: &RelaxConfig, d: usize) -> PolyMethod {
    cfg.poly_method.unwrap_or_else(|| PolyMethod::default_for_dim(d))
}

/// `∫_J μ = vol(J)/(d+1)·Σⱼ f(vⱼ)`, exact whenever every vertex value is rational,
/// together with the scale `vol(J)·maxⱼ|f(vⱼ)|`.
pub fn secant_mean_value(j: &AnySimplex, f: &FunctionSpec) -> Result<(Value, f64)> {
    if let Ok(ex) = j.to_exact() {
        match vertex_values::<Rational>(f, &ex) {
            Ok(vals) => {
                let vol = simplex_volume(&ex)?.as_f64();
                let top = vals.iter().map(|v| v.as_f64().abs()).fold(0.0, f64::max);
                return Ok((Value::Exact(secant_mean_from_values(&ex, &vals)?), vol * top));
            }
            Err(Error::NotExact(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let jf = j.to_f64();
    let vals = vertex_values::<f64>(f, &jf)?;
    let vol = simplex_volume(&jf)?;
    let top = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok((Value::Approx(secant_mean_from_values(&jf, &vals)?), vol * top))
}

/// Conical product rule of parameter `s` on `J`.
pub fn simplex_rule(j: &Simplex<f64>, s: usize, grundmann_moller: bool) -> Result<CubatureRule> {
    let base = if grundmann_moller {
        grundmann_moller_rule(j.dim(), s)?
    } else {
        conical_product_rule(j.dim(), s)?
    };
    transplant(&base, j)
}

/// Rule on `{(x, z) : x ∈ zJ, 0 ≤ z ≤ 1}` from a base rule on `J` and a `z^d` radial rule.
pub fn cone_rule(j: &Simplex<f64>, s: usize, grundmann_moller: bool) -> Result<CubatureRule> {
    let base = simplex_rule(j, s, grundmann_moller)?;
    cone_product_rule(&base, &radial_rule(j.dim(), s)?)
}

fn cubature_tag(s: usize, rule: &str) -> MethodTag {
    MethodTag::Cubature {
        rule: rule.to_string(),
        degree: 2 * s as u32 + 1,
    }
}

/// Conical-product estimate of `∫_J f`, with the same-degree Grundmann-Möller value as error estimate.
pub fn integral_by_cubature(j: &Simplex<f64>, f: &FunctionSpec, s: usize) -> Result<Quantity> {
    let v = apply_rule(&simplex_rule(j, s, false)?, |x| f.evaluate(x))?;
    let check = apply_rule(&simplex_rule(j, s, true)?, |x| f.evaluate(x))?;
    Ok(Quantity::approx(v, cubature_tag(s, "conical_product"), v - check))
}

/// Cone-rule estimate of `∫₀¹ z^d ∫_J f(zx) dx dz`.
pub fn naive_defect_by_cubature(j: &Simplex<f64>, f: &FunctionSpec, s: usize) -> Result<Quantity> {
    let d = j.dim();
    let eval = |p: &[f64]| f.evaluate(&p[..d]);
    let v = apply_rule(&cone_rule(j, s, false)?, eval)?;
    let check = apply_rule(&cone_rule(j, s, true)?, eval)?;
    Ok(Quantity::approx(v, cubature_tag(s, "cone_product"), v - check))
}

/// Monte-Carlo estimate of `∫₀¹ z^d ∫_J f(zx) dx dz` over the cone region.
pub fn naive_defect_monte_carlo(j: &Simplex<f64>, f: &FunctionSpec, n: usize, seed: u64) -> Result<Quantity> {
    let d = j.dim();
    let cone = ConeRegion::new(j.clone());
    let est = monte_carlo_integrate(Region::Cone(&cone), |p| f.evaluate(&p[..d]), n, seed)?;
    Ok(Quantity::approx(est.estimate, MethodTag::MonteCarlo, est.stderr))
}

/// `∫_J f` by the best route for the spec.
pub fn integrate_function(j: &AnySimplex, f: &FunctionSpec, cfg: &RelaxConfig) -> Result<Quantity> {
    let d = j.dim();
    let f = f.for_dim(d)?;
    match &f {
        FunctionSpec::LinPow { c, b, q } if q.is_integer() && !q.is_negative() => {
            let n = q.to_integer().to_u32().ok_or_else(|| Error::Unsupported("exponent too large".into()))?;
            let ex = j.to_exact()?;
            let v = integrate_affine_power(&ex, c, b, n, AffinePowerMethod::Auto)?;
            Ok(Quantity::exact(v, MethodTag::Brion))
        }
        FunctionSpec::Poly(p) => {
            let ex = j.to_exact()?;
            let v = integrate_polynomial(&ex, p, poly_method(cfg, d))?;
            Ok(Quantity::exact(v, MethodTag::ExactPoly))
        }
        FunctionSpec::ExpAffine { c, b, subtract_one } => {
            let jf = j.to_f64();
            let cf: Vec<f64> = c.iter().map(Scalar::as_f64).collect();
            let r = integrate_exp_affine(&jf, &cf, b.as_f64())?;
            let mut value = r.value;
            let mut error = r.error_estimate;
            if *subtract_one {
                let vol = simplex_volume(&jf)?;
                value -= vol;
                error += 1e-16 * vol;
            }
            Ok(Quantity::approx(value, MethodTag::from_exp(r.method), error))
        }
        FunctionSpec::QHomogeneous { degree, .. }
            if degree.fract() == 0.0 && *degree >= 1.0 && *degree <= 24.0 =>
        {
            let q = *degree as u32;
            let jf = j.to_f64();
            let polar = integrate_qhomogeneous(&jf, &f, q)?;
            // polarization is only valid for forms; confirm with a rule exact to degree q
            let s = cfg.s.max(q.div_ceil(2) as usize);
            let cub = integral_by_cubature(&jf, &f, s)?;
            let diff = (polar - cub.to_f64()).abs();
            let scale = polar.abs().max(cub.to_f64().abs()).max(f64::MIN_POSITIVE);
            if diff <= 1e-9 * scale {
                Ok(Quantity::approx(polar, MethodTag::ClosedForm, diff.max(1e-15 * scale)))
            } else {
                Ok(Quantity::approx(cub.to_f64(), cub.method, cub.error.max(diff)))
            }
        }
        _ => integral_by_cubature(&j.to_f64(), &f, cfg.s),
    }
}

/// Degree of homogeneity as a rational, when the spec carries one.
fn homogeneity(f: &FunctionSpec) -> Option<Rational> {
    match f {
        FunctionSpec::LinPow { b, q, .. } if b.is_zero() => Some(q.clone()),
        FunctionSpec::Poly(p) => {
            let parts = p.homogeneous_parts();
            (parts.len() == 1).then(|| Rational::from_u64(*parts.keys().next().unwrap() as u64))
        }
        FunctionSpec::QHomogeneous { degree, .. } => rational_from_f64(*degree).ok(),
        _ => None,
    }
}

/// `∫₀¹ z^d ∫_J f(zx) dx dz`: exact for polynomials vanishing at 0, `∫_J f/(q+d+1)`
/// for q-homogeneous f, cone cubature otherwise.
fn naive_defect(j: &AnySimplex, f: &FunctionSpec, integral: &Quantity, cfg: &RelaxConfig) -> Result<Quantity> {
    let d = j.dim();
    if let Some(q) = homogeneity(f) {
        let den = q + Rational::from_u64(d as u64 + 1);
        if den.is_positive() {
            return Ok(integral.scale(&den.recip()));
        }
    }
    if let Some(p) = f.to_polynomial() {
        let ex = j.to_exact()?;
        let method = poly_method(cfg, d);
        let mut total = Rational::zero();
        for (k, part) in p.with_nvars(d)?.homogeneous_parts() {
            if k == 0 {
                continue;
            }
            total += integrate_polynomial(&ex, &part, method)? / Rational::from_u64((k + d as u32 + 1) as u64);
        }
        return Ok(Quantity::exact(total, MethodTag::ExactPoly));
    }
    naive_defect_by_cubature(&j.to_f64(), f, cfg.s)
}

fn divide_by(q: &Value, n: u64) -> Value {
    match q {
        Value::Exact(r) => Value::Exact(r / Rational::from_u64(n)),
        Value::Approx(x) => Value::Approx(x / n as f64),
    }
}

fn value_quantity(v: &Value, method: MethodTag) -> Quantity {
    match v {
        Value::Exact(r) => Quantity::exact(r.clone(), method),
        Value::Approx(x) => Quantity::approx(*x, method, 4.0 * f64::EPSILON * x.abs()),
    }
}

struct Prepared {
    f: FunctionSpec,
    secant: Value,
    scale: f64,
}

fn prepare(j: &AnySimplex, f: &FunctionSpec, cfg: &RelaxConfig, naive: bool) -> Result<Prepared> {
    let f = f.for_dim(j.dim())?;
    check_domain(j)?;
    check_asserted_convex(&f)?;
    if naive {
        check_origin(&f)?;
    }
    if cfg.audit_convexity {
        audit_convexity(&j.to_f64(), &f, cfg.audit_checks, cfg.seed, naive)?;
    }
    let (secant, scale) = secant_mean_value(j, &f)?;
    Ok(Prepared { f, secant, scale })
}

fn perspective_from(secant: &Value, integral: &Quantity, d: usize) -> Quantity {
    value_quantity(secant, integral.method.clone())
        .sub(integral)
        .scale(&Rational::new(1.into(), (d as i64 + 2).into()))
}

fn naive_from(secant: &Value, defect: &Quantity, d: usize) -> Quantity {
    value_quantity(&divide_by(secant, d as u64 + 2), defect.method.clone()).sub(defect)
}

// ---------------------------------------------------------------------------
// volumes

/// `vol(P(f,J)) = (∫_J μ − ∫_J f)/(d+2)`.
pub fn perspective_volume(j: &AnySimplex, f: &FunctionSpec, cfg: &RelaxConfig) -> Result<Quantity> {
    let p = prepare(j, f, cfg, false)?;
    let integral = integrate_function(j, &p.f, cfg)?;
    Ok(perspective_from(&p.secant, &integral, j.dim()))
}

/// `vol(P⁰(f,J)) = (∫_J μ)/(d+2) − ∫₀¹ z^d ∫_J f(zx) dx dz`.
pub fn naive_volume(j: &AnySimplex, f: &FunctionSpec, cfg: &RelaxConfig) -> Result<Quantity> {
    let p = prepare(j, f, cfg, true)?;
    let integral = integrate_function(j, &p.f, cfg)?;
    let defect = naive_defect(j, &p.f, &integral, cfg)?;
    Ok(naive_from(&p.secant, &defect, j.dim()))
}

/// Naive volume using only the cone cubature route for the defect integral.
pub fn naive_volume_cubature(j: &AnySimplex, f: &FunctionSpec, cfg: &RelaxConfig) -> Result<Quantity> {
    let p = prepare(j, f, cfg, true)?;
    let defect = naive_defect_by_cubature(&j.to_f64(), &p.f, cfg.s)?;
    Ok(naive_from(&p.secant, &defect, j.dim()))
}

fn checked_qhomogeneous(j: &AnySimplex, f: &FunctionSpec, q: f64, cfg: &RelaxConfig) -> Result<Rational> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::Precondition(format!("homogeneity degree must be ≥ 1, got {q}")));
    }
    let f = f.for_dim(j.dim())?;
    let samples = homogeneity_samples(&j.to_f64(), cfg.seed, 100)?;
    check_homogeneity(&f, q, &samples)?;
    rational_from_f64(q)
}

/// `(∫_J μ)/(d+2) − ∫_J f/(q+d+1)` for q-homogeneous `f`.
pub fn naive_volume_qhomogeneous(j: &AnySimplex, f: &FunctionSpec, q: f64, cfg: &RelaxConfig) -> Result<Quantity> {
    let qr = checked_qhomogeneous(j, f, q, cfg)?;
    let p = prepare(j, f, cfg, true)?;
    let d = j.dim();
    let integral = integrate_function(j, &p.f, cfg)?;
    let defect = integral.scale(&(qr + Rational::from_u64(d as u64 + 1)).recip());
    Ok(naive_from(&p.secant, &defect, d))
}

/// `(q−1)/((q+d+1)(d+2)) · ∫_J f` for q-homogeneous `f`.
pub fn cutoff_qhomogeneous(j: &AnySimplex, f: &FunctionSpec, q: f64, cfg: &RelaxConfig) -> Result<Quantity> {
    let qr = checked_qhomogeneous(j, f, q, cfg)?;
    prepare(j, f, cfg, true)?;
    let d = Rational::from_u64(j.dim() as u64);
    let integral = integrate_function(j, f, cfg)?;
    let two = Rational::from_u64(2);
    let coeff = (qr.clone() - Rational::one()) / ((qr + &d + Rational::one()) * (d + two));
    Ok(integral.scale(&coeff))
}

/// `(q−1)/(Γ(q+d+2)/((d+1)!Γ(q+1)) − (d+2))`: lower bound on the cut-off ratio of
/// `(c·x)^q` when every `c·vⱼ ≥ 0`.
pub fn ratio_lower_bound_power(q: f64, d: usize) -> Result<f64> {
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::Precondition(format!("power bound needs q > 1, got {q}")));
    }
    let df = d as f64;
    let log_c = libm::lgamma(q + df + 2.0) - libm::lgamma(df + 2.0) - libm::lgamma(q + 1.0);
    Ok((q - 1.0) / (log_c.exp() - (df + 2.0)))
}

/// `(q−1)/(C(q+d+1, q)·2^{q/2}(q/2)! − (d+2))` for even `q`, without a sign condition.
pub fn ratio_lower_bound_even(q: u32, d: usize) -> Result<f64> {
    Ok(ratio_lower_bound_even_exact(q, d)?.as_f64())
}

pub fn ratio_lower_bound_even_exact(q: u32, d: usize) -> Result<Rational> {
    if q < 2 || q % 2 == 1 {
        return Err(Error::Precondition(format!("even bound needs an even q ≥ 2, got {q}")));
    }
    let du = d as u32;
    let binom = factorial_q(q + du + 1) / (factorial_q(q) * factorial_q(du + 1));
    let half = q / 2;
    let den = binom * Rational::from_u64(2).powu(half) * factorial_q(half) - Rational::from_u64(d as u64 + 2);
    Ok(Rational::from_u64(q as u64 - 1) / den)
}

// ---------------------------------------------------------------------------
// complete homogeneous bounds

#[derive(Debug, Clone, PartialEq)]
pub struct HunterCheck<S> {
    pub h: S,
    pub power_sum: S,
    /// `Σxⱼ^q/(2^{q/2}(q/2)!)`, raised to `½Σxⱼ^q` when the improved bound applies.
    pub bound: S,
    pub improved: bool,
}

/// Whether `h_q ≥ ½Σxⱼ^q` is known for `d` values: `q = 2`, `d = 2`, or `d = 3, q = 4`.
pub fn improved_bound_applies(q: u32, d: usize) -> bool {
    q == 2 || d == 2 || (d == 3 && q == 4)
}

/// Evaluates `h_q` and its lower bound, failing if the bound is violated.
pub fn hunter_bound_check<S: Scalar>(q: u32, values: &[S]) -> Result<HunterCheck<S>> {
    if q % 2 == 1 {
        return Err(Error::Precondition(format!("bound needs an even degree, got {q}")));
    }
    let h = h_complete(q, values);
    let power_sum = values.iter().fold(S::zero(), |acc, x| acc + x.powu(q));
    let improved = improved_bound_applies(q, values.len());
    let coeff = if improved {
        Rational::new(1.into(), 2.into())
    } else {
        let half = q / 2;
        (Rational::from_u64(2).powu(half) * factorial_q(half)).recip()
    };
    let bound = power_sum.clone() * S::from_rational(&coeff);
    let slack = if S::EXACT {
        S::zero()
    } else {
        S::from_double(1e-12 * power_sum.as_f64().abs())
    };
    if h < bound.clone() - slack {
        return Err(Error::Numeric(format!(
            "h_{q} = {:e} below its bound {:e}",
            h.as_f64(),
            bound.as_f64()
        )));
    }
    Ok(HunterCheck {
        h,
        power_sum,
        bound,
        improved,
    })
}

// ---------------------------------------------------------------------------
// exponential family f = e^{c·x} − 1

/// A simplex on which `c·v₀ − c·vⱼ = u` for every `j ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpFamilyParams {
    simplex: Simplex<f64>,
    c: Vec<f64>,
    u: f64,
    apex: f64,
}

impl ExpFamilyParams {
    /// Validates the common difference with vertex 0 as the apex.
    pub fn new(simplex: Simplex<f64>, c: Vec<f64>) -> Result<Self> {
        let d = simplex.dim();
        if c.len() != d {
            return Err(Error::Shape(format!("direction has {} entries for dimension {d}", c.len())));
        }
        let p: Vec<f64> = simplex
            .vertices()
            .iter()
            .map(|v| v.iter().zip(&c).map(|(x, ci)| x * ci).sum())
            .collect();
        let apex = p[0];
        let u = apex - p[1];
        if u == 0.0 {
            return Err(Error::Precondition("common difference u must be nonzero".into()));
        }
        for (k, pk) in p.iter().enumerate().skip(2) {
            let diff = apex - pk;
            if (diff - u).abs() > 1e-10 * u.abs() {
                return Err(Error::Precondition(format!(
                    "c·v0 − c·v{k} = {diff} differs from u = {u}"
                )));
            }
        }
        let tiny = 1e-12 * apex.abs().max(u.abs());
        if apex.abs() <= tiny {
            return Err(Error::Precondition("closed form needs c·v0 ≠ 0".into()));
        }
        if (apex - u).abs() <= tiny {
            return Err(Error::Precondition("closed form needs c·v0 ≠ u".into()));
        }
        Ok(ExpFamilyParams { simplex, c, u, apex })
    }

    /// Reorders the vertices so that the one with a distinct value comes first.
    pub fn detect(simplex: &Simplex<f64>, c: &[f64]) -> Result<Self> {
        let d = simplex.dim();
        if d <= 1 {
            return Self::new(simplex.clone(), c.to_vec());
        }
        let p: Vec<f64> = simplex
            .vertices()
            .iter()
            .map(|v| v.iter().zip(c).map(|(x, ci)| x * ci).sum())
            .collect();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1e-300);
        let apex = (0..=d).find(|&i| {
            let others: Vec<f64> = (0..=d).filter(|&k| k != i).map(|k| p[k]).collect();
            others.iter().all(|&x| close(x, others[0]))
        });
        let i = apex.ok_or_else(|| {
            Error::Precondition("vertex values do not have a common difference from one apex".into())
        })?;
        let mut verts = simplex.vertices().to_vec();
        verts.swap(0, i);
        Self::new(Simplex::new(verts)?, c.to_vec())
    }

    /// `v₀ = ku𝟏`, `vⱼ = v₀ − u eⱼ`, `c = 𝟏`.
    pub fn case_a(d: usize, k: f64, u: f64) -> Result<Self> {
        let v0 = vec![k * u; d];
        let mut verts = vec![v0.clone()];
        for j in 0..d {
            let mut v = v0.clone();
            v[j] -= u;
            verts.push(v);
        }
        Self::new(Simplex::new(verts)?, vec![1.0; d])
    }

    /// `vⱼ = v₀ + u eⱼ`, `c = 𝟏` (common difference `−u`).
    pub fn case_b(v0: Vec<f64>, u: f64) -> Result<Self> {
        Self::new(Simplex::shifted(v0.clone(), u), vec![1.0; v0.len()])
    }

    pub fn simplex(&self) -> &Simplex<f64> {
        &self.simplex
    }

    pub fn direction(&self) -> &[f64] {
        &self.c
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn apex(&self) -> f64 {
        self.apex
    }

    pub fn spec(&self) -> Result<FunctionSpec> {
        Ok(FunctionSpec::ExpAffine {
            c: self.c.iter().map(|&x| rational_from_f64(x)).collect::<Result<_>>()?,
            b: Rational::zero(),
            subtract_one: true,
        })
    }
}

/// Closed-form pieces for `f = e^{c·x} − 1` with apex value `a` and difference `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpClosedForm {
    pub integral: f64,
    pub secant_mean: f64,
    pub perspective: f64,
    pub naive: f64,
}

pub fn exp_closed_form(params: &ExpFamilyParams) -> Result<ExpClosedForm> {
    let j = &params.simplex;
    let d = j.dim() as u32;
    let (a, u) = (params.apex, params.u);
    let beta = a - u;
    if a.max(beta) > crate::exact_integration::EXP_LIMIT {
        return Err(Error::Overflow { exponent: a.max(beta) });
    }
    let big_f = j.affine_map()?.abs_det;
    let vol = big_f / factorial_f64(d);
    let fd2 = factorial_f64(d + 2);
    let df = d as f64;
    let vertex_sum = a.exp() + df * beta.exp();
    // e^{a−u} u^{−d}(e^u − Σ_{j<d} u^j/j!)
    let e_main = beta.exp() * exp_tail_scaled(u, d);
    // e^{a−u} (−β)^{−d}(e^{−β} − Σ_{j<d} (−β)^j/j!)
    let e_back = beta.exp() * exp_tail_scaled(-beta, d);
    let integral = big_f * e_main - vol;
    let secant_mean = vol / (df + 1.0) * (vertex_sum - (df + 1.0));
    let perspective = big_f / fd2 * vertex_sum - big_f / (df + 2.0) * e_main;
    let naive = big_f / fd2 * (vertex_sum + 1.0) - big_f * e_main / a + big_f * e_back / a;
    Ok(ExpClosedForm {
        integral,
        secant_mean,
        perspective,
        naive,
    })
}

/// Cone cubature of the naive volume with growing rules, stopping once two
/// successive rules agree to `1e-10` of `reference` or the point budget runs out.
fn exp_naive_by_cubature(params: &ExpFamilyParams, secant_mean: f64, reference: f64) -> Result<(f64, f64, u32)> {
    let j = &params.simplex;
    let d = j.dim();
    let c = &params.c;
    let eval = |p: &[f64]| -> Result<f64> {
        let t: f64 = p[..d].iter().zip(c).map(|(x, ci)| x * ci).sum();
        Ok(t.exp_m1())
    };
    let first = secant_mean / (d as f64 + 2.0);
    let spread = params.apex.abs().max((params.apex - params.u).abs());
    let mut s = ((spread / 2.0).ceil() as usize).clamp(4, 64);
    let mut prev: Option<f64> = None;
    let mut last = (f64::NAN, f64::INFINITY, 0);
    loop {
        let points = (s + 1).checked_pow(d as u32 + 1).unwrap_or(usize::MAX);
        if points > VALIDATION_POINT_CAP {
            break;
        }
        let naive = first - apply_rule(&cone_rule(j, s, false)?, eval)?;
        let err = prev.map_or(f64::INFINITY, |p| (naive - p).abs());
        last = (naive, err, 2 * s as u32 + 1);
        if err <= 1e-10 * reference.abs() {
            break;
        }
        prev = Some(naive);
        s *= 2;
    }
    if last.2 == 0 {
        return Err(Error::Numeric("no affordable cone rule for validation".into()));
    }
    Ok(last)
}

/// Volumes for `f = e^{c·x} − 1` on an equal-difference simplex.
///
/// With validation enabled the naive closed form is compared against cone
/// cubature; a conclusive disagreement beyond `1e-6` is returned as an error.
pub fn exp_family_volumes(params: &ExpFamilyParams, cfg: &RelaxConfig) -> Result<RelaxationReport> {
    let d = params.simplex.dim();
    let cf = exp_closed_form(params)?;
    let tag = MethodTag::ClosedForm;
    // inputs are doubles; a few ulps per term
    let err = |x: f64| 64.0 * f64::EPSILON * x.abs();
    let vol = simplex_volume(&params.simplex)?;
    let top = params.apex.exp_m1().abs().max((params.apex - params.u).exp_m1().abs());
    let scale = vol * top;
    let mut report = RelaxationReport::assemble(
        d,
        "exp_family",
        Quantity::approx(cf.integral, tag.clone(), err(cf.integral) + err(vol)),
        Value::Approx(cf.secant_mean),
        Quantity::approx(cf.perspective, tag.clone(), err(scale)),
        Quantity::approx(cf.naive, tag, err(scale)),
        scale,
    )?;
    if cfg.validate_exp {
        let (cub, cub_err, degree) = exp_naive_by_cubature(params, cf.secant_mean, cf.naive)?;
        let relative = (cf.naive - cub).abs() / cf.naive.abs().max(f64::MIN_POSITIVE);
        let conclusive = cub_err <= 1e-7 * cf.naive.abs();
        if conclusive && relative > EXP_VALIDATION_TOL {
            return Err(Error::Discrepancy {
                closed: cf.naive,
                cubature: cub,
                relative,
            });
        }
        report.validation = Some(ExpValidation {
            closed: cf.naive,
            cubature: cub,
            cubature_error: cub_err,
            relative,
            rule_degree: degree,
            conclusive,
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// reports

/// Perspective and naive volumes with cut-off amount and ratio, by the best route.
pub fn cutoff_report(j: &AnySimplex, f: &FunctionSpec, cfg: &RelaxConfig) -> Result<RelaxationReport> {
    let d = j.dim();
    let p = prepare(j, f, cfg, true)?;
    if let FunctionSpec::ExpAffine {
        c,
        b,
        subtract_one: true,
    } = &p.f
    {
        if b.is_zero() && !c.iter().all(Zero::is_zero) {
            let cf: Vec<f64> = c.iter().map(Scalar::as_f64).collect();
            if let Ok(params) = ExpFamilyParams::detect(&j.to_f64(), &cf) {
                return exp_family_volumes(&params, cfg);
            }
        }
    }
    let integral = integrate_function(j, &p.f, cfg)?;
    let defect = naive_defect(j, &p.f, &integral, cfg)?;
    let route = if homogeneity(&p.f).is_some() {
        "q_homogeneous"
    } else if p.f.to_polynomial().is_some() {
        "polynomial"
    } else {
        "cubature"
    };
    let perspective = perspective_from(&p.secant, &integral, d);
    let naive = naive_from(&p.secant, &defect, d);
    RelaxationReport::assemble(d, route, integral, p.secant, perspective, naive, p.scale)
}

/// `∫_{Δ_d} max(x) dx = (1/(d+1)!) Σ_{j=1}^d 1/j`.
pub fn max_integral_standard(d: usize) -> Rational {
    let harmonic = (1..=d as u64).fold(Rational::zero(), |acc, j| acc + Rational::from_u64(j).recip());
    harmonic / factorial_q(d as u32 + 1)
}

/// `(1/u) ∫_{Δ_d} f(ux + v₀) dx` for the normalized log-sum-exp `f`, by a conical rule.
pub fn scaled_logsumexp_integral(d: usize, u: f64, v0: Option<&[f64]>, s: usize) -> Result<f64> {
    if u <= 0.0 {
        return Err(Error::Precondition("scale u must be positive".into()));
    }
    let f = FunctionSpec::LogSumExp { d };
    let rule = conical_product_rule(d, s)?;
    let shift = v0.map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; d]);
    if shift.len() != d {
        return Err(Error::Shape("shift has the wrong length".into()));
    }
    let v = apply_rule(&rule, |x| {
        let y: Vec<f64> = x.iter().zip(&shift).map(|(xi, vi)| u * xi + vi).collect();
        f.evaluate(&y)
    })?;
    Ok(v / u)
}

/// `(d+1)!`, the limit of `u^d·ratio` on the simplices `ku𝟏 − uΔ_d`.
pub fn exp_case_a_limit(d: usize) -> f64 {
    factorial_f64(d as u32 + 1)
}

/// `d+1`, the limit of `u·ratio` on the simplices `v₀ + uΔ_d`.
pub fn exp_case_b_limit(d: usize) -> f64 {
    d as f64 + 1.0
}

/// `lim (1/u)·vol(P⁰)/(d!vol(J)) = (d − Σ_{j≤d} 1/j)/(d+2)!` for log-sum-exp on `v₀ + uΔ_d`.
pub fn logsumexp_naive_limit(d: usize) -> Rational {
    let harmonic = (1..=d as u64).fold(Rational::zero(), |acc, j| acc + Rational::from_u64(j).recip());
    (Rational::from_u64(d as u64) - harmonic) / factorial_q(d as u32 + 2)
}

// ---------------------------------------------------------------------------
// sweeps

/// Parametrized families swept over a grid of `u`.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepFamily {
    /// log-sum-exp on `u·Δ_d`.
    LogSumExp { d: usize },
    /// `e^{𝟏·x} − 1` on `conv{ku𝟏, ku𝟏 − u eⱼ}`.
    ExpA { d: usize, k: f64 },
    /// `e^{𝟏·x} − 1` on `v₀ + uΔ_d`.
    ExpB { v0: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub u: f64,
    pub perspective: f64,
    pub naive: f64,
    pub ratio: Option<f64>,
}

impl SweepFamily {
    pub fn dim(&self) -> usize {
        match self {
            SweepFamily::LogSumExp { d } | SweepFamily::ExpA { d, .. } => *d,
            SweepFamily::ExpB { v0 } => v0.len(),
        }
    }

    pub fn report(&self, u: f64, cfg: &RelaxConfig) -> Result<RelaxationReport> {
        match self {
            SweepFamily::LogSumExp { d } => {
                let j = AnySimplex::Numeric(Simplex::scaled(*d, u));
                cutoff_report(&j, &FunctionSpec::LogSumExp { d: *d }, cfg)
            }
            SweepFamily::ExpA { d, k } => exp_family_volumes(&ExpFamilyParams::case_a(*d, *k, u)?, cfg),
            SweepFamily::ExpB { v0 } => exp_family_volumes(&ExpFamilyParams::case_b(v0.clone(), u)?, cfg),
        }
    }
}

/// One row per grid point, in grid order; points are evaluated in parallel.
pub fn sweep(family: &SweepFamily, grid: &[f64], cfg: &RelaxConfig) -> Result<Vec<SweepRow>> {
    grid.par_iter()
        .map(|&u| {
            let r = family.report(u, cfg)?;
            Ok(SweepRow {
                u,
                perspective: r.perspective_volume.to_f64(),
                naive: r.naive_volume.to_f64(),
                ratio: r.ratio_f64(),
            })
        })
        .collect()
}
