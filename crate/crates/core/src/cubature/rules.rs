use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::combinatorics::{compositions, factorial_q};
use crate::error::{Error, Result};
use crate::geometry::Simplex;
use crate::scalar::{format_decimal, format_rational, Rational, Scalar};

use super::jacobi::{gauss_jacobi_rule, Jacobi1DRule, JacobiDomain};

/// Where a rule integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleRegion {
    StandardSimplex,
    /// A simplex other than Δ_d, reached by an affine transplant.
    Simplex,
    /// `{(x, z) : x ∈ z·J, 0 ≤ z ≤ 1}`, points stored as `(x, z)`.
    Cone,
}

impl RuleRegion {
    pub fn tag(&self) -> &'static str {
        match self {
            RuleRegion::StandardSimplex => "standard_simplex",
            RuleRegion::Simplex => "simplex",
            RuleRegion::Cone => "cone",
        }
    }
}

/// Weighted point set with a declared degree of exactness.
#[derive(Debug, Clone, PartialEq)]
pub struct CubatureRule {
    pub name: &'static str,
    pub region: RuleRegion,
    /// Dimension of the base simplex.
    pub dim: usize,
    pub degree: u32,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub exact_points: Option<Vec<Vec<Rational>>>,
    pub exact_weights: Option<Vec<Rational>>,
    pub has_negative_weights: bool,
}

impl CubatureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        super::apply::neumaier_sum(self.weights.iter().cloned())
    }

    /// Export object: points and weights as `"p/q"` strings when rational,
    /// 17-significant-digit decimal strings otherwise.
    pub fn to_json(&self) -> serde_json::Value {
        let points: Vec<Vec<String>> = match &self.exact_points {
            Some(p) => p
                .iter()
                .map(|v| v.iter().map(format_rational).collect())
                .collect(),
            None => self
                .points
                .iter()
                .map(|v| v.iter().map(|&x| format_decimal(x)).collect())
                .collect(),
        };
        let weights: Vec<String> = match &self.exact_weights {
            Some(w) => w.iter().map(format_rational).collect(),
            None => self.weights.iter().map(|&x| format_decimal(x)).collect(),
        };
        json!({
            "region": self.region.tag(),
            "dimension": self.dim,
            "degree": self.degree,
            "rule": self.name,
            "negative_weights": self.has_negative_weights,
            "points": points,
            "weights": weights,
        })
    }
}

/// Grundmann-Möller rule of degree `2s+1` on Δ_d with exact rational data.
///
/// Weights `(−1)^j 2^{−2s} (q+d−2j)^q / (j! (q+d−j)!)`, points
/// `((2k₁+1)/(q+d−2j), …, (2k_d+1)/(q+d−2j))` over `k ∈ ℤ^{d+1}_{≥0}`, `‖k‖₁ = s−j`.
pub fn grundmann_moller_rule(d: usize, s: usize) -> Result<CubatureRule> {
    if d == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    let q = 2 * s as u32 + 1;
    let du = d as u32;
    let mut exact_points = Vec::new();
    let mut exact_weights = Vec::new();
    for j in 0..=s as u32 {
        let den = q + du - 2 * j;
        let mut w = Rational::from_u64(den as u64).powu(q)
            / (factorial_q(j) * factorial_q(q + du - j))
            / Rational::from_u64(2).powu(2 * s as u32);
        if j % 2 == 1 {
            w = -w;
        }
        for k in compositions(s as u32 - j, d + 1) {
            exact_points.push(
                k[1..]
                    .iter()
                    .map(|&ki| Rational::new((2 * ki + 1).into(), den.into()))
                    .collect::<Vec<_>>(),
            );
            exact_weights.push(w.clone());
        }
    }
    let has_negative_weights = exact_weights.iter().any(Signed::is_negative);
    Ok(CubatureRule {
        name: "grundmann_moller",
        region: RuleRegion::StandardSimplex,
        dim: d,
        degree: q,
        points: exact_points
            .iter()
            .map(|p| p.iter().map(Scalar::as_f64).collect())
            .collect(),
        weights: exact_weights.iter().map(Scalar::as_f64).collect(),
        exact_points: Some(exact_points),
        exact_weights: Some(exact_weights),
        has_negative_weights,
    })
}

/// Conical product rule of degree `2s+1` on Δ_d with `(s+1)^d` positive weights.
///
/// Combines Gauss-Jacobi rules for `(1−y)^{d−k}` on `[0,1]`, `k = 1..d`, through
/// `x_k = y_k Π_{i<k}(1 − y_i)`.
pub fn conical_product_rule(d: usize, s: usize) -> Result<CubatureRule> {
    if d == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    let factors: Vec<Jacobi1DRule> = (1..=d)
        .map(|k| Ok(gauss_jacobi_rule(s, (d - k) as f64, 0.0)?.to_unit_interval()))
        .collect::<Result<_>>()?;
    let n = s + 1;
    let total = n.pow(d as u32);
    let mut points = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        let mut remaining = 1.0;
        let mut w = 1.0;
        let mut p = Vec::with_capacity(d);
        for (k, rule) in factors.iter().enumerate() {
            let y = rule.nodes[idx[k]];
            p.push(y * remaining);
            remaining *= 1.0 - y;
            w *= rule.weights[idx[k]];
        }
        points.push(p);
        weights.push(w);
        // odometer with the first factor varying slowest
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
    }
    Ok(CubatureRule {
        name: "conical_product",
        region: RuleRegion::StandardSimplex,
        dim: d,
        degree: 2 * s as u32 + 1,
        points,
        weights,
        exact_points: None,
        exact_weights: None,
        has_negative_weights: false,
    })
}

/// Moves a rule on Δ_d onto `J`: points through `x = Bt + v₀`, weights times `|det B|`.
pub fn transplant(rule: &CubatureRule, j: &Simplex<f64>) -> Result<CubatureRule> {
    if rule.region != RuleRegion::StandardSimplex {
        return Err(Error::Precondition("only standard-simplex rules can be transplanted".into()));
    }
    if rule.dim != j.dim() {
        return Err(Error::Shape(format!(
            "rule dimension {} does not match simplex dimension {}",
            rule.dim,
            j.dim()
        )));
    }
    let map = j.affine_map()?;
    Ok(CubatureRule {
        name: rule.name,
        region: RuleRegion::Simplex,
        dim: rule.dim,
        degree: rule.degree,
        points: rule.points.iter().map(|t| map.apply(t)).collect(),
        weights: rule.weights.iter().map(|w| w * map.abs_det).collect(),
        exact_points: None,
        exact_weights: None,
        has_negative_weights: rule.has_negative_weights,
    })
}

/// Exact transplant for rational rules and simplices.
pub fn transplant_exact(rule: &CubatureRule, j: &Simplex<Rational>) -> Result<CubatureRule> {
    let (Some(pts), Some(wts)) = (&rule.exact_points, &rule.exact_weights) else {
        return Err(Error::NotExact("rule has no rational data".into()));
    };
    let mut out = transplant(rule, &j.to_f64())?;
    let map = j.affine_map()?;
    let ep: Vec<Vec<Rational>> = pts.iter().map(|t| map.apply(t)).collect();
    let ew: Vec<Rational> = wts.iter().map(|w| w * &map.abs_det).collect();
    out.points = ep.iter().map(|p| p.iter().map(Scalar::as_f64).collect()).collect();
    out.weights = ew.iter().map(Scalar::as_f64).collect();
    out.exact_points = Some(ep);
    out.exact_weights = Some(ew);
    Ok(out)
}

/// Cone rule from a rule on `J` and a radial rule for `z^d` on `[0,1]`:
/// points `(r_k wⱼ, r_k)`, weights `λⱼ ν_k`.
pub fn cone_product_rule(base: &CubatureRule, radial: &Jacobi1DRule) -> Result<CubatureRule> {
    if base.region == RuleRegion::Cone {
        return Err(Error::Precondition("base rule must live on a simplex".into()));
    }
    if radial.domain != JacobiDomain::Unit || radial.alpha != 0.0 || radial.beta != base.dim as f64 {
        return Err(Error::Shape(format!(
            "radial rule must carry weight z^{} on [0,1]",
            base.dim
        )));
    }
    let mut points = Vec::with_capacity(base.len() * radial.nodes.len());
    let mut weights = Vec::with_capacity(points.capacity());
    for (&r, &nu) in radial.nodes.iter().zip(&radial.weights) {
        for (w, &lambda) in base.points.iter().zip(&base.weights) {
            let mut p: Vec<f64> = w.iter().map(|x| r * x).collect();
            p.push(r);
            points.push(p);
            weights.push(lambda * nu);
        }
    }
    Ok(CubatureRule {
        name: "cone_product",
        region: RuleRegion::Cone,
        dim: base.dim,
        degree: base.degree.min(radial.degree()),
        points,
        weights,
        exact_points: None,
        exact_weights: None,
        has_negative_weights: base.has_negative_weights,
    })
}

/// Sum of exact weights; `None` for floating rules.
pub fn exact_weight_sum(rule: &CubatureRule) -> Option<Rational> {
    rule.exact_weights
        .as_ref()
        .map(|w| w.iter().fold(Rational::zero(), |acc, x| acc + x))
}

/// `1/d!`, the volume of Δ_d.
pub fn standard_volume(d: usize) -> Rational {
    Rational::one() / factorial_q(d as u32)
}
