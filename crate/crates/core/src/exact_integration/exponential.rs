use crate::combinatorics::factorial_f64;
use crate::error::{Error, Result};
use crate::geometry::Simplex;

use super::affine_power::vertex_affine_values;
use super::series::PoleStructure;

/// Largest argument with a finite `exp`.
pub const EXP_LIMIT: f64 = 709.782_712_893_384;

const SERIES_CAP: usize = 500;
/// Estimated relative error above which the vertex sum is abandoned for the series.
const BRION_REL_ERR: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpMethod {
    Brion,
    EqualDifference,
    Series,
}

impl ExpMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            ExpMethod::Brion => "brion",
            ExpMethod::EqualDifference => "closed_form",
            ExpMethod::Series => "series",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpIntegral {
    pub value: f64,
    pub method: ExpMethod,
    pub error_estimate: f64,
}

/// `Σ_{k≥0} u^k/(k+d)! = u^{−d}(e^u − Σ_{j<d} u^j/j!)`, evaluated without cancellation.
pub fn exp_tail_scaled(u: f64, d: u32) -> f64 {
    let df = d as f64;
    if u.abs() >= 2.0 * df.max(1.0) {
        let mut partial = 0.0;
        let mut term = 1.0;
        for j in 0..d {
            if j > 0 {
                term *= u / j as f64;
            }
            partial += term;
        }
        return (u.exp() - partial) / u.powi(d as i32);
    }
    if u >= 0.0 {
        let mut term = 1.0 / factorial_f64(d);
        let mut sum = term;
        for k in 1..SERIES_CAP {
            term *= u / (k as f64 + df);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        sum
    } else {
        // Kummer transformation: e^u/d! · Σ_k d/(d+k) · |u|^k/k!, all terms positive.
        let a = -u;
        let mut pw = 1.0;
        let mut sum = 1.0;
        for k in 1..SERIES_CAP {
            pw *= a / k as f64;
            let term = pw * df / (df + k as f64);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        u.exp() * sum / factorial_f64(d)
    }
}

/// `∫_J e^{c·x + b}`.
///
/// Distinct vertex values use the vertex sum (guarded by a conditioning estimate);
/// one simple value against a d-fold value uses the closed form; anything else
/// goes through the shifted complete-homogeneous series.
pub fn integrate_exp_affine(j: &Simplex<f64>, c: &[f64], b: f64) -> Result<ExpIntegral> {
    if !b.is_finite() || c.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("non-finite exponential parameters".into()));
    }
    let values = vertex_affine_values(j, c, &0.0)?;
    let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + b;
    if top > EXP_LIMIT {
        return Err(Error::Overflow { exponent: top });
    }
    let d = j.dim() as u32;
    let scale = j.affine_map()?.abs_det;
    let poles = PoleStructure::from_values(&values);

    if poles.is_generic() {
        let (sum, abs_sum) = brion_exp_terms(&values, b);
        let rel = 1e-16 * (d as f64 + 1.0) * abs_sum / sum.abs();
        if rel.is_finite() && rel <= BRION_REL_ERR {
            return Ok(ExpIntegral {
                value: scale * sum,
                method: ExpMethod::Brion,
                error_estimate: (rel * scale * sum).abs(),
            });
        }
        if let Ok(v) = series_exp(&values, b, d) {
            return Ok(ExpIntegral {
                value: scale * v,
                method: ExpMethod::Series,
                error_estimate: (1e-15 * scale * v).abs(),
            });
        }
        return Ok(ExpIntegral {
            value: scale * sum,
            method: ExpMethod::Brion,
            error_estimate: (rel * scale * sum).abs(),
        });
    }

    if d >= 2 && poles.poles.len() == 2 {
        let (apex, base) = if poles.poles[0].multiplicity == 1 {
            (&poles.poles[0], &poles.poles[1])
        } else {
            (&poles.poles[1], &poles.poles[0])
        };
        if apex.multiplicity == 1 && base.multiplicity == d as usize {
            let u = apex.value - base.value;
            // e^{p_apex − u} u^{−d}(e^u − Σ u^j/j!) e^b
            let v = (base.value + b).exp() * exp_tail_scaled(u, d);
            return Ok(ExpIntegral {
                value: scale * v,
                method: ExpMethod::EqualDifference,
                error_estimate: (1e-15 * scale * v).abs(),
            });
        }
    }

    let v = series_exp(&values, b, d)?;
    Ok(ExpIntegral {
        value: scale * v,
        method: ExpMethod::Series,
        error_estimate: (1e-15 * scale * v).abs(),
    })
}

/// `Σⱼ e^{pⱼ+b}/Π_{k≠j}(pⱼ−p_k)` and the sum of absolute terms.
fn brion_exp_terms(values: &[f64], b: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for (j, pj) in values.iter().enumerate() {
        let den: f64 = values
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, pk)| pj - pk)
            .product();
        let t = (pj + b).exp() / den;
        sum += t;
        abs_sum += t.abs();
    }
    (sum, abs_sum)
}

/// `e^{m+b} Σ_k h_k(p − m)/(k+d)!` with `m` the midpoint of the values.
pub(crate) fn series_exp(values: &[f64], b: f64, d: u32) -> Result<f64> {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    let shifted: Vec<f64> = values.iter().map(|p| p - mid).collect();
    let radius = 0.5 * (hi - lo);
    let mut terms = 32;
    loop {
        let t = scaled_h_terms(&shifted, d, terms);
        let sum: f64 = t.iter().sum();
        // bound on the first omitted term: radius^K C(K+d,d)/(K+d)! = radius^K/(K! d!)
        let k = terms as f64;
        let log_bound = if radius > 0.0 {
            k * radius.ln() - libm::lgamma(k + 1.0) - factorial_f64(d).ln()
        } else {
            f64::NEG_INFINITY
        };
        if log_bound < (1e-16 * sum.abs()).ln() {
            return Ok((mid + b).exp() * sum);
        }
        if terms >= SERIES_CAP {
            return Err(Error::Numeric(format!(
                "exponential series did not converge in {SERIES_CAP} terms (spread {radius})"
            )));
        }
        terms = (terms * 2).min(SERIES_CAP);
    }
}

/// `t_k = h_k(p)/(k+d)!` for `k < count`, via the prefix recurrence
/// `t_k ← t_k + p_i t_{k−1}/(k+d)`.
fn scaled_h_terms(values: &[f64], d: u32, count: usize) -> Vec<f64> {
    let mut t = vec![0.0; count];
    t[0] = 1.0 / factorial_f64(d);
    for &p in values {
        for k in 1..count {
            t[k] += p * t[k - 1] / (k as f64 + d as f64);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::simplex_volume;

    #[test]
    fn univariate_antiderivative() {
        for (l, u, c) in [(0.0, 1.0, 1.0), (1.0, 3.0, -2.0), (-1.0, 2.0, 0.5)] {
            let j = Simplex::new(vec![vec![l], vec![u]]).unwrap();
            let exact = ((c * u).exp() - (c * l).exp()) / c;
            let r = integrate_exp_affine(&j, &[c], 0.0).unwrap();
            assert!((r.value - exact).abs() < 1e-14 * exact.abs(), "{r:?} {exact}");
        }
    }

    #[test]
    fn standard_simplex_closed_form() {
        for d in 1..=5usize {
            for u in [-3.0, -0.5, 0.25, 2.0, 7.0] {
                let j = Simplex::<f64>::standard(d);
                let c = vec![-u; d];
                let r = integrate_exp_affine(&j, &c, 0.0).unwrap();
                let mut partial = 0.0;
                for k in 0..d {
                    partial += u.powi(k as i32) / factorial_f64(k as u32);
                }
                // the direct form cancels badly for small |u|; use the series there
                let expected = if u.abs() >= 2.0 {
                    (-u).exp() / u.powi(d as i32) * (u.exp() - partial)
                } else {
                    let mut vals = vec![-u; d + 1];
                    vals[0] = 0.0;
                    series_exp(&vals, 0.0, d as u32).unwrap()
                };
                assert!(
                    (r.value - expected).abs() <= 1e-12 * expected.abs(),
                    "d={d} u={u} {r:?} {expected}"
                );
                if d >= 2 {
                    assert_eq!(r.method, ExpMethod::EqualDifference);
                }
            }
        }
    }

    #[test]
    fn zero_direction_gives_volume() {
        let j = Simplex::new(vec![vec![1.0, 1.0], vec![3.0, 1.0], vec![1.0, 4.0]]).unwrap();
        let r = integrate_exp_affine(&j, &[0.0, 0.0], 0.0).unwrap();
        assert!((r.value - simplex_volume(&j).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn overflow_reported() {
        let j = Simplex::<f64>::standard(2);
        assert!(matches!(
            integrate_exp_affine(&j, &[800.0, 1.0], 0.0),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn near_coincident_values_agree_with_series() {
        let j = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let c = [1.0, 1.0 + 1e-7];
        let r = integrate_exp_affine(&j, &c, 0.3).unwrap();
        let s = series_exp(&[0.0, 1.0, 1.0 + 1e-7], 0.3, 2).unwrap();
        assert!((r.value - s).abs() < 1e-12 * s);
        assert_eq!(r.method, ExpMethod::Series);
    }

    #[test]
    fn tail_matches_series_definition() {
        for d in 1..=5 {
            for u in [-20.0, -9.0, -1e-3, 1e-3, 4.0, 20.0] {
                let direct: f64 = (0..400)
                    .map(|k| {
                        let lk = k as f64 * f64::ln(f64::abs(u)) - libm::lgamma(k as f64 + d as f64 + 1.0);
                        let s = if u < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
                        s * lk.exp()
                    })
                    .sum();
                let t = exp_tail_scaled(u, d);
                if u > 0.0 {
                    assert!((t - direct).abs() < 1e-13 * direct, "{d} {u}");
                }
                assert!(t > 0.0);
            }
        }
    }
}
