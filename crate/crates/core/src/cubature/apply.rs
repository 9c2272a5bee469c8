use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::geometry::{Region, UniformSampler};

use super::rules::CubatureRule;

/// Points above which rule evaluation is spread over the thread pool.
const PARALLEL_THRESHOLD: usize = 512;

/// Neumaier-compensated sum in iteration order.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `Σ λⱼ f(wⱼ)`; evaluation may run in parallel, the sum is taken in point order.
pub fn apply_rule<F>(rule: &CubatureRule, f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let eval = |p: &Vec<f64>| -> Result<f64> {
        let v = f(p)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                point: p.clone(),
                message: format!("non-finite value {v}"),
            })
        }
    };
    let values: Vec<f64> = if rule.len() >= PARALLEL_THRESHOLD {
        rule.points.par_iter().map(eval).collect::<Result<_>>()?
    } else {
        rule.points.iter().map(eval).collect::<Result<_>>()?
    };
    Ok(neumaier_sum(
        values.iter().zip(&rule.weights).map(|(v, w)| v * w),
    ))
}

/// `apply_rule` for a function spec on a simplex rule.
pub fn apply_rule_spec(rule: &CubatureRule, spec: &FunctionSpec) -> Result<f64> {
    apply_rule(rule, |x| spec.evaluate(x))
}

/// Monte-Carlo estimate `vol · mean(f)` and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Uniform sampling over `region`; deterministic for a given seed.
pub fn monte_carlo_integrate<F>(region: Region<'_>, f: F, n: usize, seed: u64) -> Result<MonteCarloEstimate>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if n < 2 {
        return Err(Error::Precondition("Monte-Carlo needs at least 2 samples".into()));
    }
    let vol = region.volume()?;
    let mut sampler = UniformSampler::new(region, seed)?;
    let mut point = vec![0.0; region.point_dim()];
    // Welford running mean and sum of squared deviations
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..n {
        sampler.next_into(&mut point);
        let v = f(&point)?;
        if !v.is_finite() {
            return Err(Error::Evaluation {
                point: point.clone(),
                message: format!("non-finite value {v}"),
            });
        }
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    let var = m2 / (n - 1) as f64;
    Ok(MonteCarloEstimate {
        estimate: vol * mean,
        stderr: vol * (var / n as f64).sqrt(),
    })
}
