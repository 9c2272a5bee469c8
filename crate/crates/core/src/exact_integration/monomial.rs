use num_traits::{One, Signed};

use crate::combinatorics::{factorial, factorial_q};
use crate::error::{Error, Result};
use crate::scalar::{as_small_nonneg_int, Rational, Scalar, Value};

/// Exponents `α₁, …, α_{d+1}` of `x₁^{α₁}⋯x_d^{α_d}(1 − Σxⱼ)^{α_{d+1}}` on Δ_d.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedExponent {
    alphas: Vec<Rational>,
}

impl GeneralizedExponent {
    /// Requires at least two entries, each `> −1`.
    pub fn new(alphas: Vec<Rational>) -> Result<Self> {
        if alphas.len() < 2 {
            return Err(Error::Shape(
                "need d+1 ≥ 2 exponents (the last one is for 1 − Σx)".into(),
            ));
        }
        if let Some(a) = alphas.iter().find(|a| **a <= -Rational::one()) {
            return Err(Error::Divergent { exponent: a.as_f64() });
        }
        Ok(GeneralizedExponent { alphas })
    }

    pub fn from_integers(alphas: &[u32]) -> Result<Self> {
        Self::new(alphas.iter().map(|&a| Rational::from_u64(a as u64)).collect())
    }

    pub fn dim(&self) -> usize {
        self.alphas.len() - 1
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alphas
    }
}

/// `Πⱼ Γ(αⱼ+1) / Γ(Σαⱼ + d + 1)`; exact for nonnegative integer exponents.
pub fn integrate_monomial_standard(exp: &GeneralizedExponent) -> Value {
    let d = exp.dim() as u32;
    let ints: Option<Vec<u32>> = exp.alphas.iter().map(as_small_nonneg_int).collect();
    if let Some(ints) = ints {
        let num = ints
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, &a| acc * factorial(a));
        let total: u32 = ints.iter().sum::<u32>() + d;
        return Value::Exact(Rational::new(num, factorial(total)));
    }
    let a: Vec<f64> = exp.alphas.iter().map(Scalar::as_f64).collect();
    let log_num: f64 = a.iter().map(|&x| libm::lgamma(x + 1.0)).sum();
    let log_den = libm::lgamma(a.iter().sum::<f64>() + d as f64 + 1.0);
    Value::Approx((log_num - log_den).exp())
}

/// `∫_{Δ_d} t^α = Πα! / (‖α‖₁ + d)!` with `d = α.len()`.
pub fn standard_monomial_integral(alpha: &[u32]) -> Rational {
    let d = alpha.len() as u32;
    let num = alpha
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, &a| acc * factorial(a));
    let total: u32 = alpha.iter().sum::<u32>() + d;
    Rational::new(num, factorial(total))
}

/// `∫_{Δ_d} (𝟏ᵀx)^α = 1/((α+d)·(d−1)!)`.
pub fn integrate_one_norm_power(d: usize, alpha: &Rational) -> Result<Value> {
    if d == 0 {
        return Err(Error::Shape("dimension must be positive".into()));
    }
    if *alpha <= -Rational::one() {
        return Err(Error::Divergent { exponent: alpha.as_f64() });
    }
    let value = (alpha + Rational::from_u64(d as u64)).recip()
        / factorial_q(d as u32 - 1);
    if alpha.is_integer() && !alpha.is_negative() {
        Ok(Value::Exact(value))
    } else {
        Ok(Value::Approx(value.as_f64()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn spot_values() {
        let e = GeneralizedExponent::from_integers(&[1, 1, 0]).unwrap();
        assert_eq!(integrate_monomial_standard(&e), Value::Exact(ratio(1, 24)));
        let e = GeneralizedExponent::from_integers(&[0, 0, 0]).unwrap();
        assert_eq!(integrate_monomial_standard(&e), Value::Exact(ratio(1, 2)));
        let e = GeneralizedExponent::new(vec![ratio(1, 2), ratio(0, 1)]).unwrap();
        assert!((integrate_monomial_standard(&e).to_f64() - 2.0 / 3.0).abs() < 1e-12);
        assert!(matches!(
            GeneralizedExponent::new(vec![ratio(-1, 1), ratio(0, 1)]),
            Err(Error::Divergent { .. })
        ));
    }

    #[test]
    fn last_exponent_is_the_complement() {
        // ∫_{Δ₁} (1−x)² = 1/3
        let e = GeneralizedExponent::from_integers(&[0, 2]).unwrap();
        assert_eq!(integrate_monomial_standard(&e), Value::Exact(ratio(1, 3)));
        assert_eq!(standard_monomial_integral(&[2]), ratio(1, 3));
    }

    #[test]
    fn one_norm_power() {
        assert!((integrate_one_norm_power(1, &ratio(1, 2)).unwrap().to_f64() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(integrate_one_norm_power(2, &ratio(0, 1)).unwrap(), Value::Exact(ratio(1, 2)));
        assert_eq!(integrate_one_norm_power(3, &ratio(2, 1)).unwrap(), Value::Exact(ratio(1, 10)));
        assert!(integrate_one_norm_power(2, &ratio(-3, 2)).is_err());
    }
}
