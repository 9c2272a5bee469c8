use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::combinatorics::{binomial, factorial_q};
use crate::error::{Error, Result};
use crate::geometry::{simplex_volume, Simplex};
use crate::polynomial::Polynomial;
use crate::scalar::{Rational, Scalar};

use super::affine_power::{integrate_affine_power, AffinePowerMethod};
use super::monomial::standard_monomial_integral;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyMethod {
    /// Substitute `x = Bt + v₀` and integrate monomials on Δ_d.
    Pullback,
    /// Coefficients of `1/Π(1 − t·vⱼ)`.
    TaylorExpansion,
    /// Rewrite each monomial as a combination of powers of linear forms.
    LinformDecomp,
}

impl PolyMethod {
    /// Linear-form decomposition from dimension five on, pullback below.
    pub fn default_for_dim(d: usize) -> Self {
        if d >= 5 {
            PolyMethod::LinformDecomp
        } else {
            PolyMethod::Pullback
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            PolyMethod::Pullback => "pullback",
            PolyMethod::TaylorExpansion => "taylor_expansion",
            PolyMethod::LinformDecomp => "linform_decomp",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pullback" => Ok(PolyMethod::Pullback),
            "taylor" | "taylor_expansion" => Ok(PolyMethod::TaylorExpansion),
            "linform" | "linform_decomp" => Ok(PolyMethod::LinformDecomp),
            other => Err(Error::parse(other, "unknown polynomial method")),
        }
    }
}

/// Exact `∫_J p`.
pub fn integrate_polynomial(j: &Simplex<Rational>, p: &Polynomial, method: PolyMethod) -> Result<Rational> {
    let d = j.dim();
    let p = p.with_nvars(d)?;
    if p.is_zero() {
        return Ok(Rational::zero());
    }
    match method {
        PolyMethod::Pullback => pullback(j, &p),
        PolyMethod::TaylorExpansion => taylor_expansion(j, &p),
        PolyMethod::LinformDecomp => linform(j, &p),
    }
}

fn pullback(j: &Simplex<Rational>, p: &Polynomial) -> Result<Rational> {
    let map = j.affine_map()?;
    let pulled = p.substitute_affine(&map.matrix, &map.offset);
    let sum = pulled
        .terms()
        .fold(Rational::zero(), |acc, (e, c)| acc + c * standard_monomial_integral(e));
    Ok(sum * map.abs_det)
}

fn taylor_expansion(j: &Simplex<Rational>, p: &Polynomial) -> Result<Rational> {
    let d = j.dim();
    let deg = p.degree();
    let map = j.affine_map()?;
    // Π_j Σ_{k ≤ deg} (t·vⱼ)^k, truncated at total degree `deg`.
    let mut product = Polynomial::constant(d, Rational::one());
    for v in j.vertices() {
        let form = Polynomial::affine(v, Rational::zero());
        let mut geometric = Polynomial::constant(d, Rational::one());
        let mut power = Polynomial::constant(d, Rational::one());
        for _ in 0..deg {
            power = truncate(&power.mul(&form), deg);
            geometric = geometric.add(&power);
        }
        product = truncate(&product.mul(&geometric), deg);
    }
    let mut sum = Rational::zero();
    for (alpha, c) in p.terms() {
        let coeff = product.coefficient(alpha);
        if coeff.is_zero() {
            continue;
        }
        let total: u32 = alpha.iter().sum();
        let alpha_fact = alpha
            .iter()
            .fold(Rational::one(), |acc, &a| acc * factorial_q(a));
        sum += c * coeff * alpha_fact / factorial_q(total + d as u32);
    }
    Ok(sum * map.abs_det)
}

fn truncate(p: &Polynomial, deg: u32) -> Polynomial {
    Polynomial::from_terms(
        p.nvars(),
        p.terms()
            .filter(|(e, _)| e.iter().sum::<u32>() <= deg)
            .map(|(e, c)| (e.clone(), c.clone())),
    )
    .expect("same variable count")
}

fn linform(j: &Simplex<Rational>, p: &Polynomial) -> Result<Rational> {
    let mut sum = Rational::zero();
    let zero = Rational::zero();
    for (alpha, c) in p.terms() {
        let total: u32 = alpha.iter().sum();
        if total == 0 {
            sum += c * simplex_volume(j)?;
            continue;
        }
        for (coeff, beta) in decompose_monomial(alpha)? {
            let dir: Vec<Rational> = beta.iter().map(|&b| Rational::from_u64(b as u64)).collect();
            let part = integrate_affine_power(j, &dir, &zero, total, AffinePowerMethod::Auto)?;
            sum += c * coeff * part;
        }
    }
    Ok(sum)
}

/// `x^α = Σᵢ coeffᵢ (βᵢ·x)^{‖α‖₁}` with `0 ≤ βᵢ ≤ α`.
///
/// Terms come from `(1/‖α‖₁!) Σ_β (−1)^{‖α‖₁−‖β‖₁} Π binom(αⱼ, βⱼ) (β·x)^{‖α‖₁}`;
/// parallel forms are merged after dividing each `β` by the gcd of its entries.
pub fn decompose_monomial(alpha: &[u32]) -> Result<Vec<(Rational, Vec<u32>)>> {
    let total: u32 = alpha.iter().sum();
    if total == 0 {
        return Err(Error::Precondition(
            "decomposition needs a monomial of positive degree".into(),
        ));
    }
    let norm = factorial_q(total);
    let mut merged: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    let mut beta = vec![0u32; alpha.len()];
    loop {
        // advance β through the box 0 ≤ β ≤ α (odometer order), skipping β = 0
        let mut i = 0;
        while i < alpha.len() && beta[i] == alpha[i] {
            beta[i] = 0;
            i += 1;
        }
        if i == alpha.len() {
            break;
        }
        beta[i] += 1;

        let bsum: u32 = beta.iter().sum();
        let mut coeff = beta
            .iter()
            .zip(alpha)
            .fold(Rational::one(), |acc, (&b, &a)| acc * Rational::from_integer(binomial(a, b)));
        if (total - bsum) % 2 == 1 {
            coeff = -coeff;
        }
        let g = beta.iter().fold(0u32, |acc, &b| acc.gcd(&b));
        let reduced: Vec<u32> = beta.iter().map(|&b| b / g).collect();
        coeff *= Rational::from_u64(g as u64).powu(total);
        *merged.entry(reduced).or_insert_with(Rational::zero) += coeff;
    }
    Ok(merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(b, c)| (c / norm.clone(), b))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    const ALL: [PolyMethod; 3] = [
        PolyMethod::Pullback,
        PolyMethod::TaylorExpansion,
        PolyMethod::LinformDecomp,
    ];

    fn q(p: i64) -> Rational {
        ratio(p, 1)
    }

    fn recompose(alpha: &[u32]) -> Polynomial {
        let total: u32 = alpha.iter().sum();
        let n = alpha.len();
        decompose_monomial(alpha)
            .unwrap()
            .into_iter()
            .fold(Polynomial::zero(n), |acc, (c, beta)| {
                let b: Vec<Rational> = beta.iter().map(|&x| q(x as i64)).collect();
                acc.add(&Polynomial::affine(&b, q(0)).pow(total).scale(&c))
            })
    }

    #[test]
    fn spot_values() {
        let tri = Simplex::<Rational>::standard(2);
        let j = Simplex::new(vec![vec![q(1), q(1)], vec![q(3), q(1)], vec![q(1), q(4)]]).unwrap();
        for m in ALL {
            assert_eq!(integrate_polynomial(&tri, &Polynomial::parse("x1*x2").unwrap(), m).unwrap(), ratio(1, 24));
            assert_eq!(integrate_polynomial(&j, &Polynomial::parse("5").unwrap(), m).unwrap(), q(15));
            assert_eq!(integrate_polynomial(&tri, &Polynomial::parse("x1 + x2").unwrap(), m).unwrap(), ratio(1, 3));
        }
    }

    #[test]
    fn decompositions() {
        let d = decompose_monomial(&[1, 1]).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.contains(&(ratio(1, 2), vec![1, 1])));
        assert!(d.contains(&(ratio(-1, 2), vec![1, 0])));
        assert_eq!(decompose_monomial(&[2, 0]).unwrap(), vec![(q(1), vec![1, 0])]);
        for alpha in [vec![2, 1], vec![1, 2, 3], vec![3, 0, 1], vec![4]] {
            assert_eq!(recompose(&alpha), Polynomial::monomial(q(1), alpha.clone()));
            let bound: u32 = alpha.iter().map(|a| a + 1).product();
            assert!(decompose_monomial(&alpha).unwrap().len() as u32 <= bound);
        }
        assert!(decompose_monomial(&[0, 0]).is_err());
    }

    #[test]
    fn methods_agree_on_skew_simplex() {
        let j = Simplex::new(vec![
            vec![ratio(1, 2), q(0), q(2)],
            vec![q(3), ratio(-1, 3), q(1)],
            vec![q(0), q(5), ratio(7, 4)],
            vec![q(2), q(2), q(-1)],
        ])
        .unwrap();
        let p = Polynomial::parse("3*x1^2*x2 - 1/2*x2^3 + x3^4 - 2*x1*x2*x3 + 7").unwrap();
        let vals: Vec<Rational> = ALL.iter().map(|&m| integrate_polynomial(&j, &p, m).unwrap()).collect();
        assert_eq!(vals[0], vals[1]);
        assert_eq!(vals[0], vals[2]);
    }

    #[test]
    fn default_method_switch() {
        assert_eq!(PolyMethod::default_for_dim(4), PolyMethod::Pullback);
        assert_eq!(PolyMethod::default_for_dim(5), PolyMethod::LinformDecomp);
    }
}
