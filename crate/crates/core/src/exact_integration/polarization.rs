use crate::combinatorics::{binomial, factorial, multisets};
use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::geometry::{simplex_volume, Simplex};
use crate::scalar::{Rational, Scalar};

/// `∫_J f` for `q`-homogeneous `f` from values at signed vertex sums:
///
/// `vol(J)/(2^q q! C(q+d,q)) Σ_{i₁≤…≤i_q} Σ_{ε∈{±1}^q} ε₁⋯ε_q f(Σⱼ εⱼ v_{iⱼ})`.
///
/// Exact in rational mode for polynomial specs.
pub fn integrate_qhomogeneous<S: Scalar>(j: &Simplex<S>, f: &FunctionSpec, q: u32) -> Result<S> {
    if q == 0 {
        return Err(Error::Unsupported(
            "polarization needs a positive integer degree".into(),
        ));
    }
    let d = j.dim();
    if q > 24 {
        return Err(Error::Unsupported(format!("degree {q} needs 2^{q} evaluations per multiset")));
    }
    let mut total = S::zero();
    let mut point = vec![S::zero(); d];
    for idx in multisets(d, q as usize) {
        for mask in 0u32..(1 << q) {
            point.iter_mut().for_each(|x| *x = S::zero());
            for (bit, &i) in idx.iter().enumerate() {
                let neg = mask >> bit & 1 == 1;
                for (x, v) in point.iter_mut().zip(j.vertex(i)) {
                    *x = if neg {
                        x.clone() - v.clone()
                    } else {
                        x.clone() + v.clone()
                    };
                }
            }
            let value = f.value_at(&point)?;
            if mask.count_ones() % 2 == 1 {
                total = total - value;
            } else {
                total = total + value;
            }
        }
    }
    let den = Rational::from_integer(
        num_bigint::BigInt::from(1u64 << q) * factorial(q) * binomial(q + d as u32, q),
    );
    Ok(simplex_volume(j)? * total / S::from_rational(&den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn spot_values() {
        let tri = Simplex::<Rational>::standard(2);
        let f = FunctionSpec::parse("poly:x1^2").unwrap();
        assert_eq!(integrate_qhomogeneous(&tri, &f, 2).unwrap(), ratio(1, 12));
        let g = FunctionSpec::parse("linpow:c=1,1;b=0;q=2").unwrap();
        assert_eq!(integrate_qhomogeneous(&tri, &g, 2).unwrap(), ratio(1, 4));
        let h = FunctionSpec::parse("poly:2*x1 - x2").unwrap();
        let j = Simplex::new(vec![
            vec![ratio(1, 1), ratio(1, 1)],
            vec![ratio(3, 1), ratio(1, 1)],
            vec![ratio(1, 1), ratio(4, 1)],
        ])
        .unwrap();
        assert_eq!(
            integrate_qhomogeneous(&j, &h, 1).unwrap(),
            crate::functions::secant_mean(&h, &j).unwrap()
        );
        assert!(integrate_qhomogeneous(&tri, &f, 0).is_err());
    }

    #[test]
    fn black_box_in_floating_point() {
        let f = FunctionSpec::q_homogeneous(2, 3.0, true, |x| (x[0] + 2.0 * x[1]).powi(3));
        let j = Simplex::<f64>::standard(2);
        // ∫ (x₁+2x₂)³ over Δ₂ = 3!/5! · h₃(0,1,2) = (1/20)·15
        let v = integrate_qhomogeneous(&j, &f, 3).unwrap();
        assert!((v - 0.75).abs() < 1e-13, "{v}");
    }
}
