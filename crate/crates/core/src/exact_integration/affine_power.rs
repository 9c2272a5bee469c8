use crate::combinatorics::{factorial_q, h_complete};
use crate::error::{Error, Result};
use crate::geometry::Simplex;
use crate::scalar::Scalar;

use super::series::PoleStructure;

/// How to evaluate `∫_J (c·x + b)ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffinePowerMethod {
    /// Vertex sum when all values are distinct, residues otherwise.
    Auto,
    Brion,
    Residue,
    /// Complete homogeneous symmetric polynomial of the vertex values.
    Series,
}

/// `pⱼ = c·vⱼ + b`.
pub fn vertex_affine_values<S: Scalar>(j: &Simplex<S>, c: &[S], b: &S) -> Result<Vec<S>> {
    if c.len() != j.dim() {
        return Err(Error::Shape(format!(
            "direction has {} entries, simplex dimension is {}",
            c.len(),
            j.dim()
        )));
    }
    Ok(j.vertices()
        .iter()
        .map(|v| {
            v.iter()
                .zip(c)
                .fold(b.clone(), |acc, (x, ci)| acc + x.clone() * ci.clone())
        })
        .collect())
}

/// `Σⱼ pⱼ^power / Π_{k≠j}(pⱼ − p_k)`; requires distinct values.
pub fn brion_sum<S: Scalar>(values: &[S], power: u32) -> Result<S> {
    let mut total = S::zero();
    for (j, pj) in values.iter().enumerate() {
        let mut den = S::one();
        for (k, pk) in values.iter().enumerate() {
            if k != j {
                den = den * (pj.clone() - pk.clone());
            }
        }
        if den.is_zero() {
            return Err(Error::Precondition(
                "vertex-sum formula needs pairwise distinct values".into(),
            ));
        }
        total = total + pj.powu(power) / den;
    }
    Ok(total)
}

/// `Σⱼ pⱼⁿ / Π_{k≠j}(pⱼ − p_k)`, which vanishes for `n < d` (d+1 distinct values).
pub fn lagrange_zero_sum<S: Scalar>(values: &[S], n: u32) -> Result<S> {
    brion_sum(values, n)
}

/// `h_n(p₀, …, p_d)` by the chosen method (without the volume factor).
pub fn h_from_vertex_values<S: Scalar>(values: &[S], n: u32, method: AffinePowerMethod) -> Result<S> {
    let d = values.len() as u32 - 1;
    match method {
        AffinePowerMethod::Series => Ok(h_complete(n, values)),
        AffinePowerMethod::Brion => brion_sum(values, n + d),
        AffinePowerMethod::Residue => PoleStructure::from_values(values).residue_sum(n + d),
        AffinePowerMethod::Auto => {
            let poles = PoleStructure::from_values(values);
            if poles.is_generic() {
                brion_sum(values, n + d)
            } else {
                poles.residue_sum(n + d)
            }
        }
    }
}

/// `∫_J (c·x + b)ⁿ = d!·vol(J) · n!/(n+d)! · h_n(c·v₀+b, …, c·v_d+b)`.
pub fn integrate_affine_power<S: Scalar>(
    j: &Simplex<S>,
    c: &[S],
    b: &S,
    n: u32,
    method: AffinePowerMethod,
) -> Result<S> {
    let values = vertex_affine_values(j, c, b)?;
    let d = j.dim() as u32;
    let map = j.affine_map()?;
    let h = h_from_vertex_values(&values, n, method)?;
    let scale = S::from_rational(&(factorial_q(n) / factorial_q(n + d)));
    Ok(map.abs_det * scale * h)
}
