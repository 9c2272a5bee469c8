//! Factorials, binomials, index enumerations, and complete homogeneous
//! symmetric polynomials.

use num_bigint::BigInt;
use num_traits::One;

use crate::scalar::{Rational, Scalar};

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn factorial_q(n: u32) -> Rational {
    Rational::from_integer(factorial(n))
}

pub fn factorial_f64(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k ∈ ℤ^parts_{≥0}` with `‖k‖₁ = total`, in lexicographically decreasing order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut current = vec![0u32; parts];
    fill_compositions(total, 0, &mut current, &mut out);
    out
}

fn fill_compositions(remaining: u32, idx: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if idx + 1 == current.len() {
        current[idx] = remaining;
        out.push(current.clone());
        return;
    }
    for v in (0..=remaining).rev() {
        current[idx] = v;
        fill_compositions(remaining - v, idx + 1, current, out);
    }
}

/// All exponent vectors in `nvars` variables with total degree `≤ max_degree`.
pub fn exponents_up_to(nvars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    (0..=max_degree)
        .flat_map(|deg| compositions(deg, nvars))
        .collect()
}

/// Nondecreasing index sequences `0 ≤ i₁ ≤ … ≤ i_len ≤ max_index`.
pub fn multisets(max_index: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fill_multisets(0, max_index, len, &mut current, &mut out);
    out
}

fn fill_multisets(
    start: usize,
    max_index: usize,
    len: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == len {
        out.push(current.clone());
        return;
    }
    for i in start..=max_index {
        current.push(i);
        fill_multisets(i, max_index, len, current, out);
        current.pop();
    }
}

/// Complete homogeneous symmetric polynomial `h_q(x₁,…,x_n)`, the sum of all
/// monomials of total degree `q`.
///
/// Uses the prefix recurrence `h_k(x₁..x_i) = h_k(x₁..x_{i-1}) + x_i·h_{k-1}(x₁..x_i)`,
/// which is exact for rationals and needs `O(n·q)` operations.
pub fn h_complete<S: Scalar>(q: u32, values: &[S]) -> S {
    let q = q as usize;
    let mut h = vec![S::zero(); q + 1];
    h[0] = S::one();
    for x in values {
        for k in 1..=q {
            let prev = h[k - 1].clone();
            h[k] = h[k].clone() + x.clone() * prev;
        }
    }
    h.swap_remove(q)
}

/// `h_0, …, h_q` in one pass.
pub fn h_complete_all<S: Scalar>(q: u32, values: &[S]) -> Vec<S> {
    let q = q as usize;
    let mut h = vec![S::zero(); q + 1];
    h[0] = S::one();
    for x in values {
        for k in 1..=q {
            let prev = h[k - 1].clone();
            h[k] = h[k].clone() + x.clone() * prev;
        }
    }
    h
}
