use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Interval on which a one-dimensional rule lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiDomain {
    /// `[−1, 1]` with weight `(1−x)^α (1+x)^β`.
    Symmetric,
    /// `[0, 1]` with weight `(1−y)^α y^β`.
    Unit,
}

/// Gauss-Jacobi rule with `s+1` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Jacobi1DRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub domain: JacobiDomain,
}

impl Jacobi1DRule {
    /// Exact for polynomials up to this degree against the weight.
    pub fn degree(&self) -> u32 {
        2 * self.nodes.len() as u32 - 1
    }

    /// Moves a symmetric rule onto `[0, 1]`: nodes `(x+1)/2`, weights scaled by `2^{−(α+β+1)}`.
    pub fn to_unit_interval(&self) -> Jacobi1DRule {
        if self.domain == JacobiDomain::Unit {
            return self.clone();
        }
        let scale = 0.5f64.powf(self.alpha + self.beta + 1.0);
        Jacobi1DRule {
            nodes: self.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
            weights: self.weights.iter().map(|w| w * scale).collect(),
            alpha: self.alpha,
            beta: self.beta,
            domain: JacobiDomain::Unit,
        }
    }

    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `P_n^{(α,β)}(x)` by the three-term recurrence.
pub fn jacobi_polynomial(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    let ab = alpha + beta;
    let mut p_prev = 1.0;
    if n == 0 {
        return p_prev;
    }
    let mut p = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
        let a3 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let next = (a2 * p - a3 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    p
}

/// `d/dx P_n^{(α,β)} = (n+α+β+1)/2 · P_{n−1}^{(α+1,β+1)}`.
pub fn jacobi_derivative(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n as f64 + alpha + beta + 1.0) * jacobi_polynomial(n - 1, alpha + 1.0, beta + 1.0, x)
}

/// Gauss-Jacobi rule with `s+1` nodes on `[−1, 1]`, exact to degree `2s+1`.
///
/// Nodes are eigenvalues of the symmetric tridiagonal recurrence matrix followed
/// by one Newton step; weights use the closed form
/// `Γ(n+α+1)Γ(n+β+1)/(Γ(n+α+β+1) n!) · 2^{α+β+1} / ((1−x²) P_n'(x)²)`.
pub fn gauss_jacobi_rule(s: usize, alpha: f64, beta: f64) -> Result<Jacobi1DRule> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::Precondition(format!(
            "Jacobi exponents must exceed -1 (got α={alpha}, β={beta})"
        )));
    }
    let n = s + 1;
    let ab = alpha + beta;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        m[(k, k)] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (c * (c + 2.0))
        };
        if k >= 1 {
            let off = if k == 1 {
                // (α+β+1) cancels between numerator and denominator
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab)
                    / (c * c * (c + 1.0) * (c - 1.0))
            };
            let off = off.sqrt();
            m[(k, k - 1)] = off;
            m[(k - 1, k)] = off;
        }
    }
    let eig = nalgebra::SymmetricEigen::try_new(m, f64::EPSILON, 200 * n)
        .ok_or_else(|| Error::Numeric("Jacobi eigenvalue iteration did not converge".into()))?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    let log_c = libm::lgamma(n as f64 + alpha + 1.0) + libm::lgamma(n as f64 + beta + 1.0)
        - libm::lgamma(n as f64 + ab + 1.0)
        - libm::lgamma(n as f64 + 1.0)
        + (ab + 1.0) * std::f64::consts::LN_2;
    let c = log_c.exp();
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        let dp = jacobi_derivative(n, alpha, beta, *x);
        if dp != 0.0 {
            let step = jacobi_polynomial(n, alpha, beta, *x) / dp;
            if step.is_finite() && (*x - step).abs() < 1.0 {
                *x -= step;
            }
        }
        let dp = jacobi_derivative(n, alpha, beta, *x);
        weights.push(c / ((1.0 - *x * *x) * dp * dp));
    }
    let ordered = nodes.windows(2).all(|w| w[0] < w[1]);
    let inside = nodes.iter().all(|x| x.abs() < 1.0);
    if !ordered || !inside || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::Numeric(format!(
            "Gauss-Jacobi construction failed for s={s}, α={alpha}, β={beta}"
        )));
    }
    Ok(Jacobi1DRule {
        nodes,
        weights,
        alpha,
        beta,
        domain: JacobiDomain::Symmetric,
    })
}

/// Rule for `∫₀¹ z^d g(z) dz`, exact to degree `2s+1`.
pub fn radial_rule(d: usize, s: usize) -> Result<Jacobi1DRule> {
    Ok(gauss_jacobi_rule(s, 0.0, d as f64)?.to_unit_interval())
}
