use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Univariate power series in `ε` truncated below `ε^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> FormalSeries<S> {
    pub fn new(mut coeffs: Vec<S>, order: usize) -> Self {
        coeffs.resize(order, S::zero());
        FormalSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![S::one()], order)
    }

    /// `a + ε`.
    pub fn linear(a: S, order: usize) -> Self {
        Self::new(vec![a, S::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![S::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        FormalSeries { coeffs: out }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order();
        let a0 = self.coeff(0);
        if a0.is_zero() {
            return Err(Error::Numeric("series with zero constant term is not invertible".into()));
        }
        let mut inv = vec![S::zero(); n];
        if n == 0 {
            return Ok(FormalSeries { coeffs: inv });
        }
        inv[0] = S::one() / a0.clone();
        for k in 1..n {
            let mut acc = S::zero();
            for i in 1..=k {
                acc = acc + self.coeffs[i].clone() * inv[k - i].clone();
            }
            inv[k] = -acc / a0.clone();
        }
        Ok(FormalSeries { coeffs: inv })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

/// Distinct values among `p₀, …, p_d` with their multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleStructure<S> {
    pub poles: Vec<Pole<S>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pole<S> {
    pub value: S,
    pub multiplicity: usize,
    /// Vertex indices sharing this value.
    pub members: Vec<usize>,
}

impl<S: Scalar> PoleStructure<S> {
    /// Clusters values by exact equality (rationals) or the relative tolerance (floats).
    pub fn from_values(values: &[S]) -> Self {
        let mut poles: Vec<Pole<S>> = Vec::new();
        for (j, v) in values.iter().enumerate() {
            match poles.iter_mut().find(|p| p.value.coincides(v)) {
                Some(p) => {
                    p.multiplicity += 1;
                    p.members.push(j);
                    if !S::EXACT {
                        let m = S::from_u64(p.multiplicity as u64);
                        let sum = p
                            .members
                            .iter()
                            .fold(S::zero(), |acc, &i| acc + values[i].clone());
                        p.value = sum / m;
                    }
                }
                None => poles.push(Pole {
                    value: v.clone(),
                    multiplicity: 1,
                    members: vec![j],
                }),
            }
        }
        PoleStructure { poles }
    }

    pub fn total_multiplicity(&self) -> usize {
        self.poles.iter().map(|p| p.multiplicity).sum()
    }

    /// All poles simple: the generic case of the vertex-sum formulas.
    pub fn is_generic(&self) -> bool {
        self.poles.iter().all(|p| p.multiplicity == 1)
    }

    /// `Σ_k Res_{z=p_k} z^{power} / Π_j (z − p_j)^{m_j}`.
    pub fn residue_sum(&self, power: u32) -> Result<S> {
        let mut total = S::zero();
        for (k, pole) in self.poles.iter().enumerate() {
            let order = pole.multiplicity;
            let mut series = FormalSeries::linear(pole.value.clone(), order).pow(power);
            for (j, other) in self.poles.iter().enumerate() {
                if j == k {
                    continue;
                }
                let factor = FormalSeries::linear(pole.value.clone() - other.value.clone(), order)
                    .inverse()?
                    .pow(other.multiplicity as u32);
                series = series.mul(&factor);
            }
            total = total + series.coeff(order - 1);
        }
        Ok(total)
    }
}
