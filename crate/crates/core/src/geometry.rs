//! Simplices, the affine normalization onto the standard simplex, and uniform sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardUniform};

use crate::combinatorics::factorial_q;
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, rational_from_f64, Rational, Scalar};

/// A d-simplex given by its `d+1` affinely independent vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex<S> {
    vertices: Vec<Vec<S>>,
}

/// `x = B t + v₀`, mapping the standard simplex onto a simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap<S> {
    /// Row-major `d×d` matrix whose columns are `vⱼ − v₀`.
    pub matrix: Vec<Vec<S>>,
    pub inverse: Vec<Vec<S>>,
    pub offset: Vec<S>,
    pub abs_det: S,
}

/// `{(x, z) : x ∈ z·J, 0 ≤ z ≤ 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeRegion<S> {
    pub base: Simplex<S>,
}

impl<S: Scalar> Simplex<S> {
    pub fn new(vertices: Vec<Vec<S>>) -> Result<Self> {
        let n = vertices.len();
        if n < 2 {
            return Err(Error::Shape(format!("need at least 2 vertices, got {n}")));
        }
        let d = n - 1;
        if let Some((j, v)) = vertices.iter().enumerate().find(|(_, v)| v.len() != d) {
            return Err(Error::Shape(format!(
                "vertex {j} has {} coordinates, expected {d}",
                v.len()
            )));
        }
        let s = Simplex { vertices };
        s.affine_map()?;
        Ok(s)
    }

    /// Δ_d.
    pub fn standard(d: usize) -> Self {
        Self::shifted(vec![S::zero(); d], S::one())
    }

    /// `u·Δ_d`.
    pub fn scaled(d: usize, u: S) -> Self {
        Self::shifted(vec![S::zero(); d], u)
    }

    /// `v₀ + u·Δ_d`. Panics if `u` is zero.
    pub fn shifted(v0: Vec<S>, u: S) -> Self {
        assert!(!u.is_zero(), "scale must be nonzero");
        let d = v0.len();
        let mut vertices = vec![v0.clone()];
        for j in 0..d {
            let mut v = v0.clone();
            v[j] = v[j].clone() + u.clone();
            vertices.push(v);
        }
        Simplex { vertices }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<S>] {
        &self.vertices
    }

    pub fn vertex(&self, j: usize) -> &[S] {
        &self.vertices[j]
    }

    pub fn affine_map(&self) -> Result<AffineMap<S>> {
        let d = self.dim();
        let v0 = &self.vertices[0];
        let matrix: Vec<Vec<S>> = (0..d)
            .map(|r| {
                (1..=d)
                    .map(|c| self.vertices[c][r].clone() - v0[r].clone())
                    .collect()
            })
            .collect();
        let scale = if S::EXACT {
            1.0
        } else {
            let max_col = (0..d)
                .map(|c| {
                    (0..d)
                        .map(|r| matrix[r][c].as_f64().powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(0.0, f64::max);
            max_col.powi(d as i32)
        };
        let (det, inverse) = invert(&matrix).ok_or(Error::Degenerate)?;
        if det.negligible(scale) {
            return Err(Error::Degenerate);
        }
        Ok(AffineMap {
            matrix,
            inverse,
            offset: v0.clone(),
            abs_det: det.abs(),
        })
    }

    /// Barycentric coordinates `(λ₀, …, λ_d)` of `x`, summing to one.
    pub fn barycentric(&self, x: &[S]) -> Result<Vec<S>> {
        let map = self.affine_map()?;
        let t = map.pull_back(x);
        let rest = t.iter().fold(S::one(), |acc, ti| acc - ti.clone());
        let mut out = vec![rest];
        out.extend(t);
        Ok(out)
    }

    pub fn centroid(&self) -> Vec<S> {
        let d = self.dim();
        let n = S::from_u64((d + 1) as u64);
        (0..d)
            .map(|r| {
                self.vertices
                    .iter()
                    .fold(S::zero(), |acc, v| acc + v[r].clone())
                    / n.clone()
            })
            .collect()
    }

    pub fn map_vertices<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Simplex<T> {
        Simplex {
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn to_f64(&self) -> Simplex<f64> {
        self.map_vertices(|x| x.as_f64())
    }
}

impl Simplex<f64> {
    /// Exact binary value of every floating coordinate.
    pub fn to_exact(&self) -> Result<Simplex<Rational>> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|&x| rational_from_f64(x)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Ok(Simplex { vertices })
    }
}

impl<S: Scalar> AffineMap<S> {
    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    /// `B t + v₀`.
    pub fn apply(&self, t: &[S]) -> Vec<S> {
        mat_vec(&self.matrix, t)
            .into_iter()
            .zip(&self.offset)
            .map(|(a, b)| a + b.clone())
            .collect()
    }

    /// `B⁻¹ (x − v₀)`.
    pub fn pull_back(&self, x: &[S]) -> Vec<S> {
        let shifted: Vec<S> = x
            .iter()
            .zip(&self.offset)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        mat_vec(&self.inverse, &shifted)
    }
}

impl<S: Scalar> ConeRegion<S> {
    pub fn new(base: Simplex<S>) -> Self {
        ConeRegion { base }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn volume(&self) -> Result<S> {
        let n = S::from_u64((self.dim() + 1) as u64);
        Ok(simplex_volume(&self.base)? / n)
    }
}

/// `|det B| / d!`.
pub fn simplex_volume<S: Scalar>(j: &Simplex<S>) -> Result<S> {
    let map = j.affine_map()?;
    Ok(map.abs_det / S::from_rational(&factorial_q(j.dim() as u32)))
}

pub fn to_standard<S: Scalar>(j: &Simplex<S>) -> Result<AffineMap<S>> {
    j.affine_map()
}

fn mat_vec<S: Scalar>(m: &[Vec<S>], v: &[S]) -> Vec<S> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}

/// Gauss-Jordan elimination with largest-magnitude pivoting.
/// Returns the determinant and inverse, or `None` when a pivot vanishes.
fn invert<S: Scalar>(m: &[Vec<S>]) -> Option<(S, Vec<Vec<S>>)> {
    let n = m.len();
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    let mut det = S::one();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].is_zero() {
            return None;
        }
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        for k in 0..n {
            a[col][k] = a[col][k].clone() / p.clone();
            inv[col][k] = inv[col][k].clone() / p.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for k in 0..n {
                let da = factor.clone() * a[col][k].clone();
                a[r][k] = a[r][k].clone() - da;
                let di = factor.clone() * inv[col][k].clone();
                inv[r][k] = inv[r][k].clone() - di;
            }
        }
    }
    Some((det, inv))
}

/// A simplex read from user input: exact when every coordinate is rational.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySimplex {
    Exact(Simplex<Rational>),
    Numeric(Simplex<f64>),
}

impl AnySimplex {
    pub fn dim(&self) -> usize {
        match self {
            AnySimplex::Exact(s) => s.dim(),
            AnySimplex::Numeric(s) => s.dim(),
        }
    }

    pub fn to_f64(&self) -> Simplex<f64> {
        match self {
            AnySimplex::Exact(s) => s.to_f64(),
            AnySimplex::Numeric(s) => s.clone(),
        }
    }

    /// Exact coordinates; floating inputs are converted to their binary values.
    pub fn to_exact(&self) -> Result<Simplex<Rational>> {
        match self {
            AnySimplex::Exact(s) => Ok(s.clone()),
            AnySimplex::Numeric(s) => s.to_exact(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AnySimplex::Exact(_))
    }

    /// Parses `{"vertices": [[…], …]}`; entries are all JSON numbers or all `"p/q"` strings.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::parse("simplex json", e.to_string()))?;
        let rows = value
            .get("vertices")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::parse("vertices", "missing `vertices` array"))?;
        let mut strings = Vec::new();
        let mut numbers = Vec::new();
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::parse(row.to_string(), "vertex must be an array"))?;
            let mut srow = Vec::new();
            let mut nrow = Vec::new();
            for entry in row {
                match entry {
                    serde_json::Value::String(s) => srow.push(parse_rational(s)?),
                    serde_json::Value::Number(n) => nrow.push(
                        n.as_f64()
                            .ok_or_else(|| Error::parse(n.to_string(), "not a finite number"))?,
                    ),
                    other => return Err(Error::parse(other.to_string(), "coordinate must be a number or string")),
                }
            }
            strings.push(srow);
            numbers.push(nrow);
        }
        let n_str: usize = strings.iter().map(Vec::len).sum();
        let n_num: usize = numbers.iter().map(Vec::len).sum();
        match (n_str, n_num) {
            (_, 0) => Ok(AnySimplex::Exact(Simplex::new(strings)?)),
            (0, _) => Ok(AnySimplex::Numeric(Simplex::new(numbers)?)),
            _ => Err(Error::parse(
                "vertices",
                "mixed numeric and rational-string coordinates",
            )),
        }
    }
}

/// Region accepted by the samplers.
#[derive(Debug, Clone, Copy)]
pub enum Region<'a> {
    Simplex(&'a Simplex<f64>),
    Cone(&'a ConeRegion<f64>),
}

impl Region<'_> {
    /// Coordinates per sample point (`d` for a simplex, `d+1` for a cone with `z` last).
    pub fn point_dim(&self) -> usize {
        match self {
            Region::Simplex(s) => s.dim(),
            Region::Cone(c) => c.dim() + 1,
        }
    }

    pub fn volume(&self) -> Result<f64> {
        match self {
            Region::Simplex(s) => simplex_volume(*s),
            Region::Cone(c) => c.volume(),
        }
    }
}

/// Deterministic stream of uniform points over a region.
pub struct UniformSampler {
    rng: ChaCha8Rng,
    map: AffineMap<f64>,
    cone: bool,
    exps: Vec<f64>,
    t: Vec<f64>,
}

impl UniformSampler {
    pub fn new(region: Region<'_>, seed: u64) -> Result<Self> {
        let (base, cone) = match region {
            Region::Simplex(s) => (s, false),
            Region::Cone(c) => (&c.base, true),
        };
        let d = base.dim();
        Ok(UniformSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            map: base.affine_map()?,
            cone,
            exps: vec![0.0; d + 1],
            t: vec![0.0; d],
        })
    }

    /// Writes the next point into `out` (length `d`, or `d+1` for a cone with `z` last).
    pub fn next_into(&mut self, out: &mut [f64]) {
        let d = self.t.len();
        let z = if self.cone {
            let u: f64 = StandardUniform.sample(&mut self.rng);
            u.powf(1.0 / (d as f64 + 1.0))
        } else {
            1.0
        };
        // normalized exponential spacings are uniform on the simplex
        for e in self.exps.iter_mut() {
            *e = Exp1.sample(&mut self.rng);
        }
        let total: f64 = self.exps.iter().sum();
        for (t, e) in self.t.iter_mut().zip(&self.exps[1..]) {
            *t = e / total;
        }
        for r in 0..d {
            let mut x = self.map.offset[r];
            for c in 0..d {
                x += self.map.matrix[r][c] * self.t[c];
            }
            out[r] = x * z;
        }
        if self.cone {
            out[d] = z;
        }
    }
}

/// `count` uniform points; cone points carry `z` as the last coordinate.
pub fn sample_uniform(region: Region<'_>, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Err(Error::Precondition("sample count must be at least 1".into()));
    }
    let mut sampler = UniformSampler::new(region, seed)?;
    let dim = region.point_dim();
    Ok((0..count)
        .map(|_| {
            let mut p = vec![0.0; dim];
            sampler.next_into(&mut p);
            p
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn q(p: i64) -> Rational {
        ratio(p, 1)
    }

    #[test]
    fn volumes() {
        assert_eq!(simplex_volume(&Simplex::<Rational>::standard(2)).unwrap(), ratio(1, 2));
        assert_eq!(
            simplex_volume(&Simplex::scaled(3, q(2))).unwrap(),
            ratio(4, 3)
        );
        let j = Simplex::new(vec![vec![q(1), q(1)], vec![q(3), q(1)], vec![q(1), q(4)]]).unwrap();
        assert_eq!(simplex_volume(&j).unwrap(), q(3));
        let map = to_standard(&j).unwrap();
        assert_eq!(map.matrix, vec![vec![q(2), q(0)], vec![q(0), q(3)]]);
        assert_eq!(map.abs_det, q(6));
        assert_eq!(map.offset, vec![q(1), q(1)]);
    }

    #[test]
    fn map_hits_vertices() {
        let j = Simplex::new(vec![
            vec![ratio(1, 2), q(0), q(2)],
            vec![q(3), ratio(-1, 3), q(1)],
            vec![q(0), q(5), ratio(7, 4)],
            vec![q(2), q(2), q(-1)],
        ])
        .unwrap();
        let map = j.affine_map().unwrap();
        assert_eq!(map.apply(&[q(0), q(0), q(0)]), j.vertex(0));
        for k in 1..=3 {
            let mut e = vec![q(0); 3];
            e[k - 1] = q(1);
            assert_eq!(map.apply(&e), j.vertex(k));
            assert_eq!(map.pull_back(j.vertex(k)), e);
        }
    }

    #[test]
    fn degenerate_rejected() {
        let r = Simplex::new(vec![vec![q(0), q(0)], vec![q(1), q(1)], vec![q(2), q(2)]]);
        assert!(matches!(r, Err(Error::Degenerate)));
        let r = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0 + 1e-14]]);
        assert!(matches!(r, Err(Error::Degenerate)));
        assert!(matches!(
            Simplex::new(vec![vec![q(0)], vec![q(1), q(2)]]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn json_parsing() {
        let s = AnySimplex::from_json(r#"{"vertices": [["0","0"],["1/2","0"],["0","3"]]}"#).unwrap();
        assert!(s.is_exact());
        let s = AnySimplex::from_json(r#"{"vertices": [[0,0],[0.5,0],[0,3]]}"#).unwrap();
        assert!(!s.is_exact());
        assert!(AnySimplex::from_json(r#"{"vertices": [["0",0],[1,0],[0,1]]}"#).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_inside() {
        let j = Simplex::<f64>::standard(1);
        let a = sample_uniform(Region::Simplex(&j), 4, 7).unwrap();
        let b = sample_uniform(Region::Simplex(&j), 4, 7).unwrap();
        assert_eq!(a, b);
        let j = Simplex::<f64>::standard(3);
        for p in sample_uniform(Region::Simplex(&j), 1000, 1).unwrap() {
            assert!(p.iter().all(|&x| x >= 0.0) && p.iter().sum::<f64>() <= 1.0);
        }
    }

    #[test]
    fn sample_moments() {
        let j = Simplex::<f64>::standard(2);
        let n = 100_000;
        let pts = sample_uniform(Region::Simplex(&j), n, 1).unwrap();
        let mean = pts.iter().map(|p| p[0]).sum::<f64>() / n as f64;
        // Var(x₁) = 1/18 on Δ₂
        let se = (1.0f64 / 18.0 / n as f64).sqrt();
        assert!((mean - 1.0 / 3.0).abs() < 3.0 * se, "{mean}");

        let cone = ConeRegion::new(j);
        let pts = sample_uniform(Region::Cone(&cone), n, 2).unwrap();
        let frac = pts.iter().filter(|p| p[2] > 0.5).count() as f64 / n as f64;
        let p = 1.0 - 0.125;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((frac - p).abs() < 3.0 * se, "{frac}");
    }
}
