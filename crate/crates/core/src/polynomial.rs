//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// `Σ c_α x^α`, keyed by exponent vectors of a fixed length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn monomial(c: Rational, exponent: Vec<u32>) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c);
        p
    }

    /// `x_i` (zero-based).
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(Rational::one(), e)
    }

    /// `c·x + b`.
    pub fn affine(c: &[Rational], b: Rational) -> Self {
        let n = c.len();
        let mut p = Self::constant(n, b);
        for (i, ci) in c.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, ci.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Shape(format!(
                    "exponent vector of length {} in a {nvars}-variable polynomial",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, exponent: Vec<u32>, c: Rational) {
        debug_assert_eq!(exponent.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, exponent: &[u32]) -> Rational {
        self.terms.get(exponent).cloned().unwrap_or_else(Rational::zero)
    }

    /// Reinterprets in `nvars ≥ self.nvars()` variables, padding exponents with zeros.
    pub fn with_nvars(&self, nvars: usize) -> Result<Self> {
        if nvars < self.nvars {
            let used = self
                .terms
                .keys()
                .flat_map(|e| e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| i + 1))
                .max()
                .unwrap_or(0);
            if used > nvars {
                return Err(Error::Shape(format!(
                    "polynomial uses x{used} but the simplex has dimension {nvars}"
                )));
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2.resize(nvars, 0);
                (e2, c.clone())
            })
            .collect();
        Ok(Polynomial { nvars, terms })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::constant(self.nvars, Rational::one());
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

    pub fn eval<S: Scalar>(&self, x: &[S]) -> S {
        self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            let m = e
                .iter()
                .zip(x)
                .fold(S::from_rational(c), |m, (&k, xi)| m * xi.powu(k));
            acc + m
        })
    }

    /// `p(M t + o)` as a polynomial in `t`; `M` is row-major with one row per original variable.
    pub fn substitute_affine(&self, matrix: &[Vec<Rational>], offset: &[Rational]) -> Self {
        let m = matrix.first().map_or(0, Vec::len);
        let forms: Vec<Polynomial> = matrix
            .iter()
            .zip(offset)
            .map(|(row, o)| Polynomial::affine(row, o.clone()))
            .collect();
        // Cache powers of each substituted form.
        let mut powers: Vec<Vec<Polynomial>> = forms
            .iter()
            .map(|f| vec![Polynomial::constant(m, Rational::one()), f.clone()])
            .collect();
        let mut out = Self::zero(m);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&forms[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Homogeneous components keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Polynomial> {
        let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            let deg = e.iter().sum();
            parts
                .entry(deg)
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .add_term(e.clone(), c.clone());
        }
        parts
    }

    /// Parses `3*x1^2*x2 - 1/2*x2^3`; variables are `x1`, `x2`, … (one-based).
    /// The variable count is the largest index used (at least 1).
    pub fn parse(text: &str) -> Result<Self> {
        let raw_terms = split_terms(text)?;
        let mut parsed = Vec::new();
        let mut nvars = 1;
        for (negative, body) in raw_terms {
            let (c, vars) = parse_term(&body)?;
            if let Some(&(i, _)) = vars.iter().max_by_key(|(i, _)| *i) {
                nvars = nvars.max(i);
            }
            parsed.push((if negative { -c } else { c }, vars));
        }
        let mut p = Polynomial::zero(nvars);
        for (c, vars) in parsed {
            let mut e = vec![0u32; nvars];
            for (i, k) in vars {
                e[i - 1] += k;
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}

fn split_terms(text: &str) -> Result<Vec<(bool, String)>> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::parse(text, "empty polynomial"));
    }
    let mut out = Vec::new();
    let mut negative = false;
    let mut current = String::new();
    for (i, &ch) in chars.iter().enumerate() {
        let is_sign = ch == '+' || ch == '-';
        // A sign right after an exponent marker like `1e` belongs to the number.
        let in_exponent = i >= 2
            && matches!(chars[i - 1], 'e' | 'E')
            && chars[i - 2].is_ascii_digit();
        if is_sign && !in_exponent {
            if !current.is_empty() {
                out.push((negative, std::mem::take(&mut current)));
                negative = false;
            } else if i > 0 && !matches!(chars[i - 1], '+' | '-') {
                return Err(Error::parse(ch.to_string(), "unexpected sign"));
            }
            if ch == '-' {
                negative = !negative;
            }
        } else {
            current.push(ch);
        }
    }
    if current.is_empty() {
        return Err(Error::parse(text, "dangling operator"));
    }
    out.push((negative, current));
    Ok(out)
}

fn parse_term(body: &str) -> Result<(Rational, Vec<(usize, u32)>)> {
    let mut coeff = Rational::one();
    let mut vars = Vec::new();
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(Error::parse(body, "empty factor"));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, k)) => (
                    i,
                    k.parse::<u32>()
                        .map_err(|_| Error::parse(factor, "exponent must be a nonnegative integer"))?,
                ),
                None => (rest, 1),
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| Error::parse(factor, "variable index must be a positive integer"))?;
            if idx == 0 {
                return Err(Error::parse(factor, "variables are numbered from x1"));
            }
            vars.push((idx, exp));
        } else {
            let (num, exp) = match factor.split_once('^') {
                Some((n, k)) => (
                    n,
                    k.parse::<u32>()
                        .map_err(|_| Error::parse(factor, "exponent must be a nonnegative integer"))?,
                ),
                None => (factor, 1),
            };
            coeff *= parse_rational(num).map_err(|_| Error::parse(factor, "bad coefficient"))?.powu(exp);
        }
    }
    Ok((coeff, vars))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{k}", i + 1)
                    }
                })
                .collect();
            if vars.is_empty() {
                f.write_str(&format_rational(&a))?;
            } else if a.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&a), vars.join("*"))?;
            }
        }
        Ok(())
    }
}
