//! Small polynomial containers: univariate polynomials in monomial form,
//! sparse polynomials in the `(u, v)` anchor coordinates, and polynomials in
//! `t` whose coefficients are `(u, v)` polynomials.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Univariate polynomial, `coeffs[j]` multiplies `t^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly1 {
    pub coeffs: Vec<f64>,
}

impl Poly1 {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn derivative(&self) -> Poly1 {
        if self.coeffs.len() <= 1 {
            return Poly1::constant(0.0);
        }
        Poly1::new(self.coeffs.iter().enumerate().skip(1).map(|(j, &c)| j as f64 * c).collect())
    }

    pub fn add(&self, other: &Poly1) -> Poly1 {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly1::new((0..len).map(|j| self.coeffs.get(j).unwrap_or(&0.0) + other.coeffs.get(j).unwrap_or(&0.0)).collect())
    }

    pub fn scale(&self, s: f64) -> Poly1 {
        Poly1::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly1) -> Poly1 {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly1::new(out)
    }
}

/// Exponent pair for a monomial `u^upow v^vpow`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UvMonomial {
    pub upow: Vec<u32>,
    pub vpow: Vec<u32>,
}

impl UvMonomial {
    pub fn one(m: usize) -> Self {
        Self { upow: vec![0; m], vpow: vec![0; m] }
    }

    fn mul(&self, other: &UvMonomial) -> UvMonomial {
        UvMonomial {
            upow: self.upow.iter().zip(&other.upow).map(|(a, b)| a + b).collect(),
            vpow: self.vpow.iter().zip(&other.vpow).map(|(a, b)| a + b).collect(),
        }
    }

    fn eval(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut x = 1.0;
        for (p, &e) in self.upow.iter().enumerate() {
            x *= u[p].powi(e as i32);
        }
        for (p, &e) in self.vpow.iter().enumerate() {
            x *= v[p].powi(e as i32);
        }
        x
    }

    pub fn udegree(&self) -> u32 {
        self.upow.iter().sum()
    }

    pub fn vdegree(&self) -> u32 {
        self.vpow.iter().sum()
    }
}

/// Sparse real polynomial in `u, v in R^m`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UvPoly {
    m: usize,
    terms: BTreeMap<UvMonomial, f64>,
}

impl UvPoly {
    pub fn zero(m: usize) -> Self {
        Self { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: f64) -> Self {
        let mut p = Self::zero(m);
        p.add_term(UvMonomial::one(m), c);
        p
    }

    /// The coordinate `u_i`.
    pub fn u(m: usize, i: usize) -> Self {
        let mut mono = UvMonomial::one(m);
        mono.upow[i] = 1;
        let mut p = Self::zero(m);
        p.add_term(mono, 1.0);
        p
    }

    /// The coordinate `v_i`.
    pub fn v(m: usize, i: usize) -> Self {
        let mut mono = UvMonomial::one(m);
        mono.vpow[i] = 1;
        let mut p = Self::zero(m);
        p.add_term(mono, 1.0);
        p
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    pub fn add_term(&mut self, mono: UvMonomial, c: f64) {
        debug_assert_eq!(mono.upow.len(), self.m);
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry(mono).or_insert(0.0);
        *e += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UvMonomial, f64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn coefficient(&self, mono: &UvMonomial) -> f64 {
        self.terms.get(mono).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, u: &[f64], v: &[f64]) -> f64 {
        self.terms.iter().map(|(mono, &c)| c * mono.eval(u, v)).sum()
    }

    pub fn add(&self, other: &UvPoly) -> UvPoly {
        let mut out = self.clone();
        for (mono, &c) in &other.terms {
            out.add_term(mono.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &UvPoly) -> UvPoly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> UvPoly {
        UvPoly { m: self.m, terms: self.terms.iter().map(|(k, &c)| (k.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &UvPoly) -> UvPoly {
        let mut out = UvPoly::zero(self.m);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> UvPoly {
        let mut out = UvPoly::constant(self.m, 1.0);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0f64, |a, c| a.max(c.abs()))
    }

    /// Drop terms whose coefficient is at most `tol` in absolute value.
    pub fn pruned(&self, tol: f64) -> UvPoly {
        UvPoly {
            m: self.m,
            terms: self.terms.iter().filter(|(_, c)| c.abs() > tol).map(|(k, &c)| (k.clone(), c)).collect(),
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs_coeff() <= tol
    }

    /// `f(v, u)`.
    pub fn swapped(&self) -> UvPoly {
        UvPoly {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(k, &c)| (UvMonomial { upow: k.vpow.clone(), vpow: k.upow.clone() }, c))
                .collect(),
        }
    }

    pub fn udegree(&self) -> u32 {
        self.terms.keys().map(UvMonomial::udegree).max().unwrap_or(0)
    }

    pub fn vdegree(&self) -> u32 {
        self.terms.keys().map(UvMonomial::vdegree).max().unwrap_or(0)
    }
}

/// Polynomial in `t` with `(u, v)`-polynomial coefficients; `coeffs[j]`
/// multiplies `t^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TPoly {
    m: usize,
    coeffs: Vec<UvPoly>,
}

impl TPoly {
    pub fn new(m: usize, coeffs: Vec<UvPoly>) -> Result<Self> {
        if coeffs.iter().any(|c| c.nvars() != m) {
            return Err(Error::param("coefficient polynomials must all use the same m"));
        }
        let coeffs = if coeffs.is_empty() { vec![UvPoly::zero(m)] } else { coeffs };
        Ok(Self { m, coeffs })
    }

    pub fn zero(m: usize) -> Self {
        Self { m, coeffs: vec![UvPoly::zero(m)] }
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[UvPoly] {
        &self.coeffs
    }

    /// Highest `t` power with a coefficient above `tol`.
    pub fn tdegree(&self, tol: f64) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero(tol)).unwrap_or(0)
    }

    pub fn coeff(&self, j: usize) -> UvPoly {
        self.coeffs.get(j).cloned().unwrap_or_else(|| UvPoly::zero(self.m))
    }

    pub fn eval(&self, t: f64, u: &[f64], v: &[f64]) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c.eval(u, v))
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        TPoly { m: self.m, coeffs: (0..len).map(|j| self.coeff(j).add(&other.coeff(j))).collect() }
    }

    pub fn sub(&self, other: &TPoly) -> TPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        TPoly { m: self.m, coeffs: (0..len).map(|j| self.coeff(j).sub(&other.coeff(j))).collect() }
    }

    pub fn mul_uv(&self, f: &UvPoly) -> TPoly {
        TPoly { m: self.m, coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect() }
    }

    pub fn mul(&self, other: &TPoly) -> TPoly {
        let mut coeffs = vec![UvPoly::zero(self.m); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        TPoly { m: self.m, coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly1_basics() {
        let p = Poly1::new(vec![1.0, -3.0, 2.0]); // (1 - t)(1 - 2t)
        assert_eq!(p.eval(1.0), 0.0);
        assert_eq!(p.eval(0.5), 0.0);
        assert_eq!(p.derivative().coeffs, vec![-3.0, 4.0]);
        assert_eq!(p.degree(), 2);
        let q = p.mul(&Poly1::new(vec![0.0, 1.0]));
        assert_eq!(q.coeffs, vec![0.0, 1.0, -3.0, 2.0]);
    }

    #[test]
    fn uv_arithmetic() {
        let m = 2;
        let inner = UvPoly::u(m, 0).mul(&UvPoly::v(m, 0)).add(&UvPoly::u(m, 1).mul(&UvPoly::v(m, 1)));
        let sq = inner.pow(2);
        let (u, v) = ([0.3, -0.4], [0.7, 0.2]);
        let direct = (0.3 * 0.7 - 0.4 * 0.2f64).powi(2);
        assert!((sq.eval(&u, &v) - direct).abs() < 1e-15);
        assert_eq!(inner.swapped(), inner);
    }

    #[test]
    fn tpoly_eval() {
        let m = 1;
        let p = TPoly::new(m, vec![UvPoly::u(m, 0), UvPoly::constant(m, 2.0)]).unwrap();
        // u + 2t
        assert_eq!(p.eval(0.5, &[0.25], &[0.0]), 1.25);
        assert_eq!(p.tdegree(0.0), 1);
    }
}
