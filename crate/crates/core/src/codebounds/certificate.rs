use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gegenbauer::coeffs_1d;
use crate::poly::Poly1;

/// Slack allowed above zero by [`verify_nonpositive`].
pub const NONPOSITIVE_TOL: f64 = 1e-12;
pub const NONPOSITIVE_GRID: usize = 10_000;
pub const MAX_CERTIFICATE_DEGREE: usize = 64;

/// Number of pairs `i < j` among `d` points.
pub fn pair_count(d: usize) -> usize {
    d * (d.saturating_sub(1)) / 2
}

/// Position of the pair `(i, j)`, `i < j`, in the order
/// `(0,1), (0,2), .., (0,d-1), (1,2), ..`.
pub fn pair_index(i: usize, j: usize, d: usize) -> usize {
    debug_assert!(i < j && j < d);
    i * d - i * (i + 1) / 2 + (j - i - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairTerm {
    /// Exponent of each `x_ij`, in [`pair_index`] order.
    pub pow: Vec<u32>,
    pub c: f64,
}

/// Polynomial `f(x)` in the pairwise entries `x_ij` of `d` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairPolynomial {
    pub d: usize,
    pub terms: Vec<PairTerm>,
}

impl PairPolynomial {
    pub fn new(d: usize, terms: Vec<PairTerm>) -> Result<Self> {
        let f = Self { d, terms };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::param("a pair polynomial needs d >= 2"));
        }
        let vars = pair_count(self.d);
        for t in &self.terms {
            if t.pow.len() != vars {
                return Err(Error::DimensionMismatch { expected: vars, actual: t.pow.len() });
            }
            if !t.c.is_finite() {
                return Err(Error::param("non-finite coefficient"));
            }
        }
        Ok(())
    }

    pub fn constant(d: usize, c: f64) -> Self {
        Self { d, terms: vec![PairTerm { pow: vec![0; pair_count(d)], c }] }
    }

    /// `g(x_ij)` for one pair.
    pub fn of_pair(g: &Poly1, d: usize, i: usize, j: usize) -> Self {
        let slot = pair_index(i, j, d);
        let terms = g
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(e, &c)| {
                let mut pow = vec![0; pair_count(d)];
                pow[slot] = e as u32;
                PairTerm { pow, c }
            })
            .collect();
        Self { d, terms }
    }

    /// Average of `g(x_ij)` over all pairs.
    pub fn pair_average(g: &Poly1, d: usize) -> Self {
        let pairs = pair_count(d);
        let mut terms = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                terms.extend(Self::of_pair(&g.scale(1.0 / pairs as f64), d, i, j).terms);
            }
        }
        Self { d, terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|t| t.c * t.pow.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product::<f64>()).sum()
    }

    /// `f(1, .., 1)`.
    pub fn diagonal_value(&self) -> f64 {
        self.terms.iter().map(|t| t.c).sum()
    }

    /// Univariate view when `d = 2`.
    pub fn to_poly1(&self) -> Option<Poly1> {
        if self.d != 2 {
            return None;
        }
        let deg = self.terms.iter().map(|t| t.pow[0] as usize).max().unwrap_or(0);
        let mut c = vec![0.0; deg + 1];
        for t in &self.terms {
            c[t.pow[0] as usize] += t.c;
        }
        Some(Poly1::new(c))
    }
}

/// `theta` in radians, or a literal such as `pi/3`, `2pi/5`, `pi`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s = text.trim().to_ascii_lowercase().replace(' ', "");
    if let Ok(x) = s.parse::<f64>() {
        return Ok(x);
    }
    let bad = || Error::Parse(format!("bad angle `{text}`"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().map_err(|_| bad())?),
        None => (s.as_str(), 1.0),
    };
    let coef = num.strip_suffix("pi").ok_or_else(bad)?.trim_end_matches('*');
    let coef = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().map_err(|_| bad())? };
    Ok(coef * PI / den)
}

pub fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::param(format!("angle theta = {theta} must lie in (0, pi)")));
    }
    Ok(())
}

/// Largest value of `f` on `[a, b]` and where it is attained: a grid of
/// 10^4 points, refined by bisection on `f'` wherever the derivative
/// changes sign from positive to nonpositive between nodes.
pub fn max_on_interval(f: &Poly1, a: f64, b: f64) -> (f64, f64) {
    let df = f.derivative();
    let nodes = NONPOSITIVE_GRID;
    let at = |i: usize| if i == nodes - 1 { b } else { a + (b - a) * i as f64 / (nodes - 1) as f64 };
    let mut best = (a, f.eval(a));
    let mut prev_x = a;
    let mut prev_d = df.eval(a);
    for i in 1..nodes {
        let x = at(i);
        let v = f.eval(x);
        if v > best.1 {
            best = (x, v);
        }
        let dx = df.eval(x);
        if prev_d > 0.0 && dx <= 0.0 {
            let (mut lo, mut hi) = (prev_x, x);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if df.eval(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            for c in [lo, hi] {
                let v = f.eval(c);
                if v > best.1 {
                    best = (c, v);
                }
            }
        }
        prev_x = x;
        prev_d = dx;
    }
    best
}

/// `f <= 1e-12` on `[-1, cos theta]`.
pub fn verify_nonpositive(f: &Poly1, theta: f64) -> Result<bool> {
    check_theta(theta)?;
    if f.degree() > MAX_CERTIFICATE_DEGREE {
        return Err(Error::param(format!("certificate degree exceeds {MAX_CERTIFICATE_DEGREE}")));
    }
    Ok(max_on_interval(f, -1.0, theta.cos()).1 <= NONPOSITIVE_TOL)
}

/// Coefficients `f_k` with `f = sum_k f_k G_k^{(n)}`.
pub fn gegenbauer_expand(f: &Poly1, n: u32) -> Result<Vec<f64>> {
    let d = f.degree();
    let mut rest = f.coeffs.clone();
    rest.resize(d + 1, 0.0);
    let mut out = vec![0.0; d + 1];
    for k in (0..=d).rev() {
        let g = coeffs_1d(n, k as u32)?;
        let fk = rest[k] / g.leading();
        for (j, &c) in g.coeffs.iter().enumerate() {
            rest[j] -= fk * c;
        }
        out[k] = fk;
    }
    Ok(out)
}

/// `sum_k f_k G_k^{(n)}` in monomial form.
pub fn gegenbauer_sum(coeffs: &[f64], n: u32) -> Result<Poly1> {
    let mut out = vec![0.0; coeffs.len().max(1)];
    for (k, &fk) in coeffs.iter().enumerate() {
        for (j, &c) in coeffs_1d(n, k as u32)?.coeffs.iter().enumerate() {
            out[j] += fk * c;
        }
    }
    Ok(Poly1::new(out))
}

/// A code problem: dimension, minimal angle, level and certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeProblem {
    pub n: u32,
    pub theta: f64,
    pub m: u32,
    pub f: PairPolynomial,
    pub f0: f64,
}

impl CodeProblem {
    pub fn new(n: u32, theta: f64, m: u32, f: PairPolynomial, f0: f64) -> Result<Self> {
        let p = Self { n, theta, m, f, f0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_theta(self.theta)?;
        if self.f0 <= 0.0 || !self.f0.is_finite() {
            return Err(Error::param("f0 must be positive"));
        }
        if self.m as usize + 2 > self.n as usize {
            return Err(Error::param(format!("level m = {} must satisfy m <= n - 2", self.m)));
        }
        if self.f.d != self.m as usize + 2 {
            return Err(Error::DimensionMismatch { expected: self.m as usize + 2, actual: self.f.d });
        }
        self.f.validate()
    }

    pub fn d(&self) -> u32 {
        self.m + 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn pair_indices() {
        let d = 4;
        let mut seen = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                seen.push(pair_index(i, j, d));
            }
        }
        assert_eq!(seen, (0..6).collect::<Vec<_>>());
        assert_eq!(pair_index(1, 2, 3), 2);
    }

    #[test]
    fn pair_polynomial_eval() {
        let g = Poly1::new(vec![0.0, 1.0, 1.0]);
        let f = PairPolynomial::pair_average(&g, 3);
        let x = [0.2, -0.5, 0.1];
        let expect = (g.eval(0.2) + g.eval(-0.5) + g.eval(0.1)) / 3.0;
        assert_abs_diff_eq!(f.eval(&x), expect, epsilon = 1e-15);
        assert_abs_diff_eq!(f.diagonal_value(), 2.0, epsilon = 1e-15);
        assert_eq!(PairPolynomial::of_pair(&g, 2, 0, 1).to_poly1().unwrap(), g);
        assert!(PairPolynomial::new(3, vec![PairTerm { pow: vec![1], c: 1.0 }]).is_err());
    }

    #[test]
    fn angles() {
        assert_abs_diff_eq!(parse_angle("pi/3").unwrap(), PI / 3.0);
        assert_abs_diff_eq!(parse_angle("2pi/5").unwrap(), 2.0 * PI / 5.0);
        assert_abs_diff_eq!(parse_angle("PI").unwrap(), PI);
        assert_abs_diff_eq!(parse_angle("1.25").unwrap(), 1.25);
        assert!(parse_angle("tau/3").is_err());
        assert!(check_theta(0.0).is_err() && check_theta(PI).is_err());
    }

    #[test]
    fn nonpositive_examples() {
        let tt1 = Poly1::new(vec![0.0, 1.0, 1.0]);
        assert!(verify_nonpositive(&tt1, PI / 2.0).unwrap());
        assert!(!verify_nonpositive(&Poly1::new(vec![1.0, 1.0]), 3.0).unwrap());
        let c = (PI / 3.0).cos();
        let sq = Poly1::new(vec![-c * c, 2.0 * c, -1.0]);
        assert!(verify_nonpositive(&sq, PI / 3.0).unwrap());
        // a narrow bump between grid nodes is still caught
        let x0 = -0.123_456_7;
        let bump = Poly1::new(vec![-x0 * x0 + 1e-10, 2.0 * x0, -1.0]);
        assert!(!verify_nonpositive(&bump, PI / 2.0).unwrap());
    }

    #[test]
    fn expansion_of_tt1() {
        for n in 3..9u32 {
            let f = gegenbauer_expand(&Poly1::new(vec![0.0, 1.0, 1.0]), n).unwrap();
            let nf = n as f64;
            assert_abs_diff_eq!(f[0], 1.0 / nf, epsilon = 1e-15);
            assert_abs_diff_eq!(f[1], 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(f[2], (nf - 1.0) / nf, epsilon = 1e-15);
        }
    }

    #[test]
    fn problem_validation() {
        let f = PairPolynomial::constant(3, 1.0);
        assert!(CodeProblem::new(4, 1.0, 1, f.clone(), 1.0).is_ok());
        assert!(CodeProblem::new(4, 1.0, 1, f.clone(), 0.0).is_err());
        assert!(CodeProblem::new(4, 1.0, 0, f.clone(), 1.0).is_err());
        assert!(CodeProblem::new(2, 1.0, 1, f, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn expand_round_trip(c in proptest::collection::vec(-2.0f64..2.0, 1..10), n in 3u32..10) {
            let f = Poly1::new(c);
            let back = gegenbauer_sum(&gegenbauer_expand(&f, n).unwrap(), n).unwrap();
            for t in [-1.0, -0.3, 0.4, 1.0] {
                prop_assert!((back.eval(t) - f.eval(t)).abs() < 1e-9);
            }
        }

        #[test]
        fn max_dominates_samples(c in proptest::collection::vec(-2.0f64..2.0, 1..8), t in -1.0f64..0.5) {
            let f = Poly1::new(c);
            prop_assert!(max_on_interval(&f, -1.0, 0.5).1 >= f.eval(t) - 1e-12);
        }
    }
}
