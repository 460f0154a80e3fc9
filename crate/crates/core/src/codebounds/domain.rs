use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::{check_theta, pair_count, pair_index, CodeProblem};
use super::patterns::{enumerate_patterns, pattern_of, PartitionPattern};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::symlin::dot;

/// Entries within this distance of 1 count as coincident points.
pub const COINCIDENCE_TOL: f64 = 1e-12;
pub const MAX_DOMAIN_POINTS: u32 = 6;
const ASCENT_STEPS: usize = 64;
const START_ATTEMPTS: usize = 64;

/// `psi(J(x))` for `x` in `X(theta)`, entries in pair order.
pub fn pattern_of_x(x: &[f64], d: usize, theta: f64) -> Result<PartitionPattern> {
    check_theta(theta)?;
    if x.len() != pair_count(d) {
        return Err(Error::DimensionMismatch { expected: pair_count(d), actual: x.len() });
    }
    let c = theta.cos();
    for (idx, &v) in x.iter().enumerate() {
        let one = (v - 1.0).abs() <= COINCIDENCE_TOL;
        if !one && !(-1.0 - COINCIDENCE_TOL..=c + COINCIDENCE_TOL).contains(&v) {
            return Err(Error::param(format!("entry {idx} = {v} is outside X(theta)")));
        }
    }
    let j: Vec<usize> = (0..d)
        .map(|k| (0..k).find(|&i| (x[pair_index(i, k, d)] - 1.0).abs() <= COINCIDENCE_TOL).unwrap_or(k))
        .collect();
    pattern_of(&j)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BEstimate {
    pub omega: PartitionPattern,
    /// Best value of `f` found on `D_omega(theta)`; a lower bound on `B_omega`.
    pub value: f64,
    /// Where it was found, in pair order.
    pub x: Vec<f64>,
    pub evaluations: u64,
}

/// Random search with local coordinate ascent for `sup f` over
/// `D_omega(theta)`. Each round draws a random assignment of the `d` points to
/// the groups of `omega` and random group directions in `R^k`, then moves one
/// direction at a time while `f` increases. The search is a fixed stream cut
/// off after `budget` evaluations of `f`, so a larger budget never returns a
/// smaller value.
pub fn estimate_b(omega: &PartitionPattern, problem: &CodeProblem, budget: u64, seed: u64) -> Result<BEstimate> {
    problem.validate()?;
    let d = problem.d();
    if d > MAX_DOMAIN_POINTS {
        return Err(Error::param(format!("B estimation supports d <= {MAX_DOMAIN_POINTS}")));
    }
    if omega.d() != d {
        return Err(Error::DimensionMismatch { expected: d as usize, actual: omega.d() as usize });
    }
    let d = d as usize;
    let f = &problem.f;
    if omega.k() == 1 {
        let x = vec![1.0; pair_count(d)];
        return Ok(BEstimate { omega: omega.clone(), value: f.eval(&x), x, evaluations: 1 });
    }
    let k = omega.k();
    let c = problem.theta.cos();
    if c < -1.0 / (k as f64 - 1.0) {
        return Err(Error::InfeasiblePattern(format!(
            "{k} distinct points cannot have pairwise inner products <= {c}"
        )));
    }
    if budget == 0 {
        return Err(Error::param("budget must be positive"));
    }

    let mut rng = SplitMix64::new(seed);
    let mut best = BEstimate { omega: omega.clone(), value: f64::NEG_INFINITY, x: Vec::new(), evaluations: 0 };
    let mut evals = 0u64;
    'rounds: loop {
        let groups = random_assignment(omega, &mut rng);
        let mut dirs = random_start(k, c, &mut rng);
        let mut x = entries(&groups, &dirs, d);
        let mut value = f.eval(&x);
        evals += 1;
        if value > best.value {
            best.value = value;
            best.x = x.clone();
        }
        if evals >= budget {
            break;
        }
        let mut step = 0.5;
        for _ in 0..ASCENT_STEPS {
            let a = rng.below(k);
            let old = dirs[a].clone();
            let mut cand: Vec<f64> = old.iter().map(|v| v + step * rng.gaussian()).collect();
            let norm = dot(&cand, &cand).sqrt();
            cand.iter_mut().for_each(|v| *v /= norm);
            dirs[a] = cand;
            if feasible(&dirs, c) {
                let trial = entries(&groups, &dirs, d);
                let v = f.eval(&trial);
                evals += 1;
                if v > value {
                    value = v;
                    x = trial;
                    if v > best.value {
                        best.value = v;
                        best.x = x.clone();
                    }
                } else {
                    dirs[a] = old;
                    step = (step * 0.8f64).max(1e-7);
                }
                if evals >= budget {
                    break 'rounds;
                }
            } else {
                dirs[a] = old;
                step = (step * 0.8f64).max(1e-7);
            }
        }
    }
    best.evaluations = evals;
    Ok(best)
}

/// [`estimate_b`] for every pattern of `W_{m+2}`, in enumeration order.
pub fn estimate_all(problem: &CodeProblem, budget: u64, seed: u64) -> Result<Vec<BEstimate>> {
    let patterns = enumerate_patterns(problem.d())?;
    patterns
        .par_iter()
        .enumerate()
        .map(|(i, w)| estimate_b(w, problem, budget, SplitMix64::derive(seed, i as u64).next_u64()))
        .collect()
}

/// Group label of each of the `d` points, group sizes given by `omega`.
fn random_assignment(omega: &PartitionPattern, rng: &mut SplitMix64) -> Vec<usize> {
    let d = omega.d() as usize;
    let mut order: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        order.swap(i, rng.below(i + 1));
    }
    let mut labels = vec![0; d];
    let mut pos = 0;
    for (g, &size) in omega.parts().iter().enumerate() {
        for _ in 0..size {
            labels[order[pos]] = g;
            pos += 1;
        }
    }
    labels
}

fn feasible(dirs: &[Vec<f64>], c: f64) -> bool {
    (0..dirs.len()).all(|a| (a + 1..dirs.len()).all(|b| dot(&dirs[a], &dirs[b]) <= c))
}

/// Rejection sampling, falling back to the regular simplex.
fn random_start(k: usize, c: f64, rng: &mut SplitMix64) -> Vec<Vec<f64>> {
    for _ in 0..START_ATTEMPTS {
        let dirs: Vec<Vec<f64>> = (0..k).map(|_| rng.unit_vector(k)).collect();
        if feasible(&dirs, c) {
            return dirs;
        }
    }
    let kf = k as f64;
    let norm = ((kf - 1.0) / kf).sqrt();
    (0..k).map(|a| (0..k).map(|b| (f64::from(a == b) - 1.0 / kf) / norm).collect()).collect()
}

fn entries(groups: &[usize], dirs: &[Vec<f64>], d: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity(pair_count(d));
    for i in 0..d {
        for j in i + 1..d {
            let (a, b) = (groups[i], groups[j]);
            x.push(if a == b { 1.0 } else { dot(&dirs[a], &dirs[b]).clamp(-1.0, 1.0) });
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebounds::certificate::PairPolynomial;
    use crate::poly::Poly1;
    use std::f64::consts::PI;

    fn pat(s: &str) -> PartitionPattern {
        s.parse().unwrap()
    }

    #[test]
    fn pattern_of_x_examples() {
        let t = PI / 3.0;
        assert_eq!(pattern_of_x(&[1.0; 6], 4, t).unwrap(), pat("4"));
        assert_eq!(pattern_of_x(&[0.1, -0.2, 0.3], 3, t).unwrap(), pat("1,1,1"));
        assert_eq!(pattern_of_x(&[1.0, 0.2, 0.2], 3, t).unwrap(), pat("2,1"));
        assert_eq!(pattern_of_x(&[0.0, 0.0, 1.0, 0.0, 0.0, 0.0], 4, t).unwrap(), pat("2,1,1"));
        assert!(pattern_of_x(&[0.9, 0.0, 0.0], 3, t).is_err());
        assert!(pattern_of_x(&[0.0, 0.0], 3, t).is_err());
    }

    fn problem(g: &Poly1, m: u32, theta: f64) -> CodeProblem {
        CodeProblem::new(m + 3, theta, m, PairPolynomial::pair_average(g, m as usize + 2), 1.0).unwrap()
    }

    #[test]
    fn full_pattern_is_exact() {
        let g = Poly1::new(vec![0.3, 1.0, 1.0]);
        let p = problem(&g, 1, 1.2);
        let e = estimate_b(&pat("3"), &p, 10, 1).unwrap();
        assert_eq!(e.value, p.f.diagonal_value());
        assert_eq!(e.evaluations, 1);
    }

    #[test]
    fn constant_function() {
        let p = CodeProblem::new(4, 1.0, 1, PairPolynomial::constant(3, 2.5), 1.0).unwrap();
        for w in enumerate_patterns(3).unwrap() {
            assert_eq!(estimate_b(&w, &p, 200, 3).unwrap().value, 2.5);
        }
    }

    #[test]
    fn linear_approaches_cos_theta() {
        let theta = 1.1;
        let p = problem(&Poly1::new(vec![0.0, 1.0]), 0, theta);
        let small = estimate_b(&pat("1,1"), &p, 50, 9).unwrap();
        let large = estimate_b(&pat("1,1"), &p, 20_000, 9).unwrap();
        assert!(large.value >= small.value);
        assert!(large.value <= theta.cos() + 1e-15);
        assert!((large.value - theta.cos()).abs() < 1e-3, "{}", large.value);
    }

    #[test]
    fn budget_monotone() {
        let g = Poly1::new(vec![0.1, -0.4, 1.0, 0.7]);
        let p = problem(&g, 2, PI / 3.0);
        let mut last = f64::NEG_INFINITY;
        for budget in [1, 10, 100, 1000, 5000] {
            let e = estimate_b(&pat("2,1,1"), &p, budget, 4).unwrap();
            assert!(e.value >= last);
            assert_eq!(pattern_of_x(&e.x, 4, p.theta).unwrap(), pat("2,1,1"));
            last = e.value;
        }
    }

    #[test]
    fn infeasible_pattern() {
        let p = problem(&Poly1::new(vec![0.0, 1.0]), 2, 2.5);
        assert!(matches!(estimate_b(&pat("1,1,1,1"), &p, 100, 1), Err(Error::InfeasiblePattern(_))));
        assert!(estimate_b(&pat("2,2"), &p, 100, 1).is_ok());
    }

    #[test]
    fn all_patterns_parallel_deterministic() {
        let p = problem(&Poly1::new(vec![0.0, 1.0, 1.0]), 1, PI / 2.0);
        let a = estimate_all(&p, 500, 2).unwrap();
        let b = estimate_all(&p, 500, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        // samples of the (1,1,1) domain never exceed the certified bound 0
        assert!(a[2].value <= 1e-12);
    }
}
