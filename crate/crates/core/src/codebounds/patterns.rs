use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PATTERN_DEGREE: u32 = 12;

/// Brute-force enumeration is refused above this many tuples.
pub const MAX_BRUTE_TUPLES: u64 = 10_000_000;

/// Multiplicities `i_1 >= .. >= i_k > 0` of the equal entries of a `d`-tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct PartitionPattern {
    parts: Vec<u32>,
}

impl PartitionPattern {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::param("pattern needs at least one part"));
        }
        if parts.contains(&0) {
            return Err(Error::param("pattern parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::param("pattern parts must be weakly decreasing"));
        }
        Ok(Self { parts })
    }

    /// The single-part pattern `(d)`.
    pub fn full(d: u32) -> Self {
        Self { parts: vec![d] }
    }

    /// The all-distinct pattern `(1, .., 1)`.
    pub fn distinct(d: u32) -> Self {
        Self { parts: vec![1; d as usize] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn d(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of distinct values.
    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// Pairs `i < j` whose entries are equal.
    pub fn equal_pairs(&self) -> u32 {
        self.parts.iter().map(|&p| p * (p - 1) / 2).sum()
    }
}

impl TryFrom<Vec<u32>> for PartitionPattern {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<PartitionPattern> for Vec<u32> {
    fn from(p: PartitionPattern) -> Self {
        p.parts
    }
}

impl fmt::Display for PartitionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for PartitionPattern {
    type Err = Error;

    /// Accepts `(2,1)`, `2,1` or `2 1`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<u32>().map_err(|_| Error::Parse(format!("bad pattern `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

/// All partitions of `d`, starting from `(d)` and ending at `(1, .., 1)`.
pub fn enumerate_patterns(d: u32) -> Result<Vec<PartitionPattern>> {
    if !(1..=MAX_PATTERN_DEGREE).contains(&d) {
        return Err(Error::param(format!("pattern degree d = {d} must lie in 1..={MAX_PATTERN_DEGREE}")));
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    partitions_into(d, d, &mut cur, &mut out);
    Ok(out)
}

fn partitions_into(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<PartitionPattern>) {
    if rest == 0 {
        out.push(PartitionPattern { parts: cur.clone() });
        return;
    }
    for p in (1..=max.min(rest)).rev() {
        cur.push(p);
        partitions_into(rest - p, p, cur, out);
        cur.pop();
    }
}

/// `psi(J)`: sizes of the groups of equal entries, sorted decreasingly.
pub fn pattern_of<T: Ord + Copy>(j: &[T]) -> Result<PartitionPattern> {
    if j.is_empty() {
        return Err(Error::param("index vector is empty"));
    }
    let mut counts: BTreeMap<T, u32> = BTreeMap::new();
    for &x in j {
        *counts.entry(x).or_default() += 1;
    }
    let mut parts: Vec<u32> = counts.into_values().collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(PartitionPattern { parts })
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Set partitions of `{1..d}` with block sizes `omega`.
pub fn set_partitions(omega: &PartitionPattern) -> u128 {
    let mut denom: u128 = omega.parts.iter().map(|&p| factorial(p)).product();
    let mut run = 1u32;
    for w in omega.parts.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    denom *= factorial(run);
    factorial(omega.d()) / denom
}

/// `q~_omega(N)`: tuples in `{1..N}^d` with pattern `omega`.
pub fn q_tilde(omega: &PartitionPattern, n: u64) -> u128 {
    let k = omega.k() as u64;
    if n < k {
        return 0;
    }
    let falling: u128 = (0..k).map(|i| (n - i) as u128).product();
    set_partitions(omega) * falling
}

/// `q_omega(N) = q~_omega(N) / N`, which is always an integer.
pub fn q_omega(omega: &PartitionPattern, n: u64) -> Result<u128> {
    if n == 0 {
        return Err(Error::param("N must be at least 1"));
    }
    Ok(q_tilde(omega, n) / n as u128)
}

/// `q_omega(N)` as a real, for the polynomial inequality.
pub fn q_omega_f64(omega: &PartitionPattern, n: f64) -> f64 {
    let k = omega.k();
    let falling: f64 = (1..k).map(|i| n - i as f64).product();
    set_partitions(omega) as f64 * falling
}

/// `q~_omega(N)` for every pattern of `W_d`, by enumerating `{1..N}^d`.
pub fn q_tilde_brute(d: u32, n: u64) -> Result<BTreeMap<PartitionPattern, u128>> {
    if d == 0 || n == 0 {
        return Err(Error::param("brute force needs d >= 1 and N >= 1"));
    }
    let total = n.checked_pow(d).filter(|&t| t <= MAX_BRUTE_TUPLES);
    let Some(total) = total else {
        return Err(Error::param(format!("N^d exceeds {MAX_BRUTE_TUPLES}")));
    };
    let mut counts = BTreeMap::new();
    let mut j = vec![0u64; d as usize];
    for idx in 0..total {
        let mut rest = idx;
        for slot in j.iter_mut() {
            *slot = rest % n;
            rest /= n;
        }
        *counts.entry(pattern_of(&j)?).or_insert(0u128) += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pat(s: &str) -> PartitionPattern {
        s.parse().unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_patterns(2).unwrap(), vec![pat("(2)"), pat("(1,1)")]);
        assert_eq!(enumerate_patterns(3).unwrap(), vec![pat("(3)"), pat("(2,1)"), pat("(1,1,1)")]);
        assert_eq!(enumerate_patterns(4).unwrap().len(), 5);
        let counts: Vec<usize> = (1..=12).map(|d| enumerate_patterns(d).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
        assert!(enumerate_patterns(0).is_err());
        assert!(enumerate_patterns(13).is_err());
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(pattern_of(&[7, 7, 7]).unwrap(), pat("3"));
        assert_eq!(pattern_of(&[1, 2, 1, 3]).unwrap(), pat("2,1,1"));
        assert_eq!(pattern_of(&[4, 1, 9, 2, 5]).unwrap(), PartitionPattern::distinct(5));
    }

    #[test]
    fn pattern_validation() {
        assert!(PartitionPattern::new(vec![]).is_err());
        assert!(PartitionPattern::new(vec![1, 2]).is_err());
        assert!(PartitionPattern::new(vec![2, 0]).is_err());
        assert!("(2,x)".parse::<PartitionPattern>().is_err());
        assert_eq!(pat("(3,1)").to_string(), "(3,1)");
        let json = serde_json::to_string(&pat("2,2")).unwrap();
        assert_eq!(json, "[2,2]");
        assert!(serde_json::from_str::<PartitionPattern>("[1,2]").is_err());
    }

    #[test]
    fn closed_forms() {
        for n in 1..20u64 {
            assert_eq!(q_omega(&pat("2"), n).unwrap(), 1);
            assert_eq!(q_omega(&pat("1,1"), n).unwrap(), (n - 1) as u128);
            assert_eq!(q_omega(&pat("3"), n).unwrap(), 1);
            assert_eq!(q_omega(&pat("2,1"), n).unwrap(), 3 * (n - 1) as u128);
            assert_eq!(q_omega(&pat("1,1,1"), n).unwrap(), ((n - 1) * n.saturating_sub(2)) as u128);
            assert_eq!(q_omega(&pat("3,1"), n).unwrap(), 4 * (n - 1) as u128);
            assert_eq!(q_omega(&pat("2,2"), n).unwrap(), 3 * (n - 1) as u128);
            assert_eq!(q_omega(&pat("2,1,1"), n).unwrap(), (6 * (n - 1) * n.saturating_sub(2)) as u128);
        }
    }

    #[test]
    fn brute_force_agrees() {
        for d in 1..=4 {
            for n in 1..=8u64 {
                let brute = q_tilde_brute(d, n).unwrap();
                let mut total = 0u128;
                for omega in enumerate_patterns(d).unwrap() {
                    let closed = q_tilde(&omega, n);
                    assert_eq!(brute.get(&omega).copied().unwrap_or(0), closed, "d={d} N={n} {omega}");
                    total += q_omega(&omega, n).unwrap();
                }
                assert_eq!(total, (n as u128).pow(d - 1));
            }
        }
        assert!(q_tilde_brute(8, 10).is_err());
    }

    #[test]
    fn real_form_matches() {
        for omega in enumerate_patterns(5).unwrap() {
            for n in 1..12u64 {
                assert_eq!(q_omega_f64(&omega, n as f64), q_omega(&omega, n).unwrap() as f64);
            }
        }
    }

    proptest! {
        #[test]
        fn identity_sum(d in 1u32..=12, n in 1u64..200) {
            let total: u128 = enumerate_patterns(d).unwrap().iter().map(|w| q_omega(w, n).unwrap()).sum();
            prop_assert_eq!(total, (n as u128).pow(d - 1));
        }

        #[test]
        fn pattern_of_sums_to_length(j in proptest::collection::vec(0u8..5, 1..10)) {
            let p = pattern_of(&j).unwrap();
            prop_assert_eq!(p.d() as usize, j.len());
        }
    }
}
