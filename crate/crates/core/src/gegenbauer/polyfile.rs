//! JSON form of a polynomial `F(t, u, v)`:
//! `{"n", "m", "tdeg", "coeffs": [{"tpow", "monomials": [{"upow", "vpow", "c"}]}]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{TPoly, UvMonomial, UvPoly};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialEntry {
    pub upow: Vec<u32>,
    pub vpow: Vec<u32>,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TPowerEntry {
    pub tpow: usize,
    pub monomials: Vec<MonomialEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub n: u32,
    pub m: u32,
    pub tdeg: usize,
    pub coeffs: Vec<TPowerEntry>,
}

impl PolynomialFile {
    pub fn from_tpoly(n: u32, p: &TPoly) -> Self {
        let coeffs = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(tpow, c)| TPowerEntry {
                tpow,
                monomials: c
                    .terms()
                    .map(|(mono, c)| MonomialEntry { upow: mono.upow.clone(), vpow: mono.vpow.clone(), c })
                    .collect(),
            })
            .collect();
        Self { n, m: p.nvars() as u32, tdeg: p.coeffs().len() - 1, coeffs }
    }

    pub fn to_tpoly(&self) -> Result<TPoly> {
        let m = self.m as usize;
        let mut coeffs = vec![UvPoly::zero(m); self.tdeg + 1];
        for entry in &self.coeffs {
            if entry.tpow > self.tdeg {
                return Err(Error::Parse(format!("tpow {} exceeds tdeg {}", entry.tpow, self.tdeg)));
            }
            for mono in &entry.monomials {
                if mono.upow.len() != m || mono.vpow.len() != m {
                    return Err(Error::Parse(format!("monomial exponents must have length m = {m}")));
                }
                coeffs[entry.tpow].add_term(UvMonomial { upow: mono.upow.clone(), vpow: mono.vpow.clone() }, mono.c);
            }
        }
        TPoly::new(m, coeffs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polynomial file serializes")
    }
}
