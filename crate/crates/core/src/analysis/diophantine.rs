use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An approximate designed Toffoli: the first leakage condition holds
/// exactly for `m₁`, and `m₂` is the nearest integer to what the second
/// would need.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiophantineCandidate {
    pub m1: u32,
    pub m2: u32,
    pub n: u32,
    /// `ω₂/Ω = √(4m₁²/(2n+1)² − 1)`.
    pub ratio: f64,
    /// `(2n+1)/2 · √(4ω₂²/Ω² + 1) − m₂`; the |0b0⟩ sinc argument misses a
    /// multiple of π by `π·residual`.
    pub residual: f64,
}

/// Proof record that the two leakage conditions have no common integer
/// solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImpossibilityCertificate {
    pub max_m1: u32,
    pub max_m2: u32,
    pub max_n: u32,
    pub triples_checked: u64,
    /// Triples with `16m₁² − 4m₂² = 3(2n+1)²`, the squared form.
    pub exact_solutions_squared_form: u64,
    /// Triples with `16m₁² − 4m₂² = 3(2n+1)`, the linear form.
    pub exact_solutions_linear_form: u64,
    /// Triples where the left side is odd or a right side is even.
    pub parity_violations: u64,
    pub reasoning: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiophantineScan {
    /// Ordered by `n`, then `m₁`.
    pub candidates: Vec<DiophantineCandidate>,
    pub certificate: ImpossibilityCertificate,
}

impl DiophantineScan {
    /// The `k` candidates with smallest |residual| (ties towards small n, m₁).
    pub fn best(&self, k: usize) -> Vec<DiophantineCandidate> {
        let mut c = self.candidates.clone();
        c.sort_by(|a, b| a.residual.abs().total_cmp(&b.residual.abs()).then((a.n, a.m1).cmp(&(b.n, b.m1))));
        c.truncate(k);
        c
    }
}

/// Candidate for one `(m₁, n)`, or `None` when `2m₁ ≤ 2n+1`.
pub fn candidate(m1: u32, n: u32) -> Option<DiophantineCandidate> {
    let q = f64::from(2 * n + 1);
    let x = 4.0 * f64::from(m1).powi(2) / (q * q) - 1.0;
    if x <= 0.0 {
        return None;
    }
    let ratio = x.sqrt();
    let target = 0.5 * q * (4.0 * ratio * ratio + 1.0).sqrt();
    let m2 = target.round().max(1.0);
    Some(DiophantineCandidate { m1, m2: m2 as u32, n, ratio, residual: target - m2 })
}

/// Exhaustive check of `m₁ ≤ max_m1`, `m₂ ≤ max_m2`, `n ≤ max_n`.
pub fn diophantine_scan(max_m1: u32, max_m2: u32, max_n: u32) -> Result<DiophantineScan> {
    if max_m1 == 0 || max_m2 == 0 {
        return Err(Error::InvalidParameter("scan bounds on m₁, m₂ must be ≥ 1".into()));
    }
    let mut triples = 0u64;
    let mut squared = 0u64;
    let mut linear = 0u64;
    let mut parity = 0u64;
    for n in 0..=u64::from(max_n) {
        let q = 2 * n + 1;
        let rhs_sq = 3 * q * q;
        let rhs_lin = 3 * q;
        for m1 in 1..=u64::from(max_m1) {
            for m2 in 1..=u64::from(max_m2) {
                triples += 1;
                let lhs = 16 * (m1 * m1) as i64 - 4 * (m2 * m2) as i64;
                if lhs == rhs_sq as i64 {
                    squared += 1;
                }
                if lhs == rhs_lin as i64 {
                    linear += 1;
                }
                if lhs.rem_euclid(2) != 0 || rhs_sq % 2 != 1 || rhs_lin % 2 != 1 {
                    parity += 1;
                }
            }
        }
    }
    let mut candidates = Vec::new();
    for n in 0..=max_n {
        for m1 in 1..=max_m1 {
            if let Some(c) = candidate(m1, n) {
                candidates.push(c);
            }
        }
    }
    let reasoning = "Both leakage conditions together require 16m₁² − 4m₂² = 3(2n+1)² \
        (squaring the second condition). 16m₁² − 4m₂² is even for all integers, while \
        3(2n+1)² and 3(2n+1) are odd, so neither form has an integer solution."
        .to_string();
    Ok(DiophantineScan {
        candidates,
        certificate: ImpossibilityCertificate {
            max_m1,
            max_m2,
            max_n,
            triples_checked: triples,
            exact_solutions_squared_form: squared,
            exact_solutions_linear_form: linear,
            parity_violations: parity,
            reasoning,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m1_five_candidate() {
        let c = candidate(5, 0).unwrap();
        assert!((c.ratio - 99f64.sqrt()).abs() < 1e-14);
        assert_eq!(c.m2, 10);
        assert!((c.residual + 0.0375).abs() < 2e-3);
    }

    #[test]
    fn smallest_case_is_kept() {
        let scan = diophantine_scan(3, 6, 0).unwrap();
        assert_eq!(scan.candidates[0].m1, 1);
        assert!(scan.candidates[0].residual.abs() > 0.1);
        assert!(scan.candidates.windows(2).all(|w| (w[0].n, w[0].m1) < (w[1].n, w[1].m1)));
    }

    #[test]
    fn candidate_requires_two_m1_above_q() {
        assert!(candidate(1, 1).is_none());
        assert!(candidate(2, 1).is_some());
    }

    #[test]
    fn small_scan_has_no_solutions() {
        let scan = diophantine_scan(20, 40, 5).unwrap();
        let c = &scan.certificate;
        assert_eq!(c.triples_checked, 20 * 40 * 6);
        assert_eq!(c.exact_solutions_squared_form + c.exact_solutions_linear_form + c.parity_violations, 0);
        assert!(diophantine_scan(0, 1, 0).is_err());
    }
}
