use num_bigint::BigInt;

use crate::engine::{EngineError, RunTrace};
use crate::rational::{format_rational, Rational};

/// `ρ(n)` = full wins / `n` at every checkpoint with `n ≥ 1`.
pub fn rho_stat(trace: &RunTrace, hedge: &Rational) -> Result<Vec<(u64, Rational)>, EngineError> {
    let requested = format_rational(hedge);
    if trace.hedge.as_deref() != Some(requested.as_str()) {
        return Err(EngineError::HedgeMismatch {
            recorded: trace.hedge.clone().unwrap_or_else(|| "none".into()),
            requested,
        });
    }
    Ok(trace
        .checkpoints
        .iter()
        .filter(|c| c.n > 0)
        .map(|c| (c.n, Rational::new(BigInt::from(c.full_wins), BigInt::from(c.n))))
        .collect())
}

/// `log_{|Σ|} d_G(S[0..n-1]) / n` at every checkpoint with `n ≥ 1`.
pub fn empirical_exponent(trace: &RunTrace) -> Vec<(u64, f64)> {
    let log2_alphabet = (trace.alphabet_size as f64).log2();
    trace
        .checkpoints
        .iter()
        .filter(|c| c.n > 0)
        .map(|c| (c.n, c.log2_capital / (c.n as f64 * log2_alphabet)))
        .collect()
}

/// Per-step `log2` growth `log2 d_G / n` at checkpoint `n`.
pub fn growth_rate(trace: &RunTrace, n: u64) -> Result<f64, EngineError> {
    let cp = trace.at(n).ok_or(EngineError::TraceTooShort(n))?;
    Ok(cp.log2_capital / n as f64)
}

/// Finite-horizon success evidence for one tracked `s`: `log2 d^{(s)}` strictly
/// increases across the last three of the given checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessEvidence {
    pub s: f64,
    pub values: Vec<(u64, f64)>,
    pub increasing: bool,
}

pub fn success_evidence(trace: &RunTrace, s_index: usize, at: &[u64]) -> Result<SuccessEvidence, EngineError> {
    let s = *trace
        .s_values
        .get(s_index)
        .ok_or_else(|| EngineError::Schedule(format!("no tracked s with index {s_index}")))?;
    let values = at
        .iter()
        .map(|&n| {
            trace
                .at(n)
                .map(|c| (n, c.log2_s[s_index]))
                .ok_or(EngineError::TraceTooShort(n))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let tail = &values[values.len().saturating_sub(3)..];
    let increasing = tail.len() == 3 && tail.windows(2).all(|w| w[1].1 > w[0].1);
    Ok(SuccessEvidence { s, values, increasing })
}
