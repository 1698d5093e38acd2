//! Closed-form limits and dimension bounds, plus the exact odd-interval density `β`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::rational::{format_rational, log2_rational, to_f64, Rational};
use crate::sequence::{phi_boundaries, prime};

fn r(n: u64) -> Rational {
    Rational::from(BigInt::from(n))
}

fn pow(base: u64, e: u32) -> Rational {
    Rational::from(BigInt::from(base).pow(e))
}

/// `limsup ρ(n) = 1/(h(h+2))`.
pub fn rho1(h: u64) -> Rational {
    Rational::one() / r(h * (h + 2))
}

/// `liminf ρ(n) = 1/(h²(h+1)(h+2))`.
pub fn rho2(h: u64) -> Rational {
    Rational::one() / r(h * h * (h + 1) * (h + 2))
}

/// `(h+1)² / ((h+1)⁴ - 1)`.
pub fn delta1(h: u64) -> Rational {
    pow(h + 1, 2) / (pow(h + 1, 4) - Rational::one())
}

/// `1 / (h(h+1)((h+1)⁴ - 1))`.
pub fn delta2(h: u64) -> Rational {
    Rational::one() / (r(h * (h + 1)) * (pow(h + 1, 4) - Rational::one()))
}

/// `β(n) = (1/n) Σ_{odd k} |[s_k, t_k] ∩ [0, n-1]|`, exactly.
pub fn beta(h: u64, n: u64) -> Rational {
    assert!(n >= 1, "β is defined for n ≥ 1");
    let mut covered = BigInt::zero();
    for k in (1u32..).step_by(2) {
        let Ok((s, t)) = phi_boundaries(h, k) else { break };
        if s > n - 1 {
            break;
        }
        covered += BigInt::from(t.min(n - 1) - s + 1);
    }
    Rational::new(covered, BigInt::from(n))
}

/// `log2 M` for full-win density `rho`: the per-step growth when a `rho` share
/// of the bets are full wins and the rest are `ν` bets on blocks.
pub fn log2_growth(block_bits: u32, eps: &Rational, rho: &Rational) -> f64 {
    let size = r((1u64 << block_bits) + 1);
    let keep = Rational::one() - eps;
    let win = log2_rational(&(&size * &keep));
    let hedge = log2_rational(&(&size * &keep / r(1u64 << block_bits)));
    let rho = to_f64(rho);
    rho * win + (1.0 - rho) * hedge
}

/// Named closed forms for one `(h, L)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bounds {
    pub h: u64,
    pub block_bits: u32,
    pub rho1: String,
    pub rho2: String,
    pub delta1: String,
    pub delta2: String,
    /// `L / log2(2^L + 1)`.
    pub scale: f64,
    pub adaptive_upper: f64,
    pub adaptive_upper_strong: f64,
    pub oblivious_lower: f64,
    pub oblivious_lower_strong: f64,
    /// `oblivious_lower - adaptive_upper`.
    pub separation: f64,
    /// `1 - 1/p_{h+1}`.
    pub hierarchy: String,
}

pub fn bound_evaluators(h: u64, block_bits: u32) -> Bounds {
    let scale = block_bits as f64 / (((1u64 << block_bits) + 1) as f64).log2();
    let below_one = |x: &Rational| scale * (1.0 - to_f64(x));
    let (r1, r2, d1, d2) = (rho1(h), rho2(h), delta1(h), delta2(h));
    let p = prime(h as usize + 1);
    let hierarchy = Rational::one() - Rational::one() / r(p);
    Bounds {
        h,
        block_bits,
        rho1: format_rational(&r1),
        rho2: format_rational(&r2),
        delta1: format_rational(&d1),
        delta2: format_rational(&d2),
        scale,
        adaptive_upper: below_one(&r1),
        adaptive_upper_strong: below_one(&r2),
        oblivious_lower: below_one(&d1),
        oblivious_lower_strong: below_one(&d2),
        separation: below_one(&d1) - below_one(&r1),
        hierarchy: format_rational(&hierarchy),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn closed_forms_at_h2() {
        assert_eq!(rho1(2), ratio(1, 8));
        assert_eq!(rho2(2), ratio(1, 48));
        assert_eq!(delta1(2), ratio(9, 80));
        assert_eq!(delta2(2), ratio(1, 480));
    }

    #[test]
    fn beta_vanishes_before_first_odd_interval() {
        let (s1, _) = phi_boundaries(2, 1).unwrap();
        for n in 1..=s1 {
            assert_eq!(beta(2, n), Rational::zero());
        }
        assert!(beta(2, s1 + 1) > Rational::zero());
    }

    #[test]
    fn two_head_bounds() {
        let b = bound_evaluators(2, 1);
        assert!((b.adaptive_upper - 0.5521).abs() < 1e-4);
        assert!((b.oblivious_lower - 0.5600).abs() < 1e-4);
        assert!((b.separation - 0.0079).abs() < 1e-4);
        assert_eq!(bound_evaluators(1, 1).hierarchy, "2/3");
    }
}
