use num_bigint::BigUint;
use num_traits::{Signed, Zero};

use crate::alphabet::{Alphabet, Symbol};
use crate::model::BetDistribution;
use crate::rational::{log2_ratio, log2_rational, rational_from_parts, Rational};

/// The capital multiplier `|Σ|·β(q)(b)` for one (row, symbol) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub log2: f64,
    pub num: BigUint,
    pub den: BigUint,
}

impl Factor {
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

/// Precomputed factors of one bet row, plus its `χ_a` target under the run's hedge.
#[derive(Debug, Clone)]
pub struct RowFactors {
    pub factors: Vec<Factor>,
    pub target: Option<Symbol>,
}

impl RowFactors {
    pub fn new(row: &BetDistribution, alphabet: &Alphabet, hedge: Option<&Rational>) -> Self {
        let size = Rational::from_integer((alphabet.size() as i64).into());
        let factors = row
            .probabilities()
            .iter()
            .map(|p| {
                let f = p * &size;
                let num = f.numer().magnitude().clone();
                let den = f.denom().magnitude().clone();
                Factor {
                    log2: log2_ratio(&num, &den),
                    num,
                    den,
                }
            })
            .collect();
        Self {
            factors,
            target: hedge.and_then(|eps| row.confident_target(eps)),
        }
    }
}

/// Capital in the log2 domain (Neumaier-compensated), optionally also as an
/// exact unreduced fraction.
#[derive(Debug, Clone)]
pub struct CapitalLedger {
    sum: f64,
    compensation: f64,
    zero: bool,
    exact: Option<(BigUint, BigUint)>,
}

impl CapitalLedger {
    pub fn new(initial: &Rational, exact: bool) -> Self {
        assert!(!initial.is_negative(), "capital is nonnegative");
        let zero = initial.is_zero();
        Self {
            sum: if zero { 0.0 } else { log2_rational(initial) },
            compensation: 0.0,
            zero,
            exact: exact.then(|| (initial.numer().magnitude().clone(), initial.denom().magnitude().clone())),
        }
    }

    #[inline]
    pub fn apply(&mut self, factor: &Factor) {
        if let Some((num, den)) = &mut self.exact {
            *num *= &factor.num;
            *den *= &factor.den;
        }
        if factor.is_zero() {
            self.zero = true;
        }
        if self.zero {
            return;
        }
        let x = factor.log2;
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// `log2` of the capital; `-inf` once capital is zero.
    pub fn log2(&self) -> f64 {
        if self.zero {
            f64::NEG_INFINITY
        } else {
            self.sum + self.compensation
        }
    }

    pub fn exact(&self) -> Option<Rational> {
        self.exact
            .as_ref()
            .map(|(n, d)| rational_from_parts(n.clone(), d.clone()))
    }

    /// `log2` of the exact capital, computed from the big integers directly.
    pub fn exact_log2(&self) -> Option<f64> {
        self.exact.as_ref().map(|(n, d)| log2_ratio(n, d))
    }
}
