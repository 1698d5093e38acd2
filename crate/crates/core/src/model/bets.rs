use num_traits::{One, Signed, Zero};

use crate::alphabet::{Alphabet, Symbol};
use crate::rational::{format_rational, Rational};

/// A betting row: the fraction of current capital placed on each symbol.
///
/// Rows are stored as given; [`BetDistribution::is_stochastic`] checks the
/// simplex constraint exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BetDistribution {
    probabilities: Vec<Rational>,
}

impl BetDistribution {
    pub fn new(probabilities: Vec<Rational>) -> Self {
        Self { probabilities }
    }

    pub fn uniform(alphabet: &Alphabet) -> Self {
        let n = alphabet.size();
        Self::new(vec![crate::rational::ratio(1, n as i64); n])
    }

    /// All capital on one symbol.
    pub fn point(alphabet: &Alphabet, symbol: Symbol) -> Self {
        let mut p = vec![Rational::zero(); alphabet.size()];
        p[symbol as usize] = Rational::one();
        Self::new(p)
    }

    /// `χ_a`: `1-ε` on `a`, the remaining `ε` split evenly over the other symbols.
    pub fn confident(alphabet: &Alphabet, target: Symbol, eps: &Rational) -> Self {
        let others = Rational::from_integer((alphabet.size() as i64 - 1).into());
        let rest = eps / others;
        let p = alphabet
            .symbols()
            .map(|b| {
                if b == target {
                    Rational::one() - eps
                } else {
                    rest.clone()
                }
            })
            .collect();
        Self::new(p)
    }

    /// `ν`: `ε` on `$`, `(1-ε)/2^L` on every block.
    pub fn hedged(alphabet: &Alphabet, eps: &Rational) -> Self {
        let dollar = alphabet.dollar().expect("hedged bet needs the $ marker");
        let share = (Rational::one() - eps) / Rational::from_integer((alphabet.block_count() as i64).into());
        let p = alphabet
            .symbols()
            .map(|b| if b == dollar { eps.clone() } else { share.clone() })
            .collect();
        Self::new(p)
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn get(&self, symbol: Symbol) -> &Rational {
        &self.probabilities[symbol as usize]
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn sum(&self) -> Rational {
        self.probabilities.iter().fold(Rational::zero(), |acc, p| acc + p)
    }

    pub fn is_stochastic(&self) -> bool {
        self.probabilities.iter().all(|p| !p.is_negative()) && self.sum().is_one()
    }

    /// If this row is exactly `χ_a` for hedge `eps`, returns `a`.
    pub fn confident_target(&self, eps: &Rational) -> Option<Symbol> {
        let n = self.len();
        if n < 2 {
            return None;
        }
        let high = Rational::one() - eps;
        let low = eps / Rational::from_integer(((n - 1) as i64).into());
        let mut target = None;
        for (idx, p) in self.probabilities.iter().enumerate() {
            if *p == high && target.is_none() {
                target = Some(idx as Symbol);
            } else if *p != low {
                return None;
            }
        }
        target
    }

    pub fn spell(&self) -> String {
        self.probabilities
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(" ")
    }
}
