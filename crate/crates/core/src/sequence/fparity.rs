//! Index structure of the `F_{h+1}` family: multiples of `p = p_{h+1}` hold the
//! XOR of `F[q·p_1], …, F[q·p_h]`; other positions copy the base sequence.

use crate::sequence::primes::PrimeTable;

#[derive(Debug, Clone)]
pub struct FLayout {
    h: usize,
    primes: PrimeTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FIndex {
    Zero,
    /// `n = q·p_{h+1}`, `q ≥ 1`.
    Parity {
        q: u64,
    },
    /// `n = q·p_{h+1} + r`, `0 < r < p_{h+1}`: copies `S[q·(p_{h+1}-1) + r]`.
    Copy {
        base: u64,
    },
}

impl FLayout {
    pub fn new(h: usize) -> Self {
        assert!(h >= 1, "F family needs h ≥ 1");
        Self {
            h,
            primes: PrimeTable::up_to_index(h + 1),
        }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// `p_{h+1}`.
    pub fn modulus(&self) -> u64 {
        self.primes.get(self.h + 1)
    }

    /// `p_k` for `k ≤ h+1`.
    pub fn prime(&self, k: usize) -> u64 {
        self.primes.get(k)
    }

    pub fn classify(&self, n: u64) -> FIndex {
        let p = self.modulus();
        let (q, r) = (n / p, n % p);
        match (q, r) {
            (0, 0) => FIndex::Zero,
            (_, 0) => FIndex::Parity { q },
            _ => FIndex::Copy { base: q * (p - 1) + r },
        }
    }

    pub fn parents(&self, n: u64) -> Vec<u64> {
        match self.classify(n) {
            FIndex::Parity { q } => (1..=self.h).map(|k| q * self.prime(k)).collect(),
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_examples() {
        let f = FLayout::new(2);
        assert_eq!(f.modulus(), 5);
        assert_eq!(f.classify(0), FIndex::Zero);
        assert_eq!(f.parents(5), vec![2, 3]);
        assert_eq!(f.classify(7), FIndex::Copy { base: 6 });
        assert_eq!(f.parents(300), vec![120, 180]);
        let f1 = FLayout::new(1);
        assert_eq!(f1.parents(9), vec![6]);
    }
}
