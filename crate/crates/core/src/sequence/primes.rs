use crate::sequence::SequenceError;

/// `p_0 = 1, p_1 = 2, p_2 = 3, …` up to a requested count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    values: Vec<u64>,
}

impl PrimeTable {
    /// Table holding `p_0..=p_k`.
    pub fn up_to_index(k: usize) -> Self {
        let mut values = vec![1u64];
        let mut candidate = 2u64;
        while values.len() <= k {
            if values[1..]
                .iter()
                .take_while(|&&p| p * p <= candidate)
                .all(|&p| !candidate.is_multiple_of(p))
            {
                values.push(candidate);
            }
            candidate += 1;
        }
        Self { values }
    }

    pub fn get(&self, k: usize) -> u64 {
        self.values[k]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.values
    }
}

/// The `k`-th prime, with `p_0 = 1`.
pub fn prime(k: usize) -> u64 {
    PrimeTable::up_to_index(k).get(k)
}

/// Multiplicity of `p_k` in `n`. For `k = 0` (where `p_0 = 1`) the value is 0.
pub fn valuation(k: usize, n: u64) -> Result<u32, SequenceError> {
    if n == 0 {
        return Err(SequenceError::ZeroArgument);
    }
    Ok(multiplicity(prime(k), n))
}

/// Multiplicity of `p` in `n > 0`; 0 when `p == 1`.
pub fn multiplicity(p: u64, mut n: u64) -> u32 {
    if p < 2 {
        return 0;
    }
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        let t = PrimeTable::up_to_index(6);
        assert_eq!(t.as_slice(), &[1, 2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(3, 300).unwrap(), 2);
        assert_eq!(valuation(1, 7).unwrap(), 0);
        assert_eq!(valuation(2, 54).unwrap(), 3);
        assert_eq!(valuation(2, 0), Err(SequenceError::ZeroArgument));
    }
}
