use crate::alphabet::Symbol;
use crate::sequence::SymbolSource;
use crate::structure::IndexSet;

/// `S[A]` over `[0, horizon]`: the symbols of `S` on `A`, the placeholder elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskedString {
    horizon: u64,
    known: IndexSet,
    values: Vec<Symbol>,
}

/// Symbol stored at positions outside the known set.
pub const PLACEHOLDER: Symbol = 0;

impl MaskedString {
    /// Members of `known` beyond `horizon` are dropped.
    pub fn from_source(seq: &dyn SymbolSource, known: &IndexSet, horizon: u64) -> Self {
        let known = known.clip(0, horizon);
        let mut values = vec![PLACEHOLDER; horizon as usize + 1];
        for i in known.iter() {
            values[i as usize] = seq.symbol(i);
        }
        Self { horizon, known, values }
    }

    /// From `Some` / `None` per position.
    pub fn from_options(values: &[Option<Symbol>]) -> Self {
        assert!(!values.is_empty(), "a masked string covers at least index 0");
        let known = IndexSet::from_points(
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| v.is_some())
                .map(|(i, _)| i as u64),
        );
        Self {
            horizon: values.len() as u64 - 1,
            known,
            values: values.iter().map(|v| v.unwrap_or(PLACEHOLDER)).collect(),
        }
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn known(&self) -> &IndexSet {
        &self.known
    }

    pub fn get(&self, i: u64) -> Option<Symbol> {
        self.known.contains(i).then(|| self.values[i as usize])
    }

    /// The raw string including placeholders.
    pub fn raw(&self) -> &[Symbol] {
        &self.values
    }

    pub fn to_options(&self) -> Vec<Option<Symbol>> {
        (0..=self.horizon).map(|i| self.get(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::sequence::SymbolSequence;

    #[test]
    fn placeholders_outside_known_set() {
        let seq = SymbolSequence::from_symbols(Alphabet::binary(), &[1, 1, 0, 1, 1]).unwrap();
        let m = MaskedString::from_source(&seq, &IndexSet::from_points([0, 3, 99]), 4);
        assert_eq!(m.raw(), &[1, 0, 0, 1, 0]);
        assert_eq!(m.get(1), None);
        assert_eq!(m.get(3), Some(1));
        assert_eq!(m.known().intervals(), &[(0, 0), (3, 3)]);
        assert_eq!(MaskedString::from_options(&m.to_options()), m);
    }
}
