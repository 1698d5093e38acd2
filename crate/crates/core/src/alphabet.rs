//! Symbol alphabets: L-bit blocks, optionally extended with the `$` marker.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A symbol index. Blocks `{0,1}^L` map to `0..2^L` in lexicographic order and
/// `$` (when present) is `2^L`.
pub type Symbol = u8;

/// Largest supported block width. `2^7 + 1` still fits a byte per symbol.
pub const MAX_BLOCK_BITS: u8 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    block_bits: u8,
    has_dollar: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("block width {0} outside supported range 1..={MAX_BLOCK_BITS}")]
pub struct BlockWidthError(pub u32);

impl Alphabet {
    pub fn new(block_bits: u32, has_dollar: bool) -> Result<Self, BlockWidthError> {
        if block_bits == 0 || block_bits > MAX_BLOCK_BITS as u32 {
            return Err(BlockWidthError(block_bits));
        }
        Ok(Self {
            block_bits: block_bits as u8,
            has_dollar,
        })
    }

    /// `{0,1}`.
    pub fn binary() -> Self {
        Self {
            block_bits: 1,
            has_dollar: false,
        }
    }

    /// `{0,1}^L ∪ {$}`.
    pub fn with_dollar(block_bits: u32) -> Result<Self, BlockWidthError> {
        Self::new(block_bits, true)
    }

    pub fn block_bits(&self) -> u32 {
        self.block_bits as u32
    }

    pub fn has_dollar(&self) -> bool {
        self.has_dollar
    }

    /// Number of L-bit blocks, `2^L`.
    pub fn block_count(&self) -> usize {
        1usize << self.block_bits
    }

    pub fn size(&self) -> usize {
        self.block_count() + usize::from(self.has_dollar)
    }

    pub fn dollar(&self) -> Option<Symbol> {
        self.has_dollar.then(|| self.block_count() as Symbol)
    }

    pub fn is_dollar(&self, symbol: Symbol) -> bool {
        self.has_dollar && symbol as usize == self.block_count()
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        (symbol as usize) < self.size()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.size()).map(|s| s as Symbol)
    }

    /// Bit-block spelling (`"01"`), or `"$"` for the marker.
    pub fn spell(&self, symbol: Symbol) -> String {
        if self.is_dollar(symbol) {
            return "$".to_string();
        }
        let width = self.block_bits as usize;
        format!("{:0width$b}", symbol, width = width)
    }

    /// Inverse of [`Alphabet::spell`].
    pub fn parse_symbol(&self, text: &str) -> Option<Symbol> {
        if text == "$" {
            return self.dollar();
        }
        if text.len() != self.block_bits as usize || !text.bytes().all(|b| b == b'0' || b == b'1') {
            return None;
        }
        u8::from_str_radix(text, 2).ok()
    }

    /// Number of distinct `h`-tuples of symbols, if it fits in `usize`.
    pub fn tuple_count(&self, heads: usize) -> Option<usize> {
        let mut total = 1usize;
        for _ in 0..heads {
            total = total.checked_mul(self.size())?;
        }
        Some(total)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{0,1}}^{}", self.block_bits)?;
        if self.has_dollar {
            write!(f, " ∪ {{$}}")?;
        }
        Ok(())
    }
}

/// Encodes a tuple of symbols as a mixed-radix index (first symbol most significant).
pub fn tuple_index(alphabet: &Alphabet, tuple: &[Symbol]) -> usize {
    let base = alphabet.size();
    tuple.iter().fold(0usize, |acc, &s| acc * base + s as usize)
}

/// Inverse of [`tuple_index`].
pub fn tuple_from_index(alphabet: &Alphabet, mut index: usize, heads: usize) -> Vec<Symbol> {
    let base = alphabet.size();
    let mut tuple = vec![0; heads];
    for slot in tuple.iter_mut().rev() {
        *slot = (index % base) as Symbol;
        index /= base;
    }
    tuple
}
