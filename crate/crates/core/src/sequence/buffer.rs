use crate::alphabet::{Alphabet, Symbol};

/// Append-only symbol storage: one bit per symbol for `{0,1}`, one byte otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolBuffer {
    Packed { words: Vec<u64>, len: u64 },
    Bytes(Vec<u8>),
}

impl SymbolBuffer {
    pub fn for_alphabet(alphabet: &Alphabet) -> Self {
        if alphabet.size() == 2 {
            SymbolBuffer::Packed {
                words: Vec::new(),
                len: 0,
            }
        } else {
            SymbolBuffer::Bytes(Vec::new())
        }
    }

    pub fn len(&self) -> u64 {
        match self {
            SymbolBuffer::Packed { len, .. } => *len,
            SymbolBuffer::Bytes(b) => b.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn reserve(&mut self, total: u64) {
        match self {
            SymbolBuffer::Packed { words, .. } => {
                let need = total.div_ceil(64) as usize;
                words.reserve(need.saturating_sub(words.len()));
            }
            SymbolBuffer::Bytes(b) => b.reserve((total as usize).saturating_sub(b.len())),
        }
    }

    #[inline]
    pub fn push(&mut self, symbol: Symbol) {
        match self {
            SymbolBuffer::Packed { words, len } => {
                let bit = *len % 64;
                if bit == 0 {
                    words.push(0);
                }
                if symbol != 0 {
                    *words.last_mut().expect("word pushed above") |= 1 << bit;
                }
                *len += 1;
            }
            SymbolBuffer::Bytes(b) => b.push(symbol),
        }
    }

    #[inline]
    pub fn get(&self, i: u64) -> Symbol {
        match self {
            SymbolBuffer::Packed { words, len } => {
                assert!(i < *len, "index {i} beyond materialized length {len}");
                (words[(i / 64) as usize] >> (i % 64) & 1) as Symbol
            }
            SymbolBuffer::Bytes(b) => b[i as usize],
        }
    }

    /// Heap bytes used by the symbol store.
    pub fn heap_bytes(&self) -> usize {
        match self {
            SymbolBuffer::Packed { words, .. } => words.capacity() * 8,
            SymbolBuffer::Bytes(b) => b.capacity(),
        }
    }
}
