//! Base sequences and the two self-referential families, generated lazily into
//! an append-only memo.

pub mod buffer;
pub mod fparity;
pub mod io;
pub mod phi;
pub mod primes;
pub mod source;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Symbol};
use buffer::SymbolBuffer;
use fparity::{FIndex, FLayout};
pub use phi::{classify_phi, phi_boundaries, phi_markers_upto, phi_parents, phi_references};
use phi::{PhiCursor, PhiIndex};
pub use primes::{multiplicity, prime, valuation, PrimeTable};
pub use source::BitSource;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequenceError {
    #[error("index arithmetic overflowed 64 bits")]
    Overflow,
    #[error("bit source exhausted after {bits} bits")]
    Exhausted { bits: u64 },
    #[error("i/o: {0}")]
    Io(String),
    #[error("argument must be positive")]
    ZeroArgument,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("malformed sequence file: {0}")]
    Format(String),
}

/// Random access to a sequence that may need to be extended first.
pub trait SymbolSource {
    fn alphabet(&self) -> Alphabet;

    /// Materializes at least `len` symbols.
    fn ensure(&mut self, len: u64) -> Result<(), SequenceError>;

    /// Number of symbols materialized so far.
    fn len(&self) -> u64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Symbol `i`; `i` must be below [`SymbolSource::len`].
    fn symbol(&self, i: u64) -> Symbol;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// The base sequence itself, `L`-bit blocks.
    Raw,
    /// `Φ_h` over `{0,1}^L ∪ {$}`.
    Phi { h: u32 },
    /// `F_{h+1}` over `{0,1}`.
    F { h: u32 },
    /// A finite, explicitly supplied string.
    Fixed,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Raw => "raw",
            Family::Phi { .. } => "phi",
            Family::F { .. } => "f",
            Family::Fixed => "fixed",
        }
    }
}

/// The base sequence `S` drawn block by block; skipped indices are drawn and discarded.
#[derive(Debug)]
struct BaseStream {
    bits: BitSource,
    block_bits: u32,
    next_index: u64,
}

impl BaseStream {
    fn read(&mut self, index: u64) -> Result<Symbol, SequenceError> {
        debug_assert!(index >= self.next_index, "base stream is forward-only");
        while self.next_index < index {
            self.bits.next_block(self.block_bits)?;
            self.next_index += 1;
        }
        self.next_index += 1;
        self.bits.next_block(self.block_bits)
    }
}

#[derive(Debug)]
enum Generator {
    Raw,
    Phi { h: u64, cursor: PhiCursor },
    F { layout: FLayout },
    Fixed,
}

/// A lazily generated sequence with a memoized prefix.
#[derive(Debug)]
pub struct SymbolSequence {
    alphabet: Alphabet,
    family: Family,
    generator: Generator,
    memo: SymbolBuffer,
    base: Option<BaseStream>,
    source_label: String,
}

impl SymbolSequence {
    /// `S` itself over `{0,1}^L`.
    pub fn raw(block_bits: u32, bits: BitSource) -> Result<Self, SequenceError> {
        let alphabet = Alphabet::new(block_bits, false).map_err(|e| SequenceError::Parameter(e.to_string()))?;
        Ok(Self::with_generator(
            alphabet,
            Family::Raw,
            Generator::Raw,
            bits,
            block_bits,
        ))
    }

    /// `Φ_h(S)` with `S` over `{0,1}^L`.
    pub fn phi(h: u32, block_bits: u32, bits: BitSource) -> Result<Self, SequenceError> {
        if h < 2 {
            return Err(SequenceError::Parameter(format!("Φ needs h ≥ 2, got {h}")));
        }
        let alphabet = Alphabet::with_dollar(block_bits).map_err(|e| SequenceError::Parameter(e.to_string()))?;
        let generator = Generator::Phi {
            h: h as u64,
            cursor: PhiCursor::new(h as u64),
        };
        Ok(Self::with_generator(
            alphabet,
            Family::Phi { h },
            generator,
            bits,
            block_bits,
        ))
    }

    /// `F_{h+1}(S)` with binary `S`.
    pub fn f(h: u32, bits: BitSource) -> Result<Self, SequenceError> {
        if h < 1 {
            return Err(SequenceError::Parameter("F needs h ≥ 1".into()));
        }
        let generator = Generator::F {
            layout: FLayout::new(h as usize),
        };
        Ok(Self::with_generator(
            Alphabet::binary(),
            Family::F { h },
            generator,
            bits,
            1,
        ))
    }

    /// A finite sequence; `ensure` beyond its length fails.
    pub fn from_symbols(alphabet: Alphabet, symbols: &[Symbol]) -> Result<Self, SequenceError> {
        if let Some(bad) = symbols.iter().find(|&&s| !alphabet.contains(s)) {
            return Err(SequenceError::Format(format!("symbol {bad} outside {alphabet}")));
        }
        let mut memo = SymbolBuffer::for_alphabet(&alphabet);
        memo.reserve(symbols.len() as u64);
        for &s in symbols {
            memo.push(s);
        }
        Ok(Self {
            alphabet,
            family: Family::Fixed,
            generator: Generator::Fixed,
            memo,
            base: None,
            source_label: "fixed".into(),
        })
    }

    fn with_generator(
        alphabet: Alphabet,
        family: Family,
        generator: Generator,
        bits: BitSource,
        block_bits: u32,
    ) -> Self {
        Self {
            alphabet,
            family,
            generator,
            memo: SymbolBuffer::for_alphabet(&alphabet),
            source_label: bits.describe(),
            base: Some(BaseStream {
                bits,
                block_bits,
                next_index: 0,
            }),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn memo_bytes(&self) -> usize {
        self.memo.heap_bytes()
    }

    /// The first `len` symbols (materializing them if needed).
    pub fn prefix(&mut self, len: u64) -> Result<Vec<Symbol>, SequenceError> {
        self.ensure(len)?;
        Ok((0..len).map(|i| self.memo.get(i)).collect())
    }

    fn xor_at(&self, indices: &[u64]) -> Symbol {
        indices.iter().fold(0, |acc, &i| {
            let s = self.memo.get(i);
            debug_assert!(!self.alphabet.is_dollar(s), "referenced index {i} holds $");
            acc ^ s
        })
    }

    fn generate_next(&mut self) -> Result<(), SequenceError> {
        let n = self.memo.len();
        // (base index to draw, how the symbol is formed)
        let (draw, value) = match &mut self.generator {
            Generator::Fixed => {
                return Err(SequenceError::Exhausted {
                    bits: n * self.alphabet.block_bits() as u64,
                })
            }
            Generator::Raw => (Some(n), Value::Drawn),
            // S[n] is drawn at every index so unmodified positions stay aligned with S.
            Generator::Phi { h, cursor } => match cursor.classify(n) {
                PhiIndex::Marker { .. } => (Some(n), Value::Marker),
                PhiIndex::Parity { k } => (Some(n), Value::Xor(phi::phi_references(*h, k, n))),
                PhiIndex::Interior { .. } | PhiIndex::Free => (Some(n), Value::Drawn),
            },
            Generator::F { layout } => match layout.classify(n) {
                FIndex::Zero => (None, Value::Zero),
                FIndex::Parity { .. } => (None, Value::Xor(layout.parents(n))),
                FIndex::Copy { base } => (Some(base), Value::Drawn),
            },
        };
        let drawn = match draw {
            Some(i) => Some(self.base.as_mut().expect("generated family").read(i)?),
            None => None,
        };
        let symbol = match value {
            Value::Drawn => drawn.expect("drawn above"),
            Value::Marker => self.alphabet.dollar().expect("Φ alphabet has $"),
            Value::Zero => 0,
            Value::Xor(refs) => self.xor_at(&refs),
        };
        self.memo.push(symbol);
        Ok(())
    }
}

enum Value {
    Drawn,
    Marker,
    Zero,
    Xor(Vec<u64>),
}

impl SymbolSource for SymbolSequence {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn ensure(&mut self, len: u64) -> Result<(), SequenceError> {
        if len > usize::MAX as u64 / 2 {
            return Err(SequenceError::Overflow);
        }
        if len > self.memo.len() && !matches!(self.generator, Generator::Fixed) {
            self.memo.reserve(len);
        }
        while self.memo.len() < len {
            self.generate_next()?;
        }
        Ok(())
    }

    fn len(&self) -> u64 {
        self.memo.len()
    }

    #[inline]
    fn symbol(&self, i: u64) -> Symbol {
        self.memo.get(i)
    }
}
