//! On-disk sequence format: a body file plus a JSON sidecar header.
//!
//! Binary alphabets are packed eight symbols per byte, first symbol in the most
//! significant bit, zero-padded. Other alphabets use one byte per symbol with `$`
//! stored as `2^L`.

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::sequence::{Family, SequenceError, SymbolSequence, SymbolSource};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceHeader {
    #[serde(flatten)]
    pub family: Family,
    pub block_bits: u32,
    pub has_dollar: bool,
    pub alphabet_size: usize,
    pub seed: Option<u64>,
    pub source: String,
    pub length: u64,
    pub encoding: Encoding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    PackedMsb,
    Byte,
}

impl SequenceHeader {
    pub fn alphabet(&self) -> Result<Alphabet, SequenceError> {
        let alphabet =
            Alphabet::new(self.block_bits, self.has_dollar).map_err(|e| SequenceError::Format(e.to_string()))?;
        if alphabet.size() != self.alphabet_size {
            return Err(SequenceError::Format(format!(
                "alphabet_size {} disagrees with L={} dollar={}",
                self.alphabet_size, self.block_bits, self.has_dollar
            )));
        }
        Ok(alphabet)
    }
}

pub fn encoding_for(alphabet: &Alphabet) -> Encoding {
    if alphabet.size() == 2 {
        Encoding::PackedMsb
    } else {
        Encoding::Byte
    }
}

/// Materializes `length` symbols and returns the header and body bytes.
pub fn encode_sequence(
    seq: &mut SymbolSequence,
    seed: Option<u64>,
    length: u64,
) -> Result<(SequenceHeader, Vec<u8>), SequenceError> {
    seq.ensure(length)?;
    let alphabet = seq.alphabet();
    let encoding = encoding_for(&alphabet);
    let body = match encoding {
        Encoding::PackedMsb => {
            let mut out = vec![0u8; length.div_ceil(8) as usize];
            for i in 0..length {
                if seq.symbol(i) != 0 {
                    out[(i / 8) as usize] |= 0x80 >> (i % 8);
                }
            }
            out
        }
        Encoding::Byte => (0..length).map(|i| seq.symbol(i)).collect(),
    };
    let header = SequenceHeader {
        family: seq.family(),
        block_bits: alphabet.block_bits(),
        has_dollar: alphabet.has_dollar(),
        alphabet_size: alphabet.size(),
        seed,
        source: seq.source_label().to_string(),
        length,
        encoding,
    };
    Ok((header, body))
}

/// Loads a body written by [`encode_sequence`] as a finite sequence.
pub fn decode_sequence(header: &SequenceHeader, body: &[u8]) -> Result<SymbolSequence, SequenceError> {
    let alphabet = header.alphabet()?;
    if header.encoding != encoding_for(&alphabet) {
        return Err(SequenceError::Format("encoding does not match alphabet".into()));
    }
    let symbols: Vec<u8> = match header.encoding {
        Encoding::PackedMsb => {
            if (body.len() as u64) != header.length.div_ceil(8) {
                return Err(SequenceError::Format(format!(
                    "body has {} bytes, header promises {} symbols",
                    body.len(),
                    header.length
                )));
            }
            (0..header.length)
                .map(|i| body[(i / 8) as usize] >> (7 - i % 8) & 1)
                .collect()
        }
        Encoding::Byte => {
            if body.len() as u64 != header.length {
                return Err(SequenceError::Format(format!(
                    "body has {} bytes, header promises {} symbols",
                    body.len(),
                    header.length
                )));
            }
            body.to_vec()
        }
    };
    SymbolSequence::from_symbols(alphabet, &symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::BitSource;

    #[test]
    fn packed_round_trip() {
        let mut f = SymbolSequence::f(2, BitSource::seeded(5)).unwrap();
        let (header, body) = encode_sequence(&mut f, Some(5), 1001).unwrap();
        assert_eq!(body.len(), 126);
        let json = serde_json::to_string(&header).unwrap();
        assert!(json.contains("\"family\":\"f\""));
        let back: SequenceHeader = serde_json::from_str(&json).unwrap();
        let mut loaded = decode_sequence(&back, &body).unwrap();
        assert_eq!(loaded.prefix(1001).unwrap(), f.prefix(1001).unwrap());
    }

    #[test]
    fn byte_round_trip_with_marker() {
        let mut phi = SymbolSequence::phi(2, 2, BitSource::seeded(9)).unwrap();
        let (header, body) = encode_sequence(&mut phi, Some(9), 500).unwrap();
        assert_eq!(body[2], 4);
        let mut loaded = decode_sequence(&header, &body).unwrap();
        assert_eq!(loaded.prefix(500).unwrap(), phi.prefix(500).unwrap());
        assert!(decode_sequence(&header, &body[..10]).is_err());
    }
}
