//! Digit streams and the bits/trits block conversion.
//!
//! Blocks of 11 bits are read as an unsigned integer (most significant bit
//! first) and re-emitted as its 7-digit base-3 expansion (most significant
//! trit first). The final partial block is zero padded on the right; the
//! original bit length travels with the trits so the receiver can truncate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Alphabet size of a digit stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Radix {
    Binary,
    Ternary,
}

impl Radix {
    pub fn value(self) -> u8 {
        match self {
            Radix::Binary => 2,
            Radix::Ternary => 3,
        }
    }

    pub fn from_value(v: u8) -> Result<Radix> {
        match v {
            2 => Ok(Radix::Binary),
            3 => Ok(Radix::Ternary),
            _ => Err(Error::MalformedInput(format!("unsupported radix {v}"))),
        }
    }
}

/// A sequence of digits in a fixed radix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitBlock {
    radix: Radix,
    digits: Vec<u8>,
}

impl DigitBlock {
    pub fn new(radix: Radix, digits: Vec<u8>) -> Result<Self> {
        let q = radix.value();
        if let Some((i, d)) = digits.iter().enumerate().find(|(_, &d)| d >= q) {
            return Err(Error::MalformedInput(format!(
                "digit {d} at position {i} out of range for radix {q}"
            )));
        }
        Ok(DigitBlock { radix, digits })
    }

    pub fn bits(digits: Vec<u8>) -> Result<Self> {
        Self::new(Radix::Binary, digits)
    }

    pub fn trits(digits: Vec<u8>) -> Result<Self> {
        Self::new(Radix::Ternary, digits)
    }

    pub fn empty(radix: Radix) -> Self {
        DigitBlock {
            radix,
            digits: Vec::new(),
        }
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// Trits produced by [`BlockConversionCodec::bits_to_trits`] together with
/// the bit length needed to undo the final-block padding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvertedTrits {
    pub trits: DigitBlock,
    pub original_bit_len: usize,
}

/// Fixed-size bits to trits block map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockConversionCodec {
    bits_per_block: usize,
    trits_per_block: usize,
}

impl Default for BlockConversionCodec {
    fn default() -> Self {
        BlockConversionCodec {
            bits_per_block: 11,
            trits_per_block: 7,
        }
    }
}

impl BlockConversionCodec {
    /// Requires `2^bits <= 3^trits` so that the block map is injective.
    pub fn new(bits_per_block: usize, trits_per_block: usize) -> Result<Self> {
        if bits_per_block == 0 || trits_per_block == 0 || bits_per_block > 40 {
            return Err(Error::Domain(format!(
                "unsupported block sizes {bits_per_block}/{trits_per_block}"
            )));
        }
        if (1u128 << bits_per_block) > 3u128.pow(trits_per_block as u32) {
            return Err(Error::Domain(format!(
                "2^{bits_per_block} blocks do not fit in 3^{trits_per_block} trit words"
            )));
        }
        Ok(BlockConversionCodec {
            bits_per_block,
            trits_per_block,
        })
    }

    pub fn bits_per_block(&self) -> usize {
        self.bits_per_block
    }

    pub fn trits_per_block(&self) -> usize {
        self.trits_per_block
    }

    pub fn efficiency(&self) -> f64 {
        conversion_efficiency(self.bits_per_block, self.trits_per_block)
            .expect("trits_per_block is non-zero")
    }

    /// Number of trits emitted for `bit_len` input bits.
    pub fn trit_len(&self, bit_len: usize) -> usize {
        bit_len.div_ceil(self.bits_per_block) * self.trits_per_block
    }

    pub fn bits_to_trits(&self, bits: &DigitBlock) -> Result<ConvertedTrits> {
        if bits.radix() != Radix::Binary {
            return Err(Error::RadixMismatch {
                expected: 2,
                got: bits.radix().value(),
            });
        }
        let trits = self.bits_to_trits_raw(bits.digits())?;
        Ok(ConvertedTrits {
            trits: DigitBlock {
                radix: Radix::Ternary,
                digits: trits,
            },
            original_bit_len: bits.len(),
        })
    }

    /// Slice form of [`Self::bits_to_trits`]; digits must be 0 or 1.
    pub fn bits_to_trits_raw(&self, bits: &[u8]) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(self.trit_len(bits.len()));
        for chunk in bits.chunks(self.bits_per_block) {
            let mut v: u64 = 0;
            for i in 0..self.bits_per_block {
                let b = chunk.get(i).copied().unwrap_or(0);
                if b > 1 {
                    return Err(Error::MalformedInput(format!("bit value {b}")));
                }
                v = (v << 1) | b as u64;
            }
            let start = out.len();
            out.resize(start + self.trits_per_block, 0);
            for slot in out[start..].iter_mut().rev() {
                *slot = (v % 3) as u8;
                v /= 3;
            }
        }
        Ok(out)
    }

    pub fn trits_to_bits(&self, trits: &DigitBlock, original_bit_len: usize) -> Result<DigitBlock> {
        if trits.radix() != Radix::Ternary {
            return Err(Error::RadixMismatch {
                expected: 3,
                got: trits.radix().value(),
            });
        }
        let bits = self.trits_to_bits_raw(trits.digits(), original_bit_len)?;
        Ok(DigitBlock {
            radix: Radix::Binary,
            digits: bits,
        })
    }

    /// Slice form of [`Self::trits_to_bits`]; digits must be below 3.
    pub fn trits_to_bits_raw(&self, trits: &[u8], original_bit_len: usize) -> Result<Vec<u8>> {
        if trits.len() % self.trits_per_block != 0 {
            return Err(Error::Framing(format!(
                "{} trits is not a multiple of {}",
                trits.len(),
                self.trits_per_block
            )));
        }
        let capacity = trits.len() / self.trits_per_block * self.bits_per_block;
        if original_bit_len > capacity {
            return Err(Error::Framing(format!(
                "bit length {original_bit_len} exceeds block capacity {capacity}"
            )));
        }
        let limit = 1u64 << self.bits_per_block;
        let mut out = Vec::with_capacity(capacity);
        for chunk in trits.chunks(self.trits_per_block) {
            let mut v: u64 = 0;
            for &t in chunk {
                if t > 2 {
                    return Err(Error::MalformedInput(format!("trit value {t}")));
                }
                v = v * 3 + t as u64;
            }
            if v >= limit {
                return Err(Error::InvalidCodeword { value: v, limit });
            }
            for i in (0..self.bits_per_block).rev() {
                out.push(((v >> i) & 1) as u8);
            }
        }
        out.truncate(original_bit_len);
        Ok(out)
    }
}

/// Information-rate efficiency of mapping `l_b` bits onto `l_t` trits.
pub fn conversion_efficiency(l_b: usize, l_t: usize) -> Result<f64> {
    if l_t == 0 {
        return Err(Error::Domain("trit length must be positive".into()));
    }
    Ok(l_b as f64 / (l_t as f64 * 3f64.log2()))
}
