//! Packed fixed-length bit sequences, one bit per quantized pixel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bit sequence quantized from a `width × height` pixel region, packed into
/// 64-bit words. Bit `i` belongs to the pixel at `(i % width, i / width)`
/// (row-major).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitPattern {
    width: u32,
    height: u32,
    len: usize,
    words: Vec<u64>,
}

impl BitPattern {
    pub fn zeros(width: u32, height: u32) -> Self {
        let len = width as usize * height as usize;
        BitPattern {
            width,
            height,
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(width: u32, height: u32, bits: &[bool]) -> Result<Self> {
        let expected = width as usize * height as usize;
        if bits.len() != expected {
            return Err(Error::Dimension {
                expected,
                got: bits.len(),
            });
        }
        let mut pattern = Self::zeros(width, height);
        for (i, &bit) in bits.iter().enumerate() {
            if bit {
                pattern.set(i, true);
            }
        }
        Ok(pattern)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(width, height)` of the region this pattern was quantized from.
    pub fn shape(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1 << (i & 63);
    }

    // Spare bits past `len` are kept zero by the mutators above, so word
    // popcounts are exact.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn hamming(&self, other: &Self) -> usize {
        debug_assert_eq!(self.len(), other.len());
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

impl std::fmt::Debug for BitPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BitPattern({}x{}, ones={})",
            self.width,
            self.height,
            self.count_ones()
        )
    }
}
