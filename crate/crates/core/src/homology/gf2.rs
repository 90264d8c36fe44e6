//! Bit-packed vectors over GF(2).

use std::fmt;

const WORD: usize = 64;

/// Fixed-length vector over GF(2), one bit per coordinate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Vec {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &Gf2Vec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&self, other: &Gf2Vec) -> Gf2Vec {
        assert_eq!(self.len, other.len, "length mismatch");
        Gf2Vec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn or(&self, other: &Gf2Vec) -> Gf2Vec {
        assert_eq!(self.len, other.len, "length mismatch");
        Gf2Vec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set index, the pivot used by the eliminations in this crate.
    pub fn lowest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + t)
            })
        })
    }

    /// Lowercase hex, most significant nibble first; bit `i` is bit `i % 4`
    /// of nibble `i / 4` counted from the right.
    pub fn to_hex(&self) -> String {
        let nibbles = self.len.div_ceil(4).max(1);
        let mut out = String::with_capacity(nibbles);
        for k in (0..nibbles).rev() {
            let mut nib = 0u8;
            for b in 0..4 {
                let i = 4 * k + b;
                if i < self.len && self.get(i) {
                    nib |= 1 << b;
                }
            }
            out.push(char::from_digit(nib as u32, 16).expect("nibble"));
        }
        out
    }

    /// Inverse of [`Gf2Vec::to_hex`]; rejects bits beyond `len`.
    pub fn from_hex(len: usize, hex: &str) -> Result<Self, String> {
        let mut v = Self::zeros(len);
        for (k, c) in hex.chars().rev().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| format!("invalid hex digit `{c}`"))?;
            for b in 0..4 {
                if nib >> b & 1 == 1 {
                    let i = 4 * k + b;
                    if i >= len {
                        return Err(format!("bit {i} set beyond length {len}"));
                    }
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }
}

impl fmt::Debug for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vec[{}]{{", self.len)?;
        for (n, i) in self.iter_ones().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let mut v = Gf2Vec::zeros(130);
        assert!(v.is_zero());
        v.flip(0);
        v.flip(129);
        v.set(64, true);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.lowest_one(), Some(0));
        let w = Gf2Vec::from_indices(130, [0, 5]);
        v.xor_assign(&w);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![5, 64, 129]);
        assert_eq!(v.count_ones(), 3);
    }

    #[test]
    fn hex_rejects_overflow() {
        assert!(Gf2Vec::from_hex(3, "8").is_err());
        assert!(Gf2Vec::from_hex(3, "g").is_err());
        assert_eq!(
            Gf2Vec::from_hex(3, "5")
                .unwrap()
                .iter_ones()
                .collect::<Vec<_>>(),
            vec![0, 2]
        );
    }

    proptest! {
        #[test]
        fn hex_round_trip(len in 0usize..300, bits in prop::collection::vec(any::<u16>(), 0..40)) {
            let v = Gf2Vec::from_indices(len, bits.iter().filter(|_| len > 0).map(|&b| b as usize % len));
            let back = Gf2Vec::from_hex(len, &v.to_hex()).unwrap();
            prop_assert_eq!(v, back);
        }
    }
}
