//! Packed GF(2) signal vectors and the down-shift operator.
//!
//! Index 0 is level 1, the top (least attenuated) level. Shifting by `s`
//! moves content toward the bottom and clears the top `s` levels.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("shift {shift} out of range for length {len}")]
    ShiftRange { shift: usize, len: usize },
    #[error("cross and direct level counts are equal ({0}); inputs are not recoverable")]
    NotInvertible(usize),
    #[error("invalid bit character {0:?}")]
    Parse(char),
}

/// Fixed-length vector over GF(2), level 1 stored at the low-order bit.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from top-to-bottom level values.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Value at zero-based position `i` (level `i + 1`).
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "level index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "level index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "level index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Position of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector, Gf2Error> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<(), Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::Dimension(self.len, other.len));
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
        Ok(())
    }

    /// Applies `G^s`: `out[i] = x[i - s]`, top `s` levels zero.
    pub fn shift_down(&self, s: usize) -> Result<BitVector, Gf2Error> {
        if s > self.len {
            return Err(Gf2Error::ShiftRange {
                shift: s,
                len: self.len,
            });
        }
        let mut out = Self::zeros(self.len);
        let (ws, bs) = (s / WORD, s % WORD);
        for w in (ws..out.words.len()).rev() {
            let mut v = self.words[w - ws] << bs;
            if bs > 0 && w > ws {
                v |= self.words[w - ws - 1] >> (WORD - bs);
            }
            out.words[w] = v;
        }
        out.clear_tail();
        Ok(out)
    }

    fn clear_tail(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Gf2Error::Parse(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BitVector::from_bits(&bits))
    }
}

/// Recovers `(x1, x2)` from the forward outputs of an `(m, n)` channel, `m != n`.
///
/// With `d = |n - m|` the combination `y_a ^ G^d y_b` equals `(I ^ G^{2d}) x`
/// for one of the inputs; the unipotent factor is undone by forward
/// substitution and the other input follows by back-substitution.
pub fn reconstruct_inputs(
    y1: &BitVector,
    y2: &BitVector,
    m: usize,
    n: usize,
) -> Result<(BitVector, BitVector), Gf2Error> {
    if m == n {
        return Err(Gf2Error::NotInvertible(m));
    }
    let q = m.max(n);
    for y in [y1, y2] {
        if y.len() != q {
            return Err(Gf2Error::Dimension(y.len(), q));
        }
    }
    let d = m.abs_diff(n);
    // n > m: y1 = x1 ^ G^d x2, y2 = G^d x1 ^ x2.
    // m > n: y1 = G^d x1 ^ x2, y2 = x1 ^ G^d x2.
    let (ya, yb) = if n > m { (y1, y2) } else { (y2, y1) };
    let z = ya.xor(&yb.shift_down(d)?)?;
    let mut x1 = BitVector::zeros(q);
    for i in 0..q {
        let mut b = z.get(i);
        if i >= 2 * d {
            b ^= x1.get(i - 2 * d);
        }
        x1.set(i, b);
    }
    let x2 = yb.xor(&x1.shift_down(d)?)?;
    Ok((x1, x2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn xor_basics() {
        assert_eq!(bv("00").xor(&bv("00")).unwrap(), bv("00"));
        assert_eq!(bv("10").xor(&bv("11")).unwrap(), bv("01"));
        assert_eq!(
            bv("1").xor(&bv("10")),
            Err(Gf2Error::Dimension(1, 2))
        );
    }

    #[test]
    fn shift_examples() {
        assert_eq!(bv("10").shift_down(0).unwrap(), bv("10"));
        assert_eq!(bv("10").shift_down(1).unwrap(), bv("01"));
        assert_eq!(bv("1101").shift_down(4).unwrap(), bv("0000"));
        assert!(bv("10").shift_down(3).is_err());
    }

    #[test]
    fn shift_across_words() {
        let mut x = BitVector::zeros(130);
        x.set(0, true);
        x.set(63, true);
        x.set(100, true);
        let y = x.shift_down(65).unwrap();
        let ones: Vec<usize> = (0..130).filter(|&i| y.get(i)).collect();
        assert_eq!(ones, vec![65, 128]);
    }

    #[test]
    fn empty_vectors_are_inert() {
        let e = BitVector::zeros(0);
        assert_eq!(e.xor(&e).unwrap(), e);
        assert_eq!(e.shift_down(0).unwrap(), e);
        assert_eq!(e.to_string(), "");
    }

    #[test]
    fn reconstruct_rejects_equal_levels() {
        let z = BitVector::zeros(2);
        assert_eq!(
            reconstruct_inputs(&z, &z, 2, 2),
            Err(Gf2Error::NotInvertible(2))
        );
    }
}
