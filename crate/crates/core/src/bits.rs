//! Fixed-width bit strings used as computational-basis labels.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::Error;

/// A computational basis state of `width` qubits.
///
/// Bit `q` is the value of qubit `q`. Qubit 0 is the leftmost character of the
/// string form and the most significant bit when a slice is read as an
/// integer. Bits are packed MSB-first into 64-bit words, so the derived
/// ordering coincides with lexicographic order of the string form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisString {
    width: usize,
    words: Vec<u64>,
}

impl BasisString {
    pub fn zeros(width: usize) -> Self {
        Self {
            width,
            words: vec![0; width.div_ceil(64)],
        }
    }

    /// The `width`-bit big-endian encoding of `value`.
    pub fn from_uint(value: u64, width: usize) -> Self {
        let mut out = Self::zeros(width);
        for q in 0..width.min(64) {
            if (value >> q) & 1 == 1 {
                out.set(width - 1 - q, true);
            }
        }
        out
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut out = Self::zeros(bits.len());
        for (q, &b) in bits.iter().enumerate() {
            out.set(q, b);
        }
        out
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    fn locate(q: usize) -> (usize, u64) {
        (q / 64, 1u64 << (63 - (q % 64)))
    }

    #[inline]
    pub fn get(&self, q: usize) -> bool {
        debug_assert!(q < self.width);
        let (w, mask) = Self::locate(q);
        self.words[w] & mask != 0
    }

    #[inline]
    pub fn set(&mut self, q: usize, value: bool) {
        debug_assert!(q < self.width);
        let (w, mask) = Self::locate(q);
        if value {
            self.words[w] |= mask;
        } else {
            self.words[w] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, q: usize) {
        debug_assert!(q < self.width);
        let (w, mask) = Self::locate(q);
        self.words[w] ^= mask;
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Reads bits `[start, end)` as a big-endian integer.
    pub fn slice_uint(&self, start: usize, end: usize) -> u64 {
        debug_assert!(end - start <= 64);
        (start..end).fold(0, |acc, q| (acc << 1) | u64::from(self.get(q)))
    }

    /// Copies bit `i` of `self` to qubit `wires[i]` of `dest`.
    pub fn scatter_into(&self, dest: &mut BasisString, wires: &[usize]) {
        for (i, &w) in wires.iter().enumerate() {
            dest.set(w, self.get(i));
        }
    }

    /// Collects the bits at `wires` into a new string.
    pub fn gather(&self, wires: &[usize]) -> BasisString {
        let mut out = BasisString::zeros(wires.len());
        for (i, &w) in wires.iter().enumerate() {
            out.set(i, self.get(w));
        }
        out
    }

    /// Prepends `count` zero bits.
    pub fn pad_left(&self, count: usize) -> BasisString {
        let mut out = BasisString::zeros(self.width + count);
        for q in 0..self.width {
            out.set(q + count, self.get(q));
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width).map(move |q| self.get(q))
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for BasisString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BasisString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}⟩")
    }
}

impl FromStr for BasisString {
    type Err = Error;

    /// Parses a `0`/`1` string; spaces and underscores are ignored so block
    /// boundaries can be written out.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                ' ' | '_' => {}
                _ => return Err(Error::BadBasisChar(s.into())),
            }
        }
        Ok(Self::from_bits(&bits))
    }
}
