use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest bit string a label can hold.
pub const MAX_WIDTH: usize = 32;

/// A fixed-width binary string naming a hypercube vertex.
///
/// Positions are numbered from 1 at the leftmost digit, matching how the
/// strings are written. Ordering among equal-width labels is lexicographic
/// on the digit string; labels of different widths never share a graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexLabel {
    width: u8,
    bits: u32,
}

impl VertexLabel {
    /// Builds a label from digits given left to right. Every digit must be 0 or 1.
    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        if digits.is_empty() || digits.len() > MAX_WIDTH {
            return Err(Error::domain(format!(
                "label width {} outside 1..={MAX_WIDTH}",
                digits.len()
            )));
        }
        let mut bits = 0u32;
        for &d in digits {
            if d > 1 {
                return Err(Error::domain(format!("digit {d} is not binary")));
            }
            bits = (bits << 1) | u32::from(d);
        }
        Ok(VertexLabel {
            width: digits.len() as u8,
            bits,
        })
    }

    /// Packed form; the leftmost digit is the most significant bit.
    pub(crate) fn from_packed(bits: u32, width: usize) -> Self {
        debug_assert!((1..=MAX_WIDTH).contains(&width));
        debug_assert!(width == 32 || bits >> width == 0);
        VertexLabel {
            width: width as u8,
            bits,
        }
    }

    #[cfg(test)]
    pub(crate) fn packed(self) -> u32 {
        self.bits
    }

    pub fn width(self) -> usize {
        self.width as usize
    }

    /// Digit at 1-based position `pos` (leftmost is 1).
    pub fn digit(self, pos: usize) -> u8 {
        assert!((1..=self.width()).contains(&pos), "position {pos} out of range");
        ((self.bits >> (self.width() - pos)) & 1) as u8
    }

    pub fn digits(self) -> Vec<u8> {
        (1..=self.width()).map(|p| self.digit(p)).collect()
    }

    /// Label with the digit at 1-based `pos` inverted.
    pub fn flip(self, pos: usize) -> Self {
        assert!((1..=self.width()).contains(&pos), "position {pos} out of range");
        VertexLabel {
            width: self.width,
            bits: self.bits ^ (1 << (self.width() - pos)),
        }
    }

    /// Bitwise complement.
    pub fn complement(self) -> Self {
        VertexLabel {
            width: self.width,
            bits: !self.bits & mask(self.width()),
        }
    }

    /// String concatenation `self` followed by `rest`.
    pub fn concat(self, rest: VertexLabel) -> Result<Self> {
        let width = self.width() + rest.width();
        if width > MAX_WIDTH {
            return Err(Error::domain(format!("concatenated width {width} too large")));
        }
        Ok(VertexLabel {
            width: width as u8,
            bits: (self.bits << rest.width()) | rest.bits,
        })
    }

    /// Splits into the first `at` digits and the remainder.
    pub fn split(self, at: usize) -> Result<(Self, Self)> {
        if at == 0 || at >= self.width() {
            return Err(Error::domain(format!(
                "cannot split a width-{} label at {at}",
                self.width()
            )));
        }
        let tail = self.width() - at;
        Ok((
            VertexLabel::from_packed(self.bits >> tail, at),
            VertexLabel::from_packed(self.bits & mask(tail), tail),
        ))
    }

    /// Number of differing positions. Widths must agree.
    pub fn hamming_distance(self, other: VertexLabel) -> Result<u32> {
        if self.width != other.width {
            return Err(Error::domain(format!(
                "width mismatch: {} vs {}",
                self.width, other.width
            )));
        }
        Ok((self.bits ^ other.bits).count_ones())
    }

    /// All labels of the given width in lexicographic order.
    pub fn all(width: usize) -> impl Iterator<Item = VertexLabel> {
        assert!((1..MAX_WIDTH).contains(&width));
        (0..1u32 << width).map(move |b| VertexLabel::from_packed(b, width))
    }
}

/// Free-function form of [`VertexLabel::hamming_distance`].
pub fn hamming_distance(u: VertexLabel, v: VertexLabel) -> Result<u32> {
    u.hamming_distance(v)
}

fn mask(width: usize) -> u32 {
    if width >= 32 {
        u32::MAX
    } else {
        (1u32 << width) - 1
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 1..=self.width() {
            f.write_str(if self.digit(p) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for VertexLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .bytes()
            .map(|c| match c {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(Error::domain(format!("'{s}' is not a bit string"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        VertexLabel::from_digits(&digits)
    }
}

/// Parses a label literal, panicking on malformed input. Intended for constants and tests.
pub fn label(s: &str) -> VertexLabel {
    s.parse().unwrap_or_else(|e| panic!("bad label literal {s:?}: {e}"))
}
