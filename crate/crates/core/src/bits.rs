//! Fixed-width bit strings.
//!
//! Problem settings, query arguments, answers and measurement outcomes are all
//! short bit strings.  `BitString` stores the value in a `u32` together with an
//! explicit width, so `01` and `0001` are different objects.  Positions are
//! counted from the **left**: position 0 is the most significant digit, which
//! matches the way settings are written out in reports (`b = 0011` has a `1`
//! at positions 2 and 3).

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;

/// Maximum supported width.  Values are packed into a `u32`; the widest string
/// in practice is a Simon function table at n = 3 (24 bits).
pub const MAX_WIDTH: usize = 32;

/// A bit string of fixed width (0..=32 bits), ordered by width then value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString {
    value: u32,
    width: u8,
}

impl BitString {
    /// Builds a bit string from an integer value.
    ///
    /// Panics if `width` exceeds [`MAX_WIDTH`] or `value` does not fit in
    /// `width` bits; callers constructing strings from external input should
    /// go through [`BitString::parse`] instead.
    pub fn new(value: u32, width: usize) -> Self {
        assert!(width <= MAX_WIDTH, "bit string width {width} exceeds {MAX_WIDTH}");
        assert!(
            width == MAX_WIDTH || value < (1u32 << width),
            "value {value} does not fit in {width} bits"
        );
        Self { value, width: width as u8 }
    }

    /// The all-zero string of the given width.
    pub fn zeros(width: usize) -> Self {
        Self::new(0, width)
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    /// Bit at `pos`, counting position 0 as the leftmost (most significant).
    pub fn bit(&self, pos: usize) -> bool {
        assert!(pos < self.width(), "bit position {pos} out of range for width {}", self.width);
        (self.value >> (self.width() - 1 - pos)) & 1 == 1
    }

    /// Iterator over bits from left to right.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width()).map(move |p| self.bit(p))
    }

    /// Number of 1 bits.
    pub fn count_ones(&self) -> u32 {
        self.value.count_ones()
    }

    /// Bitwise xor; both operands must share a width.
    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.width, other.width, "xor of bit strings with different widths");
        BitString::new(self.value ^ other.value, self.width())
    }

    /// Parity of the overlap with `mask` (a GF(2) linear functional).
    pub fn masked_parity(&self, mask: u32) -> bool {
        (self.value & mask).count_ones() % 2 == 1
    }

    /// The `index`-th chunk of `chunk_width` bits, counting chunks from the
    /// left.  Used to read one entry out of a concatenated function table.
    pub fn chunk(&self, index: usize, chunk_width: usize) -> BitString {
        let chunks = self.width() / chunk_width;
        assert!(chunk_width > 0 && self.width().is_multiple_of(chunk_width) && index < chunks);
        let shift = (chunks - 1 - index) * chunk_width;
        let mask = if chunk_width == 32 { u32::MAX } else { (1u32 << chunk_width) - 1 };
        BitString::new((self.value >> shift) & mask, chunk_width)
    }

    /// Concatenates `parts` (all widths summed must stay within range).
    pub fn concat(parts: &[BitString]) -> BitString {
        let width: usize = parts.iter().map(|p| p.width()).sum();
        assert!(width <= MAX_WIDTH, "concatenated width {width} exceeds {MAX_WIDTH}");
        let mut value = 0u32;
        for p in parts {
            value = (value << p.width()) | p.value();
        }
        BitString::new(value, width)
    }

    /// Parses a bit string written in binary (`0101`, `0b0101`) or hex
    /// (`0x5`).  Hex input requires `width` so the left padding is defined;
    /// binary input is checked against `width` when one is given.
    pub fn parse(text: &str, width: Option<usize>) -> Result<Self, Error> {
        let bad = |reason: &str| Error::ProblemFile {
            key: text.to_string(),
            reason: reason.to_string(),
        };
        if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
            let width = width.ok_or_else(|| bad("hex bit string needs an explicit width"))?;
            let value = u32::from_str_radix(hex, 16).map_err(|_| bad("invalid hex digits"))?;
            if width > MAX_WIDTH || (width < MAX_WIDTH && value >= (1u32 << width)) {
                return Err(bad("value does not fit the declared width"));
            }
            return Ok(Self::new(value, width));
        }
        let digits = text.strip_prefix("0b").or_else(|| text.strip_prefix("0B")).unwrap_or(text);
        if digits.is_empty() || digits.len() > MAX_WIDTH {
            return Err(bad("bit string must have 1..=32 binary digits"));
        }
        if let Some(w) = width {
            if w != digits.len() {
                return Err(bad("bit string length does not match the declared width"));
            }
        }
        let mut value = 0u32;
        for c in digits.chars() {
            value = (value << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(bad("bit string may contain only 0 and 1")),
                };
        }
        Ok(Self::new(value, digits.len()))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.bits() {
            write!(f, "{}", if bit { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BitString {
    /// Width-major ordering; within one width this is the lexicographic order
    /// of the written string, which is the order function tables are indexed by.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.width, self.value).cmp(&(other.width, other.value))
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, None)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// All bit strings of `width` bits in lexicographic order.
pub fn all_strings(width: usize) -> Vec<BitString> {
    assert!(width < 26, "enumerating {width}-bit strings is unreasonable");
    (0..(1u32 << width)).map(|v| BitString::new(v, width)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn position_zero_is_leftmost() {
        let b = BitString::parse("0011", None).unwrap();
        assert!(!b.bit(0));
        assert!(!b.bit(1));
        assert!(b.bit(2));
        assert!(b.bit(3));
    }

    #[test]
    fn display_pads_to_width() {
        assert_eq!(BitString::new(1, 4).to_string(), "0001");
        assert_eq!(BitString::new(0, 2).to_string(), "00");
    }

    #[test]
    fn chunks_read_left_to_right() {
        // table 00 01 10 11 concatenated
        let t = BitString::parse("00011011", None).unwrap();
        assert_eq!(t.chunk(0, 2).to_string(), "00");
        assert_eq!(t.chunk(1, 2).to_string(), "01");
        assert_eq!(t.chunk(3, 2).to_string(), "11");
    }

    #[test]
    fn parse_accepts_hex_and_binary_prefixes() {
        assert_eq!(BitString::parse("0x5", Some(4)).unwrap().to_string(), "0101");
        assert_eq!(BitString::parse("0b101", None).unwrap().to_string(), "101");
        assert!(BitString::parse("0x5", None).is_err());
        assert!(BitString::parse("012", None).is_err());
        assert!(BitString::parse("101", Some(4)).is_err());
    }

    #[test]
    fn ordering_matches_table_indexing() {
        let mut v = [
            BitString::parse("11", None).unwrap(),
            BitString::parse("00", None).unwrap(),
            BitString::parse("10", None).unwrap(),
            BitString::parse("01", None).unwrap(),
        ];
        v.sort();
        let shown: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(shown, ["00", "01", "10", "11"]);
    }

    #[test]
    fn masked_parity_is_gf2_dot_product() {
        let b = BitString::parse("101", None).unwrap();
        assert!(b.masked_parity(0b100));
        assert!(b.masked_parity(0b110));
        assert!(!b.masked_parity(0b101));
    }
}
