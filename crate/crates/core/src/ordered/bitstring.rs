use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Longest supported string length.
pub const MAX_DIM: u32 = 63;

/// A binary string `x_1 x_2 ... x_d` with bit 1 the most significant.
///
/// Leading zeros are significant: `001` and `01` are different strings.
/// The integer value `sum x_i 2^(d-i)` is kept alongside so comparisons
/// and [`delta`] are a couple of machine instructions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitString {
    len: u32,
    value: u64,
}

impl BitString {
    pub fn new(len: u32, value: u64) -> Result<Self> {
        if len == 0 || len > MAX_DIM {
            return invalid(format!("bitstring length {len} outside 1..={MAX_DIM}"));
        }
        if value >> len != 0 {
            return invalid(format!("value {value} does not fit in {len} bits"));
        }
        Ok(Self { len, value })
    }

    /// Caller guarantees `1 <= len <= MAX_DIM` and `value < 2^len`.
    pub(crate) fn from_raw(len: u32, value: u64) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&len) && value >> len == 0);
        Self { len, value }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut value = 0u64;
        for &b in bits {
            if b > 1 {
                return invalid(format!("bit value {b}"));
            }
            value = (value << 1) | u64::from(b);
        }
        Self::new(bits.len() as u32, value)
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Bit at 1-based position `i`.
    pub fn bit(&self, i: u32) -> u8 {
        debug_assert!(i >= 1 && i <= self.len);
        ((self.value >> (self.len - i)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (1..=self.len).map(|i| self.bit(i)).collect()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.len as usize)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .bytes()
            .map(|c| match c {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => invalid(format!("not a bitstring: {s:?}")),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(&bits)
    }
}

/// Level at which two strings of length `len` given by integer value first differ.
#[inline]
pub(crate) fn delta_raw(len: u32, x: u64, y: u64) -> u32 {
    debug_assert_ne!(x, y);
    let top = 63 - (x ^ y).leading_zeros();
    len - top
}

/// `δ(x, y)`: the least 1-based index where `x` and `y` differ.
pub fn delta(x: BitString, y: BitString) -> Result<u32> {
    if x.len != y.len {
        return invalid(format!("length mismatch {} vs {}", x.len, y.len));
    }
    if x.value == y.value {
        return invalid(format!("delta of equal strings {x}"));
    }
    Ok(delta_raw(x.len, x.value, y.value))
}

/// Lexicographic `x < y`: the first differing bit is 0 in `x`.
pub fn lex_less(x: BitString, y: BitString) -> Result<bool> {
    if x.len != y.len {
        return invalid(format!("length mismatch {} vs {}", x.len, y.len));
    }
    if x.value == y.value {
        return Ok(false);
    }
    let l = delta_raw(x.len, x.value, y.value);
    Ok(x.bit(l) == 0)
}
