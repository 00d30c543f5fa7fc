use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::bitstring::{BitString, MAX_DIM};
use crate::error::{invalid, Result};

/// The strings of `{0,1}^d` sharing a fixed `level`-bit prefix.
///
/// `prefix` is the integer value of the shared prefix (0 at level 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FundamentalInterval {
    pub dim: u32,
    pub level: u32,
    pub prefix: u64,
}

impl FundamentalInterval {
    pub fn new(dim: u32, level: u32, prefix: u64) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return invalid(format!("dimension {dim} outside 1..={MAX_DIM}"));
        }
        if level > dim {
            return invalid(format!("level {level} above dimension {dim}"));
        }
        if prefix >> level != 0 {
            return invalid(format!("prefix {prefix} longer than {level} bits"));
        }
        Ok(Self { dim, level, prefix })
    }

    /// The interval at `level` containing `x`.
    pub fn containing(x: BitString, level: u32) -> Result<Self> {
        Self::new(x.len(), level, if level == 0 { 0 } else { x.value() >> (x.len() - level) })
    }

    pub fn size(&self) -> u64 {
        1u64 << (self.dim - self.level)
    }

    /// Integer values of the members, which are contiguous.
    pub fn range(&self) -> Range<u64> {
        let lo = self.prefix << (self.dim - self.level);
        lo..lo + self.size()
    }

    pub fn contains(&self, x: BitString) -> bool {
        x.len() == self.dim && self.range().contains(&x.value())
    }

    pub fn min(&self) -> BitString {
        BitString::from_raw(self.dim, self.range().start)
    }

    pub fn max(&self) -> BitString {
        BitString::from_raw(self.dim, self.range().end - 1)
    }

    pub fn members(&self) -> impl Iterator<Item = BitString> + '_ {
        self.range().map(move |v| BitString::from_raw(self.dim, v))
    }

    fn half(&self, bit: u64) -> Result<Self> {
        if self.level >= self.dim {
            return invalid(format!("interval at level {} has no halves", self.level));
        }
        Ok(Self { dim: self.dim, level: self.level + 1, prefix: (self.prefix << 1) | bit })
    }

    /// Half whose `(level+1)`-th bit is 0.
    pub fn lhs(&self) -> Result<Self> {
        self.half(0)
    }

    /// Half whose `(level+1)`-th bit is 1.
    pub fn rhs(&self) -> Result<Self> {
        self.half(1)
    }

    /// The level-`(level-1)` interval this one is a half of.
    pub fn parent(&self) -> Result<Self> {
        if self.level == 0 {
            return invalid("the whole cube has no parent");
        }
        Ok(Self { dim: self.dim, level: self.level - 1, prefix: self.prefix >> 1 })
    }

    pub fn prefix_string(&self) -> String {
        if self.level == 0 {
            String::new()
        } else {
            format!("{:0w$b}", self.prefix, w = self.level as usize)
        }
    }
}

/// The `2^level` fundamental intervals at `level`, in order.
pub fn fundamental_partition(dim: u32, level: u32) -> Result<Vec<FundamentalInterval>> {
    FundamentalInterval::new(dim, level, 0)?;
    if level > 24 {
        return invalid(format!("refusing to list 2^{level} intervals"));
    }
    Ok((0..1u64 << level).map(|prefix| FundamentalInterval { dim, level, prefix }).collect())
}
