//! Subsets of `{0, 1, ..., n-1}` in canonical (strictly increasing) form.
//!
//! Index sets name the rows that a weaving takes from the first basis, the
//! central submatrices of the classifiers, and the witnesses reported in
//! certificates. Indices are 0-based everywhere. The internal enumeration
//! loops work on raw bitmasks in ascending order; this type is the public
//! currency and supports ambient sizes beyond the 64-bit mask range.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A subset of `{0, ..., n-1}`, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IndexSet {
    n: usize,
    members: Vec<usize>,
}

impl IndexSet {
    /// Builds a subset of `{0, ..., n-1}`. Members are sorted and duplicates
    /// collapse; an out-of-range member is an error.
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&m| m >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        Ok(Self { n, members })
    }

    /// The empty subset of an ambient `n`.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            members: Vec::new(),
        }
    }

    /// The full subset `{0, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        Self {
            n,
            members: (0..n).collect(),
        }
    }

    /// Decodes a bitmask (bit `i` set means `i` is a member). Requires
    /// `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > 64 {
            return Err(Error::InvalidArgument(format!(
                "bitmask construction requires n <= 64, got {n}"
            )));
        }
        if n < 64 && mask >> n != 0 {
            return Err(Error::IndexOutOfRange {
                index: 63 - mask.leading_zeros() as usize,
                n,
            });
        }
        let members = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        Ok(Self { n, members })
    }

    /// Encodes the subset as a bitmask. Requires `n <= 64`.
    pub fn mask(&self) -> Result<u64> {
        if self.n > 64 {
            return Err(Error::InvalidArgument(format!(
                "bitmask encoding requires n <= 64, got {}",
                self.n
            )));
        }
        Ok(self.members.iter().fold(0u64, |m, &i| m | 1 << i))
    }

    /// Ambient size `n`.
    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    /// Members in increasing order, as a slice.
    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    /// The complement within `{0, ..., n-1}`.
    pub fn complement(&self) -> Self {
        let members = (0..self.n).filter(|&i| !self.contains(i)).collect();
        Self {
            n: self.n,
            members,
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// All nonempty subset bitmasks of `{0, ..., n-1}` in ascending order.
pub fn nonempty_masks(n: usize) -> impl Iterator<Item = u64> {
    debug_assert!(n >= 1 && n <= 63);
    1..(1u64 << n)
}

/// Ascending bitmasks of the subsets of `{0, ..., n-1}` that contain 0.
pub fn masks_containing_zero(n: usize) -> impl Iterator<Item = u64> {
    debug_assert!(n >= 1 && n <= 63);
    (0..(1u64 << (n - 1))).map(|m| (m << 1) | 1)
}
