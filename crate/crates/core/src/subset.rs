//! Subsets of the ground set `[n] = {1, ..., n}` as bitmasks.
//!
//! Item `i` lives on bit `i - 1`. Items are 1-based throughout the public API.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest ground set supported by the dense representations.
pub const MAX_ITEMS: usize = 16;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub const fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The whole ground set `[n]`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ITEMS);
        SubsetMask(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(item: usize) -> Self {
        debug_assert!((1..=MAX_ITEMS).contains(&item));
        SubsetMask(1 << (item - 1))
    }

    pub fn from_items<I: IntoIterator<Item = usize>>(items: I) -> Self {
        items
            .into_iter()
            .fold(SubsetMask::EMPTY, |acc, i| acc.with(i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, item: usize) -> bool {
        (1..=32).contains(&item) && self.0 & (1 << (item - 1)) != 0
    }

    pub fn with(self, item: usize) -> Self {
        SubsetMask(self.0 | (1 << (item - 1)))
    }

    pub fn without(self, item: usize) -> Self {
        SubsetMask(self.0 & !(1 << (item - 1)))
    }

    pub fn complement(self, n: usize) -> Self {
        SubsetMask(!self.0 & Self::full(n).0)
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: SubsetMask) -> bool {
        self.0 & other.0 == 0
    }

    /// True when only the low `n` bits may be set.
    pub fn fits(self, n: usize) -> bool {
        self.is_subset_of(Self::full(n))
    }

    pub fn check(self, n: usize) -> Result<()> {
        if self.fits(n) {
            Ok(())
        } else {
            invalid(format!("subset {self} is not contained in [{n}]"))
        }
    }

    /// Items in increasing order.
    pub fn items(self) -> Items {
        Items(self.0)
    }

    /// Elements of `self` strictly smaller than `item`.
    pub fn below(self, item: usize) -> Self {
        SubsetMask(self.0 & ((1u32 << (item - 1)) - 1))
    }

    /// Image under an item relabelling; `perm[i - 1]` is the new label of item `i`.
    pub fn permute(self, perm: &[usize]) -> Self {
        Self::from_items(self.items().map(|i| perm[i - 1]))
    }

    /// Comma separated items without braces, e.g. `1,2,5`; empty for `{}`.
    pub fn to_list(self) -> String {
        self.items()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses `1,2,5`, `{1,2,5}`, `{}` or the empty string.
    pub fn parse_list(text: &str) -> Result<Self> {
        let t = text.trim();
        let t = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .unwrap_or(t)
            .trim();
        let mut set = SubsetMask::EMPTY;
        if t.is_empty() {
            return Ok(set);
        }
        for part in t.split(',') {
            let item: usize = match part.trim().parse() {
                Ok(i) => i,
                Err(_) => return invalid(format!("bad item `{}` in set `{text}`", part.trim())),
            };
            if item == 0 || item > MAX_ITEMS {
                return invalid(format!("item {item} out of range 1..={MAX_ITEMS}"));
            }
            if set.contains(item) {
                return invalid(format!("item {item} repeated in set `{text}`"));
            }
            set = set.with(item);
        }
        Ok(set)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_list())
    }
}

impl BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: Self) -> Self {
        SubsetMask(self.0 | rhs.0)
    }
}

impl BitAnd for SubsetMask {
    type Output = SubsetMask;
    fn bitand(self, rhs: Self) -> Self {
        SubsetMask(self.0 & rhs.0)
    }
}

impl Sub for SubsetMask {
    type Output = SubsetMask;
    fn sub(self, rhs: Self) -> Self {
        SubsetMask(self.0 & !rhs.0)
    }
}

pub struct Items(u32);

impl Iterator for Items {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz as usize + 1)
    }
}

/// All subsets of `[n]` in increasing integer order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = SubsetMask> {
    (0u32..(1u32 << n)).map(SubsetMask)
}

/// Unordered pairs `i < j` of items outside `set`.
pub fn pairs_outside(n: usize, set: SubsetMask) -> Vec<(usize, usize)> {
    let free: Vec<usize> = set.complement(n).items().collect();
    let mut out = Vec::new();
    for (a, &i) in free.iter().enumerate() {
        for &j in &free[a + 1..] {
            out.push((i, j));
        }
    }
    out
}

/// Unordered triples `i < j < k` of items outside `set`.
pub fn triples_outside(n: usize, set: SubsetMask) -> Vec<(usize, usize, usize)> {
    let free: Vec<usize> = set.complement(n).items().collect();
    let mut out = Vec::new();
    for a in 0..free.len() {
        for b in a + 1..free.len() {
            for c in b + 1..free.len() {
                out.push((free[a], free[b], free[c]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        let s = SubsetMask::from_items([1, 3, 5]);
        assert_eq!(s.to_string(), "{1,3,5}");
        assert_eq!(SubsetMask::parse_list("{1,3,5}").unwrap(), s);
        assert_eq!(SubsetMask::parse_list(" 5, 1 ,3").unwrap(), s);
        assert_eq!(SubsetMask::parse_list("{}").unwrap(), SubsetMask::EMPTY);
        assert!(SubsetMask::parse_list("1,1").is_err());
        assert!(SubsetMask::parse_list("0").is_err());
        assert!(SubsetMask::parse_list("a").is_err());
    }

    #[test]
    fn set_algebra() {
        let a = SubsetMask::from_items([1, 2]);
        let b = SubsetMask::from_items([2, 3]);
        assert_eq!(a | b, SubsetMask::from_items([1, 2, 3]));
        assert_eq!(a & b, SubsetMask::singleton(2));
        assert_eq!(a - b, SubsetMask::singleton(1));
        assert_eq!(a.complement(4), SubsetMask::from_items([3, 4]));
        assert_eq!(
            SubsetMask::from_items([1, 3, 4]).below(4),
            SubsetMask::from_items([1, 3])
        );
        assert!(!SubsetMask::singleton(5).fits(4));
        assert_eq!(a.permute(&[3, 1, 2]), SubsetMask::from_items([3, 1]));
    }

    #[test]
    fn triple_counts() {
        let total: usize = all_subsets(5).map(|s| triples_outside(5, s).len()).sum();
        assert_eq!(total, 40);
        assert_eq!(pairs_outside(4, SubsetMask::singleton(2)).len(), 3);
    }
}
