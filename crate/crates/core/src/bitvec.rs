//! Fixed-length packed bit vectors.
//!
//! [`BitVec`] is the carrier for object sets, attribute sets, and context
//! rows/columns. Bit `i` lives in word `i / W::BITS` at position
//! `i % W::BITS` (least-significant bit first), so the vector with ones at
//! positions 0..8 packs to a first word of value 255. All bits at positions
//! `>= len` are kept zero.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{BitAndAssign, BitOrAssign, BitXorAssign};

use num_traits::{PrimInt, Unsigned};

/// Machine word backing a [`BitVec`]. Implemented for `u32` and `u64`.
pub trait Word:
    PrimInt
    + Unsigned
    + BitAndAssign
    + BitOrAssign
    + BitXorAssign
    + Hash
    + fmt::Debug
    + Default
    + Send
    + Sync
    + 'static
{
    const BITS: usize;
}

impl Word for u32 {
    const BITS: usize = 32;
}

impl Word for u64 {
    const BITS: usize = 64;
}

/// A fixed-length bit vector packed into words of type `W`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec<W: Word = u32> {
    len: usize,
    words: Vec<W>,
}

fn word_count<W: Word>(len: usize) -> usize {
    (len + W::BITS - 1) / W::BITS
}

impl<W: Word> BitVec<W> {
    /// All-zero vector of `len` bits.
    pub fn new(len: usize) -> Self {
        BitVec {
            len,
            words: vec![W::zero(); word_count::<W>(len)],
        }
    }

    /// All-one vector of `len` bits.
    pub fn full(len: usize) -> Self {
        let mut v = BitVec {
            len,
            words: vec![!W::zero(); word_count::<W>(len)],
        };
        v.mask_tail();
        v
    }

    /// Vector with the given bit positions set.
    ///
    /// Panics if any index is `>= len`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut v = Self::new(len);
        for i in indices {
            v.insert(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::new(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.insert(i);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// True when no bit is set.
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| w.is_zero())
    }

    pub fn words(&self) -> &[W] {
        &self.words
    }

    fn mask_tail(&mut self) {
        let rem = self.len % W::BITS;
        if rem != 0 {
            let last = self.words.len() - 1;
            let mask = (W::one() << rem) - W::one();
            self.words[last] &= mask;
        }
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {} out of range {}", i, self.len);
        let w = self.words[i / W::BITS];
        !(w & (W::one() << (i % W::BITS))).is_zero()
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit index {} out of range {}", i, self.len);
        self.words[i / W::BITS] |= W::one() << (i % W::BITS);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "bit index {} out of range {}", i, self.len);
        self.words[i / W::BITS] &= !(W::one() << (i % W::BITS));
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn check_len(&self, other: &Self) {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.check_len(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check_len(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.check_len(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.intersect_with(other);
        v
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.union_with(other);
        v
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.difference_with(other);
        v
    }

    pub fn complement(&self) -> Self {
        let mut v = BitVec {
            len: self.len,
            words: self.words.iter().map(|w| !*w).collect(),
        };
        v.mask_tail();
        v
    }

    /// Word-wise containment: `self ⊆ other` iff for every word
    /// `(other & self) == self`.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_len(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| (*b & *a) == *a)
    }

    /// Bits `[0, upto)` of the two vectors are equal.
    pub fn eq_below(&self, other: &Self, upto: usize) -> bool {
        self.check_len(other);
        assert!(upto <= self.len);
        let full = upto / W::BITS;
        let rem = upto % W::BITS;
        if self.words[..full] != other.words[..full] {
            return false;
        }
        if rem == 0 {
            return true;
        }
        let mask = (W::one() << rem) - W::one();
        (self.words[full] & mask) == (other.words[full] & mask)
    }

    pub fn iter_ones(&self) -> IterOnes<'_, W> {
        IterOnes {
            words: &self.words,
            k: 0,
            cur: self.words.first().copied().unwrap_or_else(W::zero),
        }
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }
}

/// Iterator over set bit positions, ascending.
pub struct IterOnes<'a, W: Word> {
    words: &'a [W],
    k: usize,
    cur: W,
}

impl<W: Word> Iterator for IterOnes<'_, W> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.cur.is_zero() {
            self.k += 1;
            if self.k >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.k];
        }
        let bit = self.cur.trailing_zeros() as usize;
        self.cur &= self.cur - W::one();
        Some(self.k * W::BITS + bit)
    }
}

/// Canonical order: the vector read as one big unsigned integer, ascending.
/// Padding bits are zero, so the order is word-width independent.
impl<W: Word> Ord for BitVec<W> {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.words.len().max(other.words.len());
        for k in (0..n).rev() {
            let a = self.words.get(k).copied().unwrap_or_else(W::zero);
            let b = other.words.get(k).copied().unwrap_or_else(W::zero);
            match a.cmp(&b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl<W: Word> PartialOrd for BitVec<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: Word> fmt::Debug for BitVec<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, idx) in self.iter_ones().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", idx)?;
        }
        write!(f, "}}")
    }
}
