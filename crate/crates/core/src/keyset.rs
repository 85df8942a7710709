//! Sorted, duplicate-free string key spaces.
//!
//! Keys are packed into one contiguous buffer with an end-offset table, so a
//! key set of a few million short labels costs two allocations rather than
//! one per key. Order is byte-lexicographic.

use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct KeySet {
    data: String,
    ends: Vec<usize>,
}

impl KeySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a key set from arbitrary keys, sorting and removing duplicates.
    pub fn from_keys<I, S>(keys: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let owned: Vec<S> = keys.into_iter().collect();
        let mut refs: Vec<&str> = owned.iter().map(AsRef::as_ref).collect();
        refs.sort_unstable();
        refs.dedup();
        Self::from_sorted_unique(refs)
    }

    /// Builds a key set from keys already in strictly increasing order.
    pub(crate) fn from_sorted_unique<'a, I>(keys: I) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut set = KeySet::new();
        for k in keys {
            debug_assert!(set.last().is_none_or(|last| last < k));
            set.push_key(k);
        }
        set
    }

    #[inline]
    pub(crate) fn push_key(&mut self, key: &str) {
        self.data.push_str(key);
        self.ends.push(self.data.len());
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ends.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    #[inline]
    fn start(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.ends[i - 1]
        }
    }

    /// Key at rank `i`. Panics when out of range.
    #[inline]
    pub fn get(&self, i: usize) -> &str {
        &self.data[self.start(i)..self.ends[i]]
    }

    pub fn last(&self) -> Option<&str> {
        self.len().checked_sub(1).map(|i| self.get(i))
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Rank of `key`, or `None` if absent. O(log n).
    pub fn rank(&self, key: &str) -> Option<usize> {
        self.search(key).ok()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.rank(key).is_some()
    }

    fn search(&self, key: &str) -> Result<usize, usize> {
        self.search_from(0, key)
    }

    /// Galloping search restricted to ranks `>= from`; cheap when the key
    /// sits close to `from`.
    fn search_from(&self, from: usize, key: &str) -> Result<usize, usize> {
        let n = self.len();
        let mut lo = from;
        let mut step = 1;
        while lo + step < n && self.get(lo + step - 1) < key {
            lo += step;
            step *= 2;
        }
        let mut hi = (lo + step).min(n);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            match self.get(mid).cmp(key) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Ok(mid),
            }
        }
        Err(lo)
    }

    /// Appends ranks `[from, to)` of `src` verbatim.
    fn extend_from_range(&mut self, src: &KeySet, from: usize, to: usize) {
        if from == to {
            return;
        }
        let (lo, hi) = (src.start(from), src.ends[to - 1]);
        let shift = self.data.len() as isize - lo as isize;
        self.data.push_str(&src.data[lo..hi]);
        self.ends.extend(
            src.ends[from..to]
                .iter()
                .map(|&e| (e as isize + shift) as usize),
        );
    }

    /// Sorted union of two key sets, with the rank of every input key in the
    /// union.
    ///
    /// The smaller side is binary-searched into the larger one so that merging
    /// a small batch into a large array copies the large side's keys in bulk.
    pub(crate) fn union(&self, other: &KeySet) -> (KeySet, Vec<u32>, Vec<u32>) {
        if self.len() < other.len() {
            let (u, b, a) = other.union(self);
            return (u, a, b);
        }
        let (big, small) = (self, other);
        let mut out = KeySet {
            data: String::with_capacity(big.data.len() + small.data.len()),
            ends: Vec::with_capacity(big.len() + small.len()),
        };
        let mut map_small = Vec::with_capacity(small.len());
        let mut map_big = Vec::with_capacity(big.len());
        let copy = |out: &mut KeySet, map_big: &mut Vec<u32>, from: usize, to: usize| {
            let base = out.len() as u32;
            out.extend_from_range(big, from, to);
            map_big.extend((0..(to - from) as u32).map(|k| base + k));
        };
        let mut pos = 0;
        for key in small.iter() {
            match big.search_from(pos, key) {
                Ok(at) => {
                    copy(&mut out, &mut map_big, pos, at + 1);
                    pos = at + 1;
                }
                Err(at) => {
                    copy(&mut out, &mut map_big, pos, at);
                    out.push_key(key);
                    pos = at;
                }
            }
            map_small.push((out.len() - 1) as u32);
        }
        copy(&mut out, &mut map_big, pos, big.len());
        (out, map_big, map_small)
    }

    /// Keeps only the ranks flagged in `keep`, returning the compacted set and
    /// the new rank of each kept key (`u32::MAX` for dropped keys).
    pub(crate) fn retain(&self, keep: &[bool]) -> (KeySet, Vec<u32>) {
        debug_assert_eq!(keep.len(), self.len());
        let mut out = KeySet::new();
        let mut remap = Vec::with_capacity(self.len());
        for (i, &k) in keep.iter().enumerate() {
            if k {
                remap.push(out.len() as u32);
                out.push_key(self.get(i));
            } else {
                remap.push(u32::MAX);
            }
        }
        (out, remap)
    }

    /// Approximate heap footprint in bytes.
    pub fn heap_bytes(&self) -> usize {
        self.data.capacity() + self.ends.capacity() * std::mem::size_of::<usize>()
    }
}

impl fmt::Debug for KeySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl<'a> FromIterator<&'a str> for KeySet {
    fn from_iter<T: IntoIterator<Item = &'a str>>(iter: T) -> Self {
        KeySet::from_keys(iter)
    }
}
