//! Hypersparse associative arrays.
//!
//! An [`AssocArray`] maps `(row key, column key)` pairs to nonzero values of a
//! [`Semiring`]. Only keys that index at least one stored entry are
//! materialized. Entries are stored compressed by row: `row_ptr` spans the
//! materialized row keys only, never the conceptual key universe.
//!
//! All operations return new arrays and keep the representation canonical:
//! sorted keys, sorted unique coordinates, no stored zeros and no unused keys.
//! Two arrays holding the same triples are therefore structurally equal.

use std::fmt;

use crate::error::{Error, Result};
use crate::keyset::KeySet;
use crate::semiring::{Semiring, Value};

/// Parallel row/column/value vectors, the exploded form of an array.
///
/// Duplicate coordinates are allowed; [`AssocArray::construct`] folds them
/// with `⊕` in input order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TripleList {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub vals: Vec<Value>,
}

impl TripleList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        TripleList {
            rows: Vec::with_capacity(n),
            cols: Vec::with_capacity(n),
            vals: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, row: impl Into<String>, col: impl Into<String>, val: Value) {
        self.rows.push(row.into());
        self.cols.push(col.into());
        self.vals.push(val);
    }

    /// Number of triples. Panics in debug builds if the columns disagree.
    pub fn len(&self) -> usize {
        debug_assert!(self.is_well_formed());
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_well_formed(&self) -> bool {
        self.rows.len() == self.cols.len() && self.rows.len() == self.vals.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, Value)> + Clone + '_ {
        self.rows
            .iter()
            .zip(&self.cols)
            .zip(&self.vals)
            .map(|((r, c), &v)| (r.as_str(), c.as_str(), v))
    }

    pub fn extend_from(&mut self, other: &TripleList) {
        self.rows.extend_from_slice(&other.rows);
        self.cols.extend_from_slice(&other.cols);
        self.vals.extend_from_slice(&other.vals);
    }
}

impl<R: Into<String>, C: Into<String>> FromIterator<(R, C, Value)> for TripleList {
    fn from_iter<T: IntoIterator<Item = (R, C, Value)>>(iter: T) -> Self {
        let mut t = TripleList::new();
        for (r, c, v) in iter {
            t.push(r, c, v);
        }
        t
    }
}

/// Row or column selection for [`AssocArray::extract`].
#[derive(Clone, Debug, PartialEq)]
pub enum KeySelection {
    All,
    Keys(KeySet),
}

impl KeySelection {
    pub fn keys<I, S>(keys: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        KeySelection::Keys(KeySet::from_keys(keys))
    }

    fn flags(&self, space: &KeySet) -> Option<Vec<bool>> {
        match self {
            KeySelection::All => None,
            KeySelection::Keys(sel) => Some(space.iter().map(|k| sel.contains(k)).collect()),
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct AssocArray {
    semiring: Semiring,
    rows: KeySet,
    cols: KeySet,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    vals: Vec<Value>,
}

impl AssocArray {
    pub fn empty(semiring: Semiring) -> Self {
        AssocArray {
            semiring,
            rows: KeySet::new(),
            cols: KeySet::new(),
            row_ptr: vec![0],
            col_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    /// Builds an array from exploded triples.
    ///
    /// Duplicate coordinates are folded with `⊕` in input order and entries
    /// that fold to the semiring zero are dropped.
    pub fn construct(triples: &TripleList, semiring: Semiring) -> Result<Self> {
        if !triples.is_well_formed() {
            return Err(Error::MalformedTriples(format!(
                "length mismatch: {} rows, {} cols, {} vals",
                triples.rows.len(),
                triples.cols.len(),
                triples.vals.len()
            )));
        }
        Self::from_triples(triples.iter(), semiring)
    }

    /// Like [`construct`](Self::construct), from any iterator of triples.
    pub fn from_triples<'a, I>(triples: I, semiring: Semiring) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, Value)>,
    {
        let entries: Vec<(&str, &str, Value)> = triples.into_iter().collect();
        for &(_, _, v) in &entries {
            semiring.validate(v)?;
        }
        if entries.is_empty() {
            return Ok(Self::empty(semiring));
        }

        let (rows, row_of) = rank_keys(entries.iter().map(|e| e.0));
        let (cols, col_of) = rank_keys(entries.iter().map(|e| e.1));

        // Packed (row, col) coordinate plus input position; sorting puts
        // duplicates next to each other; the sort is stable, so in input order.
        let mut order: Vec<(u64, u32)> = (0..entries.len())
            .map(|i| (((row_of[i] as u64) << 32) | col_of[i] as u64, i as u32))
            .collect();
        radsort::sort_by_key(&mut order, |o| o.0);

        let mut row_ptr = vec![0usize; rows.len() + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut vals = Vec::with_capacity(entries.len());
        let mut dropped = false;
        let mut k = 0;
        while k < order.len() {
            let coord = order[k].0;
            let mut acc = entries[order[k].1 as usize].2;
            k += 1;
            while k < order.len() && order[k].0 == coord {
                acc = semiring.plus(acc, entries[order[k].1 as usize].2);
                k += 1;
            }
            if semiring.is_zero(acc) {
                dropped = true;
                continue;
            }
            row_ptr[(coord >> 32) as usize + 1] += 1;
            col_idx.push(coord as u32);
            vals.push(acc);
        }
        for i in 0..rows.len() {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self::finish(
            semiring, rows, cols, row_ptr, col_idx, vals, dropped,
        ))
    }

    /// `𝕀(k1, k2)`: ones at `(k1[i], k2[i])`, at most one per row and column.
    pub fn identity_from_keys<S: AsRef<str>>(
        row_keys: &[S],
        col_keys: &[S],
        semiring: Semiring,
    ) -> Result<Self> {
        if row_keys.len() != col_keys.len() {
            return Err(Error::MalformedTriples(format!(
                "identity needs equal key counts, got {} and {}",
                row_keys.len(),
                col_keys.len()
            )));
        }
        let mut pairs: Vec<(&str, &str)> = row_keys
            .iter()
            .zip(col_keys)
            .map(|(r, c)| (r.as_ref(), c.as_ref()))
            .collect();
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedTriples(format!(
                "duplicate identity coordinate ({}, {})",
                w[0].0, w[0].1
            )));
        }
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::MalformedTriples(format!(
                "row key '{}' repeated; identity allows one nonzero per row",
                w[0].0
            )));
        }
        let mut cols: Vec<&str> = pairs.iter().map(|p| p.1).collect();
        cols.sort_unstable();
        if let Some(w) = cols.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedTriples(format!(
                "column key '{}' repeated; identity allows one nonzero per column",
                w[0]
            )));
        }
        let one = semiring.one();
        Self::from_triples(pairs.into_iter().map(|(r, c)| (r, c, one)), semiring)
    }

    /// `𝕀(k) = 𝕀(k, k)`, the identity on key set `k`.
    pub fn identity<S: AsRef<str>>(keys: &[S], semiring: Semiring) -> Result<Self> {
        Self::identity_from_keys(keys, keys, semiring)
    }

    /// The array holding `1` at exactly this array's stored coordinates.
    pub fn ones_on_support(&self) -> Self {
        let mut out = self.clone();
        let one = self.semiring.one();
        out.vals.iter_mut().for_each(|v| *v = one);
        out
    }

    fn check_semiring(&self, other: &AssocArray) -> Result<()> {
        if self.semiring == other.semiring {
            Ok(())
        } else {
            Err(Error::SemiringMismatch {
                left: self.semiring.name(),
                right: other.semiring.name(),
            })
        }
    }

    /// Element-wise `A ⊕ B` over the union of stored coordinates.
    pub fn ew_add(&self, other: &AssocArray) -> Result<Self> {
        self.check_semiring(other)?;
        if other.is_empty() {
            return Ok(self.clone());
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        let s = self.semiring;
        let (rows, ra, rb) = self.rows.union(&other.rows);
        let (cols, ca, cb) = self.cols.union(&other.cols);
        let map_a = (cols.len() != self.cols.len()).then_some(ca.as_slice());
        let map_b = (cols.len() != other.cols.len()).then_some(cb.as_slice());
        let remap = |m: Option<&[u32]>, j: u32| m.map_or(j, |m| m[j as usize]);

        let cap = self.nnz() + other.nnz();
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut col_idx = Vec::with_capacity(cap);
        let mut vals = Vec::with_capacity(cap);
        let mut dropped = false;
        row_ptr.push(0);

        let (mut ia, mut ib) = (0, 0);
        for r in 0..rows.len() as u32 {
            let a_here = ia < ra.len() && ra[ia] == r;
            let b_here = ib < rb.len() && rb[ib] == r;
            match (a_here, b_here) {
                (true, false) => {
                    let span = self.row_span(ia);
                    col_idx.extend(self.col_idx[span.clone()].iter().map(|&j| remap(map_a, j)));
                    vals.extend_from_slice(&self.vals[span]);
                }
                (false, true) => {
                    let span = other.row_span(ib);
                    col_idx.extend(other.col_idx[span.clone()].iter().map(|&j| remap(map_b, j)));
                    vals.extend_from_slice(&other.vals[span]);
                }
                (true, true) => {
                    let (sa, sb) = (self.row_span(ia), other.row_span(ib));
                    let (mut p, mut q) = (sa.start, sb.start);
                    while p < sa.end || q < sb.end {
                        let ja = (p < sa.end).then(|| remap(map_a, self.col_idx[p]));
                        let jb = (q < sb.end).then(|| remap(map_b, other.col_idx[q]));
                        let (j, v) = match (ja, jb) {
                            (Some(x), Some(y)) if x == y => {
                                let v = s.plus(self.vals[p], other.vals[q]);
                                p += 1;
                                q += 1;
                                (x, v)
                            }
                            (Some(x), Some(y)) if x < y => {
                                p += 1;
                                (x, self.vals[p - 1])
                            }
                            (Some(x), None) => {
                                p += 1;
                                (x, self.vals[p - 1])
                            }
                            (_, Some(y)) => {
                                q += 1;
                                (y, other.vals[q - 1])
                            }
                            (None, None) => unreachable!(),
                        };
                        if s.is_zero(v) {
                            dropped = true;
                        } else {
                            col_idx.push(j);
                            vals.push(v);
                        }
                    }
                }
                (false, false) => unreachable!("union row without a source"),
            }
            ia += a_here as usize;
            ib += b_here as usize;
            row_ptr.push(col_idx.len());
        }
        Ok(Self::finish(s, rows, cols, row_ptr, col_idx, vals, dropped))
    }

    /// Element-wise `A ⊗ B` over the intersection of stored coordinates.
    pub fn ew_mult(&self, other: &AssocArray) -> Result<Self> {
        self.check_semiring(other)?;
        let s = self.semiring;
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty(s));
        }
        // Result lives in this array's key spaces, then gets compacted.
        let col_in_other: Vec<Option<u32>> = self
            .cols
            .iter()
            .map(|k| other.cols.rank(k).map(|j| j as u32))
            .collect();
        let mut row_ptr = Vec::with_capacity(self.rows.len() + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for (i, key) in self.rows.iter().enumerate() {
            if let Some(oi) = other.rows.rank(key) {
                let ob = other.row_span(oi);
                let ocols = &other.col_idx[ob.clone()];
                for p in self.row_span(i) {
                    let Some(oj) = col_in_other[self.col_idx[p] as usize] else {
                        continue;
                    };
                    if let Ok(q) = ocols.binary_search(&oj) {
                        let v = s.times(self.vals[p], other.vals[ob.start + q]);
                        if !s.is_zero(v) {
                            col_idx.push(self.col_idx[p]);
                            vals.push(v);
                        }
                    }
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self::finish(
            s,
            self.rows.clone(),
            self.cols.clone(),
            row_ptr,
            col_idx,
            vals,
            true,
        ))
    }

    /// Array multiply `A ⊕.⊗ B`, contracting this array's column keys against
    /// `other`'s row keys by string equality.
    pub fn array_mult(&self, other: &AssocArray) -> Result<Self> {
        self.check_semiring(other)?;
        let s = self.semiring;
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty(s));
        }
        let inner: Vec<Option<usize>> = self.cols.iter().map(|k| other.rows.rank(k)).collect();

        // Gustavson row-by-row with a sparse accumulator over `other`'s columns.
        let width = other.cols.len();
        let mut acc = vec![0.0; width];
        let mut seen = vec![false; width];
        let mut touched: Vec<u32> = Vec::new();

        let mut row_ptr = Vec::with_capacity(self.rows.len() + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..self.rows.len() {
            for p in self.row_span(i) {
                let Some(k) = inner[self.col_idx[p] as usize] else {
                    continue;
                };
                let a = self.vals[p];
                for q in other.row_span(k) {
                    let j = other.col_idx[q];
                    let prod = s.times(a, other.vals[q]);
                    let slot = j as usize;
                    if seen[slot] {
                        acc[slot] = s.plus(acc[slot], prod);
                    } else {
                        seen[slot] = true;
                        acc[slot] = prod;
                        touched.push(j);
                    }
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                let slot = j as usize;
                if !s.is_zero(acc[slot]) {
                    col_idx.push(j);
                    vals.push(acc[slot]);
                }
                seen[slot] = false;
            }
            touched.clear();
            row_ptr.push(col_idx.len());
        }
        Ok(Self::finish(
            s,
            self.rows.clone(),
            other.cols.clone(),
            row_ptr,
            col_idx,
            vals,
            true,
        ))
    }

    /// `Aᵀ`: swaps key spaces and coordinates.
    pub fn transpose(&self) -> Self {
        let nrows = self.cols.len();
        let mut row_ptr = vec![0usize; nrows + 1];
        for &j in &self.col_idx {
            row_ptr[j as usize + 1] += 1;
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut next = row_ptr.clone();
        let mut col_idx = vec![0u32; self.nnz()];
        let mut vals = vec![0.0; self.nnz()];
        // Visiting source rows in order leaves each output row sorted.
        for i in 0..self.rows.len() {
            for p in self.row_span(i) {
                let j = self.col_idx[p] as usize;
                col_idx[next[j]] = i as u32;
                vals[next[j]] = self.vals[p];
                next[j] += 1;
            }
        }
        AssocArray {
            semiring: self.semiring,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            row_ptr,
            col_idx,
            vals,
        }
    }

    /// Subarray restricted to the selected keys. Unknown keys are ignored.
    pub fn extract(&self, rows: &KeySelection, cols: &KeySelection) -> Self {
        let row_keep = rows.flags(&self.rows);
        let col_keep = cols.flags(&self.cols);
        if row_keep.is_none() && col_keep.is_none() {
            return self.clone();
        }
        let mut row_ptr = Vec::with_capacity(self.rows.len() + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..self.rows.len() {
            if row_keep.as_ref().is_none_or(|k| k[i]) {
                for p in self.row_span(i) {
                    let j = self.col_idx[p];
                    if col_keep.as_ref().is_none_or(|k| k[j as usize]) {
                        col_idx.push(j);
                        vals.push(self.vals[p]);
                    }
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self::finish(
            self.semiring,
            self.rows.clone(),
            self.cols.clone(),
            row_ptr,
            col_idx,
            vals,
            true,
        )
    }

    /// Number of stored entries.
    #[inline]
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn row_keys(&self) -> &KeySet {
        &self.rows
    }

    pub fn col_keys(&self) -> &KeySet {
        &self.cols
    }

    /// Stored value at `(row, col)`, or `None` for an implicit zero.
    pub fn get(&self, row: &str, col: &str) -> Option<Value> {
        let i = self.rows.rank(row)?;
        let j = self.cols.rank(col)? as u32;
        let span = self.row_span(i);
        self.col_idx[span.clone()]
            .binary_search(&j)
            .ok()
            .map(|q| self.vals[span.start + q])
    }

    /// Stored entries in `(row, col)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, Value)> + Clone + '_ {
        (0..self.rows.len()).flat_map(move |i| {
            let row = self.rows.get(i);
            self.row_span(i)
                .map(move |p| (row, self.cols.get(self.col_idx[p] as usize), self.vals[p]))
        })
    }

    pub fn to_triples(&self) -> TripleList {
        self.iter().collect()
    }

    /// Element-wise comparison with relative tolerance on values. Key
    /// structure must match exactly.
    pub fn approx_eq(&self, other: &AssocArray, rel_tol: f64) -> bool {
        self.semiring == other.semiring
            && self.rows == other.rows
            && self.cols == other.cols
            && self.row_ptr == other.row_ptr
            && self.col_idx == other.col_idx
            && self
                .vals
                .iter()
                .zip(&other.vals)
                .all(|(&a, &b)| a == b || (a - b).abs() <= rel_tol * a.abs().max(b.abs()))
    }

    /// Approximate heap footprint in bytes.
    pub fn heap_bytes(&self) -> usize {
        self.rows.heap_bytes()
            + self.cols.heap_bytes()
            + self.row_ptr.capacity() * std::mem::size_of::<usize>()
            + self.col_idx.capacity() * std::mem::size_of::<u32>()
            + self.vals.capacity() * std::mem::size_of::<Value>()
    }

    /// Verifies the canonical-representation invariants, describing the first
    /// violation found.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let s = self.semiring;
        if self.row_ptr.len() != self.rows.len() + 1 || self.row_ptr[0] != 0 {
            return Err("row pointer length".into());
        }
        if *self.row_ptr.last().unwrap() != self.nnz() || self.col_idx.len() != self.nnz() {
            return Err("row pointer does not cover all entries".into());
        }
        let mut used = vec![false; self.cols.len()];
        for i in 0..self.rows.len() {
            let span = self.row_span(i);
            if span.is_empty() {
                return Err(format!("row '{}' has no entries", self.rows.get(i)));
            }
            let cols = &self.col_idx[span.clone()];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("row '{}' not strictly sorted", self.rows.get(i)));
            }
            for &j in cols {
                match used.get_mut(j as usize) {
                    Some(u) => *u = true,
                    None => return Err(format!("column index {j} out of range")),
                }
            }
            if let Some(v) = self.vals[span]
                .iter()
                .find(|v| s.is_zero(**v) || v.is_nan())
            {
                return Err(format!(
                    "stored zero or NaN {v} in row '{}'",
                    self.rows.get(i)
                ));
            }
        }
        if let Some(j) = used.iter().position(|u| !u) {
            return Err(format!("column '{}' has no entries", self.cols.get(j)));
        }
        for ks in [&self.rows, &self.cols] {
            if ks.iter().zip(ks.iter().skip(1)).any(|(a, b)| a >= b) {
                return Err("key set not strictly increasing".into());
            }
        }
        Ok(())
    }

    #[inline]
    fn row_span(&self, i: usize) -> std::ops::Range<usize> {
        self.row_ptr[i]..self.row_ptr[i + 1]
    }

    /// Assembles an array from CSR parts over candidate key sets, dropping
    /// empty rows and unused columns when `may_shrink` is set.
    fn finish(
        semiring: Semiring,
        rows: KeySet,
        cols: KeySet,
        row_ptr: Vec<usize>,
        col_idx: Vec<u32>,
        vals: Vec<Value>,
        may_shrink: bool,
    ) -> Self {
        let mut out = AssocArray {
            semiring,
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
        };
        if may_shrink {
            out.compact_keys();
        }
        // Full check is O(nnz); keep debug builds usable on benchmark-sized arrays.
        if cfg!(debug_assertions) && out.nnz() <= 1 << 16 {
            assert_eq!(out.check_invariants(), Ok(()));
        }
        out
    }

    fn compact_keys(&mut self) {
        if self.vals.is_empty() {
            *self = Self::empty(self.semiring);
            return;
        }
        let row_keep: Vec<bool> = (0..self.rows.len())
            .map(|i| !self.row_span(i).is_empty())
            .collect();
        if row_keep.iter().any(|k| !k) {
            let (rows, _) = self.rows.retain(&row_keep);
            let mut row_ptr = Vec::with_capacity(rows.len() + 1);
            row_ptr.push(0);
            row_ptr.extend(
                (0..self.rows.len())
                    .filter(|&i| row_keep[i])
                    .map(|i| self.row_ptr[i + 1]),
            );
            self.rows = rows;
            self.row_ptr = row_ptr;
        }
        let mut col_used = vec![false; self.cols.len()];
        for &j in &self.col_idx {
            col_used[j as usize] = true;
        }
        if col_used.iter().any(|u| !u) {
            let (cols, remap) = self.cols.retain(&col_used);
            for j in &mut self.col_idx {
                *j = remap[*j as usize];
            }
            self.cols = cols;
        }
    }
}

/// Sorted unique keys plus the rank of each input key.
fn rank_keys<'a>(keys: impl ExactSizeIterator<Item = &'a str>) -> (KeySet, Vec<u32>) {
    let keys: Vec<&str> = keys.collect();
    // Keys that fit in an integer prefix (with no NUL padding ambiguity) are
    // sorted as integers and rebuilt from them, so the string bytes are never
    // revisited in sorted, cache-hostile order.
    let longest = keys.iter().map(|k| k.len()).max().unwrap_or(0);
    let has_nul = || keys.iter().any(|k| k.as_bytes().contains(&0));
    if longest <= 8 && !has_nul() {
        return rank_short(&keys, |k| u64::from_be_bytes(pad(k)), |p| p.to_be_bytes());
    }
    if longest <= 16 && !has_nul() {
        return rank_short(&keys, |k| u128::from_be_bytes(pad(k)), |p| p.to_be_bytes());
    }

    let mut tagged: Vec<(u128, u32)> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (u128::from_be_bytes(pad(k)), i as u32))
        .collect();
    radsort::sort_by_key(&mut tagged, |t| t.0);
    let mut i = 0;
    while i < tagged.len() {
        let mut j = i + 1;
        while j < tagged.len() && tagged[j].0 == tagged[i].0 {
            j += 1;
        }
        if j - i > 1 {
            tagged[i..j].sort_by(|a, b| keys[a.1 as usize].cmp(keys[b.1 as usize]));
        }
        i = j;
    }
    let mut set = KeySet::new();
    let mut rank = vec![0u32; keys.len()];
    let mut prev: Option<&str> = None;
    for (_, i) in tagged {
        let k = keys[i as usize];
        if prev != Some(k) {
            set.push_key(k);
            prev = Some(k);
        }
        rank[i as usize] = (set.len() - 1) as u32;
    }
    (set, rank)
}

fn rank_short<P, const N: usize>(
    keys: &[&str],
    prefix: impl Fn(&str) -> P,
    bytes: impl Fn(P) -> [u8; N],
) -> (KeySet, Vec<u32>)
where
    P: radsort::Key + Copy + PartialEq,
{
    let mut tagged: Vec<(P, u32)> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (prefix(k), i as u32))
        .collect();
    radsort::sort_by_key(&mut tagged, |t| t.0);
    let mut set = KeySet::new();
    let mut rank = vec![0u32; keys.len()];
    let mut prev = None;
    for (p, i) in tagged {
        if prev != Some(p) {
            let b = bytes(p);
            let len = b.iter().rposition(|&c| c != 0).map_or(0, |at| at + 1);
            set.push_key(std::str::from_utf8(&b[..len]).expect("prefix of a str"));
            prev = Some(p);
        }
        rank[i as usize] = (set.len() - 1) as u32;
    }
    (set, rank)
}

/// Big-endian zero-padded prefix of `k`.
#[inline]
fn pad<const N: usize>(k: &str) -> [u8; N] {
    let mut buf = [0u8; N];
    let n = k.len().min(N);
    buf[..n].copy_from_slice(&k.as_bytes()[..n]);
    buf
}

impl fmt::Debug for AssocArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AssocArray<{}>", self.semiring)?;
        f.debug_list().entries(self.iter()).finish()
    }
}
