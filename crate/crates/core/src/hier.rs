//! Hierarchical associative arrays.
//!
//! A [`HierArray`] is a stack of `N` arrays `A_1 … A_N` with cut thresholds
//! `c_1 < … < c_{N−1}`. Updates land in `A_1`; whenever `nnz(A_i) > c_i` the
//! layer is added into `A_{i+1}` and cleared, visiting layers in ascending
//! order so a cascade can ripple upward within one update. `A_N` is
//! unbounded. Because `⊕` is associative and commutative, the sum of all
//! layers always equals the plain sum of every batch ever submitted.

use std::fmt;
use std::str::FromStr;

use crate::assoc::AssocArray;
use crate::error::{Error, Result};
use crate::semiring::Semiring;

/// First cut of the default geometric schedule.
pub const DEFAULT_FIRST_CUT: usize = 1 << 13;
/// Ratio between consecutive cuts of the default geometric schedule.
pub const DEFAULT_CUT_RATIO: usize = 1 << 5;

/// Strictly increasing positive thresholds `c_1 … c_{N−1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CutSpec(Vec<usize>);

impl CutSpec {
    pub fn new(cuts: Vec<usize>) -> Result<Self> {
        if let Some(&c) = cuts.iter().find(|&&c| c == 0) {
            return Err(Error::Config(format!("cut values must be >= 1, got {c}")));
        }
        if let Some(w) = cuts.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!(
                "cut values must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
        Ok(CutSpec(cuts))
    }

    /// No cuts: a single flat layer.
    pub fn none() -> Self {
        CutSpec(Vec::new())
    }

    /// `c_i = first · ratio^(i−1)` for an array with `layers` layers.
    pub fn geometric(layers: usize, first: usize, ratio: usize) -> Result<Self> {
        if layers == 0 {
            return Err(Error::Config(
                "a hierarchical array needs at least one layer".into(),
            ));
        }
        if ratio < 2 && layers > 2 {
            return Err(Error::Config(format!(
                "cut ratio must be >= 2, got {ratio}"
            )));
        }
        let mut cuts = Vec::with_capacity(layers - 1);
        let mut c = first;
        for _ in 1..layers {
            cuts.push(c);
            c = c
                .checked_mul(ratio)
                .ok_or_else(|| Error::Config("geometric cut schedule overflows".into()))?;
        }
        CutSpec::new(cuts)
    }

    /// Default schedule for a given layer count.
    pub fn with_layers(layers: usize) -> Result<Self> {
        Self::geometric(layers, DEFAULT_FIRST_CUT, DEFAULT_CUT_RATIO)
    }

    /// Few widely spaced cuts: `[2^17, 2^23]`.
    pub fn few_wide() -> Self {
        CutSpec(vec![1 << 17, 1 << 23])
    }

    /// Many closely spaced cuts: `[2^13, 2^16, 2^19, 2^22]`.
    pub fn many_narrow() -> Self {
        CutSpec(vec![1 << 13, 1 << 16, 1 << 19, 1 << 22])
    }

    /// Resolves a named preset (`none`, `few-wide`, `many-narrow`), a
    /// `layers:N` default schedule, or a comma-separated list of integers.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "" | "none" | "0" => return Ok(Self::none()),
            "few-wide" => return Ok(Self::few_wide()),
            "many-narrow" => return Ok(Self::many_narrow()),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("layers:") {
            let n = n
                .parse()
                .map_err(|_| Error::Config(format!("bad layer count in '{s}'")))?;
            return Self::with_layers(n);
        }
        let cuts = s
            .split(',')
            .map(|tok| {
                tok.trim().parse::<usize>().map_err(|_| {
                    Error::Config(format!(
                        "bad cut value '{tok}' in '{s}' (expected none, few-wide, many-narrow, layers:N or a comma list)"
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(cuts)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Number of layers `N = |cuts| + 1`.
    pub fn layers(&self) -> usize {
        self.0.len() + 1
    }
}

impl fmt::Display for CutSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("none");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for CutSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CutSpec::parse(s)
    }
}

/// Per-layer counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LayerStats {
    /// Times this layer was added into the next one and cleared.
    pub cascades: u64,
    /// Total nnz of arrays added into this layer.
    pub absorbed: u64,
}

/// Per-layer nonzero counts plus the nnz of the flushed sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierNnz {
    pub layers: Vec<usize>,
    pub total: usize,
}

#[derive(Clone, Debug)]
pub struct HierArray {
    semiring: Semiring,
    cuts: CutSpec,
    layers: Vec<AssocArray>,
    stats: Vec<LayerStats>,
}

impl HierArray {
    pub fn new(cuts: CutSpec, semiring: Semiring) -> Self {
        let n = cuts.layers();
        HierArray {
            semiring,
            layers: vec![AssocArray::empty(semiring); n],
            stats: vec![LayerStats::default(); n],
            cuts,
        }
    }

    /// Adds `batch` to the bottom layer and cascades any layer that now
    /// exceeds its cut.
    pub fn update(&mut self, batch: AssocArray) -> Result<()> {
        if batch.semiring() != self.semiring {
            return Err(Error::SemiringMismatch {
                left: self.semiring.name(),
                right: batch.semiring().name(),
            });
        }
        self.stats[0].absorbed += batch.nnz() as u64;
        add_into(&mut self.layers[0], batch)?;

        for i in 0..self.cuts.0.len() {
            if self.layers[i].nnz() > self.cuts.0[i] {
                let lower =
                    std::mem::replace(&mut self.layers[i], AssocArray::empty(self.semiring));
                self.stats[i].cascades += 1;
                self.stats[i + 1].absorbed += lower.nnz() as u64;
                add_into(&mut self.layers[i + 1], lower)?;
            }
        }
        debug_assert!(
            self.layer_bound_holds(),
            "layer bound violated: {:?} vs cuts {}",
            self.layer_nnz(),
            self.cuts
        );
        Ok(())
    }

    /// `nnz(A_i) <= c_i` for every bounded layer.
    pub fn layer_bound_holds(&self) -> bool {
        self.layers
            .iter()
            .zip(&self.cuts.0)
            .all(|(layer, &c)| layer.nnz() <= c)
    }

    /// `A_1 ⊕ A_2 ⊕ … ⊕ A_N`, summed left to right. Layers are untouched.
    pub fn flush(&self) -> AssocArray {
        let mut acc = AssocArray::empty(self.semiring);
        for layer in &self.layers {
            acc = acc
                .ew_add(layer)
                .expect("layers share the hierarchy's semiring");
        }
        acc
    }

    /// Replaces the top layer by the flushed sum and clears all others.
    pub fn compact(&mut self) {
        let total = self.flush();
        for layer in &mut self.layers {
            *layer = AssocArray::empty(self.semiring);
        }
        *self.layers.last_mut().expect("at least one layer") = total;
    }

    pub fn layer_nnz(&self) -> Vec<usize> {
        self.layers.iter().map(AssocArray::nnz).collect()
    }

    /// Per-layer counts and the nnz of [`flush`](Self::flush).
    pub fn nnz(&self) -> HierNnz {
        HierNnz {
            layers: self.layer_nnz(),
            total: self.flush().nnz(),
        }
    }

    pub fn layers(&self) -> &[AssocArray] {
        &self.layers
    }

    pub fn cuts(&self) -> &CutSpec {
        &self.cuts
    }

    pub fn stats(&self) -> &[LayerStats] {
        &self.stats
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }
}

fn add_into(layer: &mut AssocArray, incoming: AssocArray) -> Result<()> {
    if layer.is_empty() {
        *layer = incoming;
    } else if !incoming.is_empty() {
        *layer = layer.ew_add(&incoming)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const PT: Semiring = Semiring::PlusTimes;

    fn batch(coords: &[(&str, &str)]) -> AssocArray {
        AssocArray::from_triples(coords.iter().map(|&(r, c)| (r, c, 1.0)), PT).unwrap()
    }

    fn three() -> AssocArray {
        batch(&[("a", "x"), ("b", "y"), ("c", "z")])
    }

    #[test]
    fn new_layers() {
        assert_eq!(HierArray::new(CutSpec::none(), PT).layers().len(), 1);
        let h = HierArray::new(CutSpec::new(vec![1000, 100000]).unwrap(), PT);
        assert_eq!(h.layers().len(), 3);
        assert!(h.layers().iter().all(AssocArray::is_empty));
        assert!(CutSpec::new(vec![100000, 1000]).is_err());
        assert!(CutSpec::new(vec![5, 5]).is_err());
        assert!(CutSpec::new(vec![0, 5]).is_err());
    }

    #[test]
    fn single_cascade() {
        let mut h = HierArray::new(CutSpec::new(vec![2]).unwrap(), PT);
        h.update(three()).unwrap();
        assert_eq!(h.layer_nnz(), [0, 3]);
        assert_eq!(h.stats()[0].cascades, 1);
        assert_eq!(
            h.nnz(),
            HierNnz {
                layers: vec![0, 3],
                total: 3
            }
        );
        assert_eq!(h.flush(), three());
    }

    #[test]
    fn strict_inequality() {
        let mut h = HierArray::new(CutSpec::new(vec![2]).unwrap(), PT);
        h.update(batch(&[("a", "x"), ("b", "y")])).unwrap();
        assert_eq!(h.layer_nnz(), [2, 0]);
        assert_eq!(h.stats()[0].cascades, 0);
    }

    #[test]
    fn cascade_ripples_in_one_pass() {
        let mut h = HierArray::new(CutSpec::new(vec![1, 2]).unwrap(), PT);
        h.update(three()).unwrap();
        assert_eq!(h.layer_nnz(), [0, 0, 3]);
        assert_eq!(h.stats()[0].cascades, 1);
        assert_eq!(h.stats()[1].cascades, 1);
        assert_eq!(h.stats()[2].absorbed, 3);
    }

    #[test]
    fn overlapping_coordinates_collapse() {
        let mut h = HierArray::new(CutSpec::none(), PT);
        h.update(batch(&[("a", "x")])).unwrap();
        h.update(batch(&[("a", "x")])).unwrap();
        assert_eq!(
            h.nnz(),
            HierNnz {
                layers: vec![1],
                total: 1
            }
        );
        assert_eq!(h.flush().get("a", "x"), Some(2.0));
    }

    #[test]
    fn flush_is_read_only_and_compact_preserves_sum() {
        let mut h = HierArray::new(CutSpec::new(vec![1, 4]).unwrap(), PT);
        h.update(batch(&[("a", "x"), ("b", "x")])).unwrap();
        h.update(batch(&[("c", "x")])).unwrap();
        let before = h.layer_nnz();
        let total = h.flush();
        assert_eq!(h.layer_nnz(), before);
        assert_eq!(HierArray::new(CutSpec::none(), PT).flush().nnz(), 0);
        h.compact();
        assert_eq!(h.layer_nnz(), [0, 0, 3]);
        assert_eq!(h.flush(), total);
    }

    #[test]
    fn semiring_mismatch() {
        let mut h = HierArray::new(CutSpec::none(), Semiring::MaxPlus);
        assert!(matches!(
            h.update(three()),
            Err(Error::SemiringMismatch { .. })
        ));
    }

    #[test]
    fn parse_cuts() {
        assert_eq!(
            CutSpec::parse("8192,262144,8388608").unwrap().as_slice(),
            [8192, 262144, 8388608]
        );
        assert_eq!(CutSpec::parse("none").unwrap(), CutSpec::none());
        assert_eq!(
            CutSpec::parse("many-narrow").unwrap(),
            CutSpec::many_narrow()
        );
        assert_eq!(CutSpec::parse("few-wide").unwrap(), CutSpec::few_wide());
        assert_eq!(
            CutSpec::parse("layers:3").unwrap().as_slice(),
            [8192, 8192 * 32]
        );
        assert!(CutSpec::parse("10,x").is_err());
        assert!(CutSpec::parse("10,5").is_err());
        let c = CutSpec::many_narrow();
        assert_eq!(CutSpec::parse(&c.to_string()).unwrap(), c);
        assert_eq!(CutSpec::none().to_string(), "none");
    }
}
