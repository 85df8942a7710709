//! Deterministic R-MAT (Graph500-style Kronecker) edge streams.
//!
//! Every edge is a pure function of `(seed, edge index)`: its `scale`
//! quadrant choices are drawn from a counter-based hash rather than a
//! sequential generator state, so any batch can be produced on its own and
//! the stream is identical regardless of batching, threads or host.

use std::collections::{HashMap, HashSet};

use crate::assoc::TripleList;
use crate::error::{Error, Result};

/// Graph500 reference quadrant probabilities `(a, b, c, d)`.
pub const GRAPH500_PROBS: [f64; 4] = [0.57, 0.19, 0.19, 0.05];

#[derive(Clone, Debug, PartialEq)]
pub struct RmatConfig {
    /// Vertex count is `2^scale`.
    pub scale: u32,
    pub total_edges: u64,
    pub batch_size: usize,
    /// Quadrant probabilities `(a, b, c, d)`, summing to 1.
    pub probs: [f64; 4],
    pub seed: u64,
}

impl Default for RmatConfig {
    fn default() -> Self {
        RmatConfig {
            scale: 22,
            total_edges: 10_000_000,
            batch_size: 100_000,
            probs: GRAPH500_PROBS,
            seed: 1,
        }
    }
}

impl RmatConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scale > 62 {
            return Err(Error::Config(format!("scale {} exceeds 62", self.scale)));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be >= 1".into()));
        }
        if self.probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Config(format!(
                "quadrant probabilities must be nonnegative, got {:?}",
                self.probs
            )));
        }
        let sum: f64 = self.probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "quadrant probabilities must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }

    pub fn vertices(&self) -> u64 {
        1u64 << self.scale
    }

    /// Decimal digits of the largest vertex id.
    pub fn key_width(&self) -> usize {
        (self.vertices() - 1).to_string().len()
    }

    pub fn num_batches(&self) -> usize {
        self.total_edges.div_ceil(self.batch_size as u64) as usize
    }

    /// Fixed-width zero-padded key for vertex `v`.
    pub fn key(&self, v: u64) -> String {
        format!("{:0width$}", v, width = self.key_width())
    }

    /// Parses a key back to a vertex id in `[0, 2^scale)`.
    pub fn parse_key(&self, key: &str) -> Option<u64> {
        if key.len() != self.key_width() {
            return None;
        }
        key.parse().ok().filter(|&v| v < self.vertices())
    }

    /// Source and destination vertex of edge `index`.
    pub fn edge(&self, index: u64) -> (u64, u64) {
        let [a, b, c, _] = self.probs;
        let (ab, abc) = (a + b, a + b + c);
        let base = mix64(mix64(self.seed) ^ mix64(index.wrapping_add(GOLDEN)));
        let (mut row, mut col) = (0u64, 0u64);
        for level in 0..self.scale as u64 {
            let u = unit(mix64(base.wrapping_add((level + 1).wrapping_mul(GOLDEN))));
            let (r, c) = if u < a {
                (0, 0)
            } else if u < ab {
                (0, 1)
            } else if u < abc {
                (1, 0)
            } else {
                (1, 1)
            };
            row = (row << 1) | r;
            col = (col << 1) | c;
        }
        (row, col)
    }

    /// Batch `k` of the stream, generated independently of the others.
    pub fn batch(&self, k: usize) -> EdgeBatch {
        let start = k as u64 * self.batch_size as u64;
        let end = (start + self.batch_size as u64).min(self.total_edges);
        let mut triples = TripleList::with_capacity(end.saturating_sub(start) as usize);
        for e in start..end {
            let (src, dst) = self.edge(e);
            triples.push(self.key(src), self.key(dst), 1.0);
        }
        EdgeBatch { index: k, triples }
    }
}

/// One group of streamed edges, each with value 1.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeBatch {
    pub index: usize,
    pub triples: TripleList,
}

impl EdgeBatch {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

/// Iterator over the batches of an R-MAT stream.
#[derive(Clone, Debug)]
pub struct RmatStream {
    cfg: RmatConfig,
    next: usize,
}

impl Iterator for RmatStream {
    type Item = EdgeBatch;

    fn next(&mut self) -> Option<EdgeBatch> {
        if self.next >= self.cfg.num_batches() {
            return None;
        }
        self.next += 1;
        Some(self.cfg.batch(self.next - 1))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.cfg.num_batches() - self.next;
        (n, Some(n))
    }
}

impl ExactSizeIterator for RmatStream {}

pub fn rmat_stream(cfg: &RmatConfig) -> Result<RmatStream> {
    cfg.validate()?;
    Ok(RmatStream {
        cfg: cfg.clone(),
        next: 0,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DegreeStats {
    /// Edges per distinct source vertex.
    pub mean_degree: f64,
    /// Largest out-degree.
    pub max_degree: u64,
    /// Distinct vertices seen as source or destination.
    pub distinct_vertices: usize,
}

impl DegreeStats {
    pub fn max_mean_ratio(&self) -> f64 {
        if self.mean_degree == 0.0 {
            0.0
        } else {
            self.max_degree as f64 / self.mean_degree
        }
    }
}

/// Out-degree statistics over a whole edge stream.
pub fn degree_stats<'a, I>(batches: I) -> DegreeStats
where
    I: IntoIterator<Item = &'a EdgeBatch>,
{
    let mut out_degree: HashMap<&str, u64> = HashMap::new();
    let mut vertices: HashSet<&str> = HashSet::new();
    let mut edges = 0u64;
    for b in batches {
        for (src, dst, _) in b.triples.iter() {
            *out_degree.entry(src).or_default() += 1;
            vertices.insert(src);
            vertices.insert(dst);
            edges += 1;
        }
    }
    if edges == 0 {
        return DegreeStats::default();
    }
    DegreeStats {
        mean_degree: edges as f64 / out_degree.len() as f64,
        max_degree: out_degree.values().copied().max().unwrap_or(0),
        distinct_vertices: vertices.len(),
    }
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Top 53 bits as a uniform draw in `[0, 1)`.
#[inline]
fn unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(scale: u32, edges: u64, batch: usize) -> RmatConfig {
        RmatConfig {
            scale,
            total_edges: edges,
            batch_size: batch,
            ..RmatConfig::default()
        }
    }

    #[test]
    fn corner_probability() {
        let cfg = RmatConfig {
            probs: [1.0, 0.0, 0.0, 0.0],
            seed: 99,
            ..small(1, 20, 7)
        };
        for b in rmat_stream(&cfg).unwrap() {
            assert!(b
                .triples
                .iter()
                .all(|(r, c, v)| r == "0" && c == "0" && v == 1.0));
        }
    }

    #[test]
    fn deterministic_and_batching_independent() {
        let cfg = small(10, 1000, 64);
        let a: Vec<_> = rmat_stream(&cfg).unwrap().collect();
        let b: Vec<_> = rmat_stream(&cfg).unwrap().collect();
        assert_eq!(a, b);

        let flat = |bs: Vec<EdgeBatch>| {
            let mut t = TripleList::new();
            bs.iter().for_each(|b| t.extend_from(&b.triples));
            t
        };
        let other: Vec<_> = rmat_stream(&small(10, 1000, 333)).unwrap().collect();
        assert_eq!(flat(a), flat(other));
    }

    #[test]
    fn edge_count_and_short_last_batch() {
        let cfg = small(8, 1050, 100);
        let batches: Vec<_> = rmat_stream(&cfg).unwrap().collect();
        assert_eq!(batches.len(), 11);
        assert_eq!(batches.last().unwrap().len(), 50);
        assert_eq!(batches.iter().map(EdgeBatch::len).sum::<usize>(), 1050);
    }

    #[test]
    fn keys_round_trip() {
        let cfg = small(12, 2000, 500);
        assert_eq!(cfg.key_width(), 4);
        for b in rmat_stream(&cfg).unwrap() {
            for (r, c, _) in b.triples.iter() {
                assert!(cfg.parse_key(r).is_some(), "{r}");
                assert!(cfg.parse_key(c).is_some(), "{c}");
            }
        }
        assert_eq!(cfg.parse_key("4096"), None);
        assert_eq!(small(0, 1, 1).key_width(), 1);
    }

    #[test]
    fn zero_padding_preserves_numeric_order() {
        let cfg = small(22, 1, 1);
        assert_eq!(cfg.key(42), "0000042");
        assert!(cfg.key(9) < cfg.key(10));
    }

    #[test]
    fn seeds_differ() {
        let a = small(16, 100, 100);
        let b = RmatConfig {
            seed: 2,
            ..a.clone()
        };
        assert_ne!(a.batch(0), b.batch(0));
    }

    #[test]
    fn bad_probabilities() {
        let cfg = RmatConfig {
            probs: [0.5, 0.2, 0.2, 0.2],
            ..RmatConfig::default()
        };
        assert!(matches!(rmat_stream(&cfg), Err(Error::Config(_))));
        let cfg = RmatConfig {
            probs: [1.2, -0.2, 0.0, 0.0],
            ..RmatConfig::default()
        };
        assert!(rmat_stream(&cfg).is_err());
    }

    #[test]
    fn degree_stats_examples() {
        assert_eq!(degree_stats(&[]), DegreeStats::default());
        let cfg = RmatConfig {
            probs: [1.0, 0.0, 0.0, 0.0],
            ..small(1, 4, 4)
        };
        let batches: Vec<_> = rmat_stream(&cfg).unwrap().collect();
        let d = degree_stats(&batches);
        assert_eq!(d.max_degree, 4);
        assert_eq!(d.distinct_vertices, 1);
        assert_eq!(d.mean_degree, 4.0);
    }
}
