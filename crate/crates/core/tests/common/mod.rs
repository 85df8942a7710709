//! Shared generators and independent oracles for integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use hyperassoc::{AssocArray, Semiring, TripleList};
use rand::rngs::StdRng;
use rand::Rng;

/// Keys `k00 … k{n-1}`.
pub fn key_pool(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("k{i:02}")).collect()
}

/// A small integer valid under `s`; nonnegative for the `*_times` max/min
/// semirings.
pub fn random_value(rng: &mut StdRng, s: Semiring) -> f64 {
    match s {
        Semiring::MaxTimes | Semiring::MinTimes => rng.gen_range(0..=5) as f64,
        _ => rng.gen_range(-5..=5) as f64,
    }
}

/// Random triples over at most `max_keys` row and column keys.
pub fn random_triples(
    rng: &mut StdRng,
    s: Semiring,
    max_keys: usize,
    max_len: usize,
) -> TripleList {
    let pool = key_pool(max_keys);
    let len = rng.gen_range(0..=max_len);
    let mut t = TripleList::with_capacity(len);
    for _ in 0..len {
        let r = &pool[rng.gen_range(0..pool.len())];
        let c = &pool[rng.gen_range(0..pool.len())];
        t.push(r.as_str(), c.as_str(), random_value(rng, s));
    }
    t
}

pub fn random_array(rng: &mut StdRng, s: Semiring, max_keys: usize, max_len: usize) -> AssocArray {
    AssocArray::construct(&random_triples(rng, s, max_keys, max_len), s).unwrap()
}

/// Dense map view: folds duplicate coordinates with ⊕ in input order and
/// drops zeros, without going through the array implementation.
pub type Dense = BTreeMap<(String, String), f64>;

pub fn dense_from_triples(t: &TripleList, s: Semiring) -> Dense {
    let mut m: Dense = BTreeMap::new();
    for (r, c, v) in t.iter() {
        m.entry((r.to_string(), c.to_string()))
            .and_modify(|acc| *acc = s.plus(*acc, v))
            .or_insert(v);
    }
    m.retain(|_, v| !s.is_zero(*v));
    m
}

pub fn dense_of(a: &AssocArray) -> Dense {
    a.iter()
        .map(|(r, c, v)| ((r.to_string(), c.to_string()), v))
        .collect()
}

/// Triple-loop product over the full key cross-product.
pub fn dense_mult(a: &Dense, b: &Dense, s: Semiring) -> Dense {
    let rows: BTreeSet<&String> = a.keys().map(|k| &k.0).collect();
    let inner: BTreeSet<&String> = a
        .keys()
        .map(|k| &k.1)
        .chain(b.keys().map(|k| &k.0))
        .collect();
    let cols: BTreeSet<&String> = b.keys().map(|k| &k.1).collect();
    let get = |m: &Dense, r: &String, c: &String| {
        m.get(&(r.clone(), c.clone())).copied().unwrap_or(s.zero())
    };
    let mut out = Dense::new();
    for &i in &rows {
        for &j in &cols {
            let mut acc = s.zero();
            for &k in &inner {
                acc = s.plus(acc, s.times(get(a, i, k), get(b, k, j)));
            }
            if !s.is_zero(acc) {
                out.insert((i.clone(), j.clone()), acc);
            }
        }
    }
    out
}

/// Exact for min/max algebras, relative tolerance for `plus_times`.
pub fn same(a: &AssocArray, b: &AssocArray, rel_tol: f64) -> bool {
    match a.semiring() {
        Semiring::PlusTimes => a.approx_eq(b, rel_tol),
        _ => a == b,
    }
}
