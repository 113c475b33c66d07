//! Shared fixtures and naive reference oracles for the integration suites.
//! Everything here deliberately avoids the library's word-parallel paths:
//! the oracles work element-by-element on index vectors.

#![allow(dead_code)]

use std::collections::BTreeSet;

use fca_reduct::bitvec::{BitVec, Word};
use fca_reduct::context::FormalContext;
use fca_reduct::lattice::FormalConcept;

pub const TABLE1: &str = include_str!("../fixtures/table1.cxt");
pub const TABLE3: &str = include_str!("../fixtures/table3.cxt");
pub const TABLE4: &str = include_str!("../fixtures/table4.cxt");
pub const TABLE5: &str = include_str!("../fixtures/table5.cxt");
pub const TABLE6: &str = include_str!("../fixtures/table6.cxt");

pub fn fixture_path(name: &str) -> String {
    format!("{}/tests/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)
}

pub fn ctx_of<W: Word>(text: &str) -> FormalContext<W> {
    FormalContext::parse_cxt(text).expect("fixture parses")
}

pub fn bv<W: Word>(len: usize, idx: &[usize]) -> BitVec<W> {
    BitVec::from_indices(len, idx.iter().copied())
}

pub fn concept<W: Word>(
    ctx: &FormalContext<W>,
    ext: &[usize],
    int: &[usize],
) -> FormalConcept<W> {
    let c = FormalConcept {
        extent: bv(ctx.m(), ext),
        intent: bv(ctx.n(), int),
    };
    assert!(c.is_valid(ctx).unwrap(), "fixture concept must be closed");
    c
}

/// Table 1 concepts in the paper's C0..C10 numbering (0-based indices).
pub fn table2_concepts<W: Word>(ctx: &FormalContext<W>) -> Vec<FormalConcept<W>> {
    vec![
        concept(ctx, &[0, 1, 2, 3, 4, 5, 6], &[]),
        concept(ctx, &[3, 4, 5], &[4]),
        concept(ctx, &[0, 5, 6], &[2]),
        concept(ctx, &[0, 1, 6], &[1]),
        concept(ctx, &[1, 2, 6], &[0]),
        concept(ctx, &[1, 6], &[0, 1]),
        concept(ctx, &[0, 6], &[1, 2]),
        concept(ctx, &[4, 5], &[3, 4]),
        concept(ctx, &[5], &[2, 3, 4]),
        concept(ctx, &[6], &[0, 1, 2]),
        concept(ctx, &[], &[0, 1, 2, 3, 4]),
    ]
}

/// The context as plain booleans, for the naive oracles.
pub fn bool_rows<W: Word>(ctx: &FormalContext<W>) -> Vec<Vec<bool>> {
    (0..ctx.m())
        .map(|g| (0..ctx.n()).map(|a| ctx.incidence(g, a)).collect())
        .collect()
}

/// Naive per-object containment: every object of `x` is incident to `q`.
pub fn naive_column_contains(rows: &[Vec<bool>], q: usize, x: &[usize]) -> bool {
    x.iter().all(|&g| rows[g][q])
}

/// Naive closure of `x` over `active` columns, optionally excluding one:
/// take every eligible column containing `x`, then intersect them
/// object-by-object.
pub fn naive_closure(
    rows: &[Vec<bool>],
    active: &[usize],
    x: &[usize],
    exclude: Option<usize>,
) -> Vec<usize> {
    let intension: Vec<usize> = active
        .iter()
        .copied()
        .filter(|&q| Some(q) != exclude && naive_column_contains(rows, q, x))
        .collect();
    (0..rows.len())
        .filter(|&g| intension.iter().all(|&q| rows[g][q]))
        .collect()
}

pub fn naive_removable(
    rows: &[Vec<bool>],
    active: &[usize],
    q: usize,
    extents: &[Vec<usize>],
) -> bool {
    extents
        .iter()
        .all(|x| naive_closure(rows, active, x, Some(q)) == *x)
}

/// Brute-force concept enumeration: closures of every attribute subset.
pub fn brute_force_concepts<W: Word>(
    ctx: &FormalContext<W>,
) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let n = ctx.n();
    assert!(n <= 20, "oracle is exponential in n");
    let mut out = BTreeSet::new();
    for mask in 0u64..(1 << n) {
        let b: BitVec<W> = BitVec::from_indices(n, (0..n).filter(|a| mask & (1 << a) != 0));
        let extent = ctx.derive_attrs(&b).unwrap();
        let intent = ctx.derive_objects(&extent).unwrap();
        out.insert((extent.to_indices(), intent.to_indices()));
    }
    out
}
