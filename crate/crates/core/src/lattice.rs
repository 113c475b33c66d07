//! Concept enumeration and the lattice order.
//!
//! Enumeration is Close-by-One over attributes with the canonicity test, so
//! each concept is produced exactly once; recursion depth is bounded by the
//! attribute count. Output order is canonical: extents compared as packed
//! integers, ascending. That order is deterministic across runs and word
//! widths.

use serde::{Deserialize, Serialize};

use crate::bitvec::{BitVec, Word};
use crate::context::FormalContext;
use crate::error::{Error, Result};

pub const DEFAULT_CONCEPT_CAP: usize = 1_000_000;

/// A formal concept: a closed (extent, intent) pair, the maximal rectangle
/// of incidences spanned by them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalConcept<W: Word = u32> {
    pub extent: BitVec<W>,
    pub intent: BitVec<W>,
}

impl<W: Word> FormalConcept<W> {
    /// The rectangle contributes no cells (empty extent or empty intent).
    pub fn is_empty_rectangle(&self) -> bool {
        self.extent.is_zero() || self.intent.is_zero()
    }

    /// Check the defining closure property against `ctx`.
    pub fn is_valid(&self, ctx: &FormalContext<W>) -> Result<bool> {
        Ok(ctx.derive_objects(&self.extent)? == self.intent
            && ctx.derive_attrs(&self.intent)? == self.extent)
    }

    pub fn to_indices(&self) -> ConceptIndices {
        ConceptIndices {
            extent: self.extent.to_indices(),
            intent: self.intent.to_indices(),
        }
    }

    pub fn from_indices(m: usize, n: usize, idx: &ConceptIndices) -> Result<Self> {
        for &g in &idx.extent {
            if g >= m {
                return Err(Error::OutOfRange { index: g, bound: m });
            }
        }
        for &a in &idx.intent {
            if a >= n {
                return Err(Error::OutOfRange { index: a, bound: n });
            }
        }
        Ok(FormalConcept {
            extent: BitVec::from_indices(m, idx.extent.iter().copied()),
            intent: BitVec::from_indices(n, idx.intent.iter().copied()),
        })
    }

    /// Compact human-readable form, e.g. `{1,6,7} / {a3}`.
    pub fn compact(&self, ctx: &FormalContext<W>) -> String {
        let ext: Vec<&str> = self
            .extent
            .iter_ones()
            .map(|g| ctx.object_names()[g].as_str())
            .collect();
        let int: Vec<&str> = self
            .intent
            .iter_ones()
            .map(|a| ctx.attribute_names()[a].as_str())
            .collect();
        format!("{{{}}} / {{{}}}", ext.join(","), int.join(","))
    }
}

/// Index form used for JSON serialization: `{"extent":[..],"intent":[..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptIndices {
    pub extent: Vec<usize>,
    pub intent: Vec<usize>,
}

/// All concepts of a context in canonical order, duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConceptList<W: Word = u32> {
    concepts: Vec<FormalConcept<W>>,
}

impl<W: Word> ConceptList<W> {
    /// Sort into canonical order. Callers must not pass duplicate extents.
    pub fn from_concepts(mut concepts: Vec<FormalConcept<W>>) -> Self {
        concepts.sort_by(|a, b| a.extent.cmp(&b.extent));
        debug_assert!(concepts.windows(2).all(|w| w[0].extent != w[1].extent));
        ConceptList { concepts }
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FormalConcept<W>> {
        self.concepts.iter()
    }

    pub fn as_slice(&self) -> &[FormalConcept<W>] {
        &self.concepts
    }

    pub fn position_of_extent(&self, extent: &BitVec<W>) -> Option<usize> {
        self.concepts
            .binary_search_by(|c| c.extent.cmp(extent))
            .ok()
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for c in &self.concepts {
            out.push_str(&serde_json::to_string(&c.to_indices()).expect("serializable"));
            out.push('\n');
        }
        out
    }
}

impl<W: Word> std::ops::Index<usize> for ConceptList<W> {
    type Output = FormalConcept<W>;

    fn index(&self, i: usize) -> &FormalConcept<W> {
        &self.concepts[i]
    }
}

impl<'a, W: Word> IntoIterator for &'a ConceptList<W> {
    type Item = &'a FormalConcept<W>;
    type IntoIter = std::slice::Iter<'a, FormalConcept<W>>;

    fn into_iter(self) -> Self::IntoIter {
        self.concepts.iter()
    }
}

/// Enumerate all concepts with the default cap.
pub fn enumerate_concepts<W: Word>(ctx: &FormalContext<W>) -> Result<ConceptList<W>> {
    enumerate_concepts_capped(ctx, DEFAULT_CONCEPT_CAP)
}

/// Enumerate all concepts; errors once more than `cap` concepts exist.
pub fn enumerate_concepts_capped<W: Word>(
    ctx: &FormalContext<W>,
    cap: usize,
) -> Result<ConceptList<W>> {
    let mut out = Vec::new();
    let top_extent = BitVec::full(ctx.m());
    let top_intent = ctx.derive_objects(&top_extent)?;
    close_by_one(ctx, top_extent, top_intent, 0, cap, &mut out)?;
    Ok(ConceptList::from_concepts(out))
}

fn close_by_one<W: Word>(
    ctx: &FormalContext<W>,
    extent: BitVec<W>,
    intent: BitVec<W>,
    next_attr: usize,
    cap: usize,
    out: &mut Vec<FormalConcept<W>>,
) -> Result<()> {
    if out.len() >= cap {
        return Err(Error::ResourceLimit {
            what: "concept count",
            limit: cap,
        });
    }
    out.push(FormalConcept {
        extent: extent.clone(),
        intent: intent.clone(),
    });
    for j in next_attr..ctx.n() {
        if intent.get(j) {
            continue;
        }
        let child_extent = extent.intersection(ctx.col(j));
        let child_intent = ctx.derive_objects(&child_extent)?;
        // canonicity: no attribute below j may have been added by closure
        if child_intent.eq_below(&intent, j) {
            close_by_one(ctx, child_extent, child_intent, j + 1, cap, out)?;
        }
    }
    Ok(())
}

/// The lattice order: `c1 <= c2` iff the extent of `c1` is contained in the
/// extent of `c2`.
pub fn leq<W: Word>(c1: &FormalConcept<W>, c2: &FormalConcept<W>) -> Result<bool> {
    if c1.extent.len() != c2.extent.len() {
        return Err(Error::DimensionMismatch {
            what: "concept extents",
            expected: c1.extent.len(),
            found: c2.extent.len(),
        });
    }
    Ok(c1.extent.is_subset(&c2.extent))
}

/// Greatest lower bound: (X1 ∩ X2, (X1 ∩ X2)*).
pub fn meet<W: Word>(
    ctx: &FormalContext<W>,
    c1: &FormalConcept<W>,
    c2: &FormalConcept<W>,
) -> Result<FormalConcept<W>> {
    let extent = c1.extent.intersection(&c2.extent);
    let intent = ctx.derive_objects(&extent)?;
    Ok(FormalConcept { extent, intent })
}

/// Least upper bound: ((B1 ∩ B2)*, B1 ∩ B2).
pub fn join<W: Word>(
    ctx: &FormalContext<W>,
    c1: &FormalConcept<W>,
    c2: &FormalConcept<W>,
) -> Result<FormalConcept<W>> {
    let intent = c1.intent.intersection(&c2.intent);
    let extent = ctx.derive_attrs(&intent)?;
    Ok(FormalConcept { extent, intent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    const TABLE1: &str =
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/table1.cxt"));

    fn table1() -> FormalContext<u32> {
        FormalContext::parse_cxt(TABLE1).unwrap()
    }

    /// Table 2 of the fixture context, paper numbering C0..C10, 0-based.
    fn table2_concepts() -> Vec<(Vec<usize>, Vec<usize>)> {
        vec![
            (vec![0, 1, 2, 3, 4, 5, 6], vec![]),
            (vec![3, 4, 5], vec![4]),
            (vec![0, 5, 6], vec![2]),
            (vec![0, 1, 6], vec![1]),
            (vec![1, 2, 6], vec![0]),
            (vec![1, 6], vec![0, 1]),
            (vec![0, 6], vec![1, 2]),
            (vec![4, 5], vec![3, 4]),
            (vec![5], vec![2, 3, 4]),
            (vec![6], vec![0, 1, 2]),
            (vec![], vec![0, 1, 2, 3, 4]),
        ]
    }

    fn concept(ctx: &FormalContext<u32>, ext: &[usize], int: &[usize]) -> FormalConcept<u32> {
        FormalConcept {
            extent: BitVec::from_indices(ctx.m(), ext.iter().copied()),
            intent: BitVec::from_indices(ctx.n(), int.iter().copied()),
        }
    }

    /// Independent oracle: closures of every attribute subset, deduplicated.
    fn brute_force_concepts(ctx: &FormalContext<u32>) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
        let n = ctx.n();
        let mut out = BTreeSet::new();
        for mask in 0u64..(1 << n) {
            let b = BitVec::from_indices(n, (0..n).filter(|a| mask & (1 << a) != 0));
            let extent = ctx.derive_attrs(&b).unwrap();
            let intent = ctx.derive_objects(&extent).unwrap();
            out.insert((extent.to_indices(), intent.to_indices()));
        }
        out
    }

    #[test]
    fn table1_has_exactly_the_eleven_table2_concepts() {
        let ctx = table1();
        let list = enumerate_concepts(&ctx).unwrap();
        assert_eq!(list.len(), 11);
        let got: BTreeSet<_> = list
            .iter()
            .map(|c| (c.extent.to_indices(), c.intent.to_indices()))
            .collect();
        let want: BTreeSet<_> = table2_concepts().into_iter().collect();
        assert_eq!(got, want);
        for c in &list {
            assert!(c.is_valid(&ctx).unwrap());
            assert_eq!(ctx.close_objects(&c.extent).unwrap(), c.extent);
        }
    }

    #[test]
    fn empty_relation_has_top_and_bottom_only() {
        let ctx = FormalContext::<u32>::from_bool_rows(&vec![vec![false; 3]; 2]).unwrap();
        let list = enumerate_concepts(&ctx).unwrap();
        assert_eq!(list.len(), 2);
        assert!(list[0].extent.is_zero() && list[0].intent.count_ones() == 3);
        assert!(list[1].intent.is_zero() && list[1].extent.count_ones() == 2);
    }

    #[test]
    fn enumeration_matches_brute_force_on_small_contexts() {
        for seed in 0..20 {
            let ctx = FormalContext::<u32>::random(4, 4, 0.45, seed);
            let list = enumerate_concepts(&ctx).unwrap();
            let got: BTreeSet<_> = list
                .iter()
                .map(|c| (c.extent.to_indices(), c.intent.to_indices()))
                .collect();
            assert_eq!(got, brute_force_concepts(&ctx), "seed {}", seed);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let ctx = table1();
        assert!(matches!(
            enumerate_concepts_capped(&ctx, 10),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn canonical_order_is_by_extent_value() {
        let ctx = table1();
        let list = enumerate_concepts(&ctx).unwrap();
        for w in list.as_slice().windows(2) {
            assert!(w[0].extent < w[1].extent);
        }
        // bottom first, top last
        assert!(list[0].extent.is_zero());
        assert_eq!(list[list.len() - 1].extent.count_ones(), ctx.m());
    }

    #[test]
    fn leq_examples() {
        let ctx = table1();
        let c7 = concept(&ctx, &[4, 5], &[3, 4]);
        let c8 = concept(&ctx, &[5], &[2, 3, 4]);
        assert!(leq(&c8, &c7).unwrap());
        assert!(!leq(&c7, &c8).unwrap());
        assert!(leq(&c7, &c7).unwrap());
        // intent containment mirrors extent containment
        assert!(c7.intent.is_subset(&c8.intent));
        let c3 = concept(&ctx, &[0, 1, 6], &[1]);
        let c4 = concept(&ctx, &[1, 2, 6], &[0]);
        assert!(!leq(&c3, &c4).unwrap() && !leq(&c4, &c3).unwrap());
    }

    #[test]
    fn meet_and_join_examples() {
        let ctx = table1();
        let c3 = concept(&ctx, &[0, 1, 6], &[1]);
        let c4 = concept(&ctx, &[1, 2, 6], &[0]);
        let c5 = concept(&ctx, &[1, 6], &[0, 1]);
        let c6 = concept(&ctx, &[0, 6], &[1, 2]);
        assert_eq!(meet(&ctx, &c3, &c4).unwrap(), c5);
        assert_eq!(join(&ctx, &c5, &c6).unwrap(), c3);
        let top = concept(&ctx, &[0, 1, 2, 3, 4, 5, 6], &[]);
        assert_eq!(meet(&ctx, &c5, &top).unwrap(), c5);
        assert_eq!(join(&ctx, &c5, &top).unwrap(), top);
    }

    #[test]
    fn meet_and_join_stay_in_the_lattice() {
        let ctx = FormalContext::<u32>::random(6, 5, 0.4, 11);
        let list = enumerate_concepts(&ctx).unwrap();
        for c1 in &list {
            for c2 in &list {
                let m = meet(&ctx, c1, c2).unwrap();
                let j = join(&ctx, c1, c2).unwrap();
                assert!(list.position_of_extent(&m.extent).is_some());
                assert!(list.position_of_extent(&j.extent).is_some());
                assert!(leq(&m, c1).unwrap() && leq(&m, c2).unwrap());
                assert!(leq(c1, &j).unwrap() && leq(c2, &j).unwrap());
            }
        }
    }

    #[test]
    fn jsonl_and_compact_forms() {
        let ctx = table1();
        let list = enumerate_concepts(&ctx).unwrap();
        let jsonl = list.to_jsonl();
        assert_eq!(jsonl.lines().count(), 11);
        let first: ConceptIndices = serde_json::from_str(jsonl.lines().next().unwrap()).unwrap();
        assert_eq!(first.extent, Vec::<usize>::new());
        let c2 = concept(&ctx, &[0, 5, 6], &[2]);
        assert_eq!(c2.compact(&ctx), "{1,6,7} / {a3}");
    }
}
