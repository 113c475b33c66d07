//! Attribute reduction preserving concept extents.
//!
//! The working copy of the context is column-major. A column is removable
//! when, with it excluded, every designated extent still closes to itself
//! (X** == X over the remaining columns). The containment test behind the
//! closure is word-parallel: a column contains an extent iff
//! `(col & extent) == extent` on every word, with no per-object loop.
//!
//! Removed columns are zeroed in place rather than compacted, so column
//! indices stay stable for the audit trail; serializing the reduced
//! context drops them.

use serde::Serialize;

use crate::bitvec::{BitVec, Word};
use crate::context::FormalContext;
use crate::error::{Error, Result};

/// Column-major working copy of a context with an active-column mask.
/// The source context is never mutated.
#[derive(Clone, Debug)]
pub struct ColumnStore<W: Word = u32> {
    m: usize,
    cols: Vec<BitVec<W>>,
    active: BitVec<W>,
}

impl<W: Word> ColumnStore<W> {
    pub fn from_context(ctx: &FormalContext<W>) -> Self {
        ColumnStore {
            m: ctx.m(),
            cols: ctx.cols().to_vec(),
            active: BitVec::full(ctx.n()),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    pub fn active(&self) -> &BitVec<W> {
        &self.active
    }

    pub fn is_active(&self, q: usize) -> bool {
        q < self.cols.len() && self.active.get(q)
    }

    pub fn col(&self, q: usize) -> &BitVec<W> {
        &self.cols[q]
    }

    fn check_column(&self, q: usize) -> Result<()> {
        if q >= self.cols.len() {
            return Err(Error::OutOfRange {
                index: q,
                bound: self.cols.len(),
            });
        }
        Ok(())
    }

    fn check_extent(&self, x: &BitVec<W>) -> Result<()> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch {
                what: "extent",
                expected: self.m,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Word-wise containment test: X ⊆ column q.
    pub fn column_contains_extent(&self, q: usize, x: &BitVec<W>) -> Result<bool> {
        self.check_column(q)?;
        self.check_extent(x)?;
        Ok(x.is_subset(&self.cols[q]))
    }

    fn intension_excluding(&self, x: &BitVec<W>, excluded: Option<usize>) -> BitVec<W> {
        let mut intension = BitVec::new(self.cols.len());
        for q in self.active.iter_ones() {
            if Some(q) == excluded {
                continue;
            }
            if x.is_subset(&self.cols[q]) {
                intension.insert(q);
            }
        }
        intension
    }

    /// The active columns containing X. This may be wider than the intent
    /// X had in the original context once columns have been removed.
    pub fn induced_intension(&self, x: &BitVec<W>) -> Result<BitVec<W>> {
        self.check_extent(x)?;
        Ok(self.intension_excluding(x, None))
    }

    /// Intersection of the named columns; the empty selection yields the
    /// full object set.
    pub fn closure_extent(&self, cols: &BitVec<W>) -> Result<BitVec<W>> {
        if cols.len() != self.cols.len() {
            return Err(Error::DimensionMismatch {
                what: "column selection",
                expected: self.cols.len(),
                found: cols.len(),
            });
        }
        let mut acc = BitVec::full(self.m);
        for q in cols.iter_ones() {
            if !self.active.get(q) {
                return Err(Error::InactiveColumn(q));
            }
            acc.intersect_with(&self.cols[q]);
        }
        Ok(acc)
    }

    /// First extent whose closure breaks when column `q` is excluded, or
    /// `None` when `q` is removable.
    pub fn blocking_extent(&self, q: usize, extents: &[BitVec<W>]) -> Result<Option<usize>> {
        self.check_column(q)?;
        for (i, x) in extents.iter().enumerate() {
            self.check_extent(x)?;
            let intension = self.intension_excluding(x, Some(q));
            let mut closure = BitVec::full(self.m);
            for c in intension.iter_ones() {
                closure.intersect_with(&self.cols[c]);
            }
            if closure != *x {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// True iff every extent still closes to itself with `q` excluded.
    pub fn is_column_removable(&self, q: usize, extents: &[BitVec<W>]) -> Result<bool> {
        Ok(self.blocking_extent(q, extents)?.is_none())
    }

    /// Zero the column and mark it inactive.
    pub fn remove_column(&mut self, q: usize) {
        assert!(self.is_active(q), "column {} is not active", q);
        self.cols[q] = BitVec::new(self.m);
        self.active.remove(q);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditEntry {
    /// Column index tested.
    pub column: usize,
    /// Position in the visit order, starting at 0.
    pub step: usize,
    pub removed: bool,
    /// Index of the first extent that blocked removal, when kept.
    pub blocking_extent: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductReport {
    pub removed: Vec<usize>,
    pub kept: Vec<usize>,
    pub audit: Vec<AuditEntry>,
}

fn validate_extents<W: Word>(store: &ColumnStore<W>, extents: &[BitVec<W>]) -> Result<()> {
    for (i, x) in extents.iter().enumerate() {
        if x.len() != store.m() {
            return Err(Error::DimensionMismatch {
                what: "extent",
                expected: store.m(),
                found: x.len(),
            });
        }
        let intension = store.induced_intension(x)?;
        if store.closure_extent(&intension)? != *x {
            return Err(Error::ExtentNotClosed { index: i });
        }
    }
    Ok(())
}

/// One greedy pass: visit columns `start, start+1, ...` wrapping around,
/// each exactly once, removing a column whenever every extent survives
/// without it. Extents must be closed in the original context.
pub fn greedy_attr_reduce<W: Word>(
    ctx: &FormalContext<W>,
    extents: &[BitVec<W>],
    start: usize,
) -> Result<ReductReport> {
    let n = ctx.n();
    if start >= n {
        return Err(Error::OutOfRange {
            index: start,
            bound: n,
        });
    }
    let mut store = ColumnStore::from_context(ctx);
    validate_extents(&store, extents)?;
    let mut audit = Vec::with_capacity(n);
    for step in 0..n {
        let q = (start + step) % n;
        let blocking = store.blocking_extent(q, extents)?;
        let removed = blocking.is_none();
        if removed {
            store.remove_column(q);
        }
        audit.push(AuditEntry {
            column: q,
            step,
            removed,
            blocking_extent: blocking,
        });
    }
    let kept: Vec<usize> = store.active.to_indices();
    let removed: Vec<usize> = store.active.complement().to_indices();
    Ok(ReductReport {
        removed,
        kept,
        audit,
    })
}

/// Run the greedy pass from every start column, deduplicating by kept set.
pub fn rotation_reducts<W: Word>(
    ctx: &FormalContext<W>,
    extents: &[BitVec<W>],
) -> Result<Vec<ReductReport>> {
    if ctx.n() == 0 {
        return Err(Error::InvalidArgument(
            "rotation requires at least one column".into(),
        ));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for start in 0..ctx.n() {
        let report = greedy_attr_reduce(ctx, extents, start)?;
        if seen.insert(report.kept.clone()) {
            out.push(report);
        }
    }
    Ok(out)
}

/// The context restricted to the kept columns.
pub fn apply_reduct<W: Word>(ctx: &FormalContext<W>, kept: &[usize]) -> Result<FormalContext<W>> {
    for &q in kept {
        if q >= ctx.n() {
            return Err(Error::OutOfRange {
                index: q,
                bound: ctx.n(),
            });
        }
    }
    let rows = ctx
        .rows()
        .iter()
        .map(|row| BitVec::from_indices(kept.len(), kept.iter().enumerate().filter_map(|(j, &q)| row.get(q).then_some(j))))
        .collect();
    let attribute_names = kept
        .iter()
        .map(|&q| ctx.attribute_names()[q].clone())
        .collect();
    FormalContext::from_rows(kept.len(), rows)?
        .with_names(ctx.object_names().to_vec(), attribute_names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_concepts;

    const TABLE1: &str =
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/table1.cxt"));
    const TABLE3: &str =
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/table3.cxt"));

    fn ctx_of(text: &str) -> FormalContext<u32> {
        FormalContext::parse_cxt(text).unwrap()
    }

    fn objs(m: usize, idx: &[usize]) -> BitVec<u32> {
        BitVec::from_indices(m, idx.iter().copied())
    }

    fn table3_extents(ctx: &FormalContext<u32>) -> Vec<BitVec<u32>> {
        // C1, C2, C3 of the 6x5 fixture
        vec![
            objs(ctx.m(), &[3, 4, 5]),
            objs(ctx.m(), &[0, 1, 2]),
            objs(ctx.m(), &[0, 1, 2, 3, 4, 5]),
        ]
    }

    #[test]
    fn containment_examples() {
        let ctx = ctx_of(TABLE1);
        let store = ColumnStore::from_context(&ctx);
        // column a5 = {4,5,6} contains {5,6}
        assert!(store.column_contains_extent(4, &objs(7, &[4, 5])).unwrap());
        assert!(!store.column_contains_extent(0, &objs(7, &[4, 5])).unwrap());
        assert!(store.column_contains_extent(0, &objs(7, &[])).unwrap());
        assert!(matches!(
            store.column_contains_extent(9, &objs(7, &[])),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn containment_is_word_wise() {
        // 32 objects, one column incident with objects 0..8: stored as 255
        let mut rows = vec![vec![true]; 8];
        rows.extend(vec![vec![false]; 24]);
        let ctx = FormalContext::<u32>::from_bool_rows(&rows).unwrap();
        let store = ColumnStore::from_context(&ctx);
        assert_eq!(store.col(0).words()[0], 255);
        assert!(store.column_contains_extent(0, &objs(32, &[0, 3, 7])).unwrap());
        assert!(!store.column_contains_extent(0, &objs(32, &[8])).unwrap());
    }

    #[test]
    fn induced_intension_examples() {
        let ctx = ctx_of(TABLE1);
        let store = ColumnStore::from_context(&ctx);
        assert_eq!(
            store.induced_intension(&objs(7, &[4, 5])).unwrap().to_indices(),
            vec![3, 4]
        );
        // no full column, so U induces the empty intension
        assert!(store.induced_intension(&BitVec::full(7)).unwrap().is_zero());

        let ctx3 = ctx_of(TABLE3);
        let mut store3 = ColumnStore::from_context(&ctx3);
        store3.remove_column(2);
        assert_eq!(
            store3.induced_intension(&objs(6, &[0, 1, 2])).unwrap().to_indices(),
            vec![0, 1]
        );
    }

    #[test]
    fn closure_examples() {
        let ctx = ctx_of(TABLE1);
        let store = ColumnStore::from_context(&ctx);
        let sel = BitVec::from_indices(5, [3usize, 4]);
        assert_eq!(store.closure_extent(&sel).unwrap().to_indices(), vec![4, 5]);
        let empty = BitVec::new(5);
        assert_eq!(store.closure_extent(&empty).unwrap(), BitVec::full(7));
        let disjoint = BitVec::from_indices(5, [0usize, 4]);
        assert!(store.closure_extent(&disjoint).unwrap().is_zero());
        let mut store2 = store.clone();
        store2.remove_column(3);
        assert!(matches!(
            store2.closure_extent(&sel),
            Err(Error::InactiveColumn(3))
        ));
    }

    #[test]
    fn removability_examples() {
        let ctx3 = ctx_of(TABLE3);
        let store3 = ColumnStore::from_context(&ctx3);
        assert!(store3.is_column_removable(1, &table3_extents(&ctx3)).unwrap());

        let ctx1 = ctx_of(TABLE1);
        let store1 = ColumnStore::from_context(&ctx1);
        let list = enumerate_concepts(&ctx1).unwrap();
        let extents: Vec<_> = list.iter().map(|c| c.extent.clone()).collect();
        let blocking = store1.blocking_extent(4, &extents).unwrap();
        // extent {4,5,6} (concept C1) is contained only in column a5
        assert_eq!(blocking, Some(3));
        assert_eq!(extents[3].to_indices(), vec![3, 4, 5]);

        // vacuous without extents
        for q in 0..ctx1.n() {
            assert!(store1.is_column_removable(q, &[]).unwrap());
        }
    }

    #[test]
    fn greedy_on_table3() {
        let ctx = ctx_of(TABLE3);
        let report = greedy_attr_reduce(&ctx, &table3_extents(&ctx), 0).unwrap();
        assert_eq!(report.removed, vec![1, 2, 3]);
        assert_eq!(report.kept, vec![0, 4]);
        assert_eq!(report.audit.len(), 5);
        assert!(report.audit[0].blocking_extent.is_some());
        // kept columns regenerate every extent
        let reduced = apply_reduct(&ctx, &report.kept).unwrap();
        for x in table3_extents(&ctx) {
            assert_eq!(reduced.close_objects(&x).unwrap(), x);
        }
    }

    #[test]
    fn distinct_irreducible_columns_keep_everything() {
        let ctx = ctx_of(TABLE5_LIKE);
        let extents: Vec<_> = (0..ctx.n())
            .map(|a| ctx.col(a).clone())
            .collect();
        let report = greedy_attr_reduce(&ctx, &extents, 0).unwrap();
        assert!(report.removed.is_empty());
    }

    // 2-subset rows of 4 attributes: every column generates a distinct
    // extent no other column set reproduces
    const TABLE5_LIKE: &str = "B\n\n6\n4\n\n1\n2\n3\n4\n5\n6\na\nb\nc\nd\nXX..\nX.X.\nX..X\n.XX.\n.X.X\n..XX\n";

    #[test]
    fn duplicate_columns_lose_exactly_one() {
        let ctx = FormalContext::<u32>::from_bool_rows(&[
            vec![true, true],
            vec![false, false],
        ])
        .unwrap();
        let extent = objs(2, &[0]);
        let report = greedy_attr_reduce(&ctx, &[extent.clone()], 0).unwrap();
        assert_eq!(report.removed.len(), 1);
        let reduced = apply_reduct(&ctx, &report.kept).unwrap();
        assert_eq!(reduced.close_objects(&extent).unwrap(), extent);
    }

    #[test]
    fn non_closed_extent_is_rejected() {
        let ctx = ctx_of(TABLE1);
        // {5} closes to {5,6}
        let bad = objs(7, &[4]);
        assert!(matches!(
            greedy_attr_reduce(&ctx, &[bad], 0),
            Err(Error::ExtentNotClosed { index: 0 })
        ));
        assert!(matches!(
            greedy_attr_reduce(&ctx, &[], 9),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn rotation_finds_multiple_reducts_on_table3() {
        let ctx = ctx_of(TABLE3);
        let reports = rotation_reducts(&ctx, &table3_extents(&ctx)).unwrap();
        assert!(reports.len() >= 2);
        let kept_sets: Vec<_> = reports.iter().map(|r| r.kept.clone()).collect();
        assert!(kept_sets.contains(&vec![0, 4]));
        assert!(kept_sets.contains(&vec![0, 3]));
        // every reduct preserves every extent
        for r in &reports {
            let reduced = apply_reduct(&ctx, &r.kept).unwrap();
            for x in table3_extents(&ctx) {
                assert_eq!(reduced.close_objects(&x).unwrap(), x);
            }
        }
    }

    #[test]
    fn rotation_trivial_cases() {
        let ctx = FormalContext::<u32>::from_bool_rows(&[vec![true]]).unwrap();
        let reports = rotation_reducts(&ctx, &[objs(1, &[0])]).unwrap();
        assert_eq!(reports.len(), 1);

        // nothing removable: one report shared by every start
        let ctx5 = ctx_of(TABLE5_LIKE);
        let extents: Vec<_> = (0..ctx5.n()).map(|a| ctx5.col(a).clone()).collect();
        let reports = rotation_reducts(&ctx5, &extents).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].removed.is_empty());
    }

    #[test]
    fn store_is_isolated_from_the_context() {
        let ctx = ctx_of(TABLE3);
        let before = ctx.clone();
        let _ = greedy_attr_reduce(&ctx, &table3_extents(&ctx), 0).unwrap();
        assert_eq!(ctx, before);

        let mut store = ColumnStore::from_context(&ctx);
        let others: Vec<_> = (0..store.n()).filter(|&q| q != 1).map(|q| store.col(q).clone()).collect();
        store.remove_column(1);
        assert!(store.col(1).is_zero());
        for (i, q) in (0..store.n()).filter(|&q| q != 1).enumerate() {
            assert_eq!(store.col(q), &others[i]);
        }
    }
}
