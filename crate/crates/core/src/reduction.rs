//! Concept reduction preserving binary relations.
//!
//! A concept set is consistent when the union of its rectangles equals the
//! incidence relation exactly, and a reduction set when it is additionally
//! irredundant. Concepts are classified as core (in every reduction set),
//! relatively necessary (in some but not all), or unnecessary (in none).
//!
//! The polynomial classifier works cell-wise: core concepts own a uniquely
//! covered cell; a non-core concept is relatively necessary exactly when
//! the generator concepts outside it fail to cover the relation. The
//! brute-force route enumerates every reduction set and applies the
//! definition directly; it is the oracle the classifier is validated
//! against.
//!
//! Concepts with an empty extent or empty intent contribute the empty
//! rectangle. They can never occur in an irredundant cover, so they are
//! labeled unnecessary directly and excluded from cover counting.

use serde::Serialize;

use crate::bitvec::{BitVec, Word};
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::{enumerate_concepts, ConceptIndices, ConceptList, FormalConcept};

/// Subset enumeration bound for the brute-force oracle.
pub const DEFAULT_ORACLE_CAP: usize = 16;

/// Hard bound guarding the oracle's 2^k tables.
const ORACLE_HARD_CAP: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConceptClass {
    Core,
    RelativelyNecessary,
    Unnecessary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Relative,
    Unnecessary,
}

fn validate_concepts<W: Word>(ctx: &FormalContext<W>, concepts: &[FormalConcept<W>]) -> Result<()> {
    for (i, c) in concepts.iter().enumerate() {
        if !c.is_valid(ctx)? {
            return Err(Error::InvalidConcept { index: i });
        }
    }
    Ok(())
}

fn ensure_full_lattice<W: Word>(ctx: &FormalContext<W>, list: &ConceptList<W>) -> Result<()> {
    let full = enumerate_concepts(ctx)?;
    if full != *list {
        return Err(Error::NotFullLattice);
    }
    Ok(())
}

/// Row image of the rectangle union of `concepts`.
fn rect_union_rows<'a, W: Word, I>(m: usize, n: usize, concepts: I) -> Vec<BitVec<W>>
where
    I: IntoIterator<Item = &'a FormalConcept<W>>,
{
    let mut rows = vec![BitVec::new(n); m];
    for c in concepts {
        for g in c.extent.iter_ones() {
            rows[g].union_with(&c.intent);
        }
    }
    rows
}

/// True iff the union of the concepts' rectangles equals the incidence
/// relation exactly.
pub fn is_consistent<W: Word>(
    ctx: &FormalContext<W>,
    concepts: &[FormalConcept<W>],
) -> Result<bool> {
    validate_concepts(ctx, concepts)?;
    Ok(rect_union_rows(ctx.m(), ctx.n(), concepts) == ctx.rows())
}

/// True iff `concepts` is consistent and removing any single member breaks
/// consistency.
pub fn is_reduction_set<W: Word>(
    ctx: &FormalContext<W>,
    concepts: &[FormalConcept<W>],
) -> Result<bool> {
    validate_concepts(ctx, concepts)?;
    if rect_union_rows(ctx.m(), ctx.n(), concepts) != ctx.rows() {
        return Ok(false);
    }
    for skip in 0..concepts.len() {
        let without = concepts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, c)| c);
        if rect_union_rows(ctx.m(), ctx.n(), without) == ctx.rows() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How many concept rectangles in `list` cover each cell; `m x n`, flat,
/// row-major. Counts are over nonempty rectangles only.
pub fn cover_counts<W: Word>(ctx: &FormalContext<W>, list: &ConceptList<W>) -> Vec<u32> {
    let n = ctx.n();
    let mut counts = vec![0u32; ctx.m() * n];
    for c in list {
        for g in c.extent.iter_ones() {
            for a in c.intent.iter_ones() {
                counts[g * n + a] += 1;
            }
        }
    }
    counts
}

fn core_flags<W: Word>(ctx: &FormalContext<W>, list: &ConceptList<W>) -> Vec<bool> {
    let counts = cover_counts(ctx, list);
    let n = ctx.n();
    list.iter()
        .map(|c| {
            c.extent.iter_ones().any(|g| {
                c.intent.iter_ones().any(|a| counts[g * n + a] == 1)
            })
        })
        .collect()
}

/// Indices (into `list`) of the core concepts: those owning a cell covered
/// by no other concept. `list` must be the full lattice, otherwise the
/// cover counts would be meaningless.
pub fn core_concepts<W: Word>(ctx: &FormalContext<W>, list: &ConceptList<W>) -> Result<Vec<usize>> {
    ensure_full_lattice(ctx, list)?;
    Ok(core_flags(ctx, list)
        .into_iter()
        .enumerate()
        .filter_map(|(i, is_core)| is_core.then_some(i))
        .collect())
}

/// Side-covered test: the intent equals the union of the intents of objects
/// outside the extent, or dually for attributes. Taking every eligible
/// generator is enough because unions are monotone.
pub fn is_side_covered<W: Word>(ctx: &FormalContext<W>, c: &FormalConcept<W>) -> Result<bool> {
    if !c.is_valid(ctx)? {
        return Err(Error::InvalidConcept { index: 0 });
    }
    let mut intent_union = BitVec::new(ctx.n());
    for g in c.extent.complement().iter_ones() {
        if ctx.row(g).is_subset(&c.intent) {
            intent_union.union_with(ctx.row(g));
        }
    }
    if intent_union == c.intent {
        return Ok(true);
    }
    let mut extent_union = BitVec::new(ctx.m());
    for a in c.intent.complement().iter_ones() {
        if ctx.col(a).is_subset(&c.extent) {
            extent_union.union_with(ctx.col(a));
        }
    }
    Ok(extent_union == c.extent)
}

fn outside_generator_union<W: Word>(
    ctx: &FormalContext<W>,
    object_concepts: &[FormalConcept<W>],
    attribute_concepts: &[FormalConcept<W>],
    c: &FormalConcept<W>,
) -> Vec<BitVec<W>> {
    let extent_comp = c.extent.complement();
    let intent_comp = c.intent.complement();
    let outside = extent_comp
        .iter_ones()
        .map(|g| &object_concepts[g])
        .chain(intent_comp.iter_ones().map(|a| &attribute_concepts[a]));
    rect_union_rows(ctx.m(), ctx.n(), outside)
}

/// Polynomial three-way classification of the full lattice.
pub fn classify<W: Word>(ctx: &FormalContext<W>, list: &ConceptList<W>) -> Result<Vec<ConceptClass>> {
    ensure_full_lattice(ctx, list)?;
    let core = core_flags(ctx, list);
    let (object_concepts, attribute_concepts) = ctx.generator_concepts();
    let mut labels = Vec::with_capacity(list.len());
    for (i, c) in list.iter().enumerate() {
        let label = if c.is_empty_rectangle() {
            ConceptClass::Unnecessary
        } else if core[i] {
            ConceptClass::Core
        } else {
            let union = outside_generator_union(ctx, &object_concepts, &attribute_concepts, c);
            if union == ctx.rows() {
                ConceptClass::Unnecessary
            } else {
                ConceptClass::RelativelyNecessary
            }
        };
        labels.push(label);
    }
    Ok(labels)
}

/// Classification along the unnecessary-concept judgment: label a
/// non-core concept unnecessary when its rectangle is covered by the core
/// and side-covered concepts (side-covered concepts themselves are always
/// unnecessary).
///
/// This criterion is sound but incomplete: a concept can belong to no
/// reduction set without being covered by core and side-covered concepts
/// alone (see `side_cover_route_is_incomplete` in the tests), so this
/// route may report `RelativelyNecessary` where [`classify`] and the
/// brute-force oracle agree on `Unnecessary` — never the other way
/// around. Useful only as a one-sided cross-check.
pub fn classify_via_side_cover<W: Word>(
    ctx: &FormalContext<W>,
    list: &ConceptList<W>,
) -> Result<Vec<ConceptClass>> {
    ensure_full_lattice(ctx, list)?;
    let core = core_flags(ctx, list);
    let side: Vec<bool> = list
        .iter()
        .map(|c| is_side_covered(ctx, c))
        .collect::<Result<_>>()?;
    let covering: Vec<&FormalConcept<W>> = list
        .iter()
        .enumerate()
        .filter(|(i, c)| (core[*i] || side[*i]) && !c.is_empty_rectangle())
        .map(|(_, c)| c)
        .collect();
    let cover_rows = rect_union_rows(ctx.m(), ctx.n(), covering.iter().copied());
    let mut labels = Vec::with_capacity(list.len());
    for (i, c) in list.iter().enumerate() {
        let label = if c.is_empty_rectangle() {
            ConceptClass::Unnecessary
        } else if core[i] {
            ConceptClass::Core
        } else if side[i] {
            ConceptClass::Unnecessary
        } else {
            let covered = c
                .extent
                .iter_ones()
                .all(|g| c.intent.is_subset(&cover_rows[g]));
            if covered {
                ConceptClass::Unnecessary
            } else {
                ConceptClass::RelativelyNecessary
            }
        };
        labels.push(label);
    }
    Ok(labels)
}

/// Rectangles as flat cell masks, for subset enumeration.
struct CellMasks {
    chunks: usize,
    incidence: Vec<u64>,
    rects: Vec<Vec<u64>>,
}

fn cell_masks<W: Word>(ctx: &FormalContext<W>, concepts: &[&FormalConcept<W>]) -> CellMasks {
    let (m, n) = (ctx.m(), ctx.n());
    let cells = m * n;
    let chunks = cells / 64 + 1;
    let mut incidence = vec![0u64; chunks];
    for g in 0..m {
        for a in ctx.row(g).iter_ones() {
            let cell = g * n + a;
            incidence[cell / 64] |= 1 << (cell % 64);
        }
    }
    let rects = concepts
        .iter()
        .map(|c| {
            let mut rect = vec![0u64; chunks];
            for g in c.extent.iter_ones() {
                for a in c.intent.iter_ones() {
                    let cell = g * n + a;
                    rect[cell / 64] |= 1 << (cell % 64);
                }
            }
            rect
        })
        .collect();
    CellMasks {
        chunks,
        incidence,
        rects,
    }
}

/// Every reduction set of the full lattice, as index sets into `list`.
/// Enumerates subsets of the nonempty-rectangle concepts, so `cap` bounds
/// that count.
pub fn enumerate_reduction_sets<W: Word>(
    ctx: &FormalContext<W>,
    list: &ConceptList<W>,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    ensure_full_lattice(ctx, list)?;
    let nonempty: Vec<usize> = (0..list.len())
        .filter(|&i| !list[i].is_empty_rectangle())
        .collect();
    let k = nonempty.len();
    if k > cap.min(ORACLE_HARD_CAP) {
        return Err(Error::ResourceLimit {
            what: "oracle concept count",
            limit: cap.min(ORACLE_HARD_CAP),
        });
    }
    let refs: Vec<&FormalConcept<W>> = nonempty.iter().map(|&i| &list[i]).collect();
    let masks = cell_masks(ctx, &refs);
    let chunks = masks.chunks;
    // union[mask] = OR of member rectangles, built from mask minus its
    // lowest bit
    let mut union = vec![0u64; (1usize << k) * chunks];
    for mask in 1usize..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        let prev = mask & (mask - 1);
        for c in 0..chunks {
            union[mask * chunks + c] = union[prev * chunks + c] | masks.rects[low][c];
        }
    }
    let covers = |mask: usize| union[mask * chunks..(mask + 1) * chunks] == masks.incidence[..];
    let mut out = Vec::new();
    for mask in 0usize..(1 << k) {
        if !covers(mask) {
            continue;
        }
        let irredundant = (0..k).all(|j| mask & (1 << j) == 0 || !covers(mask ^ (1 << j)));
        if irredundant {
            out.push(
                (0..k)
                    .filter(|j| mask & (1 << j) != 0)
                    .map(|j| nonempty[j])
                    .collect(),
            );
        }
    }
    Ok(out)
}

/// Brute-force classification straight from the definition: core concepts
/// lie in every reduction set, relatively necessary ones in some but not
/// all, unnecessary ones in none.
pub fn classify_by_definition<W: Word>(
    ctx: &FormalContext<W>,
    list: &ConceptList<W>,
    cap: usize,
) -> Result<Vec<ConceptClass>> {
    let reductions = enumerate_reduction_sets(ctx, list, cap)?;
    let mut in_all = vec![true; list.len()];
    let mut in_some = vec![false; list.len()];
    for reduction in &reductions {
        let mut member = vec![false; list.len()];
        for &i in reduction {
            member[i] = true;
            in_some[i] = true;
        }
        for i in 0..list.len() {
            in_all[i] &= member[i];
        }
    }
    Ok((0..list.len())
        .map(|i| {
            if in_all[i] && !reductions.is_empty() {
                ConceptClass::Core
            } else if in_some[i] {
                ConceptClass::RelativelyNecessary
            } else {
                ConceptClass::Unnecessary
            }
        })
        .collect())
}

/// Greedy irredundant cover: scan `list` in `order`, dropping every concept
/// whose removal keeps the remainder consistent. Returns kept indices in
/// ascending order.
pub fn greedy_reduction<W: Word>(
    ctx: &FormalContext<W>,
    list: &ConceptList<W>,
    order: &[usize],
) -> Result<Vec<usize>> {
    ensure_full_lattice(ctx, list)?;
    let mut seen = vec![false; list.len()];
    if order.len() != list.len() {
        return Err(Error::InvalidArgument(
            "order must be a permutation of the concept list".into(),
        ));
    }
    for &i in order {
        if i >= list.len() || seen[i] {
            return Err(Error::InvalidArgument(
                "order must be a permutation of the concept list".into(),
            ));
        }
        seen[i] = true;
    }
    let mut kept = vec![true; list.len()];
    for &i in order {
        kept[i] = false;
        let remaining: Vec<&FormalConcept<W>> = (0..list.len())
            .filter(|&j| kept[j])
            .map(|j| &list[j])
            .collect();
        let rows = rect_union_rows(ctx.m(), ctx.n(), remaining.iter().copied());
        if rows != ctx.rows() {
            kept[i] = true;
        }
    }
    Ok((0..list.len()).filter(|&i| kept[i]).collect())
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Extremal contexts maximizing the counts of relatively necessary or
/// unnecessary concepts: rows are all `n/2`-subsets of the attributes in
/// lexicographic order, followed by all `n/2 + 1`-subsets for
/// [`BoundKind::Unnecessary`].
pub fn gen_bound_context<W: Word>(n: usize, kind: BoundKind) -> Result<FormalContext<W>> {
    if !(2..=20).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "attribute count {} out of range 2..=20",
            n
        )));
    }
    let half = n / 2;
    let mut subsets = k_subsets(n, half);
    if kind == BoundKind::Unnecessary {
        subsets.extend(k_subsets(n, half + 1));
    }
    let rows = subsets
        .into_iter()
        .map(|s| BitVec::from_indices(n, s))
        .collect();
    FormalContext::from_rows(n, rows)
}

/// Classification grouped for serialization, concepts in canonical order.
#[derive(Serialize)]
pub struct ClassificationReport {
    pub core: Vec<ConceptIndices>,
    pub relatively_necessary: Vec<ConceptIndices>,
    pub unnecessary: Vec<ConceptIndices>,
}

impl ClassificationReport {
    pub fn new<W: Word>(list: &ConceptList<W>, labels: &[ConceptClass]) -> Self {
        let mut report = ClassificationReport {
            core: Vec::new(),
            relatively_necessary: Vec::new(),
            unnecessary: Vec::new(),
        };
        for (c, &label) in list.iter().zip(labels) {
            let idx = c.to_indices();
            match label {
                ConceptClass::Core => report.core.push(idx),
                ConceptClass::RelativelyNecessary => report.relatively_necessary.push(idx),
                ConceptClass::Unnecessary => report.unnecessary.push(idx),
            }
        }
        report
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (
            self.core.len(),
            self.relatively_necessary.len(),
            self.unnecessary.len(),
        )
    }
}

/// One line per concept: label, extent, intent (named), canonical order.
pub fn classification_tsv<W: Word>(
    ctx: &FormalContext<W>,
    list: &ConceptList<W>,
    labels: &[ConceptClass],
) -> String {
    let mut out = String::from("class\textent\tintent\n");
    for (c, label) in list.iter().zip(labels) {
        let name = match label {
            ConceptClass::Core => "core",
            ConceptClass::RelativelyNecessary => "relatively_necessary",
            ConceptClass::Unnecessary => "unnecessary",
        };
        let compact = c.compact(ctx);
        let (ext, int) = compact.split_once(" / ").expect("compact form");
        out.push_str(&format!("{}\t{}\t{}\n", name, ext, int));
    }
    out
}
