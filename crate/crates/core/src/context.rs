//! Formal contexts: the (G, M, I) triple as packed row-major and
//! column-major bit matrices, the two derivation operators, closures,
//! generator concepts, and the `.cxt` / CSV interchange formats.
//!
//! A context is immutable after construction; every operation here is
//! read-only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitvec::{BitVec, Word};
use crate::error::{Error, Result};
use crate::lattice::FormalConcept;

/// A formal context: objects, attributes, and the incidence relation,
/// stored both row-major and column-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalContext<W: Word = u32> {
    rows: Vec<BitVec<W>>,
    cols: Vec<BitVec<W>>,
    object_names: Vec<String>,
    attribute_names: Vec<String>,
}

fn default_object_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| i.to_string()).collect()
}

fn default_attribute_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("a{}", i)).collect()
}

impl<W: Word> FormalContext<W> {
    /// Build a context from its rows. `n` is the attribute count; every row
    /// must have length `n`. Names default to `1..m` and `a1..an`.
    pub fn from_rows(n: usize, rows: Vec<BitVec<W>>) -> Result<Self> {
        for (g, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "context row",
                    expected: n,
                    found: row.len(),
                });
            }
            let _ = g;
        }
        let m = rows.len();
        let mut cols = vec![BitVec::new(m); n];
        for (g, row) in rows.iter().enumerate() {
            for a in row.iter_ones() {
                cols[a].insert(g);
            }
        }
        Ok(FormalContext {
            rows,
            cols,
            object_names: default_object_names(m),
            attribute_names: default_attribute_names(n),
        })
    }

    pub fn from_bool_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        Self::from_rows(n, rows.iter().map(|r| BitVec::from_bools(r)).collect())
    }

    pub fn with_names(
        mut self,
        object_names: Vec<String>,
        attribute_names: Vec<String>,
    ) -> Result<Self> {
        if object_names.len() != self.m() {
            return Err(Error::DimensionMismatch {
                what: "object names",
                expected: self.m(),
                found: object_names.len(),
            });
        }
        if attribute_names.len() != self.n() {
            return Err(Error::DimensionMismatch {
                what: "attribute names",
                expected: self.n(),
                found: attribute_names.len(),
            });
        }
        self.object_names = object_names;
        self.attribute_names = attribute_names;
        Ok(self)
    }

    /// Random context with independent Bernoulli(`density`) incidences.
    pub fn random(m: usize, n: usize, density: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..m)
            .map(|_| {
                let mut row = BitVec::new(n);
                for a in 0..n {
                    if rng.gen_bool(density) {
                        row.insert(a);
                    }
                }
                row
            })
            .collect();
        Self::from_rows(n, rows).expect("rows constructed with uniform length")
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    pub fn rows(&self) -> &[BitVec<W>] {
        &self.rows
    }

    pub fn cols(&self) -> &[BitVec<W>] {
        &self.cols
    }

    pub fn row(&self, g: usize) -> &BitVec<W> {
        &self.rows[g]
    }

    pub fn col(&self, a: usize) -> &BitVec<W> {
        &self.cols[a]
    }

    pub fn object_names(&self) -> &[String] {
        &self.object_names
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn incidence(&self, g: usize, a: usize) -> bool {
        self.rows[g].get(a)
    }

    pub fn incidence_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    fn check_objects(&self, x: &BitVec<W>) -> Result<()> {
        if x.len() != self.m() {
            return Err(Error::DimensionMismatch {
                what: "object set",
                expected: self.m(),
                found: x.len(),
            });
        }
        Ok(())
    }

    fn check_attrs(&self, b: &BitVec<W>) -> Result<()> {
        if b.len() != self.n() {
            return Err(Error::DimensionMismatch {
                what: "attribute set",
                expected: self.n(),
                found: b.len(),
            });
        }
        Ok(())
    }

    /// The attributes shared by every object in `x`. The empty object set
    /// derives to the full attribute set.
    pub fn derive_objects(&self, x: &BitVec<W>) -> Result<BitVec<W>> {
        self.check_objects(x)?;
        let mut acc = BitVec::full(self.n());
        for g in x.iter_ones() {
            acc.intersect_with(&self.rows[g]);
        }
        Ok(acc)
    }

    /// The objects possessing every attribute in `b`. The empty attribute
    /// set derives to the full object set.
    pub fn derive_attrs(&self, b: &BitVec<W>) -> Result<BitVec<W>> {
        self.check_attrs(b)?;
        let mut acc = BitVec::full(self.m());
        for a in b.iter_ones() {
            acc.intersect_with(&self.cols[a]);
        }
        Ok(acc)
    }

    pub fn close_objects(&self, x: &BitVec<W>) -> Result<BitVec<W>> {
        self.derive_attrs(&self.derive_objects(x)?)
    }

    pub fn close_attrs(&self, b: &BitVec<W>) -> Result<BitVec<W>> {
        self.derive_objects(&self.derive_attrs(b)?)
    }

    /// The object concept (g**, g*).
    pub fn object_concept(&self, g: usize) -> Result<FormalConcept<W>> {
        if g >= self.m() {
            return Err(Error::OutOfRange {
                index: g,
                bound: self.m(),
            });
        }
        let intent = self.rows[g].clone();
        let extent = self.derive_attrs(&intent)?;
        Ok(FormalConcept { extent, intent })
    }

    /// The attribute concept (m*, m**).
    pub fn attribute_concept(&self, a: usize) -> Result<FormalConcept<W>> {
        if a >= self.n() {
            return Err(Error::OutOfRange {
                index: a,
                bound: self.n(),
            });
        }
        let extent = self.cols[a].clone();
        let intent = self.derive_objects(&extent)?;
        Ok(FormalConcept { extent, intent })
    }

    /// Object concepts indexed by object, and attribute concepts indexed by
    /// attribute. Duplicates are retained positionally.
    pub fn generator_concepts(&self) -> (Vec<FormalConcept<W>>, Vec<FormalConcept<W>>) {
        let objs = (0..self.m())
            .map(|g| self.object_concept(g).expect("index in range"))
            .collect();
        let attrs = (0..self.n())
            .map(|a| self.attribute_concept(a).expect("index in range"))
            .collect();
        (objs, attrs)
    }

    // ---- Burmeister .cxt format ----

    pub fn parse_cxt(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
        let line = |i: usize| -> Result<&str> {
            lines.get(i).copied().ok_or(Error::Parse {
                line: i + 1,
                msg: "unexpected end of file".into(),
            })
        };
        if line(0)? != "B" {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header 'B', got '{}'", line(0)?),
            });
        }
        let _name = line(1)?;
        let m: usize = line(2)?.trim().parse().map_err(|_| Error::Parse {
            line: 3,
            msg: format!("expected object count, got '{}'", lines[2]),
        })?;
        let n: usize = line(3)?.trim().parse().map_err(|_| Error::Parse {
            line: 4,
            msg: format!("expected attribute count, got '{}'", lines[3]),
        })?;
        if !line(4)?.is_empty() {
            return Err(Error::Parse {
                line: 5,
                msg: "expected blank separator line".into(),
            });
        }
        let mut object_names = Vec::with_capacity(m);
        for g in 0..m {
            object_names.push(line(5 + g)?.to_string());
        }
        let mut attribute_names = Vec::with_capacity(n);
        for a in 0..n {
            attribute_names.push(line(5 + m + a)?.to_string());
        }
        let mut rows = Vec::with_capacity(m);
        for g in 0..m {
            let lineno = 5 + m + n + g;
            let data = line(lineno)?;
            if data.chars().count() != n {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected {} cells, got {}", n, data.chars().count()),
                });
            }
            let mut row = BitVec::new(n);
            for (a, c) in data.chars().enumerate() {
                match c {
                    'X' | 'x' => row.insert(a),
                    '.' => {}
                    other => {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            msg: format!("illegal cell character '{}'", other),
                        })
                    }
                }
            }
            rows.push(row);
        }
        Self::from_rows(n, rows)?.with_names(object_names, attribute_names)
    }

    pub fn to_cxt(&self) -> String {
        let mut out = String::new();
        out.push_str("B\n\n");
        out.push_str(&format!("{}\n{}\n\n", self.m(), self.n()));
        for name in &self.object_names {
            out.push_str(name);
            out.push('\n');
        }
        for name in &self.attribute_names {
            out.push_str(name);
            out.push('\n');
        }
        for row in &self.rows {
            for a in 0..self.n() {
                out.push(if row.get(a) { 'X' } else { '.' });
            }
            out.push('\n');
        }
        out
    }

    // ---- CSV format ----

    /// Parse a 0/1 CSV. `header` consumes a first row of attribute names;
    /// `names` consumes a first column of object names.
    pub fn parse_csv(text: &str, header: bool, names: bool) -> Result<Self> {
        let lines: Vec<&str> = text
            .lines()
            .map(|l| l.trim_end_matches('\r'))
            .filter(|l| !l.is_empty())
            .collect();
        let mut attribute_names: Option<Vec<String>> = None;
        let mut start = 0;
        if header {
            let first = lines.first().ok_or(Error::Parse {
                line: 1,
                msg: "missing header row".into(),
            })?;
            let mut cells: Vec<&str> = first.split(',').collect();
            if names {
                cells.remove(0);
            }
            attribute_names = Some(cells.iter().map(|c| c.trim().to_string()).collect());
            start = 1;
        }
        let mut object_names = Vec::new();
        let mut rows: Vec<BitVec<W>> = Vec::new();
        let mut n: Option<usize> = None;
        for (i, raw) in lines[start..].iter().enumerate() {
            let lineno = start + i + 1;
            let mut cells: Vec<&str> = raw.split(',').collect();
            if names {
                object_names.push(cells.remove(0).trim().to_string());
            } else {
                object_names.push((i + 1).to_string());
            }
            let width = cells.len();
            match n {
                None => {
                    if let Some(ref hdr) = attribute_names {
                        if hdr.len() != width {
                            return Err(Error::Parse {
                                line: lineno,
                                msg: format!(
                                    "row has {} cells but header names {} attributes",
                                    width,
                                    hdr.len()
                                ),
                            });
                        }
                    }
                    n = Some(width);
                }
                Some(expected) if expected != width => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("expected {} cells, got {}", expected, width),
                    })
                }
                _ => {}
            }
            let mut row = BitVec::new(width);
            for (a, cell) in cells.iter().enumerate() {
                match cell.trim() {
                    "1" => row.insert(a),
                    "0" => {}
                    other => {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("illegal cell value '{}'", other),
                        })
                    }
                }
            }
            rows.push(row);
        }
        let n = n.or_else(|| attribute_names.as_ref().map(|h| h.len())).unwrap_or(0);
        let attribute_names = attribute_names.unwrap_or_else(|| default_attribute_names(n));
        Self::from_rows(n, rows)?.with_names(object_names, attribute_names)
    }

    pub fn to_csv(&self, header: bool, names: bool) -> String {
        let mut out = String::new();
        if header {
            if names {
                out.push(',');
            }
            out.push_str(&self.attribute_names.join(","));
            out.push('\n');
        }
        for (g, row) in self.rows.iter().enumerate() {
            if names {
                out.push_str(&self.object_names[g]);
                out.push(',');
            }
            let cells: Vec<&str> = (0..self.n())
                .map(|a| if row.get(a) { "1" } else { "0" })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}
