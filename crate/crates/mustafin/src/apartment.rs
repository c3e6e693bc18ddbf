//! Exact arithmetic on homothety classes of diagonal lattices in one fixed
//! apartment.
//!
//! A class is an integer exponent vector modulo a global shift; the canonical
//! representative has minimum coordinate zero. Intersection of diagonal
//! lattices is the coordinatewise maximum of exponents, so convexity and
//! convex closure here are tropical (max-plus) convexity over the integers.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An opaque coordinate label: a plain basis index for rank-n modules, or a
/// k-subset of [n] for wedge modules.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Index(usize),
    Subset(Vec<usize>),
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Index(i) => write!(f, "{i}"),
            Label::Subset(s) => {
                write!(f, "{{")?;
                for (t, x) in s.iter().enumerate() {
                    if t > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// The ordered list of distinct labels shared by all vectors of one module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    labels: Vec<Label>,
}

impl IndexSet {
    pub fn new(labels: Vec<Label>) -> Result<Arc<Self>> {
        if labels.is_empty() {
            return Err(Error::InvalidInput("empty index set".into()));
        }
        let distinct: BTreeSet<&Label> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::InvalidInput("duplicate labels in index set".into()));
        }
        Ok(Arc::new(IndexSet { labels }))
    }

    /// The index set {0, ..., n-1} of a rank-n module.
    pub fn rank(n: usize) -> Arc<Self> {
        Arc::new(IndexSet {
            labels: (0..n).map(Label::Index).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }
}

fn same_index(a: &Arc<IndexSet>, b: &Arc<IndexSet>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::IndexMismatch)
    }
}

/// A diagonal lattice written as its exponent vector: coordinate i holds the
/// power of the uniformizer in front of the i-th basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    index: Arc<IndexSet>,
    coords: Vec<i64>,
}

impl ExponentVector {
    pub fn new(index: Arc<IndexSet>, coords: Vec<i64>) -> Result<Self> {
        if coords.len() != index.len() {
            return Err(Error::InvalidInput(format!(
                "coordinate count {} does not match index set size {}",
                coords.len(),
                index.len()
            )));
        }
        Ok(ExponentVector { index, coords })
    }

    pub fn index(&self) -> &Arc<IndexSet> {
        &self.index
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Subtracts the minimum coordinate, producing the canonical class
    /// representative (the maximal lattice of the class inside the standard
    /// lattice of its index set).
    pub fn normalize(&self) -> LatticeClass {
        let min = *self.coords.iter().min().expect("index sets are nonempty");
        LatticeClass {
            vector: ExponentVector {
                index: self.index.clone(),
                coords: self.coords.iter().map(|c| c - min).collect(),
            },
        }
    }

    /// Coordinatewise maximum: the exponent vector of the lattice
    /// intersection.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        same_index(&self.index, &other.index)?;
        Ok(ExponentVector {
            index: self.index.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| (*a).max(*b))
                .collect(),
        })
    }

    /// Multiplies the lattice by the a-th power of the uniformizer.
    pub fn scale(&self, a: i64) -> Self {
        ExponentVector {
            index: self.index.clone(),
            coords: self.coords.iter().map(|c| c + a).collect(),
        }
    }

    /// Lattice inclusion: inner is contained in outer iff every inner
    /// exponent is at least the outer one.
    pub fn contains(&self, inner: &Self) -> Result<bool> {
        same_index(&self.index, &inner.index)?;
        Ok(self
            .coords
            .iter()
            .zip(&inner.coords)
            .all(|(o, i)| i >= o))
    }
}

/// A homothety class of diagonal lattices, stored as the exponent vector with
/// minimum coordinate zero. Equality of classes is equality of these vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeClass {
    vector: ExponentVector,
}

impl PartialOrd for LatticeClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticeClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vector.coords.cmp(&other.vector.coords)
    }
}

impl LatticeClass {
    /// Builds a class from already-normalized coordinates over a rank-n
    /// index set. Convenience for literals in tests and examples.
    pub fn from_coords(coords: &[i64]) -> Result<Self> {
        let v = ExponentVector::new(IndexSet::rank(coords.len()), coords.to_vec())?;
        Ok(v.normalize())
    }

    pub fn vector(&self) -> &ExponentVector {
        &self.vector
    }

    pub fn index(&self) -> &Arc<IndexSet> {
        &self.vector.index
    }

    pub fn coords(&self) -> &[i64] {
        &self.vector.coords
    }

    pub fn spread(&self) -> i64 {
        *self.coords().iter().max().expect("nonempty")
    }

    /// Two distinct classes are neighbours iff representatives with
    /// difference vector in {0,1} exist, i.e. the normalized difference is a
    /// nonconstant 0/1 vector.
    pub fn is_neighbour(&self, other: &Self) -> Result<bool> {
        same_index(self.index(), other.index())?;
        if self == other {
            return Ok(false);
        }
        let d: Vec<i64> = other
            .coords()
            .iter()
            .zip(self.coords())
            .map(|(b, a)| b - a)
            .collect();
        let min = *d.iter().min().expect("nonempty");
        let max = *d.iter().max().expect("nonempty");
        Ok(max - min <= 1)
    }

    /// Graph distance in the neighbour graph restricted to the apartment:
    /// the spread of the coordinate difference.
    pub fn distance(&self, other: &Self) -> Result<u64> {
        same_index(self.index(), other.index())?;
        let d: Vec<i64> = self
            .coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| a - b)
            .collect();
        let min = *d.iter().min().expect("nonempty");
        let max = *d.iter().max().expect("nonempty");
        Ok((max - min) as u64)
    }
}

/// A finite set of lattice classes over a common index set, kept sorted for
/// deterministic iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSet {
    index: Arc<IndexSet>,
    classes: BTreeSet<LatticeClass>,
}

impl LatticeSet {
    pub fn new(index: Arc<IndexSet>, classes: impl IntoIterator<Item = LatticeClass>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for c in classes {
            same_index(&index, c.index())?;
            set.insert(c);
        }
        if set.is_empty() {
            return Err(Error::InvalidInput("empty lattice set".into()));
        }
        Ok(LatticeSet {
            index,
            classes: set,
        })
    }

    pub fn index(&self) -> &Arc<IndexSet> {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, c: &LatticeClass) -> bool {
        self.classes.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LatticeClass> {
        self.classes.iter()
    }

    fn with_classes(&self, classes: BTreeSet<LatticeClass>) -> Self {
        LatticeSet {
            index: self.index.clone(),
            classes,
        }
    }

    /// True iff every shifted pairwise intersection stays inside the set.
    /// Shifts are tested in the window 0..=spread of the pair difference;
    /// outside it the maximum degenerates to one of the two classes.
    pub fn is_convex(&self) -> bool {
        for c1 in &self.classes {
            for c2 in &self.classes {
                let spread = c1
                    .distance(c2)
                    .expect("classes of one set share an index set");
                for a in 0..=spread as i64 {
                    let m = c1
                        .vector()
                        .scale(a)
                        .intersect(c2.vector())
                        .expect("same index set")
                        .normalize();
                    if !self.classes.contains(&m) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Smallest convex superset, computed as the fixpoint of shifted
    /// pairwise intersections. Binary maxima generate all finite maxima, so
    /// iterating pairs suffices.
    pub fn convex_closure(&self) -> Self {
        let mut closure = self.classes.clone();
        let mut frontier: Vec<LatticeClass> = closure.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut fresh = Vec::new();
            let all: Vec<LatticeClass> = closure.iter().cloned().collect();
            for c1 in &all {
                for c2 in &frontier {
                    for (x, y) in [(c1, c2), (c2, c1)] {
                        let spread = x.distance(y).expect("same index set");
                        for a in 0..=spread as i64 {
                            let m = x
                                .vector()
                                .scale(a)
                                .intersect(y.vector())
                                .expect("same index set")
                                .normalize();
                            if closure.insert(m.clone()) {
                                fresh.push(m);
                            }
                        }
                    }
                }
            }
            frontier = fresh;
        }
        self.with_classes(closure)
    }

    /// Enumerates the tropical span: classes of max-combinations
    /// max_j(a_j + v_j) with a_1 = 0 and the remaining coefficients ranging
    /// over a window of radius twice the maximum generator spread. The
    /// window is wide enough: a span member c with min 0 has the exact
    /// representation a_j = min(c - v_j), and those coefficients relative to
    /// a_1 stay within twice the spread bound.
    pub fn tropical_span(&self) -> Self {
        let gens: Vec<&LatticeClass> = self.classes.iter().collect();
        let radius = 2 * gens.iter().map(|g| g.spread()).max().unwrap_or(0);
        let mut out = BTreeSet::new();
        let mut shifts = vec![0i64; gens.len()];
        enumerate_combinations(&gens, &mut shifts, 1, radius, &mut out);
        self.with_classes(out)
    }

    /// Membership in the tropical span without materializing it: the
    /// canonical projection onto the span reproduces c iff c is a member.
    pub fn span_member(&self, c: &LatticeClass) -> Result<bool> {
        same_index(&self.index, c.index())?;
        let n = self.index.len();
        let mut combo = vec![i64::MIN; n];
        for g in &self.classes {
            let a = c
                .coords()
                .iter()
                .zip(g.coords())
                .map(|(ci, gi)| ci - gi)
                .min()
                .expect("nonempty");
            for (ci, gi) in combo.iter_mut().zip(g.coords()) {
                *ci = (*ci).max(a + gi);
            }
        }
        let projected = ExponentVector::new(self.index.clone(), combo)?.normalize();
        Ok(&projected == c)
    }

    /// The unique minimal generating set of a convex set: the classes whose
    /// removal keeps the set convex.
    pub fn removable_classes(&self) -> Result<Vec<LatticeClass>> {
        if !self.is_convex() {
            return Err(Error::NotConvex);
        }
        let mut out = Vec::new();
        for c in &self.classes {
            if self.classes.len() == 1 {
                out.push(c.clone());
                continue;
            }
            let mut rest = self.classes.clone();
            rest.remove(c);
            if self.with_classes(rest).is_convex() {
                out.push(c.clone());
            }
        }
        Ok(out)
    }

    /// Orders the classes so that every prefix is convex, starting at
    /// `start`. Computed by reverse peeling; ties are broken by taking the
    /// lexicographically smallest removable class at each peel.
    pub fn elimination_order(&self, start: &LatticeClass) -> Result<Vec<LatticeClass>> {
        if !self.is_convex() {
            return Err(Error::NotConvex);
        }
        if !self.classes.contains(start) {
            return Err(Error::StartNotMember);
        }
        let mut current = self.classes.clone();
        let mut peeled = Vec::new();
        while current.len() > 1 {
            let set = self.with_classes(current.clone());
            let victim = set
                .removable_classes()?
                .into_iter()
                .find(|c| c != start)
                .ok_or(Error::NotConvex)?;
            current.remove(&victim);
            peeled.push(victim);
        }
        let mut order = vec![start.clone()];
        order.extend(peeled.into_iter().rev());
        Ok(order)
    }

    /// JSON form: {"labels": [...], "classes": [[...], ...]} with every row
    /// normalized. Rows are emitted in sorted order.
    pub fn to_json(&self) -> String {
        let doc = LatticeSetJson {
            labels: self.index.labels().to_vec(),
            classes: self.classes.iter().map(|c| c.coords().to_vec()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    /// Parses the JSON form, rejecting non-normalized rows.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LatticeSetJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let index = IndexSet::new(doc.labels)?;
        let mut classes = Vec::new();
        for row in doc.classes {
            if row.iter().min() != Some(&0) {
                return Err(Error::Parse(format!(
                    "class row {row:?} is not normalized (minimum coordinate must be 0)"
                )));
            }
            let v = ExponentVector::new(index.clone(), row)?;
            classes.push(v.normalize());
        }
        LatticeSet::new(index, classes)
    }
}

fn enumerate_combinations(
    gens: &[&LatticeClass],
    shifts: &mut Vec<i64>,
    pos: usize,
    radius: i64,
    out: &mut BTreeSet<LatticeClass>,
) {
    if pos == gens.len() {
        let index = gens[0].index().clone();
        let n = index.len();
        let mut combo = vec![i64::MIN; n];
        for (g, a) in gens.iter().zip(shifts.iter()) {
            for (ci, gi) in combo.iter_mut().zip(g.coords()) {
                *ci = (*ci).max(a + gi);
            }
        }
        let v = ExponentVector::new(index, combo).expect("length matches");
        out.insert(v.normalize());
        return;
    }
    for a in -radius..=radius {
        shifts[pos] = a;
        enumerate_combinations(gens, shifts, pos + 1, radius, out);
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeSetJson {
    labels: Vec<Label>,
    classes: Vec<Vec<i64>>,
}

/// The standard lattice chain of the Iwahori-level situation: class i has
/// i zeros followed by n-i ones.
pub fn std_chain(n: usize) -> Result<LatticeSet> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "standard chain needs n >= 2, got {n}"
        )));
    }
    let index = IndexSet::rank(n);
    let classes: Vec<LatticeClass> = (0..n)
        .map(|i| {
            let coords: Vec<i64> = (0..n).map(|j| if j < i { 0 } else { 1 }).collect();
            ExponentVector::new(index.clone(), coords)
                .expect("length matches")
                .normalize()
        })
        .collect();
    LatticeSet::new(index, classes)
}
