//! The k-subset index calculus behind Plücker coordinates: wedge powers of
//! lattice classes, the slotwise partial order and minima on k-subsets, the
//! two-parameter subset family I_i^l, the shift operator, and the two-way
//! correspondence between closure classes and subsets.

use std::collections::HashMap;
use std::sync::Arc;

use crate::apartment::{ExponentVector, IndexSet, Label, LatticeClass, LatticeSet};
use crate::error::{Error, Result};

/// A k-element subset of [n] = {0,…,n−1}, stored strictly increasing. Indexes
/// one Plücker coordinate, one Schubert variety, one component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KSubset {
    n: usize,
    elems: Vec<usize>,
}

impl KSubset {
    pub fn new(n: usize, elems: Vec<usize>) -> Result<Self> {
        if elems.is_empty() || elems.len() >= n {
            return Err(Error::InvalidInput(format!(
                "subset size must be in 1..{n}, got {}",
                elems.len()
            )));
        }
        for w in elems.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidInput(format!(
                    "subset {elems:?} is not strictly increasing"
                )));
            }
        }
        if *elems.last().unwrap() >= n {
            return Err(Error::InvalidInput(format!(
                "subset {elems:?} exceeds ambient bound {n}"
            )));
        }
        Ok(KSubset { n, elems })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    /// The maximum {n−k,…,n−1} of the slotwise order.
    pub fn top(n: usize, k: usize) -> Result<Self> {
        check_params(n, k)?;
        KSubset::new(n, (n - k..n).collect())
    }

    /// The minimum {0,…,k−1}.
    pub fn bottom(n: usize, k: usize) -> Result<Self> {
        check_params(n, k)?;
        KSubset::new(n, (0..k).collect())
    }

    pub fn label(&self) -> Label {
        Label::Subset(self.elems.clone())
    }
}

impl std::fmt::Display for KSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.label().fmt(f)
    }
}

fn check_params(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::InvalidInput(format!(
            "need 0 < k < n, got n={n}, k={k}"
        )));
    }
    Ok(())
}

fn same_params(a: &KSubset, b: &KSubset) -> Result<()> {
    if a.n == b.n && a.k() == b.k() {
        Ok(())
    } else {
        Err(Error::ParamMismatch)
    }
}

/// Slotwise comparison on sorted tuples: I ≤ J iff i_t ≤ j_t for all t.
pub fn subset_leq(i: &KSubset, j: &KSubset) -> Result<bool> {
    same_params(i, j)?;
    Ok(i.elems.iter().zip(&j.elems).all(|(a, b)| a <= b))
}

/// Slotwise minimum; the meet of the partial order (strict monotonicity of
/// the inputs carries over slot by slot).
pub fn subset_min(i: &KSubset, j: &KSubset) -> Result<KSubset> {
    same_params(i, j)?;
    KSubset::new(
        i.n,
        i.elems
            .iter()
            .zip(&j.elems)
            .map(|(a, b)| *a.min(b))
            .collect(),
    )
}

/// All k-subsets of [n] in lexicographic order, with the inverse
/// subset→position map; fixes the coordinate order of the wedge module.
#[derive(Debug, Clone)]
pub struct PlueckerIndexing {
    n: usize,
    k: usize,
    subsets: Vec<KSubset>,
    pos: HashMap<Vec<usize>, usize>,
    index: Arc<IndexSet>,
}

impl PlueckerIndexing {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[KSubset] {
        &self.subsets
    }

    pub fn position(&self, s: &KSubset) -> Result<usize> {
        if s.n != self.n || s.k() != self.k {
            return Err(Error::ParamMismatch);
        }
        Ok(self.pos[&s.elems])
    }

    /// The shared index set labelling wedge-module coordinates by subsets.
    pub fn index_set(&self) -> &Arc<IndexSet> {
        &self.index
    }
}

fn next_combination(current: &mut [usize], n: usize) -> bool {
    let k = current.len();
    let mut t = k;
    while t > 0 {
        t -= 1;
        if current[t] < n - k + t {
            current[t] += 1;
            for u in t + 1..k {
                current[u] = current[u - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Enumerates all C(n,k) subsets in lexicographic order.
pub fn ksubsets(n: usize, k: usize) -> Result<PlueckerIndexing> {
    check_params(n, k)?;
    let mut subsets = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        subsets.push(KSubset::new(n, current.clone())?);
        if !next_combination(&mut current, n) {
            break;
        }
    }
    let pos: HashMap<Vec<usize>, usize> = subsets
        .iter()
        .enumerate()
        .map(|(p, s)| (s.elems.clone(), p))
        .collect();
    let index = IndexSet::new(subsets.iter().map(KSubset::label).collect())?;
    Ok(PlueckerIndexing {
        n,
        k,
        subsets,
        pos,
        index,
    })
}

/// Wedge power of a diagonal lattice class: the exponent at subset I is the
/// sum of the k chosen coordinate exponents, then normalized.
pub fn wedge(c: &LatticeClass, k: usize) -> Result<LatticeClass> {
    let n = c.index().len();
    check_params(n, k)?;
    let indexing = ksubsets(n, k)?;
    wedge_with(&indexing, c)
}

/// Same as `wedge` but reusing a prebuilt indexing.
pub fn wedge_with(indexing: &PlueckerIndexing, c: &LatticeClass) -> Result<LatticeClass> {
    if c.index().len() != indexing.n {
        return Err(Error::ParamMismatch);
    }
    let coords: Vec<i64> = indexing
        .subsets
        .iter()
        .map(|s| s.elems.iter().map(|&i| c.coords()[i]).sum())
        .collect();
    Ok(ExponentVector::new(indexing.index.clone(), coords)?.normalize())
}

/// The wedge powers of the standard chain: {∧^kΛ_0, …, ∧^kΛ_{n−1}}.
pub fn wedge_chain(n: usize, k: usize) -> Result<LatticeSet> {
    check_params(n, k)?;
    let indexing = ksubsets(n, k)?;
    let chain = crate::apartment::std_chain(n)?;
    let classes: Result<Vec<LatticeClass>> =
        chain.iter().map(|c| wedge_with(&indexing, c)).collect();
    LatticeSet::new(indexing.index.clone(), classes?)
}

/// The subset I_i^l: {i−l,…,i−1} ∪ {n−k+l,…,n−1} when i+k < n+l, otherwise
/// the top subset {n−k,…,n−1}.
pub fn schubert_index(n: usize, k: usize, i: usize, l: usize) -> Result<KSubset> {
    check_params(n, k)?;
    if i >= n || l > k.min(i) {
        return Err(Error::InvalidInput(format!(
            "schubert index out of range: n={n}, k={k}, i={i}, l={l}"
        )));
    }
    if i + k < n + l {
        let mut elems: Vec<usize> = (i - l..i).collect();
        elems.extend(n - k + l..n);
        KSubset::new(n, elems)
    } else {
        KSubset::top(n, k)
    }
}

/// The shift I[1]: the slotwise minimum of I_i^{l−1} over all (i,l) with
/// l ≥ 1 and I ≤ I_i^l; top if no constraint binds.
pub fn shift(i_subset: &KSubset) -> Result<KSubset> {
    let n = i_subset.n;
    let k = i_subset.k();
    let mut acc: Option<KSubset> = None;
    for i in 0..n {
        for l in 1..=k.min(i) {
            let upper = schubert_index(n, k, i, l)?;
            if subset_leq(i_subset, &upper)? {
                let lower = schubert_index(n, k, i, l - 1)?;
                acc = Some(match acc {
                    None => lower,
                    Some(prev) => subset_min(&prev, &lower)?,
                });
            }
        }
    }
    match acc {
        Some(s) => Ok(s),
        None => KSubset::top(n, k),
    }
}

/// Reads off the subset indexing the image of a closure class: the zero set
/// of the exponent vector must be the down-set of a unique maximum, which is
/// returned.
pub fn image_index(c: &LatticeClass) -> Result<KSubset> {
    let subsets = subsets_of_index(c.index())?;
    let zero: Vec<&KSubset> = subsets
        .iter()
        .zip(c.coords())
        .filter(|(_, &v)| v == 0)
        .map(|(s, _)| s)
        .collect();
    if zero.is_empty() {
        return Err(Error::NotPrincipalDownSet);
    }
    // the apex of a principal down-set is the slotwise max of its members
    let n = zero[0].n;
    let mut apex = zero[0].elems.clone();
    for s in &zero[1..] {
        for (a, e) in apex.iter_mut().zip(&s.elems) {
            *a = (*a).max(*e);
        }
    }
    let apex = KSubset::new(n, apex).map_err(|_| Error::NotPrincipalDownSet)?;
    for (s, &v) in subsets.iter().zip(c.coords()) {
        if (v == 0) != subset_leq(s, &apex)? {
            return Err(Error::NotPrincipalDownSet);
        }
    }
    Ok(apex)
}

/// The closure class with image V_I: coordinate at J is the least l with
/// J ≤ I[l], where I[l] is the l-fold shift of I.
pub fn lattice_for_index(i_subset: &KSubset) -> Result<LatticeClass> {
    let n = i_subset.n;
    let k = i_subset.k();
    let indexing = ksubsets(n, k)?;
    let top = KSubset::top(n, k)?;
    // iterated shifts of I, ending at the top fixed point
    let mut shifts = vec![i_subset.clone()];
    while shifts.last().unwrap() != &top {
        let next = shift(shifts.last().unwrap())?;
        if shifts.len() > indexing.len() {
            return Err(Error::InvalidInput(
                "iterated shift failed to stabilize".into(),
            ));
        }
        shifts.push(next);
    }
    let coords: Result<Vec<i64>> = indexing
        .subsets
        .iter()
        .map(|j| {
            for (l, s) in shifts.iter().enumerate() {
                if subset_leq(j, s)? {
                    return Ok(l as i64);
                }
            }
            unreachable!("everything is below the top subset")
        })
        .collect();
    Ok(ExponentVector::new(indexing.index.clone(), coords?)?.normalize())
}

/// Dimension of the Schubert variety X_I: Σ_t (i_t − t).
pub fn schubert_dim(i_subset: &KSubset) -> usize {
    i_subset
        .elems
        .iter()
        .enumerate()
        .map(|(t, &e)| e - t)
        .sum()
}

/// Recovers the KSubsets of an index set whose labels are subsets.
pub fn subsets_of_index(index: &Arc<IndexSet>) -> Result<Vec<KSubset>> {
    let mut max = 0usize;
    let mut rows = Vec::new();
    for label in index.labels() {
        match label {
            Label::Subset(s) => {
                max = max.max(*s.last().ok_or(Error::InvalidInput(
                    "empty subset label".into(),
                ))?);
                rows.push(s.clone());
            }
            Label::Index(_) => {
                return Err(Error::InvalidInput(
                    "index set is not labelled by subsets".into(),
                ))
            }
        }
    }
    let k = rows[0].len();
    // the ambient n is pinned by |index| = C(n,k); scan upward from the
    // largest member seen
    let mut n = max + 1;
    while binomial(n, k) < index.len() {
        n += 1;
    }
    if binomial(n, k) != index.len() {
        return Err(Error::InvalidInput(
            "label count is not a binomial coefficient".into(),
        ));
    }
    rows.into_iter().map(|r| KSubset::new(n, r)).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for t in 0..k {
        acc = acc * (n - t) / (t + 1);
    }
    acc
}

/// One row of the component/subset correspondence table.
pub struct CorrespondenceRow {
    pub subset: KSubset,
    pub exponents: Vec<i64>,
    pub schubert_dim: usize,
}

/// The full correspondence: every subset with its closure-class exponent
/// vector and Schubert dimension, in lexicographic subset order.
pub fn correspondence(n: usize, k: usize) -> Result<Vec<CorrespondenceRow>> {
    let indexing = ksubsets(n, k)?;
    indexing
        .subsets
        .iter()
        .map(|s| {
            Ok(CorrespondenceRow {
                subset: s.clone(),
                exponents: lattice_for_index(s)?.coords().to_vec(),
                schubert_dim: schubert_dim(s),
            })
        })
        .collect()
}
