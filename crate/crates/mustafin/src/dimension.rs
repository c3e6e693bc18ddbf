//! Dimension machinery for closure classes: per-generator obstruction
//! coordinate sets W, the subset-constraint feasibility system M(h,C), the
//! resulting maximal dimension, and the verifier checking that every closure
//! class attains the full ambient dimension C(n,k) − 1.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::apartment::{LatticeClass, LatticeSet};
use crate::error::{Error, Result};
use crate::pluecker::{self, binomial, image_index, wedge_with};

/// The obstruction coordinates of one generator Λ against a closure class
/// Λ_C: positions where the gap of the representative of Λ_C maximal inside
/// Λ is strictly positive. Equivalently, the complement of the support of
/// the residue image Λ_{C,κ} → Λ_κ.
pub fn w_set(lambda: &LatticeClass, lambda_c: &LatticeClass) -> Result<BTreeSet<usize>> {
    if lambda.index() != lambda_c.index() {
        return Err(Error::IndexMismatch);
    }
    let gap: Vec<i64> = lambda_c
        .coords()
        .iter()
        .zip(lambda.coords())
        .map(|(c, l)| c - l)
        .collect();
    let min = *gap.iter().min().expect("nonempty");
    Ok(gap
        .iter()
        .enumerate()
        .filter(|(_, g)| *g - min > 0)
        .map(|(i, _)| i)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub w_set: BTreeSet<usize>,
}

/// Input of the feasibility search: ambient coordinate count N and one
/// obstruction set per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WProfile {
    ambient_rank: usize,
    generators: Vec<Generator>,
}

impl WProfile {
    pub fn new(ambient_rank: usize, generators: Vec<Generator>) -> Result<Self> {
        if ambient_rank == 0 {
            return Err(Error::InvalidInput("ambient rank must be positive".into()));
        }
        let mut labels = BTreeSet::new();
        for g in &generators {
            if !labels.insert(&g.label) {
                return Err(Error::InvalidInput(format!(
                    "duplicate generator label {}",
                    g.label
                )));
            }
            if g.w_set.iter().any(|&x| x >= ambient_rank) {
                return Err(Error::InvalidInput(format!(
                    "w-set of {} exceeds ambient rank {ambient_rank}",
                    g.label
                )));
            }
        }
        Ok(WProfile {
            ambient_rank,
            generators,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }
}

/// A nonnegative integer weight per generator with total h, satisfying
/// N − Σ_{Λ∈S} a_Λ > |⋂_{Λ∈S} W_Λ| for every nonempty generator subset S.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessVector {
    /// weights in profile generator order, paired with labels
    pub a: Vec<(String, usize)>,
    pub h: usize,
}

impl WitnessVector {
    /// Direct check of every subset constraint; used as the acceptance
    /// predicate for externally proposed witnesses.
    pub fn satisfies(&self, p: &WProfile) -> bool {
        let m = p.generators.len();
        if self.a.len() != m
            || self
                .a
                .iter()
                .zip(&p.generators)
                .any(|((l, _), g)| *l != g.label)
            || self.a.iter().map(|(_, v)| v).sum::<usize>() != self.h
        {
            return false;
        }
        let n = p.ambient_rank;
        for mask in 1usize..(1 << m) {
            let mut inter: Option<BTreeSet<usize>> = None;
            let mut sum = 0usize;
            for j in 0..m {
                if mask & (1 << j) != 0 {
                    sum += self.a[j].1;
                    inter = Some(match inter {
                        None => p.generators[j].w_set.clone(),
                        Some(s) => s.intersection(&p.generators[j].w_set).cloned().collect(),
                    });
                }
            }
            if n <= sum + inter.map(|s| s.len()).unwrap_or(0) {
                return false;
            }
        }
        true
    }
}

/// Searches for a witness with total weight h, or returns None. Depth-first
/// over generators in order; at each step the weight is capped by every
/// subset constraint whose largest generator index is the current one, so a
/// complete assignment satisfies all 2^m − 1 constraints.
pub fn feasible(p: &WProfile, h: usize) -> Option<WitnessVector> {
    let m = p.generators.len();
    let n = p.ambient_rank;
    if m == 0 {
        return (h == 0).then(|| WitnessVector { a: vec![], h: 0 });
    }
    let words = n.div_ceil(64);
    let mut bits = vec![vec![0u64; words]; m];
    for (j, g) in p.generators.iter().enumerate() {
        for &x in &g.w_set {
            bits[j][x / 64] |= 1 << (x % 64);
        }
    }
    // bound[S] = N − 1 − |⋂_{j∈S} W_j|; the constraint reads Σ_S a ≤ bound[S]
    let mut inter: Vec<Vec<u64>> = vec![vec![u64::MAX; words]; 1 << m];
    let mut bound = vec![0i64; 1 << m];
    for mask in 1usize..(1 << m) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        inter[mask] = inter[rest]
            .iter()
            .zip(&bits[low])
            .map(|(a, b)| a & b)
            .collect();
        let count: u32 = inter[mask].iter().map(|w| w.count_ones()).sum();
        bound[mask] = n as i64 - 1 - count as i64;
        if bound[mask] < 0 {
            return None;
        }
    }
    let cap1: Vec<usize> = (0..m).map(|j| bound[1 << j] as usize).collect();
    // suffix[j] = largest total the generators from j on could contribute
    let mut suffix = vec![0usize; m + 1];
    for j in (0..m).rev() {
        suffix[j] = suffix[j + 1] + cap1[j];
    }
    let mut a = vec![0usize; m];
    if dfs(0, 0, h, &mut a, &bound, &cap1, &suffix, m) {
        Some(WitnessVector {
            a: p.generators
                .iter()
                .zip(&a)
                .map(|(g, v)| (g.label.clone(), *v))
                .collect(),
            h,
        })
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    j: usize,
    assigned: usize,
    h: usize,
    a: &mut [usize],
    bound: &[i64],
    cap1: &[usize],
    suffix: &[usize],
    m: usize,
) -> bool {
    if j == m {
        return assigned == h;
    }
    let mut cap = (cap1[j] as i64).min((h - assigned) as i64);
    // every subset with largest index j, on top of the already fixed prefix
    let prefix = (1usize << j) - 1;
    let mut sub = prefix;
    loop {
        let sum: usize = (0..j).filter(|t| sub & (1 << t) != 0).map(|t| a[t]).sum();
        cap = cap.min(bound[sub | (1 << j)] - sum as i64);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & prefix;
    }
    let floor = (h - assigned).saturating_sub(suffix[j + 1]);
    if cap < floor as i64 {
        return false;
    }
    let mut v = cap as usize;
    loop {
        a[j] = v;
        if dfs(j + 1, assigned + v, h, a, bound, cap1, suffix, m) {
            return true;
        }
        if v == floor {
            return false;
        }
        v -= 1;
    }
}

/// The largest h with a feasible witness; None when even h = 0 fails (some
/// intersection already fills the ambient space). Feasibility is downward
/// closed in h, so the first hit of the descending scan is the maximum; it
/// never exceeds N − 1 because of the full-subset constraint.
pub fn max_image_dim(p: &WProfile) -> Option<usize> {
    (0..p.ambient_rank).rev().find(|&h| feasible(p, h).is_some())
}

/// A minimum-cardinality subset of the chain whose span contains the
/// target, always containing the zero-vector class; ties resolved by
/// lexicographic order on the chain positions.
pub fn minimal_generating_subset(
    chain: &LatticeSet,
    target: &LatticeClass,
) -> Result<LatticeSet> {
    if !chain.span_member(target)? {
        return Err(Error::TargetNotInClosure);
    }
    let classes: Vec<&LatticeClass> = chain.iter().collect();
    let zero = classes
        .iter()
        .position(|c| c.coords().iter().all(|&v| v == 0))
        .ok_or_else(|| {
            Error::InvalidInput("chain does not contain the zero-vector class".into())
        })?;
    let others: Vec<usize> = (0..classes.len()).filter(|&i| i != zero).collect();
    for extra in 0..classes.len() {
        let mut combo: Vec<usize> = (0..extra).collect();
        loop {
            let mut members = vec![classes[zero].clone()];
            members.extend(combo.iter().map(|&t| classes[others[t]].clone()));
            let subset = LatticeSet::new(chain.index().clone(), members)?;
            if subset.span_member(target)? {
                return Ok(subset);
            }
            if extra == 0 || !next_subset(&mut combo, others.len()) {
                break;
            }
        }
    }
    unreachable!("the full chain spans the target")
}

fn next_subset(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut t = k;
    while t > 0 {
        t -= 1;
        if combo[t] < n - k + t {
            combo[t] += 1;
            for u in t + 1..k {
                combo[u] = combo[u - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    FullChain,
    Reduced,
}

/// One verified closure class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRecord {
    /// position of the class in the sorted closure
    pub class_id: usize,
    pub exponents: Vec<i64>,
    pub image_index: Vec<usize>,
    /// labels of the generating subset used for the profile
    pub gamma_c: Vec<String>,
    pub max_h: Option<usize>,
    pub target: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub k: usize,
    pub mode: Mode,
    /// closure size (= C(n,k) when everything is consistent)
    pub total_classes: usize,
    /// chain classes are full-dimensional by construction and are skipped
    pub checked_classes: usize,
    pub records: Vec<ClassRecord>,
    pub overall: bool,
}

impl ConjectureReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "class_id,exponents,image_index,gamma_C,max_h,target,pass\n",
        );
        for r in &self.records {
            let exps: Vec<String> = r.exponents.iter().map(|v| v.to_string()).collect();
            let img: Vec<String> = r.image_index.iter().map(|v| v.to_string()).collect();
            let max_h = r
                .max_h
                .map(|h| h.to_string())
                .unwrap_or_else(|| "none".into());
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.class_id,
                exps.join(" "),
                img.join(" "),
                r.gamma_c.join(" "),
                max_h,
                r.target,
                r.pass
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Shared immutable state for verifying one (n,k): the wedge chain with its
/// labels, the closure, and the list of classes still to check. Per-class
/// checks are independent and safe to run concurrently.
pub struct ConjectureContext {
    n: usize,
    k: usize,
    mode: Mode,
    chain: LatticeSet,
    chain_labels: Vec<(LatticeClass, String)>,
    closure: Vec<LatticeClass>,
    targets: Vec<usize>,
}

impl ConjectureContext {
    pub fn new(n: usize, k: usize, mode: Mode) -> Result<Self> {
        let indexing = pluecker::ksubsets(n, k)?;
        let std = crate::apartment::std_chain(n)?;
        // labels track the chain position i of ∧^kΛ_i; the sorted set forgets it
        let mut chain_labels = Vec::new();
        // std_chain class i has exactly i zeros (n zeros for i = 0)
        for c in std.iter() {
            let zeros = c.coords().iter().filter(|&&v| v == 0).count();
            let i = if zeros == n { 0 } else { zeros };
            chain_labels.push((wedge_with(&indexing, c)?, format!("L{i}")));
        }
        chain_labels.sort_by(|a, b| a.0.cmp(&b.0));
        let chain = LatticeSet::new(
            indexing.index_set().clone(),
            chain_labels.iter().map(|(c, _)| c.clone()),
        )?;
        let closure: Vec<LatticeClass> = chain.convex_closure().iter().cloned().collect();
        let targets: Vec<usize> = closure
            .iter()
            .enumerate()
            .filter(|(_, c)| !chain.contains(c))
            .map(|(i, _)| i)
            .collect();
        Ok(ConjectureContext {
            n,
            k,
            mode,
            chain,
            chain_labels,
            closure,
            targets,
        })
    }

    pub fn closure_len(&self) -> usize {
        self.closure.len()
    }

    /// Indices into the closure of the classes that need a dimension check.
    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    fn label_of(&self, c: &LatticeClass) -> String {
        self.chain_labels
            .iter()
            .find(|(cc, _)| cc == c)
            .map(|(_, l)| l.clone())
            .expect("generator comes from the chain")
    }

    pub fn check(&self, closure_idx: usize) -> Result<ClassRecord> {
        let lambda_c = &self.closure[closure_idx];
        let ambient = binomial(self.n, self.k);
        let gamma = match self.mode {
            Mode::FullChain => self.chain.clone(),
            Mode::Reduced => minimal_generating_subset(&self.chain, lambda_c)?,
        };
        let mut generators = Vec::new();
        let mut labels = Vec::new();
        for g in gamma.iter() {
            let label = self.label_of(g);
            labels.push(label.clone());
            generators.push(Generator {
                label,
                w_set: w_set(g, lambda_c)?,
            });
        }
        let profile = WProfile::new(ambient, generators)?;
        // the conjecture asks exactly for h = N − 1; settle that first and
        // only run the descending scan when it fails
        let max_h = if feasible(&profile, ambient - 1).is_some() {
            Some(ambient - 1)
        } else {
            max_image_dim(&profile)
        };
        Ok(ClassRecord {
            class_id: closure_idx,
            exponents: lambda_c.coords().to_vec(),
            image_index: image_index(lambda_c)?.elems().to_vec(),
            gamma_c: labels,
            max_h,
            target: ambient - 1,
            pass: max_h == Some(ambient - 1),
        })
    }

    pub fn report(&self, records: Vec<ClassRecord>) -> ConjectureReport {
        let overall = records.iter().all(|r| r.pass);
        ConjectureReport {
            n: self.n,
            k: self.k,
            mode: self.mode,
            total_classes: self.closure.len(),
            checked_classes: records.len(),
            records,
            overall,
        }
    }
}

/// Checks every non-chain closure class of (n,k) for full image dimension.
pub fn verify_conjecture(n: usize, k: usize, mode: Mode) -> Result<ConjectureReport> {
    let ctx = ConjectureContext::new(n, k, mode)?;
    let records: Result<Vec<ClassRecord>> =
        ctx.targets().iter().map(|&t| ctx.check(t)).collect();
    Ok(ctx.report(records?))
}
