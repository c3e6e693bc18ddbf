//! Acceptance gate: one test per criterion, each printing a single pass/fail
//! line. Run with `--nocapture` to see the lines on success.

use std::collections::BTreeSet;

use mustafin::apartment::{ExponentVector, IndexSet, LatticeClass, LatticeSet};
use mustafin::dimension::{
    feasible, max_image_dim, verify_conjecture, Generator, Mode, WProfile, WitnessVector,
};
use mustafin::pluecker::{
    binomial, image_index, ksubsets, lattice_for_index, schubert_dim, schubert_index, shift,
    subset_leq, subset_min, wedge_chain, KSubset,
};
use mustafin::scheduler::{genestier_schedule, mustafin_blowup_sequence};

fn report(name: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("criterion {name}: PASS"),
        Err(msg) => {
            println!("criterion {name}: FAIL ({msg})");
            panic!("criterion {name} failed: {msg}");
        }
    }
}

fn ensure(cond: bool, msg: impl Fn() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Small deterministic RNG for the randomized criteria; fixed seeds keep
/// the suite reproducible.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn random_set(rng: &mut Rng) -> LatticeSet {
    let n = 2 + rng.below(4) as usize; // 2..=5
    let gens = 1 + rng.below(4) as usize; // 1..=4
    let index = IndexSet::rank(n);
    let classes: Vec<LatticeClass> = (0..gens)
        .map(|_| {
            let coords: Vec<i64> = (0..n).map(|_| rng.below(4) as i64).collect();
            ExponentVector::new(index.clone(), coords)
                .unwrap()
                .normalize()
        })
        .collect();
    LatticeSet::new(index, classes).unwrap()
}

#[test]
fn criterion_1_closure_sizes() {
    report("1 (closure size C(n,k) for n <= 7)", (|| {
        for n in 2..=7usize {
            for k in 1..n {
                let closure = wedge_chain(n, k)
                    .map_err(|e| e.to_string())?
                    .convex_closure();
                ensure(closure.len() == binomial(n, k), || {
                    format!(
                        "closure size {} != C({n},{k}) = {}",
                        closure.len(),
                        binomial(n, k)
                    )
                })?;
            }
        }
        Ok(())
    })());
}

#[test]
fn criterion_2_conjecture_reproduction() {
    report("2 (full-dimension verdict, n <= 7 all k and k = 2 up to n = 10)", (|| {
        let mut cases: Vec<(usize, usize)> = Vec::new();
        for n in 2..=7usize {
            for k in 1..n {
                cases.push((n, k));
            }
        }
        cases.extend([(8, 2), (9, 2), (10, 2)]);
        for (n, k) in cases {
            for mode in [Mode::FullChain, Mode::Reduced] {
                let r = verify_conjecture(n, k, mode).map_err(|e| e.to_string())?;
                ensure(r.overall, || format!("verdict false at n={n} k={k} {mode:?}"))?;
                if (n, k) == (5, 2) {
                    ensure(r.total_classes == 10 && r.checked_classes == 5, || {
                        format!(
                            "(5,2) counts: total {} checked {}",
                            r.total_classes, r.checked_classes
                        )
                    })?;
                }
            }
            // both modes must agree record by record
            let full = verify_conjecture(n, k, Mode::FullChain).map_err(|e| e.to_string())?;
            let reduced = verify_conjecture(n, k, Mode::Reduced).map_err(|e| e.to_string())?;
            for (a, b) in full.records.iter().zip(&reduced.records) {
                ensure(
                    a.class_id == b.class_id && a.pass == b.pass && a.max_h == b.max_h,
                    || format!("mode disagreement at n={n} k={k} class {}", a.class_id),
                )?;
            }
        }
        Ok(())
    })());
}

#[test]
fn criterion_3_worked_example_goldens() {
    report("3 (worked-example goldens)", (|| {
        let sub = |n: usize, e: &[usize]| KSubset::new(n, e.to_vec()).unwrap();
        let checks = [
            (schubert_index(5, 2, 2, 2), sub(5, &[0, 1])),
            (schubert_index(5, 2, 2, 1), sub(5, &[1, 4])),
            (schubert_index(5, 2, 2, 0), sub(5, &[3, 4])),
        ];
        for (got, want) in checks {
            let got = got.map_err(|e| e.to_string())?;
            ensure(got == want, || format!("index family: got {got}, want {want}"))?;
        }
        let s1 = shift(&sub(6, &[0, 2, 3])).map_err(|e| e.to_string())?;
        ensure(s1 == sub(6, &[2, 3, 5]), || format!("shift step 1: {s1}"))?;
        let s2 = shift(&s1).map_err(|e| e.to_string())?;
        ensure(s2 == sub(6, &[3, 4, 5]), || format!("shift step 2: {s2}"))?;

        let m = subset_min(&sub(6, &[0, 4, 5]), &sub(6, &[1, 2, 3])).map_err(|e| e.to_string())?;
        ensure(m == sub(6, &[0, 2, 3]), || format!("subset minimum: {m}"))?;

        // lattice_for_index({0,2,3}) at (6,3) is the intersection of the
        // canonical wedge classes of chain members 1 and 4 (the π-powers of
        // the source normalization cancel against the canonical shift)
        let chain = mustafin::apartment::std_chain(6).unwrap();
        let indexing = ksubsets(6, 3).unwrap();
        let find = |coords: &[i64]| chain.iter().find(|c| c.coords() == coords).unwrap();
        let w1 = mustafin::pluecker::wedge_with(&indexing, find(&[0, 1, 1, 1, 1, 1])).unwrap();
        let w4 = mustafin::pluecker::wedge_with(&indexing, find(&[0, 0, 0, 0, 1, 1])).unwrap();
        let expected = w1.vector().intersect(w4.vector()).unwrap().normalize();
        let got = lattice_for_index(&sub(6, &[0, 2, 3])).map_err(|e| e.to_string())?;
        ensure(got == expected, || "worked (6,3) lattice mismatch".to_string())?;
        Ok(())
    })());
}

#[test]
fn criterion_4_bijection_suite() {
    report("4 (closure class / subset bijection, n <= 6)", (|| {
        for n in 2..=6usize {
            for k in 1..n {
                let indexing = ksubsets(n, k).unwrap();
                let closure = wedge_chain(n, k).unwrap().convex_closure();
                ensure(closure.len() == indexing.len(), || {
                    format!("size mismatch at n={n} k={k}")
                })?;
                let mut seen: BTreeSet<KSubset> = BTreeSet::new();
                for c in closure.iter() {
                    let img = image_index(c).map_err(|e| {
                        format!("image_index failed at n={n} k={k}: {e}")
                    })?;
                    ensure(seen.insert(img.clone()), || {
                        format!("duplicate image {img} at n={n} k={k}")
                    })?;
                    let back = lattice_for_index(&img).map_err(|e| e.to_string())?;
                    ensure(&back == c, || {
                        format!("lattice_for_index(image_index) not identity at n={n} k={k}")
                    })?;
                    gap_and_interval_invariants(&indexing, c, n, k)?;
                }
                ensure(seen.len() == indexing.len(), || {
                    format!("image not surjective at n={n} k={k}")
                })?;
                for i_subset in indexing.subsets() {
                    let c = lattice_for_index(i_subset).map_err(|e| e.to_string())?;
                    let img = image_index(&c).map_err(|e| e.to_string())?;
                    ensure(&img == i_subset, || {
                        format!("image_index(lattice_for_index) not identity at {i_subset}")
                    })?;
                }
            }
        }
        Ok(())
    })());
}

fn gap_and_interval_invariants(
    indexing: &mustafin::pluecker::PlueckerIndexing,
    c: &LatticeClass,
    n: usize,
    k: usize,
) -> Result<(), String> {
    let subsets = indexing.subsets();
    // gap of {0,1} between each subset and every maximal subset below it
    for (pj, j) in subsets.iter().enumerate() {
        for (pq, q) in subsets.iter().enumerate() {
            if q == j || !subset_leq(q, j).unwrap() {
                continue;
            }
            let covering = subsets.iter().all(|m| {
                m == q || m == j || !(subset_leq(q, m).unwrap() && subset_leq(m, j).unwrap())
            });
            if covering {
                let gap = c.coords()[pj] - c.coords()[pq];
                ensure((0..=1).contains(&gap), || {
                    format!("gap {gap} between {q} and {j} at n={n} k={k}")
                })?;
            }
        }
    }
    // the multiset of coordinate values is an integer interval from 0
    let values: BTreeSet<i64> = c.coords().iter().cloned().collect();
    let max = *values.iter().max().unwrap();
    ensure(values.len() as i64 == max + 1 && values.contains(&0), || {
        format!("coordinate values {values:?} not an interval at n={n} k={k}")
    })
}

#[test]
fn criterion_5_closure_operator_suite() {
    report("5 (closure operator laws on 500 random sets)", (|| {
        let mut rng = Rng(0x9e3779b97f4a7c15);
        for trial in 0..500 {
            let s = random_set(&mut rng);
            let closure = s.convex_closure();
            let span = s.tropical_span();
            ensure(closure == span, || format!("span != closure, trial {trial}"))?;
            ensure(closure.is_convex(), || format!("closure not convex, trial {trial}"))?;
            ensure(closure.convex_closure() == closure, || {
                format!("closure not idempotent, trial {trial}")
            })?;
            for c in s.iter() {
                ensure(closure.contains(c), || format!("not extensive, trial {trial}"))?;
            }
            for c in closure.iter() {
                ensure(s.span_member(c).unwrap(), || {
                    format!("span_member rejects closure member, trial {trial}")
                })?;
            }
            // a random probe agrees with materialized membership
            let nlen = s.index().len();
            let coords: Vec<i64> = (0..nlen).map(|_| rng.below(4) as i64).collect();
            let probe = ExponentVector::new(s.index().clone(), coords)
                .unwrap()
                .normalize();
            ensure(
                s.span_member(&probe).unwrap() == closure.contains(&probe),
                || format!("span_member disagrees on probe, trial {trial}"),
            )?;
            // monotone: adding a generator can only grow the closure
            let mut grown: Vec<LatticeClass> = s.iter().cloned().collect();
            grown.push(probe);
            let closure2 = LatticeSet::new(s.index().clone(), grown)
                .unwrap()
                .convex_closure();
            for c in closure.iter() {
                ensure(closure2.contains(c), || format!("not monotone, trial {trial}"))?;
            }
        }
        // two-class chains: neighbours exactly at consecutive indices
        for trial in 0..200 {
            let n = 2 + rng.below(4) as usize;
            let index = IndexSet::rank(n);
            let mk = |rng: &mut Rng| {
                let coords: Vec<i64> = (0..n).map(|_| rng.below(4) as i64).collect();
                ExponentVector::new(index.clone(), coords).unwrap().normalize()
            };
            let c1 = mk(&mut rng);
            let c2 = mk(&mut rng);
            let pair = LatticeSet::new(index.clone(), [c1.clone(), c2.clone()]).unwrap();
            let closure = pair.convex_closure();
            let d = c1.distance(&c2).unwrap();
            let lo = -c1
                .coords()
                .iter()
                .zip(c2.coords())
                .map(|(a, b)| a - b)
                .max()
                .unwrap();
            let chain: Vec<LatticeClass> = (lo..=lo + d as i64)
                .map(|t| {
                    c1.vector()
                        .scale(t)
                        .intersect(c2.vector())
                        .unwrap()
                        .normalize()
                })
                .collect();
            ensure(chain.len() == closure.len(), || {
                format!("chain size mismatch, trial {trial}")
            })?;
            for (i, a) in chain.iter().enumerate() {
                ensure(closure.contains(a), || format!("chain escape, trial {trial}"))?;
                for (j, b) in chain.iter().enumerate().skip(i + 1) {
                    ensure(a.is_neighbour(b).unwrap() == (j == i + 1), || {
                        format!("adjacency at ({i},{j}), trial {trial}")
                    })?;
                }
            }
        }
        Ok(())
    })());
}

#[test]
fn criterion_6_dimension_oracle() {
    report("6 (feasibility vs brute force, plus the k = 2 witness)", (|| {
        let mut rng = Rng(0x2545f4914f6cdd1d);
        for trial in 0..200 {
            let ambient = 3 + rng.below(10) as usize; // 3..=12
            let gens = 1 + rng.below(3) as usize;
            let generators: Vec<Generator> = (0..gens)
                .map(|g| Generator {
                    label: format!("g{g}"),
                    w_set: (0..ambient)
                        .filter(|_| rng.below(3) == 0)
                        .collect(),
                })
                .collect();
            let p = WProfile::new(ambient, generators).unwrap();
            let h = rng.below(ambient as u64 + 1) as usize;
            let got = feasible(&p, h);
            let brute = brute_force_feasible(&p, h);
            ensure(got.is_some() == brute, || {
                format!("feasibility mismatch, trial {trial}, h={h}")
            })?;
            if let Some(w) = &got {
                ensure(w.satisfies(&p), || format!("bad witness, trial {trial}"))?;
            }
            let brute_max = (0..ambient).rev().find(|&t| brute_force_feasible(&p, t));
            ensure(max_image_dim(&p) == brute_max, || {
                format!("max mismatch, trial {trial}")
            })?;
        }
        // the closed-form two-generator witness for k = 2
        for n in 3..=8usize {
            for i in 1..n {
                let indexing = ksubsets(n, 2).unwrap();
                let big = binomial(n, 2);
                let cards: Vec<usize> = indexing
                    .subsets()
                    .iter()
                    .map(|s| s.elems().iter().filter(|&&x| x < i).count())
                    .collect();
                let w0: BTreeSet<usize> = (0..big).filter(|&p| cards[p] == 2).collect();
                let wi: BTreeSet<usize> = (0..big).filter(|&p| cards[p] == 0).collect();
                let mid = (0..big).filter(|&p| cards[p] == 1).count();
                let profile = WProfile::new(
                    big,
                    vec![
                        Generator { label: "L0".into(), w_set: w0.clone() },
                        Generator { label: "Li".into(), w_set: wi.clone() },
                    ],
                )
                .unwrap();
                let witness = WitnessVector {
                    a: vec![("L0".into(), wi.len()), ("Li".into(), w0.len() + mid - 1)],
                    h: big - 1,
                };
                ensure(witness.satisfies(&profile), || {
                    format!("closed-form witness rejected at n={n} i={i}")
                })?;
                ensure(feasible(&profile, big - 1).is_some(), || {
                    format!("search misses h = C(n,2)-1 at n={n} i={i}")
                })?;
            }
        }
        Ok(())
    })());
}

fn brute_force_feasible(p: &WProfile, h: usize) -> bool {
    fn rec(p: &WProfile, h: usize, j: usize, m: usize, acc: &mut Vec<usize>, rem: usize) -> bool {
        if j == m {
            if rem != 0 {
                return false;
            }
            let w = WitnessVector {
                a: p.generators()
                    .iter()
                    .zip(acc.iter())
                    .map(|(g, v)| (g.label.clone(), *v))
                    .collect(),
                h,
            };
            return w.satisfies(p);
        }
        for v in 0..=rem {
            acc.push(v);
            let hit = rec(p, h, j + 1, m, acc, rem - v);
            acc.pop();
            if hit {
                return true;
            }
        }
        false
    }
    let m = p.generators().len();
    rec(p, h, 0, m, &mut Vec::new(), h)
}

#[test]
fn criterion_7_schedule_counts() {
    report("7 (stage counts and convex-prefix coverage)", (|| {
        for n in 2..=7usize {
            for k in 1..n {
                let stages = genestier_schedule(n, k).map_err(|e| e.to_string())?;
                let expected_stages = (n - k) * k - 1;
                ensure(stages.len() == expected_stages, || {
                    format!("stage count at n={n} k={k}: {}", stages.len())
                })?;
                let indexing = ksubsets(n, k).unwrap();
                for stage in &stages {
                    let d = stage.stage_index - 1;
                    let brute = indexing
                        .subsets()
                        .iter()
                        .filter(|s| schubert_dim(s) == d)
                        .count();
                    ensure(stage.centers.len() == brute, || {
                        format!("center count at n={n} k={k} dim {d}")
                    })?;
                }
            }
        }
        for n in 2..=6usize {
            for k in 1..n {
                let closure = wedge_chain(n, k).unwrap().convex_closure();
                let start = closure
                    .iter()
                    .find(|c| c.coords().iter().all(|&v| v == 0))
                    .unwrap()
                    .clone();
                let steps =
                    mustafin_blowup_sequence(&closure, &start).map_err(|e| e.to_string())?;
                ensure(steps.len() == binomial(n, k) - 1, || {
                    format!("sequence length at n={n} k={k}")
                })?;
                let mut covered: BTreeSet<LatticeClass> =
                    steps.iter().map(|s| s.class.clone()).collect();
                covered.insert(start.clone());
                ensure(covered.len() == closure.len(), || {
                    format!("sequence does not cover closure at n={n} k={k}")
                })?;
                // every prefix of the induced order is convex
                let mut prefix = vec![start.clone()];
                for s in &steps {
                    prefix.push(s.class.clone());
                    let p = LatticeSet::new(closure.index().clone(), prefix.iter().cloned())
                        .unwrap();
                    ensure(p.is_convex(), || {
                        format!("non-convex prefix at n={n} k={k} len {}", prefix.len())
                    })?;
                }
            }
        }
        Ok(())
    })());
}
