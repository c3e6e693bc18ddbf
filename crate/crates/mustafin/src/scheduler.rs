//! Blow-up schedules and incidence data, all purely combinatorial: the
//! dimension-staged sequence over Schubert indices, the convex-ordering
//! sequence over closure classes with kernel-coordinate center descriptors,
//! and neighbour graphs of convex sets.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::apartment::{LatticeClass, LatticeSet};
use crate::dimension::w_set;
use crate::error::{Error, Result};
use crate::pluecker::{ksubsets, schubert_dim, subset_leq, KSubset};

/// One stage of the dimension-staged schedule: all Schubert indices of one
/// fixed dimension, blown up together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupStage {
    pub stage_index: usize,
    pub centers: Vec<KSubset>,
}

/// The staged schedule: stages i = 1, …, (n−k)k − 1, where stage i lists the
/// Schubert indices of dimension i − 1 in lexicographic order.
pub fn genestier_schedule(n: usize, k: usize) -> Result<Vec<BlowupStage>> {
    let indexing = ksubsets(n, k)?;
    let last = (n - k) * k; // stages run strictly below this bound
    let mut stages = Vec::new();
    for i in 1..last {
        let centers: Vec<KSubset> = indexing
            .subsets()
            .iter()
            .filter(|s| schubert_dim(s) == i - 1)
            .cloned()
            .collect();
        stages.push(BlowupStage {
            stage_index: i,
            centers,
        });
    }
    Ok(stages)
}

/// Kernel data of one neighbour: the coordinates where the gap of the
/// neighbour's representative maximal inside the blown-up class is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighbourDatum {
    pub class: LatticeClass,
    pub kernel_coords: BTreeSet<usize>,
}

/// Center descriptor of one step of the convex-ordering sequence: the class
/// being added, with its neighbours inside the current prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterDescriptor {
    pub class: LatticeClass,
    pub neighbours: Vec<NeighbourDatum>,
}

/// Orders the closure starting from `start` so that every prefix is convex,
/// and attaches to each added class the neighbour/kernel data over the
/// preceding prefix. Steps cover every class except the start.
pub fn mustafin_blowup_sequence(
    closure: &LatticeSet,
    start: &LatticeClass,
) -> Result<Vec<CenterDescriptor>> {
    let order = closure.elimination_order(start)?;
    let mut steps = Vec::new();
    for t in 1..order.len() {
        let lambda = &order[t];
        let mut neighbours = Vec::new();
        for prev in &order[..t] {
            if lambda.is_neighbour(prev)? {
                neighbours.push(NeighbourDatum {
                    class: prev.clone(),
                    kernel_coords: w_set(lambda, prev)?,
                });
            }
        }
        steps.push(CenterDescriptor {
            class: lambda.clone(),
            neighbours,
        });
    }
    Ok(steps)
}

/// The neighbour graph of a convex set; edges are index pairs into the
/// sorted vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGraph {
    pub vertices: Vec<LatticeClass>,
    pub edges: Vec<(usize, usize)>,
}

pub fn component_graph(s: &LatticeSet) -> Result<ComponentGraph> {
    if !s.is_convex() {
        return Err(Error::NotConvex);
    }
    let vertices: Vec<LatticeClass> = s.iter().cloned().collect();
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if vertices[i].is_neighbour(&vertices[j])? {
                edges.push((i, j));
            }
        }
    }
    Ok(ComponentGraph { vertices, edges })
}

/// The components lying over the linear space of index I: all J ≤ I, in
/// lexicographic order.
pub fn inverse_image_components(i_subset: &KSubset) -> Result<Vec<KSubset>> {
    let indexing = ksubsets(i_subset.n(), i_subset.k())?;
    let mut out = Vec::new();
    for j in indexing.subsets() {
        if subset_leq(j, i_subset)? {
            out.push(j.clone());
        }
    }
    Ok(out)
}

fn coords_label(c: &LatticeClass) -> String {
    let parts: Vec<String> = c.coords().iter().map(|v| v.to_string()).collect();
    parts.join(",")
}

/// DOT rendering of the neighbour graph.
pub fn component_graph_dot(g: &ComponentGraph) -> String {
    let mut out = String::from("graph components {\n");
    for (i, v) in g.vertices.iter().enumerate() {
        out.push_str(&format!("  c{} [label=\"{}\"];\n", i, coords_label(v)));
    }
    for (i, j) in &g.edges {
        out.push_str(&format!("  c{i} -- c{j};\n"));
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of the Hasse diagram of the slotwise order on k-subsets.
pub fn subset_poset_dot(n: usize, k: usize) -> Result<String> {
    let indexing = ksubsets(n, k)?;
    let subsets = indexing.subsets();
    let name = |s: &KSubset| {
        let parts: Vec<String> = s.elems().iter().map(|v| v.to_string()).collect();
        parts.join("_")
    };
    let mut out = String::from("digraph subset_poset {\n");
    for s in subsets {
        out.push_str(&format!("  s{} [label=\"{}\"];\n", name(s), s));
    }
    for a in subsets {
        for b in subsets {
            if a == b || !subset_leq(a, b)? {
                continue;
            }
            // covering pairs only: nothing strictly between a and b
            let mut covering = true;
            for c in subsets {
                if c != a && c != b && subset_leq(a, c)? && subset_leq(c, b)? {
                    covering = false;
                    break;
                }
            }
            if covering {
                out.push_str(&format!("  s{} -> s{};\n", name(a), name(b)));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[derive(Serialize)]
struct StagesDoc<C: Serialize> {
    stages: Vec<StageDoc<C>>,
}

#[derive(Serialize)]
struct StageDoc<C: Serialize> {
    index: usize,
    centers: Vec<C>,
}

#[derive(Serialize)]
struct MustafinCenterDoc {
    class: Vec<i64>,
    neighbours: Vec<MustafinNeighbourDoc>,
}

#[derive(Serialize)]
struct MustafinNeighbourDoc {
    class: Vec<i64>,
    kernel_coords: Vec<usize>,
}

/// JSON for the staged schedule: {"stages": [{"index": i, "centers": […]}]}
/// with centers given as subset element arrays.
pub fn genestier_schedule_json(stages: &[BlowupStage]) -> String {
    let doc = StagesDoc {
        stages: stages
            .iter()
            .map(|s| StageDoc {
                index: s.stage_index,
                centers: s.centers.iter().map(|c| c.elems().to_vec()).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// JSON for the convex-ordering sequence, one stage per step.
pub fn mustafin_sequence_json(steps: &[CenterDescriptor]) -> String {
    let doc = StagesDoc {
        stages: steps
            .iter()
            .enumerate()
            .map(|(t, s)| StageDoc {
                index: t + 1,
                centers: vec![MustafinCenterDoc {
                    class: s.class.coords().to_vec(),
                    neighbours: s
                        .neighbours
                        .iter()
                        .map(|nb| MustafinNeighbourDoc {
                            class: nb.class.coords().to_vec(),
                            kernel_coords: nb.kernel_coords.iter().cloned().collect(),
                        })
                        .collect(),
                }],
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}
