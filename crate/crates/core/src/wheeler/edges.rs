use std::collections::HashMap;

use super::WheelerGraph;
use crate::bitvec::BitVector;
use crate::error::{Error, Result};
use crate::symbol::Symbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge<S> {
    pub source: usize,
    pub target: usize,
    pub label: S,
}

impl<S> Edge<S> {
    pub fn new(source: usize, target: usize, label: S) -> Self {
        Edge {
            source,
            target,
            label,
        }
    }
}

/// Plain list-of-edges graph over vertices `0..n_vertices`, numbered in
/// their claimed Wheeler order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListGraph<S> {
    pub n_vertices: usize,
    pub edges: Vec<Edge<S>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<S> {
    Valid,
    /// `condition` is 1, 2 or 3 in the usual numbering: zero in-degree
    /// vertices first, labels order targets, equal labels do not cross.
    Violation {
        condition: u8,
        witnesses: Vec<Edge<S>>,
    },
}

impl<S> Verdict<S> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

fn in_degrees<S>(graph: &EdgeListGraph<S>) -> Vec<usize> {
    let mut deg = vec![0; graph.n_vertices];
    for e in &graph.edges {
        deg[e.target] += 1;
    }
    deg
}

fn zero_in_degree_violation<S: Symbol>(graph: &EdgeListGraph<S>) -> Option<Verdict<S>> {
    let deg = in_degrees(graph);
    let first_entered = deg.iter().position(|&d| d > 0)?;
    deg[first_entered..].iter().position(|&d| d == 0)?;
    let witness = *graph.edges.iter().find(|e| e.target == first_entered)?;
    Some(Verdict::Violation {
        condition: 1,
        witnesses: vec![witness],
    })
}

/// Checks the three Wheeler conditions over every pair of edges.
/// Quadratic in the number of edges; reports the first violating pair.
pub fn validate_wheeler<S: Symbol>(graph: &EdgeListGraph<S>) -> Verdict<S> {
    if let Some(v) = zero_in_degree_violation(graph) {
        return v;
    }
    let edges = &graph.edges;
    for (i, &a) in edges.iter().enumerate() {
        for &b in &edges[i + 1..] {
            // Orient the pair so that `lo` has the smaller label, or the
            // smaller source on a label tie.
            let (lo, hi) = if (a.label, a.source) <= (b.label, b.source) {
                (a, b)
            } else {
                (b, a)
            };
            if lo.label < hi.label && lo.target >= hi.target {
                return Verdict::Violation {
                    condition: 2,
                    witnesses: vec![lo, hi],
                };
            }
            if lo.label == hi.label && lo.source < hi.source && lo.target > hi.target {
                return Verdict::Violation {
                    condition: 3,
                    witnesses: vec![lo, hi],
                };
            }
        }
    }
    Verdict::Valid
}

/// Same verdict as [`validate_wheeler`] up to the choice of witness, in
/// `O(|E| log |E|)`.
pub fn check_wheeler<S: Symbol>(graph: &EdgeListGraph<S>) -> Verdict<S> {
    if let Some(v) = zero_in_degree_violation(graph) {
        return v;
    }
    let mut edges = graph.edges.clone();
    edges.sort_unstable_by_key(|e| (e.label, e.source, e.target));
    // Condition 3: within a label, targets never decrease with the source.
    // Sources tie only for the same vertex, where any target order is allowed,
    // so track the largest target among strictly smaller sources.
    let mut group = 0;
    while group < edges.len() {
        let label = edges[group].label;
        let end = group + edges[group..].partition_point(|e| e.label == label);
        let mut best_prev: Option<Edge<S>> = None;
        let mut i = group;
        while i < end {
            let src = edges[i].source;
            let run_end = i + edges[i..end].partition_point(|e| e.source == src);
            if let Some(prev) = best_prev {
                if let Some(low) = edges[i..run_end].iter().find(|e| e.target < prev.target) {
                    return Verdict::Violation {
                        condition: 3,
                        witnesses: vec![prev, *low],
                    };
                }
            }
            let run_max = *edges[i..run_end].iter().max_by_key(|e| e.target).unwrap();
            if best_prev.is_none_or(|p| run_max.target > p.target) {
                best_prev = Some(run_max);
            }
            i = run_end;
        }
        group = end;
    }
    // Condition 2: every target of a label lies strictly below every target
    // of a larger label.
    let mut prev_max: Option<Edge<S>> = None;
    let mut group = 0;
    while group < edges.len() {
        let label = edges[group].label;
        let end = group + edges[group..].partition_point(|e| e.label == label);
        let min = *edges[group..end].iter().min_by_key(|e| e.target).unwrap();
        let max = *edges[group..end].iter().max_by_key(|e| e.target).unwrap();
        if let Some(p) = prev_max {
            if p.target >= min.target {
                return Verdict::Violation {
                    condition: 2,
                    witnesses: vec![p, min],
                };
            }
        }
        prev_max = Some(max);
        group = end;
    }
    Verdict::Valid
}

/// Edges in `L` order: by source, and within a source in the order of `L`.
pub fn succinct_to_edges<S: Symbol>(wg: &WheelerGraph<S>) -> EdgeListGraph<S> {
    let mut edges = Vec::with_capacity(wg.n_edges());
    for v in 0..wg.n_vertices() {
        for p in wg.out_range(v) {
            edges.push(Edge::new(v, wg.target(p), wg.labels()[p]));
        }
    }
    EdgeListGraph {
        n_vertices: wg.n_vertices(),
        edges,
    }
}

/// Lays out a Wheeler graph as `(C, L, O, I)`. Outgoing edges keep their
/// relative order per source, except that edges sharing a source and a
/// label are sorted by target, which the rank-based navigation requires.
pub fn edges_to_succinct<S: Symbol>(graph: &EdgeListGraph<S>) -> Result<WheelerGraph<S>> {
    if let Some(e) = graph
        .edges
        .iter()
        .find(|e| e.source >= graph.n_vertices || e.target >= graph.n_vertices)
    {
        return Err(Error::InvalidParameter(format!(
            "edge {e:?} leaves the vertex range"
        )));
    }
    if let Verdict::Violation {
        condition,
        witnesses,
    } = check_wheeler(graph)
    {
        return Err(Error::NotWheeler(format!(
            "condition {condition} fails for {witnesses:?}"
        )));
    }

    let mut edges = graph.edges.clone();
    edges.sort_by_key(|e| e.source);
    let mut out_deg = vec![0; graph.n_vertices];
    let mut in_deg = vec![0; graph.n_vertices];
    for e in &edges {
        out_deg[e.source] += 1;
        in_deg[e.target] += 1;
    }
    if let Some(v) = (0..graph.n_vertices).find(|&v| out_deg[v] == 0 || in_deg[v] == 0) {
        return Err(Error::InvalidParameter(format!(
            "vertex {v} has zero in- or out-degree, which the succinct layout cannot express"
        )));
    }

    let mut start = 0;
    while start < edges.len() {
        let src = edges[start].source;
        let end = start + edges[start..].partition_point(|e| e.source == src);
        let mut by_label: HashMap<S, Vec<usize>> = HashMap::new();
        for (i, e) in edges.iter().enumerate().take(end).skip(start) {
            by_label.entry(e.label).or_default().push(i);
        }
        for slots in by_label.values().filter(|s| s.len() > 1) {
            let mut targets: Vec<usize> = slots.iter().map(|&i| edges[i].target).collect();
            targets.sort_unstable();
            for (&i, t) in slots.iter().zip(targets) {
                edges[i].target = t;
            }
        }
        start = end;
    }

    WheelerGraph::from_parts(
        edges.iter().map(|e| e.label).collect(),
        BitVector::from_degrees(out_deg),
        BitVector::from_degrees(in_deg),
    )
}
