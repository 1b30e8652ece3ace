//! Blocks of parallel, equally labelled paths and their merging into tunnels.
//!
//! A block of width `k` and length `ℓ` is a list of `ℓ` columns, each a run
//! of `k` consecutive vertices, such that the `i`-th vertex of every column
//! has a single outgoing edge into the `i`-th vertex of the next column and
//! all `k` paths spell the same labels. Merging the block keeps one vertex
//! per column: the first column keeps all `k` incoming edges and the last
//! column keeps all `k` outgoing ones, which saves `(k-1)(ℓ-1)` edges.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;
use std::ops::Range;

use crate::bitvec::BitVecBuilder;
use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::wheeler::{decode_text, WheelerGraph};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Block {
    pub width: usize,
    /// First vertex of each column.
    pub starts: Vec<usize>,
}

impl Block {
    pub fn new(width: usize, starts: Vec<usize>) -> Self {
        Block { width, starts }
    }

    /// Number of columns.
    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn column(&self, j: usize) -> Range<usize> {
        self.starts[j]..self.starts[j] + self.width
    }

    pub fn saving(&self) -> usize {
        self.width.saturating_sub(1) * self.len().saturating_sub(1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).flat_map(move |j| self.column(j))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TunnelPlan {
    pub blocks: Vec<Block>,
    pub projected_edge_saving: usize,
}

impl TunnelPlan {
    pub fn new(blocks: Vec<Block>) -> Self {
        let projected_edge_saving = blocks.iter().map(Block::saving).sum();
        TunnelPlan {
            blocks,
            projected_edge_saving,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// One line `k ℓ start_1 … start_ℓ` per block.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.blocks {
            write!(out, "{} {}", b.width, b.len()).unwrap();
            for s in &b.starts {
                write!(out, " {s}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let nums = line
                .split_whitespace()
                .map(str::parse::<usize>)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidPlan(format!("{line:?}: {e}")))?;
            match nums.as_slice() {
                [k, l, starts @ ..] if starts.len() == *l => {
                    blocks.push(Block::new(*k, starts.to_vec()))
                }
                _ => return Err(Error::InvalidPlan(format!("malformed line {line:?}"))),
            }
        }
        Ok(TunnelPlan::new(blocks))
    }
}

fn is_simple<S: Symbol>(wg: &WheelerGraph<S>, v: usize) -> bool {
    wg.in_degree(v) == 1 && wg.out_degree(v) == 1
}

fn out_label<S: Symbol>(wg: &WheelerGraph<S>, v: usize) -> S {
    wg.labels()[wg.out_range(v).start]
}

fn successor<S: Symbol>(wg: &WheelerGraph<S>, v: usize) -> usize {
    wg.target(wg.out_range(v).start)
}

/// Checks one block against `wg`, including disjointness of its own columns.
pub fn check_block<S: Symbol>(wg: &WheelerGraph<S>, block: &Block) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidPlan(msg));
    let (k, l) = (block.width, block.len());
    if k < 2 || l < 2 {
        return bad(format!("block {block:?} is smaller than 2x2"));
    }
    if block.starts.iter().any(|&s| s + k > wg.n_vertices()) {
        return bad(format!("block {block:?} leaves the vertex range"));
    }
    let mut members: Vec<usize> = block.vertices().collect();
    members.sort_unstable();
    if members.windows(2).any(|p| p[0] == p[1]) {
        return bad(format!("columns of {block:?} overlap"));
    }
    if let Some(v) = members.iter().find(|&&v| !is_simple(wg, v)) {
        return bad(format!(
            "vertex {v} of {block:?} does not have degree (1, 1)"
        ));
    }
    let first = block.column(0);
    if wg.in_label(first.start) != wg.in_label(first.end - 1) {
        return bad(format!("first column of {block:?} mixes incoming labels"));
    }
    for j in 0..l - 1 {
        let col = block.column(j);
        let c = out_label(wg, col.start);
        if col.clone().any(|v| out_label(wg, v) != c) {
            return bad(format!("column {j} of {block:?} mixes outgoing labels"));
        }
        if successor(wg, col.start) != block.starts[j + 1] {
            return bad(format!(
                "column {} of {block:?} is not the image of column {j}",
                j + 1
            ));
        }
    }
    Ok(())
}

/// Checks every block and their pairwise disjointness.
pub fn check_plan<S: Symbol>(wg: &WheelerGraph<S>, plan: &TunnelPlan) -> Result<()> {
    let mut used = vec![false; wg.n_vertices()];
    for block in &plan.blocks {
        check_block(wg, block)?;
        for v in block.vertices() {
            if std::mem::replace(&mut used[v], true) {
                return Err(Error::InvalidPlan(format!("vertex {v} lies in two blocks")));
            }
        }
    }
    let saving: usize = plan.blocks.iter().map(Block::saving).sum();
    if saving != plan.projected_edge_saving {
        return Err(Error::InvalidPlan(
            "projected saving does not match the blocks".into(),
        ));
    }
    Ok(())
}

/// Merges every block of `plan` into a single path.
pub fn apply_tunnel<S: Symbol>(wg: &WheelerGraph<S>, plan: &TunnelPlan) -> Result<WheelerGraph<S>> {
    check_plan(wg, plan)?;
    let n = wg.n_vertices();
    let mut removed = vec![false; n];
    // Edges leaving non-final columns and slots entering non-first columns
    // of merged vertices disappear with them.
    let mut drop_out = vec![false; n];
    let mut drop_in = vec![false; n];
    for block in &plan.blocks {
        let l = block.len();
        for j in 0..l {
            for v in block.column(j).skip(1) {
                removed[v] = true;
                drop_out[v] = j + 1 < l;
                drop_in[v] = j > 0;
            }
        }
    }

    let mut labels = Vec::with_capacity(wg.n_edges() - plan.projected_edge_saving);
    let mut out_bits = BitVecBuilder::default();
    let mut in_bits = BitVecBuilder::default();
    for v in 0..n {
        if !drop_out[v] {
            for p in wg.out_range(v) {
                labels.push(wg.labels()[p]);
                out_bits.push(p == wg.out_range(v).start && !removed[v]);
            }
        }
        if !drop_in[v] {
            let slots = wg.in_range(v);
            for q in slots.clone() {
                in_bits.push(q == slots.start && !removed[v]);
            }
        }
    }
    let out = WheelerGraph::from_parts(labels, out_bits.finish(), in_bits.finish())?;
    debug_assert_eq!(out.n_edges() + plan.projected_edge_saving, wg.n_edges());
    Ok(out)
}

/// Candidate node: width and column starts found so far.
struct Node {
    width: usize,
    starts: Vec<usize>,
}

/// Candidate blocks: each maximal run of consecutive `(1, 1)` vertices with
/// one incoming and one outgoing label is pushed forward column by column.
/// When the next column stops qualifying for some paths, the run is split
/// and each part of width at least 2 continues on its own.
pub fn candidate_blocks<S: Symbol>(wg: &WheelerGraph<S>) -> Vec<Block> {
    let n = wg.n_vertices();
    let mut out = Vec::new();
    let mut v = 0;
    while v < n {
        if !is_simple(wg, v) {
            v += 1;
            continue;
        }
        let key = (wg.in_label(v), out_label(wg, v));
        let mut end = v + 1;
        while end < n && is_simple(wg, end) && (wg.in_label(end), out_label(wg, end)) == key {
            end += 1;
        }
        if end - v >= 2 {
            grow(wg, v, end - v, &mut out);
        }
        v = end;
    }
    out
}

fn grow<S: Symbol>(wg: &WheelerGraph<S>, start: usize, width: usize, out: &mut Vec<Block>) {
    let mut stack = vec![Node {
        width,
        starts: vec![start],
    }];
    while let Some(mut node) = stack.pop() {
        loop {
            let last = *node.starts.last().unwrap();
            let k = node.width;
            let next = successor(wg, last);
            // Offsets whose path can take one more step together with its
            // left neighbour: same outgoing label and a simple image.
            let label = |i: usize| out_label(wg, last + i);
            let ok = |i: usize| is_simple(wg, successor(wg, last + i));
            let mut runs: Vec<Range<usize>> = Vec::new();
            let mut i = 0;
            while i < k {
                if !ok(i) {
                    i += 1;
                    continue;
                }
                let mut j = i + 1;
                while j < k && ok(j) && label(j) == label(i) {
                    j += 1;
                }
                runs.push(i..j);
                i = j;
            }
            // Columns of equal width are disjoint iff their starts are at
            // least a width apart, whichever offsets they cover.
            let gap = node.starts.iter().map(|&s| s.abs_diff(next)).min().unwrap();
            if runs.len() == 1 && runs[0] == (0..k) && k <= gap {
                node.starts.push(next);
                continue;
            }
            if node.starts.len() >= 2 {
                out.push(Block::new(k, node.starts.clone()));
            }
            // Runs wider than the gap are tiled from both ends.
            let mut parts: Vec<Range<usize>> = Vec::new();
            for r in runs.into_iter().filter(|_| gap >= 2) {
                for x in r.clone().step_by(gap) {
                    parts.push(x..r.end.min(x + gap));
                }
                if r.len() > gap {
                    for y in (r.start + 1..=r.end).rev().step_by(gap) {
                        parts.push(y.saturating_sub(gap).max(r.start)..y);
                    }
                }
            }
            parts.sort_by_key(|r| (r.start, r.end));
            parts.dedup();
            for r in parts.into_iter().filter(|r| r.len() >= 2) {
                stack.push(Node {
                    width: r.len(),
                    starts: node.starts.iter().map(|s| s + r.start).collect(),
                });
            }
            break;
        }
    }
}

/// Greedy selection of disjoint candidates by decreasing `(k-1)(ℓ-1)`, ties
/// broken by the smallest first-column start. A candidate that meets an
/// already selected block is cut before its first conflicting column and
/// re-queued.
pub fn find_blocks<S: Symbol>(wg: &WheelerGraph<S>) -> TunnelPlan {
    let candidates = candidate_blocks(wg);
    let mut heap: BinaryHeap<(usize, Reverse<usize>, Reverse<usize>, usize)> = candidates
        .iter()
        .enumerate()
        .map(|(i, b)| (b.saving(), Reverse(b.starts[0]), Reverse(i), b.len()))
        .collect();
    let mut used = vec![false; wg.n_vertices()];
    let mut chosen = Vec::new();
    while let Some((_, _, Reverse(i), len)) = heap.pop() {
        let cand = &candidates[i];
        let block = Block::new(cand.width, cand.starts[..len].to_vec());
        let conflict = (0..len).find(|&j| block.column(j).any(|v| used[v]));
        match conflict {
            None => {
                for v in block.vertices() {
                    used[v] = true;
                }
                chosen.push(block);
            }
            Some(j) if j >= 2 => {
                let cut = Block::new(block.width, block.starts[..j].to_vec());
                heap.push((cut.saving(), Reverse(cut.starts[0]), Reverse(i), j));
            }
            Some(_) => {}
        }
    }
    chosen.sort_by_key(|b| b.starts[0]);
    TunnelPlan::new(chosen)
}

/// Every valid block of `wg`. Exponential in spirit and cubic in practice;
/// meant for exhaustive checks on small graphs.
pub fn all_blocks<S: Symbol>(wg: &WheelerGraph<S>) -> Vec<Block> {
    let n = wg.n_vertices();
    let mut out = Vec::new();
    for a in 0..n {
        for k in 2..=n - a {
            let col = a..a + k;
            if col.clone().any(|v| !is_simple(wg, v)) {
                break;
            }
            let mut starts = vec![a];
            loop {
                let next = successor(wg, *starts.last().unwrap());
                if next + k > n {
                    break;
                }
                starts.push(next);
                let block = Block::new(k, starts.clone());
                if check_block(wg, &block).is_err() {
                    break;
                }
                out.push(block);
            }
        }
    }
    out
}

/// Spells the text of a possibly tunnelled graph.
pub fn decode_tunnelled<S: Symbol>(wg: &WheelerGraph<S>) -> Result<Vec<S>> {
    decode_text(wg)
}
