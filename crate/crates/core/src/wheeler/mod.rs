//! Succinct Wheeler graphs in the `(C, L, O, I)` layout.
//!
//! Vertices are numbered by their Wheeler rank. `L` lists the labels of the
//! outgoing edges vertex by vertex, `O` and `I` hold one unary run
//! `1 0^(d-1)` per vertex for its out- and in-degree, and `C[c]` counts the
//! edges with a label smaller than `c`. The edge at position `p` of `L`
//! with label `c` enters in-slot `C[c] + rank_c(L, p)`.
//!
//! Graphs built from a BWT have one vertex per rotation and an edge from
//! each rotation to the one starting one position earlier in the text.

mod edges;
mod format;
mod query;

use std::ops::Range;

pub use edges::{
    check_wheeler, edges_to_succinct, succinct_to_edges, validate_wheeler, Edge, EdgeListGraph,
    Verdict,
};
pub use format::{read_index, write_index, FORMAT_VERSION, MAGIC};
pub use query::{decode_text, matches};

use crate::bitvec::BitVector;
use crate::error::{Error, Result};
use crate::suffix_bwt::BwtString;
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WheelerGraph<S> {
    n_vertices: usize,
    /// `C`, with a trailing entry equal to the number of edges.
    c: Vec<usize>,
    labels: Vec<S>,
    out_bits: BitVector,
    in_bits: BitVector,
    /// Positions of every label in `L`, for rank queries.
    occ: Vec<Vec<u32>>,
}

impl<S: Symbol> WheelerGraph<S> {
    /// Assembles a graph from `L`, `O` and `I`, checking that the three
    /// agree and that every vertex has a single incoming label.
    pub fn from_parts(labels: Vec<S>, out_bits: BitVector, in_bits: BitVector) -> Result<Self> {
        let m = labels.len();
        if out_bits.len() != m || in_bits.len() != m {
            return Err(Error::corrupt(format!(
                "|L| = {m} but |O| = {} and |I| = {}",
                out_bits.len(),
                in_bits.len()
            )));
        }
        if m > u32::MAX as usize {
            return Err(Error::InvalidParameter("too many edges".into()));
        }
        let n_vertices = out_bits.count_ones();
        if in_bits.count_ones() != n_vertices {
            return Err(Error::corrupt("O and I describe different vertex counts"));
        }
        if m > 0 && !(out_bits.get(0) && in_bits.get(0)) {
            return Err(Error::corrupt("O and I must start with a one"));
        }

        let sigma = labels.iter().map(|l| l.to_index() + 1).max().unwrap_or(0);
        let mut occ: Vec<Vec<u32>> = vec![Vec::new(); sigma];
        for (p, l) in labels.iter().enumerate() {
            occ[l.to_index()].push(p as u32);
        }
        let mut c = Vec::with_capacity(sigma + 1);
        let mut acc = 0;
        for positions in &occ {
            c.push(acc);
            acc += positions.len();
        }
        c.push(acc);

        let graph = WheelerGraph {
            n_vertices,
            c,
            labels,
            out_bits,
            in_bits,
            occ,
        };
        for u in 0..n_vertices {
            let slots = graph.in_range(u);
            if graph.slot_label(slots.start) != graph.slot_label(slots.end - 1) {
                return Err(Error::NotWheeler(format!(
                    "vertex {u} has incoming edges with different labels"
                )));
            }
        }
        Ok(graph)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.labels.len()
    }

    /// Number of label codes covered by `C` (largest label + 1).
    pub fn sigma(&self) -> usize {
        self.c.len() - 1
    }

    /// `C` without its trailing total.
    pub fn c_array(&self) -> &[usize] {
        &self.c[..self.sigma()]
    }

    pub fn labels(&self) -> &[S] {
        &self.labels
    }

    pub fn out_bits(&self) -> &BitVector {
        &self.out_bits
    }

    pub fn in_bits(&self) -> &BitVector {
        &self.in_bits
    }

    /// Positions in `L` of the outgoing edges of `v`.
    pub fn out_range(&self, v: usize) -> Range<usize> {
        self.out_bits.run_start(v)..self.out_bits.run_start(v + 1)
    }

    /// In-slots of the incoming edges of `u`.
    pub fn in_range(&self, u: usize) -> Range<usize> {
        self.in_bits.run_start(u)..self.in_bits.run_start(u + 1)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_range(v).len()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.in_range(u).len()
    }

    /// Occurrences of `label` in `L[..p]`.
    pub fn label_rank(&self, label: S, p: usize) -> usize {
        self.occ
            .get(label.to_index())
            .map_or(0, |pos| pos.partition_point(|&x| (x as usize) < p))
    }

    /// Number of edges carrying `label`.
    pub fn label_count(&self, label: S) -> usize {
        self.occ.get(label.to_index()).map_or(0, Vec::len)
    }

    /// Positions of `label` in `L`.
    pub fn label_positions(&self, label: S) -> &[u32] {
        self.occ.get(label.to_index()).map_or(&[], Vec::as_slice)
    }

    /// In-slots reserved for edges labelled `label`.
    pub fn label_slots(&self, label: S) -> Range<usize> {
        let i = label.to_index();
        if i >= self.sigma() {
            return self.n_edges()..self.n_edges();
        }
        self.c[i]..self.c[i + 1]
    }

    /// In-slot entered by the edge at `L[p]`.
    pub fn target_slot(&self, p: usize) -> usize {
        let l = self.labels[p];
        self.c[l.to_index()] + self.label_rank(l, p)
    }

    pub fn vertex_of_slot(&self, q: usize) -> usize {
        self.in_bits.rank1(q + 1) - 1
    }

    pub fn source(&self, p: usize) -> usize {
        self.out_bits.rank1(p + 1) - 1
    }

    pub fn target(&self, p: usize) -> usize {
        self.vertex_of_slot(self.target_slot(p))
    }

    /// Label owning in-slot `q`.
    pub fn slot_label(&self, q: usize) -> S {
        S::from_index(self.c.partition_point(|&x| x <= q) - 1)
    }

    /// The label shared by all incoming edges of `u`.
    pub fn in_label(&self, u: usize) -> S {
        self.slot_label(self.in_range(u).start)
    }

    pub fn max_in_degree(&self) -> usize {
        (0..self.n_vertices)
            .map(|u| self.in_degree(u))
            .max()
            .unwrap_or(0)
    }

    /// Size of the plain `(C, L, O, I)` encoding in bits, with labels of
    /// `ceil(log2 σ)` bits and `C` entries of 64 bits.
    pub fn encoded_bits(&self) -> usize {
        let label_bits =
            usize::BITS as usize - self.sigma().saturating_sub(1).leading_zeros() as usize;
        self.n_edges() * label_bits.max(1) + 2 * self.n_edges() + 64 * self.sigma()
    }
}

/// The cycle graph of a BWT: row `i` has one outgoing edge labelled
/// `bwt[i]` to row `LF(i)`.
pub fn wg_from_bwt<S: Symbol>(bwt: &BwtString<S>) -> Result<WheelerGraph<S>> {
    let n = bwt.len();
    if n == 0 {
        return Err(Error::corrupt("empty BWT"));
    }
    let lf = bwt.lf_mapping();
    let mut row = 0;
    for step in 1..=n {
        row = lf[row];
        if row == 0 && step != n {
            return Err(Error::corrupt("LF mapping splits into several cycles"));
        }
    }
    let ones = || BitVector::from_bits(std::iter::repeat_n(true, n));
    WheelerGraph::from_parts(bwt.as_slice().to_vec(), ones(), ones())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suffix_bwt::{build_suffix_array, bwt_from_sa};

    fn graph(text: &[u8]) -> WheelerGraph<u8> {
        let sa = build_suffix_array(text).unwrap();
        wg_from_bwt(&bwt_from_sa(text, &sa)).unwrap()
    }

    #[test]
    fn two_cycle() {
        let g = wg_from_bwt(&BwtString::new(b"a$".to_vec())).unwrap();
        assert_eq!(g.labels(), b"a$");
        assert_eq!(g.out_bits().iter().collect::<Vec<_>>(), [true, true]);
        assert_eq!(g.in_bits().iter().collect::<Vec<_>>(), [true, true]);
        assert_eq!(g.c_array()[b'$' as usize], 0);
        assert_eq!(g.c_array()[b'a' as usize], 1);
        assert_eq!(g.target(0), 1);
        assert_eq!(g.target(1), 0);
    }

    #[test]
    fn banana_cycle() {
        let g = graph(b"banana$");
        assert_eq!(g.n_vertices(), 7);
        assert_eq!(g.n_edges(), 7);
        assert_eq!(g.labels().len(), 7);
        assert_eq!(g.out_bits().len(), 7);
        assert_eq!(g.in_label(0), b'$');
        assert_eq!(g.in_label(6), b'n');
        // Row 0 "$banana" precedes 'a' at row 1 "a$banan".
        assert_eq!(g.target(0), 1);
    }

    #[test]
    fn invalid_bwt_is_rejected() {
        assert!(wg_from_bwt(&BwtString::new(b"$ab".to_vec())).is_err());
    }

    #[test]
    fn parts_must_agree() {
        let l = b"ab".to_vec();
        let ones = BitVector::from_bits([true, true]);
        assert!(
            WheelerGraph::from_parts(l.clone(), ones.clone(), BitVector::from_bits([true]))
                .is_err()
        );
        assert!(WheelerGraph::from_parts(
            l.clone(),
            ones.clone(),
            BitVector::from_bits([false, true])
        )
        .is_err());
        // One vertex entered by both an 'a' and a 'b' edge.
        let one = || BitVector::from_bits([true, false]);
        let g = WheelerGraph::from_parts(l, one(), one());
        assert!(matches!(g, Err(Error::NotWheeler(_))));
    }
}
