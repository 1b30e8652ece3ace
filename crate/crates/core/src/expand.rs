//! Expansion of a Wheeler graph of the parse into a Wheeler graph of the text.
//!
//! Every parse edge `(t, u)` labelled with phrase `d` of length `ℓ` becomes a
//! path of `ℓ - w` edges from `t` to `u` spelling `d[..ℓ-w]` backwards, with
//! `ℓ - w - 1` new internal vertices. A vertex standing at offset `o` of `d`
//! is ordered by the phrase suffix `d[o..]` (overlap included), and among
//! equal suffixes by the parse rank of `t`. The suffixes are visited in
//! lexicographic order through a suffix array of the dictionary, so `L`, `O`
//! and `I` come out in one sequential pass.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::bitvec::BitVecBuilder;
use crate::error::{Error, Result};
use crate::pfp::PfpOutput;
use crate::suffix_bwt::build_suffix_array;
use crate::wheeler::WheelerGraph;

/// Phrases sharing one suffix string; `offset` is where it starts in each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixClass {
    pub phrases: Vec<u64>,
    pub offsets: Vec<usize>,
    pub len: usize,
}

impl SuffixClass {
    /// True for a whole phrase; such a class always has a single member.
    pub fn is_whole_phrase(&self) -> bool {
        self.offsets[0] == 0
    }
}

#[derive(Debug, Clone)]
pub struct DictionarySuffixIndex {
    /// Phrases shifted by `m`, each followed by a unique separator `< m`.
    pub concat: Vec<u64>,
    pub sa: Vec<usize>,
    /// Phrase and offset of every position of `concat` (separators map to
    /// one past the end of their phrase).
    pub suffix_to_phrase: Vec<(u32, u32)>,
    /// Classes of equal suffixes longer than `w`, in lexicographic order.
    pub classes: Vec<SuffixClass>,
    pub w: usize,
    phrase_starts: Vec<usize>,
}

impl DictionarySuffixIndex {
    /// Phrases that end with `suffix` (given in symbol codes), if it is
    /// longer than `w`.
    pub fn ambiguity_class(&self, suffix: &[u8]) -> Option<&SuffixClass> {
        let m = self.phrase_starts.len() as u64;
        let key: Vec<u64> = suffix.iter().map(|&c| c as u64 + m).collect();
        let i = self
            .classes
            .binary_search_by(|cl| self.class_string(cl).cmp(&key[..]))
            .ok()?;
        Some(&self.classes[i])
    }

    fn class_string(&self, cl: &SuffixClass) -> &[u64] {
        let start = self.phrase_starts[cl.phrases[0] as usize] + cl.offsets[0];
        &self.concat[start..start + cl.len]
    }
}

fn lcp_kasai(s: &[u64], sa: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut rank = vec![0; n];
    for (r, &i) in sa.iter().enumerate() {
        rank[i] = r;
    }
    let mut lcp = vec![0; n];
    let mut h = 0;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1];
            while i + h < n && j + h < n && s[i + h] == s[j + h] {
                h += 1;
            }
            lcp[rank[i]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

pub fn build_dictionary_index(pfp: &PfpOutput) -> Result<DictionarySuffixIndex> {
    let m = pfp.dictionary.len();
    if m == 0 {
        return Err(Error::Inconsistent("empty dictionary".into()));
    }
    let w = pfp.w;
    let mut concat = Vec::with_capacity(pfp.dictionary_symbols() + m);
    let mut suffix_to_phrase = Vec::with_capacity(concat.capacity());
    let mut phrase_starts = Vec::with_capacity(m);
    for (i, d) in pfp.dictionary.iter().enumerate() {
        phrase_starts.push(concat.len());
        if d.len() <= w {
            return Err(Error::Inconsistent(format!(
                "phrase {i} is not longer than w"
            )));
        }
        for (o, &c) in d.iter().enumerate() {
            concat.push(c as u64 + m as u64);
            suffix_to_phrase.push((i as u32, o as u32));
        }
        concat.push((m - 1 - i) as u64);
        suffix_to_phrase.push((i as u32, d.len() as u32));
    }
    let sa = build_suffix_array(&concat)?.into_inner();
    let lcp = lcp_kasai(&concat, &sa);

    let mut classes: Vec<SuffixClass> = Vec::new();
    let mut prev_kept = None;
    for (r, &pos) in sa.iter().enumerate() {
        let (phrase, offset) = suffix_to_phrase[pos];
        let len = pfp.dictionary[phrase as usize].len() - offset as usize;
        if len <= w {
            continue;
        }
        // Equal suffixes are adjacent in the suffix array, and the unique
        // separators stop every common prefix at the end of a phrase.
        let same = r > 0
            && prev_kept == Some(r - 1)
            && lcp[r] >= len
            && classes.last().is_some_and(|cl| cl.len == len);
        prev_kept = Some(r);
        if same {
            let cl = classes.last_mut().unwrap();
            cl.phrases.push(phrase as u64);
            cl.offsets.push(offset as usize);
        } else {
            classes.push(SuffixClass {
                phrases: vec![phrase as u64],
                offsets: vec![offset as usize],
                len,
            });
        }
    }
    for cl in classes.iter_mut().filter(|cl| cl.phrases.len() > 1) {
        let mut members: Vec<(u64, usize)> = cl
            .phrases
            .iter()
            .copied()
            .zip(cl.offsets.iter().copied())
            .collect();
        members.sort_unstable();
        (cl.phrases, cl.offsets) = members.into_iter().unzip();
    }
    Ok(DictionarySuffixIndex {
        concat,
        sa,
        suffix_to_phrase,
        classes,
        w,
        phrase_starts,
    })
}

/// What one suffix class contributes to the expanded graph, in output order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Emit {
    /// Parse vertices entered by the whole phrase, in parse order.
    Phrase {
        phrase: u64,
        vertices: std::ops::Range<usize>,
    },
    /// One internal vertex per listed parse edge (position in `L`, phrase),
    /// standing before the last `suffix_len` symbols of the phrase.
    Internal {
        suffix_len: usize,
        edges: Vec<(usize, u64)>,
    },
}

/// Classes in lexicographic order, each with its vertices ordered by the
/// parse rank of what follows. Parse edges of an ambiguous class are merged
/// across its phrases by their position in `L`, i.e. by source rank.
pub fn order_phrase_suffixes<'a>(
    idx: &'a DictionarySuffixIndex,
    g_p: &'a WheelerGraph<u64>,
) -> impl Iterator<Item = Emit> + 'a {
    idx.classes.iter().map(move |cl| {
        if cl.is_whole_phrase() {
            let d = cl.phrases[0];
            let slots = g_p.label_slots(d);
            let vertices = if slots.is_empty() {
                0..0
            } else {
                g_p.vertex_of_slot(slots.start)..g_p.vertex_of_slot(slots.end - 1) + 1
            };
            return Emit::Phrase {
                phrase: d,
                vertices,
            };
        }
        let lists: Vec<&[u32]> = cl.phrases.iter().map(|&d| g_p.label_positions(d)).collect();
        let mut heap: BinaryHeap<Reverse<(u32, usize, usize)>> = lists
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(i, l)| Reverse((l[0], i, 0)))
            .collect();
        let mut edges = Vec::with_capacity(lists.iter().map(|l| l.len()).sum());
        while let Some(Reverse((pos, i, k))) = heap.pop() {
            edges.push((pos as usize, cl.phrases[i]));
            if let Some(&next) = lists[i].get(k + 1) {
                heap.push(Reverse((next, i, k + 1)));
            }
        }
        Emit::Internal {
            suffix_len: cl.len,
            edges,
        }
    })
}

fn check_consistency(g_p: &WheelerGraph<u64>, pfp: &PfpOutput) -> Result<()> {
    let m = pfp.dictionary.len() as u64;
    if let Some(&r) = pfp.parse.iter().find(|&&r| r >= m) {
        return Err(Error::Inconsistent(format!(
            "parse rank {r} outside the dictionary"
        )));
    }
    if g_p.sigma() as u64 > m {
        return Err(Error::Inconsistent(
            "parse graph label outside the dictionary".into(),
        ));
    }
    let w = pfp.w;
    for pair in pfp.parse.windows(2) {
        let (a, b) = (pfp.phrase(pair[0]), pfp.phrase(pair[1]));
        if a.len() < w || b.len() < w || a[a.len() - w..] != b[..w] {
            return Err(Error::Inconsistent(
                "consecutive phrases do not overlap by w".into(),
            ));
        }
    }
    Ok(())
}

/// Builds `(L, O, I)` of the expanded graph of `g_p`.
pub fn expand_wg(
    g_p: &WheelerGraph<u64>,
    pfp: &PfpOutput,
    idx: &DictionarySuffixIndex,
) -> Result<WheelerGraph<u8>> {
    check_consistency(g_p, pfp)?;
    let w = pfp.w;
    let phrase = |d: u64| pfp.dictionary[d as usize].as_slice();
    let expected_edges: usize = g_p.labels().iter().map(|&d| phrase(d).len() - w).sum();

    let mut labels = Vec::with_capacity(expected_edges);
    let mut out_bits = BitVecBuilder::default();
    let mut in_bits = BitVecBuilder::default();
    for emit in order_phrase_suffixes(idx, g_p) {
        match emit {
            Emit::Phrase { vertices, .. } => {
                for u in vertices {
                    let out = g_p.out_range(u);
                    for p in out.clone() {
                        let prev = phrase(g_p.labels()[p]);
                        labels.push(prev[prev.len() - w - 1]);
                        out_bits.push(p == out.start);
                    }
                    in_bits.push_unary(g_p.in_degree(u));
                }
            }
            Emit::Internal {
                suffix_len: len,
                edges,
            } => {
                for (_, d) in edges {
                    let ph = phrase(d);
                    labels.push(ph[ph.len() - len - 1]);
                    out_bits.push(true);
                    in_bits.push(true);
                }
            }
        }
    }
    if labels.len() != expected_edges {
        return Err(Error::Inconsistent(format!(
            "expansion produced {} edges, expected {expected_edges}",
            labels.len()
        )));
    }
    WheelerGraph::from_parts(labels, out_bits.finish(), in_bits.finish())
}
