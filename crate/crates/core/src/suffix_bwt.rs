//! Suffix arrays by induced sorting, BWT derivation, LF mapping and inversion.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// Suffix array, stored 0-based: `sa[i]` is the start of the i-th smallest suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixArray {
    sa: Vec<usize>,
}

impl SuffixArray {
    pub fn as_slice(&self) -> &[usize] {
        &self.sa
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    /// Positions in the 1-based `T[1..n]` convention.
    pub fn one_based(&self) -> Vec<usize> {
        self.sa.iter().map(|&i| i + 1).collect()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.sa
    }
}

/// A BWT together with its per-symbol totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwtString<S> {
    bwt: Vec<S>,
    counts: Vec<usize>,
}

impl<S: Symbol> BwtString<S> {
    pub fn new(bwt: Vec<S>) -> Self {
        let sigma = bwt.iter().map(|c| c.to_index() + 1).max().unwrap_or(0);
        let mut counts = vec![0; sigma];
        for c in &bwt {
            counts[c.to_index()] += 1;
        }
        BwtString { bwt, counts }
    }

    pub fn as_slice(&self) -> &[S] {
        &self.bwt
    }

    pub fn into_inner(self) -> Vec<S> {
        self.bwt
    }

    pub fn len(&self) -> usize {
        self.bwt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bwt.is_empty()
    }

    /// Occurrences of each symbol code, indexed by code.
    pub fn char_counts(&self) -> &[usize] {
        &self.counts
    }

    /// `C[c]`: number of symbols strictly smaller than `c`.
    pub fn first_column_starts(&self) -> Vec<usize> {
        let mut c = Vec::with_capacity(self.counts.len() + 1);
        let mut acc = 0;
        for &k in &self.counts {
            c.push(acc);
            acc += k;
        }
        c.push(acc);
        c
    }

    /// The LF mapping as an explicit permutation of rows.
    pub fn lf_mapping(&self) -> Vec<usize> {
        let mut next = self.first_column_starts();
        self.bwt
            .iter()
            .map(|c| {
                let slot = &mut next[c.to_index()];
                let row = *slot;
                *slot += 1;
                row
            })
            .collect()
    }
}

fn check_terminated<S: Symbol>(text: &[S]) -> Result<()> {
    let (&last, rest) = text
        .split_last()
        .ok_or_else(|| Error::InvalidTerminator("empty text".into()))?;
    if let Some(c) = rest.iter().find(|&&c| c <= last) {
        let msg = if *c == last {
            "terminator occurs more than once"
        } else {
            "last symbol is not the smallest"
        };
        return Err(Error::InvalidTerminator(msg.into()));
    }
    Ok(())
}

/// Sorts the suffixes of a null-terminated text: its last symbol must be
/// unique and strictly smaller than every other symbol.
pub fn build_suffix_array<S: Symbol>(text: &[S]) -> Result<SuffixArray> {
    check_terminated(text)?;
    // Shift so that the terminator becomes 0 and the alphabet is dense from there.
    let base = text[text.len() - 1].to_index();
    let s: Vec<usize> = text.iter().map(|c| c.to_index() - base).collect();
    let k = s.iter().max().map_or(1, |&m| m + 1);
    Ok(SuffixArray { sa: sais(&s, k) })
}

/// Last column of the sorted rotations, read off the suffix array.
pub fn bwt_from_sa<S: Symbol>(text: &[S], sa: &SuffixArray) -> BwtString<S> {
    let n = text.len();
    BwtString::new(
        sa.sa
            .iter()
            .map(|&i| if i == 0 { text[n - 1] } else { text[i - 1] })
            .collect(),
    )
}

/// Reconstructs the null-terminated text of a BWT by iterated LF steps.
pub fn invert_bwt<S: Symbol>(bwt: &[S]) -> Result<Vec<S>> {
    let n = bwt.len();
    let &terminator = bwt
        .iter()
        .min()
        .ok_or_else(|| Error::InvalidTerminator("empty BWT".into()))?;
    if bwt.iter().filter(|&&c| c == terminator).count() != 1 {
        return Err(Error::InvalidTerminator(
            "terminator occurs more than once".into(),
        ));
    }
    let lf = BwtString::new(bwt.to_vec()).lf_mapping();
    let mut text = vec![terminator; n];
    // Row 0 is the rotation starting with the terminator.
    let mut row = 0;
    for k in (0..n - 1).rev() {
        text[k] = bwt[row];
        row = lf[row];
        if row == 0 {
            return Err(Error::corrupt("LF cycle shorter than the BWT"));
        }
    }
    if bwt[row] != terminator {
        return Err(Error::corrupt("LF walk does not close on the terminator"));
    }
    Ok(text)
}

/// Sorts all rotations explicitly and returns the last column.
/// Quadratic; intended as a test oracle.
pub fn naive_bwt_oracle<S: Symbol>(text: &[S]) -> BwtString<S> {
    let n = text.len();
    let mut rows: Vec<usize> = (0..n).collect();
    rows.sort_by(|&a, &b| {
        (0..n)
            .map(|d| text[(a + d) % n].cmp(&text[(b + d) % n]))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    });
    BwtString::new(rows.iter().map(|&r| text[(r + n - 1) % n]).collect())
}

const EMPTY: usize = usize::MAX;

/// SA-IS over the integer alphabet `[0, k)`. `s` must end with a unique 0.
fn sais(s: &[usize], k: usize) -> Vec<usize> {
    let n = s.len();
    if n == 1 {
        return vec![0];
    }

    // true = S-type
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];

    let mut bucket = vec![0usize; k];
    for &c in s {
        bucket[c] += 1;
    }
    let heads = |bucket: &[usize]| {
        let mut acc = 0;
        bucket
            .iter()
            .map(|&b| {
                let h = acc;
                acc += b;
                h
            })
            .collect::<Vec<_>>()
    };
    let tails = |bucket: &[usize]| {
        let mut acc = 0;
        bucket
            .iter()
            .map(|&b| {
                acc += b;
                acc
            })
            .collect::<Vec<_>>()
    };

    let induce = |lms: &[usize], sa: &mut Vec<usize>| {
        sa.clear();
        sa.resize(n, EMPTY);
        let mut tail = tails(&bucket);
        for &i in lms.iter().rev() {
            tail[s[i]] -= 1;
            sa[tail[s[i]]] = i;
        }
        let mut head = heads(&bucket);
        for r in 0..n {
            let j = sa[r];
            if j != EMPTY && j > 0 && !stype[j - 1] {
                let c = s[j - 1];
                sa[head[c]] = j - 1;
                head[c] += 1;
            }
        }
        let mut tail = tails(&bucket);
        for r in (0..n).rev() {
            let j = sa[r];
            if j != EMPTY && j > 0 && stype[j - 1] {
                let c = s[j - 1];
                tail[c] -= 1;
                sa[tail[c]] = j - 1;
            }
        }
    };

    let lms: Vec<usize> = (1..n).filter(|&i| is_lms(i)).collect();
    let mut sa = Vec::with_capacity(n);
    induce(&lms, &mut sa);

    // Name LMS substrings in their induced order.
    let lms_equal = |a: usize, b: usize| -> bool {
        if a == n - 1 || b == n - 1 {
            return a == b;
        }
        let mut d = 0;
        loop {
            if s[a + d] != s[b + d] || stype[a + d] != stype[b + d] {
                return false;
            }
            if d > 0 {
                let (ea, eb) = (is_lms(a + d), is_lms(b + d));
                if ea || eb {
                    return ea && eb;
                }
            }
            d += 1;
        }
    };
    let mut names = vec![EMPTY; n];
    let mut name = 0;
    let mut prev = EMPTY;
    for &i in sa.iter().filter(|&&i| is_lms(i)) {
        if prev != EMPTY && !lms_equal(prev, i) {
            name += 1;
        }
        names[i] = name;
        prev = i;
    }
    let reduced: Vec<usize> = lms.iter().map(|&i| names[i]).collect();

    let sorted_lms: Vec<usize> = if name + 1 == reduced.len() {
        let mut order = vec![0; reduced.len()];
        for (pos, &nm) in reduced.iter().enumerate() {
            order[nm] = lms[pos];
        }
        order
    } else {
        sais(&reduced, name + 1)
            .into_iter()
            .map(|r| lms[r])
            .collect()
    };
    induce(&sorted_lms, &mut sa);
    sa
}
