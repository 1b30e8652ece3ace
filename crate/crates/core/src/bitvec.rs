//! Plain bitvector with interleaved rank samples and binary-search select.

const WORDS_PER_BLOCK: usize = 8;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
    /// Ones before each block of `WORDS_PER_BLOCK` words; one trailing total.
    blocks: Vec<usize>,
}

impl BitVector {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut builder = BitVecBuilder::default();
        for b in bits {
            builder.push(b);
        }
        builder.finish()
    }

    /// `1 0^(d-1)` for every degree `d`, the unary layout of the O and I vectors.
    pub fn from_degrees<I: IntoIterator<Item = usize>>(degrees: I) -> Self {
        let mut builder = BitVecBuilder::default();
        for d in degrees {
            builder.push_unary(d);
        }
        builder.finish()
    }

    pub(crate) fn from_words(words: Vec<u64>, len: usize) -> Self {
        let mut blocks = Vec::with_capacity(words.len() / WORDS_PER_BLOCK + 2);
        let mut acc = 0;
        for chunk in words.chunks(WORDS_PER_BLOCK) {
            blocks.push(acc);
            acc += chunk.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        }
        blocks.push(acc);
        BitVector { words, len, blocks }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        *self.blocks.last().unwrap_or(&0)
    }

    /// Number of ones in `[0, i)`.
    pub fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len, "rank position {i} out of range {}", self.len);
        let word = i / 64;
        let block = word / WORDS_PER_BLOCK;
        let mut r = self.blocks[block];
        for w in &self.words[block * WORDS_PER_BLOCK..word] {
            r += w.count_ones() as usize;
        }
        if !i.is_multiple_of(64) {
            r += (self.words[word] & ((1u64 << (i % 64)) - 1)).count_ones() as usize;
        }
        r
    }

    /// Position of the `k`-th one, counting from 0.
    pub fn select1(&self, k: usize) -> Option<usize> {
        if k >= self.count_ones() {
            return None;
        }
        // Last block whose preceding count is <= k.
        let block = self.blocks.partition_point(|&c| c <= k) - 1;
        let mut remaining = k - self.blocks[block];
        for (wi, &w) in self.words.iter().enumerate().skip(block * WORDS_PER_BLOCK) {
            let ones = w.count_ones() as usize;
            if remaining < ones {
                let mut w = w;
                for _ in 0..remaining {
                    w &= w - 1;
                }
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
            remaining -= ones;
        }
        unreachable!("block counts are inconsistent with words")
    }

    /// Start of the `k`-th run `1 0*`, or the length for `k == count_ones()`.
    pub fn run_start(&self, k: usize) -> usize {
        if k == self.count_ones() {
            self.len
        } else {
            self.select1(k).expect("run index out of range")
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Packed bytes, bit `i` at byte `i / 8`, bit position `i % 8` (LSB first).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.words.iter().flat_map(|w| w.to_le_bytes()).collect();
        out.truncate(self.len.div_ceil(8));
        out
    }

    /// Inverse of [`BitVector::to_bytes`]; padding bits must be zero.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Option<Self> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        if !len.is_multiple_of(8) && bytes[bytes.len() - 1] >> (len % 8) != 0 {
            return None;
        }
        let words = bytes
            .chunks(8)
            .map(|c| {
                let mut buf = [0u8; 8];
                buf[..c.len()].copy_from_slice(c);
                u64::from_le_bytes(buf)
            })
            .collect();
        Some(BitVector::from_words(words, len))
    }
}

#[derive(Debug, Default)]
pub struct BitVecBuilder {
    words: Vec<u64>,
    len: usize,
}

impl BitVecBuilder {
    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    /// Appends `1 0^(d-1)`.
    pub fn push_unary(&mut self, d: usize) {
        debug_assert!(d > 0, "unary degree must be positive");
        self.push(true);
        for _ in 1..d {
            self.push(false);
        }
    }

    pub fn finish(self) -> BitVector {
        BitVector::from_words(self.words, self.len)
    }
}
