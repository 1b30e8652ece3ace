//! Prefix-free parsing of a framed text into a sorted dictionary and a parse.
//!
//! A window of `w` symbols slides over `#T$^w`. Whenever it matches a trigger
//! word, the current phrase ends with that window and the next phrase starts
//! with it, so consecutive phrases overlap by exactly `w` symbols. The start
//! marker always opens the first phrase and the final `$^w` window always
//! closes the last one.

use std::collections::{HashMap, HashSet};

use crate::corpus::{Alphabet, Text, START_MARKER, TERMINATOR};
use crate::error::{Error, Result};

/// Mersenne prime 2^61 - 1.
const HASH_MODULUS: u64 = (1 << 61) - 1;
const HASH_BASE: u64 = 0x100_0193;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriggerMode {
    /// A window is a trigger when its rolling hash is divisible by `p`.
    Hash,
    /// A window is a trigger when it is one of these words (symbol codes).
    Explicit(HashSet<Vec<u8>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfpParams {
    pub w: usize,
    pub p: u64,
    pub triggers: TriggerMode,
}

impl PfpParams {
    pub fn hashed(w: usize, p: u64) -> Result<Self> {
        let params = PfpParams {
            w,
            p,
            triggers: TriggerMode::Hash,
        };
        params.validate()?;
        Ok(params)
    }

    /// Explicit trigger words given as corpus bytes of `alphabet`.
    pub fn explicit<W: AsRef<[u8]>>(w: usize, words: &[W], alphabet: &Alphabet) -> Result<Self> {
        let set = words
            .iter()
            .map(|word| alphabet.encode(word.as_ref()))
            .collect::<Result<HashSet<_>>>()?;
        let params = PfpParams {
            w,
            p: 1,
            triggers: TriggerMode::Explicit(set),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.w == 0 {
            return Err(Error::InvalidParameter("w must be at least 1".into()));
        }
        if self.p == 0 {
            return Err(Error::InvalidParameter("p must be at least 1".into()));
        }
        if let TriggerMode::Explicit(words) = &self.triggers {
            if let Some(word) = words.iter().find(|word| word.len() != self.w) {
                return Err(Error::InvalidParameter(format!(
                    "trigger word of length {} does not match w = {}",
                    word.len(),
                    self.w
                )));
            }
        }
        Ok(())
    }
}

/// Polynomial Karp-Rabin hash over a fixed-length window, modulo 2^61 - 1.
#[derive(Debug, Clone)]
pub struct RollingHash {
    value: u64,
    /// BASE^(w-1), the weight of the symbol leaving the window.
    lead: u64,
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % HASH_MODULUS as u128) as u64
}

impl RollingHash {
    pub fn new(window: &[u8]) -> Self {
        let value = window
            .iter()
            .fold(0, |h, &c| (mulmod(h, HASH_BASE) + c as u64) % HASH_MODULUS);
        let lead = (1..window.len()).fold(1, |acc, _| mulmod(acc, HASH_BASE));
        RollingHash { value, lead }
    }

    /// Slides the window one symbol to the right.
    pub fn roll(&mut self, out: u8, incoming: u8) {
        let drop = mulmod(out as u64, self.lead);
        let v = (self.value + HASH_MODULUS - drop) % HASH_MODULUS;
        self.value = (mulmod(v, HASH_BASE) + incoming as u64) % HASH_MODULUS;
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn residue(&self, p: u64) -> u64 {
        self.value % p
    }
}

/// Residue of a single window's hash modulo `p`.
pub fn rolling_hash(window: &[u8], p: u64) -> u64 {
    RollingHash::new(window).residue(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfpOutput {
    /// Phrases in strictly increasing lexicographic order.
    pub dictionary: Vec<Vec<u8>>,
    /// Dictionary ranks of the phrases in text order.
    pub parse: Vec<u64>,
    pub w: usize,
    /// Occurrences of each phrase in the parse.
    pub occurrences: Vec<usize>,
    pub alphabet: Alphabet,
}

impl PfpOutput {
    pub fn phrase(&self, rank: u64) -> &[u8] {
        &self.dictionary[rank as usize]
    }

    /// Total number of symbols stored in the dictionary.
    pub fn dictionary_symbols(&self) -> usize {
        self.dictionary.iter().map(Vec::len).sum()
    }
}

/// Phrase boundaries (window starts) of a framed text.
fn boundaries(codes: &[u8], params: &PfpParams) -> Vec<usize> {
    let (n, w) = (codes.len(), params.w);
    let last = n - w;
    let mut cuts = vec![0];
    let mut hash = match params.triggers {
        TriggerMode::Hash => Some(RollingHash::new(&codes[1..1 + w])),
        TriggerMode::Explicit(_) => None,
    };
    for i in 1..=last {
        if let Some(h) = hash.as_mut() {
            if i > 1 {
                h.roll(codes[i - 1], codes[i + w - 1]);
            }
        }
        // Windows reaching into the `$^w` tail never trigger, so a body
        // shorter than `w` yields a single phrase.
        let trigger = i == last
            || i + w <= last
                && match &params.triggers {
                    TriggerMode::Hash => hash.as_ref().is_some_and(|h| h.residue(params.p) == 0),
                    TriggerMode::Explicit(words) => words.contains(&codes[i..i + w]),
                };
        if trigger {
            cuts.push(i);
        }
    }
    cuts
}

pub fn parse_pfp(text: &Text, params: &PfpParams) -> Result<PfpOutput> {
    params.validate()?;
    match text.window() {
        Some(w) if w == params.w => {}
        Some(w) => {
            return Err(Error::InvalidParameter(format!(
                "text framed with w = {w}, parameters use w = {}",
                params.w
            )))
        }
        None => return Err(Error::NotFramed),
    }
    let codes = text.codes();
    let w = params.w;
    let cuts = boundaries(codes, params);

    let mut first_seen: HashMap<&[u8], usize> = HashMap::new();
    let mut phrases: Vec<&[u8]> = Vec::new();
    let mut ids = Vec::with_capacity(cuts.len() - 1);
    for pair in cuts.windows(2) {
        let phrase = &codes[pair[0]..pair[1] + w];
        let id = *first_seen.entry(phrase).or_insert_with(|| {
            phrases.push(phrase);
            phrases.len() - 1
        });
        ids.push(id);
    }

    let mut order: Vec<usize> = (0..phrases.len()).collect();
    order.sort_unstable_by_key(|&i| phrases[i]);
    let mut rank_of = vec![0u64; phrases.len()];
    for (rank, &id) in order.iter().enumerate() {
        rank_of[id] = rank as u64;
    }
    let dictionary: Vec<Vec<u8>> = order.iter().map(|&i| phrases[i].to_vec()).collect();
    let parse: Vec<u64> = ids.iter().map(|&id| rank_of[id]).collect();
    let mut occurrences = vec![0; dictionary.len()];
    for &r in &parse {
        occurrences[r as usize] += 1;
    }
    Ok(PfpOutput {
        dictionary,
        parse,
        w,
        occurrences,
        alphabet: text.alphabet().clone(),
    })
}

/// Rejoins the phrases of a parse, checking every `w`-symbol overlap.
pub fn reconstruct(pfp: &PfpOutput) -> Result<Text> {
    let w = pfp.w;
    let phrase = |r: u64| {
        pfp.dictionary
            .get(r as usize)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::corrupt(format!("parse rank {r} outside the dictionary")))
    };
    let (&head, tail) = pfp
        .parse
        .split_first()
        .ok_or_else(|| Error::corrupt("empty parse"))?;
    let mut codes = phrase(head)?.to_vec();
    for &r in tail {
        let next = phrase(r)?;
        if next.len() < w || codes.len() < w || codes[codes.len() - w..] != next[..w] {
            return Err(Error::corrupt(
                "consecutive phrases do not overlap by w symbols",
            ));
        }
        codes.extend_from_slice(&next[w..]);
    }

    let n = codes.len();
    let well_formed = n > w
        && codes[0] == START_MARKER
        && codes[n - w..].iter().all(|&c| c == TERMINATOR)
        && codes[1..n - w].iter().all(|&c| c > START_MARKER);
    if !well_formed {
        return Err(Error::corrupt(
            "reconstructed text is not of the form #T$^w",
        ));
    }
    let body = codes[1..n - w].to_vec();
    crate::corpus::frame(&Text::from_codes(body, pfp.alphabet.clone())?, w)
}

const END_OF_PHRASE: u8 = 0x01;
const END_OF_DICT: u8 = 0x00;
/// Offset applied to symbol codes in `.dict` files so they never collide
/// with the two delimiter bytes.
pub const DICT_CODE_OFFSET: u8 = 2;

/// `.dict` encoding: phrases concatenated, each closed by 0x01, file closed by 0x00.
pub fn encode_dict(dictionary: &[Vec<u8>]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(dictionary.iter().map(|p| p.len() + 1).sum::<usize>() + 1);
    for phrase in dictionary {
        for &c in phrase {
            let b = c
                .checked_add(DICT_CODE_OFFSET)
                .ok_or_else(|| Error::Format(format!("symbol code {c} too large for .dict")))?;
            out.push(b);
        }
        out.push(END_OF_PHRASE);
    }
    out.push(END_OF_DICT);
    Ok(out)
}

pub fn decode_dict(bytes: &[u8]) -> Result<Vec<Vec<u8>>> {
    let (&last, body) = bytes
        .split_last()
        .ok_or_else(|| Error::Format("empty .dict file".into()))?;
    if last != END_OF_DICT {
        return Err(Error::Format(".dict file is not terminated by 0x00".into()));
    }
    if body.is_empty() {
        return Ok(Vec::new());
    }
    if body.last() != Some(&END_OF_PHRASE) {
        return Err(Error::Format(
            "last phrase is not terminated by 0x01".into(),
        ));
    }
    body[..body.len() - 1]
        .split(|&b| b == END_OF_PHRASE)
        .map(|phrase| {
            phrase
                .iter()
                .map(|&b| {
                    b.checked_sub(DICT_CODE_OFFSET)
                        .ok_or_else(|| Error::Format("unexpected 0x00 inside a phrase".into()))
                })
                .collect()
        })
        .collect()
}

/// `.parse` encoding: little-endian 64-bit ranks.
pub fn encode_parse(parse: &[u64]) -> Vec<u8> {
    parse.iter().flat_map(|r| r.to_le_bytes()).collect()
}

pub fn decode_parse(bytes: &[u8]) -> Result<Vec<u64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::Format(".parse length is not a multiple of 8".into()));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}
