//! End-to-end construction of a text index, its metadata sidecar, the
//! synthetic corpus generator and the benchmark driver.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{frame, ingest_fasta, Alphabet, Text};
use crate::error::{Error, Result};
use crate::expand::{build_dictionary_index, expand_wg};
use crate::pfp::{encode_dict, parse_pfp, PfpOutput, PfpParams};
use crate::suffix_bwt::{build_suffix_array, bwt_from_sa};
use crate::tunnel::{apply_tunnel, find_blocks, TunnelPlan};
use crate::wheeler::{decode_text, read_index, wg_from_bwt, write_index};
use crate::{ParseGraph, TextGraph};

/// `P[1..]` followed by `P[0]`: the first phrase is the only one starting
/// with the start marker, so it is the smallest and closes the sequence.
pub fn parse_sequence(pfp: &PfpOutput) -> Vec<u64> {
    let mut seq = pfp.parse[1..].to_vec();
    seq.push(pfp.parse[0]);
    seq
}

pub fn build_parse_graph(pfp: &PfpOutput) -> Result<ParseGraph> {
    let seq = parse_sequence(pfp);
    let sa = build_suffix_array(&seq)?;
    wg_from_bwt(&bwt_from_sa(&seq, &sa))
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub params: PfpParams,
    pub tunnel: bool,
}

#[derive(Debug, Clone)]
pub struct Built {
    pub graph: TextGraph,
    pub parse_graph: ParseGraph,
    pub plan: TunnelPlan,
    pub pfp: PfpOutput,
    pub meta: IndexMeta,
}

/// Frames `text`, parses it, builds and optionally tunnels the parse graph,
/// and expands it into a graph of the text.
pub fn build_index(text: &Text, opts: &BuildOptions) -> Result<Built> {
    let framed = frame(text, opts.params.w).map_err(Error::in_stage("frame"))?;
    let pfp = parse_pfp(&framed, &opts.params).map_err(Error::in_stage("parse_pfp"))?;
    let untunnelled = build_parse_graph(&pfp).map_err(Error::in_stage("parse_bwt"))?;
    let parse_edges = untunnelled.n_edges();
    let (parse_graph, plan) = if opts.tunnel {
        let plan = find_blocks(&untunnelled);
        let tunnelled = apply_tunnel(&untunnelled, &plan).map_err(Error::in_stage("tunnel"))?;
        (tunnelled, plan)
    } else {
        (untunnelled, TunnelPlan::default())
    };
    let idx = build_dictionary_index(&pfp).map_err(Error::in_stage("dictionary_index"))?;
    let graph = expand_wg(&parse_graph, &pfp, &idx).map_err(Error::in_stage("expand"))?;
    let meta = IndexMeta {
        w: opts.params.w,
        p: opts.params.p,
        dict_phrases: pfp.dictionary.len(),
        dict_bytes: encode_dict(&pfp.dictionary)?.len(),
        parse_len: pfp.parse.len(),
        tunnel: opts.tunnel,
        tunnel_blocks: plan.blocks.len(),
        parse_edges,
        edge_saving: plan.projected_edge_saving,
        text_len: text.len(),
        alphabet: text.alphabet().symbols().to_vec(),
        index_fnv64: 0,
    };
    Ok(Built {
        graph,
        parse_graph,
        plan,
        pfp,
        meta,
    })
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    })
}

/// Index bytes, with the checksum recorded into `meta`.
pub fn serialize_index(graph: &TextGraph, meta: &mut IndexMeta) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    write_index(graph, &mut bytes)?;
    meta.index_fnv64 = fnv1a64(&bytes);
    Ok(bytes)
}

/// Parses index bytes and checks them against the sidecar.
pub fn load_index(bytes: &[u8], meta: &IndexMeta) -> Result<TextGraph> {
    if fnv1a64(bytes) != meta.index_fnv64 {
        return Err(Error::corrupt("index checksum differs from the metadata"));
    }
    read_index(bytes)
}

/// Decodes an index back to the framed text `#T$^w`.
pub fn decode_index(graph: &TextGraph, meta: &IndexMeta) -> Result<Text> {
    let indexed = decode_text(graph)?;
    if indexed.len() != meta.text_len + 1 {
        return Err(Error::corrupt(format!(
            "decoded {} symbols, metadata promises {}",
            indexed.len(),
            meta.text_len + 1
        )));
    }
    let alphabet = Alphabet::new(meta.alphabet.iter().copied())?;
    Text::from_indexed_codes(&indexed, alphabet, meta.w)
}

/// Sidecar metadata written next to an index as `key=value` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMeta {
    pub w: usize,
    pub p: u64,
    pub dict_phrases: usize,
    pub dict_bytes: usize,
    pub parse_len: usize,
    pub tunnel: bool,
    pub tunnel_blocks: usize,
    /// Edges of the parse graph before tunnelling.
    pub parse_edges: usize,
    pub edge_saving: usize,
    pub text_len: usize,
    pub alphabet: Vec<u8>,
    pub index_fnv64: u64,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn unhex(s: &str) -> Option<Vec<u8>> {
    if !s.len().is_multiple_of(2) {
        return None;
    }
    (0..s.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(s.get(i..i + 2)?, 16).ok())
        .collect()
}

impl IndexMeta {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| writeln!(s, "{k}={v}").unwrap();
        kv("w", self.w.to_string());
        kv("p", self.p.to_string());
        kv("dict_phrases", self.dict_phrases.to_string());
        kv("dict_bytes", self.dict_bytes.to_string());
        kv("parse_len", self.parse_len.to_string());
        kv("tunnel", if self.tunnel { "on" } else { "off" }.into());
        kv("tunnel_blocks", self.tunnel_blocks.to_string());
        kv("parse_edges", self.parse_edges.to_string());
        kv("edge_saving", self.edge_saving.to_string());
        kv("text_len", self.text_len.to_string());
        kv("alphabet_hex", hex(&self.alphabet));
        kv("index_fnv64", format!("{:016x}", self.index_fnv64));
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("metadata line {line:?}")))?;
            map.insert(k.trim(), v.trim());
        }
        let get = |k: &str| {
            map.get(k)
                .copied()
                .ok_or_else(|| Error::Format(format!("metadata lacks {k}")))
        };
        let num = |k: &str| -> Result<usize> {
            get(k)?
                .parse()
                .map_err(|_| Error::Format(format!("metadata {k} is not a number")))
        };
        Ok(IndexMeta {
            w: num("w")?,
            p: num("p")? as u64,
            dict_phrases: num("dict_phrases")?,
            dict_bytes: num("dict_bytes")?,
            parse_len: num("parse_len")?,
            tunnel: match get("tunnel")? {
                "on" => true,
                "off" => false,
                v => return Err(Error::Format(format!("metadata tunnel={v}"))),
            },
            tunnel_blocks: num("tunnel_blocks")?,
            parse_edges: num("parse_edges")?,
            edge_saving: num("edge_saving")?,
            text_len: num("text_len")?,
            alphabet: unhex(get("alphabet_hex")?)
                .ok_or_else(|| Error::Format("metadata alphabet_hex".into()))?,
            index_fnv64: u64::from_str_radix(get("index_fnv64")?, 16)
                .map_err(|_| Error::Format("metadata index_fnv64".into()))?,
        })
    }
}

/// `copies` concatenated copies of a random DNA base of `base_len`, each
/// with independent point mutations at rate `rate`.
pub fn synthetic_corpus(copies: usize, base_len: usize, rate: f64, seed: u64) -> Vec<u8> {
    const BASES: &[u8; 4] = b"ACGT";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: Vec<u8> = (0..base_len).map(|_| BASES[rng.gen_range(0..4)]).collect();
    let mut out = Vec::with_capacity(copies * base_len);
    for _ in 0..copies {
        for &b in &base {
            if rng.gen_bool(rate) {
                let shift = rng.gen_range(1..4);
                let i = BASES.iter().position(|&x| x == b).unwrap();
                out.push(BASES[(i + shift) % 4]);
            } else {
                out.push(b);
            }
        }
    }
    out
}

pub const CSV_HEADER: &str =
    "label,input_bytes,time_s,peak_mem_bytes,index_bytes,parse_len,dict_bytes,edge_saving";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub label: String,
    pub input_bytes: usize,
    pub time_s: f64,
    pub peak_mem_bytes: usize,
    pub index_bytes: usize,
    pub parse_len: usize,
    pub dict_bytes: usize,
    pub edge_saving: usize,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.6},{},{},{},{},{}",
            self.label,
            self.input_bytes,
            self.time_s,
            self.peak_mem_bytes,
            self.index_bytes,
            self.parse_len,
            self.dict_bytes,
            self.edge_saving
        )
    }

    /// Row for a dataset that could not be processed.
    pub fn failed_row(label: &str) -> String {
        format!("{label},failed,,,,,,")
    }
}

/// Peak heap usage as seen by an instrumented allocator.
pub trait MemoryProbe {
    fn reset(&self);
    fn peak(&self) -> usize;
}

/// Probe for callers without an instrumented allocator; always reports 0.
pub struct NoProbe;

impl MemoryProbe for NoProbe {
    fn reset(&self) {}
    fn peak(&self) -> usize {
        0
    }
}

/// Builds an index of `text` and reports it. Input bytes are the length of
/// the normalized text.
pub fn bench_one(
    label: &str,
    text: &Text,
    opts: &BuildOptions,
    probe: &dyn MemoryProbe,
) -> Result<(BenchRecord, Built, Vec<u8>)> {
    probe.reset();
    let start = Instant::now();
    let mut built = build_index(text, opts)?;
    let bytes =
        serialize_index(&built.graph, &mut built.meta).map_err(Error::in_stage("serialize"))?;
    let time_s = start.elapsed().as_secs_f64();
    let record = BenchRecord {
        label: label.to_string(),
        input_bytes: text.len(),
        time_s,
        peak_mem_bytes: probe.peak(),
        index_bytes: bytes.len(),
        parse_len: built.meta.parse_len,
        dict_bytes: built.meta.dict_bytes,
        edge_saving: built.meta.edge_saving,
    };
    Ok((record, built, bytes))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(String),
    Synthetic {
        copies: usize,
        base_len: usize,
        rate: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub label: String,
    pub source: Source,
    pub limit_bytes: Option<usize>,
}

/// Lines `label source [limit_bytes]`; `source` is a FASTA path or
/// `synth:<copies>:<base_len>:<rate>`. Blank lines and `#` comments are skipped.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    let bad = |line: &str| Error::Format(format!("manifest line {line:?}"));
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (label, src, limit) = match fields.as_slice() {
            [l, s] => (*l, *s, None),
            [l, s, n] => (*l, *s, Some(n.parse().map_err(|_| bad(line))?)),
            _ => return Err(bad(line)),
        };
        let source = match src.strip_prefix("synth:") {
            Some(fields) => {
                let parts: Vec<&str> = fields.split(':').collect();
                match parts.as_slice() {
                    [c, b, r] => Source::Synthetic {
                        copies: c.parse().map_err(|_| bad(line))?,
                        base_len: b.parse().map_err(|_| bad(line))?,
                        rate: r.parse().map_err(|_| bad(line))?,
                    },
                    _ => return Err(bad(line)),
                }
            }
            None => Source::File(src.to_string()),
        };
        out.push(ManifestEntry {
            label: label.to_string(),
            source,
            limit_bytes: limit,
        });
    }
    Ok(out)
}

/// Loads the text of a manifest entry; relative paths resolve against `base_dir`.
pub fn load_entry(entry: &ManifestEntry, base_dir: &Path, seed: u64) -> Result<Text> {
    let text = match &entry.source {
        Source::File(path) => {
            let raw = std::fs::read(base_dir.join(path))?;
            ingest_fasta(&raw)?
        }
        Source::Synthetic {
            copies,
            base_len,
            rate,
        } => Text::with_alphabet(
            &synthetic_corpus(*copies, *base_len, *rate, seed),
            Alphabet::dna(),
        )?,
    };
    match entry.limit_bytes {
        Some(n) if n < text.len() => {
            Text::from_codes(text.codes()[..n].to_vec(), text.alphabet().clone())
        }
        _ => Ok(text),
    }
}

/// One CSV line per manifest entry, header first. Failing entries are
/// reported as failed rows and do not stop the run.
pub fn run_bench(
    manifest: &str,
    base_dir: &Path,
    opts: &BuildOptions,
    seed: u64,
    probe: &dyn MemoryProbe,
) -> Result<(String, Vec<Option<BenchRecord>>)> {
    let entries = parse_manifest(manifest)?;
    let mut csv = format!("{CSV_HEADER}\n");
    let mut records = Vec::with_capacity(entries.len());
    for entry in &entries {
        let result = load_entry(entry, base_dir, seed)
            .and_then(|text| bench_one(&entry.label, &text, opts, probe));
        match result {
            Ok((record, _, _)) => {
                csv.push_str(&record.csv_row());
                records.push(Some(record));
            }
            Err(_) => {
                csv.push_str(&BenchRecord::failed_row(&entry.label));
                records.push(None);
            }
        }
        csv.push('\n');
    }
    Ok((csv, records))
}
