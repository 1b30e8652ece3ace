//! `pfwg`: build, query and benchmark Wheeler-graph indexes.

mod alloc;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pfwg::corpus::{frame, ingest_fasta, Alphabet, Text};
use pfwg::pfp::{encode_dict, encode_parse, parse_pfp, PfpParams};
use pfwg::pipeline::{
    bench_one, decode_index, load_index, run_bench, BuildOptions, IndexMeta, CSV_HEADER,
};
use pfwg::wheeler::{check_wheeler, matches, succinct_to_edges, Verdict};
use pfwg::TextGraph;

use crate::alloc::CountingAlloc;

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc::new();

#[derive(Parser)]
#[command(
    name = "pfwg",
    version,
    about = "Wheeler-graph indexes through prefix-free parsing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index and its `.meta` sidecar; prints a CSV record.
    Build {
        input: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = Format::Fasta)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
        /// Dataset label for the CSV record (defaults to the input file name).
        #[arg(long)]
        label: Option<String>,
    },
    /// Print the indexed text.
    Decode {
        index: PathBuf,
        /// Print the framed text `#T$^w` instead of `T`.
        #[arg(long)]
        framed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report whether a pattern occurs; exit 0 if present, 1 if absent.
    Query { index: PathBuf, pattern: String },
    /// Check an index; exit 0 if valid, 1 otherwise.
    Validate { index: PathBuf },
    /// Benchmark every manifest entry; prints CSV.
    Bench {
        #[arg(long)]
        manifest: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the dictionary and parse as `<out>.dict` and `<out>.parse`.
    Pfp {
        input: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = Format::Fasta)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(short = 'w', default_value_t = 4)]
    w: usize,
    #[arg(short = 'p', default_value_t = 50)]
    p: u64,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    tunnel: Switch,
    /// File of whitespace-separated trigger words of length w; replaces the hash.
    #[arg(long)]
    trigger_set: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Keep only A, C, G, T from sequence lines.
    Fasta,
    /// Index the file bytes as they are.
    Raw,
}

impl ParamArgs {
    fn options(&self, alphabet: &Alphabet) -> Result<BuildOptions> {
        let params = match &self.trigger_set {
            Some(path) => {
                let words =
                    fs::read(path).with_context(|| format!("reading {}", path.display()))?;
                let words: Vec<&[u8]> = words
                    .split(u8::is_ascii_whitespace)
                    .filter(|w| !w.is_empty())
                    .collect();
                PfpParams::explicit(self.w, &words, alphabet)?
            }
            None => PfpParams::hashed(self.w, self.p)?,
        };
        Ok(BuildOptions {
            params,
            tunnel: self.tunnel == Switch::On,
        })
    }
}

fn read_text(path: &Path, format: Format) -> Result<Text> {
    let raw = fs::read(path).with_context(|| format!("ingest: reading {}", path.display()))?;
    let text = match format {
        Format::Fasta => ingest_fasta(&raw),
        Format::Raw => Text::from_bytes(&raw),
    };
    text.context("ingest")
}

fn meta_path(index: &Path) -> PathBuf {
    let mut s = index.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// Writes every file or none of them.
fn write_all_or_nothing(files: &[(PathBuf, &[u8])]) -> Result<()> {
    for (i, (path, bytes)) in files.iter().enumerate() {
        if let Err(e) = fs::write(path, bytes) {
            for (written, _) in &files[..=i] {
                let _ = fs::remove_file(written);
            }
            return Err(e).with_context(|| format!("write: {}", path.display()));
        }
    }
    Ok(())
}

fn load(index: &Path) -> Result<(TextGraph, IndexMeta)> {
    let meta_file = meta_path(index);
    let meta = fs::read_to_string(&meta_file)
        .with_context(|| format!("reading {}", meta_file.display()))?;
    let meta = IndexMeta::from_text(&meta).context("metadata")?;
    let bytes = fs::read(index).with_context(|| format!("reading {}", index.display()))?;
    let graph = load_index(&bytes, &meta).context("index")?;
    Ok((graph, meta))
}

fn build(
    input: &Path,
    params: &ParamArgs,
    format: Format,
    out: &Path,
    label: Option<String>,
) -> Result<()> {
    let text = read_text(input, format)?;
    let opts = params.options(text.alphabet())?;
    let label = label.unwrap_or_else(|| {
        input
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned()
    });
    let (record, built, bytes) = bench_one(&label, &text, &opts, &ALLOC)?;
    let meta = built.meta.to_text();
    write_all_or_nothing(&[
        (out.to_path_buf(), &bytes),
        (meta_path(out), meta.as_bytes()),
    ])?;
    println!("{CSV_HEADER}\n{}", record.csv_row());
    Ok(())
}

fn decode(index: &Path, framed: bool, out: Option<&Path>) -> Result<()> {
    let (graph, meta) = load(index)?;
    let text = decode_index(&graph, &meta).context("decode")?;
    let bytes = if framed {
        text.render()
    } else {
        text.body_bytes()
    };
    match out {
        Some(path) => {
            fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

fn query(index: &Path, pattern: &str) -> Result<bool> {
    let (graph, meta) = load(index)?;
    let alphabet = Alphabet::new(meta.alphabet.iter().copied())?;
    // A pattern with a byte outside the alphabet cannot occur.
    let present = match alphabet.encode(pattern.as_bytes()) {
        Ok(codes) => matches(&graph, &codes)?,
        Err(_) => false,
    };
    println!("{}", if present { "present" } else { "absent" });
    Ok(present)
}

fn validate(index: &Path) -> Result<bool> {
    let verdict = load(index).and_then(|(graph, meta)| {
        if let Verdict::Violation {
            condition,
            witnesses,
        } = check_wheeler(&succinct_to_edges(&graph))
        {
            bail!("Wheeler condition {condition} violated by {witnesses:?}");
        }
        let text = decode_index(&graph, &meta).context("decode")?;
        if text.body().len() != meta.text_len {
            bail!(
                "decoded length {} differs from {}",
                text.body().len(),
                meta.text_len
            );
        }
        Ok(graph)
    });
    match verdict {
        Ok(graph) => {
            println!(
                "valid: {} vertices, {} edges",
                graph.n_vertices(),
                graph.n_edges()
            );
            Ok(true)
        }
        Err(e) => {
            println!("invalid: {e:#}");
            Ok(false)
        }
    }
}

fn bench(manifest: &Path, params: &ParamArgs, seed: u64, out: Option<&Path>) -> Result<()> {
    let text =
        fs::read_to_string(manifest).with_context(|| format!("reading {}", manifest.display()))?;
    let base_dir = manifest.parent().unwrap_or(Path::new("."));
    let opts = params.options(&Alphabet::dna())?;
    let (csv, _) = run_bench(&text, base_dir, &opts, seed, &ALLOC)?;
    match out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn pfp(input: &Path, params: &ParamArgs, format: Format, out: &Path) -> Result<()> {
    let text = read_text(input, format)?;
    let opts = params.options(text.alphabet())?;
    let framed = frame(&text, opts.params.w).context("frame")?;
    let parsed = parse_pfp(&framed, &opts.params).context("parse_pfp")?;
    let dict = encode_dict(&parsed.dictionary)?;
    let parse = encode_parse(&parsed.parse);
    let with_ext = |ext: &str| {
        let mut s = out.as_os_str().to_owned();
        s.push(ext);
        PathBuf::from(s)
    };
    write_all_or_nothing(&[(with_ext(".dict"), &dict), (with_ext(".parse"), &parse)])?;
    println!(
        "phrases={} parse_len={}",
        parsed.dictionary.len(),
        parsed.parse.len()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build {
            input,
            params,
            format,
            out,
            label,
        } => build(&input, &params, format, &out, label).map(|_| true),
        Command::Decode { index, framed, out } => {
            decode(&index, framed, out.as_deref()).map(|_| true)
        }
        Command::Query { index, pattern } => query(&index, &pattern),
        Command::Validate { index } => validate(&index),
        Command::Bench {
            manifest,
            params,
            seed,
            out,
        } => bench(&manifest, &params, seed, out.as_deref()).map(|_| true),
        Command::Pfp {
            input,
            params,
            format,
            out,
        } => pfp(&input, &params, format, &out).map(|_| true),
    }
}

/// Exit 0 for success or a positive verdict, 1 for a negative verdict, 2 for errors.
fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
