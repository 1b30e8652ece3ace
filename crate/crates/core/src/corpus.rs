//! Input text model: alphabet normalization, FASTA ingestion and sentinel framing.
//!
//! Corpus symbols are remapped to the codes `2..σ+2` so that the two
//! sentinels sort below everything: the terminator `$` is code 0 and the
//! start marker `#` is code 1.

use crate::error::{Error, Result};

/// Code of the terminator `$`.
pub const TERMINATOR: u8 = 0;
/// Code of the start marker `#`.
pub const START_MARKER: u8 = 1;
/// Code of the smallest corpus symbol.
pub const FIRST_SYMBOL: u8 = 2;

const MAX_SYMBOLS: usize = 254;

/// Ordered set of corpus bytes. Code order equals byte order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<u8>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = u8>) -> Result<Self> {
        let mut symbols: Vec<u8> = symbols.into_iter().collect();
        symbols.sort_unstable();
        symbols.dedup();
        if symbols.len() > MAX_SYMBOLS {
            return Err(Error::AlphabetTooLarge(symbols.len()));
        }
        Ok(Alphabet { symbols })
    }

    /// The nucleotide alphabet `{A, C, G, T}`.
    pub fn dna() -> Self {
        Alphabet {
            symbols: b"ACGT".to_vec(),
        }
    }

    /// Alphabet of the distinct bytes of `bytes`.
    pub fn of(bytes: &[u8]) -> Result<Self> {
        let mut seen = [false; 256];
        for &b in bytes {
            seen[b as usize] = true;
        }
        Alphabet::new((0..=255u8).filter(|&b| seen[b as usize]))
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Number of corpus symbols (σ, sentinels excluded).
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn code(&self, byte: u8) -> Option<u8> {
        self.symbols
            .binary_search(&byte)
            .ok()
            .map(|i| i as u8 + FIRST_SYMBOL)
    }

    pub fn encode(&self, bytes: &[u8]) -> Result<Vec<u8>> {
        bytes
            .iter()
            .map(|&b| self.code(b).ok_or(Error::UnknownSymbol(b)))
            .collect()
    }

    /// Printable byte of a code; sentinels render as `$` and `#`.
    pub fn byte(&self, code: u8) -> Option<u8> {
        match code {
            TERMINATOR => Some(b'$'),
            START_MARKER => Some(b'#'),
            c => self.symbols.get((c - FIRST_SYMBOL) as usize).copied(),
        }
    }

    pub fn decode(&self, codes: &[u8]) -> Result<Vec<u8>> {
        codes
            .iter()
            .map(|&c| {
                self.byte(c)
                    .ok_or_else(|| Error::corrupt(format!("symbol code {c} outside alphabet")))
            })
            .collect()
    }
}

/// A text over an [`Alphabet`], stored as symbol codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Text {
    codes: Vec<u8>,
    alphabet: Alphabet,
    window: Option<usize>,
}

impl Text {
    /// Unframed text whose alphabet is the set of bytes it contains.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let alphabet = Alphabet::of(bytes)?;
        Text::with_alphabet(bytes, alphabet)
    }

    pub fn with_alphabet(bytes: &[u8], alphabet: Alphabet) -> Result<Self> {
        let codes = alphabet.encode(bytes)?;
        Ok(Text {
            codes,
            alphabet,
            window: None,
        })
    }

    /// Unframed text from codes that must all be corpus codes of `alphabet`.
    pub fn from_codes(codes: Vec<u8>, alphabet: Alphabet) -> Result<Self> {
        let top = FIRST_SYMBOL as usize + alphabet.len();
        if let Some(&c) = codes
            .iter()
            .find(|&&c| c < FIRST_SYMBOL || c as usize >= top)
        {
            return Err(Error::corrupt(format!("symbol code {c} outside alphabet")));
        }
        Ok(Text {
            codes,
            alphabet,
            window: None,
        })
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Window length the text was framed with, if framed.
    pub fn window(&self) -> Option<usize> {
        self.window
    }

    pub fn is_framed(&self) -> bool {
        self.window.is_some()
    }

    /// The text as printable bytes (sentinels rendered as `#`/`$`).
    pub fn render(&self) -> Vec<u8> {
        self.alphabet
            .decode(&self.codes)
            .expect("text codes are always inside the alphabet")
    }

    /// The unframed body as printable bytes.
    pub fn body_bytes(&self) -> Vec<u8> {
        self.alphabet
            .decode(self.body())
            .expect("text codes are always inside the alphabet")
    }

    /// Corpus codes without sentinels.
    pub fn body(&self) -> &[u8] {
        match self.window {
            Some(w) => &self.codes[1..self.codes.len() - w],
            None => &self.codes,
        }
    }

    /// The string a Wheeler graph of this text spells: the body followed
    /// by the start marker, which acts as its unique smallest terminator.
    ///
    /// Rotations of this string are the rotations of the cyclic text `#T`,
    /// which is what the framed text `#T$^w` collapses to once the padding
    /// terminators are dropped.
    pub fn indexed_codes(&self) -> Vec<u8> {
        let mut s = self.body().to_vec();
        s.push(START_MARKER);
        s
    }

    /// Inverse of [`Text::indexed_codes`] followed by framing with `w`.
    pub fn from_indexed_codes(indexed: &[u8], alphabet: Alphabet, w: usize) -> Result<Self> {
        match indexed.split_last() {
            Some((&START_MARKER, body)) => frame(&Text::from_codes(body.to_vec(), alphabet)?, w),
            _ => Err(Error::corrupt(
                "indexed string must end with the start marker",
            )),
        }
    }
}

/// Parses FASTA, keeping only `A`, `C`, `G`, `T` (case-folded) from
/// sequence lines. Records are concatenated in file order.
pub fn ingest_fasta(raw: &[u8]) -> Result<Text> {
    let mut bytes = Vec::with_capacity(raw.len());
    for line in raw.split(|&b| b == b'\n') {
        if line.first() == Some(&b'>') {
            continue;
        }
        bytes.extend(
            line.iter()
                .map(u8::to_ascii_uppercase)
                .filter(|b| matches!(b, b'A' | b'C' | b'G' | b'T')),
        );
    }
    if bytes.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Text::with_alphabet(&bytes, Alphabet::dna())
}

/// Frames `text` as `#text$^w`.
pub fn frame(text: &Text, w: usize) -> Result<Text> {
    if text.is_framed() {
        return Err(Error::AlreadyFramed);
    }
    if w == 0 {
        return Err(Error::InvalidParameter(
            "window length must be at least 1".into(),
        ));
    }
    let mut codes = Vec::with_capacity(text.len() + 1 + w);
    codes.push(START_MARKER);
    codes.extend_from_slice(&text.codes);
    codes.resize(text.len() + 1 + w, TERMINATOR);
    Ok(Text {
        codes,
        alphabet: text.alphabet.clone(),
        window: Some(w),
    })
}
