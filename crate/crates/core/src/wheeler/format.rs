use std::io::Write;

use super::WheelerGraph;
use crate::bitvec::BitVector;
use crate::error::{Error, Result};
use crate::symbol::Symbol;

pub const MAGIC: &[u8; 4] = b"PFWG";
pub const FORMAT_VERSION: u8 = 1;

fn put_u64<W: Write>(out: &mut W, x: u64) -> Result<()> {
    out.write_all(&x.to_le_bytes())?;
    Ok(())
}

fn put_bits<W: Write>(out: &mut W, bits: &BitVector) -> Result<()> {
    put_u64(out, bits.len() as u64)?;
    out.write_all(&bits.to_bytes())?;
    Ok(())
}

/// Serializes `wg`: magic, version, `n_vertices`, `n_edges`, `σ`, `C`, `L`,
/// then `O` and `I` each as a bit length followed by packed bytes.
pub fn write_index<S: Symbol, W: Write>(wg: &WheelerGraph<S>, out: &mut W) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&[FORMAT_VERSION])?;
    put_u64(out, wg.n_vertices() as u64)?;
    put_u64(out, wg.n_edges() as u64)?;
    put_u64(out, wg.sigma() as u64)?;
    for &c in wg.c_array() {
        put_u64(out, c as u64)?;
    }
    if wg.sigma() <= 255 {
        let bytes: Vec<u8> = wg.labels().iter().map(|l| l.to_index() as u8).collect();
        out.write_all(&bytes)?;
    } else {
        for l in wg.labels() {
            put_u64(out, l.to_u64_code())?;
        }
    }
    put_bits(out, wg.out_bits())?;
    put_bits(out, wg.in_bits())?;
    Ok(())
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::corrupt(format!("truncated {what}")))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let x = self.u64(what)?;
        // Every counted item occupies at least one bit of the remaining input.
        if x > 8 * (self.buf.len() - self.pos) as u64 + 8 {
            return Err(Error::corrupt(format!("{what} {x} exceeds the file size")));
        }
        Ok(x as usize)
    }

    fn bits(&mut self, what: &str) -> Result<BitVector> {
        let len = self.count(what)?;
        let bytes = self.take(len.div_ceil(8), what)?;
        BitVector::from_bytes(bytes, len)
            .ok_or_else(|| Error::corrupt(format!("nonzero padding in {what}")))
    }
}

/// Parses an index written by [`write_index`], rejecting any inconsistency
/// between the header, the stored `C` and the vectors.
pub fn read_index<S: Symbol>(bytes: &[u8]) -> Result<WheelerGraph<S>> {
    let mut cur = Cursor { buf: bytes, pos: 0 };
    if cur.take(4, "magic").ok() != Some(&MAGIC[..]) {
        return Err(Error::Format("bad magic".into()));
    }
    let version = cur.take(1, "version")?[0];
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format version {version}"
        )));
    }
    let n_vertices = cur.count("vertex count")?;
    let n_edges = cur.count("edge count")?;
    let sigma = cur.count("alphabet size")?;
    let mut c = Vec::with_capacity(sigma);
    for _ in 0..sigma {
        c.push(cur.u64("C")?);
    }
    let max_code = S::max_value().to_u64_code();
    let labels: Vec<S> = if sigma <= 255 {
        cur.take(n_edges, "L")?
            .iter()
            .map(|&b| S::from_index(b as usize))
            .collect()
    } else {
        let mut v = Vec::with_capacity(n_edges);
        for _ in 0..n_edges {
            let x = cur.u64("L")?;
            if x > max_code {
                return Err(Error::corrupt(format!(
                    "label {x} does not fit the symbol type"
                )));
            }
            v.push(S::from_index(x as usize));
        }
        v
    };
    let out_bits = cur.bits("O")?;
    let in_bits = cur.bits("I")?;
    if cur.pos != bytes.len() {
        return Err(Error::corrupt("trailing bytes after I"));
    }
    if labels.iter().any(|l| l.to_index() >= sigma) {
        return Err(Error::corrupt("label outside the stored alphabet"));
    }
    let wg = WheelerGraph::from_parts(labels, out_bits, in_bits)?;
    if wg.n_vertices() != n_vertices {
        return Err(Error::corrupt("vertex count disagrees with O"));
    }
    let stored: Vec<usize> = c.iter().map(|&x| x as usize).collect();
    if wg.sigma() != sigma || stored != wg.c_array() {
        return Err(Error::corrupt("stored C does not match L"));
    }
    Ok(wg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suffix_bwt::{build_suffix_array, bwt_from_sa};
    use crate::wheeler::wg_from_bwt;

    fn bytes() -> Vec<u8> {
        let t = b"mississippi$";
        let wg = wg_from_bwt(&bwt_from_sa(t, &build_suffix_array(t).unwrap())).unwrap();
        let mut out = Vec::new();
        write_index(&wg, &mut out).unwrap();
        out
    }

    #[test]
    fn roundtrip() {
        let b = bytes();
        let wg: WheelerGraph<u8> = read_index(&b).unwrap();
        let mut again = Vec::new();
        write_index(&wg, &mut again).unwrap();
        assert_eq!(b, again);
    }

    #[test]
    fn wide_labels_roundtrip() {
        let t: Vec<u64> = vec![300, 7, 300, 1000, 2];
        let wg = wg_from_bwt(&bwt_from_sa(&t, &build_suffix_array(&t).unwrap())).unwrap();
        let mut out = Vec::new();
        write_index(&wg, &mut out).unwrap();
        assert_eq!(read_index::<u64>(&out).unwrap(), wg);
        assert!(read_index::<u8>(&out).is_err());
    }

    #[test]
    fn every_byte_flip_is_rejected() {
        let b = bytes();
        for i in 0..b.len() {
            let mut bad = b.clone();
            bad[i] ^= 0x01;
            assert!(read_index::<u8>(&bad).is_err(), "flip at byte {i} accepted");
        }
    }

    #[test]
    fn bad_magic_is_a_format_error() {
        let mut b = bytes();
        b[0] = b'X';
        assert!(matches!(read_index::<u8>(&b), Err(Error::Format(_))));
        let mut b = bytes();
        b[4] = 9;
        assert!(matches!(read_index::<u8>(&b), Err(Error::Format(_))));
    }
}
