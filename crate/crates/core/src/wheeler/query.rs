use super::WheelerGraph;
use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// Spells the string of a text-like Wheeler graph, ending with the label
/// entering vertex 0.
///
/// Merged paths are followed with a stack of in-slot offsets: entering a
/// vertex of in-degree `k > 1` through slot `i` pushes `i`, and leaving a
/// vertex of out-degree `k > 1` pops it and takes the `i`-th edge.
pub fn decode_text<S: Symbol>(wg: &WheelerGraph<S>) -> Result<Vec<S>> {
    if wg.n_vertices() == 0 {
        return Err(Error::corrupt("graph has no vertices"));
    }
    if wg.in_degree(0) != 1 || wg.out_degree(0) != 1 {
        return Err(Error::corrupt("vertex 0 must have in- and out-degree 1"));
    }
    let cap = wg.n_edges().saturating_mul(wg.max_in_degree().max(1));
    let mut stack: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    let mut v = 0;
    loop {
        let range = wg.out_range(v);
        let p = if range.len() > 1 {
            let off = stack
                .pop()
                .ok_or_else(|| Error::corrupt(format!("no path offset left at vertex {v}")))?;
            if off >= range.len() {
                return Err(Error::corrupt(format!(
                    "path offset {off} exceeds out-degree {} at vertex {v}",
                    range.len()
                )));
            }
            range.start + off
        } else {
            range.start
        };
        out.push(wg.labels()[p]);
        let slot = wg.target_slot(p);
        let u = wg.vertex_of_slot(slot);
        let slots = wg.in_range(u);
        if slots.len() > 1 {
            stack.push(slot - slots.start);
        }
        v = u;
        if v == 0 {
            break;
        }
        if out.len() >= cap {
            return Err(Error::corrupt("walk does not return to vertex 0"));
        }
    }
    if !stack.is_empty() {
        return Err(Error::corrupt("walk ends inside a merged path"));
    }
    out.reverse();
    out.rotate_left(1);
    Ok(out)
}

/// Vertex interval of a backward search. Offsets select paths inside a
/// merged vertex; `end_off == usize::MAX` keeps all of them.
#[derive(Debug, Clone, Copy)]
struct Interval {
    start: usize,
    start_off: usize,
    end: usize,
    end_off: usize,
}

fn slot_interval<S: Symbol>(
    wg: &WheelerGraph<S>,
    first: usize,
    last: usize,
    prev: Option<(Interval, bool, bool)>,
) -> Interval {
    let start = wg.vertex_of_slot(first);
    let end = wg.vertex_of_slot(last);
    let (in_s, in_e) = (wg.in_range(start), wg.in_range(end));
    let start_off = if in_s.len() > 1 {
        first - in_s.start
    } else {
        match prev {
            Some((iv, true, _)) if wg.out_degree(iv.start) == 1 => iv.start_off,
            _ => 0,
        }
    };
    let end_off = if in_e.len() > 1 {
        last - in_e.start
    } else {
        match prev {
            Some((iv, _, true)) if wg.out_degree(iv.end) == 1 => iv.end_off,
            _ => usize::MAX,
        }
    };
    Interval {
        start,
        start_off,
        end,
        end_off,
    }
}

/// Whether `pattern` labels a path of the graph. Symbols must be larger
/// than the label entering vertex 0, which only closes the cycle.
pub fn matches<S: Symbol>(wg: &WheelerGraph<S>, pattern: &[S]) -> Result<bool> {
    if wg.n_vertices() == 0 {
        return Ok(false);
    }
    let floor = wg.in_label(0);
    if let Some(c) = pattern.iter().find(|&&c| c <= floor) {
        return Err(Error::InvalidPattern(format!("symbol {c:?} is reserved")));
    }
    let Some((&last, rest)) = pattern.split_last() else {
        return Ok(true);
    };
    let slots = wg.label_slots(last);
    if slots.is_empty() {
        return Ok(false);
    }
    let mut iv = slot_interval(wg, slots.start, slots.end - 1, None);
    for &c in rest.iter().rev() {
        let out_s = wg.out_range(iv.start);
        let out_e = wg.out_range(iv.end);
        let lo = out_s.start + if out_s.len() > 1 { iv.start_off } else { 0 };
        let hi = out_e.start
            + if out_e.len() > 1 {
                iv.end_off.min(out_e.len() - 1)
            } else {
                0
            };
        if lo > hi {
            return Ok(false);
        }
        let r1 = wg.label_rank(c, lo);
        let r2 = wg.label_rank(c, hi + 1);
        if r1 == r2 {
            return Ok(false);
        }
        let positions = wg.label_positions(c);
        let first_at_lo = positions[r1] as usize == lo;
        let last_at_hi = positions[r2 - 1] as usize == hi;
        let base = wg.label_slots(c).start;
        iv = slot_interval(
            wg,
            base + r1,
            base + r2 - 1,
            Some((iv, first_at_lo, last_at_hi)),
        );
    }
    Ok(true)
}
