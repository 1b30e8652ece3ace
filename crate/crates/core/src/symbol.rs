use std::fmt::Debug;
use std::hash::Hash;

use num_traits::{PrimInt, Unsigned};

/// An unsigned integer symbol code usable as a label or text character.
///
/// Text graphs use `u8` codes; the graph of a parse uses `u64` phrase ranks.
/// Every algorithm in this crate works on either.
pub trait Symbol: PrimInt + Unsigned + Hash + Debug + Default + Send + Sync + 'static {
    /// Size in bytes of the fixed-width on-disk encoding.
    const WIDTH: usize;

    fn to_index(self) -> usize {
        self.to_usize().expect("symbol code does not fit in usize")
    }

    fn from_index(i: usize) -> Self {
        Self::from(i).expect("symbol code out of range")
    }

    fn to_u64_code(self) -> u64 {
        self.to_u64().expect("symbol code does not fit in u64")
    }
}

impl Symbol for u8 {
    const WIDTH: usize = 1;
}

impl Symbol for u16 {
    const WIDTH: usize = 2;
}

impl Symbol for u32 {
    const WIDTH: usize = 4;
}

impl Symbol for u64 {
    const WIDTH: usize = 8;
}
