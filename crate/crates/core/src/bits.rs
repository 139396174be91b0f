//! Minimal fixed-size bitset used for downset/upset tables.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn new(nbits: usize) -> Self {
        Bits {
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn assign(&mut self, i: usize, v: bool) {
        if v {
            self.words[i / 64] |= 1u64 << (i % 64);
        } else {
            self.words[i / 64] &= !(1u64 << (i % 64));
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of set bits with index in [lo, hi).
    pub fn count_range(&self, lo: usize, hi: usize) -> usize {
        self.fold_range(lo, hi, |w, _| w)
    }

    /// Number of positions in [lo, hi) set in both bitsets.
    pub fn count_and_range(&self, other: &Bits, lo: usize, hi: usize) -> usize {
        self.fold_range(lo, hi, |w, i| w & other.words[i])
    }

    fn fold_range(&self, lo: usize, hi: usize, word: impl Fn(u64, usize) -> u64) -> usize {
        if lo >= hi {
            return 0;
        }
        let (wl, bl) = (lo / 64, lo % 64);
        let (wh, bh) = (hi / 64, hi % 64);
        let masked = |i: usize| word(self.words[i], i);
        if wl == wh {
            let mask = (!0u64 << bl) & (!0u64 >> (64 - bh));
            return (masked(wl) & mask).count_ones() as usize;
        }
        let mut c = (masked(wl) >> bl).count_ones() as usize;
        for i in wl + 1..wh {
            c += masked(i).count_ones() as usize;
        }
        if bh > 0 {
            c += (masked(wh) << (64 - bh)).count_ones() as usize;
        }
        c as usize
    }
}
