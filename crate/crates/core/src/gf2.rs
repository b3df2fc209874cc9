//! Dense bitset linear algebra over GF(2).
//!
//! Columns are bit vectors over a fixed row set; reduction is the
//! standard left-to-right elimination keyed on the highest set bit,
//! which doubles as the persistence pairing when rows and columns are
//! fed in filtration order.

#[derive(Clone, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the highest set bit, the reduction pivot.
    pub fn highest_set(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(wi * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVec{:?}", self.ones())
    }
}

/// Outcome of a left-to-right column reduction.
pub struct Reduction {
    /// Reduced columns, same order as the input.
    pub cols: Vec<BitVec>,
    /// Pivot row of each reduced column (None = zero column).
    pub pivots: Vec<Option<usize>>,
    pub rank: usize,
}

/// Reduce columns in the given order: each column is XOR-ed with earlier
/// pivot columns until its highest set bit is fresh or it vanishes.
pub fn reduce_columns(cols: &[BitVec]) -> Reduction {
    let mut reduced: Vec<BitVec> = Vec::with_capacity(cols.len());
    let mut pivots: Vec<Option<usize>> = Vec::with_capacity(cols.len());
    let mut owner_of_row: std::collections::HashMap<usize, usize> = Default::default();
    let mut rank = 0;
    for col in cols {
        let mut c = col.clone();
        loop {
            match c.highest_set() {
                None => {
                    pivots.push(None);
                    break;
                }
                Some(p) => {
                    if let Some(&owner) = owner_of_row.get(&p) {
                        let prior = reduced[owner].clone();
                        c.xor_assign(&prior);
                    } else {
                        owner_of_row.insert(p, reduced.len());
                        pivots.push(Some(p));
                        rank += 1;
                        break;
                    }
                }
            }
        }
        reduced.push(c);
    }
    Reduction {
        cols: reduced,
        pivots,
        rank,
    }
}
