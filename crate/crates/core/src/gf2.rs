//! Dense bit vectors and matrices over the two-element field, with Gaussian
//! elimination (rank, kernel, linear solve). Pivoting is deterministic: the
//! first row with a nonzero entry in the current column wins.

/// A fixed-length vector of bits, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A rows x cols matrix over GF(2), stored as dense bit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Bits>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![Bits::zeros(cols); rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &Bits {
        &self.data[r]
    }

    /// self * v, where v has length cols.
    pub fn apply(&self, v: &Bits) -> Bits {
        assert_eq!(v.len(), self.cols);
        let mut out = Bits::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = 0u64;
            for (w, x) in row.words.iter().zip(&v.words) {
                acc ^= w & x;
            }
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| work[r].get(col)) else {
                continue;
            };
            work.swap(rank, p);
            let (pivot, rest) = work.split_at_mut(rank + 1);
            let pivot = &pivot[rank];
            for r in rest.iter_mut() {
                if r.get(col) {
                    r.xor_assign(pivot);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Solves self * g = rhs. Returns a particular solution, or None if inconsistent.
    pub fn solve(&self, rhs: &Bits) -> Option<Bits> {
        assert_eq!(rhs.len(), self.rows);
        let mut work = self.data.clone();
        let mut aug = rhs.clone();
        let mut pivot_col_of_row: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| work[r].get(col)) else {
                continue;
            };
            work.swap(rank, p);
            let (ar, ap) = (aug.get(rank), aug.get(p));
            aug.set(rank, ap);
            aug.set(p, ar);
            for r in 0..self.rows {
                if r != rank && work[r].get(col) {
                    let (a, b) = if r < rank {
                        let (lo, hi) = work.split_at_mut(rank);
                        (&mut lo[r], &hi[0])
                    } else {
                        let (lo, hi) = work.split_at_mut(r);
                        (&mut hi[0], &lo[rank])
                    };
                    a.xor_assign(b);
                    if aug.get(rank) {
                        aug.flip(r);
                    }
                }
            }
            pivot_col_of_row.push((rank, col));
            rank += 1;
        }
        // consistency: a zero row must have a zero rhs
        for r in rank..self.rows {
            if aug.get(r) {
                debug_assert!(work[r].is_zero());
                return None;
            }
        }
        let mut g = Bits::zeros(self.cols);
        for &(row, col) in &pivot_col_of_row {
            if aug.get(row) {
                g.set(col, true);
            }
        }
        Some(g)
    }

    /// A basis of { v : self * v = 0 }.
    pub fn kernel_basis(&self) -> Vec<Bits> {
        let mut work = self.data.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| work[r].get(col)) else {
                continue;
            };
            work.swap(rank, p);
            for r in 0..self.rows {
                if r != rank && work[r].get(col) {
                    let (a, b) = if r < rank {
                        let (lo, hi) = work.split_at_mut(rank);
                        (&mut lo[r], &hi[0])
                    } else {
                        let (lo, hi) = work.split_at_mut(r);
                        (&mut hi[0], &lo[rank])
                    };
                    a.xor_assign(b);
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = Bits::zeros(self.cols);
            v.set(free, true);
            for &(row, col) in &pivots {
                if work[row].get(free) {
                    v.set(col, true);
                }
            }
            basis.push(v);
        }
        basis
    }
}
