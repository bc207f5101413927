//! Dense GF(2) matrices with bit-packed rows, elimination rank, and the
//! closed-form 2-rank prediction for `M M^T` of a strongly regular geometry.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::analysis::SrgSpectrum;

const WORD: usize = 64;

/// Dense binary matrix, one `u64` slice per row. Pad bits past `cols` are
/// always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        if self.rows <= 32 && self.cols <= 64 {
            for r in 0..self.rows {
                for c in 0..self.cols {
                    f.write_str(if self.get(r, c) { "1" } else { "." })?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl BinaryMatrix {
    /// All-zero `rows x cols` matrix.
    ///
    /// Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "binary matrix dimensions must be positive");
        let words = cols.div_ceil(WORD);
        BinaryMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. Any nonzero byte counts as a one.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &b) in row.iter().enumerate() {
                if b != 0 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from per-row lists of column indices.
    pub fn from_row_supports(rows: usize, cols: usize, supports: &[Vec<usize>]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, s) in supports.iter().enumerate() {
            for &c in s {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Words per packed row.
    pub fn row_words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.words + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let w = &mut self.data[r * self.words + c / WORD];
        let bit = 1u64 << (c % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows).map(|r| self.row_weight(r)).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0usize; self.cols];
        for r in 0..self.rows {
            for c in self.row_support(r) {
                w[c] += 1;
            }
        }
        w
    }

    /// Column indices of the ones in row `r`, ascending.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.row(r).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i * WORD + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    /// Row indices of the ones in each column.
    pub fn col_supports(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cols];
        for r in 0..self.rows {
            for c in self.row_support(r) {
                out[c].push(r);
            }
        }
        out
    }

    /// Number of columns where rows `a` and `b` both have a one.
    #[inline]
    pub fn row_overlap(&self, a: usize, b: usize) -> usize {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Copy with the rows listed in `order`.
    pub fn permute_rows(&self, order: &[usize]) -> BinaryMatrix {
        assert_eq!(order.len(), self.rows);
        let mut out = self.clone();
        for (dst, &src) in order.iter().enumerate() {
            out.data[dst * self.words..(dst + 1) * self.words].copy_from_slice(self.row(src));
        }
        out
    }

    /// Copy with `extra` zero rows appended.
    pub fn with_zero_rows(&self, extra: usize) -> BinaryMatrix {
        let mut out = self.clone();
        out.rows += extra;
        out.data.resize(out.rows * out.words, 0);
        out
    }

    /// `H x^T` over GF(2) for a 0/1 vector `x` of length `cols`.
    pub fn syndrome(&self, x: &[u8]) -> Vec<u8> {
        assert_eq!(x.len(), self.cols);
        let packed = pack(x, self.words);
        (0..self.rows)
            .map(|r| {
                let ones: u32 = self
                    .row(r)
                    .iter()
                    .zip(&packed)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum();
                (ones & 1) as u8
            })
            .collect()
    }

    /// Integer Gram matrix `M M^T`, row-major `rows x rows`.
    pub fn gram_counts(&self) -> Vec<u32> {
        let n = self.rows;
        let mut g = vec![0u32; n * n];
        for i in 0..n {
            for j in i..n {
                let c = self.row_overlap(i, j) as u32;
                g[i * n + j] = c;
                g[j * n + i] = c;
            }
        }
        g
    }

    /// `M M^T` reduced mod 2.
    pub fn gram2(&self) -> BinaryMatrix {
        let n = self.rows;
        let mut g = BinaryMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                if self.row_overlap(i, j) & 1 == 1 {
                    g.set(i, j, true);
                    g.set(j, i, true);
                }
            }
        }
        g
    }

    /// Row rank over GF(2). Works on a copy.
    pub fn rank2(&self) -> usize {
        let mut m = self.data.clone();
        let words = self.words;
        let mut rank = 0;
        for i in 0..self.rows {
            let (head, tail) = m.split_at_mut((i + 1) * words);
            let pivot_row = &head[i * words..];
            let Some((wi, w)) = pivot_row.iter().enumerate().find(|(_, &w)| w != 0) else {
                continue;
            };
            rank += 1;
            let bit = 1u64 << w.trailing_zeros();
            for other in tail.chunks_exact_mut(words) {
                if other[wi] & bit != 0 {
                    for (o, p) in other[wi..].iter_mut().zip(&pivot_row[wi..]) {
                        *o ^= p;
                    }
                }
            }
        }
        rank
    }

    /// Reduced row echelon form over GF(2); returns the matrix (zero rows
    /// last) and the pivot column of each nonzero row.
    pub fn rref(&self) -> (BinaryMatrix, Vec<usize>) {
        let mut m = self.clone();
        let words = self.words;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            if p != r {
                for w in 0..words {
                    m.data.swap(p * words + w, r * words + w);
                }
            }
            let pivot: Vec<u64> = m.row(r).to_vec();
            for i in 0..self.rows {
                if i != r && m.get(i, c) {
                    for (o, v) in m.data[i * words..(i + 1) * words].iter_mut().zip(&pivot) {
                        *o ^= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right null space `{x : M x^T = 0}`, one row per basis
    /// vector. Returns `None` when the null space is trivial.
    pub fn null_space(&self) -> Option<BinaryMatrix> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        if free.is_empty() {
            return None;
        }
        let mut basis = BinaryMatrix::zeros(free.len(), self.cols);
        for (b, &f) in free.iter().enumerate() {
            basis.set(b, f, true);
            for (row, &p) in pivots.iter().enumerate() {
                if r.get(row, f) {
                    basis.set(b, p, true);
                }
            }
        }
        Some(basis)
    }
}

pub(crate) fn pack(bits: &[u8], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (i, &b) in bits.iter().enumerate() {
        if b != 0 {
            out[i / WORD] |= 1 << (i % WORD);
        }
    }
    out
}

/// Whether a [`RankPrediction`] pins the rank or only bounds it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankKind {
    Exact,
    LowerBound,
    UpperBound,
}

/// Which parity pattern of `(theta0, theta1, theta2)` decided the prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrouwerCase {
    /// No eigenvalue is even.
    NoneEven,
    /// Exactly one eigenvalue is even; the index is 0, 1 or 2.
    OneEven(u8),
    /// `theta0` and `theta1` even, `theta2` odd.
    Theta0And1Even,
    /// `theta0` and `theta2` even, `theta1` odd.
    Theta0And2Even,
    /// `theta1` and `theta2` both even; only an upper bound is available.
    Theta1And2Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankPrediction {
    pub kind: RankKind,
    pub value: u64,
    pub case: BrouwerCase,
}

/// Predicts `rank_2(M M^T)` from the spectrum of the point graph, with
/// `N = M M^T = A + (t+1) I` (so `b = 0`, `c = t + 1` and `e = mu`).
pub fn brouwer_predict(spec: &SrgSpectrum, t: u64) -> RankPrediction {
    let c = t as i64 + 1;
    debug_assert_eq!(spec.theta1, spec.u1 + c);
    debug_assert_eq!(spec.theta2, spec.u2 + c);
    let even = |x: i64| x.rem_euclid(2) == 0;
    let (e0, e1, e2) = (even(spec.theta0), even(spec.theta1), even(spec.theta2));
    let v = spec.v;
    let mu_even = spec.mu % 2 == 0;
    let exact = |value: u64, case| RankPrediction {
        kind: RankKind::Exact,
        value,
        case,
    };
    match (e0, e1, e2) {
        (false, false, false) => exact(v, BrouwerCase::NoneEven),
        (true, false, false) => exact(v - 1, BrouwerCase::OneEven(0)),
        (false, true, false) => exact(v - spec.f1, BrouwerCase::OneEven(1)),
        (false, false, true) => exact(v - spec.f2, BrouwerCase::OneEven(2)),
        (true, true, false) => exact(
            spec.f2 + u64::from(!mu_even),
            BrouwerCase::Theta0And1Even,
        ),
        (true, false, true) => exact(
            spec.f1 + u64::from(!mu_even),
            BrouwerCase::Theta0And2Even,
        ),
        (_, true, true) => RankPrediction {
            kind: RankKind::UpperBound,
            value: spec.f1.min(spec.f2) + 1,
            case: BrouwerCase::Theta1And2Even,
        },
    }
}

/// Lower bound on `rank_2(M)` implied by an exact `rank_2(M M^T)` prediction.
pub fn incidence_rank_lower_bound(gram: RankPrediction) -> Option<RankPrediction> {
    (gram.kind == RankKind::Exact).then_some(RankPrediction {
        kind: RankKind::LowerBound,
        ..gram
    })
}

/// Dimension and rate of the code with parity-check matrix `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeDimension {
    pub length: usize,
    pub rank: usize,
    pub dimension: usize,
    pub rate: f64,
}

impl CodeDimension {
    /// The code is `{0}` and cannot carry information.
    pub fn is_trivial(&self) -> bool {
        self.dimension == 0
    }
}

pub fn dimension_and_rate(h: &BinaryMatrix) -> CodeDimension {
    let rank = h.rank2();
    let dimension = h.cols() - rank;
    CodeDimension {
        length: h.cols(),
        rank,
        dimension,
        rate: dimension as f64 / h.cols() as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_rank() {
        assert_eq!(BinaryMatrix::identity(10).rank2(), 10);
        assert_eq!(BinaryMatrix::identity(130).rank2(), 130);
    }

    #[test]
    fn single_row_gram() {
        let m = BinaryMatrix::from_rows(&[[1u8, 1, 0]]);
        let g = m.gram2();
        assert_eq!((g.rows(), g.cols()), (1, 1));
        assert!(!g.get(0, 0));
    }

    #[test]
    fn small_ranks() {
        let m = BinaryMatrix::from_rows(&[[1u8, 1, 0], [0, 1, 1], [1, 0, 1]]);
        assert_eq!(m.rank2(), 2);
        let z = BinaryMatrix::zeros(3, 5);
        assert_eq!(z.rank2(), 0);
    }

    #[test]
    fn null_space_is_orthogonal() {
        let m = BinaryMatrix::from_rows(&[[1u8, 1, 0, 1, 0], [0, 1, 1, 0, 1], [1, 0, 1, 1, 1]]);
        let ns = m.null_space().unwrap();
        assert_eq!(ns.rows(), 5 - m.rank2());
        for r in 0..ns.rows() {
            let x: Vec<u8> = (0..5).map(|c| ns.get(r, c) as u8).collect();
            assert!(m.syndrome(&x).iter().all(|&s| s == 0));
        }
        assert_eq!(ns.rank2(), ns.rows());
        assert!(BinaryMatrix::identity(4).null_space().is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<u8>>> {
        (1usize..12, 1usize..140).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
        })
    }

    /// Rank by elimination over plain `Vec<bool>` rows, column by column.
    fn naive_rank(rows: &[Vec<u8>]) -> usize {
        let mut m: Vec<Vec<bool>> = rows.iter().map(|r| r.iter().map(|&b| b == 1).collect()).collect();
        let cols = m[0].len();
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..m.len()).find(|&i| m[i][c]) {
                m.swap(rank, p);
                let pivot = m[rank].clone();
                for (i, row) in m.iter_mut().enumerate() {
                    if i != rank && row[c] {
                        for (x, y) in row.iter_mut().zip(&pivot) {
                            *x ^= y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    proptest! {
        #[test]
        fn rank_matches_naive(rows in arb_matrix()) {
            let m = BinaryMatrix::from_rows(&rows);
            prop_assert_eq!(m.rank2(), naive_rank(&rows));
            prop_assert_eq!(m.rref().1.len(), naive_rank(&rows));
        }

        #[test]
        fn rank_invariant_under_row_ops(rows in arb_matrix(), extra in 0usize..4, seed in any::<u64>()) {
            let m = BinaryMatrix::from_rows(&rows);
            let mut order: Vec<usize> = (0..m.rows()).collect();
            let mut s = seed;
            for i in (1..order.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(m.permute_rows(&order).rank2(), m.rank2());
            prop_assert_eq!(m.with_zero_rows(extra).rank2(), m.rank2());
            prop_assert!(m.gram2().rank2() <= m.rank2());
            prop_assert_eq!(m.transpose().rank2(), m.rank2());
        }
    }
}
