//! LDPC codes defined by a parity-check matrix, log-domain sum-product
//! decoding, a generator-matrix encoder, and random regular baselines.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf2::BinaryMatrix;

/// Message magnitudes are clamped to this value.
pub const LLR_CLAMP: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdpcError {
    /// `m w_row != n w_col`, or `w_col` does not divide `m`.
    InfeasibleWeights { m: usize, n: usize, w_col: usize, w_row: usize },
    LengthMismatch { expected: usize, found: usize },
    /// The code has dimension zero.
    TrivialCode,
}

impl fmt::Display for LdpcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LdpcError::InfeasibleWeights { m, n, w_col, w_row } => write!(
                f,
                "no {}x{} matrix has column weight {} and row weight {} in {} bands",
                m, n, w_col, w_row, w_col
            ),
            LdpcError::LengthMismatch { expected, found } => {
                write!(f, "expected length {}, found {}", expected, found)
            }
            LdpcError::TrivialCode => write!(f, "parity-check matrix has full column rank; the code is {{0}}"),
        }
    }
}

impl core::error::Error for LdpcError {}

/// Binary linear code `{c : H c^T = 0}` with its Tanner-graph adjacency.
/// Edges are numbered check by check.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    h: BinaryMatrix,
    check_start: Vec<usize>,
    edge_var: Vec<u32>,
    var_edges: Vec<Vec<u32>>,
    w_col: Option<usize>,
    w_row: Option<usize>,
    rank: usize,
}

impl LdpcCode {
    pub fn new(h: BinaryMatrix) -> Self {
        let (m, n) = (h.rows(), h.cols());
        let mut check_start = Vec::with_capacity(m + 1);
        let mut edge_var = Vec::new();
        let mut var_edges = vec![Vec::new(); n];
        for r in 0..m {
            check_start.push(edge_var.len());
            for c in h.row_support(r) {
                var_edges[c].push(edge_var.len() as u32);
                edge_var.push(c as u32);
            }
        }
        check_start.push(edge_var.len());
        let uniform = |w: Vec<usize>| w.first().copied().filter(|&x| w.iter().all(|&y| y == x));
        let w_col = uniform(h.col_weights());
        let w_row = uniform(h.row_weights());
        let rank = h.rank2();
        LdpcCode {
            h,
            check_start,
            edge_var,
            var_edges,
            w_col,
            w_row,
            rank,
        }
    }

    pub fn h(&self) -> &BinaryMatrix {
        &self.h
    }

    /// Code length.
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Number of parity checks.
    pub fn m(&self) -> usize {
        self.h.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dimension(&self) -> usize {
        self.n() - self.rank
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.n() as f64
    }

    /// Column weight, if constant.
    pub fn w_col(&self) -> Option<usize> {
        self.w_col
    }

    /// Row weight, if constant.
    pub fn w_row(&self) -> Option<usize> {
        self.w_row
    }

    pub fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    /// Variables checked by check `r`.
    pub fn check_vars(&self, r: usize) -> &[u32] {
        &self.edge_var[self.check_start[r]..self.check_start[r + 1]]
    }

    pub fn is_codeword(&self, x: &[u8]) -> bool {
        (0..self.m()).all(|r| self.check_vars(r).iter().fold(0u8, |a, &v| a ^ (x[v as usize] & 1)) == 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub bits: Vec<u8>,
    pub iterations: usize,
    /// Every posterior is nonzero and the hard decision satisfies all checks.
    pub syndrome_ok: bool,
}

/// Sum-product decoder with reusable message buffers.
#[derive(Debug, Clone)]
pub struct SumProductDecoder<'a> {
    code: &'a LdpcCode,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    scratch: Vec<f64>,
    posterior: Vec<f64>,
}

impl<'a> SumProductDecoder<'a> {
    pub fn new(code: &'a LdpcCode) -> Self {
        let e = code.num_edges();
        SumProductDecoder {
            code,
            v2c: vec![0.0; e],
            c2v: vec![0.0; e],
            scratch: vec![0.0; e],
            posterior: vec![0.0; code.n()],
        }
    }

    /// Flooding schedule with a syndrome check after every iteration. A
    /// positive LLR favours bit 0.
    pub fn decode(&mut self, llrs: &[f64], max_iter: usize) -> Result<DecodeResult, LdpcError> {
        let code = self.code;
        if llrs.len() != code.n() {
            return Err(LdpcError::LengthMismatch {
                expected: code.n(),
                found: llrs.len(),
            });
        }
        for (e, &v) in code.edge_var.iter().enumerate() {
            self.v2c[e] = llrs[v as usize];
        }
        let mut bits = vec![0u8; code.n()];
        let mut iterations = 0;
        let mut ok = false;
        while iterations < max_iter.max(1) {
            iterations += 1;
            self.check_update();
            self.variable_update(llrs);
            let mut decided = true;
            for (b, &p) in bits.iter_mut().zip(&self.posterior) {
                *b = (p < 0.0) as u8;
                decided &= p != 0.0;
            }
            if decided && code.is_codeword(&bits) {
                ok = true;
                break;
            }
        }
        Ok(DecodeResult {
            bits,
            iterations,
            syndrome_ok: ok,
        })
    }

    /// `c2v = 2 atanh(prod tanh(v2c / 2))` over the other edges of the check,
    /// using prefix and suffix products.
    fn check_update(&mut self) {
        let code = self.code;
        for r in 0..code.m() {
            let (lo, hi) = (code.check_start[r], code.check_start[r + 1]);
            let t = &mut self.scratch[lo..hi];
            for (x, &m) in t.iter_mut().zip(&self.v2c[lo..hi]) {
                *x = libm::tanh(0.5 * m.clamp(-LLR_CLAMP, LLR_CLAMP));
            }
            let out = &mut self.c2v[lo..hi];
            let mut prefix = 1.0;
            for (o, &x) in out.iter_mut().zip(t.iter()) {
                *o = prefix;
                prefix *= x;
            }
            let mut suffix = 1.0;
            for (o, &x) in out.iter_mut().zip(t.iter()).rev() {
                let p = *o * suffix;
                suffix *= x;
                *o = (2.0 * libm::atanh(p)).clamp(-LLR_CLAMP, LLR_CLAMP);
            }
        }
    }

    fn variable_update(&mut self, llrs: &[f64]) {
        for (v, edges) in self.code.var_edges.iter().enumerate() {
            let total = llrs[v] + edges.iter().map(|&e| self.c2v[e as usize]).sum::<f64>();
            self.posterior[v] = total;
            for &e in edges {
                self.v2c[e as usize] = total - self.c2v[e as usize];
            }
        }
    }
}

pub fn sum_product_decode(code: &LdpcCode, llrs: &[f64], max_iter: usize) -> Result<DecodeResult, LdpcError> {
    SumProductDecoder::new(code).decode(llrs, max_iter)
}

/// Systematic-free encoder `c = u G` where the rows of `G` span the code.
#[derive(Debug, Clone)]
pub struct Encoder {
    generator: BinaryMatrix,
}

impl Encoder {
    pub fn new(code: &LdpcCode) -> Result<Self, LdpcError> {
        let generator = code.h().null_space().ok_or(LdpcError::TrivialCode)?;
        Ok(Encoder { generator })
    }

    pub fn generator(&self) -> &BinaryMatrix {
        &self.generator
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>, LdpcError> {
        let (k, n) = (self.generator.rows(), self.generator.cols());
        if message.len() != k {
            return Err(LdpcError::LengthMismatch {
                expected: k,
                found: message.len(),
            });
        }
        let mut out = vec![0u8; n];
        for (i, _) in message.iter().enumerate().filter(|(_, &b)| b & 1 == 1) {
            for c in self.generator.row_support(i) {
                out[c] ^= 1;
            }
        }
        Ok(out)
    }
}

/// Output of [`random_regular_h`].
#[derive(Debug, Clone)]
pub struct RandomCode {
    pub code: LdpcCode,
    /// Some pair of columns still shares two rows.
    pub four_cycle_warning: bool,
    /// Band permutations drawn in total.
    pub permutations_drawn: usize,
}

/// Permutations drawn per band before accepting 4-cycles.
pub const BAND_RETRIES: usize = 50;
/// Repair swaps attempted per permutation.
pub const REPAIR_STEPS: usize = 20_000;

/// Gallager construction: band 0 gives row `r` the columns
/// `r w_row .. (r+1) w_row`; each further band is a seeded column permutation
/// of band 0. Rows of a new band that meet an earlier row twice are repaired
/// by column swaps within the band, and the permutation is redrawn when
/// repair stalls.
pub fn random_regular_h(
    m: usize,
    n: usize,
    w_col: usize,
    w_row: usize,
    seed: u64,
) -> Result<RandomCode, LdpcError> {
    let infeasible = LdpcError::InfeasibleWeights { m, n, w_col, w_row };
    if m == 0 || n == 0 || w_col == 0 || w_row == 0 || m * w_row != n * w_col || m % w_col != 0 {
        return Err(infeasible);
    }
    let band = m / w_col;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // row_of[b][c]: row of column c inside band b
    let mut row_of: Vec<Vec<usize>> = vec![(0..n).map(|c| c / w_row).collect()];
    let mut drawn = 0;
    let mut warning = false;
    for _ in 1..w_col {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for _ in 0..BAND_RETRIES {
            drawn += 1;
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut rows = vec![0usize; n];
            for (pos, &c) in perm.iter().enumerate() {
                rows[c] = pos / w_row;
            }
            let conflicts = repair_band(&row_of, &mut rows, band, &mut rng);
            if best.as_ref().is_none_or(|(b, _)| conflicts < *b) {
                best = Some((conflicts, rows));
            }
            if conflicts == 0 {
                break;
            }
        }
        let (conflicts, rows) = best.expect("at least one draw");
        warning |= conflicts > 0;
        row_of.push(rows);
    }
    let mut h = BinaryMatrix::zeros(m, n);
    for (b, rows) in row_of.iter().enumerate() {
        for (c, &r) in rows.iter().enumerate() {
            h.set(b * band + r, c, true);
        }
    }
    Ok(RandomCode {
        code: LdpcCode::new(h),
        four_cycle_warning: warning,
        permutations_drawn: drawn,
    })
}

/// Local search over swaps of two columns in different rows of the new band,
/// minimizing the excess overlap between new rows and earlier rows. Returns
/// the number of remaining excess incidences.
fn repair_band(prev: &[Vec<usize>], rows: &mut [usize], band: usize, rng: &mut ChaCha8Rng) -> usize {
    let n = rows.len();
    let old = prev.len() * band;
    // overlap[new_row * old + old_row]
    let mut overlap = vec![0u32; band * old];
    let old_rows = |c: usize| prev.iter().enumerate().map(move |(b, r)| b * band + r[c]);
    for c in 0..n {
        for o in old_rows(c) {
            overlap[rows[c] * old + o] += 1;
        }
    }
    let excess = |x: u32| x.saturating_sub(1) as usize;
    let mut total: usize = overlap.iter().map(|&x| excess(x)).sum();
    let column_bad = |overlap: &[u32], rows: &[usize], c: usize| old_rows(c).any(|o| overlap[rows[c] * old + o] > 1);
    let mut steps = 0;
    while total > 0 && steps < REPAIR_STEPS {
        steps += 1;
        let a = loop {
            let c = rng.random_range(0..n);
            if column_bad(&overlap, rows, c) {
                break c;
            }
        };
        let b = rng.random_range(0..n);
        let (ra, rb) = (rows[a], rows[b]);
        if ra == rb {
            continue;
        }
        let delta = shift(&mut overlap, old, old_rows(a), ra, rb) + shift(&mut overlap, old, old_rows(b), rb, ra);
        if delta <= 0 {
            rows[a] = rb;
            rows[b] = ra;
            total = (total as isize + delta) as usize;
        } else {
            shift(&mut overlap, old, old_rows(b), ra, rb);
            shift(&mut overlap, old, old_rows(a), rb, ra);
        }
    }
    total
}

/// Moves one column's incidences from new row `from` to `to` and returns
/// the change in excess overlap.
fn shift(overlap: &mut [u32], old: usize, olds: impl Iterator<Item = usize>, from: usize, to: usize) -> isize {
    let excess = |x: u32| x.saturating_sub(1) as isize;
    let mut delta = 0;
    for o in olds {
        let (i, j) = (from * old + o, to * old + o);
        let before = excess(overlap[i]) + excess(overlap[j]);
        overlap[i] -= 1;
        overlap[j] += 1;
        delta += excess(overlap[i]) + excess(overlap[j]) - before;
    }
    delta
}

/// Whether two columns of `h` share two or more rows.
pub fn has_four_cycle(h: &BinaryMatrix) -> bool {
    let t = h.transpose();
    (0..t.rows()).any(|a| (a + 1..t.rows()).any(|b| t.row_overlap(a, b) >= 2))
}

/// Bit `i` is the `i`-th output of a uniform draw; used by tests and
/// callers that need random messages.
pub fn random_bits<R: Rng>(rng: &mut R, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random::<bool>() as u8).collect()
}
