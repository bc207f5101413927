//! Generalized partial geometry axioms, strong regularity of the point graph,
//! the closed-form spectrum, and the per-pair alpha profiles.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::constructions::IncidenceStructure;
use crate::gf2::BinaryMatrix;

/// First violated axiom, with the smallest-index witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    Empty,
    /// Axiom (i): two points share more than one block.
    PairInTwoBlocks { points: (usize, usize), blocks: (usize, usize) },
    /// Axiom (ii): block size differs from block 0.
    BlockSize { block: usize, expected: usize, found: usize },
    /// Axiom (iii): point degree differs from point 0.
    PointDegree { point: usize, expected: usize, found: usize },
    /// Blocks of size zero leave `s` undefined.
    EmptyBlock,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Empty => write!(f, "structure has no points or no blocks"),
            AxiomViolation::PairInTwoBlocks { points, blocks } => write!(
                f,
                "axiom (i): points {} and {} share blocks {} and {}",
                points.0, points.1, blocks.0, blocks.1
            ),
            AxiomViolation::BlockSize { block, expected, found } => write!(
                f,
                "axiom (ii): block {} has {} points, expected {}",
                block, found, expected
            ),
            AxiomViolation::PointDegree { point, expected, found } => write!(
                f,
                "axiom (iii): point {} lies on {} blocks, expected {}",
                point, found, expected
            ),
            AxiomViolation::EmptyBlock => write!(f, "axiom (ii): blocks are empty"),
        }
    }
}

impl core::error::Error for AxiomViolation {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SrgError {
    Axiom(AxiomViolation),
    NotRegular { vertex: usize, expected: usize, found: usize },
    /// The point graph has no edges or is complete.
    Degenerate { edgeless: bool },
    LambdaVaries { first: (usize, usize), witness: (usize, usize), expected: u64, found: u64 },
    MuVaries { first: (usize, usize), witness: (usize, usize), expected: u64, found: u64 },
}

impl fmt::Display for SrgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SrgError::Axiom(a) => a.fmt(f),
            SrgError::NotRegular { vertex, expected, found } => write!(
                f,
                "point graph is not regular: vertex {} has degree {}, expected {}",
                vertex, found, expected
            ),
            SrgError::Degenerate { edgeless: true } => write!(f, "point graph has no edges"),
            SrgError::Degenerate { edgeless: false } => write!(f, "point graph is complete"),
            SrgError::LambdaVaries { first, witness, expected, found } => write!(
                f,
                "adjacent pairs {:?} and {:?} have {} and {} common neighbours",
                first, witness, expected, found
            ),
            SrgError::MuVaries { first, witness, expected, found } => write!(
                f,
                "non-adjacent pairs {:?} and {:?} have {} and {} common neighbours",
                first, witness, expected, found
            ),
        }
    }
}

impl core::error::Error for SrgError {}

impl From<AxiomViolation> for SrgError {
    fn from(a: AxiomViolation) -> Self {
        SrgError::Axiom(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumError {
    MuZero,
    /// Conference-graph case: the eigenvalues are irrational.
    NonSquareDiscriminant(i64),
    NonIntegralMultiplicity,
}

impl fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumError::MuZero => write!(f, "mu = 0; the point graph is disconnected"),
            SpectrumError::NonSquareDiscriminant(d) => {
                write!(f, "discriminant {} is not a perfect square", d)
            }
            SpectrumError::NonIntegralMultiplicity => write!(f, "eigenvalue multiplicities are not integers"),
        }
    }
}

impl core::error::Error for SpectrumError {}

/// Parameters read off the incidence structure by [`check_gpg_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GpgParams {
    pub v: u64,
    pub n: u64,
    pub s: u64,
    pub t: u64,
    /// Realized alpha values, ascending. Zero is an admissible value.
    pub alphas: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SrgParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

/// Combined geometry and point-graph parameters. Fields are public and
/// unchecked; [`feasibility_check`] reports which relations hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrpgParams {
    pub s: u64,
    pub t: u64,
    pub alphas: Vec<u64>,
    pub lambda: u64,
    pub mu: u64,
    pub k: u64,
    pub v: u64,
    pub n: u64,
}

impl SrpgParams {
    pub fn new(gpg: &GpgParams, srg: &SrgParams) -> Self {
        SrpgParams {
            s: gpg.s,
            t: gpg.t,
            alphas: gpg.alphas.clone(),
            lambda: srg.lambda,
            mu: srg.mu,
            k: srg.k,
            v: srg.v,
            n: gpg.n,
        }
    }

    pub fn srg(&self) -> SrgParams {
        SrgParams {
            v: self.v,
            k: self.k,
            lambda: self.lambda,
            mu: self.mu,
        }
    }
}

/// Eigen-data of a strongly regular graph and of `M M^T = A + (t+1) I`.
/// `u1 > u2`; `f1` and `f2` are their multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SrgSpectrum {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
    pub delta: i64,
    pub sqrt_delta: i64,
    pub u1: i64,
    pub u2: i64,
    pub f1: u64,
    pub f2: u64,
    pub theta0: i64,
    pub theta1: i64,
    pub theta2: i64,
}

/// Point graph of an incidence structure: points adjacent iff they share a
/// block.
#[derive(Debug, Clone)]
pub struct PointGraph {
    adjacency: BinaryMatrix,
}

impl PointGraph {
    /// Builds the point graph from the off-diagonal of `M M^T`, rejecting
    /// any pair of points on two common blocks.
    pub fn new(ic: &IncidenceStructure) -> Result<Self, AxiomViolation> {
        let m = &ic.matrix;
        let v = m.rows();
        let mut adjacency = BinaryMatrix::zeros(v, v);
        for i in 0..v {
            for j in i + 1..v {
                match m.row_overlap(i, j) {
                    0 => {}
                    1 => {
                        adjacency.set(i, j, true);
                        adjacency.set(j, i, true);
                    }
                    _ => {
                        let mut common = (0..m.cols()).filter(|&c| m.get(i, c) && m.get(j, c));
                        let b0 = common.next().unwrap();
                        let b1 = common.next().unwrap();
                        return Err(AxiomViolation::PairInTwoBlocks {
                            points: (i, j),
                            blocks: (b0, b1),
                        });
                    }
                }
            }
        }
        Ok(PointGraph { adjacency })
    }

    pub fn adjacency(&self) -> &BinaryMatrix {
        &self.adjacency
    }

    pub fn order(&self) -> usize {
        self.adjacency.rows()
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency.get(a, b)
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adjacency.row_weight(a)
    }

    pub fn common_neighbours(&self, a: usize, b: usize) -> usize {
        self.adjacency.row_overlap(a, b)
    }

    pub fn is_connected(&self) -> bool {
        let v = self.order();
        let mut seen = vec![false; v];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for y in self.adjacency.row_support(x) {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == v
    }
}

/// Checks axioms (i)-(iii) and collects the realized alpha values, i.e. the
/// numbers of points of a block joined to a point off that block.
pub fn check_gpg_axioms(ic: &IncidenceStructure) -> Result<GpgParams, AxiomViolation> {
    let m = &ic.matrix;
    if m.rows() == 0 || m.cols() == 0 {
        return Err(AxiomViolation::Empty);
    }
    let graph = PointGraph::new(ic)?;
    let col_w = m.col_weights();
    if let Some(b) = col_w.iter().position(|&w| w != col_w[0]) {
        return Err(AxiomViolation::BlockSize {
            block: b,
            expected: col_w[0],
            found: col_w[b],
        });
    }
    if col_w[0] == 0 {
        return Err(AxiomViolation::EmptyBlock);
    }
    let row_w = m.row_weights();
    if let Some(p) = row_w.iter().position(|&w| w != row_w[0]) {
        return Err(AxiomViolation::PointDegree {
            point: p,
            expected: row_w[0],
            found: row_w[p],
        });
    }
    let alphas: BTreeSet<u64> = alpha_table(ic, &graph)
        .into_iter()
        .filter(|&a| a != u16::MAX)
        .map(u64::from)
        .collect();
    Ok(GpgParams {
        v: m.rows() as u64,
        n: m.cols() as u64,
        s: col_w[0] as u64 - 1,
        t: row_w[0] as u64 - 1,
        alphas: alphas.into_iter().collect(),
    })
}

/// `table[p * n + b]` = number of points of block `b` joined to point `p`,
/// or `u16::MAX` when `p` lies on `b`.
fn alpha_table(ic: &IncidenceStructure, graph: &PointGraph) -> Vec<u16> {
    let m = &ic.matrix;
    let (v, n) = (m.rows(), m.cols());
    let supports = m.col_supports();
    let mut table = vec![0u16; v * n];
    for p in 0..v {
        let row = &mut table[p * n..(p + 1) * n];
        for (b, pts) in supports.iter().enumerate() {
            row[b] = if m.get(p, b) {
                u16::MAX
            } else {
                pts.iter().filter(|&&x| graph.adjacent(p, x)).count() as u16
            };
        }
    }
    table
}

/// Verifies `A^2 = k I + lambda A + mu (J - I - A)` entrywise on the point
/// graph and returns `(v, k, lambda, mu)`.
pub fn check_strongly_regular(ic: &IncidenceStructure) -> Result<SrgParams, SrgError> {
    let graph = PointGraph::new(ic)?;
    strongly_regular_parameters(&graph)
}

pub fn strongly_regular_parameters(graph: &PointGraph) -> Result<SrgParams, SrgError> {
    let v = graph.order();
    let k = graph.degree(0);
    if let Some(x) = (0..v).find(|&x| graph.degree(x) != k) {
        return Err(SrgError::NotRegular {
            vertex: x,
            expected: k,
            found: graph.degree(x),
        });
    }
    if k == 0 {
        return Err(SrgError::Degenerate { edgeless: true });
    }
    if k == v - 1 {
        return Err(SrgError::Degenerate { edgeless: false });
    }
    let mut lambda: Option<((usize, usize), u64)> = None;
    let mut mu: Option<((usize, usize), u64)> = None;
    for i in 0..v {
        for j in i + 1..v {
            let c = graph.common_neighbours(i, j) as u64;
            let slot = if graph.adjacent(i, j) { &mut lambda } else { &mut mu };
            match *slot {
                None => *slot = Some(((i, j), c)),
                Some((first, expected)) if expected != c => {
                    return Err(if graph.adjacent(i, j) {
                        SrgError::LambdaVaries { first, witness: (i, j), expected, found: c }
                    } else {
                        SrgError::MuVaries { first, witness: (i, j), expected, found: c }
                    });
                }
                _ => {}
            }
        }
    }
    Ok(SrgParams {
        v: v as u64,
        k: k as u64,
        lambda: lambda.map_or(0, |x| x.1),
        mu: mu.map_or(0, |x| x.1),
    })
}

fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let mut r = libm::sqrt(n as f64) as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Eigenvalues `k, u1, u2`, multiplicities `1, f1, f2`, and the shifted
/// eigenvalues of `M M^T`.
pub fn spectrum(params: &SrpgParams) -> Result<SrgSpectrum, SpectrumError> {
    if params.mu == 0 {
        return Err(SpectrumError::MuZero);
    }
    let (v, k, l, m) = (
        params.v as i64,
        params.k as i64,
        params.lambda as i64,
        params.mu as i64,
    );
    let delta = (l - m) * (l - m) + 4 * (k - m);
    let sd = isqrt(delta).ok_or(SpectrumError::NonSquareDiscriminant(delta))?;
    if sd == 0 {
        return Err(SpectrumError::NonIntegralMultiplicity);
    }
    let u1 = (l - m + sd) / 2;
    let u2 = (l - m - sd) / 2;
    let num = (v - 1) * (m - l) - 2 * k;
    if num % sd != 0 {
        return Err(SpectrumError::NonIntegralMultiplicity);
    }
    let twice_f1 = (v - 1) + num / sd;
    let twice_f2 = (v - 1) - num / sd;
    if twice_f1 % 2 != 0 || twice_f1 < 0 || twice_f2 < 0 {
        return Err(SpectrumError::NonIntegralMultiplicity);
    }
    let c = params.t as i64 + 1;
    Ok(SrgSpectrum {
        v: params.v,
        k: params.k,
        lambda: params.lambda,
        mu: params.mu,
        delta,
        sqrt_delta: sd,
        u1,
        u2,
        f1: (twice_f1 / 2) as u64,
        f2: (twice_f2 / 2) as u64,
        theta0: (params.s as i64 + 1) * c,
        theta1: u1 + c,
        theta2: u2 + c,
    })
}

/// Pass/fail for each necessary condition on the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibilityReport {
    /// `k = s (t + 1)`.
    pub degree_matches_geometry: bool,
    /// `v = k (k - lambda - 1) / mu + k + 1`.
    pub order_formula: bool,
    /// `mu | k (k - lambda - 1)`.
    pub mu_divides: bool,
    /// `(s + 1) | v (t + 1)`.
    pub block_size_divides: bool,
    pub discriminant_square: bool,
    /// `f1, f2` are nonnegative integers.
    pub multiplicities_integral: bool,
}

impl FeasibilityReport {
    pub fn all_pass(&self) -> bool {
        self.degree_matches_geometry
            && self.order_formula
            && self.mu_divides
            && self.block_size_divides
            && self.discriminant_square
            && self.multiplicities_integral
    }
}

pub fn feasibility_check(params: &SrpgParams) -> FeasibilityReport {
    let (s, t, v, k, l, m) = (params.s, params.t, params.v, params.k, params.lambda, params.mu);
    let inner = k as i64 * (k as i64 - l as i64 - 1);
    let mu_divides = m > 0 && inner % m as i64 == 0;
    let order_formula = mu_divides && inner / m as i64 + k as i64 + 1 == v as i64;
    let spec = spectrum(params);
    FeasibilityReport {
        degree_matches_geometry: k == s * (t + 1),
        order_formula,
        mu_divides,
        block_size_divides: (v * (t + 1)) % (s + 1) == 0,
        discriminant_square: !matches!(
            spec,
            Err(SpectrumError::NonSquareDiscriminant(_)) | Err(SpectrumError::MuZero)
        ),
        multiplicities_integral: spec.is_ok(),
    }
}

/// Counts of blocks by alpha value for one class of point pairs, or a
/// witness that the counts depend on the pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairProfile {
    /// `counts[i]` blocks are `alphas[i]`-blocks, the same for every pair.
    Constant(Vec<u64>),
    Varies { first: (usize, usize), witness: (usize, usize) },
    /// No pair of this class exists.
    Absent,
}

impl PairProfile {
    pub fn counts(&self) -> Option<&[u64]> {
        match self {
            PairProfile::Constant(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaProfile {
    pub alphas: Vec<u64>,
    /// `p_i` over adjacent pairs.
    pub adjacent: PairProfile,
    /// `l_i` over non-adjacent pairs.
    pub non_adjacent: PairProfile,
}

impl AlphaProfile {
    /// `sum (alpha_i - 1) p_i + (s - 1)`.
    pub fn lambda_from_profile(&self, s: u64) -> Option<i64> {
        let p = self.adjacent.counts()?;
        let sum: i64 = self
            .alphas
            .iter()
            .zip(p)
            .map(|(&a, &c)| (a as i64 - 1) * c as i64)
            .sum();
        Some(sum + s as i64 - 1)
    }

    /// `sum alpha_i l_i`.
    pub fn mu_from_profile(&self) -> Option<u64> {
        let l = self.non_adjacent.counts()?;
        Some(self.alphas.iter().zip(l).map(|(&a, &c)| a * c).sum())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileError {
    Axiom(AxiomViolation),
    /// The per-pair identity `lambda = sum (alpha-1) p + s - 1` (adjacent) or
    /// `mu = sum alpha l` (non-adjacent) fails for this pair.
    IdentityFails { pair: (usize, usize), adjacent: bool, expected: i64, found: i64 },
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileError::Axiom(a) => a.fmt(f),
            ProfileError::IdentityFails { pair, adjacent, expected, found } => write!(
                f,
                "{} pair {:?}: profile gives {}, expected {}",
                if *adjacent { "adjacent" } else { "non-adjacent" },
                pair,
                found,
                expected
            ),
        }
    }
}

impl core::error::Error for ProfileError {}

/// For every ordered pair `(P, Q)`, counts the blocks on `P` (other than the
/// one through `Q`) by their alpha value with respect to `Q`.
pub fn alpha_profiles(ic: &IncidenceStructure, params: &SrpgParams) -> Result<AlphaProfile, ProfileError> {
    let graph = PointGraph::new(ic).map_err(ProfileError::Axiom)?;
    let table = alpha_table(ic, &graph);
    let m = &ic.matrix;
    let (v, n) = (m.rows(), m.cols());
    let r = params.alphas.len();
    let slot = |a: u16| params.alphas.iter().position(|&x| x == a as u64);
    let blocks_on: Vec<Vec<usize>> = (0..v).map(|p| m.row_support(p)).collect();

    let mut adjacent = ClassTracker::default();
    let mut non_adjacent = ClassTracker::default();
    let mut counts = vec![0u64; r];
    for p in 0..v {
        for q in 0..v {
            if p == q {
                continue;
            }
            counts.iter_mut().for_each(|c| *c = 0);
            let mut weighted: i64 = 0;
            for &b in &blocks_on[p] {
                let a = table[q * n + b];
                if a == u16::MAX {
                    continue;
                }
                // the realized set was collected from this same table
                counts[slot(a).expect("alpha in realized set")] += 1;
                weighted += a as i64;
            }
            let adj = graph.adjacent(p, q);
            let (expected, found) = if adj {
                let blocks = counts.iter().sum::<u64>() as i64;
                (params.lambda as i64, weighted - blocks + params.s as i64 - 1)
            } else {
                (params.mu as i64, weighted)
            };
            if expected != found {
                return Err(ProfileError::IdentityFails {
                    pair: (p, q),
                    adjacent: adj,
                    expected,
                    found,
                });
            }
            if adj {
                adjacent.observe((p, q), &counts);
            } else {
                non_adjacent.observe((p, q), &counts);
            }
        }
    }
    Ok(AlphaProfile {
        alphas: params.alphas.clone(),
        adjacent: adjacent.finish(),
        non_adjacent: non_adjacent.finish(),
    })
}

#[derive(Default)]
struct ClassTracker {
    first: Option<((usize, usize), Vec<u64>)>,
    witness: Option<(usize, usize)>,
}

impl ClassTracker {
    fn observe(&mut self, pair: (usize, usize), counts: &[u64]) {
        match &self.first {
            None => self.first = Some((pair, counts.to_vec())),
            Some((_, c)) if self.witness.is_none() && c != counts => self.witness = Some(pair),
            _ => {}
        }
    }

    fn finish(self) -> PairProfile {
        match (self.first, self.witness) {
            (None, _) => PairProfile::Absent,
            (Some((first, _)), Some(witness)) => PairProfile::Varies { first, witness },
            (Some((_, c)), None) => PairProfile::Constant(c),
        }
    }
}
