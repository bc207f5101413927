//! Tanner minimum-distance bounds, Tanner-graph girth, and 6-cycle counts.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::analysis::{PointGraph, SrgSpectrum, SrpgParams};
use crate::constructions::IncidenceStructure;
use crate::gf2::BinaryMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricsError {
    /// The bounds need `a1 > a2`.
    EigenvaluesNotDecreasing { a1: i64, a2: i64 },
    /// A disconnected point graph gives `a1` multiplicity above one.
    Disconnected,
    ZeroWeight,
    /// `n s (s+1) (lambda - s + 1)` is negative or not divisible by 6.
    CycleFormula,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::EigenvaluesNotDecreasing { a1, a2 } => {
                write!(f, "largest eigenvalue {} does not exceed second eigenvalue {}", a1, a2)
            }
            MetricsError::Disconnected => {
                write!(f, "point graph is disconnected; largest eigenvalue is not simple")
            }
            MetricsError::ZeroWeight => write!(f, "row and column weights must be positive"),
            MetricsError::CycleFormula => write!(f, "6-cycle formula does not give a nonnegative integer"),
        }
    }
}

impl core::error::Error for MetricsError {}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Exact rational in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    /// Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Ratio {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn integer(n: i128) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn ceil(&self) -> i128 {
        let q = self.num.div_euclid(self.den);
        if self.num.rem_euclid(self.den) == 0 {
            q
        } else {
            q + 1
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceBounds {
    /// `n (2 w_col - a2) / (a1 - a2)`.
    pub bit_oriented: Ratio,
    /// `2 n (2 w_col + w_row - 2 - a2) / (w_row (a1 - a2))`.
    pub parity_oriented: Ratio,
    /// `max(ceil(bit), ceil(parity), 1)`.
    pub effective: u64,
    /// Both raw bounds are at most 1.
    pub vacuous: bool,
}

impl DistanceBounds {
    fn from_raw(bit: Ratio, parity: Ratio) -> Self {
        let one = Ratio::integer(1);
        DistanceBounds {
            bit_oriented: bit,
            parity_oriented: parity,
            effective: bit.ceil().max(parity.ceil()).max(1) as u64,
            vacuous: bit <= one && parity <= one,
        }
    }
}

/// Bit- and parity-oriented bounds for a `(w_col, w_row)`-regular code of
/// length `n` whose `H H^T` has largest eigenvalue `a1` and second largest
/// distinct eigenvalue `a2`.
pub fn tanner_bounds(n: u64, w_col: u64, w_row: u64, a1: i64, a2: i64) -> Result<DistanceBounds, MetricsError> {
    if a1 <= a2 {
        return Err(MetricsError::EigenvaluesNotDecreasing { a1, a2 });
    }
    if w_col == 0 || w_row == 0 {
        return Err(MetricsError::ZeroWeight);
    }
    let (n, wc, wr, a1, a2) = (n as i128, w_col as i128, w_row as i128, a1 as i128, a2 as i128);
    let gap = a1 - a2;
    let bit = Ratio::new(n * (2 * wc - a2), gap);
    let parity = Ratio::new(2 * n * (2 * wc + wr - 2 - a2), wr * gap);
    Ok(DistanceBounds::from_raw(bit, parity))
}

/// The same bounds written directly in `s, t, lambda, mu` and `sqrt(Delta)`,
/// with `n = v (t+1) / (s+1)`.
pub fn srpg_bounds(params: &SrpgParams, spec: &SrgSpectrum) -> Result<DistanceBounds, MetricsError> {
    let (s, t, l, m, v) = (
        params.s as i128,
        params.t as i128,
        params.lambda as i128,
        params.mu as i128,
        params.v as i128,
    );
    let r = spec.sqrt_delta as i128;
    let n = Ratio::new(v * (t + 1), s + 1);
    let den = 2 * s * (t + 1) - l + m - r;
    if den <= 0 {
        return Err(MetricsError::EigenvaluesNotDecreasing {
            a1: spec.theta0,
            a2: spec.theta1,
        });
    }
    let bit = Ratio::new(n.numer() * (4 * s - 2 * t + 2 - l + m - r), n.denom() * den);
    let parity = Ratio::new(2 * n.numer() * (4 * s - l + m - r), n.denom() * (t + 1) * den);
    Ok(DistanceBounds::from_raw(bit, parity))
}

/// Bounds for the code with parity-check matrix `M`, refused when the point
/// graph is disconnected.
pub fn incidence_bounds(
    graph: &PointGraph,
    params: &SrpgParams,
    spec: &SrgSpectrum,
) -> Result<DistanceBounds, MetricsError> {
    if !graph.is_connected() {
        return Err(MetricsError::Disconnected);
    }
    tanner_bounds(params.n, params.s + 1, params.t + 1, spec.theta0, spec.theta1)
}

/// Length of the shortest cycle, or `Infinite` for a forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{}", g),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

/// Girth of the Tanner graph of `h`: breadth-first search from every
/// variable node, since every cycle passes through one.
pub fn tanner_girth(h: &BinaryMatrix) -> Girth {
    let (m, n) = (h.rows(), h.cols());
    // variables are nodes 0..n, checks are n..n+m
    let mut adj: Vec<Vec<u32>> = Vec::with_capacity(n + m);
    for c in h.col_supports() {
        adj.push(c.into_iter().map(|r| (n + r) as u32).collect());
    }
    for r in 0..m {
        adj.push(h.row_support(r).into_iter().map(|c| c as u32).collect());
    }
    let total = n + m;
    let mut best = u32::MAX;
    let mut dist = vec![u32::MAX; total];
    let mut parent = vec![u32::MAX; total];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for src in 0..n {
        for &x in &touched {
            dist[x as usize] = u32::MAX;
            parent[x as usize] = u32::MAX;
        }
        touched.clear();
        queue.clear();
        dist[src] = 0;
        touched.push(src as u32);
        queue.push_back(src as u32);
        'bfs: while let Some(x) = queue.pop_front() {
            let dx = dist[x as usize];
            if 2 * dx + 1 >= best {
                break;
            }
            for &y in &adj[x as usize] {
                if y == parent[x as usize] {
                    continue;
                }
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = dx + 1;
                    parent[y as usize] = x;
                    touched.push(y);
                    queue.push_back(y);
                } else {
                    best = best.min(dx + dist[y as usize] + 1);
                    if best == 4 {
                        break 'bfs;
                    }
                }
            }
        }
        if best == 4 {
            break;
        }
    }
    if best == u32::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleReport {
    pub girth: Girth,
    /// `n s (s+1) (lambda - s + 1) / 6`.
    pub formula: u64,
    pub enumerated: u64,
}

/// `n s (s+1) (lambda - s + 1) / 6`.
pub fn six_cycle_formula(params: &SrpgParams) -> Result<u64, MetricsError> {
    let (n, s, l) = (params.n as i128, params.s as i128, params.lambda as i128);
    let num = n * s * (s + 1) * (l - s + 1);
    if num < 0 || num % 6 != 0 {
        return Err(MetricsError::CycleFormula);
    }
    Ok((num / 6) as u64)
}

/// Counts 6-cycles of the Tanner graph of a structure in which two points
/// share at most one block. Each cycle is three pairwise joined points not
/// on a common block, counted once via its two smallest point indices.
pub fn enumerate_six_cycles(ic: &IncidenceStructure, graph: &PointGraph) -> u64 {
    let m = &ic.matrix;
    let mut total = 0u64;
    for (b, pts) in m.col_supports().iter().enumerate() {
        for (i, &p) in pts.iter().enumerate() {
            for &q in &pts[i + 1..] {
                total += (q + 1..m.rows())
                    .filter(|&r| !m.get(r, b) && graph.adjacent(p, r) && graph.adjacent(q, r))
                    .count() as u64;
            }
        }
    }
    total
}

pub fn six_cycles(ic: &IncidenceStructure, graph: &PointGraph, params: &SrpgParams) -> Result<CycleReport, MetricsError> {
    Ok(CycleReport {
        girth: tanner_girth(&ic.matrix),
        formula: six_cycle_formula(params)?,
        enumerated: enumerate_six_cycles(ic, graph),
    })
}
