//! The two incidence structures built from quadrics: points of type I
//! against conics through the three coordinate points of PG(2,q), and lines
//! skew to `(I_2 0)` against hyperbolic quadrics of PG(3,q) through it.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::analysis::SrpgParams;
use crate::field::{FieldElement, FieldSpec};
use crate::geometry::{normalize_point, LineMatrix, ProjectivePoint, Quadric};
use crate::gf2::BinaryMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionError {
    /// The field is too small for the construction (q < 3).
    FieldTooSmall,
    SingularB,
    AsymmetricC,
}

impl fmt::Display for ConstructionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionError::FieldTooSmall => write!(f, "field order must be at least 3"),
            ConstructionError::SingularB => write!(f, "block label has a singular B"),
            ConstructionError::AsymmetricC => write!(f, "block label has a non-symmetric C"),
        }
    }
}

impl core::error::Error for ConstructionError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Conic,
    Hyperbolic,
    /// Loaded from a matrix with no geometric labels.
    External,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Conic => "conic",
            Family::Hyperbolic => "hyperbolic",
            Family::External => "external",
        })
    }
}

/// The conic with matrix `[[0,a,b],[a,0,1],[b,1,0]]`, a and b nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConicLabel {
    pub a: FieldElement,
    pub b: FieldElement,
}

impl ConicLabel {
    pub fn quadric(&self, gf: &FieldSpec) -> Quadric {
        let (z, o) = (gf.zero(), gf.one());
        let (a, b) = (self.a, self.b);
        Quadric::new(gf, 2, &[z, a, b, a, z, o, b, o, z]).expect("conic matrix is symmetric")
    }
}

/// The hyperbolic quadric `[[0, B], [B^T, C]]` through `(I_2 0)`, scaled so
/// the first nonzero entry of `B` (row-major) is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperbolicLabel {
    b: [FieldElement; 4],
    c: [FieldElement; 4],
}

fn det2(gf: &FieldSpec, m: &[FieldElement; 4]) -> FieldElement {
    gf.sub(gf.mul(m[0], m[3]), gf.mul(m[1], m[2]))
}

impl HyperbolicLabel {
    pub fn new(gf: &FieldSpec, b: [FieldElement; 4], c: [FieldElement; 4]) -> Result<Self, ConstructionError> {
        if det2(gf, &b).is_zero() {
            return Err(ConstructionError::SingularB);
        }
        if c[1] != c[2] {
            return Err(ConstructionError::AsymmetricC);
        }
        let lead = b.iter().copied().find(|x| !x.is_zero()).expect("B is invertible");
        let s = gf.inv(lead).expect("nonzero");
        Ok(HyperbolicLabel {
            b: b.map(|x| gf.mul(x, s)),
            c: c.map(|x| gf.mul(x, s)),
        })
    }

    pub fn b(&self) -> &[FieldElement; 4] {
        &self.b
    }

    pub fn c(&self) -> &[FieldElement; 4] {
        &self.c
    }

    pub fn quadric(&self, gf: &FieldSpec) -> Quadric {
        let z = gf.zero();
        let (b, c) = (&self.b, &self.c);
        let m = [
            z, z, b[0], b[1],
            z, z, b[2], b[3],
            b[0], b[2], c[0], c[1],
            b[1], b[3], c[2], c[3],
        ];
        Quadric::new(gf, 3, &m).expect("symmetric by construction")
    }

    /// Recovers the label of a quadric through `(I_2 0)`, if it is one.
    pub fn from_quadric(gf: &FieldSpec, h: &Quadric) -> Option<Self> {
        if h.dimension() != 3 {
            return None;
        }
        let e = |i, j| h.entry(i, j);
        if !(e(0, 0).is_zero() && e(0, 1).is_zero() && e(1, 1).is_zero()) {
            return None;
        }
        Self::new(
            gf,
            [e(0, 2), e(0, 3), e(1, 2), e(1, 3)],
            [e(2, 2), e(2, 3), e(3, 2), e(3, 3)],
        )
        .ok()
    }

    /// `B^T N^T + N B + C = 0`, i.e. the line `(N I_2)` lies on the quadric.
    #[inline]
    pub fn contains_block_line(&self, gf: &FieldSpec, n: &[FieldElement; 4]) -> bool {
        let b = &self.b;
        // S = N B
        let s00 = gf.add(gf.mul(n[0], b[0]), gf.mul(n[1], b[2]));
        if !gf.add(gf.add(s00, s00), self.c[0]).is_zero() {
            return false;
        }
        let s11 = gf.add(gf.mul(n[2], b[1]), gf.mul(n[3], b[3]));
        if !gf.add(gf.add(s11, s11), self.c[3]).is_zero() {
            return false;
        }
        let s01 = gf.add(gf.mul(n[0], b[1]), gf.mul(n[1], b[3]));
        let s10 = gf.add(gf.mul(n[2], b[0]), gf.mul(n[3], b[2]));
        gf.add(gf.add(s01, s10), self.c[1]).is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointLabel {
    Plane(ProjectivePoint),
    /// The line `(N I_2)`; `n` is `N` row-major.
    Line { n: [FieldElement; 4], line: LineMatrix },
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockLabel {
    Conic(ConicLabel),
    Hyperbolic(HyperbolicLabel),
    Index(usize),
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, xs: &[FieldElement]| {
            f.write_str("(")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x.index())?;
            }
            f.write_str(")")
        };
        match self {
            PointLabel::Plane(p) => list(f, p.coords()),
            PointLabel::Line { n, .. } => {
                f.write_str("N")?;
                list(f, n)
            }
            PointLabel::Index(i) => write!(f, "{}", i),
        }
    }
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockLabel::Conic(c) => write!(f, "a={},b={}", c.a.index(), c.b.index()),
            BlockLabel::Hyperbolic(h) => {
                let b = h.b.map(|x| x.index());
                let c = h.c.map(|x| x.index());
                write!(f, "B={:?},C={:?}", b, c)
            }
            BlockLabel::Index(i) => write!(f, "{}", i),
        }
    }
}

/// Points, blocks and their `v x n` incidence matrix (rows = points).
#[derive(Debug, Clone)]
pub struct IncidenceStructure {
    pub family: Family,
    /// Field order the structure was built over, if any.
    pub order: Option<u32>,
    pub points: Vec<PointLabel>,
    pub blocks: Vec<BlockLabel>,
    pub matrix: BinaryMatrix,
    /// Verified parameters, filled in by [`IncidenceStructure::with_meta`].
    pub meta: Option<SrpgParams>,
}

impl IncidenceStructure {
    /// Wraps a bare incidence matrix with index labels.
    pub fn from_matrix(matrix: BinaryMatrix) -> Self {
        IncidenceStructure {
            family: Family::External,
            order: None,
            points: (0..matrix.rows()).map(PointLabel::Index).collect(),
            blocks: (0..matrix.cols()).map(BlockLabel::Index).collect(),
            matrix,
            meta: None,
        }
    }

    pub fn with_meta(mut self, meta: SrpgParams) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn num_points(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_blocks(&self) -> usize {
        self.matrix.cols()
    }

    /// No two points share a block, so the point graph has no edges.
    pub fn is_degenerate(&self) -> bool {
        self.matrix.col_weights().iter().all(|&w| w <= 1)
    }
}

/// Points `(1,x,y)`, x,y nonzero, against the conics through `e1, e2, e3`.
pub fn build_conic_structure(gf: &FieldSpec) -> Result<IncidenceStructure, ConstructionError> {
    if gf.order() < 3 {
        return Err(ConstructionError::FieldTooSmall);
    }
    let nz = gf.enumerate_elements(true);
    let mut points = Vec::with_capacity(nz.len() * nz.len());
    for &x in &nz {
        for &y in &nz {
            points.push(normalize_point(gf, &[gf.one(), x, y]).expect("nonzero"));
        }
    }
    let mut blocks = Vec::with_capacity(nz.len() * nz.len());
    for &a in &nz {
        for &b in &nz {
            blocks.push(ConicLabel { a, b });
        }
    }
    let mut matrix = BinaryMatrix::zeros(points.len(), blocks.len());
    for (j, conic) in blocks.iter().enumerate() {
        let quadric = conic.quadric(gf);
        for (i, p) in points.iter().enumerate() {
            if quadric.bilinear(gf, p.coords(), p.coords()).is_zero() {
                matrix.set(i, j, true);
            }
        }
    }
    Ok(IncidenceStructure {
        family: Family::Conic,
        order: Some(gf.order()),
        points: points.into_iter().map(PointLabel::Plane).collect(),
        blocks: blocks.into_iter().map(BlockLabel::Conic).collect(),
        matrix,
        meta: None,
    })
}

/// One canonical label per scalar class `(B, C) ~ (kB, kC)`, sorted.
pub fn block_label_dedup(
    gf: &FieldSpec,
    raw: &[([FieldElement; 4], [FieldElement; 4])],
) -> Result<Vec<HyperbolicLabel>, ConstructionError> {
    let mut set = BTreeSet::new();
    for &(b, c) in raw {
        set.insert(HyperbolicLabel::new(gf, b, c)?);
    }
    Ok(set.into_iter().collect())
}

/// All 2x2 matrices over the field, row-major, in lexicographic order.
pub fn all_2x2(gf: &FieldSpec) -> Vec<[FieldElement; 4]> {
    let els = gf.enumerate_elements(false);
    let mut out = Vec::with_capacity(els.len().pow(4));
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Every `(B, C)` with `B` invertible and `C` symmetric, before scalar dedup.
pub fn raw_hyperbolic_pairs(gf: &FieldSpec) -> Vec<([FieldElement; 4], [FieldElement; 4])> {
    let els = gf.enumerate_elements(false);
    let mut symmetric = Vec::with_capacity(els.len().pow(3));
    for &c00 in &els {
        for &c01 in &els {
            for &c11 in &els {
                symmetric.push([c00, c01, c01, c11]);
            }
        }
    }
    let mut out = Vec::new();
    for b in all_2x2(gf) {
        if det2(gf, &b).is_zero() {
            continue;
        }
        for &c in &symmetric {
            out.push((b, c));
        }
    }
    out
}

/// Lines `(N I_2)` against hyperbolic quadrics containing `(I_2 0)`.
pub fn build_hyperbolic_structure(gf: &FieldSpec) -> Result<IncidenceStructure, ConstructionError> {
    if gf.order() < 3 {
        return Err(ConstructionError::FieldTooSmall);
    }
    let ns = all_2x2(gf);
    let blocks = block_label_dedup(gf, &raw_hyperbolic_pairs(gf))?;
    let mut matrix = BinaryMatrix::zeros(ns.len(), blocks.len());
    for (j, h) in blocks.iter().enumerate() {
        for (i, n) in ns.iter().enumerate() {
            if h.contains_block_line(gf, n) {
                matrix.set(i, j, true);
            }
        }
    }
    Ok(IncidenceStructure {
        family: Family::Hyperbolic,
        order: Some(gf.order()),
        points: ns
            .into_iter()
            .map(|n| PointLabel::Line {
                n,
                line: LineMatrix::from_block(gf, n),
            })
            .collect(),
        blocks: blocks.into_iter().map(BlockLabel::Hyperbolic).collect(),
        matrix,
        meta: None,
    })
}
