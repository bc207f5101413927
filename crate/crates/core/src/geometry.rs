//! Points of PG(2,q) and PG(3,q), lines of PG(3,q), and quadrics given by
//! symmetric matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{FieldElement, FieldSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryError {
    ZeroVector,
    UnsupportedDimension(usize),
    DimensionMismatch,
    NotSymmetric,
    ZeroMatrix,
    /// A line matrix whose rows do not span a 2-dimensional space.
    RankDeficient,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::ZeroVector => write!(f, "the zero vector is not a projective point"),
            GeometryError::UnsupportedDimension(m) => {
                write!(f, "projective dimension {} is not supported (use 2 or 3)", m)
            }
            GeometryError::DimensionMismatch => write!(f, "dimension mismatch"),
            GeometryError::NotSymmetric => write!(f, "quadric matrix is not symmetric"),
            GeometryError::ZeroMatrix => write!(f, "quadric matrix is zero"),
            GeometryError::RankDeficient => write!(f, "line matrix does not have rank 2"),
        }
    }
}

impl core::error::Error for GeometryError {}

/// A point of PG(m,q), scaled so its first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// Projective dimension m (the point has m+1 coordinates).
    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }
}

/// Scales `raw` so that its first nonzero coordinate is 1.
pub fn normalize_point(gf: &FieldSpec, raw: &[FieldElement]) -> Result<ProjectivePoint, GeometryError> {
    let lead = raw
        .iter()
        .copied()
        .find(|x| !x.is_zero())
        .ok_or(GeometryError::ZeroVector)?;
    let s = gf.inv(lead).expect("nonzero lead");
    Ok(ProjectivePoint {
        coords: raw.iter().map(|&x| gf.mul(x, s)).collect(),
    })
}

fn check_dim(m: usize) -> Result<(), GeometryError> {
    if m == 2 || m == 3 {
        Ok(())
    } else {
        Err(GeometryError::UnsupportedDimension(m))
    }
}

/// All points of PG(m,q), m in {2, 3}, in lexicographic order of their
/// normalized coordinate vectors.
pub fn enumerate_points(gf: &FieldSpec, m: usize) -> Result<Vec<ProjectivePoint>, GeometryError> {
    check_dim(m)?;
    let q = gf.order() as usize;
    let mut out = Vec::new();
    // Leading 1 at position `lead`, zeros before, anything after.
    for lead in 0..=m {
        let tail = m - lead;
        let count = q.pow(tail as u32);
        for code in 0..count {
            let mut coords = vec![gf.zero(); m + 1];
            coords[lead] = gf.one();
            let mut c = code;
            for slot in coords[lead + 1..].iter_mut().rev() {
                *slot = gf.element((c % q) as u32).unwrap();
                c /= q;
            }
            out.push(ProjectivePoint { coords });
        }
    }
    out.sort();
    Ok(out)
}

/// A quadric `X A X^T = 0` with `A` symmetric, scaled so that the first
/// nonzero entry in row-major order is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quadric {
    m: usize,
    matrix: Vec<FieldElement>,
}

impl Quadric {
    /// `entries` is the `(m+1) x (m+1)` matrix in row-major order.
    pub fn new(gf: &FieldSpec, m: usize, entries: &[FieldElement]) -> Result<Self, GeometryError> {
        check_dim(m)?;
        let n = m + 1;
        if entries.len() != n * n {
            return Err(GeometryError::DimensionMismatch);
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(GeometryError::NotSymmetric);
                }
            }
        }
        let lead = entries
            .iter()
            .copied()
            .find(|x| !x.is_zero())
            .ok_or(GeometryError::ZeroMatrix)?;
        let s = gf.inv(lead).expect("nonzero lead");
        Ok(Quadric {
            m,
            matrix: entries.iter().map(|&x| gf.mul(x, s)).collect(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        self.matrix[i * (self.m + 1) + j]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.matrix
    }

    /// `x A y^T` for coordinate vectors of length m+1.
    pub fn bilinear(&self, gf: &FieldSpec, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let n = self.m + 1;
        let mut acc = gf.zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            let mut row = gf.zero();
            for j in 0..n {
                row = gf.add(row, gf.mul(self.entry(i, j), y[j]));
            }
            acc = gf.add(acc, gf.mul(x[i], row));
        }
        acc
    }
}

pub fn quadric_contains(gf: &FieldSpec, h: &Quadric, pt: &ProjectivePoint) -> Result<bool, GeometryError> {
    if h.m != pt.dimension() {
        return Err(GeometryError::DimensionMismatch);
    }
    Ok(h.bilinear(gf, &pt.coords, &pt.coords).is_zero())
}

fn det3(gf: &FieldSpec, a: [&[FieldElement]; 3]) -> FieldElement {
    let minor = |r1: &[FieldElement], r2: &[FieldElement], i: usize, j: usize| {
        gf.sub(gf.mul(r1[i], r2[j]), gf.mul(r1[j], r2[i]))
    };
    let t0 = gf.mul(a[0][0], minor(a[1], a[2], 1, 2));
    let t1 = gf.mul(a[0][1], minor(a[1], a[2], 0, 2));
    let t2 = gf.mul(a[0][2], minor(a[1], a[2], 0, 1));
    gf.add(gf.sub(t0, t1), t2)
}

/// True iff three points of PG(2,q) lie on a common line.
pub fn collinear(
    gf: &FieldSpec,
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
    p3: &ProjectivePoint,
) -> Result<bool, GeometryError> {
    if [p1, p2, p3].iter().any(|p| p.dimension() != 2) {
        return Err(GeometryError::DimensionMismatch);
    }
    Ok(det3(gf, [&p1.coords, &p2.coords, &p3.coords]).is_zero())
}

/// Reduces `rows` in place to reduced row echelon form; returns the rank.
pub(crate) fn rref_in_place(gf: &FieldSpec, rows: &mut [Vec<FieldElement>]) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let s = gf.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = gf.mul(*x, s);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot) {
                *x = gf.sub(*x, gf.mul(f, y));
            }
        }
        r += 1;
    }
    r
}

/// A line of PG(3,q) as the row space of a 2x4 matrix, stored in reduced row
/// echelon form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineMatrix {
    rows: [[FieldElement; 4]; 2],
}

impl LineMatrix {
    pub fn new(gf: &FieldSpec, rows: [[FieldElement; 4]; 2]) -> Result<Self, GeometryError> {
        let mut m: Vec<Vec<FieldElement>> = rows.iter().map(|r| r.to_vec()).collect();
        if rref_in_place(gf, &mut m) != 2 {
            return Err(GeometryError::RankDeficient);
        }
        let mut out = [[gf.zero(); 4]; 2];
        for (dst, src) in out.iter_mut().zip(&m) {
            dst.copy_from_slice(src);
        }
        Ok(LineMatrix { rows: out })
    }

    /// The line `(N I_2)` for a 2x2 matrix `N` given row-major.
    pub fn from_block(gf: &FieldSpec, n: [FieldElement; 4]) -> Self {
        let (o, z) = (gf.one(), gf.zero());
        Self::new(gf, [[n[0], n[1], o, z], [n[2], n[3], z, o]]).expect("(N I) has rank 2")
    }

    pub fn rows(&self) -> &[[FieldElement; 4]; 2] {
        &self.rows
    }

    /// The q+1 points on the line.
    pub fn points(&self, gf: &FieldSpec) -> Vec<ProjectivePoint> {
        let mut out = Vec::with_capacity(gf.order() as usize + 1);
        let combine = |a: FieldElement, b: FieldElement| -> Vec<FieldElement> {
            (0..4)
                .map(|j| gf.add(gf.mul(a, self.rows[0][j]), gf.mul(b, self.rows[1][j])))
                .collect()
        };
        out.push(normalize_point(gf, &combine(gf.zero(), gf.one())).unwrap());
        for a in gf.elements() {
            out.push(normalize_point(gf, &combine(gf.one(), a)).unwrap());
        }
        out
    }

    /// The line after the right action `L -> L Q` of a 4x4 matrix (row-major).
    pub fn transform(&self, gf: &FieldSpec, q: &[FieldElement; 16]) -> Result<Self, GeometryError> {
        let mut rows = [[gf.zero(); 4]; 2];
        for (dst, src) in rows.iter_mut().zip(&self.rows) {
            for j in 0..4 {
                let mut acc = gf.zero();
                for k in 0..4 {
                    acc = gf.add(acc, gf.mul(src[k], q[k * 4 + j]));
                }
                dst[j] = acc;
            }
        }
        Self::new(gf, rows)
    }
}

/// True iff two lines of PG(3,q) have no common point.
pub fn lines_skew(gf: &FieldSpec, l1: &LineMatrix, l2: &LineMatrix) -> bool {
    let mut stacked: Vec<Vec<FieldElement>> = l1
        .rows
        .iter()
        .chain(&l2.rows)
        .map(|r| r.to_vec())
        .collect();
    rref_in_place(gf, &mut stacked) == 4
}

/// True iff the line lies on the quadric, tested as `L H L^T = 0`.
pub fn line_in_quadric(gf: &FieldSpec, l: &LineMatrix, h: &Quadric) -> Result<bool, GeometryError> {
    if h.m != 3 {
        return Err(GeometryError::DimensionMismatch);
    }
    for a in 0..2 {
        for b in a..2 {
            if !h.bilinear(gf, &l.rows[a], &l.rows[b]).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn pt(f: &FieldSpec, c: &[i64]) -> ProjectivePoint {
        let raw: Vec<_> = c.iter().map(|&x| f.from_int(x)).collect();
        normalize_point(f, &raw).unwrap()
    }

    fn els(f: &FieldSpec, c: &[i64]) -> Vec<FieldElement> {
        c.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn normalization() {
        let f = gf(5);
        assert_eq!(pt(&f, &[2, 4, 2]).coords(), els(&f, &[1, 2, 1]).as_slice());
        assert_eq!(pt(&f, &[0, 3, 3]).coords(), els(&f, &[0, 1, 1]).as_slice());
        assert_eq!(
            normalize_point(&f, &els(&f, &[0, 0, 0])),
            Err(GeometryError::ZeroVector)
        );
    }

    #[test]
    fn point_counts() {
        assert_eq!(enumerate_points(&gf(5), 2).unwrap().len(), 31);
        assert_eq!(enumerate_points(&gf(3), 3).unwrap().len(), 40);
        assert_eq!(enumerate_points(&gf(3), 2).unwrap().len(), 13);
        assert_eq!(
            enumerate_points(&gf(3), 4),
            Err(GeometryError::UnsupportedDimension(4))
        );
        let f9 = FieldSpec::new(3, 2, None).unwrap();
        let pts = enumerate_points(&f9, 2).unwrap();
        assert_eq!(pts.len(), 91);
        // pairwise non-proportional: normalized forms are unique
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for p in &pts {
            assert_eq!(&normalize_point(&f9, p.coords()).unwrap(), p);
        }
    }

    #[test]
    fn conic_containment() {
        let f = gf(5);
        let a = Quadric::new(&f, 2, &els(&f, &[0, 1, 1, 1, 0, 1, 1, 1, 0])).unwrap();
        assert!(quadric_contains(&f, &a, &pt(&f, &[1, 1, 2])).unwrap());
        assert!(!quadric_contains(&f, &a, &pt(&f, &[1, 1, 1])).unwrap());
        assert!(quadric_contains(&f, &a, &pt(&f, &[1, 0, 0])).unwrap());
        let p3 = pt(&f, &[1, 0, 0, 0]);
        assert_eq!(quadric_contains(&f, &a, &p3), Err(GeometryError::DimensionMismatch));
    }

    #[test]
    fn quadric_validation() {
        let f = gf(5);
        assert_eq!(
            Quadric::new(&f, 2, &els(&f, &[0, 1, 0, 2, 0, 0, 0, 0, 0])),
            Err(GeometryError::NotSymmetric)
        );
        assert_eq!(
            Quadric::new(&f, 2, &els(&f, &[0; 9])),
            Err(GeometryError::ZeroMatrix)
        );
        let a = Quadric::new(&f, 2, &els(&f, &[0, 2, 2, 2, 0, 2, 2, 2, 0])).unwrap();
        let b = Quadric::new(&f, 2, &els(&f, &[0, 1, 1, 1, 0, 1, 1, 1, 0])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn collinearity() {
        let f = gf(5);
        let e = |c: &[i64]| pt(&f, c);
        assert!(!collinear(&f, &e(&[1, 0, 0]), &e(&[0, 1, 0]), &e(&[0, 0, 1])).unwrap());
        assert!(collinear(&f, &e(&[1, 0, 0]), &e(&[0, 1, 0]), &e(&[1, 1, 0])).unwrap());
        assert!(collinear(&f, &e(&[1, 1, 1]), &e(&[1, 2, 3]), &e(&[1, 3, 0])).unwrap());
    }

    fn line(f: &FieldSpec, r: [[i64; 4]; 2]) -> LineMatrix {
        let rows = r.map(|row| row.map(|x| f.from_int(x)));
        LineMatrix::new(f, rows).unwrap()
    }

    #[test]
    fn skew_lines() {
        let f = gf(3);
        let base = line(&f, [[1, 0, 0, 0], [0, 1, 0, 0]]);
        let other = line(&f, [[0, 0, 1, 0], [0, 0, 0, 1]]);
        assert!(lines_skew(&f, &base, &other));
        assert!(!lines_skew(&f, &base, &base));
        // Skew to (I 0) exactly when of the form (N I).
        let points = enumerate_points(&f, 3).unwrap();
        let mut skew = 0;
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                let l = LineMatrix::new(
                    &f,
                    [
                        a.coords().try_into().unwrap(),
                        b.coords().try_into().unwrap(),
                    ],
                )
                .unwrap();
                let r = l.rows();
                let right_block_invertible = !f
                    .sub(f.mul(r[0][2], r[1][3]), f.mul(r[0][3], r[1][2]))
                    .is_zero();
                assert_eq!(lines_skew(&f, &base, &l), right_block_invertible);
                skew += usize::from(right_block_invertible);
            }
        }
        // each line counted once per unordered point pair on it: (q+1)q/2 = 6
        assert_eq!(skew / 6, 81);
    }

    #[test]
    fn line_rref_is_canonical() {
        let f = gf(5);
        let a = line(&f, [[1, 2, 3, 4], [0, 1, 1, 1]]);
        let b = line(&f, [[1, 3, 4, 0], [2, 4, 1, 3]]);
        // b's rows are r0 + r1 and 2 r0
        assert_eq!(a, b);
        assert_eq!(
            LineMatrix::new(&f, [[f.one(); 4], [f.from_int(2); 4]]),
            Err(GeometryError::RankDeficient)
        );
    }

    fn hyperbolic(f: &FieldSpec, b: [i64; 4], c: [i64; 4]) -> Quadric {
        // [[0, B], [B^T, C]]
        let e = |x| f.from_int(x);
        let m = [
            0, 0, b[0], b[1],
            0, 0, b[2], b[3],
            b[0], b[2], c[0], c[1],
            b[1], b[3], c[2], c[3],
        ];
        Quadric::new(f, 3, &m.map(e)).unwrap()
    }

    #[test]
    fn line_containment_examples() {
        let f = gf(3);
        let base = line(&f, [[1, 0, 0, 0], [0, 1, 0, 0]]);
        let h = hyperbolic(&f, [1, 2, 0, 1], [1, 1, 1, 0]);
        assert!(line_in_quadric(&f, &base, &h).unwrap());
        let h0 = hyperbolic(&f, [1, 0, 0, 1], [0, 0, 0, 0]);
        // N^T + N = 0
        let n = [0, 1, -1, 0].map(|x| f.from_int(x));
        assert!(line_in_quadric(&f, &LineMatrix::from_block(&f, n), &h0).unwrap());
        let n = [0, 1, 1, 0].map(|x| f.from_int(x));
        assert!(!line_in_quadric(&f, &LineMatrix::from_block(&f, n), &h0).unwrap());
        let l0 = line(&f, [[0, 0, 1, 0], [0, 0, 0, 1]]);
        let hc = hyperbolic(&f, [1, 0, 0, 1], [1, 0, 0, 0]);
        assert!(!line_in_quadric(&f, &l0, &hc).unwrap());
    }

    proptest! {
        #[test]
        fn line_in_quadric_matches_pointwise(
            p in prop::sample::select(vec![3u32, 5]),
            rows in prop::array::uniform8(0u32..5),
            sym in prop::array::uniform10(0u32..5),
        ) {
            let f = gf(p);
            let e = |x: u32| f.element(x % p).unwrap();
            let l = match LineMatrix::new(&f, [
                [e(rows[0]), e(rows[1]), e(rows[2]), e(rows[3])],
                [e(rows[4]), e(rows[5]), e(rows[6]), e(rows[7])],
            ]) {
                Ok(l) => l,
                Err(_) => return Ok(()),
            };
            let idx = [[0, 1, 2, 3], [1, 4, 5, 6], [2, 5, 7, 8], [3, 6, 8, 9]];
            let mut m = Vec::new();
            for i in 0..4 {
                for j in 0..4 {
                    m.push(e(sym[idx[i][j]]));
                }
            }
            let h = match Quadric::new(&f, 3, &m) {
                Ok(h) => h,
                Err(_) => return Ok(()),
            };
            let pointwise = l.points(&f).iter().all(|x| quadric_contains(&f, &h, x).unwrap());
            prop_assert_eq!(line_in_quadric(&f, &l, &h).unwrap(), pointwise);
        }

        #[test]
        fn collinear_symmetric_and_scale_free(
            raw in prop::array::uniform9(0u32..7),
            k in 1u32..7,
        ) {
            let f = gf(7);
            let v: Vec<FieldElement> = raw.iter().map(|&x| f.element(x).unwrap()).collect();
            let mk = |s: &[FieldElement]| normalize_point(&f, s);
            let (Ok(a), Ok(b), Ok(c)) = (mk(&v[0..3]), mk(&v[3..6]), mk(&v[6..9])) else {
                return Ok(());
            };
            let scaled: Vec<FieldElement> = v[0..3].iter().map(|&x| f.mul(x, f.element(k).unwrap())).collect();
            let a2 = mk(&scaled).unwrap();
            let base = collinear(&f, &a, &b, &c).unwrap();
            prop_assert_eq!(collinear(&f, &b, &a, &c).unwrap(), base);
            prop_assert_eq!(collinear(&f, &c, &b, &a).unwrap(), base);
            prop_assert_eq!(collinear(&f, &a2, &b, &c).unwrap(), base);
        }

        #[test]
        fn rref_idempotent(rows in prop::array::uniform8(0u32..5), k in 1u32..5, mix in 0u32..5) {
            let f = gf(5);
            let e = |x: u32| f.element(x).unwrap();
            let r0 = [e(rows[0]), e(rows[1]), e(rows[2]), e(rows[3])];
            let r1 = [e(rows[4]), e(rows[5]), e(rows[6]), e(rows[7])];
            let Ok(l) = LineMatrix::new(&f, [r0, r1]) else { return Ok(()) };
            prop_assert_eq!(LineMatrix::new(&f, *l.rows()).unwrap(), l);
            // Another basis of the same row space.
            let s0 = r0.map(|x| f.mul(x, e(k)));
            let mut s1 = r1;
            for j in 0..4 {
                s1[j] = f.add(r1[j], f.mul(e(mix), r0[j]));
            }
            prop_assert_eq!(LineMatrix::new(&f, [s1, s0]).unwrap(), l);
        }
    }
}
