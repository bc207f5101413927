//! Arithmetic in GF(q) for odd prime powers q = p^k.
//!
//! Elements are stored as a packed index into the coefficient space. The
//! coefficient vector `(c_0, .., c_{k-1})` (constant term first) maps to
//! `c_0 * p^(k-1) + c_1 * p^(k-2) + .. + c_{k-1}`, so that the numeric order
//! of indices is the lexicographic order of coefficient vectors. Enumeration,
//! and therefore the row/column order of every matrix built on top of this
//! module, follows that order.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest field order accepted. Keeps indices comfortably inside `u32`.
pub const MAX_ORDER: u32 = 1 << 16;

/// Orders up to this size get full addition/multiplication tables.
const TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u32),
    EvenCharacteristic,
    ZeroDegree,
    /// Modulus has the wrong length, is not monic, or has out-of-range coefficients.
    MalformedModulus,
    ReducibleModulus,
    NoBuiltinModulus { p: u32, k: u32 },
    OrderTooLarge,
    ZeroInverse,
    Mismatch,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{} is not a prime", p),
            FieldError::EvenCharacteristic => write!(f, "characteristic 2 is not supported"),
            FieldError::ZeroDegree => write!(f, "extension degree must be at least 1"),
            FieldError::MalformedModulus => {
                write!(f, "modulus must be monic of degree k with coefficients in [0, p)")
            }
            FieldError::ReducibleModulus => write!(f, "modulus is reducible"),
            FieldError::NoBuiltinModulus { p, k } => {
                write!(f, "no built-in modulus for {}^{}; supply one", p, k)
            }
            FieldError::OrderTooLarge => write!(f, "field order exceeds {}", MAX_ORDER),
            FieldError::ZeroInverse => write!(f, "zero has no multiplicative inverse"),
            FieldError::Mismatch => write!(f, "elements belong to different fields"),
        }
    }
}

impl core::error::Error for FieldError {}

/// Built-in irreducible moduli, constant term first.
const BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (3, 2, &[1, 0, 1]),       // X^2 + 1
    (5, 2, &[2, 0, 1]),       // X^2 + 2
    (3, 3, &[1, 2, 0, 1]),    // X^3 + 2X + 1
    (7, 2, &[1, 0, 1]),       // X^2 + 1
    (3, 4, &[2, 0, 0, 2, 1]), // X^4 + 2X^3 + 2
];

/// An element of some [`FieldSpec`].
///
/// The `tag` identifies the owning field; checked operations use it to reject
/// mixing elements of different fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    index: u32,
    tag: u32,
}

impl FieldElement {
    /// Position of the element in the field's enumeration order.
    pub fn index(self) -> u32 {
        self.index
    }

    pub fn is_zero(self) -> bool {
        self.index == 0
    }
}

#[derive(Debug, Clone)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    tag: u32,
    one: u32,
    neg: Vec<u32>,
    inv: Vec<u32>,
    tables: Option<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `m`, coefficients mod p.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let t = (c as u64 * lead as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    r
}

/// True iff the monic polynomial has no monic factor of degree 1..=deg/2.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = vec![0u32; d + 1];
            let mut c = code;
            for coeff in g.iter_mut().take(d) {
                *coeff = (c % p as u64) as u32;
                c /= p as u64;
            }
            g[d] = 1;
            if poly_rem(modulus, &g, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^k). With `modulus == None`, `k` must be 1 or one of the
    /// built-in orders 9, 25, 27, 49, 81.
    pub fn new(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER as u64)
            .ok_or(FieldError::OrderTooLarge)? as u32;
        let modulus: Vec<u32> = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 || m[k as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(FieldError::MalformedModulus);
                }
                if !is_irreducible(m, p) {
                    return Err(FieldError::ReducibleModulus);
                }
                m.to_vec()
            }
            None if k == 1 => vec![0, 1],
            None => BUILTIN_MODULI
                .iter()
                .find(|(bp, bk, _)| *bp == p && *bk == k)
                .map(|(_, _, m)| m.to_vec())
                .ok_or(FieldError::NoBuiltinModulus { p, k })?,
        };
        let mut tag = 0x811c_9dc5u32;
        for &x in [p, k].iter().chain(modulus.iter()) {
            tag = (tag ^ x).wrapping_mul(0x0100_0193);
        }
        let mut spec = FieldSpec {
            p,
            k,
            q,
            modulus,
            tag,
            one: p.pow(k - 1),
            neg: Vec::new(),
            inv: Vec::new(),
            tables: None,
        };
        spec.neg = (0..q).map(|a| spec.neg_raw(a)).collect();
        if q <= TABLE_LIMIT {
            let mut add = vec![0u32; (q * q) as usize];
            let mut mul = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = spec.add_raw(a, b);
                    mul[(a * q + b) as usize] = spec.mul_raw(a, b);
                }
            }
            spec.tables = Some(Tables { add, mul });
        }
        let mut inv = vec![0u32; q as usize];
        for a in 1..q {
            if inv[a as usize] != 0 {
                continue;
            }
            // a^(q-2) = a^-1
            let mut result = spec.one;
            let mut base = a;
            let mut e = q - 2;
            while e > 0 {
                if e & 1 == 1 {
                    result = spec.mul_idx(result, base);
                }
                base = spec.mul_idx(base, base);
                e >>= 1;
            }
            inv[a as usize] = result;
            inv[result as usize] = a;
        }
        spec.inv = inv;
        Ok(spec)
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, constant term first. For prime fields this is `X`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn to_coeffs(&self, mut index: u32) -> Vec<u32> {
        let mut c = vec![0u32; self.k as usize];
        for slot in c.iter_mut().rev() {
            *slot = index % self.p;
            index /= self.p;
        }
        c
    }

    fn from_coeffs_raw(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let ca = self.to_coeffs(a);
        let cb = self.to_coeffs(b);
        let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.from_coeffs_raw(&sum)
    }

    fn neg_raw(&self, a: u32) -> u32 {
        let c: Vec<u32> = self
            .to_coeffs(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.from_coeffs_raw(&c)
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let ca = self.to_coeffs(a);
        let cb = self.to_coeffs(b);
        let mut prod = vec![0u32; ca.len() + cb.len() - 1];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.k as usize, 0);
        self.from_coeffs_raw(&r)
    }

    #[inline]
    fn add_idx(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => t.add[(a * self.q + b) as usize],
            None => self.add_raw(a, b),
        }
    }

    #[inline]
    fn mul_idx(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => t.mul[(a * self.q + b) as usize],
            None => self.mul_raw(a, b),
        }
    }

    #[inline]
    fn wrap(&self, index: u32) -> FieldElement {
        FieldElement {
            index,
            tag: self.tag,
        }
    }

    /// True iff `e` was produced by this field.
    pub fn owns(&self, e: FieldElement) -> bool {
        e.tag == self.tag && e.index < self.q
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(self.one)
    }

    /// Element at position `index` of the enumeration order.
    pub fn element(&self, index: u32) -> Option<FieldElement> {
        (index < self.q).then(|| self.wrap(index))
    }

    /// Element with the given coefficient vector (constant term first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Option<FieldElement> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return None;
        }
        Some(self.wrap(self.from_coeffs_raw(coeffs)))
    }

    pub fn coeffs(&self, e: FieldElement) -> Vec<u32> {
        self.to_coeffs(e.index)
    }

    /// Image of an integer under Z -> GF(p) -> GF(q).
    pub fn from_int(&self, n: i64) -> FieldElement {
        let r = n.rem_euclid(self.p as i64) as u32;
        self.wrap(r * self.one)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.owns(a) && self.owns(b));
        self.wrap(self.add_idx(a.index, b.index))
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        debug_assert!(self.owns(a));
        self.wrap(self.neg[a.index as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.owns(a) && self.owns(b));
        self.wrap(self.mul_idx(a.index, b.index))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if !self.owns(a) {
            return Err(FieldError::Mismatch);
        }
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.wrap(self.inv[a.index as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn check(&self, a: FieldElement, b: FieldElement) -> Result<(), FieldError> {
        if self.owns(a) && self.owns(b) {
            Ok(())
        } else {
            Err(FieldError::Mismatch)
        }
    }

    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a, b)?;
        Ok(self.add(a, b))
    }

    pub fn try_sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a, b)?;
        Ok(self.sub(a, b))
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a, b)?;
        Ok(self.mul(a, b))
    }

    pub fn try_neg(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a, a)?;
        Ok(self.neg(a))
    }

    /// All elements (or all nonzero elements) in lexicographic order of their
    /// coefficient vectors.
    pub fn enumerate_elements(&self, nonzero_only: bool) -> Vec<FieldElement> {
        let start = u32::from(nonzero_only);
        (start..self.q).map(|i| self.wrap(i)).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.wrap(i))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(move |i| self.wrap(i))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.k)
        }
    }
}
