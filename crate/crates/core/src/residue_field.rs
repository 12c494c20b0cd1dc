//! Arithmetic in the finite residue field F_q, q = p^d.
//!
//! Elements are stored as integer codes in `[0, q)`: the code, written in
//! base p, is the coefficient vector of a polynomial in the generator of the
//! extension (code 0 is the additive identity, code 1 the multiplicative
//! one). Multiplication and division go through exp/dlog tables built from a
//! fixed primitive root; addition is coefficientwise mod p, with a full q×q
//! table for small fields.
//!
//! The primitive root defaults to the smallest code of multiplicative order
//! q−1 and can be overridden, since residue-class statistics downstream
//! depend on which generator is fixed.

use crate::error::{Error, Result};
use serde::Serialize;

/// Largest supported field size for table-based arithmetic.
pub const MAX_Q: u64 = 4096;

/// Full q×q addition table is kept only below this size.
const ADD_TABLE_MAX_Q: u64 = 256;

/// An element of F_q, identified by its integer code in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn code(self) -> u16 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Shape of the field: characteristic, extension degree, modulus.
///
/// `modulus` is the little-endian coefficient vector of the monic degree-d
/// polynomial defining the extension (length d+1, last entry 1); it is empty
/// when d = 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub p: u64,
    pub d: u32,
    pub modulus: Vec<u16>,
    pub q: u64,
}

/// F_q with arithmetic tables and a fixed primitive root.
#[derive(Debug, Clone)]
pub struct ResidueField {
    spec: FieldSpec,
    primitive_root: FieldElement,
    /// exp[j] = code of root^j, for j in [0, q-1).
    exp: Vec<u16>,
    /// dlog[code] = j with root^j = code; entry 0 is unused.
    dlog: Vec<u16>,
    /// Row-major q×q addition table, present when q <= ADD_TABLE_MAX_Q.
    add_table: Option<Vec<u16>>,
}

impl ResidueField {
    /// Builds F_{p^d}. When `modulus` is `None` and d > 1, the
    /// lexicographically smallest (by code of the non-leading coefficients)
    /// monic irreducible of degree d is searched exhaustively. A supplied
    /// modulus is checked irreducible by trial division against every monic
    /// polynomial of degree at most d/2.
    pub fn new(p: u64, d: u32, modulus: Option<Vec<u16>>) -> Result<Self> {
        if p > MAX_Q {
            // q = p^d >= p, so the cap is already blown
            return Err(Error::FieldTooLarge { q: p, cap: MAX_Q });
        }
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if d < 1 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                got: 0,
            });
        }
        let q = (p as u128)
            .checked_pow(d)
            .filter(|&q| q <= MAX_Q as u128)
            .ok_or(Error::FieldTooLarge {
                q: u64::MAX,
                cap: MAX_Q,
            })? as u64;

        let modulus = match (d, modulus) {
            (1, None) => Vec::new(),
            (1, Some(m)) if m.is_empty() => Vec::new(),
            (1, Some(m)) => {
                return Err(Error::DegreeMismatch {
                    expected: 0,
                    got: m.len(),
                });
            }
            (_, Some(m)) => {
                if m.len() != d as usize + 1 || m[d as usize] != 1 {
                    return Err(Error::DegreeMismatch {
                        expected: d as usize + 1,
                        got: m.len(),
                    });
                }
                if m.iter().any(|&c| c as u64 >= p) {
                    return Err(Error::DegreeMismatch {
                        expected: d as usize + 1,
                        got: m.len(),
                    });
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus);
                }
                m
            }
            (_, None) => find_irreducible(p, d),
        };

        let spec = FieldSpec { p, d, modulus, q };
        let root = smallest_primitive_root(&spec);
        Ok(Self::from_root(spec, root))
    }

    /// Re-fixes the primitive root, rebuilding the dlog table.
    pub fn with_primitive_root(&self, code: u16) -> Result<Self> {
        if code as u64 >= self.spec.q || order(&self.spec, code) != self.spec.q - 1 {
            return Err(Error::NotPrimitiveRoot(code));
        }
        Ok(Self::from_root(self.spec.clone(), code))
    }

    fn from_root(spec: FieldSpec, root: u16) -> Self {
        let q = spec.q as usize;
        let mut exp = vec![0u16; q - 1];
        let mut dlog = vec![0u16; q];
        let mut acc = 1u16;
        for (j, e) in exp.iter_mut().enumerate() {
            *e = acc;
            dlog[acc as usize] = j as u16;
            acc = raw_mul(&spec, acc, root);
        }
        let add_table = if spec.q <= ADD_TABLE_MAX_Q {
            let mut t = vec![0u16; q * q];
            for a in 0..q as u16 {
                for b in 0..q as u16 {
                    t[a as usize * q + b as usize] = add_codes(&spec, a, b);
                }
            }
            Some(t)
        } else {
            None
        };
        ResidueField {
            spec,
            primitive_root: FieldElement(root),
            exp,
            dlog,
            add_table,
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn q(&self) -> u64 {
        self.spec.q
    }

    pub fn degree(&self) -> u32 {
        self.spec.d
    }

    pub fn primitive_root(&self) -> FieldElement {
        self.primitive_root
    }

    /// The constant embedding of an integer: code `v mod p`.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.spec.p as i64) as u16)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add_table {
            Some(t) => FieldElement(t[a.0 as usize * self.spec.q as usize + b.0 as usize]),
            None => FieldElement(add_codes(&self.spec, a.0, b.0)),
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(neg_code(&self.spec, a.0))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.spec.q - 1;
        let j = (self.dlog[a.0 as usize] as u64 + self.dlog[b.0 as usize] as u64) % n;
        FieldElement(self.exp[j as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.spec.q - 1;
        let j = (n - self.dlog[a.0 as usize] as u64) % n;
        Ok(FieldElement(self.exp[j as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if a.is_zero() {
            return if e == 0 {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            };
        }
        let n = self.spec.q - 1;
        let j = (self.dlog[a.0 as usize] as u128 * e as u128 % n as u128) as usize;
        FieldElement(self.exp[j])
    }

    /// Discrete logarithm: the unique j in [0, q-2] with root^j = a.
    pub fn dlog(&self, a: FieldElement) -> Result<u16> {
        if a.is_zero() {
            return Err(Error::LogOfZero);
        }
        Ok(self.dlog[a.0 as usize])
    }

    /// root^j, with j taken mod q-1 (negative j allowed).
    pub fn root_pow(&self, j: i64) -> FieldElement {
        let n = (self.spec.q - 1) as i64;
        FieldElement(self.exp[j.rem_euclid(n) as usize])
    }

    /// Iterator over all element codes.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.spec.q as u16).map(FieldElement)
    }
}

/// Trial-division primality check; the field cap keeps inputs small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Coefficientwise addition of codes, base p.
fn add_codes(spec: &FieldSpec, a: u16, b: u16) -> u16 {
    let p = spec.p as u16;
    if spec.d == 1 {
        return (a + b) % p;
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0u16;
    let mut scale = 1u16;
    for _ in 0..spec.d {
        out += (a % p + b % p) % p * scale;
        a /= p;
        b /= p;
        scale = scale.saturating_mul(p);
    }
    out
}

fn neg_code(spec: &FieldSpec, a: u16) -> u16 {
    let p = spec.p as u16;
    if spec.d == 1 {
        return (p - a % p) % p;
    }
    let mut a = a;
    let mut out = 0u16;
    let mut scale = 1u16;
    for _ in 0..spec.d {
        out += (p - a % p) % p * scale;
        a /= p;
        scale = scale.saturating_mul(p);
    }
    out
}

/// Table-free multiplication: schoolbook product of coefficient vectors,
/// reduced by the modulus. Used to bootstrap the exp table.
fn raw_mul(spec: &FieldSpec, a: u16, b: u16) -> u16 {
    let p = spec.p;
    if spec.d == 1 {
        return (a as u64 * b as u64 % p) as u16;
    }
    let d = spec.d as usize;
    let av = code_to_vec(a, p, d);
    let bv = code_to_vec(b, p, d);
    let mut prod = vec![0u64; 2 * d - 1];
    for (i, &ai) in av.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in bv.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p;
        }
    }
    // reduce top coefficients: y^d = -(m_0 + m_1 y + ... + m_{d-1} y^{d-1})
    for i in (d..2 * d - 1).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for k in 0..d {
            let m = spec.modulus[k] as u64;
            prod[i - d + k] = (prod[i - d + k] + c * (p - m) % p) % p;
        }
    }
    vec_to_code(&prod[..d], p)
}

fn code_to_vec(code: u16, p: u64, d: usize) -> Vec<u16> {
    let mut v = vec![0u16; d];
    let mut c = code as u64;
    for e in v.iter_mut() {
        *e = (c % p) as u16;
        c /= p;
    }
    v
}

fn vec_to_code(v: &[u64], p: u64) -> u16 {
    let mut code = 0u64;
    for &c in v.iter().rev() {
        code = code * p + c;
    }
    code as u16
}

/// Multiplicative order of a nonzero code, via the factorization of q-1.
fn order(spec: &FieldSpec, a: u16) -> u64 {
    if a == 0 {
        return 0;
    }
    let mut ord = spec.q - 1;
    for f in prime_factors(spec.q - 1) {
        while ord.is_multiple_of(f) && raw_pow(spec, a, ord / f) == 1 {
            ord /= f;
        }
    }
    ord
}

fn raw_pow(spec: &FieldSpec, a: u16, mut e: u64) -> u16 {
    let mut base = a;
    let mut acc = 1u16;
    while e > 0 {
        if e & 1 == 1 {
            acc = raw_mul(spec, acc, base);
        }
        base = raw_mul(spec, base, base);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut fs = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            fs.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    fs
}

fn smallest_primitive_root(spec: &FieldSpec) -> u16 {
    (1..spec.q as u16)
        .find(|&c| order(spec, c) == spec.q - 1)
        .expect("unit group of a finite field is cyclic")
}

/// Remainder of `a` by monic `b` over F_p (both little-endian, b nonempty).
fn poly_rem(a: &[u16], b: &[u16], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for k in 0..db {
                let m = b[k] as u64;
                r[shift + k] = (r[shift + k] + lead * (p - m) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree 1..=d/2.
fn is_irreducible(modulus: &[u16], p: u64) -> bool {
    let d = modulus.len() - 1;
    for e in 1..=d / 2 {
        let count = (p as u128).pow(e as u32) as u64;
        for code in 0..count {
            let mut div = code_to_vec_u64(code, p, e);
            div.push(1);
            let rem = poly_rem(modulus, &div, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn code_to_vec_u64(code: u64, p: u64, len: usize) -> Vec<u16> {
    let mut v = vec![0u16; len];
    let mut c = code;
    for e in v.iter_mut() {
        *e = (c % p) as u16;
        c /= p;
    }
    v
}

fn find_irreducible(p: u64, d: u32) -> Vec<u16> {
    let count = (p as u128).pow(d) as u64;
    for code in 0..count {
        let mut m = code_to_vec_u64(code, p, d as usize);
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}
