//! Finite fields GF(p^k) for q <= 81 and the homomorphisms between them.
//!
//! Elements are encoded as integers `0..q`: the base-p digits of the encoding
//! are the coefficients `c0, c1, ..` of a polynomial reduced modulo a fixed
//! irreducible modulus. Multiplication goes through log/antilog tables built
//! from the least primitive element.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Moduli for the supported fields as coefficient lists `[c0, .., ck]`.
///
/// Each entry is the least irreducible monic polynomial of its degree, ordered
/// by the integer `sum c_i p^i` (the usual written-out lexicographic order).
/// Prime fields use the modulus `x`.
const MODULI: &[(u32, u32, &[u8])] = &[
    (2, 1, &[0, 1]),
    (3, 1, &[0, 1]),
    (5, 1, &[0, 1]),
    (7, 1, &[0, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (5, 2, &[2, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (7, 2, &[1, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (3, 4, &[2, 1, 0, 0, 1]),
];

/// Largest supported field order.
pub const MAX_ORDER: usize = 81;

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

struct Tables {
    p: u32,
    k: u32,
    q: usize,
    modulus: Vec<u8>,
    generator: u8,
    add: Vec<u8>,
    neg: Vec<u8>,
    // exp has length 2(q-1) so that exp[log a + log b] needs no reduction.
    exp: Vec<u8>,
    log: Vec<u8>,
    inv: Vec<u8>,
}

/// A finite field with its arithmetic tables. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.k == other.0.k)
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.k.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.k)
        }
    }
}

// Polynomial helpers over GF(p), digits little-endian.
fn poly_mulmod(a: &[u8], b: &[u8], modulus: &[u8], p: u32) -> Vec<u8> {
    let k = modulus.len() - 1;
    let mut r = vec![0u32; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x as u32 * y as u32) % p;
        }
    }
    for d in (k..r.len()).rev() {
        let c = r[d];
        if c != 0 {
            for (i, &m) in modulus.iter().enumerate() {
                r[d - k + i] = (r[d - k + i] + (p - c) * m as u32) % p;
            }
        }
    }
    r.truncate(k);
    r.into_iter().map(|x| x as u8).collect()
}

fn poly_divides(f: &[u8], g: &[u8], p: u32) -> bool {
    // f monic
    let df = f.len() - 1;
    let mut g: Vec<u32> = g.iter().map(|&x| x as u32).collect();
    for d in (df..g.len()).rev() {
        let c = g[d];
        if c != 0 {
            for (i, &m) in f.iter().enumerate() {
                g[d - df + i] = (g[d - df + i] + (p - c) * m as u32) % p;
            }
        }
    }
    g[..df].iter().all(|&x| x == 0)
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(modulus: &[u8], p: u32) -> bool {
    let k = modulus.len() - 1;
    for d in 1..=k / 2 {
        for code in 0..(p as usize).pow(d as u32) {
            let mut f: Vec<u8> = (0..d).map(|i| ((code / (p as usize).pow(i as u32)) % p as usize) as u8).collect();
            f.push(1);
            if poly_divides(&f, modulus, p) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^k) from the built-in modulus table.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let modulus = MODULI
            .iter()
            .find(|(mp, mk, _)| *mp == p && *mk == k)
            .map(|(_, _, m)| m.to_vec())
            .ok_or(Error::UnsupportedField { p, k })?;
        assert!(is_irreducible(&modulus, p), "modulus table entry is reducible");
        let q = (p as usize).pow(k);
        let digits = |v: usize| -> Vec<u8> {
            (0..k as usize).map(|i| ((v / (p as usize).pow(i as u32)) % p as usize) as u8).collect()
        };
        let encode = |d: &[u8]| -> usize { d.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize) };

        let mut add = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u8> = da.iter().zip(&db).map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8).collect();
                add[a * q + b] = encode(&s) as u8;
            }
            let n: Vec<u8> = da.iter().map(|&x| ((p - x as u32) % p) as u8).collect();
            neg[a] = encode(&n) as u8;
        }

        let mut one = vec![0u8; k as usize];
        one[0] = 1;
        let mut generator = 0u8;
        let mut exp = Vec::new();
        for cand in 1..q {
            let dc = digits(cand);
            let mut powers = vec![1u8];
            let mut x = one.clone();
            loop {
                x = poly_mulmod(&x, &dc, &modulus, p);
                if x == one {
                    break;
                }
                powers.push(encode(&x) as u8);
            }
            if powers.len() == q - 1 {
                generator = cand as u8;
                exp = powers;
                break;
            }
        }
        assert!(generator != 0 || q == 1, "no primitive element found");
        let mut log = vec![0u8; q];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u8;
        }
        let doubled: Vec<u8> = exp.iter().chain(exp.iter()).copied().collect();
        let mut inv = vec![0u8; q];
        for a in 1..q {
            let l = log[a] as usize;
            inv[a] = doubled[(q - 1 - l) % (q - 1)];
        }

        Ok(Field(Arc::new(Tables { p, k, q, modulus, generator, add, neg, exp: doubled, log, inv })))
    }

    /// Builds the field of order `q` if `q` is a supported prime power.
    pub fn with_order(q: usize) -> Result<Field> {
        for &(p, k, _) in MODULI {
            if (p as usize).pow(k) == q {
                return Field::new(p, k);
            }
        }
        Err(Error::Parse(format!("GF({q}): not a supported field order")))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> usize {
        self.0.q
    }

    pub fn modulus(&self) -> &[u8] {
        &self.0.modulus
    }

    /// The least-encoded element of multiplicative order q-1.
    pub fn generator(&self) -> u8 {
        self.0.generator
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.0.add[a as usize * self.0.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            0
        } else {
            let t = &self.0;
            t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize]
        }
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.0.inv[a as usize]
    }

    #[inline]
    pub fn div(&self, a: u8, b: u8) -> u8 {
        debug_assert!(b != 0, "division by zero");
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u8, e: u64) -> u8 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.0.q - 1) as u64;
        let l = (self.0.log[a as usize] as u64 * (e % n)) % n;
        self.0.exp[l as usize]
    }

    /// Discrete log to the base of [`Field::generator`].
    pub fn log(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.0.log[a as usize])
    }

    /// `generator^i`.
    pub fn exp(&self, i: usize) -> u8 {
        self.0.exp[i % (self.0.q - 1)]
    }

    /// a ↦ a^p.
    pub fn frobenius(&self, a: u8) -> u8 {
        self.pow(a, self.0.p as u64)
    }

    /// Coefficients `c0..c(k-1)` of the polynomial encoded by `a`.
    pub fn digits(&self, a: u8) -> Vec<u8> {
        let p = self.0.p as usize;
        (0..self.0.k as usize).map(|i| ((a as usize / p.pow(i as u32)) % p) as u8).collect()
    }

    pub fn values(&self) -> impl Iterator<Item = u8> + Clone {
        0..self.0.q as u8
    }

    pub fn nonzero_values(&self) -> impl Iterator<Item = u8> + Clone {
        1..self.0.q as u8
    }

    pub fn element(&self, value: u8) -> Result<FieldElement> {
        if (value as usize) < self.0.q {
            Ok(FieldElement { field: self.clone(), value })
        } else {
            Err(Error::ValueOutOfRange { value: value as u64, field: self.to_string() })
        }
    }

    pub fn contains(&self, value: u64) -> bool {
        (value as usize) < self.0.q
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), value: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: self.clone(), value: 1 }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `GF(p)`, `GF(p^k)` and `GF(q)` for supported prime powers q.
    fn from_str(s: &str) -> Result<Field> {
        let bad = || Error::Parse(format!("invalid field spec {s:?}, expected GF(p) or GF(p^k)"));
        let inner = s.trim().strip_prefix("GF(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        match inner.split_once('^') {
            Some((p, k)) => {
                let p: u32 = p.trim().parse().map_err(|_| bad())?;
                let k: u32 = k.trim().parse().map_err(|_| bad())?;
                Field::new(p, k).map_err(|e| Error::Parse(format!("{s}: {e}")))
            }
            None => {
                let q: usize = inner.trim().parse().map_err(|_| bad())?;
                Field::with_order(q)
            }
        }
    }
}

/// An element of a specific field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u8,
}

impl FieldElement {
    pub fn value(&self) -> u8 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inverse(&self) -> Option<FieldElement> {
        (self.value != 0).then(|| FieldElement { field: self.field.clone(), value: self.field.inv(self.value) })
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement { field: self.field.clone(), value: self.field.pow(self.value, e) }
    }

    fn binop(self, rhs: FieldElement, op: impl Fn(&Field, u8, u8) -> u8) -> FieldElement {
        assert!(self.field == rhs.field, "operands from different fields");
        let value = op(&self.field, self.value, rhs.value);
        FieldElement { field: self.field, value }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈{}", self.value, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.binop(rhs, Field::add)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.binop(rhs, Field::sub)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.binop(rhs, Field::mul)
    }
}

impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        assert!(rhs.value != 0, "division by zero");
        self.binop(rhs, Field::div)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let value = self.field.neg(self.value);
        FieldElement { field: self.field, value }
    }
}

/// A non-zero homomorphism `source -> target`, stored by the image of the
/// source's primitive generator together with the full value table.
#[derive(Clone)]
pub struct FieldHom {
    source: Field,
    target: Field,
    generator_image: u8,
    table: Vec<u8>,
}

impl PartialEq for FieldHom {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.generator_image == other.generator_image
    }
}

impl Eq for FieldHom {}

impl fmt::Debug for FieldHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldHom({} -> {}, generator ↦ {})", self.source, self.target, self.generator_image)
    }
}

impl FieldHom {
    /// Validates exhaustively that `generator ↦ generator_image` extends to a
    /// ring homomorphism.
    pub fn new(source: &Field, target: &Field, generator_image: u8) -> Result<FieldHom> {
        let not_hom = || Error::NotAHomomorphism {
            source_field: source.to_string(),
            target_field: target.to_string(),
            generator_image,
        };
        if !target.contains(generator_image as u64) || generator_image == 0 {
            return Err(not_hom());
        }
        let n = source.order() - 1;
        if target.pow(generator_image, n as u64) != 1 {
            return Err(not_hom());
        }
        let mut table = vec![0u8; source.order()];
        for i in 0..n {
            table[source.exp(i) as usize] = target.pow(generator_image, i as u64);
        }
        for a in source.values() {
            for b in source.values() {
                let sum = table[source.add(a, b) as usize];
                if sum != target.add(table[a as usize], table[b as usize]) {
                    return Err(not_hom());
                }
                let prod = table[source.mul(a, b) as usize];
                if prod != target.mul(table[a as usize], table[b as usize]) {
                    return Err(not_hom());
                }
            }
        }
        let mut seen = vec![false; target.order()];
        for &v in &table {
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(not_hom());
            }
        }
        Ok(FieldHom { source: source.clone(), target: target.clone(), generator_image, table })
    }

    /// Builds a homomorphism from a full value table, if it is one.
    pub fn from_table(source: &Field, target: &Field, table: &[u8]) -> Result<FieldHom> {
        if table.len() != source.order() {
            return Err(Error::DimensionMismatch { expected: source.order(), found: table.len() });
        }
        let hom = FieldHom::new(source, target, table[source.generator() as usize])?;
        if hom.table != table {
            return Err(Error::NotAHomomorphism {
                source_field: source.to_string(),
                target_field: target.to_string(),
                generator_image: hom.generator_image,
            });
        }
        Ok(hom)
    }

    pub fn identity(field: &Field) -> FieldHom {
        FieldHom::new(field, field, field.generator()).expect("identity is a homomorphism")
    }

    /// a ↦ a^(p^power).
    pub fn frobenius(field: &Field, power: u32) -> FieldHom {
        let e = (field.characteristic() as u64).pow(power);
        FieldHom::new(field, field, field.pow(field.generator(), e)).expect("Frobenius powers are homomorphisms")
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn generator_image(&self) -> u8 {
        self.generator_image
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    #[inline]
    pub fn apply_raw(&self, a: u8) -> u8 {
        self.table[a as usize]
    }

    pub fn apply(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.field != self.source {
            return Err(Error::FieldMismatch { expected: self.source.to_string(), found: a.field.to_string() });
        }
        Ok(FieldElement { field: self.target.clone(), value: self.table[a.value as usize] })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FieldHom) -> Result<FieldHom> {
        if self.target != other.source {
            return Err(Error::FieldMismatch { expected: other.source.to_string(), found: self.target.to_string() });
        }
        FieldHom::new(&self.source, &other.target, other.apply_raw(self.generator_image))
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.generator_image == self.source.generator()
    }

    /// The homomorphism b ↦ a·σ(b)·a⁻¹. Over a field this is σ again.
    pub fn conjugate(&self, a: u8) -> FieldHom {
        assert!(a != 0, "conjugation by zero");
        let t = &self.target;
        let table: Vec<u8> = self.table.iter().map(|&s| t.mul(t.mul(a, s), t.inv(a))).collect();
        FieldHom::from_table(&self.source, t, &table).expect("conjugate of a homomorphism")
    }
}

/// Every non-zero homomorphism `source -> target`, sorted by generator image.
///
/// Found by trying every non-zero target element as the generator image.
pub fn enumerate_homs(source: &Field, target: &Field) -> Vec<FieldHom> {
    if source.characteristic() != target.characteristic() {
        return Vec::new();
    }
    target.nonzero_values().filter_map(|t| FieldHom::new(source, target, t).ok()).collect()
}

/// Every supported `(p, k)` pair.
pub fn supported_fields() -> impl Iterator<Item = (u32, u32)> {
    MODULI.iter().map(|&(p, k, _)| (p, k))
}
