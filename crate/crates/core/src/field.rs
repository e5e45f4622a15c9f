//! Arithmetic in GF(p^k) over a polynomial basis.
//!
//! Elements are plain indices: the coefficient vector of the representing
//! polynomial read as a little-endian base-p numeral. A [`FieldCtx`] owns the
//! modulus and the lookup tables, and every operation goes through it. For
//! fields with an even extension degree the context also exposes the
//! conjugation `a ↦ a^q` onto the subfield GF(q), q = p^(k/2), which is what
//! the Hermitian and Buekenhout-Metz constructions need.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiplication goes through log/antilog tables up to this order.
const TABLE_LIMIT: u64 = 1 << 16;
/// A full addition table is kept up to this order.
const ADD_TABLE_LIMIT: u64 = 1 << 10;

/// Field element as its serialized index `0..p^k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Serialized description of a field: `(p, k, modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    /// Monic modulus, little-endian coefficients, length `k + 1`.
    pub modulus: Vec<u32>,
}

struct Tables {
    /// `exp[i] = g^i`, doubled so `exp[log a + log b]` needs no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Immutable context for GF(p^k).
pub struct FieldCtx {
    p: u32,
    k: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: FieldElement,
    tables: Option<Tables>,
    add_table: Option<Vec<u32>>,
    neg_table: Vec<u32>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Returns `(p, e)` with `q = p^e` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let d = smallest_prime_factor(n);
        out.push(d);
        while n.is_multiple_of(d) {
            n /= d;
        }
    }
    out
}

// Polynomial helpers over GF(p), little-endian coefficient vectors.

fn digits(mut idx: u64, p: u64, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for d in out.iter_mut() {
        *d = (idx % p) as u32;
        idx /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u64) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c as u64)
}

fn poly_degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo a nonzero polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = poly_degree(m).expect("nonzero modulus");
    let lead_inv = inv_mod_p(m[dm], p) as u64;
    let mut r: Vec<u32> = a.to_vec();
    let p64 = p as u64;
    while let Some(dr) = poly_degree(&r) {
        if dr < dm {
            break;
        }
        let factor = r[dr] as u64 * lead_inv % p64;
        let shift = dr - dm;
        for (i, &c) in m.iter().enumerate().take(dm + 1) {
            let sub = factor * c as u64 % p64;
            r[i + shift] = ((r[i + shift] as u64 + p64 - sub) % p64) as u32;
        }
    }
    r.truncate(dm.max(1));
    r.resize(dm.max(1), 0);
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    out.into_iter().map(|c| c as u32).collect()
}

/// Exhaustive trial division by every monic polynomial of degree `1..=k/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let k = poly.len() - 1;
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = digits(low, p as u64, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `k`,
/// ordering candidates by the little-endian numeral of their lower
/// coefficients.
pub fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for low in 0..count {
        let mut poly = digits(low, p as u64, k as usize);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over GF(p)")
}

impl FieldCtx {
    /// GF(p^k) with the smallest monic irreducible modulus.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if p < 2 || smallest_prime_factor(p as u64) != p as u64 {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("extension degree must be positive".into()));
        }
        let order = (p as u64)
            .checked_pow(k)
            .filter(|&o| o < (1u64 << 31))
            .ok_or_else(|| Error::InvalidParameter(format!("GF({p}^{k}) is too large")))?;
        let modulus = smallest_irreducible(p, k);
        Self::with_modulus(p, k, order as u32, modulus)
    }

    /// GF(q) for a prime power `q`.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, e)
    }

    /// GF(q²), the coordinate field of PG(2, q²).
    pub fn quadratic(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, 2 * e)
    }

    /// Rebuilds a context from its serialized form, re-checking irreducibility.
    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        let FieldSpec { p, k, ref modulus } = *spec;
        if p < 2 || smallest_prime_factor(p as u64) != p as u64 {
            return Err(Error::NotPrime(p as u64));
        }
        if modulus.len() != k as usize + 1 || modulus[k as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameter("modulus must be monic of degree k with coefficients below p".into()));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::InvalidParameter("modulus is reducible".into()));
        }
        let order = (p as u64)
            .checked_pow(k)
            .filter(|&o| o < (1u64 << 31))
            .ok_or_else(|| Error::InvalidParameter(format!("GF({p}^{k}) is too large")))?;
        Self::with_modulus(p, k, order as u32, modulus.clone())
    }

    fn with_modulus(p: u32, k: u32, order: u32, modulus: Vec<u32>) -> Result<Self> {
        let neg_table = (0..order)
            .map(|a| {
                let d: Vec<u32> = digits(a as u64, p as u64, k as usize)
                    .into_iter()
                    .map(|c| (p - c) % p)
                    .collect();
                undigits(&d, p as u64) as u32
            })
            .collect();
        let mut ctx = FieldCtx {
            p,
            k,
            order,
            modulus,
            generator: FieldElement::ONE,
            tables: None,
            add_table: None,
            neg_table,
        };
        ctx.generator = ctx.find_generator()?;
        if (order as u64) <= TABLE_LIMIT {
            let n = order as usize - 1;
            let mut exp = vec![0u32; 2 * n.max(1)];
            let mut log = vec![0u32; order as usize];
            let mut x = FieldElement::ONE;
            for i in 0..n {
                exp[i] = x.0;
                log[x.index()] = i as u32;
                x = ctx.mul_slow(x, ctx.generator);
            }
            for i in n..2 * n {
                exp[i] = exp[i - n];
            }
            ctx.tables = Some(Tables { exp, log });
        }
        if (order as u64) <= ADD_TABLE_LIMIT && p != 2 {
            let n = order as usize;
            let mut table = vec![0u32; n * n];
            for a in 0..order {
                for b in 0..order {
                    table[a as usize * n + b as usize] = ctx.add_slow(FieldElement(a), FieldElement(b)).0;
                }
            }
            ctx.add_table = Some(table);
        }
        Ok(ctx)
    }

    /// Smallest-index element whose multiplicative order is `p^k - 1`.
    fn find_generator(&self) -> Result<FieldElement> {
        let group = self.order as u64 - 1;
        if group == 1 {
            return Ok(FieldElement::ONE);
        }
        let primes = distinct_prime_factors(group);
        for cand in 1..self.order {
            let g = FieldElement(cand);
            if self.pow_slow(g, group) != FieldElement::ONE {
                // Would mean the modulus is reducible.
                return Err(Error::InvalidParameter("multiplicative group has the wrong order".into()));
            }
            if primes.iter().all(|&l| self.pow_slow(g, group / l) != FieldElement::ONE) {
                return Ok(g);
            }
        }
        Err(Error::InvalidParameter("no primitive element found".into()))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Number of elements, `p^k`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, k: self.k, modulus: self.modulus.clone() }
    }

    /// Order `q` of the subfield fixed by `a ↦ a^q`, when `k` is even.
    pub fn subfield_order(&self) -> Option<u32> {
        self.k.is_multiple_of(2).then(|| self.p.pow(self.k / 2))
    }

    fn require_quadratic(&self) -> Result<u32> {
        self.subfield_order().ok_or(Error::NotQuadraticExtension)
    }

    /// Checked conversion from a serialized index.
    pub fn element(&self, idx: u64) -> Result<FieldElement> {
        if idx < self.order as u64 {
            Ok(FieldElement(idx as u32))
        } else {
            Err(Error::ElementOutOfRange { index: idx, order: self.order as u64 })
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn coefficients(&self, a: FieldElement) -> Vec<u32> {
        digits(a.0 as u64, self.p as u64, self.k as usize)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParameter("coefficient vector does not describe a field element".into()));
        }
        Ok(FieldElement(undigits(coeffs, self.p as u64) as u32))
    }

    fn add_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p as u64;
        let (mut x, mut y, mut out, mut place) = (a.0 as u64, b.0 as u64, 0u64, 1u64);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FieldElement(out as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => FieldElement(t[a.index() * self.order as usize + b.index()]),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg_table[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let k = self.k as usize;
        let prod = poly_mul(&self.coefficients(a), &self.coefficients(b), self.p);
        let rem = poly_rem(&prod, &self.modulus, self.p);
        FieldElement(undigits(&rem[..k], self.p as u64) as u32)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        match &self.tables {
            Some(t) => FieldElement(t.exp[(t.log[a.index()] + t.log[b.index()]) as usize]),
            None => self.mul_slow(a, b),
        }
    }

    fn pow_slow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let (mut base, mut acc) = (a, FieldElement::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = self.order as u64 - 1;
                let l = (t.log[a.index()] as u64 * (e % n)) % n;
                FieldElement(t.exp[l as usize])
            }
            None => self.pow_slow(a, e),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let n = self.order - 1;
                FieldElement(t.exp[((n - t.log[a.index()]) % n) as usize])
            }
            None => self.pow_slow(a, self.order as u64 - 2),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Conjugation `a ↦ a^q` of GF(q²) over GF(q).
    pub fn frobenius_q(&self, a: FieldElement) -> Result<FieldElement> {
        let q = self.require_quadratic()?;
        Ok(self.pow(a, q as u64))
    }

    /// `a^(q+1) = a · a^q`, which always lands in GF(q).
    pub fn norm_to_subfield(&self, a: FieldElement) -> Result<FieldElement> {
        let q = self.require_quadratic()?;
        Ok(self.pow(a, q as u64 + 1))
    }

    pub fn in_subfield(&self, a: FieldElement) -> Result<bool> {
        Ok(self.frobenius_q(a)? == a)
    }

    /// The `q` elements of the subfield GF(q), in index order.
    pub fn subfield_elements(&self) -> Result<Vec<FieldElement>> {
        let q = self.require_quadratic()? as u64;
        self.elements()
            .filter(|&a| self.pow(a, q) == a)
            .map(Ok)
            .collect()
    }

    /// Square test in this field (odd characteristic). 0 counts as a square.
    pub fn is_square(&self, a: FieldElement) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::WrongCharacteristic { expected: "odd", found: 2 });
        }
        Ok(a.is_zero() || self.pow(a, (self.order as u64 - 1) / 2) == FieldElement::ONE)
    }

    /// Square test inside the subfield GF(q) of a quadratic extension.
    pub fn is_square_in_subfield(&self, a: FieldElement) -> Result<bool> {
        let q = self.require_quadratic()?;
        if self.p == 2 {
            return Err(Error::WrongCharacteristic { expected: "odd", found: 2 });
        }
        if !self.in_subfield(a)? {
            return Err(Error::NotInSubfield(a.0));
        }
        Ok(a.is_zero() || self.pow(a, (q as u64 - 1) / 2) == FieldElement::ONE)
    }

    fn trace_terms(&self, a: FieldElement, terms: u32) -> Result<u8> {
        if self.p != 2 {
            return Err(Error::WrongCharacteristic { expected: "2", found: self.p });
        }
        let mut acc = FieldElement::ZERO;
        let mut x = a;
        for _ in 0..terms {
            acc = self.add(acc, x);
            x = self.mul(x, x);
        }
        match acc.0 {
            0 | 1 => Ok(acc.0 as u8),
            other => Err(Error::Internal(format!("trace landed outside GF(2): {other}"))),
        }
    }

    /// Absolute trace of this field onto GF(2).
    pub fn abs_trace(&self, a: FieldElement) -> Result<u8> {
        self.trace_terms(a, self.k)
    }

    /// Absolute trace GF(q) → GF(2) of an element of the subfield.
    pub fn abs_trace_to_f2(&self, a: FieldElement) -> Result<u8> {
        self.require_quadratic()?;
        if !self.in_subfield(a)? {
            return Err(Error::NotInSubfield(a.0));
        }
        self.trace_terms(a, self.k / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> FieldCtx {
        FieldCtx::new(3, 2).unwrap()
    }

    #[test]
    fn gf9_modulus_is_t2_plus_1() {
        let f = gf9();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let t = f.from_coefficients(&[0, 1]).unwrap();
        // t * t = -1 = 2
        assert_eq!(f.mul(t, t), f.from_int(-1));
        assert_eq!(f.mul(t, t), FieldElement(2));
    }

    #[test]
    fn gf4_modulus() {
        assert_eq!(FieldCtx::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf9_frobenius_and_norm_of_t() {
        let f = gf9();
        let t = f.from_coefficients(&[0, 1]).unwrap();
        assert_eq!(f.frobenius_q(t).unwrap(), f.neg(t));
        assert_eq!(f.norm_to_subfield(t).unwrap(), FieldElement::ONE);
        assert_eq!(f.norm_to_subfield(FieldElement::ZERO).unwrap(), FieldElement::ZERO);
    }

    #[test]
    fn additive_and_multiplicative_inverses() {
        let f = gf9();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            }
        }
        assert!(matches!(f.inv(FieldElement::ZERO), Err(Error::DivisionByZero)));
    }

    #[test]
    fn gf3_squares() {
        let f = FieldCtx::new(3, 1).unwrap();
        assert!(f.is_square(FieldElement(0)).unwrap());
        assert!(f.is_square(FieldElement(1)).unwrap());
        assert!(!f.is_square(FieldElement(2)).unwrap());
    }

    #[test]
    fn nonsquare_count_in_subfields() {
        for q in [3u64, 5, 7, 9] {
            let f = FieldCtx::quadratic(q).unwrap();
            let sub = f.subfield_elements().unwrap();
            assert_eq!(sub.len() as u64, q);
            let non = sub.iter().filter(|&&a| !f.is_square_in_subfield(a).unwrap()).count();
            assert_eq!(non as u64, (q - 1) / 2);
        }
    }

    #[test]
    fn trace_kernel_has_half_the_subfield() {
        for q in [2u64, 4, 8] {
            let f = FieldCtx::quadratic(q).unwrap();
            let sub = f.subfield_elements().unwrap();
            let zeros = sub.iter().filter(|&&a| f.abs_trace_to_f2(a).unwrap() == 0).count();
            assert_eq!(zeros as u64, q / 2);
            assert_eq!(f.abs_trace_to_f2(FieldElement::ZERO).unwrap(), 0);
            for &a in &sub {
                for &b in &sub {
                    let lhs = f.abs_trace_to_f2(f.add(a, b)).unwrap();
                    let rhs = f.abs_trace_to_f2(a).unwrap() ^ f.abs_trace_to_f2(b).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn characteristic_errors() {
        let f4 = FieldCtx::quadratic(2).unwrap();
        assert!(matches!(f4.is_square(FieldElement(1)), Err(Error::WrongCharacteristic { .. })));
        let f9 = gf9();
        assert!(matches!(f9.abs_trace(FieldElement(1)), Err(Error::WrongCharacteristic { .. })));
        let f27 = FieldCtx::new(3, 3).unwrap();
        assert!(matches!(f27.frobenius_q(FieldElement(1)), Err(Error::NotQuadraticExtension)));
        assert!(matches!(f9.element(9), Err(Error::ElementOutOfRange { .. })));
    }

    #[test]
    fn norm_is_q_plus_one_to_one() {
        for q in [2u64, 3, 4, 5] {
            let f = FieldCtx::quadratic(q).unwrap();
            let mut counts = std::collections::HashMap::new();
            for a in f.elements().filter(|a| !a.is_zero()) {
                let n = f.norm_to_subfield(a).unwrap();
                assert!(f.in_subfield(n).unwrap());
                *counts.entry(n).or_insert(0u64) += 1;
            }
            assert_eq!(counts.len() as u64, q - 1);
            assert!(counts.values().all(|&c| c == q + 1));
        }
    }

    #[test]
    fn table_and_slow_paths_agree() {
        let f = FieldCtx::new(5, 2).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                assert_eq!(f.add(a, b), f.add_slow(a, b));
            }
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(matches!(FieldCtx::with_order(6), Err(Error::NotPrimePower(6))));
        assert!(matches!(FieldCtx::new(4, 1), Err(Error::NotPrime(4))));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn spec_round_trip() {
        let f = FieldCtx::quadratic(4).unwrap();
        let g = FieldCtx::from_spec(&f.spec()).unwrap();
        assert_eq!(g.modulus(), f.modulus());
        let mut bad = f.spec();
        bad.modulus = vec![0, 0, 0, 0, 1];
        assert!(FieldCtx::from_spec(&bad).is_err());
    }
}
