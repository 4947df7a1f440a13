//! Exact arithmetic in GF(p^h).
//!
//! Elements are encoded as base-p digit packings of the residue polynomial
//! (constant term in the least significant digit), so the prime subfield is
//! exactly the set of representatives below `p`. Multiplication goes through
//! discrete log tables built at construction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 4;

/// A field element, stored as its canonical integer representative.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn rep(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The finite field GF(p^h) with a fixed modulus and precomputed tables.
pub struct Field {
    p: u32,
    h: u32,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
    sqrt_order: Option<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.h == other.h && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, h)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 || q > u32::MAX as u64 {
        return None;
    }
    let q = q as u32;
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let mut rest = q;
    let mut h = 0;
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, h))
}

// Polynomials over GF(p) as little-endian coefficient vectors.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] * lead_inv) % p;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                let idx = dr - db + i;
                r[idx] = (r[idx] + p - (c * bi) % p) % p;
            }
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p is prime and small
    let mut acc = 1u64;
    let (mut base, mut e) = (a as u64 % p as u64, p as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn digits_of(mut n: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most half the degree.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for m in 0..count {
            let mut g = digits_of(m, p, d);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^h) with the lexicographically least monic irreducible
    /// modulus (coefficients read as a base-p integer, constant term lowest).
    pub fn new(p: u32, h: u32) -> Result<Field> {
        if !is_prime(p) {
            return param(format!("characteristic {p} is not prime"));
        }
        if h == 0 || h > MAX_DEGREE {
            return param(format!("extension degree {h} outside 1..={MAX_DEGREE}"));
        }
        let order = match p.checked_pow(h) {
            Some(o) if o <= MAX_ORDER => o,
            _ => return param(format!("field order {p}^{h} exceeds {MAX_ORDER}")),
        };
        let hu = h as usize;
        let modulus = (0..order)
            .map(|m| {
                let mut f = digits_of(m, p, hu);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .ok_or_else(|| Error::Inconsistency("no irreducible modulus".into()))?;

        let mut field = Field {
            p,
            h,
            order,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: None,
            sqrt_order: None,
        };
        field.build_log_tables()?;
        if order <= 1024 {
            let mut table = vec![0u16; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    table[(a * order + b) as usize] = field.add_digits(a, b) as u16;
                }
            }
            field.add_table = Some(table);
        }
        if h % 2 == 0 {
            field.sqrt_order = Some(p.pow(h / 2));
        }
        Ok(field)
    }

    /// GF(q) for a prime power q.
    pub fn of_order(q: u64) -> Result<Field> {
        match prime_power(q) {
            Some((p, h)) => Field::new(p, h),
            None => param(format!("{q} is not a prime power")),
        }
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let h = self.h as usize;
        let p = self.p;
        let da = digits_of(a, p, h);
        let db = digits_of(b, p, h);
        let mut prod = vec![0u32; 2 * h - 1];
        for i in 0..h {
            for j in 0..h {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for d in (h..2 * h - 1).rev() {
            let c = prod[d];
            if c != 0 {
                for i in 0..h {
                    let idx = d - h + i;
                    prod[idx] = (prod[idx] + p - (c * self.modulus[i]) % p) % p;
                }
                prod[d] = 0;
            }
        }
        prod[..h].iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    fn build_log_tables(&mut self) -> Result<()> {
        let n = self.order - 1;
        let generator = (1..self.order)
            .find(|&g| {
                let mut x = g;
                let mut k = 1;
                while x != 1 {
                    x = self.mul_slow(x, g);
                    k += 1;
                }
                k == n
            })
            .ok_or_else(|| Error::Inconsistency("multiplicative group not cyclic".into()))?;
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; self.order as usize];
        let mut x = 1;
        for i in 0..n {
            exp[i as usize] = x;
            exp[(i + n) as usize] = x;
            log[x as usize] = i;
            x = self.mul_slow(x, generator);
        }
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut out, mut scale) = (0, 1);
        for _ in 0..self.h {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `Some(q)` when the order is a square q^2.
    pub fn sqrt_order(&self) -> Option<u32> {
        self.sqrt_order
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    pub fn elem(&self, rep: u32) -> Result<Elem> {
        if rep < self.order {
            Ok(Elem(rep))
        } else {
            param(format!("{rep} is not an element of GF({})", self.order))
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    /// The generator used for the log tables.
    pub fn primitive_element(&self) -> Elem {
        Elem(self.exp[1 % self.exp.len().max(1)])
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => Elem(t[(a.0 * self.order + b.0) as usize] as u32),
            None => Elem(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        let (mut x, mut out, mut scale) = (a.0, 0, 1);
        for _ in 0..self.h {
            out += ((self.p - x % self.p) % self.p) * scale;
            x /= self.p;
            scale *= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let n = self.order - 1;
        Ok(Elem(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let n = (self.order - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        Elem(self.exp[l as usize])
    }

    /// The involution x -> x^q of GF(q^2).
    pub fn conj(&self, a: Elem) -> Result<Elem> {
        match self.sqrt_order {
            Some(q) => Ok(self.pow(a, q as u64)),
            None => param(format!(
                "conjugation needs a field of square order, GF({}) is not",
                self.order
            )),
        }
    }

    /// Conjugation for callers that already checked the order is a square.
    #[inline]
    pub(crate) fn conj_unchecked(&self, a: Elem) -> Elem {
        self.pow(a, self.sqrt_order.unwrap_or(1) as u64)
    }

    /// Field embedding of `self` into `big`, as a lookup table indexed by
    /// representative. Sends the modulus root to the least root in `big`.
    pub fn embed_into(&self, big: &Field) -> Result<Vec<Elem>> {
        if self.p != big.p || big.h % self.h != 0 {
            return param(format!(
                "GF({}) does not embed in GF({})",
                self.order, big.order
            ));
        }
        let eval = |x: Elem| {
            self.modulus
                .iter()
                .rev()
                .fold(Elem::ZERO, |acc, &c| big.add(big.mul(acc, x), Elem(c)))
        };
        let root = big
            .elements()
            .find(|&x| eval(x).is_zero())
            .ok_or_else(|| Error::Inconsistency("modulus has no root in extension".into()))?;
        let h = self.h as usize;
        let table: Vec<Elem> = (0..self.order)
            .map(|rep| {
                digits_of(rep, self.p, h)
                    .iter()
                    .rev()
                    .fold(Elem::ZERO, |acc, &c| big.add(big.mul(acc, root), Elem(c)))
            })
            .collect();
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laws_hold(f: &Field) {
        let els: Vec<Elem> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, Elem::ZERO), a);
            assert_eq!(f.mul(a, Elem::ONE), a);
            assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_laws_exhaustive_up_to_81() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 81] {
            laws_hold(&Field::of_order(q).unwrap());
        }
    }

    #[test]
    fn prime_field_modulus_and_gf4_modulus() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf9_modulus_is_least_rootless_quadratic() {
        // oracle: scan monic quadratics c0 + c1 x + x^2 in order of c0 + 3 c1
        let mut best = None;
        for m in 0..9u32 {
            let (c0, c1) = (m % 3, m / 3);
            let has_root = (0..3u32).any(|x| (x * x + c1 * x + c0) % 3 == 0);
            if !has_root {
                best = Some(vec![c0, c1, 1]);
                break;
            }
        }
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(Some(f9.modulus().to_vec()), best);
    }

    #[test]
    fn conj_examples() {
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.conj(Elem::ZERO).unwrap(), Elem::ZERO);
        assert_eq!(f4.conj(Elem::ONE).unwrap(), Elem::ONE);
        let w = f4.primitive_element();
        assert_eq!(f4.conj(w).unwrap(), f4.mul(w, w));
        assert_eq!(f4.mul(w, f4.mul(w, w)), Elem::ONE);
        assert!(Field::new(2, 3).unwrap().conj(Elem::ONE).is_err());
    }

    #[test]
    fn conj_is_involution_fixing_subfield() {
        for q2 in [4u64, 9, 16, 25, 49, 81] {
            let f = Field::of_order(q2).unwrap();
            let q = f.sqrt_order().unwrap();
            let mut fixed = 0;
            for a in f.elements() {
                let c = f.conj(a).unwrap();
                assert_eq!(f.conj(c).unwrap(), a);
                if c == a {
                    fixed += 1;
                }
            }
            assert_eq!(fixed, q);
        }
    }

    #[test]
    fn arithmetic_examples() {
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.inv(Elem(2)).unwrap(), Elem(2));
        assert!(f3.inv(Elem::ZERO).is_err());
        let f9 = Field::new(3, 2).unwrap();
        for a in f9.elements().skip(1) {
            assert_eq!(f9.pow(a, 8), Elem::ONE);
        }
    }

    #[test]
    fn multiplicative_group_cyclic() {
        for q in [8u64, 9, 16, 27] {
            let f = Field::of_order(q).unwrap();
            let g = f.primitive_element();
            let n = (q - 1) as usize;
            let mut seen = std::collections::HashSet::new();
            let mut x = Elem::ONE;
            for _ in 0..n {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len(), n);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(2, 0).is_err());
        assert!(Field::new(2, 5).is_err());
        assert!(Field::new(257, 2).is_err());
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        for (small, big) in [(4u64, 16u64), (2, 4), (3, 9)] {
            let fs = Field::of_order(small).unwrap();
            let fb = Field::of_order(big).unwrap();
            let phi = fs.embed_into(&fb).unwrap();
            for a in fs.elements() {
                for b in fs.elements() {
                    assert_eq!(phi[fs.mul(a, b).0 as usize], fb.mul(phi[a.0 as usize], phi[b.0 as usize]));
                    assert_eq!(phi[fs.add(a, b).0 as usize], fb.add(phi[a.0 as usize], phi[b.0 as usize]));
                }
            }
        }
    }
}
