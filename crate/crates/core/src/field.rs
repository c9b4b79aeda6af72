//! Prime-power fields GF(p^e) with an explicit irreducible modulus.
//!
//! Elements are stored as their coordinate vector in the polynomial basis
//! `1, t, ..., t^(e-1)` packed into an integer `c0 + c1 p + ... + c_{e-1} p^(e-1)`.
//! Zero is `0` and one is `1`. Multiplication goes through log/exp tables built
//! from a primitive element found by search.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// A field element packed as its base-`p` coordinate integer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldInner {
    p: u32,
    e: u32,
    order: u32,
    /// Monic modulus, low-to-high, length e + 1.
    modulus: Vec<u32>,
    generator: Elem,
    /// `exp[i] = g^i` for `i < 2(order - 1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// GF(p^e). Cheap to clone; all clones share tables.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over GF(p), low-to-high, trimmed.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(a: u32, mut k: u32, p: u32) -> u32 {
    let (mut base, mut acc) = (a as u64 % p as u64, 1u64);
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        k >>= 1;
    }
    acc as u32
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] as u64 * lead_inv % p as u64;
        for (i, &mi) in m.iter().enumerate() {
            let idx = top - dm + i;
            r[idx] = ((r[idx] as u64 + (p as u64 - c) * mi as u64) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    poly_rem(&poly_mul(a, b, p), m, p)
}

fn poly_powmod(a: &[u32], mut k: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut base = poly_rem(a, m, p);
    let mut acc = vec![1];
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        k >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test for a polynomial over GF(p) of degree >= 1.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let deg = f.len() - 1;
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 0..deg / 2 {
        h = poly_powmod(&h, p as u64, &f, p);
        // h - x
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(&f, &trim(diff), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `e`,
/// comparing coefficient sequences low-degree first.
pub fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    if e == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(e as u32);
    for idx in 0..count {
        // c0 is the most significant digit of the enumeration.
        let mut coeffs = vec![0u32; e + 1];
        let mut r = idx;
        for i in (0..e).rev() {
            coeffs[i] = (r % p as u64) as u32;
            r /= p as u64;
        }
        coeffs[e] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// GF(p^e) with the given modulus, or the default one.
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        if (p as u64).checked_pow(e).is_none_or(|n| n > MAX_FIELD_ORDER) {
            return Err(Error::FieldTooLarge { p, e });
        }
        let modulus = match modulus {
            Some(m) => {
                let m = trim(m.to_vec());
                if m.len() != e as usize + 1 || m[e as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::DegreeMismatch { expected: e as usize, found: m.len().saturating_sub(1) });
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                m
            }
            None => default_modulus(p, e),
        };
        Ok(Self::build(p, e, modulus))
    }

    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1, None)
    }

    /// GF(q) for a prime power q with the default modulus.
    pub fn of_order(q: u32) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, e, None)
    }

    fn build(p: u32, e: u32, modulus: Vec<u32>) -> Field {
        let order = p.pow(e);
        let group = (order - 1) as u64;
        let factors = prime_factors(group);
        let digits = |v: u32| -> Vec<u32> {
            let mut out = Vec::with_capacity(e as usize);
            let mut r = v;
            for _ in 0..e {
                out.push(r % p);
                r /= p;
            }
            trim(out)
        };
        let pack = |c: &[u32]| -> u32 { c.iter().rev().fold(0u32, |acc, &d| acc * p + d) };
        let generator = (1..order)
            .find(|&g| {
                let gp = digits(g);
                factors.iter().all(|&r| poly_powmod(&gp, group / r, &modulus, p) != vec![1])
            })
            .expect("multiplicative group is cyclic");
        let gp = digits(generator);
        let n = (order - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; order as usize];
        let mut cur = vec![1u32];
        for i in 0..n {
            let v = pack(&cur);
            exp[i] = v;
            log[v as usize] = i as u32;
            cur = poly_mulmod(&cur, &gp, &modulus, p);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        if n == 0 {
            exp[0] = 1;
        }
        Field(Arc::new(FieldInner { p, e, order, modulus, generator: Elem(generator), exp, log }))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// A generator of the multiplicative group.
    pub fn generator(&self) -> Elem {
        self.0.generator
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.order
    }

    /// All elements in increasing packed order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.order).map(Elem)
    }

    /// `t`, the class of `x` modulo the modulus.
    pub fn t(&self) -> Elem {
        if self.0.e == 1 {
            // In a prime field x = -c0.
            let c0 = self.0.modulus[0];
            Elem((self.0.p - c0) % self.0.p)
        } else {
            Elem(self.0.p)
        }
    }

    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let (p, e) = (self.0.p, self.0.e);
        let mut out = Vec::with_capacity(e as usize);
        let mut r = a.0;
        for _ in 0..e {
            out.push(r % p);
            r /= p;
        }
        out
    }

    pub fn from_coords(&self, c: &[u32]) -> Elem {
        let p = self.0.p;
        Elem(c.iter().rev().fold(0u32, |acc, &d| acc * p + d % p))
    }

    /// Embeds an integer of the prime field.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let inner = &*self.0;
        Elem(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        let inner = &*self.0;
        let n = inner.order - 1;
        Some(Elem(inner.exp[((n - inner.log[a.0 as usize]) % n.max(1)) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        let bi = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let inner = &*self.0;
        let n = (inner.order - 1) as u64;
        let l = inner.log[a.0 as usize] as u64;
        Elem(inner.exp[((l * (k % n)) % n) as usize])
    }

    /// Discrete log relative to [`Field::generator`].
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a.0 != 0).then(|| self.0.log[a.0 as usize])
    }

    /// Raises to `p^k`, the k-th power of the absolute Frobenius.
    pub fn frobenius_abs(&self, a: Elem, k: u32) -> Elem {
        let k = k % self.0.e;
        let mut x = a;
        for _ in 0..k {
            x = self.pow(x, self.0.p as u64);
        }
        x
    }

    /// `GF(p^e; c0,c1,...,ce)`.
    pub fn descriptor(&self) -> String {
        let coeffs: Vec<String> = self.0.modulus.iter().map(|c| c.to_string()).collect();
        format!("GF({}^{}; {})", self.0.p, self.0.e, coeffs.join(","))
    }

    pub fn parse_descriptor(s: &str) -> Result<Field> {
        let bad = || Error::Parse(format!("bad field descriptor `{s}`"));
        let body = s.trim().strip_prefix("GF(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (pe, coeffs) = body.split_once(';').ok_or_else(bad)?;
        let (p, e) = pe.trim().split_once('^').ok_or_else(bad)?;
        let p: u32 = p.trim().parse().map_err(|_| bad())?;
        let e: u32 = e.trim().parse().map_err(|_| bad())?;
        let coeffs =
            coeffs.split(',').map(|c| c.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        Field::new(p, e, Some(&coeffs))
    }

    /// Text form of an element: the decimal value in a prime field, otherwise
    /// the coordinates low-to-high joined by `.`.
    pub fn format_elem(&self, a: Elem) -> String {
        if self.0.e == 1 {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coords(a).iter().map(|d| d.to_string()).collect();
            c.join(".")
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let bad = || Error::Parse(format!("bad element `{s}` for {}", self.descriptor()));
        if self.0.e == 1 {
            let v: u32 = s.trim().parse().map_err(|_| bad())?;
            if v >= self.0.p {
                return Err(bad());
            }
            return Ok(Elem(v));
        }
        let c = s.trim().split('.').map(|d| d.parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        if c.len() != self.0.e as usize || c.iter().any(|&d| d >= self.0.p) {
            return Err(bad());
        }
        Ok(self.from_coords(&c))
    }
}

/// An element bundled with its field, for checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Field,
    pub value: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElement { field: field.clone(), value })
    }

    pub fn coordinates(&self) -> Vec<u32> {
        self.field.coords(self.value)
    }

    pub fn arith(&self, other: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let value = match op {
            ArithOp::Add => f.add(self.value, other.value),
            ArithOp::Sub => f.sub(self.value, other.value),
            ArithOp::Mul => f.mul(self.value, other.value),
            ArithOp::Div => f.div(self.value, other.value)?,
        };
        Ok(FieldElement { field: f.clone(), value })
    }
}
