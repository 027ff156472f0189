//! Exact arithmetic in F_q.
//!
//! Prime fields are plain residues mod p. Extension fields F_{p^k} (k > 1)
//! represent an element by the base-p digits of its index: the element with
//! index `v = c_0 + c_1 p + ... + c_{k-1} p^{k-1}` is the residue class of
//! `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` modulo a fixed monic irreducible.
//!
//! The irreducible is the smallest monic degree-k polynomial when the lower
//! coefficients are read as a base-p integer `c_0 + c_1 p + ...`, so
//! F_9 uses `x^2 + 1` and F_4 uses `x^2 + x + 1`. Multiplication goes through
//! exp/log tables over the smallest primitive element (by index).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest order accepted for a proper extension field.
pub const EXTENSION_CAP: u32 = 4096;

const ADD_TABLE_CAP: u32 = 256;

/// A finite field F_q. Cheap to clone; immutable once built.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

struct Inner {
    q: u32,
    p: u32,
    k: u32,
    /// Monic irreducible, coefficients low to high (length k + 1). `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    generator: u32,
    /// `exp[i] = g^i`, stored twice over so `exp[log a + log b]` needs no reduction.
    exp: Vec<u32>,
    /// `log[a]` for a != 0; `log[0]` is unused.
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u16>>,
}

fn factor_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn digits(mut v: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Product of two residues (as digit vectors) modulo the monic `modulus`.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for d in (k..2 * k).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (i, &m) in modulus[..k].iter().enumerate() {
            let sub = c * m as u64 % p as u64;
            prod[d - k + i] = (prod[d - k + i] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(k);
    prod.into_iter().map(|c| c as u32).collect()
}

/// Remainder of `a` modulo a monic `d`, both low-to-high coefficient vectors.
fn poly_rem(a: &[u32], d: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let dd = d.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in d.iter().enumerate() {
                let sub = lead as u64 * c as u64 % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    for deg in 1..=k / 2 {
        for low in 0..(p as u64).pow(deg as u32) {
            let mut d = digits(low as u32, p, deg as u32);
            d.push(1);
            if poly_rem(f, &d, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn lowest_irreducible(p: u32, k: u32) -> Vec<u32> {
    for low in 0..p.pow(k) {
        let mut f = digits(low, p, k);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible of every degree exists over F_p")
}

impl FieldSpec {
    /// Builds F_q, factoring `q = p^k`.
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = factor_prime_power(q).ok_or(Error::NotAPrimePower(q))?;
        if k > 1 && q > EXTENSION_CAP as u64 {
            return Err(Error::TableCapExceeded(q));
        }
        if q >= 1 << 31 {
            return Err(Error::SizeCap { what: "field order", size: q, cap: (1 << 31) - 1 });
        }
        let (q, p) = (q as u32, p as u32);
        let modulus = if k == 1 { vec![0, 1] } else { lowest_irreducible(p, k) };

        let neg: Vec<u32> = (0..q)
            .map(|v| {
                let ds: Vec<u32> = digits(v, p, k).iter().map(|&d| (p - d) % p).collect();
                undigits(&ds, p)
            })
            .collect();

        let (generator, exp, log) = if k == 1 {
            Self::prime_tables(q)
        } else {
            Self::extension_tables(q, p, k, &modulus)
        };

        let add = (k > 1 && q <= ADD_TABLE_CAP).then(|| {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, p, k);
                for b in 0..q {
                    let db = digits(b, p, k);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = undigits(&s, p) as u16;
                }
            }
            t
        });

        Ok(FieldSpec(Arc::new(Inner { q, p, k, modulus, generator, exp, log, neg, add })))
    }

    fn prime_tables(q: u32) -> (u32, Vec<u32>, Vec<u32>) {
        // Small prime fields also get log tables; large ones multiply directly.
        if q > 1 << 16 {
            return (0, Vec::new(), Vec::new());
        }
        let order = q - 1;
        let g = (1..q)
            .find(|&g| {
                let mut x = 1u64;
                for i in 1..=order {
                    x = x * g as u64 % q as u64;
                    if x == 1 {
                        return i == order;
                    }
                }
                false
            })
            .unwrap();
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for i in 0..order as usize {
            exp[i] = x as u32;
            exp[i + order as usize] = x as u32;
            log[x as usize] = i as u32;
            x = x * g as u64 % q as u64;
        }
        (g, exp, log)
    }

    fn extension_tables(q: u32, p: u32, k: u32, modulus: &[u32]) -> (u32, Vec<u32>, Vec<u32>) {
        let order = (q - 1) as usize;
        for g in 2..q {
            let gd = digits(g, p, k);
            let mut exp = vec![0u32; 2 * order];
            let mut log = vec![u32::MAX; q as usize];
            let mut x = digits(1, p, k);
            let mut primitive = true;
            for i in 0..order {
                let v = undigits(&x, p);
                if log[v as usize] != u32::MAX {
                    primitive = false;
                    break;
                }
                exp[i] = v;
                exp[i + order] = v;
                log[v as usize] = i as u32;
                x = poly_mulmod(&x, &gd, modulus, p);
            }
            if primitive {
                log[0] = 0;
                return (g, exp, log);
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn is_prime(&self) -> bool {
        self.0.k == 1
    }
    /// Monic irreducible used for the representation, low-to-high coefficients.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// Primitive element underlying the exp/log tables.
    pub fn generator(&self) -> u32 {
        self.0.generator
    }

    pub fn elem(&self, value: u32) -> Result<FieldElem> {
        if value >= self.q() {
            return Err(Error::OutOfRange { index: value as usize, limit: self.q() as usize });
        }
        Ok(FieldElem { value, field: self.clone() })
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { value: 0, field: self.clone() }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { value: 1, field: self.clone() }
    }

    /// Image of the integer `m` under Z -> F_q.
    pub fn from_int(&self, m: i64) -> u32 {
        m.rem_euclid(self.p() as i64) as u32
    }

    // Raw arithmetic on canonical indices. Callers guarantee `a, b < q`.

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.k == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if let Some(t) = &f.add {
            t[(a * f.q + b) as usize] as u32
        } else if f.p == 2 {
            a ^ b
        } else {
            let (mut a, mut b, mut out, mut scale) = (a, b, 0, 1);
            while a > 0 || b > 0 {
                out += ((a % f.p + b % f.p) % f.p) * scale;
                a /= f.p;
                b /= f.p;
                scale *= f.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let f = &*self.0;
        if f.k == 1 {
            if a == 0 {
                0
            } else {
                f.p - a
            }
        } else {
            f.neg[a as usize]
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.k == 1 {
            (a as u64 * b as u64 % f.p as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            f.exp[(f.log[a as usize] + f.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        let f = &*self.0;
        if a == 0 {
            return None;
        }
        if f.exp.is_empty() {
            // Large prime: Fermat.
            return Some(self.pow(a, (f.p - 2) as u64));
        }
        let order = f.q - 1;
        Some(f.exp[((order - f.log[a as usize]) % order) as usize])
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Discrete log base [`generator`](Self::generator), for nonzero `a`.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0 && !self.0.log.is_empty()).then(|| self.0.log[a as usize])
    }

    /// Reference multiplication through explicit polynomial arithmetic.
    pub fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        let r = poly_mulmod(&digits(a, f.p, f.k), &digits(b, f.p, f.k), &f.modulus, f.p);
        undigits(&r, f.p)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q()
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())
    }
}

/// Builds F_q; see [`FieldSpec::new`].
pub fn make_field(q: u64) -> Result<FieldSpec> {
    FieldSpec::new(q)
}

/// A field element paired with its field. Mixed-field operations fail.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    value: u32,
    field: FieldSpec,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@F_{}", self.value, self.field.q())
    }
}

impl FieldElem {
    pub(crate) fn from_raw(value: u32, field: FieldSpec) -> Self {
        debug_assert!(value < field.q());
        FieldElem { value, field }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field.q(), right: other.field.q() });
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(Self::from_raw(self.field.add(self.value, other.value), self.field.clone()))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(Self::from_raw(self.field.sub(self.value, other.value), self.field.clone()))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(Self::from_raw(self.field.mul(self.value, other.value), self.field.clone()))
    }

    pub fn neg(&self) -> FieldElem {
        Self::from_raw(self.field.neg(self.value), self.field.clone())
    }

    pub fn inv(&self) -> Result<FieldElem> {
        let v = self.field.inv(self.value).ok_or(Error::DivisionByZero)?;
        Ok(Self::from_raw(v, self.field.clone()))
    }
}
