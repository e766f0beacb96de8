//! The constant field F_q, q = p^e, with table-driven arithmetic.
//!
//! An element is stored as its integer code `d_0 + d_1 p + ... + d_{e-1} p^{e-1}`
//! where `d_0 + d_1 z + ... + d_{e-1} z^{e-1}` is its representative modulo the
//! defining polynomial. Multiplication goes through discrete log tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::factor::first_irreducible;
use crate::field::{FiniteField, Field};

/// Largest supported q; the log tables are O(q).
pub const MAX_Q: u64 = 1 << 20;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic defining polynomial over F_p, low coefficient first (degree e); `[0, 1]` when e = 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Context for F_q. Cheap to clone.
#[derive(Clone)]
pub struct FqContext(Arc<Inner>);

impl PartialEq for FqContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.e == other.0.e)
    }
}

impl fmt::Debug for FqContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FqContext {
    /// F_q with q = p^e. For e > 1 the defining polynomial is the first monic
    /// irreducible of degree e over F_p in integer-code order.
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e < 1 {
            return Err(Error::InvalidField(format!("exponent e = {e} must be >= 1")));
        }
        let q = (p as u128).checked_pow(e).filter(|&q| q <= MAX_Q as u128).ok_or_else(|| {
            Error::InvalidField(format!("q = {p}^{e} exceeds the supported maximum {MAX_Q}"))
        })? as u32;
        let prime = Self::build(p as u32, 1, vec![0, 1]);
        if e == 1 {
            return Ok(prime);
        }
        let m = first_irreducible(&prime, e as usize);
        let modulus: Vec<u32> = m.coeffs().iter().map(|c| c.code()).collect();
        debug_assert_eq!(modulus.len(), e as usize + 1);
        debug_assert_eq!(q, (p as u32).pow(e));
        Ok(Self::build(p as u32, e, modulus))
    }

    fn build(p: u32, e: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(e);
        let slow_mul = |a: u32, b: u32| -> u32 { slow_mul(p, e, &modulus, a, b) };
        let mut exp = vec![0u32; q as usize];
        let mut log = vec![0u32; q as usize];
        if q == 2 {
            exp[0] = 1;
        } else {
            // search for a generator of the multiplicative group
            'search: for g in 2..q {
                let mut x = 1u32;
                for k in 0..(q - 1) {
                    exp[k as usize] = x;
                    x = slow_mul(x, g);
                    if x == 1 && k + 1 < q - 1 {
                        continue 'search;
                    }
                }
                break;
            }
        }
        for k in 0..(q - 1) {
            log[exp[k as usize] as usize] = k;
        }
        FqContext(Arc::new(Inner { p, e, q, modulus, exp, log }))
    }

    pub fn one_elem(&self) -> FqElem {
        FqElem(1)
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u64 {
        self.0.q as u64
    }

    /// Defining polynomial over F_p (low coefficient first), if e > 1.
    pub fn defining_modulus(&self) -> Option<&[u32]> {
        (self.0.e > 1).then_some(&self.0.modulus[..])
    }

    pub fn from_code(&self, c: u32) -> FqElem {
        assert!(c < self.0.q, "code {c} out of range for F_{}", self.0.q);
        FqElem(c)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The generator `z` of F_q over F_p; absent for prime fields.
    pub fn z(&self) -> Option<FqElem> {
        (self.0.e > 1).then_some(FqElem(self.0.p))
    }

    pub fn digits(&self, a: FqElem) -> Vec<u32> {
        let p = self.0.p;
        let mut c = a.0;
        (0..self.0.e)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FqElem {
        let p = self.0.p;
        FqElem(digits.iter().rev().fold(0, |acc, &d| acc * p + d % p))
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.0.q).map(FqElem)
    }

    #[inline]
    pub fn fadd(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.0.p;
        if self.0.e == 1 {
            let s = a.0 + b.0;
            FqElem(if s >= p { s - p } else { s })
        } else {
            let (mut x, mut y, mut acc, mut scale) = (a.0, b.0, 0u32, 1u32);
            while x > 0 || y > 0 {
                acc += ((x % p + y % p) % p) * scale;
                x /= p;
                y /= p;
                scale *= p;
            }
            FqElem(acc)
        }
    }

    #[inline]
    pub fn fneg(&self, a: FqElem) -> FqElem {
        let p = self.0.p;
        if self.0.e == 1 {
            FqElem(if a.0 == 0 { 0 } else { p - a.0 })
        } else {
            let (mut x, mut acc, mut scale) = (a.0, 0u32, 1u32);
            while x > 0 {
                acc += ((p - x % p) % p) * scale;
                x /= p;
                scale *= p;
            }
            FqElem(acc)
        }
    }

    #[inline]
    pub fn fsub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.fadd(a, self.fneg(b))
    }

    #[inline]
    pub fn fmul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        let inner = &*self.0;
        let s = inner.log[a.0 as usize] + inner.log[b.0 as usize];
        let n = inner.q - 1;
        FqElem(inner.exp[(if s >= n { s - n } else { s }) as usize])
    }

    #[inline]
    pub fn finv(&self, a: FqElem) -> Option<FqElem> {
        if a.0 == 0 {
            return None;
        }
        let inner = &*self.0;
        let n = inner.q - 1;
        let l = inner.log[a.0 as usize];
        Some(FqElem(inner.exp[((n - l) % n) as usize]))
    }

    pub fn fpow(&self, a: FqElem, k: u64) -> FqElem {
        if k == 0 {
            return FqElem(1);
        }
        if a.0 == 0 {
            return FqElem(0);
        }
        let inner = &*self.0;
        let n = (inner.q - 1) as u64;
        let l = inner.log[a.0 as usize] as u64;
        FqElem(inner.exp[((l * (k % n)) % n) as usize])
    }

    /// Discrete log with respect to the table generator.
    pub fn dlog(&self, a: FqElem) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }

    pub fn generator(&self) -> FqElem {
        FqElem(self.0.exp[if self.0.q == 2 { 0 } else { 1 }])
    }

    /// Renders an element: an integer when e = 1, otherwise a polynomial in `z`.
    pub fn format_elem(&self, a: FqElem) -> String {
        if self.0.e == 1 {
            return a.0.to_string();
        }
        let digits = self.digits(a);
        let mut terms = Vec::new();
        for (i, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let t = match (i, d) {
                (0, d) => d.to_string(),
                (1, 1) => "z".to_string(),
                (1, d) => format!("{d}*z"),
                (i, 1) => format!("z^{i}"),
                (i, d) => format!("{d}*z^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// Schoolbook product of two codes modulo the defining polynomial; only used to build tables.
fn slow_mul(p: u32, e: u32, modulus: &[u32], a: u32, b: u32) -> u32 {
    let e = e as usize;
    let digits = |mut c: u32| -> Vec<u32> {
        (0..e)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u32; 2 * e];
    for i in 0..e {
        for j in 0..e {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    for k in (e..2 * e).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        // x^k = x^(k-e) * x^e and x^e = -(m_0 + ... + m_{e-1} x^{e-1})
        for (j, &m) in modulus.iter().enumerate().take(e) {
            prod[k - e + j] = (prod[k - e + j] + (p - (c * m) % p)) % p;
        }
        prod[k] = 0;
    }
    prod[..e].iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl Field for FqContext {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem(0)
    }
    fn one(&self) -> FqElem {
        FqElem(1)
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.fadd(*a, *b)
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        self.fneg(*a)
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.fsub(*a, *b)
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.fmul(*a, *b)
    }
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        self.finv(*a)
    }
    fn pow(&self, a: &FqElem, n: u64) -> FqElem {
        self.fpow(*a, n)
    }
    fn base(&self) -> &FqContext {
        self
    }
    fn from_base(&self, c: FqElem) -> FqElem {
        c
    }
    fn frobenius(&self, a: &FqElem) -> FqElem {
        *a
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn is_algebraic(&self, _a: &FqElem) -> bool {
        true
    }
    fn format(&self, a: &FqElem) -> String {
        self.format_elem(*a)
    }
}

impl FiniteField for FqContext {
    fn degree(&self) -> usize {
        1
    }
    fn coordinates(&self, a: &FqElem) -> Vec<FqElem> {
        vec![*a]
    }
    fn from_coordinates(&self, coords: &[FqElem]) -> FqElem {
        coords[0]
    }
    fn pth_root(&self, a: &FqElem) -> FqElem {
        // a^(q/p)
        self.fpow(*a, self.q() / self.p())
    }
}
