//! Dense univariate polynomials over any [`Field`].

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::Field;

/// Polynomial with coefficients `coeffs[i]` of `x^i`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

/// Arithmetic in F[x] for a field object `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<F: Field> {
    field: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Builds a polynomial, trimming trailing zeros.
    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> Poly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    /// `x`.
    pub fn x(&self) -> Poly<F::Elem> {
        self.monomial(self.field.one(), 1)
    }

    pub fn monomial(&self, c: F::Elem, deg: usize) -> Poly<F::Elem> {
        let mut v = vec![self.field.zero(); deg + 1];
        v[deg] = c;
        self.from_coeffs(v)
    }

    pub fn is_one(&self, f: &Poly<F::Elem>) -> bool {
        f.coeffs.len() == 1 && self.field.is_one(&f.coeffs[0])
    }

    pub fn is_monic(&self, f: &Poly<F::Elem>) -> bool {
        f.leading().is_some_and(|c| self.field.is_one(c))
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.field.zero();
        let v = (0..n)
            .map(|i| {
                self.field
                    .add(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z))
            })
            .collect();
        self.from_coeffs(v)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut v = vec![self.field.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] = self.field.add(&v[i + j], &self.field.mul(x, y));
            }
        }
        self.from_coeffs(v)
    }

    /// Euclidean division: `a = s*b + t` with `deg t < deg b`.
    pub fn divmod(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> Result<(Poly<F::Elem>, Poly<F::Elem>)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = self.field.inv(&b.coeffs[db]).ok_or(Error::DivisionByZero)?;
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Ok((self.zero(), a.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - db];
        for k in (db..rem.len()).rev() {
            let c = self.field.mul(&rem[k], &lead_inv);
            if self.field.is_zero(&c) {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                let idx = k - db + j;
                rem[idx] = self.field.sub(&rem[idx], &self.field.mul(&c, bj));
            }
            quot[k - db] = c;
        }
        rem.truncate(db);
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
        self.divmod(a, b).map(|(_, r)| r)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
        let (s, t) = self.divmod(a, b)?;
        if !t.is_zero() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(s)
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.leading() {
            None => self.zero(),
            Some(l) => {
                let li = self.field.inv(l).expect("nonzero leading coefficient");
                self.scale(a, &li)
            }
        }
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Extended gcd: `(g, s, t)` with `s*a + t*b = g`, g monic.
    pub fn xgcd(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (qt, r) = self.divmod(&r0, &r1).expect("nonzero divisor");
            let s = self.sub(&s0, &self.mul(&qt, &s1));
            let t = self.sub(&t0, &self.mul(&qt, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = self.field.inv(l).expect("nonzero");
                (self.scale(&r0, &li), self.scale(&s0, &li), self.scale(&t0, &li))
            }
        }
    }

    /// Inverse of `a` modulo `m`, if it exists.
    pub fn inv_mod(&self, a: &Poly<F::Elem>, m: &Poly<F::Elem>) -> Option<Poly<F::Elem>> {
        let (g, s, _) = self.xgcd(a, m);
        if !self.is_one(&g) {
            return None;
        }
        self.rem(&s, m).ok()
    }

    pub fn mul_mod(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
        m: &Poly<F::Elem>,
    ) -> Poly<F::Elem> {
        self.rem(&self.mul(a, b), m).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, a: &Poly<F::Elem>, n: &BigUint, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut acc = self.rem(&self.one(), m).expect("nonzero modulus");
        let base = self.rem(a, m).expect("nonzero modulus");
        for i in (0..n.bits()).rev() {
            acc = self.mul_mod(&acc, &acc, m);
            if n.bit(i) {
                acc = self.mul_mod(&acc, &base, m);
            }
        }
        acc
    }

    pub fn pow(&self, a: &Poly<F::Elem>, n: u32) -> Poly<F::Elem> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn eval(&self, f: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        f.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| self.field.add(&self.field.mul(&acc, x), c))
    }

    /// Composition `f(g(x))`.
    pub fn compose(&self, f: &Poly<F::Elem>, g: &Poly<F::Elem>) -> Poly<F::Elem> {
        f.coeffs.iter().rev().fold(self.zero(), |acc, c| {
            self.add(&self.mul(&acc, g), &self.constant(c.clone()))
        })
    }

    pub fn derivative(&self, f: &Poly<F::Elem>) -> Poly<F::Elem> {
        let base = self.field.base();
        let v = f
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let k = self.field.from_base(base.from_int((i as u64 % base.p()) as i64));
                self.field.mul(c, &k)
            })
            .collect();
        self.from_coeffs(v)
    }

    /// Applies a coefficient map (e.g. an embedding into a larger field).
    pub fn map_coeffs<G: Field>(
        &self,
        target: &PolyRing<G>,
        f: &Poly<F::Elem>,
        map: impl Fn(&F::Elem) -> G::Elem,
    ) -> Poly<G::Elem> {
        target.from_coeffs(f.coeffs.iter().map(map).collect())
    }

    /// Highest degree first in the variable `var`; sums and fractions are parenthesized.
    pub fn format(&self, f: &Poly<F::Elem>, var: &str) -> String {
        let mut terms = Vec::new();
        for (i, c) in f.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let cs = self.field.format(c);
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(if i == 0 {
                cs
            } else if self.field.is_one(c) {
                mono
            } else if cs.contains(' ') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}
