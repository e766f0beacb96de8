//! The rational function field F = F_q(T).

use crate::error::{Error, Result};
use crate::field::Field;
use crate::fq::{FqContext, FqElem};
use crate::poly::PolyRing;
use crate::polya::{format_poly, PolyA};

/// A reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunc {
    num: PolyA,
    den: PolyA,
}

impl RationalFunc {
    pub fn num(&self) -> &PolyA {
        &self.num
    }

    pub fn den(&self) -> &PolyA {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Whether the denominator is 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunctionField {
    fq: FqContext,
    ring: PolyRing<FqContext>,
}

impl RationalFunctionField {
    pub fn new(fq: &FqContext) -> Self {
        RationalFunctionField {
            fq: fq.clone(),
            ring: fq.poly_ring(),
        }
    }

    pub fn fq(&self) -> &FqContext {
        &self.fq
    }

    pub fn poly_ring(&self) -> &PolyRing<FqContext> {
        &self.ring
    }

    /// Canonical form of `num / den`.
    pub fn frac(&self, num: &PolyA, den: &PolyA) -> Result<RationalFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(self.zero());
        }
        let r = &self.ring;
        let g = r.gcd(num, den);
        let (mut n, mut d) = (r.div_exact(num, &g)?, r.div_exact(den, &g)?);
        let lc = *d.leading().expect("nonzero");
        if !self.fq.is_one(&lc) {
            let li = self.fq.finv(lc).expect("nonzero");
            n = r.scale(&n, &li);
            d = r.scale(&d, &li);
        }
        Ok(RationalFunc { num: n, den: d })
    }

    pub fn from_poly(&self, f: &PolyA) -> RationalFunc {
        RationalFunc {
            num: f.clone(),
            den: self.ring.one(),
        }
    }

    /// `T`.
    pub fn t(&self) -> RationalFunc {
        self.from_poly(&self.fq.t())
    }

    pub fn format_poly(&self, f: &PolyA) -> String {
        format_poly(&self.fq, f.coeffs(), "T")
    }

    fn exact(&self, a: &PolyA, b: &PolyA) -> PolyA {
        if self.ring.is_one(b) {
            return a.clone();
        }
        self.ring.div_exact(a, b).expect("exact division by a gcd")
    }

    /// Makes a coprime pair canonical (monic denominator).
    fn normalized(&self, mut num: PolyA, mut den: PolyA) -> RationalFunc {
        let lc = *den.leading().expect("nonzero denominator");
        if !self.fq.is_one(&lc) {
            let li = self.fq.finv(lc).expect("nonzero");
            num = self.ring.scale(&num, &li);
            den = self.ring.scale(&den, &li);
        }
        RationalFunc { num, den }
    }

    /// `f(T)^q = f^{(q)}(T^q)`; coefficients of F_q are fixed by the q-power map.
    fn spread(&self, f: &PolyA) -> PolyA {
        let q = self.fq.q() as usize;
        let Some(d) = f.degree() else { return f.clone() };
        let mut v = vec![FqElem::ZERO; d * q + 1];
        for (i, c) in f.coeffs().iter().enumerate() {
            v[i * q] = *c;
        }
        self.ring.from_coeffs(v)
    }
}

impl Field for RationalFunctionField {
    type Elem = RationalFunc;

    fn zero(&self) -> RationalFunc {
        RationalFunc {
            num: self.ring.zero(),
            den: self.ring.one(),
        }
    }

    fn one(&self) -> RationalFunc {
        self.from_poly(&self.ring.one())
    }

    fn add(&self, a: &RationalFunc, b: &RationalFunc) -> RationalFunc {
        let r = &self.ring;
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        // Henrici: only the gcd with g = gcd(den_a, den_b) can cancel
        let g = r.gcd(&a.den, &b.den);
        let (ad, bd) = (self.exact(&a.den, &g), self.exact(&b.den, &g));
        let num = r.add(&r.mul(&a.num, &bd), &r.mul(&b.num, &ad));
        if num.is_zero() {
            return self.zero();
        }
        let den = r.mul(&a.den, &bd);
        if r.is_one(&g) {
            return self.normalized(num, den);
        }
        let h = r.gcd(&num, &g);
        self.normalized(self.exact(&num, &h), self.exact(&den, &h))
    }

    fn neg(&self, a: &RationalFunc) -> RationalFunc {
        RationalFunc {
            num: self.ring.neg(&a.num),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RationalFunc, b: &RationalFunc) -> RationalFunc {
        let r = &self.ring;
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if a.is_polynomial() && b.is_polynomial() {
            return self.from_poly(&r.mul(&a.num, &b.num));
        }
        // cross-cancel first so that the product is already reduced
        let g1 = r.gcd(&a.num, &b.den);
        let g2 = r.gcd(&b.num, &a.den);
        let num = r.mul(&self.exact(&a.num, &g1), &self.exact(&b.num, &g2));
        let den = r.mul(&self.exact(&a.den, &g2), &self.exact(&b.den, &g1));
        self.normalized(num, den)
    }

    fn inv(&self, a: &RationalFunc) -> Option<RationalFunc> {
        if a.is_zero() {
            return None;
        }
        self.frac(&a.den, &a.num).ok()
    }

    fn base(&self) -> &FqContext {
        &self.fq
    }

    fn from_base(&self, c: FqElem) -> RationalFunc {
        self.from_poly(&self.ring.constant(c))
    }

    fn frobenius(&self, a: &RationalFunc) -> RationalFunc {
        // the q-power map is a ring endomorphism, so the fraction stays reduced
        RationalFunc {
            num: self.spread(&a.num),
            den: self.spread(&a.den),
        }
    }

    fn is_finite(&self) -> bool {
        false
    }

    fn is_algebraic(&self, a: &RationalFunc) -> bool {
        a.num.degree().unwrap_or(0) == 0 && a.den.degree() == Some(0)
    }

    fn format(&self, a: &RationalFunc) -> String {
        let wrap = |s: String| {
            if s.contains(' ') || s.contains('*') {
                format!("({s})")
            } else {
                s
            }
        };
        let n = self.format_poly(&a.num);
        if a.is_polynomial() {
            n
        } else {
            format!("{} / {}", wrap(n), wrap(self.format_poly(&a.den)))
        }
    }
}
