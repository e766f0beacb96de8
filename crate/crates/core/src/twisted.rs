//! The twisted polynomial ring C{tau} with `tau * a = a^q * tau`, and its
//! realization as additive q-polynomials under composition.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Poly, PolyRing};

/// `c_0 + c_1 tau + ... + c_n tau^n`; no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedPoly<E> {
    coeffs: Vec<E>,
}

impl<E> TwistedPoly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// tau-degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

/// Arithmetic in `C{tau}` for a coefficient field object.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedRing<F: Field> {
    field: F,
}

impl<F: Field> TwistedRing<F> {
    pub fn new(field: F) -> Self {
        TwistedRing { field }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> TwistedPoly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        TwistedPoly { coeffs }
    }

    pub fn zero(&self) -> TwistedPoly<F::Elem> {
        TwistedPoly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> TwistedPoly<F::Elem> {
        self.scalar(self.field.one())
    }

    pub fn scalar(&self, c: F::Elem) -> TwistedPoly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    /// `tau^k`.
    pub fn tau_pow(&self, k: usize) -> TwistedPoly<F::Elem> {
        let mut v = vec![self.field.zero(); k + 1];
        v[k] = self.field.one();
        TwistedPoly { coeffs: v }
    }

    pub fn tau(&self) -> TwistedPoly<F::Elem> {
        self.tau_pow(1)
    }

    pub fn add(&self, u: &TwistedPoly<F::Elem>, v: &TwistedPoly<F::Elem>) -> TwistedPoly<F::Elem> {
        let n = u.coeffs.len().max(v.coeffs.len());
        let z = self.field.zero();
        self.from_coeffs(
            (0..n)
                .map(|i| {
                    self.field
                        .add(u.coeffs.get(i).unwrap_or(&z), v.coeffs.get(i).unwrap_or(&z))
                })
                .collect(),
        )
    }

    pub fn neg(&self, u: &TwistedPoly<F::Elem>) -> TwistedPoly<F::Elem> {
        TwistedPoly {
            coeffs: u.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, u: &TwistedPoly<F::Elem>, v: &TwistedPoly<F::Elem>) -> TwistedPoly<F::Elem> {
        self.add(u, &self.neg(v))
    }

    /// `c * u` (scalar on the left).
    pub fn scale_left(&self, c: &F::Elem, u: &TwistedPoly<F::Elem>) -> TwistedPoly<F::Elem> {
        self.from_coeffs(u.coeffs.iter().map(|x| self.field.mul(c, x)).collect())
    }

    /// Twisted product: `(sum a_i tau^i)(sum b_j tau^j) = sum a_i b_j^(q^i) tau^(i+j)`.
    pub fn mul(&self, u: &TwistedPoly<F::Elem>, v: &TwistedPoly<F::Elem>) -> TwistedPoly<F::Elem> {
        if u.is_zero() || v.is_zero() {
            return self.zero();
        }
        let mut out = vec![self.field.zero(); u.coeffs.len() + v.coeffs.len() - 1];
        // twisted[j] holds b_j^(q^i) for the current i
        let mut twisted: Vec<F::Elem> = v.coeffs.clone();
        for (i, a) in u.coeffs.iter().enumerate() {
            if i > 0 {
                for b in twisted.iter_mut() {
                    *b = self.field.frobenius(b);
                }
            }
            if self.field.is_zero(a) {
                continue;
            }
            for (j, b) in twisted.iter().enumerate() {
                if !self.field.is_zero(b) {
                    out[i + j] = self.field.add(&out[i + j], &self.field.mul(a, b));
                }
            }
        }
        self.from_coeffs(out)
    }

    pub fn pow(&self, u: &TwistedPoly<F::Elem>, n: u32) -> TwistedPoly<F::Elem> {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, u))
    }

    /// Right division: `u = quotient * v + remainder` with `deg remainder < deg v`.
    pub fn right_divmod(
        &self,
        u: &TwistedPoly<F::Elem>,
        v: &TwistedPoly<F::Elem>,
    ) -> Result<(TwistedPoly<F::Elem>, TwistedPoly<F::Elem>)> {
        let n = v.degree().ok_or(Error::DivisionByZero)?;
        let lead = v.coeffs[n].clone();
        let mut rem = u.coeffs.clone();
        if rem.len() <= n {
            return Ok((self.zero(), u.clone()));
        }
        let m = rem.len() - 1;
        let mut quot = vec![self.field.zero(); m - n + 1];
        // lead^(q^k) for k = 0..=m-n
        let mut lead_pows = Vec::with_capacity(m - n + 1);
        let mut lp = lead;
        for _ in 0..=(m - n) {
            lead_pows.push(lp.clone());
            lp = self.field.frobenius(&lp);
        }
        for k in (n..=m).rev() {
            if self.field.is_zero(&rem[k]) {
                continue;
            }
            let shift = k - n;
            let x = self
                .field
                .div(&rem[k], &lead_pows[shift])
                .ok_or(Error::DivisionByZero)?;
            // subtract x tau^shift v = sum x v_j^(q^shift) tau^(shift + j)
            for (j, vj) in v.coeffs.iter().enumerate() {
                if self.field.is_zero(vj) {
                    continue;
                }
                let t = self.field.mul(&x, &self.field.frobenius_pow(vj, shift));
                rem[shift + j] = self.field.sub(&rem[shift + j], &t);
            }
            quot[shift] = x;
        }
        rem.truncate(n);
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    /// The constant coefficient.
    pub fn d_part(&self, u: &TwistedPoly<F::Elem>) -> F::Elem {
        u.coeffs.first().cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Index of the lowest nonzero coefficient.
    pub fn height(&self, u: &TwistedPoly<F::Elem>) -> Option<usize> {
        u.coeffs.iter().position(|c| !self.field.is_zero(c))
    }

    /// `u(x) = sum c_i x^(q^i)`.
    pub fn eval(&self, u: &TwistedPoly<F::Elem>, x: &F::Elem) -> F::Elem {
        let mut acc = self.field.zero();
        let mut xp = x.clone();
        for (i, c) in u.coeffs.iter().enumerate() {
            if i > 0 {
                xp = self.field.frobenius(&xp);
            }
            if !self.field.is_zero(c) {
                acc = self.field.add(&acc, &self.field.mul(c, &xp));
            }
        }
        acc
    }

    /// The additive polynomial attached to `u`.
    pub fn to_q_poly(&self, u: &TwistedPoly<F::Elem>) -> QPolynomial<F::Elem> {
        QPolynomial {
            q: self.field.q(),
            coeffs: u.coeffs.clone(),
        }
    }

    pub fn from_q_poly(&self, p: &QPolynomial<F::Elem>) -> TwistedPoly<F::Elem> {
        self.from_coeffs(p.coeffs.clone())
    }

    /// Renders `c0 + c1*t + c2*t^2`, tau printed as `t`.
    pub fn format(&self, u: &TwistedPoly<F::Elem>) -> String {
        let mut terms = Vec::new();
        for (i, c) in u.coeffs.iter().enumerate() {
            if self.field.is_zero(c) {
                continue;
            }
            let cs = self.field.format(c);
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            let term = if i == 0 {
                cs
            } else if self.field.is_one(c) {
                mono
            } else if cs.contains(' ') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Additive polynomial `sum c_i x^(q^i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPolynomial<E> {
    q: u64,
    coeffs: Vec<E>,
}

impl<E: Clone> QPolynomial<E> {
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Coefficient of `x^(q^i)` at index i.
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    /// Ordinary degree `q^n`; `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        self.coeffs.len().checked_sub(1).map(|n| self.q.pow(n as u32))
    }

    /// The same polynomial as a dense univariate polynomial in x.
    pub fn to_dense<F: Field<Elem = E>>(&self, field: &F) -> Poly<E> {
        let ring = PolyRing::new(field.clone());
        let Some(deg) = self.degree() else { return ring.zero() };
        let mut v = vec![field.zero(); deg as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[self.q.pow(i as u32) as usize] = c.clone();
        }
        ring.from_coeffs(v)
    }

    pub fn eval<F: Field<Elem = E>>(&self, field: &F, x: &E) -> E {
        TwistedRing::new(field.clone()).eval(&TwistedPoly { coeffs: self.coeffs.clone() }, x)
    }

    /// `self(other(x))`.
    pub fn compose<F: Field<Elem = E>>(&self, field: &F, other: &QPolynomial<E>) -> QPolynomial<E> {
        let ring = TwistedRing::new(field.clone());
        let u = ring.from_coeffs(self.coeffs.clone());
        let v = ring.from_coeffs(other.coeffs.clone());
        ring.to_q_poly(&ring.mul(&u, &v))
    }
}
