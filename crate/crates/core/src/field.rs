//! Field abstractions shared by every coefficient domain.
//!
//! Fields are runtime objects (the modulus of an extension, the constant field
//! F_q) and elements are plain data, so every operation goes through the field
//! value: `field.mul(&a, &b)`.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;

use crate::fq::{FqContext, FqElem};

/// A field containing the constant field F_q, equipped with the q-power Frobenius.
pub trait Field: Clone + Debug + PartialEq {
    type Elem: Clone + Debug + PartialEq + Eq + Hash;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// The constant field F_q whose q defines the twist `tau * a = a^q * tau`.
    fn base(&self) -> &FqContext;
    fn from_base(&self, c: FqElem) -> Self::Elem;

    /// `a -> a^q`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;

    /// Whether the field is finite.
    fn is_finite(&self) -> bool;

    /// Whether `a` is algebraic over F_q. Always true in a finite field.
    fn is_algebraic(&self, a: &Self::Elem) -> bool;

    /// Human-readable rendering that the expression parser accepts back.
    fn format(&self, a: &Self::Elem) -> String;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn pow_big(&self, a: &Self::Elem, n: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..n.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if n.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// `a -> a^(q^k)`.
    fn frobenius_pow(&self, a: &Self::Elem, k: usize) -> Self::Elem {
        let mut x = a.clone();
        for _ in 0..k {
            x = self.frobenius(&x);
        }
        x
    }

    /// q, the size of the constant field.
    fn q(&self) -> u64 {
        self.base().q()
    }
}

/// A finite field F_{q^N}, viewed as an N-dimensional F_q-vector space.
pub trait FiniteField: Field {
    /// N = [self : F_q].
    fn degree(&self) -> usize;

    /// Coordinates over F_q in the field's fixed basis; length `degree()`.
    fn coordinates(&self, a: &Self::Elem) -> Vec<FqElem>;

    fn from_coordinates(&self, coords: &[FqElem]) -> Self::Elem;

    fn characteristic(&self) -> u64 {
        self.base().p()
    }

    fn order(&self) -> BigUint {
        BigUint::from(self.q()).pow(self.degree() as u32)
    }

    /// Deterministic total order key: the integer whose base-p digits are the
    /// prime-field coordinates, compared from the top digit down.
    fn sort_key(&self, a: &Self::Elem) -> Vec<u32> {
        self.coordinates(a).iter().rev().map(|c| c.code()).collect()
    }

    /// Element with the given integer code (digits in base q, low coordinate first).
    fn element_from_index(&self, mut index: u128) -> Self::Elem {
        let q = self.q() as u128;
        let base = self.base();
        let coords: Vec<FqElem> = (0..self.degree())
            .map(|_| {
                let c = (index % q) as u32;
                index /= q;
                base.from_code(c)
            })
            .collect();
        self.from_coordinates(&coords)
    }

    /// Unique p-th root, `a^(|F|/p)`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let e = self.order() / BigUint::from(self.characteristic());
        self.pow_big(a, &e)
    }

    /// Number of elements if it fits in a u128.
    fn small_order(&self) -> Option<u128> {
        let o = self.order();
        if o.bits() <= 127 {
            Some(o.iter_u64_digits().rev().fold(0u128, |acc, d| (acc << 64) | d as u128))
        } else {
            None
        }
    }
}
