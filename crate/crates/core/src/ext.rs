//! Finite extensions F_q[x]/(m) of the constant field: splitting fields for
//! torsion and residue fields A/l.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::factor::{self, first_irreducible};
use crate::field::{FiniteField, Field};
use crate::fq::{FqContext, FqElem};
use crate::poly::{Poly, PolyRing};
use crate::polya::{format_poly, PolyA};

/// Element of an [`ExtField`]: coordinates in the power basis `1, x, ..., x^{N-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtElem(Vec<FqElem>);

impl ExtElem {
    pub fn coords(&self) -> &[FqElem] {
        &self.0
    }
}

struct ExtInner {
    fq: FqContext,
    modulus: PolyA,
    n: usize,
    symbol: String,
    /// Coordinates of `x^(j q)` for each basis vector `x^j`.
    frob: Vec<Vec<FqElem>>,
}

/// F_q[x]/(m) for a monic irreducible m of degree N.
#[derive(Clone)]
pub struct ExtField(Arc<ExtInner>);

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.fq == other.0.fq && self.0.modulus == other.0.modulus)
    }
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}[{}]/({})",
            self.0.fq.q(),
            self.0.symbol,
            format_poly(&self.0.fq, self.0.modulus.coeffs(), &self.0.symbol)
        )
    }
}

fn modulus_cache() -> &'static Mutex<HashMap<(u64, u32, usize), PolyA>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32, usize), PolyA>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// First monic irreducible of degree `n` over F_q (memoized).
pub fn default_modulus(fq: &FqContext, n: usize) -> PolyA {
    let key = (fq.p(), fq.e(), n);
    if let Some(m) = modulus_cache().lock().expect("cache lock").get(&key) {
        return m.clone();
    }
    let m = first_irreducible(fq, n);
    modulus_cache()
        .lock()
        .expect("cache lock")
        .insert(key, m.clone());
    m
}

impl ExtField {
    /// F_q[symbol]/(modulus); the modulus must be monic irreducible.
    pub fn new(fq: &FqContext, modulus: &PolyA, symbol: &str) -> Result<Self> {
        let ring = fq.poly_ring();
        if modulus.is_zero() {
            return Err(Error::ZeroInput("extension modulus"));
        }
        let modulus = ring.monic(modulus);
        if !factor::is_irreducible(fq, &modulus)? {
            return Err(Error::NotIrreducible(format_poly(fq, modulus.coeffs(), symbol)));
        }
        Ok(Self::new_unchecked(fq, modulus, symbol))
    }

    fn new_unchecked(fq: &FqContext, modulus: PolyA, symbol: &str) -> Self {
        let ring = fq.poly_ring();
        let n = modulus.degree().expect("nonzero modulus");
        let xq = ring.pow_mod(&ring.x(), &fq.q().into(), &modulus);
        let mut frob = Vec::with_capacity(n);
        let mut cur = ring.one();
        for _ in 0..n {
            let mut c = cur.coeffs().to_vec();
            c.resize(n, FqElem::ZERO);
            frob.push(c);
            cur = ring.mul_mod(&cur, &xq, &modulus);
        }
        ExtField(Arc::new(ExtInner {
            fq: fq.clone(),
            modulus,
            n,
            symbol: symbol.to_string(),
            frob,
        }))
    }

    /// F_{q^n} with the first monic irreducible of degree n as modulus, generator `y`.
    pub fn extension(fq: &FqContext, n: usize) -> Self {
        Self::new_unchecked(fq, default_modulus(fq, n), "y")
    }

    /// The residue field A/l, generator printed as `T`.
    pub fn residue(fq: &FqContext, ell: &PolyA) -> Result<Self> {
        Self::new(fq, ell, "T")
    }

    pub fn fq(&self) -> &FqContext {
        &self.0.fq
    }

    pub fn modulus(&self) -> &PolyA {
        &self.0.modulus
    }

    pub fn symbol(&self) -> &str {
        &self.0.symbol
    }

    /// Residue class of a polynomial in F_q[x].
    pub fn from_poly(&self, f: &PolyA) -> ExtElem {
        let ring = self.0.fq.poly_ring();
        let r = ring.rem(f, &self.0.modulus).expect("nonzero modulus");
        let mut c = r.into_coeffs();
        c.resize(self.0.n, FqElem::ZERO);
        ExtElem(c)
    }

    pub fn to_poly(&self, a: &ExtElem) -> PolyA {
        self.0.fq.poly_ring().from_coeffs(a.0.clone())
    }

    /// The class of the generator x.
    pub fn gen(&self) -> ExtElem {
        self.from_poly(&self.0.fq.t())
    }

    /// Evaluates a polynomial over F_q at an element of this field.
    pub fn eval_polya(&self, f: &PolyA, at: &ExtElem) -> ExtElem {
        f.coeffs().iter().rev().fold(self.zero(), |acc, c| {
            self.add(&self.mul(&acc, at), &self.from_base(*c))
        })
    }

    fn mul_raw(&self, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
        let fq = &self.0.fq;
        let n = self.0.n;
        let mut prod = vec![FqElem::ZERO; 2 * n];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = fq.fadd(prod[i + j], fq.fmul(x, y));
                }
            }
        }
        let m = self.0.modulus.coeffs();
        for k in (n..2 * n).rev() {
            let c = prod[k];
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                if !m[j].is_zero() {
                    prod[k - n + j] = fq.fsub(prod[k - n + j], fq.fmul(c, m[j]));
                }
            }
            prod[k] = FqElem::ZERO;
        }
        prod.truncate(n);
        prod
    }
}

impl Field for ExtField {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        ExtElem(vec![FqElem::ZERO; self.0.n])
    }

    fn one(&self) -> ExtElem {
        let mut v = vec![FqElem::ZERO; self.0.n];
        v[0] = self.0.fq.one_elem();
        ExtElem(v)
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let fq = &self.0.fq;
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| fq.fadd(x, y)).collect())
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        let fq = &self.0.fq;
        ExtElem(a.0.iter().map(|&x| fq.fneg(x)).collect())
    }

    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let fq = &self.0.fq;
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| fq.fsub(x, y)).collect())
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(self.mul_raw(&a.0, &b.0))
    }

    fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        if a.0.iter().all(|c| c.is_zero()) {
            return None;
        }
        let ring = self.0.fq.poly_ring();
        let inv = ring.inv_mod(&self.to_poly(a), &self.0.modulus)?;
        Some(self.from_poly(&inv))
    }

    fn base(&self) -> &FqContext {
        &self.0.fq
    }

    fn from_base(&self, c: FqElem) -> ExtElem {
        let mut v = vec![FqElem::ZERO; self.0.n];
        v[0] = c;
        ExtElem(v)
    }

    fn frobenius(&self, a: &ExtElem) -> ExtElem {
        let fq = &self.0.fq;
        let n = self.0.n;
        let mut out = vec![FqElem::ZERO; n];
        for (j, &c) in a.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // coefficients lie in F_q, so (c x^j)^q = c x^(jq)
            for (o, &v) in out.iter_mut().zip(&self.0.frob[j]) {
                if !v.is_zero() {
                    *o = fq.fadd(*o, fq.fmul(c, v));
                }
            }
        }
        ExtElem(out)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn is_algebraic(&self, _a: &ExtElem) -> bool {
        true
    }

    fn format(&self, a: &ExtElem) -> String {
        format_poly(&self.0.fq, &a.0, &self.0.symbol)
    }
}

impl FiniteField for ExtField {
    fn degree(&self) -> usize {
        self.0.n
    }

    fn coordinates(&self, a: &ExtElem) -> Vec<FqElem> {
        a.0.clone()
    }

    fn from_coordinates(&self, coords: &[FqElem]) -> ExtElem {
        assert_eq!(coords.len(), self.0.n);
        ExtElem(coords.to_vec())
    }
}

/// Field embedding `small -> large` determined by the image of the generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    small: ExtField,
    large: ExtField,
    image_of_gen: ExtElem,
}

impl Embedding {
    /// Sends the generator of `small` to the smallest root of its modulus in `large`.
    pub fn find(small: &ExtField, large: &ExtField, seed: u64) -> Result<Self> {
        if small.fq() != large.fq() || large.degree() % small.degree() != 0 {
            return Err(Error::FieldMismatch);
        }
        let ring = PolyRing::new(large.clone());
        let m = ring.from_coeffs(
            small
                .modulus()
                .coeffs()
                .iter()
                .map(|&c| large.from_base(c))
                .collect(),
        );
        let roots = factor::roots(large, &m, seed)?;
        let image_of_gen = roots
            .into_iter()
            .next()
            .ok_or_else(|| Error::Internal("modulus has no root in the larger field".into()))?;
        Ok(Embedding {
            small: small.clone(),
            large: large.clone(),
            image_of_gen,
        })
    }

    pub fn image_of_gen(&self) -> &ExtElem {
        &self.image_of_gen
    }

    pub fn apply(&self, a: &ExtElem) -> ExtElem {
        self.large.eval_polya(&self.small.to_poly(a), &self.image_of_gen)
    }

    pub fn apply_poly(&self, f: &Poly<ExtElem>) -> Poly<ExtElem> {
        let ring = PolyRing::new(self.large.clone());
        ring.from_coeffs(f.coeffs().iter().map(|c| self.apply(c)).collect())
    }
}

/// All distinct roots in F_{q^{m n}} of a polynomial over `small` = F_{q^m}, ascending.
pub fn roots_in_extension(
    small: &ExtField,
    f: &Poly<ExtElem>,
    n: usize,
    seed: u64,
) -> Result<(ExtField, Vec<ExtElem>)> {
    if f.is_zero() {
        return Err(Error::ZeroInput("roots_in_extension"));
    }
    if n == 0 {
        return Err(Error::InvalidField("extension degree must be >= 1".into()));
    }
    let large = ExtField::extension(small.fq(), small.degree() * n);
    let emb = Embedding::find(small, &large, seed)?;
    let g = emb.apply_poly(f);
    let roots = factor::roots(&large, &g, seed)?;
    Ok((large, roots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::DEFAULT_SEED;

    #[test]
    fn f9_as_extension_has_i_squared_minus_one() {
        let f3 = FqContext::new(3, 1).unwrap();
        let f9 = ExtField::extension(&f3, 2);
        assert_eq!(f9.modulus(), &f3.poly(&[1, 0, 1]));
        let i = f9.gen();
        assert_eq!(f9.mul(&i, &i), f9.from_base(f3.from_int(-1)));
    }

    #[test]
    fn roots_examples_q3() {
        let f3 = FqContext::new(3, 1).unwrap();
        let base = ExtField::extension(&f3, 1);
        let ring = PolyRing::new(base.clone());
        let mk = |c: &[i64]| ring.from_coeffs(c.iter().map(|&x| base.from_base(f3.from_int(x))).collect());
        // x^3 + x over F_9: {0, i, 2i}
        let (f9, r) = roots_in_extension(&base, &mk(&[0, 1, 0, 1]), 2, DEFAULT_SEED).unwrap();
        let i = f9.gen();
        assert_eq!(r, vec![f9.zero(), i.clone(), f9.add(&i, &i)]);
        // x^2 + 1 over F_3: none
        let (_, r) = roots_in_extension(&base, &mk(&[1, 0, 1]), 1, DEFAULT_SEED).unwrap();
        assert!(r.is_empty());
        // x^3 - x over F_3: all of F_3
        let (f, r) = roots_in_extension(&base, &mk(&[0, -1, 0, 1]), 1, DEFAULT_SEED).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[2], f.from_base(f3.from_int(2)));
    }

    /// Exhaustive check that x^(q^n) - x has exactly q^n roots, including in the EDF regime.
    #[test]
    fn full_field_root_count() {
        let f3 = FqContext::new(3, 1).unwrap();
        let base = ExtField::extension(&f3, 1);
        let ring = PolyRing::new(base.clone());
        for n in 1..=3 {
            let mut c = vec![base.zero(); 3usize.pow(n as u32) + 1];
            c[1] = base.from_base(f3.from_int(-1));
            *c.last_mut().unwrap() = base.one();
            let (_, r) = roots_in_extension(&base, &ring.from_coeffs(c), n, DEFAULT_SEED).unwrap();
            assert_eq!(r.len(), 3usize.pow(n as u32));
        }
    }

    #[test]
    fn exhaustive_and_splitting_roots_agree() {
        // F_3^9 = 19683 > 3^8 uses splitting; compare against evaluation on the roots of a known product.
        let f3 = FqContext::new(3, 1).unwrap();
        let big = ExtField::extension(&f3, 9);
        let ring = PolyRing::new(big.clone());
        let a = big.gen();
        let b = big.add(&big.mul(&a, &a), &big.one());
        let f = ring.mul(
            &ring.from_coeffs(vec![big.neg(&a), big.one()]),
            &ring.from_coeffs(vec![big.neg(&b), big.one()]),
        );
        let f = ring.mul(&f, &ring.from_coeffs(vec![big.one(), big.zero(), big.one()]));
        let r = factor::roots(&big, &f, DEFAULT_SEED).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&a) && r.contains(&b));
    }

    #[test]
    fn frobenius_fixes_exactly_the_base_field() {
        let f3 = FqContext::new(3, 1).unwrap();
        for n in 1..=6 {
            let f = ExtField::extension(&f3, n);
            let total = 3u128.pow(n as u32);
            let fixed = (0..total)
                .map(|k| f.element_from_index(k))
                .filter(|a| f.frobenius(a) == *a)
                .count();
            assert_eq!(fixed, 3, "n = {n}");
        }
    }

    #[test]
    fn residue_field_rejects_reducible() {
        let f3 = FqContext::new(3, 1).unwrap();
        assert!(matches!(ExtField::residue(&f3, &f3.poly(&[0, 1, 1])), Err(Error::NotIrreducible(_))));
        let r = ExtField::residue(&f3, &f3.poly(&[1, 0, 1])).unwrap();
        assert_eq!(r.format(&r.gen()), "T");
    }
}
