//! Irreducibility, root finding and factorization over finite fields.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::poly::{Poly, PolyRing};

/// Fields up to this size are searched exhaustively for roots.
pub const EXHAUSTIVE_ROOT_LIMIT: u128 = 6561; // 3^8

/// Seed used by the randomized splitting steps unless a caller overrides it.
pub const DEFAULT_SEED: u64 = 0x5eed;

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_elem<F: FiniteField>(field: &F, rng: &mut ChaCha8Rng) -> F::Elem {
    let base = field.base();
    let q = base.q() as u32;
    let coords: Vec<_> = (0..field.degree())
        .map(|_| base.from_code(rng.gen_range(0..q)))
        .collect();
    field.from_coordinates(&coords)
}

/// Ordering key for polynomials: degree first, then coefficients from the top.
pub fn poly_key<F: FiniteField>(field: &F, f: &Poly<F::Elem>) -> (usize, Vec<Vec<u32>>) {
    (
        f.coeffs().len(),
        f.coeffs().iter().rev().map(|c| field.sort_key(c)).collect(),
    )
}

/// `x^(|F|^k) mod f` computed by k successive |F|-th powers.
fn x_frobenius_powers<F: FiniteField>(
    ring: &PolyRing<F>,
    f: &Poly<F::Elem>,
    count: usize,
) -> Vec<Poly<F::Elem>> {
    let order = ring.field().order();
    let mut out = Vec::with_capacity(count);
    let mut cur = ring.rem(&ring.x(), f).expect("nonzero modulus");
    for _ in 0..count {
        cur = ring.pow_mod(&cur, &order, f);
        out.push(cur.clone());
    }
    out
}

/// Ben-Or irreducibility test. Constants are not irreducible.
pub fn is_irreducible<F: FiniteField>(field: &F, f: &Poly<F::Elem>) -> Result<bool> {
    let n = f.degree().ok_or(Error::ZeroInput("is_irreducible"))?;
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let ring = PolyRing::new(field.clone());
    let f = ring.monic(f);
    let order = field.order();
    let x = ring.x();
    let mut cur = ring.rem(&x, &f)?;
    for _ in 1..=n / 2 {
        cur = ring.pow_mod(&cur, &order, &f);
        let g = ring.gcd(&f, &ring.sub(&cur, &x));
        if !ring.is_one(&g) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First monic irreducible polynomial of degree `n` in integer-code order:
/// the coefficient tuple `(c_0, ..., c_{n-1})` read as base-|F| digits with c_0 lowest.
pub fn first_irreducible<F: FiniteField>(field: &F, n: usize) -> Poly<F::Elem> {
    assert!(n >= 1);
    let ring = PolyRing::new(field.clone());
    let size = field.small_order().expect("coefficient field too large to enumerate");
    let mut index: u128 = 0;
    loop {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut k = index;
        for _ in 0..n {
            coeffs.push(field.element_from_index(k % size));
            k /= size;
        }
        coeffs.push(field.one());
        let f = ring.from_coeffs(coeffs);
        // a zero constant term means x divides f
        let skip = n > 1 && field.is_zero(&f.coeffs()[0]);
        if !skip && is_irreducible(field, &f).expect("nonzero") {
            return f;
        }
        index += 1;
    }
}

/// Square-free decomposition: pairs `(g_i, m_i)` with `f = lc * prod g_i^{m_i}`,
/// each `g_i` monic square-free, pairwise coprime.
pub fn squarefree_decomposition<F: FiniteField>(
    field: &F,
    f: &Poly<F::Elem>,
) -> Vec<(Poly<F::Elem>, usize)> {
    let ring = PolyRing::new(field.clone());
    let mut out = Vec::new();
    sff_rec(&ring, &ring.monic(f), 1, &mut out);
    out.sort_by_key(|(g, m)| (*m, poly_key(field, g)));
    out
}

fn sff_rec<F: FiniteField>(
    ring: &PolyRing<F>,
    f: &Poly<F::Elem>,
    mult: usize,
    out: &mut Vec<(Poly<F::Elem>, usize)>,
) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let field = ring.field();
    let p = field.characteristic() as usize;
    let df = ring.derivative(f);
    let mut c = ring.gcd(f, &df);
    let mut w = ring.div_exact(f, &c).expect("gcd divides");
    let mut i = 1;
    while !ring.is_one(&w) {
        let y = ring.gcd(&w, &c);
        let fac = ring.div_exact(&w, &y).expect("gcd divides");
        if !ring.is_one(&fac) {
            out.push((fac, i * mult));
        }
        w = y;
        c = ring.div_exact(&c, &w).expect("gcd divides");
        i += 1;
    }
    if !ring.is_one(&c) {
        // c is a polynomial in x^p: take the p-th root coefficientwise
        let coeffs: Vec<_> = c
            .coeffs()
            .iter()
            .step_by(p)
            .map(|a| field.pth_root(a))
            .collect();
        let root = ring.from_coeffs(coeffs);
        sff_rec(ring, &root, mult * p, out);
    }
}

/// Distinct-degree factorization of a monic square-free polynomial:
/// pairs `(g_d, d)` where `g_d` is the product of all irreducible factors of degree d.
pub fn distinct_degree<F: FiniteField>(
    field: &F,
    f: &Poly<F::Elem>,
) -> Vec<(Poly<F::Elem>, usize)> {
    let ring = PolyRing::new(field.clone());
    let order = field.order();
    let x = ring.x();
    let mut out = Vec::new();
    let mut rest = ring.monic(f);
    let mut cur = ring.rem(&x, &rest).expect("nonzero");
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        cur = ring.pow_mod(&cur, &order, &rest);
        let g = ring.gcd(&rest, &ring.sub(&cur, &x));
        if !ring.is_one(&g) {
            rest = ring.div_exact(&rest, &g).expect("gcd divides");
            cur = ring.rem(&cur, &rest).expect("nonzero");
            out.push((g, d));
        }
    }
    if let Some(n) = rest.degree().filter(|&n| n > 0) {
        out.push((rest, n));
    }
    out
}

/// Splits a monic square-free product of irreducibles of common degree `d`.
pub fn equal_degree_split<F: FiniteField>(
    field: &F,
    f: &Poly<F::Elem>,
    d: usize,
    seed: u64,
) -> Vec<Poly<F::Elem>> {
    let ring = PolyRing::new(field.clone());
    let mut rng = rng_for(seed);
    let mut out = Vec::new();
    let mut stack = vec![ring.monic(f)];
    while let Some(g) = stack.pop() {
        let n = g.degree().unwrap_or(0);
        if n == 0 {
            continue;
        }
        if n == d {
            out.push(g);
            continue;
        }
        let h = loop {
            let a = random_poly(&ring, n, &mut rng);
            let t = splitting_candidate(&ring, &a, &g, d);
            let h = ring.gcd(&g, &t);
            let dh = h.degree().unwrap_or(0);
            if dh > 0 && dh < n {
                break h;
            }
        };
        let other = ring.div_exact(&g, &h).expect("gcd divides");
        stack.push(h);
        stack.push(other);
    }
    out.sort_by_key(|g| poly_key(field, g));
    out
}

fn random_poly<F: FiniteField>(
    ring: &PolyRing<F>,
    below: usize,
    rng: &mut ChaCha8Rng,
) -> Poly<F::Elem> {
    let coeffs = (0..below).map(|_| random_elem(ring.field(), rng)).collect();
    ring.from_coeffs(coeffs)
}

/// `a^((Q^d - 1)/2) - 1` in odd characteristic, the trace `sum a^(2^i)` in characteristic 2.
fn splitting_candidate<F: FiniteField>(
    ring: &PolyRing<F>,
    a: &Poly<F::Elem>,
    g: &Poly<F::Elem>,
    d: usize,
) -> Poly<F::Elem> {
    let field = ring.field();
    let qd = field.order().pow(d as u32);
    if field.characteristic() == 2 {
        let bits = (qd.bits() - 1) as usize;
        let mut term = ring.rem(a, g).expect("nonzero");
        let mut acc = term.clone();
        for _ in 1..bits {
            term = ring.mul_mod(&term, &term, g);
            acc = ring.add(&acc, &term);
        }
        acc
    } else {
        let e = (qd - BigUint::one()) / BigUint::from(2u32);
        ring.sub(&ring.pow_mod(a, &e, g), &ring.one())
    }
}

/// Complete factorization into monic irreducibles with multiplicity, sorted.
pub fn factor<F: FiniteField>(
    field: &F,
    f: &Poly<F::Elem>,
) -> Result<Vec<(Poly<F::Elem>, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroInput("factor"));
    }
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(field, f) {
        for (h, d) in distinct_degree(field, &g) {
            for irr in equal_degree_split(field, &h, d, DEFAULT_SEED) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by_key(|(g, _)| poly_key(field, g));
    Ok(out)
}

/// Degrees of the irreducible factors, repeated by multiplicity, ascending.
pub fn factor_degrees<F: FiniteField>(field: &F, f: &Poly<F::Elem>) -> Result<Vec<usize>> {
    if f.is_zero() {
        return Err(Error::ZeroInput("factor_degrees"));
    }
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(field, f) {
        for (h, d) in distinct_degree(field, &g) {
            let count = h.degree().unwrap_or(0) / d;
            for _ in 0..count * m {
                out.push(d);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Distinct roots of `f` in `field`, ascending by [`FiniteField::sort_key`].
pub fn roots<F: FiniteField>(field: &F, f: &Poly<F::Elem>, seed: u64) -> Result<Vec<F::Elem>> {
    if f.is_zero() {
        return Err(Error::ZeroInput("roots"));
    }
    let ring = PolyRing::new(field.clone());
    let mut out = match field.small_order() {
        Some(n) if n <= EXHAUSTIVE_ROOT_LIMIT => (0..n)
            .map(|i| field.element_from_index(i))
            .filter(|a| field.is_zero(&ring.eval(f, a)))
            .collect(),
        _ => {
            let f = ring.monic(f);
            // product of the distinct linear factors
            let xq = x_frobenius_powers(&ring, &f, 1).pop().expect("one power");
            let lin = ring.gcd(&f, &ring.sub(&xq, &ring.x()));
            equal_degree_split(field, &lin, 1, seed)
                .into_iter()
                .map(|g| field.neg(&g.coeffs()[0]))
                .collect::<Vec<_>>()
        }
    };
    out.sort_by_key(|a| field.sort_key(a));
    Ok(out)
}
