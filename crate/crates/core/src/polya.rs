//! The polynomial ring A = F_q[T].

use crate::error::{Error, Result};
use crate::factor;
use crate::fq::{FqContext, FqElem};
use crate::poly::{Poly, PolyRing};

pub type PolyA = Poly<FqElem>;

impl FqContext {
    pub fn poly_ring(&self) -> PolyRing<FqContext> {
        PolyRing::new(self.clone())
    }

    /// Polynomial from integer coefficients (low degree first), reduced into the prime field.
    pub fn poly(&self, coeffs: &[i64]) -> PolyA {
        self.poly_ring()
            .from_coeffs(coeffs.iter().map(|&c| self.from_int(c)).collect())
    }

    /// `T`.
    pub fn t(&self) -> PolyA {
        self.poly_ring().x()
    }
}

/// Multiplicity of the monic irreducible `p` in `f` (f nonzero).
pub fn ord(fq: &FqContext, f: &PolyA, p: &PolyA) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroInput("ord"));
    }
    let ring = fq.poly_ring();
    let mut k = 0;
    let mut cur = f.clone();
    loop {
        let (s, t) = ring.divmod(&cur, p)?;
        if !t.is_zero() {
            return Ok(k);
        }
        cur = s;
        k += 1;
    }
}

/// All monic irreducible polynomials of degree `d` over F_q, in integer-code order.
pub fn monic_irreducibles(fq: &FqContext, d: usize) -> Vec<PolyA> {
    let ring = fq.poly_ring();
    let q = fq.q() as u128;
    let count = q.pow(d as u32);
    (0..count)
        .filter_map(|mut k| {
            let mut coeffs: Vec<FqElem> = (0..d)
                .map(|_| {
                    let c = (k % q) as u32;
                    k /= q;
                    fq.from_code(c)
                })
                .collect();
            coeffs.push(fq.from_code(1));
            let f = ring.from_coeffs(coeffs);
            factor::is_irreducible(fq, &f).unwrap_or(false).then_some(f)
        })
        .collect()
}

/// Renders a polynomial over F_q in the variable `var`, highest degree first,
/// e.g. `T^5 + 2*T` or `(z + 1)*T^2 + z`.
pub fn format_poly(fq: &FqContext, coeffs: &[FqElem], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = fq.format_elem(*c);
        let composite = cs.contains('+');
        let coef = if composite { format!("({cs})") } else { cs.clone() };
        let t = match i {
            0 => cs,
            _ => {
                let mono = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                if c.code() == 1 {
                    mono
                } else {
                    format!("{coef}*{mono}")
                }
            }
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
