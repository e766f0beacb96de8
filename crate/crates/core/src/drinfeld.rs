//! Drinfeld modules, isogenies, kernels and quotients, reduction at places.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ext::ExtField;
use crate::factor;
use crate::field::{FiniteField, Field};
use crate::fq::FqContext;
use crate::linalg;
use crate::polya::{format_poly, ord, PolyA};
use crate::ratfunc::{RationalFunc, RationalFunctionField};
use crate::twisted::{QPolynomial, TwistedPoly, TwistedRing};

/// A Drinfeld module, determined by `phi_T = gamma(T) + g_1 tau + ... + g_r tau^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct DrinfeldModule<F: Field> {
    ring: TwistedRing<F>,
    phi_t: TwistedPoly<F::Elem>,
}

impl DrinfeldModule<RationalFunctionField> {
    /// Module over F_q(T) with gamma the inclusion, `g = [g_1, ..., g_rank]`.
    pub fn over_function_field(
        field: &RationalFunctionField,
        rank: usize,
        g: Vec<RationalFunc>,
    ) -> Result<Self> {
        if g.len() != rank {
            return Err(Error::InvalidModule(format!(
                "rank {rank} needs {rank} coefficients, got {}",
                g.len()
            )));
        }
        Self::from_coefficients(field.clone(), field.t(), g)
    }
}

impl<F: Field> DrinfeldModule<F> {
    /// `phi_T = gamma_t + sum g_i tau^i`; the last coefficient must be nonzero.
    pub fn from_coefficients(field: F, gamma_t: F::Elem, g: Vec<F::Elem>) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::InvalidModule("rank must be at least 1".into()));
        }
        if field.is_zero(g.last().expect("nonempty")) {
            return Err(Error::InvalidModule("leading coefficient g_r is zero".into()));
        }
        let ring = TwistedRing::new(field);
        let mut coeffs = vec![gamma_t];
        coeffs.extend(g);
        let phi_t = ring.from_coeffs(coeffs);
        Ok(DrinfeldModule { ring, phi_t })
    }

    pub fn from_phi_t(field: F, phi_t: TwistedPoly<F::Elem>) -> Result<Self> {
        match phi_t.degree() {
            None | Some(0) => Err(Error::InvalidModule("phi_T must have tau-degree >= 1".into())),
            Some(_) => Ok(DrinfeldModule {
                ring: TwistedRing::new(field),
                phi_t,
            }),
        }
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn ring(&self) -> &TwistedRing<F> {
        &self.ring
    }

    pub fn phi_t(&self) -> &TwistedPoly<F::Elem> {
        &self.phi_t
    }

    pub fn rank(&self) -> usize {
        self.phi_t.degree().expect("validated")
    }

    /// `[g_1, ..., g_r]`.
    pub fn coefficients(&self) -> &[F::Elem] {
        &self.phi_t.coeffs()[1..]
    }

    pub fn gamma_t(&self) -> F::Elem {
        self.ring.d_part(&self.phi_t)
    }

    /// Whether gamma is injective: infinite field and gamma(T) transcendental.
    pub fn is_generic_characteristic(&self) -> bool {
        !self.field().is_finite() && !self.field().is_algebraic(&self.gamma_t())
    }

    /// `gamma(a)`.
    pub fn gamma(&self, a: &PolyA) -> F::Elem {
        let f = self.field();
        let g = self.gamma_t();
        a.coeffs()
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, &g), &f.from_base(*c)))
    }

    /// `phi_a` by Horner's rule in the twisted ring.
    pub fn phi_at(&self, a: &PolyA) -> TwistedPoly<F::Elem> {
        let r = &self.ring;
        a.coeffs().iter().rev().fold(r.zero(), |acc, c| {
            r.add(&r.mul(&acc, &self.phi_t), &r.scalar(self.field().from_base(*c)))
        })
    }

    /// The additive polynomial whose zeros are the a-torsion.
    pub fn torsion_poly(&self, a: &PolyA) -> Result<QPolynomial<F::Elem>> {
        if a.is_zero() {
            return Err(Error::ZeroInput("torsion_poly"));
        }
        Ok(self.ring.to_q_poly(&self.phi_at(a)))
    }

    /// Image of `x` under `phi_a`.
    pub fn act(&self, a: &PolyA, x: &F::Elem) -> F::Elem {
        self.ring.eval(&self.phi_at(a), x)
    }

    /// Whether `u phi_T = psi_T u`.
    pub fn is_morphism_to(&self, u: &TwistedPoly<F::Elem>, psi: &DrinfeldModule<F>) -> Result<bool> {
        if self.field() != psi.field() {
            return Err(Error::FieldMismatch);
        }
        if self.rank() != psi.rank() {
            return Ok(u.is_zero());
        }
        let r = &self.ring;
        Ok(r.mul(u, &self.phi_t) == r.mul(&psi.phi_t, u))
    }

    pub fn format(&self) -> String {
        self.ring.format(&self.phi_t)
    }
}

/// A nonzero morphism `poly : source -> target`.
#[derive(Clone, Debug, PartialEq)]
pub struct Isogeny<F: Field> {
    source: DrinfeldModule<F>,
    target: DrinfeldModule<F>,
    poly: TwistedPoly<F::Elem>,
}

impl<F: Field> Isogeny<F> {
    pub fn new(
        source: DrinfeldModule<F>,
        target: DrinfeldModule<F>,
        poly: TwistedPoly<F::Elem>,
    ) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::NotMorphism("zero polynomial".into()));
        }
        if !source.is_morphism_to(&poly, &target)? {
            return Err(Error::NotMorphism("u phi_T != psi_T u".into()));
        }
        if source.is_generic_characteristic() && source.field().is_zero(&source.ring.d_part(&poly)) {
            return Err(Error::NotMorphism("inseparable in generic characteristic".into()));
        }
        Ok(Isogeny { source, target, poly })
    }

    /// `phi_a` as an endomorphism of `phi`.
    pub fn multiplication(phi: &DrinfeldModule<F>, a: &PolyA) -> Result<Self> {
        Self::new(phi.clone(), phi.clone(), phi.phi_at(a))
    }

    pub fn identity(phi: &DrinfeldModule<F>) -> Self {
        Isogeny {
            source: phi.clone(),
            target: phi.clone(),
            poly: phi.ring.one(),
        }
    }

    pub fn source(&self) -> &DrinfeldModule<F> {
        &self.source
    }

    pub fn target(&self) -> &DrinfeldModule<F> {
        &self.target
    }

    pub fn poly(&self) -> &TwistedPoly<F::Elem> {
        &self.poly
    }

    /// log_q of the degree: `deg_tau - h` with h the index of the lowest nonzero coefficient.
    pub fn degree_exponent(&self) -> usize {
        let r = &self.source.ring;
        self.poly.degree().expect("nonzero") - r.height(&self.poly).expect("nonzero")
    }

    /// `deg f = #ker f`.
    pub fn degree(&self) -> BigUint {
        BigUint::from(self.source.field().q()).pow(self.degree_exponent() as u32)
    }

    /// The dual `g : target -> source` with `g f = phi_a`.
    pub fn dual(&self, a: &PolyA) -> Result<Isogeny<F>> {
        if a.is_zero() {
            return Err(Error::ZeroInput("dual isogeny"));
        }
        let r = &self.source.ring;
        let (g, rem) = r.right_divmod(&self.source.phi_at(a), &self.poly)?;
        if !rem.is_zero() {
            return Err(Error::KernelNotContained);
        }
        Isogeny::new(self.target.clone(), self.source.clone(), g)
    }
}

/// `psi_T` with `u phi_T = psi_T u`, i.e. the module phi / ker(u).
pub fn quotient_by_poly<F: Field>(
    phi: &DrinfeldModule<F>,
    u: &TwistedPoly<F::Elem>,
) -> Result<(DrinfeldModule<F>, Isogeny<F>)> {
    if u.is_zero() {
        return Err(Error::ZeroInput("kernel polynomial"));
    }
    let r = &phi.ring;
    let (psi_t, rem) = r.right_divmod(&r.mul(u, &phi.phi_t), u)?;
    if !rem.is_zero() {
        return Err(Error::NotStable);
    }
    let f = phi.field();
    let found = r.d_part(&psi_t);
    if found != phi.gamma_t() {
        return Err(Error::GammaIncompatible {
            found: f.format(&found),
            expected: f.format(&phi.gamma_t()),
        });
    }
    let psi = DrinfeldModule::from_phi_t(f.clone(), psi_t)?;
    let iso = Isogeny::new(phi.clone(), psi.clone(), u.clone())?;
    Ok((psi, iso))
}

/// A finite A-submodule H of the points of a module over a finite field,
/// with its kernel polynomial `prod_{h in H} (x - h)`.
#[derive(Clone, Debug)]
pub struct KernelSubmodule<F: FiniteField> {
    generators: Vec<F::Elem>,
    kernel_poly: TwistedPoly<F::Elem>,
}

impl<F: FiniteField> KernelSubmodule<F> {
    /// The F_q-span of `gens`; it must be stable under phi_T.
    pub fn from_generators(phi: &DrinfeldModule<F>, gens: &[F::Elem]) -> Result<Self> {
        let (basis, u) = span_kernel_poly(phi.field(), gens);
        let r = phi.ring();
        for w in &basis {
            if !phi.field().is_zero(&r.eval(&u, &r.eval(phi.phi_t(), w))) {
                return Err(Error::NotStable);
            }
        }
        Ok(KernelSubmodule {
            generators: gens.to_vec(),
            kernel_poly: u,
        })
    }

    /// The A-submodule generated by `gens`.
    pub fn generated_by(phi: &DrinfeldModule<F>, gens: &[F::Elem]) -> Result<Self> {
        let r = phi.ring();
        let mut all = gens.to_vec();
        loop {
            let (basis, u) = span_kernel_poly(phi.field(), &all);
            let images: Vec<F::Elem> = basis.iter().map(|w| r.eval(phi.phi_t(), w)).collect();
            let new: Vec<F::Elem> = images
                .into_iter()
                .filter(|y| !phi.field().is_zero(&r.eval(&u, y)))
                .collect();
            if new.is_empty() {
                return Ok(KernelSubmodule {
                    generators: gens.to_vec(),
                    kernel_poly: u,
                });
            }
            all.extend(new);
        }
    }

    pub fn generators(&self) -> &[F::Elem] {
        &self.generators
    }

    pub fn kernel_poly(&self) -> &TwistedPoly<F::Elem> {
        &self.kernel_poly
    }

    /// log_q #H.
    pub fn dimension(&self) -> usize {
        self.kernel_poly.degree().expect("nonzero")
    }

    pub fn order(&self, q: u64) -> BigUint {
        BigUint::from(q).pow(self.dimension() as u32)
    }
}

/// F_q-basis of span(gens) and the monic additive polynomial vanishing exactly on it.
fn span_kernel_poly<F: Field>(field: &F, gens: &[F::Elem]) -> (Vec<F::Elem>, TwistedPoly<F::Elem>) {
    let r = TwistedRing::new(field.clone());
    let mut u = r.one();
    let mut basis = Vec::new();
    let q = field.q();
    for w in gens {
        let c = r.eval(&u, w);
        if field.is_zero(&c) {
            continue;
        }
        // (tau - c^(q-1)) u kills w and everything u already kills
        let step = r.from_coeffs(vec![field.neg(&field.pow(&c, q - 1)), field.one()]);
        u = r.mul(&step, &u);
        basis.push(w.clone());
    }
    (basis, u)
}

pub fn quotient_by_kernel<F: FiniteField>(
    phi: &DrinfeldModule<F>,
    h: &KernelSubmodule<F>,
) -> Result<(DrinfeldModule<F>, Isogeny<F>)> {
    quotient_by_poly(phi, h.kernel_poly())
}

/// `v_p(x)` for a nonzero rational function and a monic irreducible p.
pub fn valuation_at(fq: &FqContext, x: &RationalFunc, p: &PolyA) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput("valuation"));
    }
    Ok(ord(fq, x.num(), p)? as i64 - ord(fq, x.den(), p)? as i64)
}

/// Reduction modulo the place p: a module over A/p with gamma(T) = T mod p.
pub fn reduce_at_place(
    phi: &DrinfeldModule<RationalFunctionField>,
    p: &PolyA,
) -> Result<DrinfeldModule<ExtField>> {
    let fq = phi.field().fq();
    let ring = fq.poly_ring();
    let p = ring.monic(p);
    if !factor::is_irreducible(fq, &p)? {
        return Err(Error::NotIrreducible(format_poly(fq, p.coeffs(), "T")));
    }
    let label = format_poly(fq, p.coeffs(), "T");
    let res = ExtField::residue(fq, &p)?;
    let reduce = |x: &RationalFunc| -> Result<_> {
        if x.is_zero() {
            return Ok(res.zero());
        }
        if valuation_at(fq, x, &p)? < 0 {
            return Err(Error::BadReduction {
                place: label.clone(),
                reason: "negative valuation of a coefficient".into(),
            });
        }
        let num = res.from_poly(x.num());
        let den = res.from_poly(x.den());
        res.div(&num, &den).ok_or_else(|| Error::Internal("unit denominator vanished".into()))
    };
    let coeffs = phi
        .phi_t()
        .coeffs()
        .iter()
        .map(reduce)
        .collect::<Result<Vec<_>>>()?;
    if res.is_zero(coeffs.last().expect("nonzero")) {
        return Err(Error::BadReduction {
            place: label,
            reason: "leading coefficient vanishes (rank drops)".into(),
        });
    }
    DrinfeldModule::from_phi_t(res.clone(), TwistedRing::new(res).from_coeffs(coeffs))
}

/// F_q-rank of a family of elements of a finite field.
pub fn fq_rank<F: FiniteField>(field: &F, elems: &[F::Elem]) -> usize {
    let m: Vec<_> = elems.iter().map(|e| field.coordinates(e)).collect();
    linalg::rank(field.base(), &m)
}
