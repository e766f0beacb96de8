//! Frobenius action on the l-torsion of reductions, and a one-sided
//! irreducibility certificate for the mod-l representation.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::drinfeld::{reduce_at_place, DrinfeldModule};
use crate::error::{Error, Result};
use crate::ext::{Embedding, ExtElem, ExtField};
use crate::factor::{self, DEFAULT_SEED};
use crate::field::{FiniteField, Field};
use crate::fq::FqElem;
use crate::linalg::{self, Matrix};
use crate::poly::{Poly, PolyRing};
use crate::polya::{format_poly, PolyA};
use crate::ratfunc::RationalFunctionField;
use crate::twisted::TwistedRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    /// Largest degree over F_q of a splitting field that will be built.
    pub max_tower_degree: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            max_tower_degree: 256,
            seed: DEFAULT_SEED,
        }
    }
}

/// The l-torsion of the reduction at p inside F_{q^N}, with an A/l-basis.
#[derive(Clone, Debug)]
pub struct TorsionBasis {
    pub place: PolyA,
    pub ell: PolyA,
    /// F_{q^N}, N = deg p * split_degree.
    pub field: ExtField,
    pub split_degree: usize,
    /// All torsion points, ascending by coordinates.
    pub roots: Vec<ExtElem>,
    pub basis: Vec<ExtElem>,
    /// The reduced module with coefficients moved into `field`.
    pub module: DrinfeldModule<ExtField>,
    /// A/l.
    pub residue_ell: ExtField,
    /// `images[i][k] = phi_{T^k}(basis[i])` for k < deg l.
    images: Vec<Vec<ExtElem>>,
}

impl TorsionBasis {
    pub fn tower_degree(&self) -> usize {
        self.field.degree()
    }

    fn deg_ell(&self) -> usize {
        self.ell.degree().expect("nonzero")
    }

    /// `m . b_i` for m in A/l.
    fn scalar_on_basis(&self, m: &ExtElem, i: usize) -> ExtElem {
        let l = &self.field;
        m.coords()
            .iter()
            .zip(&self.images[i])
            .fold(l.zero(), |acc, (c, img)| l.add(&acc, &l.mul(&l.from_base(*c), img)))
    }

    /// Coordinates over A/l of a torsion point in the basis.
    pub fn coordinates(&self, x: &ExtElem) -> Result<Vec<ExtElem>> {
        let cols: Vec<Vec<FqElem>> = self
            .images
            .iter()
            .flat_map(|row| row.iter().map(|e| self.field.coordinates(e)))
            .collect();
        let sol = linalg::solve_columns(self.field.base(), &cols, &self.field.coordinates(x))
            .ok_or_else(|| Error::Internal("point outside the span of the torsion basis".into()))?;
        let dl = self.deg_ell();
        Ok(sol
            .chunks(dl)
            .map(|c| self.residue_ell.from_coordinates(c))
            .collect())
    }

    /// `sum_i a_i . b_i`.
    pub fn combine(&self, a: &[ExtElem]) -> ExtElem {
        let l = &self.field;
        a.iter()
            .enumerate()
            .fold(l.zero(), |acc, (i, m)| l.add(&acc, &self.scalar_on_basis(m, i)))
    }
}

/// Smallest n with `tau^(D n) = 1` modulo `p_ell` on the right, D = deg p.
fn splitting_degree(
    module: &DrinfeldModule<ExtField>,
    ell: &PolyA,
    cap: usize,
) -> Result<usize> {
    let r = module.ring();
    let d = module.field().degree();
    let p_ell = module.phi_at(ell);
    let tau_d = r.tau_pow(d);
    let mut rem = r.right_divmod(&tau_d, &p_ell)?.1;
    let mut n = 1;
    loop {
        if d * n > cap {
            return Err(Error::SplittingFieldTooLarge { cap });
        }
        if rem == r.one() {
            return Ok(n);
        }
        rem = r.right_divmod(&r.mul(&tau_d, &rem), &p_ell)?.1;
        n += 1;
    }
}

pub fn torsion_basis_mod_p(
    phi: &DrinfeldModule<RationalFunctionField>,
    p: &PolyA,
    ell: &PolyA,
    cfg: &ProbeConfig,
) -> Result<TorsionBasis> {
    let fq = phi.field().fq();
    let ring = fq.poly_ring();
    if p.is_zero() || ell.is_zero() {
        return Err(Error::ZeroInput("place or prime"));
    }
    let (p, ell) = (ring.monic(p), ring.monic(ell));
    if !factor::is_irreducible(fq, &ell)? {
        return Err(Error::NotIrreducible(format_poly(fq, ell.coeffs(), "T")));
    }
    if p == ell {
        return Err(Error::NotCoprime(format_poly(fq, ell.coeffs(), "T")));
    }
    let reduced = reduce_at_place(phi, &p)?;
    let rank = reduced.rank();
    let dl = ell.degree().expect("nonzero");
    let n = splitting_degree(&reduced, &ell, cfg.max_tower_degree)?;

    let residue_p = reduced.field().clone();
    let big = ExtField::extension(fq, residue_p.degree() * n);
    let emb = Embedding::find(&residue_p, &big, cfg.seed)?;
    let lifted_t = TwistedRing::new(big.clone())
        .from_coeffs(reduced.phi_t().coeffs().iter().map(|c| emb.apply(c)).collect());
    let module = DrinfeldModule::from_phi_t(big.clone(), lifted_t)?;

    // torsion = kernel of the F_q-linear map x -> phi_l(x) on F_{q^N}
    let p_ell = module.phi_at(&ell);
    let tr = module.ring();
    let nn = big.degree();
    let images: Vec<Vec<FqElem>> = (0..nn)
        .map(|j| {
            let mut e = vec![FqElem::ZERO; nn];
            e[j] = fq.one_elem();
            big.coordinates(&tr.eval(&p_ell, &big.from_coordinates(&e)))
        })
        .collect();
    let m: Matrix<FqElem> = (0..nn)
        .map(|i| images.iter().map(|col| col[i]).collect())
        .collect();
    let ker = linalg::kernel(fq, &m, nn);
    if ker.len() != rank * dl {
        return Err(Error::Internal(format!(
            "torsion has F_q-dimension {}, expected {}",
            ker.len(),
            rank * dl
        )));
    }
    let mut roots = span_elements(&big, &ker);
    roots.sort_by_key(|a| big.sort_key(a));

    // greedy A/l-basis in root order
    let t_powers: Vec<PolyA> = (0..dl).map(|k| ring.monomial(fq.one_elem(), k)).collect();
    let mut basis = Vec::new();
    let mut basis_images: Vec<Vec<ExtElem>> = Vec::new();
    let mut span: Vec<Vec<FqElem>> = Vec::new();
    for x in &roots {
        if basis.len() == rank {
            break;
        }
        if big.is_zero(x) {
            continue;
        }
        let mut trial = span.clone();
        trial.push(big.coordinates(x));
        if linalg::rank(fq, &trial) == span.len() {
            continue;
        }
        let imgs: Vec<ExtElem> = t_powers.iter().map(|a| module.act(a, x)).collect();
        span.extend(imgs.iter().map(|e| big.coordinates(e)));
        basis.push(x.clone());
        basis_images.push(imgs);
    }
    if basis.len() != rank || linalg::rank(fq, &span) != rank * dl {
        return Err(Error::Internal("torsion is not free of rank r over A/l".into()));
    }
    Ok(TorsionBasis {
        place: p,
        residue_ell: ExtField::residue(fq, &ell)?,
        ell,
        field: big,
        split_degree: n,
        roots,
        basis,
        module,
        images: basis_images,
    })
}

/// Every F_q-combination of `basis`.
fn span_elements(field: &ExtField, basis: &[Vec<FqElem>]) -> Vec<ExtElem> {
    let fq = field.fq();
    let mut out = vec![field.zero()];
    for v in basis {
        let b = field.from_coordinates(v);
        let mut next = Vec::with_capacity(out.len() * fq.q() as usize);
        for c in fq.elements() {
            let cb = field.mul(&field.from_base(c), &b);
            next.extend(out.iter().map(|x| field.add(x, &cb)));
        }
        out = next;
    }
    out
}

#[derive(Clone, Debug)]
pub struct FrobeniusData {
    pub place: String,
    pub deg_p: usize,
    pub rank: usize,
    pub residue_ell: ExtField,
    /// Column j holds the coordinates of Frob(b_j).
    pub matrix: Matrix<ExtElem>,
    pub char_poly: Poly<ExtElem>,
    pub factor_degrees: Vec<usize>,
}

impl FrobeniusData {
    pub fn dim_set(&self) -> BTreeSet<usize> {
        invariant_dim_set(&self.factor_degrees, self.rank)
    }

    pub fn format_char_poly(&self) -> String {
        PolyRing::new(self.residue_ell.clone()).format(&self.char_poly, "X")
    }

    pub fn format_matrix(&self) -> String {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|e| self.residue_ell.format(e)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// Matrix of `x -> x^(q^deg p)` on the torsion basis, checked on every torsion point.
pub fn frobenius_matrix(tb: &TorsionBasis) -> Result<FrobeniusData> {
    let l = &tb.field;
    let d = tb.place.degree().expect("nonzero");
    let rank = tb.basis.len();
    let mut matrix: Matrix<ExtElem> = vec![vec![tb.residue_ell.zero(); rank]; rank];
    for (j, b) in tb.basis.iter().enumerate() {
        let coords = tb.coordinates(&l.frobenius_pow(b, d))?;
        for (i, c) in coords.into_iter().enumerate() {
            matrix[i][j] = c;
        }
    }
    let res = &tb.residue_ell;
    if res.is_zero(&linalg::determinant(res, &matrix)) {
        return Err(Error::Internal("Frobenius matrix is singular".into()));
    }
    for x in &tb.roots {
        let a = tb.coordinates(x)?;
        let image = tb.combine(&linalg::mat_vec(res, &matrix, &a));
        if image != l.frobenius_pow(x, d) {
            return Err(Error::Internal("Frobenius matrix disagrees on a torsion point".into()));
        }
    }
    let char_poly = linalg::char_poly(res, &matrix);
    let factor_degrees = factor::factor_degrees(res, &char_poly)?;
    Ok(FrobeniusData {
        place: format_poly(tb.field.fq(), tb.place.coeffs(), "T"),
        deg_p: d,
        rank,
        residue_ell: res.clone(),
        matrix,
        char_poly,
        factor_degrees,
    })
}

pub fn frobenius_data(
    phi: &DrinfeldModule<RationalFunctionField>,
    p: &PolyA,
    ell: &PolyA,
    cfg: &ProbeConfig,
) -> Result<FrobeniusData> {
    frobenius_matrix(&torsion_basis_mod_p(phi, p, ell, cfg)?)
}

/// Subset sums of the factor degrees (with multiplicity) lying in 1..r-1.
pub fn invariant_dim_set(factor_degrees: &[usize], r: usize) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for &d in factor_degrees {
        let shifted: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(shifted);
    }
    sums.into_iter().filter(|&s| s >= 1 && s < r).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceTrace {
    pub place: String,
    pub dims: BTreeSet<usize>,
    /// Running intersection after this place.
    pub surviving: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub certified: bool,
    pub surviving: BTreeSet<usize>,
    pub trace: Vec<PlaceTrace>,
}

impl Verdict {
    pub fn status(&self) -> &'static str {
        if self.certified {
            "certified-irreducible"
        } else {
            "inconclusive"
        }
    }
}

/// Intersects the possible invariant dimensions over all places.
pub fn verdict_from_data(rank: usize, data: &[FrobeniusData]) -> Result<Verdict> {
    let sets: Vec<(String, BTreeSet<usize>)> =
        data.iter().map(|fd| (fd.place.clone(), fd.dim_set())).collect();
    verdict_from_dim_sets(rank, &sets)
}

pub fn verdict_from_dim_sets(rank: usize, sets: &[(String, BTreeSet<usize>)]) -> Result<Verdict> {
    if sets.is_empty() {
        return Err(Error::NoPlaces);
    }
    let mut surviving: BTreeSet<usize> = (1..rank).collect();
    let mut trace = Vec::new();
    for (place, dims) in sets {
        surviving = surviving.intersection(dims).copied().collect();
        trace.push(PlaceTrace {
            place: place.clone(),
            dims: dims.clone(),
            surviving: surviving.clone(),
        });
    }
    Ok(Verdict {
        certified: surviving.is_empty(),
        surviving,
        trace,
    })
}

pub fn certify_irreducible(
    phi: &DrinfeldModule<RationalFunctionField>,
    ell: &PolyA,
    places: &[PolyA],
    cfg: &ProbeConfig,
) -> Result<Verdict> {
    if places.is_empty() {
        return Err(Error::NoPlaces);
    }
    let data = places
        .iter()
        .map(|p| frobenius_data(phi, p, ell, cfg))
        .collect::<Result<Vec<_>>>()?;
    verdict_from_data(phi.rank(), &data)
}
