//! Places of F_q(T), valuations, and the naive and graded heights of a module.

use std::fmt;
use std::io::Read;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::drinfeld::{valuation_at, DrinfeldModule};
use crate::error::{Error, Result};
use crate::factor;
use crate::field::Field;
use crate::fq::FqContext;
use crate::polya::{format_poly, PolyA};
use crate::ratfunc::{RationalFunc, RationalFunctionField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// A monic irreducible polynomial.
    Finite(PolyA),
    Infinite,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().expect("nonzero"),
            Place::Infinite => 1,
        }
    }

    pub fn label(&self, fq: &FqContext) -> String {
        match self {
            Place::Finite(p) => format_poly(fq, p.coeffs(), "T"),
            Place::Infinite => "inf".into(),
        }
    }

    /// Finite places by (degree, coefficient codes), infinity last.
    fn sort_key(&self) -> (u8, usize, Vec<u32>) {
        match self {
            Place::Finite(p) => (
                0,
                p.degree().unwrap_or(0),
                p.coeffs().iter().rev().map(|c| c.code()).collect(),
            ),
            Place::Infinite => (1, 0, Vec::new()),
        }
    }

    pub fn valuation(&self, fq: &FqContext, x: &RationalFunc) -> Result<i64> {
        match self {
            Place::Finite(p) => valuation_at(fq, x, p),
            Place::Infinite => {
                if x.is_zero() {
                    return Err(Error::ZeroInput("valuation"));
                }
                Ok(x.den().degree().unwrap_or(0) as i64 - x.num().degree().unwrap_or(0) as i64)
            }
        }
    }
}

fn monic_prime_factors(fq: &FqContext, f: &PolyA) -> Result<Vec<(PolyA, usize)>> {
    if f.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    factor::factor(fq, f)
}

/// All places with nonzero valuation, plus infinity (always reported).
pub fn valuations_of(fq: &FqContext, x: &RationalFunc) -> Result<Vec<(Place, i64)>> {
    if x.is_zero() {
        return Err(Error::ZeroInput("valuations_of"));
    }
    let mut out: Vec<(Place, i64)> = Vec::new();
    for (p, m) in monic_prime_factors(fq, x.num())? {
        out.push((Place::Finite(p), m as i64));
    }
    for (p, m) in monic_prime_factors(fq, x.den())? {
        out.push((Place::Finite(p), -(m as i64)));
    }
    out.push((Place::Infinite, Place::Infinite.valuation(fq, x)?));
    out.sort_by_key(|(p, _)| p.sort_key());
    Ok(out)
}

/// Weil height `sum_v deg(v) max(0, -v(x))` of a rational function, in base q.
pub fn coefficient_height(fq: &FqContext, x: &RationalFunc) -> Result<i64> {
    if x.is_zero() {
        return Ok(0);
    }
    Ok(valuations_of(fq, x)?
        .iter()
        .map(|(p, v)| p.degree() as i64 * (-v).max(0))
        .sum())
}

/// Valuation data at one place: `valuations[i]` is `v(g_{i+1})`, `None` when that coefficient is 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightDatum {
    pub place: String,
    pub deg: u64,
    pub n_nu: u64,
    pub valuations: Vec<Option<i64>>,
}

/// One place's share of the two heights (before division by d).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaceContribution {
    pub place: String,
    pub deg: u64,
    pub n_nu: u64,
    pub valuations: Vec<Option<i64>>,
    /// `n_nu deg max(0, -v(g_i))` per coefficient.
    #[serde(serialize_with = "ser_rats")]
    pub naive: Vec<BigRational>,
    #[serde(serialize_with = "ser_rat")]
    pub graded: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub graded_unclamped: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightReport {
    pub q: u64,
    pub rank: usize,
    pub d: u64,
    #[serde(serialize_with = "ser_rat")]
    pub naive: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub graded: BigRational,
    /// The graded sum without the max(0, .) clamp at each place.
    #[serde(serialize_with = "ser_rat")]
    pub graded_unclamped: BigRational,
    /// `(q^r - 1) h_G - h`.
    #[serde(serialize_with = "ser_rat")]
    pub slack: BigRational,
    /// Whether the data came from a user table (taken on trust).
    pub from_table: bool,
    pub places: Vec<PlaceContribution>,
}

fn ser_rat<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

fn ser_rats<S: serde::Serializer>(
    xs: &[BigRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(format_rational))
}

/// `a/b`, or `a` for integers.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn q_pow_minus_one(q: u64, i: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(q).pow(i as u32) - 1)
}

/// Valuation data for a module over F_q(T), one row per place where some coefficient
/// has nonzero valuation, plus infinity.
pub fn height_data(phi: &DrinfeldModule<RationalFunctionField>) -> Result<Vec<HeightDatum>> {
    let fq = phi.field().fq();
    let mut places: Vec<Place> = vec![Place::Infinite];
    for g in phi.coefficients().iter().filter(|g| !g.is_zero()) {
        for (p, _) in valuations_of(fq, g)? {
            if !places.contains(&p) {
                places.push(p);
            }
        }
    }
    places.sort_by_key(|p| p.sort_key());
    places
        .iter()
        .map(|p| {
            let valuations = phi
                .coefficients()
                .iter()
                .map(|g| if g.is_zero() { Ok(None) } else { p.valuation(fq, g).map(Some) })
                .collect::<Result<Vec<_>>>()?;
            Ok(HeightDatum {
                place: p.label(fq),
                deg: p.degree() as u64,
                n_nu: 1,
                valuations,
            })
        })
        .collect()
}

/// Heights from valuation data; `d = [K : F]`.
pub fn heights_from_data(
    q: u64,
    rank: usize,
    d: u64,
    data: &[HeightDatum],
    from_table: bool,
) -> Result<HeightReport> {
    if d == 0 {
        return Err(Error::InvalidParams("d must be at least 1".into()));
    }
    let mut naive_sum = vec![BigRational::zero(); rank];
    let mut graded = BigRational::zero();
    let mut graded_unclamped = BigRational::zero();
    let mut places = Vec::new();
    for row in data {
        if row.valuations.len() != rank {
            return Err(Error::InvalidParams(format!(
                "place {} has {} valuations, expected {rank}",
                row.place,
                row.valuations.len()
            )));
        }
        let weight = int((row.n_nu * row.deg) as i64);
        let mut naive = Vec::with_capacity(rank);
        let mut best: Option<BigRational> = None;
        for (i, v) in row.valuations.iter().enumerate() {
            let Some(v) = v else {
                naive.push(BigRational::zero());
                continue;
            };
            let c = &weight * int((-v).max(0));
            naive_sum[i] += &c;
            naive.push(c);
            let g = &weight * int(-v) / q_pow_minus_one(q, i + 1);
            best = Some(match best {
                Some(b) if b >= g => b,
                _ => g,
            });
        }
        let unclamped = best.unwrap_or_else(BigRational::zero);
        let clamped = if unclamped > BigRational::zero() {
            unclamped.clone()
        } else {
            BigRational::zero()
        };
        graded += &clamped;
        graded_unclamped += &unclamped;
        places.push(PlaceContribution {
            place: row.place.clone(),
            deg: row.deg,
            n_nu: row.n_nu,
            valuations: row.valuations.clone(),
            naive,
            graded: clamped,
            graded_unclamped: unclamped,
        });
    }
    let dd = int(d as i64);
    let naive = naive_sum.into_iter().max().unwrap_or_else(BigRational::zero) / &dd;
    let graded = graded / &dd;
    let graded_unclamped = graded_unclamped / &dd;
    let slack = q_pow_minus_one(q, rank) * &graded - &naive;
    Ok(HeightReport {
        q,
        rank,
        d,
        naive,
        graded,
        graded_unclamped,
        slack,
        from_table,
        places,
    })
}

pub fn heights(phi: &DrinfeldModule<RationalFunctionField>) -> Result<HeightReport> {
    let data = height_data(phi)?;
    heights_from_data(phi.field().q(), phi.rank(), 1, &data, false)
}

pub fn naive_height(phi: &DrinfeldModule<RationalFunctionField>) -> Result<BigRational> {
    Ok(heights(phi)?.naive)
}

pub fn graded_height(phi: &DrinfeldModule<RationalFunctionField>) -> Result<BigRational> {
    Ok(heights(phi)?.graded)
}

/// The exact slack `(q^r - 1) h_G - h`, which is never negative.
pub fn check_height_ineq(report: &HeightReport) -> (bool, BigRational) {
    (report.slack >= BigRational::zero(), report.slack.clone())
}

/// `deg_N + 1/(q - 1) - 1/(q^r - 1)`.
pub fn isogeny_drift_bound(r: usize, q: u64, deg_n: u64) -> Result<BigRational> {
    if r == 0 || q < 2 {
        return Err(Error::InvalidParams("need r >= 1 and q >= 2".into()));
    }
    Ok(int(deg_n as i64) + BigRational::one() / q_pow_minus_one(q, 1)
        - BigRational::one() / q_pow_minus_one(q, r))
}

/// Reads a height table: CSV rows `place_label, deg, n_nu, v(g1), ..., v(gr)`,
/// with `inf` for a zero coefficient. Lines starting with `#` and a header row
/// (non-numeric `deg`) are skipped.
pub fn read_height_table(src: impl Read, rank: usize) -> Result<Vec<HeightDatum>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(src);
    let mut rows = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(idx + 1, |p| p.line() as usize);
            Error::parse(line, 1, e.to_string())
        })?;
        let line = rec.position().map_or(idx + 1, |p| p.line() as usize);
        if idx == 0 && rec.get(1).is_some_and(|s| s.parse::<u64>().is_err()) {
            continue;
        }
        if rec.len() != 3 + rank {
            return Err(Error::parse(
                line,
                1,
                format!("expected {} fields, found {}", 3 + rank, rec.len()),
            ));
        }
        let num = |i: usize| -> Result<u64> {
            rec[i]
                .parse::<u64>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::parse(line, i + 1, format!("expected a positive integer, found `{}`", &rec[i])))
        };
        let valuations = (3..3 + rank)
            .map(|i| match &rec[i] {
                "inf" => Ok(None),
                s => s
                    .parse::<i64>()
                    .map(Some)
                    .map_err(|_| Error::parse(line, i + 1, format!("invalid valuation `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(HeightDatum {
            place: rec[0].to_string(),
            deg: num(1)?,
            n_nu: num(2)?,
            valuations,
        });
    }
    Ok(rows)
}

impl fmt::Display for HeightReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "naive height h      = {}", format_rational(&self.naive))?;
        writeln!(f, "graded height h_G   = {}", format_rational(&self.graded))?;
        writeln!(f, "h_G without clamp   = {}", format_rational(&self.graded_unclamped))?;
        write!(f, "(q^r-1) h_G - h     = {}", format_rational(&self.slack))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (FqContext, RationalFunctionField) {
        let fq = FqContext::new(3, 1).unwrap();
        let k = RationalFunctionField::new(&fq);
        (fq, k)
    }

    fn labels(fq: &FqContext, v: &[(Place, i64)]) -> Vec<(String, i64)> {
        v.iter().map(|(p, n)| (p.label(fq), *n)).collect()
    }

    #[test]
    fn valuation_examples() {
        let (fq, k) = setup();
        let t5 = k.from_poly(&fq.poly(&[0, 0, 0, 0, 0, 1]));
        assert_eq!(
            labels(&fq, &valuations_of(&fq, &t5).unwrap()),
            vec![("T".into(), 5), ("inf".into(), -5)]
        );
        let inv_t = k.inv(&k.t()).unwrap();
        assert_eq!(
            labels(&fq, &valuations_of(&fq, &inv_t).unwrap()),
            vec![("T".into(), -1), ("inf".into(), 1)]
        );
        let x = k.frac(&fq.poly(&[1, 0, 1]), &fq.poly(&[1, 1])).unwrap();
        assert_eq!(
            labels(&fq, &valuations_of(&fq, &x).unwrap()),
            vec![("T + 1".into(), -1), ("T^2 + 1".into(), 1), ("inf".into(), -1)]
        );
        assert!(valuations_of(&fq, &k.zero()).is_err());
    }

    fn module(k: &RationalFunctionField, g: Vec<RationalFunc>) -> DrinfeldModule<RationalFunctionField> {
        DrinfeldModule::over_function_field(k, g.len(), g).unwrap()
    }

    #[test]
    fn height_examples() {
        let (fq, k) = setup();
        let constant = module(&k, vec![k.zero(), k.one()]);
        let rep = heights(&constant).unwrap();
        assert_eq!((rep.naive.clone(), rep.graded.clone()), (int(0), int(0)));
        assert_eq!(check_height_ineq(&rep), (true, int(0)));

        let running = module(&k, vec![k.from_poly(&fq.poly(&[0, 0, 0, 0, 0, 1])), k.t()]);
        let rep = heights(&running).unwrap();
        assert_eq!(rep.naive, int(5));
        assert_eq!(rep.graded, rat(5, 2));
        assert_eq!(check_height_ineq(&rep), (true, int(15)));

        let inv = module(&k, vec![k.inv(&k.t()).unwrap()]);
        let rep = heights(&inv).unwrap();
        assert_eq!(rep.naive, int(1));
        assert_eq!(rep.graded, rat(1, 2));
        // infinity contributes -1/2 to the unclamped sum
        assert_eq!(rep.graded_unclamped, int(0));
    }

    #[test]
    fn drift_bound_examples() {
        assert_eq!(isogeny_drift_bound(1, 3, 4).unwrap(), int(4));
        assert_eq!(isogeny_drift_bound(2, 3, 1).unwrap(), rat(11, 8));
        assert_eq!(isogeny_drift_bound(3, 3, 2).unwrap(), rat(32, 13));
    }

    #[test]
    fn height_table_parsing() {
        let csv = "place_label, deg, n_nu, v1, v2\n# comment\nP1, 1, 2, -3, inf\ninf, 1, 1, 0, -1\n";
        let rows = read_height_table(csv.as_bytes(), 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].valuations, vec![Some(-3), None]);
        let rep = heights_from_data(3, 2, 2, &rows, true).unwrap();
        // naive: g1 gets 2*1*3 = 6, g2 gets 1; max 6, over d = 2
        assert_eq!(rep.naive, int(3));
        // graded: P1 -> 2*3/2 = 3; inf -> max(0, 1/8) = 1/8; total 25/8 over 2
        assert_eq!(rep.graded, rat(25, 16));
        let bad = "P1, 1, 2, x, 0\n";
        assert!(matches!(
            read_height_table(bad.as_bytes(), 2),
            Err(Error::Parse { line: 1, column: 4, .. })
        ));
    }
}
