use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;

use drinfeld::bounds::{irreducibility_threshold, omega_phi, BoundParams};
use drinfeld::heights::{coefficient_height, heights, rat, valuations_of};
use drinfeld::lambert::{lambert_w_m1, lemma_threshold};
use drinfeld::linalg::{self, char_poly, Matrix};
use drinfeld::probe::{invariant_dim_set, verdict_from_dim_sets};
use drinfeld::drinfeld::DrinfeldModule;
use drinfeld::factor;
use drinfeld::{Field, FqContext, FqElem, PolyA, RationalFunc, RationalFunctionField};

fn poly(fq: &FqContext, codes: &[u32]) -> PolyA {
    fq.poly_ring()
        .from_coeffs(codes.iter().map(|&c| fq.from_code(c % fq.q() as u32)).collect())
}

fn rational(k: &RationalFunctionField, num: &[u32], den: &[u32]) -> RationalFunc {
    let fq = k.fq();
    let d = poly(fq, den);
    let d = if d.is_zero() { fq.poly_ring().one() } else { d };
    k.frac(&poly(fq, num), &d).unwrap()
}

fn parts(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<(Vec<u32>, Vec<u32>)>> {
    prop::collection::vec(
        (prop::collection::vec(0u32..25, 0..=4), prop::collection::vec(0u32..25, 0..=3)),
        n,
    )
}

fn field(i: usize) -> FqContext {
    let (p, e) = [(2, 1), (3, 1), (5, 1), (3, 2)][i];
    FqContext::new(p, e).unwrap()
}

/// Does some subspace of F_q^n of dimension `dim` map into itself? Checked by enumeration.
fn has_invariant_subspace(fq: &FqContext, m: &Matrix<FqElem>, dim: usize) -> bool {
    let n = m.len();
    let q = fq.q() as u32;
    let vectors: Vec<Vec<FqElem>> = (1..q.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let x = fq.from_code(c % q);
                    c /= q;
                    x
                })
                .collect()
        })
        .collect();
    let spans = |rows: &[Vec<FqElem>]| linalg::rank(fq, &rows.to_vec());
    let mut pick = vec![0usize; dim];
    loop {
        let span: Vec<Vec<FqElem>> = pick.iter().map(|&i| vectors[i].clone()).collect();
        if spans(&span) == dim {
            let mut all = span.clone();
            all.extend(span.iter().map(|v| linalg::mat_vec(fq, m, v)));
            if spans(&all) == dim {
                return true;
            }
        }
        // next multiset of indices
        let mut i = dim;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if pick[i] + 1 < vectors.len() {
                pick[i] += 1;
                for j in i + 1..dim {
                    pick[j] = pick[i];
                }
                break;
            }
        }
    }
}

proptest! {
    #[test]
    fn product_formula_and_inverse_height(i in 0usize..4, x in parts(1..=1)) {
        let fq = field(i);
        let k = RationalFunctionField::new(&fq);
        let x = rational(&k, &x[0].0, &x[0].1);
        prop_assume!(!x.is_zero());
        let total: i64 = valuations_of(&fq, &x).unwrap().iter().map(|(p, v)| p.degree() as i64 * v).sum();
        prop_assert_eq!(total, 0);
        let inv = k.inv(&x).unwrap();
        prop_assert_eq!(coefficient_height(&fq, &x).unwrap(), coefficient_height(&fq, &inv).unwrap());
        let deg = |f: &PolyA| f.degree().unwrap_or(0) as i64;
        prop_assert_eq!(coefficient_height(&fq, &x).unwrap(), deg(x.num()).max(deg(x.den())));
    }

    #[test]
    fn module_heights_are_consistent(i in 0usize..3, g in parts(1..=3), c in parts(1..=1)) {
        let fq = field(i);
        let k = RationalFunctionField::new(&fq);
        let g: Vec<RationalFunc> = g.iter().map(|(n, d)| rational(&k, n, d)).collect();
        let Ok(phi) = DrinfeldModule::over_function_field(&k, g.len(), g.clone()) else { return Ok(()) };
        let rep = heights(&phi).unwrap();
        prop_assert!(rep.slack >= Zero::zero());
        prop_assert!(rep.graded >= rep.graded_unclamped);
        prop_assert!(rep.graded >= Zero::zero());

        // c^{-1} phi c has coefficients c^(q^i - 1) g_i; the unclamped sum does not see c
        let c = rational(&k, &c[0].0, &c[0].1);
        prop_assume!(!c.is_zero());
        let q = fq.q();
        let twisted: Vec<RationalFunc> = g
            .iter()
            .enumerate()
            .map(|(j, gj)| k.mul(gj, &k.pow(&c, q.pow(j as u32 + 1) - 1)))
            .collect();
        let psi = DrinfeldModule::over_function_field(&k, twisted.len(), twisted).unwrap();
        prop_assert_eq!(heights(&psi).unwrap().graded_unclamped, rep.graded_unclamped);
    }

    #[test]
    fn lambert_round_trip(t in 0.0f64..1.0, y in -700.0f64..-1.0) {
        let z = -(-1.0f64).exp() * t.max(1e-300);
        let w = lambert_w_m1(z).unwrap();
        prop_assert!(w <= -1.0);
        prop_assert!((w * w.exp() - z).abs() <= 1e-12 * z.abs() + 1e-300);
        let back = lambert_w_m1(y * y.exp()).unwrap();
        prop_assert!((back - y).abs() <= 1e-9 * y.abs());
    }

    #[test]
    fn lemma_threshold_contract(a in 1.05f64..20.0, b in 1.0f64..60.0, s in 0.0f64..40.0) {
        // pick c so that c^(1/b) b / ln a = e^(1 + s)
        let ln_c = b * (1.0 + s + a.ln().ln() - b.ln());
        prop_assume!(ln_c.abs() < 700.0);
        let x = lemma_threshold(a, b, ln_c.exp()).unwrap();
        prop_assert!(x >= b / a.ln() * (1.0 - 1e-12));
        let f = |x: f64| x * a.ln() - b * x.ln() - ln_c;
        let scale = b * x.ln().abs().max(1.0) + ln_c.abs();
        prop_assert!(f(x).abs() <= 1e-9 * scale);
        for m in [1.001, 1.1, 2.0, 10.0] {
            prop_assert!(f(m * x) > 0.0);
        }
    }

    #[test]
    fn cases_fail_above_threshold(
        q in prop::sample::select(vec![2u64, 3, 5, 7]),
        r in 2u64..5,
        d in 1u64..3,
        h in 0i64..200,
        hg in 0i64..200,
        den in 1i64..9,
        log_c2 in 0.0f64..50.0,
    ) {
        let mut p = BoundParams::new(q, d, r, rat(h, den), rat(hg, den));
        p.log_c2 = log_c2;
        let rep = irreducibility_threshold(&p, &[]).unwrap();
        let start = rep.threshold.ceil() as u64 + 1;
        let degs: Vec<u64> = [start, start + 1, start + 17, 2 * start, 10 * start].to_vec();
        let rep = irreducibility_threshold(&p, &degs).unwrap();
        for (c1, c2) in &rep.cases {
            prop_assert!(!c1.holds && !c2.holds, "deg {} survives", c1.deg_ell);
        }
        // raising h_G never lowers Omega
        let mut higher = p.clone();
        higher.h_g = rat(hg + 1 + den, den);
        prop_assert!(omega_phi(&higher) >= omega_phi(&p));
        prop_assert!(irreducibility_threshold(&higher, &[]).unwrap().threshold >= rep.threshold);
    }

    /// For 3x3 matrices the factor-degree test is exact: a line or a plane is
    /// stable iff the characteristic polynomial has a linear factor.
    #[test]
    fn dim_sets_match_brute_force(p in prop::sample::select(vec![2u32, 3]), codes in prop::collection::vec(0u32..5, 9)) {
        let fq = FqContext::new(p as u64, 1).unwrap();
        let m: Matrix<FqElem> = codes.chunks(3).map(|row| row.iter().map(|&c| fq.from_code(c % p)).collect()).collect();
        let degs: Vec<usize> = factor::factor(&fq, &char_poly(&fq, &m))
            .unwrap()
            .iter()
            .flat_map(|(f, e)| std::iter::repeat(f.degree().unwrap()).take(*e))
            .collect();
        let predicted = invariant_dim_set(&degs, 3);
        let found: BTreeSet<usize> = (1..3).filter(|&k| has_invariant_subspace(&fq, &m, k)).collect();
        prop_assert_eq!(predicted, found);
    }

    #[test]
    fn verdicts_only_shrink(r in 2usize..6, sets in prop::collection::vec(prop::collection::btree_set(1usize..6, 0..5), 1..6)) {
        let named: Vec<(String, BTreeSet<usize>)> =
            sets.iter().enumerate().map(|(i, s)| (format!("P{i}"), s.clone())).collect();
        let mut previous: BTreeSet<usize> = (1..r).collect();
        for n in 1..=named.len() {
            let v = verdict_from_dim_sets(r, &named[..n]).unwrap();
            prop_assert!(v.surviving.is_subset(&previous));
            prop_assert_eq!(v.certified, v.surviving.is_empty());
            previous = v.surviving;
        }
    }
}
