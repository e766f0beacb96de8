//! Dense linear algebra over an arbitrary [`Field`]. Matrices are row-major
//! `Vec<Vec<E>>`.

use crate::field::Field;
use crate::poly::{Poly, PolyRing};

pub type Matrix<E> = Vec<Vec<E>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(piv) = (row..rows).find(|&i| !field.is_zero(&m[i][col])) else {
            continue;
        };
        m.swap(row, piv);
        let inv = field.inv(&m[row][col]).expect("nonzero pivot");
        for x in m[row].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i == row || field.is_zero(&r[col]) {
                continue;
            }
            let f = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row).skip(col) {
                if !field.is_zero(p) {
                    *x = field.sub(x, &field.mul(&f, p));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    rref(field, &mut m.clone()).len()
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn kernel<F: Field>(field: &F, m: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut a = m.clone();
    let pivots = rref(field, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(&a[i][f]);
            }
            v
        })
        .collect()
}

/// Solves `sum_j x_j columns[j] = target`; `None` when inconsistent.
/// The columns need not be independent; free variables are set to zero.
pub fn solve_columns<F: Field>(
    field: &F,
    columns: &[Vec<F::Elem>],
    target: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let n = columns.len();
    let rows = target.len();
    let mut aug: Matrix<F::Elem> = (0..rows)
        .map(|i| {
            let mut r: Vec<F::Elem> = columns.iter().map(|c| c[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![field.zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug[i][n].clone();
    }
    Some(x)
}

pub fn mat_vec<F: Field>(field: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
        })
        .collect()
}

pub fn determinant<F: Field>(field: &F, m: &Matrix<F::Elem>) -> F::Elem {
    let n = m.len();
    let mut a = m.clone();
    let mut det = field.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !field.is_zero(&a[i][col])) else {
            return field.zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = field.neg(&det);
        }
        det = field.mul(&det, &a[col][col]);
        let inv = field.inv(&a[col][col]).expect("nonzero pivot");
        for i in col + 1..n {
            if field.is_zero(&a[i][col]) {
                continue;
            }
            let f = field.mul(&a[i][col], &inv);
            for j in col..n {
                let t = field.mul(&f, &a[col][j]);
                a[i][j] = field.sub(&a[i][j], &t);
            }
        }
    }
    det
}

/// `det(X I - m)` via reduction to upper Hessenberg form.
pub fn char_poly<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Poly<F::Elem> {
    let n = m.len();
    let ring = PolyRing::new(field.clone());
    let mut h = m.clone();
    // similarity transform to Hessenberg form
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&i| !field.is_zero(&h[i][col])) else {
            continue;
        };
        if piv != col + 1 {
            h.swap(piv, col + 1);
            for row in h.iter_mut() {
                row.swap(piv, col + 1);
            }
        }
        let inv = field.inv(&h[col + 1][col]).expect("nonzero pivot");
        for i in col + 2..n {
            if field.is_zero(&h[i][col]) {
                continue;
            }
            let f = field.mul(&h[i][col], &inv);
            for j in 0..n {
                let t = field.mul(&f, &h[col + 1][j]);
                h[i][j] = field.sub(&h[i][j], &t);
            }
            for row in h.iter_mut() {
                let t = field.mul(&f, &row[i]);
                row[col + 1] = field.add(&row[col + 1], &t);
            }
        }
    }
    // p_k = char poly of the leading k x k block
    let mut p: Vec<Poly<F::Elem>> = vec![ring.one()];
    for k in 0..n {
        let x_minus = ring.from_coeffs(vec![field.neg(&h[k][k]), field.one()]);
        let mut next = ring.mul(&x_minus, &p[k]);
        let mut prod = field.one();
        for i in (0..k).rev() {
            prod = field.mul(&prod, &h[i + 1][i]);
            let c = field.mul(&prod, &h[i][k]);
            next = ring.sub(&next, &ring.scale(&p[i], &c));
        }
        p.push(next);
    }
    p.pop().expect("nonempty")
}
