//! Small dense exact linear algebra over prime fields and the rationals.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::FieldElement;

/// Exact field scalars. Constants are produced relative to an existing
/// element because prime-field elements carry their modulus.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn neg(&self) -> Self {
        self.zero_like().sub(self)
    }
}

impl Scalar for FieldElement {
    fn zero_like(&self) -> Self {
        FieldElement::zero(self.modulus())
    }
    fn one_like(&self) -> Self {
        FieldElement::one(self.modulus())
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(*self)
    }
    fn add(&self, other: &Self) -> Self {
        *self + *other
    }
    fn sub(&self, other: &Self) -> Self {
        *self - *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn inv(&self) -> Option<Self> {
        FieldElement::inv(*self).ok()
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Row echelon form in place. Returns the pivot column of each nonzero row.
pub fn row_reduce<S: Scalar>(rows: &mut [Vec<S>]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for c in col..width {
            rows[r][c] = rows[r][c].mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in col..width {
                    let t = factor.mul(&rows[r][c]);
                    rows[i][c] = rows[i][c].sub(&t);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Determinant by Gaussian elimination.
pub fn determinant<S: Scalar>(rows: &[Vec<S>]) -> S {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "square matrix required");
    assert!(n > 0, "empty matrix has no scalar context");
    let mut m = rows.to_vec();
    let mut det = m[0][0].one_like();
    for col in 0..n {
        let Some(found) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return det.zero_like();
        };
        if found != col {
            m.swap(found, col);
            det = det.neg();
        }
        det = det.mul(&m[col][col]);
        let inv = m[col][col].inv().expect("nonzero pivot");
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].mul(&inv);
            for c in col..n {
                let t = factor.mul(&m[col][c]);
                m[i][c] = m[i][c].sub(&t);
            }
        }
    }
    det
}

/// Unique solution of `a x = b` for square invertible `a`; `None` when singular.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    let mut aug: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn inverse<S: Scalar>(a: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = a.len();
    let one = a.first()?.first()?.one_like();
    let zero = one.zero_like();
    let mut aug: Vec<Vec<S>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() != n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A nonzero vector `x` with `rows · x = 0`, if one exists.
pub fn kernel_vector<S: Scalar>(rows: &[Vec<S>]) -> Option<Vec<S>> {
    let width = rows.first()?.len();
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let free = (0..width).find(|c| !pivots.contains(c))?;
    let one = m[0][0].one_like();
    let mut x = vec![one.zero_like(); width];
    x[free] = one;
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][free].neg();
    }
    Some(x)
}

pub fn mat_vec<S: Scalar>(m: &[Vec<S>], v: &[S]) -> Vec<S> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(v[0].zero_like(), |acc, (a, b)| acc.add(&a.mul(b)))
        })
        .collect()
}

pub fn mat_mul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(row[0].zero_like(), |acc, (x, brow)| acc.add(&x.mul(&brow[j])))
                })
                .collect()
        })
        .collect()
}
