//! Exhaustive determinant scan over all `w`-subsets of a row list.
//!
//! Subsets are walked depth-first in lexicographic order. For each prefix
//! of `k` rows we keep every `k×k` minor on those rows (one per `k`-subset
//! of columns), extended one row at a time by Laplace expansion along the
//! new row. At depth `w−1` the `w` maximal minors are the cofactors of the
//! last row, so each candidate last row costs a single length-`w` dot
//! product. Nothing divides, so the same walk runs over `F_p`, `i128` and
//! `BigInt`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

/// Raised by fixed-width rings when an intermediate value does not fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

#[derive(Clone, Copy, Debug)]
pub struct Term {
    col: usize,
    prev: usize,
    neg: bool,
}

pub trait Ring: Sync {
    type E: Clone + Send + Sync;

    fn one(&self) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;
    /// `Σ ± row[col] · prev[idx]` over `terms`.
    fn expand(&self, row: &[Self::E], prev: &[Self::E], terms: &[Term]) -> Result<Self::E, Overflow>;
    fn negate(&self, x: &Self::E) -> Result<Self::E, Overflow>;
    fn dot_is_zero(&self, a: &[Self::E], b: &[Self::E]) -> Result<bool, Overflow>;

    /// First row index in `range` whose dot product with `cof` vanishes.
    fn first_zero_row(
        &self,
        cof: &[Self::E],
        rows: &[Self::E],
        range: std::ops::Range<usize>,
    ) -> Result<Option<usize>, Overflow> {
        let w = cof.len();
        for q in range {
            if self.dot_is_zero(cof, &rows[q * w..(q + 1) * w])? {
                return Ok(Some(q));
            }
        }
        Ok(None)
    }
}

/// Rows of width `w`, stored flat.
pub struct Rows<E> {
    pub width: usize,
    pub data: Vec<E>,
}

#[allow(clippy::len_without_is_empty)]
impl<E> Rows<E> {
    pub fn new(width: usize, data: Vec<E>) -> Self {
        assert!(width > 0 && data.len() % width == 0);
        Rows { width, data }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.width..(i + 1) * self.width]
    }
}

/// Laplace expansion tables for width `w`.
struct Plan {
    width: usize,
    /// `levels[k][t]`: terms producing minor `t` of size `k+1` from size-`k` minors.
    levels: Vec<Vec<Vec<Term>>>,
    /// For column `c`: index of the size-`w−1` minor omitting `c`, and whether
    /// the cofactor sign is negative.
    cofactors: Vec<(usize, bool)>,
}

fn column_subsets(w: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, w: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..w {
            cur.push(c);
            go(c + 1, w, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, w, k, &mut Vec::new(), &mut out);
    out
}

impl Plan {
    fn new(width: usize) -> Self {
        let tables: Vec<Vec<Vec<usize>>> = (0..=width).map(|k| column_subsets(width, k)).collect();
        let index_of = |k: usize, s: &[usize]| tables[k].iter().position(|t| t == s).unwrap();
        let mut levels = Vec::with_capacity(width);
        for k in 0..width {
            let lvl = tables[k + 1]
                .iter()
                .map(|cols| {
                    (0..cols.len())
                        .map(|j| {
                            let mut rest = cols.clone();
                            let col = rest.remove(j);
                            Term { col, prev: index_of(k, &rest), neg: (k + j) % 2 == 1 }
                        })
                        .collect()
                })
                .collect();
            levels.push(lvl);
        }
        let cofactors = (0..width)
            .map(|c| {
                let rest: Vec<usize> = (0..width).filter(|&x| x != c).collect();
                (index_of(width - 1, &rest), (width - 1 + c) % 2 == 1)
            })
            .collect();
        Plan { width, levels, cofactors }
    }
}

struct Walker<'a, R: Ring> {
    ring: &'a R,
    rows: &'a Rows<R::E>,
    plan: &'a Plan,
    minors: Vec<Vec<R::E>>,
    chosen: Vec<usize>,
    cof: Vec<R::E>,
}

impl<'a, R: Ring> Walker<'a, R> {
    fn new(ring: &'a R, rows: &'a Rows<R::E>, plan: &'a Plan) -> Self {
        let w = plan.width;
        let mut minors: Vec<Vec<R::E>> = plan.levels.iter().map(|l| Vec::with_capacity(l.len())).collect();
        minors.insert(0, vec![ring.one()]);
        minors.truncate(w);
        Walker { ring, rows, plan, minors, chosen: Vec::with_capacity(w), cof: Vec::with_capacity(w) }
    }

    fn push(&mut self, i: usize) -> Result<(), Overflow> {
        let k = self.chosen.len();
        let row = self.rows.row(i);
        let (lo, hi) = self.minors.split_at_mut(k + 1);
        let prev = &lo[k];
        let next = &mut hi[0];
        next.clear();
        for terms in &self.plan.levels[k] {
            next.push(self.ring.expand(row, prev, terms)?);
        }
        self.chosen.push(i);
        Ok(())
    }

    fn load_cofactors(&mut self) -> Result<(), Overflow> {
        let top = &self.minors[self.plan.width - 1];
        self.cof.clear();
        for &(idx, neg) in &self.plan.cofactors {
            let m = &top[idx];
            self.cof.push(if neg { self.ring.negate(m)? } else { m.clone() });
        }
        Ok(())
    }

    /// Lexicographically first vanishing `w`-subset extending the current prefix.
    fn first_zero(&mut self, start: usize) -> Result<Option<Vec<usize>>, Overflow> {
        let w = self.plan.width;
        let n = self.rows.len();
        let k = self.chosen.len();
        if k == w - 1 {
            self.load_cofactors()?;
            let hit = self.ring.first_zero_row(&self.cof, &self.rows.data, start..n)?;
            return Ok(hit.map(|q| {
                let mut s = self.chosen.clone();
                s.push(q);
                s
            }));
        }
        for i in start..=n - (w - k) {
            self.push(i)?;
            let found = self.first_zero(i + 1)?;
            self.chosen.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Over all `(w−1)`-subsets `S` whose cofactor vector passes `admit`,
    /// the largest `|S| + #{q ∉ S : row_q · cof = 0}`.
    fn max_incidence(&mut self, start: usize, admit: &dyn Fn(&R, &[R::E]) -> bool) -> Result<usize, Overflow> {
        let w = self.plan.width;
        let n = self.rows.len();
        let k = self.chosen.len();
        if k == w - 1 {
            self.load_cofactors()?;
            if !admit(self.ring, &self.cof) {
                return Ok(0);
            }
            let mut count = w - 1;
            for q in 0..n {
                if self.chosen.contains(&q) {
                    continue;
                }
                if self.ring.dot_is_zero(&self.cof, self.rows.row(q))? {
                    count += 1;
                }
            }
            return Ok(count);
        }
        let mut best = 0;
        for i in start..=n - (w - 1 - k) {
            self.push(i)?;
            best = best.max(self.max_incidence(i + 1, admit)?);
            self.chosen.pop();
        }
        Ok(best)
    }
}

/// The lexicographically first `w`-subset of rows with vanishing determinant.
pub fn first_vanishing<R: Ring>(ring: &R, rows: &Rows<R::E>) -> Result<Option<Vec<usize>>, Overflow> {
    let w = rows.width;
    let n = rows.len();
    if n < w {
        return Ok(None);
    }
    let plan = Plan::new(w);
    let result = (0..=n - w).into_par_iter().find_map_first(|i0| {
        let mut walker = Walker::new(ring, rows, &plan);
        let r = walker.push(i0).and_then(|()| walker.first_zero(i0 + 1));
        match r {
            Ok(None) => None,
            other => Some(other),
        }
    });
    result.unwrap_or(Ok(None))
}

/// Largest incidence over flats spanned by `(w−1)`-subsets admitted by
/// `admit`, counting every row on the flat. Zero when no subset is admitted.
pub fn max_incidence<R: Ring>(
    ring: &R,
    rows: &Rows<R::E>,
    admit: &(dyn Fn(&R, &[R::E]) -> bool + Sync),
) -> Result<usize, Overflow> {
    let w = rows.width;
    let n = rows.len();
    if n < w - 1 {
        return Ok(0);
    }
    let plan = Plan::new(w);
    if w == 1 {
        let mut walker = Walker::new(ring, rows, &plan);
        return walker.max_incidence(0, admit);
    }
    (0..=n - (w - 1))
        .into_par_iter()
        .map(|i0| {
            let mut walker = Walker::new(ring, rows, &plan);
            walker.push(i0)?;
            walker.max_incidence(i0 + 1, admit)
        })
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))
}

/// `F_p` for `p < 2^28`: products and short sums stay inside `u64`.
pub struct SmallField {
    p: u64,
    barrett: u64,
    pinv: u64,
    div_limit: u64,
}

pub const SMALL_FIELD_LIMIT: u64 = 1 << 28;

impl SmallField {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < SMALL_FIELD_LIMIT);
        // Newton iteration for p^{-1} mod 2^64
        let mut pinv: u64 = p;
        for _ in 0..6 {
            pinv = pinv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(pinv)));
        }
        SmallField { p, barrett: u64::MAX / p, pinv, div_limit: u64::MAX / p }
    }

    #[inline]
    fn reduce(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    fn divisible(&self, x: u64) -> bool {
        x.wrapping_mul(self.pinv) <= self.div_limit
    }
}

impl Ring for SmallField {
    type E = u64;

    fn one(&self) -> u64 {
        1
    }

    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }

    #[inline]
    fn expand(&self, row: &[u64], prev: &[u64], terms: &[Term]) -> Result<u64, Overflow> {
        let (mut pos, mut neg) = (0u64, 0u64);
        for t in terms {
            let v = row[t.col] * prev[t.prev];
            if t.neg {
                neg += v;
            } else {
                pos += v;
            }
        }
        let (a, b) = (self.reduce(pos), self.reduce(neg));
        Ok(if a >= b { a - b } else { a + self.p - b })
    }

    fn negate(&self, x: &u64) -> Result<u64, Overflow> {
        Ok(if *x == 0 { 0 } else { self.p - x })
    }

    #[inline]
    fn dot_is_zero(&self, a: &[u64], b: &[u64]) -> Result<bool, Overflow> {
        let s: u64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        Ok(self.divisible(s))
    }

    fn first_zero_row(&self, cof: &[u64], rows: &[u64], range: std::ops::Range<usize>) -> Result<Option<usize>, Overflow> {
        macro_rules! fixed {
            ($w:literal) => {{
                let c: [u64; $w] = cof.try_into().unwrap();
                for q in range {
                    let r = &rows[q * $w..(q + 1) * $w];
                    let mut s = 0u64;
                    for j in 0..$w {
                        s += c[j] * r[j];
                    }
                    if self.divisible(s) {
                        return Ok(Some(q));
                    }
                }
                Ok(None)
            }};
        }
        match cof.len() {
            3 => fixed!(3),
            4 => fixed!(4),
            5 => fixed!(5),
            6 => fixed!(6),
            7 => fixed!(7),
            w => {
                for q in range {
                    if self.dot_is_zero(cof, &rows[q * w..(q + 1) * w])? {
                        return Ok(Some(q));
                    }
                }
                Ok(None)
            }
        }
    }
}

/// `F_p` for any supported `p`, through `u128` products.
pub struct LargeField {
    p: u64,
}

impl LargeField {
    pub fn new(p: u64) -> Self {
        LargeField { p }
    }
}

impl Ring for LargeField {
    type E = u64;

    fn one(&self) -> u64 {
        1
    }

    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }

    fn expand(&self, row: &[u64], prev: &[u64], terms: &[Term]) -> Result<u64, Overflow> {
        let p = self.p as u128;
        let mut acc: u128 = 0;
        for t in terms {
            let v = (row[t.col] as u128 * prev[t.prev] as u128) % p;
            acc = if t.neg { (acc + p - v) % p } else { (acc + v) % p };
        }
        Ok(acc as u64)
    }

    fn negate(&self, x: &u64) -> Result<u64, Overflow> {
        Ok(if *x == 0 { 0 } else { self.p - x })
    }

    fn dot_is_zero(&self, a: &[u64], b: &[u64]) -> Result<bool, Overflow> {
        let p = self.p as u128;
        let s = a.iter().zip(b).fold(0u128, |acc, (x, y)| (acc + (*x as u128 * *y as u128) % p) % p);
        Ok(s == 0)
    }
}

/// Integers in `i128`; any overflow aborts the scan.
pub struct Int128;

impl Ring for Int128 {
    type E = i128;

    fn one(&self) -> i128 {
        1
    }

    fn is_zero(&self, x: &i128) -> bool {
        *x == 0
    }

    fn expand(&self, row: &[i128], prev: &[i128], terms: &[Term]) -> Result<i128, Overflow> {
        let mut acc: i128 = 0;
        for t in terms {
            let v = row[t.col].checked_mul(prev[t.prev]).ok_or(Overflow)?;
            acc = if t.neg { acc.checked_sub(v) } else { acc.checked_add(v) }.ok_or(Overflow)?;
        }
        Ok(acc)
    }

    fn negate(&self, x: &i128) -> Result<i128, Overflow> {
        x.checked_neg().ok_or(Overflow)
    }

    fn dot_is_zero(&self, a: &[i128], b: &[i128]) -> Result<bool, Overflow> {
        let mut acc: i128 = 0;
        for (x, y) in a.iter().zip(b) {
            acc = acc.checked_add(x.checked_mul(*y).ok_or(Overflow)?).ok_or(Overflow)?;
        }
        Ok(acc == 0)
    }
}

/// Arbitrary-precision integers.
pub struct Big;

impl Ring for Big {
    type E = BigInt;

    fn one(&self) -> BigInt {
        BigInt::from(1)
    }

    fn is_zero(&self, x: &BigInt) -> bool {
        x.is_zero()
    }

    fn expand(&self, row: &[BigInt], prev: &[BigInt], terms: &[Term]) -> Result<BigInt, Overflow> {
        let mut acc = BigInt::zero();
        for t in terms {
            let v = &row[t.col] * &prev[t.prev];
            if t.neg {
                acc -= v;
            } else {
                acc += v;
            }
        }
        Ok(acc)
    }

    fn negate(&self, x: &BigInt) -> Result<BigInt, Overflow> {
        Ok(-x)
    }

    fn dot_is_zero(&self, a: &[BigInt], b: &[BigInt]) -> Result<bool, Overflow> {
        let s: BigInt = a.iter().zip(b).map(|(x, y)| x * y).sum();
        Ok(s.is_zero())
    }
}

/// Integer rows, tried in `i128` first and redone in `BigInt` on overflow.
pub fn first_vanishing_int(rows: &[Vec<BigInt>], width: usize) -> Option<Vec<usize>> {
    let narrow: Option<Vec<i128>> = rows.iter().flatten().map(ToPrimitive::to_i128).collect();
    if let Some(data) = narrow {
        if let Ok(r) = first_vanishing(&Int128, &Rows::new(width, data)) {
            return r;
        }
    }
    let data = rows.iter().flatten().cloned().collect();
    first_vanishing(&Big, &Rows::new(width, data)).expect("BigInt never overflows")
}

/// Integer version of [`max_incidence`] with the same fallback.
pub fn max_incidence_int(rows: &[Vec<BigInt>], width: usize, need_last: bool) -> usize {
    let narrow: Option<Vec<i128>> = rows.iter().flatten().map(ToPrimitive::to_i128).collect();
    if let Some(data) = narrow {
        let admit = move |r: &Int128, c: &[i128]| admit_cofactors(r, c, need_last);
        if let Ok(m) = max_incidence(&Int128, &Rows::new(width, data), &admit) {
            return m;
        }
    }
    let data = rows.iter().flatten().cloned().collect();
    let admit = move |r: &Big, c: &[BigInt]| admit_cofactors(r, c, need_last);
    max_incidence(&Big, &Rows::new(width, data), &admit).expect("BigInt never overflows")
}

/// A `(w−1)`-subset spans a flat when some cofactor is nonzero; with
/// `need_last` the cofactor of the last column must be the nonzero one.
pub fn admit_cofactors<R: Ring>(ring: &R, cof: &[R::E], need_last: bool) -> bool {
    if need_last {
        cof.last().is_some_and(|c| !ring.is_zero(c))
    } else {
        cof.iter().any(|c| !ring.is_zero(c))
    }
}

/// Field rows with residues in `[0, p)`.
pub fn first_vanishing_field(p: u64, rows: Vec<u64>, width: usize) -> Option<Vec<usize>> {
    let rows = Rows::new(width, rows);
    let r = if p < SMALL_FIELD_LIMIT && width <= 64 {
        first_vanishing(&SmallField::new(p), &rows)
    } else {
        first_vanishing(&LargeField::new(p), &rows)
    };
    r.expect("field arithmetic never overflows")
}

pub fn max_incidence_field(p: u64, rows: Vec<u64>, width: usize, need_last: bool) -> usize {
    let rows = Rows::new(width, rows);
    let r = if p < SMALL_FIELD_LIMIT && width <= 64 {
        let admit = move |r: &SmallField, c: &[u64]| admit_cofactors(r, c, need_last);
        max_incidence(&SmallField::new(p), &rows, &admit)
    } else {
        let admit = move |r: &LargeField, c: &[u64]| admit_cofactors(r, c, need_last);
        max_incidence(&LargeField::new(p), &rows, &admit)
    };
    r.expect("field arithmetic never overflows")
}
