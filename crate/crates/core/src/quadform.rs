//! Quadratic forms over F_p and over Q.
//!
//! A form `Q = Σ_{i≤j} λ_{i,j} X_i X_j` is stored as its upper-triangular
//! coefficient list. Over a finite field of odd order every nonzero form is
//! either *rich* (it has a basis `v_1..v_d` with `Q(v_i) = 0` for `i < d` and
//! `Q(v_d) ≠ 0`) or irreducible of rank 2; [`classify`] decides which and
//! produces the witness.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{FieldElement, Prime};
use crate::linalg;
use crate::projective::{enumerate_projective, normalize, ProjPoint};

/// Vector spaces up to this many elements are searched exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("the zero form is not allowed")]
    ZeroForm,
    #[error("forms need dimension at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("index ({i}, {j}) is out of range for dimension {dim} (need 1 ≤ i ≤ j ≤ {dim})")]
    BadIndex { i: usize, j: usize, dim: usize },
    #[error("coefficient for ({i}, {j}) given twice")]
    DuplicateTerm { i: usize, j: usize },
    #[error("cannot parse form term {0:?}")]
    Syntax(String),
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("vector has length {got}, form has dimension {dim}")]
    VectorLength { got: usize, dim: usize },
    #[error("rich basis invariant violated: {0}")]
    InvalidBasis(&'static str),
    #[error(
        "internal inconsistency: form is not irreducible of rank 2 over F_{prime} but no rich basis was found"
    )]
    Inconsistent { prime: u64 },
}

#[inline]
fn tri_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < dim);
    i * dim - i * (i + 1) / 2 + j
}

fn tri_len(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

fn tri_pairs(dim: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..dim).flat_map(move |i| (i..dim).map(move |j| (i, j)))
}

/// Quadratic form over `F_p`. Indices are 0-based in the API.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    dim: usize,
    prime: Prime,
    coeffs: Vec<FieldElement>,
}

impl QuadraticForm {
    /// Coefficients in upper-triangular row-major order:
    /// `λ_{0,0}, λ_{0,1}, …, λ_{0,d-1}, λ_{1,1}, …`.
    pub fn new(dim: usize, prime: Prime, coeffs: Vec<FieldElement>) -> Result<Self, FormError> {
        if dim < 2 {
            return Err(FormError::DimensionTooSmall(dim));
        }
        if coeffs.len() != tri_len(dim) {
            return Err(FormError::CoefficientCount { expected: tri_len(dim), got: coeffs.len() });
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(FormError::ZeroForm);
        }
        Ok(QuadraticForm { dim, prime, coeffs })
    }

    pub fn from_terms(dim: usize, prime: Prime, terms: &[(usize, usize, i64)]) -> Result<Self, FormError> {
        let mut coeffs = vec![FieldElement::zero(prime); tri_len(dim)];
        for &(i, j, c) in terms {
            if i > j || j >= dim {
                return Err(FormError::BadIndex { i: i + 1, j: j + 1, dim });
            }
            coeffs[tri_index(dim, i, j)] += FieldElement::from_i128(c as i128, prime);
        }
        QuadraticForm::new(dim, prime, coeffs)
    }

    /// `X_1² + … + X_d²`.
    pub fn sphere(dim: usize, prime: Prime) -> Result<Self, FormError> {
        let terms: Vec<_> = (0..dim).map(|i| (i, i, 1)).collect();
        QuadraticForm::from_terms(dim, prime, &terms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn coeff(&self, i: usize, j: usize) -> FieldElement {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[tri_index(self.dim, i, j)]
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Nonzero terms as `(i, j, λ_{i,j})`, 0-based.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, FieldElement)> + '_ {
        tri_pairs(self.dim)
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), &c)| (i, j, c))
    }

    pub fn evaluate(&self, v: &[FieldElement]) -> FieldElement {
        debug_assert_eq!(v.len(), self.dim);
        let mut acc = FieldElement::zero(self.prime);
        for ((i, j), &c) in tri_pairs(self.dim).zip(&self.coeffs) {
            if !c.is_zero() {
                acc += c * v[i] * v[j];
            }
        }
        acc
    }

    /// Evaluation on raw residues, returning a residue.
    pub fn evaluate_residues(&self, v: &[u64]) -> u64 {
        let p = self.prime;
        let fv: Vec<FieldElement> = v.iter().map(|&x| FieldElement::new(x, p)).collect();
        self.evaluate(&fv).residue()
    }

    /// Symmetric matrix with `G[i][i] = λ_{i,i}` and `G[i][j] = λ_{i,j}/2`.
    pub fn gram_matrix(&self) -> Vec<Vec<FieldElement>> {
        let half = FieldElement::new(2, self.prime).inv().expect("odd prime");
        let mut g = vec![vec![FieldElement::zero(self.prime); self.dim]; self.dim];
        for ((i, j), &c) in tri_pairs(self.dim).zip(&self.coeffs) {
            if i == j {
                g[i][i] = c;
            } else {
                g[i][j] = c * half;
                g[j][i] = c * half;
            }
        }
        g
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over F_{}", self.prime)
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .map(|(i, j, c)| monomial(&c.residue().to_string(), i, j))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn monomial(c: &str, i: usize, j: usize) -> String {
    let var = if i == j { format!("X{}^2", i + 1) } else { format!("X{}*X{}", i + 1, j + 1) };
    if c == "1" {
        var
    } else {
        format!("{c}*{var}")
    }
}

/// Quadratic form with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalForm {
    dim: usize,
    coeffs: Vec<BigRational>,
}

impl RationalForm {
    pub fn new(dim: usize, coeffs: Vec<BigRational>) -> Result<Self, FormError> {
        if dim < 2 {
            return Err(FormError::DimensionTooSmall(dim));
        }
        if coeffs.len() != tri_len(dim) {
            return Err(FormError::CoefficientCount { expected: tri_len(dim), got: coeffs.len() });
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(FormError::ZeroForm);
        }
        Ok(RationalForm { dim, coeffs })
    }

    /// Terms `(i, j, numerator, denominator)`, 0-based indices.
    pub fn from_terms(dim: usize, terms: &[(usize, usize, i64, i64)]) -> Result<Self, FormError> {
        let mut coeffs = vec![BigRational::zero(); tri_len(dim)];
        let mut seen = vec![false; tri_len(dim)];
        for &(i, j, num, den) in terms {
            if i > j || j >= dim {
                return Err(FormError::BadIndex { i: i + 1, j: j + 1, dim });
            }
            if den == 0 {
                return Err(FormError::Syntax(format!("{num}/{den}")));
            }
            let k = tri_index(dim, i, j);
            if seen[k] {
                return Err(FormError::DuplicateTerm { i: i + 1, j: j + 1 });
            }
            seen[k] = true;
            coeffs[k] = BigRational::new(BigInt::from(num), BigInt::from(den));
        }
        RationalForm::new(dim, coeffs)
    }

    pub fn sphere(dim: usize) -> Result<Self, FormError> {
        let terms: Vec<_> = (0..dim).map(|i| (i, i, 1, 1)).collect();
        RationalForm::from_terms(dim, &terms)
    }

    /// Parses `"sphere"` or semicolon-separated `i,j,c` triples with 1-based
    /// `i ≤ j` and `c` an integer or `num/den`.
    pub fn parse(spec: &str, dim: usize) -> Result<Self, FormError> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("sphere") {
            return RationalForm::sphere(dim);
        }
        let mut coeffs = vec![BigRational::zero(); tri_len(dim)];
        let mut seen = vec![false; tri_len(dim)];
        if dim < 2 {
            return Err(FormError::DimensionTooSmall(dim));
        }
        for term in spec.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let parts: Vec<&str> = term.split(',').map(str::trim).collect();
            let [i, j, c] = parts.as_slice() else {
                return Err(FormError::Syntax(term.to_string()));
            };
            let bad = || FormError::Syntax(term.to_string());
            let i: usize = i.parse().map_err(|_| bad())?;
            let j: usize = j.parse().map_err(|_| bad())?;
            if i == 0 || i > j || j > dim {
                return Err(FormError::BadIndex { i, j, dim });
            }
            let value = parse_rational(c).ok_or_else(bad)?;
            let k = tri_index(dim, i - 1, j - 1);
            if seen[k] {
                return Err(FormError::DuplicateTerm { i, j });
            }
            seen[k] = true;
            coeffs[k] = value;
        }
        RationalForm::new(dim, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, i: usize, j: usize) -> &BigRational {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.coeffs[tri_index(self.dim, i, j)]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Nonzero terms as `(i, j, λ_{i,j})`, 0-based.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> + '_ {
        tri_pairs(self.dim)
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), c)| (i, j, c))
    }

    /// Inverse of [`RationalForm::parse`]: 1-based `i,j,c` triples.
    pub fn to_spec(&self) -> String {
        self.terms()
            .map(|(i, j, c)| {
                if c.is_integer() {
                    format!("{},{},{}", i + 1, j + 1, c.numer())
                } else {
                    format!("{},{},{}/{}", i + 1, j + 1, c.numer(), c.denom())
                }
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn evaluate(&self, v: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for ((i, j), c) in tri_pairs(self.dim).zip(&self.coeffs) {
            if !c.is_zero() {
                acc += c * &v[i] * &v[j];
            }
        }
        acc
    }

    /// The positive multiple with coprime integer coefficients.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &content).collect()
    }

    /// Exact evaluation of the primitive integer multiple at an integer point.
    pub fn evaluate_primitive(&self, primitive: &[BigInt], v: &[i64]) -> BigInt {
        let mut acc = BigInt::zero();
        for ((i, j), c) in tri_pairs(self.dim).zip(primitive) {
            if !c.is_zero() {
                acc += c * BigInt::from(v[i]) * BigInt::from(v[j]);
            }
        }
        acc
    }

    pub fn gram_matrix(&self) -> Vec<Vec<BigRational>> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut g = vec![vec![BigRational::zero(); self.dim]; self.dim];
        for ((i, j), c) in tri_pairs(self.dim).zip(&self.coeffs) {
            if i == j {
                g[i][i] = c.clone();
            } else {
                g[i][j] = c * &half;
                g[j][i] = c * &half;
            }
        }
        g
    }

    pub fn gram_rank(&self) -> usize {
        linalg::rank(&self.gram_matrix())
    }

    /// For a rank-2 form, the discriminant `λ₁₂² − 4λ₁₁λ₂₂` of its rank-2 part,
    /// scaled by a square to an integer. `None` unless the rank is 2.
    pub fn rank2_discriminant(&self) -> Option<BigInt> {
        let pivots = diagonalize(self.gram_matrix());
        let [a, b] = pivots.as_slice() else {
            return None;
        };
        let delta = -(a * b) * BigRational::from_integer(BigInt::from(4));
        // Δ·den² is an integer in the same square class
        Some(delta.numer() * delta.denom())
    }

    /// Irreducible of rank 2 over Q: rank 2 and the discriminant is not a
    /// rational square. Returns the integer discriminant in that case.
    pub fn irreducible_rank2_discriminant(&self) -> Option<BigInt> {
        let delta = self.rank2_discriminant()?;
        if is_integer_square(&delta) {
            None
        } else {
            Some(delta)
        }
    }
}

impl fmt::Debug for RationalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms().map(|(i, j, c)| monomial(&c.to_string(), i, j)).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn is_integer_square(v: &BigInt) -> bool {
    if v.is_negative() {
        return false;
    }
    let r = v.sqrt();
    &(&r * &r) == v
}

/// Nonzero diagonal entries after symmetric elimination (characteristic ≠ 2).
///
/// Uses congruence moves only: simultaneous row/column swaps, adding one
/// basis vector to another, and subtracting multiples of a pivot. All of
/// these have determinant ±1, so the product of the pivots equals the
/// determinant of the nondegenerate part up to sign.
pub fn diagonalize<S: linalg::Scalar>(mut g: Vec<Vec<S>>) -> Vec<S> {
    let n = g.len();
    let mut pivots = Vec::new();
    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| !g[i][i].is_zero()) {
            sym_swap(&mut g, k, i);
        } else {
            let pair = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !g[i][j].is_zero());
            let Some((i, j)) = pair else {
                break;
            };
            // e_i ← e_i + e_j makes the diagonal entry 2·g[i][j] ≠ 0
            for c in 0..n {
                let t = g[i][c].add(&g[j][c]);
                g[i][c] = t;
            }
            for r in 0..n {
                let t = g[r][i].add(&g[r][j]);
                g[r][i] = t;
            }
            sym_swap(&mut g, k, i);
        }
        let pivot = g[k][k].clone();
        let inv = pivot.inv().expect("nonzero pivot");
        for j in k + 1..n {
            if g[j][k].is_zero() {
                continue;
            }
            let f = g[j][k].mul(&inv);
            for c in 0..n {
                let t = g[j][c].sub(&f.mul(&g[k][c]));
                g[j][c] = t;
            }
            for r in 0..n {
                let t = g[r][j].sub(&f.mul(&g[r][k]));
                g[r][j] = t;
            }
        }
        pivots.push(pivot);
    }
    pivots
}

fn sym_swap<S: linalg::Scalar>(g: &mut [Vec<S>], a: usize, b: usize) {
    if a == b {
        return;
    }
    g.swap(a, b);
    for row in g.iter_mut() {
        row.swap(a, b);
    }
}

pub fn evaluate(q: &QuadraticForm, v: &[FieldElement]) -> Result<FieldElement, FormError> {
    if v.len() != q.dim {
        return Err(FormError::VectorLength { got: v.len(), dim: q.dim });
    }
    Ok(q.evaluate(v))
}

pub fn gram_rank(q: &QuadraticForm) -> usize {
    linalg::rank(&q.gram_matrix())
}

/// Discriminant of the rank-2 part, when the form has rank exactly 2.
pub fn rank2_discriminant(q: &QuadraticForm) -> Option<FieldElement> {
    let pivots = diagonalize(q.gram_matrix());
    let [a, b] = pivots.as_slice() else {
        return None;
    };
    Some(-(FieldElement::new(4, q.prime) * *a * *b))
}

/// Basis `v_1..v_d` with `Q(v_i) = 0` for `i < d` and `Q(v_d) ≠ 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RichBasis {
    vectors: Vec<Vec<FieldElement>>,
}

impl RichBasis {
    /// Validates all invariants against `q`.
    pub fn new(q: &QuadraticForm, vectors: Vec<Vec<FieldElement>>) -> Result<Self, FormError> {
        let d = q.dim;
        if vectors.len() != d || vectors.iter().any(|v| v.len() != d) {
            return Err(FormError::InvalidBasis("wrong shape"));
        }
        if linalg::rank(&vectors) != d {
            return Err(FormError::InvalidBasis("vectors are not a basis"));
        }
        if vectors[..d - 1].iter().any(|v| !q.evaluate(v).is_zero()) {
            return Err(FormError::InvalidBasis("a leading vector is anisotropic"));
        }
        if q.evaluate(&vectors[d - 1]).is_zero() {
            return Err(FormError::InvalidBasis("last vector is isotropic"));
        }
        Ok(RichBasis { vectors })
    }

    pub fn vectors(&self) -> &[Vec<FieldElement>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FormClass {
    Rich(RichBasis),
    IrreducibleRank2 { discriminant: FieldElement },
}

impl FormClass {
    pub fn is_rich(&self) -> bool {
        matches!(self, FormClass::Rich(_))
    }
}

/// Rich or irreducible of rank 2 (the two cases are exhaustive over F_p).
pub fn classify(q: &QuadraticForm, seed: u64) -> Result<FormClass, FormError> {
    if let Some(delta) = rank2_discriminant(q) {
        if !delta.is_square() {
            return Ok(FormClass::IrreducibleRank2 { discriminant: delta });
        }
    }
    rich_basis(q, seed).map(FormClass::Rich).ok_or(FormError::Inconsistent { prime: q.prime.get() })
}

/// Incremental span membership over F_p (reduced row echelon basis).
struct Span {
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl Span {
    fn new() -> Self {
        Span { rows: Vec::new() }
    }

    fn reduce(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            let f = v[*pc];
            if !f.is_zero() {
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= f * *r;
                }
            }
        }
        v
    }

    fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` when independent; returns whether it was added.
    fn insert(&mut self, v: &[FieldElement]) -> bool {
        let r = self.reduce(v);
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pc].inv().expect("nonzero");
        let r: Vec<FieldElement> = r.iter().map(|&x| x * inv).collect();
        for (_, row) in self.rows.iter_mut() {
            let f = row[pc];
            if !f.is_zero() {
                for (x, y) in row.iter_mut().zip(&r) {
                    *x -= f * *y;
                }
            }
        }
        self.rows.push((pc, r));
        true
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

fn standard_basis(d: usize, p: Prime) -> impl Iterator<Item = Vec<FieldElement>> {
    (0..d).map(move |i| {
        let mut e = vec![FieldElement::zero(p); d];
        e[i] = FieldElement::one(p);
        e
    })
}

/// Searches for a rich basis; `None` means the form is not rich.
///
/// Small spaces (`p^d ≤ EXHAUSTIVE_LIMIT`) are enumerated projectively:
/// isotropic directions are taken greedily while independent, then an
/// anisotropic vector outside their span is chosen, trying standard basis
/// vectors first. Larger spaces sample seeded random planes and enumerate
/// each plane's `p + 1` directions.
pub fn rich_basis(q: &QuadraticForm, seed: u64) -> Option<RichBasis> {
    let d = q.dim;
    let p = q.prime;
    let exhaustive = p.get().checked_pow(d as u32).is_some_and(|n| n <= EXHAUSTIVE_LIMIT);
    let mut span = Span::new();
    let mut vectors = Vec::with_capacity(d);

    if exhaustive {
        for dir in enumerate_projective(d - 1, p) {
            if span.len() == d - 1 {
                break;
            }
            let v = dir.coords();
            if q.evaluate(v).is_zero() && span.insert(v) {
                vectors.push(v.to_vec());
            }
        }
        if span.len() < d - 1 {
            return None;
        }
        let last = standard_basis(d, p)
            .chain(enumerate_projective(d - 1, p).map(|x| x.coords().to_vec()))
            .find(|v| !q.evaluate(v).is_zero() && !span.contains(v))?;
        vectors.push(last);
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_vec = |rng: &mut ChaCha8Rng| -> Vec<FieldElement> {
            (0..d).map(|_| FieldElement::new(rng.gen_range(0..p.get()), p)).collect()
        };
        let attempts = 64 * d;
        for _ in 0..attempts {
            if span.len() == d - 1 {
                break;
            }
            let v = random_vec(&mut rng);
            let w = random_vec(&mut rng);
            // directions of the plane: v + t·w for t ∈ F_p, and w
            let directions = p.elements().map(|t| v.iter().zip(&w).map(|(&a, &b)| a + t * b).collect()).chain([w.clone()]);
            for u in directions {
                let u: Vec<FieldElement> = u;
                if span.len() == d - 1 {
                    break;
                }
                if q.evaluate(&u).is_zero() && span.insert(&u) {
                    vectors.push(u);
                }
            }
        }
        if span.len() < d - 1 {
            return None;
        }
        let last = standard_basis(d, p)
            .chain((0..256).map(|_| random_vec(&mut rng)))
            .find(|v| !q.evaluate(v).is_zero() && !span.contains(v))?;
        vectors.push(last);
    }
    let basis = RichBasis::new(q, vectors).expect("search produces valid bases");
    Some(basis)
}

/// The points `[0 : v_i]` of the ideal hyperplane, isotropic ones first.
pub fn ideal_points(b: &RichBasis) -> Vec<ProjPoint> {
    b.vectors
        .iter()
        .map(|v| {
            let mut coords = Vec::with_capacity(v.len() + 1);
            coords.push(FieldElement::zero(v[0].modulus()));
            coords.extend_from_slice(v);
            normalize(coords).expect("basis vectors are nonzero")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::is_general_position;
    use proptest::prelude::*;

    fn pr(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn fv(vals: &[u64], p: u64) -> Vec<FieldElement> {
        vals.iter().map(|&v| FieldElement::new(v, pr(p))).collect()
    }

    fn sphere(d: usize, p: u64) -> QuadraticForm {
        QuadraticForm::sphere(d, pr(p)).unwrap()
    }

    fn x1x2(d: usize, p: u64) -> QuadraticForm {
        QuadraticForm::from_terms(d, pr(p), &[(0, 1, 1)]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert!(sphere(2, 5).evaluate(&fv(&[0, 0], 5)).is_zero());
        assert!(sphere(2, 5).evaluate(&fv(&[1, 2], 5)).is_zero());
        assert_eq!(x1x2(2, 7).evaluate(&fv(&[3, 4], 7)).residue(), 12 % 7);
        assert!(matches!(evaluate(&sphere(2, 5), &fv(&[1], 5)), Err(FormError::VectorLength { .. })));
    }

    #[test]
    fn zero_form_rejected() {
        assert_eq!(QuadraticForm::from_terms(2, pr(5), &[(0, 0, 5)]), Err(FormError::ZeroForm));
        assert_eq!(RationalForm::parse("1,1,0", 2), Err(FormError::ZeroForm));
    }

    #[test]
    fn gram_rank_examples() {
        assert_eq!(gram_rank(&sphere(3, 7)), 3);
        assert_eq!(gram_rank(&x1x2(3, 7)), 2);
        assert_eq!(gram_rank(&QuadraticForm::from_terms(2, pr(7), &[(0, 0, 1)]).unwrap()), 1);
    }

    #[test]
    fn classify_examples() {
        let p7 = pr(7);
        assert_eq!(
            classify(&sphere(2, 7), 0).unwrap(),
            FormClass::IrreducibleRank2 { discriminant: FieldElement::from_i128(-4, p7) }
        );
        assert!(classify(&sphere(2, 13), 0).unwrap().is_rich());
        assert!(classify(&sphere(3, 7), 0).unwrap().is_rich());
    }

    #[test]
    fn rich_basis_examples() {
        for p in [3, 5, 7, 11, 101] {
            let b = rich_basis(&x1x2(2, p), 0).unwrap();
            assert_eq!(b.vectors(), &[fv(&[1, 0], p), fv(&[1, 1], p)]);
        }
        let b = rich_basis(&sphere(2, 5), 0).unwrap();
        assert_eq!(b.vectors(), &[fv(&[1, 2], 5), fv(&[1, 0], 5)]);
        // only the zero vector is isotropic for X1²+X2² mod 7
        let p7 = pr(7);
        let isotropic = (0..7u64)
            .flat_map(|a| (0..7u64).map(move |b| (a, b)))
            .filter(|&(a, b)| sphere(2, 7).evaluate(&fv(&[a, b], 7)).is_zero())
            .count();
        assert_eq!(isotropic, 1);
        assert!(rich_basis(&QuadraticForm::sphere(2, p7).unwrap(), 0).is_none());
    }

    #[test]
    fn ideal_point_examples() {
        let q = sphere(2, 5);
        let id = RichBasis::new(&QuadraticForm::from_terms(2, pr(5), &[(0, 0, 1)]).unwrap(), vec![fv(&[0, 1], 5), fv(&[1, 0], 5)]).unwrap();
        let pts: Vec<_> = ideal_points(&id).iter().map(|x| x.residues()).collect();
        assert_eq!(pts, vec![vec![0, 0, 1], vec![0, 1, 0]]);
        let b = rich_basis(&q, 0).unwrap();
        let pts = ideal_points(&b);
        assert_eq!(pts.iter().map(|x| x.residues()).collect::<Vec<_>>(), vec![vec![0, 1, 2], vec![0, 1, 0]]);
        assert!(is_general_position(&pts));
    }

    #[test]
    fn rich_basis_rejects_bad_input() {
        let q = sphere(2, 5);
        assert!(RichBasis::new(&q, vec![fv(&[1, 0], 5), fv(&[1, 2], 5)]).is_err());
        assert!(RichBasis::new(&q, vec![fv(&[1, 2], 5), fv(&[2, 4], 5)]).is_err());
        assert!(RichBasis::new(&q, vec![fv(&[1, 2], 5), fv(&[1, 3], 5)]).is_err());
    }

    /// Brute force over all ordered bases: does some basis satisfy the
    /// rich conditions?
    fn rich_by_definition(q: &QuadraticForm) -> bool {
        let p = q.prime().get();
        let d = q.dim();
        let vecs: Vec<Vec<FieldElement>> = (0..p.pow(d as u32))
            .map(|mut idx| {
                (0..d)
                    .map(|_| {
                        let v = idx % p;
                        idx /= p;
                        FieldElement::new(v, q.prime())
                    })
                    .collect()
            })
            .collect();
        assert_eq!(d, 2);
        vecs.iter().any(|a| {
            q.evaluate(a).is_zero()
                && vecs.iter().any(|b| !q.evaluate(b).is_zero() && linalg::rank(&[a.clone(), b.clone()]) == 2)
        })
    }

    #[test]
    fn classify_matches_definition_exhaustively() {
        for p in [3u64, 5] {
            let prime = pr(p);
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        let coeffs = fv(&[a, b, c], p);
                        let Ok(q) = QuadraticForm::new(2, prime, coeffs) else { continue };
                        let class = classify(&q, 0).unwrap();
                        assert_eq!(class.is_rich(), rich_by_definition(&q), "{q:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn sphere_richness_matches_minus_one() {
        for p in (3u64..=200).filter(|&n| crate::field::is_prime(n)) {
            let prime = pr(p);
            let rich2 = classify(&sphere(2, p), 0).unwrap().is_rich();
            let minus_one_square = crate::field::legendre_symbol(-1, prime) == 1;
            assert_eq!(rich2, minus_one_square, "p={p}");
            assert_eq!(rich2, p % 4 != 3);
            for d in 3..=4 {
                assert!(classify(&sphere(d, p), 0).unwrap().is_rich(), "d={d} p={p}");
            }
        }
    }

    #[test]
    fn large_field_uses_sampling() {
        let p = pr(1_000_003);
        for d in [2usize, 3] {
            for q in [QuadraticForm::sphere(d, p).unwrap(), QuadraticForm::from_terms(d, p, &[(0, 1, 1)]).unwrap()] {
                // 1000003 ≡ 3 mod 4, so the plane sphere is excluded
                if d == 2 && q.coeff(0, 0).residue() == 1 {
                    assert!(!classify(&q, 7).unwrap().is_rich());
                    continue;
                }
                let FormClass::Rich(b) = classify(&q, 7).unwrap() else { panic!("not rich") };
                RichBasis::new(&q, b.vectors().to_vec()).unwrap();
            }
        }
    }

    #[test]
    fn rational_forms() {
        let f = RationalForm::parse("1,1,1/2; 2,2,1", 2).unwrap();
        assert_eq!(f.primitive_integer_coeffs(), vec![BigInt::from(1), BigInt::from(0), BigInt::from(2)]);
        assert_eq!(RationalForm::parse("sphere", 3).unwrap(), RationalForm::sphere(3).unwrap());
        assert!(matches!(RationalForm::parse("2,1,1", 2), Err(FormError::BadIndex { .. })));
        assert!(matches!(RationalForm::parse("1,3,1", 2), Err(FormError::BadIndex { .. })));
        assert!(matches!(RationalForm::parse("1,1,1;1,1,2", 2), Err(FormError::DuplicateTerm { .. })));
        assert!(matches!(RationalForm::parse("1,1,x", 2), Err(FormError::Syntax(_))));
        assert!(matches!(RationalForm::parse("1,1,1/0", 2), Err(FormError::Syntax(_))));
        assert_eq!(RationalForm::sphere(2).unwrap().irreducible_rank2_discriminant(), Some(BigInt::from(-4)));
        let hex = RationalForm::parse("1,1,1;1,2,1;2,2,1", 2).unwrap();
        assert_eq!(hex.irreducible_rank2_discriminant(), Some(BigInt::from(-3)));
        let ell = RationalForm::parse("1,1,2;2,2,3", 2).unwrap();
        assert_eq!(ell.irreducible_rank2_discriminant(), Some(BigInt::from(-24)));
        assert_eq!(RationalForm::parse("1,2,1", 2).unwrap().irreducible_rank2_discriminant(), None);
        assert_eq!(RationalForm::parse("1,1,1;2,2,-1", 2).unwrap().irreducible_rank2_discriminant(), None);
        assert_eq!(RationalForm::sphere(3).unwrap().rank2_discriminant(), None);
        // rank 2 inside dimension 3
        let r2 = RationalForm::parse("1,1,1;1,2,1;2,2,1", 3).unwrap();
        assert_eq!(r2.gram_rank(), 2);
        assert_eq!(r2.irreducible_rank2_discriminant(), Some(BigInt::from(-3)));
    }

    #[test]
    fn discriminant_in_two_variables_is_the_textbook_one() {
        for p in [3u64, 5, 7, 11] {
            let prime = pr(p);
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        let Ok(q) = QuadraticForm::new(2, prime, fv(&[a, b, c], p)) else { continue };
                        let direct = FieldElement::new(b * b, prime) - FieldElement::new(4 * a * c, prime);
                        match rank2_discriminant(&q) {
                            Some(delta) => assert_eq!(delta, direct),
                            None => assert!(direct.is_zero()),
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn homogeneity(p in prop_oneof![Just(5u64), Just(7), Just(13), Just(101)], coeffs in proptest::collection::vec(0u64..1000, 6), v in proptest::collection::vec(0u64..1000, 3), lambda in 0u64..1000) {
            let prime = pr(p);
            let Ok(q) = QuadraticForm::new(3, prime, fv(&coeffs, p)) else { return Ok(()) };
            let v = fv(&v, p);
            let l = FieldElement::new(lambda, prime);
            let scaled: Vec<_> = v.iter().map(|&x| x * l).collect();
            prop_assert_eq!(q.evaluate(&scaled), l * l * q.evaluate(&v));
        }

        #[test]
        fn returned_bases_are_valid(p in prop_oneof![Just(3u64), Just(5), Just(7), Just(11), Just(13)], coeffs in proptest::collection::vec(0u64..13, 6)) {
            let prime = pr(p);
            let Ok(q) = QuadraticForm::new(3, prime, fv(&coeffs, p)) else { return Ok(()) };
            if let Some(b) = rich_basis(&q, 1) {
                let v = b.vectors();
                prop_assert_eq!(linalg::rank(v), 3);
                prop_assert!(q.evaluate(&v[0]).is_zero() && q.evaluate(&v[1]).is_zero());
                prop_assert!(!q.evaluate(&v[2]).is_zero());
            }
        }
    }
}
