//! Exhaustive certification that a point set is Q-generic: no `d+1` points
//! on an affine hyperplane and no `d+2` on a common Q-quadric.
//!
//! Hyperplanes are tested through the `(d+1)×(d+1)` determinants of rows
//! `(1, x)`. Quadrics use the bordered rows `(1, x, Q(x))`: once no `d+1`
//! points are affinely dependent, a vanishing `(d+2)×(d+2)` determinant
//! means a relation `α₀ + α·x + βQ(x) = 0` with `β ≠ 0`, i.e. a Q-quadric.
//! Field point sets use `F_p` arithmetic; integer point sets are exact,
//! with an `i128` fast path that falls back to big integers on overflow.

mod engine;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::field::{FieldElement, Prime};
use crate::lift::reduce_form;
use crate::linalg::{self, Scalar};
use crate::projective::AffinePoint;
use crate::quadform::{QuadraticForm, RationalForm};

/// Incidence maxima are only computed for sets up to this size.
pub const INCIDENCE_POINT_LIMIT: usize = 200;
/// ... and only when the counting pass needs at most this many dot products.
pub const INCIDENCE_WORK_LIMIT: u128 = 1_000_000_000;
/// Rank-deficient sets fall back to a subset search up to this size.
const BRUTE_FORCE_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("point {index} has {got} coordinates, expected {dim}")]
    PointLength { index: usize, got: usize, dim: usize },
    #[error("point {index}: {value} is not a residue mod {prime}")]
    Residue { index: usize, value: u64, prime: u64 },
    #[error("points have dimension {points}, the form has dimension {form}")]
    DimensionMismatch { points: usize, form: usize },
    #[error("points are over F_{points}, the form over F_{form}")]
    PrimeMismatch { points: u64, form: u64 },
    #[error("integer point sets need a rational form")]
    FieldFormOnGrid,
    #[error("the quadric check needs a hyperplane certificate for this point set")]
    NotCertified,
    #[error("expected {expected} points, got {got}")]
    Count { expected: usize, got: usize },
    #[error("points are affinely dependent")]
    Dependent,
    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),
}

/// Points in `F_p^d` (residues) or `ℤ^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointSet {
    Field { prime: Prime, dim: usize, points: Vec<Vec<u64>> },
    Grid { dim: usize, points: Vec<Vec<i64>> },
}

impl PointSet {
    pub fn field(prime: Prime, dim: usize, points: Vec<Vec<u64>>) -> Result<Self, VerifyError> {
        if dim == 0 {
            return Err(VerifyError::ZeroDimension);
        }
        for (index, pt) in points.iter().enumerate() {
            if pt.len() != dim {
                return Err(VerifyError::PointLength { index, got: pt.len(), dim });
            }
            if let Some(&value) = pt.iter().find(|&&v| v >= prime.get()) {
                return Err(VerifyError::Residue { index, value, prime: prime.get() });
            }
        }
        Ok(PointSet::Field { prime, dim, points })
    }

    pub fn grid(dim: usize, points: Vec<Vec<i64>>) -> Result<Self, VerifyError> {
        if dim == 0 {
            return Err(VerifyError::ZeroDimension);
        }
        if let Some((index, pt)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(VerifyError::PointLength { index, got: pt.len(), dim });
        }
        Ok(PointSet::Grid { dim, points })
    }

    pub fn dim(&self) -> usize {
        match self {
            PointSet::Field { dim, .. } | PointSet::Grid { dim, .. } => *dim,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PointSet::Field { points, .. } => points.len(),
            PointSet::Grid { points, .. } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn prime(&self) -> Option<Prime> {
        match self {
            PointSet::Field { prime, .. } => Some(*prime),
            PointSet::Grid { .. } => None,
        }
    }

    /// The points at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        match self {
            PointSet::Field { prime, dim, points } => PointSet::Field {
                prime: *prime,
                dim: *dim,
                points: indices.iter().map(|&i| points[i].clone()).collect(),
            },
            PointSet::Grid { dim, points } => {
                PointSet::Grid { dim: *dim, points: indices.iter().map(|&i| points[i].clone()).collect() }
            }
        }
    }

    /// Coordinates of point `i` as signed integers (residues for field sets).
    pub fn coords(&self, i: usize) -> Vec<i64> {
        match self {
            PointSet::Field { points, .. } => points[i].iter().map(|&v| v as i64).collect(),
            PointSet::Grid { points, .. } => points[i].clone(),
        }
    }

    fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }
}

/// The form a point set is checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Form {
    Field(QuadraticForm),
    Rational(RationalForm),
}

impl From<QuadraticForm> for Form {
    fn from(q: QuadraticForm) -> Self {
        Form::Field(q)
    }
}

impl From<RationalForm> for Form {
    fn from(q: RationalForm) -> Self {
        Form::Rational(q)
    }
}

impl Form {
    pub fn dim(&self) -> usize {
        match self {
            Form::Field(q) => q.dim(),
            Form::Rational(q) => q.dim(),
        }
    }
}

/// Exact evidence for a violation: the determinant of the subset's matrix,
/// recomputed by elimination, and a nonzero relation `(α₀, α₁…α_d[, β])`
/// satisfied by every row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub determinant: String,
    pub relation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub subset: Vec<usize>,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    HyperplaneViolation(Violation),
    QuadricViolation(Violation),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::HyperplaneViolation(_) => "hyperplane_violation",
            Status::QuadricViolation(_) => "quadric_violation",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub status: Status,
    /// Subsets examined: everything on a pass, up to and including the
    /// violation otherwise.
    pub subsets_tested: u128,
    pub max_hyperplane_incidence: Option<usize>,
    pub max_quadric_incidence: Option<usize>,
}

impl Certificate {
    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn violation(&self) -> Option<&Violation> {
        match &self.status {
            Status::Pass => None,
            Status::HyperplaneViolation(v) | Status::QuadricViolation(v) => Some(v),
        }
    }
}

/// Proof that a specific point set passed [`check_hyperplanes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneCertificate {
    fingerprint: u64,
    subsets_tested: u128,
}

impl HyperplaneCertificate {
    pub fn subsets_tested(&self) -> u128 {
        self.subsets_tested
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HyperplaneOutcome {
    Pass(HyperplaneCertificate),
    Violation(Violation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadricOutcome {
    Pass { subsets_tested: u128 },
    Violation(Violation),
}

enum Rows {
    Field { prime: Prime, width: usize, data: Vec<u64> },
    Int { width: usize, data: Vec<Vec<BigInt>> },
}

impl Rows {
    fn first_vanishing(&self) -> Option<Vec<usize>> {
        match self {
            Rows::Field { prime, width, data } => engine::first_vanishing_field(prime.get(), data.clone(), *width),
            Rows::Int { width, data } => engine::first_vanishing_int(data, *width),
        }
    }

    fn max_incidence(&self, need_last: bool) -> usize {
        match self {
            Rows::Field { prime, width, data } => {
                engine::max_incidence_field(prime.get(), data.clone(), *width, need_last)
            }
            Rows::Int { width, data } => engine::max_incidence_int(data, *width, need_last),
        }
    }

    fn width(&self) -> usize {
        match self {
            Rows::Field { width, .. } | Rows::Int { width, .. } => *width,
        }
    }

    fn exact(&self, indices: &[usize]) -> Exact {
        match self {
            Rows::Field { prime, width, data } => Exact::Field(
                indices
                    .iter()
                    .map(|&i| data[i * width..(i + 1) * width].iter().map(|&v| FieldElement::new(v, *prime)).collect())
                    .collect(),
            ),
            Rows::Int { data, .. } => Exact::Rational(
                indices
                    .iter()
                    .map(|&i| data[i].iter().map(|v| BigRational::from_integer(v.clone())).collect())
                    .collect(),
            ),
        }
    }

    fn len(&self) -> usize {
        match self {
            Rows::Field { width, data, .. } => data.len() / width,
            Rows::Int { data, .. } => data.len(),
        }
    }
}

enum Exact {
    Field(Vec<Vec<FieldElement>>),
    Rational(Vec<Vec<BigRational>>),
}

impl Exact {
    fn rank(&self) -> usize {
        match self {
            Exact::Field(m) => linalg::rank(m),
            Exact::Rational(m) => linalg::rank(m),
        }
    }

    fn witness(&self) -> Result<Witness, VerifyError> {
        match self {
            Exact::Field(m) => {
                let det = linalg::determinant(m);
                let rel = linalg::kernel_vector(m).ok_or_else(|| dependent_mismatch(&det.to_string()))?;
                Ok(Witness {
                    determinant: det.residue().to_string(),
                    relation: rel.iter().map(|v| v.residue().to_string()).collect(),
                })
            }
            Exact::Rational(m) => {
                let det = linalg::determinant(m);
                let rel = linalg::kernel_vector(m).ok_or_else(|| dependent_mismatch(&det.to_string()))?;
                Ok(Witness { determinant: det.to_string(), relation: primitive_strings(&rel) })
            }
        }
    }

    /// Largest subset of rows `(1, x, v)` on which `(1, x)·α = −v` is solvable.
    fn largest_consistent(&self) -> usize {
        fn go<S: Scalar>(m: &[Vec<S>]) -> usize {
            let n = m.len();
            let w = m.first().map_or(0, Vec::len);
            let mut best = 0;
            for mask in 1u32..(1 << n) {
                let size = mask.count_ones() as usize;
                if size <= best {
                    continue;
                }
                let picked: Vec<&Vec<S>> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &m[i]).collect();
                let a: Vec<Vec<S>> = picked.iter().map(|r| r[..w - 1].to_vec()).collect();
                let ab: Vec<Vec<S>> = picked.iter().map(|r| r.to_vec()).collect();
                if linalg::rank(&a) == linalg::rank(&ab) {
                    best = size;
                }
            }
            best
        }
        match self {
            Exact::Field(m) => go(m),
            Exact::Rational(m) => go(m),
        }
    }
}

fn dependent_mismatch(det: &str) -> VerifyError {
    VerifyError::Inconsistent(format!("scan reported a vanishing subset but elimination gives determinant {det}"))
}

/// Scale a rational vector to coprime integers with a positive leading entry.
fn primitive_strings(v: &[BigRational]) -> Vec<String> {
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|c| (c * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let lead_negative = ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    for c in &mut ints {
        *c /= &g;
        if lead_negative {
            *c = -&*c;
        }
    }
    ints.iter().map(ToString::to_string).collect()
}

fn check_form(set: &PointSet, form: &Form) -> Result<(), VerifyError> {
    if set.dim() != form.dim() {
        return Err(VerifyError::DimensionMismatch { points: set.dim(), form: form.dim() });
    }
    match (set, form) {
        (PointSet::Field { prime, .. }, Form::Field(q)) if q.prime() != *prime => {
            Err(VerifyError::PrimeMismatch { points: prime.get(), form: q.prime().get() })
        }
        (PointSet::Grid { .. }, Form::Field(_)) => Err(VerifyError::FieldFormOnGrid),
        _ => Ok(()),
    }
}

fn hyperplane_rows(set: &PointSet) -> Rows {
    match set {
        PointSet::Field { prime, dim, points } => Rows::Field {
            prime: *prime,
            width: dim + 1,
            data: points.iter().flat_map(|p| std::iter::once(1).chain(p.iter().copied())).collect(),
        },
        PointSet::Grid { dim, points } => Rows::Int {
            width: dim + 1,
            data: points
                .iter()
                .map(|p| std::iter::once(BigInt::one()).chain(p.iter().map(|&v| BigInt::from(v))).collect())
                .collect(),
        },
    }
}

/// Rows `(1, x, Q(x))`. Rational forms are replaced by their primitive
/// integer multiple (integers) or by their reduction mod p (fields); both
/// leave the family of Q-quadrics unchanged.
fn quadric_rows(set: &PointSet, form: &Form) -> Result<Rows, VerifyError> {
    check_form(set, form)?;
    match (set, form) {
        (PointSet::Field { prime, dim, points }, _) => {
            let q = match form {
                Form::Field(q) => q.clone(),
                Form::Rational(r) => reduce_form(r, *prime).expect("content-1 reduction is nonzero"),
            };
            let data = points
                .iter()
                .flat_map(|p| {
                    let v = q.evaluate_residues(p);
                    std::iter::once(1).chain(p.iter().copied()).chain(std::iter::once(v))
                })
                .collect();
            Ok(Rows::Field { prime: *prime, width: dim + 2, data })
        }
        (PointSet::Grid { dim, points }, Form::Rational(r)) => {
            let prim = r.primitive_integer_coeffs();
            let data = points
                .iter()
                .map(|p| {
                    let mut row: Vec<BigInt> = Vec::with_capacity(dim + 2);
                    row.push(BigInt::one());
                    row.extend(p.iter().map(|&v| BigInt::from(v)));
                    row.push(r.evaluate_primitive(&prim, p));
                    row
                })
                .collect();
            Ok(Rows::Int { width: dim + 2, data })
        }
        (PointSet::Grid { .. }, Form::Field(_)) => Err(VerifyError::FieldFormOnGrid),
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c.to_u128().unwrap_or(u128::MAX)
}

/// Position of a sorted subset among all subsets of the same size of
/// `{0..n}` in lexicographic order.
pub fn lex_rank(subset: &[usize], n: usize) -> u128 {
    let k = subset.len();
    let mut rank: u128 = 0;
    let mut next = 0;
    for (j, &c) in subset.iter().enumerate() {
        for v in next..c {
            rank = rank.saturating_add(binomial(n - 1 - v, k - 1 - j));
        }
        next = c + 1;
    }
    rank
}

fn violation_at(rows: &Rows, subset: Vec<usize>) -> Result<Violation, VerifyError> {
    let witness = rows.exact(&subset).witness()?;
    if witness.determinant != "0" {
        return Err(dependent_mismatch(&witness.determinant));
    }
    Ok(Violation { subset, witness })
}

/// First `(d+1)`-subset, in lexicographic order, lying on an affine hyperplane.
pub fn check_hyperplanes(set: &PointSet) -> Result<HyperplaneOutcome, VerifyError> {
    let rows = hyperplane_rows(set);
    match rows.first_vanishing() {
        Some(s) => Ok(HyperplaneOutcome::Violation(violation_at(&rows, s)?)),
        None => Ok(HyperplaneOutcome::Pass(HyperplaneCertificate {
            fingerprint: set.fingerprint(),
            subsets_tested: binomial(set.len(), set.dim() + 1),
        })),
    }
}

/// First `(d+2)`-subset, in lexicographic order, on a common Q-quadric.
/// Only meaningful once the hyperplane condition holds, hence the token.
pub fn check_quadrics(
    set: &PointSet,
    form: &Form,
    certified: &HyperplaneCertificate,
) -> Result<QuadricOutcome, VerifyError> {
    if certified.fingerprint != set.fingerprint() {
        return Err(VerifyError::NotCertified);
    }
    let rows = quadric_rows(set, form)?;
    match rows.first_vanishing() {
        Some(s) => Ok(QuadricOutcome::Violation(violation_at(&rows, s)?)),
        None => Ok(QuadricOutcome::Pass { subsets_tested: binomial(set.len(), set.dim() + 2) }),
    }
}

fn counting_affordable(n: usize, flat_size: usize) -> bool {
    n <= INCIDENCE_POINT_LIMIT && binomial(n, flat_size).saturating_mul(n as u128) <= INCIDENCE_WORK_LIMIT
}

/// Largest number of points on one hyperplane and on one Q-quadric.
///
/// Exact whenever a value is returned. When the points affinely span
/// `F^d`, both maxima are attained on flats spanned by points of the set,
/// so they are found by counting, for every `d`-subset (resp. `(d+1)`-subset)
/// in general position, all points on the hyperplane (resp. unique Q-quadric)
/// it determines. Sets that do not span lie on one hyperplane; their quadric
/// maximum falls back to a subset search for small sets. `None` when over
/// the size or work limits.
pub fn incidence_maxima(set: &PointSet, form: &Form) -> Result<(Option<usize>, Option<usize>), VerifyError> {
    check_form(set, form)?;
    let n = set.len();
    let d = set.dim();
    if n == 0 {
        return Ok((Some(0), Some(0)));
    }
    if n > INCIDENCE_POINT_LIMIT {
        return Ok((None, None));
    }
    let hyper = hyperplane_rows(set);
    let all: Vec<usize> = (0..n).collect();
    let spans = hyper.exact(&all).rank() == d + 1;
    let max_h = if !spans {
        Some(n)
    } else if counting_affordable(n, d) {
        Some(hyper.max_incidence(false))
    } else {
        None
    };
    let quad = quadric_rows(set, form)?;
    let max_q = if spans {
        counting_affordable(n, d + 1).then(|| quad.max_incidence(true))
    } else if n <= BRUTE_FORCE_LIMIT {
        Some(quad.exact(&all).largest_consistent())
    } else {
        None
    };
    debug_assert_eq!(quad.width(), hyper.width() + 1);
    debug_assert_eq!(quad.len(), n);
    Ok((max_h, max_q))
}

/// Full certificate: hyperplane scan, then quadric scan, then incidence maxima.
pub fn is_q_generic(set: &PointSet, form: &Form) -> Result<Certificate, VerifyError> {
    check_form(set, form)?;
    let n = set.len();
    let d = set.dim();
    let (status, subsets_tested) = match check_hyperplanes(set)? {
        HyperplaneOutcome::Violation(v) => {
            let tested = lex_rank(&v.subset, n) + 1;
            (Status::HyperplaneViolation(v), tested)
        }
        HyperplaneOutcome::Pass(cert) => match check_quadrics(set, form, &cert)? {
            QuadricOutcome::Pass { subsets_tested } => (Status::Pass, cert.subsets_tested + subsets_tested),
            QuadricOutcome::Violation(v) => {
                let tested = cert.subsets_tested + lex_rank(&v.subset, n) + 1;
                (Status::QuadricViolation(v), tested)
            }
        },
    };
    let (max_h, max_q) = if status == Status::Pass && n > d {
        // every d-subset spans a hyperplane holding no further point, and
        // every (d+1)-subset a unique Q-quadric holding no further point
        (Some(d), Some(d + 1))
    } else {
        incidence_maxima(set, form)?
    };
    Ok(Certificate { status, subsets_tested, max_hyperplane_incidence: max_h, max_quadric_incidence: max_q })
}

/// Whether the bordered determinant of exactly `d+2` points vanishes, by
/// the same scan [`check_quadrics`] runs.
pub fn quadric_determinant_vanishes(set: &PointSet, form: &Form) -> Result<bool, VerifyError> {
    let want = set.dim() + 2;
    if set.len() != want {
        return Err(VerifyError::Count { expected: want, got: set.len() });
    }
    Ok(quadric_rows(set, form)?.first_vanishing().is_some())
}

/// The bordered determinant of `d+2` integer points, with `Q` replaced by
/// its primitive integer multiple.
pub fn bordered_determinant(points: &[Vec<i64>], q: &RationalForm) -> Result<BigInt, VerifyError> {
    let set = PointSet::grid(q.dim(), points.to_vec())?;
    let want = q.dim() + 2;
    if set.len() != want {
        return Err(VerifyError::Count { expected: want, got: set.len() });
    }
    let rows = quadric_rows(&set, &Form::Rational(q.clone()))?;
    let Exact::Rational(m) = rows.exact(&(0..want).collect::<Vec<_>>()) else {
        unreachable!("integer rows")
    };
    Ok(linalg::determinant(&m).to_integer())
}

/// `f = c + Σ aᵢXᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunction<S> {
    pub constant: S,
    pub linear: Vec<S>,
}

impl<S: Scalar> AffineFunction<S> {
    pub fn evaluate(&self, x: &[S]) -> S {
        self.linear.iter().zip(x).fold(self.constant.clone(), |acc, (a, v)| acc.add(&a.mul(v)))
    }
}

fn solve_through<S: Scalar>(a: Vec<Vec<S>>, b: Vec<S>) -> Result<AffineFunction<S>, VerifyError> {
    let mut x = linalg::solve(&a, &b).ok_or(VerifyError::Dependent)?;
    let constant = x.remove(0);
    Ok(AffineFunction { constant, linear: x })
}

/// The unique `f` of degree ≤ 1 with `Q + f` vanishing at `d+1` affinely
/// independent integer points.
pub fn unique_quadric_through(points: &[Vec<i64>], q: &RationalForm) -> Result<AffineFunction<BigRational>, VerifyError> {
    let d = q.dim();
    if points.len() != d + 1 {
        return Err(VerifyError::Count { expected: d + 1, got: points.len() });
    }
    let to_q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut a = Vec::with_capacity(d + 1);
    let mut b = Vec::with_capacity(d + 1);
    for (index, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(VerifyError::PointLength { index, got: p.len(), dim: d });
        }
        let x: Vec<BigRational> = p.iter().map(|&v| to_q(v)).collect();
        a.push(std::iter::once(BigRational::one()).chain(x.iter().cloned()).collect());
        b.push(-q.evaluate(&x));
    }
    solve_through(a, b)
}

/// Field version of [`unique_quadric_through`].
pub fn unique_quadric_through_fp(
    points: &[AffinePoint],
    q: &QuadraticForm,
) -> Result<AffineFunction<FieldElement>, VerifyError> {
    let d = q.dim();
    if points.len() != d + 1 {
        return Err(VerifyError::Count { expected: d + 1, got: points.len() });
    }
    let p = q.prime();
    let mut a = Vec::with_capacity(d + 1);
    let mut b = Vec::with_capacity(d + 1);
    for (index, pt) in points.iter().enumerate() {
        if pt.dim() != d {
            return Err(VerifyError::PointLength { index, got: pt.dim(), dim: d });
        }
        if let Some(x) = pt.coords().iter().find(|x| x.modulus() != p) {
            return Err(VerifyError::PrimeMismatch { points: x.modulus().get(), form: p.get() });
        }
        a.push(std::iter::once(FieldElement::one(p)).chain(pt.coords().iter().copied()).collect());
        b.push(-q.evaluate(pt.coords()));
    }
    solve_through(a, b)
}
