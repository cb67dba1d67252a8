//! Reduction of rational polynomials mod p, prime selection, and lifting
//! field constructions into the integer grid `{1..p}^d ⊆ [n]^d`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::curve::{construct_q_generic, Construction, CurveError};
use crate::field::{is_prime, FieldElement, FieldError, Prime, MAX_MODULUS};
use crate::quadform::{rank2_discriminant, FormError, QuadraticForm, RationalForm};
use crate::verify::PointSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// Reduction is irreducible of rank 2; carries `Δ mod p`.
    NotRich { discriminant: u64 },
    /// All degree-2 coefficients vanish mod p.
    DegreeDrop,
    /// `p + 1 < d`: too few points on the projective line.
    FieldTooSmall,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NotRich { discriminant } => {
                write!(f, "reduction irreducible of rank 2 (Δ ≡ {discriminant}, a non-square)")
            }
            Rejection::DegreeDrop => write!(f, "reduction drops below degree 2"),
            Rejection::FieldTooSmall => write!(f, "field too small for the dimension"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejected {
    pub prime: u64,
    pub reason: Rejection,
}

fn describe_no_prime(n: &u64, class: &Option<BigInt>, rejected: &[Rejected]) -> String {
    let mut s = format!("no admissible prime in [3, {n}]");
    if let Some(m) = class {
        s += &format!(" with p ≡ 1 (mod {m})");
    }
    if rejected.is_empty() {
        s += "; no candidates";
    } else {
        s += "; rejected:";
        for r in rejected {
            s += &format!(" {}: {};", r.prime, r.reason);
        }
        s.pop();
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("{}", describe_no_prime(.n, .class, .rejected))]
    NoPrime { n: u64, class: Option<BigInt>, rejected: Vec<Rejected> },
    #[error("grid size {0} is out of range")]
    GridSize(u64),
    #[error("form has dimension {form}, expected {dim}")]
    DimensionMismatch { form: usize, dim: usize },
    #[error("the construction over F_{prime} was not built from this form's reduction")]
    FormMismatch { prime: u64 },
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Polynomial with rational coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl RationalPoly {
    pub fn zero(nvars: usize) -> Self {
        RationalPoly { nvars, terms: BTreeMap::new() }
    }

    /// From `(exponents, numerator, denominator)` triples; repeated
    /// monomials add up.
    pub fn from_terms(nvars: usize, terms: &[(Vec<u32>, i64, i64)]) -> Self {
        let mut p = RationalPoly::zero(nvars);
        for (exps, num, den) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length");
            p.add_term(exps.clone(), BigRational::new(BigInt::from(*num), BigInt::from(*den)));
        }
        p
    }

    pub fn from_form(q: &RationalForm) -> Self {
        let mut p = RationalPoly::zero(q.dim());
        for (i, j, c) in q.terms() {
            let mut e = vec![0; q.dim()];
            e[i] += 1;
            e[j] += 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        let slot = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut out = RationalPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * r);
        }
        out
    }
}

/// Polynomial over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    nvars: usize,
    prime: Prime,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl FpPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn coefficient(&self, exps: &[u32]) -> FieldElement {
        self.terms.get(exps).copied().unwrap_or(FieldElement::zero(self.prime))
    }

    pub fn evaluate(&self, x: &[FieldElement]) -> FieldElement {
        self.terms.iter().fold(FieldElement::zero(self.prime), |acc, (e, c)| {
            acc + e.iter().zip(x).fold(*c, |m, (&k, &v)| m * v.pow(k as u64))
        })
    }
}

/// Content-1 integer coefficients of a nonzero rational list, scaled by
/// the unique positive rational that makes them so. Zero stays zero.
fn primitive(coeffs: &[&BigRational]) -> Vec<BigInt> {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (*c * &lcm).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

fn reduce_int(c: &BigInt, p: Prime) -> FieldElement {
    let r = c.mod_floor(&BigInt::from(p.get()));
    FieldElement::new(r.to_u64().expect("residue below p"), p)
}

/// `ρ_p`: scale to integer coefficients with content 1, then reduce.
pub fn reduce_mod_p(f: &RationalPoly, p: Prime) -> FpPoly {
    let coeffs: Vec<&BigRational> = f.terms.values().collect();
    let ints = primitive(&coeffs);
    let terms = f
        .terms
        .keys()
        .zip(&ints)
        .map(|(e, c)| (e.clone(), reduce_int(c, p)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    FpPoly { nvars: f.nvars, prime: p, terms }
}

/// `ρ_p` of a quadratic form, as a form over `F_p`.
pub fn reduce_form(q: &RationalForm, p: Prime) -> Result<QuadraticForm, FormError> {
    let ints = q.primitive_integer_coeffs();
    let coeffs = ints.iter().map(|c| reduce_int(c, p)).collect();
    QuadraticForm::new(q.dim(), p, coeffs)
}

/// Why `p` is not usable for `q`, if it is not.
fn assess(q: &RationalForm, p: Prime) -> Option<Rejection> {
    if (q.dim() as u64) > p.get() + 1 {
        return Some(Rejection::FieldTooSmall);
    }
    let Ok(reduced) = reduce_form(q, p) else {
        return Some(Rejection::DegreeDrop);
    };
    match rank2_discriminant(&reduced) {
        Some(delta) if !delta.is_square() => Some(Rejection::NotRich { discriminant: delta.residue() }),
        _ => None,
    }
}

/// Largest prime `p ≤ n` at which the reduction of `q` is rich.
///
/// Forms irreducible of rank 2 over ℚ with discriminant `Δ` are only tried
/// at primes `p ≡ 1 (mod 4|Δ|)`; everything else scans all odd primes.
pub fn choose_prime(n: u64, q: &RationalForm) -> Result<Prime, LiftError> {
    if n >= MAX_MODULUS {
        return Err(LiftError::GridSize(n));
    }
    let class = q.irreducible_rank2_discriminant().map(|delta: BigInt| delta.abs() * BigInt::from(4));
    let step = match &class {
        Some(m) => match m.to_u64() {
            Some(m) if m < n => m,
            _ => return Err(LiftError::NoPrime { n, class, rejected: vec![] }),
        },
        None => 1,
    };
    let mut rejected = Vec::new();
    let first = if step == 1 { n } else { n - (n - 1) % step };
    let mut cand = first;
    while cand >= 3 {
        if cand % 2 == 1 && is_prime(cand) {
            let p = Prime::new(cand)?;
            match assess(q, p) {
                None => return Ok(p),
                Some(reason) => rejected.push(Rejected { prime: cand, reason }),
            }
        }
        match cand.checked_sub(step) {
            Some(c) => cand = c,
            None => break,
        }
    }
    Err(LiftError::NoPrime { n, class, rejected })
}

/// A construction lifted to integer coordinates in `[1, p]`.
#[derive(Clone, Debug)]
pub struct GridConstruction {
    points: Vec<Vec<i64>>,
    prime: Prime,
    form: RationalForm,
    reduced_form: QuadraticForm,
    provenance: Construction,
}

impl GridConstruction {
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn form(&self) -> &RationalForm {
        &self.form
    }

    pub fn reduced_form(&self) -> &QuadraticForm {
        &self.reduced_form
    }

    pub fn provenance(&self) -> &Construction {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn to_point_set(&self) -> PointSet {
        PointSet::grid(self.dim(), self.points.clone()).expect("grid points are well formed")
    }
}

/// Representative of a residue in `[1, p]`.
pub fn grid_representative(x: FieldElement) -> i64 {
    let r = x.residue();
    (if r == 0 { x.modulus().get() } else { r }) as i64
}

pub fn lift_to_grid(c: &Construction, q: &RationalForm) -> Result<GridConstruction, LiftError> {
    let prime = c.prime();
    if q.dim() != c.dim() {
        return Err(LiftError::DimensionMismatch { form: q.dim(), dim: c.dim() });
    }
    let reduced = reduce_form(q, prime)?;
    if &reduced != c.form() {
        return Err(LiftError::FormMismatch { prime: prime.get() });
    }
    let points = c
        .points()
        .iter()
        .map(|pt| pt.coords().iter().map(|&x| grid_representative(x)).collect())
        .collect();
    Ok(GridConstruction { points, prime, form: q.clone(), reduced_form: reduced, provenance: c.clone() })
}

/// Choose a prime, build the field construction for `ρ_p(q)`, and lift it.
pub fn construct_grid(n: u64, dim: usize, q: &RationalForm, seed: u64) -> Result<GridConstruction, LiftError> {
    if q.dim() != dim {
        return Err(LiftError::DimensionMismatch { form: q.dim(), dim });
    }
    if dim < 2 {
        return Err(FormError::DimensionTooSmall(dim).into());
    }
    let p = choose_prime(n, q)?;
    let reduced = reduce_form(q, p)?;
    let c = construct_q_generic(&reduced, dim, seed)?;
    lift_to_grid(&c, q)
}

/// Sign-aware square test used by the tests below.
#[cfg(test)]
fn is_square_int(v: &BigInt) -> bool {
    use num_bigint::Sign;
    v.sign() != Sign::Minus && {
        let r = v.sqrt();
        &r * &r == *v
    }
}
