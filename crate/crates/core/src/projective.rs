//! Points of P^d(F_p), general position, and projective linear maps.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldElement, Prime};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    #[error("the zero vector does not represent a projective point")]
    ZeroVector,
    #[error("empty coordinate vector")]
    Empty,
    #[error("matrix is not invertible")]
    Singular,
    #[error("matrix must be square")]
    NotSquare,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{role} are not in general position: points {subset:?} are dependent")]
    Degenerate { role: &'static str, subset: Vec<usize> },
    #[error("{count} points cannot be in general position in P^{dim}")]
    TooManyPoints { count: usize, dim: usize },
    #[error("got {sources} sources but {targets} targets")]
    LengthMismatch { sources: usize, targets: usize },
}

/// A point of projective space, stored with its first nonzero coordinate
/// scaled to 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<FieldElement>,
}

impl ProjPoint {
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// Dimension `d` of the ambient `P^d`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn prime(&self) -> Prime {
        self.coords[0].modulus()
    }

    pub fn residues(&self) -> Vec<u64> {
        self.coords.iter().map(|c| c.residue()).collect()
    }

    /// Whether the point lies in the ideal hyperplane `x_0 = 0`.
    pub fn is_at_infinity(&self) -> bool {
        self.coords[0].is_zero()
    }

    /// Affine chart `x_0 ≠ 0`: `(x_1/x_0, …, x_d/x_0)`.
    pub fn dehomogenize(&self) -> Option<AffinePoint> {
        if self.is_at_infinity() {
            return None;
        }
        // normalized, so x_0 = 1
        Some(AffinePoint::new(self.coords[1..].to_vec()))
    }

    pub fn from_residues(values: &[u64], p: Prime) -> Result<Self, ProjectiveError> {
        normalize(values.iter().map(|&v| FieldElement::new(v, p)).collect())
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.residue().to_string()).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePoint {
    coords: Vec<FieldElement>,
}

impl AffinePoint {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        AffinePoint { coords }
    }

    pub fn from_residues(values: &[u64], p: Prime) -> Self {
        AffinePoint { coords: values.iter().map(|&v| FieldElement::new(v, p)).collect() }
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn residues(&self) -> Vec<u64> {
        self.coords.iter().map(|c| c.residue()).collect()
    }

    /// The point `[1 : x_1 : … : x_d]` of the projective closure.
    pub fn homogenize(&self, p: Prime) -> ProjPoint {
        let mut coords = Vec::with_capacity(self.coords.len() + 1);
        coords.push(FieldElement::one(p));
        coords.extend_from_slice(&self.coords);
        ProjPoint { coords }
    }
}

impl fmt::Debug for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.residue().to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// An element of PGL(d+1, F_p) given by an invertible matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProjTransform {
    matrix: Vec<Vec<FieldElement>>,
}

impl ProjTransform {
    pub fn new(matrix: Vec<Vec<FieldElement>>) -> Result<Self, ProjectiveError> {
        let n = matrix.len();
        if n == 0 {
            return Err(ProjectiveError::Empty);
        }
        if matrix.iter().any(|r| r.len() != n) {
            return Err(ProjectiveError::NotSquare);
        }
        if linalg::determinant(&matrix).is_zero() {
            return Err(ProjectiveError::Singular);
        }
        Ok(ProjTransform { matrix })
    }

    pub fn identity(dim: usize, p: Prime) -> Self {
        let matrix = (0..=dim)
            .map(|i| {
                (0..=dim)
                    .map(|j| if i == j { FieldElement::one(p) } else { FieldElement::zero(p) })
                    .collect()
            })
            .collect();
        ProjTransform { matrix }
    }

    pub fn matrix(&self) -> &[Vec<FieldElement>] {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.len() - 1
    }

    pub fn inverse(&self) -> ProjTransform {
        ProjTransform { matrix: linalg::inverse(&self.matrix).expect("invariant: invertible") }
    }
}

/// Canonical representative of the class of `raw`.
pub fn normalize(raw: Vec<FieldElement>) -> Result<ProjPoint, ProjectiveError> {
    if raw.is_empty() {
        return Err(ProjectiveError::Empty);
    }
    let lead = raw.iter().find(|c| !c.is_zero()).ok_or(ProjectiveError::ZeroVector)?;
    let inv = lead.inv().expect("nonzero");
    Ok(ProjPoint { coords: raw.iter().map(|&c| c * inv).collect() })
}

/// Whether the points span a linear subspace of full dimension
/// (`k+1` points span a `k`-dimensional subspace).
pub fn is_general_position(points: &[ProjPoint]) -> bool {
    if points.is_empty() {
        return true;
    }
    if points.len() > points[0].coords.len() {
        return false;
    }
    let rows: Vec<Vec<FieldElement>> = points.iter().map(|p| p.coords.clone()).collect();
    linalg::rank(&rows) == points.len()
}

pub fn apply(t: &ProjTransform, point: &ProjPoint) -> ProjPoint {
    debug_assert_eq!(t.matrix.len(), point.coords.len());
    normalize(linalg::mat_vec(&t.matrix, &point.coords)).expect("invertible map sends nonzero to nonzero")
}

/// First prefix of `points` that is linearly dependent, as index list.
fn dependent_prefix(points: &[Vec<FieldElement>]) -> Option<Vec<usize>> {
    (1..=points.len())
        .find(|&k| linalg::rank(&points[..k]) < k)
        .map(|k| (0..k).collect())
}

/// Extends independent vectors to a basis with standard basis vectors,
/// taking the first one outside the current span each time.
fn extend_to_basis(vectors: &[Vec<FieldElement>], p: Prime) -> Vec<Vec<FieldElement>> {
    let n = vectors[0].len();
    let mut basis = vectors.to_vec();
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = vec![FieldElement::zero(p); n];
        e[i] = FieldElement::one(p);
        basis.push(e);
        if linalg::rank(&basis) < basis.len() {
            basis.pop();
        }
    }
    basis
}

/// A projective transformation sending `sources[i]` to `targets[i]`.
///
/// Both lists are extended to bases of `F^{d+1}` by standard basis vectors
/// (first ones outside the span), and the unique matrix mapping one extended
/// basis onto the other, with every scalar fixed to 1, is returned.
pub fn transform_mapping_points(
    sources: &[ProjPoint],
    targets: &[ProjPoint],
) -> Result<ProjTransform, ProjectiveError> {
    if sources.len() != targets.len() {
        return Err(ProjectiveError::LengthMismatch { sources: sources.len(), targets: targets.len() });
    }
    let Some(first) = sources.first() else {
        return Err(ProjectiveError::Empty);
    };
    let n = first.coords.len();
    let p = first.prime();
    for pt in sources.iter().chain(targets) {
        if pt.coords.len() != n {
            return Err(ProjectiveError::DimensionMismatch { expected: n, got: pt.coords.len() });
        }
    }
    if sources.len() > n {
        return Err(ProjectiveError::TooManyPoints { count: sources.len(), dim: n - 1 });
    }
    let src: Vec<Vec<FieldElement>> = sources.iter().map(|s| s.coords.clone()).collect();
    let tgt: Vec<Vec<FieldElement>> = targets.iter().map(|s| s.coords.clone()).collect();
    if let Some(subset) = dependent_prefix(&src) {
        return Err(ProjectiveError::Degenerate { role: "sources", subset });
    }
    if let Some(subset) = dependent_prefix(&tgt) {
        return Err(ProjectiveError::Degenerate { role: "targets", subset });
    }
    let src = extend_to_basis(&src, p);
    let tgt = extend_to_basis(&tgt, p);
    // columns are basis vectors: M = T · S^{-1}
    let transpose = |m: &[Vec<FieldElement>]| -> Vec<Vec<FieldElement>> {
        (0..n).map(|i| m.iter().map(|row| row[i]).collect()).collect()
    };
    let s_inv = linalg::inverse(&transpose(&src)).expect("extended basis");
    let matrix = linalg::mat_mul(&transpose(&tgt), &s_inv);
    ProjTransform::new(matrix)
}

/// All points of `P^d(F_p)` in canonical order: grouped by the position of
/// the leading 1 (position 0 first), then lexicographically by the
/// remaining coordinates.
pub fn enumerate_projective(dim: usize, p: Prime) -> impl Iterator<Item = ProjPoint> {
    let n = dim + 1;
    let q = p.get();
    (0..n).flat_map(move |lead| {
        let free = n - lead - 1;
        let count = q.checked_pow(free as u32).expect("enumeration too large");
        (0..count).map(move |mut idx| {
            let mut coords = vec![FieldElement::zero(p); n];
            coords[lead] = FieldElement::one(p);
            for pos in (lead + 1..n).rev() {
                coords[pos] = FieldElement::new(idx % q, p);
                idx /= q;
            }
            ProjPoint { coords }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn pr(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn pt(vals: &[u64], p: u64) -> ProjPoint {
        ProjPoint::from_residues(vals, pr(p)).unwrap()
    }

    fn fes(vals: &[u64], p: u64) -> Vec<FieldElement> {
        vals.iter().map(|&v| FieldElement::new(v, pr(p))).collect()
    }

    #[test]
    fn normalize_examples() {
        // 2^{-1} = 4 mod 7
        assert_eq!(normalize(fes(&[2, 4, 6], 7)).unwrap().residues(), vec![1, 2, 3]);
        assert_eq!(normalize(fes(&[0, 0, 5], 7)).unwrap().residues(), vec![0, 0, 1]);
        assert_eq!(normalize(fes(&[0, 0, 0], 7)), Err(ProjectiveError::ZeroVector));
    }

    #[test]
    fn normalize_is_constant_on_classes() {
        for q in [3u64, 5, 7] {
            let p = pr(q);
            for point in enumerate_projective(2, p) {
                for lambda in 1..q {
                    let l = FieldElement::new(lambda, p);
                    let scaled: Vec<_> = point.coords().iter().map(|&c| c * l).collect();
                    assert_eq!(normalize(scaled).unwrap(), point);
                }
                assert_eq!(normalize(point.coords().to_vec()).unwrap(), point);
            }
        }
    }

    #[test]
    fn general_position_examples() {
        assert!(is_general_position(&[pt(&[1, 0, 0], 5), pt(&[0, 1, 0], 5)]));
        assert!(!is_general_position(&[pt(&[1, 0, 0], 5), pt(&[0, 1, 0], 5), pt(&[1, 1, 0], 5)]));
        assert!(!is_general_position(&[pt(&[1, 2, 3], 5), pt(&[1, 2, 3], 5)]));
    }

    #[test]
    fn apply_examples() {
        let p = pr(5);
        let id = ProjTransform::identity(2, p);
        let x = pt(&[1, 3, 4], 5);
        assert_eq!(apply(&id, &x), x);
        let diag = ProjTransform::new(vec![fes(&[1, 0, 0], 5), fes(&[0, 1, 0], 5), fes(&[0, 0, 2], 5)]).unwrap();
        assert_eq!(apply(&diag, &pt(&[1, 1, 1], 5)).residues(), vec![1, 1, 2]);
        let swap = ProjTransform::new(vec![fes(&[0, 0, 1], 7), fes(&[0, 1, 0], 7), fes(&[1, 0, 0], 7)]).unwrap();
        // (3,2,1) * 3^{-1} = (3,2,1) * 5 = (1,3,5)
        assert_eq!(apply(&swap, &pt(&[1, 2, 3], 7)).residues(), vec![1, 3, 5]);
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = vec![fes(&[1, 2], 5), fes(&[2, 4], 5)];
        assert_eq!(ProjTransform::new(m), Err(ProjectiveError::Singular));
    }

    #[test]
    fn apply_is_bijection() {
        for (q, d) in [(3u64, 1usize), (3, 2), (5, 2), (7, 2), (3, 3), (5, 3)] {
            let p = pr(q);
            let all: Vec<_> = enumerate_projective(d, p).collect();
            let mut seed = 1u64;
            for _ in 0..5 {
                let t = loop {
                    let m: Vec<Vec<FieldElement>> = (0..=d)
                        .map(|_| {
                            (0..=d)
                                .map(|_| {
                                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                                    FieldElement::new(seed >> 33, p)
                                })
                                .collect()
                        })
                        .collect();
                    if let Ok(t) = ProjTransform::new(m) {
                        break t;
                    }
                };
                let image: HashSet<ProjPoint> = all.iter().map(|x| apply(&t, x)).collect();
                assert_eq!(image.len(), all.len());
            }
        }
    }

    #[test]
    fn enumeration_cardinality() {
        for q in [3u64, 5, 7, 11] {
            for d in 1..=3usize {
                let pts: Vec<_> = enumerate_projective(d, pr(q)).collect();
                let expected = (q.pow(d as u32 + 1) - 1) / (q - 1);
                assert_eq!(pts.len() as u64, expected);
                let distinct: HashSet<_> = pts.iter().cloned().collect();
                assert_eq!(distinct.len(), pts.len());
            }
        }
        let p1: Vec<_> = enumerate_projective(1, pr(3)).map(|x| x.residues()).collect();
        assert_eq!(p1, vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![0, 1]]);
    }

    #[test]
    fn mapping_examples() {
        let p = pr(5);
        let basis = [pt(&[1, 0, 0], 5), pt(&[0, 1, 0], 5)];
        let t = transform_mapping_points(&basis, &basis).unwrap();
        assert_eq!(t, ProjTransform::identity(2, p));

        let sources = [pt(&[1, 0, 0], 5), pt(&[0, 0, 1], 5)];
        let targets = [pt(&[0, 1, 0], 5), pt(&[0, 0, 1], 5)];
        let t = transform_mapping_points(&sources, &targets).unwrap();
        for (s, g) in sources.iter().zip(&targets) {
            assert_eq!(&apply(&t, s), g);
        }

        let repeated = [pt(&[1, 2, 3], 5), pt(&[1, 2, 3], 5)];
        assert_eq!(
            transform_mapping_points(&repeated, &targets),
            Err(ProjectiveError::Degenerate { role: "sources", subset: vec![0, 1] })
        );
    }

    fn arb_instance() -> impl Strategy<Value = (usize, u64, u64)> {
        (prop_oneof![Just(2usize), Just(3), Just(4)], prop_oneof![Just(3u64), Just(5), Just(7), Just(11), Just(101)], any::<u64>())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn mapping_satisfies_postcondition((d, q, seed) in arb_instance()) {
            use rand::{Rng, SeedableRng};
            let p = pr(q);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let draw = |rng: &mut rand_chacha::ChaCha8Rng| loop {
                let pts: Vec<ProjPoint> = (0..d)
                    .filter_map(|_| normalize((0..=d).map(|_| FieldElement::new(rng.gen_range(0..q), p)).collect()).ok())
                    .collect();
                if pts.len() == d && is_general_position(&pts) {
                    return pts;
                }
            };
            let sources = draw(&mut rng);
            let targets = draw(&mut rng);
            let t = transform_mapping_points(&sources, &targets).unwrap();
            for (s, g) in sources.iter().zip(&targets) {
                prop_assert_eq!(&apply(&t, s), g);
            }
        }
    }
}
