//! Rational normal curves and the Q-generic construction over F_p.
//!
//! A curve is kept parametrically as `φ ∘ ν_d` where `ν_d` is the Veronese
//! map `[x_0 : x_1] ↦ [x_0^d : x_0^{d-1} x_1 : … : x_1^d]` and `φ` a
//! projective transformation. The construction passes the curve through the
//! `d` ideal points of a rich basis; its affine part then meets every
//! hyperplane in at most `d` points and every `Q`-quadric in at most `d+1`.

use std::collections::HashSet;

use thiserror::Error;

use crate::field::{FieldElement, Prime};
use crate::projective::{
    apply, enumerate_projective, normalize, transform_mapping_points, AffinePoint, ProjPoint, ProjTransform,
    ProjectiveError,
};
use crate::quadform::{classify, ideal_points, FormClass, FormError, QuadraticForm};
use crate::verify::PointSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("P^1(F_{prime}) has only {} points, fewer than the {dim} needed", prime + 1)]
    FieldTooSmall { dim: usize, prime: u64 },
    #[error("dimension must be at least {min}, got {dim}")]
    DimensionTooSmall { dim: usize, min: usize },
    #[error("form has dimension {form}, construction asked for {dim}")]
    DimensionMismatch { form: usize, dim: usize },
    #[error(
        "{form} is not rich over F_{prime}: it is irreducible of rank 2 with discriminant {discriminant}, \
         a non-square mod {prime}{hint}"
    )]
    NotRich { form: String, prime: u64, discriminant: u64, hint: String },
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("construction invariant violated: {0}")]
    Internal(String),
}

/// `ν_d(R)` for `R ∈ P^1`.
pub fn veronese(dim: usize, param: &ProjPoint) -> ProjPoint {
    assert!(dim >= 1);
    assert_eq!(param.dim(), 1, "parameter must lie in P^1");
    let [x0, x1] = [param.coords()[0], param.coords()[1]];
    let coords = (0..=dim).map(|k| x0.pow((dim - k) as u64) * x1.pow(k as u64)).collect();
    normalize(coords).expect("Veronese image is nonzero")
}

/// The first `dim` points of `P^1(F_p)` in canonical order:
/// `[1:0], [1:1], …, [1:p-1], [0:1]`.
pub fn canonical_parameters(dim: usize, p: Prime) -> Result<Vec<ProjPoint>, CurveError> {
    if dim as u64 > p.get() + 1 {
        return Err(CurveError::FieldTooSmall { dim, prime: p.get() });
    }
    Ok(enumerate_projective(1, p).take(dim).collect())
}

/// A rational normal curve `φ(im ν_d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rnc {
    dim: usize,
    prime: Prime,
    transform: ProjTransform,
    inverse: ProjTransform,
}

impl Rnc {
    pub fn new(transform: ProjTransform) -> Self {
        let dim = transform.dim();
        let prime = transform.matrix()[0][0].modulus();
        let inverse = transform.inverse();
        Rnc { dim, prime, transform, inverse }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn transform(&self) -> &ProjTransform {
        &self.transform
    }

    /// Image of a parameter `R ∈ P^1`.
    pub fn point_at(&self, param: &ProjPoint) -> ProjPoint {
        apply(&self.transform, &veronese(self.dim, param))
    }

    /// Membership through the parametrization: `φ^{-1}(P)` must be a
    /// Veronese image.
    pub fn contains(&self, point: &ProjPoint) -> bool {
        self.parameter_of(point).is_some()
    }

    /// The parameter `R` with `φ(ν_d(R)) = P`, if any.
    pub fn parameter_of(&self, point: &ProjPoint) -> Option<ProjPoint> {
        let pre = apply(&self.inverse, point);
        let c = pre.coords();
        let p = self.prime;
        if c[0].is_zero() {
            // only [0:…:0:1] = ν_d([0:1]) has x_0 = 0
            let tail_ok = c[..self.dim].iter().all(|x| x.is_zero());
            return tail_ok.then(|| ProjPoint::from_residues(&[0, 1], p).unwrap());
        }
        let t = c[1];
        let on_curve = (0..=self.dim).all(|k| c[k] == t.pow(k as u64));
        on_curve.then(|| normalize(vec![FieldElement::one(p), t]).unwrap())
    }
}

/// A rational normal curve through the given `d` points in general position.
///
/// The curve is `φ(im ν_d)` with `φ(ν_d(R_i)) = targets[i]` for the
/// canonical parameters `R_i`.
pub fn interpolate_rnc(targets: &[ProjPoint]) -> Result<Rnc, CurveError> {
    let Some(first) = targets.first() else {
        return Err(CurveError::DimensionTooSmall { dim: 0, min: 1 });
    };
    let dim = first.dim();
    let p = first.prime();
    if targets.len() != dim {
        return Err(ProjectiveError::DimensionMismatch { expected: dim, got: targets.len() }.into());
    }
    let params = canonical_parameters(dim, p)?;
    let sources: Vec<ProjPoint> = params.iter().map(|r| veronese(dim, r)).collect();
    let transform = transform_mapping_points(&sources, targets)?;
    let curve = Rnc::new(transform);
    for (r, t) in params.iter().zip(targets) {
        if &curve.point_at(r) != t {
            return Err(CurveError::Internal(format!("target {t} missed by the interpolated curve")));
        }
    }
    Ok(curve)
}

/// All `p + 1` points of the curve, in parameter order.
pub fn enumerate_curve(c: &Rnc) -> Vec<ProjPoint> {
    enumerate_projective(1, c.prime).map(|r| c.point_at(&r)).collect()
}

/// Output of [`construct_q_generic`].
#[derive(Clone, Debug)]
pub struct Construction {
    points: Vec<AffinePoint>,
    ideal_points: Vec<ProjPoint>,
    curve: Rnc,
    form: QuadraticForm,
    prime: Prime,
}

impl Construction {
    pub fn points(&self) -> &[AffinePoint] {
        &self.points
    }

    pub fn ideal_points(&self) -> &[ProjPoint] {
        &self.ideal_points
    }

    pub fn curve(&self) -> &Rnc {
        &self.curve
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn to_point_set(&self) -> PointSet {
        PointSet::field(self.prime, self.dim(), self.points.iter().map(AffinePoint::residues).collect())
            .expect("construction points are well formed")
    }
}

/// The affine part of a rational normal curve through the ideal points of
/// a rich basis of `q`: `p + 1 − d` points of `F_p^d`, `Q`-generic.
pub fn construct_q_generic(q: &QuadraticForm, dim: usize, seed: u64) -> Result<Construction, CurveError> {
    if dim < 2 {
        return Err(CurveError::DimensionTooSmall { dim, min: 2 });
    }
    if q.dim() != dim {
        return Err(CurveError::DimensionMismatch { form: q.dim(), dim });
    }
    let p = q.prime();
    if dim as u64 > p.get() + 1 {
        return Err(CurveError::FieldTooSmall { dim, prime: p.get() });
    }
    let basis = match classify(q, seed)? {
        FormClass::Rich(b) => b,
        FormClass::IrreducibleRank2 { discriminant } => {
            let minus = -discriminant;
            let hint = if minus.is_square() {
                " (−1 is a non-square, i.e. p ≡ 3 (mod 4))".to_string()
            } else {
                String::new()
            };
            return Err(CurveError::NotRich {
                form: q.to_string(),
                prime: p.get(),
                discriminant: discriminant.residue(),
                hint,
            });
        }
    };
    let ideal = ideal_points(&basis);
    let curve = interpolate_rnc(&ideal)?;
    let all = enumerate_curve(&curve);

    let at_infinity: HashSet<&ProjPoint> = all.iter().filter(|x| x.is_at_infinity()).collect();
    let expected: HashSet<&ProjPoint> = ideal.iter().collect();
    if at_infinity != expected {
        return Err(CurveError::Internal("points at infinity differ from the ideal points".into()));
    }
    let points: Vec<AffinePoint> = all.iter().filter_map(ProjPoint::dehomogenize).collect();
    if points.len() as u64 != p.get() + 1 - dim as u64 {
        return Err(CurveError::Internal(format!("{} affine points, expected p + 1 − d", points.len())));
    }
    Ok(Construction { points, ideal_points: ideal, curve, form: q.clone(), prime: p })
}
