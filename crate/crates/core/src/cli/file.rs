//! Point-set files: a JSON object or a CSV table with `#` header lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, Prime};
use crate::quadform::{QuadraticForm, RationalForm};
use crate::verify::{Certificate, Form, PointSet, Status};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed header line {line}: {text:?}")]
    Header { line: usize, text: String },
    #[error("missing header field {0:?}")]
    Missing(&'static str),
    #[error("invalid value for {key}: {value:?}")]
    Value { key: &'static str, value: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Grid,
    Field,
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::Grid => "grid",
            Mode::Field => "field",
        }
    }
}

/// A JSON integer, or a decimal string when it does not fit in 64 bits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Int {
    Small(i64),
    Big(String),
}

impl Int {
    fn from_big(v: &BigInt) -> Self {
        v.to_i64().map_or_else(|| Int::Big(v.to_string()), Int::Small)
    }

    fn to_big(&self) -> Result<BigInt, FileError> {
        match self {
            Int::Small(v) => Ok(BigInt::from(*v)),
            Int::Big(s) => s.parse().map_err(|_| FileError::Value { key: "form", value: s.clone() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationSummary {
    pub kind: String,
    pub subset: Vec<usize>,
    pub determinant: String,
    pub relation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub status: String,
    pub subsets_tested: u128,
    pub max_hyperplane_incidence: Option<usize>,
    pub max_quadric_incidence: Option<usize>,
    pub violation: Option<ViolationSummary>,
}

impl From<&Certificate> for CertificateSummary {
    fn from(c: &Certificate) -> Self {
        let violation = match &c.status {
            Status::Pass => None,
            Status::HyperplaneViolation(v) | Status::QuadricViolation(v) => Some(ViolationSummary {
                kind: if matches!(c.status, Status::HyperplaneViolation(_)) { "hyperplane" } else { "quadric" }.into(),
                subset: v.subset.clone(),
                determinant: v.witness.determinant.clone(),
                relation: v.witness.relation.clone(),
            }),
        };
        CertificateSummary {
            status: c.status.label().into(),
            subsets_tested: c.subsets_tested,
            max_hyperplane_incidence: c.max_hyperplane_incidence,
            max_quadric_incidence: c.max_quadric_incidence,
            violation,
        }
    }
}

/// On-disk point set. `form` holds `[i, j, numerator, denominator]` with
/// 1-based indices; in field mode the coefficients are residues.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub mode: Mode,
    pub dim: usize,
    #[serde(default)]
    pub n: Option<u64>,
    #[serde(default)]
    pub prime: Option<u64>,
    pub form: Vec<(usize, usize, Int, Int)>,
    pub points: Vec<Vec<i64>>,
    #[serde(default)]
    pub certificate: Option<CertificateSummary>,
    #[serde(default)]
    pub tool_version: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
}

pub fn form_terms_rational(q: &RationalForm) -> Vec<(usize, usize, Int, Int)> {
    q.terms().map(|(i, j, c)| (i + 1, j + 1, Int::from_big(c.numer()), Int::from_big(c.denom()))).collect()
}

pub fn form_terms_field(q: &QuadraticForm) -> Vec<(usize, usize, Int, Int)> {
    q.terms().map(|(i, j, c)| (i + 1, j + 1, Int::Small(c.residue() as i64), Int::Small(1))).collect()
}

impl PointSetFile {
    fn form_coefficients(&self) -> Result<Vec<(usize, usize, BigRational)>, FileError> {
        let mut out = Vec::with_capacity(self.form.len());
        for (i, j, num, den) in &self.form {
            let den = den.to_big()?;
            if den.is_zero() {
                return Err(FileError::Value { key: "form", value: "zero denominator".into() });
            }
            out.push((*i, *j, BigRational::new(num.to_big()?, den)));
        }
        Ok(out)
    }

    /// The form as written, in the `i,j,c` grammar.
    pub fn form_spec(&self) -> Result<String, FileError> {
        Ok(self
            .form_coefficients()?
            .iter()
            .map(|(i, j, c)| {
                if c.is_integer() {
                    format!("{i},{j},{}", c.numer())
                } else {
                    format!("{i},{j},{}/{}", c.numer(), c.denom())
                }
            })
            .collect::<Vec<_>>()
            .join(";"))
    }

    pub fn rational_form(&self) -> Result<RationalForm, FileError> {
        let spec = self.form_spec()?;
        RationalForm::parse(&spec, self.dim).map_err(|e| FileError::Invalid(format!("form: {e}")))
    }

    /// The form to verify against: residues as written over `F_p` in field
    /// mode, the rational form otherwise.
    pub fn verification_form(&self) -> Result<Form, FileError> {
        match self.mode {
            Mode::Grid => Ok(self.rational_form()?.into()),
            Mode::Field => {
                let p = self.field_prime()?;
                let mut coeffs = vec![FieldElement::zero(p); self.dim * (self.dim + 1) / 2];
                for (i, j, c) in self.form_coefficients()? {
                    if i == 0 || i > j || j > self.dim {
                        return Err(FileError::Invalid(format!("form index ({i}, {j}) out of range")));
                    }
                    let num = FieldElement::new(reduce_big(c.numer(), p), p);
                    let den = FieldElement::new(reduce_big(c.denom(), p), p);
                    let inv = den.inv().map_err(|_| FileError::Invalid(format!("denominator divisible by {p}")))?;
                    let v = num * inv;
                    let (i, j) = (i - 1, j - 1);
                    coeffs[i * self.dim - i * (i + 1) / 2 + j] = v;
                }
                let q = QuadraticForm::new(self.dim, p, coeffs).map_err(|e| FileError::Invalid(format!("form: {e}")))?;
                Ok(q.into())
            }
        }
    }

    fn field_prime(&self) -> Result<Prime, FileError> {
        let p = self.prime.ok_or(FileError::Missing("prime"))?;
        Prime::new(p).map_err(|e| FileError::Invalid(format!("prime: {e}")))
    }

    pub fn point_set(&self) -> Result<PointSet, FileError> {
        let bad = |e: crate::verify::VerifyError| FileError::Invalid(e.to_string());
        match self.mode {
            Mode::Grid => PointSet::grid(self.dim, self.points.clone()).map_err(bad),
            Mode::Field => {
                let p = self.field_prime()?;
                let mut residues = Vec::with_capacity(self.points.len());
                for (k, pt) in self.points.iter().enumerate() {
                    let r: Option<Vec<u64>> = pt.iter().map(|&v| u64::try_from(v).ok()).collect();
                    residues.push(r.ok_or_else(|| FileError::Invalid(format!("point {k}: negative residue")))?);
                }
                PointSet::field(p, self.dim, residues).map_err(bad)
            }
        }
    }

    /// Header invariants: dimensions, and coordinates in `[1, n]` when a
    /// grid size is declared.
    pub fn validate(&self) -> Result<(), FileError> {
        if self.dim < 1 {
            return Err(FileError::Invalid("dim must be positive".into()));
        }
        if let Some((k, _)) = self.points.iter().enumerate().find(|(_, p)| p.len() != self.dim) {
            return Err(FileError::Invalid(format!("point {k} does not have {} coordinates", self.dim)));
        }
        if let (Mode::Grid, Some(n)) = (self.mode, self.n) {
            let n = i64::try_from(n).unwrap_or(i64::MAX);
            if let Some((k, _)) = self.points.iter().enumerate().find(|(_, p)| p.iter().any(|&v| v < 1 || v > n)) {
                return Err(FileError::Invalid(format!("point {k} lies outside [1, {n}]^{}", self.dim)));
            }
        }
        self.point_set()?;
        self.verification_form()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let mut header = |k: &str, v: String| writeln!(s, "# {k}: {v}").unwrap();
        header("mode", self.mode.as_str().into());
        header("dim", self.dim.to_string());
        if let Some(n) = self.n {
            header("n", n.to_string());
        }
        if let Some(p) = self.prime {
            header("prime", p.to_string());
        }
        header("form", self.form_spec().expect("valid form"));
        if let Some(v) = &self.tool_version {
            header("tool_version", v.clone());
        }
        if let Some(seed) = self.seed {
            header("seed", seed.to_string());
        }
        header("size", self.points.len().to_string());
        if let Some(c) = &self.certificate {
            header("status", c.status.clone());
            header("subsets_tested", c.subsets_tested.to_string());
            let opt = |v: Option<usize>| v.map_or("unknown".to_string(), |x| x.to_string());
            header("max_hyperplane_incidence", opt(c.max_hyperplane_incidence));
            header("max_quadric_incidence", opt(c.max_quadric_incidence));
            if let Some(v) = &c.violation {
                header("violation_kind", v.kind.clone());
                header("violation_subset", join(&v.subset, " "));
                header("determinant", v.determinant.clone());
                header("relation", v.relation.join(" "));
            }
        }
        let names: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        writeln!(s, "{}", names.join(",")).unwrap();
        for p in &self.points {
            writeln!(s, "{}", join(p, ",")).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        let file = if text.trim_start().starts_with('{') { serde_json::from_str(text)? } else { parse_csv(text)? };
        file.validate()?;
        Ok(file)
    }
}

fn reduce_big(v: &BigInt, p: Prime) -> u64 {
    use num_integer::Integer;
    v.mod_floor(&BigInt::from(p.get())).to_u64().expect("residue below p")
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn parse_csv(text: &str) -> Result<PointSetFile, FileError> {
    let mut header = BTreeMap::new();
    for (line, raw) in text.lines().enumerate() {
        let Some(rest) = raw.trim_start().strip_prefix('#') else { continue };
        if let Some((k, v)) = rest.split_once(':') {
            header.insert(k.trim().to_string(), v.trim().to_string());
        } else if !rest.trim().is_empty() {
            return Err(FileError::Header { line: line + 1, text: raw.into() });
        }
    }
    let get = |k: &'static str| header.get(k).ok_or(FileError::Missing(k));
    fn num<T: std::str::FromStr>(key: &'static str, v: &str) -> Result<T, FileError> {
        v.parse().map_err(|_| FileError::Value { key, value: v.into() })
    }
    let mode = match get("mode")?.as_str() {
        "grid" => Mode::Grid,
        "field" => Mode::Field,
        other => return Err(FileError::Value { key: "mode", value: other.into() }),
    };
    let dim: usize = num("dim", get("dim")?)?;
    let n = header.get("n").map(|v| num("n", v)).transpose()?;
    let prime = header.get("prime").map(|v| num("prime", v)).transpose()?;
    let seed = header.get("seed").map(|v| num("seed", v)).transpose()?;
    let form_text = get("form")?;
    let form = if form_text.trim().eq_ignore_ascii_case("sphere") {
        (1..=dim).map(|i| (i, i, Int::Small(1), Int::Small(1))).collect()
    } else {
        let bad = || FileError::Value { key: "form", value: form_text.clone() };
        let mut terms = Vec::new();
        for t in form_text.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let parts: Vec<&str> = t.split(',').map(str::trim).collect();
            let [i, j, c] = parts.as_slice() else { return Err(bad()) };
            let (numer, denom) = c.split_once('/').unwrap_or((c, "1"));
            let as_int = |s: &str| -> Result<Int, FileError> {
                let v: BigInt = s.trim().parse().map_err(|_| bad())?;
                Ok(Int::from_big(&v))
            };
            terms.push((num("form", i)?, num("form", j)?, as_int(numer)?, as_int(denom)?));
        }
        terms
    };

    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).has_headers(true).from_reader(text.as_bytes());
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row: Result<Vec<i64>, FileError> = record.iter().map(|v| num("coordinate", v.trim())).collect();
        points.push(row?);
    }
    if let Some(size) = header.get("size") {
        let size: usize = num("size", size)?;
        if size != points.len() {
            return Err(FileError::Invalid(format!("header declares {size} points, found {}", points.len())));
        }
    }
    let certificate = match header.get("status") {
        None => None,
        Some(status) => {
            let opt = |key: &'static str| -> Result<Option<usize>, FileError> {
                match header.get(key).map(String::as_str) {
                    None | Some("unknown") => Ok(None),
                    Some(v) => num(key, v).map(Some),
                }
            };
            let words = |key: &'static str| header.get(key).map(|v| v.split_whitespace().map(String::from).collect::<Vec<_>>());
            let violation = match header.get("violation_kind") {
                None => None,
                Some(kind) => Some(ViolationSummary {
                    kind: kind.clone(),
                    subset: words("violation_subset")
                        .unwrap_or_default()
                        .iter()
                        .map(|v| num("violation_subset", v))
                        .collect::<Result<_, _>>()?,
                    determinant: get("determinant")?.clone(),
                    relation: words("relation").unwrap_or_default(),
                }),
            };
            Some(CertificateSummary {
                status: status.clone(),
                subsets_tested: num("subsets_tested", get("subsets_tested")?)?,
                max_hyperplane_incidence: opt("max_hyperplane_incidence")?,
                max_quadric_incidence: opt("max_quadric_incidence")?,
                violation,
            })
        }
    };
    Ok(PointSetFile {
        mode,
        dim,
        n,
        prime,
        form,
        points,
        certificate,
        tool_version: header.get("tool_version").cloned(),
        seed,
    })
}
