//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 I/O failure, 2 verification failure, 3 construction
//! infeasible, 4 usage or malformed input.

pub mod file;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::curve::{construct_q_generic, CurveError};
use crate::field::{is_prime, Prime};
use crate::lift::{construct_grid, reduce_form, LiftError};
use crate::quadform::{classify, FormClass, QuadraticForm, RationalForm};
use crate::verify::{is_q_generic, Certificate, Status};
use file::{form_terms_field, form_terms_rational, CertificateSummary, Mode, PointSetFile};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Infeasible(_) => 3,
            CliError::Usage(_) => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qgeneric", version, about = "Construct and certify Q-generic point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a point set in [n]^d (with --n) or in F_p^d (with --p) and certify it.
    Construct(ConstructArgs),
    /// Re-certify a point file with exact arithmetic.
    Verify(VerifyArgs),
    /// Classify a form over F_p as rich or irreducible of rank 2.
    Classify(ClassifyArgs),
    /// Build and certify the sphere construction for d in {2,3,4}, p in 5..=97.
    Demo(DemoArgs),
}

#[derive(Args, Debug)]
struct Threads {
    /// Worker threads for verification.
    #[arg(long, env = "QGENERIC_THREADS")]
    threads: Option<NonZeroUsize>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    dim: usize,
    /// Grid size: points land in {1..n}^d.
    #[arg(long, required_unless_present = "p", conflicts_with = "p")]
    n: Option<u64>,
    /// Work over F_p instead of the grid.
    #[arg(long)]
    p: Option<u64>,
    /// "sphere" or semicolon-separated i,j,c terms (1-based, c integer or num/den).
    #[arg(long, default_value = "sphere")]
    form: String,
    /// Write the point file here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    threads: Threads,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Override the form recorded in the file.
    #[arg(long)]
    form: Option<String>,
    /// Expected dimension; an error if the file disagrees.
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    threads: Threads,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value = "sphere")]
    form: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct DemoArgs {
    /// Largest prime in the table.
    #[arg(long, default_value_t = 97)]
    max_p: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    threads: Threads,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Construct,
    Verify,
    Classify,
    Demo,
}

/// Validated settings for one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub dim: usize,
    pub grid_size: Option<u64>,
    pub prime: Option<u64>,
    pub form_spec: Option<String>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub threads: Option<NonZeroUsize>,
}

impl RunConfig {
    fn new(command: CommandKind) -> Self {
        RunConfig {
            command,
            dim: 0,
            grid_size: None,
            prime: None,
            form_spec: None,
            input: None,
            output: None,
            format: Format::Json,
            seed: 0,
            threads: None,
        }
    }

    pub fn construct_grid(dim: usize, n: u64, form: &str) -> Self {
        RunConfig { dim, grid_size: Some(n), form_spec: Some(form.into()), ..RunConfig::new(CommandKind::Construct) }
    }

    pub fn construct_field(dim: usize, p: u64, form: &str) -> Self {
        RunConfig { dim, prime: Some(p), form_spec: Some(form.into()), ..RunConfig::new(CommandKind::Construct) }
    }

    pub fn verify(input: PathBuf) -> Self {
        RunConfig { input: Some(input), ..RunConfig::new(CommandKind::Verify) }
    }

    fn from_cli(cli: Cli) -> Self {
        match cli.command {
            Command::Construct(a) => RunConfig {
                dim: a.dim,
                grid_size: a.n,
                prime: a.p,
                form_spec: Some(a.form),
                output: a.output,
                format: a.format,
                seed: a.seed,
                threads: a.threads.threads,
                ..RunConfig::new(CommandKind::Construct)
            },
            Command::Verify(a) => RunConfig {
                dim: a.dim.unwrap_or(0),
                form_spec: a.form,
                input: Some(a.input),
                threads: a.threads.threads,
                ..RunConfig::new(CommandKind::Verify)
            },
            Command::Classify(a) => RunConfig {
                dim: a.dim,
                prime: Some(a.p),
                form_spec: Some(a.form),
                seed: a.seed,
                ..RunConfig::new(CommandKind::Classify)
            },
            Command::Demo(a) => RunConfig {
                prime: Some(a.max_p),
                seed: a.seed,
                threads: a.threads.threads,
                ..RunConfig::new(CommandKind::Demo)
            },
        }
    }

    fn check(&self) -> Result<(), CliError> {
        let needs_dim = matches!(self.command, CommandKind::Construct | CommandKind::Classify);
        if needs_dim && self.dim < 2 {
            return Err(CliError::Usage(format!("--dim must be at least 2, got {}", self.dim)));
        }
        if let Some(n) = self.grid_size {
            if n < 3 {
                return Err(CliError::Usage(format!("--n must be at least 3, got {n}")));
            }
        }
        Ok(())
    }

    fn form(&self, dim: usize) -> Result<RationalForm, CliError> {
        let spec = self.form_spec.as_deref().unwrap_or("sphere");
        RationalForm::parse(spec, dim).map_err(|e| CliError::Usage(format!("--form: {e}")))
    }

    fn field_prime(&self) -> Result<Prime, CliError> {
        let p = self.prime.ok_or_else(|| CliError::Usage("--p is required".into()))?;
        Prime::new(p).map_err(|e| CliError::Usage(format!("--p: {e}")))
    }
}

/// A built point file with its certificate.
pub struct Constructed {
    pub file: PointSetFile,
    pub certificate: Certificate,
}

fn curve_error(e: CurveError) -> CliError {
    match e {
        CurveError::NotRich { .. } | CurveError::FieldTooSmall { .. } => CliError::Infeasible(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

fn lift_error(e: LiftError) -> CliError {
    match e {
        LiftError::NoPrime { .. } => CliError::Infeasible(e.to_string()),
        LiftError::Curve(c) => curve_error(c),
        other => CliError::Usage(other.to_string()),
    }
}

pub fn cmd_construct(cfg: &RunConfig) -> Result<Constructed, CliError> {
    cfg.check()?;
    let d = cfg.dim;
    let form = cfg.form(d)?;
    let internal = |e: crate::verify::VerifyError| CliError::Usage(e.to_string());
    let (file, certificate) = if let Some(n) = cfg.grid_size {
        let g = construct_grid(n, d, &form, cfg.seed).map_err(lift_error)?;
        let cert = is_q_generic(&g.to_point_set(), &form.clone().into()).map_err(internal)?;
        let file = PointSetFile {
            mode: Mode::Grid,
            dim: d,
            n: Some(n),
            prime: Some(g.prime().get()),
            form: form_terms_rational(&form),
            points: g.points().to_vec(),
            certificate: Some(CertificateSummary::from(&cert)),
            tool_version: Some(TOOL_VERSION.into()),
            seed: Some(cfg.seed),
        };
        (file, cert)
    } else {
        let p = cfg.field_prime()?;
        let q = reduce_form(&form, p).map_err(|e| CliError::Usage(e.to_string()))?;
        let c = construct_q_generic(&q, d, cfg.seed).map_err(curve_error)?;
        let cert = is_q_generic(&c.to_point_set(), &q.clone().into()).map_err(internal)?;
        let file = PointSetFile {
            mode: Mode::Field,
            dim: d,
            n: None,
            prime: Some(p.get()),
            form: form_terms_field(&q),
            points: c.points().iter().map(|a| a.residues().into_iter().map(|v| v as i64).collect()).collect(),
            certificate: Some(CertificateSummary::from(&cert)),
            tool_version: Some(TOOL_VERSION.into()),
            seed: Some(cfg.seed),
        };
        (file, cert)
    };
    Ok(Constructed { file, certificate })
}

pub fn read_point_file(path: &std::path::Path) -> Result<PointSetFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    PointSetFile::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Re-certifies a point file; the form comes from the file unless overridden.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(PointSetFile, Certificate), CliError> {
    let path = cfg.input.as_ref().ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let file = read_point_file(path)?;
    if cfg.dim != 0 && cfg.dim != file.dim {
        return Err(CliError::Usage(format!("--dim {} does not match the file's dimension {}", cfg.dim, file.dim)));
    }
    let set = file.point_set().map_err(|e| CliError::Usage(e.to_string()))?;
    let form = match &cfg.form_spec {
        Some(_) => {
            let r = cfg.form(file.dim)?;
            match file.mode {
                Mode::Grid => r.into(),
                Mode::Field => {
                    let p = set.prime().expect("field file");
                    reduce_form(&r, p).map_err(|e| CliError::Usage(e.to_string()))?.into()
                }
            }
        }
        None => file.verification_form().map_err(|e| CliError::Usage(e.to_string()))?,
    };
    let cert = is_q_generic(&set, &form).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((file, cert))
}

pub fn classify_report(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.check()?;
    let p = cfg.field_prime()?;
    let form = cfg.form(cfg.dim)?;
    let q = reduce_form(&form, p).map_err(|e| CliError::Usage(e.to_string()))?;
    let class = classify(&q, cfg.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut s = String::new();
    writeln!(s, "form: {q} over F_{p}").unwrap();
    match class {
        FormClass::Rich(b) => {
            writeln!(s, "class: rich").unwrap();
            writeln!(s, "basis:").unwrap();
            for (k, v) in b.vectors().iter().enumerate() {
                let coords: Vec<String> = v.iter().map(|x| x.residue().to_string()).collect();
                writeln!(s, "  v{} = ({})  Q(v{}) = {}", k + 1, coords.join(", "), k + 1, q.evaluate(v).residue()).unwrap();
            }
        }
        FormClass::IrreducibleRank2 { discriminant } => {
            let e = (p.get() - 1) / 2;
            writeln!(s, "class: irreducible of rank 2").unwrap();
            writeln!(s, "discriminant: {} (symmetric {})", discriminant.residue(), discriminant.symmetric()).unwrap();
            writeln!(
                s,
                "non-square: {}^{e} = {} ≡ -1 (mod {p})",
                discriminant.residue(),
                discriminant.pow(e).residue()
            )
            .unwrap();
        }
    }
    Ok(s)
}

/// One row of the demo table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemoRow {
    pub dim: usize,
    pub prime: u64,
    pub expected: Option<u64>,
    pub points: Option<usize>,
    pub status: String,
}

pub fn demo_rows(max_p: u64, seed: u64) -> Result<Vec<DemoRow>, CliError> {
    let mut rows = Vec::new();
    for d in 2..=4usize {
        for p in (5..=max_p).filter(|&v| is_prime(v)) {
            let prime = Prime::new(p).expect("odd prime");
            let q = QuadraticForm::sphere(d, prime).map_err(|e| CliError::Usage(e.to_string()))?;
            match construct_q_generic(&q, d, seed) {
                Ok(c) => {
                    let cert = is_q_generic(&c.to_point_set(), &q.into()).map_err(|e| CliError::Usage(e.to_string()))?;
                    rows.push(DemoRow {
                        dim: d,
                        prime: p,
                        expected: Some(p + 1 - d as u64),
                        points: Some(c.points().len()),
                        status: cert.status.label().into(),
                    });
                }
                Err(CurveError::NotRich { .. }) => {
                    rows.push(DemoRow { dim: d, prime: p, expected: None, points: None, status: "not rich".into() })
                }
                Err(e) => return Err(curve_error(e)),
            }
        }
    }
    Ok(rows)
}

fn render_demo(rows: &[DemoRow]) -> String {
    let mut s = String::new();
    writeln!(s, "{:>3} {:>4} {:>8} {:>7}  status", "d", "p", "p+1-d", "points").unwrap();
    for r in rows {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        writeln!(
            s,
            "{:>3} {:>4} {:>8} {:>7}  {}",
            r.dim,
            r.prime,
            opt(r.expected.map(|v| v.to_string())),
            opt(r.points.map(|v| v.to_string())),
            r.status
        )
        .unwrap();
    }
    s
}

fn certificate_report(file: &PointSetFile, cert: &Certificate) -> String {
    let mut s = String::new();
    let mode = match file.mode {
        Mode::Grid => "grid",
        Mode::Field => "field",
    };
    writeln!(s, "mode: {mode}").unwrap();
    writeln!(s, "dim: {}", file.dim).unwrap();
    if let Some(n) = file.n {
        writeln!(s, "n: {n}").unwrap();
    }
    if let Some(p) = file.prime {
        writeln!(s, "prime: {p}").unwrap();
    }
    writeln!(s, "points: {}", file.points.len()).unwrap();
    writeln!(s, "status: {}", cert.status.label()).unwrap();
    writeln!(s, "subsets tested: {}", cert.subsets_tested).unwrap();
    let opt = |v: Option<usize>| v.map_or("not computed".to_string(), |x| x.to_string());
    writeln!(s, "max hyperplane incidence: {}", opt(cert.max_hyperplane_incidence)).unwrap();
    writeln!(s, "max quadric incidence: {}", opt(cert.max_quadric_incidence)).unwrap();
    if let Status::HyperplaneViolation(v) | Status::QuadricViolation(v) = &cert.status {
        writeln!(s, "violating subset: {:?}", v.subset).unwrap();
        for &i in &v.subset {
            writeln!(s, "  #{i}: {:?}", file.points[i]).unwrap();
        }
        writeln!(s, "determinant: {}", v.witness.determinant).unwrap();
        writeln!(s, "relation: ({})", v.witness.relation.join(", ")).unwrap();
    }
    s
}

fn in_pool<T: Send>(threads: Option<NonZeroUsize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.get())
                .build()
                .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn execute(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cfg.command {
        CommandKind::Construct => {
            let built = in_pool(cfg.threads, || cmd_construct(cfg))??;
            let text = match cfg.format {
                Format::Json => built.file.to_json(),
                Format::Csv => built.file.to_csv(),
            };
            let report = certificate_report(&built.file, &built.certificate);
            match &cfg.output {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    out.write_all(report.as_bytes()).map_err(io_err)?;
                }
                None => {
                    out.write_all(text.as_bytes()).map_err(io_err)?;
                    err.write_all(report.as_bytes()).map_err(io_err)?;
                }
            }
            Ok(if built.certificate.is_pass() { 0 } else { 2 })
        }
        CommandKind::Verify => {
            let (file, cert) = in_pool(cfg.threads, || cmd_verify(cfg))??;
            out.write_all(certificate_report(&file, &cert).as_bytes()).map_err(io_err)?;
            Ok(if cert.is_pass() { 0 } else { 2 })
        }
        CommandKind::Classify => {
            out.write_all(classify_report(cfg)?.as_bytes()).map_err(io_err)?;
            Ok(0)
        }
        CommandKind::Demo => {
            let max_p = cfg.prime.unwrap_or(97);
            let rows = in_pool(cfg.threads, || demo_rows(max_p, cfg.seed))??;
            out.write_all(render_demo(&rows).as_bytes()).map_err(io_err)?;
            let failed = rows.iter().any(|r| r.status != "pass" && r.status != "not rich");
            Ok(if failed { 2 } else { 0 })
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let to_out = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            if to_out {
                let _ = out.write_all(text.as_bytes());
                return 0;
            }
            let _ = err.write_all(text.as_bytes());
            return 4;
        }
    };
    let cfg = RunConfig::from_cli(cli);
    match execute(&cfg, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
