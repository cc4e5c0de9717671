//! The `qga` command line.
//!
//! [`run`] parses arguments, runs one subcommand and writes either a human
//! report or a JSON document (version [`REPORT_VERSION`]). Output is
//! buffered, so stdout stays empty whenever the exit code is nonzero.
//!
//! Exit codes: 0 success, 1 unreadable input, 2 quotient not
//! finite-dimensional within `--max-len`, 3 invalid flags, 4 automorphism
//! search space over `--cap`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::algebra::{build_quotient, AlgebraError, QuotientAlgebra, DEFAULT_MAX_LEN};
use crate::autos::{enumerate_automorphisms, AutomorphismCandidate, AutosError};
use crate::field::{Field, FieldKind, FiniteField};
use crate::gradings::{
    grade_algebra, ideal_is_homogeneous, is_relation_homogeneous, rigidity_verdict, ClassInvariants,
    DegreeAssignment, RigidityVerdict, Verdict,
};
use crate::presentation::{parse_builtin_spec, parse_presentation, Presentation};

pub const REPORT_VERSION: &str = "qga_report_v1";

/// Witnesses listed in a report; the full count is reported separately.
pub const MAX_LISTED_WITNESSES: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "qga", version, about = "Gradings and automorphisms of quiver algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimension, radical layers and the arrow-grading verdict.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        search: Search,
    },
    /// The lattice of arrow gradings and its shift classes.
    Gradings {
        #[command(flatten)]
        input: Input,
        /// Print a grading that is not a shift of the trivial one.
        #[arg(long)]
        witness: bool,
        /// Test an arrow grading, one integer per arrow in declaration order.
        #[arg(long, value_name = "G1,G2,...", value_delimiter = ',', allow_hyphen_values = true)]
        check: Option<Vec<i64>>,
    },
    /// Enumerate automorphisms over a finite field and test unipotence.
    Autos {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        search: Search,
    },
}

#[derive(Debug, Args)]
struct Input {
    /// Presentation file.
    #[arg(value_name = "FILE", required_unless_present = "builtin", conflicts_with = "builtin")]
    file: Option<PathBuf>,
    /// Built-in family, e.g. `q1e:3` or `linear_an:4`.
    #[arg(long, value_name = "NAME:PARAMS")]
    builtin: Option<String>,
    /// Emit a JSON report.
    #[arg(long)]
    json: bool,
    /// Longest path length tried before giving up on finite-dimensionality.
    #[arg(long, value_name = "INT", default_value_t = DEFAULT_MAX_LEN)]
    max_len: usize,
}

#[derive(Debug, Args)]
struct Search {
    /// Finite field for the automorphism search: F2, F3, F4, F5 or F7.
    #[arg(long)]
    field: Option<FieldKind>,
    /// Largest search space (arrow-image tuples) to attempt.
    #[arg(long, value_name = "INT", default_value_t = 1 << 24)]
    cap: u128,
    /// Worker threads; 0 uses every core.
    #[arg(long, value_name = "INT", default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    NotFinite(String),
    Usage(String),
    SearchSpace(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::NotFinite(_) => 2,
            CliError::Usage(_) => 3,
            CliError::SearchSpace(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::NotFinite(m) | CliError::Usage(m) | CliError::SearchSpace(m) => m,
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::NotAdmissible { .. } => CliError::Input(e.to_string()),
            _ => CliError::NotFinite(e.to_string()),
        }
    }
}

impl From<AutosError> for CliError {
    fn from(e: AutosError) -> Self {
        match e {
            AutosError::SearchSpaceExceeded { .. } => {
                CliError::SearchSpace(format!("{e}; raise --cap to search anyway"))
            }
            AutosError::Algebra(a) => a.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// The machine-readable report shared by every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: &'static str,
    pub name: String,
    pub field: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<String>,
    pub dimension: usize,
    pub radical_dims: Vec<usize>,
    pub connected: bool,
    pub one_vertex: bool,
    /// Always `"arrow-gradings"`: vertices in degree 0, arrows homogeneous.
    pub scope: &'static str,
    pub lattice_rank: usize,
    pub kernel_basis: Vec<DegreeAssignment>,
    pub shift_basis: Vec<DegreeAssignment>,
    pub class_invariants: ClassInvariants,
    pub verdict: Verdict,
    pub witness: Option<DegreeAssignment>,
    pub shift_witness: Option<DegreeAssignment>,
    pub check: Option<CheckReport>,
    pub automorphisms: Option<AutomorphismReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub assignment: DegreeAssignment,
    pub relations_homogeneous: Vec<bool>,
    pub ideal_homogeneous: bool,
    pub graded_dims: Option<Vec<GradedDim>>,
    pub violation: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GradedDim {
    pub degree: i64,
    pub dimension: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AutomorphismReport {
    pub field: String,
    /// Always `"finite-field-evidence"`.
    pub evidence: &'static str,
    pub search_space: u128,
    pub count: usize,
    pub identity_found: bool,
    pub all_unipotent: bool,
    pub witness_count: usize,
    pub witnesses: Vec<CandidateReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateReport {
    pub images: Vec<ArrowImage>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArrowImage {
    pub arrow: String,
    pub image: String,
}

/// Runs the command line on `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    3
                }
            };
        }
    };
    match execute(cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn execute(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Analyze { input, search } => {
            let mut p = load(&input)?;
            if let Some(field) = search.field {
                p = p.with_field(field);
            }
            let mut report = base_report("analyze", &p, input.max_len)?;
            if search.field.is_some() {
                report.automorphisms = Some(automorphisms(&p, input.max_len, &search)?);
            }
            Ok(emit(&report, input.json, true))
        }
        Command::Gradings { input, witness, check } => {
            let p = load(&input)?;
            let mut report = base_report("gradings", &p, input.max_len)?;
            if let Some(g) = check {
                let n = p.quiver().num_arrows();
                if g.len() != n {
                    return Err(CliError::Usage(format!(
                        "--check needs {n} values (one per arrow), got {}",
                        g.len()
                    )));
                }
                let g = DegreeAssignment::new(g);
                report.check = Some(crate::with_field!(p.field(), F => check_grading::<F>(&p, input.max_len, g)?));
            }
            Ok(emit(&report, input.json, witness))
        }
        Command::Autos { input, search } => {
            let p = load(&input)?;
            let field = search.field.unwrap_or(if p.field() == FieldKind::Q { FieldKind::F2 } else { p.field() });
            let p = p.with_field(field);
            let mut report = base_report("autos", &p, input.max_len)?;
            report.automorphisms = Some(automorphisms(&p, input.max_len, &search)?);
            Ok(emit(&report, input.json, false))
        }
    }
}

fn load(input: &Input) -> Result<Presentation, CliError> {
    match (&input.file, &input.builtin) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            parse_presentation(&text).map_err(|e| CliError::Input(format!("{}:{e}", path.display())))
        }
        (None, Some(spec)) => parse_builtin_spec(spec).map_err(|e| CliError::Input(e.to_string())),
        (None, None) => Err(CliError::Usage("give a FILE or --builtin NAME:PARAMS".into())),
    }
}

fn base_report(command: &'static str, p: &Presentation, max_len: usize) -> Result<Report, CliError> {
    let radical_dims =
        crate::with_field!(p.field(), F => build_quotient::<F>(p, max_len)?.radical_series().to_vec());
    let v: RigidityVerdict = rigidity_verdict(p, max_len)?;
    let q = p.quiver();
    Ok(Report {
        version: REPORT_VERSION,
        command,
        name: p.name().to_string(),
        field: p.field().to_string(),
        vertices: q.vertices().to_vec(),
        arrows: q.arrows().iter().map(|a| a.name.clone()).collect(),
        dimension: v.dimension,
        radical_dims,
        connected: v.connected,
        one_vertex: v.one_vertex,
        scope: "arrow-gradings",
        lattice_rank: v.lattice.rank,
        kernel_basis: v.lattice.kernel_basis.clone(),
        shift_basis: v.lattice.shift_basis.clone(),
        class_invariants: v.lattice.class_invariants.clone(),
        verdict: v.verdict,
        witness: v.witness,
        shift_witness: v.shift_witness,
        check: None,
        automorphisms: None,
    })
}

fn check_grading<F: Field>(
    p: &Presentation,
    max_len: usize,
    g: DegreeAssignment,
) -> Result<CheckReport, CliError> {
    let a: QuotientAlgebra<F> = build_quotient(p, max_len)?;
    let relations_homogeneous = is_relation_homogeneous(p, &g);
    let ideal_homogeneous = ideal_is_homogeneous(&a, &g)?;
    let (graded_dims, violation) = if relations_homogeneous.iter().all(|&b| b) && ideal_homogeneous {
        match grade_algebra(&a, &g) {
            Ok(s) => (
                Some(
                    s.graded_dims
                        .into_iter()
                        .map(|(degree, dimension)| GradedDim { degree, dimension })
                        .collect(),
                ),
                None,
            ),
            Err(v) => (None, Some(v.to_string())),
        }
    } else {
        (None, None)
    };
    Ok(CheckReport { assignment: g, relations_homogeneous, ideal_homogeneous, graded_dims, violation })
}

fn automorphisms(p: &Presentation, max_len: usize, search: &Search) -> Result<AutomorphismReport, CliError> {
    use crate::field::{F2, F3, F4, F5, F7};
    match p.field() {
        FieldKind::Q => Err(CliError::Usage(
            "automorphism search needs a finite field: F2, F3, F4, F5 or F7".into(),
        )),
        FieldKind::F2 => search_over::<F2>(p, max_len, search),
        FieldKind::F3 => search_over::<F3>(p, max_len, search),
        FieldKind::F4 => search_over::<F4>(p, max_len, search),
        FieldKind::F5 => search_over::<F5>(p, max_len, search),
        FieldKind::F7 => search_over::<F7>(p, max_len, search),
    }
}

fn search_over<F: FiniteField>(
    p: &Presentation,
    max_len: usize,
    search: &Search,
) -> Result<AutomorphismReport, CliError> {
    let a: QuotientAlgebra<F> = build_quotient(p, max_len)?;
    let e = enumerate_automorphisms(&a, search.cap, search.jobs)?;
    let describe = |c: &AutomorphismCandidate<F>| CandidateReport {
        images: a
            .quiver()
            .arrows()
            .iter()
            .zip(&c.images)
            .map(|(arrow, x)| ArrowImage {
                arrow: arrow.name.clone(),
                image: a.quiver().element_string(x),
            })
            .collect(),
    };
    Ok(AutomorphismReport {
        field: F::kind().to_string(),
        evidence: "finite-field-evidence",
        search_space: e.search_space,
        count: e.report.total_found,
        identity_found: e.automorphisms.iter().any(AutomorphismCandidate::is_identity),
        all_unipotent: e.report.all_unipotent,
        witness_count: e.report.witnesses.len(),
        witnesses: e.report.witnesses.iter().take(MAX_LISTED_WITNESSES).map(describe).collect(),
    })
}

fn emit(report: &Report, json: bool, show_witness: bool) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(report).expect("report serializes");
        s.push('\n');
        s
    } else {
        human(report, show_witness)
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn list(xs: &[DegreeAssignment]) -> String {
    if xs.is_empty() {
        "none".into()
    } else {
        xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

fn human(r: &Report, show_witness: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "algebra: {} over {}", r.name, r.field);
    let _ = writeln!(
        s,
        "quiver: {} {}, arrows {}{}",
        r.vertices.len(),
        if r.vertices.len() == 1 { "vertex" } else { "vertices" },
        if r.arrows.is_empty() { "none".into() } else { r.arrows.join(" ") },
        if r.connected { "" } else { " (not connected)" }
    );
    let _ = writeln!(s, "dimension: {}", r.dimension);
    let _ = writeln!(s, "radical layers: {}", join(&r.radical_dims));
    let _ = writeln!(s, "kernel rank: {}", r.lattice_rank);
    if r.command == "gradings" {
        let _ = writeln!(s, "kernel basis: {}", list(&r.kernel_basis));
        let _ = writeln!(s, "shift sublattice: {}", list(&r.shift_basis));
    }
    let c = &r.class_invariants;
    let _ = writeln!(
        s,
        "class rank: {}{}",
        c.rank,
        if c.torsion.is_empty() { String::new() } else { format!(", torsion {}", join(&c.torsion)) }
    );
    let _ = writeln!(s, "verdict: {} (arrow gradings only)", r.verdict);
    if show_witness {
        if let Some(w) = &r.witness {
            let _ = writeln!(s, "witness: {w}");
        }
        if let Some(w) = &r.shift_witness {
            let _ = writeln!(s, "shift witness: {w}");
        }
    }
    if let Some(c) = &r.check {
        let _ = writeln!(s, "check {}:", c.assignment);
        let bad: Vec<String> = c
            .relations_homogeneous
            .iter()
            .enumerate()
            .filter(|(_, &h)| !h)
            .map(|(i, _)| (i + 1).to_string())
            .collect();
        if bad.is_empty() {
            let _ = writeln!(s, "  homogeneous: yes");
        } else {
            let _ = writeln!(s, "  homogeneous: no (relation {})", bad[0]);
            if bad.len() > 1 {
                let _ = writeln!(s, "  inhomogeneous relations: {}", bad.join(", "));
            }
        }
        let _ = writeln!(s, "  ideal homogeneous: {}", yes_no(c.ideal_homogeneous));
        if let Some(dims) = &c.graded_dims {
            let parts: Vec<String> = dims.iter().map(|d| format!("{}:{}", d.degree, d.dimension)).collect();
            let _ = writeln!(s, "  graded dims: {}", parts.join(" "));
        }
        if let Some(v) = &c.violation {
            let _ = writeln!(s, "  {v}");
        }
    }
    if let Some(a) = &r.automorphisms {
        let _ = writeln!(s, "automorphisms over {} (finite-field evidence, not a proof):", a.field);
        let _ = writeln!(s, "  search space: {}", a.search_space);
        let _ = writeln!(s, "  found: {}", a.count);
        let _ = writeln!(s, "  all_unipotent: {}", a.all_unipotent);
        for w in &a.witnesses {
            let images: Vec<String> = w.images.iter().map(|i| format!("{} -> {}", i.arrow, i.image)).collect();
            let _ = writeln!(s, "  witness: {}", images.join(", "));
        }
        if a.witness_count > a.witnesses.len() {
            let _ = writeln!(s, "  ... {} more witnesses", a.witness_count - a.witnesses.len());
        }
    }
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
