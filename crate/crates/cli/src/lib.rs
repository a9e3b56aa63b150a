//! Command-line front end for `orbitsym`: simulation, abstract and concrete
//! recovery, threshold analysis and verification over JSON files.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 numerical or genericity error.

pub mod files;
pub mod reports;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbitsym::gramgraph::{build_gram_graph, gram_invariants};
use orbitsym::groupcore::{cayley_from_gram, group_invariants, identify_small_group, table_from_perm_group};
use orbitsym::pointsym::union_action;
use orbitsym::reconstruct::{recover_concrete_group, verify_group};
use orbitsym::reptheory::orbit_threshold;
use orbitsym::simulate::{build_group, sample_orbits, Family, GroupSpec};
use orbitsym::{FieldTag, LabelTolerance, TolerancePolicy};

use files::{read_json, to_json, write_json, GroupFile, OrbitFile};
use reports::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Lib(#[from] orbitsym::Error),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Io(..) => "IoError",
            CliError::Lib(e) => e.name(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => EXIT_USAGE,
            CliError::Lib(e) if e.is_usage() => EXIT_USAGE,
            CliError::Lib(_) => EXIT_NUMERICAL,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "orbitsym", version, about = "Recover finite isometry groups from generic orbits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a catalog group, sample orbits, write orbits.json and group.json.
    Simulate(SimulateArgs),
    /// Recover the multiplication table from an orbit file.
    RecoverAbstract(RecoverArgs),
    /// Recover the group as explicit matrices from an orbit file.
    RecoverConcrete(RecoverArgs),
    /// Report irreducible multiplicities and the orbit-count threshold of a group file.
    Analyze(AnalyzeArgs),
    /// Check a group file for isometry, closure and invariance of an orbit file.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Cyclic,
    Dihedral,
    Quaternion8,
    Symmetric,
    Sign,
    G1,
    G2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for FieldTag {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => FieldTag::Real,
            FieldArg::Complex => FieldTag::Complex,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    /// Absolute tolerance for clustering Gram labels (default: 1e-9 relative to the largest label).
    #[arg(long)]
    pub tol_label: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_rank: f64,
    #[arg(long, default_value_t = 10.0)]
    pub gap_factor: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_isometry: f64,
}

impl ToleranceArgs {
    pub fn policy(&self) -> Result<TolerancePolicy, CliError> {
        let mut p = TolerancePolicy { rank_tol: self.tol_rank, gap_factor: self.gap_factor, isometry_tol: self.tol_isometry, ..Default::default() };
        if let Some(t) = self.tol_label {
            p.label_tol = LabelTolerance::Absolute(t);
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Size parameter for cyclic, dihedral and symmetric families.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "real")]
    pub field: FieldArg,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Use the left-regular representation of the chosen group.
    #[arg(long)]
    pub regular: bool,
    #[arg(long)]
    pub conjugate_seed: Option<u64>,
    /// Number of orbits (default: the number needed for concrete recovery).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RecoverArgs {
    pub orbits: PathBuf,
    #[arg(long)]
    pub allow_insufficient: bool,
    /// Output directory for group.json (concrete recovery only).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    pub group: PathBuf,
    #[command(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub group: PathBuf,
    pub orbits: PathBuf,
    #[command(flatten)]
    pub tol: ToleranceArgs,
}

/// Parses `args` (including the program name), runs the command, writes the
/// report to `out`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::RecoverAbstract(a) => recover_abstract(a),
        Command::RecoverConcrete(a) => recover_concrete(a),
        Command::Analyze(a) => analyze(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let report = ErrorReport { status: "error", error: e.name().into(), message: e.to_string() };
            let _ = out.write_all(to_json(&report).as_bytes());
            e.exit_code()
        }
    }
}

type Outcome = Result<(String, i32), CliError>;

pub fn group_spec(a: &SimulateArgs) -> Result<GroupSpec, CliError> {
    let need_n = || a.n.ok_or_else(|| CliError::Usage("--n is required for this family".into()));
    let family = match a.family {
        FamilyArg::Cyclic => Family::Cyclic(need_n()?),
        FamilyArg::Dihedral => Family::Dihedral(need_n()?),
        FamilyArg::Symmetric => Family::Symmetric(need_n()?),
        FamilyArg::Quaternion8 => Family::Quaternion8,
        FamilyArg::Sign => Family::Sign,
        FamilyArg::G1 => Family::G1,
        FamilyArg::G2 => Family::G2,
    };
    let field: FieldTag = a.field.into();
    let mut spec = if a.regular {
        GroupSpec::new(Family::Regular(Box::new(GroupSpec::new(family, field))), field)
    } else {
        GroupSpec::new(family, field)
    };
    spec.dim = a.dim;
    spec.conjugation_seed = a.conjugate_seed;
    Ok(spec)
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.display().to_string(), e))
}

fn simulate(a: &SimulateArgs) -> Outcome {
    let policy = a.tol.policy()?;
    let spec = group_spec(a)?;
    let group = build_group(&spec)?;
    let k = match a.k {
        Some(0) => return Err(CliError::Usage("--k must be positive".into())),
        Some(k) => k,
        None => match orbit_threshold(&group) {
            Ok(t) => t.k_recover,
            Err(orbitsym::Error::TrivialGroup) => group.field().extension_degree(),
            Err(e) => return Err(e.into()),
        },
    };
    let orbits = sample_orbits(&group, k, a.seed, &policy)?;
    ensure_dir(&a.out)?;
    let orbit_path = a.out.join("orbits.json");
    let group_path = a.out.join("group.json");
    write_json(&orbit_path, &OrbitFile::from_orbits(group.field(), group.dimension(), &orbits))?;
    write_json(&group_path, &GroupFile::from_group(&group))?;
    let report = SimulateReport {
        status: "ok",
        group: spec.name(),
        order: group.order(),
        field: group.field().into(),
        dimension: group.dimension(),
        k,
        seed: a.seed,
        orbit_file: orbit_path.display().to_string(),
        group_file: group_path.display().to_string(),
    };
    Ok((to_json(&report), EXIT_OK))
}

fn load_orbits(path: &Path) -> Result<(OrbitFile, Vec<Vec<orbitsym::Vector>>), CliError> {
    let file: OrbitFile = read_json(path)?;
    let orbits = file.to_orbits()?;
    Ok((file, orbits))
}

fn recover_abstract(a: &RecoverArgs) -> Outcome {
    let policy = a.tol.policy()?;
    let (file, orbits) = load_orbits(&a.orbits)?;
    let mut gram = Vec::with_capacity(orbits.len());
    for o in &orbits {
        gram.push(GramReport::from(gram_invariants(&build_gram_graph(o, &policy)?)?));
    }
    let field: FieldTag = file.field.into();
    let (table, method, insufficient) = if field == FieldTag::Complex && orbits.len() == 1 {
        let graph = build_gram_graph(&orbits[0], &policy)?;
        (cayley_from_gram(&graph)?, "cayley", false)
    } else {
        let action = union_action(&orbits, &policy, a.allow_insufficient)?;
        (table_from_perm_group(&action.group)?, "union_action", action.insufficient)
    };
    let report = AbstractReport {
        status: "ok",
        method,
        identified: identify_small_group(&table),
        insufficient,
        invariants: group_invariants(&table).into(),
        gram,
        table: table.rows(),
    };
    Ok((to_json(&report), EXIT_OK))
}

fn recover_concrete(a: &RecoverArgs) -> Outcome {
    let policy = a.tol.policy()?;
    let (_, orbits) = load_orbits(&a.orbits)?;
    let (group, recovery) = recover_concrete_group(&orbits, &policy, a.allow_insufficient)?;
    let mut report = ConcreteReport::new(group.order(), identify_small_group(group.table()), recovery);
    let group_file = GroupFile::from_group(&group);
    match &a.out {
        Some(dir) => {
            ensure_dir(dir)?;
            let path = dir.join("group.json");
            write_json(&path, &group_file)?;
            report.group_file = Some(path.display().to_string());
        }
        None => report.group = Some(group_file),
    }
    Ok((to_json(&report), EXIT_OK))
}

fn analyze(a: &AnalyzeArgs) -> Outcome {
    let policy = a.tol.policy()?;
    let file: GroupFile = read_json(&a.group)?;
    let group = file.to_group(&policy)?;
    let identified = identify_small_group(group.table());
    let report = match orbit_threshold(&group) {
        Ok(t) => AnalyzeReport::new(group.order(), identified, t),
        Err(orbitsym::Error::TrivialGroup) => {
            let degree = group.field().extension_degree();
            AnalyzeReport {
                status: "ok",
                field: group.field().into(),
                order: 1,
                identified,
                irreps: vec![IrrepReport {
                    name: if degree == 1 { "chi0".into() } else { "rho0".into() },
                    dim: 1,
                    n_pi_v: group.dimension(),
                    n_pi_r: 1,
                    trivial: true,
                }],
                r: None,
                k_span: 1,
                k_recover: degree,
            }
        }
        Err(e) => return Err(e.into()),
    };
    Ok((to_json(&report), EXIT_OK))
}

fn verify(a: &VerifyArgs) -> Outcome {
    let policy = a.tol.policy()?;
    let file: GroupFile = read_json(&a.group)?;
    let group = file.to_group(&policy)?;
    let (orbit_file, orbits) = load_orbits(&a.orbits)?;
    if orbit_file.field != file.field {
        return Err(CliError::Usage("group and orbit files use different fields".into()));
    }
    if orbit_file.dimension != file.dimension {
        return Err(CliError::Usage(format!(
            "group acts on dimension {}, orbits live in dimension {}",
            file.dimension, orbit_file.dimension
        )));
    }
    let v = verify_group(&group, &orbits, &policy);
    let code = if v.passed { EXIT_OK } else { EXIT_VERIFY };
    Ok((to_json(&VerifyReport::new(v, policy.isometry_tol)), code))
}
