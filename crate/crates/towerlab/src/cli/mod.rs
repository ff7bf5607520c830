//! The `towerlab` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage error.

use crate::error::{Error, Result};
use crate::finitefield::FieldCtx;
use crate::geometry::{ramify, tower_genus_seq, DEFAULT_SURROGATES};
use crate::optimality::{run_experiment, CSV_HEADER};
use crate::qexpansion::{qidentity_registry, rational_identity_ids, verify_rational_identity, GRID};
use crate::towercore::{
    catalog, chain_counts, complete_set_from, enumerate_chains, tower, BaseKind, Involution, NeighborTable,
    RelationKind, TowerSpec,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "towerlab", version, about = "Explicit recursive modular towers over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format for tabular commands.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the artifact here (atomically) instead of to stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every registered q-series and rational-function identity.
    VerifyIdentities {
        /// Precision in integral powers of q.
        #[arg(long, default_value_t = 120)]
        precision: i64,
    },
    /// Describe the eight towers.
    Catalog,
    /// Count rational chains of every length up to --levels.
    Count {
        #[arg(long)]
        tower: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        levels: u32,
    },
    /// The greatest complete set S.
    CompleteSet {
        #[arg(long)]
        tower: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Also dump the chains of this length inside S, one JSON per line.
        #[arg(long)]
        chains: Option<u32>,
    },
    /// Genus of each tower level.
    Genus {
        #[arg(long)]
        tower: String,
        #[arg(long)]
        levels: u32,
    },
    /// Ramification of the tower steps over surrogate fields.
    Ramify {
        #[arg(long)]
        tower: String,
        #[arg(long)]
        depth: u32,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SURROGATES)]
        surrogates: Vec<u64>,
    },
    /// Point counts, complete-set bound and genus per level.
    Optimality {
        #[arg(long)]
        tower: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        levels: u32,
    },
}

/// A finished command: the artifact and whether every check passed.
struct Outcome {
    body: String,
    ok: bool,
}

impl Outcome {
    fn ok(body: String) -> Outcome {
        Outcome { body, ok: true }
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Usage(_)
            | Error::UnknownTower(_)
            | Error::UnknownName(_)
            | Error::InadmissibleCharacteristic { .. }
            | Error::NotPrime(_)
            | Error::DegreeOutOfRange(_)
            | Error::FieldTooLarge { .. }
            | Error::PrecisionTooSmall(..)
            | Error::DepthOverflow(_)
            | Error::LevelOverflow(_)
            | Error::EmptyChain
    )
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, err) {
        Ok(outcome) => {
            let written = match &cli.output {
                Some(path) => write_atomic(path, outcome.body.as_bytes()),
                None => out.write_all(outcome.body.as_bytes()).map_err(Error::from),
            };
            match written {
                Ok(()) if outcome.ok => EXIT_OK,
                Ok(()) => EXIT_FAILED,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_FAILED
                }
            }
        }
        Err(e) if is_usage(&e) => {
            let _ = writeln!(err, "error: {e}\n\nRun `towerlab --help` for usage.");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILED
        }
    }
}

/// Writes to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

fn field(spec: &TowerSpec, p: u64, k: u32) -> Result<FieldCtx> {
    let ctx = FieldCtx::new(p, k)?;
    spec.check_field(&ctx)?;
    Ok(ctx)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv_string<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::VerifyIdentities { precision } => verify_identities(*precision),
        Command::Catalog => Ok(Outcome::ok(pretty(&Value::Array(catalog().iter().map(describe).collect())))),
        Command::Count { tower: name, p, k, levels } => count(&tower(name)?, *p, *k, *levels, format),
        Command::CompleteSet { tower: name, p, k, chains } => complete(&tower(name)?, *p, *k, *chains),
        Command::Genus { tower: name, levels } => genus(&tower(name)?, *levels, format),
        Command::Ramify { tower: name, depth, surrogates } => {
            let spec = tower(name)?;
            for &p in surrogates {
                spec.check_field(&FieldCtx::prime(p)?)?;
            }
            let reports = ramify(&spec, *depth, surrogates)?;
            Ok(Outcome::ok(pretty(&json!({
                "tower": spec.name,
                "depth": depth,
                "stabilization_level": reports[0].stabilization_level,
                "surrogates": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            }))))
        }
        Command::Optimality { tower: name, p, k, levels } => {
            let spec = tower(name)?;
            let e = run_experiment(&spec, &field(&spec, *p, *k)?, *levels)?;
            for w in &e.warnings {
                writeln!(err, "warning: {w}")?;
            }
            let body = match format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let io = |e: csv::Error| Error::Io(e.to_string());
                    w.write_record(CSV_HEADER).map_err(io)?;
                    for r in &e.rows {
                        w.write_record(r.csv_record()).map_err(io)?;
                    }
                    String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).expect("utf-8")
                }
                Format::Json => pretty(&Value::Array(e.rows.iter().map(|r| r.to_json()).collect())),
            };
            Ok(Outcome::ok(body))
        }
    }
}

fn verify_identities(precision: i64) -> Result<Outcome> {
    let prec = precision.checked_mul(GRID).ok_or(Error::PrecisionTooSmall(precision, 0))?;
    let mut ok = true;
    let mut q_reports = Vec::new();
    for id in qidentity_registry() {
        let r = id.verify(prec)?;
        ok &= r.residual_leading_exponent.is_none();
        q_reports.push(r.to_json());
    }
    let mut rational = Vec::new();
    for id in rational_identity_ids() {
        let r = verify_rational_identity(&id)?;
        ok &= r.passed();
        rational.push(r.to_json());
    }
    Ok(Outcome {
        body: pretty(&json!({"q_identities": q_reports, "rational_identities": rational})),
        ok,
    })
}

// `a x + b` without unit coefficients or `+ -`
fn linear(a: i64, b: i64) -> String {
    let head = match a {
        0 => return b.to_string(),
        1 => "x".to_string(),
        -1 => "-x".to_string(),
        _ => format!("{a}*x"),
    };
    match b {
        0 => head,
        b if b < 0 => format!("{head} - {}", -b),
        b => format!("{head} + {b}"),
    }
}

fn involution_text(inv: &Involution) -> String {
    match *inv {
        Involution::Mobius([a, b, c, d]) => format!("({})/({})", linear(a, b), linear(c, d)),
        Involution::Reflection { anchor: (x, y) } => format!("P -> ({x},{y}) - P"),
    }
}

fn describe(t: &TowerSpec) -> Value {
    let relation = match t.relation {
        RelationKind::Product(c) => format!("A(x_j) * A(w(x_(j+1))) = {c}"),
        RelationKind::Sum(c) => format!("A(x_j) + A(w(x_(j+1))) = {c}"),
    };
    json!({
        "name": t.name,
        "l": t.l,
        "base": match t.base { BaseKind::ProjectiveLine => "P1", BaseKind::Elliptic => "y^2 = x^3 + 1" },
        "value_map": t.value_map,
        "relation": relation,
        "involution": involution_text(&t.involution),
        "aux_involutions": t.aux_involutions.iter().map(|(n, i)| json!({"name": n, "map": involution_text(i)})).collect::<Vec<_>>(),
        "excluded_characteristics": t.excluded,
        "curves": t.label.describe(1) + ", " + &t.label.describe(2) + ", ...",
        "phi": (t.base == BaseKind::ProjectiveLine).then(|| t.phi().to_string()),
    })
}

#[derive(Serialize)]
struct CountRow<'a> {
    tower: &'a str,
    q: u64,
    level: u32,
    count: String,
    count_with_multiplicity: String,
}

fn count(spec: &TowerSpec, p: u64, k: u32, levels: u32, format: Option<Format>) -> Result<Outcome> {
    let ctx = field(spec, p, k)?;
    if levels == 0 {
        return Err(Error::EmptyChain);
    }
    let table = NeighborTable::build(spec, &ctx)?;
    let distinct = chain_counts(&table, levels as usize, true)?;
    let mult = chain_counts(&table, levels as usize, false)?;
    let rows: Vec<CountRow> = (0..levels as usize)
        .map(|i| CountRow {
            tower: spec.name,
            q: ctx.order(),
            level: i as u32 + 1,
            count: distinct[i].to_string(),
            count_with_multiplicity: mult[i].to_string(),
        })
        .collect();
    match format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(Outcome::ok(csv_string(&rows)?)),
        Format::Json => Ok(Outcome::ok(pretty(&serde_json::to_value(&rows).expect("rows serialize")))),
    }
}

/// Upper limit on dumped chains.
const CHAIN_DUMP_LIMIT: usize = 1_000_000;

fn complete(spec: &TowerSpec, p: u64, k: u32, chains: Option<u32>) -> Result<Outcome> {
    let ctx = field(spec, p, k)?;
    let table = NeighborTable::build(spec, &ctx)?;
    let s = complete_set_from(&table, spec, ctx.order(), None);
    let body = match chains {
        None => pretty(&s.to_json()),
        Some(m) => {
            let mut lines = String::new();
            for c in enumerate_chains(&table, spec, m as usize, Some(&s.points), CHAIN_DUMP_LIMIT)? {
                lines.push_str(&c.to_json(ctx.order()).to_string());
                lines.push('\n');
            }
            lines
        }
    };
    Ok(Outcome::ok(body))
}

#[derive(Serialize)]
struct GenusCsv<'a> {
    tower: &'a str,
    level: u32,
    genus: u64,
    method: &'a str,
}

fn genus(spec: &TowerSpec, levels: u32, format: Option<Format>) -> Result<Outcome> {
    let rows = tower_genus_seq(spec, levels)?;
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let recs: Vec<GenusCsv> = rows
                .iter()
                .map(|r| GenusCsv { tower: r.tower, level: r.level, genus: r.genus, method: r.method.as_str() })
                .collect();
            Ok(Outcome::ok(csv_string(&recs)?))
        }
        Format::Json => Ok(Outcome::ok(pretty(&Value::Array(rows.iter().map(|r| r.to_json()).collect())))),
    }
}
