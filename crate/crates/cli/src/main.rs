//! `ulrich`: query Ulrich-bundle numerics of polarized surfaces.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 a verification
//! command found a failing check, 3 an internal invariant was violated.

mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use ulrich_core::catalog::{self, CatalogError};
use ulrich_core::classify::{classify, ClassifyError};
use ulrich_core::document::{self, DocumentError};
use ulrich_core::enumerate::{enumerate_bounded, enumerate_rank2_exact, EnumerateError};
use ulrich_core::invariants::{derived_invariants, embedding_sanity};
use ulrich_core::ulrich::{
    chi_vanishing_check, dual_twist, line_dual, line_numeric_check, rank_numeric_check, special_rank2_chern,
    UlrichError,
};
use ulrich_core::{ChernData, DivisorClass, Error, PolarizedSurface};

#[derive(Debug, Parser)]
#[command(
    name = "ulrich",
    version,
    about = "Numerical Ulrich-bundle conditions on polarized surfaces"
)]
struct Cli {
    /// Use a built-in surface (see `catalog list`).
    #[arg(long, global = true, value_name = "NAME", conflicts_with = "surface")]
    builtin: Option<String>,
    /// Read a surface document; `-` reads standard input.
    #[arg(long, global = true, value_name = "FILE")]
    surface: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derived invariants and embedding sanity checks.
    Info,
    /// Check the Ulrich equalities for a line bundle O(D).
    CheckLine {
        /// Coefficients of D in the lattice basis, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
    },
    /// Check the Ulrich equalities for Chern data (rank, c1, c2).
    CheckRank {
        #[arg(long)]
        rank: u32,
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        #[arg(long, allow_hyphen_values = true)]
        c2: String,
    },
    /// List the Ulrich line bundles.
    Enumerate {
        /// Search the box [-B, B]^rank instead of solving exactly.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Chern data of a special rank-2 Ulrich bundle.
    SpecialChern,
    /// Existence, stability, wildness and moduli dimensions.
    Classify,
    /// Built-in surfaces.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Clifford data of curves in |3h + K| on the plane blown up at m points
    /// of a cubic, polarized by a l - sum e_i.
    Clifford {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        m: u32,
    },
    /// Print the canonical surface document.
    Convert,
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// Names of the built-in surfaces.
    List,
    /// Check every row of the list of non-special rational surfaces in P^4.
    Verify,
}

enum Failure {
    Usage(String),
    Validation { path: Option<String>, message: String },
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Validation { .. } => 1,
            Failure::Internal(_) => 3,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, path, message) = match self {
            Failure::Usage(m) => ("usage", None, m),
            Failure::Validation { path, message } => ("validation", path.as_deref(), message),
            Failure::Internal(m) => ("internal", None, m),
        };
        json!({"error": {"kind": kind, "path": path, "message": message}})
    }

    fn to_text(&self) -> String {
        match self {
            Failure::Usage(m) => format!("error: {m}"),
            Failure::Validation { path: Some(p), message } => format!("error at `{p}`: {message}"),
            Failure::Validation { path: None, message } => format!("error: {message}"),
            Failure::Internal(m) => format!("internal error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Document(DocumentError::Validation { path, message }) => Failure::Validation {
                path: Some(path.clone()),
                message: message.clone(),
            },
            Error::Classify(ClassifyError::InvariantViolation(m))
            | Error::Catalog(CatalogError::InvariantViolation(m))
            | Error::Ulrich(UlrichError::IdentityViolated(m))
            | Error::Classify(ClassifyError::Ulrich(UlrichError::IdentityViolated(m))) => Failure::Internal(m.clone()),
            _ => Failure::Validation {
                path: None,
                message: e.to_string(),
            },
        }
    }
}

macro_rules! impl_from_core {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::from(Error::from(e))
            }
        }
    )*};
}

impl_from_core!(
    ulrich_core::lattice::LatticeError,
    ulrich_core::invariants::InvariantsError,
    UlrichError,
    EnumerateError,
    ClassifyError,
    CatalogError,
    DocumentError
);

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports always serialize")
}

/// What a command produced: a JSON report or verbatim text, and whether a
/// verification it ran came out negative.
enum Output {
    Report { value: Value, failed_check: bool },
    Text(String),
}

fn report(value: Value) -> Output {
    Output::Report {
        value,
        failed_check: false,
    }
}

fn load_surface(cli: &Cli) -> Result<PolarizedSurface, Failure> {
    match (&cli.builtin, &cli.surface) {
        (Some(name), None) => Ok(catalog::builtin(name)?),
        (None, Some(path)) => {
            let text = if path == "-" {
                let mut buf = String::new();
                io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
                buf
            } else {
                fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading `{path}`: {e}")))?
            };
            Ok(document::parse_surface(&text)?)
        }
        (None, None) => Err(Failure::Usage(
            "this command needs --builtin NAME or --surface FILE".into(),
        )),
        (Some(_), Some(_)) => Err(Failure::Usage("pass only one of --builtin and --surface".into())),
    }
}

fn parse_class(s: &PolarizedSurface, text: &str, what: &str) -> Result<DivisorClass, Failure> {
    let coeffs = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<BigInt>()
                .map_err(|_| Failure::Usage(format!("--{what}: `{}` is not an integer", c.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let d = DivisorClass::new(coeffs);
    s.lattice().check(&d).map_err(|e| Failure::Validation {
        path: Some(what.to_string()),
        message: e.to_string(),
    })?;
    Ok(d)
}

fn class_record(s: &PolarizedSurface, d: &DivisorClass) -> Value {
    let mut row = Map::new();
    for (label, c) in s.lattice().labels().iter().zip(d.coeffs()) {
        row.insert(label.clone(), number(c));
    }
    row.insert("divisor".into(), Value::String(s.lattice().format_class(d)));
    Value::Object(row)
}

fn number(v: &BigInt) -> Value {
    serde_json::from_str(&v.to_string()).expect("integers are valid JSON numbers")
}

fn surface_header(s: &PolarizedSurface) -> Value {
    json!({
        "name": s.name(),
        "kind": s.kind().to_string(),
        "basis": s.lattice().labels(),
        "h": s.lattice().format_class(s.h()),
        "K": s.lattice().format_class(s.canonical()),
        "pg": s.pg(),
        "q": s.q(),
        "flags": to_value(&s.effective_flags()),
    })
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let needs_surface = !matches!(cli.command, Command::Catalog { .. } | Command::Clifford { .. });
    if !needs_surface && (cli.builtin.is_some() || cli.surface.is_some()) {
        return Err(Failure::Usage("this command does not take a surface".into()));
    }
    match &cli.command {
        Command::Info => {
            let s = load_surface(cli)?;
            let inv = derived_invariants(&s)?;
            let sanity = match embedding_sanity(&s) {
                Ok(r) => to_value(&r.checks),
                Err(ulrich_core::invariants::InvariantsError::MissingHypothesis(why)) => Value::String(why.into()),
                Err(e) => return Err(e.into()),
            };
            Ok(report(json!({
                "surface": surface_header(&s),
                "invariants": to_value(&inv),
                "sanity": sanity,
            })))
        }
        Command::CheckLine { divisor } => {
            let s = load_surface(cli)?;
            let d = parse_class(&s, divisor, "divisor")?;
            let r = line_numeric_check(&s, &d)?;
            let mut value = json!({"divisor": s.lattice().format_class(&d), "passed": r.passed()});
            merge(&mut value, to_value(&r));
            Ok(Output::Report {
                value,
                failed_check: !r.passed(),
            })
        }
        Command::CheckRank { rank, c1, c2 } => {
            let s = load_surface(cli)?;
            let c1 = parse_class(&s, c1, "c1")?;
            let c2 = c2
                .trim()
                .parse::<BigInt>()
                .map_err(|_| Failure::Usage(format!("--c2: `{c2}` is not an integer")))?;
            let f = ChernData::new(*rank, c1, c2)?;
            let r = rank_numeric_check(&s, &f)?;
            let chi = chi_vanishing_check(&s, &f)?;
            if chi != r.passed() {
                return Err(Failure::Internal(format!(
                    "Ulrich equalities give {} but the Euler characteristic test gives {chi}",
                    r.passed()
                )));
            }
            let mut value = json!({
                "rank": rank,
                "c1": s.lattice().format_class(f.c1()),
                "c2": number(f.c2()),
                "passed": r.passed(),
                "chi_vanishing": chi,
            });
            merge(&mut value, to_value(&r));
            Ok(Output::Report {
                value,
                failed_check: !r.passed(),
            })
        }
        Command::Enumerate { bound } => {
            let s = load_surface(cli)?;
            let (method, found) = match bound {
                Some(b) => ("bounded", enumerate_bounded(&s, *b)?),
                None => match enumerate_rank2_exact(&s) {
                    Ok(found) => ("exact", found),
                    Err(EnumerateError::RankTooHigh(r)) => {
                        return Err(Failure::Usage(format!(
                            "rank {r} lattices need a search box: pass --bound B"
                        )))
                    }
                    Err(e) => return Err(e.into()),
                },
            };
            let mut solutions = Vec::with_capacity(found.len());
            for d in &found {
                let mut row = class_record(&s, d);
                let dual = line_dual(&s, d)?;
                row["dual"] = Value::String(s.lattice().format_class(&dual));
                solutions.push(row);
            }
            Ok(report(json!({
                "surface": s.name(),
                "method": method,
                "bound": bound,
                "count": solutions.len(),
                "solutions": solutions,
            })))
        }
        Command::SpecialChern => {
            let s = load_surface(cli)?;
            let f = special_rank2_chern(&s)?;
            let check = rank_numeric_check(&s, &f)?;
            let chi = chi_vanishing_check(&s, &f)?;
            let fixed = dual_twist(&s, &f)? == f;
            if !(check.passed() && chi && fixed) {
                return Err(Failure::Internal(format!(
                    "special Chern data {f} fails its own checks (equalities {}, chi {chi}, dual fixed {fixed})",
                    check.passed()
                )));
            }
            Ok(report(json!({
                "surface": s.name(),
                "rank": f.rank(),
                "c1": s.lattice().format_class(f.c1()),
                "c1_coefficients": to_value(f.c1()),
                "c2": number(f.c2()),
                "ulrich_equalities": check.passed(),
                "chi_vanishing": chi,
                "dual_twist_fixed": fixed,
            })))
        }
        Command::Classify => {
            let s = load_surface(cli)?;
            Ok(report(to_value(&classify(&s)?)))
        }
        Command::Catalog {
            action: CatalogAction::List,
        } => {
            let mut rows = Vec::new();
            for name in catalog::builtin_names() {
                let s = catalog::builtin(&name)?;
                let inv = derived_invariants(&s)?;
                rows.push(json!({
                    "name": name,
                    "kind": s.kind().to_string(),
                    "h": s.lattice().format_class(s.h()),
                    "h2": number(&inv.h2),
                    "pi": number(&inv.pi),
                }));
            }
            Ok(report(json!({"builtins": rows})))
        }
        Command::Catalog {
            action: CatalogAction::Verify,
        } => {
            let r = catalog::verify_table1()?;
            Ok(Output::Report {
                failed_check: !r.passed(),
                value: json!({"passed": r.passed(), "rows": to_value(&r.rows)}),
            })
        }
        Command::Clifford { a, m } => Ok(report(to_value(&catalog::clifford_report(*a, *m)?))),
        Command::Convert => Ok(Output::Text(document::serialize_surface(&load_surface(cli)?))),
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        for (k, v) in b {
            a.entry(k).or_insert(v);
        }
    }
}

fn run(argv: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(Output::Text(text)) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Ok(Output::Report { value, failed_check }) => {
            let text = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("values serialize")),
                Format::Table => render::table(&value),
            };
            let _ = out.write_all(text.as_bytes());
            if failed_check {
                2
            } else {
                0
            }
        }
        Err(f) => {
            let _ = match cli.format {
                Format::Json => writeln!(err, "{}", f.to_json()),
                Format::Table => writeln!(err, "{}", f.to_text()),
            };
            f.code()
        }
    }
}

fn main() -> ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = run(std::env::args(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}
