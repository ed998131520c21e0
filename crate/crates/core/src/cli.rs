//! Command-line surface: `info`, `construct`, `verify`, `search`.
//!
//! Exit codes: 0 ok, 1 verification failed, 2 construction not applicable,
//! 3 invalid set, 4 parse error, 5 node limit, 64 usage error, 74 I/O error.
//! Only the requested artifact or report goes to standard output;
//! diagnostics go to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::format::{parse_family, serialize_family, write_dense};
use crate::ring::{factorize, ComponentSpec, Ring, RingElement};
use crate::search::{
    difference_graph, greedy_set, max_clique_counted, max_clique_parallel, DEFAULT_NODE_LIMIT,
};
use crate::verify::{verify_family_with, Mode, VerifyOptions, DEFAULT_TOLERANCE};
use crate::weyl::{build_family_with, family_for_set, family_unchecked, Family, RingChoice};

pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const NOT_APPLICABLE: i32 = 2;
    pub const INVALID_SET: i32 = 3;
    pub const PARSE_ERROR: i32 = 4;
    pub const NODE_LIMIT: i32 = 5;
    pub const USAGE: i32 = 64;
    pub const IO: i32 = 74;
}

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "MUMEB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "mumeb",
    version,
    about = "Mutually unbiased maximally entangled bases in C^d ⊗ C^d"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RingArg {
    Fields,
    Zd,
}

impl From<RingArg> for RingChoice {
    fn from(r: RingArg) -> Self {
        match r {
            RingArg::Fields => RingChoice::Fields,
            RingArg::Zd => RingChoice::Zd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Numeric,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Numeric => Mode::Numeric,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factorization, component order and guaranteed family sizes for d.
    Info {
        d: u64,
        #[arg(long)]
        json: bool,
    },
    /// Build a family and write it as JSON.
    Construct {
        d: u64,
        #[arg(long, value_enum, default_value = "fields")]
        ring: RingArg,
        /// `auto`, or a comma-separated list of elements: an integer `n`
        /// stands for `n·1`, `@k` for the element at enumeration index `k`.
        #[arg(long, default_value = "auto")]
        set: String,
        /// Output path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Accept a one-basis family when no pair can be built.
        #[arg(long)]
        allow_single: bool,
        /// Build an explicit set even if it violates the unit-difference
        /// condition (negative controls).
        #[arg(long)]
        force: bool,
        /// Also write dense complex amplitudes to this path.
        #[arg(long)]
        dense: Option<PathBuf>,
    },
    /// Verify a family file and print a JSON report.
    Verify {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        /// Sweep at most this many basis pairs numerically.
        #[arg(long)]
        max_pairs: Option<usize>,
    },
    /// Find a large unit set with pairwise unit differences.
    Search {
        d: u64,
        #[arg(long, value_enum, default_value = "fields")]
        ring: RingArg,
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        #[arg(long)]
        greedy: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
        /// Search root branches in parallel (same result).
        #[arg(long)]
        parallel: bool,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(stderr, "mumeb: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl ToString) -> Self {
        Self {
            code,
            message: message.to_string(),
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::NotApplicable(_) | Error::TooSmall(_) => exit::NOT_APPLICABLE,
        Error::InvalidSet(_) | Error::NotAUnit(_) | Error::ShapeMismatch => exit::INVALID_SET,
        Error::NodeLimitExceeded { .. } => exit::NODE_LIMIT,
        _ => exit::USAGE,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(error_code(&e), e)
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::new(exit::IO, e)
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Info { d, json } => info(d, json, stdout),
        Command::Construct {
            d,
            ring,
            set,
            out,
            allow_single,
            force,
            dense,
        } => construct(
            d,
            ring.into(),
            &set,
            out,
            allow_single,
            force,
            dense,
            stdout,
        ),
        Command::Verify {
            path,
            tol,
            mode,
            max_pairs,
        } => verify(path, tol, mode.into(), max_pairs, stdout),
        Command::Search {
            d,
            ring,
            exact: _,
            greedy,
            node_limit,
            parallel,
        } => search(d, ring.into(), greedy, node_limit, parallel, stdout),
    }
}

fn require_d(d: u64) -> Result<(), Failure> {
    if d < 2 {
        return Err(Failure::new(
            exit::USAGE,
            format!("d must be at least 2, got {d}"),
        ));
    }
    Ok(())
}

/// Summary of what the constructions guarantee for `d`.
pub fn info_json(d: u64) -> serde_json::Value {
    let factors = factorize(d);
    let spec = RingChoice::Fields.spec(d);
    let q1 = spec
        .components
        .iter()
        .map(ComponentSpec::size)
        .min()
        .unwrap_or(0);
    let p1 = factors.iter().map(|&(p, _)| p).min().unwrap_or(0);
    let applicable = q1 >= 3;
    json!({
        "d": d,
        "factorization": factors.iter().map(|&(p, a)| json!({"p": p, "a": a})).collect::<Vec<_>>(),
        "components": spec.components.iter().map(|c| json!({"p": c.p, "a": c.a, "q": c.size()})).collect::<Vec<_>>(),
        "q1": q1,
        "fields_applicable": applicable,
        "fields_bound": if applicable { json!(q1 - 1) } else { json!(null) },
        "zd_bound": p1 - 1,
    })
}

fn info(d: u64, as_json: bool, stdout: &mut dyn Write) -> Result<i32, Failure> {
    require_d(d)?;
    let v = info_json(d);
    if as_json {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&v).unwrap()).map_err(io_failure)?;
        return Ok(exit::OK);
    }
    let factors: Vec<String> = factorize(d)
        .iter()
        .map(|(p, a)| format!("{p}^{a}"))
        .collect();
    let mut text = format!(
        "d = {d}\nfactorization: {}\ncomponents: {}\nq1 = {}\n",
        factors.join(" * "),
        RingChoice::Fields.spec(d),
        v["q1"]
    );
    if v["fields_applicable"].as_bool() == Some(true) {
        text += &format!(
            "fields: applicable, guarantees {} bases\n",
            v["fields_bound"]
        );
    } else {
        text += "fields: not applicable (smallest component has 2 elements)\n";
    }
    text += &format!("zd: baseline set gives {} bases\n", v["zd_bound"]);
    stdout.write_all(text.as_bytes()).map_err(io_failure)?;
    Ok(exit::OK)
}

/// Parses an explicit `--set` list.
pub fn parse_set(ring: &Ring, list: &str) -> Result<Vec<RingElement>, String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            if let Some(k) = item.strip_prefix('@') {
                let k: usize = k.parse().map_err(|_| format!("bad index `{item}`"))?;
                if k >= ring.d() {
                    return Err(format!("index {k} out of range for d = {}", ring.d()));
                }
                Ok(ring.element(k))
            } else {
                let n: u64 = item.parse().map_err(|_| format!("bad element `{item}`"))?;
                Ok(ring.from_integer(n))
            }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn construct(
    d: u64,
    choice: RingChoice,
    set: &str,
    out: Option<PathBuf>,
    allow_single: bool,
    force: bool,
    dense: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    require_d(d)?;
    let family = if set == "auto" {
        build_family_with(d, choice, allow_single)?
    } else {
        let ring = Ring::new(choice.spec(d))?;
        let elements = parse_set(&ring, set).map_err(|m| Failure::new(exit::INVALID_SET, m))?;
        if elements.len() < 2 && !allow_single {
            return Err(Failure::new(
                exit::INVALID_SET,
                "an explicit set needs at least two elements (or --allow-single)",
            ));
        }
        if force {
            family_unchecked(&ring, elements)?
        } else {
            family_for_set(&ring, elements)?
        }
    };
    write_family(&family, out, dense, stdout)?;
    Ok(exit::OK)
}

fn write_family(
    family: &Family,
    out: Option<PathBuf>,
    dense: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let text = serialize_family(family);
    match out {
        Some(path) => std::fs::write(&path, text).map_err(io_failure)?,
        None => stdout.write_all(text.as_bytes()).map_err(io_failure)?,
    }
    if let Some(path) = dense {
        let file = std::fs::File::create(&path).map_err(io_failure)?;
        let mut w = std::io::BufWriter::new(file);
        write_dense(family, &mut w).map_err(io_failure)?;
        w.flush().map_err(io_failure)?;
    }
    Ok(())
}

fn verify(
    path: PathBuf,
    tol: f64,
    mode: Mode,
    max_pairs: Option<usize>,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::new(exit::PARSE_ERROR, format!("{}: {e}", path.display())))?;
    let family = parse_family(&text)
        .map_err(|e| Failure::new(exit::PARSE_ERROR, format!("{}: {e}", path.display())))?;
    let report = verify_family_with(
        &family,
        &VerifyOptions {
            tolerance: tol,
            mode,
            max_pairs,
        },
    );
    writeln!(stdout, "{}", serde_json::to_string_pretty(&report).unwrap()).map_err(io_failure)?;
    Ok(if report.overall {
        exit::OK
    } else {
        exit::VERIFY_FAILED
    })
}

fn search(
    d: u64,
    choice: RingChoice,
    greedy: bool,
    node_limit: u64,
    parallel: bool,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    require_d(d)?;
    let ring = Ring::new(choice.spec(d))?;
    let graph = difference_graph(&ring);
    let (set, certified, nodes, code) = if greedy {
        let set = greedy_set(&graph);
        let certified = set.len() >= graph.clique_upper_bound();
        (set, certified, None, exit::OK)
    } else {
        let result = if parallel {
            max_clique_parallel(&graph, node_limit)
        } else {
            max_clique_counted(&graph, node_limit)
        };
        match result {
            Ok(r) => (r.clique, true, Some(r.nodes), exit::OK),
            Err(Error::NodeLimitExceeded { best, .. }) => (best, false, None, exit::NODE_LIMIT),
            Err(e) => return Err(e.into()),
        }
    };
    let v = json!({
        "d": d,
        "ring": ring.spec().to_string(),
        "method": if greedy { "greedy" } else { "exact" },
        "size": set.len(),
        "certified_maximum": certified,
        "nodes": nodes,
        "set": set,
        "set_display": set.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    writeln!(stdout, "{}", serde_json::to_string_pretty(&v).unwrap()).map_err(io_failure)?;
    if code == exit::NODE_LIMIT {
        return Err(Failure::new(
            code,
            format!("node limit {node_limit} exceeded; printed best set found"),
        ));
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("mumeb").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn info_values() {
        assert_eq!(info_json(9)["q1"], 9);
        assert_eq!(info_json(9)["fields_bound"], 8);
        assert_eq!(info_json(9)["zd_bound"], 2);
        assert_eq!(info_json(15)["q1"], 3);
        assert_eq!(info_json(15)["fields_bound"], 2);
        assert_eq!(info_json(6)["fields_applicable"], false);
        assert!(info_json(6)["fields_bound"].is_null());
    }

    #[test]
    fn info_text() {
        let (code, out, err) = run_capture(&["info", "6"]);
        assert_eq!(code, 0);
        assert!(out.contains("not applicable"));
        assert!(err.is_empty());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["bogus"]).0, exit::USAGE);
        assert_eq!(run_capture(&["info", "1"]).0, exit::USAGE);
        assert_eq!(
            run_capture(&["search", "9", "--exact", "--greedy"]).0,
            exit::USAGE
        );
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("construct"));
    }

    #[test]
    fn set_parsing() {
        let z9 = Ring::new(RingChoice::Zd.spec(9)).unwrap();
        assert_eq!(
            parse_set(&z9, "1, 4").unwrap(),
            vec![z9.from_integer(1), z9.from_integer(4)]
        );
        let f9 = Ring::new(RingChoice::Fields.spec(9)).unwrap();
        assert_eq!(parse_set(&f9, "@3").unwrap()[0].parts, vec![vec![0, 1]]);
        assert!(parse_set(&f9, "@9").is_err());
        assert!(parse_set(&f9, "x").is_err());
    }
}
