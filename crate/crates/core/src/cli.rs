//! Command implementations behind the `twisted-hecke` binary.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 for unusable input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::hecke_algebras::relations::{
    check_graded_associativity, check_im_involution, random_vectors, run_suite, test_descriptors, CheckResult,
};
use crate::hecke_algebras::{affine_to_graded, AffineDescriptor};
use crate::langlands_pipeline::{assemble, example, specialize_report, InertialDatum, EXAMPLES};
use crate::root_data::{Family, RootDatum};
use crate::spectra::{extended_quotient_count, FiniteTorusPoint};
use crate::weyl_groups::{check_coset_cones, WeylGroup};

#[derive(Debug, Parser)]
#[command(name = "twisted-hecke", version, about = "Twisted affine Hecke algebras from inertial data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the algebra for a datum and print the report.
    Describe(DescribeArgs),
    /// Run the identity suites on the test descriptors.
    Check(CheckArgs),
    /// Count the twisted extended quotient at points of order dividing N.
    Count(CountArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Source {
    /// JSON datum file.
    #[arg(long, conflicts_with = "example")]
    pub input: Option<PathBuf>,
    /// Built-in datum.
    #[arg(long)]
    pub example: Option<String>,
}

#[derive(Debug, Args)]
pub struct DescribeArgs {
    #[command(flatten)]
    pub source: Source,
    /// Value of q for the specialized relations, as `a` or `a/b`.
    #[arg(long, default_value = "1")]
    pub q: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Random triples per descriptor for the associativity fuzz.
    #[arg(long, default_value_t = 50)]
    pub triples: usize,
    /// Largest semisimple rank of the descriptors to include.
    #[arg(long, default_value_t = 3)]
    pub rank_bound: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

enum Failure {
    Input(String),
    Suite,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn load(source: &Source) -> Result<InertialDatum> {
    match (&source.input, &source.example) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
            InertialDatum::from_json(&text)
        }
        (None, Some(name)) => example(name),
        (None, None) => {
            let names: Vec<&str> = EXAMPLES.iter().map(|(n, _)| *n).collect();
            Err(Error::Validation(format!("pass --input FILE or --example NAME ({})", names.join(", "))))
        }
    }
}

fn parse_q(s: &str) -> Result<BigRational> {
    let q: BigRational = s.trim().parse().map_err(|_| Error::Validation(format!("cannot parse q = {s:?}")))?;
    if q <= BigRational::zero() {
        return Err(Error::Validation(format!("q = {s} must be positive")));
    }
    Ok(q)
}

fn describe(args: &DescribeArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let datum = load(&args.source)?;
    let q = parse_q(&args.q)?;
    let report = assemble(&datum)?;
    let values = specialize_report(&report, &q)?;
    match args.format {
        Format::Json => {
            let doc = json!({ "report": report, "q": q.to_string(), "specialized": values });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("reports serialize"))?;
        }
        Format::Text => {
            write!(out, "{}", report.to_text())?;
            if values.iter().any(|v| v.value.is_some()) {
                writeln!(out, "at q = {q}:")?;
                for v in values {
                    if let Some(val) = v.value {
                        writeln!(out, "  q^{{m}} = {val} for {}", v.root)?;
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckRow {
    name: String,
    passed: bool,
    detail: String,
}

impl From<CheckResult> for CheckRow {
    fn from(c: CheckResult) -> Self {
        CheckRow { name: c.name, passed: c.passed, detail: c.detail }
    }
}

fn check_descriptor(
    name: &str,
    desc: &AffineDescriptor,
    rng: &mut ChaCha8Rng,
    triples: usize,
    rows: &mut Vec<CheckRow>,
) -> Result<()> {
    let xs = random_vectors(rng, desc.rank(), 50, 3);
    rows.extend(run_suite(name, desc, rng, &xs, triples)?.into_iter().map(CheckRow::from));
    let rank = desc.rank();
    let mut points = vec![FiniteTorusPoint::identity(rank)];
    if rank > 0 {
        let mut half = vec![0; rank];
        half[0] = 1;
        points.push(FiniteTorusPoint::new(2, half));
    }
    let (mut assoc, mut im) = (0, true);
    for t in &points {
        let g = affine_to_graded(desc, t)?;
        assoc += check_graded_associativity(&g, rng, triples.min(50))?;
        im &= check_im_involution(&g, rng, triples.min(50))?;
    }
    rows.push(CheckRow {
        name: format!("{name}: graded associativity"),
        passed: assoc == 0,
        detail: format!("{assoc} failures at {} points", points.len()),
    });
    rows.push(CheckRow { name: format!("{name}: IM involution"), passed: im, detail: String::new() });
    Ok(())
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut rows = Vec::new();
    for (name, desc) in test_descriptors()? {
        if desc.num_simple() <= args.rank_bound {
            check_descriptor(&name, &desc, &mut rng, args.triples, &mut rows)?;
        }
    }
    for (name, _) in EXAMPLES {
        let report = assemble(&example(name)?)?;
        let desc = &report.descriptor;
        if desc.num_simple() <= args.rank_bound && desc.num_simple() > 0 {
            check_descriptor(&format!("example {name}"), desc, &mut rng, args.triples.min(20), &mut rows)?;
        }
    }
    for (f, n) in [(Family::A, 2), (Family::B, 2), (Family::A, 3), (Family::B, 3)] {
        if n > args.rank_bound {
            continue;
        }
        let w = WeylGroup::enumerate(std::sync::Arc::new(RootDatum::build_classical(f, n)?))?;
        let mut fails = (0, 0);
        let points = FiniteTorusPoint::all_of_order_dividing(w.datum().rank(), 2);
        for t in &points {
            let r = check_coset_cones(&w, t, &mut rng, 100)?;
            fails.0 += r.dominant_failures;
            fails.1 += r.obtuse_failures;
        }
        rows.push(CheckRow {
            name: format!("{f}{n}: coset cones"),
            passed: fails == (0, 0),
            detail: format!("{} + {} failures over {} points", fails.0, fails.1, points.len()),
        });
    }
    let passed = rows.iter().all(|r| r.passed);
    match args.format {
        Format::Json => {
            let doc = json!({ "seed": args.seed, "triples": args.triples, "passed": passed, "checks": rows });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("rows serialize"))?;
        }
        Format::Text => {
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
            for r in &rows {
                writeln!(out, "{:<width$}  {}  {}", r.name, if r.passed { "ok" } else { "FAIL" }, r.detail)?;
            }
            writeln!(out, "{} checks, {}", rows.len(), if passed { "all passed" } else { "FAILURES" })?;
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Suite)
    }
}

fn count(args: &CountArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    if args.order == 0 {
        return Err(Failure::Input("--order must be at least 1".into()));
    }
    let report = assemble(&load(&args.source)?)?;
    let desc = &report.descriptor;
    let rank = desc.rank();
    let points = FiniteTorusPoint::all_of_order_dividing(rank, args.order);
    let counts = extended_quotient_count(desc.group(), desc.cocycle(), &points)?;
    match args.format {
        Format::Json => {
            let doc = json!({ "order": args.order, "points": points.len(), "count": counts });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("counts serialize"))?;
        }
        Format::Text => {
            writeln!(out, "points of order dividing {}: {}", args.order, points.len())?;
            writeln!(out, "orbits: {}", counts.orbits.len())?;
            for o in &counts.orbits {
                writeln!(
                    out,
                    "  {:?}/{}  orbit {}  stabilizer {}  classes {}",
                    o.representative.exponents(),
                    o.representative.order(),
                    o.orbit_size,
                    o.stabilizer_order,
                    o.regular_classes
                )?;
            }
            writeln!(out, "total: {}", counts.total)?;
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return if code == 0 { 0 } else { 2 };
        }
    };
    let result = match &cli.command {
        Command::Describe(a) => describe(a, out),
        Command::Check(a) => check(a, out),
        Command::Count(a) => count(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Suite) => 1,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["twisted-hecke"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn describe_examples() {
        let (code, out, _) = run_capture(&["describe", "--example", "sp58"]);
        assert_eq!(code, 0);
        assert!(out.contains("B2 x B3") && out.contains(r"(T_{s_{\beta_3}}-q^{5})(T_{s_{\beta_3}}+1)=0"), "{out}");
        let (code, out, _) = run_capture(&["describe", "--example", "gl-cuspidal", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["report"]["root_system"], "empty");
    }

    #[test]
    fn input_errors_exit_two() {
        let dir = std::env::temp_dir().join(format!("twisted-hecke-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let bad = dir.join("bad.json");
        std::fs::write(&bad, "{ not json").unwrap();
        let (code, _, err) = run_capture(&["describe", "--input", bad.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(err.contains("malformed"), "{err}");
        assert_eq!(run_capture(&["describe"]).0, 2);
        assert_eq!(run_capture(&["describe", "--example", "sp58", "--q", "-1"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
    }

    #[test]
    fn counts() {
        let (code, out, _) = run_capture(&["count", "--example", "sp2", "--order", "2", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["count"]["total"], 4);
        let (_, out, _) = run_capture(&["count", "--example", "gl1", "--order", "3", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!((v["points"].as_u64(), v["count"]["total"].as_u64()), (Some(3), Some(3)));
        let (_, out, _) = run_capture(&["count", "--example", "sp58", "--order", "1", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["count"]["orbits"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn check_runs() {
        let (code, out, _) = run_capture(&["check", "--rank-bound", "0"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("0 checks"));
        let a = run_capture(&["check", "--rank-bound", "1", "--triples", "5", "--seed", "3"]);
        let b = run_capture(&["check", "--rank-bound", "1", "--triples", "5", "--seed", "3"]);
        assert_eq!(a.0, 0, "{}", a.1);
        assert_eq!(a, b);
    }
}
