use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gscone::artifacts::{PaperConfig, CLAIM_COUNT, DEFAULT_SEED};
use gscone::cone::sample_gs;
use gscone::io::{
    catalog_to_json, parse_valuation, tree_to_json, valuation_to_json, valuation_to_text,
};
use gscone::matroid::isomorphism_classes;
use gscone::rational::{format_rational, parse_rational};
use gscone::substitutes::{submodular_violation, GsViolation};
use gscone::tree::{concordance_witness, concordant_sum, tree_structure};
use gscone::{
    check_gs, decompose, enumerate_matroids, is_matroid_rank_valuation, matroid_cone,
    verify_certificate, verify_paper_with, DecompositionResult, Error, FarkasCertificate,
    LabeledTree, SubsetMask, Valuation,
};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CERTIFIED: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "gscone",
    version,
    about = "Gross substitutes valuations and the matroid rank cone"
)]
struct Cli {
    /// Emit JSON (same as `--format json`).
    #[arg(long, global = true)]
    json: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized commands.
    #[arg(long, global = true, env = "SEED")]
    seed: Option<u64>,

    /// Suppress standard output; only the exit code reports the result.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a property of a valuation file.
    Check {
        #[arg(value_enum)]
        property: Property,
        file: PathBuf,
    },
    /// Print minimal substitution trees.
    Tree {
        file: PathBuf,
        /// Set `S` whose tree is printed, e.g. `1,2` or `{}`.
        #[arg(long = "set", default_value = "")]
        set: String,
        /// Print the tree for every `S`.
        #[arg(long, conflicts_with = "set")]
        all: bool,
    },
    /// Tree-concordant sum `alpha * u + beta * v`.
    Sum {
        u: PathBuf,
        v: PathBuf,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long, default_value = "1")]
        beta: String,
    },
    #[command(subcommand)]
    Matroid(MatroidCommand),
    #[command(subcommand)]
    Cone(ConeCommand),
    #[command(subcommand)]
    Paper(PaperCommand),
    /// Draw seeded GS valuations from the small-n case cones.
    Sample {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Property {
    Gs,
    Submodular,
    MatroidRank,
}

#[derive(Subcommand, Debug)]
enum MatroidCommand {
    /// List matroids on `[n]`.
    Enumerate(EnumerateArgs),
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(short = 'n')]
    n: usize,
    /// Print only the number of labelled matroids.
    #[arg(long)]
    count: bool,
    /// Also report the number of isomorphism classes.
    #[arg(long)]
    iso: bool,
}

#[derive(Subcommand, Debug)]
enum ConeCommand {
    /// Decompose a valuation over normalized matroid rank functions.
    Decompose {
        file: PathBuf,
        #[arg(long = "n")]
        n: Option<usize>,
    },
    /// Check a Farkas certificate against a valuation.
    VerifyCertificate { cert: PathBuf, valuation: PathBuf },
}

#[derive(Subcommand, Debug)]
enum PaperCommand {
    /// Run the verification pipeline.
    Verify {
        /// Comma-separated claim ids; all claims by default.
        #[arg(long, value_delimiter = ',')]
        claims: Vec<u8>,
    },
}

struct Failure {
    message: String,
}

impl Failure {
    fn file(path: &Path, err: impl std::fmt::Display) -> Self {
        Failure {
            message: format!("{}: {err}", path.display()),
        }
    }

    fn arg(err: impl std::fmt::Display) -> Self {
        Failure {
            message: err.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::arg(e)
    }
}

/// Result of a command: exit code plus the text and JSON renderings.
struct Outcome {
    code: u8,
    text: String,
    json: Value,
}

fn read_valuation(path: &Path) -> Result<Valuation, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::file(path, e))?;
    parse_valuation(&text).map_err(|e| Failure::file(path, e))
}

fn violation_json(v: &GsViolation) -> Value {
    json!({
        "set": v.set.to_list(),
        "i": v.i,
        "j": v.j,
        "k": v.k,
        "lhs": format_rational(&v.lhs),
        "rhs": format_rational(&v.rhs),
        "kind": v.kind,
    })
}

fn run_check(property: Property, file: &Path) -> Result<Outcome, Failure> {
    let v = read_valuation(file)?;
    let mut text = String::new();
    let outcome = match property {
        Property::Gs => {
            let report = check_gs(&v);
            let holds = report.is_gs();
            if holds {
                writeln!(
                    text,
                    "gross substitutes: yes ({} triples, {} pairs checked)",
                    report.triples_checked, report.pairs_checked
                )
                .ok();
            } else {
                writeln!(
                    text,
                    "gross substitutes: no ({} violations)",
                    report.violations.len()
                )
                .ok();
                for viol in &report.violations {
                    writeln!(text, "  {viol}").ok();
                }
            }
            Outcome {
                code: if holds { EXIT_OK } else { EXIT_VIOLATED },
                json: json!({
                    "property": "gs",
                    "holds": holds,
                    "triples_checked": report.triples_checked,
                    "pairs_checked": report.pairs_checked,
                    "violations": report.violations.iter().map(violation_json).collect::<Vec<_>>(),
                }),
                text,
            }
        }
        Property::Submodular => {
            let witness = submodular_violation(&v);
            let json_witness = witness.as_ref().map(|(s, i, j, d)| {
                json!({ "set": s.to_list(), "i": i, "j": j, "d2": format_rational(d) })
            });
            match &witness {
                None => writeln!(text, "submodular: yes").ok(),
                Some((s, i, j, d)) => writeln!(
                    text,
                    "submodular: no\n  d2_{{{i},{j}}} v({s}) = {} > 0",
                    format_rational(d)
                )
                .ok(),
            };
            Outcome {
                code: if witness.is_none() {
                    EXIT_OK
                } else {
                    EXIT_VIOLATED
                },
                json: json!({ "property": "submodular", "holds": witness.is_none(), "witness": json_witness }),
                text,
            }
        }
        Property::MatroidRank => {
            let holds = is_matroid_rank_valuation(&v);
            let reason = (!holds).then(|| matroid_rank_reason(&v));
            match &reason {
                None => writeln!(text, "matroid rank: yes").ok(),
                Some(r) => writeln!(text, "matroid rank: no\n  {r}").ok(),
            };
            Outcome {
                code: if holds { EXIT_OK } else { EXIT_VIOLATED },
                json: json!({ "property": "matroid-rank", "holds": holds, "witness": reason }),
                text,
            }
        }
    };
    Ok(outcome)
}

fn matroid_rank_reason(v: &Valuation) -> String {
    let empty = &v[SubsetMask::EMPTY];
    if *empty != gscone::rational::int(0) {
        return format!("v({{}}) = {}", format_rational(empty));
    }
    let n = v.n();
    for s in gscone::subset::all_subsets(n) {
        for i in s.complement(n).items() {
            let m = &v[s.with(i)] - &v[s];
            if m != gscone::rational::int(0) && m != gscone::rational::int(1) {
                return format!("marginal of item {i} at {s} is {}", format_rational(&m));
            }
        }
    }
    match check_gs(v).violations.first() {
        Some(viol) => format!("not gross substitutes: {viol}"),
        None => "not a matroid rank function".to_string(),
    }
}

fn tree_text(tree: &LabeledTree) -> String {
    let mut out = format!("S = {}\n", tree.set);
    for (idx, node) in tree.nodes.iter().enumerate() {
        let depth = std::iter::successors(tree.parent_of(idx), |&p| tree.parent_of(p)).count();
        writeln!(
            out,
            "{}{} label {}",
            "  ".repeat(depth + 1),
            node.subset,
            format_rational(&node.label)
        )
        .ok();
    }
    out
}

fn run_tree(file: &Path, set: &str, all: bool) -> Result<Outcome, Failure> {
    let v = read_valuation(file)?;
    let structure = tree_structure(&v)?;
    let trees: Vec<&LabeledTree> = if all {
        structure.trees.values().collect()
    } else {
        let s = SubsetMask::parse_list(set)?;
        s.check(v.n())?;
        match structure.trees.get(&s) {
            Some(t) => vec![t],
            None => {
                return Err(Failure::arg(format!(
                    "no tree for S = {s}: fewer than two items outside it"
                )))
            }
        }
    };
    Ok(Outcome {
        code: EXIT_OK,
        text: trees
            .iter()
            .map(|t| tree_text(t))
            .collect::<Vec<_>>()
            .join("\n"),
        json: Value::Array(trees.iter().map(|t| tree_to_json(t)).collect()),
    })
}

fn run_sum(u_path: &Path, v_path: &Path, alpha: &str, beta: &str) -> Result<Outcome, Failure> {
    let u = read_valuation(u_path)?;
    let v = read_valuation(v_path)?;
    let alpha = parse_rational(alpha)?;
    let beta = parse_rational(beta)?;
    match concordant_sum(&u, &v, &alpha, &beta) {
        Ok(w) => Ok(Outcome {
            code: EXIT_OK,
            text: valuation_to_text(&w),
            json: json!({ "concordant": true, "sum": valuation_to_json(&w) }),
        }),
        Err(Error::NotConcordant { .. }) => {
            let (s, x, y) = concordance_witness(&u, &v)?
                .ok_or_else(|| Failure::arg("concordance witness missing"))?;
            Ok(Outcome {
                code: EXIT_VIOLATED,
                text: format!("not tree-concordant: at S = {s}, {x} crosses {y}\n"),
                json: json!({
                    "concordant": false,
                    "witness": { "set": s.to_list(), "x": x.to_list(), "y": y.to_list() },
                }),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn run_enumerate(args: &EnumerateArgs) -> Result<Outcome, Failure> {
    let catalog = enumerate_matroids(args.n)?;
    let classes = args.iso.then(|| isomorphism_classes(&catalog));
    let mut text = String::new();
    if args.count || args.iso {
        writeln!(text, "labelled: {}", catalog.len()).ok();
        if let Some(c) = classes {
            writeln!(text, "isomorphism classes: {c}").ok();
        }
    }
    if !args.count {
        for (m, class) in catalog.entries.iter().zip(&catalog.iso_class) {
            let bases: Vec<String> = m.bases().iter().map(|b| b.to_string()).collect();
            writeln!(text, "rank {} class {class}: {}", m.rank(), bases.join(" ")).ok();
        }
    }
    let mut json = json!({ "n": args.n, "labelled": catalog.len() });
    if let Some(c) = classes {
        json["isomorphism_classes"] = json!(c);
    }
    if !args.count {
        json["matroids"] = catalog_to_json(&catalog);
    }
    Ok(Outcome {
        code: EXIT_OK,
        text,
        json,
    })
}

fn run_decompose(file: &Path, n: Option<usize>) -> Result<Outcome, Failure> {
    let v = read_valuation(file)?;
    if let Some(n) = n {
        if n != v.n() {
            return Err(Failure::file(
                file,
                Error::DimensionMismatch {
                    expected: n,
                    found: v.n(),
                },
            ));
        }
    }
    let (target, affine) = v.normalize();
    let cone = matroid_cone(v.n())?;
    let offset = json!({
        "constant": format_rational(&affine.constant),
        "prices": affine.prices.0.iter().map(format_rational).collect::<Vec<_>>(),
    });
    let mut text = String::new();
    if !affine.is_identity() {
        writeln!(
            text,
            "decomposing the normalized valuation (constant and per-item offsets removed)"
        )
        .ok();
    }
    match decompose(&target, &cone)? {
        DecompositionResult::Decomposable(d) => {
            writeln!(text, "decomposable over {} generators:", cone.len()).ok();
            let terms: Vec<Value> = d
                .support()
                .map(|(idx, a)| {
                    writeln!(text, "  {} x {}", format_rational(a), cone.generators[*idx].0).ok();
                    json!({ "generator": cone.generators[*idx].0, "index": idx, "coefficient": format_rational(a) })
                })
                .collect();
            Ok(Outcome {
                code: EXIT_OK,
                text,
                json: json!({ "decomposable": true, "offset": offset, "terms": terms }),
            })
        }
        DecompositionResult::Certified(cert) => {
            let pairing = cert.y.inner_product(&target)?;
            writeln!(
                text,
                "not decomposable; certificate y with <y, v> = {}:",
                format_rational(&pairing)
            )
            .ok();
            text.push_str(&valuation_to_text(&cert.y));
            Ok(Outcome {
                code: EXIT_CERTIFIED,
                text,
                json: json!({
                    "decomposable": false,
                    "offset": offset,
                    "pairing": format_rational(&pairing),
                    "certificate": valuation_to_json(&cert.y),
                }),
            })
        }
    }
}

fn run_verify_certificate(cert_path: &Path, val_path: &Path) -> Result<Outcome, Failure> {
    let y = read_valuation(cert_path)?;
    let v = read_valuation(val_path)?;
    if y.n() != v.n() {
        return Err(Failure::file(
            cert_path,
            Error::DimensionMismatch {
                expected: v.n(),
                found: y.n(),
            },
        ));
    }
    let (target, _) = v.normalize();
    let cone = matroid_cone(v.n())?;
    let cert = FarkasCertificate { y };
    let ok = verify_certificate(&cert, &target, &cone);
    let pairing = cert.y.inner_product(&target)?;
    let first_bad = cone
        .generators
        .iter()
        .find(|(_, g)| {
            cert.y
                .inner_product(g)
                .is_ok_and(|p| p < gscone::rational::int(0))
        })
        .map(|(name, _)| name.clone());
    let mut text = format!(
        "certificate valid: {}\n<y, v> = {}\n",
        if ok { "yes" } else { "no" },
        format_rational(&pairing)
    );
    if let Some(name) = &first_bad {
        writeln!(text, "negative on generator: {name}").ok();
    }
    Ok(Outcome {
        code: if ok { EXIT_OK } else { EXIT_VIOLATED },
        text,
        json: json!({
            "valid": ok,
            "pairing": format_rational(&pairing),
            "generators_checked": cone.len(),
            "negative_generator": first_bad,
        }),
    })
}

fn run_paper(claims: &[u8], seed: u64) -> Result<Outcome, Failure> {
    if let Some(bad) = claims.iter().find(|c| **c == 0 || **c > CLAIM_COUNT) {
        return Err(Failure::arg(format!(
            "unknown claim {bad}; claims are 1..={CLAIM_COUNT}"
        )));
    }
    let config = PaperConfig {
        claims: (!claims.is_empty()).then(|| claims.iter().copied().collect::<BTreeSet<u8>>()),
        seed,
        ..PaperConfig::default()
    };
    let reports = verify_paper_with(&config);
    let all = reports.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &reports {
        writeln!(
            text,
            "[{}] claim {:>2}: {} ({})",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.witness
        )
        .ok();
    }
    writeln!(
        text,
        "{}/{} claims passed",
        reports.iter().filter(|r| r.passed).count(),
        reports.len()
    )
    .ok();
    Ok(Outcome {
        code: if all { EXIT_OK } else { EXIT_VIOLATED },
        text,
        json: json!({ "passed": all, "seed": seed, "claims": reports }),
    })
}

fn run_sample(n: usize, count: usize, seed: u64) -> Result<Outcome, Failure> {
    let samples = sample_gs(n, seed, count)?;
    let mut text = String::new();
    for (i, v) in samples.iter().enumerate() {
        writeln!(text, "# sample {i} (seed {seed})").ok();
        text.push_str(&valuation_to_text(v));
    }
    Ok(Outcome {
        code: EXIT_OK,
        text,
        json: json!({ "seed": seed, "samples": samples.iter().map(valuation_to_json).collect::<Vec<_>>() }),
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::Check { property, file } => run_check(*property, file),
        Command::Tree { file, set, all } => run_tree(file, set, *all),
        Command::Sum { u, v, alpha, beta } => run_sum(u, v, alpha, beta),
        Command::Matroid(MatroidCommand::Enumerate(args)) => run_enumerate(args),
        Command::Cone(ConeCommand::Decompose { file, n }) => run_decompose(file, *n),
        Command::Cone(ConeCommand::VerifyCertificate { cert, valuation }) => {
            run_verify_certificate(cert, valuation)
        }
        Command::Paper(PaperCommand::Verify { claims }) => run_paper(claims, seed),
        Command::Sample { n, count } => run_sample(*n, *count, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_out = cli.json || cli.format == Format::Json;
    match run(&cli) {
        Ok(outcome) => {
            if !cli.quiet {
                if json_out {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&outcome.json).expect("JSON values serialize")
                    );
                } else {
                    print!("{}", outcome.text);
                }
            }
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(EXIT_INPUT)
        }
    }
}
