//! Command-line surface: build, verify, tabulate, and export the Hecke-side
//! computations for a given prime.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
//! error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hecke_core::algebra::Vertex;
use hecke_core::assembler::{full_ext_table, gs_ledger, HeckeContext, SixTermReport};
use hecke_core::characters::enumerate_characters;
use hecke_core::finitegroup::endomorphism_match;
use hecke_core::linalg::PrimeField;
use hecke_core::verify::{run_audits, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "hecke",
    version,
    about = "Mod-p Hecke algebra toolkit for SL2(Q_p): dimension tables, audits, and consistency ledgers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Ext^1 dimension table over the full Hecke algebra
    Table(CommonArgs),
    /// Run every structural audit and report pass/fail per audit
    Verify(VerifyArgs),
    /// Six-term report for one pair of supersingular modules
    Ext(ExtArgs),
    /// Cross-validate the vertex algebra against the permutation module of SL2(F_p)
    EndoCheck(EndoArgs),
    /// Group-side consistency ledger: computed bounds against reference dimensions
    Ledger(CommonArgs),
    /// List the characters of the full Hecke algebra
    Characters(CommonArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// The prime p (an odd prime >= 5)
    #[arg(long)]
    p: u64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Admit p = 3 for exploration (excluded from the supported range)
    #[arg(long)]
    allow_p3: bool,
    /// Number of worker threads for table sweeps
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Test hook: perturb one vertex-algebra structure constant "i,j,k"
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

#[derive(Args)]
struct ExtArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Source module spec, e.g. M(0,1)
    source: String,
    /// Target module spec, e.g. M(1,1)
    target: String,
}

#[derive(Args)]
struct EndoArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which vertex algebra to compare against
    #[arg(long, default_value_t = 0)]
    vertex: u8,
}

enum CliError {
    Usage(String),
    Io(String),
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Verification(_) => ExitCode::from(1),
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Io(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Verification(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Table(args) => cmd_table(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Ext(args) => cmd_ext(&args),
        Command::EndoCheck(args) => cmd_endo_check(&args),
        Command::Ledger(args) => cmd_ledger(&args),
        Command::Characters(args) => cmd_characters(&args),
    }
}

fn resolve_field(args: &CommonArgs) -> Result<PrimeField, CliError> {
    configure_workers(args.jobs);
    let result = if args.allow_p3 {
        PrimeField::new_allowing_p3(args.p)
    } else {
        PrimeField::new(args.p)
    };
    let field =
        result.map_err(|e| CliError::Usage(format!("p must be an odd prime >= 5 ({e})")))?;
    if field.p() == 3 {
        eprintln!("warning: p = 3 is outside the supported range; results are exploratory");
    }
    Ok(field)
}

fn configure_workers(jobs: Option<usize>) {
    if let Some(n) = jobs {
        // Ignore failure if a pool already exists; only the first call wins.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn emit(args: &CommonArgs, content: String) -> Result<(), CliError> {
    match &args.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn six_term_csv_row(rep: &SixTermReport) -> String {
    format!(
        "M({},{}),M({},{}),{},{},{},{},{},{},{}\n",
        rep.source.0,
        rep.source.1,
        rep.target.0,
        rep.target.1,
        rep.hom_full,
        rep.hom_vertex[0],
        rep.hom_vertex[1],
        rep.hom_edge,
        rep.ext_vertex[0],
        rep.ext_vertex[1],
        rep.ext_full
    )
}

fn cmd_table(args: &CommonArgs) -> Result<(), CliError> {
    let field = resolve_field(args)?;
    let ctx = HeckeContext::new(&field);
    let table = full_ext_table(&ctx);
    let entries = table.in_block_entries();
    let content = match args.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = entries.iter().map(|r| r.to_json()).collect();
            let doc = serde_json::json!({ "p": field.p(), "rows": rows });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        Format::Csv => {
            let mut s = String::from(
                "source,target,hom_full,hom_v0,hom_v1,hom_edge,ext_v0,ext_v1,ext_full\n",
            );
            for rep in &entries {
                s.push_str(&six_term_csv_row(rep));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "Ext^1 dimension table over the full Hecke algebra, p = {}\n\
                 (in-block pairs; every off-block entry vanishes)\n\n",
                field.p()
            );
            let _ = writeln!(
                s,
                "{:>3} {:>8} {:>8} {:>9} {:>7} {:>7} {:>9} {:>7} {:>7} {:>6}",
                "r",
                "source",
                "target",
                "hom_full",
                "hom_v0",
                "hom_v1",
                "hom_edge",
                "ext_v0",
                "ext_v1",
                "ext^1"
            );
            for rep in &entries {
                let _ = writeln!(
                    s,
                    "{:>3} {:>8} {:>8} {:>9} {:>7} {:>7} {:>9} {:>7} {:>7} {:>6}",
                    rep.source.1,
                    format!("M({},{})", rep.source.0, rep.source.1),
                    format!("M({},{})", rep.target.0, rep.target.1),
                    rep.hom_full,
                    rep.hom_vertex[0],
                    rep.hom_vertex[1],
                    rep.hom_edge,
                    rep.ext_vertex[0],
                    rep.ext_vertex[1],
                    rep.ext_full
                );
            }
            s
        }
    };
    emit(args, content)
}

fn parse_fault(spec: &str) -> Result<(usize, usize, usize), CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage("fault spec grammar: i,j,k".into()));
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage("fault spec grammar: i,j,k".into()))
    };
    Ok((parse(parts[0])?, parse(parts[1])?, parse(parts[2])?))
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let field = resolve_field(&args.common)?;
    let options = VerifyOptions {
        inject_fault: args.inject_fault.as_deref().map(parse_fault).transpose()?,
    };
    let report = run_audits(&field, &options);
    let content = match args.common.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&report.to_json()).expect("serializable")
        ),
        Format::Csv => {
            let mut s = String::from("audit,passed,witness\n");
            for o in &report.outcomes {
                let _ = writeln!(
                    s,
                    "{},{},\"{}\"",
                    o.name,
                    o.passed,
                    o.witness.as_deref().unwrap_or("")
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for o in &report.outcomes {
                match &o.witness {
                    None => {
                        let _ = writeln!(s, "[PASS] {}", o.name);
                    }
                    Some(w) => {
                        let _ = writeln!(s, "[FAIL] {}: {}", o.name, w);
                    }
                }
            }
            let passed = report.outcomes.iter().filter(|o| o.passed).count();
            let _ = writeln!(
                s,
                "{passed}/{} audits passed (p = {})",
                report.outcomes.len(),
                report.p
            );
            s
        }
    };
    emit(&args.common, content)?;
    if report.all_passed() {
        Ok(())
    } else {
        let first = report.first_failure().expect("some audit failed");
        Err(CliError::Verification(format!(
            "audit '{}' failed: {}",
            first.name,
            first.witness.as_deref().unwrap_or("no witness")
        )))
    }
}

fn parse_module_spec(spec: &str, p: u64) -> Result<(u8, u64), CliError> {
    let grammar = || {
        CliError::Usage(format!(
            "module spec grammar: M(i,r) with i in {{0,1}} and 0 <= r <= {} (got {spec:?})",
            p - 1
        ))
    };
    let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix("M(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(grammar)?;
    let (i_str, r_str) = inner.split_once(',').ok_or_else(grammar)?;
    let i: u8 = i_str.parse().map_err(|_| grammar())?;
    let r: u64 = r_str.parse().map_err(|_| grammar())?;
    if i > 1 || r > p - 1 {
        return Err(grammar());
    }
    Ok((i, r))
}

fn cmd_ext(args: &ExtArgs) -> Result<(), CliError> {
    let field = resolve_field(&args.common)?;
    let a = parse_module_spec(&args.source, field.p())?;
    let b = parse_module_spec(&args.target, field.p())?;
    let ctx = HeckeContext::new(&field);
    let report = ctx
        .six_term_ext(a, b)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let class = ctx
        .classify(a, b)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let content = match args.common.format {
        Format::Json => {
            let mut doc = report.to_json();
            doc["p"] = serde_json::json!(field.p());
            doc["rule"] = serde_json::json!(class.tag());
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        Format::Csv => {
            let mut s = String::from(
                "source,target,hom_full,hom_v0,hom_v1,hom_edge,ext_v0,ext_v1,ext_full\n",
            );
            s.push_str(&six_term_csv_row(&report));
            s
        }
        Format::Text => {
            let mut s = format!(
                "pair: M({},{}) -> M({},{})   (p = {})\n",
                a.0,
                a.1,
                b.0,
                b.1,
                field.p()
            );
            let _ = writeln!(s, "hom_full = {}", report.hom_full);
            let _ = writeln!(s, "hom_v0   = {}", report.hom_vertex[0]);
            let _ = writeln!(s, "hom_v1   = {}", report.hom_vertex[1]);
            let _ = writeln!(s, "hom_edge = {}", report.hom_edge);
            let _ = writeln!(s, "ext_v0   = {}", report.ext_vertex[0]);
            let _ = writeln!(s, "ext_v1   = {}", report.ext_vertex[1]);
            let _ = writeln!(s, "dim Ext^1 = {} ({})", report.ext_full, class.tag());
            s
        }
    };
    emit(&args.common, content)
}

fn cmd_endo_check(args: &EndoArgs) -> Result<(), CliError> {
    let field = resolve_field(&args.common)?;
    let vertex = Vertex::from_index(args.vertex).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = endomorphism_match(&field, vertex);
    let content = match args.common.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&report.to_json()).expect("serializable")
        ),
        Format::Csv => {
            let mut s = String::from("left,right,matched\n");
            for c in &report.products {
                let _ = writeln!(s, "{},{},{}", c.left, c.right, c.matched);
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "Endomorphism match, p = {}, vertex {}\n",
                report.p, report.vertex
            );
            let _ = writeln!(
                s,
                "commutant dimension: {} (expected {})",
                report.commutant_dim, report.expected_dim
            );
            let _ = writeln!(s, "reflection-block sign: {:+}", report.reflection_sign);
            let _ = writeln!(s, "products checked: {}", report.products.len());
            let _ = writeln!(s, "mismatches: {}", report.mismatches.len());
            for &(i, j) in report.mismatches.iter().take(5) {
                let _ = writeln!(s, "  product ({i}, {j}) disagrees");
            }
            let _ = writeln!(
                s,
                "result: {}",
                if report.matched {
                    "MATCHED"
                } else {
                    "MISMATCH"
                }
            );
            s
        }
    };
    emit(&args.common, content)?;
    if report.matched {
        Ok(())
    } else {
        Err(CliError::Verification(
            "endomorphism match failed".to_string(),
        ))
    }
}

fn cmd_ledger(args: &CommonArgs) -> Result<(), CliError> {
    let field = resolve_field(args)?;
    let ctx = HeckeContext::new(&field);
    let rows = gs_ledger(&ctx);
    let content = match args.format {
        Format::Json => {
            let doc = serde_json::json!({
                "p": field.p(),
                "rows": rows.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        Format::Csv => {
            let mut s = String::from("tau,sigma,hecke_ext,r1_hom,lower,upper,expected,verdict\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "pi({},{}),pi({},{}),{},{},{},{},{},{}",
                    r.tau.0,
                    r.tau.1,
                    r.sigma.0,
                    r.sigma.1,
                    r.hecke_ext,
                    r.r1_hom,
                    r.lower,
                    r.upper,
                    r.expected,
                    if r.consistent {
                        "consistent"
                    } else {
                        "inconsistent"
                    }
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!("Group-side extension ledger, p = {}\n\n", field.p());
            let _ = writeln!(
                s,
                "{:>8} {:>8} {:>9} {:>6} {:>8} {:>8} {:>12}",
                "tau", "sigma", "hecke_ext", "r1_hom", "bounds", "expected", "verdict"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>8} {:>8} {:>9} {:>6} {:>8} {:>8} {:>12}",
                    format!("pi({},{})", r.tau.0, r.tau.1),
                    format!("pi({},{})", r.sigma.0, r.sigma.1),
                    r.hecke_ext,
                    r.r1_hom,
                    format!("[{},{}]", r.lower, r.upper),
                    r.expected,
                    if r.consistent {
                        "consistent"
                    } else {
                        "INCONSISTENT"
                    }
                );
            }
            s
        }
    };
    emit(args, content)?;
    if rows.iter().all(|r| r.consistent) {
        Ok(())
    } else {
        Err(CliError::Verification(
            "ledger has inconsistent rows".into(),
        ))
    }
}

fn cmd_characters(args: &CommonArgs) -> Result<(), CliError> {
    let field = resolve_field(args)?;
    let chars = enumerate_characters(&field);
    let content = match args.format {
        Format::Json => {
            let doc = serde_json::json!({
                "p": field.p(),
                "characters": chars.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        Format::Csv => {
            let mut s = String::from("lambda_exponent,support,s0_value,s1_value\n");
            for c in &chars {
                let _ = writeln!(
                    s,
                    "{},\"{}\",{},{}",
                    c.lambda().exponent(),
                    c.support().names().join("+"),
                    c.s_value(0),
                    c.s_value(1)
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!("Characters of the full Hecke algebra, p = {}\n", field.p());
            let _ = writeln!(
                s,
                "({} characters: 4 with trivial torus part, {} others)\n",
                chars.len(),
                field.p() - 2
            );
            for c in &chars {
                let _ = writeln!(
                    s,
                    "{:<14} torus exponent {:>2}, s-values ({}, {})",
                    format!("{c}"),
                    c.lambda().exponent(),
                    c.s_value(0),
                    c.s_value(1)
                );
            }
            s
        }
    };
    emit(args, content)
}
