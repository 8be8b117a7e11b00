//! Command-line front end: every library capability behind a subcommand,
//! with deterministic text or JSON output (data on stdout, diagnostics on
//! stderr; exit code 0 on success, 1 on domain errors, 2 on usage errors).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pquest::field::Prime;
use pquest::gates::{GateFamily, GateTable};
use pquest::interrogate::{builtin_scenario, run_scenario, Scenario, StepReport};
use pquest::oa::{max_oa_columns, OrthogonalArray, StrengthCheck};
use pquest::pauli::{mub_bases, PauliLabel};
use pquest::structure::{
    commuting_partner_exponent, degrees_of_freedom, maximal_commuting_families, question_count,
};

#[derive(Parser)]
#[command(
    name = "pquest",
    version,
    about = "p-ary question structures: gates, orthogonal arrays, MUBs, commuting families, and interrogation scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled outcomes
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the canonical gate family, print one table, or check a file
    Gates {
        /// Prime modulus
        #[arg(long)]
        p: u64,
        /// Print every gate of the canonical family
        #[arg(long)]
        enumerate: bool,
        /// Print the truth table of the linear gate with this index
        #[arg(long, value_name = "I")]
        table: Option<u64>,
        /// Check a gate-table file (p lines of p space-separated digits)
        #[arg(long, value_name = "FILE")]
        check: Option<PathBuf>,
    },
    /// Build the combined orthogonal array or verify one from CSV
    Oa {
        /// Build the p^2 x (p+1) array of the canonical gate family
        #[arg(long, value_name = "P")]
        build: Option<u64>,
        /// Verify FILE against declared LEVELS and STRENGTH
        #[arg(long, num_args = 3, value_names = ["FILE", "LEVELS", "STRENGTH"])]
        verify: Option<Vec<String>>,
    },
    /// Print the p + 1 mutually unbiased bases
    Mub {
        #[arg(long)]
        p: u64,
    },
    /// List every maximal family of mutually commuting composite operators
    Families {
        #[arg(long)]
        p: u64,
    },
    /// The unique n making A (x) B^m and C (x) D^n commute
    Partner {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
    },
    /// Determining-set size and degrees of freedom
    Dof {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        bodies: u32,
    },
    /// Run interrogation scenarios
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Run a scenario file (JSON)
    Run {
        file: PathBuf,
        /// Override the file's seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a built-in worked scenario
    Paper {
        /// One of: single5, composite5, bell2
        #[arg(long)]
        which: String,
        /// Forced outcome of the first interrogation
        #[arg(long, default_value_t = 0)]
        m: u64,
        /// Forced outcome of the second interrogation
        #[arg(long, default_value_t = 0)]
        n: u64,
    },
}

enum CliError {
    /// Bad arguments or inputs the user can fix: exit 2.
    Usage(String),
    /// Well-formed request that the domain rejects: exit 1.
    Domain(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> CliError {
        CliError::Usage(e.to_string())
    }

    fn domain(e: impl std::fmt::Display) -> CliError {
        CliError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    // die quietly when stdout is a closed pipe (e.g. piped into head)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_prime(p: u64) -> Result<Prime, CliError> {
    Prime::new(p).map_err(|_| CliError::Usage(format!("prime required, got {p}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let format = cli.common.format;
    match cli.command {
        Command::Gates {
            p,
            enumerate,
            table,
            check,
        } => cmd_gates(parse_prime(p)?, enumerate, table, check, format),
        Command::Oa { build, verify } => cmd_oa(build, verify, format),
        Command::Mub { p } => cmd_mub(parse_prime(p)?, format),
        Command::Families { p } => cmd_families(parse_prime(p)?, format),
        Command::Partner { p, a, b, m, c, d } => {
            cmd_partner(parse_prime(p)?, &a, &b, m, &c, &d, format)
        }
        Command::Dof { p, bodies } => cmd_dof(parse_prime(p)?, bodies, format),
        Command::Scenario { action } => cmd_scenario(action, cli.common.seed, format),
    }
}

/// Three-column truth table, one row per input pair.
fn render_truth_table(g: &GateTable, name: &str) -> String {
    let n = g.order() as u64;
    let mut out = format!("Q_a  Q_b  {name}\n");
    for a in 0..n {
        for b in 0..n {
            out.push_str(&format!("{a:<4} {b:<4} {}\n", g.get(a, b)));
        }
    }
    out
}

fn gate_rows(g: &GateTable) -> Vec<Vec<u64>> {
    let n = g.order() as u64;
    (0..n)
        .map(|a| (0..n).map(|b| g.get(a, b)).collect())
        .collect()
}

fn cmd_gates(
    p: Prime,
    enumerate: bool,
    table: Option<u64>,
    check: Option<PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    if let Some(path) = check {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let gate = GateTable::parse(p, &text).map_err(CliError::domain)?;
        let admissible = gate.is_latin();
        let family = GateFamily::canonical(p).map_err(CliError::domain)?;
        let equivalent_to: Option<u64> = family
            .gates()
            .iter()
            .enumerate()
            .find(|(_, g)| gate.equivalent_to(g).unwrap_or(false))
            .map(|(i, _)| i as u64 + 1);
        let orthogonal: Vec<bool> = family
            .gates()
            .iter()
            .map(|g| gate.is_orthogonal_to(g).unwrap_or(false))
            .collect();
        match format {
            Format::Json => println!(
                "{}",
                json!({
                    "p": p.get(),
                    "admissible": admissible,
                    "equivalent_to_linear": equivalent_to,
                    "orthogonal_to_linear": orthogonal,
                })
            ),
            Format::Text => {
                println!(
                    "admissible (Latin square): {}",
                    if admissible { "yes" } else { "no" }
                );
                match equivalent_to {
                    Some(i) => println!("equivalent to linear gate i={i}"),
                    None => println!("equivalent to linear gate: none"),
                }
                for (i, ok) in orthogonal.iter().enumerate() {
                    println!(
                        "orthogonal to linear gate i={}: {}",
                        i + 1,
                        if *ok { "yes" } else { "no" }
                    );
                }
            }
        }
        return Ok(());
    }
    if let Some(i) = table {
        let gate = GateTable::linear(p, p.felt(i)).map_err(CliError::usage)?;
        match format {
            Format::Json => println!(
                "{}",
                json!({"p": p.get(), "index": i, "table": gate_rows(&gate)})
            ),
            Format::Text => print!("{}", render_truth_table(&gate, &format!("Q_a+{i}xQ_b"))),
        }
        return Ok(());
    }
    if enumerate {
        let family = GateFamily::canonical(p).map_err(CliError::domain)?;
        match format {
            Format::Json => {
                let gates: Vec<_> = family
                    .gates()
                    .iter()
                    .enumerate()
                    .map(|(i, g)| json!({"index": i as u64 + 1, "table": gate_rows(g)}))
                    .collect();
                println!("{}", json!({"p": p.get(), "gates": gates}));
            }
            Format::Text => {
                for (i, g) in family.gates().iter().enumerate() {
                    if i > 0 {
                        println!();
                    }
                    print!("{}", render_truth_table(g, &format!("Q_a+{}xQ_b", i + 1)));
                }
            }
        }
        return Ok(());
    }
    Err(CliError::Usage(
        "choose one of --enumerate, --table I, --check FILE".into(),
    ))
}

fn cmd_oa(
    build: Option<u64>,
    verify: Option<Vec<String>>,
    format: Format,
) -> Result<(), CliError> {
    if let Some(p) = build {
        let p = parse_prime(p)?;
        let family = GateFamily::canonical(p).map_err(CliError::domain)?;
        let oa = OrthogonalArray::from_gates(&family).map_err(CliError::domain)?;
        match format {
            Format::Json => {
                let rows: Vec<Vec<u8>> = (0..oa.rows())
                    .map(|r| (0..oa.cols()).map(|c| oa.get(r, c)).collect())
                    .collect();
                println!(
                    "{}",
                    json!({
                        "rows": oa.rows(),
                        "cols": oa.cols(),
                        "levels": oa.levels(),
                        "strength": oa.strength(),
                        "max_cols": max_oa_columns(p),
                        "data": rows,
                    })
                );
            }
            Format::Text => print!("{}", oa.to_csv()),
        }
        return Ok(());
    }
    if let Some(args) = verify {
        let [file, levels, strength]: [String; 3] = args
            .try_into()
            .map_err(|_| CliError::Usage("--verify needs FILE LEVELS STRENGTH".into()))?;
        let levels: u64 = levels
            .parse()
            .map_err(|_| CliError::Usage(format!("bad level count {levels:?}")))?;
        let strength: u32 = strength
            .parse()
            .map_err(|_| CliError::Usage(format!("bad strength {strength:?}")))?;
        let text = std::fs::read_to_string(&file)
            .map_err(|e| CliError::Usage(format!("{file}: {e}")))?;
        let oa = OrthogonalArray::from_csv(levels, strength, &text).map_err(CliError::domain)?;
        let check = oa.check_strength();
        match format {
            Format::Json => match &check {
                StrengthCheck::Ok { lambda } => {
                    println!("{}", json!({"ok": true, "lambda": lambda}))
                }
                StrengthCheck::Violation { cols, tuple, count } => println!(
                    "{}",
                    json!({"ok": false, "cols": cols, "tuple": tuple, "count": count})
                ),
            },
            Format::Text => match &check {
                StrengthCheck::Ok { lambda } => println!("OK λ={lambda}"),
                StrengthCheck::Violation { cols, tuple, count } => {
                    let cols: Vec<String> = cols.iter().map(|c| c.to_string()).collect();
                    let tuple: Vec<String> = tuple.iter().map(|t| t.to_string()).collect();
                    println!(
                        "FAIL cols=({}) tuple=({})×{count}",
                        cols.join(","),
                        tuple.join(",")
                    );
                }
            },
        }
        return Ok(());
    }
    Err(CliError::Usage(
        "choose one of --build P, --verify FILE LEVELS STRENGTH".into(),
    ))
}

fn cmd_mub(p: Prime, format: Format) -> Result<(), CliError> {
    let labels = PauliLabel::alphabet(p);
    let bases = mub_bases(p);
    let mut max_dev: f64 = 0.0;
    for (i, a) in bases.iter().enumerate() {
        for b in bases.iter().skip(i + 1) {
            for va in a {
                for vb in b {
                    let overlap = pquest::pauli::inner(va, vb).norm_sqr();
                    max_dev = max_dev.max((overlap - 1.0 / p.get() as f64).abs());
                }
            }
        }
    }
    match format {
        Format::Json => {
            let rendered: Vec<_> = labels
                .iter()
                .zip(&bases)
                .map(|(l, basis)| {
                    let vectors: Vec<Vec<[f64; 2]>> = basis
                        .iter()
                        .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                        .collect();
                    json!({"label": l.to_string(), "vectors": vectors})
                })
                .collect();
            println!(
                "{}",
                json!({
                    "p": p.get(),
                    "bases": rendered,
                    "max_unbiasedness_deviation": max_dev,
                })
            );
        }
        Format::Text => {
            println!("{} mutually unbiased bases for p={p}", bases.len());
            for (l, basis) in labels.iter().zip(&bases) {
                println!("\nbasis {l}:");
                for (j, v) in basis.iter().enumerate() {
                    let parts: Vec<String> = v
                        .iter()
                        .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                        .collect();
                    println!("  |{j}>: {}", parts.join("  "));
                }
            }
            println!("\nmax |<a|b>|^2 deviation from 1/{p}: {max_dev:.3e}");
        }
    }
    Ok(())
}

fn cmd_families(p: Prime, format: Format) -> Result<(), CliError> {
    let families = maximal_commuting_families(p);
    match format {
        Format::Json => {
            let rendered: Vec<_> = families
                .iter()
                .map(|family| {
                    let members: Vec<_> = family
                        .iter()
                        .map(|l| {
                            json!({
                                "a": {"x": l.a().x().value(), "z": l.a().z().value()},
                                "b": {"x": l.b().x().value(), "z": l.b().z().value()},
                                "k": l.k().value(),
                                "label": l.to_string(),
                            })
                        })
                        .collect();
                    json!({"size": family.len(), "members": members})
                })
                .collect();
            println!("{}", json!({"p": p.get(), "families": rendered}));
        }
        Format::Text => {
            println!(
                "{} maximal commuting families for p={p} (largest size {})",
                families.len(),
                families.iter().map(Vec::len).max().unwrap_or(0)
            );
            for family in &families {
                let members: Vec<String> = family.iter().map(|l| l.to_string()).collect();
                println!("[{}] {}", family.len(), members.join(", "));
            }
        }
    }
    Ok(())
}

fn cmd_partner(
    p: Prime,
    a: &str,
    b: &str,
    m: u64,
    c: &str,
    d: &str,
    format: Format,
) -> Result<(), CliError> {
    let parse = |s: &str| PauliLabel::parse(p, s).map_err(CliError::usage);
    let (a, b, c, d) = (parse(a)?, parse(b)?, parse(c)?, parse(d)?);
    let n = commuting_partner_exponent(a, b, p.felt(m), c, d).map_err(CliError::domain)?;
    match format {
        Format::Json => println!("{}", json!({"n": n.value()})),
        Format::Text => println!("n={n}"),
    }
    Ok(())
}

fn cmd_dof(p: Prime, bodies: u32, format: Format) -> Result<(), CliError> {
    let questions = question_count(p, bodies).map_err(CliError::usage)?;
    let dof = degrees_of_freedom(p, bodies).map_err(CliError::usage)?;
    match format {
        Format::Json => println!(
            "{}",
            json!({"questions": questions as u64, "dof": dof as u64})
        ),
        Format::Text => println!("questions={questions} dof={dof}"),
    }
    Ok(())
}

fn render_trace_text(reports: &[StepReport]) {
    for report in reports {
        match (&report.question, report.outcome, report.probability) {
            (Some(q), Some(outcome), Some(prob)) => println!(
                "step {}: {q} -> {outcome} (probability {prob:.6}); system info {}",
                report.step, report.system_info
            ),
            _ => println!("initial state; system info {}", report.system_info),
        }
        let known: Vec<String> = report
            .question_info
            .iter()
            .filter(|(_, &v)| v > 0.0)
            .map(|(q, v)| format!("{q}={v}"))
            .collect();
        if !known.is_empty() {
            println!("  question info: {}", known.join(", "));
        }
        for d in &report.derived {
            println!("  derived: {} -> {}", d.question, d.outcome);
        }
    }
}

fn cmd_scenario(action: ScenarioAction, cli_seed: u64, format: Format) -> Result<(), CliError> {
    let scenario: Scenario = match &action {
        ScenarioAction::Run { file, seed } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            let mut sc = Scenario::from_json(&text).map_err(CliError::domain)?;
            if let Some(s) = seed {
                sc.seed = Some(*s);
            } else if sc.seed.is_none() {
                sc.seed = Some(cli_seed);
            }
            sc
        }
        ScenarioAction::Paper { which, m, n } => {
            builtin_scenario(which, *m, *n).map_err(CliError::usage)?
        }
    };
    let (reports, _) = run_scenario(&scenario).map_err(CliError::domain)?;
    match format {
        Format::Json => {
            let value = json!({
                "p": scenario.p.get(),
                "bodies": scenario.bodies,
                "seed": scenario.seed,
                "trace": reports,
            });
            println!("{value}");
        }
        Format::Text => render_trace_text(&reports),
    }
    Ok(())
}
