//! qcong: exact verification of q-supercongruences.

mod casefile;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use qcong_core::checker::suites::{suite, SuiteOptions, SUITES};
use qcong_core::checker::{
    check_fraction, evaluate_congruence, CaseBody, CaseSpec, CheckOptions, Lemma, Strength,
};
use qcong_core::padic::{check_padic, ClaimId};
use qcong_core::qterms::TermId;

use crate::report::{describe, run_all, write_report, Summary};

#[derive(Parser)]
#[command(
    name = "qcong",
    version,
    about = "Exact verification of q-supercongruences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads (defaults to QCONG_JOBS, then the number of CPUs)
    #[arg(long, global = true, env = "QCONG_JOBS")]
    jobs: Option<usize>,

    /// Write a JSON-lines report to this path
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Include full remainder polynomials in failure witnesses
    #[arg(long, global = true)]
    verbose_witness: bool,

    /// Comma-separated values of n to run instead of the defaults
    #[arg(long, global = true, value_delimiter = ',')]
    n: Option<Vec<i64>>,

    /// Parameter overrides such as `d=3,r=2`
    #[arg(long, global = true)]
    params: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one case file
    Verify { file: PathBuf },
    /// Run a shipped suite
    Suite { name: String },
    /// List suites, built-in terms, lemmas and classical claims
    List,
    /// Find the largest exponent of each modulus factor that still divides the difference
    Probe {
        file: PathBuf,
        #[arg(long)]
        max_exponent: u32,
    },
}

fn overrides(cli: &Cli) -> anyhow::Result<Vec<(String, i64)>> {
    match &cli.params {
        Some(text) => {
            casefile::parse_assignments(text).map_err(|e| anyhow::anyhow!("--params: {e}"))
        }
        None => Ok(Vec::new()),
    }
}

fn load(path: &Path, cli: &Cli) -> anyhow::Result<Vec<CaseSpec>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let base =
        casefile::parse_case(&text).with_context(|| format!("parsing {}", path.display()))?;
    let ns = cli.n.clone().unwrap_or_else(|| vec![base.params.n]);
    let extra = overrides(cli)?;
    let mut cases = Vec::new();
    for n in ns {
        let mut case = base.clone();
        case.params.n = n;
        for (k, v) in &extra {
            case.params.set(k, *v);
        }
        if cli.n.is_some() {
            case.id = format!("{}[n={n}]", base.id);
        }
        case.validate()
            .with_context(|| format!("{}: parameters {}", case.id, case.params))?;
        cases.push(case);
    }
    Ok(cases)
}

fn run(cli: &Cli, cases: &[CaseSpec]) -> anyhow::Result<ExitCode> {
    let jobs = cli.jobs.unwrap_or(0);
    let opts = CheckOptions {
        verbose_witness: cli.verbose_witness,
    };
    let records = run_all(cases, jobs, opts)?;
    for r in &records {
        println!("{}", describe(r));
    }
    let summary = Summary::of(&records);
    println!(
        "{} cases: {} passed, {} failed, {} errors",
        summary.total, summary.passed, summary.failed, summary.errors
    );
    if let Some(path) = &cli.report {
        let mut file =
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_report(&mut file, &records)?;
    }
    Ok(if summary.errors > 0 {
        ExitCode::from(2)
    } else if summary.failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn list() {
    println!("suites:");
    for s in SUITES {
        println!("  {s}");
    }
    println!("terms:");
    for id in TermId::ALL {
        println!("  {:<14} {}", id.name(), id.source());
    }
    println!("lemmas:");
    for l in Lemma::ALL {
        println!("  {l}");
    }
    println!("claims:");
    for c in ClaimId::ALL {
        println!("  {:<11} mod p^{}", c.name(), c.exponent());
    }
}

fn probe(case: &CaseSpec, max: u32, opts: CheckOptions) -> anyhow::Result<()> {
    match &case.body {
        CaseBody::Congruence(spec) => {
            let sides = evaluate_congruence(spec, &case.params)?;
            let diff = sides.lhs.sub(&sides.rhs);
            println!("{} modulo {}", case.id, sides.modulus);
            let verdict = check_fraction(&diff, &sides.modulus, opts);
            if let Strength::Cyclotomic { factors } = verdict.strength {
                for f in factors {
                    let shown = match f.achieved {
                        Some(a) if a < max as i64 => a.to_string(),
                        _ => format!(">= {max}"),
                    };
                    println!(
                        "  {}: divides to exponent {shown} (stated {})",
                        f.factor, f.required
                    );
                }
            }
        }
        CaseBody::Padic(claim) => {
            let c = claim.claim(case.params.n as u64)?;
            let v = check_padic(&c);
            let achieved = match v.strength {
                Strength::Padic { achieved, .. } => achieved,
                _ => None,
            };
            let shown = match achieved {
                Some(a) if a < max as i64 => a.to_string(),
                _ => format!(">= {max}"),
            };
            println!(
                "{}: holds modulo {}^{shown} (stated {})",
                case.id, c.p, c.exponent
            );
        }
        _ => bail!("probe needs a congruence or p-adic case"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::List => {
            list();
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file } => load(file, &cli).and_then(|cases| run(&cli, &cases)),
        Command::Suite { name } => overrides(&cli)
            .and_then(|params| {
                let opts = SuiteOptions {
                    n: cli.n.clone(),
                    params,
                };
                Ok(suite(name, &opts)?)
            })
            .and_then(|cases| run(&cli, &cases)),
        Command::Probe { file, max_exponent } => load(file, &cli).and_then(|cases| {
            let opts = CheckOptions {
                verbose_witness: cli.verbose_witness,
            };
            for case in &cases {
                probe(case, *max_exponent, opts)?;
            }
            Ok(ExitCode::SUCCESS)
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
