use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cliffact::io::ModuleDocument;
use cliffact::report::{
    all_pass, all_suite, brackets_suite, commuting_suite, irrep_suite, pati_salam_suite,
    signs_suite, three_actions_suite, Report, SuiteConfig,
};
use cliffact::{CliffordModule, Signature};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "cliffact",
    version,
    about = "Numerical checks for Clifford modules, commuting actions and the Pati-Salam triple"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args, Debug)]
struct Shared {
    /// Residual tolerance (identities exact up to rounding use tol/100).
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random samples per randomized check.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build one irreducible module and check it.
    Irrep {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Sign of the last generator for odd p + q.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true, value_parser = parse_branch)]
        branch: i8,
        /// Write the module as a JSON document.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    #[command(subcommand)]
    Verify(Verify),
    /// Checks for two Clifford algebras acting commutingly on a tensor product.
    Commuting {
        #[arg(long, value_parser = parse_signature)]
        sig1: Signature,
        #[arg(long, value_parser = parse_signature)]
        sig2: Signature,
    },
    /// Three pairwise commuting actions do not close.
    ThreeActions,
    /// The finite spectral triple, both real-structure variants.
    PatiSalam,
    /// Every suite.
    All,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Sign table and spinor structure maps.
    Signs {
        #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u8).range(0..=10))]
        max_n: u8,
    },
    /// so(p,q) brackets, product identity and intertwiners.
    Brackets {
        #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u8).range(0..=10))]
        max_n: u8,
    },
}

fn parse_branch(s: &str) -> Result<i8, String> {
    match s.parse::<i8>() {
        Ok(b @ (1 | -1)) => Ok(b),
        _ => Err(format!("branch must be 1 or -1, got {s:?}")),
    }
}

fn parse_signature(s: &str) -> Result<Signature, String> {
    let (p, q) = s
        .split_once(',')
        .ok_or_else(|| format!("expected p,q, got {s:?}"))?;
    let p: usize = p.trim().parse().map_err(|e| format!("p: {e}"))?;
    let q: usize = q.trim().parse().map_err(|e| format!("q: {e}"))?;
    if p + q > 10 {
        return Err(format!("p + q = {} is above the supported 10", p + q));
    }
    Ok(Signature::new(p, q))
}

/// Exit-code-carrying failure.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<cliffact::Error> for Failure {
    fn from(e: cliffact::Error) -> Self {
        Self::usage(e.to_string())
    }
}

struct Outcome {
    command: String,
    reports: Vec<Report>,
    extra: Option<(&'static str, Value)>,
}

fn execute(cli: &Cli, cfg: &SuiteConfig) -> Result<Outcome, Failure> {
    let (command, reports, extra) = match &cli.command {
        Command::Irrep {
            p,
            q,
            branch,
            export,
        } => {
            if p + q > 10 {
                return Err(Failure::usage(format!(
                    "p + q = {} is above the supported 10",
                    p + q
                )));
            }
            let sig = Signature::new(*p, *q);
            let module = CliffordModule::build_irrep(sig, *branch);
            let doc = ModuleDocument::from_module(&module);
            if let Some(path) = export {
                let text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
                fs::write(path, text + "\n")
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            }
            let extra = (
                "module",
                serde_json::to_value(&doc).expect("plain data serializes"),
            );
            (
                "irrep".to_string(),
                irrep_suite(sig, *branch, cfg),
                Some(extra),
            )
        }
        Command::Verify(Verify::Signs { max_n }) => (
            "verify signs".to_string(),
            signs_suite(usize::from(*max_n), cfg),
            None,
        ),
        Command::Verify(Verify::Brackets { max_n }) => (
            "verify brackets".to_string(),
            brackets_suite(usize::from(*max_n), cfg)?,
            None,
        ),
        Command::Commuting { sig1, sig2 } => (
            "commuting".to_string(),
            commuting_suite(*sig1, *sig2, cfg)?,
            None,
        ),
        Command::ThreeActions => ("three-actions".to_string(), three_actions_suite()?, None),
        Command::PatiSalam => ("pati-salam".to_string(), pati_salam_suite(cfg)?, None),
        Command::All => ("all".to_string(), all_suite(cfg)?, None),
    };
    Ok(Outcome {
        command,
        reports,
        extra,
    })
}

fn render_json(outcome: &Outcome, cfg: &SuiteConfig) -> String {
    let mut doc = json!({
        "command": outcome.command,
        "seed": cfg.seed,
        "tol": cfg.tol,
        "samples": cfg.samples,
        "pass": all_pass(&outcome.reports),
        "reports": outcome.reports,
    });
    if let Some((key, value)) = &outcome.extra {
        doc[*key] = value.clone();
    }
    serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n"
}

fn render_text(outcome: &Outcome) -> String {
    let mut out = String::new();
    for r in &outcome.reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let bound = if r.details.iter().any(|d| d["bound"] == "lower") {
            format!("value {:.3e} > {:.1e}", r.max_residual, r.tolerance)
        } else if r.tolerance > 0.0 {
            format!("residual {:.3e} < {:.1e}", r.max_residual, r.tolerance)
        } else {
            "exact match".to_string()
        };
        out.push_str(&format!("{status}  {:<44} {bound}\n", r.check_name));
        if r.check_name.starts_with("pati-salam signs") {
            let d = &r.details[0];
            let m = &d["measured"];
            out.push_str(&format!(
                "      variant {}{}: signs ({}, {}, {}) matches row s = {}\n",
                d["variant"].as_str().unwrap_or("?"),
                if d["default"] == true {
                    " (default)"
                } else {
                    ""
                },
                m["eps"],
                m["epsPrime"],
                m["epsDoublePrime"],
                m["row"],
            ));
        }
    }
    let failed = outcome.reports.iter().filter(|r| !r.pass).count();
    out.push_str(&format!(
        "{}: {} checks, {} failed\n",
        outcome.command,
        outcome.reports.len(),
        failed
    ));
    out
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let shared = &cli.shared;
    if !(shared.tol.is_finite() && shared.tol > 0.0) {
        return Err(Failure::usage("--tol must be a positive finite number"));
    }
    if shared.samples == 0 {
        return Err(Failure::usage("--samples must be at least 1"));
    }
    let cfg = SuiteConfig {
        tol: shared.tol,
        seed: shared.seed,
        samples: shared.samples,
    };
    let outcome = execute(&cli, &cfg)?;
    let text = match shared.format {
        Format::Json => render_json(&outcome, &cfg),
        Format::Text => render_text(&outcome),
    };
    match &shared.out {
        Some(path) => fs::write(path, &text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::usage(format!("stdout: {e}")))?;
        }
    }
    Ok(all_pass(&outcome.reports))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
