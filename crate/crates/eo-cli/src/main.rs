mod render;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eo_core::strata_orth::{CdClass, OrthCase, SourceCase};
use eo_core::unitary_dd::Behavior;
use eo_core::{QpCase, Splitness};

use report::{CliError, CliResult, Report, Suite, VerifyOptions};

/// Ekedahl-Oort strata of orthogonal and unitary Shimura varieties.
#[derive(Parser)]
#[command(name = "eo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Table,
    Json,
    Dot,
}

#[derive(Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// EO catalog and Hasse diagram of the orthogonal Shimura variety for SO(n,2).
    Orth(OrthArgs),
    /// Images of EO strata under the natural embeddings.
    Embed {
        #[command(subcommand)]
        target: EmbedTarget,
    },
    /// Newton strata, slope multisets and p-ranks of the Kuga-Satake abelian variety.
    Newton(NewtonArgs),
    /// Run the consistency sweeps.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum EmbedTarget {
    /// SO(n-1,2) into SO(n,2).
    Orth(OrthArgs),
    /// U(n,1) into U(n+1,1).
    Unitary(UnitaryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Split,
    NonsplitI,
    NonsplitIi,
}

#[derive(Clone, Copy, ValueEnum)]
enum CdArg {
    #[value(name = "1,1")]
    OneOne,
    #[value(name = "u,u")]
    UU,
    #[value(name = "1,u")]
    OneU,
    #[value(name = "u,1")]
    UOne,
}

#[derive(Clone, Copy, ValueEnum)]
enum AmbientArg {
    Split,
    Nonsplit,
}

#[derive(Args)]
struct OrthArgs {
    #[arg(long)]
    n: usize,
    /// Source splitness for n odd.
    #[arg(long, value_enum)]
    source: Option<SourceArg>,
    /// Class of (c, d) for n even; fixes the ambient splitness at p.
    #[arg(long, value_enum, conflicts_with = "ambient")]
    cd: Option<CdArg>,
    /// Ambient splitness for n even when (c, d) is not given.
    #[arg(long, value_enum)]
    ambient: Option<AmbientArg>,
    #[arg(long, default_value_t = 5)]
    p: u32,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args)]
struct UnitaryArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "inert", required_unless_present = "inert")]
    split: bool,
    #[arg(long)]
    inert: bool,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args)]
struct NewtonArgs {
    #[arg(long)]
    n: usize,
    /// Split quadratic space over Q_p for n even (the default).
    #[arg(long, conflicts_with = "even_nonsplit")]
    even_split: bool,
    #[arg(long)]
    even_nonsplit: bool,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Frames,
    Zip,
    Clifford,
    Unitary,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    #[arg(long, env = "EO_SEED", default_value_t = 0)]
    seed: u64,
    /// Restrict the sweeps to one n.
    #[arg(long)]
    n: Option<usize>,
    /// Restrict the sweeps to one prime.
    #[arg(long)]
    p: Option<u32>,
    /// Gram constant for the frame checks instead of the standard ones.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<i64>,
    /// Random group elements per frame condition.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[command(flatten)]
    format: FormatArg,
}

/// Largest n accepted by commands that enumerate the Weyl group.
const MAX_ORTH_N: usize = 12;

fn orth_case(a: &OrthArgs) -> CliResult<OrthCase> {
    if a.n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    if a.n > MAX_ORTH_N {
        return Err(CliError::usage(format!("--n must be at most {MAX_ORTH_N}")));
    }
    if a.n % 2 == 1 {
        if a.cd.is_some() || a.ambient.is_some() {
            return Err(CliError::usage("--cd and --ambient apply to even n; use --source for odd n"));
        }
        let source = match a.source.unwrap_or(SourceArg::Split) {
            SourceArg::Split => SourceCase::Split,
            SourceArg::NonsplitI => SourceCase::NonsplitI,
            SourceArg::NonsplitIi => SourceCase::NonsplitII,
        };
        let mut case = OrthCase::odd(a.n, source)?;
        case.p = Some(a.p);
        return Ok(case);
    }
    if a.source.is_some() {
        return Err(CliError::usage("--source applies to odd n; use --cd or --ambient for even n"));
    }
    if let Some(cd) = a.cd {
        let cd = match cd {
            CdArg::OneOne => CdClass::OneOne,
            CdArg::UU => CdClass::UU,
            CdArg::OneU => CdClass::OneU,
            CdArg::UOne => CdClass::UOne,
        };
        return Ok(OrthCase::even(a.n, a.p, cd)?);
    }
    let ambient = match a.ambient.unwrap_or(AmbientArg::Split) {
        AmbientArg::Split => Splitness::Split,
        AmbientArg::Nonsplit => Splitness::Nonsplit,
    };
    let mut case = OrthCase::even_ambient(a.n, ambient)?;
    case.p = Some(a.p);
    Ok(case)
}

fn check_prime(p: u32) -> CliResult<()> {
    if p < 3 || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
        return Err(CliError::usage(format!("p = {p} is not an odd prime")));
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<(Report, Format)> {
    Ok(match cli.command {
        Command::Orth(a) => {
            check_prime(a.p)?;
            (report::orth(&orth_case(&a)?)?, a.format.format)
        }
        Command::Embed { target: EmbedTarget::Orth(a) } => {
            check_prime(a.p)?;
            (report::embed_orth(&orth_case(&a)?)?, a.format.format)
        }
        Command::Embed { target: EmbedTarget::Unitary(a) } => {
            if a.n == 0 {
                return Err(CliError::usage("--n must be at least 1"));
            }
            let behavior = if a.split { Behavior::Split } else { Behavior::Inert };
            (report::embed_unitary(a.n, behavior)?, a.format.format)
        }
        Command::Newton(a) => {
            if a.n == 0 || a.n > 10 {
                return Err(CliError::usage("--n must lie in 1..=10"));
            }
            if a.n % 2 == 1 && (a.even_split || a.even_nonsplit) {
                return Err(CliError::usage("--even-split and --even-nonsplit apply to even n"));
            }
            (report::newton(a.n, QpCase::for_n(a.n, !a.even_nonsplit))?, a.format.format)
        }
        Command::Verify(a) => {
            if let Some(p) = a.p {
                check_prime(p)?;
            }
            if a.n == Some(0) {
                return Err(CliError::usage("--n must be at least 1"));
            }
            if a.samples == 0 {
                return Err(CliError::usage("--samples must be positive"));
            }
            let suites = match a.suite {
                SuiteArg::Frames => vec![Suite::Frames],
                SuiteArg::Zip => vec![Suite::Zip],
                SuiteArg::Clifford => vec![Suite::Clifford],
                SuiteArg::Unitary => vec![Suite::Unitary],
                SuiteArg::All => vec![Suite::Frames, Suite::Zip, Suite::Clifford, Suite::Unitary],
            };
            let opts = VerifyOptions { seed: a.seed, n: a.n, p: a.p, c: a.c, samples: a.samples };
            (report::verify(&suites, &opts)?, a.format.format)
        }
    })
}

fn emit(report: &Report, format: Format) -> CliResult<()> {
    let text = match format {
        Format::Table => render::render_table(report),
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Dot => render::render_dot(report)?,
    };
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError { code: 4, message: e.to_string() })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(report, format)| {
        emit(&report, format)?;
        Ok(report.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
