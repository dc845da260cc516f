use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use g2dtg::arith::factorize;
use g2dtg::filters::{bhk_gate, KernelStrip, Outcome};
use g2dtg::fusion::FusionConstraint;
use g2dtg::group_data::FamilyKind;
use g2dtg::par::Execution;
use g2dtg::pipeline::{Case, Pipeline, XFilter, XSpec};
use g2dtg::report::{emit, emit_tables, Format};
use g2dtg::{Error, Result};

const UNDETERMINED: u8 = 2;

#[derive(Parser)]
#[command(name = "g2dtg", version, about = "Nonexistence certificates for distance-transitive graphs of G2(q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Subfield,
    Ree,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Case {
        match c {
            CaseArg::Subfield => FamilyKind::Subfield,
            CaseArg::Ree => FamilyKind::Ree,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the gate pipeline and emit one certificate per (n, X).
    Analyze {
        #[arg(long, value_enum)]
        case: CaseArg,
        /// `n` or `min..max` (inclusive).
        #[arg(long)]
        n: String,
        /// `all`, or items `k`, `k,graph`, `k,nograph`.
        #[arg(long, num_args = 1.., default_value = "all")]
        x: Vec<String>,
        /// Report the externally assumed small case as undetermined.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest n accepted.
        #[arg(long, default_value_t = g2dtg::pipeline::DEFAULT_MAX_N)]
        max_n: u32,
        /// Primes removed from the kernel-prime sets: `small`, `outer`, or a comma list.
        #[arg(long, default_value = "small")]
        kernel_strip: String,
        /// Disable the rayon path.
        #[arg(long)]
        sequential: bool,
    },
    /// Check the suborbit tables at the given parameter values.
    VerifyTables {
        #[arg(long, value_enum)]
        case: CaseArg,
        /// Comma list of r (subfield) or q (ree) values, or `lo..hi`.
        #[arg(long)]
        params: String,
        #[arg(long)]
        symbolic: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Factor a positive integer.
    Factor { value: String },
    /// Evaluate the distance-regular diameter bound for the Ree action.
    Bound {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x_order: u32,
    },
}

fn parse_n_range(s: &str) -> Result<(u32, u32)> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| Error::Usage(format!("bad --n value {s:?}; expected n or min..max")))
    };
    match s.split_once("..") {
        Some((a, b)) => Ok((num(a)?, num(b.trim_start_matches('='))?)),
        None => num(s).map(|n| (n, n)),
    }
}

fn parse_big(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::Usage(format!("{s:?} is not a decimal integer")))
}

fn parse_x(items: &[String]) -> Result<XFilter> {
    if items.iter().any(|s| s == "all") {
        if items.len() > 1 {
            return Err(Error::Usage("--x all cannot be combined with other items".into()));
        }
        return Ok(XFilter::All);
    }
    items.iter().map(|s| s.parse::<XSpec>()).collect::<Result<_>>().map(XFilter::Only)
}

fn parse_strip(s: &str) -> Result<KernelStrip> {
    match s {
        "small" => Ok(KernelStrip::Small),
        "outer" => Ok(KernelStrip::OuterOrder),
        _ => s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Usage(format!("bad --kernel-strip item {t:?}")))
            })
            .collect::<Result<_>>()
            .map(KernelStrip::Custom),
    }
}

fn write_out(bytes: &[u8], out: Option<&PathBuf>) -> Result<()> {
    let res = match out {
        Some(path) => std::fs::write(path, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    };
    res.map_err(|e| Error::Usage(format!("cannot write output: {e}")))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Analyze {
            case,
            n,
            x,
            strict,
            format,
            out,
            max_n,
            kernel_strip,
            sequential,
        } => {
            let (lo, hi) = parse_n_range(&n)?;
            let mut pipeline = Pipeline::default();
            pipeline.options.strict = strict;
            pipeline.options.max_n = max_n;
            pipeline.options.kernel_strip = parse_strip(&kernel_strip)?;
            if sequential {
                pipeline.options.execution = Execution::Sequential;
            }
            let report = pipeline.analyze(case.into(), lo..=hi, &parse_x(&x)?)?;
            write_out(&emit(&report, format.into()), out.as_ref())?;
            Ok(if report.all_no_dtg() { 0 } else { UNDETERMINED })
        }
        Command::VerifyTables {
            case,
            params,
            symbolic,
            format,
        } => {
            let pipeline = Pipeline::default();
            let case = Case::from(case);
            let values = match params.split_once("..") {
                Some((a, b)) => pipeline.params_between(case, &parse_big(a)?, &parse_big(b)?),
                None => params.split(',').map(parse_big).collect::<Result<_>>()?,
            };
            let report = pipeline.verify_tables(case, &values, symbolic)?;
            write_out(&emit_tables(&report, format.into()), None)?;
            Ok(if report.ok() { 0 } else { UNDETERMINED })
        }
        Command::Factor { value } => {
            let n = parse_big(&value)?;
            let f = factorize(&n)?;
            println!("{n} = {}", if f.is_empty() { "1".to_string() } else { f.to_string() });
            Ok(0)
        }
        Command::Bound { case, n, x_order } => {
            if matches!(case, CaseArg::Subfield) {
                return Err(Error::Usage("the diameter bound is evaluated for --case ree only".into()));
            }
            if x_order == 0 {
                return Err(Error::Usage("--x-order must be positive".into()));
            }
            let table = g2dtg::tables::SuborbitTable::build(FamilyKind::Ree);
            let ct = table.instantiate(&table.family.params(n)?)?;
            let v = bhk_gate(&ct, FusionConstraint::new(x_order));
            println!("gate: {}  verdict: {}", v.name, v.outcome);
            for (k, w) in &v.witnesses {
                println!("    {k} = {w}");
            }
            Ok(if v.outcome == Outcome::Excludes { 0 } else { UNDETERMINED })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
