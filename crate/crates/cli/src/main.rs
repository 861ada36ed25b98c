use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use holonomy_core::HolonomyError;

mod phase;

#[derive(Parser, Debug)]
#[command(name = "holonomy", version, about = "Interferometric and Uhlmann mixed-state geometric phases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Both phases and their ratios at a single point.
    Phase {
        #[command(subcommand)]
        scenario: phase::Scenario,
    },
    /// Figure data or a custom sweep as CSV/JSON.
    Sweep(SweepArgs),
    /// Run the built-in self-check suites.
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SweepSource {
    /// Figure number (1-4).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    figure: Option<u8>,
    /// Sweep spec file (key = value lines).
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    source: SweepSource,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long, default_value = "all", value_parser = ["closed-forms", "integrator", "reductions", "orderings", "all"])]
    suite: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub(crate) struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Format {
    Csv,
    Json,
}

/// Failure modes mapped onto exit codes.
pub(crate) enum Failure {
    /// Bad arguments or malformed spec file: exit 2.
    Usage(String),
    /// Well-formed request outside the mathematical domain: exit 3.
    Domain(HolonomyError),
    Io(String),
}

impl From<HolonomyError> for Failure {
    fn from(e: HolonomyError) -> Self {
        Failure::Domain(e)
    }
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Io(e.to_string())),
            _ => Ok(()),
        },
    }
}

fn threads() -> Result<Option<usize>, Failure> {
    match std::env::var("HOLONOMY_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("HOLONOMY_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

/// Integer-valued columns (`k`, `branch_crossing`) become JSON integers.
pub(crate) fn json_cell(key: &str, v: Option<f64>) -> serde_json::Value {
    match v {
        Some(x) if matches!(key, "k" | "branch_crossing") && x.fract() == 0.0 => serde_json::Value::from(x as i64),
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::Null,
    }
}

fn json_objects(table: &holonomy_core::comparator::Table) -> String {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: serde_json::Map<String, serde_json::Value> = table
                .header
                .iter()
                .zip(row)
                .map(|(h, v)| (h.to_string(), json_cell(h, *v)))
                .collect();
            serde_json::Value::Object(obj)
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&rows).expect("json values serialize");
    text.push('\n');
    text
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    use holonomy_core::comparator::{figure_data, run_sweep, sweep_table, SweepSpec};
    let threads = threads()?;
    if let Some(fig) = args.source.figure {
        let table = figure_data(fig, threads)?;
        let text = match args.out.format {
            Format::Csv => table.to_csv(),
            Format::Json => json_objects(&table),
        };
        return emit(&args.out, &text);
    }
    let path = args.source.spec.as_ref().expect("clap requires one source");
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let spec = SweepSpec::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let rows = run_sweep(&spec, threads)?;
    let text = match args.out.format {
        Format::Csv => sweep_table(spec.scenario, &rows).to_csv(),
        Format::Json => {
            let mut t = serde_json::to_string_pretty(&rows).expect("rows serialize");
            t.push('\n');
            t
        }
    };
    emit(&args.out, &text)
}

fn validate(args: &ValidateArgs) -> Result<bool, Failure> {
    use holonomy_core::comparator::validation::{run_suite, Suite};
    let suite: Suite = args.suite.parse().map_err(|e: HolonomyError| Failure::Usage(e.to_string()))?;
    let outcomes = run_suite(suite);
    let text = match args.out.format {
        Format::Csv => {
            let mut t = String::new();
            for o in &outcomes {
                t.push_str(&o.to_string());
                t.push('\n');
            }
            t
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = outcomes
                .iter()
                .map(|o| {
                    serde_json::json!({
                        "name": o.name,
                        "max_residual": if o.max_residual.is_finite() { serde_json::json!(o.max_residual) } else { serde_json::Value::Null },
                        "tolerance": o.tolerance,
                        "passed": o.passed,
                    })
                })
                .collect();
            let mut t = serde_json::to_string_pretty(&rows).expect("json values serialize");
            t.push('\n');
            t
        }
    };
    emit(&args.out, &text)?;
    Ok(outcomes.iter().all(|o| o.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Phase { scenario } => phase::run(scenario).map(|()| true),
        Command::Sweep(args) => sweep(args).map(|()| true),
        Command::Validate(args) => validate(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: usage: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.kind());
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: io: {msg}");
            ExitCode::from(3)
        }
    }
}
