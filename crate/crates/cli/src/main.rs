use clap::Parser;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use zmtforge::execute::options_echo;
use zmtforge::schema::{Artifacts, BUNDLE_SCHEMA, BUNDLE_VERSION};
use zmtforge::{emit_report, execute, parse_bundle, parse_problem, verify_bundle, CertificateBundle, CliError, Format, RunOptions, Task};

#[derive(Parser, Debug)]
#[command(name = "zmtforge", version, about = "Certificate-producing commutative algebra tasks and their checker")]
struct Cli {
    /// task to run; `verify` re-checks a saved bundle
    #[arg(value_enum)]
    task: Task,
    /// problem file (JSON), or a bundle for `verify`
    input: PathBuf,
    /// write the JSON bundle here
    #[arg(long)]
    out: Option<PathBuf>,
    /// monomial order: degrevlex or lex
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    degree_cap: Option<u64>,
    #[arg(long)]
    exp_cap: Option<u32>,
    #[arg(long)]
    branch_cap: Option<u32>,
    /// keep intermediate values and timings in the bundle
    #[arg(long)]
    trace: bool,
    /// format of the report on stdout
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn write_atomic(path: &Path, body: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, path)
}

fn run(cli: &Cli) -> Result<CertificateBundle, CliError> {
    let text = std::fs::read_to_string(&cli.input)?;
    if cli.task == Task::Verify {
        let checked = parse_bundle(&text)?;
        let verdicts = verify_bundle(&checked)?;
        return Ok(CertificateBundle {
            schema: BUNDLE_SCHEMA.into(),
            version: BUNDLE_VERSION,
            engine_version: env!("CARGO_PKG_VERSION").into(),
            task: Task::Verify,
            options: options_echo(&checked.problem),
            artifacts: Artifacts::Verify { checked_task: checked.task.name().into() },
            problem: checked.problem,
            verdicts,
            timing_ms: None,
        });
    }
    let problem = parse_problem(&text)?;
    let opts = RunOptions {
        degree_cap: cli.degree_cap,
        exp_cap: cli.exp_cap,
        branch_cap: cli.branch_cap,
        order: cli.order.clone(),
        trace: cli.trace,
    };
    execute(&problem, cli.task, &opts)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(bundle) => {
            let written = match &cli.out {
                Some(p) => emit_report(&bundle, Format::Json).and_then(|j| Ok(write_atomic(p, &j)?)),
                None => Ok(()),
            };
            let report = emit_report(&bundle, cli.format);
            match written.and(report) {
                Ok(r) => print!("{r}"),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code() as u8);
                }
            }
            if bundle.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
