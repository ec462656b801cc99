mod args;
mod commands;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, OutputArgs, Sink};
use commands::Output;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] sfb_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(sfb_core::Error::Domain(_) | sfb_core::Error::InvalidInput(_)) => 2,
            CliError::Core(_) => 3,
        }
    }
}

fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Profile(a)
        | Command::KernelDiag(a)
        | Command::BallDiag(a)
        | Command::Spectrum(a)
        | Command::Shannon(a) => &a.output,
        Command::NearDiag(a) => &a.output,
        Command::Verify(a) => &a.output,
    }
}

fn dispatch(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Profile(a) => commands::profile(a),
        Command::KernelDiag(a) => commands::kernel_diag(a),
        Command::BallDiag(a) => commands::ball_diag(a),
        Command::Spectrum(a) => commands::spectrum_cmd(a),
        Command::Shannon(a) => commands::shannon(a),
        Command::NearDiag(a) => commands::near_diag(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let out = output_args(&cli.command);
    let sink = out.sink();
    if let Sink::File(path) = &sink {
        // Fail before any work when the destination cannot be created.
        std::fs::File::create(path)?;
    }
    let output = match out.threads()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(|| dispatch(&cli.command))?,
        None => dispatch(&cli.command)?,
    };
    match sink {
        Sink::Stdout => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(output.text.as_bytes())?;
            stdout.flush()?;
        }
        Sink::File(path) => std::fs::write(path, &output.text)?,
    }
    Ok(output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) if output.failed.is_empty() => ExitCode::SUCCESS,
        Ok(output) => {
            eprintln!("sfb: acceptance criteria failed: {:?}", output.failed);
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("sfb: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
