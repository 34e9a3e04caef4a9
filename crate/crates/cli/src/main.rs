use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sg_nft::NftError;
use sg_nft_cli::commands::{error_object, exit_code, run, Command};
use sg_nft_cli::config::{load_config, Format};
use sg_nft_cli::report::emit;

/// Direct nonlinear Fourier transforms of sine-Gordon half-line data.
#[derive(Parser, Debug)]
#[command(name = "sg-nft", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; falls back to SG_NFT_THREADS.
    #[arg(long)]
    threads: Option<usize>,
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, NftError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("SG_NFT_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| NftError::Parameter(format!("SG_NFT_THREADS = {v:?} is not a thread count"))),
        _ => Ok(None),
    }
}

fn execute(cli: Cli) -> Result<(), NftError> {
    if let Some(n) = threads(cli.threads)? {
        if n == 0 {
            return Err(NftError::Parameter("thread count must be positive".to_string()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| NftError::Parameter(format!("cannot start the worker pool: {e}")))?;
    }
    let cfg = load_config(&cli.config)?;
    let base = cli.config.parent().map(PathBuf::from).unwrap_or_default();
    let out = cli.out.or_else(|| cfg.output.as_ref().and_then(|o| o.path.clone()));
    let format = cli
        .format
        .or_else(|| cfg.output.as_ref().and_then(|o| o.format))
        .or_else(|| match out.as_ref().and_then(|p| p.extension()) {
            Some(ext) if ext == "csv" => Some(Format::Csv),
            _ => None,
        })
        .unwrap_or(Format::Json);
    let report = run(cli.command, &cfg, &base)?;
    emit(&report.render(format)?, out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_object(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
