mod cli;
mod commands;
mod report;

use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use crate::cli::Cli;
use crate::report::{Failure, Loader, RunReport, Status, REPORT_VERSION};

fn report(subcommand: &str, argv: &[String], files: Loader, parameters: Value, outcome: Result<report::Done, Failure>) -> RunReport {
    let (status, result, error, consumed) = match outcome {
        Ok(d) => (d.status, d.result, None, d.consumed),
        Err(f) => (f.status, Value::Null, Some(f.error), f.consumed),
    };
    RunReport {
        report_version: REPORT_VERSION,
        subcommand: subcommand.to_string(),
        argv: argv.to_vec(),
        inputs: files.inputs(argv),
        parameters,
        outcome: status,
        exit_code: status.exit_code(),
        radius_consumed: consumed,
        result,
        error,
    }
}

/// Runs one invocation. `Err` carries help or version text for clap to print.
fn execute(argv: &[String]) -> Result<RunReport, clap::Error> {
    let parsed = Cli::try_parse_from(std::iter::once("cubegirth".to_string()).chain(argv.iter().cloned()));
    let cli = match parsed {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => return Err(e),
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => return Err(e),
        Err(e) => {
            let message = e.render().to_string();
            return Ok(report("-", argv, Loader::default(), Value::Null, Err(Failure::input(message.trim_end()))));
        }
    };
    let mut files = Loader::default();
    match (&cli.verify_report, &cli.command) {
        (Some(path), None) => {
            let outcome = verify(path, &mut files);
            Ok(report("verify-report", argv, files, json!({ "report": path }), outcome))
        }
        (Some(_), Some(_)) => Ok(report(
            "-",
            argv,
            files,
            Value::Null,
            Err(Failure::input("`--verify-report` replays a report and takes no subcommand")),
        )),
        (None, None) => Ok(report("-", argv, files, Value::Null, Err(Failure::input("no subcommand given")))),
        (None, Some(command)) => {
            let parameters = json!({
                "seed": cli.seed,
                "radius": cli.radius,
                "max_word_len": cli.max_word_len,
                "args": command,
            });
            let outcome = commands::run(&cli, command, &mut files);
            Ok(report(command.name(), argv, files, parameters, outcome))
        }
    }
}

/// Reruns the recorded arguments and compares the fresh report with the saved one.
fn verify(path: &std::path::Path, files: &mut Loader) -> Result<report::Done, Failure> {
    let name = path.display().to_string();
    let text = files.read(path)?;
    let saved: RunReport =
        serde_json::from_str(&text).map_err(|e| Failure::parse(&name, e.line(), e.column(), e.to_string()))?;
    if saved.report_version != REPORT_VERSION {
        return Err(Failure::input(format!("unsupported report version {}", saved.report_version)));
    }
    if saved.argv.iter().any(|a| a == "--verify-report" || a.starts_with("--verify-report=")) {
        return Err(Failure::input("the saved report is itself a replay"));
    }
    let fresh = execute(&saved.argv).map_err(|e| Failure::input(e.to_string()))?;
    let (a, b) = (serde_json::to_value(&saved).unwrap(), serde_json::to_value(&fresh).unwrap());
    let differing: Vec<&String> = a
        .as_object()
        .unwrap()
        .iter()
        .filter(|(k, v)| b.get(k.as_str()) != Some(v))
        .map(|(k, _)| k)
        .collect();
    let status = if differing.is_empty() { Status::Pass } else { Status::Fail };
    Ok(report::Done::new(
        status,
        json!({
            "replayed": saved.subcommand,
            "saved_outcome": saved.outcome,
            "fresh_outcome": fresh.outcome,
            "identical": differing.is_empty(),
            "differing_fields": differing,
        }),
    ))
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let r = match execute(&argv) {
        Ok(r) => r,
        Err(e) => e.exit(),
    };
    println!("{}", r.to_json());
    let summary = match &r.error {
        Some(e) => format!(": {}", e["message"].as_str().unwrap_or("")),
        None => String::new(),
    };
    eprintln!(
        "{} {:?} (exit {}){} in {:.3}s",
        r.subcommand,
        r.outcome,
        r.exit_code,
        summary,
        start.elapsed().as_secs_f64()
    );
    log::debug!("inputs digest {}", r.inputs.digest);
    std::process::exit(r.exit_code);
}
