//! Command-line front end for the `leggett` binary.
//!
//! Exit codes: 0 when every report is satisfied, 1 when any is violated,
//! 2 on bad input (unknown flags or values, out-of-range numbers, I/O).

pub mod args;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::Parser;
use leggett_core::hvt::{
    hvt_sweep, malus_product_model, ConstantModel, HvtRow, Sign, SubensembleModel,
};
use leggett_core::inequality::{leggett_check, quantum_sweep_with_offset, AverageTriple};

use args::{to_radians, CheckArgs, Cli, Command, Format, HvtArgs, ModelArg, OutputArgs, SweepArgs};
use output::{write_check_csv, write_json, write_records_csv, CheckRecord, Record};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug)]
enum Failure {
    Input(String),
}

impl From<leggett_core::Error> for Failure {
    fn from(e: leggett_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(format!("i/o error: {e}"))
    }
}

/// Parses `argv` and runs the selected command, writing results to `stdout`
/// (unless `--output` is given) and diagnostics to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let line = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{line}");
            return EXIT_INPUT;
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => sweep(&a, stdout),
        Command::Check(a) => check(&a, stdout),
        Command::Hvt(a) => hvt(&a, stdout),
        Command::Verify => verify(stdout),
    };
    match result {
        Ok(all_satisfied) if all_satisfied => EXIT_OK,
        Ok(_) => EXIT_VIOLATED,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn with_sink(
    out: &OutputArgs,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), Failure> {
    match &out.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Input(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            f(stdout)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn emit_records(
    out: &OutputArgs,
    records: &[Record],
    stdout: &mut dyn Write,
) -> Result<bool, Failure> {
    with_sink(out, stdout, |w| match out.format.unwrap_or(Format::Csv) {
        Format::Csv => write_records_csv(w, records),
        Format::Json => write_json(w, records),
    })?;
    Ok(records.iter().all(|r| r.satisfied))
}

fn sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<bool, Failure> {
    let offset = to_radians(a.offset, a.degrees);
    let rows = quantum_sweep_with_offset(a.state.into(), a.grid, offset)?;
    let records: Vec<Record> = rows.iter().map(Record::from).collect();
    emit_records(&a.out, &records, stdout)
}

fn check(a: &CheckArgs, stdout: &mut dyn Write) -> Result<bool, Failure> {
    let triple = AverageTriple::new(a.av_a, a.av_b, a.av_ab)?;
    let report = leggett_check(&triple, a.tolerance)?;
    let record = CheckRecord::new(a.av_a, a.av_b, &report);
    with_sink(&a.out, stdout, |w| {
        match a.out.format.unwrap_or(Format::Json) {
            Format::Csv => write_check_csv(w, &record),
            Format::Json => write_json(w, &[record]),
        }
    })?;
    Ok(report.satisfied)
}

fn hvt(a: &HvtArgs, stdout: &mut dyn Write) -> Result<bool, Failure> {
    let offset = to_radians(a.offset, a.degrees);
    let rows = match a.model {
        ModelArg::Malus => {
            let model = malus_product_model(to_radians(a.u, a.degrees), to_radians(a.v, a.degrees));
            run_model(&model, a, offset)?
        }
        ModelArg::Constant => {
            let model = ConstantModel {
                a: Sign::from_bool(a.sign_a > 0),
                b: Sign::from_bool(a.sign_b > 0),
            };
            run_model(&model, a, offset)?
        }
    };
    let records: Vec<Record> = rows.iter().map(Record::from).collect();
    emit_records(&a.out, &records, stdout)
}

fn run_model<M: SubensembleModel>(
    model: &M,
    a: &HvtArgs,
    offset: f64,
) -> Result<Vec<HvtRow>, Failure> {
    Ok(hvt_sweep(model, a.grid, offset, a.samples, a.seed)?)
}

fn verify(stdout: &mut dyn Write) -> Result<bool, Failure> {
    let outcomes = verify::run_suite();
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        writeln!(stdout, "[{tag}] {}: {}", o.name, o.detail)?;
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    writeln!(stdout, "{passed}/{} checks passed", outcomes.len())?;
    Ok(passed == outcomes.len())
}
