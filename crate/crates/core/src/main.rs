use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lorentz_flow::commands::{simulate, transform, Transformation};
use lorentz_flow::scenario::{parse_scenario, write_csv};
use lorentz_flow::verify::run_suite;
use lorentz_flow::{Axis, Coupling, Error, FieldTensor};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_ABORT: u8 = 3;

#[derive(Parser)]
#[command(name = "lorentz-flow", version, about = "Lorentz-force integration and field-tensor checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario file and write the trajectory as CSV.
    Simulate {
        file: PathBuf,
        /// CSV destination; stdout when omitted (the summary then goes to stderr).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Keep every Nth state; overrides the scenario's output_stride.
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Transform E and B into another frame and compare the field invariants.
    Transform(TransformArgs),
    /// Run the seeded property suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Also write the report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TransformArgs {
    /// Electric field as `E1,E2,E3`.
    #[arg(long = "e", value_parser = parse_triple, allow_hyphen_values = true, default_value = "0,0,0")]
    e: [f64; 3],
    /// Magnetic field as `B1,B2,B3`.
    #[arg(long = "b", value_parser = parse_triple, allow_hyphen_values = true, default_value = "0,0,0")]
    b: [f64; 3],
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    k: f64,
    #[arg(long, requires = "rapidity", conflicts_with = "rotation_axis", value_parser = clap::value_parser!(u8).range(1..=3))]
    boost_axis: Option<u8>,
    #[arg(long, allow_hyphen_values = true, requires = "boost_axis")]
    rapidity: Option<f64>,
    #[arg(long, requires = "angle", value_parser = clap::value_parser!(u8).range(1..=3))]
    rotation_axis: Option<u8>,
    /// Rotation angle in radians.
    #[arg(long, allow_hyphen_values = true, requires = "rotation_axis")]
    angle: Option<f64>,
}

fn parse_triple(raw: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got `{raw}`"));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(parts) {
        let v: f64 = part.trim().parse().map_err(|_| format!("not a number: `{part}`"))?;
        if !v.is_finite() {
            return Err(format!("not finite: `{part}`"));
        }
        *slot = v;
    }
    Ok(out)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Abort { .. } | Error::Evaluation { .. } => EXIT_ABORT,
        Error::Parse { .. } | Error::Config(_) | Error::Domain(_) => EXIT_CONFIG,
        Error::Structural { .. } => EXIT_VERIFY_FAILED,
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn run_simulate(file: PathBuf, output: Option<PathBuf>, stride: Option<usize>) -> ExitCode {
    let text = match fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_CONFIG, format!("cannot read {}: {e}", file.display())),
    };
    let mut scenario = match parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => return fail(exit_code_for(&e), e),
    };
    if let Some(stride) = stride {
        if stride == 0 {
            return fail(EXIT_CONFIG, "--stride must be at least 1");
        }
        scenario.output_stride = stride;
    }
    let (traj, summary) = match simulate(&scenario) {
        Ok(r) => r,
        Err(e) => return fail(exit_code_for(&e), e),
    };

    let written = match &output {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            write_csv(&mut w, &traj)?;
            w.flush()
        }),
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            write_csv(&mut w, &traj).and_then(|_| w.flush())
        }
    };
    if let Err(e) = written {
        return fail(EXIT_CONFIG, format!("cannot write trajectory: {e}"));
    }
    match output {
        Some(_) => print!("{summary}"),
        None => eprint!("{summary}"),
    }
    ExitCode::SUCCESS
}

fn run_transform(args: TransformArgs) -> ExitCode {
    let axis = |a: u8| Axis::try_from(a as usize);
    let transformation = match (args.boost_axis, args.rapidity, args.rotation_axis, args.angle) {
        (Some(a), Some(rapidity), None, None) => axis(a).map(|axis| Transformation::Boost { axis, rapidity }),
        (None, None, Some(a), Some(angle)) => axis(a).map(|axis| Transformation::Rotation { axis, angle }),
        (None, None, None, None) => Ok(Transformation::Identity),
        _ => Err(Error::Config("give either --boost-axis/--rapidity or --rotation-axis/--angle".into())),
    };
    let transformation = match transformation {
        Ok(t) => t,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    match transform(&FieldTensor::new(args.e, args.b), Coupling(args.k), transformation) {
        Ok(report) => {
            print!("{report}");
            if report.invariants_preserved() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY_FAILED)
            }
        }
        Err(e) => fail(exit_code_for(&e), e),
    }
}

fn run_verify(seed: u64, trials: u64, output: Option<PathBuf>) -> ExitCode {
    let report = run_suite(seed, trials as usize);
    let text = report.to_string();
    print!("{text}");
    if let Some(path) = output {
        if let Err(e) = fs::write(&path, &text) {
            return fail(EXIT_CONFIG, format!("cannot write {}: {e}", path.display()));
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { file, output, stride } => run_simulate(file, output, stride),
        Command::Transform(args) => run_transform(args),
        Command::Verify { seed, trials, output } => run_verify(seed, trials, output),
    }
}
