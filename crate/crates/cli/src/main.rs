use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use qwvnb::qop::{classify_with, hs_norm, op_norm};
use qwvnb::spectrum::{default_probe_grid, probe_agreement, spherical_spectrum_with};
use qwvnb::wvnb::{
    decompose_hs, decompose_op_norm, rows_to_csv, truncation_study, verify, Curve, Decomposition, Mode, OpDescriptor,
    TruncationConfig,
};
use qwvnb::{Error, Execution, QMatrix, Tolerances, UnitImaginary};

#[derive(Parser, Debug)]
#[command(name = "qwvnb", version, about = "Spectra and diagonal-plus-small splittings of quaternionic matrices")]
struct Cli {
    /// Multiply every numerical tolerance by this factor.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classification flags and norms of a matrix file.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-serialize the parsed matrix to this path.
        #[arg(long)]
        canonical: Option<PathBuf>,
    },
    /// Spherical spectrum as eigenspheres.
    Spectrum {
        file: PathBuf,
        #[arg(long, default_value = "1,0,0")]
        axis: String,
        /// Write the representatives as CSV (alpha,beta,mult).
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Cross-check against the Δ_q singularity oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a normal matrix as U diag(d) U* + K and audit the result.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value = "op")]
        mode: String,
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long, default_value = "1,0,0")]
        axis: String,
        /// Decomposition output file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-audit a stored decomposition against its matrix.
    Verify {
        file: PathBuf,
        decomposition: PathBuf,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence table over growing finite sections.
    Truncate {
        descriptor: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        sizes: Vec<usize>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value = "op")]
        mode: String,
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long, default_value = "1,0,0")]
        axis: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Rank(_) | Error::Numerical(_) | Error::Consistency(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("report serialization");
    s.push('\n');
    s
}

fn parse_axis(s: &str) -> Result<UnitImaginary, Failure> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Usage(format!("bad axis '{s}': {e}")))?;
    match parts[..] {
        [x, y, z] => Ok(UnitImaginary::from_axis(x, y, z)?),
        _ => Err(Failure::Usage(format!("axis needs three components, got '{s}'"))),
    }
}

fn parse_mode(s: &str) -> Result<Mode, Failure> {
    Ok(s.parse::<Mode>()?)
}

fn load_matrix(path: &Path) -> Result<QMatrix, Failure> {
    Ok(QMatrix::from_json(&read(path)?)?)
}

fn load_curve(path: Option<&Path>, mode: Mode) -> Result<Option<Curve>, Failure> {
    match (mode, path) {
        (Mode::Hs, None) => Err(Failure::Usage("--mode hs needs --curve".into())),
        (_, Some(p)) => {
            let c: Curve = serde_json::from_str(&read(p)?).map_err(Error::from)?;
            Ok(Some(c))
        }
        (Mode::Op, None) => Ok(None),
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: usize,
    self_adjoint: bool,
    anti_self_adjoint: bool,
    normal: bool,
    unitary: bool,
    op_norm: f64,
    hs_norm: f64,
}

fn analyze(file: &Path, out: Option<&Path>, canonical: Option<&Path>, tols: &Tolerances) -> Outcome {
    let t = load_matrix(file)?;
    if let Some(c) = canonical {
        emit(Some(c), &t.to_json())?;
    }
    let flags = classify_with(&t, tols.structure)?;
    let report = AnalyzeReport {
        n: t.n(),
        self_adjoint: flags.self_adjoint,
        anti_self_adjoint: flags.anti_self_adjoint,
        normal: flags.normal,
        unitary: flags.unitary,
        op_norm: op_norm(&t)?,
        hs_norm: hs_norm(&t),
    };
    emit(out, &json_line(&report))
}

fn spectrum(file: &Path, axis: &str, plot: Option<&Path>, oracle: bool, out: Option<&Path>, tols: &Tolerances) -> Outcome {
    let t = load_matrix(file)?;
    let axis = parse_axis(axis)?;
    let report = spherical_spectrum_with(&t, axis, tols.cluster)?;
    if let Some(p) = plot {
        let mut csv = String::from("alpha,beta,mult\n");
        for s in &report.spheres {
            csv.push_str(&format!("{},{},{}\n", s.alpha, s.beta, s.mult));
        }
        emit(Some(p), &csv)?;
    }
    emit(out, &json_line(&report))?;
    if oracle {
        let grid = default_probe_grid(&report, 1e-3);
        let agreement = probe_agreement(&t, &report, &grid, tols, Execution::Parallel)?;
        let bad = agreement.mismatches();
        if !bad.is_empty() {
            return Err(Failure::Verification(format!(
                "Δ_q oracle disagrees at {} of {} probe points",
                bad.len(),
                grid.len()
            )));
        }
        eprintln!("oracle: {} probe points agree", grid.len());
    }
    Ok(())
}

#[derive(Serialize)]
struct DecomposeSummary<'a> {
    epsilon: f64,
    mode: Mode,
    norms: qwvnb::wvnb::Norms,
    verify: &'a qwvnb::wvnb::VerifyReport,
}

fn audit(n: &QMatrix, dec: &Decomposition, mode: Mode, out: Option<&Path>) -> Outcome {
    let report = verify(n, dec, mode);
    let summary = DecomposeSummary {
        epsilon: dec.epsilon,
        mode,
        norms: dec.norms,
        verify: &report,
    };
    emit(out, &json_line(&summary))?;
    if !report.passed {
        let names: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        return Err(Failure::Verification(format!("audit failed: {}", names.join(", "))));
    }
    Ok(())
}

fn decompose(file: &Path, epsilon: f64, mode: &str, curve: Option<&Path>, axis: &str, out: Option<&Path>) -> Outcome {
    let n = load_matrix(file)?;
    let mode = parse_mode(mode)?;
    let axis = parse_axis(axis)?;
    let curve = load_curve(curve, mode)?;
    let dec = match (mode, &curve) {
        (Mode::Hs, Some(c)) => decompose_hs(&n, epsilon, c, axis)?,
        _ => decompose_op_norm(&n, epsilon, axis)?,
    };
    if let Some(p) = out {
        emit(Some(p), &json_line(&dec))?;
    }
    audit(&n, &dec, mode, None)
}

fn verify_cmd(file: &Path, dec_path: &Path, mode: Option<&str>, out: Option<&Path>) -> Outcome {
    let n = load_matrix(file)?;
    let dec = Decomposition::from_json(&read(dec_path)?)?;
    let mode = match mode {
        Some(m) => parse_mode(m)?,
        None => dec.mode,
    };
    audit(&n, &dec, mode, out)
}

#[allow(clippy::too_many_arguments)]
fn truncate(
    descriptor: &Path,
    sizes: &[usize],
    epsilon: f64,
    mode: &str,
    curve: Option<&Path>,
    axis: &str,
    out: Option<&Path>,
) -> Outcome {
    let desc = OpDescriptor::from_json(&read(descriptor)?)?;
    if sizes.is_empty() {
        return Err(Failure::Usage("--sizes must list at least one size".into()));
    }
    let mode = parse_mode(mode)?;
    let cfg = TruncationConfig {
        epsilon,
        mode,
        curve: load_curve(curve, mode)?,
        axis: parse_axis(axis)?,
        exec: Execution::Parallel,
    };
    let rows = truncation_study(&desc, sizes, &cfg)?;
    emit(out, &rows_to_csv(&rows))
}

fn run(cli: Cli) -> Outcome {
    if !(cli.tol_scale > 0.0 && cli.tol_scale.is_finite()) {
        return Err(Failure::Usage(format!("--tol-scale must be positive, got {}", cli.tol_scale)));
    }
    let tols = Tolerances::default().scaled(cli.tol_scale);
    match &cli.command {
        Command::Analyze { file, out, canonical } => analyze(file, out.as_deref(), canonical.as_deref(), &tols),
        Command::Spectrum {
            file,
            axis,
            plot,
            oracle,
            out,
        } => spectrum(file, axis, plot.as_deref(), *oracle, out.as_deref(), &tols),
        Command::Decompose {
            file,
            epsilon,
            mode,
            curve,
            axis,
            out,
        } => decompose(file, *epsilon, mode, curve.as_deref(), axis, out.as_deref()),
        Command::Verify {
            file,
            decomposition,
            mode,
            out,
        } => verify_cmd(file, decomposition, mode.as_deref(), out.as_deref()),
        Command::Truncate {
            descriptor,
            sizes,
            epsilon,
            mode,
            curve,
            axis,
            out,
        } => truncate(descriptor, sizes, *epsilon, mode, curve.as_deref(), axis, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
