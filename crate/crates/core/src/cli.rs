//! The `cliffload` command line: `synth`, `verify`, `depth` and `vqe`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 size
//! guard exceeded.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::chem::{jw_hamiltonian, parse_fcidump};
use crate::loader::{LadderStyle, LoaderPlan};
use crate::oracle::{verify_circuit, VerifyReport, MAX_ORACLE_QUBITS};
use crate::ortho::{ceil_log2, random_orthonormal, OrthonormalMatrix};
use crate::vqe::{run_vqe, VqeOptions};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cliffload", version, about = "Clifford-loader state preparation circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write circuit.qasm and plan.json for a matrix.
    Synth {
        #[command(flatten)]
        input: MatrixInput,
        #[command(flatten)]
        common: Common,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Simulate the preparation circuit and compare with the determinant oracle.
    Verify {
        #[command(flatten)]
        input: MatrixInput,
        #[command(flatten)]
        common: Common,
        /// Report JSON path; the report always goes to stdout too.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        corrupt_angle: Option<f64>,
    },
    /// Tabulate measured vs analytic two-qubit depth.
    Depth {
        /// Mode counts N.
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
        n: Vec<usize>,
        /// Particle counts d.
        #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
        d: Vec<usize>,
        #[command(flatten)]
        common: Common,
        /// Add a column with adjacent CNOT pairs cancelled.
        #[arg(long)]
        cancel: bool,
        /// CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the L-wise VQE on an FCIDUMP file.
    Vqe {
        fcidump: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        /// Output directory for result.json and trace.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long = "L", default_value_t = 1)]
    l: usize,
    #[arg(long, default_value = "logtree", value_parser = parse_style)]
    ladder: LadderStyle,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct MatrixInput {
    /// Orthonormal matrix JSON: {"rows", "cols", "data" (row-major)}.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Random orthonormal input for N qubits and d particles, as "N,d".
    #[arg(long, value_parser = parse_pair)]
    random: Option<(usize, usize)>,
}

fn parse_style(s: &str) -> std::result::Result<LadderStyle, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected N,d")?;
    Ok((
        a.trim().parse().map_err(|_| format!("bad N {a:?}"))?,
        b.trim().parse().map_err(|_| format!("bad d {b:?}"))?,
    ))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_matrix(input: &MatrixInput, common: &Common) -> Result<OrthonormalMatrix> {
    let l = common.l;
    if l == 0 {
        return Err(Error::Params("--L must be positive".into()));
    }
    match (&input.matrix, input.random) {
        (Some(path), _) => Ok(serde_json::from_str(&read(path)?)?),
        (None, Some((n, d))) => {
            if n % l != 0 || d % l != 0 || d > n {
                return Err(Error::Params(format!("--random {n},{d} is incompatible with L = {l}")));
            }
            random_orthonormal(n / l, d / l, common.seed.unwrap_or(0))
        }
        (None, None) => Err(Error::Params("one of --matrix or --random is required".into())),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::TooLarge { .. } => EXIT_TOO_LARGE,
        _ => EXIT_INPUT,
    }
}

/// `(2d/L)(⌈log₂(N/L)⌉² + (1 + 2 log₂L)⌈log₂(N/L)⌉)`
pub fn analytic_depth(n: usize, d: usize, l: usize) -> f64 {
    let s = ceil_log2(n / l) as f64;
    (2.0 * d as f64 / l as f64) * (s * s + (1.0 + 2.0 * (l as f64).log2()) * s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthRow {
    pub n: usize,
    pub d: usize,
    pub l: usize,
    pub measured: usize,
    pub analytic: f64,
    pub baseline: usize,
    pub ratio: f64,
    pub cancelled: Option<usize>,
}

/// Depth of the preparation circuit for a seeded random `(N/L)×(d/L)`
/// matrix. Every Givens gate is emitted even at zero angle, so the depth
/// does not depend on the matrix.
pub fn depth_row(n: usize, d: usize, l: usize, style: LadderStyle, cancel: bool) -> Result<DepthRow> {
    let m = random_orthonormal(n / l, d / l, 0)?;
    let c = LoaderPlan::new(&m, l)?.circuit(style)?;
    let measured = c.two_qubit_depth();
    Ok(DepthRow {
        n,
        d,
        l,
        measured,
        analytic: analytic_depth(n, d, l),
        baseline: 2 * n,
        ratio: measured as f64 / (2 * n) as f64,
        cancelled: cancel.then(|| c.cancel_adjacent_cnots().two_qubit_depth()),
    })
}

pub fn depth_csv(rows: &[DepthRow], cancel: bool) -> String {
    let mut out = String::from("N,d,L,measured,analytic,baseline,ratio");
    out.push_str(if cancel { ",cancelled\n" } else { "\n" });
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.6}",
            r.n, r.d, r.l, r.measured, r.analytic, r.baseline, r.ratio
        ));
        if let Some(c) = r.cancelled {
            out.push_str(&format!(",{c}"));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    n_qubits: usize,
    #[serde(rename = "L")]
    l: usize,
    passed: bool,
    #[serde(flatten)]
    report: &'a VerifyReport,
}

fn synth(input: &MatrixInput, common: &Common, out: &Path, stdout: &mut dyn Write) -> Result<i32> {
    let m = load_matrix(input, common)?;
    let plan = LoaderPlan::new(&m, common.l)?;
    let c = plan.circuit(common.ladder)?;
    std::fs::create_dir_all(out).map_err(|source| Error::Io {
        path: out.display().to_string(),
        source,
    })?;
    write(&out.join("circuit.qasm"), &c.to_qasm())?;
    write(&out.join("plan.json"), &(serde_json::to_string_pretty(&plan)? + "\n"))?;
    writeln!(
        stdout,
        "{} qubits, {} loaders, {} gates, {} CNOTs, two-qubit depth {}",
        c.n_qubits(),
        plan.columns.len(),
        c.len(),
        c.cnot_count(),
        c.two_qubit_depth()
    )
    .ok();
    Ok(EXIT_OK)
}

fn verify(
    input: &MatrixInput,
    common: &Common,
    out: Option<&Path>,
    corrupt: Option<f64>,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let m = load_matrix(input, common)?;
    let n_qubits = common.l * m.rows();
    if n_qubits > MAX_ORACLE_QUBITS {
        return Err(Error::TooLarge {
            what: "oracle verification",
            limit: MAX_ORACLE_QUBITS,
            got: n_qubits,
        });
    }
    let mut plan = LoaderPlan::new(&m, common.l)?;
    if let Some(delta) = corrupt {
        if let Some(rot) = plan.columns.iter_mut().flat_map(|c| c.layers.iter_mut().flatten()).next() {
            rot.theta += delta;
        }
    }
    let c = plan.circuit(common.ladder)?;
    let report = verify_circuit(&c, &m, common.l)?;
    let passed = report.fidelity > 1.0 - common.tol;
    let text = serde_json::to_string_pretty(&VerifyOutput {
        n_qubits,
        l: common.l,
        passed,
        report: &report,
    })? + "\n";
    if let Some(path) = out {
        write(path, &text)?;
    }
    stdout.write_all(text.as_bytes()).ok();
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn depth(
    ns: &[usize],
    ds: &[usize],
    common: &Common,
    cancel: bool,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let l = common.l;
    if l == 0 {
        return Err(Error::Params("--L must be positive".into()));
    }
    let mut rows = Vec::new();
    for &d in ds {
        for &n in ns {
            if n % l != 0 || d % l != 0 || d == 0 || d > n {
                continue;
            }
            rows.push(depth_row(n, d, l, common.ladder, cancel)?);
        }
    }
    let csv = depth_csv(&rows, cancel);
    match out {
        Some(path) => write(path, &csv)?,
        None => stdout.write_all(csv.as_bytes()).unwrap_or(()),
    }
    for &d in ds {
        let hit = rows.iter().filter(|r| r.d == d).find(|r| r.measured < r.baseline);
        match hit {
            Some(r) => writeln!(stderr, "d={d} L={l}: crossover at N={} (depth {} < {})", r.n, r.measured, r.baseline),
            None => writeln!(stderr, "d={d} L={l}: no crossover in the scanned N"),
        }
        .ok();
    }
    Ok(EXIT_OK)
}

fn vqe(
    path: &Path,
    common: &Common,
    max_iter: usize,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let f = parse_fcidump(&read(path)?)?;
    let h = jw_hamiltonian(&f)?;
    let opts = VqeOptions {
        l: common.l,
        style: common.ladder,
        tol: common.tol,
        max_iter,
        perturb_seed: common.seed,
    };
    let r = run_vqe(&h, f.n_elec, &opts)?;
    writeln!(stdout, "E_HF   = {:.12}", r.e_hf).ok();
    writeln!(stdout, "E_FCI  = {:.12}", r.e_fci).ok();
    writeln!(stdout, "E_opt  = {:.12}", r.energy).ok();
    match r.fraction {
        Some(x) => writeln!(stdout, "fraction = {x:.9}"),
        None => writeln!(stdout, "fraction = undefined (no correlation energy)"),
    }
    .ok();
    writeln!(stdout, "iterations = {}, converged = {}", r.iterations, r.converged).ok();
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
        write(&dir.join("result.json"), &(serde_json::to_string_pretty(&r)? + "\n"))?;
        write(&dir.join("trace.csv"), &r.trace_csv())?;
    }
    Ok(EXIT_OK)
}

/// Size the global rayon pool from `CLIFFLOAD_THREADS`, if set.
pub fn init_threads() {
    if let Some(n) = std::env::var("CLIFFLOAD_THREADS").ok().and_then(|v| v.parse().ok()) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
}

/// Run with explicit output streams; returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                stderr.write_all(text.as_bytes()).ok();
            } else {
                stdout.write_all(text.as_bytes()).ok();
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Synth { input, common, out } => synth(input, common, out, stdout),
        Command::Verify {
            input,
            common,
            out,
            corrupt_angle,
        } => verify(input, common, out.as_deref(), *corrupt_angle, stdout),
        Command::Depth {
            n,
            d,
            common,
            cancel,
            out,
        } => depth(n, d, common, *cancel, out.as_deref(), stdout, stderr),
        Command::Vqe {
            fcidump,
            common,
            max_iter,
            out,
        } => vqe(fcidump, common, *max_iter, out.as_deref(), stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            writeln!(stderr, "error: {e}").ok();
            exit_code(&e)
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}
