use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use povmkit::builders::{
    complete_mub, computational_basis, fourier_basis, mub_triple_d4, qubit_binary_povm, random_povm,
    random_rank1_povm, sic_d2_tetrahedron, sic_d3, MubTripleParams,
};
use povmkit::designs::{povm_cross_frame_potential, povm_frame_potential};
use povmkit::fidelity::{
    estimation_fidelity_with, incompatibility_witness, FidelityConstants, FidelityMode, FidelityResult, Verdict,
};
use povmkit::io::{parse_povm, povm_to_json};
use povmkit::povm::Povm;
use povmkit::scan::{scan_figure, scan_mub4, scan_sic3, Figure};
use povmkit::tolerances::TOL;
use povmkit::verify::{run_suite, Suite};

/// Thread count for scans and fidelity sums; unset means one per core.
const THREADS_ENV: &str = "POVMKIT_THREADS";

#[derive(Parser)]
#[command(name = "povmkit", version, about = "POVM estimation fidelities, frame potentials and parameter scans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimation fidelity of a product of POVMs, one per copy.
    Fidelity {
        /// One to three POVM files (one file with --copies for identical factors).
        #[arg(required = true, num_args = 1..)]
        files: Vec<PathBuf>,
        #[arg(long)]
        copies: Option<usize>,
        /// Use the permutation-sum oracle instead of closed forms.
        #[arg(long)]
        oracle: bool,
    },
    /// Frame potential of a POVM, or the cross potential with a second one.
    FramePotential {
        file: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        cross: Option<PathBuf>,
    },
    /// Two-copy incompatibility witness.
    Witness { a: PathBuf, b: PathBuf },
    /// Three-copy fidelity of the d = 4 MUB triple family on a cubic grid.
    ScanMub4 {
        #[arg(long, default_value_t = 24)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Three-copy fidelity of the d = 3 SIC family over one period.
    ScanSic3 {
        #[arg(long, default_value_t = 90)]
        grid: usize,
        /// CSV path; diagnostics go next to it with a `.json` extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Curve datasets over dimension or measurement angle.
    ScanFigures {
        #[arg(long, value_enum)]
        which: FigureArg,
        #[arg(long, default_value_t = 16)]
        dmax: usize,
        /// Angle samples for the qubit curves.
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Write a built-in POVM as a `povm/1` document.
    Build {
        #[command(subcommand)]
        family: Family,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Family {
    Computational {
        #[arg(long)]
        dim: usize,
    },
    Fourier {
        #[arg(long)]
        dim: usize,
    },
    Tetrahedron,
    Sic3 {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
    },
    /// Member 0, 1 or 2 of the d = 4 MUB triple.
    Mub4 {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        z: f64,
        #[arg(long)]
        member: usize,
    },
    /// Member `k` of the complete MUB set in prime dimension.
    Cmub {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        member: usize,
    },
    Qubit {
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Bloch vector as `x,y,z`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<f64>,
    },
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        rank1: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    FpHalf,
    FidIid,
    FidSettings,
    QubitCommutator,
    MesCurve,
}

impl From<FigureArg> for Figure {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::FpHalf => Figure::FpHalf,
            FigureArg::FidIid => Figure::FidIid,
            FigureArg::FidSettings => Figure::FidSettings,
            FigureArg::QubitCommutator => Figure::QubitCommutator,
            FigureArg::MesCurve => Figure::MesCurve,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Bounds,
    Oracle,
    Table1,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Table1 => Suite::Table1,
        }
    }
}

#[derive(Serialize)]
struct FidelityOutput {
    #[serde(flatten)]
    result: FidelityResult,
    constants: FidelityConstants,
    n_copy_ub: f64,
}

#[derive(Serialize)]
struct PotentialOutput {
    t: f64,
    value: f64,
}

#[derive(Serialize)]
struct WitnessOutput {
    verdict: Verdict,
    fidelity: f64,
    f1: f64,
    f2_iid: f64,
    /// `F(A ⊗ B)` equals `F2_iid` within the saturation tolerance.
    saturates_f2_iid: bool,
}

fn read_povm(path: &Path) -> Result<Povm> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_povm(&text).with_context(|| format!("{}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().with_context(|| format!("{THREADS_ENV}={v:?} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn build(family: Family) -> Result<Povm> {
    Ok(match family {
        Family::Computational { dim } => {
            if dim == 0 {
                bail!("--dim must be positive");
            }
            computational_basis(dim)
        }
        Family::Fourier { dim } => {
            if dim == 0 {
                bail!("--dim must be positive");
            }
            fourier_basis(dim)
        }
        Family::Tetrahedron => sic_d2_tetrahedron(),
        Family::Sic3 { phi } => sic_d3(phi),
        Family::Mub4 { x, y, z, member } => {
            let (a, b, c) = mub_triple_d4(MubTripleParams::new(x, y, z)?);
            match member {
                0 => a,
                1 => b,
                2 => c,
                _ => bail!("--member must be 0, 1 or 2"),
            }
        }
        Family::Cmub { dim, member } => {
            let mut set = complete_mub(dim)?;
            if member >= set.len() {
                bail!("--member must be below {}", set.len());
            }
            set.swap_remove(member)
        }
        Family::Qubit { alpha, a } => {
            let [x, y, z] = a[..] else { bail!("--a takes three components, got {}", a.len()) };
            qubit_binary_povm(alpha, [x, y, z])?
        }
        Family::Random { dim, count, seed, rank1 } => {
            if rank1 {
                random_rank1_povm(dim, count, seed)?
            } else {
                random_povm(dim, count, seed)?
            }
        }
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    match cli.command {
        Command::Fidelity { files, copies, oracle } => {
            let povms = files.iter().map(|f| read_povm(f)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&Povm> = match copies {
                Some(n) if povms.len() == 1 && n >= 1 => vec![&povms[0]; n],
                Some(_) if povms.len() != 1 => bail!("--copies takes exactly one file"),
                Some(_) => bail!("--copies must be positive"),
                None => povms.iter().collect(),
            };
            if refs.len() > 3 && !oracle {
                bail!("closed forms cover at most three copies; pass --oracle for more");
            }
            let mode = if oracle { FidelityMode::Oracle } else { FidelityMode::Auto };
            let result = estimation_fidelity_with(&refs, mode)?;
            let constants = FidelityConstants::new(result.dim);
            let n_copy_ub = constants.n_copy_ub(result.copies);
            print!("{}", json(&FidelityOutput { result, constants, n_copy_ub }));
        }
        Command::FramePotential { file, t, cross } => {
            if !t.is_finite() || t <= 0.0 {
                bail!("--t must be a positive real");
            }
            let p = read_povm(&file)?;
            let value = match cross {
                Some(c) => povm_cross_frame_potential(&p, &read_povm(&c)?, t)?,
                None => povm_frame_potential(&p, t),
            };
            print!("{}", json(&PotentialOutput { t, value }));
        }
        Command::Witness { a, b } => {
            let (p, q) = (read_povm(&a)?, read_povm(&b)?);
            if p.dim() != q.dim() {
                bail!("POVMs have dimensions {} and {}", p.dim(), q.dim());
            }
            let r = incompatibility_witness(&p, &q)?;
            let saturates_f2_iid = (r.fidelity - r.f2_iid).abs() <= TOL.saturation;
            print!(
                "{}",
                json(&WitnessOutput { verdict: r.verdict, fidelity: r.fidelity, f1: r.f1, f2_iid: r.f2_iid, saturates_f2_iid })
            );
        }
        Command::ScanMub4 { grid, out } => emit(out.as_deref(), &scan_mub4(grid)?.to_csv())?,
        Command::ScanSic3 { grid, out } => {
            let (table, diag) = scan_sic3(grid)?;
            emit(out.as_deref(), &table.to_csv())?;
            match out {
                Some(p) => emit(Some(&p.with_extension("json")), &json(&diag))?,
                None => eprint!("{}", json(&diag)),
            }
        }
        Command::ScanFigures { which, dmax, points, out } => {
            emit(out.as_deref(), &scan_figure(which.into(), dmax, points)?.to_csv())?
        }
        Command::Verify { suite, seed, trials } => {
            let report = run_suite(suite.into(), seed, trials)?;
            print!("{}", json(&report));
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Build { family, out } => emit(out.as_deref(), &(povm_to_json(&build(family)?) + "\n"))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
