use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spinquant::io::{
    density_from_json, read_json, to_json, write_lattice_csv, DensityFile, LatticeFile,
    MultipoleFile, OperatorFile, StateFile,
};
use spinquant::operators::coherent_state;
use spinquant::random::{random_density, random_state, seeded};
use spinquant::sphere::{averaged_wigner_with, AveragingOptions, TomographyMap};
use spinquant::verify::{self, Status, VerifyOptions};
use spinquant::{Error, HilbertParams, SpinOperatorSet, StateVector, WignerLattice};

const EXIT_INPUT: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_RESIDUAL: u8 = 3;

#[derive(Parser)]
#[command(name = "spinquant", version, about = "Comb states, spin operators and Wigner functions of a quantized spin")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a state file.
    State(StateArgs),
    /// Dump jx, jy, jz.
    Operators(OperatorsArgs),
    /// Lattice Wigner function of a state or density file.
    Wigner(WignerArgs),
    /// Multipole coefficients of the rotation-averaged Wigner function.
    AvgWigner(AvgArgs),
    /// Recover the density matrix from multipole coefficients.
    Reconstruct(ReconstructArgs),
    /// Run the invariant suite and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Args, Clone, Copy)]
#[group(id = "size", required = true, multiple = false)]
struct SizeArg {
    /// Spin, a non-negative half-integer.
    #[arg(long, group = "size")]
    j: Option<f64>,
    /// Dimension N = 2j + 1.
    #[arg(long = "n", short = 'N', group = "size")]
    n: Option<usize>,
}

#[derive(Args, Clone, Copy)]
struct Space {
    #[command(flatten)]
    size: SizeArg,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi0: f64,
}

impl Space {
    fn params(&self) -> Result<HilbertParams> {
        let base = match (self.size.j, self.size.n) {
            (Some(j), None) => HilbertParams::from_spin(j)?,
            (None, Some(n)) => HilbertParams::new(n)?,
            _ => bail!("give exactly one of --j and --n"),
        };
        Ok(base.with_hbar(self.hbar)?.with_phi0(self.phi0)?)
    }
}

#[derive(Args)]
#[group(id = "kind", required = true, multiple = false)]
struct StateKind {
    /// Basis vector by storage index k (k = 0 is m = j).
    #[arg(long, group = "kind")]
    basis: Option<usize>,
    /// Eigenstate of jz with eigenvalue m hbar.
    #[arg(long, group = "kind", allow_negative_numbers = true)]
    m: Option<f64>,
    /// Spin-coherent state along colatitude THETA, longitude PHI.
    #[arg(long, group = "kind", num_args = 2, value_names = ["THETA", "PHI"], allow_negative_numbers = true)]
    coherent: Option<Vec<f64>>,
    /// Uniformly random pure state.
    #[arg(long, group = "kind")]
    random: bool,
    /// Random full-rank density matrix; written as a density file.
    #[arg(long, group = "kind")]
    random_mixed: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepArg {
    Position,
    Momentum,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct StateArgs {
    #[command(flatten)]
    space: Space,
    #[command(flatten)]
    kind: StateKind,
    #[arg(long, value_enum, default_value = "position")]
    rep: RepArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OperatorsArgs {
    #[command(flatten)]
    space: Space,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WignerArgs {
    /// State or density file.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AvgArgs {
    /// State or density file.
    #[arg(short, long)]
    input: PathBuf,
    /// Highest multipole; defaults to 2j.
    #[arg(long)]
    lmax: Option<usize>,
    /// Quadrature band; defaults to 2j + lmax.
    #[arg(long)]
    band: Option<usize>,
    /// Omit coefficients below this fraction of the largest one.
    #[arg(long, default_value_t = 1e-13)]
    cutoff: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Multipole file.
    #[arg(short, long)]
    input: PathBuf,
    /// Quadrature band of the inverted map; defaults to 4j.
    #[arg(long)]
    band: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    space: Space,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random inputs per check.
    #[arg(long, default_value_t = 5)]
    trials: usize,
    /// Leave out the averaged-Wigner checks.
    #[arg(long)]
    skip_sphere: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::OutsideImage(_)) => ExitCode::from(EXIT_RESIDUAL),
                _ => ExitCode::from(EXIT_INPUT),
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::State(a) => state(a),
        Command::Operators(a) => {
            let ops = SpinOperatorSet::new(a.space.params()?);
            emit(a.output.as_deref(), &to_json(&OperatorFile::from_ops(&ops))?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Wigner(a) => wigner(a),
        Command::AvgWigner(a) => avg_wigner(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Verify(a) => verify(a),
    }
}

fn state(a: StateArgs) -> Result<ExitCode> {
    let p = a.space.params()?;
    let k = &a.kind;
    let psi = if let Some(i) = k.basis {
        StateVector::basis(p, i)?
    } else if let Some(m) = k.m {
        StateVector::spin_basis(p, m)?
    } else if let Some(angles) = &k.coherent {
        coherent_state(p, angles[0], angles[1])
    } else if k.random {
        random_state(p, &mut seeded(a.seed))
    } else {
        let rho = random_density(p, &mut seeded(a.seed));
        emit(a.output.as_deref(), &to_json(&DensityFile::from_density(&rho))?)?;
        return Ok(ExitCode::SUCCESS);
    };
    let file = match a.rep {
        RepArg::Position => StateFile::from_state(&psi),
        RepArg::Momentum => StateFile::from_momentum(&psi.to_momentum()),
    };
    emit(a.output.as_deref(), &to_json(&file)?)?;
    Ok(ExitCode::SUCCESS)
}

fn read_density(path: &Path) -> Result<spinquant::DensityMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(density_from_json(&text)?)
}

fn wigner(a: WignerArgs) -> Result<ExitCode> {
    let rho = read_density(&a.input)?;
    let w = WignerLattice::from_density(&rho)?;
    let text = match a.format {
        Format::Json => to_json(&LatticeFile::from_lattice(&w))?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_lattice_csv(&w, &mut buf)?;
            String::from_utf8(buf)?
        }
    };
    emit(a.output.as_deref(), &text)?;
    if a.output.is_some() {
        println!("{}: {} lattice points, total mass {:.3e}", rho.params(), w.weights().len(), w.total_mass());
    }
    Ok(ExitCode::SUCCESS)
}

fn avg_wigner(a: AvgArgs) -> Result<ExitCode> {
    let rho = read_density(&a.input)?;
    let opts = AveragingOptions {
        lmax: a.lmax,
        band: a.band,
        ..AveragingOptions::default()
    };
    let c = averaged_wigner_with(&rho, &opts)?;
    let file = MultipoleFile::from_coeffs(&c, a.cutoff);
    emit(a.output.as_deref(), &to_json(&file)?)?;
    if a.output.is_some() {
        println!("{}: lmax {}, {} coefficients kept", rho.params(), c.lmax(), file.coeffs.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn reconstruct(a: ReconstructArgs) -> Result<ExitCode> {
    let file: MultipoleFile = read_json(&a.input)?;
    let c = file.to_coeffs()?;
    let opts = AveragingOptions {
        band: a.band,
        ..AveragingOptions::default()
    };
    let r = TomographyMap::with_options(*c.params(), &opts).reconstruct(&c)?;
    if !r.is_positive() {
        eprintln!(
            "warning: reconstructed operator is not positive (smallest eigenvalue {:.3e})",
            r.min_eigenvalue()
        );
    }
    emit(a.output.as_deref(), &to_json(&DensityFile::from_reconstruction(&r))?)?;
    if a.output.is_some() {
        println!("{}: relative residual {:.3e}", c.params(), r.residual());
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let p = a.space.params()?;
    let opts = VerifyOptions {
        seed: a.seed,
        trials: a.trials,
        sphere: !a.skip_sphere,
    };
    let checks = verify::run(p, &opts)?;
    let mut out = io::stdout().lock();
    writeln!(out, "{p}")?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        match c.status {
            Status::Skip => writeln!(out, "{}  {:width$}", c.status, c.name)?,
            _ => writeln!(
                out,
                "{}  {:width$}  {:.3e} (tol {:.0e})",
                c.status, c.name, c.value, c.tolerance
            )?,
        }
    }
    let passed = verify::all_passed(&checks);
    writeln!(out, "{}", if passed { "all checks passed" } else { "some checks FAILED" })?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    })
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}
