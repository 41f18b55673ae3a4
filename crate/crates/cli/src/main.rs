use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use luqca::coloring::{cqca_period, validate_cqca};
use luqca::compiler::{compile_to_circuit, encode_circuit_as_qca, Circuit, UniversalGateSet};
use luqca::config::{load_model, Builtin, Model, ModelConfig};
use luqca::engine::{run, Limits, ObservableTable, RegionState, Snapshot, DEFAULT_THRESHOLD};
use luqca::linalg::{CheckMode, ComplexMatrix, C64};
use luqca::model::{Boundary, CellLayout, Region};
use luqca::validate::validate_definition_opts;
use luqca::Error;

mod demo;

#[derive(Parser)]
#[command(
    name = "luqca",
    version,
    about = "Local unitary quantum cellular automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Quiescent,
    Torus,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Quiescent => Boundary::Quiescent,
            BoundaryArg::Torus => Boundary::Torus,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct RegionArgs {
    /// `8`, `4x4`, or per-axis bounds such as `-2:5,0:3`
    #[arg(long)]
    region: String,
    #[arg(long, value_enum, default_value = "torus")]
    boundary: BoundaryArg,
}

impl RegionArgs {
    fn build(&self) -> Result<Region, Error> {
        parse_region(&self.region, self.boundary.into())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check unitarity, quiescence and translation commutation
    Validate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Sample this many classical configurations per offset instead of enumerating
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Evolve a state and write a snapshot and per-step observables
    Run {
        #[arg(long)]
        model: PathBuf,
        /// Required unless the initial state is a snapshot file
        #[arg(long)]
        region: Option<String>,
        #[arg(long, value_enum, default_value = "torus")]
        boundary: BoundaryArg,
        /// Steps (periods for colored models)
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// `quiescent` (default), `random`, `basis:i,j,…` (cell basis indices) or a snapshot file
        #[arg(long)]
        init: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Compile `steps` steps on a finite region into a layered circuit
    Compile {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a nearest-neighbor circuit into the universal automaton
    Encode {
        /// Circuit JSON
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Built-in demonstrations; each prints PASS or FAIL
    Demo {
        #[arg(value_enum)]
        name: demo::DemoName,
        #[arg(long)]
        steps: Option<usize>,
        /// Cube side for `amplify`
        #[arg(long, default_value_t = 3)]
        side: usize,
        /// Neighbor sums that flip a cell in `amplify`, e.g. `-2,-1,0`
        #[arg(long, allow_hyphen_values = true)]
        flip_set: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => 2,
            Error::Resource(_) => 3,
            _ => 1,
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

impl Failure {
    fn semantic(msg: impl Into<String>) -> Self {
        Self {
            code: 1,
            msg: msg.into(),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

fn parse_region(s: &str, boundary: Boundary) -> Result<Region, Error> {
    let bad = || Error::Parse(format!("cannot read region {s:?}"));
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    let (mut lower, mut upper) = (vec![], vec![]);
    let axes: Vec<&str> = if s.contains(':') {
        s.split(',').collect()
    } else {
        s.split(['x', ',']).collect()
    };
    for a in axes {
        match a.split_once(':') {
            Some((lo, hi)) => {
                lower.push(num(lo)?);
                upper.push(num(hi)?);
            }
            None => {
                let n = num(a)?;
                if n < 1 {
                    return Err(bad());
                }
                lower.push(0);
                upper.push(n - 1);
            }
        }
    }
    Region::new(lower, upper, boundary)
}

pub fn write(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::semantic(e.to_string()))?;
    }
    fs::write(path, text).map_err(|e| Failure::semantic(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

fn validate(
    model: &Path,
    tol: f64,
    samples: Option<usize>,
    seed: u64,
    format: Option<Format>,
) -> CliResult<()> {
    let mode = match samples {
        Some(samples) => CheckMode::Sampled { samples, seed },
        None => CheckMode::default(),
    };
    let pass = match load_model(model)? {
        Model::Qca(q) => {
            let rep = validate_definition_opts(&q, tol, mode)?;
            match format {
                Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&rep).unwrap()),
                _ => println!("{rep}"),
            }
            if !rep.pass {
                let offs: Vec<String> = rep
                    .commutation
                    .failing(tol)
                    .iter()
                    .map(|o| format!("{:?}", o.offset))
                    .collect();
                if !offs.is_empty() {
                    eprintln!(
                        "read operator fails to commute at offsets {}",
                        offs.join(" ")
                    );
                }
            }
            rep.pass
        }
        Model::Cqca(c) => {
            let rep = validate_cqca(&c, tol)?;
            match format {
                Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&rep).unwrap()),
                _ => {
                    for (j, u) in rep.unitarity.iter().enumerate() {
                        println!(
                            "phase {j:<3} unitarity {u:.3e}  commutation {:.3e}  symmetric {:?}",
                            rep.same_color_commutation[j], rep.symmetric[j]
                        );
                    }
                    println!("overall       {}", if rep.pass { "PASS" } else { "FAIL" });
                }
            }
            rep.pass
        }
    };
    if pass {
        Ok(())
    } else {
        Err(Failure::semantic("validation failed"))
    }
}

fn initial_state(
    layout: &CellLayout,
    quiescent: Option<usize>,
    region: Option<Region>,
    init: Option<&str>,
    seed: u64,
) -> CliResult<RegionState> {
    let limits = Limits::default();
    let need_region = || {
        region
            .clone()
            .ok_or_else(|| Failure::semantic("--region is required"))
    };
    match init.unwrap_or("quiescent") {
        "quiescent" => {
            let r = need_region()?;
            let cell = layout.decode(quiescent.unwrap_or(0));
            Ok(RegionState::basis(
                &r,
                layout,
                &vec![cell; r.len()],
                limits,
            )?)
        }
        "random" => {
            let r = need_region()?;
            let nc = layout.classical_registers().len() * r.len();
            let n = layout
                .quantum_dimension()
                .checked_pow(r.len() as u32)
                .filter(|&n| n <= limits.max_amplitudes)
                .ok_or_else(|| {
                    Error::Resource("random state does not fit the amplitude cap".into())
                })?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let amps = demo::random_state(n, &mut rng);
            Ok(RegionState::from_dense(
                &r,
                layout,
                vec![0; nc],
                amps,
                limits,
            )?)
        }
        s if s.starts_with("basis:") => {
            let r = need_region()?;
            let cells = s["basis:".len()..]
                .split(',')
                .map(|t| t.trim().parse::<usize>().map(|i| layout.decode(i)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("cannot read {s:?}")))?;
            Ok(RegionState::basis(&r, layout, &cells, limits)?)
        }
        path => {
            let snap = Snapshot::from_json(&read(Path::new(path))?)?;
            if snap.layout != layout.registers() {
                return Err(Failure::semantic(
                    "snapshot layout does not match the model",
                ));
            }
            Ok(snap.to_state(limits)?)
        }
    }
}

/// Diagonal observable on the first quantum register: `σz` for a qubit,
/// the level index otherwise.
fn observable(layout: &CellLayout) -> Option<(String, ComplexMatrix)> {
    let &r = layout.quantum_registers().first()?;
    let reg = &layout.registers()[r];
    let qubit = reg.dim == 2;
    let diag: Vec<C64> = (0..layout.cell_dimension())
        .map(|i| {
            let v = layout.decode(i)[r] as f64;
            C64::new(if qubit { 1.0 - 2.0 * v } else { v }, 0.0)
        })
        .collect();
    let name = if qubit { "sigma_z" } else { "level" };
    Some((
        format!("{name}:{}", reg.name),
        ComplexMatrix::diagonal(&diag),
    ))
}

#[allow(clippy::too_many_arguments)]
fn run_cmd(
    model: &Path,
    region: Option<Region>,
    steps: usize,
    init: Option<&str>,
    seed: u64,
    out: &Path,
    format: Format,
) -> CliResult<()> {
    let model = load_model(model)?;
    let (layout, quiescent) = match &model {
        Model::Qca(q) => (q.layout().clone(), q.quiescent()),
        Model::Cqca(c) => (c.layout().clone(), c.quiescent()),
    };
    let mut s = initial_state(&layout, quiescent, region, init, seed)?;
    let obs = observable(&layout);
    let mut table = ObservableTable::new(obs.as_ref().map_or("", |o| o.0.as_str()));
    if let Some((_, m)) = &obs {
        table.record(&s, m)?;
    }
    for _ in 0..steps {
        match &model {
            Model::Qca(q) => run(&mut s, q, 1)?,
            Model::Cqca(c) => cqca_period(&mut s, c)?,
        }
        if let Some((_, m)) = &obs {
            table.record(&s, m)?;
        }
    }
    let snap = Snapshot::of(&s, DEFAULT_THRESHOLD);
    match format {
        Format::Json => write(&out.join("state.json"), &snap.to_json())?,
        Format::Csv => write(&out.join("state.csv"), &snap.to_csv())?,
    }
    if obs.is_some() {
        write(&out.join("observables.csv"), &table.to_csv())?;
    }
    println!(
        "{} steps on {} cells, norm {:.15}, wrote {}",
        steps,
        s.region().len(),
        s.norm(),
        out.display()
    );
    Ok(())
}

fn compile_cmd(
    model: &Path,
    region: &RegionArgs,
    steps: usize,
    out: Option<&Path>,
) -> CliResult<()> {
    let q = load_model(model)?.into_qca()?;
    let c = compile_to_circuit(&q, &region.build()?, steps)?;
    let json = c.to_json();
    match out {
        Some(p) => {
            write(p, &json)?;
            println!(
                "depth {} with {} gates on {} wires, wrote {}",
                c.depth(),
                c.gate_count(),
                c.wires(),
                p.display()
            );
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn encode_cmd(circuit: &Path, out: &Path) -> CliResult<()> {
    let c = Circuit::from_json(&read(circuit)?)?;
    let enc = encode_circuit_as_qca(&c, &UniversalGateSet::default())?;
    let model = ModelConfig::Builtin(Builtin::Universal);
    write(&out.join("model.toml"), &model.to_toml())?;
    write(
        &out.join("initial.json"),
        &Snapshot::of(&enc.initial, DEFAULT_THRESHOLD).to_json(),
    )?;
    let info = serde_json::json!({
        "steps": enc.steps,
        "wires": enc.wires(),
        "output": enc.output,
    });
    write(
        &out.join("encoding.json"),
        &serde_json::to_string_pretty(&info).unwrap(),
    )?;
    println!(
        "{} wires, depth {}: run {} steps on region {:?}..{:?}, wrote {}",
        enc.wires(),
        c.depth(),
        enc.steps,
        enc.region().lower(),
        enc.region().upper(),
        out.display()
    );
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Validate {
            model,
            tol,
            samples,
            seed,
            format,
        } => validate(&model, tol, samples, seed, format),
        Command::Run {
            model,
            region,
            boundary,
            steps,
            init,
            seed,
            out,
            format,
        } => {
            let region = region
                .map(|r| parse_region(&r, boundary.into()))
                .transpose()?;
            run_cmd(&model, region, steps, init.as_deref(), seed, &out, format)
        }
        Command::Compile {
            model,
            region,
            steps,
            out,
        } => compile_cmd(&model, &region, steps, out.as_deref()),
        Command::Encode { circuit, out } => encode_cmd(&circuit, &out),
        Command::Demo {
            name,
            steps,
            side,
            flip_set,
            seed,
            out,
        } => {
            let flip_set = flip_set
                .map(|f| {
                    f.split(',')
                        .map(|t| t.trim().parse::<i32>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| Error::Parse(format!("cannot read flip set {f:?}")))
                })
                .transpose()?;
            demo::run_demo(name, steps, side, flip_set, seed, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("luqca: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
