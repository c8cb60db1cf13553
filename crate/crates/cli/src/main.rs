mod commands;
mod output;
mod verify;

use clap::{Parser, ValueEnum};
use output::Format;
use qkw_core::hua::Flavor;
use qkw_core::quiver::Quiver;
use qkw_core::symcore::DimVector;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Kac,
    Series,
    Nakajima,
    Gkm,
    Census,
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Kac => "kac",
            Command::Series => "series",
            Command::Nakajima => "nakajima",
            Command::Gkm => "gkm",
            Command::Census => "census",
            Command::Verify => "verify",
        }
    }
}

/// Kac polynomials of quivers, their nilpotent variants, and the point
/// counts built from them.
#[derive(Parser, Debug)]
#[command(name = "qkw", version)]
struct Cli {
    command: Command,
    /// Quiver JSON file, or `builtin:<name>` with name one of jordan, a2,
    /// kronecker, cycle2, loop-plus-edge, loops-<g>.
    #[arg(long)]
    quiver: String,
    /// Truncation box, one bound per vertex; a single number applies to all.
    #[arg(long = "box", default_value = "2")]
    bx: String,
    #[arg(long, default_value = "all")]
    flavor: String,
    #[arg(long, default_value = "2,3")]
    primes: String,
    /// Framing vector for the framed varieties; defaults to all ones.
    #[arg(long)]
    w: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    jobs: Option<usize>,
    /// Bound on the tuples a brute-force count may visit (also `QKW_CAP`).
    #[arg(long)]
    cap: Option<u128>,
}

/// Validated settings shared by every command.
pub struct RunConfig {
    pub quiver: Quiver,
    pub command: Command,
    pub bx: DimVector,
    pub flavors: Vec<Flavor>,
    pub primes: Vec<u32>,
    pub w: DimVector,
    pub cap: u128,
}

fn parse_ints(s: &str, what: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| format!("{what}: {x:?} is not a nonnegative integer")))
        .collect()
}

fn vector_for(q: &Quiver, s: &str, what: &str) -> Result<DimVector, String> {
    let v = parse_ints(s, what)?;
    match v.len() {
        1 => Ok(DimVector(vec![v[0]; q.n()])),
        n if n == q.n() => Ok(DimVector(v)),
        n => Err(format!("{what}: {n} entries given for a quiver with {} vertices", q.n())),
    }
}

fn builtin(name: &str) -> Option<Quiver> {
    match name {
        "jordan" => Some(Quiver::jordan()),
        "a2" => Some(Quiver::a2()),
        "kronecker" => Some(Quiver::kronecker()),
        "cycle2" => Some(Quiver::cycle2()),
        "loop-plus-edge" => Some(Quiver::loop_plus_edge()),
        _ => name.strip_prefix("loops-").and_then(|g| g.parse().ok()).map(Quiver::loops),
    }
}

fn load_quiver(spec: &str) -> Result<Quiver, String> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin(name).ok_or_else(|| format!("unknown builtin quiver {name:?}"));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?;
    Quiver::parse_json(&text).map_err(|e| format!("{spec}: {e}"))
}

fn config(cli: &Cli) -> Result<RunConfig, String> {
    let quiver = load_quiver(&cli.quiver)?;
    let bx = vector_for(&quiver, &cli.bx, "--box")?;
    let flavors = match cli.flavor.as_str() {
        "all" => Flavor::ALL.to_vec(),
        f => vec![f.parse::<Flavor>().map_err(|e| e.to_string())?],
    };
    let primes = parse_ints(&cli.primes, "--primes")?;
    for &p in &primes {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(format!("--primes: {p} is not a prime"));
        }
    }
    let w = match &cli.w {
        Some(s) => vector_for(&quiver, s, "--w")?,
        None => DimVector(vec![1; quiver.n()]),
    };
    let cap = cli.cap.unwrap_or_else(qkw_core::ffrep::default_cap);
    if cap == 0 {
        return Err("--cap must be positive".into());
    }
    Ok(RunConfig { quiver, command: cli.command, bx, flavors, primes, w, cap })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("qkw: cannot set up {n} workers: {e}");
            return ExitCode::from(2);
        }
    }
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("qkw: {e}");
            return ExitCode::from(2);
        }
    };
    match commands::run(&cfg) {
        Ok(outcome) => {
            print!("{}", outcome.doc.render(cli.format));
            for note in &outcome.notes {
                eprintln!("{note}");
            }
            if outcome.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("qkw {}: {e}", cfg.command.name());
            ExitCode::from(2)
        }
    }
}
