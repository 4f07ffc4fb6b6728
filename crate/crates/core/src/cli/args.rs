//! Flag schemas of the subcommands.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "bht-lab", version, about = "Experiments on bilinear multipliers singular along a line")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare the spectral bilinear Hilbert transform with principal-value quadrature.
    VerifyBht(VerifyBhtArgs),
    /// Random-modulation scaling experiment and contradiction verdict.
    Counterexample(CounterexampleArgs),
    /// Fourier coefficient decay of the localized symbol pieces.
    SymbolDecay(SymbolDecayArgs),
    /// Pointwise domination and empirical Hölder ratios of the model paraproduct.
    ModelBound(ModelBoundArgs),
    /// Dump a Whitney cover of one cone and check coverage and the partition of unity.
    DumpTiling(DumpTilingArgs),
}

#[derive(Debug, Args)]
pub struct VerifyBhtArgs {
    #[arg(long, default_value_t = 20)]
    pub cases: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per period.
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    /// Inner cutoff of the principal-value quadrature.
    #[arg(long, default_value_t = 1e-7)]
    pub eta: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 0.6)]
    pub r0: f64,
    #[arg(long, default_value_t = 1.2)]
    pub q0: f64,
    #[arg(long, default_value = "8,16,32,64,128", value_parser = parse_list::<usize>)]
    pub nlist: ListArg<usize>,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per period of the bump pair.
    #[arg(long, default_value_t = 8192)]
    pub samples: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SymbolDecayArgs {
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 64)]
    pub nmax: u32,
    #[arg(long, default_value_t = crate::decomposition::whitney::DEFAULT_WHITNEY_CONSTANT)]
    pub whitney_constant: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ModelBoundArgs {
    /// Cone indices.
    #[arg(long, default_value = "1,2,4,8,16", value_parser = parse_list::<u32>)]
    pub n: ListArg<u32>,
    /// Slot in every cone, or `probe` for the first, middle and last available slots.
    #[arg(long, default_value = "probe", value_parser = parse_slot)]
    pub k: SlotArg,
    #[arg(long, default_value_t = 2.0)]
    pub p1: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p2: f64,
    /// Ensemble members per collection.
    #[arg(long, default_value_t = 16)]
    pub ensemble: usize,
    /// Random triples for the domination suite, shared among the families.
    #[arg(long, default_value_t = 1000)]
    pub triples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::decomposition::whitney::DEFAULT_WHITNEY_CONSTANT)]
    pub whitney_constant: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DumpTilingArgs {
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// `rmin,rmax`.
    #[arg(long, default_value = "1,64", value_parser = parse_list::<f64>)]
    pub annulus: ListArg<f64>,
    /// Core points for the coverage and partition checks.
    #[arg(long, default_value_t = crate::decomposition::tiling::CORE_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::decomposition::whitney::DEFAULT_WHITNEY_CONSTANT)]
    pub whitney_constant: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// A comma-separated list, optionally in brackets.
#[derive(Debug, Clone, PartialEq)]
pub struct ListArg<T>(pub Vec<T>);

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<ListArg<T>, String> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    let items = inner
        .split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| format!("cannot parse {x:?} in list {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(ListArg(items))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotArg {
    Probe,
    Fixed(usize),
}

fn parse_slot(s: &str) -> Result<SlotArg, String> {
    match s.trim() {
        "probe" => Ok(SlotArg::Probe),
        t => match t.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(SlotArg::Fixed(k)),
            _ => Err(format!("slot must be `probe` or a positive integer, got {s:?}")),
        },
    }
}
