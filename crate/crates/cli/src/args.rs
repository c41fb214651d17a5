use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kerrgate::{Estimator, Formula, Preset};

#[derive(Debug, Parser)]
#[command(name = "kerrgate", version, about = "Cross-Kerr hybrid gate and entanglement simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Re-run the job recorded in a manifest instead of a subcommand.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    /// Output file. Sweeps write CSV; a manifest is written next to it.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Controlled-Z gate fidelity and distance.
    Gate(GateArgs),
    /// Hybrid entanglement fidelity and kitten projection.
    Entangle(EntArgs),
    /// Interaction strength of a physical platform versus the claimed value.
    Feasibility {
        #[arg(value_parser = parse_preset)]
        preset: Preset,
    },
    /// Figure tables with their default grids.
    Sweep {
        figure: Figure,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_parser = parse_estimator)]
        estimator: Option<Estimator>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Gate fidelity versus kappa_eo/kappa_o at eta_norm 2.2 and 4.2.
    Fig3,
    /// Entanglement versus kappa_eo/kappa_o at eta_norm_alpha 3.
    Fig4a,
    /// Entanglement versus eta_norm_alpha at kappa_eo/kappa_o 0.99.
    Fig4b,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// kappa_eo / kappa_o.
    #[arg(long)]
    pub kappa_ratio: Option<f64>,
    /// kappa_io / kappa_o; must equal 1 - kappa_ratio when both are given.
    #[arg(long)]
    pub kappa_io_ratio: Option<f64>,
    /// Pulse bandwidth in units of kappa_o (default 0.2).
    #[arg(long)]
    pub sigma_omega: Option<f64>,
    /// TOML configuration; flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// 4 eta / (2 pi kappa_o).
    #[arg(long)]
    pub eta_norm: Option<f64>,
    #[arg(long)]
    pub correct_backaction: bool,
    #[arg(long, value_parser = parse_estimator)]
    pub estimator: Option<Estimator>,
    /// `kappa:lo:hi:step`.
    #[arg(long, value_name = "AXIS:LO:HI:STEP")]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct EntArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// 4 eta |alpha|^2 / (2 pi kappa_o).
    #[arg(long)]
    pub eta_alpha: Option<f64>,
    /// Real coherent amplitude of the input pulse.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_parser = parse_formula)]
    pub formula: Option<Formula>,
    /// Add p_minus and F_kitten_minus columns.
    #[arg(long)]
    pub kitten: bool,
    /// `kappa:lo:hi:step` or `eta-alpha:lo:hi:step`.
    #[arg(long, value_name = "AXIS:LO:HI:STEP")]
    pub sweep: Option<String>,
}

fn parse_estimator(s: &str) -> Result<Estimator, String> {
    s.parse().map_err(|e: kerrgate::Error| e.to_string())
}

fn parse_formula(s: &str) -> Result<Formula, String> {
    s.parse().map_err(|e: kerrgate::Error| e.to_string())
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: kerrgate::Error| e.to_string())
}
