use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sfb_core::ballbasis::BoundaryCondition;
use sfb_core::concentration::RadialDomain;
use sfb_core::kernel::Bandlimit;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "sfb", version, about = "Spherical Fourier-Bessel kernels, profiles and concentration spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate U, U^(d) and W^(d) over a radial grid.
    Profile(CommonArgs),
    /// Normalized kernel diagonal against its limit profile, one block per K.
    KernelDiag(CommonArgs),
    /// Normalized unit-ball kernel diagonal, one block per K.
    BallDiag(CommonArgs),
    /// Concentration spectrum on a ball or shell.
    Spectrum(CommonArgs),
    /// Measured and predicted Shannon numbers.
    Shannon(CommonArgs),
    /// Kernel ratio near the diagonal with its comparison profiles.
    NearDiag(NearDiagArgs),
    /// Run the acceptance experiments.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Bc {
    Dirichlet,
    Neumann,
}

impl From<Bc> for BoundaryCondition {
    fn from(bc: Bc) -> Self {
        match bc {
            Bc::Dirichlet => BoundaryCondition::Dirichlet,
            Bc::Neumann => BoundaryCondition::Neumann,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file, `-` for standard output.
    #[arg(long, default_value = "-")]
    pub out: String,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; falls back to SFB_THREADS, then to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Ratio L/K; give either this or --L.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Maximal spherical degree.
    #[arg(long = "L")]
    pub l_max: Option<usize>,
    /// Frequency bandlimits, comma separated.
    #[arg(long = "K", value_delimiter = ',')]
    pub k: Vec<f64>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long, default_value_t = 301)]
    pub samples: usize,
    /// Inner radius of the concentration domain.
    #[arg(long, default_value_t = 0.0)]
    pub inner: f64,
    /// Outer radius of the concentration domain.
    #[arg(long, default_value_t = 1.0)]
    pub outer: f64,
    #[arg(long, value_enum, default_value_t = Bc::Dirichlet)]
    pub bc: Bc,
    /// Radial quadrature nodes for the concentration operator.
    #[arg(long)]
    pub nodes: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct NearDiagArgs {
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long = "L")]
    pub l_max: Option<usize>,
    #[arg(long = "K", value_delimiter = ',')]
    pub k: Vec<f64>,
    /// Radius of the base point.
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,
    /// Angles between the offset and the base point, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0,0.7853981633974483,1.5707963267948966")]
    pub theta: Vec<f64>,
    /// Largest offset length.
    #[arg(long, default_value_t = 10.0)]
    pub y_max: f64,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Run a single criterion.
    #[arg(long)]
    pub criterion: Option<u8>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Where the output goes.
#[derive(Debug, Clone, PartialEq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl OutputArgs {
    pub fn sink(&self) -> Sink {
        if self.out == "-" {
            Sink::Stdout
        } else {
            Sink::File(PathBuf::from(&self.out))
        }
    }

    pub fn threads(&self) -> Result<Option<usize>, CliError> {
        let n = match self.threads {
            Some(n) => Some(n),
            None => match std::env::var("SFB_THREADS") {
                Ok(s) => Some(
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::Config(format!("SFB_THREADS is not a thread count: {s:?}")))?,
                ),
                Err(_) => None,
            },
        };
        if n == Some(0) {
            return Err(CliError::Config("thread count must be positive".into()));
        }
        Ok(n)
    }
}

/// Evenly spaced grid with at least two samples.
pub fn grid(min: f64, max: f64, samples: usize) -> Result<Vec<f64>, CliError> {
    if samples < 2 {
        return Err(CliError::Config(format!("a grid needs at least 2 samples, got {samples}")));
    }
    if !(min.is_finite() && max.is_finite()) || min >= max {
        return Err(CliError::Config(format!("grid bounds must satisfy min < max, got [{min}, {max}]")));
    }
    let last = (samples - 1) as f64;
    Ok((0..samples).map(|i| min + (max - min) * i as f64 / last).collect())
}

/// Resolve the bandlimit per requested K from either kappa or L.
pub fn bandlimits(d: u32, kappa: Option<f64>, l_max: Option<usize>, ks: &[f64]) -> Result<Vec<Bandlimit>, CliError> {
    if ks.is_empty() {
        return Err(CliError::Config("at least one --K is required".into()));
    }
    match (kappa, l_max) {
        (Some(kappa), None) => ks.iter().map(|&k| Ok(Bandlimit::from_kappa(d, kappa, k)?)).collect(),
        (None, Some(l)) => ks.iter().map(|&k| Ok(Bandlimit::new(d, l, k)?)).collect(),
        _ => Err(CliError::Config("give exactly one of --kappa and --L".into())),
    }
}

impl CommonArgs {
    pub fn bandlimits(&self) -> Result<Vec<Bandlimit>, CliError> {
        bandlimits(self.d, self.kappa, self.l_max, &self.k)
    }

    pub fn grid(&self, default_min: f64, default_max: f64) -> Result<Vec<f64>, CliError> {
        grid(self.r_min.unwrap_or(default_min), self.r_max.unwrap_or(default_max), self.samples)
    }

    pub fn domain(&self) -> Result<RadialDomain, CliError> {
        Ok(RadialDomain::new(self.inner, self.outer)?)
    }
}
