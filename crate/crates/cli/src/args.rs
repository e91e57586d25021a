use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "nitsche", version, about = "Nitsche-type bounds for hyperbolic harmonic maps between annuli")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Solver tolerance (integrator and shooting).
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,

    /// Flat key = value file; command-line flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the modulus bound for given annuli.
    #[command(args_override_self = true)]
    Bound(BoundArgs),
    /// Solve the radial boundary value problem by shooting.
    #[command(args_override_self = true)]
    Radial(RadialArgs),
    /// Theorem-consistency sweep over a grid of annuli.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Randomized check of the cross-product inequality.
    #[command(name = "verify-lemma", args_override_self = true)]
    VerifyLemma(LemmaArgs),
    /// Surface and volume integrals of |D Theta|^(n-1) against their lower bounds.
    #[command(name = "verify-prop", args_override_self = true)]
    VerifyProp(PropArgs),
    /// Finite-difference tension field certificates.
    #[command(args_override_self = true)]
    Tension(TensionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormArg {
    Ence,
    Beprim,
    Pola,
    All,
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct BoundArgs {
    /// Inner radius of the domain annulus (Euclidean).
    #[arg(long)]
    pub a: f64,
    /// Outer radius of the domain annulus (Euclidean).
    #[arg(long)]
    pub b: f64,
    /// Inner target radius (Euclidean).
    #[arg(long, requires = "beta", conflicts_with_all = ["alpha_h", "beta_h"])]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    pub beta: Option<f64>,
    /// Inner target radius (hyperbolic).
    #[arg(long = "alphaH", alias = "alpha-h")]
    pub alpha_h: Option<f64>,
    #[arg(long = "betaH", alias = "beta-h", requires = "alpha_h")]
    pub beta_h: Option<f64>,
    #[arg(long, value_enum, default_value_t = FormArg::All)]
    pub form: FormArg,
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct RadialArgs {
    /// Inner radius of the domain annulus (Euclidean).
    #[arg(long)]
    pub a: f64,
    /// Outer radius of the domain annulus (Euclidean).
    #[arg(long)]
    pub b: f64,
    #[arg(long = "alphaH", alias = "alpha-h", required_unless_present = "identity")]
    pub alpha_h: Option<f64>,
    #[arg(long = "betaH", alias = "beta-h", required_unless_present = "identity")]
    pub beta_h: Option<f64>,
    /// Use the identity map's boundary data and compare against it.
    #[arg(long, conflicts_with_all = ["alpha_h", "beta_h"])]
    pub identity: bool,
    /// Dimension of the ball.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Profile samples included in the report (0 keeps the solver nodes).
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    /// Also write the profile as CSV (t,y,dy).
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct SweepArgs {
    /// min,max,count
    #[arg(long, value_parser = parse_range, default_value = "0.1,0.5,5")]
    pub a_range: GridRange,
    #[arg(long, value_parser = parse_range, default_value = "0.6,0.9,5")]
    pub b_range: GridRange,
    #[arg(long = "alphaH-range", alias = "alpha-h-range", value_parser = parse_range, default_value = "0.05,0.5,3")]
    pub alpha_h_range: GridRange,
    /// Random target outer radii per grid point, on top of the minimal one.
    #[arg(long, default_value_t = 2)]
    pub targets: usize,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GridRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridRange {
    pub fn points(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.min],
            c => (0..c)
                .map(|i| {
                    if i + 1 == c {
                        self.max
                    } else {
                        self.min + (self.max - self.min) * i as f64 / (c - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

fn parse_range(s: &str) -> Result<GridRange, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err("expected min,max,count".into());
    }
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let (min, max) = (num(parts[0])?, num(parts[1])?);
    let count = parts[2].parse::<usize>().map_err(|e| format!("{:?}: {e}", parts[2]))?;
    if !(min.is_finite() && max.is_finite() && min <= max) {
        return Err(format!("need finite min <= max, got {min}, {max}"));
    }
    if count == 0 {
        return Err("grid count must be at least 1".into());
    }
    Ok(GridRange { min, max, count })
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    /// Negative control: shrink the bound factor so the check must fail.
    #[arg(long, hide = true)]
    pub sabotage: bool,
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct PropArgs {
    /// identity | inversion | radial-profile <file> | eqf <a> <alpha>
    #[arg(long, num_args = 1..=3, default_values_t = ["identity".to_string()])]
    pub map: Vec<String>,
    /// sphere:<r> | ellipsoid:<cx>,<cy>,<cz>,<A>,<B>,<C> | annulus:<a>,<b>; repeatable.
    #[arg(long = "surface", default_values_t = ["sphere:0.6".to_string()])]
    pub surfaces: Vec<String>,
    /// Gauss-Legendre order per parameter.
    #[arg(long, default_value_t = 16)]
    pub order: usize,
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct TensionArgs {
    /// identity | inversion | radial-profile <file> | eqf <a> <alpha>
    #[arg(long, num_args = 1..=3, default_values_t = ["identity".to_string()])]
    pub map: Vec<String>,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
    /// Pass threshold on the largest residual.
    #[arg(long, default_value_t = 1e-5)]
    pub threshold: f64,
    /// Check the Euclidean Laplacian of each component instead.
    #[arg(long)]
    pub euclidean: bool,
    /// Coefficient reading of the tension components.
    #[arg(long, value_enum, default_value_t = FormChoice::Consistent)]
    pub form: FormChoice,
    /// Sampling shell, defaulting to a map-dependent interior range.
    #[arg(long)]
    pub rho_min: Option<f64>,
    #[arg(long)]
    pub rho_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormChoice {
    Consistent,
    Literal,
}
