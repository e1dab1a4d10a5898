use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hv", version, about = "Humbert-kernel operators, their inversion and the degenerate hyperbolic Cauchy problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,

    /// Degeneracy exponent of y; alternative to --alpha/--beta/--lambda.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Degeneracy exponent of x.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub n: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu: Option<f64>,

    /// Number of evaluation points (meaning depends on the command).
    #[arg(long, global = true)]
    pub grid: Option<usize>,

    /// Gauss–Jacobi nodes per integral.
    #[arg(long, global = true, default_value_t = 64)]
    pub nodes: usize,

    #[arg(long = "rel-tol", global = true, default_value_t = 1e-12)]
    pub rel_tol: f64,

    /// Relative derivative step of the inversion formula.
    #[arg(long, global = true, default_value_t = hv_core::DEFAULT_DSTEP)]
    pub dstep: f64,

    /// Primary input, CSV with header `t,value`.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Sign of the spectral term fed to the operators: paper2 uses
    /// λ(x−t)², applications uses −λ(x−t)².
    #[arg(long = "sign-convention", global = true, value_enum, default_value_t = SignArg::Paper2)]
    pub sign_convention: SignArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Paper2,
    Applications,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    #[value(name = "TN", alias = "tn")]
    Tn,
    #[value(name = "NT", alias = "nt")]
    Nt,
}

#[derive(Debug, Clone, Args)]
pub struct CauchyInputs {
    /// Density T, CSV `t,value`.
    #[arg(long)]
    pub density: Option<PathBuf>,
    /// Trace τ = u(x, x); used to recover T when --density is absent.
    #[arg(long)]
    pub tau: Option<PathBuf>,
    /// Weighted normal derivative ν.
    #[arg(long)]
    pub nu: PathBuf,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Humbert function Ξ₂(a, b; d; u, w).
    EvalXi2 {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        d: f64,
        #[arg(long, allow_negative_numbers = true)]
        u: f64,
        #[arg(long, allow_negative_numbers = true)]
        w: f64,
    },
    /// Generalized function F(b, c; d; e; g; x, y).
    EvalF0211 {
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, allow_negative_numbers = true)]
        d: f64,
        #[arg(long, allow_negative_numbers = true)]
        e: f64,
        #[arg(long, allow_negative_numbers = true)]
        g: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
    },
    /// Gauss function 2F1(a, b; c; z).
    #[command(name = "eval-2f1")]
    Eval2f1 {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
    },
    /// Convergence region of a double series with signature p,q,k,l,m,n.
    Convergence {
        #[arg(long, value_delimiter = ',', num_args = 6, default_value = "0,2,1,1,0,1")]
        signature: Vec<u32>,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
    },
    /// N[v] on the grid, v from --in.
    ApplyForward,
    /// T[τ] on the grid, τ from --in.
    ApplyInverse,
    /// T[N[v]] − v or N[T[τ]] − τ on the grid; built-in seeds 1+t² and x².
    Roundtrip {
        #[arg(long, value_enum, default_value_t = DirectionArg::Tn)]
        direction: DirectionArg,
    },
    /// W(x, s; λ) against (1−z)^α on --grid (x, s) pairs.
    VerifyKernelLemma {
        /// λ values; defaults to --lambda.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lambdas: Option<Vec<f64>>,
    },
    /// Closed-form τ′ against a difference quotient of N[v]; v from --in or 1+t².
    TauPrimeCheck,
    /// u(ξ, η) of the Cauchy problem on a triangle grid.
    SolveCauchy {
        #[command(flatten)]
        data: CauchyInputs,
    },
    /// u(ξ, η) of the Cauchy–Goursat problem on a triangle grid.
    SolveGoursat {
        #[arg(long)]
        nu: PathBuf,
        /// The known function Φ.
        #[arg(long = "big-phi")]
        big_phi: PathBuf,
        /// u(0, η); recorded only, the solution formula takes it through Φ.
        #[arg(long)]
        phi: Option<PathBuf>,
    },
    /// Density T from the trace τ (--in).
    RecoverDensity,
    /// ν from τ (--in) when φ = 0.
    FundamentalRelation {
        #[arg(long = "big-phi")]
        big_phi: Option<PathBuf>,
    },
    /// Residual of the equation for the Cauchy solution at steps h and h/2.
    CheckPde {
        #[command(flatten)]
        data: CauchyInputs,
        #[arg(long, default_value_t = 1e-2)]
        h: f64,
    },
    /// Limits of u and its weighted normal derivative on η = ξ.
    VerifyCauchyData {
        #[command(flatten)]
        data: CauchyInputs,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::EvalXi2 { .. } => "eval-xi2",
            Command::EvalF0211 { .. } => "eval-f0211",
            Command::Eval2f1 { .. } => "eval-2f1",
            Command::Convergence { .. } => "convergence",
            Command::ApplyForward => "apply-forward",
            Command::ApplyInverse => "apply-inverse",
            Command::Roundtrip { .. } => "roundtrip",
            Command::VerifyKernelLemma { .. } => "verify-kernel-lemma",
            Command::TauPrimeCheck => "tau-prime-check",
            Command::SolveCauchy { .. } => "solve-cauchy",
            Command::SolveGoursat { .. } => "solve-goursat",
            Command::RecoverDensity => "recover-density",
            Command::FundamentalRelation { .. } => "fundamental-relation",
            Command::CheckPde { .. } => "check-pde",
            Command::VerifyCauchyData { .. } => "verify-cauchy-data",
        }
    }
}
