mod commands;
mod input;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frobquant::Error;
use report::{Failure, Report};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "frobquant", version, about = "Exact algebra of restricted Poisson and quantized algebras in characteristic p")]
pub struct Cli {
    #[command(flatten)]
    pub session: Session,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Session {
    /// Characteristic, an odd prime
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u64,
    /// Number of coordinates (half-dimension of the symplectic model)
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,
    /// h-truncation order N; defaults to p + 2 and must be at least p + 2
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Seed for the sampled suites
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    /// Emit one JSON object per line (the default)
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub json: bool,
    /// Human-readable output instead of JSON
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Sign of the {0, θ} term in the Chern condition
    #[arg(long, global = true, value_enum, default_value_t = SignArg::Minus)]
    pub sign_theta: SignArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    /// k[x]/(x^p)
    Trunc,
    /// k[x]
    Poly,
    /// k[x, 1/x]
    Laurent,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// p-operation a^[p] = (a^p - s(a'))/h^(p-1) in the reduced Weyl algebra
    POp {
        #[arg(long)]
        elem: String,
    },
    /// {a, b} = [a, b]/h in the reduced Weyl algebra
    Bracket {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// p-curvature of h d + h α along each coordinate field
    PCurvature {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = BaseKind::Poly)]
        base: BaseKind,
    },
    /// Generators of the p-support of h d + h α
    PSupport {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = BaseKind::Poly)]
        base: BaseKind,
    },
    /// Whether the graph y_i = φ_i(x) is Lagrangian
    CheckLagrangian {
        /// one function per coordinate, in x1..xn
        #[arg(long, num_args = 1..)]
        phi: Vec<String>,
    },
    /// Whether the graph y_i = φ_i(x) is a restricted subvariety, by two routes
    CheckRestricted {
        #[arg(long, num_args = 1..)]
        phi: Vec<String>,
    },
    /// Whether an ideal of k[x', ξ'][h] is closed under the bracket {ξ', x'} = 1
    CheckCoisotropic {
        /// use the p-support of h d + h α as the ideal
        #[arg(long, conflicts_with = "gen")]
        alpha: Option<String>,
        /// explicit generators in x1'..xn', xi1'..xin' and h
        #[arg(long, num_args = 1..)]
        gen: Vec<String>,
        #[arg(long, value_enum, default_value_t = BaseKind::Poly)]
        base: BaseKind,
    },
    /// Whether h d + h α is isomorphic to the trivial connection
    ClassifyQuantization {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = BaseKind::Trunc)]
        base: BaseKind,
    },
    /// Normal form of a surjection A_h -> B given by the images of x1..xn, y1..yn in z1..zn
    NormalForm {
        #[arg(long, num_args = 1..)]
        image: Vec<String>,
    },
    /// Restricted Chern class of a line bundle from its transition functions
    CechClass {
        /// cover as JSON (inline or @file); defaults to one open over k[x]/(x^p)
        #[arg(long)]
        cover: Option<String>,
        /// transitions as JSON {"1,2": "expr", ...}
        #[arg(long)]
        transitions: String,
    },
    /// Whether a Čech class is a coboundary, with a witness
    Coboundary {
        #[arg(long)]
        cover: Option<String>,
        /// class as JSON {"alpha": {"1,2": "form"}, "gamma": ["form", ...]}
        #[arg(long)]
        class: String,
    },
    /// Whether c(L) = ρ + ½ c(K) ± {0, θ} holds in cohomology
    ChernCheck {
        #[arg(long)]
        cover: Option<String>,
        /// class of L, or {"transitions": {...}}; zero when omitted
        #[arg(long)]
        cl: Option<String>,
        #[arg(long)]
        rho: Option<String>,
        #[arg(long)]
        ck: Option<String>,
        /// 1-form on the twisted base, in x1'..xn'
        #[arg(long, default_value = "0")]
        theta: String,
    },
    /// Run the acceptance battery
    Suite {
        /// run a single criterion
        #[arg(long)]
        criterion: Option<u8>,
    },
}

/// Usage problems that are not domain errors.
fn is_usage(e: &Error) -> bool {
    matches!(e, Error::Parse { .. } | Error::InvalidInput(_) | Error::InvalidPrime(_) | Error::TruncationTooSmall { .. } | Error::DegreeOutOfRange(_))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = commands::name(&cli.command);
    let outcome = commands::run(&cli.session, &cli.command);
    let (report, code) = match outcome {
        Ok(report) => {
            let code = if report.all_ok() { 0 } else { 1 };
            (report, code)
        }
        Err(Failure::Domain(e)) => {
            let code = if is_usage(&e) { 2 } else { 1 };
            (Report::error(name, &e), code)
        }
        Err(Failure::Usage(msg)) => (Report::usage(name, &msg), 2),
    };
    report.emit(cli.session.pretty);
    ExitCode::from(code)
}
