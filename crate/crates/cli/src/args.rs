use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "algdyn", version, about = "Exact analysis of algebraic dynamical systems over Z^d")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub output: OutputFormat,

    /// Run every sweep on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    JsonLines,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Multiply two Laurent polynomials.
    Mul {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// Ambient dimension (default: largest variable index used).
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Smith normal form of an integer matrix.
    Snf {
        /// Rows separated by `;`, entries by `,`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Structure of the Λ-fixed points of the principal system X_f.
    Fixedpoints {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Lattice basis; may be repeated.
        #[arg(long, allow_hyphen_values = true)]
        lattice: Vec<String>,
        /// Lattice family: `diag:N<=K` or `random:COUNT,SEED`.
        #[arg(long)]
        lattices: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Expansivity and mixing certificates.
    Certify {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Torus grid spacing is `2^-grid`.
        #[arg(long, default_value_t = 8)]
        grid: u32,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Injectivity and surjectivity of `x ↦ a·x + b` on periodic strata.
    Surjunctivity {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Constant translation in `[0, 1)`, e.g. `1/3`.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lattice: Vec<String>,
        #[arg(long)]
        lattices: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Kernel-chain stabilization of an endomorphism of `⊕ Z/mᵢ` (0 for Z).
    Dcc {
        /// Cyclic orders, e.g. `4,2,0`.
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Exhaustive checks of the one-chain subshift map.
    Sigma {
        #[arg(long)]
        width: usize,
    },
    /// Tile a window periodically over `(N·Z)^d`.
    Densify {
        /// Cells as `x,y=symbol` separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        default: i64,
    },
    /// Finite-level demonstrations.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
}

#[derive(Subcommand, Debug)]
pub enum Demo {
    /// The shift embedding of `T^N` is injective but misses `(1/2, 0, …)`.
    ShiftEmbed {
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
    /// Multiplication by `p` from `Z/p^m` into `Z/p^{m+1}`.
    Padic {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
}
