mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

/// Fundamental-cone tools for the PG(2, q) LDPC codes.
#[derive(Debug, Parser, Serialize)]
#[command(name = "pgcone", version)]
pub struct Cli {
    /// Directory for artifacts (alist, JSON-lines, CSV, traces).
    #[arg(long, global = true, env = "PGCONE_OUT_DIR", default_value = "pgcone-out")]
    pub out_dir: PathBuf,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Print results as JSON instead of a human summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Build, check and export the plane incidence matrix.
    #[command(subcommand)]
    Plane(PlaneCmd),
    /// Low-weight codewords.
    #[command(subcommand)]
    Codewords(CodewordsCmd),
    /// Membership, minimality and type of a vector.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Pseudo-weights and lower bounds.
    #[command(subcommand)]
    Weights(WeightsCmd),
    /// Extreme-ray enumeration and histograms.
    #[command(subcommand)]
    Rays(RaysCmd),
    /// LP decoding of the all-zeros codeword.
    #[command(subcommand)]
    Decode(DecodeCmd),
    /// Effectiveness of minimal pseudo-codewords.
    #[command(subcommand)]
    Effective(EffectiveCmd),
    /// Explicit minimal pseudo-codeword constructions.
    #[command(subcommand)]
    Construct(ConstructCmd),
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct MatrixArgs {
    /// Plane order, a power of two.
    #[arg(long, required_unless_present = "alist")]
    pub q: Option<u64>,
    /// Read the parity-check matrix from an alist file instead.
    #[arg(long, conflicts_with = "q")]
    pub alist: Option<PathBuf>,
    /// Primitive polynomial for GF(q), bit-encoded.
    #[arg(long, value_parser = parse_poly)]
    pub small_poly: Option<u32>,
    /// Primitive polynomial for GF(q^3), bit-encoded.
    #[arg(long, value_parser = parse_poly)]
    pub big_poly: Option<u32>,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct PlaneArgs {
    /// Plane order, a power of two.
    #[arg(long)]
    pub q: u64,
    /// Primitive polynomial for GF(q), bit-encoded.
    #[arg(long, value_parser = parse_poly)]
    pub small_poly: Option<u32>,
    /// Primitive polynomial for GF(q^3), bit-encoded.
    #[arg(long, value_parser = parse_poly)]
    pub big_poly: Option<u32>,
}

fn parse_poly(s: &str) -> Result<u32, String> {
    let r = match s.strip_prefix("0x") {
        Some(hex) => u32::from_str_radix(hex, 16),
        None => match s.strip_prefix("0b") {
            Some(bin) => u32::from_str_radix(bin, 2),
            None => s.parse(),
        },
    };
    r.map_err(|e| format!("bad polynomial {s:?}: {e}"))
}

#[derive(Debug, Subcommand, Serialize)]
pub enum PlaneCmd {
    /// Write the incidence matrix (alist) and metadata (JSON).
    Build(PlaneArgs),
    /// Verify the plane axioms and the cyclic structure.
    Check(PlaneArgs),
    /// Print the incidence matrix.
    Export {
        #[command(flatten)]
        plane: PlaneArgs,
        #[arg(long, value_enum, default_value_t = ExportFormat::Alist)]
        format: ExportFormat,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum ExportFormat {
    Alist,
    Dense,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum CodewordsCmd {
    /// Nonzero codewords up to a weight, one support per line.
    Min {
        #[command(flatten)]
        plane: PlaneArgs,
        /// Largest weight listed (default q + 2).
        #[arg(long)]
        w_max: Option<usize>,
        /// Cap on hyperovals when the code is too large to enumerate.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct VectorArg {
    /// Comma-separated entries: integers, p/q fractions or decimals.
    #[arg(long, allow_hyphen_values = true)]
    pub vector: String,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum ConeCmd {
    Member {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        vector: VectorArg,
    },
    Minimal {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        vector: VectorArg,
    },
    Type {
        #[command(flatten)]
        vector: VectorArg,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum WeightsCmd {
    /// AWGNC, BSC and BEC pseudo-weights.
    Compute {
        #[command(flatten)]
        vector: VectorArg,
    },
    /// Every lower bound with its applicability.
    Bounds {
        /// Plane order the vector belongs to.
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        vector: VectorArg,
        /// Extra values of eta for the eta-parameterized bounds.
        #[arg(long, value_delimiter = ',')]
        eta: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum Kind {
    Awgnc,
    Bsc,
    Bec,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct BudgetArgs {
    /// Stop after this many seconds and emit the certified partial set.
    #[arg(long)]
    pub max_seconds: Option<f64>,
    /// Stop once this many intermediate rays would be held.
    #[arg(long)]
    pub max_rays: Option<usize>,
    /// Shuffle the insertion order with this seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum RaysCmd {
    /// Double description; writes a JSON-lines ray file.
    Enumerate {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Pseudo-weight histogram as CSV.
    Histogram {
        /// Ray file from `rays enumerate`; enumerates afresh when absent.
        #[arg(long)]
        rays: Option<PathBuf>,
        /// Plane order used when no ray file is given.
        #[arg(long, required_unless_present = "rays")]
        q: Option<u64>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Pseudo-weight to bin.
        #[arg(long, value_enum, default_value_t = Kind::Awgnc)]
        kind: Kind,
        /// Bin width (default 1).
        #[arg(long, default_value = "1")]
        bin_width: String,
    },
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct FlipArgs {
    /// Plane order, a power of two.
    #[arg(long)]
    pub q: u64,
    /// Comma-separated flipped positions.
    #[arg(long, value_delimiter = ',')]
    pub flips: Vec<usize>,
    /// Channel reliability L.
    #[arg(long, default_value = "1")]
    pub l: String,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum DecodeCmd {
    /// Is zero optimal over the cone for this flip pattern?
    ZeroOpt(FlipArgs),
    /// Classify every (or sampled) pattern of e flips; CSV.
    Sweep {
        /// Plane order, a power of two.
        #[arg(long)]
        q: u64,
        /// Flip counts, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        e: Vec<usize>,
        /// Channel reliability L.
        #[arg(long, default_value = "1")]
        l: String,
        /// Sample this many patterns instead of all of them.
        #[arg(long)]
        samples: Option<usize>,
        /// Seed for sampled patterns.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Full fundamental-polytope LP.
    Feldman(FlipArgs),
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct EffectArgs {
    /// Complete ray file; enumerates afresh when absent.
    #[arg(long)]
    pub rays: Option<PathBuf>,
    /// Plane order used when no ray file is given.
    #[arg(long, required_unless_present = "rays")]
    pub q: Option<u64>,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum EffectiveCmd {
    /// First-kind effectiveness on the AWGNC, one LP per ray.
    Awgnc(EffectArgs),
    /// Exhaustive sign scan on the BSC, with the BSC-weight window screen.
    Bsc(EffectArgs),
}

#[derive(Debug, Subcommand, Serialize)]
pub enum ConstructCmd {
    /// Two overlapping codewords plus log2(q) zeros switched to 2.
    Ex3 {
        #[command(flatten)]
        plane: PlaneArgs,
        /// Count every certified switch set instead of stopping at the first.
        #[arg(long)]
        count_all: bool,
        /// Codeword pairs visited by --count-all.
        #[arg(long, requires = "count_all")]
        pair_limit: Option<usize>,
    },
    /// Two zero lines and an α-threshold switch (q = 4).
    Ex5 {
        /// Raise only P1 and P2, not their lines' intersection.
        #[arg(long)]
        pair_only: bool,
    },
    /// Switch sets in general position, checked against the conjectured weight.
    Conjecture {
        #[command(flatten)]
        plane: PlaneArgs,
        /// Codeword pairs to try.
        #[arg(long, default_value_t = 8)]
        pair_limit: usize,
        /// Count every certified switch set instead of stopping at the first.
        #[arg(long)]
        count_all: bool,
    },
}

/// Usage problems found after parsing; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            eprintln!("run `pgcone --help` for usage");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
