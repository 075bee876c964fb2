use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Used when neither `--seed` nor `IDEMSUM_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_011_979;

#[derive(Debug, Parser)]
#[command(
    name = "idemsum",
    version,
    about = "Idempotent sums: build, verify, and classify"
)]
pub struct Cli {
    /// Seed for every random choice (overrides IDEMSUM_SEED). Under
    /// `orbit` it is the rational orbit seed instead.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub seed: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or verify explicit families.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Parameter sets Λ.
    #[command(subcommand)]
    Lambda(LambdaCmd),
    /// Orbits of x ↦ 1 − x, x ↦ −1 − x.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Intertwiners and unitarization.
    #[command(subcommand)]
    Equiv(EquivCmd),
    /// Wildness functors and fullness trials.
    #[command(subcommand)]
    Wild(WildCmd),
    /// Polynomial identities.
    #[command(subcommand)]
    Identity(IdentityCmd),
    /// Parameter scans.
    #[command(subcommand)]
    Scan(ScanCmd),
}

#[derive(Debug, Subcommand)]
pub enum FamilyCmd {
    Build(BuildArgs),
    Verify {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Q1,
    P332,
    Q2perp,
    Su2,
    Diagphipsi,
    Cuntz5,
    #[value(name = "orbitA40", alias = "orbita40")]
    OrbitA40,
    Sl2diff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    #[value(alias = "+", alias = "1")]
    Plus,
    #[value(alias = "-", alias = "-1")]
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichArg {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    Ii,
    #[value(name = "III")]
    Iii,
    #[value(name = "IV")]
    Iv,
    #[value(name = "V")]
    V,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub kind: FamilyKind,
    /// q1: off-diagonal parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    /// q2perp: off-diagonal parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// q2perp: which generator is nonzero.
    #[arg(long, value_enum)]
    pub which: Option<WhichArg>,
    /// su2: half the dimension.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_enum, allow_hyphen_values = true)]
    pub sign: Option<SignArg>,
    /// Rational for su2; `re`, `re,im` or `a+bi` for the truncated kinds.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// diagphipsi: number of 2x2 blocks.
    #[arg(long)]
    pub blocks: Option<usize>,
    /// cuntz5: truncation size.
    #[arg(long = "N", alias = "size")]
    pub big_n: Option<usize>,
    /// orbitA40: orbit case.
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    /// orbitA40 case I: orbit seed in (-1/2, 1/2).
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// orbitA40 cases II and III: the ±1/2 action.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// orbitA40: orbit depth.
    #[arg(long)]
    pub depth: Option<usize>,
    /// sl2diff: ±1.
    #[arg(long, allow_hyphen_values = true)]
    pub branch: Option<i8>,
    /// sl2diff: polynomial degree bound.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Manifest path; generator files are written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum LambdaCmd {
    Set {
        #[arg(long)]
        n: u32,
        /// l2, l3, l4bd, cf1, cf2, orb2 or orbhalf.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        count: usize,
    },
    Member {
        #[arg(long, allow_hyphen_values = true)]
        value: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum OrbitCmd {
    Enum(OrbitArgs),
    Fundamental(OrbitArgs),
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub depth: usize,
}

#[derive(Debug, Subcommand)]
pub enum EquivCmd {
    Hom {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Also intertwine the adjoints.
        #[arg(long)]
        star: bool,
    },
    Unitarize {
        #[arg(long)]
        a: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Writes the self-adjoint family here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuilderArg {
    Wild1a,
    Wild1b,
    Wild2,
}

#[derive(Debug, Subcommand)]
pub enum WildCmd {
    Build {
        #[arg(long, value_enum)]
        builder: BuilderArg,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long)]
        subdim: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Fullness {
        #[arg(long, value_enum)]
        builder: BuilderArg,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long)]
        trials: usize,
        /// Largest substitution size.
        #[arg(long, default_value_t = 3)]
        subdim: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum IdentityCmd {
    S4 {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        wordlen: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScanCmd {
    Lambda4 {
        /// `a:b:step` with rational endpoints and step.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}
