//! Command-line and config-file parameters.
//!
//! Every command parameter is optional at this layer so that flags and
//! config-file keys can be layered before defaults are applied.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lresonance::arith::SignFilter;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

pub const PRECEDENCE_NOTE: &str = "\
Parameters are resolved in order of precedence: command-line flags, then keys \
in the --config TOML file, then built-in defaults. Global keys (cache_dir, \
format, output, threads, seed) sit at the top level of the file; command keys \
sit in a table named after the command, e.g. [resonate], using the long flag \
names with dashes replaced by underscores.

Exit status: 0 success, 1 validation error, 2 runtime error, 3 check failure.";

#[derive(Debug, Parser)]
#[command(name = "lresonance", version, about = "Resonance experiments for quadratic Dirichlet L-functions", after_long_help = PRECEDENCE_NOTE)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct GlobalArgs {
    /// TOML file with defaults for any flag.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Directory for cached L-values; caching is off when unset.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Output format (default: json, or csv for lvalue).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the payload here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Reserved; every computation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Half,
    One,
    Sigma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Bs,
    #[value(name = "central_one")]
    CentralOne,
    #[value(name = "sigma_band")]
    SigmaBand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    Exhaustive,
    Guided,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the numeric constants and check closed forms against quadrature.
    #[command(after_long_help = PRECEDENCE_NOTE)]
    Constants(ConstantsArgs),
    /// Character sum over fundamental discriminants against its main term.
    #[command(after_long_help = PRECEDENCE_NOTE)]
    Charsum(CharsumArgs),
    /// Evaluate one L-value.
    #[command(after_long_help = PRECEDENCE_NOTE)]
    Lvalue(LvalueArgs),
    /// Resonance ratio over the family.
    #[command(after_long_help = PRECEDENCE_NOTE)]
    Resonate(ResonateArgs),
    /// Largest values of the target, exhaustive or resonator-guided.
    #[command(after_long_help = PRECEDENCE_NOTE)]
    Search(SearchArgs),
    /// Proportion of the family above the theorem thresholds.
    #[command(after_long_help = PRECEDENCE_NOTE)]
    Proportion(ProportionArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants(_) => "constants",
            Command::Charsum(_) => "charsum",
            Command::Lvalue(_) => "lvalue",
            Command::Resonate(_) => "resonate",
            Command::Search(_) => "search",
            Command::Proportion(_) => "proportion",
        }
    }
}

/// Fills every `None` field of `self` from `other`.
pub trait Layer {
    fn layer(self, other: Self) -> Self;
}

macro_rules! layered {
    ($ty:ty { $($field:ident),* $(,)? } $(flatten { $($sub:ident),* })?) => {
        impl Layer for $ty {
            fn layer(self, other: Self) -> Self {
                Self {
                    $($field: self.$field.or(other.$field),)*
                    $($($sub: self.$sub.layer(other.$sub),)*)?
                }
            }
        }
    };
}

layered!(GlobalArgs { config, cache_dir, format, output, threads, seed });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsArgs {
    /// Largest accepted discrepancy between two forms of a constant [default: 1e-9].
    #[arg(long, allow_negative_numbers = true)]
    pub tolerance: Option<f64>,
}
layered!(ConstantsArgs { tolerance });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharsumArgs {
    /// Bound on |d| [default: 100000].
    #[arg(long = "X")]
    #[serde(rename = "X")]
    pub x: Option<u64>,
    /// Character argument n [default: 1].
    #[arg(long)]
    pub n: Option<u64>,
    /// Sign filter: positive, negative or both [default: both].
    #[arg(long)]
    pub filter: Option<SignFilter>,
    /// Comma-separated X values; fits the residual scaling instead.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<u64>>,
}
layered!(CharsumArgs { x, n, filter, grid });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LvalueArgs {
    /// Fundamental discriminant.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    /// Real point sigma [default: 0.5].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// afe, euler_trunc, prime_sum or oracle [default: by sigma].
    #[arg(long)]
    pub method: Option<String>,
    /// Euler-product or prime-sum length [default: 1000, or the prime-sum default].
    #[arg(long)]
    pub y: Option<f64>,
    /// Absolute tolerance for series and quadrature [default: 1e-10].
    #[arg(long)]
    pub abs_tol: Option<f64>,
}
layered!(LvalueArgs { d, sigma, method, y, abs_tol });

/// Resonator parameters shared by `resonate` and `search`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct FamilyArgs {
    /// Resonator family [default: matches the target].
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Euler-product length for central_one [default: log X log_2 X / c(eta)].
    #[arg(long)]
    pub z: Option<f64>,
    /// eta used to pick the default z [default: 0.1].
    #[arg(long)]
    pub eta: Option<f64>,
    /// Largest exponent kept per prime in Euler resonators.
    #[arg(long)]
    pub exponent_cap: Option<u32>,
    /// Prime bound for sigma_band [default: log X log_2 X].
    #[arg(long = "Y")]
    #[serde(rename = "Y")]
    pub big_y: Option<f64>,
    /// Band value b for sigma_band [default: 0.5].
    #[arg(long)]
    pub b: Option<f64>,
    /// Bondarenko-Seip N [default: 1000].
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub big_n: Option<f64>,
    /// Bondarenko-Seip a [default: 1.5].
    #[arg(long)]
    pub a: Option<f64>,
    /// Bondarenko-Seip delta [default: 0.5].
    #[arg(long)]
    pub delta: Option<f64>,
    /// Window lo:hi or lo:hi:threshold; repeatable [default: 20:60:2.5].
    #[arg(long = "window")]
    pub windows: Option<Vec<String>>,
    /// Use the formula windows instead of the desk-scale override.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub natural_windows: Option<bool>,
}
layered!(FamilyArgs { family, z, eta, exponent_cap, big_y, b, big_n, a, delta, windows, natural_windows });

/// Target and evaluation parameters shared by `resonate` and `search`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct TargetArgs {
    /// Bound on |d| [default: 100000].
    #[arg(long = "X")]
    #[serde(rename = "X")]
    pub x: Option<u64>,
    /// half, one or sigma [default: one].
    #[arg(long, value_enum)]
    pub target: Option<TargetKind>,
    /// sigma for the sigma target [default: 0.75].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Euler-product or prime-sum length of the target [default: by target].
    #[arg(long)]
    pub y: Option<f64>,
    /// Sign filter [default: both].
    #[arg(long)]
    pub filter: Option<SignFilter>,
    /// Absolute tolerance for L(1/2) evaluation [default: 1e-10].
    #[arg(long)]
    pub abs_tol: Option<f64>,
}
layered!(TargetArgs { x, target, sigma, y, filter, abs_tol });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ResonateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub target: TargetArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Number of top records reported [default: 10].
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Factor applied to every resonator value [default: 1].
    #[arg(long)]
    pub scale: Option<f64>,
}
layered!(ResonateArgs { top_k, scale } flatten { target, family });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SearchArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub target: TargetArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Number of extremes kept [default: 20].
    #[arg(long)]
    pub k: Option<usize>,
    /// exhaustive or guided [default: exhaustive].
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyKind>,
    /// R_d^2 quantile below which guided search skips d [default: 0.9].
    #[arg(long)]
    pub quantile: Option<f64>,
    /// Also run the exhaustive search and report the overlap.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub compare: Option<bool>,
}
layered!(SearchArgs { k, strategy, quantile, compare } flatten { target, family });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProportionArgs {
    /// Bound on |d| [default: 100000].
    #[arg(long = "X")]
    #[serde(rename = "X")]
    pub x: Option<u64>,
    /// one or sigma [default: one].
    #[arg(long, value_enum)]
    pub target: Option<TargetKind>,
    /// Threshold parameter eta [default: 0.044].
    #[arg(long)]
    pub eta: Option<f64>,
    /// sigma for the sigma target [default: 0.75].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// b for the sigma target [default: 0.5].
    #[arg(long)]
    pub b: Option<f64>,
    /// Euler-product or prime-sum length [default: by target].
    #[arg(long)]
    pub y: Option<f64>,
    /// Sign filter [default: both].
    #[arg(long)]
    pub filter: Option<SignFilter>,
}
layered!(ProportionArgs { x, target, eta, sigma, b, y, filter });

/// Parsed `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct ConfigFile {
    #[serde(flatten)]
    pub global: GlobalArgs,
    #[serde(default)]
    pub constants: ConstantsArgs,
    #[serde(default)]
    pub charsum: CharsumArgs,
    #[serde(default)]
    pub lvalue: LvalueArgs,
    #[serde(default)]
    pub resonate: ResonateArgs,
    #[serde(default)]
    pub search: SearchArgs,
    #[serde(default)]
    pub proportion: ProportionArgs,
}

/// Field names a type accepts, read off its serialized default.
fn keys_of<T: Serialize + Default>() -> Vec<String> {
    match serde_json::to_value(T::default()) {
        Ok(serde_json::Value::Object(m)) => m.keys().cloned().collect(),
        _ => Vec::new(),
    }
}

impl ConfigFile {
    /// Parses TOML, rejecting keys no command understands.
    pub fn parse(text: &str) -> Result<Self, String> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| e.to_string())?;
        let sections: [(&str, Vec<String>); 6] = [
            ("constants", keys_of::<ConstantsArgs>()),
            ("charsum", keys_of::<CharsumArgs>()),
            ("lvalue", keys_of::<LvalueArgs>()),
            ("resonate", keys_of::<ResonateArgs>()),
            ("search", keys_of::<SearchArgs>()),
            ("proportion", keys_of::<ProportionArgs>()),
        ];
        let globals = keys_of::<GlobalArgs>();
        let mut unknown = Vec::new();
        for (key, value) in &table {
            if globals.contains(key) {
                continue;
            }
            match sections.iter().find(|(name, _)| name == key) {
                Some((name, known)) => match value.as_table() {
                    Some(t) => unknown.extend(t.keys().filter(|k| !known.contains(k)).map(|k| format!("{name}.{k}"))),
                    None => return Err(format!("`{name}` must be a table")),
                },
                None => unknown.push(key.clone()),
            }
        }
        if !unknown.is_empty() {
            return Err(format!("unknown config keys: {}", unknown.join(", ")));
        }
        toml::from_str(text).map_err(|e| e.to_string())
    }
}
