//! Subcommand implementations. Each returns the payload to emit.

use crate::args::*;
use crate::cache::{budget_hash, Cache};
use crate::format::{single, table};
use lresonance::arith::{FundamentalDiscriminant, SignFilter};
use lresonance::constants::{all_reports, ConstantReport, DISCREPANCY_TOLERANCE};
use lresonance::experiments::{
    charsum_empirical, desk_z, extreme_search_cached, proportion_phi, residual_scaling, resonance_ratio_cached,
    to_json, top_k_csv, tsv_series, ProportionTarget, RecordCache, ResonanceConfig, SearchConfig, Strategy, Target,
    DEFAULT_Y_ONE,
};
use lresonance::lfunc::{l_half, l_one_oracle, l_one_truncated, prime_sum_sigma, LValueRecord, Method};
use lresonance::resonator::{BsParams, ResonatorSpec, WindowSpec};
use lresonance::special::PrecisionBudget;
use serde::Serialize;
use std::path::PathBuf;

pub const DEFAULT_X: u64 = 100_000;
pub const DEFAULT_ETA_Z: f64 = 0.1;
pub const DEFAULT_SIGMA: f64 = 0.75;
pub const DEFAULT_B: f64 = 0.5;
pub const DEFAULT_BS: (f64, f64, f64) = (1000.0, 1.5, 0.5);
pub const DEFAULT_WINDOW: &str = "20:60:2.5";
pub const DEFAULT_ETA_PROPORTION: f64 = 0.044;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl From<lresonance::Error> for CliError {
    fn from(e: lresonance::Error) -> Self {
        use lresonance::Error as E;
        match e {
            E::NonConvergence { .. } | E::CapExceeded { .. } | E::Overflow(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("I/O: {e}"))
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Validation(msg.into()))
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub payload: String,
    /// Set when a check failed; the payload is still emitted.
    pub check_failure: Option<String>,
}

impl From<String> for Outcome {
    fn from(payload: String) -> Self {
        Self {
            payload,
            check_failure: None,
        }
    }
}

pub struct Context {
    pub format: Option<Format>,
    pub cache: Option<Cache>,
}

impl Context {
    pub fn new(global: &GlobalArgs) -> Result<Self, CliError> {
        let cache = global.cache_dir.as_ref().map(|d| Cache::open(d)).transpose()?;
        Ok(Self {
            format: global.format,
            cache,
        })
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn cache_dir(&self) -> Option<PathBuf> {
        self.cache.as_ref().map(|c| c.dir().to_path_buf())
    }

    pub fn take_warnings(&mut self) -> Vec<String> {
        self.cache.as_mut().map(|c| c.take_warnings()).unwrap_or_default()
    }

    fn load(&mut self, method: Method, sigma: f64, hash: &str) -> Result<Option<RecordCache>, CliError> {
        match self.cache.as_mut() {
            Some(c) => Ok(Some(c.load(sigma, method, hash)?)),
            None => Ok(None),
        }
    }

    fn store(&mut self, method: Method, sigma: f64, hash: &str, fresh: &[LValueRecord]) -> Result<(), CliError> {
        if let Some(c) = self.cache.as_mut() {
            c.append(sigma, method, hash, fresh)?;
        }
        Ok(())
    }
}

pub fn dispatch(command: Command, ctx: &mut Context) -> Result<Outcome, CliError> {
    match command {
        Command::Constants(a) => constants(a, ctx),
        Command::Charsum(a) => charsum(a, ctx).map(Outcome::from),
        Command::Lvalue(a) => lvalue(a, ctx).map(Outcome::from),
        Command::Resonate(a) => resonate(a, ctx).map(Outcome::from),
        Command::Search(a) => search(a, ctx).map(Outcome::from),
        Command::Proportion(a) => proportion(a, ctx).map(Outcome::from),
    }
}

fn render<T: Serialize>(kind: &str, report: &T, format: Format) -> String {
    match format {
        Format::Json => to_json(kind, report) + "\n",
        Format::Csv => single(report, b','),
        Format::Tsv => single(report, b'\t'),
    }
}

#[derive(Serialize)]
struct ConstantsPayload<'a> {
    tolerance: f64,
    reports: &'a [ConstantReport],
    failed: Vec<String>,
}

fn constants(a: ConstantsArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let tol = a.tolerance.unwrap_or(DISCREPANCY_TOLERANCE);
    if !(tol >= 0.0) || !tol.is_finite() {
        return invalid(format!("tolerance must be a nonnegative finite real, got {tol}"));
    }
    let reports = all_reports()?;
    let failed: Vec<String> = reports.iter().filter(|r| !r.within(tol)).map(|r| r.name.clone()).collect();
    let payload = match ctx.format_or(Format::Csv) {
        Format::Json => {
            to_json(
                "constants",
                &ConstantsPayload {
                    tolerance: tol,
                    reports: &reports,
                    failed: failed.clone(),
                },
            ) + "\n"
        }
        Format::Csv => table(&reports, b','),
        Format::Tsv => table(&reports, b'\t'),
    };
    let check_failure = (!failed.is_empty()).then(|| {
        format!("discrepancy above {tol:e} for: {}", failed.join(", "))
    });
    Ok(Outcome { payload, check_failure })
}

fn charsum(a: CharsumArgs, ctx: &Context) -> Result<String, CliError> {
    let n = a.n.unwrap_or(1);
    let filter = a.filter.unwrap_or_default();
    let format = ctx.format_or(Format::Json);
    if let Some(grid) = a.grid {
        let r = residual_scaling(n, &grid, filter)?;
        return Ok(match format {
            Format::Json => to_json("charsum_scaling", &r) + "\n",
            Format::Csv => table(&r.points, b','),
            Format::Tsv => {
                let pts = r.points.iter().map(|p| (p.x as f64, p.residual.abs())).collect();
                tsv_series(&[("abs_residual", pts)])
            }
        });
    }
    let r = charsum_empirical(a.x.unwrap_or(DEFAULT_X), n, filter)?;
    Ok(render("charsum", &r, format))
}

fn budget_with(abs_tol: Option<f64>) -> Result<PrecisionBudget, CliError> {
    let mut b = PrecisionBudget::default();
    if let Some(t) = abs_tol {
        b.abs_tol = t;
    }
    b.validate()?;
    Ok(b)
}

fn default_method(sigma: f64) -> Method {
    if sigma == 0.5 {
        Method::Afe
    } else if sigma == 1.0 {
        Method::EulerTrunc
    } else {
        Method::PrimeSum
    }
}

fn lvalue(a: LvalueArgs, ctx: &mut Context) -> Result<String, CliError> {
    let Some(d) = a.d else {
        return invalid("lvalue needs --d");
    };
    let fd = FundamentalDiscriminant::new(d)?;
    let sigma = a.sigma.unwrap_or(0.5);
    let method = match a.method {
        Some(m) => m.parse::<Method>()?,
        None => default_method(sigma),
    };
    if !method.consistent_with(sigma) {
        return invalid(format!("method `{method}` cannot evaluate sigma = {sigma}"));
    }
    let budget = budget_with(a.abs_tol)?;
    let length = match (method, a.y) {
        (Method::EulerTrunc | Method::PrimeSum, Some(y)) => y,
        (Method::EulerTrunc, None) => DEFAULT_Y_ONE,
        (Method::PrimeSum, None) => Target::Sigma { sigma }.default_length(fd.abs().max(100) as f64)?,
        _ => 0.0,
    };
    if matches!(method, Method::EulerTrunc | Method::PrimeSum) && !(length >= 2.0 && length.is_finite()) {
        return invalid(format!("y must be a finite real >= 2, got {length}"));
    }
    let hash = budget_hash(method, sigma, &budget, length);
    let cached = ctx.load(method, sigma, &hash)?.and_then(|c| c.get(&d).copied());
    let rec = match cached {
        Some(r) => r,
        None => {
            let r = match method {
                Method::Afe => l_half(&fd, &budget)?,
                Method::EulerTrunc => l_one_truncated(&fd, length),
                Method::PrimeSum => prime_sum_sigma(&fd, sigma, length)?,
                Method::Oracle => l_one_oracle(&fd, &budget)?,
            };
            ctx.store(method, sigma, &hash, &[r])?;
            r
        }
    };
    Ok(match ctx.format_or(Format::Csv) {
        Format::Json => to_json("lvalue", &rec) + "\n",
        Format::Csv => rec.to_csv_row() + "\n",
        Format::Tsv => rec.to_csv_row().replace(',', "\t") + "\n",
    })
}

fn parse_window(s: &str) -> Result<WindowSpec, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Validation(format!("bad number `{t}` in window `{s}`")))
    };
    match parts.as_slice() {
        [lo, hi] => Ok(WindowSpec {
            lo: num(lo)?,
            hi: num(hi)?,
            threshold: None,
        }),
        [lo, hi, t] => Ok(WindowSpec {
            lo: num(lo)?,
            hi: num(hi)?,
            threshold: Some(num(t)?),
        }),
        _ => invalid(format!("window `{s}` must be lo:hi or lo:hi:threshold")),
    }
}

fn resolve_target(t: &TargetArgs) -> Target {
    match t.target.unwrap_or(TargetKind::One) {
        TargetKind::Half => Target::Half,
        TargetKind::One => Target::One,
        TargetKind::Sigma => Target::Sigma {
            sigma: t.sigma.unwrap_or(DEFAULT_SIGMA),
        },
    }
}

fn resolve_x(t: &TargetArgs) -> Result<u64, CliError> {
    let x = t.x.unwrap_or(DEFAULT_X);
    if x < 16 {
        return invalid(format!("X must be at least 16, got {x}"));
    }
    Ok(x)
}

fn resolve_spec(f: &FamilyArgs, target: Target, x: u64) -> Result<ResonatorSpec, CliError> {
    let family = f.family.unwrap_or(match target {
        Target::Half => Family::Bs,
        Target::One => Family::CentralOne,
        Target::Sigma { .. } => Family::SigmaBand,
    });
    let xf = x as f64;
    let spec = match family {
        Family::CentralOne => ResonatorSpec::CentralOne {
            z: match f.z {
                Some(z) => z,
                None => desk_z(xf, f.eta.unwrap_or(DEFAULT_ETA_Z))?,
            },
            exponent_cap: f.exponent_cap,
        },
        Family::SigmaBand => {
            if xf.ln().ln() <= 0.0 && f.big_y.is_none() {
                return invalid("X too small for the default Y; pass --Y");
            }
            ResonatorSpec::SigmaBand {
                y: f.big_y.unwrap_or(xf.ln() * xf.ln().ln()),
                b: f.b.unwrap_or(DEFAULT_B),
                exponent_cap: f.exponent_cap,
            }
        }
        Family::Bs => {
            let (n, a, delta) = DEFAULT_BS;
            let params = BsParams::new(f.big_n.unwrap_or(n), f.a.unwrap_or(a), f.delta.unwrap_or(delta))?;
            let params = if f.natural_windows.unwrap_or(false) {
                if f.windows.is_some() {
                    return invalid("--window and --natural-windows are mutually exclusive");
                }
                params
            } else {
                let specs = match &f.windows {
                    Some(ws) => ws.iter().map(|w| parse_window(w)).collect::<Result<Vec<_>, _>>()?,
                    None => vec![parse_window(DEFAULT_WINDOW)?],
                };
                params.with_windows(specs)?
            };
            ResonatorSpec::Bs(params)
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn records_tsv(records: &[LValueRecord]) -> String {
    let pts = records.iter().map(|r| (r.d as f64, r.value)).collect();
    tsv_series(&[("top_k", pts)])
}

fn resonate(a: ResonateArgs, ctx: &mut Context) -> Result<String, CliError> {
    let target = resolve_target(&a.target);
    let x = resolve_x(&a.target)?;
    let spec = resolve_spec(&a.family, target, x)?;
    let mut config = ResonanceConfig::new(x, spec, target);
    config.filter = a.target.filter.unwrap_or(SignFilter::Both);
    config.y = a.target.y;
    config.budget = budget_with(a.target.abs_tol)?;
    config.resonator_scale = a.scale.unwrap_or(1.0);
    config.top_k = a.top_k.unwrap_or(10);
    config.validate()?;
    let method = target.method();
    let hash = budget_hash(method, target.sigma(), &config.budget, config.length()?);
    let cache = ctx.load(method, target.sigma(), &hash)?;
    let (report, fresh) = resonance_ratio_cached(&config, cache.as_ref())?;
    ctx.store(method, target.sigma(), &hash, &fresh)?;
    Ok(match ctx.format_or(Format::Json) {
        Format::Json => to_json("resonate", &report) + "\n",
        Format::Csv => top_k_csv(&report.top_k),
        Format::Tsv => records_tsv(&report.top_k),
    })
}

fn search(a: SearchArgs, ctx: &mut Context) -> Result<String, CliError> {
    let target = resolve_target(&a.target);
    let x = resolve_x(&a.target)?;
    let strategy = match a.strategy.unwrap_or(StrategyKind::Exhaustive) {
        StrategyKind::Exhaustive => Strategy::Exhaustive,
        StrategyKind::Guided => Strategy::ResonatorGuided {
            spec: resolve_spec(&a.family, target, x)?,
            quantile: a.quantile.unwrap_or(0.9),
        },
    };
    let mut config = SearchConfig::new(x, target, a.k.unwrap_or(20), strategy);
    config.filter = a.target.filter.unwrap_or(SignFilter::Both);
    config.y = a.target.y;
    config.budget = budget_with(a.target.abs_tol)?;
    config.compare = a.compare.unwrap_or(false);
    let length = match config.y {
        Some(y) => y,
        None => target.default_length(x as f64)?,
    };
    let method = target.method();
    let hash = budget_hash(method, target.sigma(), &config.budget, length);
    let cache = ctx.load(method, target.sigma(), &hash)?;
    let (report, fresh) = extreme_search_cached(&config, cache.as_ref())?;
    ctx.store(method, target.sigma(), &hash, &fresh)?;
    Ok(match ctx.format_or(Format::Json) {
        Format::Json => to_json("search", &report) + "\n",
        Format::Csv => top_k_csv(&report.top_k),
        Format::Tsv => records_tsv(&report.top_k),
    })
}

fn proportion(a: ProportionArgs, ctx: &Context) -> Result<String, CliError> {
    let eta = a.eta.unwrap_or(DEFAULT_ETA_PROPORTION);
    let target = match a.target.unwrap_or(TargetKind::One) {
        TargetKind::One => ProportionTarget::One { eta },
        TargetKind::Sigma => ProportionTarget::Sigma {
            sigma: a.sigma.unwrap_or(DEFAULT_SIGMA),
            b: a.b.unwrap_or(DEFAULT_B),
            eta,
        },
        TargetKind::Half => return invalid("proportion supports the one and sigma targets"),
    };
    let r = proportion_phi(a.x.unwrap_or(DEFAULT_X), target, a.filter.unwrap_or_default(), a.y)?;
    Ok(render("proportion", &r, ctx.format_or(Format::Json)))
}
