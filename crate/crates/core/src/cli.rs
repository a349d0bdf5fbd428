//! Command-line front end.
//!
//! Every command is a pure function of its arguments, config file and seed:
//! CSV output carries no timestamps, and the run manifest written next to an
//! `--out` file records everything needed to repeat the run.
//!
//! OSNR flags named `--osnr-db` take decibels, converted as `10^(dB/10)`;
//! `--osnr` takes a linear value.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::audit::{run_audit, staircase, AuditSpec};
use crate::capacity::CapacityBoundKind;
use crate::channel::{BlockLen, ChannelConfig, ChannelSampler, FadingModel, StreamFamily};
use crate::coding::{pairwise_union_bound, simulate_conditional_error_with, CodebookMode};
use crate::dmt::{
    ardo_lognormal, dmt_gammagamma, dmt_lognormal, dmt_negexp, dmt_reference, r_grid, DmtResult, ReferenceScheme,
};
use crate::error::{Error, Result};
use crate::exponent::ChannelKind;
use crate::outage::{db_to_linear, estimate_outage_sweep, fit_slope, HIT_FLOOR};
use crate::power::InputLaw;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Environment variable holding the log filter.
pub const LOG_ENV: &str = "OWC_DMT_LOG";
/// Mixed into the seed for the channel draws of `coding-sim`, keeping them
/// apart from the trial streams.
const CHANNEL_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Parser, Debug)]
#[command(name = "owc-dmt", version, about = "DMT toolkit for optical MIMO links under peak and average power limits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form DMT curve over an r grid.
    DmtCurve(DmtCurveArgs),
    /// Monte Carlo outage probability over OSNR points.
    OutageSim(OutageSimArgs),
    /// Random-coding ML error rate at fixed channel draws, with the union bound.
    CodingSim(CodingSimArgs),
    /// Analytic-versus-grid audit of the exponent optimizer.
    ExponentCheck(ExponentCheckArgs),
    /// Asymptotically relative diversity order of the single-receiver log-normal link.
    Ardo(ArdoArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Negexp,
    Gg,
    Ln,
}

impl KindArg {
    fn name(self) -> &'static str {
        match self {
            KindArg::Negexp => "negexp",
            KindArg::Gg => "gg",
            KindArg::Ln => "ln",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    Lower,
    Upper,
}

impl From<BoundArg> for CapacityBoundKind {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::Lower => CapacityBoundKind::Lower,
            BoundArg::Upper => CapacityBoundKind::Upper,
        }
    }
}

/// Flags shared by all commands.
#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// JSON channel configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output CSV path; stdout when absent. A manifest is written to `<out>.manifest.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Channel flags used when no `--config` is given.
#[derive(Args, Debug, Clone)]
pub struct ChannelArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Negexp)]
    pub kind: KindArg,
    #[arg(long, default_value_t = 2)]
    pub nt: usize,
    #[arg(long, default_value_t = 1)]
    pub nr: usize,
    /// Peak amplitude A.
    #[arg(long, default_value_t = 1.0)]
    pub amp: f64,
    /// Average power E.
    #[arg(long, default_value_t = 1.0)]
    pub avg_power: f64,
    #[arg(long, default_value_t = 1.0)]
    pub noise_sigma: f64,
    /// Gamma-gamma shape parameters.
    #[arg(long, default_value_t = 4.2)]
    pub rho1: f64,
    #[arg(long, default_value_t = 1.4)]
    pub rho2: f64,
    /// Log-normal location and scale.
    #[arg(long, default_value_t = 0.0)]
    pub mu_l: f64,
    #[arg(long, default_value_t = 0.5)]
    pub sigma_l: f64,
}

impl ChannelArgs {
    fn config(&self, path: Option<&Path>) -> Result<ChannelConfig> {
        if let Some(p) = path {
            return ChannelConfig::from_json_str(&fs::read_to_string(p)?);
        }
        let fading = match self.kind {
            KindArg::Negexp => FadingModel::NegExp,
            KindArg::Gg => FadingModel::GammaGamma { rho1: self.rho1, rho2: self.rho2 },
            KindArg::Ln => FadingModel::LogNormal { mu_l: self.mu_l, sigma_l: self.sigma_l },
        };
        let cfg = ChannelConfig::new(self.nt, self.nr, fading)
            .with_power(self.amp, self.avg_power)
            .with_noise_sigma(self.noise_sigma);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
pub struct DmtCurveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = KindArg::Negexp)]
    pub kind: KindArg,
    #[arg(long, default_value_t = 2)]
    pub nt: usize,
    #[arg(long, default_value_t = 1)]
    pub nr: usize,
    /// Block length: integer or `inf`.
    #[arg(long, default_value = "inf")]
    pub l: BlockLen,
    /// Rate or grid `start:step:stop`; default `0:0.1:n_r`.
    #[arg(long)]
    pub r: Option<String>,
    /// Gamma-gamma `min(rho1, rho2)`.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_l: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta1: f64,
    /// Linear OSNR at which log-normal curves are evaluated.
    #[arg(long)]
    pub osnr: Option<f64>,
    /// Append the RF reference curves.
    #[arg(long)]
    pub reference: bool,
}

#[derive(Args, Debug)]
pub struct OutageSimArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Rate or grid `start:step:stop`.
    #[arg(long, default_value = "0.5")]
    pub r: String,
    /// Comma list or grid `start:step:stop` in dB.
    #[arg(long, default_value = "10,20,30")]
    pub osnr_db: String,
    /// Capacity bound; both when absent.
    #[arg(long, value_enum)]
    pub bound: Option<BoundArg>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Append one slope-fit row per (r, bound).
    #[arg(long)]
    pub fit: bool,
}

#[derive(Args, Debug)]
pub struct CodingSimArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value = "0.5")]
    pub r: String,
    #[arg(long, default_value_t = 2)]
    pub l: u32,
    #[arg(long, default_value = "20,30")]
    pub osnr_db: String,
    /// Trials per (channel draw, OSNR).
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Index of the first channel draw.
    #[arg(long, default_value_t = 0)]
    pub draw: u64,
    /// Number of consecutive channel draws.
    #[arg(long, default_value_t = 1)]
    pub draws: u64,
    /// Reuse one codebook for every trial.
    #[arg(long)]
    pub fixed_codebook: bool,
}

#[derive(Args, Debug)]
pub struct ExponentCheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Largest n_t of the audit grid.
    #[arg(long, default_value_t = 4)]
    pub max_nt: usize,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[arg(long, default_value_t = 0.25)]
    pub r_step: f64,
    /// Link used for the coding-minimizer listing.
    #[arg(long, default_value_t = 16)]
    pub nt: usize,
    #[arg(long, default_value_t = 4)]
    pub nr: usize,
    /// Adds a constant to every grid value so the audit must fail.
    #[arg(long, hide = true, default_value_t = 0.0)]
    pub corrupt: f64,
}

#[derive(Args, Debug)]
pub struct ArdoArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 2)]
    pub nt: usize,
    #[arg(long, default_value_t = 1)]
    pub nr: usize,
    #[arg(long, default_value = "inf")]
    pub l: BlockLen,
    #[arg(long, default_value = "0:0.1:1")]
    pub r: String,
}

/// Record written next to every `--out` file.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub config_path: Option<PathBuf>,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub tool_version: String,
    pub timestamp: String,
}

/// Manifest path for an output file.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Parse a single value or an inclusive grid `start:step:stop`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| {
        t.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("cannot parse '{t}' as a number")))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b, c] => r_grid(num(a)?, num(b)?, num(c)?),
        _ => Err(Error::InvalidArgument(format!("expected a number or start:step:stop, got '{s}'"))),
    }
}

/// Parse a comma list, where each item may itself be a grid.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.split(',').filter(|t| !t.trim().is_empty()) {
        out.extend(parse_grid(item)?);
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("empty list".into()));
    }
    Ok(out)
}

fn header(schema: &str, columns: &str) -> String {
    format!("# owc-dmt {TOOL_VERSION} schema={schema}\n{columns}\n")
}

/// Install the logger once; the filter comes from `OWC_DMT_LOG` (default `warn`).
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Outcome of a command: CSV text and process exit code.
struct Output {
    text: String,
    code: i32,
}

/// Parse `args` (including the program name) and run. The CSV goes to
/// `--out` when given, else to `stdout`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            write!(stdout, "{e}")?;
            return Ok(0);
        }
        Err(e) => return Err(Error::InvalidArgument(e.to_string())),
    };
    let (name, common) = match &cli.command {
        Command::DmtCurve(a) => ("dmt-curve", &a.common),
        Command::OutageSim(a) => ("outage-sim", &a.common),
        Command::CodingSim(a) => ("coding-sim", &a.common),
        Command::ExponentCheck(a) => ("exponent-check", &a.common),
        Command::Ardo(a) => ("ardo", &a.common),
    };
    let body = || -> Result<Output> {
        match &cli.command {
            Command::DmtCurve(a) => cmd_dmt_curve(a),
            Command::OutageSim(a) => cmd_outage_sim(a),
            Command::CodingSim(a) => cmd_coding_sim(a),
            Command::ExponentCheck(a) => cmd_exponent_check(a),
            Command::Ardo(a) => cmd_ardo(a),
        }
    };
    let output = match common.workers {
        Some(0) => return Err(Error::InvalidArgument("--workers must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start {n} workers: {e}")))?
            .install(body)?,
        None => body()?,
    };
    match &common.out {
        Some(path) => {
            fs::write(path, &output.text)?;
            let manifest = RunManifest {
                command: name.to_string(),
                args: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
                config_path: common.config.clone(),
                seed: common.seed,
                output_path: Some(path.clone()),
                tool_version: TOOL_VERSION.to_string(),
                timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            };
            fs::write(manifest_path(path), serde_json::to_string_pretty(&manifest)? + "\n")?;
        }
        None => stdout.write_all(output.text.as_bytes())?,
    }
    Ok(output.code)
}

fn push_dmt_row(text: &mut String, d: &DmtResult, kind: &str, scheme: &str) {
    text.push_str(&format!("{},{},{},{},{kind},{scheme}\n", d.r, d.d_lower, d.d_upper, d.exact));
}

fn cmd_dmt_curve(a: &DmtCurveArgs) -> Result<Output> {
    // A config file supplies the link, block length and fading law; flags fill the rest.
    let (nt, nr, l, kind, rho, sigma_l) = match &a.common.config {
        Some(p) => {
            let cfg = ChannelConfig::from_json_str(&fs::read_to_string(p)?)?;
            match cfg.fading {
                FadingModel::NegExp => (cfg.n_t, cfg.n_r, cfg.block_len, KindArg::Negexp, a.rho, a.sigma_l),
                FadingModel::GammaGamma { rho1, rho2 } => {
                    (cfg.n_t, cfg.n_r, cfg.block_len, KindArg::Gg, Some(rho1.min(rho2)), a.sigma_l)
                }
                FadingModel::LogNormal { sigma_l, .. } => {
                    (cfg.n_t, cfg.n_r, cfg.block_len, KindArg::Ln, a.rho, sigma_l)
                }
            }
        }
        None => (a.nt, a.nr, a.l, a.kind, a.rho, a.sigma_l),
    };
    let rs = match &a.r {
        Some(s) => parse_grid(s)?,
        None => r_grid(0.0, 0.1, nr as f64)?,
    };
    let mut text = header("dmt-curve-v1", "r,d_lower,d_upper,exact,kind,scheme");
    for &r in &rs {
        let d = match kind {
            KindArg::Negexp => dmt_negexp(nt, nr, l, r)?,
            KindArg::Gg => {
                let rho = rho.ok_or_else(|| Error::InvalidArgument("--kind gg requires --rho".into()))?;
                dmt_gammagamma(nt, nr, l, r, rho)?
            }
            KindArg::Ln => {
                let osnr = a.osnr.ok_or_else(|| Error::InvalidArgument("--kind ln requires --osnr (linear)".into()))?;
                dmt_lognormal(nt, nr, l, r, sigma_l, a.beta1, osnr)?
            }
        };
        push_dmt_row(&mut text, &d, kind.name(), "optical");
    }
    if a.reference {
        let r_max = nt.min(nr) as f64;
        for scheme in [ReferenceScheme::ZhengTse, ReferenceScheme::JaiswalBhatnagar] {
            for &r in rs.iter().filter(|&&r| r <= r_max) {
                push_dmt_row(&mut text, &dmt_reference(scheme, nt, nr, l, r)?, "reference", scheme.name());
            }
        }
    }
    Ok(Output { text, code: 0 })
}

fn cmd_outage_sim(a: &OutageSimArgs) -> Result<Output> {
    let cfg = a.channel.config(a.common.config.as_deref())?;
    let rs = parse_grid(&a.r)?;
    let dbs = parse_list(&a.osnr_db)?;
    let osnrs: Vec<f64> = dbs.iter().map(|&d| db_to_linear(d)).collect();
    let bounds = match a.bound {
        Some(b) => vec![b.into()],
        None => vec![CapacityBoundKind::Lower, CapacityBoundKind::Upper],
    };
    let mut text = header("outage-v1", "osnr_db,r,kind,p_hat,ci_half_width,n_samples,n_hits,seed");
    let mut fits = String::new();
    let mut code = 0;
    for &r in &rs {
        for &kind in &bounds {
            let est = estimate_outage_sweep(&cfg, r, &osnrs, a.samples, a.common.seed, kind)?;
            for (db, e) in dbs.iter().zip(&est) {
                text.push_str(&format!(
                    "{db},{r},{},{},{},{},{},{}\n",
                    kind.as_str(),
                    e.p_hat,
                    e.half_width,
                    e.n_samples,
                    e.n_hits,
                    e.seed
                ));
            }
            if a.fit {
                // Fit rows reuse the columns: p_hat holds d_hat, ci_half_width the
                // standard error and n_hits the number of points used.
                match fit_slope(&dbs, &est, HIT_FLOOR) {
                    Ok(f) => fits.push_str(&format!(
                        "fit,{r},{},{},{},{},{},{}\n",
                        kind.as_str(),
                        f.d_hat,
                        f.stderr,
                        a.samples,
                        f.points.len(),
                        a.common.seed
                    )),
                    Err(e) => {
                        log::error!("r = {r}, {}: {e}", kind.as_str());
                        code = 3;
                    }
                }
            }
        }
    }
    text.push_str(&fits);
    Ok(Output { text, code })
}

fn cmd_coding_sim(a: &CodingSimArgs) -> Result<Output> {
    let cfg = a.channel.config(a.common.config.as_deref())?;
    let rs = parse_grid(&a.r)?;
    let dbs = parse_list(&a.osnr_db)?;
    let law = InputLaw::for_config(&cfg)?;
    let sampler = ChannelSampler::new(&cfg)?;
    let channel_seed = a.common.seed ^ CHANNEL_SEED_SALT;
    let channels = StreamFamily::new(channel_seed);
    let mode = if a.fixed_codebook { CodebookMode::Fixed } else { CodebookMode::Ensemble };
    let mut text = header("coding-v1", "osnr_db,r,l,p_err,ci,bound_value,n_trials,seed,draw");
    for draw in a.draw..a.draw + a.draws {
        let h = sampler.sample_indexed(&channels, channel_seed, draw);
        for &r in &rs {
            for &db in &dbs {
                let osnr = db_to_linear(db);
                let e = simulate_conditional_error_with(&h, &cfg, r, osnr, a.l, a.samples, a.common.seed, mode)?;
                let b = pairwise_union_bound(&h, osnr, a.l, r, &law)?;
                text.push_str(&format!(
                    "{db},{r},{},{},{},{b},{},{},{draw}\n",
                    a.l, e.p_hat, e.half_width, e.n_samples, e.seed
                ));
            }
        }
    }
    Ok(Output { text, code: 0 })
}

fn cmd_exponent_check(a: &ExponentCheckArgs) -> Result<Output> {
    let spec =
        AuditSpec { max_nt: a.max_nt, r_step: a.r_step, grid_step: a.step, offset: a.corrupt, ..AuditSpec::default() };
    let report = run_audit(&spec)?;
    let mut text = header("exponent-check-v1", "kind,objective,domain,cases,max_delta,max_ratio,violations");
    for row in &report.rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.kind, row.objective, row.domain, row.cases, row.max_delta, row.max_ratio, row.violations
        ));
    }
    for f in report.failures.iter().take(20) {
        log::error!(
            "{} {} {} {}x{} r={} l={:?}: analytic {} grid {} eps {}",
            f.kind,
            f.objective,
            f.domain,
            f.n_t,
            f.n_r,
            f.r,
            f.l,
            f.analytic,
            f.grid,
            f.eps_lip
        );
    }
    let ls: Vec<u32> = (1..=(a.nt * a.nr + a.nr) as u32).collect();
    text.push_str(&format!("# negexp {}x{} coding minimizers at r = 0\n# l,value,argmin\n", a.nt, a.nr));
    for (l, v, arg) in staircase(ChannelKind::NegExp, a.nt, a.nr, 0.0, &ls)? {
        let arg: Vec<String> = arg.iter().map(|x| x.to_string()).collect();
        text.push_str(&format!("# {l},{v},{}\n", arg.join(" ")));
    }
    Ok(Output { text, code: if report.passed() { 0 } else { 1 } })
}

fn cmd_ardo(a: &ArdoArgs) -> Result<Output> {
    let mut text = header("ardo-v1", "r,lower,upper,l");
    for r in parse_grid(&a.r)? {
        let (lo, hi) = ardo_lognormal(a.nt, a.nr, a.l, r)?;
        text.push_str(&format!("{r},{lo},{hi},{}\n", a.l));
    }
    Ok(Output { text, code: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (String, i32) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("owc-dmt").chain(args.iter().copied()), &mut buf).unwrap();
        (String::from_utf8(buf).unwrap(), code)
    }

    fn data_rows(s: &str) -> Vec<&str> {
        s.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:0.1:4").unwrap().len(), 41);
        assert_eq!(parse_grid("0.5").unwrap(), vec![0.5]);
        assert!(parse_grid("1:2").is_err());
        assert_eq!(parse_list("30,40:10:60").unwrap(), vec![30.0, 40.0, 50.0, 60.0]);
        assert!(parse_list("").is_err());
    }

    #[test]
    fn dmt_curve_negexp() {
        let (out, code) =
            run_str(&["dmt-curve", "--kind", "negexp", "--nt", "16", "--nr", "4", "--l", "inf", "--r", "0:0.1:4"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("# owc-dmt "));
        let rows = data_rows(&out);
        assert_eq!(rows.len(), 41);
        assert_eq!(rows[0], "0,52,52,true,negexp,optical");
        assert_eq!(rows[40], "4,0,0,true,negexp,optical");
    }

    #[test]
    fn dmt_curve_gg_and_errors() {
        let (out, _) =
            run_str(&["dmt-curve", "--kind", "gg", "--rho", "10.1614", "--nt", "1", "--nr", "1", "--r", "0:0.5:1"]);
        let rows = data_rows(&out);
        assert_eq!(rows[0], "0,10.1614,10.1614,true,gg,optical");
        assert_eq!(rows[2], "1,0,0,true,gg,optical");
        let mut buf = Vec::new();
        let err = run(["owc-dmt", "dmt-curve", "--kind", "ln"], &mut buf).unwrap_err();
        assert!(err.to_string().contains("--osnr"));
        assert!(run(["owc-dmt", "dmt-curve", "--nt", "2", "--nr", "3"], &mut buf).is_err());
    }

    #[test]
    fn reference_rows() {
        let (out, _) = run_str(&["dmt-curve", "--nt", "16", "--nr", "11", "--r", "4", "--reference"]);
        let rows = data_rows(&out);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], "4,42,42,true,negexp,optical");
        assert_eq!(rows[2], "4,42,42,true,reference,jaiswal-bhatnagar");
    }

    #[test]
    fn outage_sim_deterministic_with_fit() {
        let args = [
            "outage-sim",
            "--nt",
            "2",
            "--nr",
            "1",
            "--r",
            "0.5",
            "--osnr-db",
            "10,15,20",
            "--samples",
            "20000",
            "--seed",
            "4",
            "--fit",
            "--bound",
            "lower",
        ];
        let (a, code) = run_str(&args);
        let (b, _) = run_str(&args);
        assert_eq!(a, b);
        assert_eq!(code, 0);
        let rows = data_rows(&a);
        assert_eq!(rows.len(), 4);
        assert!(rows[3].starts_with("fit,0.5,lower,"));
        let mut w = args.to_vec();
        w.extend(["--workers", "2"]);
        assert_eq!(run_str(&w).0, a);
    }

    #[test]
    fn ardo_rows() {
        let (out, _) = run_str(&["ardo", "--nt", "4", "--r", "0:0.5:1"]);
        assert_eq!(data_rows(&out), vec!["0,4,4,inf", "0.5,2,2,inf", "1,0,0,inf"]);
        let mut buf = Vec::new();
        assert!(run(["owc-dmt", "ardo", "--nr", "2"], &mut buf).is_err());
    }

    #[test]
    fn coding_sim_rows() {
        let (out, code) = run_str(&["coding-sim", "--osnr-db", "10", "--samples", "200", "--draws", "2"]);
        assert_eq!(code, 0);
        let rows = data_rows(&out);
        assert_eq!(rows.len(), 2);
        assert!(rows[0].starts_with("10,0.5,2,") && rows[0].ends_with(",0"));
        assert!(rows[1].ends_with(",1"));
        let mut buf = Vec::new();
        let err = run(["owc-dmt", "coding-sim", "--r", "0"], &mut buf).unwrap_err();
        assert!(matches!(err, Error::CodebookInfeasible { .. }));
    }

    #[test]
    fn help_is_not_an_error() {
        let (out, code) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("dmt-curve"));
    }
}
