//! Batch front end for the eberlein laboratory.
//!
//! Every run resolves a [`RunConfig`] (defaults, then `--config`, then flags),
//! writes its artifacts into the output directory together with the resolved
//! `config.txt` and a `manifest.json`, and returns an exit status.

pub mod config;
mod output;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use eberlein_core::diffraction::{
    bragg_cesaro, cpp_scan, default_lag_cap, eberlein_split, periodogram_fft, wiener_ratio,
    write_spectral_csv,
};
use eberlein_core::eberlein::{finite_autocorrelation, finite_eberlein, LagProfile};
use eberlein_core::fourier_bohr::{fb_coefficient, fb_spectrum_scan, spectrum_grid, FBSpectrumScan, ScanConfig};
use eberlein_core::generators::make;
use eberlein_core::orthogonality::{golden_frequencies, orthogonality_run, OrthoConfig};
use eberlein_core::suite::{acceptance_scenarios, identity_suite, CheckResult, SuiteOptions};
use eberlein_core::{Error, VanHoveFamily, WeightedComb};
use serde::Serialize;

pub use config::{Format, RunConfig};
use output::Output;

#[derive(Debug, Parser)]
#[command(name = "eberlein", version, about = "Finite-volume diffraction laboratory on the integers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weights of a comb on one window.
    Gen(Args),
    /// Autocorrelation profile of `mu`.
    Autocorr(Args),
    /// Eberlein convolution profile of `mu` and `nu`.
    Eberlein(Args),
    /// Fourier-Bohr coefficients at the given frequencies.
    Fb(Args),
    /// Heuristic Fourier-Bohr spectrum scan.
    Scan(Args),
    /// Periodogram on the FFT grid `k / bins`.
    Periodogram(Args),
    /// Consistent phase property check at the given frequencies.
    Cpp(Args),
    /// Wiener lag average of `|gamma|^2`.
    Wiener(Args),
    /// Pure-point / continuous split of the autocorrelation.
    Split(Args),
    /// Orthogonality run of `mu` against `nu` along the schedule.
    Ortho(Args),
    /// Exact-identity suite plus acceptance scenarios.
    Verify(Args),
}

impl Command {
    fn parts(&self) -> (&'static str, &Args) {
        match self {
            Command::Gen(a) => ("gen", a),
            Command::Autocorr(a) => ("autocorr", a),
            Command::Eberlein(a) => ("eberlein", a),
            Command::Fb(a) => ("fb", a),
            Command::Scan(a) => ("scan", a),
            Command::Periodogram(a) => ("periodogram", a),
            Command::Cpp(a) => ("cpp", a),
            Command::Wiener(a) => ("wiener", a),
            Command::Split(a) => ("split", a),
            Command::Ortho(a) => ("ortho", a),
            Command::Verify(a) => ("verify", a),
        }
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Args {
    /// Flat key=value config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// sym, onesided, pow:a,b, refl:<family>, shift:<x>:<family>
    #[arg(long, allow_hyphen_values = true)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<u64>,
    /// Comma-separated base-2 exponents, e.g. 10,13,16.
    #[arg(long, value_delimiter = ',')]
    pub schedule: Option<Vec<u32>>,
    /// Lag bound.
    #[arg(long = "L", visible_alias = "lag-bound")]
    pub lag_bound: Option<usize>,
    /// Comma-separated frequencies: p/q, decimals, golden, k*golden.
    #[arg(long = "freq", value_delimiter = ',', allow_hyphen_values = true)]
    pub frequencies: Option<Vec<String>>,
    /// Scan grid denominator bound.
    #[arg(long)]
    pub grid: Option<i64>,
    /// Scan grid extras `k * golden` for `|k| <=` this.
    #[arg(long)]
    pub golden_k: Option<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub masses: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub translate: Option<i64>,
    #[arg(long = "tol")]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub slack: Option<f64>,
    /// direct, fft or auto.
    #[arg(long)]
    pub path: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv,json,gnuplot.
    #[arg(long = "format", value_delimiter = ',')]
    pub formats: Option<Vec<String>>,
    /// Any config key, as KEY=VALUE; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub sets: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Io(_) | Error::Csv(_) | Error::Json(_)) | CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Defaults, then the config file, then explicit flags.
pub fn resolve_config(command: &str, args: &Args) -> CliResult<RunConfig> {
    let mut c = RunConfig::default();
    if let Some(path) = &args.config {
        c.apply_kv(&std::fs::read_to_string(path)?)?;
    }
    c.command = command.to_string();
    let mut set = |k: &str, v: Option<String>| -> CliResult<()> {
        if let Some(v) = v {
            c.set(k, &v)?;
        }
        Ok(())
    };
    let list = |v: &Option<Vec<String>>| v.as_ref().map(|x| x.join(","));
    let nums = |v: &Option<Vec<f64>>| v.as_ref().map(|x| x.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
    set("mu", args.mu.clone())?;
    set("nu", args.nu.clone())?;
    set("family", args.family.clone())?;
    set("n", args.n.map(|x| x.to_string()))?;
    set("schedule", args.schedule.as_ref().map(|s| s.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))?;
    set("L", args.lag_bound.map(|x| x.to_string()))?;
    set("frequencies", list(&args.frequencies))?;
    set("grid_max_den", args.grid.map(|x| x.to_string()))?;
    set("golden_k", args.golden_k.map(|x| x.to_string()))?;
    set("masses", nums(&args.masses))?;
    set("translate", args.translate.map(|x| x.to_string()))?;
    set("tolerance", args.tolerance.map(|x| x.to_string()))?;
    set("slack", args.slack.map(|x| x.to_string()))?;
    set("path", args.path.clone())?;
    set("seed", args.seed.map(|x| x.to_string()))?;
    set("out", args.out.as_ref().map(|p| p.display().to_string()))?;
    set("formats", list(&args.formats))?;
    for kv in &args.sets {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        c.set(k, v)?;
    }
    Ok(c)
}

/// What a command produced besides its files.
struct Outcome {
    lines: Vec<String>,
    failed: bool,
}

impl Outcome {
    fn ok(lines: Vec<String>) -> Self {
        Outcome { lines, failed: false }
    }
}

struct Inputs {
    mu: WeightedComb,
    nu: Option<WeightedComb>,
    family: VanHoveFamily,
}

impl Inputs {
    fn load(c: &RunConfig) -> CliResult<Self> {
        Ok(Inputs {
            mu: make(&c.mu)?,
            nu: c.nu.as_deref().map(make).transpose()?,
            family: c.family.parse()?,
        })
    }

    fn nu(&self, command: &str) -> CliResult<&WeightedComb> {
        self.nu
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("`{command}` needs --nu")))
    }

    fn seeds(&self) -> Vec<u64> {
        [Some(&self.mu), self.nu.as_ref()]
            .into_iter()
            .flatten()
            .filter_map(|c| c.seed())
            .collect()
    }
}

/// Parses `argv`, runs the command and returns the process exit status.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let command_line: Vec<String> = argv.iter().map(|s| s.to_string_lossy().into_owned()).collect();
    match execute(&cli.command, command_line) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Returns `Ok(false)` when a numerical suite ran and failed.
pub fn execute(command: &Command, command_line: Vec<String>) -> CliResult<bool> {
    let (name, args) = command.parts();
    let start = Instant::now();
    let cfg = resolve_config(name, args)?;
    let inputs = Inputs::load(&cfg)?;
    let mut out = Output::new(&cfg)?;
    let outcome = dispatch(name, &cfg, &inputs, &mut out)?;
    for line in &outcome.lines {
        println!("{line}");
    }
    let mut seeds = inputs.seeds();
    if name == "verify" {
        seeds.push(cfg.seed);
    }
    out.finish(&cfg, command_line, seeds, start.elapsed().as_secs_f64())?;
    Ok(!outcome.failed)
}

fn dispatch(name: &str, c: &RunConfig, x: &Inputs, out: &mut Output) -> CliResult<Outcome> {
    match name {
        "gen" => {
            let win = x.mu.restrict(x.family.interval(c.n)?)?;
            out.csv("gen", |w| win.write_csv(w))?;
            out.gnuplot("gen", "plot 'gen.csv' using 1:2 with impulses title 'Re', '' using 1:3 with impulses title 'Im'")?;
            Ok(Outcome::ok(vec![format!("{} weights on {}", win.len(), win.interval())]))
        }
        "autocorr" | "eberlein" => {
            let p = if name == "autocorr" {
                finite_autocorrelation(&x.mu, &x.family, c.n, c.lag_bound, c.path)?
            } else {
                finite_eberlein(&x.mu, x.nu(name)?, &x.family, c.n, c.lag_bound, c.path)?
            };
            write_profile(name, &p, out)?;
            Ok(Outcome::ok(
                ["lag 0", "lag 1"]
                    .iter()
                    .zip([0, 1])
                    .filter(|(_, t)| *t as usize <= c.lag_bound)
                    .map(|(s, t)| format!("{s}: {}", p.value(t)))
                    .collect(),
            ))
        }
        "fb" => {
            let rows = c
                .frequencies
                .iter()
                .map(|&f| Ok((f, fb_coefficient(&x.mu, f, &x.family, c.n, c.translate)?.value)))
                .collect::<CliResult<Vec<_>>>()?;
            out.csv("fb", |w| {
                let mut w = csv_writer(w);
                w.write_record(["theta_num", "theta_den_or_nan", "theta_real", "re", "im", "abs"])?;
                for (f, v) in &rows {
                    let (a, b, r) = f.csv_fields();
                    w.write_record([a, b, r, v.re.to_string(), v.im.to_string(), v.norm().to_string()])?;
                }
                w.flush()?;
                Ok(())
            })?;
            out.json("fb", &rows.iter().map(|(f, v)| (f, v)).collect::<Vec<_>>())?;
            Ok(Outcome::ok(rows.iter().map(|(f, v)| format!("c[{f}] = {v}")).collect()))
        }
        "scan" => {
            let grid = spectrum_grid(c.grid_max_den, &golden_frequencies(c.golden_k));
            let scan = fb_spectrum_scan(&x.mu, &grid, &x.family, c.n, ScanConfig::default())?;
            out.csv("scan", |w| scan.write_csv(w))?;
            out.json("scan", &HeuristicScan { heuristic: true, scan: &scan })?;
            out.gnuplot("scan", "set logscale y\nplot 'scan.csv' using 3:6 with impulses title '|c|'")?;
            let kept: Vec<String> = scan.retained().iter().map(|f| f.to_string()).collect();
            Ok(Outcome::ok(vec![format!(
                "heuristic scan of {} frequencies, threshold {:.3e}: retained [{}]",
                grid.len(),
                scan.threshold,
                kept.join(", ")
            )]))
        }
        "periodogram" => {
            let bins = (x.family.volume(c.n)? as usize).next_power_of_two();
            let pp = periodogram_fft(&x.mu, &x.family, c.n, bins)?;
            out.csv("periodogram", |w| {
                let mut w = csv_writer(w);
                w.write_record(["theta", "intensity"])?;
                for (k, v) in pp.iter().enumerate() {
                    w.write_record([(k as f64 / bins as f64).to_string(), v.to_string()])?;
                }
                w.flush()?;
                Ok(())
            })?;
            out.gnuplot("periodogram", "set logscale y\nplot 'periodogram.csv' using 1:2 with lines title 'I_n / |A_n|'")?;
            let (k, m) = pp.iter().enumerate().fold((0, f64::MIN), |a, (k, &v)| if v > a.1 { (k, v) } else { a });
            Ok(Outcome::ok(vec![format!("{bins} bins, peak {m:.4e} at {k}/{bins}")]))
        }
        "cpp" => {
            let est = cpp_scan(&x.mu, &c.frequencies, &x.family, c.n, c.lag_bound, c.tolerance)?;
            out.csv("cpp", |w| write_spectral_csv(&est, w))?;
            out.json("cpp", &est)?;
            out.gnuplot("cpp", "set style data histograms\nplot 'cpp.csv' using 2:xtic(1) title 'periodogram', '' using 3 title 'lag average'")?;
            Ok(Outcome::ok(est.iter().map(|e| e.verdict()).collect()))
        }
        "wiener" => {
            let p = finite_autocorrelation(&x.mu, &x.family, c.n, c.lag_bound, c.path)?;
            let ratio = wiener_ratio(&p, c.lag_bound)?;
            let summary = WienerSummary { comb: x.mu.label().to_string(), n: c.n, lag_bound: c.lag_bound, wiener_ratio: ratio };
            out.csv("wiener", |w| {
                let mut w = csv_writer(w);
                w.serialize(&summary)?;
                w.flush()?;
                Ok(())
            })?;
            out.json("wiener", &summary)?;
            Ok(Outcome::ok(vec![format!("wiener ratio {ratio:.6}")]))
        }
        "split" => {
            let p = finite_autocorrelation(&x.mu, &x.family, c.n, c.lag_bound, c.path)?;
            let masses = if c.masses.is_empty() {
                let l = default_lag_cap(x.family.volume(c.n)?).max(1);
                let q = finite_autocorrelation(&x.mu, &x.family, c.n, l, c.path)?;
                c.frequencies.iter().map(|&f| bragg_cesaro(&q, f)).collect()
            } else {
                c.masses.clone()
            };
            let s = eberlein_split(&p, &c.frequencies, &masses)?;
            out.csv("split", |w| s.write_csv(w))?;
            out.json("split", &s)?;
            out.gnuplot("split", "plot 'split.csv' using 1:2 with impulses title 'gamma', '' using 1:4 with lines title 'gamma_s', '' using 1:6 with impulses title 'gamma_0'")?;
            Ok(Outcome::ok(vec![format!(
                "masses {masses:?}; remainder wiener ratio {:.4e}",
                s.wiener_ratio_remainder
            )]))
        }
        "ortho" => {
            let cfg = OrthoConfig {
                abs_threshold: c.tolerance,
                slack: c.slack,
                path: c.path,
                frequencies: c.frequencies.clone(),
            };
            let r = orthogonality_run(&x.mu, x.nu(name)?, &x.family, &c.schedule_n()?, c.lag_bound, &cfg)?;
            out.csv("ortho", |w| r.write_csv(w))?;
            out.json("ortho", &r)?;
            out.gnuplot("ortho", "set logscale xy\nplot 'ortho.csv' using 2:3 with linespoints title 'sup |mu * ~nu|'")?;
            let mut lines = vec![format!("{}: sups {:?}", r.verdict, r.sup_forward())];
            if r.exploration {
                lines.push("exploration mode: spectral tags are not (pure_point, continuous)".into());
            }
            Ok(Outcome::ok(lines))
        }
        "verify" => {
            let reports = identity_suite(1 << 10, 16)?;
            let scenarios = acceptance_scenarios(SuiteOptions { seed: c.seed, ..SuiteOptions::default() });
            let failed_ids: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
            let mut lines = vec![format!(
                "[{}] exact identities: {} checks, {} failed",
                if failed_ids.is_empty() { "PASS" } else { "FAIL" },
                reports.len(),
                failed_ids.len()
            )];
            lines.extend(failed_ids.iter().map(|n| format!("  failed: {n}")));
            lines.extend(scenarios.iter().map(CheckResult::to_string));
            let failed = !failed_ids.is_empty() || scenarios.iter().any(|s| !s.passed);
            out.json("verify", &VerifySummary { identities: &reports, scenarios: &scenarios })?;
            Ok(Outcome { lines, failed })
        }
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}

fn csv_writer<W: std::io::Write>(w: W) -> csv::Writer<W> {
    csv::Writer::from_writer(w)
}

fn write_profile(name: &str, p: &LagProfile, out: &mut Output) -> CliResult<()> {
    out.csv(name, |w| p.write_csv(w))?;
    out.json_raw(name, &p.to_json()?)?;
    out.gnuplot(
        name,
        &format!("plot '{name}.csv' using 1:2 with impulses title 'Re', '' using 1:3 with impulses title 'Im'"),
    )?;
    Ok(())
}

#[derive(Serialize)]
struct HeuristicScan<'a> {
    heuristic: bool,
    #[serde(flatten)]
    scan: &'a FBSpectrumScan,
}

#[derive(Serialize)]
struct WienerSummary {
    comb: String,
    n: u64,
    lag_bound: usize,
    wiener_ratio: f64,
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    identities: &'a [eberlein_core::eberlein::IdentityReport],
    scenarios: &'a [CheckResult],
}
