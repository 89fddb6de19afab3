use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use calderon_core::boundedness::{classify, DEFAULT_MAX_MEAN_ORDER};
use calderon_core::gamma::{gamma_profile, log_grid, GammaProfile, DEFAULT_TOL};
use calderon_core::harness::{
    approximation_decay, equivalence_check, isometry_suite, Grid2D, GridSummary, HalfLineSignal, VerificationReport,
};
use calderon_core::laguerre::{ell_eval, laguerre_eval};
use calderon_core::symbols::{iterated_mean, mean_growth_exponent, Endpoint};
use calderon_core::{parse_symbol, Symbol};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Symbols shipped with finite sup, used by `verify` when no symbol is given.
const PRESETS: [&str; 5] = ["const(1)", "oscexp()", "vpow(p=1)", "vi()", "sininvpow(alpha=1,beta=0.5)"];

#[derive(Parser)]
#[command(name = "calderon", version, about = "Calderón-Toeplitz operators on Laguerre wavelet subspaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue profile ξ ↦ γ_{a,k}(ξ) with sup and endpoint limits
    Gamma {
        #[arg(long)]
        symbol: String,
        #[command(flatten)]
        levels: Levels,
        #[command(flatten)]
        grid: XiGrid,
        #[command(flatten)]
        output: Output,
    },
    /// Boundedness verdict with evidence
    Classify {
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = DEFAULT_MAX_MEAN_ORDER)]
        max_mean_order: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Discretized operator checks against their budgets
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Symbol for the equivalence suite (defaults to the shipped presets)
        #[arg(long)]
        symbol: Option<String>,
        #[command(flatten)]
        levels: Levels,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        /// Truncation indices for the decay suite
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
        n_list: Vec<u32>,
        /// Seed of the random test signals
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Table of L_n^{(alpha)}(x) and e^{-x/2} L_n(x)
    Laguerre {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        x_min: f64,
        #[arg(long, default_value_t = 20.0)]
        x_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Table of the iterated mean of order m, with growth fits at both ends
    Means {
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 1e-4)]
        v_min: f64,
        #[arg(long, default_value_t = 1e4)]
        v_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Levels {
    /// Level N or inclusive range A..B
    #[arg(long)]
    k: Option<String>,
    /// Inclusive range A..B
    #[arg(long, conflicts_with = "k")]
    k_range: Option<String>,
}

#[derive(Args)]
struct XiGrid {
    #[arg(long, default_value_t = 1e-4)]
    xi_min: f64,
    #[arg(long, default_value_t = 1e4)]
    xi_max: f64,
    #[arg(long, default_value_t = 201)]
    points: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Data goes here and the summary to stdout; otherwise data goes to
    /// stdout and the summary to stderr
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Suite {
    Isometry,
    Equivalence,
    Decay,
    All,
}

/// Where the data and the human-readable summary go.
struct Sink {
    data: Box<dyn Write>,
    summary: Box<dyn Write>,
}

impl Output {
    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn json_only(&self) -> Result<()> {
        if self.format == Some(Format::Csv) {
            bail!("this command only writes json");
        }
        Ok(())
    }

    fn sink(&self) -> Result<Sink> {
        Ok(match &self.out {
            Some(path) => Sink {
                data: Box::new(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?)),
                summary: Box::new(io::stdout()),
            },
            None => Sink { data: Box::new(io::stdout()), summary: Box::new(io::stderr()) },
        })
    }
}

fn parse_range(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if let Some((a, b)) = text.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
        if a > b {
            bail!("empty level range {text}");
        }
        Ok((a..=b).collect())
    } else {
        Ok(vec![text.parse().with_context(|| format!("bad level {text:?}"))?])
    }
}

impl Levels {
    fn resolve(&self, default: &[usize]) -> Result<Vec<usize>> {
        match (&self.k, &self.k_range) {
            (Some(t), _) | (None, Some(t)) => parse_range(t),
            (None, None) => Ok(default.to_vec()),
        }
    }
}

fn symbol(text: &str) -> Result<Symbol> {
    parse_symbol(text).with_context(|| format!("parsing symbol {text:?}"))
}

fn write_profiles(out: &mut dyn Write, profiles: &[GammaProfile], format: Format) -> Result<()> {
    match format {
        Format::Json if profiles.len() == 1 => writeln!(out, "{}", profiles[0].to_json())?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(profiles)?)?,
        Format::Csv if profiles.len() == 1 => profiles[0].write_csv(&mut *out)?,
        Format::Csv => {
            writeln!(out, "k,xi,re,im,abs")?;
            for p in profiles {
                for (x, z) in p.xi_grid.iter().zip(&p.values) {
                    writeln!(out, "{},{x:.16e},{:.16e},{:.16e},{:.16e}", p.k, z.re, z.im, z.norm())?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_gamma(text: &str, levels: &Levels, grid: &XiGrid, output: &Output) -> Result<ExitCode> {
    let s = symbol(text)?;
    let ks = levels.resolve(&[0])?;
    let mut sink = output.sink()?;
    let mut profiles = Vec::with_capacity(ks.len());
    for k in ks {
        let p = gamma_profile(&s, k, grid.xi_min, grid.xi_max, grid.points, grid.tol)?;
        writeln!(
            sink.summary,
            "k={k} sup={:.6e} at xi={:.4e} limit_at_zero={} limit_at_infinity={}",
            p.sup_estimate,
            p.argmax_xi,
            describe_limit(&p.limit_at_zero),
            describe_limit(&p.limit_at_infinity)
        )?;
        profiles.push(p);
    }
    write_profiles(&mut *sink.data, &profiles, output.format(Format::Csv))?;
    sink.data.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn describe_limit(l: &calderon_core::gamma::EndpointLimit) -> String {
    match l.value() {
        Some(z) => format!("{}({:.6e}{:+.6e}i)", l.label(), z.re, z.im),
        None => l.label().to_string(),
    }
}

fn cmd_classify(text: &str, max_mean_order: u32, output: &Output) -> Result<ExitCode> {
    output.json_only()?;
    let s = symbol(text)?;
    let v = classify(&s, max_mean_order)?;
    let mut sink = output.sink()?;
    let basis: Vec<String> = v.theorem_basis.iter().map(|b| serde_json::to_value(b).map(|j| j.as_str().unwrap_or_default().to_string())).collect::<Result<_, _>>()?;
    writeln!(sink.summary, "{}: {} [{}]", v.symbol, v.verdict.label(), basis.join(", "))?;
    writeln!(sink.data, "{}", v.to_json())?;
    sink.data.flush()?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: Suite,
    symbol_text: Option<&str>,
    levels: &Levels,
    alpha: f64,
    beta: f64,
    n_list: &[u32],
    seed: u64,
    output: &Output,
) -> Result<ExitCode> {
    output.json_only()?;
    let g = Grid2D::standard();
    let f = HalfLineSignal::standard();
    let mut checks = Vec::new();
    let mut decay = None;
    if matches!(suite, Suite::Isometry | Suite::All) {
        let ks = levels.resolve(&[0, 1, 2, 3, 4, 5])?;
        let mut signals = vec![f.clone()];
        signals.extend((0..5).map(|i| HalfLineSignal::random(seed.wrapping_add(i))));
        checks.extend(isometry_suite(&ks, &signals, &g)?);
    }
    if matches!(suite, Suite::Equivalence | Suite::All) {
        let ks = levels.resolve(&[0, 1, 2, 3, 4, 5])?;
        let texts: Vec<&str> = match symbol_text {
            Some(t) => vec![t],
            None => PRESETS.to_vec(),
        };
        for t in texts {
            let s = symbol(t)?;
            for &k in &ks {
                checks.push(equivalence_check(&s, k, &f, &g)?);
            }
        }
    }
    if matches!(suite, Suite::Decay | Suite::All) {
        let ks = levels.resolve(&[0, 1, 2])?;
        decay = Some(ks.iter().map(|&k| approximation_decay(alpha, beta, k, n_list)).collect::<Result<Vec<_>, _>>()?);
    }
    let report = VerificationReport::new(GridSummary::new(&g, &f), checks, decay);
    let mut sink = output.sink()?;
    for c in &report.checks {
        writeln!(
            sink.summary,
            "{} {} k={}{} value={:.3e} budget={:.1e} truncation={:.1e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.k,
            c.symbol.as_deref().map(|s| format!(" symbol={s}")).unwrap_or_default(),
            c.value,
            c.budget,
            c.truncation_estimate
        )?;
    }
    for d in report.decay.iter().flatten() {
        writeln!(
            sink.summary,
            "{} decay k={} slope={:.3} required={:.3} monotone={}",
            if d.passed { "PASS" } else { "FAIL" },
            d.k,
            d.slope,
            d.required_slope,
            d.monotone
        )?;
    }
    writeln!(sink.data, "{}", report.to_json())?;
    sink.data.flush()?;
    let failures = report.failures();
    if failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for f in failures {
            eprintln!("budget exceeded: {f}");
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_laguerre(n: i64, alpha: f64, x_min: f64, x_max: f64, points: usize, output: &Output) -> Result<ExitCode> {
    if points < 2 || x_max.partial_cmp(&x_min) != Some(std::cmp::Ordering::Greater) {
        bail!("need at least two points on a nonempty interval");
    }
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let x = x_min + (x_max - x_min) * i as f64 / (points - 1) as f64;
        let ell = if alpha == 0.0 { Some(ell_eval(n, x)?) } else { None };
        rows.push((x, laguerre_eval(n, alpha, x)?, ell));
    }
    let mut sink = output.sink()?;
    match output.format(Format::Csv) {
        Format::Csv => {
            writeln!(sink.data, "x,laguerre,ell")?;
            for (x, l, e) in &rows {
                let e = e.map(|e| format!("{e:.16e}")).unwrap_or_default();
                writeln!(sink.data, "{x:.16e},{l:.16e},{e}")?;
            }
        }
        Format::Json => {
            let rows: Vec<_> = rows.iter().map(|(x, l, e)| serde_json::json!({"x": x, "laguerre": l, "ell": e})).collect();
            writeln!(sink.data, "{}", serde_json::to_string_pretty(&serde_json::json!({"n": n, "alpha": alpha, "rows": rows}))?)?;
        }
    }
    writeln!(sink.summary, "n={n} alpha={alpha} points={points}")?;
    sink.data.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_means(text: &str, m: u32, v_min: f64, v_max: f64, points: usize, tol: f64, output: &Output) -> Result<ExitCode> {
    let s = symbol(text)?;
    let vs = log_grid(v_min, v_max, points);
    let values = vs.iter().map(|&v| iterated_mean(&s, m, v, tol)).collect::<Result<Vec<_>, _>>()?;
    let mut sink = output.sink()?;
    for end in [Endpoint::Zero, Endpoint::Infinity] {
        let fit = mean_growth_exponent(&s, m, end)?;
        writeln!(
            sink.summary,
            "order {m} at {end:?}: exponent {:.4} residual {:.2e}{}",
            fit.exponent,
            fit.residual,
            if fit.inconclusive { " (inconclusive)" } else { "" }
        )?;
    }
    match output.format(Format::Csv) {
        Format::Csv => {
            writeln!(sink.data, "v,re,im,abs")?;
            for (v, z) in vs.iter().zip(&values) {
                writeln!(sink.data, "{v:.16e},{:.16e},{:.16e},{:.16e}", z.re, z.im, z.norm())?;
            }
        }
        Format::Json => {
            let rows: Vec<_> = vs.iter().zip(&values).map(|(v, z)| serde_json::json!({"v": v, "re": z.re, "im": z.im})).collect();
            writeln!(sink.data, "{}", serde_json::to_string_pretty(&serde_json::json!({"symbol": s.to_string(), "order": m, "rows": rows}))?)?;
        }
    }
    sink.data.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Gamma { symbol, levels, grid, output } => cmd_gamma(symbol, levels, grid, output),
        Command::Classify { symbol, max_mean_order, output } => cmd_classify(symbol, *max_mean_order, output),
        Command::Verify { suite, symbol, levels, alpha, beta, n_list, seed, output } => {
            cmd_verify(*suite, symbol.as_deref(), levels, *alpha, *beta, n_list, *seed, output)
        }
        Command::Laguerre { n, alpha, x_min, x_max, points, output } => cmd_laguerre(*n, *alpha, *x_min, *x_max, *points, output),
        Command::Means { symbol, m, v_min, v_max, points, tol, output } => {
            cmd_means(symbol, *m, *v_min, *v_max, *points, *tol, output)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_ranges() {
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        assert_eq!(parse_range("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn arguments_parse() {
        Cli::try_parse_from(["calderon", "gamma", "--symbol", "oscexp()", "--k", "0..2", "--format", "json"]).unwrap();
        Cli::try_parse_from(["calderon", "verify", "--suite", "decay", "--alpha", "1", "--beta", "0.5", "--k", "1"]).unwrap();
        assert!(Cli::try_parse_from(["calderon", "gamma", "--symbol", "x", "--k", "1", "--k-range", "0..2"]).is_err());
    }
}
