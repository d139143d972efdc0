use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::{Error, Result};
use crate::multiplier::{
    multiplier, multiplier_asymptotic, multiplier_extended_quadrature, multiplier_hypergeometric,
    multiplier_quadrature, multiplier_radial_series, build_table,
};
use crate::specfun::SeriesControl;
use crate::torus::SpectralField;
use crate::wave::{self, ProblemKind, SolutionSnapshot, WaveProblem};

use super::config::{OutputFormat, StudyConfig, Sweep};
use super::report::{fmt_num, StudyReport};
use super::studies;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VERDICT_FAIL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nlwave", version, about = "Nonlocal wave equation multipliers, solutions and parameter studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the Fourier multiplier m(r)
    Multiplier(MultiplierArgs),
    /// Solve a wave problem and print the spectral snapshot
    Solve(SolveArgs),
    /// Convergence of the solution as delta -> 0
    ConvergeDelta(ConfigArgs),
    /// Convergence of the solution as beta -> n+2
    ConvergeBeta(ConfigArgs),
    /// Fitted coefficient decay against the predicted Sobolev index
    Regularity(ConfigArgs),
    /// Multiplier against its large-frequency expansion
    Asymptotics(ConfigArgs),
    /// Difference quotients against analytic time derivatives
    Temporal(ConfigArgs),
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// JSON study configuration
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Sup-norm radius of the frequency box
    #[arg(long = "K", alias = "box-radius")]
    box_radius: Option<u32>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    s1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    s2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Sweep as PARAM=V1,V2,...
    #[arg(long, value_parser = parse_sweep)]
    sweep: Option<Sweep>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    problem: Option<ProblemKind>,
    #[arg(long)]
    format: Option<OutputFormat>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct MultiplierArgs {
    #[command(flatten)]
    common: ConfigArgs,
    /// Frequency magnitude
    #[arg(long)]
    r: f64,
    /// routed, hypergeometric, quadrature, extended, series or asymptotic
    #[arg(long, default_value = "routed")]
    path: String,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: ConfigArgs,
    /// Time derivative order of the snapshot
    #[arg(long, default_value_t = 0)]
    order: u32,
    /// Initial displacement as field JSON (synthetic from s1 when absent); field files fix n and K
    #[arg(long)]
    f: Option<PathBuf>,
    /// Initial velocity as field JSON (synthetic from s2 when absent)
    #[arg(long)]
    g: Option<PathBuf>,
    /// Forcing as field JSON (synthetic from sigma when absent)
    #[arg(long)]
    b: Option<PathBuf>,
}

fn parse_sweep(text: &str) -> std::result::Result<Sweep, String> {
    let (param, values) = text
        .split_once('=')
        .ok_or_else(|| "expected PARAM=V1,V2,...".to_string())?;
    let values = values
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad sweep value '{v}': {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Sweep {
        param: param.trim().to_string(),
        values,
    })
}

impl ConfigArgs {
    fn resolve(&self) -> Result<StudyConfig> {
        let mut cfg = match &self.config {
            Some(path) => StudyConfig::from_json(&std::fs::read_to_string(path).map_err(|e| {
                Error::Io(format!("cannot read config {}: {e}", path.display()))
            })?)?,
            None => StudyConfig::default(),
        };
        macro_rules! apply {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    cfg.$field = v;
                }
            )*};
        }
        apply!(n, delta, beta, box_radius, t, s1, s2, sigma, epsilon, seed, q, p, problem, format);
        if self.sweep.is_some() {
            cfg.sweep = self.sweep.clone();
        }
        if self.tol.is_some() {
            cfg.tol = self.tol;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        Ok(cfg)
    }
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_PASS;
            }
            let text = e.to_string();
            let line = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(stderr, "{line}");
            return EXIT_ERROR;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(true) => EXIT_PASS,
        Ok(false) => {
            let _ = writeln!(stderr, "verdict: FAIL");
            EXIT_VERDICT_FAIL
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn emit(cfg: &StudyConfig, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Io(format!("cannot write {path}: {e}"))),
        None => stdout.write_all(text.as_bytes()).map_err(Error::from),
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<bool> {
    type Study = fn(&StudyConfig) -> Result<StudyReport>;
    let (args, study): (&ConfigArgs, Study) = match &command {
        Command::Multiplier(a) => return run_multiplier(a, stdout).map(|_| true),
        Command::Solve(a) => return run_solve(a, stdout).map(|_| true),
        Command::ConvergeDelta(a) => (a, studies::study_delta_convergence),
        Command::ConvergeBeta(a) => (a, studies::study_beta_convergence),
        Command::Regularity(a) => (a, studies::study_regularity),
        Command::Asymptotics(a) => (a, studies::study_asymptotics),
        Command::Temporal(a) => (a, studies::study_temporal),
    };
    let cfg = args.resolve()?;
    let report = study(&cfg)?;
    let text = match cfg.format {
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Json => report.to_json() + "\n",
    };
    emit(&cfg, &text, stdout)?;
    Ok(report.passed())
}

fn run_multiplier(args: &MultiplierArgs, stdout: &mut dyn Write) -> Result<()> {
    let cfg = args.common.resolve()?;
    let params = cfg.kernel()?;
    let r = args.r;
    let (value, path) = match args.path.as_str() {
        "routed" => {
            let ev = multiplier(&params, r)?;
            (ev.value, ev.path.to_string())
        }
        "hypergeometric" => (multiplier_hypergeometric(&params, r)?, args.path.clone()),
        "quadrature" => (multiplier_quadrature(&params, r)?, args.path.clone()),
        "extended" => (multiplier_extended_quadrature(&params, r)?, args.path.clone()),
        "series" => (
            multiplier_radial_series(&params, r, &SeriesControl::default())?,
            args.path.clone(),
        ),
        "asymptotic" => (multiplier_asymptotic(&params, r)?, args.path.clone()),
        other => {
            return Err(Error::Usage(format!(
                "--path: unknown evaluation path '{other}' (expected routed, hypergeometric, quadrature, extended, series or asymptotic)"
            )))
        }
    };
    let text = match cfg.format {
        OutputFormat::Csv => format!("{}\n", fmt_num(value)),
        OutputFormat::Json => format!("{}\n", json!({"r": r, "value": value, "path": path})),
    };
    emit(&cfg, &text, stdout)
}

fn read_field(path: &PathBuf) -> Result<SpectralField> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    SpectralField::from_json(&text)
}

fn run_solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut cfg = args.common.resolve()?;
    let loaded = [&args.f, &args.g, &args.b]
        .map(|p| p.as_ref().map(read_field).transpose());
    let [f, g, b] = loaded;
    let (f, g, b) = (f?, g?, b?);
    // field files fix the dimension and box radius
    if let Some(shape) = f.as_ref().or(g.as_ref()).or(b.as_ref()) {
        cfg.n = shape.dim();
        cfg.box_radius = shape.box_radius();
    }
    let params = cfg.kernel()?;
    let (sf, sg, sb) = studies::synthetic_data(&cfg)?;
    let (f, g, b) = (f.unwrap_or(sf), g.unwrap_or(sg), b.unwrap_or(sb));
    let table = build_table(&params, cfg.box_radius)?;
    let problem = match cfg.problem {
        ProblemKind::Homogeneous => WaveProblem::homogeneous(table, f, g)?,
        ProblemKind::Forced => WaveProblem::forced(table, b)?,
        ProblemKind::Combined => WaveProblem::combined(table, f, g, b)?,
    };
    let snap = wave::solve(&problem, cfg.t, args.order)?;
    let text = match cfg.format {
        OutputFormat::Json => snap.to_json()? + "\n",
        OutputFormat::Csv => snapshot_csv(&snap, &cfg),
    };
    emit(&cfg, &text, stdout)
}

fn snapshot_csv(snap: &SolutionSnapshot, cfg: &StudyConfig) -> String {
    let dim = snap.field.dim();
    let mut out = format!(
        "# solve t={} order={} config={}\n",
        fmt_num(snap.t),
        snap.order,
        cfg.canonical_json()
    );
    let mut header: Vec<String> = (1..=dim).map(|i| format!("k{i}")).collect();
    header.push("re".into());
    header.push("im".into());
    out.push_str(&header.join(","));
    out.push('\n');
    for (k, c) in snap.field.iter() {
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        let mut cells: Vec<String> = k.iter().map(|x| x.to_string()).collect();
        cells.push(fmt_num(c.re));
        cells.push(fmt_num(c.im));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("nlwave").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn multiplier_laplacian_value() {
        let (code, out, _) = run_args(&["multiplier", "--n", "1", "--delta", "1", "--beta", "3", "--r", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "-4");
    }

    #[test]
    fn usage_error_names_flag() {
        let (code, _, err) = run_args(&["multiplier", "--n", "x", "--r", "1"]);
        assert_eq!(code, 1);
        assert_eq!(err.lines().count(), 1);
        assert!(err.contains("--n"));
        let (code, _, err) = run_args(&["asymptotics", "--bogus", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("--bogus"));
    }

    #[test]
    fn sweep_parser() {
        let s = parse_sweep("delta=0.5, 0.25").unwrap();
        assert_eq!(s.param, "delta");
        assert_eq!(s.values, vec![0.5, 0.25]);
        assert!(parse_sweep("delta").is_err());
        assert!(parse_sweep("delta=a").is_err());
    }

    #[test]
    fn bad_path_is_usage_error() {
        let (code, _, err) = run_args(&["multiplier", "--r", "1", "--path", "magic"]);
        assert_eq!(code, 1);
        assert!(err.contains("--path"));
    }
}
