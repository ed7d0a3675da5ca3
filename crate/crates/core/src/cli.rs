//! Command-line front end. Every table and report starts with a provenance
//! record holding the fully resolved inputs.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{invalid, Error, ErrorClass, Result};
use crate::exponent::LevyExponent;
use crate::montecarlo::{run_with_workers, verify_mc, McVerifyOptions, SimConfig};
use crate::occupation::OccupationEvaluator;
use crate::presets::Preset;
use crate::scale::{ScaleFunction, ScaleMethod, DEFAULT_TALBOT_NODES};
use crate::series::SeriesEvaluator;
use crate::specials::{conformance_suite, eval_special, SpecialFnParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pssmp", version, about = "Hitting and occupation times of spectrally negative self-similar Markov processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate or describe a Laplace exponent.
    Exponent(ExponentCmd),
    /// Coefficients and values of the entire function I.
    Series(SeriesCmd),
    /// Scale function of the exponent.
    Scale(ScaleCmd),
    /// Laplace transform of the occupation time below a level.
    Occupation(OccupationCmd),
    /// Special functions on a grid, or the conformance suite.
    Specials(SpecialsCmd),
    /// Monte Carlo run from a JSON configuration.
    Simulate(SimulateCmd),
    /// Analytic or Monte Carlo check of the hitting/occupation identity.
    Verify(VerifyCmd),
}

#[derive(Debug, Clone, Args)]
pub struct ExponentArgs {
    /// Named family, e.g. bessel:3, killed-bessel:3,1, stable:1.5, tee-stable:1.5,1, sawtooth:3,1
    #[arg(long, conflicts_with = "exponent")]
    pub preset: Option<String>,
    /// JSON exponent descriptor.
    #[arg(long)]
    pub exponent: Option<PathBuf>,
    /// Esscher transform applied to the loaded exponent.
    #[arg(long)]
    pub esscher: Option<f64>,
    /// T transform applied after any Esscher transform.
    #[arg(long)]
    pub tee: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Directory for output files; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ExponentCmd {
    #[command(flatten)]
    pub exponent: ExponentArgs,
    /// Grid of u values: comma list or start:stop:count.
    #[arg(long, default_value = "0:10:51")]
    pub u_grid: String,
    /// Report canonical parameters and diagnostics instead of values.
    #[arg(long)]
    pub describe: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SeriesCmd {
    #[command(flatten)]
    pub exponent: ExponentArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value = "0:10:11")]
    pub z_grid: String,
    /// Print a_0..a_N instead of values.
    #[arg(long, value_name = "N")]
    pub coefficients: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Auto,
    Closed,
    Talbot,
    Both,
}

#[derive(Debug, Args)]
pub struct ScaleCmd {
    #[command(flatten)]
    pub exponent: ExponentArgs,
    #[arg(long, default_value = "0:5:51")]
    pub x_grid: String,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
    #[arg(long, default_value_t = DEFAULT_TALBOT_NODES)]
    pub nodes: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OccupationCmd {
    #[command(flatten)]
    pub exponent: ExponentArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value = "1")]
    pub q: String,
    #[arg(long, default_value = "0:3:31")]
    pub x_grid: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SpecialsCmd {
    /// Family and parameters: bessel_i:ν, mittag_leffler:α,β, hyp1f1:a,b,
    /// hyp1f2:a,b1,b2, wright:num_rate,num_base,den_rate,den_base
    #[arg(long, required_unless_present = "conformance")]
    pub function: Option<String>,
    #[arg(long, default_value = "0:10:11")]
    pub x_grid: String,
    /// Run the identity suite for a preset instead.
    #[arg(long, value_name = "PRESET", conflicts_with = "function")]
    pub conformance: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateCmd {
    /// JSON simulation configuration.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "0.5,1,2")]
    pub q: String,
    /// Also write one CSV row per path (needs --out).
    #[arg(long, requires = "out")]
    pub per_path: bool,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyCmd {
    #[command(flatten)]
    pub exponent: ExponentArgs,
    #[arg(long, conflicts_with = "mc", required_unless_present = "mc")]
    pub analytic: bool,
    #[arg(long)]
    pub mc: bool,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value = "0.5,1,2")]
    pub q: String,
    #[arg(long, default_value_t = 100_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 5e-4)]
    pub h: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Starting point as a fraction of a.
    #[arg(long, default_value_t = 1e-3)]
    pub x0_fraction: f64,
    #[arg(long, default_value_t = 3)]
    pub ks_retries: usize,
    /// Rerun the hitting ensemble from twice the starting point.
    #[arg(long)]
    pub entrance_probe: bool,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let number = |s: &str| {
        s.trim().parse::<f64>().map_err(|_| invalid(format!("'{s}' in grid '{spec}' is not a number")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, count] => {
            let (a, b) = (number(start)?, number(stop)?);
            let n: usize = count.trim().parse().map_err(|_| invalid(format!("grid count '{count}' is not an integer")))?;
            match n {
                0 => return Err(invalid("grid count must be at least 1")),
                1 => vec![a],
                _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
            }
        }
        [_] => spec.split(',').map(number).collect::<Result<Vec<_>>>()?,
        _ => return Err(invalid(format!("grid '{spec}' must be a comma list or start:stop:count"))),
    };
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(invalid(format!("grid '{spec}' has non-finite entries")));
    }
    Ok(grid)
}

/// Parses the `--function` shorthand of the `specials` subcommand.
pub fn parse_special(spec: &str) -> Result<SpecialFnParams> {
    let (name, args) = spec.split_once(':').ok_or_else(|| invalid(format!("function '{spec}' needs name:parameters")))?;
    let p = args
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| invalid(format!("'{s}' in '{spec}' is not a number"))))
        .collect::<Result<Vec<_>>>()?;
    let arity = |n: usize| {
        if p.len() == n {
            Ok(())
        } else {
            Err(invalid(format!("{name} takes {n} parameters, got {}", p.len())))
        }
    };
    Ok(match name {
        "bessel_i" => {
            arity(1)?;
            SpecialFnParams::BesselI { order: p[0] }
        }
        "mittag_leffler" => {
            arity(2)?;
            SpecialFnParams::MittagLeffler { alpha: p[0], beta: p[1] }
        }
        "hyp1f1" => {
            arity(2)?;
            SpecialFnParams::Hyp1f1 { a: p[0], b: p[1] }
        }
        "hyp1f2" => {
            arity(3)?;
            SpecialFnParams::Hyp1f2 { a: p[0], b1: p[1], b2: p[2] }
        }
        "wright" => {
            arity(4)?;
            SpecialFnParams::Wright1Psi1 { num_rate: p[0], num_base: p[1], den_rate: p[2], den_base: p[3] }
        }
        _ => return Err(invalid(format!("unknown function family '{name}'"))),
    })
}

struct Resolved {
    exponent: LevyExponent,
    preset: Option<Preset>,
}

impl ExponentArgs {
    fn resolve(&self) -> Result<Resolved> {
        let (mut exponent, preset) = match (&self.preset, &self.exponent) {
            (Some(p), None) => {
                let preset: Preset = p.parse()?;
                (preset.exponent()?, Some(preset))
            }
            (None, Some(path)) => {
                let text = fs::read_to_string(path)?;
                (serde_json::from_str::<LevyExponent>(&text)?, None)
            }
            _ => return Err(invalid("give exactly one of --preset and --exponent")),
        };
        if let Some(beta) = self.esscher {
            exponent = exponent.esscher(beta)?;
        }
        if let Some(beta) = self.tee {
            exponent = exponent.tee_transform(beta)?;
        }
        Ok(Resolved { exponent, preset })
    }

    fn provenance(&self, r: &Resolved) -> Value {
        json!({
            "preset": r.preset.map(|p| p.to_string()),
            "exponent_file": self.exponent.as_ref().map(|p| p.display().to_string()),
            "esscher": self.esscher,
            "tee": self.tee,
            "exponent": r.exponent,
        })
    }
}

fn resolve_alpha(alpha: Option<f64>, r: &Resolved) -> Result<f64> {
    match (alpha, r.preset) {
        (Some(a), _) => Ok(a),
        (None, Some(p)) => Ok(p.natural_index()),
        (None, None) => Err(invalid("--alpha is required with --exponent")),
    }
}

fn provenance(command: &str, config: Value) -> Value {
    json!({ "tool": "pssmp", "version": env!("CARGO_PKG_VERSION"), "command": command, "config": config })
}

fn fmt_f(v: f64) -> String {
    let m = v.abs();
    if m != 0.0 && m.is_finite() && !(1e-4..1e16).contains(&m) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// A header, columns and rows, rendered as CSV or JSON.
struct Table {
    provenance: Value,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                let mut s = format!("# {}\n", serde_json::to_string(&self.provenance)?);
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&row.join(","));
                    s.push('\n');
                }
                Ok(s)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj = self.columns.iter().zip(row).map(|(c, v)| {
                            let parsed = v.parse::<f64>().ok().map_or_else(|| Value::String(v.clone()), |_| {
                                serde_json::from_str(v).unwrap_or(Value::String(v.clone()))
                            });
                            ((*c).to_string(), parsed)
                        });
                        Value::Object(obj.collect())
                    })
                    .collect();
                report_text(&self.provenance, &json!(rows))
            }
        }
    }
}

fn report_text<T: Serialize>(provenance: &Value, result: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&json!({ "provenance": provenance, "result": result }))?;
    s.push('\n');
    Ok(s)
}

struct Emitted {
    files: Vec<(String, String)>,
    failed_verification: bool,
}

impl Emitted {
    fn one(name: &str, text: String) -> Self {
        Self { files: vec![(name.to_string(), text)], failed_verification: false }
    }
}

fn table_file(name: &str, table: &Table, format: Format) -> Result<Emitted> {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    Ok(Emitted::one(&format!("{name}.{ext}"), table.render(format)?))
}

fn cmd_exponent(c: &ExponentCmd) -> Result<Emitted> {
    let r = c.exponent.resolve()?;
    let grid = parse_grid(&c.u_grid)?;
    let prov = provenance("exponent", json!({ "exponent": c.exponent.provenance(&r), "u_grid": grid, "describe": c.describe }));
    if c.describe {
        let simplified = r.exponent.simplify();
        let result = json!({
            "simplified": simplified,
            "canonical": r.exponent.canonical(),
            "diagnostics": r.exponent.validate(&grid),
        });
        return Ok(Emitted::one("exponent.json", report_text(&prov, &result)?));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &u in &grid {
        rows.push(vec![fmt_f(u), fmt_f(r.exponent.evaluate(u)?)]);
    }
    table_file("exponent", &Table { provenance: prov, columns: vec!["u", "psi"], rows }, c.output.format)
}

fn cmd_series(c: &SeriesCmd) -> Result<Emitted> {
    let r = c.exponent.resolve()?;
    let alpha = resolve_alpha(c.alpha, &r)?;
    let grid = parse_grid(&c.z_grid)?;
    let se = SeriesEvaluator::new(r.exponent.clone(), alpha)?;
    let prov = provenance(
        "series",
        json!({ "exponent": c.exponent.provenance(&r), "alpha": alpha, "theta": se.theta(), "z_grid": grid, "coefficients": c.coefficients }),
    );
    let table = match c.coefficients {
        Some(n) => {
            let coeffs = se.coefficients(n)?;
            let rows = coeffs.iter().enumerate().map(|(k, a)| vec![k.to_string(), fmt_f(*a)]).collect();
            Table { provenance: prov, columns: vec!["n", "a_n"], rows }
        }
        None => {
            let mut rows = Vec::new();
            for &z in &grid {
                let v = se.eval(z)?;
                rows.push(vec![fmt_f(z), fmt_f(v.value), v.terms_used.to_string(), fmt_f(v.tail_bound)]);
            }
            Table { provenance: prov, columns: vec!["z", "value", "terms_used", "tail_bound"], rows }
        }
    };
    table_file("series", &table, c.output.format)
}

fn cmd_scale(c: &ScaleCmd) -> Result<Emitted> {
    let r = c.exponent.resolve()?;
    let grid = parse_grid(&c.x_grid)?;
    let method = match c.method {
        MethodChoice::Auto => ScaleMethod::Auto,
        MethodChoice::Closed | MethodChoice::Both => ScaleMethod::ClosedForm,
        MethodChoice::Talbot => ScaleMethod::Talbot,
    };
    let scale = ScaleFunction::with_nodes(r.exponent.clone(), method, c.nodes)?;
    let prov = provenance(
        "scale",
        json!({
            "exponent": c.exponent.provenance(&r),
            "x_grid": grid,
            "method": format!("{:?}", c.method).to_lowercase(),
            "nodes": c.nodes,
            "closed_form": scale.is_closed_form(),
        }),
    );
    let table = if c.method == MethodChoice::Both {
        let mut rows = Vec::new();
        for &x in &grid {
            let closed = scale.eval(x)?;
            // the inversion is only meaningful for x > 0
            let talbot = if x > 0.0 { scale.talbot(x, c.nodes) } else { closed };
            rows.push(vec![fmt_f(x), fmt_f(closed), fmt_f(talbot), fmt_f((closed - talbot).abs())]);
        }
        Table { provenance: prov, columns: vec!["x", "closed", "talbot", "abs_diff"], rows }
    } else {
        let mut rows = Vec::new();
        for &x in &grid {
            rows.push(vec![fmt_f(x), fmt_f(scale.eval(x)?)]);
        }
        Table { provenance: prov, columns: vec!["x", "W"], rows }
    };
    table_file("scale", &table, c.output.format)
}

fn cmd_occupation(c: &OccupationCmd) -> Result<Emitted> {
    let r = c.exponent.resolve()?;
    let alpha = resolve_alpha(c.alpha, &r)?;
    let qs = parse_grid(&c.q)?;
    let xs = parse_grid(&c.x_grid)?;
    let ev = OccupationEvaluator::new(r.exponent.clone(), alpha)?;
    let prov = provenance(
        "occupation",
        json!({ "exponent": c.exponent.provenance(&r), "alpha": alpha, "a": c.a, "q": qs, "x_grid": xs }),
    );
    let mut rows = Vec::new();
    for &q in &qs {
        for &x in &xs {
            rows.push(vec![fmt_f(x), fmt_f(q), fmt_f(ev.occupation_laplace(x, c.a, q)?)]);
        }
    }
    table_file("occupation", &Table { provenance: prov, columns: vec!["x", "q", "O"], rows }, c.output.format)
}

fn cmd_specials(c: &SpecialsCmd) -> Result<Emitted> {
    if let Some(p) = &c.conformance {
        let preset: Preset = p.parse()?;
        let report = conformance_suite(&preset)?;
        let prov = provenance("specials", json!({ "conformance": preset.to_string() }));
        let mut out = Emitted::one("conformance.json", report_text(&prov, &report)?);
        out.failed_verification = !report.pass;
        return Ok(out);
    }
    let spec = c.function.as_deref().ok_or_else(|| invalid("--function or --conformance is required"))?;
    let params = parse_special(spec)?;
    let grid = parse_grid(&c.x_grid)?;
    let prov = provenance("specials", json!({ "function": params, "x_grid": grid }));
    let mut rows = Vec::new();
    for &x in &grid {
        rows.push(vec![fmt_f(x), fmt_f(eval_special(&params, x)?)]);
    }
    table_file("specials", &Table { provenance: prov, columns: vec!["x", "value"], rows }, c.output.format)
}

fn cmd_simulate(c: &SimulateCmd) -> Result<Emitted> {
    let cfg: SimConfig = serde_json::from_str(&fs::read_to_string(&c.config)?)?;
    let qs = parse_grid(&c.q)?;
    let ensemble = run_with_workers(&cfg, c.workers)?;
    let summary = ensemble.summary(&qs);
    let prov = provenance("simulate", json!({ "config": cfg, "q": qs }));
    let mut out = Emitted::one("summary.json", report_text(&prov, &summary)?);
    if c.per_path {
        let rows = ensemble
            .outcomes
            .iter()
            .enumerate()
            .map(|(i, o)| vec![i.to_string(), fmt_f(o.value), o.censored.to_string(), o.terminal_below_a.to_string()])
            .collect();
        let table = Table { provenance: prov, columns: vec!["path", "value", "censored", "terminal_below_a"], rows };
        out.files.push(("paths.csv".into(), table.render(Format::Csv)?));
    }
    Ok(out)
}

fn cmd_verify(c: &VerifyCmd) -> Result<Emitted> {
    let r = c.exponent.resolve()?;
    let alpha = resolve_alpha(c.alpha, &r)?;
    let qs = parse_grid(&c.q)?;
    if c.analytic {
        let ev = OccupationEvaluator::new(r.exponent.clone(), alpha)?;
        let report = ev.ct_analytic_verdict(c.a, &qs)?;
        let prov = provenance(
            "verify",
            json!({ "mode": "analytic", "exponent": c.exponent.provenance(&r), "alpha": alpha, "a": c.a, "q": qs }),
        );
        let mut out = Emitted::one("verify.json", report_text(&prov, &report)?);
        out.failed_verification = !report.pass;
        return Ok(out);
    }
    let mut opts = McVerifyOptions::new(r.exponent.clone(), alpha, c.a);
    opts.x0 = c.x0_fraction * c.a;
    opts.q_grid = qs;
    opts.n_paths = c.paths;
    opts.h = c.h;
    opts.seed = c.seed;
    opts.ks_retries = c.ks_retries;
    opts.entrance_probe = c.entrance_probe;
    opts.workers = c.workers;
    let report = verify_mc(&opts)?;
    // worker count is left out so that reports agree across thread counts
    let prov = provenance("verify", json!({ "mode": "mc", "exponent": c.exponent.provenance(&r), "options": opts }));
    let mut out = Emitted::one("verify.json", report_text(&prov, &report)?);
    out.failed_verification = !report.pass;
    Ok(out)
}

fn write_outputs(out_dir: Option<&Path>, emitted: &Emitted, stdout: &mut dyn Write) -> Result<()> {
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for (name, text) in &emitted.files {
                fs::write(dir.join(name), text)?;
            }
        }
        None => {
            for (_, text) in &emitted.files {
                stdout.write_all(text.as_bytes())?;
            }
        }
    }
    Ok(())
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<bool> {
    let (emitted, out) = match &cli.command {
        Command::Exponent(c) => (cmd_exponent(c)?, c.output.out.as_deref()),
        Command::Series(c) => (cmd_series(c)?, c.output.out.as_deref()),
        Command::Scale(c) => (cmd_scale(c)?, c.output.out.as_deref()),
        Command::Occupation(c) => (cmd_occupation(c)?, c.output.out.as_deref()),
        Command::Specials(c) => (cmd_specials(c)?, c.output.out.as_deref()),
        Command::Simulate(c) => (cmd_simulate(c)?, c.out.as_deref()),
        Command::Verify(c) => (cmd_verify(c)?, c.out.as_deref()),
    };
    write_outputs(out, &emitted, stdout)?;
    Ok(!emitted.failed_verification)
}

/// Machine-readable error record written to stderr.
pub fn error_record(e: &Error) -> Value {
    let class = match e.class() {
        ErrorClass::Validation => "validation",
        ErrorClass::Numeric => "numeric",
    };
    json!({ "error": { "kind": e.kind_name(), "class": class, "message": e.to_string() } })
}

/// Runs the command line `args` (program name first) and returns the exit code.
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
                return EXIT_OK;
            }
            let record = json!({ "error": { "kind": "usage", "class": "validation", "message": e.to_string() } });
            let _ = writeln!(stderr, "{record}");
            return EXIT_VALIDATION;
        }
    };
    match execute(&cli, stdout) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFICATION,
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_record(&e));
            match e.class() {
                ErrorClass::Validation => EXIT_VALIDATION,
                ErrorClass::Numeric => EXIT_NUMERIC,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.5, 1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn special_shorthand() {
        assert_eq!(parse_special("hyp1f1:3,2").unwrap(), SpecialFnParams::Hyp1f1 { a: 3.0, b: 2.0 });
        assert!(parse_special("hyp1f1:3").is_err());
        assert!(parse_special("gauss:1").is_err());
    }

    #[test]
    fn usage_error_is_validation() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["pssmp", "nonsense"], &mut out, &mut err), EXIT_VALIDATION);
        let v: Value = serde_json::from_slice(&err).unwrap();
        assert_eq!(v["error"]["class"], "validation");
    }
}
