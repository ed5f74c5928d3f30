//! The `wassalg` command line.
//!
//! Exit status: 0 on success, 1 on domain errors (bad input, failed law
//! checks), 2 on usage errors.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wassalg::experiments::{
    cauchy_experiment, default_schedule, density_experiment, dirichlet_moment_convergence, moment_growth,
    uniform_dyadic_grid, Thresholds,
};
use wassalg::io::{parse_measure, read_coupling_csv, transport, validate_coupling, AnyMeasure};
use wassalg::laws::report::render_reports;
use wassalg::laws::suite::{standard_suite, LawSet, SuiteConfig};
use wassalg::{Error, LawReport, Mode, Order, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Float,
    Exact,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Float => Mode::Float,
            ModeArg::Exact => Mode::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "wassalg", version, about = "Exact Wasserstein distances and algebra law checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Numeric mode; exact needs integer orders.
    #[arg(long, global = true, value_enum, default_value = "float", env = "WASSALG_MODE")]
    mode: ModeArg,
    /// Order p >= 1; comma-separated lists where several orders make sense.
    #[arg(long, global = true, env = "WASSALG_P")]
    p: Option<String>,
    #[arg(long, global = true, default_value_t = 7, env = "WASSALG_SEED")]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1000, env = "WASSALG_TRIALS")]
    trials: usize,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// W_p between two measure files (`-` reads stdin).
    Distance { a: String, b: String },
    /// Optimal coupling between two measure files, as CSV.
    Coupling { a: String, b: String },
    /// Randomized law checks.
    Laws {
        /// barycentric, midpoint, wasserstein, free-extension, metric or all.
        #[arg(long, default_value = "all")]
        set: String,
        #[arg(long, default_value_t = 4)]
        max_atoms: usize,
    },
    /// Named experiments on Dirichlet measures and dyadic grids.
    Experiment {
        #[arg(value_enum)]
        name: ExperimentName,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Comma-separated truncation indices.
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long, default_value_t = 256)]
        m_max: usize,
        /// Grid level of the density target.
        #[arg(long, default_value_t = 8)]
        grid: u32,
    },
    /// Checks a measure file, or a coupling CSV against optional marginals.
    Validate {
        file: String,
        /// Measure files the coupling's rows and columns must match.
        #[arg(long, num_args = 2, value_names = ["ROWS", "COLS"])]
        against: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExperimentName {
    DirichletCauchy,
    MomentGrowth,
    Density,
    MomentConvergence,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => f.write_str(m),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Primary output plus whether it reports a failed check.
struct Output {
    body: String,
    failed: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, failed: false }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let informational = !e.use_stderr();
            let text = e.render().to_string();
            if informational {
                let _ = out.write_all(text.as_bytes());
                return 0;
            }
            let _ = err.write_all(text.as_bytes());
            return 2;
        }
    };
    let result = execute(&cli, stdin).and_then(|output| {
        match &cli.global.out {
            Some(path) => fs::write(path, &output.body).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?,
            None => out
                .write_all(output.body.as_bytes())
                .map_err(|e| Failure::Domain(e.to_string()))?,
        }
        Ok(output.failed)
    });
    match result {
        Ok(false) => 0,
        Ok(true) => {
            let _ = writeln!(err, "error: some checks failed");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            2
        }
        Err(Failure::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn parse_orders(text: &str, mode: Mode) -> CliResult<Vec<Order>> {
    let mut orders = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v: f64 = part
            .parse()
            .map_err(|_| Failure::Usage(format!("invalid order '{part}'")))?;
        let p = Order::new(v).map_err(|e| Failure::Usage(e.to_string()))?;
        if mode == Mode::Exact && p.integer().is_none() {
            return Err(Failure::Usage(format!("exact mode needs an integer order, got p = {v}")));
        }
        orders.push(p);
    }
    if orders.is_empty() {
        return Err(Failure::Usage("no order given".into()));
    }
    Ok(orders)
}

fn orders_or(g: &Global, default: &str) -> CliResult<Vec<Order>> {
    parse_orders(g.p.as_deref().unwrap_or(default), g.mode.into())
}

fn single_order(g: &Global) -> CliResult<Order> {
    let orders = orders_or(g, "1")?;
    match orders.as_slice() {
        [p] => Ok(*p),
        _ => Err(Failure::Usage("this command takes a single order".into())),
    }
}

fn parse_schedule(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Failure::Usage(format!("invalid schedule entry '{s}'"))))
        .collect()
}

fn read_input(path: &str, stdin: &mut dyn Read, stdin_used: &mut bool) -> CliResult<String> {
    if path == "-" {
        if *stdin_used {
            return Err(Failure::Usage("stdin can be read only once".into()));
        }
        *stdin_used = true;
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| Failure::Domain(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{path}: {e}")))
    }
}

fn load(path: &str, mode: Mode, stdin: &mut dyn Read, used: &mut bool) -> CliResult<AnyMeasure> {
    let text = read_input(path, stdin, used)?;
    parse_measure(&text, mode).map_err(|e| Failure::Domain(format!("{path}: {e}")))
}

fn num(x: f64) -> String {
    x.render()
}

/// A table rendered as aligned text, CSV or JSON records.
struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: Vec<&'static str>) -> Self {
        Table {
            headers,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Text => {
                let widths: Vec<usize> = (0..self.headers.len())
                    .map(|j| {
                        self.rows
                            .iter()
                            .map(|r| r[j].len())
                            .chain([self.headers[j].len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |cells: Vec<&str>| {
                    let padded: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect();
                    padded.join("  ").trim_end().to_string() + "\n"
                };
                let mut s = line(self.headers.clone());
                for r in &self.rows {
                    s.push_str(&line(r.iter().map(String::as_str).collect()));
                }
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Failure::Domain(e.to_string());
                w.write_record(&self.headers).map_err(io)?;
                for r in &self.rows {
                    w.write_record(r).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Failure::Domain(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| Failure::Domain(e.to_string()))
            }
            Format::Json => {
                let records: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: serde_json::Map<String, serde_json::Value> = self
                            .headers
                            .iter()
                            .zip(r)
                            .map(|(h, v)| (h.to_string(), json!(v)))
                            .collect();
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                Ok(serde_json::to_string_pretty(&records).map_err(|e| Failure::Domain(e.to_string()))? + "\n")
            }
        }
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> CliResult<Output> {
    let g = &cli.global;
    let mode: Mode = g.mode.into();
    let mut used = false;
    match &cli.command {
        Command::Distance { a, b } => {
            let p = single_order(g)?;
            let (x, y) = (load(a, mode, stdin, &mut used)?, load(b, mode, stdin, &mut used)?);
            let s = transport(&x, &y, p)?;
            let body = match g.format {
                Format::Text => format!("{}\n", num(s.wp)),
                Format::Csv => format!("p,mode,cost_p,wp\n{},{},{},{}\n", p, mode, s.cost_p, num(s.wp)),
                Format::Json => {
                    json!({"p": p.value(), "mode": mode.to_string(), "cost_p": s.cost_p, "wp": num(s.wp)}).to_string()
                        + "\n"
                }
            };
            Ok(Output::ok(body))
        }
        Command::Coupling { a, b } => {
            let p = single_order(g)?;
            let (x, y) = (load(a, mode, stdin, &mut used)?, load(b, mode, stdin, &mut used)?);
            let s = transport(&x, &y, p)?;
            let body = match g.format {
                Format::Json => {
                    json!({"p": p.value(), "mode": mode.to_string(), "cost_p": s.cost_p, "wp": num(s.wp), "coupling_csv": s.coupling_csv})
                        .to_string()
                        + "\n"
                }
                _ => s.coupling_csv,
            };
            Ok(Output::ok(body))
        }
        Command::Laws { set, max_atoms } => {
            let set: LawSet = set.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            if g.trials == 0 || *max_atoms == 0 {
                return Err(Failure::Usage("--trials and --max-atoms must be positive".into()));
            }
            let default = match mode {
                Mode::Float => "1,1.5,2,3",
                Mode::Exact => "1,2,3",
            };
            let cfg = SuiteConfig {
                trials: g.trials,
                orders: orders_or(g, default)?,
                seed: g.seed,
                max_atoms: *max_atoms,
            };
            let reports = match mode {
                Mode::Float => standard_suite::<f64>(set, &cfg)?,
                Mode::Exact => standard_suite::<Rational>(set, &cfg)?,
            };
            let failed = reports.iter().any(|r| !r.passed());
            Ok(Output {
                body: render_laws(&reports, g.format),
                failed,
            })
        }
        Command::Experiment {
            name,
            q,
            schedule,
            m_max,
            grid,
        } => {
            let schedule = match schedule {
                Some(s) => parse_schedule(s)?,
                None => default_schedule(),
            };
            experiment(*name, g, *q, &schedule, *m_max, *grid)
        }
        Command::Validate { file, against } => {
            let text = read_input(file, stdin, &mut used)?;
            if text.trim_start().starts_with('{') {
                let m = parse_measure(&text, mode).map_err(|e| Failure::Domain(format!("{file}: {e}")))?;
                return Ok(Output::ok(format!(
                    "ok: {} measure, {} atoms, total mass {}\n",
                    m.space_name(),
                    m.len(),
                    m.total_mass()
                )));
            }
            let table = read_coupling_csv(&text).map_err(|e| Failure::Domain(format!("{file}: {e}")))?;
            let marginals = match against {
                Some(paths) => Some((
                    load(&paths[0], mode, stdin, &mut used)?,
                    load(&paths[1], mode, stdin, &mut used)?,
                )),
                None => None,
            };
            validate_coupling(&table, mode, marginals.as_ref().map(|(a, b)| (a, b)))
                .map_err(|e| Failure::Domain(format!("{file}: {e}")))?;
            Ok(Output::ok(format!(
                "ok: coupling {}x{}{}\n",
                table.row_atoms.len(),
                table.col_atoms.len(),
                if marginals.is_some() { ", marginals match" } else { "" }
            )))
        }
    }
}

fn render_laws(reports: &[LawReport], format: Format) -> String {
    match format {
        Format::Text => render_reports(reports, false),
        Format::Csv => render_reports(reports, true),
        Format::Json => {
            let rows: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "context": r.context, "law": r.law, "p": r.p, "trials": r.trials,
                        "failures": r.failures, "vacuous": r.vacuous,
                        "worst_slack": num(r.worst_slack), "tolerance": r.tolerance,
                        "passed": r.passed(), "witness": r.witness,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).unwrap_or_default() + "\n"
        }
    }
}

fn experiment(name: ExperimentName, g: &Global, q: f64, schedule: &[usize], m_max: usize, grid: u32) -> CliResult<Output> {
    let mode: Mode = g.mode.into();
    let float_only = |what: &str| -> CliResult<()> {
        if mode == Mode::Exact {
            Err(Failure::Usage(format!("{what} involves zeta and runs in float mode only")))
        } else {
            Ok(())
        }
    };
    match name {
        ExperimentName::DirichletCauchy => {
            float_only("dirichlet-cauchy")?;
            let mut t = Table::new(vec!["q", "p", "m", "m2", "wp", "verdict", "decay_exponent", "floor"]);
            for p in orders_or(g, "1,2")? {
                let trace = cauchy_experiment(q, p, schedule, Thresholds::default())?;
                for (&(m, m2), &d) in trace.indices.iter().zip(&trace.distances) {
                    t.push(vec![
                        num(q),
                        p.to_string(),
                        m.to_string(),
                        m2.to_string(),
                        num(d),
                        trace.verdict.to_string(),
                        num(trace.decay_exponent),
                        num(trace.floor),
                    ]);
                }
            }
            Ok(Output::ok(t.render(g.format)?))
        }
        ExperimentName::MomentGrowth => {
            float_only("moment-growth")?;
            let mut t = Table::new(vec!["q", "p", "m", "moment", "increment"]);
            for p in orders_or(g, "1,2")? {
                for row in moment_growth(q, p, m_max)? {
                    t.push(vec![num(q), p.to_string(), row.m.to_string(), num(row.moment), num(row.increment)]);
                }
            }
            Ok(Output::ok(t.render(g.format)?))
        }
        ExperimentName::Density => {
            let levels: Vec<u32> = (0..=grid).collect();
            let mut t = Table::new(vec!["p", "level", "atoms", "spacing", "wp", "monotone", "within_spacing"]);
            for p in orders_or(g, "1")? {
                let table = match mode {
                    Mode::Float => density_experiment(&uniform_dyadic_grid::<f64>(grid)?, &levels, p)?,
                    Mode::Exact => density_experiment(&uniform_dyadic_grid::<Rational>(grid)?, &levels, p)?,
                };
                for r in &table.rows {
                    t.push(vec![
                        p.to_string(),
                        r.level.to_string(),
                        r.atoms.to_string(),
                        num(r.spacing),
                        num(r.distance),
                        table.monotone.to_string(),
                        table.within_spacing.to_string(),
                    ]);
                }
            }
            Ok(Output::ok(t.render(g.format)?))
        }
        ExperimentName::MomentConvergence => {
            float_only("moment-convergence")?;
            let mut t = Table::new(vec!["p", "x0", "m", "wp", "moment_gap", "wp_converges", "moments_converge", "constant"]);
            for p in orders_or(g, "1")? {
                for x0 in [0.0, 5.0] {
                    let res = dirichlet_moment_convergence(q, p, schedule, x0)?;
                    for (i, &m) in schedule.iter().enumerate() {
                        t.push(vec![
                            p.to_string(),
                            num(x0),
                            m.to_string(),
                            num(res.distances[i]),
                            num(res.moment_gaps[i]),
                            res.distances_converge.to_string(),
                            res.moments_converge.to_string(),
                            num(res.constant),
                        ]);
                    }
                }
            }
            Ok(Output::ok(t.render(g.format)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_parse_and_respect_mode() {
        let ps = parse_orders("1, 1.5,2,", Mode::Float).unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps[1].value(), 1.5);
        assert!(matches!(parse_orders("1.5", Mode::Exact), Err(Failure::Usage(_))));
        assert!(matches!(parse_orders("0.5", Mode::Float), Err(Failure::Usage(_))));
        assert!(matches!(parse_orders(" , ", Mode::Float), Err(Failure::Usage(_))));
        assert!(matches!(parse_orders("two", Mode::Float), Err(Failure::Usage(_))));
    }

    #[test]
    fn schedule_parses_integers() {
        assert_eq!(parse_schedule("2, 4,8").unwrap(), vec![2, 4, 8]);
        assert!(parse_schedule("2,x").is_err());
        assert!(parse_schedule("-1").is_err());
    }

    #[test]
    fn stdin_is_read_once() {
        let mut used = false;
        let mut input: &[u8] = b"abc";
        assert_eq!(read_input("-", &mut input, &mut used).unwrap(), "abc");
        assert!(matches!(read_input("-", &mut input, &mut used), Err(Failure::Usage(_))));
    }

    #[test]
    fn table_renders_three_ways() {
        let mut t = Table::new(vec!["m", "value"]);
        t.push(vec!["1".into(), "0.5".into()]);
        t.push(vec!["10".into(), "x,y".into()]);
        assert_eq!(t.render(Format::Text).unwrap(), " m  value\n 1    0.5\n10    x,y\n");
        assert_eq!(t.render(Format::Csv).unwrap(), "m,value\n1,0.5\n10,\"x,y\"\n");
        let v: serde_json::Value = serde_json::from_str(&t.render(Format::Json).unwrap()).unwrap();
        assert_eq!(v[1]["value"], "x,y");
        assert_eq!(v.as_array().unwrap().len(), 2);
    }
}
