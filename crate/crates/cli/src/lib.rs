//! The `pdo` command line.
//!
//! `run` takes the argument vector (without the program name) and returns
//! the exit status: 0 on success, 1 on usage or computation errors, 2 when
//! `verify` finds mismatches or a `check` suite fails.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use pdo_core::hierarchy::{conserved_density, lax_flow, required_depth, to_primary_basis};
use pdo_core::report::verify_all;
use pdo_core::roots::nth_root;
use pdo_core::{structure, Basis, DiffPoly, LaxOperator};
use serde::Serialize;
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

const GRAMMAR: &str = "pdo <root|flow|density|check|verify> [--order N] [--depth D] \
[--hierarchy sl2|sl3] [--time K] [--basis u|primary] [--suite NAME] [--trials N] [--seed S] \
[--format text|latex|json] [--report PATH] [--config PATH]";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Coefficients b_2 .. b_{D+1} of L^{1/n}.
    Root,
    /// The t_K flow of a hierarchy.
    Flow,
    /// The conserved density res L^{K/n}.
    Density,
    /// Randomized structural suites.
    Check,
    /// Recompute every reference table and diff it term by term.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HierarchyArg {
    Sl2,
    Sl3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    U,
    Primary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Closure,
    Duality,
    Binomial,
    Grading,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pdo", version, about = "Exact pseudo-differential operator algebra", override_usage = GRAMMAR)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Order n of the Lax operator (root).
    #[arg(long)]
    pub order: Option<u32>,
    /// Root depth; defaults to the smallest certified depth.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_enum)]
    pub hierarchy: Option<HierarchyArg>,
    /// Flow time or density power K.
    #[arg(long)]
    pub time: Option<u32>,
    #[arg(long, value_enum)]
    pub basis: Option<BasisArg>,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the verify report as JSON to this path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// key=value file supplying defaults for the options above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Options after merging command line, config file and defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub command: Command,
    pub order: u32,
    pub depth: Option<usize>,
    pub hierarchy: HierarchyArg,
    pub time: u32,
    pub basis: BasisArg,
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub format: Format,
    pub report: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl From<pdo_core::Error> for CliError {
    fn from(e: pdo_core::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

fn allowed(command: Command) -> &'static [&'static str] {
    match command {
        Command::Root => &["order", "depth", "format"],
        Command::Flow => &["hierarchy", "time", "basis", "depth", "format"],
        Command::Density => &["hierarchy", "time", "depth", "format"],
        Command::Check => &["suite", "trials", "seed", "format"],
        Command::Verify => &["report", "format"],
    }
}

fn given_flags(args: &Args) -> Vec<&'static str> {
    let mut out = Vec::new();
    let mut add = |name, set: bool| {
        if set {
            out.push(name)
        }
    };
    add("order", args.order.is_some());
    add("depth", args.depth.is_some());
    add("hierarchy", args.hierarchy.is_some());
    add("time", args.time.is_some());
    add("basis", args.basis.is_some());
    add("suite", args.suite.is_some());
    add("trials", args.trials.is_some());
    add("seed", args.seed.is_some());
    add("format", args.format.is_some());
    add("report", args.report.is_some());
    out
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(src: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
        let k = k.trim().to_string();
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key '{k}'",
                n + 1
            )));
        }
        let v = v.trim().trim_matches('"').to_string();
        out.insert(k, v);
    }
    Ok(out)
}

const KEYS: [&str; 10] = [
    "order",
    "depth",
    "hierarchy",
    "time",
    "basis",
    "suite",
    "trials",
    "seed",
    "format",
    "report",
];

fn config_value<T: std::str::FromStr>(
    config: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    config
        .get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| CliError::Usage(format!("config: bad value '{v}' for {key}")))
        })
        .transpose()
}

fn config_enum<T: ValueEnum>(
    config: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    config
        .get(key)
        .map(|v| {
            T::from_str(v, false)
                .map_err(|_| CliError::Usage(format!("config: bad value '{v}' for {key}")))
        })
        .transpose()
}

/// Merges command line over config over defaults, rejecting flags the
/// subcommand does not take.
pub fn resolve(args: Args) -> Result<Options, CliError> {
    let allowed = allowed(args.command);
    if let Some(bad) = given_flags(&args)
        .into_iter()
        .find(|f| !allowed.contains(f))
    {
        return Err(CliError::Usage(format!(
            "--{bad} does not apply to '{}'",
            args.command.to_possible_value().expect("named").get_name()
        )));
    }
    let config = match &args.config {
        Some(path) => {
            let src = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            parse_config(&src)?
        }
        None => BTreeMap::new(),
    };
    let use_config = |key: &str| allowed.contains(&key);
    macro_rules! pick {
        ($field:ident, $getter:ident, $default:expr) => {
            match args.$field {
                Some(v) => Some(v),
                None if use_config(stringify!($field)) => $getter(&config, stringify!($field))?,
                None => None,
            }
            .unwrap_or($default)
        };
    }
    let depth = match args.depth {
        Some(d) => Some(d),
        None if use_config("depth") => config_value(&config, "depth")?,
        None => None,
    };
    let report = match args.report {
        Some(r) => Some(r),
        None if use_config("report") => config.get("report").map(PathBuf::from),
        None => None,
    };
    Ok(Options {
        command: args.command,
        order: pick!(order, config_value, 2),
        depth,
        hierarchy: pick!(hierarchy, config_enum, HierarchyArg::Sl2),
        time: pick!(time, config_value, 3),
        basis: pick!(basis, config_enum, BasisArg::U),
        suite: pick!(suite, config_enum, Suite::All),
        trials: pick!(trials, config_value, 50),
        seed: pick!(seed, config_value, 0),
        format: pick!(format, config_enum, Format::Text),
        report,
    })
}

/// Rendered output and exit status of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub status: i32,
}

fn lax_for(h: HierarchyArg) -> LaxOperator {
    match h {
        HierarchyArg::Sl2 => LaxOperator::sl2(),
        HierarchyArg::Sl3 => LaxOperator::sl3(),
    }
}

fn to_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn render_root(o: &Options) -> Result<Outcome, CliError> {
    if o.order < 2 {
        return Err(CliError::Usage("--order must be at least 2".into()));
    }
    let lax = LaxOperator::for_order(o.order)?;
    let depth = o.depth.unwrap_or(4);
    let root = nth_root(&lax, depth)?;
    let rows: Vec<(usize, &DiffPoly)> = root.b_table().iter().enumerate().skip(2).collect();
    let stdout = match o.format {
        Format::Text => rows.iter().map(|(j, b)| format!("b{j} = {b}\n")).collect(),
        Format::Latex => rows
            .iter()
            .map(|(j, b)| format!("b_{{{j}}} = {}\n", b.to_latex()))
            .collect(),
        Format::Json => {
            let coefficients: Vec<_> = rows
                .iter()
                .map(|(j, b)| json!({"index": j, "poly": b.to_json_value()}))
                .collect();
            to_pretty(&json!({
                "order": o.order,
                "depth": depth,
                "root": root.root().to_json_value(),
                "coefficients": coefficients,
            })) + "\n"
        }
    };
    Ok(Outcome {
        stdout,
        status: EXIT_OK,
    })
}

fn render_flow(o: &Options) -> Result<Outcome, CliError> {
    let lax = lax_for(o.hierarchy);
    let depth = o.depth.unwrap_or_else(|| required_depth(o.time));
    let mut flow = lax_flow(&lax, o.time, depth)?;
    if o.basis == BasisArg::Primary {
        if o.hierarchy != HierarchyArg::Sl3 {
            return Err(CliError::Usage(
                "--basis primary needs --hierarchy sl3".into(),
            ));
        }
        flow = to_primary_basis(&flow)?;
    }
    debug_assert_eq!(flow.basis() == Basis::Primary, o.basis == BasisArg::Primary);
    let stdout = match o.format {
        Format::Text => flow.to_text() + "\n",
        Format::Latex => flow.to_latex() + "\n",
        Format::Json => to_pretty(&flow.to_json()) + "\n",
    };
    Ok(Outcome {
        stdout,
        status: EXIT_OK,
    })
}

fn render_density(o: &Options) -> Result<Outcome, CliError> {
    let lax = lax_for(o.hierarchy);
    let depth = o.depth.unwrap_or(o.time as usize);
    let h = conserved_density(&lax, o.time, depth)?;
    let n = lax.order();
    let stdout = match o.format {
        Format::Text => format!("res L^({}/{n}) = {h}\n", o.time),
        Format::Latex => format!(
            "\\mathrm{{res}}\\, L^{{{}/{n}}} = {}\n",
            o.time,
            h.to_latex()
        ),
        Format::Json => {
            to_pretty(&json!({
                "hierarchy": lax.hierarchy().to_string(),
                "power": o.time,
                "density": h.to_json_value(),
            })) + "\n"
        }
    };
    Ok(Outcome {
        stdout,
        status: EXIT_OK,
    })
}

#[derive(Clone, Debug, Serialize)]
struct CheckLine {
    suite: &'static str,
    name: String,
    passed: bool,
}

const CLOSURE_OUTSIDE: [(i32, i32, i32); 5] =
    [(2, 0, 2), (0, 0, 2), (1, 0, 1), (0, 1, 2), (1, -3, -1)];
const DUALITY_WINDOWS: [(i32, i32); 5] = [(0, 0), (0, 1), (0, 2), (-1, 1), (-2, -1)];

fn run_checks(o: &Options) -> Result<Vec<CheckLine>, CliError> {
    let mut lines = Vec::new();
    let want = |s: Suite| o.suite == s || o.suite == Suite::All;
    if want(Suite::Closure) {
        for (m, p, q) in structure::closure_constraint_points(4) {
            let out = structure::check_closure(m, p, q, o.trials, o.seed)?;
            lines.push(CheckLine {
                suite: "closure",
                name: format!("Xi_{m}^({p},{q}) closed"),
                passed: out.closed,
            });
        }
        for (m, p, q) in CLOSURE_OUTSIDE {
            let out = structure::check_closure(m, p, q, o.trials, o.seed)?;
            let name = match &out.witness {
                Some(w) => format!("Xi_{m}^({p},{q}) open: {}", w.reason),
                None => format!("Xi_{m}^({p},{q}) open"),
            };
            lines.push(CheckLine {
                suite: "closure",
                name,
                passed: !out.closed && out.witness.is_some(),
            });
        }
    }
    if want(Suite::Duality) {
        for (p, q) in DUALITY_WINDOWS {
            let out = structure::check_duality(p, q, o.trials, o.seed)?;
            lines.push(CheckLine {
                suite: "duality",
                name: format!("({p},{q}) pairs with ({},{})", -1 - q, -1 - p),
                passed: out.holds(),
            });
        }
    }
    if want(Suite::Binomial) {
        let mut ok = true;
        for i in 0..=8 {
            for j in 0..=8 {
                for k in 0..=8 {
                    ok &= structure::check_binomial_identity(i, j, k);
                }
            }
        }
        lines.push(CheckLine {
            suite: "binomial",
            name: "Vandermonde convolution for i,j,k <= 8".into(),
            passed: ok,
        });
    }
    if want(Suite::Grading) {
        for (object, ok) in structure::check_grading_table(o.trials, o.seed)? {
            lines.push(CheckLine {
                suite: "grading",
                name: object.to_string(),
                passed: ok,
            });
        }
        lines.push(CheckLine {
            suite: "grading",
            name: "residue weight".into(),
            passed: structure::check_residue_weight(o.trials, o.seed)?,
        });
        lines.push(CheckLine {
            suite: "grading",
            name: "window additivity".into(),
            passed: structure::check_window_additivity(o.trials, o.seed)?,
        });
    }
    Ok(lines)
}

fn render_check(o: &Options) -> Result<Outcome, CliError> {
    let lines = run_checks(o)?;
    let passed = lines.iter().all(|l| l.passed);
    let stdout = match o.format {
        Format::Json => {
            to_pretty(&json!({
                "trials": o.trials,
                "seed": o.seed,
                "passed": passed,
                "checks": lines,
            })) + "\n"
        }
        Format::Text | Format::Latex => {
            let mut s = String::new();
            for l in &lines {
                let mark = if l.passed { "PASS" } else { "FAIL" };
                writeln!(s, "{mark} {}: {}", l.suite, l.name).expect("string");
            }
            let ok = lines.iter().filter(|l| l.passed).count();
            writeln!(s, "{ok}/{} checks passed", lines.len()).expect("string");
            s
        }
    };
    Ok(Outcome {
        stdout,
        status: if passed { EXIT_OK } else { EXIT_MISMATCH },
    })
}

fn render_verify(o: &Options) -> Result<Outcome, CliError> {
    let report = verify_all();
    let json = report.to_json_pretty() + "\n";
    if let Some(path) = &o.report {
        std::fs::write(path, &json)
            .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))?;
    }
    let stdout = match o.format {
        Format::Json => json,
        Format::Text => report.to_text(),
        Format::Latex => {
            let mut s = String::from("\\begin{tabular}{lll}\n");
            for e in &report.entries {
                let status = if e.is_match() { "match" } else { "mismatch" };
                writeln!(
                    s,
                    "\\texttt{{{}}} & {status} & {}/{} \\\\",
                    e.location.replace('_', "\\_"),
                    e.terms_matching,
                    e.terms_total
                )
                .expect("string");
            }
            s.push_str("\\end{tabular}\n");
            s
        }
    };
    let status = if report.is_clean() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    Ok(Outcome { stdout, status })
}

/// Executes resolved options.
pub fn execute(o: &Options) -> Result<Outcome, CliError> {
    match o.command {
        Command::Root => render_root(o),
        Command::Flow => render_flow(o),
        Command::Density => render_density(o),
        Command::Check => render_check(o),
        Command::Verify => render_verify(o),
    }
}

/// Parses `argv` (without the program name), runs it and writes to the
/// given streams.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let full =
        std::iter::once(std::ffi::OsString::from("pdo")).chain(argv.into_iter().map(Into::into));
    let args = match Args::try_parse_from(full) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = resolve(args).and_then(|o| execute(&o));
    match result {
        Ok(outcome) => {
            let _ = out.write_all(outcome.stdout.as_bytes());
            outcome.status
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\nusage: {GRAMMAR}");
            EXIT_USAGE
        }
        Err(CliError::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}
