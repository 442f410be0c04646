//! Command-line frontend. `main.rs` only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad invocation.

mod run;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::suite::Tally;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "bsgroupoid", version, about = "Baumslag-Solitar groups, finite measured groupoids and cocycles")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Flat `key=value` file; keys are long option names of the chosen
    /// subcommand. Options given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Word problem, modular homomorphism, ellipticity, isomorphism criterion.
    #[command(subcommand)]
    Bs(BsCmd),
    /// The Bass-Serre tree.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Finite measured groupoids read from JSON.
    #[command(subcommand)]
    Groupoid(GroupoidCmd),
    /// Modular and local-index cocycles, Mackey ranges, types.
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// Truncated profinite integers.
    #[command(subcommand)]
    Profinite(ProfiniteCmd),
    /// The coupling with L ⋊ Aut(T) and its diagnostics.
    #[command(subcommand)]
    Dynamics(DynamicsCmd),
    /// Seeded property suites.
    Suite(SuiteArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub q: i64,
}

#[derive(Subcommand, Debug)]
pub enum BsCmd {
    /// 𝔪(w) = |q/p|^τ(w).
    Modular {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        word: String,
    },
    /// Britton normal form.
    NormalForm {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        word: String,
    },
    /// Whether two words give the same element.
    Equal {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        word: String,
        #[arg(long)]
        other: String,
    },
    /// Whether w fixes a tree vertex, with h and c such that h⁻¹wh = a^c.
    Elliptic {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        word: String,
    },
    /// Smallest n with g xⁿ g⁻¹ = x^m for elliptic x.
    Conjugation {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        g: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
    },
    /// Whether BS(p,q) ≅ BS(r,s).
    Isomorphic {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
    },
    /// Whether BS(p,q) is amenable.
    Amenable {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum TreeCmd {
    /// Vertices adjacent to w·v₀ with edge signs.
    Neighbors {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "1")]
        vertex: String,
    },
    /// d(u·v₀, v·v₀).
    Distance {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "1")]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Edge path between two vertices.
    Geodesic {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "1")]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// [Γ_u : Γ_u ∩ Γ_v]; `--verify` compares with the smallest fixing power.
    StabilizerIndex {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "1")]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = crate::tree::DEFAULT_RADIUS)]
        radius: usize,
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupoidCmd {
    /// Checks the groupoid axioms; exit 1 names the first violation.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Transformation groupoid of permutations (`--gen 1,2,0` per generator).
    FromAction {
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        /// Comma-separated unit masses; uniform if absent.
        #[arg(long)]
        masses: Option<String>,
    },
    /// Ergodic decomposition of the subgroupoid generated by `--sub`.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sub: Option<String>,
    },
    /// [big : sub]ₓ and [[big : sub]]ₓ at every unit.
    Index {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sub: Option<String>,
        /// Generating arrows of the larger subgroupoid; everything if absent.
        #[arg(long)]
        big: Option<String>,
    },
    /// Quotient by a normal subgroupoid, verified.
    Quotient {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sub: Option<String>,
    },
    /// Whether the subgroupoid is quasi-normal.
    Quasinormal {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sub: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CocycleCmd {
    /// The level model and its modular identity on t-arrows.
    LevelModel {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        /// Exit 1 unless 𝔇·𝔌 = |q/p| on every t-arrow.
        #[arg(long)]
        verify_corollary: bool,
    },
    /// 𝔇 and 𝔌 of a subgroupoid, arrow by arrow.
    Modular {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sub: Option<String>,
    },
    /// Type of the Radon-Nikodym cocycle.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Mackey range of the label cocycle into a cyclic group.
    Mackey {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Flow type of the product of BS(p,q) ↷ ℤ/N with the rotation of ℤ/n.
    Flow {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 7)]
        modulus: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ProfiniteCmd {
    /// M_{K,L} = d₀|p₀|^K|q₀|^L.
    Modulus {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
    },
    /// Reduction to a lower level; elements are written `r@(K,L)`.
    Reduce {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
    },
    /// σ_{k,l} and its inverse.
    Sigma {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
    },
    /// x + y, x − y and x·y.
    Arith {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Unit tests: membership in U₀ and which levels r fixes.
    Unit {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        x: String,
    },
    /// Generalized valuation of m at p₀.
    Valuation {
        #[arg(long, allow_hyphen_values = true)]
        p0: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum DynamicsCmd {
    /// β(n, x) and the moved point x − n + θβ.
    Beta {
        #[arg(long)]
        theta: String,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        x: String,
    },
    /// π_θ(w)·(x, κ) on [0,1)×K.
    Act {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        kappa: String,
    },
    /// l_θ(w)/θ and the t-exponent sum.
    LTheta {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        word: String,
    },
    /// Nontrivial elements of N.
    NElements {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Rotation by θ − 1 on ℝ/Nℤ.
    Rotation {
        #[arg(long)]
        theta: String,
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
    },
    /// Cesàro averages for random cylinder and window sets.
    Cesaro {
        #[arg(long)]
        theta: String,
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        #[arg(long, default_value_t = 1 << 16)]
        width: usize,
        #[arg(long)]
        trivial_beta: bool,
    },
    /// Orbit counts of r^k s^l ℤ acting by +c on ℤ/n; exit 1 if divisibility fails.
    Components {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: u64,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long, default_value_t = 4)]
        lmax: u32,
    },
    /// (d₀; |p₀|, |q₀|)-periodicity of the odometer on ℤ/M_{K,L}.
    Odometer {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
    },
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    #[arg(value_enum)]
    pub name: SuiteName,
    #[arg(long, default_value_t = 500)]
    pub index: usize,
    #[arg(long, default_value_t = 200)]
    pub towers: usize,
    #[arg(long, default_value_t = 50)]
    pub group_actions: usize,
    #[arg(long, default_value_t = 100)]
    pub quotients: usize,
    #[arg(long, default_value_t = 100)]
    pub cohomology: usize,
    #[arg(long, default_value_t = 50)]
    pub mackey: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Lemmas,
    Dynamics,
    All,
}

/// What a command produced.
#[derive(Debug)]
pub struct Report {
    pub value: Value,
    /// False when a verification failed.
    pub ok: bool,
    pub failure: Option<String>,
    pub tally: Option<Tally>,
    pub csv: Option<String>,
}

impl Report {
    pub fn new(value: Value) -> Self {
        Report { value, ok: true, failure: None, tally: None, csv: None }
    }

    pub fn verified(value: Value, ok: bool, failure: impl FnOnce() -> String) -> Self {
        Report { ok, failure: (!ok).then(failure), ..Report::new(value) }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn leaf<'a>(mut cmd: &'a clap::Command, mut m: &'a ArgMatches) -> (&'a clap::Command, &'a ArgMatches) {
    while let Some((name, sub)) = m.subcommand() {
        match cmd.find_subcommand(name) {
            Some(c) => {
                cmd = c;
                m = sub;
            }
            None => break,
        }
    }
    (cmd, m)
}

/// Appends `--key value` for every config entry not already given.
fn merge_config(args: Vec<OsString>, matches: &ArgMatches, path: &PathBuf) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let root = Cli::command();
    let (cmd, m) = leaf(&root, matches);
    let mut known: BTreeSet<String> = ["format".to_string(), "seed".to_string()].into();
    let mut flags = BTreeSet::new();
    for a in cmd.get_arguments() {
        if let Some(long) = a.get_long() {
            known.insert(long.to_string());
            if !a.get_action().takes_values() {
                flags.insert(long.to_string());
            }
        }
    }
    let mut out = args;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if !known.contains(key) {
            let allowed: Vec<&str> = known.iter().map(String::as_str).collect();
            return Err(CliError::Usage(format!(
                "config line {}: unknown key {key:?} (allowed: {})",
                n + 1,
                allowed.join(", ")
            )));
        }
        let id = cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(key))
            .map(|a| a.get_id().as_str().to_string())
            .unwrap_or_else(|| key.to_string());
        let given = [m, matches]
            .iter()
            .any(|mm| mm.try_contains_id(&id).unwrap_or(false) && mm.value_source(&id) == Some(clap::parser::ValueSource::CommandLine));
        if given {
            continue;
        }
        if flags.contains(key) {
            match value {
                "true" => out.push(format!("--{key}").into()),
                "false" => {}
                _ => return Err(CliError::Usage(format!("config key {key}: expected true or false"))),
            }
        } else {
            out.push(format!("--{key}").into());
            out.push(value.into());
        }
    }
    Ok(out)
}

/// The same command tree with every argument optional, so that options
/// supplied only by the config file do not fail the first pass.
fn relaxed(cmd: clap::Command) -> clap::Command {
    let ids: Vec<clap::Id> = cmd.get_arguments().map(|a| a.get_id().clone()).collect();
    let names: Vec<String> = cmd.get_subcommands().map(|c| c.get_name().to_string()).collect();
    let mut cmd = cmd;
    for id in ids {
        cmd = cmd.mut_arg(id, |a| a.required(false));
    }
    for name in names {
        cmd = cmd.mut_subcommand(name, relaxed);
    }
    cmd
}

fn parse(args: Vec<OsString>) -> Result<Cli, clap::Error> {
    let loose = relaxed(Cli::command()).try_get_matches_from(args.clone());
    let path = loose.as_ref().ok().and_then(|m| m.get_one::<PathBuf>("config").cloned());
    let (Some(path), Ok(matches)) = (path, loose) else {
        let matches = Cli::command().try_get_matches_from(args)?;
        return Cli::from_arg_matches(&matches);
    };
    let merged = merge_config(args, &matches, &path).map_err(|CliError::Usage(m)| {
        Cli::command().error(clap::error::ErrorKind::InvalidValue, m)
    })?;
    let matches = Cli::command().try_get_matches_from(merged)?;
    Cli::from_arg_matches(&matches)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push((prefix.to_string(), items.join(" ")));
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match (format, &report.tally) {
        (Format::Json, _) => format!("{}\n", report.value),
        (Format::Csv, Some(t)) => t.to_csv(),
        (Format::Text, Some(t)) => t.to_text(),
        (Format::Csv, None) => {
            if let Some(c) = &report.csv {
                return c.clone();
            }
            let mut rows = Vec::new();
            flatten("", &report.value, &mut rows);
            let mut s = String::from("key,value\n");
            for (k, v) in rows {
                s.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&v)));
            }
            s
        }
        (Format::Text, None) => {
            let mut rows = Vec::new();
            flatten("", &report.value, &mut rows);
            rows.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
        }
    }
}

/// Parses, runs and renders one invocation.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Output { code: EXIT_OK, stdout: text, stderr: String::new() }
            } else {
                Output { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            };
        }
    };
    match run::dispatch(&cli) {
        Ok(report) => {
            let stdout = render(&report, cli.format);
            let (code, stderr) = if report.ok {
                (EXIT_OK, String::new())
            } else {
                (EXIT_FAILURE, format!("verification failed: {}\n", report.failure.as_deref().unwrap_or("see report")))
            };
            Output { code, stdout, stderr }
        }
        Err(CliError::Usage(m)) => Output { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}
