//! The `calclab` command line: argument parsing, dispatch and CSV/JSON output.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 when the library reports a
//! numerical failure.

mod commands;
mod table;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};

pub use commands::run;
pub use table::{format_float, Cell, Column, ColumnKind, ResultTable};

use crate::diff::BUILTIN_FIELDS;
use crate::error::Error;

pub const FORMAT_ENV: &str = "CALCLAB_FORMAT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(CliError::Usage(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(#[from] Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Numerical(_) | Self::Io(_) => 2,
        }
    }
}

/// A validated invocation. Parameters hold the raw strings of every option,
/// defaults included, keyed by long flag name.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub params: BTreeMap<String, String>,
    pub format: Format,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub digits: usize,
}

impl RunConfig {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str, Error> {
        self.get(key).ok_or_else(|| Error::Invalid(format!("missing --{key}")))
    }

    pub fn str(&self, key: &str) -> Result<&str, Error> {
        self.require(key)
    }

    pub fn f64(&self, key: &str) -> Result<f64, Error> {
        parse_num(key, self.require(key)?)
    }

    pub fn u32(&self, key: &str) -> Result<u32, Error> {
        parse_num(key, self.require(key)?)
    }

    pub fn i32(&self, key: &str) -> Result<i32, Error> {
        parse_num(key, self.require(key)?)
    }

    pub fn usize(&self, key: &str) -> Result<usize, Error> {
        parse_num(key, self.require(key)?)
    }

    pub fn flag(&self, key: &str) -> bool {
        self.get(key) == Some("true")
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, Error> {
        self.require(key)?.split(',').map(|s| parse_num(key, s.trim())).collect()
    }

    /// Arguments that parse back to this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut out = vec!["calclab".to_string()];
        out.extend(self.subcommand.split(' ').map(String::from));
        for (k, v) in &self.params {
            if v == "true" && is_flag(&self.subcommand, k) {
                out.push(format!("--{k}"));
            } else if v != "false" || !is_flag(&self.subcommand, k) {
                out.push(format!("--{k}={v}"));
            }
        }
        out.push(format!("--format={}", if self.format == Format::Json { "json" } else { "csv" }));
        if let Some(s) = self.seed {
            out.push(format!("--seed={s}"));
        }
        if let Some(p) = &self.output {
            out.push(format!("--output={}", p.display()));
        }
        out.push(format!("--digits={}", self.digits));
        out
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, Error> {
    s.parse().map_err(|_| Error::Invalid(format!("--{key}: cannot parse `{s}`")))
}

#[derive(Clone, Copy)]
enum Kind {
    Float,
    Nat,
    Int,
    Text,
    Choice(&'static [&'static str]),
    Flag,
}

struct Opt {
    name: &'static str,
    kind: Kind,
    default: Option<&'static str>,
    required: bool,
    help: &'static str,
}

const fn req(name: &'static str, kind: Kind, help: &'static str) -> Opt {
    Opt { name, kind, default: None, required: true, help }
}

const fn opt(name: &'static str, kind: Kind, default: &'static str, help: &'static str) -> Opt {
    Opt { name, kind, default: Some(default), required: false, help }
}

const fn maybe(name: &'static str, kind: Kind, help: &'static str) -> Opt {
    Opt { name, kind, default: None, required: false, help }
}

const fn flag(name: &'static str, help: &'static str) -> Opt {
    Opt { name, kind: Kind::Flag, default: None, required: false, help }
}

pub(crate) const INTEGRANDS: &[&str] = &["gauss", "sin", "cos", "exp", "inv", "sqrt", "square", "fresnel"];
const CLASSICAL: &[&str] = &["semicircle", "mp", "arcsine", "marcsine"];
const LAWS: &[&str] = &["bernoulli", "binomial", "poisson", "gauss", "cgauss", "semicircle", "mp", "arcsine", "marcsine"];
const PROFILES: &[&str] = &["gaussian", "sine", "step"];
const PRESETS: &[&str] = &["textbook", "codata", "dimensionless"];
const SERIES: &[&str] = &["lyman", "balmer", "paschen", "brackett", "pfund", "humphreys"];

fn spec(name: &str) -> Vec<Opt> {
    use Kind::*;
    match name {
        "sequence" => vec![
            req("kind", Choice(&["factorial", "catalan", "central", "middle", "bell", "bernoulli"]), "sequence to list"),
            req("n", Nat, "last index"),
        ],
        "constants" => vec![
            req("which", Choice(&["e", "pi", "basel"]), "constant"),
            opt("terms", Nat, "1000", "number of series terms"),
        ],
        "roots" => vec![
            req("coeffs", Text, "coefficients c0,c1,... in ascending degree; complex as a+bi"),
            opt("tol", Float, "1e-12", "iteration tolerance"),
        ],
        "eig" => vec![req("matrix", Text, "CSV file, one row per line; complex entries as a+bi")],
        "integrate" => vec![
            req("method", Choice(&["riemann", "trapezoid", "simpson", "mc"]), "rule"),
            req("fn", Choice(INTEGRANDS), "integrand"),
            req("a", Float, "lower limit"),
            req("b", Float, "upper limit"),
            opt("n", Nat, "1000", "pieces or samples"),
        ],
        "sphere" => vec![
            req("what", Choice(&["volume", "area", "moment"]), "quantity"),
            req("dim", Nat, "dimension N"),
            maybe("key", Text, "exponents k1,...,kN"),
            maybe("conj", Text, "conjugate exponents for --complex (defaults to --key)"),
            flag("complex", "average over the complex sphere"),
            flag("abs", "use |x_i|^k_i"),
            opt("samples", Nat, "1000000", "Monte Carlo samples when --seed is given"),
        ],
        "law" => vec![
            req("name", Choice(LAWS), "law"),
            opt("moments", Nat, "8", "highest moment"),
            opt("p", Float, "0.5", "success probability"),
            opt("trials", Nat, "10", "binomial trials"),
            opt("t", Float, "1", "Poisson or Gaussian parameter"),
        ],
        "stieltjes" => vec![
            req("law", Choice(CLASSICAL), "law"),
            req("x", Text, "points x1,x2,... or lo:hi:count"),
            opt("t", Float, "0.001", "distance above the axis"),
        ],
        "snchi" => vec![
            req("n", Nat, "permutation size N"),
            opt("t", Float, "1", "fraction of points watched"),
            opt("samples", Nat, "1000000", "draws when N > 9"),
        ],
        "critical" => vec![req("fn", Choice(&BUILTIN_FIELDS), "field"), req("x", Text, "point x1,...,xN")],
        "harmonic" => vec![
            req("fn", Choice(&BUILTIN_FIELDS), "field"),
            opt("samples", Nat, "10", "number of sample points"),
            maybe("dim", Nat, "dimension for fields defined on every R^N"),
            opt("tol", Float, "1e-5", "residual tolerance"),
        ],
        "orbit" => vec![
            req("r0", Float, "initial distance"),
            req("vt0", Float, "initial tangential speed"),
            opt("K", Float, "1", "attraction constant"),
            req("T", Float, "duration"),
            req("dt", Float, "time step"),
            opt("every", Nat, "1", "emit every k-th step"),
        ],
        "wave" => vec![
            opt("profile", Choice(PROFILES), "gaussian", "initial shape"),
            opt("length", Float, "20", "domain [0, length]"),
            opt("dx", Float, "0.01", "grid spacing"),
            opt("cfl", Float, "0.5", "Courant number v dt/dx"),
            opt("v", Float, "1", "wave speed"),
            opt("time", Float, "5", "final time"),
            opt("frames", Nat, "5", "snapshots after t = 0"),
            maybe("center", Float, "profile center (default length/2)"),
            opt("width", Float, "1", "profile width"),
        ],
        "heat" => vec![
            opt("profile", Choice(PROFILES), "gaussian", "initial shape"),
            opt("length", Float, "20", "domain [0, length]"),
            opt("dx", Float, "0.05", "grid spacing"),
            opt("alpha", Float, "1", "diffusivity"),
            opt("ratio", Float, "0.4", "alpha dt/dx^2, at most 1/2"),
            opt("time", Float, "1", "final time"),
            opt("frames", Nat, "5", "snapshots after t = 0"),
            maybe("center", Float, "profile center (default length/2)"),
            opt("width", Float, "1", "profile width"),
        ],
        "flux" => vec![
            req("charges", Text, "CSV file with columns q,x,y,z"),
            opt("center", Text, "0,0,0", "sphere center x,y,z"),
            opt("radius", Float, "1", "sphere radius"),
            opt("order", Nat, "64", "quadrature order"),
            opt("coulomb", Float, "1", "Coulomb constant"),
        ],
        "hydrogen lines" => vec![
            req("series", Choice(SERIES), "series"),
            opt("upto", Nat, "8", "highest upper level"),
            opt("medium", Choice(&["air", "vacuum"]), "air", "air wavelengths above 200 nm, or vacuum"),
            opt("constants", Choice(PRESETS), "codata", "constant preset"),
        ],
        "hydrogen wavefunction" => vec![
            req("n", Nat, "principal number"),
            req("l", Nat, "orbital number"),
            opt("m", Int, "0", "magnetic number"),
            opt("grid", Text, "10,20", "rmax (Bohr radii),steps"),
            opt("t", Float, "0", "azimuth"),
            opt("constants", Choice(PRESETS), "textbook", "constant preset"),
        ],
        "hydrogen energy" => vec![req("n", Nat, "level"), opt("constants", Choice(PRESETS), "textbook", "constant preset")],
        _ => Vec::new(),
    }
}

const SUBCOMMANDS: &[(&str, &str)] = &[
    ("sequence", "exact integer and rational sequences"),
    ("constants", "e, pi and the Basel sum from series"),
    ("roots", "all complex roots of a polynomial"),
    ("eig", "eigenvalues of a matrix read from CSV"),
    ("integrate", "one-dimensional quadrature"),
    ("sphere", "sphere volumes, areas and moments"),
    ("law", "moments of probability laws"),
    ("stieltjes", "densities recovered from the Cauchy transform"),
    ("snchi", "fixed points of random permutations"),
    ("critical", "classify a critical point of a builtin field"),
    ("harmonic", "Laplacian residuals of a builtin field"),
    ("orbit", "Kepler orbit by RK4"),
    ("wave", "1D wave lattice against d'Alembert"),
    ("heat", "1D heat lattice against the heat kernel"),
    ("flux", "electric flux of point charges through a sphere"),
];

const HYDROGEN: &[(&str, &str)] = &[
    ("lines", "spectral series wavelengths"),
    ("wavefunction", "wavefunction on an (r, s) grid"),
    ("energy", "Bohr energy of a level"),
];

fn is_flag(subcommand: &str, key: &str) -> bool {
    spec(subcommand).iter().any(|o| o.name == key && matches!(o.kind, Kind::Flag))
}

fn build_args(cmd: Command, name: &str) -> Command {
    spec(name).into_iter().fold(cmd, |cmd, o| {
        let mut arg = Arg::new(o.name).long(o.name).help(o.help).required(o.required);
        arg = match o.kind {
            Kind::Float => arg.value_parser(value_parser!(f64)).allow_negative_numbers(true),
            Kind::Nat => arg.value_parser(value_parser!(u64)),
            Kind::Int => arg.value_parser(value_parser!(i64)).allow_negative_numbers(true),
            Kind::Text => arg.allow_hyphen_values(true),
            Kind::Choice(c) => arg.value_parser(clap::builder::PossibleValuesParser::new(c)),
            Kind::Flag => arg.action(ArgAction::SetTrue),
        };
        if let Some(d) = o.default {
            arg = arg.default_value(d);
        }
        cmd.arg(arg)
    })
}

pub fn command() -> Command {
    let mut root = Command::new("calclab")
        .about("Numerical analysis and mathematical physics toolkit")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg(
            Arg::new("format")
                .long("format")
                .global(true)
                .value_parser(["csv", "json"])
                .help(format!("output format (default from {FORMAT_ENV}, else csv)")),
        )
        .arg(Arg::new("seed").long("seed").global(true).value_parser(value_parser!(u64)).help("random seed"))
        .arg(Arg::new("output").long("output").global(true).value_parser(value_parser!(PathBuf)).help("write to a file"))
        .arg(
            Arg::new("digits")
                .long("digits")
                .global(true)
                .value_parser(value_parser!(u64).range(1..=17))
                .help("significant digits for floats in CSV (default 17)"),
        );
    for &(name, about) in SUBCOMMANDS {
        root = root.subcommand(build_args(Command::new(name).about(about), name));
    }
    let mut hydrogen = Command::new("hydrogen").about("hydrogen atom spectra and wavefunctions").subcommand_required(true);
    for &(name, about) in HYDROGEN {
        hydrogen = hydrogen.subcommand(build_args(Command::new(name).about(about), &format!("hydrogen {name}")));
    }
    root.subcommand(hydrogen)
}

fn collect(m: &ArgMatches, name: &str) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for o in spec(name) {
        if matches!(o.kind, Kind::Flag) {
            out.insert(o.name.to_string(), m.get_flag(o.name).to_string());
        } else if let Some(raw) = m.get_raw(o.name) {
            let v: Vec<String> = raw.map(|s| s.to_string_lossy().into_owned()).collect();
            out.insert(o.name.to_string(), v.join(","));
        }
    }
    out
}

/// Parses `argv` (program name first) with `env_format` as the fallback
/// output format.
pub fn parse_args_with<I, T>(argv: I, env_format: Option<&str>) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let m = command().try_get_matches_from(argv)?;
    let (sub, sm) = m.subcommand().expect("subcommand is required");
    let (name, leaf) = match sm.subcommand() {
        Some((inner, im)) => (format!("{sub} {inner}"), im),
        None => (sub.to_string(), sm),
    };
    let format = match leaf.get_one::<String>("format").map(String::as_str).or(env_format) {
        Some(f) => f.parse().map_err(|e: CliError| command().error(clap::error::ErrorKind::InvalidValue, e))?,
        None => Format::Csv,
    };
    let cfg = RunConfig {
        params: collect(leaf, &name),
        subcommand: name,
        format,
        seed: leaf.get_one::<u64>("seed").copied(),
        output: leaf.get_one::<PathBuf>("output").cloned(),
        digits: leaf.get_one::<u64>("digits").map_or(17, |d| *d as usize),
    };
    validate(&cfg).map_err(|msg| command().error(clap::error::ErrorKind::MissingRequiredArgument, msg))?;
    Ok(cfg)
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parse_args_with(argv, std::env::var(FORMAT_ENV).ok().as_deref())
}

fn validate(cfg: &RunConfig) -> Result<(), String> {
    let needs_seed = match cfg.subcommand.as_str() {
        "integrate" => cfg.get("method") == Some("mc"),
        "snchi" => cfg.usize("n").is_ok_and(|n| n > crate::prob::SN_EXACT_LIMIT),
        _ => false,
    };
    if needs_seed && cfg.seed.is_none() {
        return Err(format!("`{}` with these parameters is Monte Carlo and needs --seed", cfg.subcommand));
    }
    if cfg.subcommand == "sphere" && cfg.get("what") == Some("moment") && cfg.get("key").is_none() {
        return Err("`sphere --what moment` needs --key".into());
    }
    Ok(())
}

/// Writes the table to `sink` in the configured format.
pub fn emit(table: &ResultTable, cfg: &RunConfig, sink: &mut dyn Write) -> Result<(), CliError> {
    match cfg.format {
        Format::Csv => table.write_csv(sink, cfg.digits)?,
        Format::Json => table.write_json(sink)?,
    }
    Ok(())
}

/// Full invocation: parse, run, emit. Returns the process exit code.
pub fn run_cli<I, T>(argv: I, env_format: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args_with(argv, env_format) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            return match e.kind() {
                DisplayHelp | DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let result = run(&cfg).map_err(CliError::from).and_then(|table| match &cfg.output {
        Some(path) => {
            let mut file = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            emit(&table, &cfg, &mut file)
        }
        None => emit(&table, &cfg, out),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "calclab: {}", e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}

pub fn main() -> ExitCode {
    let env = std::env::var(FORMAT_ENV).ok();
    let code = run_cli(std::env::args_os(), env.as_deref(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
