//! Command-line front end for `jacobi-core`.
//!
//! Every command emits one document: JSON (an [`Envelope`] carrying the
//! schema version, the resolved configuration and the result) or headered CSV.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jacobi_core::coeffs::DEFAULT_WINDOW;
use jacobi_core::{
    check_contraction, christoffel_mass, estimate_limit, grid_rows, poincare_roots, ratio_sequence, s_to_j,
    spectrum_sweep, ClassificationReport, CoefficientSequence, Complex64, Fraction, FamilySpec, GridRow, JFraction,
    LimitEstimate, LimitOptions, PoincareRoots, RatioReport, SFraction, SFractionDocument, SequenceDocument, SpectrumReport,
    SweepOptions, FAMILY_NAMES,
};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BAD_INPUT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;
pub const EXIT_UNSUPPORTED: i32 = 5;

const EXIT_CODES: &str = "\
Exit status:
  0  success
  1  output could not be written
  2  bad usage (unknown flag, missing or conflicting arguments)
  3  bad input (unreadable or invalid coefficient file, parameter out of domain)
  4  numerical failure (eigensolver did not converge, pole in a convergent)
  5  unsupported range (e.g. Bessel oracle outside its domain)";

#[derive(Debug, Parser)]
#[command(name = "jacobi", version, about = "Spectral analysis of Jacobi operators from recurrence coefficients")]
#[command(after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compact / trace-class / M(a,b) verdicts from declared limits or a tail window.
    Classify(ClassifyArgs),
    /// Eigenvalues of finite sections, converged mass points and accumulation points.
    Spectrum(SpectrumArgs),
    /// Continued-fraction convergents or limit estimates at complex points.
    Cf(CfArgs),
    /// Ratios p_{k+1}(x)/p_k(x) and the Poincare characteristic roots.
    Ratio(RatioArgs),
    /// Christoffel sums sum p_k(x)^2 and the point-mass estimate at x.
    Mass(MassArgs),
    /// Built-in coefficient families.
    Family(FamilyArgs),
    /// Compare x*S_{2n}(1/z) with the contracted J-fraction J_n(z).
    ContractCheck(ContractArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

/// Coefficient sequence source: a built-in family or a JSON file.
#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false, args = ["family", "coeff_file"])]
pub struct SequenceArgs {
    /// Built-in family (chebyshev, lommel, tricomi_carlitz, natvig, chihara_ismail, rogers_ramanujan).
    #[arg(long)]
    pub family: Option<String>,
    /// JSON coefficient-sequence document ({"kind": "table" | "rule", ...}).
    #[arg(long)]
    pub coeff_file: Option<PathBuf>,
    #[command(flatten)]
    pub params: FamilyParams,
}

/// Family parameters; unset ones take the family defaults.
#[derive(Debug, Default, Args)]
pub struct FamilyParams {
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
}

impl FamilyParams {
    fn map(&self) -> BTreeMap<String, f64> {
        [("a", self.a), ("b", self.b), ("nu", self.nu), ("alpha", self.alpha), ("lambda", self.lambda), ("mu", self.mu), ("q", self.q)]
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect()
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: SequenceArgs,
    /// First index of the tail window.
    #[arg(long, default_value_t = DEFAULT_WINDOW.start)]
    pub window_start: usize,
    /// End (exclusive) of the tail window.
    #[arg(long, default_value_t = DEFAULT_WINDOW.end)]
    pub window_end: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub input: SequenceArgs,
    /// Increasing truncation sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [200usize, 400])]
    pub sizes: Vec<usize>,
    /// Persistence tolerance between the two largest sizes.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Single-linkage distance for accumulation clusters [default: 10 * tol].
    #[arg(long)]
    pub linkage: Option<f64>,
}

#[derive(Debug, Args)]
#[group(id = "fraction", required = true, multiple = false, args = ["family", "coeff_file", "sfrac_file"])]
pub struct CfArgs {
    /// S-fraction document; points are values of t.
    #[arg(long)]
    pub sfrac_file: Option<PathBuf>,
    /// J-fraction from a built-in family; points are values of z.
    #[arg(long)]
    pub family: Option<String>,
    /// J-fraction from a coefficient file; points are values of z.
    #[arg(long)]
    pub coeff_file: Option<PathBuf>,
    #[command(flatten)]
    pub params: FamilyParams,
    /// Leading numerator of the J-fraction.
    #[arg(long, default_value_t = 1.0)]
    pub lambda0: f64,
    /// Evaluation points such as 2, -0.5, 3+1i (repeatable).
    #[arg(long = "point", value_parser = parse_complex, allow_hyphen_values = true)]
    pub points: Vec<Complex64>,
    /// Rectangular grid RE_MIN,RE_MAX,IM_MIN,IM_MAX,STEPS appended to the points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub grid: Option<Vec<f64>>,
    /// Convergent order; without it the limit is estimated.
    #[arg(long)]
    pub n: Option<usize>,
    /// Agreement tolerance for limit estimation.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Largest order tried when estimating the limit.
    #[arg(long, default_value_t = 100_000)]
    pub max_n: usize,
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    #[command(flatten)]
    pub input: SequenceArgs,
    /// Evaluation point (real or complex, e.g. 2 or 0.5+0.1i).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub x: Complex64,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct MassArgs {
    #[command(flatten)]
    pub input: SequenceArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    /// Largest index k of the partial sum S_k.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[command(subcommand)]
    pub action: FamilyAction,
}

#[derive(Debug, Subcommand)]
pub enum FamilyAction {
    /// All families with their default parameters.
    List,
    /// One family as a coefficient-sequence document.
    Info {
        name: String,
        #[command(flatten)]
        params: FamilyParams,
    },
}

#[derive(Debug, Args)]
pub struct ContractArgs {
    #[arg(long)]
    pub sfrac_file: PathBuf,
    /// J-fraction order; the S-fraction side uses 2n.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "2")]
    pub z: Complex64,
    /// Residual threshold reported as `within_tol`.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    Complex64::from_str(s.trim()).map_err(|_| format!("'{s}' is not a number like 2, -0.5 or 3+1i"))
}

/// Failure of one run, mapped to an exit status.
#[derive(Debug)]
pub enum CliError {
    Core(jacobi_core::Error),
    Input(String),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use jacobi_core::Error;
        match self {
            CliError::Core(Error::NumericalFailure(_)) => EXIT_NUMERICAL,
            CliError::Core(Error::UnsupportedRange(_)) => EXIT_UNSUPPORTED,
            CliError::Core(_) | CliError::Input(_) => EXIT_BAD_INPUT,
            CliError::Output(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(m) | CliError::Output(m) => f.write_str(m),
        }
    }
}

impl From<jacobi_core::Error> for CliError {
    fn from(e: jacobi_core::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// JSON document emitted by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<C, R> {
    pub schema_version: u32,
    pub command: String,
    pub config: C,
    pub result: R,
}

/// Resolved input source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum InputConfig {
    Family { family: FamilySpec },
    File { path: String, document: SequenceDocument },
    Sfraction { path: String, document: Option<SFractionDocument> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub input: InputConfig,
    pub window: (usize, usize),
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub input: InputConfig,
    pub sizes: Vec<usize>,
    pub tol: f64,
    pub linkage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfConfig {
    pub input: InputConfig,
    /// Only meaningful for J-fractions.
    pub lambda0: f64,
    pub points: Vec<Complex64>,
    pub n: Option<usize>,
    pub tol: f64,
    pub max_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub point: Complex64,
    pub estimate: LimitEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CfResult {
    Convergents { rows: Vec<GridRow> },
    Limits { rows: Vec<LimitRow> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioConfig {
    pub input: InputConfig,
    pub x: Complex64,
    pub n: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioResult {
    pub report: RatioReport<Complex64>,
    /// From declared limits with `a > 0`.
    pub roots: Option<PoincareRoots>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassConfig {
    pub input: InputConfig,
    pub x: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassRow {
    pub k: usize,
    pub log_sum: f64,
    /// `None` once `S_k` overflows a double.
    pub sum: Option<f64>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub limits: (f64, f64),
    pub provenance: String,
    pub document: SequenceDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractConfig {
    pub input: InputConfig,
    pub n: usize,
    pub z: Complex64,
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractResult {
    pub residual: f64,
    pub within_tol: bool,
    pub lambda0: f64,
}

/// A rendered document.
pub struct Rendered(pub String);

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_sequence(family: Option<&str>, file: Option<&Path>, params: &FamilyParams) -> CliResult<(CoefficientSequence, InputConfig)> {
    match (family, file) {
        (Some(name), None) => {
            let spec = FamilySpec::from_name_params(name, &params.map())?;
            Ok((spec.build()?, InputConfig::Family { family: spec }))
        }
        (None, Some(path)) => {
            if let Some(k) = params.map().keys().next() {
                return Err(CliError::Input(format!("--{k} only applies to --family")));
            }
            let c =CoefficientSequence::from_json(&read(path)?)?;
            let document = c.to_document()?;
            Ok((c, InputConfig::File { path: path.display().to_string(), document }))
        }
        _ => Err(CliError::Input("exactly one of --family and --coeff-file is required".into())),
    }
}

fn load_sfraction(path: &Path) -> CliResult<(SFraction, InputConfig)> {
    let s = SFraction::from_json(&read(path)?)?;
    let document = s.document().cloned();
    Ok((s, InputConfig::Sfraction { path: path.display().to_string(), document }))
}

fn json<C: Serialize, R: Serialize>(command: &str, config: C, result: R) -> CliResult<Rendered> {
    let env = Envelope { schema_version: SCHEMA_VERSION, command: command.to_string(), config, result };
    let mut text = serde_json::to_string_pretty(&env).map_err(|e| CliError::Output(e.to_string()))?;
    text.push('\n');
    Ok(Rendered(text))
}

fn csv_rows<T: Serialize>(rows: &[T]) -> CliResult<Rendered> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Output(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    Ok(Rendered(String::from_utf8(bytes).expect("csv writer emits UTF-8")))
}

fn check_tol(tol: f64) -> CliResult<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("--tol must be positive, got {tol}")))
    }
}

#[derive(Serialize)]
struct ClassifyRow {
    is_compact: String,
    is_trace_class: String,
    mab_a: Option<f64>,
    mab_b: Option<f64>,
    window_start: usize,
    window_end: usize,
    max_residual: f64,
    centered_sum: Option<f64>,
}

fn classify(args: &ClassifyArgs, format: Format) -> CliResult<Rendered> {
    check_tol(args.tol)?;
    let (c, input) = load_sequence(args.input.family.as_deref(), args.input.coeff_file.as_deref(), &args.input.params)?;
    let report: ClassificationReport = c.classify(args.window_start..args.window_end, args.tol)?;
    match format {
        Format::Json => json("classify", ClassifyConfig { input, window: (args.window_start, args.window_end), tol: args.tol }, report),
        Format::Csv => {
            let verdict = |v| serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            csv_rows(&[ClassifyRow {
                is_compact: verdict(report.is_compact),
                is_trace_class: verdict(report.is_trace_class),
                mab_a: report.mab.map(|m| m.0),
                mab_b: report.mab.map(|m| m.1),
                window_start: report.evidence.window.0,
                window_end: report.evidence.window.1,
                max_residual: report.evidence.max_residual,
                centered_sum: report.evidence.centered_sum,
            }])
        }
    }
}

fn spectrum(args: &SpectrumArgs, format: Format) -> CliResult<Rendered> {
    check_tol(args.tol)?;
    let (c, input) = load_sequence(args.input.family.as_deref(), args.input.coeff_file.as_deref(), &args.input.params)?;
    let opts = SweepOptions { tol: args.tol, linkage: args.linkage };
    let report: SpectrumReport = spectrum_sweep(&c, &args.sizes, opts)?;
    match format {
        Format::Json => {
            let config = SpectrumConfig { input, sizes: args.sizes.clone(), tol: args.tol, linkage: report.linkage };
            json("spectrum", config, report)
        }
        Format::Csv => csv_rows(&report.rows()),
    }
}

fn grid_points(grid: &[f64]) -> CliResult<Vec<Complex64>> {
    let [re0, re1, im0, im1, steps] = grid else {
        return Err(CliError::Input("--grid needs RE_MIN,RE_MAX,IM_MIN,IM_MAX,STEPS".into()));
    };
    if !(*steps >= 1.0 && steps.fract() == 0.0 && *steps <= 1000.0) {
        return Err(CliError::Input("grid STEPS must be an integer in 1..=1000".into()));
    }
    let k = *steps as usize;
    let at = |lo: f64, hi: f64, i: usize| if k == 1 { lo } else { lo + (hi - lo) * i as f64 / (k - 1) as f64 };
    Ok((0..k).flat_map(|i| (0..k).map(move |j| Complex64::new(at(*re0, *re1, j), at(*im0, *im1, i)))).collect())
}

#[derive(Serialize)]
struct LimitCsvRow {
    re_point: f64,
    im_point: f64,
    status: &'static str,
    order: usize,
    re_value: Option<f64>,
    im_value: Option<f64>,
}

fn cf(args: &CfArgs, format: Format) -> CliResult<Rendered> {
    check_tol(args.tol)?;
    let mut points = args.points.clone();
    if let Some(grid) = &args.grid {
        points.extend(grid_points(grid)?);
    }
    if points.is_empty() {
        return Err(CliError::Input("give at least one --point or a --grid".into()));
    }
    let s_frac;
    let j_frac;
    let (fraction, input) = match &args.sfrac_file {
        Some(path) => {
            let (s, input) = load_sfraction(path)?;
            s_frac = s;
            (Fraction::S(&s_frac), input)
        }
        None => {
            let (c, input) = load_sequence(args.family.as_deref(), args.coeff_file.as_deref(), &args.params)?;
            j_frac = JFraction::from_sequence(args.lambda0, &c);
            (Fraction::J(&j_frac), input)
        }
    };
    let config = CfConfig { input, lambda0: args.lambda0, points: points.clone(), n: args.n, tol: args.tol, max_n: args.max_n };
    match args.n {
        Some(n) => {
            let rows = grid_rows(fraction, &points, n);
            match format {
                Format::Json => json("cf", config, CfResult::Convergents { rows }),
                Format::Csv => csv_rows(&rows),
            }
        }
        None => {
            let opts = LimitOptions { tol: args.tol, window: LimitOptions::default().window, max_n: args.max_n };
            let rows = points
                .iter()
                .map(|&p| Ok(LimitRow { point: p, estimate: estimate_limit(fraction, p, opts)? }))
                .collect::<CliResult<Vec<_>>>()?;
            match format {
                Format::Json => json("cf", config, CfResult::Limits { rows }),
                Format::Csv => {
                    let flat: Vec<LimitCsvRow> = rows
                        .iter()
                        .map(|r| {
                            let (status, order, value) = match r.estimate {
                                LimitEstimate::Converged { value, order } => ("converged", order, Some(value)),
                                LimitEstimate::Pole { order } => ("pole", order, None),
                                LimitEstimate::Undetermined { order, last } => ("undetermined", order, last),
                            };
                            LimitCsvRow {
                                re_point: r.point.re,
                                im_point: r.point.im,
                                status,
                                order,
                                re_value: value.map(|v| v.re),
                                im_value: value.map(|v| v.im),
                            }
                        })
                        .collect();
                    csv_rows(&flat)
                }
            }
        }
    }
}

#[derive(Serialize)]
struct RatioCsvRow {
    k: usize,
    re_ratio: Option<f64>,
    im_ratio: Option<f64>,
}

fn ratio(args: &RatioArgs, format: Format) -> CliResult<Rendered> {
    check_tol(args.tol)?;
    let (c, input) = load_sequence(args.input.family.as_deref(), args.input.coeff_file.as_deref(), &args.input.params)?;
    let report = ratio_sequence(&c, args.x, args.n, args.tol)?;
    let roots = match c.limits().filter(|l| l.a_limit > 0.0) {
        Some(l) => {
            let (a, b) = l.mab();
            Some(poincare_roots(a, b, args.x)?)
        }
        None => None,
    };
    match format {
        Format::Json => json("ratio", RatioConfig { input, x: args.x, n: args.n, tol: args.tol }, RatioResult { report, roots }),
        Format::Csv => {
            let rows: Vec<RatioCsvRow> = report
                .ratios
                .iter()
                .enumerate()
                .map(|(i, r)| RatioCsvRow { k: i + 1, re_ratio: r.map(|v| v.re), im_ratio: r.map(|v| v.im) })
                .collect();
            csv_rows(&rows)
        }
    }
}

/// Checkpoints 0, 1, 2, 4, ... and `n`.
fn checkpoints(n: usize) -> Vec<usize> {
    let mut ks = vec![0];
    let mut k = 1;
    while k < n {
        ks.push(k);
        k *= 2;
    }
    if n > 0 {
        ks.push(n);
    }
    ks
}

fn mass(args: &MassArgs, format: Format) -> CliResult<Rendered> {
    let (c, input) = load_sequence(args.input.family.as_deref(), args.input.coeff_file.as_deref(), &args.input.params)?;
    let sums = christoffel_mass(&c, args.x, args.n)?;
    let rows: Vec<MassRow> = checkpoints(args.n)
        .into_iter()
        .map(|k| {
            let s = sums.sum(k);
            MassRow { k, log_sum: sums.log_sums[k], sum: s.is_finite().then_some(s), mass: sums.mass(k) }
        })
        .collect();
    match format {
        Format::Json => json("mass", MassConfig { input, x: args.x, n: args.n }, rows),
        Format::Csv => csv_rows(&rows),
    }
}

fn family_entry(spec: FamilySpec) -> CliResult<FamilyEntry> {
    let c = spec.build()?;
    let l = spec.limits();
    Ok(FamilyEntry {
        name: spec.name().to_string(),
        params: spec.params(),
        limits: (l.a_limit, l.b_limit),
        provenance: spec.provenance().to_string(),
        document: c.to_document()?,
    })
}

#[derive(Serialize)]
struct FamilyCsvRow {
    name: String,
    params: String,
    a_limit: f64,
    b_limit: f64,
    provenance: String,
}

fn family(args: &FamilyArgs, format: Format) -> CliResult<Rendered> {
    let (entries, config) = match &args.action {
        FamilyAction::List => {
            let entries = FAMILY_NAMES.iter().map(|n| family_entry(FamilySpec::default_for(n)?)).collect::<CliResult<Vec<_>>>()?;
            (entries, serde_json::json!({ "action": "list" }))
        }
        FamilyAction::Info { name, params } => {
            let spec = FamilySpec::from_name_params(name, &params.map())?;
            (vec![family_entry(spec)?], serde_json::json!({ "action": "info", "family": spec }))
        }
    };
    match format {
        Format::Json => json("family", config, entries),
        Format::Csv => {
            let rows: Vec<FamilyCsvRow> = entries
                .into_iter()
                .map(|e| FamilyCsvRow {
                    params: e.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";"),
                    name: e.name,
                    a_limit: e.limits.0,
                    b_limit: e.limits.1,
                    provenance: e.provenance,
                })
                .collect();
            csv_rows(&rows)
        }
    }
}

fn contract_check(args: &ContractArgs, format: Format) -> CliResult<Rendered> {
    check_tol(args.tol)?;
    let (s, input) = load_sfraction(&args.sfrac_file)?;
    let lambda0 = s_to_j(&s)?.lambda0;
    let residual = check_contraction(&s, args.z, args.n)?;
    let result = ContractResult { residual, within_tol: residual <= args.tol, lambda0 };
    match format {
        Format::Json => json("contract-check", ContractConfig { input, n: args.n, z: args.z, tol: args.tol }, result),
        Format::Csv => csv_rows(&[result]),
    }
}

/// Runs one command and renders its document.
pub fn run(cli: &Cli) -> CliResult<Rendered> {
    let format = cli.output.format;
    match &cli.command {
        Command::Classify(a) => classify(a, format),
        Command::Spectrum(a) => spectrum(a, format),
        Command::Cf(a) => cf(a, format),
        Command::Ratio(a) => ratio(a, format),
        Command::Mass(a) => mass(a, format),
        Command::Family(a) => family(a, format),
        Command::ContractCheck(a) => contract_check(a, format),
    }
}

/// Writes the document to `--output` or standard output.
pub fn emit(cli: &Cli, doc: &Rendered) -> CliResult<()> {
    let res = match &cli.output.output {
        Some(path) => fs::write(path, &doc.0),
        None => io::stdout().lock().write_all(doc.0.as_bytes()),
    };
    res.map_err(|e| CliError::Output(format!("cannot write output: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_points_parse() {
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("3+1i").unwrap(), Complex64::new(3.0, 1.0));
        assert_eq!(parse_complex("-0.5").unwrap(), Complex64::new(-0.5, 0.0));
        assert!(parse_complex("two").is_err());
    }

    #[test]
    fn grid_is_row_major_and_inclusive() {
        let pts = grid_points(&[0.0, 1.0, -1.0, 1.0, 3.0]).unwrap();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], Complex64::new(0.0, -1.0));
        assert_eq!(pts[2], Complex64::new(1.0, -1.0));
        assert_eq!(pts[8], Complex64::new(1.0, 1.0));
        assert!(grid_points(&[0.0, 1.0, 0.0, 1.0, 0.5]).is_err());
    }

    #[test]
    fn checkpoints_are_dyadic() {
        assert_eq!(checkpoints(0), vec![0]);
        assert_eq!(checkpoints(10), vec![0, 1, 2, 4, 8, 10]);
        assert_eq!(checkpoints(8), vec![0, 1, 2, 4, 8]);
    }

    #[test]
    fn exit_codes_are_distinct() {
        use jacobi_core::Error;
        let codes = [
            CliError::Core(Error::NumericalFailure(String::new())).exit_code(),
            CliError::Core(Error::UnsupportedRange(String::new())).exit_code(),
            CliError::Core(Error::InvalidInput(String::new())).exit_code(),
            CliError::Output(String::new()).exit_code(),
            EXIT_USAGE,
        ];
        let mut sorted = codes.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), codes.len());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
