//! Command-line front end: `zeta`, `point`, `table` and `figure`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::gas_finite_t::{
    self, convolve_from_t0, ConvolutionSpec, GasPointT, OscSeriesSpec, GAMMA_SPHERE,
};
use crate::gas_zero_t::{self, GasPointT0, Method, ThermoResult};
use crate::hfamily::zeta_frac;
use crate::hurwitz::{self, ZetaEngineConfig, ZetaStrategy};

pub const CONFIG_ENV: &str = "MAGNETOGAS_CONFIG";
pub const CONFIG_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(s) => write!(f, "invalid input: {s}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => EXIT_IO,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Core(e) => match e {
                Error::InvalidInput(_) => EXIT_INPUT,
                Error::Pole | Error::Domain(_) | Error::ThresholdDivergence { .. } | Error::NonFinite { .. } => {
                    EXIT_DOMAIN
                }
                Error::ToleranceFailure { .. } | Error::Truncation { .. } | Error::Capacity { .. } => EXIT_TOLERANCE,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Quadrature,
    SmallB,
    LargeFilling,
    Brute,
    Sommerfeld,
    Series,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Quadrature => "quadrature",
            MethodArg::SmallB => "small-b",
            MethodArg::LargeFilling => "large-filling",
            MethodArg::Brute => "brute",
            MethodArg::Sommerfeld => "sommerfeld",
            MethodArg::Series => "series",
        }
    }

    fn parse(s: &str) -> CliResult<Self> {
        <MethodArg as ValueEnum>::from_str(s.trim(), true).map_err(|_| CliError::Input(format!("unknown method '{s}'")))
    }

    fn zero_t(self) -> Option<Method> {
        match self {
            MethodArg::Quadrature => Some(Method::Quadrature),
            MethodArg::SmallB => Some(Method::SmallBExpansion),
            MethodArg::LargeFilling => Some(Method::LargeFillingExpansion),
            MethodArg::Brute => Some(Method::BruteForce),
            MethodArg::Sommerfeld | MethodArg::Series => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Hermite,
    Fourier,
    Bernoulli,
    Direct,
}

#[derive(Debug, Parser)]
#[command(name = "magnetogas", version, about = "Magnetized electron gas thermodynamics and Hurwitz zeta values")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// INI configuration file; flags override it.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hurwitz zeta ζ(z, q), or its q-derivative with --order.
    Zeta(ZetaArgs),
    /// One equation-of-state row.
    Point(GasArgs),
    /// Equation-of-state table over a grid.
    Table(GasArgs),
    /// Plot-ready data behind figure N (1-6).
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ZetaArgs {
    #[arg(short = 'z', long = "z")]
    pub z: f64,
    #[arg(short = 'q', long = "q")]
    pub q: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub strategy: StrategyArg,
    /// Order of the q-derivative.
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Args, Default)]
pub struct GasArgs {
    /// Field b = B/B₀; a list `a,b,c`, a span `lo:hi:n` or `log:lo:hi:n`.
    #[arg(long)]
    pub b: Option<String>,
    /// Fermi energy ε_F (T = 0), same list syntax.
    #[arg(long = "fermi-energy", conflicts_with = "mu")]
    pub fermi_energy: Option<String>,
    /// Chemical potential μ (T > 0), same list syntax.
    #[arg(long)]
    pub mu: Option<String>,
    /// Temperature T in electron-mass units, same list syntax; 0 by default.
    #[arg(long)]
    pub temperature: Option<String>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Truncation order of the small-field effective action column.
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    pub n: u32,
    /// Samples along the abscissa.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyVariable {
    Mu,
    FermiEnergy,
}

impl EnergyVariable {
    fn key(self) -> &'static str {
        match self {
            EnergyVariable::Mu => "mu",
            EnergyVariable::FermiEnergy => "fermi_energy",
        }
    }

    fn label(self) -> &'static str {
        match self {
            EnergyVariable::Mu => "mu",
            EnergyVariable::FermiEnergy => "eps_f",
        }
    }
}

/// Effective run configuration. Defaults, then the config file, then flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub tail_tol: f64,
    pub order: usize,
    pub method: MethodArg,
    pub energies: String,
    /// Whether `energies` holds chemical potentials or Fermi energies. The two
    /// coincide at T = 0; the choice is echoed in output metadata.
    pub energy_variable: EnergyVariable,
    pub b: String,
    pub temperature: String,
    pub points: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            abs_tol: ZetaEngineConfig::DEFAULT.quadrature_abs_tol,
            rel_tol: ZetaEngineConfig::DEFAULT.quadrature_rel_tol,
            tail_tol: OscSeriesSpec::default().tail_tol,
            order: 8,
            method: MethodArg::Quadrature,
            energies: "1.3".into(),
            energy_variable: EnergyVariable::Mu,
            b: "0.1".into(),
            temperature: "0".into(),
            points: 400,
            format: Format::Csv,
            out: None,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> CliResult<f64> {
    v.trim().parse::<f64>().map_err(|_| CliError::Input(format!("{key}: '{v}' is not a number")))
}

impl RunConfig {
    /// Reads INI text. Lines of a previous CSV output's `# ` metadata block
    /// are accepted as well, so a table can be regenerated from its header.
    pub fn apply_ini(&mut self, text: &str) -> CliResult<()> {
        let stripped: String = if text.trim_start().starts_with('#') {
            text.lines()
                .take_while(|l| l.starts_with('#'))
                .map(|l| l.trim_start_matches('#').trim_start())
                .collect::<Vec<_>>()
                .join("\n")
        } else {
            text.to_string()
        };
        let ini = ini::Ini::load_from_str(&stripped).map_err(|e| CliError::Input(format!("config: {e}")))?;
        for (section, props) in &ini {
            for (key, value) in props.iter() {
                let full = match section {
                    Some(s) => format!("{s}.{key}"),
                    None => key.to_string(),
                };
                self.set(&full, value)?;
            }
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "version" | "config.version" => {
                let v = parse_f64(key, value)? as u32;
                if v != CONFIG_VERSION {
                    return Err(CliError::Input(format!("unsupported config version {v}")));
                }
            }
            "tolerances.abs_tol" => self.abs_tol = parse_f64(key, value)?,
            "tolerances.rel_tol" => self.rel_tol = parse_f64(key, value)?,
            "tolerances.tail_tol" => self.tail_tol = parse_f64(key, value)?,
            "expansion.order" => {
                self.order = value.trim().parse().map_err(|_| CliError::Input(format!("{key}: bad order")))?
            }
            "run.method" => self.method = MethodArg::parse(value)?,
            "grid.energies" => self.energies = value.trim().into(),
            "grid.mu" => {
                self.energies = value.trim().into();
                self.energy_variable = EnergyVariable::Mu;
            }
            "grid.fermi_energy" => {
                self.energies = value.trim().into();
                self.energy_variable = EnergyVariable::FermiEnergy;
            }
            "grid.b" => self.b = value.trim().into(),
            "grid.temperature" => self.temperature = value.trim().into(),
            "figure.points" => {
                self.points = value.trim().parse().map_err(|_| CliError::Input(format!("{key}: bad count")))?
            }
            "output.format" => {
                self.format = <Format as ValueEnum>::from_str(value.trim(), true)
                    .map_err(|_| CliError::Input(format!("unknown format '{value}'")))?
            }
            "output.out" => self.out = Some(PathBuf::from(value.trim())),
            _ => return Err(CliError::Input(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let mut c = Self::default();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        c.apply_ini(&text)?;
        Ok(c)
    }

    /// INI rendering; `apply_ini` of this text reproduces the configuration.
    pub fn to_ini(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[config]\nversion = {CONFIG_VERSION}");
        let _ = writeln!(s, "[tolerances]\nabs_tol = {:e}\nrel_tol = {:e}\ntail_tol = {:e}", self.abs_tol, self.rel_tol, self.tail_tol);
        let _ = writeln!(s, "[expansion]\norder = {}", self.order);
        let _ = writeln!(s, "[run]\nmethod = {}", self.method.name());
        let _ = writeln!(
            s,
            "[grid]\n{} = {}\nb = {}\ntemperature = {}",
            self.energy_variable.key(),
            self.energies,
            self.b,
            self.temperature
        );
        let _ = writeln!(s, "[figure]\npoints = {}", self.points);
        s
    }

    fn zeta_config(&self) -> ZetaEngineConfig {
        ZetaEngineConfig { quadrature_abs_tol: self.abs_tol, quadrature_rel_tol: self.rel_tol, ..ZetaEngineConfig::DEFAULT }
    }

    fn series(&self) -> OscSeriesSpec {
        OscSeriesSpec { tail_tol: self.tail_tol, ..OscSeriesSpec::default() }
    }
}

/// Expands `a,b,c`, `lo:hi:n` (linear) or `log:lo:hi:n`.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let s = spec.trim();
    let bad = || CliError::Input(format!("bad grid '{spec}'"));
    let span = |lo: &str, hi: &str, n: &str, log: bool| -> CliResult<Vec<f64>> {
        let (lo, hi) = (parse_f64("grid", lo)?, parse_f64("grid", hi)?);
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n == 0 || (log && (lo <= 0.0 || hi <= 0.0)) {
            return Err(bad());
        }
        if n == 1 {
            return Ok(vec![lo]);
        }
        Ok((0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                if log {
                    (lo.ln() + f * (hi.ln() - lo.ln())).exp()
                } else {
                    lo + f * (hi - lo)
                }
            })
            .collect())
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [one] => one.split(',').map(|v| parse_f64("grid", v)).collect(),
        [lo, hi, n] => span(lo, hi, n, false),
        ["log", lo, hi, n] => span(lo, hi, n, true),
        _ => Err(bad()),
    }
}

/// A rectangular output: metadata, named columns and rows of JSON values.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub config_ini: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.14e}")
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Number(n) => fmt_num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Null => "nan".into(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# ; {k}: {v}");
        }
        if let Some(ini) = &self.config_ini {
            for line in ini.lines() {
                let _ = writeln!(s, "# {line}");
            }
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.iter().map(csv_field).collect::<Vec<_>>().join(","));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.metadata {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        if let Some(ini) = &self.config_ini {
            meta.insert("config".into(), Value::String(ini.clone()));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect()))
            .collect();
        serde_json::to_string_pretty(&json!({ "metadata": meta, "rows": rows })).unwrap_or_default() + "\n"
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }
}

fn base_metadata(kind: &str) -> Vec<(String, String)> {
    vec![
        ("generator".into(), format!("magnetogas {}", env!("CARGO_PKG_VERSION"))),
        ("kind".into(), kind.into()),
        (
            "units".into(),
            "energies and T in m; b = B/B0 with B0 = 2.2e13 G; n in m^3/2pi^2; omega, P, u in m^4/4pi^2; M in e m^2/2pi^2"
                .into(),
        ),
    ]
}

pub const EOS_COLUMNS: [&str; 17] = [
    "mu", "temperature", "b", "n", "omega", "pressure", "u", "m", "m_mon", "m_osc", "regime", "at_threshold",
    "effective_action", "err_n", "err_omega", "err_u", "err_m",
];

#[derive(Debug, Clone, PartialEq)]
pub struct EosRow {
    pub mu: f64,
    pub temperature: f64,
    pub b: f64,
    pub n: f64,
    pub omega: f64,
    pub u: f64,
    pub m: f64,
    pub m_mon: f64,
    pub m_osc: f64,
    pub regime: String,
    pub at_threshold: bool,
    pub effective_action: f64,
    pub err: [f64; 4],
}

impl EosRow {
    fn values(&self) -> Vec<Value> {
        vec![
            num(self.mu),
            num(self.temperature),
            num(self.b),
            num(self.n),
            num(self.omega),
            num(-self.omega),
            num(self.u),
            num(self.m),
            num(self.m_mon),
            num(self.m_osc),
            Value::String(self.regime.clone()),
            Value::Bool(self.at_threshold),
            num(self.effective_action),
            num(self.err[0]),
            num(self.err[1]),
            num(self.err[2]),
            num(self.err[3]),
        ]
    }
}

fn regime_name(r: gas_zero_t::Regime) -> String {
    serde_json::to_value(r).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn nan_result(method: Method) -> ThermoResult {
    ThermoResult {
        value: f64::NAN,
        monotonic: f64::NAN,
        oscillatory: f64::NAN,
        abs_error_estimate: f64::NAN,
        method,
        at_threshold: false,
    }
}

// A quantity the method has no formula for is reported as NaN rather than
// silently switching method.
fn or_nan(r: crate::Result<ThermoResult>, method: Method) -> crate::Result<ThermoResult> {
    match r {
        Err(Error::InvalidInput(_)) => Ok(nan_result(method)),
        other => other,
    }
}

pub fn eos_row(mu: f64, t: f64, b: f64, cfg: &RunConfig) -> CliResult<EosRow> {
    if !(t >= 0.0) {
        return Err(CliError::Input(format!("temperature must be non-negative, got {t}")));
    }
    let pt0 = GasPointT0::new(mu, b)?;
    let regime = gas_zero_t::regime_classify(&pt0, t, gas_zero_t::DEFAULT_RATIO_THRESHOLD)?;
    let effective_action = if pt0.p_f2() < 1.0 {
        gas_zero_t::effective_action_series_check(&pt0, cfg.order)?
    } else {
        f64::NAN
    };
    let (n, w, u, m) = if t == 0.0 {
        let method = cfg
            .method
            .zero_t()
            .ok_or_else(|| CliError::Input(format!("method {} needs T > 0", cfg.method.name())))?;
        (
            gas_zero_t::number_density(&pt0, method)?,
            gas_zero_t::grand_potential(&pt0, method)?,
            or_nan(gas_zero_t::energy_density(&pt0, method), method)?,
            or_nan(gas_zero_t::magnetization(&pt0, method), method)?,
        )
    } else {
        finite_t_quantities(&GasPointT::new(mu, t, b)?, cfg)?
    };
    Ok(EosRow {
        mu,
        temperature: t,
        b,
        n: n.value,
        omega: w.value,
        u: u.value,
        m: m.value,
        m_mon: m.monotonic,
        m_osc: m.oscillatory,
        regime: regime_name(regime.regime),
        at_threshold: t == 0.0 && pt0.at_threshold(),
        effective_action,
        err: [n.abs_error_estimate, w.abs_error_estimate, u.abs_error_estimate, m.abs_error_estimate],
    })
}

fn convolved<F>(pt: &GasPointT, f: F) -> CliResult<ThermoResult>
where
    F: Fn(&GasPointT0) -> crate::Result<ThermoResult> + Sync,
{
    let spec = ConvolutionSpec::for_field(pt.b());
    let part = |sel: fn(&ThermoResult) -> f64| {
        convolve_from_t0(
            |e| GasPointT0::new(e, pt.b()).and_then(|p| f(&p)).map(|r| sel(&r)).unwrap_or(f64::NAN),
            pt,
            &spec,
        )
    };
    let mon = part(|r| r.monotonic)?;
    let osc = part(|r| r.oscillatory)?;
    Ok(ThermoResult::new(mon.value, osc.value, mon.abs_error + osc.abs_error, Method::Quadrature, false))
}

fn finite_t_quantities(pt: &GasPointT, cfg: &RunConfig) -> CliResult<(ThermoResult, ThermoResult, ThermoResult, ThermoResult)> {
    match cfg.method {
        MethodArg::Quadrature | MethodArg::Brute => {
            let method = cfg.method.zero_t().expect("zero-temperature method");
            let n = convolved(pt, |p| gas_zero_t::number_density(p, method))?;
            let w = convolved(pt, |p| gas_zero_t::grand_potential(p, method))?;
            let u = convolved(pt, |p| gas_zero_t::energy_density(p, method))?;
            let m = convolved(pt, |p| gas_zero_t::magnetization(p, method))?;
            Ok((n, w, u, m))
        }
        MethodArg::Sommerfeld | MethodArg::Series => {
            let series = cfg.series();
            let keep_osc = cfg.method == MethodArg::Series;
            let drop = |r: ThermoResult| if keep_osc { r } else { ThermoResult::new(r.monotonic, 0.0, r.abs_error_estimate, Method::Sommerfeld, false) };
            let w = drop(gas_finite_t::grand_potential_finite_t(pt, &series)?);
            let n_mon = gas_finite_t::sommerfeld_expansion(
                |e| {
                    GasPointT0::new(e, pt.b())
                        .and_then(|p| gas_zero_t::number_density(&p, Method::Quadrature))
                        .map(|r| r.monotonic)
                        .unwrap_or(f64::NAN)
                },
                pt,
                1e-2 * pt.mu(),
            );
            let n_osc = if keep_osc { gas_finite_t::number_density_osc_finite_t(pt, &series)? } else { 0.0 };
            let n = ThermoResult::new(n_mon, n_osc, w.abs_error_estimate, w.method, false);
            let h = 1e-3 * pt.t();
            let w_at = |t: f64| -> CliResult<f64> {
                let p = GasPointT::new(pt.mu(), t, pt.b())?;
                Ok(drop(gas_finite_t::grand_potential_finite_t(&p, &series)?).value)
            };
            let s = -(w_at(pt.t() + h)? - w_at(pt.t() - h)?) / (2.0 * h);
            let u_val = w.value + 2.0 * pt.mu() * n.value + pt.t() * s;
            let u = ThermoResult::new(u_val, 0.0, w.abs_error_estimate * 4.0, w.method, false);
            let m = drop(gas_finite_t::magnetization_finite_t(pt, &series)?);
            Ok((n, w, u, m))
        }
        MethodArg::SmallB | MethodArg::LargeFilling => Err(CliError::Input(format!(
            "method {} is zero-temperature only; use quadrature, brute, sommerfeld or series",
            cfg.method.name()
        ))),
    }
}

pub fn eos_table(cfg: &RunConfig) -> CliResult<Table> {
    let es = parse_grid(&cfg.energies)?;
    let bs = parse_grid(&cfg.b)?;
    let ts = parse_grid(&cfg.temperature)?;
    let mut grid = Vec::with_capacity(es.len() * bs.len() * ts.len());
    for &e in &es {
        for &b in &bs {
            for &t in &ts {
                grid.push((e, t, b));
            }
        }
    }
    let rows: Vec<CliResult<EosRow>> = grid.par_iter().map(|&(e, t, b)| eos_row(e, t, b, cfg)).collect();
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        out.push(r?.values());
    }
    let mut metadata = base_metadata("eos_table");
    metadata.push(("method".into(), cfg.method.name().into()));
    metadata.push(("energy_variable".into(), format!("{} (equal to the Fermi energy at T = 0)", cfg.energy_variable.label())));
    metadata.push(("pressure".into(), "P = -omega".into()));
    Ok(Table {
        metadata,
        config_ini: Some(cfg.to_ini()),
        columns: EOS_COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows: out,
    })
}

pub fn zeta_table(args: &ZetaArgs, cfg: &RunConfig) -> CliResult<Table> {
    let zc = cfg.zeta_config();
    let (value, err, strategy) = if let Some(o) = args.order.filter(|&o| o > 0) {
        (hurwitz::hurwitz_q_derivative(args.z, args.q, o, &zc)?, f64::NAN, "q_derivative".to_string())
    } else {
        let v = match args.strategy {
            StrategyArg::Auto => hurwitz::hurwitz_zeta(args.z, args.q, &zc)?,
            StrategyArg::Hermite => hurwitz::hurwitz_zeta_hermite(args.z, args.q, &zc)?,
            StrategyArg::Fourier => hurwitz::hurwitz_zeta_fourier(args.z, args.q, cfg.abs_tol)?,
            StrategyArg::Direct => hurwitz::hurwitz_zeta_direct(args.z, args.q, cfg.abs_tol)?,
            StrategyArg::Bernoulli => {
                let m = -args.z;
                if m < 0.0 || m.fract() != 0.0 {
                    return Err(CliError::Core(Error::Domain(format!("Bernoulli branch needs z = -m, got {}", args.z))));
                }
                hurwitz::hurwitz_zeta(args.z, args.q, &zc)?
            }
        };
        let name = serde_json::to_value(v.strategy).ok().and_then(|s| s.as_str().map(String::from)).unwrap_or_default();
        if args.strategy == StrategyArg::Bernoulli && v.strategy != ZetaStrategy::BernoulliPolynomial {
            return Err(CliError::Core(Error::Domain("Bernoulli branch not applicable".into())));
        }
        (v.value, v.abs_error_estimate, name)
    };
    let mut metadata = base_metadata("zeta");
    metadata.push(("order".into(), args.order.unwrap_or(0).to_string()));
    Ok(Table {
        metadata,
        config_ini: None,
        columns: vec!["z".into(), "q".into(), "value".into(), "abs_error_estimate".into(), "strategy".into()],
        rows: vec![vec![num(args.z), num(args.q), num(value), num(err), Value::String(strategy)]],
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64).collect()
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect()
}

fn figure_table(
    n: u32,
    columns: &[&str],
    xs: &[f64],
    spans: &str,
    f: impl Fn(f64) -> crate::Result<Vec<f64>> + Sync,
) -> CliResult<Table> {
    let rows: Vec<crate::Result<Vec<f64>>> = xs.par_iter().map(|&x| f(x)).collect();
    let mut out = Vec::with_capacity(xs.len());
    for (x, r) in xs.iter().zip(rows) {
        let mut row = vec![num(*x)];
        row.extend(r?.into_iter().map(num));
        out.push(row);
    }
    let mut metadata = base_metadata("figure");
    metadata.push(("figure".into(), n.to_string()));
    metadata.push(("spans".into(), spans.into()));
    Ok(Table { metadata, config_ini: None, columns: columns.iter().map(|s| s.to_string()).collect(), rows: out })
}

/// Upper envelope of the magnetization at finite T: monotonic part plus the
/// oscillation envelope.
pub fn magnetization_upper_envelope(mu: f64, t: f64, b: f64, spec: &OscSeriesSpec) -> crate::Result<f64> {
    let pt = GasPointT::new(mu, t, b)?;
    Ok(gas_finite_t::magnetization_mon_finite_t(&pt) + gas_finite_t::oscillation_envelope_t(&pt, spec)?)
}

pub fn figure(n: u32, points: Option<usize>, cfg: &RunConfig) -> CliResult<Table> {
    let pts = points.unwrap_or(cfg.points).max(2);
    let series = cfg.series();
    let n0 = |e: f64, b: f64| -> crate::Result<f64> { Ok(gas_zero_t::cumulative_states(&GasPointT0::new(e, b)?)) };
    match n {
        1 => figure_table(
            1,
            &["eps_f", "n_b0.1", "n_b0.5"],
            &linspace(1.0 + 1e-6, 2.0, pts),
            "eps_f in (1, 2]; n in m^3/2pi^2",
            |e| Ok(vec![n0(e, 0.1)?, n0(e, 0.5)?]),
        ),
        2 => figure_table(
            2,
            &["b", "n_eps1.3", "n_eps1.5"],
            &linspace(0.01, 1.0, pts),
            "b in [0.01, 1]; n in m^3/2pi^2",
            |b| Ok(vec![n0(1.3, b)?, n0(1.5, b)?]),
        ),
        3 => figure_table(
            3,
            &["b", "m_eps4", "lower_eps4", "upper_eps4", "upper_eps8", "upper_eps16"],
            &linspace(0.05, 2.0, pts),
            "b in [0.05, 2]; M in e m^2/2pi^2; envelopes from the leading oscillatory term",
            |b| {
                let m = gas_zero_t::magnetization(&GasPointT0::new(4.0, b)?, Method::Quadrature)?.value;
                let e4 = gas_zero_t::magnetization_envelope_t0(4.0, b)?;
                let e8 = gas_zero_t::magnetization_envelope_t0(8.0, b)?;
                let e16 = gas_zero_t::magnetization_envelope_t0(16.0, b)?;
                Ok(vec![m, e4.lower, e4.upper, e8.upper, e16.upper])
            },
        ),
        4 => figure_table(
            4,
            &["temperature", "upper_b0.1", "upper_b1", "upper_b10"],
            &logspace(1e-7, 1e-1, pts),
            "mu = 100; T in [1e-7, 1e-1] log-spaced; M in e m^2/2pi^2",
            |t| {
                Ok(vec![
                    magnetization_upper_envelope(100.0, t, 0.1, &series)?,
                    magnetization_upper_envelope(100.0, t, 1.0, &series)?,
                    magnetization_upper_envelope(100.0, t, 10.0, &series)?,
                ])
            },
        ),
        5 => {
            let e2 = 4.0 * std::f64::consts::PI * gas_finite_t::FINE_STRUCTURE;
            figure_table(
                5,
                &["b", "upper_t1e-5", "upper_t1e-7", "sphere_line"],
                &logspace(0.01, 10.0, pts),
                "mu = 100; b in [0.01, 10] log-spaced; M in e m^2/2pi^2; sphere_line = (3/8pi) B with e^2 = 4 pi alpha",
                |b| {
                    Ok(vec![
                        magnetization_upper_envelope(100.0, 1e-5, b, &series)?,
                        magnetization_upper_envelope(100.0, 1e-7, b, &series)?,
                        gas_finite_t::self_magnetization_line(GAMMA_SPHERE, b, e2),
                    ])
                },
            )
        }
        6 => figure_table(
            6,
            &["q", "zeta_m0.5", "zeta_m1.5", "zeta_m2.5"],
            &linspace(0.0, 4.0, pts),
            "q in [0, 4]; zeta(z, {q}) with {q} = 0 read as the limit from below",
            |q| {
                let v = |z: f64| if q == 0.0 { hurwitz::zeta(z, 1.0) } else { zeta_frac(z, q) };
                Ok(vec![v(-0.5)?, v(-1.5)?, v(-2.5)?])
            },
        ),
        _ => Err(CliError::Input(format!("figure number must be 1..6, got {n}"))),
    }
}

fn effective_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    Ok(cfg)
}

fn apply_gas_args(cfg: &mut RunConfig, a: &GasArgs) {
    if let Some(b) = &a.b {
        cfg.b = b.clone();
    }
    if let Some(t) = &a.temperature {
        cfg.temperature = t.clone();
    }
    if let Some(m) = a.method {
        cfg.method = m;
    }
    if let Some(o) = a.order {
        cfg.order = o;
    }
    if let Some(e) = &a.fermi_energy {
        cfg.energies = e.clone();
        cfg.energy_variable = EnergyVariable::FermiEnergy;
    } else if let Some(m) = &a.mu {
        cfg.energies = m.clone();
        cfg.energy_variable = EnergyVariable::Mu;
    }
}

/// Runs a parsed command and returns the rendered output.
pub fn execute(cli: &Cli) -> CliResult<(String, Option<PathBuf>)> {
    let mut cfg = effective_config(cli)?;
    let table = match &cli.command {
        Command::Zeta(z) => zeta_table(z, &cfg)?,
        Command::Point(a) => {
            apply_gas_args(&mut cfg, a);
            let t = eos_table(&cfg)?;
            if t.rows.len() != 1 {
                return Err(CliError::Input("point takes single values; use table for grids".into()));
            }
            t
        }
        Command::Table(a) => {
            apply_gas_args(&mut cfg, a);
            eos_table(&cfg)?
        }
        Command::Figure(f) => figure(f.n, f.points, &cfg)?,
    };
    Ok((table.render(cfg.format), cfg.out.clone()))
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok((text, None)) => {
            print!("{text}");
            EXIT_OK
        }
        Ok((text, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                EXIT_IO
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
