// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration. Settings arrive as raw `key = value` strings from an
//! optional config file and from command-line flags (flags win), and are
//! resolved here into a validated [`RunConfig`]. Keys match the long flag
//! names: `kappa`, `hbar`, `v0`, `theta0`, `T`, `T-grid`, `xa`, `xb`,
//! `N-list`, `method`, `oracle`, `samples`, `panels`, `format`, `whitespace`,
//! `out`, `inject`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dampath::comparators::MethodId;
use dampath::{Complex64, DampedParams};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DAMPATH_OUT_DIR";

pub const KEYS: [&str; 17] = [
    "kappa", "hbar", "v0", "theta0", "T", "T-grid", "xa", "xb", "N-list", "method", "oracle",
    "samples", "panels", "format", "whitespace", "out", "inject",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Kernel,
    Converge,
    Evolve,
    Compare,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Kernel => "kernel",
            Command::Converge => "converge",
            Command::Evolve => "evolve",
            Command::Compare => "compare",
            Command::Check => "check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("expected `csv` or `json`, got `{s}`")),
        }
    }
}

/// Fault injected into `check` to prove its assertions can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Injection {
    /// Recursion seeded with `a0` off by one part in 10^9.
    Seed,
    /// Cross coefficient of the quadratic form nudged by one part in 10^9.
    KernelPhase,
    /// Quadrature window cut to 3 envelope widths.
    Window,
    /// Zero crossing taken at `ln 3 / kappa`.
    Crossing,
}

impl FromStr for Injection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "seed" => Ok(Injection::Seed),
            "kernel-phase" => Ok(Injection::KernelPhase),
            "window" => Ok(Injection::Window),
            "crossing" => Ok(Injection::Crossing),
            _ => Err(format!("unknown injection `{s}` (seed, kernel-phase, window, crossing)")),
        }
    }
}

impl fmt::Display for Injection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Injection::Seed => "seed",
            Injection::KernelPhase => "kernel-phase",
            Injection::Window => "window",
            Injection::Crossing => "crossing",
        })
    }
}

/// `start:end:count` inclusive, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn point(v: f64) -> Self {
        Self { start: v, end: v, count: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let h = (self.end - self.start) / (self.count - 1) as f64;
        // pin the endpoint exactly
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.end } else { self.start + h * i as f64 })
            .collect()
    }

    fn to_json(self) -> Value {
        if self.count == 1 {
            json!(self.start)
        } else {
            json!({ "start": self.start, "end": self.end, "count": self.count })
        }
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
        let g = match parts.as_slice() {
            [v] => GridSpec::point(num(v)?),
            [a, b, n] => GridSpec {
                start: num(a)?,
                end: num(b)?,
                count: n.parse().map_err(|_| format!("`{n}` is not a step count"))?,
            },
            _ => return Err(format!("expected `value` or `start:end:count`, got `{s}`")),
        };
        if !(g.start.is_finite() && g.end.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if g.count == 0 {
            return Err("step count must be >= 1".into());
        }
        if g.start > g.end {
            return Err(format!("empty range: start {} > end {}", g.start, g.end));
        }
        if g.count == 1 && g.start != g.end {
            return Err("a single-step range needs start == end".into());
        }
        Ok(g)
    }
}

/// One raw setting and where it came from, for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RawValue {
    pub value: String,
    pub origin: String,
}

/// Unresolved settings, keyed by canonical name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<&'static str, RawValue>,
}

fn canonical(key: &str) -> Option<&'static str> {
    KEYS.iter().copied().find(|k| *k == key)
}

impl Settings {
    pub fn set(&mut self, key: &str, value: impl Into<String>, origin: impl Into<String>) -> CliResult<()> {
        let origin = origin.into();
        let key = canonical(key).ok_or_else(|| CliError::config(format!("{origin}: unknown key `{key}`")))?;
        self.values.insert(key, RawValue { value: value.into(), origin });
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&RawValue> {
        self.values.get(key)
    }

    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse_file_contents(text: &str, name: &str) -> CliResult<Self> {
        let mut s = Settings::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{name}:{}", i + 1);
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("{origin}: expected `key = value`, got `{line}`")))?;
            s.set(k.trim(), v.trim(), origin)?;
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            context: format!("reading config {}", path.display()),
            source,
        })?;
        Self::parse_file_contents(&text, &path.display().to_string())
    }

    /// `self` overridden by `other`.
    pub fn merged(mut self, other: Settings) -> Self {
        self.values.extend(other.values);
        self
    }

    fn parse<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::config(format!("{}: `{key}`: {e}", raw.origin))),
        }
    }

    fn flag(&self, key: &str) -> CliResult<bool> {
        match self.values.get(key) {
            None => Ok(false),
            Some(raw) => match raw.value.as_str() {
                "" | "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                v => Err(CliError::config(format!("{}: `{key}`: expected a boolean, got `{v}`", raw.origin))),
            },
        }
    }

    fn fail(&self, key: &str, msg: impl fmt::Display) -> CliError {
        let origin = self.values.get(key).map_or("default".to_string(), |r| r.origin.clone());
        CliError::config(format!("{origin}: `{key}`: {msg}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    pub theta0: Complex64,
    pub v0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    /// `None` writes to stdout.
    pub path: Option<PathBuf>,
    pub format: Format,
    pub whitespace: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: DampedParams,
    pub packet: PacketSpec,
    pub times: GridSpec,
    pub xa: GridSpec,
    pub xb: GridSpec,
    pub slices: Vec<usize>,
    pub methods: Vec<MethodId>,
    pub oracle: bool,
    pub samples: usize,
    pub panels: Option<usize>,
    pub output: OutputSpec,
    pub inject: Option<Injection>,
}

pub const DEFAULT_SLICES: [usize; 7] = [125, 250, 500, 1000, 2000, 4000, 8000];

fn default_times(command: Command) -> GridSpec {
    match command {
        Command::Kernel | Command::Converge | Command::Check => GridSpec::point(1.0),
        Command::Evolve => GridSpec { start: 0.0, end: 3.0, count: 31 },
        Command::Compare => GridSpec { start: 0.0, end: 40.0, count: 401 },
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

impl RunConfig {
    /// Figure defaults: `hbar = 1`, `theta0 = 1/2`, `kappa = 0.6`, `v0 = 5`.
    pub fn resolve(command: Command, s: &Settings, out_dir: Option<PathBuf>) -> CliResult<Self> {
        let kappa = s.parse::<f64>("kappa")?.unwrap_or(0.6);
        let hbar = s.parse::<f64>("hbar")?.unwrap_or(1.0);
        let params = DampedParams::new(kappa, hbar).map_err(|e| {
            let key = if kappa.is_finite() && kappa >= 0.0 { "hbar" } else { "kappa" };
            s.fail(key, e)
        })?;

        let theta0 = s.parse::<Complex64>("theta0")?.unwrap_or(Complex64::new(0.5, 0.0));
        if !(theta0.re > 0.0) || !theta0.im.is_finite() {
            return Err(s.fail("theta0", format!("Re(theta0) must be > 0, got {theta0}")));
        }
        let v0 = s.parse::<f64>("v0")?.unwrap_or(5.0);
        if !v0.is_finite() {
            return Err(s.fail("v0", "must be finite"));
        }

        let times = match (s.get("T"), s.get("T-grid")) {
            (Some(a), Some(b)) => {
                return Err(CliError::config(format!(
                    "`T` ({}) and `T-grid` ({}) are mutually exclusive",
                    a.origin, b.origin
                )))
            }
            (Some(_), None) => GridSpec::point(s.parse::<f64>("T")?.expect("present")),
            (None, Some(_)) => s.parse::<GridSpec>("T-grid")?.expect("present"),
            (None, None) => default_times(command),
        };
        let needs_positive = matches!(command, Command::Kernel | Command::Converge);
        let key_t = if s.get("T").is_some() { "T" } else { "T-grid" };
        if needs_positive && !(times.start > 0.0) {
            return Err(s.fail(key_t, "durations must be > 0"));
        }
        if !(times.start >= 0.0) || !times.end.is_finite() {
            return Err(s.fail(key_t, "durations must be finite and >= 0"));
        }

        let xa = s.parse::<GridSpec>("xa")?.unwrap_or(GridSpec::point(0.0));
        let xb = s.parse::<GridSpec>("xb")?.unwrap_or(GridSpec::point(1.0));

        let slices = match s.get("N-list") {
            None => DEFAULT_SLICES.to_vec(),
            Some(raw) => parse_list::<usize>(&raw.value).map_err(|e| s.fail("N-list", e))?,
        };
        if slices.is_empty() || slices.iter().any(|&n| n < 2) {
            return Err(s.fail("N-list", "needs one or more slice counts, each >= 2"));
        }
        if slices.windows(2).any(|w| w[1] <= w[0]) {
            return Err(s.fail("N-list", "slice counts must be strictly ascending"));
        }

        let methods = match s.get("method") {
            None => MethodId::ALL.to_vec(),
            Some(raw) => parse_list::<MethodId>(&raw.value).map_err(|e| s.fail("method", e))?,
        };
        if methods.is_empty() {
            return Err(s.fail("method", "needs at least one method"));
        }

        let samples = s.parse::<usize>("samples")?.unwrap_or(2001);
        if samples < 5 {
            return Err(s.fail("samples", "needs at least 5 oracle samples"));
        }
        let panels = s.parse::<usize>("panels")?;
        if panels == Some(0) {
            return Err(s.fail("panels", "must be >= 1"));
        }

        let format = s.parse::<Format>("format")?.unwrap_or(Format::Csv);
        let whitespace = s.flag("whitespace")?;
        if whitespace && format != Format::Csv {
            return Err(s.fail("whitespace", "the whitespace variant applies to csv output only"));
        }
        let path = match s.get("out") {
            Some(raw) => Some(PathBuf::from(&raw.value)),
            None => out_dir.map(|d| {
                let ext = if whitespace { "dat" } else { format.extension() };
                d.join(format!("{}.{ext}", command.name()))
            }),
        };

        Ok(RunConfig {
            command,
            params,
            packet: PacketSpec { theta0, v0 },
            times,
            xa,
            xb,
            slices,
            methods,
            oracle: s.flag("oracle")?,
            samples,
            panels,
            output: OutputSpec { path, format, whitespace },
            inject: s.parse::<Injection>("inject")?,
        })
    }

    /// Every resolved setting that can change the numbers. The output path
    /// is left out so reruns into different files compare byte for byte.
    pub fn echo(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command.name()));
        m.insert("kappa".into(), json!(self.params.kappa));
        m.insert("hbar".into(), json!(self.params.hbar));
        m.insert("v0".into(), json!(self.packet.v0));
        m.insert("theta0".into(), json!([self.packet.theta0.re, self.packet.theta0.im]));
        m.insert("T".into(), self.times.to_json());
        m.insert("xa".into(), self.xa.to_json());
        m.insert("xb".into(), self.xb.to_json());
        m.insert("N-list".into(), json!(self.slices));
        m.insert(
            "method".into(),
            json!(self.methods.iter().map(|m| m.label()).collect::<Vec<_>>()),
        );
        m.insert("oracle".into(), json!(self.oracle));
        m.insert("samples".into(), json!(self.samples));
        m.insert("panels".into(), self.panels.map_or(Value::Null, |p| json!(p)));
        m.insert("format".into(), json!(self.output.format.extension()));
        m.insert("whitespace".into(), json!(self.output.whitespace));
        m.insert("inject".into(), self.inject.map_or(Value::Null, |i| json!(i.to_string())));
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> Settings {
        let mut s = Settings::default();
        for (k, v) in pairs {
            s.set(k, *v, format!("--{k}")).unwrap();
        }
        s
    }

    #[test]
    fn defaults_match_figure_regime() {
        let c = RunConfig::resolve(Command::Compare, &Settings::default(), None).unwrap();
        assert_eq!((c.params.kappa, c.params.hbar, c.packet.v0), (0.6, 1.0, 5.0));
        assert_eq!(c.packet.theta0, Complex64::new(0.5, 0.0));
        assert_eq!(c.times.values().last(), Some(&40.0));
        assert_eq!(c.output.path, None);
        assert_eq!(c.methods, MethodId::ALL.to_vec());
    }

    #[test]
    fn grid_parsing() {
        let g: GridSpec = "0:1:5".parse().unwrap();
        assert_eq!(g.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!("2.5".parse::<GridSpec>().unwrap().values(), vec![2.5]);
        assert!("1:0:3".parse::<GridSpec>().is_err());
        assert!("0:1:0".parse::<GridSpec>().is_err());
        assert!("0:1:1".parse::<GridSpec>().is_err());
        assert!("a:b".parse::<GridSpec>().is_err());
        let fine: GridSpec = "0:40:401".parse().unwrap();
        assert_eq!(*fine.values().last().unwrap(), 40.0);
    }

    #[test]
    fn flags_override_file() {
        let file = Settings::parse_file_contents("# figure run\nkappa = 0.3\nv0=2\n\n", "run.cfg").unwrap();
        let merged = file.merged(settings(&[("kappa", "0.9")]));
        let c = RunConfig::resolve(Command::Evolve, &merged, None).unwrap();
        assert_eq!(c.params.kappa, 0.9);
        assert_eq!(c.packet.v0, 2.0);
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let err = Settings::parse_file_contents("kappa = 0.6\nbogus = 1\n", "run.cfg").unwrap_err();
        assert!(err.to_string().contains("run.cfg:2"), "{err}");
        let file = Settings::parse_file_contents("v0 = fast\n", "run.cfg").unwrap();
        let err = RunConfig::resolve(Command::Evolve, &file, None).unwrap_err();
        assert!(err.to_string().contains("run.cfg:1") && err.to_string().contains("v0"), "{err}");
        let err = RunConfig::resolve(Command::Kernel, &settings(&[("kappa", "-1")]), None).unwrap_err();
        assert!(err.to_string().contains("--kappa"), "{err}");
        assert_eq!(err.exit_code(), crate::error::exit::CONFIG);
    }

    #[test]
    fn rejects_inconsistent_settings() {
        let bad = [
            vec![("T", "1"), ("T-grid", "0:1:3")],
            vec![("N-list", "100,50")],
            vec![("N-list", "1,2")],
            vec![("theta0", "-0.5")],
            vec![("format", "xml")],
            vec![("format", "json"), ("whitespace", "true")],
            vec![("method", "lg,foo")],
        ];
        for pairs in &bad {
            assert!(RunConfig::resolve(Command::Evolve, &settings(pairs), None).is_err(), "{pairs:?}");
        }
        assert!(RunConfig::resolve(Command::Kernel, &settings(&[("T", "0")]), None).is_err());
        assert!(RunConfig::resolve(Command::Evolve, &settings(&[("T", "0")]), None).is_ok());
    }

    #[test]
    fn complex_width_and_out_dir() {
        let s = settings(&[("theta0", "0.5+0.25i"), ("format", "json")]);
        let c = RunConfig::resolve(Command::Evolve, &s, Some(PathBuf::from("/tmp/x"))).unwrap();
        assert_eq!(c.packet.theta0, Complex64::new(0.5, 0.25));
        assert_eq!(c.output.path, Some(PathBuf::from("/tmp/x/evolve.json")));
    }

    #[test]
    fn echo_omits_output_path() {
        let a = RunConfig::resolve(Command::Compare, &settings(&[("out", "a.csv")]), None).unwrap();
        let b = RunConfig::resolve(Command::Compare, &settings(&[("out", "b.csv")]), None).unwrap();
        assert_eq!(a.echo(), b.echo());
    }
}
