//! Line-oriented run configuration.
//!
//! ```text
//! # quadratic soliton on a 256² grid
//! equation = quadratic
//! branch = plus
//!
//! [grid]
//! nx = 256
//! ny = 256
//! x_min = -4pi
//! x_max = 4pi
//! y_min = -4pi
//! y_max = 4pi
//!
//! [run]
//! dt = 1e-4
//! t_end = 2
//! initial = soliton_quad
//! ```
//!
//! Top-level keys: `equation`, `branch`. `[grid]`: `nx`, `ny`, `x_min`,
//! `x_max`, `y_min`, `y_max`. `[run]`: `dt`, `t_end`, `initial`, and the
//! optional `snapshot_times` (default `0, t_end`), `output_dir` (default
//! `snapshots`), `format` (`f64le` or `csv`, default `f64le`), `eps_reg`,
//! `zero_mode` (`project` or `regularize`), `dealias` (`off` or
//! `two_thirds`), `diagnostics_stride` (default 100).
//!
//! Instead of `branch`, a `[material]` block may give the constants from
//! which the branch is derived: for the quadratic equation `lambda`, `mu`,
//! `rho0`, `alpha1`, `alpha2`, `gamma0` (default `mu`), `gamma1`, `gamma2`;
//! for the cubic equation `mu`, `rho0`, `landau_a`, `landau_d`. Either
//! `nu0` or all of `nu`, `length`, `epsilon` set the dispersion.
//!
//! Numbers accept a `pi` suffix (`-4pi`, `0.5pi`, `pi`).

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::analytic::{initial_condition, InitialCondition};
use crate::io::snapshot::SnapshotFormat;
use crate::material::{
    Dispersion, EquationKind, EquationSpec, MaterialCompressible, MaterialIncompressible, SignBranch, TaylorConstants,
};
use crate::spectral::{
    make_grid, sha256_hex, Dealias, Domain, Field2D, SolverConfig, SpectralGrid, ZeroModePolicy, DEFAULT_EPS_REG,
};

/// Largest accepted sample count per direction.
pub const MAX_POINTS: usize = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line number, or 0 for errors about the file as a whole.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone, PartialEq)]
pub enum SignSource {
    Branch(SignBranch),
    Compressible(MaterialCompressible),
    Incompressible(MaterialIncompressible),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub equation: EquationKind,
    pub sign_source: SignSource,
    pub grid: SpectralGrid,
    pub dt: f64,
    pub t_end: f64,
    pub initial: InitialCondition,
    pub snapshot_times: Vec<f64>,
    pub output_dir: PathBuf,
    pub format: SnapshotFormat,
    pub eps_reg: f64,
    pub zero_mode: ZeroModePolicy,
    pub dealias: Dealias,
    pub diagnostics_stride: usize,
}

impl SimulationConfig {
    /// The equation actually integrated: canonical coefficients with the
    /// configured or derived branch.
    pub fn spec(&self) -> EquationSpec {
        EquationSpec::canonical(self.equation, self.branch())
    }

    pub fn branch(&self) -> SignBranch {
        match &self.sign_source {
            SignSource::Branch(b) => *b,
            SignSource::Compressible(m) => EquationSpec::from_compressible(m).expect("validated at parse").branch(),
            SignSource::Incompressible(m) => EquationSpec::from_incompressible(m).expect("validated at parse").branch(),
        }
    }

    pub fn initial_field(&self) -> Field2D {
        Field2D::from_fn(&self.grid, |x, y| initial_condition(self.initial, x, y))
    }

    /// Normalised rendering of every setting that affects the numbers produced.
    pub fn canonical_text(&self) -> String {
        let d = self.grid.domain();
        let mut s = format!("equation = {}\n", self.equation);
        match &self.sign_source {
            SignSource::Branch(b) => s += &format!("branch = {b}\n"),
            SignSource::Compressible(m) => {
                let t = m.taylor();
                s += &format!(
                    "[material]\nlambda = {:?}\nmu = {:?}\nrho0 = {:?}\nalpha1 = {:?}\nalpha2 = {:?}\ngamma0 = {:?}\ngamma1 = {:?}\ngamma2 = {:?}\nnu0 = {:?}\n",
                    m.lambda(), m.mu(), m.rho0(), t.alpha1, t.alpha2, t.gamma0, t.gamma1, t.gamma2, m.nu0()
                );
            }
            SignSource::Incompressible(m) => {
                s += &format!(
                    "[material]\nmu = {:?}\nrho0 = {:?}\nlandau_a = {:?}\nlandau_d = {:?}\nnu0 = {:?}\n",
                    m.mu(), m.rho0(), m.landau_a(), m.landau_d(), m.nu0()
                );
            }
        }
        s += &format!(
            "[grid]\nnx = {}\nny = {}\nx_min = {:?}\nx_max = {:?}\ny_min = {:?}\ny_max = {:?}\n",
            self.grid.nx(), self.grid.ny(), d.x_min, d.x_max, d.y_min, d.y_max
        );
        let times: Vec<String> = self.snapshot_times.iter().map(|t| format!("{t:?}")).collect();
        s += &format!(
            "[run]\ndt = {:?}\nt_end = {:?}\ninitial = {}\nsnapshot_times = {}\neps_reg = {:?}\nzero_mode = {}\ndealias = {}\n",
            self.dt,
            self.t_end,
            self.initial,
            times.join(", "),
            self.eps_reg,
            self.zero_mode.as_str(),
            self.dealias.as_str()
        );
        s
    }

    /// SHA-256 of [`canonical_text`](Self::canonical_text).
    pub fn digest(&self) -> String {
        sha256_hex(&self.canonical_text())
    }

    pub fn solver_config(&self) -> SolverConfig {
        let mut c = SolverConfig::new(self.spec(), self.grid.clone(), self.dt, self.t_end);
        c.eps_reg = self.eps_reg;
        c.zero_mode = self.zero_mode;
        c.dealias = self.dealias;
        c.snapshot_times = self.snapshot_times.clone();
        c.diagnostics_stride = self.diagnostics_stride;
        c.digest = Some(self.digest());
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Top,
    Grid,
    Run,
    Material,
}

impl Section {
    fn keys(self) -> &'static [&'static str] {
        match self {
            Section::Top => &["equation", "branch"],
            Section::Grid => &["nx", "ny", "x_min", "x_max", "y_min", "y_max"],
            Section::Run => &[
                "dt",
                "t_end",
                "initial",
                "snapshot_times",
                "output_dir",
                "format",
                "eps_reg",
                "zero_mode",
                "dealias",
                "diagnostics_stride",
            ],
            Section::Material => &[
                "lambda", "mu", "rho0", "alpha1", "alpha2", "gamma0", "gamma1", "gamma2", "landau_a", "landau_d", "nu0",
                "nu", "length", "epsilon",
            ],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Section::Top => "top level",
            Section::Grid => "[grid]",
            Section::Run => "[run]",
            Section::Material => "[material]",
        }
    }
}

/// Parses a number, allowing a trailing `pi` factor.
pub fn parse_number(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let value = match t.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.trim().trim_end_matches('*').trim();
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| format!("malformed number `{t}`"))?,
            };
            c * std::f64::consts::PI
        }
        None => t.parse::<f64>().map_err(|_| format!("malformed number `{t}`"))?,
    };
    if !value.is_finite() {
        return Err(format!("number `{t}` is not finite"));
    }
    Ok(value)
}

struct Entry {
    line: usize,
    value: String,
}

struct Parsed {
    entries: BTreeMap<(Section, String), Entry>,
    material_line: Option<usize>,
    errors: Vec<ConfigError>,
}

impl Parsed {
    fn err(&mut self, line: usize, message: impl Into<String>) {
        self.errors.push(ConfigError { line, message: message.into() });
    }

    fn get(&self, section: Section, key: &str) -> Option<&Entry> {
        self.entries.get(&(section, key.to_string()))
    }

    fn has(&self, section: Section, key: &str) -> bool {
        self.get(section, key).is_some()
    }

    fn required(&mut self, section: Section, key: &str) -> Option<(usize, String)> {
        match self.get(section, key) {
            Some(e) => Some((e.line, e.value.clone())),
            None => {
                self.err(0, format!("missing required key `{key}` in {}", section.name()));
                None
            }
        }
    }

    fn parsed<T>(&mut self, section: Section, key: &str, f: impl Fn(&str) -> Result<T, String>) -> Option<T> {
        let e = self.get(section, key)?;
        let (line, r) = (e.line, f(&e.value));
        r.map_err(|m| self.err(line, format!("`{key}`: {m}"))).ok()
    }

    fn required_parsed<T>(&mut self, section: Section, key: &str, f: impl Fn(&str) -> Result<T, String>) -> Option<T> {
        self.required(section, key)?;
        self.parsed(section, key, f)
    }

    fn number(&mut self, section: Section, key: &str) -> Option<f64> {
        self.required_parsed(section, key, parse_number)
    }

    fn line_of(&self, section: Section, key: &str) -> usize {
        self.get(section, key).map_or(0, |e| e.line)
    }
}

fn lex(text: &str) -> Parsed {
    let mut p = Parsed { entries: BTreeMap::new(), material_line: None, errors: Vec::new() };
    let mut section = Section::Top;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                p.err(line, format!("malformed section header `{content}`"));
                continue;
            };
            section = match name.trim() {
                "grid" => Section::Grid,
                "run" => Section::Run,
                "material" => {
                    if p.material_line.is_some() {
                        p.err(line, "duplicate [material] block");
                    }
                    p.material_line.get_or_insert(line);
                    Section::Material
                }
                other => {
                    p.err(line, format!("unknown section `[{other}]` (expected [grid], [run] or [material])"));
                    continue;
                }
            };
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            p.err(line, format!("expected `key = value`, found `{content}`"));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if !section.keys().contains(&key) {
            p.err(line, format!("unknown key `{key}` in {}", section.name()));
            continue;
        }
        if value.is_empty() {
            p.err(line, format!("`{key}` has no value"));
            continue;
        }
        if let Some(prev) = p.get(section, key) {
            let first = prev.line;
            p.err(line, format!("duplicate key `{key}` (first set on line {first})"));
            continue;
        }
        p.entries.insert((section, key.to_string()), Entry { line, value: value.to_string() });
    }
    p
}

fn parse_count(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("expected a positive integer, found `{s}`"))?;
    if n < 16 || !n.is_power_of_two() || n > MAX_POINTS {
        return Err(format!("must be a power of two between 16 and {MAX_POINTS}, got {n}"));
    }
    Ok(n)
}

fn parse_times(s: &str) -> Result<Vec<f64>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_number)
        .collect()
}

fn parse_dispersion(p: &mut Parsed) -> Option<Dispersion> {
    let physical = ["nu", "length", "epsilon"];
    let has_physical = physical.iter().any(|k| p.has(Section::Material, k));
    match (p.has(Section::Material, "nu0"), has_physical) {
        (true, true) => {
            let line = p.line_of(Section::Material, "nu0");
            p.err(line, "`nu0` conflicts with `nu`/`length`/`epsilon`; give one form of the dispersion");
            None
        }
        (true, false) => p.number(Section::Material, "nu0").map(Dispersion::Dimensionless),
        (false, true) => {
            let nu = p.number(Section::Material, "nu");
            let length = p.number(Section::Material, "length");
            let epsilon = p.number(Section::Material, "epsilon");
            Some(Dispersion::Physical { nu: nu?, length: length?, epsilon: epsilon? })
        }
        (false, false) => {
            p.err(0, "[material] needs `nu0` or all of `nu`, `length`, `epsilon`");
            None
        }
    }
}

fn parse_material(p: &mut Parsed, kind: EquationKind, block_line: usize) -> Option<SignSource> {
    let (own, foreign): (&[&str], &[&str]) = match kind {
        EquationKind::Quadratic => (
            &["lambda", "mu", "rho0", "alpha1", "alpha2", "gamma1", "gamma2"],
            &["landau_a", "landau_d"],
        ),
        EquationKind::Cubic => (
            &["mu", "rho0", "landau_a", "landau_d"],
            &["lambda", "alpha1", "alpha2", "gamma0", "gamma1", "gamma2"],
        ),
    };
    for key in foreign {
        if let Some(e) = p.get(Section::Material, key) {
            let line = e.line;
            p.err(line, format!("`{key}` does not apply to the {kind} equation"));
        }
    }
    let values: Vec<Option<f64>> = own.iter().map(|k| p.number(Section::Material, k)).collect();
    let gamma0 = if kind == EquationKind::Quadratic && p.has(Section::Material, "gamma0") {
        p.number(Section::Material, "gamma0")
    } else {
        values[1]
    };
    let dispersion = parse_dispersion(p)?;
    let v: Vec<f64> = values.into_iter().collect::<Option<_>>()?;
    let result = match kind {
        EquationKind::Quadratic => {
            let taylor = TaylorConstants { alpha1: v[3], alpha2: v[4], gamma0: gamma0?, gamma1: v[5], gamma2: v[6] };
            MaterialCompressible::new(v[0], v[1], v[2], taylor, dispersion)
                .and_then(|m| EquationSpec::from_compressible(&m).map(|_| SignSource::Compressible(m)))
        }
        EquationKind::Cubic => MaterialIncompressible::new(v[0], v[1], v[2], v[3], dispersion)
            .and_then(|m| EquationSpec::from_incompressible(&m).map(|_| SignSource::Incompressible(m))),
    };
    result.map_err(|e| p.err(block_line, format!("[material]: {e}"))).ok()
}

/// Parses and validates a configuration, reporting every problem found.
pub fn parse_config(text: &str) -> Result<SimulationConfig, ConfigErrors> {
    let mut p = lex(text);

    let equation = p.required_parsed(Section::Top, "equation", |s| s.parse::<EquationKind>());
    let sign_source = match (p.get(Section::Top, "branch").map(|e| e.line), p.material_line) {
        (Some(b), Some(m)) => {
            p.err(m, format!("`branch` on line {b} conflicts with the [material] block on line {m}; give only one"));
            None
        }
        (Some(_), None) => p.parsed(Section::Top, "branch", |s| s.parse::<SignBranch>()).map(SignSource::Branch),
        (None, Some(m)) => equation.and_then(|kind| parse_material(&mut p, kind, m)),
        (None, None) => {
            p.err(0, "missing sign source: set `branch` or give a [material] block");
            None
        }
    };

    let nx = p.required_parsed(Section::Grid, "nx", parse_count);
    let ny = p.required_parsed(Section::Grid, "ny", parse_count);
    let bounds: Vec<Option<f64>> =
        ["x_min", "x_max", "y_min", "y_max"].iter().map(|k| p.number(Section::Grid, k)).collect();
    let mut grid = None;
    if let [Some(x0), Some(x1), Some(y0), Some(y1)] = bounds[..] {
        if x1 <= x0 {
            let line = p.line_of(Section::Grid, "x_max");
            p.err(line, "`x_max` must exceed `x_min`");
        } else if y1 <= y0 {
            let line = p.line_of(Section::Grid, "y_max");
            p.err(line, "`y_max` must exceed `y_min`");
        } else if let (Some(nx), Some(ny)) = (nx, ny) {
            match make_grid(nx, ny, Domain::new(x0, x1, y0, y1)) {
                Ok(g) => grid = Some(g),
                Err(e) => p.err(0, e.to_string()),
            }
        }
    }

    let positive = |s: &str| {
        let v = parse_number(s)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(format!("must be positive, got {v}"))
        }
    };
    let dt = p.required_parsed(Section::Run, "dt", positive);
    let t_end = p.required_parsed(Section::Run, "t_end", |s| {
        let v = parse_number(s)?;
        if v >= 0.0 {
            Ok(v)
        } else {
            Err(format!("must be non-negative, got {v}"))
        }
    });
    let initial = p.required_parsed(Section::Run, "initial", |s| s.parse::<InitialCondition>());
    let eps_reg = match p.has(Section::Run, "eps_reg") {
        true => p.parsed(Section::Run, "eps_reg", positive),
        false => Some(DEFAULT_EPS_REG),
    };
    let zero_mode = match p.has(Section::Run, "zero_mode") {
        true => p.parsed(Section::Run, "zero_mode", |s| s.parse::<ZeroModePolicy>()),
        false => Some(ZeroModePolicy::default()),
    };
    let dealias = match p.has(Section::Run, "dealias") {
        true => p.parsed(Section::Run, "dealias", |s| s.parse::<Dealias>()),
        false => Some(Dealias::default()),
    };
    let format = match p.has(Section::Run, "format") {
        true => p.parsed(Section::Run, "format", |s| s.parse::<SnapshotFormat>()),
        false => Some(SnapshotFormat::F64Le),
    };
    let diagnostics_stride = match p.has(Section::Run, "diagnostics_stride") {
        true => p.parsed(Section::Run, "diagnostics_stride", |s| {
            s.parse::<usize>().map_err(|_| format!("expected a non-negative integer, found `{s}`"))
        }),
        false => Some(100),
    };
    let output_dir = p
        .get(Section::Run, "output_dir")
        .map_or_else(|| PathBuf::from("snapshots"), |e| PathBuf::from(&e.value));

    let snapshot_times = match (p.has(Section::Run, "snapshot_times"), t_end) {
        (false, Some(t)) => Some(vec![0.0, t]),
        (false, None) => None,
        (true, t_end) => {
            let line = p.line_of(Section::Run, "snapshot_times");
            let times = p.parsed(Section::Run, "snapshot_times", parse_times);
            match (times, t_end) {
                (Some(ts), Some(t_end)) => {
                    if ts.is_empty() {
                        p.err(line, "`snapshot_times` is empty");
                        None
                    } else if ts.windows(2).any(|w| w[0] > w[1]) {
                        p.err(line, "`snapshot_times` must be sorted");
                        None
                    } else if ts.iter().any(|&t| t < 0.0 || t > t_end) {
                        p.err(line, format!("`snapshot_times` must lie within [0, {t_end}]"));
                        None
                    } else {
                        Some(ts)
                    }
                }
                _ => None,
            }
        }
    };

    if !p.errors.is_empty() {
        p.errors.sort_by_key(|e| e.line);
        return Err(ConfigErrors(p.errors));
    }
    // every field is Some when no error was recorded
    let missing = || ConfigErrors(vec![ConfigError { line: 0, message: "incomplete configuration".into() }]);
    Ok(SimulationConfig {
        equation: equation.ok_or_else(missing)?,
        sign_source: sign_source.ok_or_else(missing)?,
        grid: grid.ok_or_else(missing)?,
        dt: dt.ok_or_else(missing)?,
        t_end: t_end.ok_or_else(missing)?,
        initial: initial.ok_or_else(missing)?,
        snapshot_times: snapshot_times.ok_or_else(missing)?,
        output_dir,
        format: format.ok_or_else(missing)?,
        eps_reg: eps_reg.ok_or_else(missing)?,
        zero_mode: zero_mode.ok_or_else(missing)?,
        dealias: dealias.ok_or_else(missing)?,
        diagnostics_stride: diagnostics_stride.ok_or_else(missing)?,
    })
}
