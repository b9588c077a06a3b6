//! Snapshot files.
//!
//! Binary (`f64le`) layout:
//!
//! ```text
//! KPSNAP 1
//! <nx> <ny>
//! <xmin> <xmax> <ymin> <ymax>
//! time <t>
//! equation <tag>
//! config <hex digest>
//! DATA
//! <nx*ny little-endian binary64 values, row-major, y slow>
//! ```
//!
//! The `csv` layout carries the same six header lines prefixed by `# `,
//! followed by `ny` rows of `nx` comma-separated values printed with 17
//! significant digits.

use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::material::{EquationKind, SignBranch};
use crate::spectral::{Domain, Field2D};

pub const MAGIC: &str = "KPSNAP";
pub const VERSION: u32 = 1;
/// Largest accepted `nx * ny`.
pub const MAX_SAMPLES: usize = 1 << 30;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a snapshot file (bad magic)")]
    BadMagic,
    #[error("unsupported snapshot version {0}")]
    UnsupportedVersion(String),
    #[error("truncated payload: expected {expected} values, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("dimensions {nx}x{ny} overflow the sample limit")]
    DimensionOverflow { nx: usize, ny: usize },
    #[error("malformed snapshot: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotFormat {
    Csv,
    F64Le,
}

impl std::str::FromStr for SnapshotFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "csv" => Ok(Self::Csv),
            "f64le" => Ok(Self::F64Le),
            other => Err(format!("unknown format `{other}` (expected csv|f64le)")),
        }
    }
}

impl SnapshotFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::F64Le => "f64le",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::F64Le => "kpsnap",
        }
    }
}

/// Equation kind and branch as recorded in a snapshot header, e.g. `quadratic-plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquationTag {
    pub kind: EquationKind,
    pub branch: SignBranch,
}

impl fmt::Display for EquationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.kind, self.branch)
    }
}

impl std::str::FromStr for EquationTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, branch) = s.split_once('-').ok_or_else(|| format!("bad equation tag `{s}`"))?;
        Ok(Self { kind: kind.parse()?, branch: branch.parse()? })
    }
}

/// A field at one canonical time, tagged with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub field: Field2D,
    /// Canonical `t` (scaled propagation distance).
    pub sim_time: f64,
    pub equation: EquationTag,
    /// Hex SHA-256 of the canonical configuration text.
    pub config_digest: String,
}

fn header_lines(s: &Snapshot) -> [String; 6] {
    let d = s.field.domain();
    [
        format!("{MAGIC} {VERSION}"),
        format!("{} {}", s.field.nx(), s.field.ny()),
        format!("{:e} {:e} {:e} {:e}", d.x_min, d.x_max, d.y_min, d.y_max),
        format!("time {:e}", s.sim_time),
        format!("equation {}", s.equation),
        format!("config {}", s.config_digest),
    ]
}

pub fn write_snapshot(s: &Snapshot, path: &Path, format: SnapshotFormat) -> Result<(), SnapshotError> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    match format {
        SnapshotFormat::F64Le => {
            for line in header_lines(s) {
                writeln!(w, "{line}")?;
            }
            w.write_all(b"DATA\n")?;
            for v in s.field.values() {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        SnapshotFormat::Csv => {
            for line in header_lines(s) {
                writeln!(w, "# {line}")?;
            }
            for j in 0..s.field.ny() {
                let row: Vec<String> = s.field.row(j).iter().map(|v| format!("{v:.16e}")).collect();
                writeln!(w, "{}", row.join(","))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads either format, detected from the first line.
pub fn read_snapshot(path: &Path) -> Result<Snapshot, SnapshotError> {
    let mut r = BufReader::new(fs::File::open(path)?);
    let mut first = String::new();
    read_header_line(&mut r, &mut first)?;
    let csv = first.starts_with('#');
    let mut lines = vec![strip_comment(&first, csv)?];
    check_magic(&lines[0])?;
    for _ in 0..5 {
        let mut l = String::new();
        read_header_line(&mut r, &mut l)?;
        lines.push(strip_comment(&l, csv)?);
    }
    let header = parse_header(&lines)?;
    let (nx, ny) = (header.nx, header.ny);
    let count = nx * ny;
    let values = if csv {
        read_csv_payload(r, nx, ny)?
    } else {
        let mut data = String::new();
        read_header_line(&mut r, &mut data)?;
        if data != "DATA" {
            return Err(SnapshotError::Malformed(format!("expected DATA line, found `{data}`")));
        }
        let mut bytes = Vec::with_capacity(count * 8);
        r.read_to_end(&mut bytes)?;
        if bytes.len() < count * 8 {
            return Err(SnapshotError::Truncated { expected: count, found: bytes.len() / 8 });
        }
        if bytes.len() > count * 8 {
            return Err(SnapshotError::Malformed(format!(
                "{} trailing bytes after payload",
                bytes.len() - count * 8
            )));
        }
        bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect()
    };
    let field = Field2D::from_values(nx, ny, header.domain, values)
        .map_err(|e| SnapshotError::Malformed(e.to_string()))?;
    Ok(Snapshot {
        field,
        sim_time: header.time,
        equation: header.equation,
        config_digest: header.digest,
    })
}

fn read_header_line(r: &mut impl BufRead, buf: &mut String) -> Result<(), SnapshotError> {
    // header lines are short; a missing newline within 4 KiB means binary garbage
    let mut raw = Vec::new();
    let n = r.by_ref().take(4096).read_until(b'\n', &mut raw)?;
    if n == 0 {
        return Err(SnapshotError::Malformed("unexpected end of header".into()));
    }
    if raw.last() != Some(&b'\n') {
        return Err(SnapshotError::Malformed("unterminated header line".into()));
    }
    raw.pop();
    *buf = String::from_utf8(raw).map_err(|_| SnapshotError::BadMagic)?;
    Ok(())
}

fn strip_comment(line: &str, csv: bool) -> Result<String, SnapshotError> {
    if csv {
        line.strip_prefix('#')
            .map(|l| l.trim().to_string())
            .ok_or_else(|| SnapshotError::Malformed(format!("expected comment header, found `{line}`")))
    } else {
        Ok(line.trim_end_matches('\r').to_string())
    }
}

struct Header {
    nx: usize,
    ny: usize,
    domain: Domain,
    time: f64,
    equation: EquationTag,
    digest: String,
}

fn check_magic(line: &str) -> Result<(), SnapshotError> {
    let mut magic = line.split_whitespace();
    if magic.next() != Some(MAGIC) {
        return Err(SnapshotError::BadMagic);
    }
    let version = magic.next().unwrap_or("");
    if version != VERSION.to_string() || magic.next().is_some() {
        return Err(SnapshotError::UnsupportedVersion(version.to_string()));
    }
    Ok(())
}

fn parse_header(lines: &[String]) -> Result<Header, SnapshotError> {
    let malformed = |what: &str| SnapshotError::Malformed(what.to_string());
    let dims: Vec<usize> = lines[1]
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| malformed("dimension line"))?;
    let [nx, ny] = dims[..] else {
        return Err(malformed("dimension line needs two integers"));
    };
    match nx.checked_mul(ny) {
        Some(n) if n <= MAX_SAMPLES && n > 0 => {}
        _ => return Err(SnapshotError::DimensionOverflow { nx, ny }),
    }
    let bounds: Vec<f64> = lines[2]
        .split_whitespace()
        .map(|t| t.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| malformed("domain line"))?;
    let [x_min, x_max, y_min, y_max] = bounds[..] else {
        return Err(malformed("domain line needs four numbers"));
    };
    let time = lines[3]
        .strip_prefix("time ")
        .and_then(|t| t.trim().parse::<f64>().ok())
        .ok_or_else(|| malformed("time line"))?;
    let equation = lines[4]
        .strip_prefix("equation ")
        .ok_or_else(|| malformed("equation line"))?
        .trim()
        .parse::<EquationTag>()
        .map_err(SnapshotError::Malformed)?;
    let digest = lines[5]
        .strip_prefix("config ")
        .ok_or_else(|| malformed("config line"))?
        .trim()
        .to_string();
    if digest.is_empty() || !digest.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(malformed("config digest must be hexadecimal"));
    }
    Ok(Header {
        nx,
        ny,
        domain: Domain::new(x_min, x_max, y_min, y_max),
        time,
        equation,
        digest,
    })
}

fn read_csv_payload(r: impl BufRead, nx: usize, ny: usize) -> Result<Vec<f64>, SnapshotError> {
    let mut values = Vec::with_capacity(nx * ny);
    let mut rows = 0;
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if rows == ny {
            return Err(SnapshotError::Malformed("more rows than ny".into()));
        }
        let before = values.len();
        for tok in line.split(',') {
            let v = tok
                .trim()
                .parse::<f64>()
                .map_err(|_| SnapshotError::Malformed(format!("bad number `{tok}` in row {rows}")))?;
            values.push(v);
        }
        if values.len() - before != nx {
            return Err(SnapshotError::Malformed(format!(
                "row {rows} has {} values, expected {nx}",
                values.len() - before
            )));
        }
        rows += 1;
    }
    if rows < ny {
        return Err(SnapshotError::Truncated { expected: nx * ny, found: values.len() });
    }
    Ok(values)
}
