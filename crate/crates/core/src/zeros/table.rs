use std::fmt;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::predictor::{main_term, COUNTING_CONSTANT};

/// Ordinates closer than this to a height are counted as lying on it.
pub const HALF_COUNT_TOLERANCE: f64 = 1e-12;

/// Discrepancies beyond this mark a table as suspect.
pub const SUSPECT_DISCREPANCY: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroSource {
    Computed,
    Ingested,
}

impl fmt::Display for ZeroSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZeroSource::Computed => "computed",
            ZeroSource::Ingested => "ingested",
        })
    }
}

/// Imaginary parts `γ_1 ≤ γ_2 ≤ …` of critical-line zeros, complete below
/// `max_height`. Indices are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTable {
    zeros: Vec<f64>,
    source: ZeroSource,
    max_height: f64,
}

impl ZeroTable {
    pub fn new(zeros: Vec<f64>, source: ZeroSource, max_height: f64) -> Result<Self> {
        validate(&zeros)?;
        if let Some(&last) = zeros.last() {
            if max_height < last {
                return Err(Error::InvalidParameter(format!(
                    "max height {max_height} below last zero {last}"
                )));
            }
        }
        Ok(Self {
            zeros,
            source,
            max_height,
        })
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn source(&self) -> ZeroSource {
        self.source
    }

    pub fn max_height(&self) -> f64 {
        self.max_height
    }

    /// `γ_k`, 1-based.
    pub fn gamma(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.zeros.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.zeros.len(),
            });
        }
        Ok(self.zeros[k - 1])
    }

    /// `N(T)` with the half-count convention for an ordinate on `T`.
    /// Does not check coverage; see [`crate::s_functions::count_zeros`].
    pub fn count_below(&self, height: f64) -> f64 {
        let strictly = self
            .zeros
            .partition_point(|&g| g < height - HALF_COUNT_TOLERANCE);
        let touching = self.zeros[strictly..]
            .iter()
            .take_while(|&&g| g <= height + HALF_COUNT_TOLERANCE)
            .count();
        strictly as f64 + 0.5 * touching as f64
    }

    /// First `limit` entries; coverage shrinks to the last kept zero.
    pub fn truncated(&self, limit: usize) -> Self {
        if limit >= self.zeros.len() {
            return self.clone();
        }
        let zeros = self.zeros[..limit].to_vec();
        let max_height = zeros.last().copied().unwrap_or(0.0);
        Self {
            zeros,
            source: self.source,
            max_height,
        }
    }

    /// FNV-1a over the bit patterns of the ordinates and the coverage.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |bytes: [u8; 8]| {
            for b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        for g in &self.zeros {
            eat(g.to_bits().to_le_bytes());
        }
        eat(self.max_height.to_bits().to_le_bytes());
        h
    }

    /// Writes the table in the ingest format. Ordinates use the shortest
    /// representation that parses back to the same double.
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# source: {}", self.source)?;
        writeln!(out, "# max_height: {}", self.max_height)?;
        writeln!(out, "# count: {}", self.zeros.len())?;
        for g in &self.zeros {
            writeln!(out, "{g}")?;
        }
        out.flush()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
        }
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write(BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }
}

fn validate(zeros: &[f64]) -> Result<()> {
    for (i, &g) in zeros.iter().enumerate() {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::NotPositive {
                index: i + 1,
                value: g,
            });
        }
        if i > 0 && g < zeros[i - 1] {
            return Err(Error::NotMonotone {
                index: i + 1,
                previous: zeros[i - 1],
                value: g,
            });
        }
    }
    Ok(())
}

/// Reads a zero table: one decimal ordinate per line, ascending, with
/// optional `#` header lines. At most `limit` entries are kept.
pub fn ingest_table(path: &Path, limit: usize) -> Result<ZeroTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_table(BufReader::new(file), path, limit)
}

/// [`ingest_table`] over any reader; `label` names the source in errors.
pub fn parse_table<R: BufRead>(reader: R, label: &Path, limit: usize) -> Result<ZeroTable> {
    let mut zeros = Vec::new();
    let mut header_height = None;
    let mut source = ZeroSource::Ingested;
    let mut truncated = false;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(label, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(meta) = trimmed.strip_prefix('#') {
            if let Some((key, value)) = meta.split_once(':') {
                match key.trim() {
                    "max_height" => header_height = value.trim().parse::<f64>().ok(),
                    "source" if value.trim() == "computed" => source = ZeroSource::Computed,
                    _ => {}
                }
            }
            continue;
        }
        if zeros.len() == limit {
            truncated = true;
            break;
        }
        let g: f64 = trimmed.parse().map_err(|_| Error::Parse {
            path: label.to_path_buf(),
            line: lineno + 1,
            content: trimmed.to_string(),
        })?;
        zeros.push(g);
    }

    let last = match zeros.last() {
        Some(&g) => g,
        None => return Err(Error::NoZeros(label.to_path_buf())),
    };
    let max_height = match header_height {
        Some(h) if !truncated && h >= last => h,
        _ => last,
    };
    ZeroTable::new(zeros, source, max_height)
}

/// Result of comparing `N(T)` against the rounded main term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountCheck {
    pub height: f64,
    pub count: f64,
    pub main_term: f64,
    pub discrepancy: i64,
}

impl CountCheck {
    pub fn suspect(&self) -> bool {
        self.discrepancy.abs() > SUSPECT_DISCREPANCY
    }
}

/// `N(T) − round(M(T))` where `M(T) = (T/2π) log(T/2πe) + 7/8`.
pub fn verify_count(table: &ZeroTable, height: f64) -> Result<CountCheck> {
    if height > table.max_height() {
        return Err(Error::HeightExceeded {
            requested: height,
            max_height: table.max_height(),
        });
    }
    let count = table.count_below(height);
    let m = main_term(height, COUNTING_CONSTANT);
    Ok(CountCheck {
        height,
        count,
        main_term: m,
        discrepancy: (count - m.round()).round() as i64,
    })
}

/// On-disk zero cache. The cache file uses the ingest format.
#[derive(Clone, Debug)]
pub struct ZeroCache {
    dir: PathBuf,
}

impl ZeroCache {
    pub const FILE_NAME: &'static str = "zeros.txt";

    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self) -> PathBuf {
        self.dir.join(Self::FILE_NAME)
    }

    pub fn exists(&self) -> bool {
        self.path().is_file()
    }

    pub fn load(&self) -> Result<ZeroTable> {
        ingest_table(&self.path(), usize::MAX)
    }

    pub fn store(&self, table: &ZeroTable) -> Result<PathBuf> {
        let path = self.path();
        table.save(&path)?;
        Ok(path)
    }
}
