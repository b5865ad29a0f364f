use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::hexfloat;
use super::sieve::{check_index, nth_prime_upper_bound, PrimeStream};
use super::theta::{ThetaAccumulator, ThetaPoint};
use crate::{Error, Result};

pub const CACHE_FORMAT_VERSION: u32 = 1;

/// θ checkpoints at every multiple of `checkpoint_stride`.
///
/// On disk:
///
/// ```text
/// psicache v1 stride=<k>
/// <index> <p_n> <theta_hi> <theta_lo>
/// ```
///
/// with both θ components as lowercase hex floats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaCache {
    pub format_version: u32,
    pub checkpoint_stride: u64,
    pub points: Vec<ThetaPoint>,
}

impl ThetaCache {
    pub fn new(checkpoint_stride: u64, points: Vec<ThetaPoint>) -> Result<Self> {
        if checkpoint_stride == 0 {
            return Err(Error::domain("checkpoint_stride must be ≥ 1 (got 0)"));
        }
        if let Some(bad) = points.iter().find(|p| p.index % checkpoint_stride != 0) {
            return Err(Error::domain(format!(
                "point index {} is not a multiple of stride {checkpoint_stride}",
                bad.index
            )));
        }
        Ok(ThetaCache {
            format_version: CACHE_FORMAT_VERSION,
            checkpoint_stride,
            points,
        })
    }

    /// Sieves up to `p_{n_max}` and records every `stride`-th point.
    pub fn build(n_max: u64, stride: u64) -> Result<Self> {
        check_index(n_max, "n_max")?;
        let points = super::theta_stream(n_max, stride, &[])?;
        Self::new(stride, points)
    }

    pub fn max_index(&self) -> u64 {
        self.points.last().map_or(0, |p| p.index)
    }

    /// Latest stored point with `index ≤ n`.
    pub fn checkpoint_at_or_below(&self, n: u64) -> Option<&ThetaPoint> {
        match self.points.binary_search_by_key(&n, |p| p.index) {
            Ok(i) => Some(&self.points[i]),
            Err(0) => None,
            Err(i) => Some(&self.points[i - 1]),
        }
    }

    /// θ at index `n` together with `p_{n+1}`, resuming from the nearest
    /// checkpoint instead of sieving from 2.
    pub fn point_and_successor(&self, n: u64) -> Result<(ThetaPoint, u64)> {
        check_index(n + 1, "n+1")?;
        let mut acc = match self.checkpoint_at_or_below(n) {
            Some(p) => ThetaAccumulator::resume(p),
            None => ThetaAccumulator::new(),
        };
        resume_to(&mut acc, n)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "psicache v{} stride={}\n",
            self.format_version, self.checkpoint_stride
        );
        for p in &self.points {
            out.push_str(&format!(
                "{} {} {} {}\n",
                p.index,
                p.prime,
                hexfloat::format(p.theta_hi),
                hexfloat::format(p.theta_lo)
            ));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or("");
        let rest = header
            .strip_prefix("psicache v")
            .ok_or_else(|| Error::parse(1, "missing `psicache v<version>` header"))?;
        let (version, stride) = rest
            .split_once(" stride=")
            .ok_or_else(|| Error::parse(1, "header lacks `stride=`"))?;
        let version: u32 = version
            .parse()
            .map_err(|_| Error::parse(1, format!("bad version `{version}`")))?;
        if version != CACHE_FORMAT_VERSION {
            return Err(Error::Incompatible(format!(
                "cache version {version}, expected {CACHE_FORMAT_VERSION}"
            )));
        }
        let stride: u64 = stride
            .parse()
            .ok()
            .filter(|&s| s > 0)
            .ok_or_else(|| Error::parse(1, format!("bad stride `{stride}`")))?;

        let mut points: Vec<ThetaPoint> = Vec::new();
        let mut saw_end = false;
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            if line.is_empty() {
                // only the terminating newline may produce an empty piece
                saw_end = true;
                continue;
            }
            if saw_end {
                return Err(Error::parse(lineno - 1, "empty line inside cache body"));
            }
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != 4 {
                return Err(Error::parse(
                    lineno,
                    format!("expected 4 fields, found {}", fields.len()),
                ));
            }
            let index: u64 = fields[0]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad index `{}`", fields[0])))?;
            let prime: u64 = fields[1]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad prime `{}`", fields[1])))?;
            let theta_hi = hexfloat::parse(fields[2])
                .ok_or_else(|| Error::parse(lineno, format!("bad theta_hi `{}`", fields[2])))?;
            let theta_lo = hexfloat::parse(fields[3])
                .ok_or_else(|| Error::parse(lineno, format!("bad theta_lo `{}`", fields[3])))?;
            if !index.is_multiple_of(stride) {
                return Err(Error::parse(
                    lineno,
                    format!("index {index} is not a multiple of stride {stride}"),
                ));
            }
            if points.last().is_some_and(|p| p.index >= index) {
                return Err(Error::parse(lineno, "indices must increase"));
            }
            points.push(ThetaPoint {
                index,
                prime,
                theta_hi,
                theta_lo,
            });
        }
        if !saw_end && !points.is_empty() {
            // the writer always terminates the final row with LF
            return Err(Error::parse(points.len() + 1, "truncated final line"));
        }
        Ok(ThetaCache {
            format_version: version,
            checkpoint_stride: stride,
            points,
        })
    }

    /// Writes via a temporary sibling and rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_text().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_text(&text)
    }
}

/// Advances `acc` to index `n` and returns that point and `p_{n+1}`.
pub(crate) fn resume_to(acc: &mut ThetaAccumulator, n: u64) -> Result<(ThetaPoint, u64)> {
    let mut at_n = if acc.index() == n {
        Some(acc.point())
    } else {
        None
    };
    if acc.index() > n {
        return Err(Error::domain(format!(
            "cannot rewind from index {} to {n}",
            acc.index()
        )));
    }
    let hi = nth_prime_upper_bound(n + 1);
    for p in PrimeStream::new(acc.prime() + 1, hi)? {
        if let Some(point) = at_n {
            return Ok((point, p));
        }
        acc.push(p);
        if acc.index() == n {
            at_n = Some(acc.point());
        }
    }
    unreachable!("upper bound on p_(n+1) holds")
}
