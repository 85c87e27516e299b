//! Line-oriented state files.
//!
//! ```text
//! # comment
//! format: dm-v1
//! (0.2,0) (0.1,0) (0.1,0) (0,0)
//! ... three more rows
//! ```
//!
//! or
//!
//! ```text
//! format: bloch-v1
//! a: 0 0 0.5
//! b: 0 0 0
//! T: 0 0 0 / 0 0 0 / 0 0 0.1
//! ```

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{Matrix3, Vector3};

use crate::bloch::{from_bloch, BlochState, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{Op4, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum StateFile {
    Density(DensityMatrix),
    Bloch(BlochState),
}

impl StateFile {
    /// The density matrix, reconstructing and checking Bloch input.
    pub fn into_density(self) -> Result<DensityMatrix> {
        match self {
            StateFile::Density(dm) => Ok(dm),
            StateFile::Bloch(s) => from_bloch(&s),
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn number(tok: &str, line: usize) -> Result<f64> {
    let x: f64 = tok
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("not a number: {tok:?}")))?;
    if !x.is_finite() {
        return Err(Error::parse(line, format!("non-finite value {tok:?}")));
    }
    Ok(x)
}

fn complex(tok: &str, line: usize) -> Result<C64> {
    let inner = tok
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::parse(line, format!("expected (re,im), got {tok:?}")))?;
    let (re, im) = inner
        .split_once(',')
        .ok_or_else(|| Error::parse(line, format!("expected (re,im), got {tok:?}")))?;
    Ok(C64::new(number(re, line)?, number(im, line)?))
}

pub fn parse_state(text: &str) -> Result<StateFile> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(0, "empty state file"))?;
    let format = header
        .strip_prefix("format:")
        .map(str::trim)
        .ok_or_else(|| Error::parse(hline, "first line must be `format: dm-v1` or `format: bloch-v1`"))?;
    match format {
        "dm-v1" => parse_dm(lines, hline),
        "bloch-v1" => parse_bloch(lines, hline),
        other => Err(Error::parse(hline, format!("unknown format {other:?}"))),
    }
}

fn parse_dm<'a>(mut lines: impl Iterator<Item = (usize, &'a str)>, hline: usize) -> Result<StateFile> {
    let mut m = Op4::zeros();
    let mut last = hline;
    for r in 0..4 {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(last, format!("expected 4 matrix rows, found {r}")))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(Error::parse(ln, format!("expected 4 entries, found {}", toks.len())));
        }
        for (c, tok) in toks.iter().enumerate() {
            m[(r, c)] = complex(tok, ln)?;
        }
        last = ln;
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "unexpected content after matrix"));
    }
    Ok(StateFile::Density(DensityMatrix::new(m)?))
}

fn triple(rest: &str, line: usize) -> Result<Vector3<f64>> {
    let toks: Vec<&str> = rest.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(Error::parse(line, format!("expected 3 numbers, found {}", toks.len())));
    }
    Ok(Vector3::new(number(toks[0], line)?, number(toks[1], line)?, number(toks[2], line)?))
}

fn parse_bloch<'a>(lines: impl Iterator<Item = (usize, &'a str)>, hline: usize) -> Result<StateFile> {
    let (mut a, mut b, mut t) = (None, None, None);
    for (ln, line) in lines {
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(ln, format!("expected `key: values`, got {line:?}")))?;
        let slot_taken = |ln| Error::parse(ln, format!("duplicate key {:?}", key.trim()));
        match key.trim() {
            "a" => {
                if a.replace(triple(rest, ln)?).is_some() {
                    return Err(slot_taken(ln));
                }
            }
            "b" => {
                if b.replace(triple(rest, ln)?).is_some() {
                    return Err(slot_taken(ln));
                }
            }
            "T" => {
                let rows: Vec<&str> = rest.split('/').collect();
                if rows.len() != 3 {
                    return Err(Error::parse(ln, format!("T needs 3 rows separated by '/', found {}", rows.len())));
                }
                let mut m = Matrix3::zeros();
                for (i, row) in rows.iter().enumerate() {
                    m.set_row(i, &triple(row, ln)?.transpose());
                }
                if t.replace(m).is_some() {
                    return Err(slot_taken(ln));
                }
            }
            other => return Err(Error::parse(ln, format!("unknown key {other:?}"))),
        }
    }
    let missing = |k: &str| Error::parse(hline, format!("missing `{k}:` line"));
    let s = BlochState::new(a.ok_or_else(|| missing("a"))?, b.ok_or_else(|| missing("b"))?, t.ok_or_else(|| missing("T"))?);
    crate::bloch::check_bloch(&s)?;
    Ok(StateFile::Bloch(s))
}

pub fn read_state(path: &Path) -> Result<StateFile> {
    parse_state(&std::fs::read_to_string(path)?)
}

/// Reads either format and returns the density matrix.
pub fn load_density(path: &Path) -> Result<DensityMatrix> {
    read_state(path)?.into_density()
}

/// Shortest round-tripping decimal; `-0` is written as `0`.
fn num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:e}")
    }
}

pub fn write_dm(dm: &DensityMatrix) -> String {
    let mut out = String::from("format: dm-v1\n");
    let m = dm.matrix();
    for r in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|c| format!("({},{})", num(m[(r, c)].re), num(m[(r, c)].im)))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_bloch(s: &BlochState) -> String {
    let v = |x: &Vector3<f64>| format!("{} {} {}", num(x[0]), num(x[1]), num(x[2]));
    let rows: Vec<String> = (0..3).map(|i| v(&s.t.row(i).transpose())).collect();
    let mut out = String::from("format: bloch-v1\n");
    let _ = writeln!(out, "a: {}", v(&s.a));
    let _ = writeln!(out, "b: {}", v(&s.b));
    let _ = writeln!(out, "T: {}", rows.join(" / "));
    out
}
