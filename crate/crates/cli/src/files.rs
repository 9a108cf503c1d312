//! Reading and writing the JSON file formats.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chaintool_core::dynamics::ClosedInterval;
use chaintool_core::rational::parse_rational;
use chaintool_core::{ExtPoint, OpenInterval, PlMap, Word};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// `{"generators": [<PLMap>, …]}` plus an optional provenance record.
#[derive(Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub generators: Vec<PlMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub alphabet: Vec<String>,
    pub words: Vec<Word>,
}

/// An input file: its raw bytes plus the generators it describes.
pub struct Loaded {
    pub bytes: Vec<u8>,
    pub generators: Vec<PlMap>,
    pub single_map: bool,
}

/// Accepts either a system file or a bare PLMap file.
pub fn load(path: &Path) -> Result<Loaded> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let text = String::from_utf8_lossy(&bytes);
    let value: Value = serde_json::from_str(&text)
        .with_context(|| format!("parse error in {}", path.display()))?;
    let (generators, single_map) = if value.get("knots").is_some() {
        let map: PlMap = serde_json::from_value(value)
            .with_context(|| format!("parse error in {}", path.display()))?;
        (vec![map], true)
    } else {
        let sys: SystemFile = serde_json::from_str(&text)
            .with_context(|| format!("parse error in {}", path.display()))?;
        (sys.generators, false)
    };
    Ok(Loaded {
        bytes,
        generators,
        single_map,
    })
}

pub fn write_system(
    path: &Path,
    generators: &[PlMap],
    provenance: Option<Provenance>,
) -> Result<()> {
    let file = SystemFile {
        generators: generators.to_vec(),
        provenance,
    };
    let text = serde_json::to_string_pretty(&file)? + "\n";
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// `dir/stem.<suffix>.json` next to `path`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "system".into());
    path.with_file_name(format!("{stem}.{suffix}.json"))
}

/// Either Word JSON (`[["0","1"],…]`) or the text form `g0 g1^-1` (`1` for the empty word).
pub fn parse_word(s: &str) -> Result<Word> {
    let s = s.trim();
    if s.starts_with('[') {
        return serde_json::from_str(s).with_context(|| format!("bad word JSON {s:?}"));
    }
    if s == "1" || s.is_empty() {
        return Ok(Word::empty());
    }
    let mut factors = Vec::new();
    for tok in s.split_whitespace() {
        let body = tok
            .strip_prefix('g')
            .or_else(|| tok.strip_prefix('f'))
            .unwrap_or(tok);
        let (idx, exp) = match body.split_once('^') {
            Some((i, e)) => (i, e),
            None => (body, "1"),
        };
        let idx: usize = idx
            .parse()
            .with_context(|| format!("bad generator in {tok:?}"))?;
        let exp: i64 = exp
            .parse()
            .with_context(|| format!("bad exponent in {tok:?}"))?;
        factors.push((idx, exp));
    }
    Ok(Word::new(factors))
}

fn split_pair(s: &str) -> Result<(&str, &str)> {
    let s = s
        .trim()
        .trim_start_matches(['[', '('])
        .trim_end_matches([']', ')']);
    match s.split_once(',') {
        Some(p) => Ok(p),
        None => bail!("expected an interval written lo,hi but got {s:?}"),
    }
}

pub fn parse_closed(s: &str) -> Result<ClosedInterval> {
    let (lo, hi) = split_pair(s)?;
    Ok(ClosedInterval::new(
        parse_rational(lo)?,
        parse_rational(hi)?,
    )?)
}

pub fn parse_open(s: &str) -> Result<OpenInterval> {
    let (lo, hi) = split_pair(s)?;
    match OpenInterval::new(ExtPoint::parse(lo)?, ExtPoint::parse(hi)?) {
        Some(iv) => Ok(iv),
        None => bail!("empty interval ({lo}, {hi})"),
    }
}
