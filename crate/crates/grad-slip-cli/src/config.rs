//! Flat `key = value` config files merged under command-line flags.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use grad_slip::couette::WallSignal;

/// Values from the config file; command-line flags take precedence.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut values = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected key = value", path.display(), n + 1))?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Flag value if given, else the config entry `key`.
    pub fn pick(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.values.get(key).cloned())
    }
}

/// A number, or `2^k` for a power of two.
pub fn parse_num(tok: &str) -> Result<f64> {
    let tok = tok.trim();
    if let Some(exp) = tok.strip_prefix("2^") {
        let k: i32 = exp
            .parse()
            .with_context(|| format!("bad exponent in {tok:?}"))?;
        return Ok(2f64.powi(k));
    }
    tok.parse().with_context(|| format!("bad number {tok:?}"))
}

/// Comma list of numbers; `2^a..2^b` expands to every power between.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((a, b)) = tok.split_once("..") {
            let exp = |t: &str| -> Result<i32> {
                t.trim()
                    .strip_prefix("2^")
                    .ok_or_else(|| anyhow!("ranges must be written 2^a..2^b, got {tok:?}"))?
                    .parse()
                    .with_context(|| format!("bad range {tok:?}"))
            };
            let (a, b) = (exp(a)?, exp(b)?);
            let step = if b >= a { 1 } else { -1 };
            let mut k = a;
            loop {
                out.push(2f64.powi(k));
                if k == b {
                    break;
                }
                k += step;
            }
        } else {
            out.push(parse_num(tok)?);
        }
    }
    if out.is_empty() {
        bail!("empty parameter list");
    }
    Ok(out)
}

pub fn parse_orders(s: &str) -> Result<Vec<usize>> {
    let v: Vec<usize> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().with_context(|| format!("bad order {t:?}")))
        .collect::<Result<_>>()?;
    if v.is_empty() {
        bail!("empty M list");
    }
    if let Some(m) = v.iter().find(|&&m| m < 3) {
        bail!("moment order must be at least 3, got {m}");
    }
    Ok(v)
}

pub fn eps_list(s: &str) -> Result<Vec<f64>> {
    let v = parse_list(s)?;
    if let Some(e) = v.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        bail!("eps must lie in (0, 1), got {e}");
    }
    Ok(v)
}

/// `cosine` or a CSV file of (t, u) rows.
pub fn wall_signal(s: &str) -> Result<WallSignal> {
    if s == "cosine" {
        return Ok(WallSignal::Cosine);
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .from_path(s)
        .with_context(|| format!("opening wall file {s}"))?;
    let (mut t, mut u) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.with_context(|| format!("reading wall file {s}"))?;
        // skip a header row
        if rec.get(0).is_some_and(|f| f.trim().parse::<f64>().is_err()) && t.is_empty() {
            continue;
        }
        if rec.len() < 2 {
            bail!("wall file {s}: expected two columns (t, u)");
        }
        t.push(parse_num(&rec[0])?);
        u.push(parse_num(&rec[1])?);
    }
    Ok(WallSignal::table(t, u)?)
}

pub fn out_dir(s: Option<String>) -> Result<PathBuf> {
    let dir = PathBuf::from(s.unwrap_or_else(|| "out".into()));
    fs::create_dir_all(&dir).with_context(|| format!("creating output dir {}", dir.display()))?;
    Ok(dir)
}
