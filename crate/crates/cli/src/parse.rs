//! Flag value parsers.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{bail, Context, Result};

/// `start:step:stop` with both ends included, or `a,b,c`.
pub fn snr_points(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            bail!("SNR range must be start:step:stop, got {text:?}");
        }
        let num = |s: &str| s.trim().parse::<f64>().with_context(|| format!("bad number {s:?}"));
        let (start, step, stop) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || stop < start || !start.is_finite() || !stop.is_finite() {
            bail!("SNR range needs a positive step and start <= stop");
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // Rounded so 2.6 + 3 * 0.2 prints as 3.2.
        Ok((0..count)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect())
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad SNR value {s:?}")))
            .collect()
    }
}

/// `3:742,6:252` into degree -> count.
pub fn degree_spec(text: &str) -> Result<BTreeMap<usize, usize>> {
    let mut out = BTreeMap::new();
    for item in text.split(',') {
        let (d, c) = item
            .split_once(':')
            .with_context(|| format!("degree spec entry {item:?} is not degree:count"))?;
        let d: usize = d.trim().parse().with_context(|| format!("bad degree {d:?}"))?;
        let c: usize = c.trim().parse().with_context(|| format!("bad count {c:?}"))?;
        if out.insert(d, c).is_some() {
            bail!("degree {d} listed twice");
        }
    }
    Ok(out)
}

pub fn usize_set(text: &str) -> Result<BTreeSet<usize>> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad integer {s:?}")))
        .collect()
}
