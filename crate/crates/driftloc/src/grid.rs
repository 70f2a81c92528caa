//! Sweep grids: a comma list (`10,25,50,100`) or an inclusive range with a
//! step (`0.2..0.9 step 0.1`).

pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if let Some((range, step)) = s.split_once("step") {
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| format!("invalid grid range {:?}, expected LO..HI step S", range.trim()))?;
        let lo = number(lo)?;
        let hi = number(hi)?;
        let step = number(step)?;
        if step <= 0.0 {
            return Err(format!("grid step must be positive, got {step}"));
        }
        if hi < lo {
            return Err(format!("grid range {lo}..{hi} is empty"));
        }
        // Tolerance absorbs accumulated decimal error, e.g. 0.2 + 7×0.1.
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        // Rounding to 12 decimals keeps 0.1 + 2×0.1 printing as 0.3.
        return Ok((0..=n).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect());
    }
    let values = s.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("empty grid".into());
    }
    Ok(values)
}

fn number(tok: &str) -> Result<f64, String> {
    let t = tok.trim();
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("invalid grid token {t:?}")),
    }
}

/// Positive integer grid for bootstrap counts.
pub fn parse_count_grid(s: &str) -> Result<Vec<usize>, String> {
    parse_grid(s)?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(format!("invalid grid token {v:?}: bootstrap counts must be positive integers"))
            }
        })
        .collect()
}
