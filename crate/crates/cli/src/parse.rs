//! Argument value parsers.

use std::path::Path;

use agcodes::curve::PlaneCurve;
use anyhow::{anyhow, bail, Context, Result};
use num_rational::Ratio;

/// `0.25` as `25/100`, reduced. Only plain decimals in `[0, 1]`.
pub fn decimal_ratio(s: &str) -> Result<Ratio<u64>> {
    let s = s.trim();
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        bail!("'{s}' is not a plain decimal");
    }
    if frac.len() > 12 {
        bail!("'{s}' has too many decimal places");
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse()? };
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse()? };
    let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(|| anyhow!("'{s}' is too large"))?;
    Ok(Ratio::new(num, den))
}

/// `0.1..0.9` (step 0.1), `0.1..0.9:0.05`, or a comma list `0.1,0.25`.
pub fn decimal_list(s: &str) -> Result<Vec<Ratio<u64>>> {
    if let Some((lo, rest)) = s.split_once("..") {
        let (hi, step) = rest.split_once(':').unwrap_or((rest, "0.1"));
        let (lo, hi, step) = (decimal_ratio(lo)?, decimal_ratio(hi)?, decimal_ratio(step)?);
        if step == Ratio::from_integer(0) {
            bail!("range step must be positive");
        }
        let mut out = Vec::new();
        let mut x = lo;
        while x <= hi {
            out.push(x);
            x += step;
        }
        if out.is_empty() {
            bail!("empty range '{s}'");
        }
        return Ok(out);
    }
    s.split(',').map(decimal_ratio).collect()
}

pub fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `2^24` or a plain integer.
pub fn work_limit(s: &str) -> Result<u128> {
    let s = s.trim();
    if let Some((base, exp)) = s.split_once('^') {
        let base: u128 = base.trim().parse().with_context(|| format!("bad base in '{s}'"))?;
        let exp: u32 = exp.trim().parse().with_context(|| format!("bad exponent in '{s}'"))?;
        return base.checked_pow(exp).ok_or_else(|| anyhow!("'{s}' overflows"));
    }
    s.parse().with_context(|| format!("bad limit '{s}'"))
}

/// Extension degree of `q = 2^m`.
pub fn field_degree(q: u64) -> Result<u32> {
    if q < 2 || !q.is_power_of_two() {
        bail!("q = {q} is not a power of two");
    }
    Ok(q.trailing_zeros())
}

/// A curve string, or a file with one curve per line (blank lines and lines
/// starting with `#` are skipped).
pub fn curves(arg: &str) -> Result<(Vec<PlaneCurve>, bool)> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let curves = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| l.parse::<PlaneCurve>().with_context(|| format!("{}:{}", path.display(), i + 1)))
            .collect::<Result<Vec<_>>>()?;
        if curves.is_empty() {
            bail!("{} lists no curves", path.display());
        }
        return Ok((curves, true));
    }
    let c = arg.parse::<PlaneCurve>().with_context(|| format!("parsing curve '{arg}'"))?;
    Ok((vec![c], false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals() {
        assert_eq!(decimal_ratio("0.25").unwrap(), Ratio::new(1, 4));
        assert_eq!(decimal_ratio(".5").unwrap(), Ratio::new(1, 2));
        assert_eq!(decimal_ratio("1").unwrap(), Ratio::from_integer(1));
        assert!(decimal_ratio("-0.1").is_err());
        assert!(decimal_ratio("1e-3").is_err());
        let d = decimal_list("0.1..0.9").unwrap();
        assert_eq!(d.len(), 9);
        assert_eq!(d[8], Ratio::new(9, 10));
        assert_eq!(decimal_list("0.1..0.3:0.05").unwrap().len(), 5);
        assert_eq!(decimal_list("0.3,0.1").unwrap(), vec![Ratio::new(3, 10), Ratio::new(1, 10)]);
    }

    #[test]
    fn limits() {
        assert_eq!(work_limit("2^24").unwrap(), 1 << 24);
        assert_eq!(work_limit("1000").unwrap(), 1000);
        assert!(work_limit("2^200").is_err());
        assert_eq!(field_degree(256).unwrap(), 8);
        assert!(field_degree(12).is_err());
    }
}
