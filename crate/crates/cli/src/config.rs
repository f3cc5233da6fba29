//! Flat `key = value` configuration files and exact rational parsing.
//!
//! Rationals are accepted as `n/d` strings or decimals and preserved
//! exactly into the rational-mode engines.

use std::collections::BTreeMap;

use heun_core::coeff::{Couplings, Rat};
use num_bigint::BigInt;

/// A flat key = value file; later keys override earlier ones, and flags
/// override the file.
#[derive(Default, Debug)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &str) -> Result<Self, String> {
        let text =
            std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path, e))?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected key = value", path, lineno + 1))?;
            let value = value.trim().trim_matches('"').trim_matches('\'');
            entries.insert(key.trim().to_string(), value.to_string());
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<String> {
        self.entries.get(key).cloned()
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.entries.get(key).and_then(|v| v.parse().ok())
    }

    pub fn get_usize(&self, key: &str) -> Option<usize> {
        self.entries.get(key).and_then(|v| v.parse().ok())
    }

    pub fn get_u64(&self, key: &str) -> Option<u64> {
        self.entries.get(key).and_then(|v| v.parse().ok())
    }
}

/// Parse `n/d`, an integer, or a decimal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rat, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {:?}", text))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {:?}", text))?;
        if d == BigInt::from(0) {
            return Err(format!("zero denominator in {:?}", text));
        }
        return Ok(Rat::new(n, d));
    }
    let (sign, digits) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("empty number {:?}", text));
    }
    let mut joined = String::with_capacity(int_part.len() + frac_part.len());
    joined.push_str(if int_part.is_empty() { "0" } else { int_part });
    joined.push_str(frac_part);
    let n: BigInt = joined
        .parse()
        .map_err(|_| format!("cannot parse number {:?}", text))?;
    let den = BigInt::from(10).pow(frac_part.len() as u32);
    Ok(Rat::new(n * sign, den))
}

/// Parse `l0,l1,l2,l3`.
pub fn parse_couplings(text: &str) -> Result<Couplings<Rat>, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected four couplings, got {}", parts.len()));
    }
    let mut vals = Vec::with_capacity(4);
    for part in parts {
        vals.push(parse_rational(part)?);
    }
    Ok(Couplings::new(
        vals[0].clone(),
        vals[1].clone(),
        vals[2].clone(),
        vals[3].clone(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use heun_core::coeff::rat;

    #[test]
    fn rational_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("2").unwrap(), rat(2, 1));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("2.3").unwrap(), rat(23, 10));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn couplings_list() {
        let l = parse_couplings("1,2,0.5,3/10").unwrap();
        assert_eq!(l.l[2], rat(1, 2));
        assert_eq!(l.l[3], rat(3, 10));
        assert!(parse_couplings("1,2,3").is_err());
    }
}
