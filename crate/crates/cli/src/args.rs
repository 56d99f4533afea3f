//! Parsing of numeric flag arguments: rationals, points, and grid ranges.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::str::FromStr;
use symdef_core::chord::GridAxis;
use symdef_core::poly::Rational;

use crate::error::CliError;

/// Parses an exact rational from `a`, `a/b`, or a plain decimal like `-0.25`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if s.contains(['i', 'I']) {
        return Err(format!(
            "`{s}` looks complex; only rational coordinates are supported"
        ));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| format!("bad numerator in `{s}`"))?;
        let d = BigInt::from_str(den.trim()).map_err(|_| format!("bad denominator in `{s}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (sign, digits) = match whole.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            return Err(format!("bad decimal `{s}`"));
        }
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad decimal `{s}`"));
        }
        let joined = format!("{}{frac}", if digits.is_empty() { "0" } else { digits });
        let numerator =
            BigInt::from_str(&joined).map_err(|_| format!("bad decimal `{s}`"))? * sign;
        let mut denominator = BigInt::one();
        for _ in 0..frac.len() {
            denominator *= 10;
        }
        return Ok(Rational::new(numerator, denominator));
    }
    let n = BigInt::from_str(s).map_err(|_| format!("bad number `{s}`"))?;
    Ok(Rational::from_integer(n))
}

/// Parses a comma-separated rational point with exactly `m` coordinates.
pub fn parse_point(s: &str, m: usize) -> Result<Vec<Rational>, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != m {
        return Err(CliError::Input(format!(
            "point `{s}` has {} coordinates, expected {m}",
            parts.len()
        )));
    }
    parts
        .iter()
        .enumerate()
        .map(|(i, part)| {
            parse_rational(part)
                .map_err(|e| CliError::Input(format!("point coordinate {}: {e}", i + 1)))
        })
        .collect()
}

/// Parses a grid description `name=lo:hi:cells[,name=lo:hi:cells]` against
/// the problem's variable names.
pub fn parse_grid(s: &str, vars: &[String]) -> Result<Vec<GridAxis>, CliError> {
    let mut axes = Vec::new();
    for part in s.split(',') {
        let (name, range) = part.split_once('=').ok_or_else(|| {
            CliError::Input(format!("grid axis `{part}` is not of the form name=lo:hi:cells"))
        })?;
        let name = name.trim();
        let coordinate = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| CliError::Input(format!("unknown grid axis `{name}`")))?;
        let pieces: Vec<&str> = range.split(':').collect();
        if pieces.len() != 3 {
            return Err(CliError::Input(format!(
                "grid range `{range}` is not of the form lo:hi:cells"
            )));
        }
        let start = parse_rational(pieces[0])
            .map_err(|e| CliError::Input(format!("grid axis `{name}` start: {e}")))?;
        let end = parse_rational(pieces[1])
            .map_err(|e| CliError::Input(format!("grid axis `{name}` end: {e}")))?;
        let cells: usize = pieces[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("grid axis `{name}`: bad cell count")))?;
        axes.push(GridAxis { coordinate, start, end, cells });
    }
    Ok(axes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use symdef_core::poly::rat;

    #[test]
    fn rational_forms() {
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("2+3i").is_err());
    }

    #[test]
    fn grid_axes() {
        let vars = vec!["x1".to_string(), "x2".to_string(), "x3".to_string()];
        let axes = parse_grid("x3=-1:1:41", &vars).unwrap();
        assert_eq!(axes.len(), 1);
        assert_eq!(axes[0].coordinate, 2);
        assert_eq!(axes[0].cells, 41);
        assert!(parse_grid("w=0:1:5", &vars).is_err());
        assert!(parse_grid("x1=0:1", &vars).is_err());
    }
}
