//! The problem file format: a plain-text description of two complete
//! intersections sharing one ambient space.
//!
//! ```text
//! # comments start with '#'
//! n: 2
//! vars: x1 x2 x3
//! X:
//! x3 - x1^2 - x2^2
//! Y:
//! x3 - x1^2 - 2*x2^2 + 1
//! L: 0 0 1          # optional slicing-form coefficients
//! seed: 7           # optional; flags override
//! ```
//!
//! `n` is the dimension of each variety; the ambient space is `C^(2n-1)`, so
//! `vars` must list `2n-1` names and each of `X:`/`Y:` must contain `n-1`
//! polynomials, one per line.  Parse failures report the byte offset into
//! the file.

use std::path::Path;

use symdef_core::poly::{parse_polynomial, ParseError, Polynomial, Rational, Ring};
use symdef_core::variety::{LinearForm, MidpointProblem, VarietySpec};

use crate::args::parse_rational;
use crate::error::CliError;

#[derive(Debug)]
pub struct LoadedProblem {
    pub problem: MidpointProblem,
    /// True when the file supplied `L:` (it still must pass the
    /// admissibility certificate before use).
    pub l_from_file: bool,
}

pub fn load(path: &Path, seed_flag: Option<u64>) -> Result<LoadedProblem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text, seed_flag).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[derive(PartialEq)]
enum Section {
    None,
    X,
    Y,
}

pub fn parse_problem(text: &str, seed_flag: Option<u64>) -> Result<LoadedProblem, CliError> {
    let mut n: Option<usize> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut l_raw: Option<(usize, String)> = None;
    let mut file_seed: Option<u64> = None;
    // Polynomial sources with the byte offset of their first character.
    let mut x_src: Vec<(usize, String)> = Vec::new();
    let mut y_src: Vec<(usize, String)> = Vec::new();
    let mut section = Section::None;

    let mut line_start = 0usize;
    for raw_line in text.split('\n') {
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let trimmed = line.trim();
        let content_offset = line_start + (line.len() - line.trim_start().len());
        let fail =
            |msg: String| -> CliError { CliError::Input(format!("byte {content_offset}: {msg}")) };

        if trimmed.is_empty() || trimmed.starts_with('#') {
            line_start += raw_line.len() + 1;
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("n:") {
            n = Some(
                rest.trim()
                    .parse::<usize>()
                    .map_err(|_| fail(format!("invalid dimension `{}`", rest.trim())))?,
            );
            section = Section::None;
        } else if let Some(rest) = trimmed.strip_prefix("vars:") {
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.is_empty() {
                return Err(fail("no variable names given".into()));
            }
            vars = Some(names);
            section = Section::None;
        } else if let Some(rest) = trimmed.strip_prefix("L:") {
            l_raw = Some((content_offset, rest.trim().to_string()));
            section = Section::None;
        } else if let Some(rest) = trimmed.strip_prefix("seed:") {
            file_seed = Some(
                rest.trim()
                    .parse::<u64>()
                    .map_err(|_| fail(format!("invalid seed `{}`", rest.trim())))?,
            );
            section = Section::None;
        } else if trimmed == "X:" {
            section = Section::X;
        } else if trimmed == "Y:" {
            section = Section::Y;
        } else {
            match section {
                Section::X => x_src.push((content_offset, trimmed.to_string())),
                Section::Y => y_src.push((content_offset, trimmed.to_string())),
                Section::None => {
                    return Err(fail(format!("unexpected line `{trimmed}` outside X:/Y:")))
                }
            }
        }
        line_start += raw_line.len() + 1;
    }

    let n = n.ok_or_else(|| CliError::Input("missing `n:` line".into()))?;
    if n < 2 {
        return Err(CliError::Input(format!(
            "dimension n = {n} is below 2; the pair needs curves or larger"
        )));
    }
    let m = 2 * n - 1;
    let vars = vars.ok_or_else(|| CliError::Input("missing `vars:` line".into()))?;
    if vars.len() != m {
        return Err(CliError::Input(format!(
            "expected {m} variable names for n = {n}, got {}",
            vars.len()
        )));
    }
    let expected = n - 1;
    if x_src.len() != expected {
        return Err(CliError::Input(format!(
            "section X: has {} polynomials, expected {expected}",
            x_src.len()
        )));
    }
    if y_src.len() != expected {
        return Err(CliError::Input(format!(
            "section Y: has {} polynomials, expected {expected}",
            y_src.len()
        )));
    }

    let ring = Ring::new(vars);
    let parse_eqs = |src: &[(usize, String)]| -> Result<Vec<Polynomial>, CliError> {
        src.iter()
            .map(|(off, text)| {
                parse_polynomial(text, &ring).map_err(|pe| {
                    let detail = match &pe {
                        ParseError::Syntax { message, .. } => message.clone(),
                        ParseError::UnknownVariable { name, .. } => {
                            format!("unknown variable `{name}`")
                        }
                    };
                    CliError::Input(format!("byte {}: {detail}", off + pe.offset()))
                })
            })
            .collect()
    };
    let x_eqs = parse_eqs(&x_src)?;
    let y_eqs = parse_eqs(&y_src)?;

    let x = VarietySpec::new("X", &ring, n, x_eqs)?;
    let y = VarietySpec::new("Y", &ring, n, y_eqs)?;
    let seed = seed_flag.or(file_seed).unwrap_or(0);
    let mut problem = MidpointProblem::new(x, y, seed)?;

    let mut l_from_file = false;
    if let Some((off, raw)) = l_raw {
        let coeffs: Result<Vec<Rational>, CliError> = raw
            .split_whitespace()
            .map(|tok| {
                parse_rational(tok)
                    .map_err(|e| CliError::Input(format!("byte {off}: L coefficient: {e}")))
            })
            .collect();
        let coeffs = coeffs?;
        if coeffs.len() != m {
            return Err(CliError::Input(format!(
                "byte {off}: L: has {} coefficients, expected {m}",
                coeffs.len()
            )));
        }
        let form = LinearForm::new(coeffs)?;
        problem = problem.with_l(form);
        l_from_file = true;
    }
    Ok(LoadedProblem { problem, l_from_file })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAIR_A: &str = "n: 2\nvars: x1 x2 x3\nX:\nx3 - x1^2 - x2^2\nY:\nx3 - x1^2 - 2*x2^2 + 1\nL: 0 0 1\nseed: 7\n";

    #[test]
    fn well_formed_file_loads() {
        let loaded = parse_problem(PAIR_A, None).unwrap();
        assert_eq!(loaded.problem.ambient_dimension(), 3);
        assert_eq!(loaded.problem.seed(), 7);
        assert!(loaded.l_from_file);
        assert!(loaded.problem.l().is_some());
    }

    #[test]
    fn seed_flag_overrides_file_seed() {
        let loaded = parse_problem(PAIR_A, Some(99)).unwrap();
        assert_eq!(loaded.problem.seed(), 99);
    }

    #[test]
    fn bad_polynomial_reports_global_byte_offset() {
        let text = "n: 2\nvars: x1 x2 x3\nX:\nx3 - (x1^2\nY:\nx3\n";
        let err = parse_problem(text, None).unwrap_err();
        let msg = err.message().to_string();
        assert!(msg.contains("byte"), "message was: {msg}");
        // The malformed polynomial starts at byte 22; the unclosed
        // parenthesis is reported inside it.
        let reported: usize = msg
            .split("byte ")
            .nth(1)
            .unwrap()
            .split(':')
            .next()
            .unwrap()
            .trim()
            .parse()
            .unwrap();
        assert!(reported >= 22, "offset {reported} should be inside the polynomial");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn wrong_counts_are_input_errors() {
        let text = "n: 2\nvars: x1 x2\nX:\nx1\nY:\nx2\n";
        assert_eq!(parse_problem(text, None).unwrap_err().exit_code(), 2);
        let text = "n: 2\nvars: x1 x2 x3\nX:\nx1\nx2\nY:\nx3\n";
        assert_eq!(parse_problem(text, None).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn stray_line_is_rejected() {
        let text = "n: 2\nvars: x1 x2 x3\nx3 - x1^2\nX:\nx3\nY:\nx3\n";
        assert_eq!(parse_problem(text, None).unwrap_err().exit_code(), 2);
    }
}
