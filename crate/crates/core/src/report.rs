//! Line-oriented `key=value` report accumulator.
//!
//! Reports render deterministically in insertion order so that repeated runs
//! with the same inputs produce byte-identical output files.

use std::fmt::Display;

/// An ordered list of `key=value` pairs.
#[derive(Debug, Clone, Default)]
pub struct KvReport {
    lines: Vec<(String, String)>,
}

impl KvReport {
    pub fn new() -> Self {
        Self { lines: Vec::new() }
    }

    /// Appends one entry. Keys must not contain `=` or newlines and values
    /// must be single-line; both are enforced because the rendered format is
    /// one pair per line.
    pub fn push(&mut self, key: &str, value: impl Display) {
        let value = value.to_string();
        assert!(
            !key.contains('=') && !key.contains('\n'),
            "report key {key:?} must not contain '=' or newlines"
        );
        assert!(
            !value.contains('\n'),
            "report value for {key:?} must be single-line"
        );
        self.lines.push((key.to_string(), value));
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.lines.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Renders as `key=value` lines with a trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_in_insertion_order() {
        let mut report = KvReport::new();
        report.push("zeta", 3);
        report.push("alpha", "x + y");
        assert_eq!(report.render(), "zeta=3\nalpha=x + y\n");
    }

    #[test]
    #[should_panic(expected = "must not contain")]
    fn rejects_equals_in_key() {
        let mut report = KvReport::new();
        report.push("a=b", 1);
    }
}
