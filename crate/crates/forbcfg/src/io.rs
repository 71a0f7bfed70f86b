//! Text formats: dense `.fc`, multiplicity `.fcm`, and `X-CERT v1` certificates.
//!
//! `.fc`: lines starting with `#` are comments; the first data line is
//! `m n`, followed by `m` data lines of exactly `n` characters over `{0,1}`.
//!
//! `.fcm`: first data line `m`, second data line `2^m` space-separated
//! multiplicities, index 0 first, most significant bit = top row.

use std::fmt;

use crate::config::{ConfigError, Configuration};
use crate::products::{ProductShape, RowPartition};
use crate::xcompute::Certificate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormatError {
    MissingLine { what: &'static str },
    BadHeader { line: usize, content: String },
    BadInteger { line: usize, token: String },
    WrongRowLength { line: usize, expected: usize, got: usize },
    WrongEntryCount { line: usize, expected: usize, got: usize },
    TrailingData { line: usize },
    ValueOutOfRange { line: usize, value: u64 },
    Config(ConfigError),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::MissingLine { what } => write!(f, "missing {what}"),
            FormatError::BadHeader { line, content } => {
                write!(f, "line {line}: bad header {content:?}")
            }
            FormatError::BadInteger { line, token } => {
                write!(f, "line {line}: expected integer, got {token:?}")
            }
            FormatError::WrongRowLength { line, expected, got } => {
                write!(f, "line {line}: row has {got} characters, expected {expected}")
            }
            FormatError::WrongEntryCount { line, expected, got } => {
                write!(f, "line {line}: {got} entries, expected {expected}")
            }
            FormatError::TrailingData { line } => write!(f, "line {line}: unexpected trailing data"),
            FormatError::ValueOutOfRange { line, value } => {
                write!(f, "line {line}: value {value} out of range")
            }
            FormatError::Config(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<ConfigError> for FormatError {
    fn from(e: ConfigError) -> Self {
        FormatError::Config(e)
    }
}

/// Data lines of the input with their 1-based line numbers; `#` comments skipped.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
}

fn parse_int(line: usize, token: &str) -> Result<u64, FormatError> {
    token
        .parse::<u64>()
        .map_err(|_| FormatError::BadInteger { line, token: token.to_string() })
}

/// Parses the dense `.fc` format.
pub fn parse_fc(text: &str) -> Result<Configuration, FormatError> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or(FormatError::MissingLine { what: "header line \"m n\"" })?;
    let mut parts = header.split_whitespace();
    let m = parse_int(hline, parts.next().ok_or(FormatError::BadHeader { line: hline, content: header.to_string() })?)?;
    let n = parse_int(hline, parts.next().ok_or(FormatError::BadHeader { line: hline, content: header.to_string() })?)?;
    if parts.next().is_some() {
        return Err(FormatError::BadHeader { line: hline, content: header.to_string() });
    }
    if m > 20 {
        return Err(FormatError::ValueOutOfRange { line: hline, value: m });
    }
    let mut rows: Vec<&str> = Vec::with_capacity(m as usize);
    let mut last_line = hline;
    for _ in 0..m {
        let (lno, line) = lines.next().ok_or(FormatError::MissingLine { what: "matrix row" })?;
        if line.len() != n as usize {
            return Err(FormatError::WrongRowLength { line: lno, expected: n as usize, got: line.len() });
        }
        rows.push(line);
        last_line = lno;
    }
    if let Some((lno, l)) = lines.next() {
        if !l.trim().is_empty() {
            return Err(FormatError::TrailingData { line: lno });
        }
    }
    if m == 0 {
        // No row lines; the column count alone determines the multiplicity of
        // the empty column.
        if n > 255 {
            return Err(FormatError::ValueOutOfRange { line: hline, value: n });
        }
        let cfg = Configuration::new(0, vec![n as u8])?;
        return Ok(cfg);
    }
    let _ = last_line;
    Ok(Configuration::from_dense(&rows)?)
}

/// Renders the dense `.fc` format: header plus one line per row, columns in
/// ascending index order.
pub fn write_fc(cfg: &Configuration) -> String {
    let mut out = format!("{} {}\n", cfg.rows(), cfg.num_columns());
    for row in cfg.dense_rows() {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// Parses the multiplicity `.fcm` format.
pub fn parse_fcm(text: &str) -> Result<Configuration, FormatError> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or(FormatError::MissingLine { what: "header line \"m\"" })?;
    let m = parse_int(hline, header.trim())?;
    if m > 20 {
        return Err(FormatError::ValueOutOfRange { line: hline, value: m });
    }
    let (vline, values) = lines.next().ok_or(FormatError::MissingLine { what: "multiplicity line" })?;
    let expected = 1usize << m;
    let mut mult = Vec::with_capacity(expected);
    for token in values.split_whitespace() {
        let v = parse_int(vline, token)?;
        if v > 255 {
            return Err(FormatError::ValueOutOfRange { line: vline, value: v });
        }
        mult.push(v as u8);
    }
    if mult.len() != expected {
        return Err(FormatError::WrongEntryCount { line: vline, expected, got: mult.len() });
    }
    if let Some((lno, l)) = lines.next() {
        if !l.trim().is_empty() {
            return Err(FormatError::TrailingData { line: lno });
        }
    }
    Ok(Configuration::new(m as usize, mult)?)
}

/// Renders the multiplicity `.fcm` format.
pub fn write_fcm(cfg: &Configuration) -> String {
    let entries: Vec<String> = cfg.mult().iter().map(|c| c.to_string()).collect();
    format!("{}\n{}\n", cfg.rows(), entries.join(" "))
}

/// Renders an `X-CERT 1` certificate.
///
/// Header `X-CERT 1`, then `k: <int>`, then per shape a block of
/// `shape: a b c`, `assign: f_0 ... f_{m-1}` (factor of each row; the first
/// `a` factors are identities, the next `b` identity complements, the last
/// `c` towers) and `order: q_0 ... q_{m-1}` (position of each row within its
/// factor), terminated by `end`.
pub fn write_certificate(cert: &Certificate) -> String {
    let join = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = String::from("X-CERT 1\n");
    out.push_str(&format!("k: {}\n", cert.k));
    for (shape, partition) in &cert.entries {
        out.push_str(&format!("shape: {} {} {}\n", shape.a, shape.b, shape.c));
        out.push_str(&format!("assign: {}\n", join(&partition.factor_of)));
        out.push_str(&format!("order: {}\n", join(&partition.order_in_factor)));
    }
    out.push_str("end\n");
    out
}

/// Parses an `X-CERT 1` certificate. Structural problems (bad framing, bad
/// integers, mismatched assign/order lengths) are format errors; semantic
/// validity is the business of `verify_certificate`.
pub fn parse_certificate(text: &str, rows: usize) -> Result<Certificate, FormatError> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or(FormatError::MissingLine { what: "X-CERT header" })?;
    if header.trim() != "X-CERT 1" {
        return Err(FormatError::BadHeader { line: hline, content: header.to_string() });
    }
    let (kline, kdecl) = lines.next().ok_or(FormatError::MissingLine { what: "k declaration" })?;
    let k = match kdecl.trim().strip_prefix("k:") {
        Some(rest) => parse_int(kline, rest.trim())?,
        None => return Err(FormatError::BadHeader { line: kline, content: kdecl.to_string() }),
    };
    if k == 0 || k > u32::MAX as u64 {
        return Err(FormatError::ValueOutOfRange { line: kline, value: k });
    }

    let parse_vec = |line: usize, rest: &str| -> Result<Vec<u32>, FormatError> {
        let mut out = Vec::new();
        for token in rest.split_whitespace() {
            let v = parse_int(line, token)?;
            if v > u32::MAX as u64 {
                return Err(FormatError::ValueOutOfRange { line, value: v });
            }
            out.push(v as u32);
        }
        Ok(out)
    };

    let mut entries = Vec::new();
    loop {
        let (lno, line) = lines.next().ok_or(FormatError::MissingLine { what: "shape block or \"end\"" })?;
        let trimmed = line.trim();
        if trimmed == "end" {
            if let Some((extra, l)) = lines.next() {
                if !l.trim().is_empty() {
                    return Err(FormatError::TrailingData { line: extra });
                }
            }
            break;
        }
        let shape_rest = trimmed
            .strip_prefix("shape:")
            .ok_or(FormatError::BadHeader { line: lno, content: line.to_string() })?;
        let nums = parse_vec(lno, shape_rest)?;
        if nums.len() != 3 {
            return Err(FormatError::WrongEntryCount { line: lno, expected: 3, got: nums.len() });
        }
        let shape = ProductShape { a: nums[0], b: nums[1], c: nums[2] };

        let (aline, aliteral) = lines.next().ok_or(FormatError::MissingLine { what: "assign line" })?;
        let assign_rest = aliteral
            .trim()
            .strip_prefix("assign:")
            .ok_or(FormatError::BadHeader { line: aline, content: aliteral.to_string() })?;
        let factor_of = parse_vec(aline, assign_rest)?;
        if factor_of.len() != rows {
            return Err(FormatError::WrongEntryCount { line: aline, expected: rows, got: factor_of.len() });
        }

        let (oline, oliteral) = lines.next().ok_or(FormatError::MissingLine { what: "order line" })?;
        let order_rest = oliteral
            .trim()
            .strip_prefix("order:")
            .ok_or(FormatError::BadHeader { line: oline, content: oliteral.to_string() })?;
        let order_in_factor = parse_vec(oline, order_rest)?;
        if order_in_factor.len() != rows {
            return Err(FormatError::WrongEntryCount { line: oline, expected: rows, got: order_in_factor.len() });
        }

        entries.push((shape, RowPartition { factor_of, order_in_factor }));
    }
    Ok(Certificate { k: k as u32, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{generator, FactorKind};

    #[test]
    fn fc_roundtrip() {
        let f = Configuration::from_dense(&["00011", "01101", "01111"]).unwrap();
        let text = write_fc(&f);
        assert_eq!(text, "3 5\n00011\n01101\n01111\n");
        assert_eq!(parse_fc(&text).unwrap(), f);
    }

    #[test]
    fn fc_comments_ignored() {
        let text = "# tower\n2 3\n# interior comment\n011\n001\n";
        let t2 = generator(FactorKind::Tower, 2).unwrap();
        assert_eq!(parse_fc(text).unwrap(), t2);
    }

    #[test]
    fn fc_zero_rows() {
        let f = parse_fc("0 3\n").unwrap();
        assert_eq!(f.rows(), 0);
        assert_eq!(f.num_columns(), 3);
        assert_eq!(parse_fc(&write_fc(&f)).unwrap(), f);
    }

    #[test]
    fn fc_errors() {
        assert!(matches!(parse_fc(""), Err(FormatError::MissingLine { .. })));
        assert!(matches!(parse_fc("2\n01\n10\n"), Err(FormatError::BadHeader { .. })));
        assert!(matches!(parse_fc("2 2\n01\n"), Err(FormatError::MissingLine { .. })));
        assert!(matches!(parse_fc("2 2\n011\n10\n"), Err(FormatError::WrongRowLength { .. })));
        assert!(matches!(parse_fc("a 2\n"), Err(FormatError::BadInteger { .. })));
        assert!(matches!(parse_fc("1 2\n02\n"), Err(FormatError::Config(_))));
    }

    #[test]
    fn fcm_roundtrip() {
        let f = Configuration::from_dense(&["00011", "01101", "01111"]).unwrap();
        let text = write_fcm(&f);
        assert_eq!(text, "3\n1 0 0 2 0 1 0 1\n");
        assert_eq!(parse_fcm(&text).unwrap(), f);
    }

    #[test]
    fn fcm_errors() {
        assert!(matches!(parse_fcm("2\n1 0 0\n"), Err(FormatError::WrongEntryCount { .. })));
        assert!(matches!(parse_fcm("1\n1 999\n"), Err(FormatError::ValueOutOfRange { .. })));
    }

    #[test]
    fn certificate_roundtrip() {
        let cert = Certificate {
            k: 1,
            entries: vec![
                (
                    ProductShape { a: 0, b: 0, c: 1 },
                    RowPartition { factor_of: vec![0, 0], order_in_factor: vec![0, 1] },
                ),
                (
                    ProductShape { a: 0, b: 1, c: 0 },
                    RowPartition { factor_of: vec![0, 0], order_in_factor: vec![0, 1] },
                ),
                (
                    ProductShape { a: 1, b: 0, c: 0 },
                    RowPartition { factor_of: vec![0, 0], order_in_factor: vec![0, 1] },
                ),
            ],
        };
        let text = write_certificate(&cert);
        let parsed = parse_certificate(&text, 2).unwrap();
        assert_eq!(parsed, cert);
    }

    #[test]
    fn certificate_parse_errors() {
        assert!(parse_certificate("", 2).is_err());
        assert!(parse_certificate("X-CERT 2\nk: 1\nend\n", 2).is_err());
        assert!(parse_certificate("X-CERT 1\nk: 0\nend\n", 2).is_err());
        let missing_order = "X-CERT 1\nk: 1\nshape: 1 0 0\nassign: 0 0\nend\n";
        assert!(parse_certificate(missing_order, 2).is_err());
        let short_assign = "X-CERT 1\nk: 1\nshape: 1 0 0\nassign: 0\norder: 0 1\nend\n";
        assert!(parse_certificate(short_assign, 2).is_err());
    }
}
