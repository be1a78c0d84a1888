//! Plain-text instance and tour files.
//!
//! Instance files look like:
//!
//! ```text
//! NAME: example
//! MODE: EXACT
//! N: 3
//! WEIGHTS:
//! 0 1 3/2
//! 1 0 2
//! 3/2 2 0
//! ```
//!
//! `MODE` selects the entry syntax: `EXACT` entries are integers or `p/q`
//! fractions with positive `q`; `FLOAT` entries are decimal literals. The
//! matrix must be square, symmetric, nonnegative, and zero on the diagonal;
//! asymmetric input is rejected, never symmetrized.
//!
//! Tour files list the visiting order as whitespace-separated vertex
//! indices on a single line.
//!
//! In both formats blank lines and lines starting with `#` are ignored, so
//! generators can attach commentary such as vertex label maps. Writers never
//! emit comments, and `parse(write(x))` reproduces `x` bit-exactly.

use std::fmt;

use crate::instance::Instance;
use crate::tour::Tour;
use crate::weight::{BigRational, Weight};

/// A parsed instance in whichever mode the file declared.
#[derive(Clone, Debug)]
pub enum AnyInstance {
    Exact(Instance<BigRational>),
    Float(Instance<f64>),
}

impl AnyInstance {
    pub fn name(&self) -> &str {
        match self {
            AnyInstance::Exact(inst) => inst.name(),
            AnyInstance::Float(inst) => inst.name(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyInstance::Exact(inst) => inst.n(),
            AnyInstance::Float(inst) => inst.n(),
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            AnyInstance::Exact(_) => BigRational::MODE,
            AnyInstance::Float(_) => f64::MODE,
        }
    }
}

/// A parse failure with a 1-based line number; `line == 0` means the problem
/// is with the file as a whole (e.g. truncated input).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.msg)
        } else {
            write!(f, "line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        msg: msg.into(),
    })
}

/// Content lines with 1-based numbering; blanks and `#` comments skipped.
struct Cursor<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            lines: text.lines().enumerate(),
        }
    }

    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (idx, raw) in self.lines.by_ref() {
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Some((idx + 1, trimmed));
        }
        None
    }
}

fn expect_field<'a>(cur: &mut Cursor<'a>, key: &str) -> Result<(usize, &'a str), ParseError> {
    let (line, text) = match cur.next_content() {
        Some(found) => found,
        None => return err(0, format!("missing `{key}:` line")),
    };
    match text.strip_prefix(key).and_then(|rest| rest.strip_prefix(':')) {
        Some(value) => Ok((line, value.trim())),
        None => err(line, format!("expected `{key}:`, found `{text}`")),
    }
}

fn parse_header(cur: &mut Cursor<'_>) -> Result<(String, String, usize), ParseError> {
    let (name_line, name) = expect_field(cur, "NAME")?;
    if name.is_empty() {
        return err(name_line, "empty instance name");
    }
    let (_, mode) = expect_field(cur, "MODE")?;
    let (n_line, n_text) = expect_field(cur, "N")?;
    let n: usize = match n_text.parse() {
        Ok(n) => n,
        Err(_) => return err(n_line, format!("invalid vertex count `{n_text}`")),
    };
    if n < 3 {
        return err(n_line, format!("N is {n}, need at least 3"));
    }
    let (w_line, w_rest) = expect_field(cur, "WEIGHTS")?;
    if !w_rest.is_empty() {
        return err(w_line, format!("unexpected text after `WEIGHTS:`: `{w_rest}`"));
    }
    Ok((name.to_string(), mode.to_string(), n))
}

fn read_matrix<W: Weight>(
    cur: &mut Cursor<'_>,
    name: String,
    n: usize,
) -> Result<Instance<W>, ParseError> {
    let mut rows: Vec<Vec<W>> = Vec::with_capacity(n);
    let mut row_lines = Vec::with_capacity(n);
    for r in 0..n {
        let (line, text) = match cur.next_content() {
            Some(found) => found,
            None => return err(0, format!("missing weight row {r}: expected {n} rows")),
        };
        let entries: Vec<&str> = text.split_whitespace().collect();
        if entries.len() != n {
            return err(
                line,
                format!("row {r} has {} entries, expected {n}", entries.len()),
            );
        }
        let mut row = Vec::with_capacity(n);
        for (c, entry) in entries.iter().enumerate() {
            let w = match W::parse_entry(entry) {
                Ok(w) => w,
                Err(msg) => return err(line, format!("row {r} column {c}: {msg}")),
            };
            if w.is_negative() {
                return err(line, format!("negative weight at ({r}, {c})"));
            }
            row.push(w);
        }
        if !row[r].is_zero() {
            return err(line, format!("diagonal entry ({r}, {r}) must be 0"));
        }
        rows.push(row);
        row_lines.push(line);
    }
    if let Some((line, text)) = cur.next_content() {
        return err(line, format!("unexpected content after weight matrix: `{text}`"));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rows[i][j] != rows[j][i] {
                return err(
                    row_lines[j],
                    format!("asymmetric weights: entry ({j}, {i}) does not match ({i}, {j})"),
                );
            }
        }
    }
    Instance::from_rows(name, rows).map_err(|e| ParseError {
        line: 0,
        msg: e.to_string(),
    })
}

/// Parses an instance file, dispatching on its `MODE` line.
pub fn parse_instance(text: &str) -> Result<AnyInstance, ParseError> {
    let mut cur = Cursor::new(text);
    let (name, mode, n) = parse_header(&mut cur)?;
    match mode.as_str() {
        "EXACT" => Ok(AnyInstance::Exact(read_matrix(&mut cur, name, n)?)),
        "FLOAT" => Ok(AnyInstance::Float(read_matrix(&mut cur, name, n)?)),
        other => err(0, format!("MODE must be EXACT or FLOAT, found `{other}`")),
    }
}

/// Parses an instance file that must be in `W`'s mode.
pub fn parse_instance_as<W: Weight>(text: &str) -> Result<Instance<W>, ParseError> {
    let mut cur = Cursor::new(text);
    let (name, mode, n) = parse_header(&mut cur)?;
    if mode != W::MODE {
        return err(
            0,
            format!("instance is in {mode} mode, expected {}", W::MODE),
        );
    }
    read_matrix(&mut cur, name, n)
}

pub fn write_instance<W: Weight>(inst: &Instance<W>) -> String {
    let mut out = String::new();
    out.push_str(&format!("NAME: {}\n", inst.name()));
    out.push_str(&format!("MODE: {}\n", W::MODE));
    out.push_str(&format!("N: {}\n", inst.n()));
    out.push_str("WEIGHTS:\n");
    for i in 0..inst.n() {
        let row: Vec<String> = (0..inst.n())
            .map(|j| inst.weight(i, j).write_entry())
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a tour file: whitespace-separated vertex indices.
pub fn parse_tour(text: &str) -> Result<Tour, ParseError> {
    let mut values: Vec<(usize, usize)> = Vec::new();
    let mut cur = Cursor::new(text);
    while let Some((line, content)) = cur.next_content() {
        for token in content.split_whitespace() {
            let v: usize = match token.parse() {
                Ok(v) => v,
                Err(_) => return err(line, format!("invalid vertex index `{token}`")),
            };
            values.push((v, line));
        }
    }
    let n = values.len();
    if n < 3 {
        return err(0, format!("tour lists {n} vertices, need at least 3"));
    }
    let mut seen = vec![false; n];
    for &(v, line) in &values {
        if v >= n {
            return err(
                line,
                format!("vertex {v} out of range for a tour of {n} vertices"),
            );
        }
        if seen[v] {
            return err(line, format!("vertex {v} appears twice"));
        }
        seen[v] = true;
    }
    Tour::new(values.into_iter().map(|(v, _)| v).collect()).map_err(|e| ParseError {
        line: 0,
        msg: e.to_string(),
    })
}

pub fn write_tour(tour: &Tour) -> String {
    let mut out = tour
        .order()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXACT_FILE: &str = "NAME: tri\nMODE: EXACT\nN: 3\nWEIGHTS:\n0 1 3/2\n1 0 2\n3/2 2 0\n";

    #[test]
    fn exact_instance_round_trips() {
        let inst = match parse_instance(EXACT_FILE).unwrap() {
            AnyInstance::Exact(inst) => inst,
            AnyInstance::Float(_) => panic!("wrong mode"),
        };
        assert_eq!(inst.name(), "tri");
        assert_eq!(inst.n(), 3);
        assert_eq!(write_instance(&inst), EXACT_FILE);
        let again = parse_instance_as::<BigRational>(&write_instance(&inst)).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn float_instance_round_trips_bit_exactly() {
        let w = 2f64.sqrt();
        let inst = Instance::from_rows(
            "sq2",
            vec![
                vec![0.0, w, 0.1],
                vec![w, 0.0, 1.0 / 3.0],
                vec![0.1, 1.0 / 3.0, 0.0],
            ],
        )
        .unwrap();
        let text = write_instance(&inst);
        let again = parse_instance_as::<f64>(&text).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!("# generated\n\n{EXACT_FILE}# trailing note\n");
        assert!(parse_instance(&text).is_ok());
        let tour = parse_tour("# a tour\n2 0 1\n").unwrap();
        assert_eq!(tour.order(), &[2, 0, 1]);
    }

    #[test]
    fn asymmetry_is_rejected_not_symmetrized() {
        let text = "NAME: x\nMODE: FLOAT\nN: 3\nWEIGHTS:\n0 1 2\n1 0 1\n2.5 1 0\n";
        let e = parse_instance(text).unwrap_err();
        assert_eq!(e.line, 7);
        assert!(e.msg.contains("asymmetric"), "{}", e.msg);
    }

    #[test]
    fn header_errors_carry_line_numbers() {
        let no_mode = "NAME: x\nN: 3\n";
        let e = parse_instance(no_mode).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("MODE"), "{}", e.msg);

        let bad_mode = "NAME: x\nMODE: DOUBLE\nN: 3\nWEIGHTS:\n0 1 1\n1 0 1\n1 1 0\n";
        assert!(parse_instance(bad_mode).unwrap_err().msg.contains("DOUBLE"));

        let small = "NAME: x\nMODE: FLOAT\nN: 2\nWEIGHTS:\n0 1\n1 0\n";
        let e = parse_instance(small).unwrap_err();
        assert_eq!(e.line, 3);

        let short_row = "NAME: x\nMODE: FLOAT\nN: 3\nWEIGHTS:\n0 1\n1 0 1\n1 1 0\n";
        let e = parse_instance(short_row).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.msg.contains("expected 3"), "{}", e.msg);

        let truncated = "NAME: x\nMODE: FLOAT\nN: 3\nWEIGHTS:\n0 1 1\n1 0 1\n";
        assert_eq!(parse_instance(truncated).unwrap_err().line, 0);

        let negative = "NAME: x\nMODE: EXACT\nN: 3\nWEIGHTS:\n0 -1 1\n-1 0 1\n1 1 0\n";
        let e = parse_instance(negative).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.msg.contains("negative"), "{}", e.msg);
    }

    #[test]
    fn mode_mismatch_is_an_error() {
        let e = parse_instance_as::<f64>(EXACT_FILE).unwrap_err();
        assert!(e.msg.contains("EXACT"), "{}", e.msg);
    }

    #[test]
    fn tours_round_trip_and_validate() {
        let tour = Tour::new(vec![3, 1, 0, 2]).unwrap();
        assert_eq!(parse_tour(&write_tour(&tour)).unwrap(), tour);

        assert_eq!(parse_tour("0 1\n").unwrap_err().line, 0);
        assert_eq!(parse_tour("0 1 x\n").unwrap_err().line, 1);
        let e = parse_tour("0 1 5\n").unwrap_err();
        assert!(e.msg.contains("out of range"), "{}", e.msg);
        let e = parse_tour("0 1 1\n").unwrap_err();
        assert!(e.msg.contains("twice"), "{}", e.msg);
    }
}
