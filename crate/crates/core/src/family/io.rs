//! The `.ucf` family file format.
//!
//! ```text
//! n=4          (optional header)
//! {1,3,4}      (braces: one set per line, {} for the empty set)
//! 0011         (bitstring: character k from the left is element k)
//! ```
//!
//! A file uses one body format throughout. Blank lines are ignored.

use super::{GroundSet, SetFamily};
use crate::error::{Error, Result};
use crate::subset::Subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyFormat {
    Braces,
    Bitstring,
}

/// Parses a `.ucf` document, detecting the body format from the first set line.
pub fn parse_ucf(text: &str) -> Result<SetFamily> {
    let format = body_lines(text)?
        .1
        .first()
        .map(|(_, l)| {
            if l.starts_with('{') {
                FamilyFormat::Braces
            } else {
                FamilyFormat::Bitstring
            }
        })
        .ok_or_else(|| Error::parse(1, "no sets in input"))?;
    parse_family(text, format)
}

pub fn parse_family(text: &str, format: FamilyFormat) -> Result<SetFamily> {
    let (header, lines) = body_lines(text)?;
    if lines.is_empty() {
        return Err(Error::parse(
            header.map_or(1, |(no, _)| no + 1),
            "no sets in input",
        ));
    }
    match format {
        FamilyFormat::Braces => parse_braces(header.map(|(_, n)| n), &lines),
        FamilyFormat::Bitstring => parse_bitstrings(header, &lines),
    }
}

type NumberedLine<'a> = (usize, &'a str);

fn body_lines(text: &str) -> Result<(Option<(usize, usize)>, Vec<NumberedLine<'_>>)> {
    let mut header = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(v) = line.strip_prefix("n=") {
            if header.is_some() || !lines.is_empty() {
                return Err(Error::parse(i + 1, "header must precede all sets"));
            }
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad ground size {v:?}")))?;
            header = Some((i + 1, n));
            continue;
        }
        lines.push((i + 1, line));
    }
    Ok((header, lines))
}

fn parse_braces(header_n: Option<usize>, lines: &[NumberedLine<'_>]) -> Result<SetFamily> {
    let mut sets = Vec::with_capacity(lines.len());
    for &(no, line) in lines {
        let inner = line
            .strip_prefix('{')
            .and_then(|l| l.strip_suffix('}'))
            .ok_or_else(|| Error::parse(no, format!("expected {{...}}, got {line:?}")))?;
        let mut elems = Vec::new();
        if !inner.trim().is_empty() {
            for tok in inner.split(',') {
                let e: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(no, format!("bad element {tok:?}")))?;
                if e == 0 {
                    return Err(Error::domain(format!(
                        "line {no}: element 0 is outside the ground set (elements start at 1)"
                    )));
                }
                elems.push(e);
            }
        }
        sets.push((no, elems));
    }
    let max = sets.iter().flat_map(|(_, s)| s.iter().copied()).max();
    let n = match header_n {
        Some(n) => {
            if let Some((no, _)) = sets.iter().find(|(_, s)| s.iter().any(|&e| e > n)) {
                return Err(Error::domain(format!(
                    "line {no}: element outside the ground set [{n}]"
                )));
            }
            n
        }
        None => max.unwrap_or(1).max(1),
    };
    let ground = GroundSet::new(n)?;
    let members = sets
        .into_iter()
        .map(|(_, s)| Subset::from_elements(n, s).expect("checked"));
    SetFamily::new(ground, members)
}

fn parse_bitstrings(header: Option<(usize, usize)>, lines: &[NumberedLine<'_>]) -> Result<SetFamily> {
    let width = lines[0].1.len();
    if let Some((no, n)) = header {
        if n != width {
            return Err(Error::parse(
                no,
                format!("header n={n} disagrees with bitstring width {width}"),
            ));
        }
    }
    let ground = GroundSet::new(width)?;
    let mut members = Vec::with_capacity(lines.len());
    for &(no, line) in lines {
        if line.len() != width {
            return Err(Error::parse(
                no,
                format!("bitstring length {} differs from {width}", line.len()),
            ));
        }
        let mut s = Subset::empty(width);
        for (k, c) in line.chars().enumerate() {
            match c {
                '1' => s.insert(k + 1),
                '0' => {}
                _ => return Err(Error::parse(no, format!("unexpected character {c:?}"))),
            }
        }
        members.push(s);
    }
    SetFamily::new(ground, members)
}

impl SetFamily {
    /// Serializes with an `n=` header; `parse_ucf` inverts this exactly.
    pub fn to_ucf(&self, format: FamilyFormat) -> String {
        let n = self.n();
        let mut out = format!("n={n}\n");
        for s in self.members() {
            match format {
                FamilyFormat::Braces => out.push_str(&s.to_string()),
                FamilyFormat::Bitstring => {
                    out.extend((1..=n).map(|e| if s.contains(e) { '1' } else { '0' }))
                }
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bitstring_example() {
        let f = parse_family("0011\n1100\n1111", FamilyFormat::Bitstring).unwrap();
        let expect = SetFamily::from_sets(4, [vec![3, 4], vec![1, 2], vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(f, expect);
        assert!(f.is_union_closed());
    }

    #[test]
    fn empty_set_literal() {
        let f = parse_family("{}", FamilyFormat::Braces).unwrap();
        assert_eq!(f.len(), 1);
        assert!(f.members()[0].is_empty());
    }

    #[test]
    fn duplicates_removed() {
        let f = parse_family("{1}\n{2}\n{1}", FamilyFormat::Braces).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn malformed_line_reports_number() {
        let e = parse_ucf("{1}\n\n{2\n").unwrap_err();
        assert_eq!(e, Error::parse(3, "expected {...}, got \"{2\""));
        let e = parse_ucf("0011\n011\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_ucf("01a1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn out_of_range_is_domain_error() {
        assert!(matches!(parse_ucf("n=3\n{1,4}\n"), Err(Error::Domain(_))));
        assert!(matches!(parse_ucf("{0,1}\n"), Err(Error::Domain(_))));
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(parse_ucf(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_ucf("n=3\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn header_widens_ground() {
        let f = parse_ucf("n=6\n{1, 2}\n").unwrap();
        assert_eq!(f.n(), 6);
        assert_eq!(f.to_ucf(FamilyFormat::Braces), "n=6\n{1,2}\n");
        assert_eq!(f.to_ucf(FamilyFormat::Bitstring), "n=6\n110000\n");
    }

    proptest! {
        #[test]
        fn serialization_round_trips(n in 1usize..140, raw in prop::collection::vec(prop::collection::btree_set(1usize..140, 0..8), 1..20), bits in any::<bool>()) {
            let sets: Vec<Vec<usize>> = raw.into_iter().map(|s| s.into_iter().filter(|&e| e <= n).collect()).collect();
            let f = SetFamily::from_sets(n, sets).unwrap();
            let fmt = if bits { FamilyFormat::Bitstring } else { FamilyFormat::Braces };
            prop_assert_eq!(parse_ucf(&f.to_ucf(fmt)).unwrap(), f);
        }
    }
}
