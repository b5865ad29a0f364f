//! OEIS b-files: one `<index> <value>` pair per line, `#` comments.

use std::io::BufRead;

use num_bigint::BigUint;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BTerm {
    pub index: i64,
    pub value: BigUint,
}

pub fn parse_bfile<R: BufRead>(reader: R) -> Result<Vec<BTerm>> {
    let mut terms = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(idx), Some(val), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(lineno, "expected `<index> <value>`"));
        };
        let index: i64 = idx
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad index `{idx}`")))?;
        let value = BigUint::parse_bytes(val.as_bytes(), 10)
            .filter(|_| val.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| Error::parse(lineno, format!("bad value `{val}`")))?;
        if terms.last().is_some_and(|t: &BTerm| t.index >= index) {
            return Err(Error::parse(lineno, "indices must increase"));
        }
        terms.push(BTerm { index, value });
    }
    Ok(terms)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub index: i64,
    pub expected: String,
    pub generated: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub requested: usize,
    pub compared: usize,
    pub first_mismatch: Option<Mismatch>,
    /// Fewer terms than requested were available on one side.
    pub truncated: bool,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares the first `count` b-file terms, in file order, against
/// `generated`.
pub fn compare(bfile: &[BTerm], generated: &[BigUint], count: usize) -> Comparison {
    let compared = count.min(bfile.len()).min(generated.len());
    let first_mismatch = bfile
        .iter()
        .zip(generated)
        .take(compared)
        .find(|(b, g)| &b.value != *g)
        .map(|(b, g)| Mismatch {
            index: b.index,
            expected: b.value.to_string(),
            generated: g.to_string(),
        });
    Comparison {
        requested: count,
        compared,
        first_mismatch,
        truncated: compared < count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn parses_with_comments() {
        let text = "# A060735\n\n1 2\n2 4\n3 6\n";
        let t = parse_bfile(text.as_bytes()).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[2].index, 3);
        let huge = "1 123456789012345678901234567890\n";
        assert_eq!(
            parse_bfile(huge.as_bytes()).unwrap()[0].value.to_string(),
            "123456789012345678901234567890"
        );
    }

    #[test]
    fn malformed_lines_name_their_number() {
        for (text, line) in [
            ("1 2\n2\n", 2),
            ("1 2\nx 4\n", 2),
            ("# c\n1 -3\n", 2),
            ("1 2\n1 4\n", 2),
        ] {
            match parse_bfile(text.as_bytes()) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn agreement_and_mismatch() {
        let good = parse_bfile("1 2\n2 4\n3 6\n".as_bytes()).unwrap();
        let gen = big(&[2, 4, 6, 12]);
        let c = compare(&good, &gen, 3);
        assert!(c.agrees() && !c.truncated && c.compared == 3);

        let bad = parse_bfile("1 2\n2 4\n3 7\n".as_bytes()).unwrap();
        let c = compare(&bad, &gen, 3);
        assert_eq!(c.first_mismatch.unwrap().index, 3);

        let c = compare(&good, &gen, 10);
        assert!(c.truncated);
        assert_eq!(c.compared, 3);
    }
}
