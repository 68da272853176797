//! Metric files: `MetricAtVertices <N>`, then `N` lines `m11 m12 m22`, then
//! `End`. Values are written with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::tensor::{MetricTensor, SymMat2};
use crate::error::{Error, Result};

pub fn write_tensors<'a>(tensors: impl ExactSizeIterator<Item = &'a SymMat2>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "MetricAtVertices {}", tensors.len());
    for m in tensors {
        let _ = writeln!(s, "{:.16e} {:.16e} {:.16e}", m.a11, m.a12, m.a22);
    }
    s.push_str("End\n");
    s
}

pub fn write_metric(tensors: &[MetricTensor]) -> String {
    write_tensors(tensors.iter().map(MetricTensor::as_sym))
}

pub fn save_metric(tensors: &[MetricTensor], path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, write_metric(tensors))?;
    Ok(())
}

/// Parses the raw symmetric tensors of a metric file.
pub fn parse_tensors(text: &str, path: impl AsRef<Path>) -> Result<Vec<SymMat2>> {
    let path = path.as_ref();
    let err = |line: usize, msg: String| Error::Parse { path: PathBuf::from(path), line, msg };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (n, header) = lines.next().ok_or_else(|| err(1, "empty metric file".into()))?;
    let count: usize = header
        .strip_prefix("MetricAtVertices")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| err(n, format!("expected `MetricAtVertices <N>`, found `{header}`")))?;
    let mut out = Vec::with_capacity(count);
    let mut last = n;
    for _ in 0..count {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| err(last + 1, format!("expected {count} tensors, file ends early")))?;
        last = ln;
        let v: Vec<f64> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err(ln, format!("malformed tensor `{l}`")))?;
        if v.len() != 3 {
            return Err(err(ln, format!("tensor needs 3 components, found {}", v.len())));
        }
        out.push(SymMat2::new(v[0], v[1], v[2]));
    }
    match lines.next() {
        Some((_, "End")) => Ok(out),
        Some((ln, l)) => Err(err(ln, format!("expected `End`, found `{l}`"))),
        None => Err(err(last + 1, "missing `End`".into())),
    }
}

/// Parses a metric file and checks every tensor is SPD.
pub fn parse_metric(text: &str, path: impl AsRef<Path>) -> Result<Vec<MetricTensor>> {
    parse_tensors(text, path)?.into_iter().map(MetricTensor::try_from_sym).collect()
}

pub fn load_metric(path: impl AsRef<Path>) -> Result<Vec<MetricTensor>> {
    let path = path.as_ref();
    parse_metric(&fs::read_to_string(path)?, path)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn format_layout() {
        let s = write_metric(&[MetricTensor::IDENTITY]);
        assert_eq!(s, "MetricAtVertices 1\n1.0000000000000000e0 0.0000000000000000e0 1.0000000000000000e0\nEnd\n");
        assert!(parse_metric("MetricAtVertices 1\n1 2 1\nEnd\n", "m").is_err());
        assert!(matches!(parse_metric("MetricAtVertices 2\n1 0 1\nEnd\n", "m"), Err(Error::Parse { line: 3, .. })));
    }

    proptest! {
        #[test]
        fn round_trip_bit_exact(v in proptest::collection::vec((1e-6f64..1e9, -1.0f64..1.0, 1e-6f64..1e9), 1..20)) {
            let tensors: Vec<MetricTensor> = v
                .iter()
                .map(|&(a, r, c)| MetricTensor::new(a, r * 0.9 * (a * c).sqrt(), c).unwrap())
                .collect();
            let back = parse_metric(&write_metric(&tensors), "rt").unwrap();
            prop_assert_eq!(back, tensors);
        }
    }
}
