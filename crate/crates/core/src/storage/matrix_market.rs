//! Matrix Market coordinate files (`real`, `symmetric` or `skew-symmetric`).
//!
//! Files are 1-based; the store is 0-based. Output always lists the lower
//! triangle column by column.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{Permutation, SparseSymStore, SymmetryKind};
use crate::error::{IldlError, Result};

fn parse_err(line: usize, message: impl Into<String>) -> IldlError {
    IldlError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<SymmetryKind> {
    let words: Vec<String> = line.split_whitespace().map(|w| w.to_ascii_lowercase()).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" {
        return Err(parse_err(lineno, "expected '%%MatrixMarket matrix coordinate real <symmetry>'"));
    }
    if words[1] != "matrix" || words[2] != "coordinate" {
        return Err(parse_err(lineno, format!("unsupported object/format '{} {}'", words[1], words[2])));
    }
    if words[3] != "real" {
        return Err(parse_err(lineno, format!("unsupported field '{}', only 'real' is accepted", words[3])));
    }
    match words[4].as_str() {
        "symmetric" => Ok(SymmetryKind::Symmetric),
        "skew-symmetric" => Ok(SymmetryKind::Skew),
        other => Err(parse_err(lineno, format!("unsupported symmetry '{other}'"))),
    }
}

/// Reads a symmetric or skew-symmetric coordinate matrix.
pub fn load_matrix_market<R: BufRead>(reader: R) -> Result<SparseSymStore> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (lineno, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let kind = parse_header(&header?, lineno)?;

    let mut size: Option<(usize, usize)> = None;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen_line: std::collections::HashMap<(usize, usize), usize> = Default::default();
    let mut last_line = lineno;

    for (lineno, line) in lines {
        last_line = lineno;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "size line must hold 'rows cols nnz'"));
                }
                let nums: Vec<usize> = fields
                    .iter()
                    .map(|f| f.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| parse_err(lineno, format!("bad size line: {e}")))?;
                if nums[0] != nums[1] {
                    return Err(parse_err(lineno, format!("matrix must be square, got {}x{}", nums[0], nums[1])));
                }
                size = Some((nums[0], nums[2]));
                triplets.reserve(nums[2]);
            }
            Some((n, nnz)) => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "entry line must hold 'row col value'"));
                }
                if triplets.len() == nnz {
                    return Err(parse_err(lineno, format!("more than the declared {nnz} entries")));
                }
                let i: usize = fields[0]
                    .parse()
                    .map_err(|e| parse_err(lineno, format!("bad row index '{}': {e}", fields[0])))?;
                let j: usize = fields[1]
                    .parse()
                    .map_err(|e| parse_err(lineno, format!("bad column index '{}': {e}", fields[1])))?;
                let v: f64 = fields[2]
                    .parse()
                    .map_err(|e| parse_err(lineno, format!("bad value '{}': {e}", fields[2])))?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(parse_err(lineno, format!("index ({i}, {j}) out of range [1, {n}]")));
                }
                if !v.is_finite() {
                    return Err(parse_err(lineno, "non-finite value"));
                }
                if kind.is_skew() && i == j && v != 0.0 {
                    return Err(parse_err(lineno, format!("nonzero diagonal entry ({i}, {j}) in a skew-symmetric matrix")));
                }
                let key = if i >= j { (i, j) } else { (j, i) };
                if let Some(first) = seen_line.insert(key, lineno) {
                    return Err(parse_err(
                        lineno,
                        format!("duplicate entry ({i}, {j}), first given on line {first}"),
                    ));
                }
                triplets.push((i - 1, j - 1, v));
            }
        }
    }
    let (n, nnz) = size.ok_or_else(|| parse_err(last_line, "missing size line"))?;
    if triplets.len() != nnz {
        return Err(parse_err(last_line, format!("declared {nnz} entries, found {}", triplets.len())));
    }
    SparseSymStore::from_triplets(n, kind, triplets)
}

pub fn read_matrix_market_file(path: impl AsRef<Path>) -> Result<SparseSymStore> {
    let f = File::open(path)?;
    load_matrix_market(BufReader::new(f))
}

/// Writes the lower triangle in 1-based coordinate form. Values use the
/// shortest representation that reads back to the same bits.
pub fn write_matrix_market<W: Write>(store: &SparseSymStore, mut w: W) -> Result<()> {
    let label = match store.kind() {
        SymmetryKind::Symmetric => "symmetric",
        SymmetryKind::Skew => "skew-symmetric",
    };
    writeln!(w, "%%MatrixMarket matrix coordinate real {label}")?;
    writeln!(w, "{} {} {}", store.n(), store.n(), store.nnz_stored())?;
    for j in 0..store.n() {
        let (rows, vals) = store.column(j);
        let mut col: Vec<(usize, f64)> = rows.iter().copied().zip(vals.iter().copied()).collect();
        col.sort_by_key(|e| e.0);
        for (i, v) in col {
            writeln!(w, "{} {} {:?}", i + 1, j + 1, v)?;
        }
    }
    Ok(())
}

/// Writes a lower triangular matrix as a `general` coordinate file.
pub fn write_lower_general<W: Write>(n: usize, entries: &[(usize, usize, f64)], mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{n} {n} {}", entries.len())?;
    for &(i, j, v) in entries {
        writeln!(w, "{} {} {:?}", i + 1, j + 1, v)?;
    }
    Ok(())
}

/// One line of `n` whitespace-separated 1-based indices, `forward[new] + 1`.
pub fn write_permutation<W: Write>(perm: &Permutation, mut w: W) -> Result<()> {
    let line: Vec<String> = perm.forward().iter().map(|i| (i + 1).to_string()).collect();
    writeln!(w, "{}", line.join(" "))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str) -> Result<SparseSymStore> {
        load_matrix_market(s.as_bytes())
    }

    #[test]
    fn identity_file() {
        let s = load("%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 3\n1 1 1\n2 2 1\n3 3 1\n").unwrap();
        assert_eq!(s.n(), 3);
        for j in 0..3 {
            assert_eq!(s.column(j).0, &[j]);
        }
        assert!(s.sorted_hint());
    }

    #[test]
    fn skew_single_entry() {
        let s = load("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 2.0\n").unwrap();
        assert_eq!(s.kind(), SymmetryKind::Skew);
        assert_eq!(s.triplets(), vec![(1, 0, 2.0)]);
    }

    #[test]
    fn skew_rejects_nonzero_diagonal() {
        let e = load("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n1 1 1.0\n").unwrap_err();
        assert!(matches!(e, IldlError::Parse { line: 3, .. }), "{e}");
    }

    #[test]
    fn upper_entries_are_mirrored() {
        let s = load("%%MatrixMarket matrix coordinate real skew-symmetric\n3 3 1\n1 3 4.0\n").unwrap();
        assert_eq!(s.triplets(), vec![(2, 0, -4.0)]);
    }

    #[test]
    fn error_paths() {
        let cases = [
            ("%%MatrixMarket matrix coordinate complex symmetric\n1 1 1\n1 1 1 0\n", 1),
            ("%%MatrixMarket matrix array real symmetric\n1 1\n", 1),
            ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1.0\n", 3),
            ("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n2 1 1.0\n1 2 1.0\n", 4),
            ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 x 1.0\n", 3),
            ("garbage\n", 1),
        ];
        for (text, line) in cases {
            match load(text) {
                Err(IldlError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
        assert!(load("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1.0\n").is_err());
    }

    #[test]
    fn explicit_zeros_dropped() {
        let s = load("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 0.0\n2 1 3.0\n").unwrap();
        assert_eq!(s.nnz_stored(), 1);
    }

    proptest::proptest! {
        #[test]
        fn write_then_load_is_bitwise(vals in proptest::collection::vec(-1e300f64..1e300, 1..30), skew in proptest::bool::ANY) {
            let kind = if skew { SymmetryKind::Skew } else { SymmetryKind::Symmetric };
            let n = 9;
            let mut trip = Vec::new();
            let mut pos = 0usize;
            for (t, v) in vals.iter().enumerate() {
                pos = (pos + 7 + t) % (n * n);
                let (i, j) = (pos / n, pos % n);
                let (i, j) = if i >= j { (i, j) } else { (j, i) };
                if (kind.is_skew() && i == j) || *v == 0.0 || trip.iter().any(|&(a, b, _)| (a, b) == (i, j)) {
                    continue;
                }
                trip.push((i, j, *v));
            }
            let s = SparseSymStore::from_triplets(n, kind, trip).unwrap();
            let mut buf = Vec::new();
            write_matrix_market(&s, &mut buf).unwrap();
            let back = load_matrix_market(buf.as_slice()).unwrap();
            let bits = |s: &SparseSymStore| {
                let mut t: Vec<_> = s.triplets().into_iter().map(|(i, j, v)| (i, j, v.to_bits())).collect();
                t.sort();
                t
            };
            proptest::prop_assert_eq!(bits(&s), bits(&back));
            proptest::prop_assert_eq!(back.kind(), kind);
        }
    }
}
