//! Text formats for parity-check matrices.
//!
//! * alist: `n m`, `max_col_deg max_row_deg`, the `n` column degrees, the `m`
//!   row degrees, then one line of 1-based row indices per column and one line
//!   of 1-based column indices per row. Zero entries are padding and ignored.
//! * dense: one line per row of `0`/`1` characters; blank lines and `#`
//!   comments are skipped, whitespace inside a row is ignored.

use super::{BitMatrix, Gf2Error};

fn perr(line: usize, msg: impl Into<String>) -> Gf2Error {
    Gf2Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>, Gf2Error> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| perr(line, format!("expected an integer, found {t:?}")))
        })
        .collect()
}

/// Parses an alist document. Column and row lists must agree.
pub fn parse_alist(text: &str) -> Result<BitMatrix, Gf2Error> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut it = lines.iter();
    let mut next = |what: &str| -> Result<(usize, Vec<usize>), Gf2Error> {
        let &(ln, l) = it
            .next()
            .ok_or_else(|| perr(0, format!("unexpected end of input reading {what}")))?;
        Ok((ln, numbers(ln, l)?))
    };

    let (ln, header) = next("header")?;
    let [n, m] = header[..] else {
        return Err(perr(ln, "header must be `n m`"));
    };
    let (ln, maxes) = next("max degrees")?;
    if maxes.len() != 2 {
        return Err(perr(ln, "second line must hold two maximum degrees"));
    }
    let (ln, col_deg) = next("column degrees")?;
    if col_deg.len() != n {
        return Err(perr(ln, format!("expected {n} column degrees")));
    }
    let (ln, row_deg) = next("row degrees")?;
    if row_deg.len() != m {
        return Err(perr(ln, format!("expected {m} row degrees")));
    }

    let mut h = BitMatrix::zeros(m, n)?;
    for (c, &deg) in col_deg.iter().enumerate() {
        let (ln, idx) = next("column list")?;
        let idx: Vec<usize> = idx.into_iter().filter(|&i| i != 0).collect();
        if idx.len() != deg {
            return Err(perr(ln, format!("column {} lists {} rows, degree says {deg}", c + 1, idx.len())));
        }
        for r in idx {
            if r > m {
                return Err(perr(ln, format!("row index {r} out of range")));
            }
            h.set(r - 1, c, true);
        }
    }
    for (r, &deg) in row_deg.iter().enumerate() {
        let (ln, idx) = next("row list")?;
        let idx: Vec<usize> = idx.into_iter().filter(|&i| i != 0).collect();
        if idx.len() != deg {
            return Err(perr(ln, format!("row {} lists {} columns, degree says {deg}", r + 1, idx.len())));
        }
        for c in idx {
            if c > n || !h.get(r, c - 1) {
                return Err(perr(ln, format!("row {} entry {c} disagrees with column lists", r + 1)));
            }
        }
    }
    Ok(h)
}

/// Writes a matrix in alist format, zero-padding irregular lists.
pub fn write_alist(h: &BitMatrix) -> String {
    let (m, n) = (h.rows(), h.cols());
    let cols: Vec<Vec<usize>> = (0..n)
        .map(|c| (0..m).filter(|&r| h.get(r, c)).map(|r| r + 1).collect())
        .collect();
    let rows: Vec<Vec<usize>> = (0..m)
        .map(|r| h.row_support(r).into_iter().map(|c| c + 1).collect())
        .collect();
    let max_c = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_r = rows.iter().map(Vec::len).max().unwrap_or(0);
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let padded = |v: &[usize], width: usize| {
        let mut v = v.to_vec();
        v.resize(width.max(v.len()), 0);
        join(&v)
    };

    let mut out = format!("{n} {m}\n{max_c} {max_r}\n");
    out += &join(&cols.iter().map(Vec::len).collect::<Vec<_>>());
    out += "\n";
    out += &join(&rows.iter().map(Vec::len).collect::<Vec<_>>());
    out += "\n";
    for c in &cols {
        out += &padded(c, max_c);
        out += "\n";
    }
    for r in &rows {
        out += &padded(r, max_r);
        out += "\n";
    }
    out
}

/// Parses the dense `0`/`1` text format.
pub fn parse_dense(text: &str) -> Result<BitMatrix, Gf2Error> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(perr(i + 1, format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<bool>, _>>()?;
        rows.push(row);
    }
    BitMatrix::from_rows(&rows)
}

pub fn write_dense(h: &BitMatrix) -> String {
    let mut out = String::with_capacity(h.rows() * (h.cols() + 1));
    for r in 0..h.rows() {
        for c in 0..h.cols() {
            out.push(if h.get(r, c) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HAMMING_ALIST: &str = "7 3
3 4
1 1 2 1 2 2 3
4 4 4
3
2
2 3
1
1 3
1 2
1 2 3
4 5 6 7
2 3 6 7
1 3 5 7
";

    #[test]
    fn alist_parse_and_write() {
        let h = parse_alist(HAMMING_ALIST).unwrap();
        assert_eq!((h.rows(), h.cols()), (3, 7));
        assert_eq!(h.row_support(0), vec![3, 4, 5, 6]);
        assert_eq!(h.code_params().unwrap().dmin, Some(3));
        let again = parse_alist(&write_alist(&h)).unwrap();
        assert_eq!(again, h);
    }

    #[test]
    fn alist_inconsistent_rows() {
        let bad = HAMMING_ALIST.replace("4 5 6 7", "1 5 6 7");
        assert!(matches!(parse_alist(&bad), Err(Gf2Error::Parse { .. })));
    }

    #[test]
    fn alist_padding_ignored() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
        let h = parse_alist(text).unwrap();
        assert_eq!(write_dense(&h), "110\n011\n");
    }

    #[test]
    fn dense_round_trip() {
        let h = parse_dense("# spc\n1 1 1\n\n").unwrap();
        assert_eq!((h.rows(), h.cols()), (1, 3));
        assert_eq!(parse_dense(&write_dense(&h)).unwrap(), h);
        assert!(parse_dense("102").is_err());
        assert!(matches!(parse_dense("11\n1"), Err(Gf2Error::RaggedRows { .. })));
    }
}
