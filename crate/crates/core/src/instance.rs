//! Plain-text instance files: a header line `m n`, then `m` lines of `n`
//! whitespace-separated integers. Blank lines and `#` comments are ignored.

use crate::error::{Result, TropError};
use crate::matrix::{TropMatrix, MAX_ENTRY};

fn parse_err(line: usize, message: impl Into<String>) -> TropError {
    TropError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<TropMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `m n` header"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [m, n] = dims[..] else {
        return Err(parse_err(hline, "header must be exactly `m n`"));
    };
    let parse_dim = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(parse_err(hline, format!("invalid dimension `{s}`"))),
        }
    };
    let (m, n) = (parse_dim(m)?, parse_dim(n)?);

    let mut data = Vec::with_capacity(m.saturating_mul(n).min(1 << 20));
    let mut seen = 0;
    let mut last_line = hline;
    for (lineno, line) in lines {
        last_line = lineno;
        if seen == m {
            return Err(parse_err(lineno, format!("expected {m} rows, found more")));
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("invalid integer `{tok}`")))?;
            if v.unsigned_abs() > MAX_ENTRY as u64 {
                return Err(parse_err(
                    lineno,
                    format!("entry {v} exceeds the magnitude cap of {MAX_ENTRY}"),
                ));
            }
            data.push(v);
        }
        if data.len() - before != n {
            return Err(parse_err(
                lineno,
                format!("expected {n} entries, found {}", data.len() - before),
            ));
        }
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(
            last_line,
            format!("expected {m} rows, found {seen}"),
        ));
    }
    TropMatrix::new(m, n, data).map_err(|e| parse_err(0, e.to_string()))
}

pub fn emit_instance(a: &TropMatrix) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for row in a.row_iter() {
        let line: Vec<String> = row.iter().map(i64::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
