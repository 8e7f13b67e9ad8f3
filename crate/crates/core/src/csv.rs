// Minimal CSV helpers for the flat, unquoted numeric artifacts this crate writes.

use std::str::FromStr;

use crate::error::{Error, Result};

/// Splits `text` into (1-based line number, fields) records, checking the header.
pub(crate) fn records<'a>(text: &'a str, header: &str) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == header => {}
        Some((_, h)) => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header {header:?}, found {h:?}"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing header".into(),
            })
        }
    }
    let width = header.split(',').count();
    let mut out = Vec::new();
    for (idx, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected {width} fields, found {}", fields.len()),
            });
        }
        out.push((idx + 1, fields));
    }
    Ok(out)
}

pub(crate) fn field<T: FromStr>(value: &str, line: usize, name: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {name}: {value:?}"),
    })
}
