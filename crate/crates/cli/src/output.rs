//! CSV writing with shortest round-trip float formatting.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::CliError;

/// Shortest representation that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

/// Value rounded to ten decimals for console summaries, trailing zeros dropped.
pub fn short(v: f64) -> String {
    let s = format!("{v:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

/// Write `header` and `rows` to `path`, or to `fallback` when `path` is `None`.
pub fn write_table(
    path: Option<&Path>,
    fallback: &mut dyn Write,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = csv_writer(BufWriter::new(f));
            emit(&mut w, header, rows)?;
            w.flush().map_err(|e| CliError::io(p, e))
        }
        None => {
            let mut w = csv_writer(fallback);
            emit(&mut w, header, rows)?;
            w.flush().map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn emit<W: Write>(w: &mut csv::Writer<W>, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_trims_noise() {
        assert_eq!(short(-0.5000000000000004), "-0.5");
        assert_eq!(short(-0.7499999999999999), "-0.75");
        assert_eq!(short(2.0), "2");
        assert_eq!(short(-1e-17), "0");
        assert_eq!(short(0.123456789012), "0.123456789");
    }

    #[test]
    fn round_trip_format() {
        for v in [0.1, 1.0, -2.5e-17, 1.0 / 3.0, 123456789.125, 1e300] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(0.1), "0.1");
    }

    #[test]
    fn lf_terminated() {
        let mut buf = Vec::new();
        write_table(None, &mut buf, &["a", "b"], &[vec!["1".into(), "2".into()]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,2\n");
    }
}
