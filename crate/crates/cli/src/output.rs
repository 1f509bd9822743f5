//! CSV assembly and the output sink.

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

/// Fixed scientific format with nine significant digits.
pub fn sci(v: f64) -> String {
    format!("{v:.8e}")
}

/// In-memory CSV table, written in one piece once a command has finished.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header).expect("writing to memory");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("writing to memory");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("writing to memory")
    }
}

/// Writes `bytes` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sci(2.25e11), "2.25000000e11");
        assert_eq!(sci(-1.0 / 3.0), "-3.33333333e-1");
    }

    #[test]
    fn table_uses_newline_terminator() {
        let mut t = Table::new(&["a", "b"]);
        t.row([sci(1.0), sci(2.0)]);
        let text = String::from_utf8(t.into_bytes()).unwrap();
        assert_eq!(text, "a,b\n1.00000000e0,2.00000000e0\n");
    }
}
