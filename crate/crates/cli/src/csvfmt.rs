use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{CliError, CliResult};

/// 17 significant digits: enough to round-trip any `f64`.
pub fn cell(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn empty_or(v: Option<f64>) -> String {
    v.map(cell).unwrap_or_default()
}

/// Runs `f` on a buffered writer for `path`, or on standard output when
/// `path` is `None` or `-`.
pub fn with_output<F>(path: Option<&Path>, f: F) -> CliResult<()>
where
    F: FnOnce(Box<dyn Write>) -> CliResult<()>,
{
    match path {
        Some(p) if p != Path::new("-") => {
            let file = File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            f(Box::new(BufWriter::new(file)))
        }
        _ => f(Box::new(io::stdout().lock())),
    }
}
