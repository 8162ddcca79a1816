//! Report emission helpers: deterministic float formatting and atomic file
//! writes.

use std::fs;
use std::io;
use std::path::Path;

/// Formats with 17 significant digits, enough to reparse the exact bit
/// pattern, so identical runs emit identical bytes.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Joins one CSV row (no quoting needed; fields are numeric or plain words).
pub fn csv_row(fields: &[String]) -> String {
    fields.join(",")
}

/// Writes via a temp file in the destination directory, then renames, so a
/// report path never holds a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}
