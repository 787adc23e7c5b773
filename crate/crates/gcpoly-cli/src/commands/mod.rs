//! The five verbs: batch mask polygonization, standalone simplification,
//! polygon-set evaluation, the DP-vs-brute-force oracle harness, and the
//! scaling benchmark.

pub mod bench;
pub mod evaluate;
pub mod oracle;
pub mod polygonize;
pub mod simplify;

use std::path::Path;

use crate::CliError;

/// Exit code for a clean run.
pub const EXIT_OK: i32 = 0;
/// Exit code for a property or oracle failure.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for unreadable or malformed inputs.
pub const EXIT_INPUT: i32 = 2;

/// Write `text` to `out`, or to stdout when no path is given.
pub(crate) fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
