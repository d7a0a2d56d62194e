//! Run manifests and output writing.
//!
//! Every CSV output starts with a `# config:` comment carrying the run
//! manifest as canonical (key-sorted) JSON, so a result file can be traced
//! back to the exact invocation that produced it. Wall-clock duration goes
//! to stderr only: output bytes must depend on nothing but argv and seed.

use std::io::Write;

use serde::Serialize;

/// Header manifest: subcommand, seed (when the command takes one), artifact
/// version and the full subcommand configuration.
#[derive(Serialize)]
pub struct RunManifest<C: Serialize> {
    pub subcommand: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: &'static str,
    pub config: C,
}

impl<C: Serialize> RunManifest<C> {
    pub fn new(subcommand: &'static str, seed: Option<u64>, config: C) -> Self {
        Self {
            subcommand,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            config,
        }
    }

    /// The `# config: {...}` header line, newline-terminated.
    pub fn comment_line(&self) -> String {
        format!("# config: {}\n", canonical_json(self))
    }
}

/// Key-sorted single-line JSON (serde_json's Value keeps maps ordered).
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value)
        .expect("configs contain only serializable fields")
        .to_string()
}

/// Writes to a file, or to stdout when `out` is `-`.
pub fn write_output(out: &str, content: &str) -> std::io::Result<()> {
    if out == "-" {
        std::io::stdout().write_all(content.as_bytes())
    } else {
        std::fs::write(out, content)
    }
}
