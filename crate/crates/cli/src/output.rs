//! Output plumbing: error-to-exit-code mapping, metadata headers, and
//! deterministic file writers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// CLI failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 2: malformed or invalid configuration.
    Schema(String),
    /// Exit code 3: the computation itself failed.
    Compute(String),
    /// Exit code 4: filesystem failure.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Compute(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Schema(m) | CliError::Compute(m) | CliError::Io(m) => m,
        }
    }
}

impl From<cavitylattice_core::Error> for CliError {
    fn from(e: cavitylattice_core::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Run metadata stamped into every artifact: no timestamps, so identical
/// configs produce byte-identical files.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub config_sha256: String,
}

impl Meta {
    pub fn new(subcommand: &str, raw_config: &[u8]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(raw_config);
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            write!(hex, "{byte:02x}").unwrap();
        }
        Self {
            tool: "cavitylattice".into(),
            version: TOOL_VERSION.into(),
            subcommand: subcommand.into(),
            config_sha256: hex,
        }
    }

    /// `#`-prefixed header lines for CSV artifacts.
    pub fn csv_header(&self) -> String {
        format!(
            "# tool: {} v{}\n# subcommand: {}\n# config-sha256: {}\n",
            self.tool, self.version, self.subcommand, self.config_sha256
        )
    }
}

/// Output sink rooted at the `--out` directory.
pub struct Sink {
    dir: PathBuf,
    meta: Meta,
}

impl Sink {
    pub fn new(dir: &Path, meta: Meta) -> CliResult<Self> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            meta,
        })
    }

    fn write(&self, name: &str, contents: &str) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }

    /// CSV with the metadata header followed by a column-name row.
    pub fn write_csv(&self, name: &str, columns: &str, rows: &[String]) -> CliResult<PathBuf> {
        let mut body = self.meta.csv_header();
        body.push_str(columns);
        body.push('\n');
        for row in rows {
            body.push_str(row);
            body.push('\n');
        }
        self.write(name, &body)
    }

    /// JSON artifact of the form `{"meta": ..., "data": ...}`.
    pub fn write_json<T: Serialize>(&self, name: &str, data: &T) -> CliResult<PathBuf> {
        #[derive(Serialize)]
        struct Artifact<'a, T> {
            meta: &'a Meta,
            data: &'a T,
        }
        let body = serde_json::to_string_pretty(&Artifact {
            meta: &self.meta,
            data,
        })
        .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?;
        self.write(name, &format!("{body}\n"))
    }

    /// The input configuration after default expansion, under the `config`
    /// key so consumers can diff it against their input.
    pub fn write_resolved_config<T: Serialize>(&self, config: &T) -> CliResult<PathBuf> {
        #[derive(Serialize)]
        struct Resolved<'a, T> {
            meta: &'a Meta,
            config: &'a T,
        }
        let body = serde_json::to_string_pretty(&Resolved {
            meta: &self.meta,
            config,
        })
        .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?;
        self.write("resolved_config.json", &format!("{body}\n"))
    }
}
