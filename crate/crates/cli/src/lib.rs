//! `vison` command line and HTTP service.

pub mod commands;
pub mod server;

use std::path::Path;

use vison_core::discovery::snapshot_from_json;
use vison_core::Ontology;

pub const DEFAULT_BIND: &str = "127.0.0.1:8470";
pub const DEFAULT_SNAPSHOT: &str = "vison-snapshot.json";

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Catalog issues, query errors, unknown names, inconsistency.
    pub const INVALID: i32 = 1;
    /// I/O failures and unreadable snapshots.
    pub const IO: i32 = 2;
}

pub fn load_snapshot(path: &Path) -> Result<Ontology, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    snapshot_from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}
