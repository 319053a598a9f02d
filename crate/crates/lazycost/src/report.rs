//! The JSON report envelope shared by every subcommand.

use serde::Serialize;

/// Version of the report layout; bumped on incompatible changes.
pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Report<R: Serialize> {
    pub tool_version: &'static str,
    pub schema: u32,
    pub command: String,
    pub result: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl<R: Serialize> Report<R> {
    pub fn new(command: impl Into<String>, result: R, counterexample: Option<String>) -> Self {
        Report {
            tool_version: env!("CARGO_PKG_VERSION"),
            schema: SCHEMA,
            command: command.into(),
            result,
            counterexample,
        }
    }

    /// Pretty-printed JSON. Struct fields keep declaration order and maps
    /// are sorted, so equal reports print identically.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}
