use serde_json::{json, Value};

/// Result of one command before formatting.
pub struct Output {
    pub input: Value,
    pub result: Value,
    pub text: String,
    pub warnings: Vec<String>,
    /// A self-consistency check failed; reported with exit code 3.
    pub failed: bool,
}

impl Output {
    pub fn new(input: Value, result: Value, text: String) -> Self {
        Self {
            input,
            result,
            text,
            warnings: Vec::new(),
            failed: false,
        }
    }

    pub fn warn(mut self, warning: impl Into<String>) -> Self {
        self.warnings.push(warning.into());
        self
    }
}

/// Stable JSON envelope: keys are sorted because `serde_json::Map` is a `BTreeMap`.
pub struct Report {
    value: Value,
}

impl Report {
    pub fn new(command: &str, output: Output) -> Self {
        Self {
            value: json!({
                "command": command,
                "input": output.input,
                "result": output.result,
                "warnings": output.warnings,
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.value).expect("values are always serializable") + "\n"
    }
}
