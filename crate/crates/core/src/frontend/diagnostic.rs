use std::fmt;

use serde::Serialize;

use super::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: usize,
    pub col: usize,
    pub message: String,
    /// Stable identifier of the violated rule, e.g. `syntax` or `intra-step-cycle`.
    pub rule: &'static str,
}

impl Diagnostic {
    pub fn error(span: Span, rule: &'static str, message: impl Into<String>) -> Self {
        Self { severity: Severity::Error, line: span.line, col: span.col, message: message.into(), rule }
    }

    pub fn warning(span: Span, rule: &'static str, message: impl Into<String>) -> Self {
        Self { severity: Severity::Warning, line: span.line, col: span.col, message: message.into(), rule }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity: message`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{}:{}: {}: {}", self.line, self.col, self.severity, self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {} [{}]", self.line, self.col, self.severity, self.message, self.rule)
    }
}
