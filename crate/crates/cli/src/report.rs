//! Text and structured (JSON lines) output.
//!
//! Structured output always opens with a header record carrying the format
//! version and closes with a `result` record; everything in between is one
//! JSON object per line with a `record` field naming its kind.

use serde_json::{json, Value};

use commuter_core::rewrite::{ProofTrace, TraceStep};
use commuter_core::Signature;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok = 0,
    Failed = 1,
    Exhausted = 2,
    Usage = 3,
}

impl Outcome {
    pub fn status(self) -> &'static str {
        match self {
            Outcome::Ok => "ok",
            Outcome::Failed => "failed",
            Outcome::Exhausted => "exhausted",
            Outcome::Usage => "error",
        }
    }
}

pub struct Reporter {
    structured: bool,
    command: String,
}

impl Reporter {
    pub fn new(structured: bool, command: &str) -> Self {
        let r = Reporter {
            structured,
            command: command.to_string(),
        };
        r.record(json!({
            "record": "header",
            "tool": "commuter",
            "version": FORMAT_VERSION,
            "command": command,
        }));
        r
    }

    fn record(&self, v: Value) {
        if self.structured {
            println!("{v}");
        }
    }

    /// A human-readable line; suppressed in structured mode.
    pub fn line(&self, s: impl AsRef<str>) {
        if !self.structured {
            println!("{}", s.as_ref());
        }
    }

    pub fn emit(&self, kind: &str, mut fields: Value) {
        if let Value::Object(map) = &mut fields {
            map.insert("record".into(), Value::String(kind.into()));
        }
        self.record(fields);
    }

    /// Errors go to stderr in text mode and into the record stream otherwise.
    pub fn error(&self, kind: &str, message: &str, mut extra: Value) {
        if self.structured {
            if let Value::Object(map) = &mut extra {
                map.insert("kind".into(), Value::String(kind.into()));
                map.insert("message".into(), Value::String(message.into()));
            }
            self.emit("error", extra);
        } else {
            eprintln!("error: {message}");
        }
    }

    pub fn trace(&self, sig: &Signature, goal: &str, trace: &ProofTrace, replayed: bool) {
        self.line(format!(
            "goal {goal}: {} = {}",
            sig.render_diagram(&trace.start),
            sig.render_diagram(&trace.end)
        ));
        for (k, step) in trace.steps.iter().enumerate() {
            self.line(format!("  {}", step_line(k + 1, step)));
        }
        self.line(format!(
            "  {} step{}, replay {}",
            trace.steps.len(),
            if trace.steps.len() == 1 { "" } else { "s" },
            if replayed { "ok" } else { "FAILED" }
        ));
        self.emit(
            "trace",
            json!({
                "goal": goal,
                "lhs": sig.render_diagram(&trace.start),
                "rhs": sig.render_diagram(&trace.end),
                "steps": trace.steps.iter().map(step_record).collect::<Vec<_>>(),
                "replayed": replayed,
            }),
        );
    }

    pub fn finish(&self, outcome: Outcome, mut fields: Value) -> Outcome {
        if let Value::Object(map) = &mut fields {
            map.insert("command".into(), Value::String(self.command.clone()));
            map.insert("status".into(), Value::String(outcome.status().into()));
            map.insert("exit".into(), json!(outcome as u8));
        }
        self.emit("result", fields);
        outcome
    }
}

pub fn step_line(k: usize, step: &TraceStep) -> String {
    format!(
        "{k}. {} {} @ slices[{}..{}] whisker {}",
        step.rule, step.direction, step.at.start, step.at.end, step.at.left_whisker
    )
}

fn step_record(step: &TraceStep) -> Value {
    json!({
        "rule": step.rule,
        "direction": step.direction.as_str(),
        "linearization": step.at.linearization,
        "start": step.at.start,
        "end": step.at.end,
        "left_whisker": step.at.left_whisker,
        "right_whisker": step.at.right_whisker,
    })
}
