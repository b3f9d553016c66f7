//! The machine-readable report document. See `docs/report-schema.md`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use qpainleve::engine::Status;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DocStatus {
    Pass,
    Fail,
    Unsupported,
    Error,
}

impl DocStatus {
    pub fn exit_code(self, strict: bool) -> u8 {
        match self {
            DocStatus::Pass => 0,
            DocStatus::Fail => 1,
            DocStatus::Error => 2,
            DocStatus::Unsupported if strict => 3,
            DocStatus::Unsupported => 0,
        }
    }
}

#[derive(Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct TaskDescriptor {
    pub command: String,
    pub systems: Vec<String>,
    pub options: BTreeMap<String, Value>,
}

#[derive(Default, Serialize)]
pub struct Summary {
    pub tasks: usize,
    pub pass: usize,
    pub fail: usize,
    pub unsupported: usize,
}

impl Summary {
    pub fn count(&mut self, s: Status) {
        self.tasks += 1;
        match s {
            Status::Pass => self.pass += 1,
            Status::Fail => self.fail += 1,
            Status::Unsupported => self.unsupported += 1,
        }
    }

    pub fn status(&self) -> DocStatus {
        if self.fail > 0 {
            DocStatus::Fail
        } else if self.unsupported > 0 {
            DocStatus::Unsupported
        } else {
            DocStatus::Pass
        }
    }
}

#[derive(Default, Serialize)]
pub struct Timing {
    pub elapsed_ms: u64,
    /// Per task, keyed by task id.
    pub tasks: BTreeMap<String, u64>,
}

#[derive(Serialize)]
pub struct Document {
    pub schema_version: u32,
    pub tool: Tool,
    pub task: TaskDescriptor,
    pub status: DocStatus,
    pub exit_code: u8,
    pub summary: Summary,
    pub payload: Value,
    pub timing: Timing,
}

impl Document {
    pub fn new(task: TaskDescriptor) -> Document {
        Document {
            schema_version: SCHEMA_VERSION,
            tool: Tool {
                name: "qpainleve",
                version: env!("CARGO_PKG_VERSION"),
            },
            task,
            status: DocStatus::Pass,
            exit_code: 0,
            summary: Summary::default(),
            payload: Value::Object(Map::new()),
            timing: Timing::default(),
        }
    }

    /// Serializes a per-task report into `payload[key]`, moving its
    /// `elapsed_ms` into the timing section so the payload is reproducible.
    pub fn push(&mut self, key: &str, id: String, report: &impl Serialize) {
        let mut v = serde_json::to_value(report).expect("reports serialize");
        if let Some(ms) = v.as_object_mut().and_then(|o| o.remove("elapsed_ms")) {
            self.timing.tasks.insert(id, ms.as_u64().unwrap_or(0));
        }
        let payload = self.payload.as_object_mut().expect("payload is an object");
        match payload
            .entry(key)
            .or_insert_with(|| Value::Array(Vec::new()))
        {
            Value::Array(a) => a.push(v),
            _ => unreachable!("payload entries are arrays"),
        }
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.payload
            .as_object_mut()
            .expect("payload is an object")
            .insert(key.to_string(), v);
    }

    pub fn finish(&mut self, strict: bool) {
        if self.status != DocStatus::Error {
            self.status = self.summary.status();
        }
        self.exit_code = self.status.exit_code(strict);
    }
}
