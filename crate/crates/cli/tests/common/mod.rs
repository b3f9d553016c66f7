#![allow(dead_code)]

use std::process::{Command, Output};

use serde_json::Value;

pub fn qpainleve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpainleve"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// The JSON document of `args` with its timing section removed.
pub fn document(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = qpainleve(&full);
    let mut v: Value = serde_json::from_slice(&o.stdout).expect("json document");
    v.as_object_mut().unwrap().remove("timing");
    (code(&o), v)
}
