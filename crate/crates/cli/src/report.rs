//! The JSON run report and input bookkeeping.

use std::fs;
use std::path::Path;

use cubegirth::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
            Status::InputError => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub files: Vec<InputFile>,
    /// Hash of the argument vector and of every file read.
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub report_version: u32,
    pub subcommand: String,
    /// Arguments after the program name; replayed by `--verify-report`.
    pub argv: Vec<String>,
    pub inputs: Inputs,
    pub parameters: Value,
    pub outcome: Status,
    pub exit_code: i32,
    pub radius_consumed: Option<usize>,
    pub result: Value,
    pub error: Option<Value>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// What a subcommand produced.
pub struct Done {
    pub status: Status,
    pub result: Value,
    pub consumed: Option<usize>,
}

impl Done {
    pub fn new(status: Status, result: Value) -> Self {
        Done {
            status,
            result,
            consumed: None,
        }
    }

    pub fn consumed(mut self, r: usize) -> Self {
        self.consumed = Some(r);
        self
    }
}

/// A run that stopped early.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub error: Value,
    pub consumed: Option<usize>,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            status: Status::InputError,
            error: json!({ "kind": "input", "message": message.into() }),
            consumed: None,
        }
    }

    pub fn parse(path: &str, line: usize, column: usize, message: impl Into<String>) -> Self {
        Failure {
            status: Status::InputError,
            error: json!({ "kind": "parse", "file": path, "line": line, "column": column, "message": message.into() }),
            consumed: None,
        }
    }

    /// A library error; `path` names the file being parsed, if any.
    pub fn core(e: Error, path: Option<&str>) -> Self {
        let fail = |kind: &str, extra: Value| Failure {
            status: Status::Fail,
            error: json!({ "kind": kind, "message": e.to_string(), "detail": extra }),
            consumed: None,
        };
        match &e {
            Error::Parse { line, column, message } => Failure::parse(path.unwrap_or("-"), *line, *column, message.clone()),
            Error::Inconclusive { what, radius, needed } => Failure {
                status: Status::Inconclusive,
                error: json!({ "kind": "inconclusive", "what": what, "radius": radius, "needed": needed }),
                consumed: Some(*needed),
            },
            Error::NotMedian(a, b, c) => fail("not_median", json!({ "triple": [a, b, c] })),
            Error::Disconnected(a, b) => fail("disconnected", json!({ "pair": [a, b] })),
            Error::RepresentationInvalid(_) => fail("representation_invalid", Value::Null),
            Error::PocsetInvalid(_) => fail("pocset_invalid", Value::Null),
            Error::NotBijective(_) | Error::NotGenerating { .. } | Error::Invalid(_) => Failure::input(e.to_string()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::core(e, None)
    }
}

/// Reads input files and remembers their hashes.
#[derive(Default)]
pub struct Loader {
    pub files: Vec<InputFile>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl Loader {
    pub fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let name = path.display().to_string();
        let bytes = fs::read(path).map_err(|e| Failure::input(format!("cannot read `{name}`: {e}")))?;
        self.files.push(InputFile {
            path: name.clone(),
            sha256: hex(&Sha256::digest(&bytes)),
            bytes: bytes.len(),
        });
        String::from_utf8(bytes).map_err(|e| Failure::input(format!("`{name}` is not UTF-8: {e}")))
    }

    pub fn inputs(self, argv: &[String]) -> Inputs {
        let mut h = Sha256::new();
        for a in argv {
            h.update(a.as_bytes());
            h.update([0]);
        }
        for f in &self.files {
            h.update(f.sha256.as_bytes());
            h.update([0]);
        }
        Inputs {
            files: self.files,
            digest: hex(&h.finalize()),
        }
    }
}
