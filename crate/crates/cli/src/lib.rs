//! Batch front-end: JSON workspaces in, deterministic JSON reports out.

pub mod commands;
pub mod selftest;
pub mod workspace;

use anyhow::Result;
use qshape_core::{FieldSpec, PrimeField, Rationals};
use serde_json::{json, Value};

use commands::{Args, Report};
use workspace::{field_spec, parse_file, ParseError, Workspace};

/// Exit code for a negative mathematical verdict.
pub const EXIT_VERDICT_FALSE: i32 = 2;
pub const EXIT_ERROR: i32 = 1;

/// Loads the workspace text and runs a command on it.
pub fn run_on_text(command: &str, text: &str, args: &Args) -> Result<Report> {
    let file = parse_file(text)?;
    match field_spec(&file)? {
        FieldSpec::PrimeField(p) => {
            let ws = Workspace::load(file, PrimeField::new(p)?)?;
            commands::run(command, &ws, args)
        }
        FieldSpec::Rationals => {
            let ws = Workspace::load(file, Rationals)?;
            commands::run(command, &ws, args)
        }
    }
}

/// Error report; the margin is surfaced for insufficient windows.
pub fn error_json(e: &anyhow::Error) -> Value {
    if let Some(p) = e.downcast_ref::<ParseError>() {
        return json!({ "error": { "kind": "parse_error", "message": p.0 } });
    }
    if let Some(core) = e
        .chain()
        .find_map(|c| c.downcast_ref::<qshape_core::Error>())
    {
        if let qshape_core::Error::WindowInsufficient { object, needed } = core {
            return json!({ "error": {
                "kind": "window_insufficient",
                "object": object,
                "required_margin": needed,
                "message": format!("{e:#}"),
            }});
        }
    }
    json!({ "error": { "kind": "error", "message": format!("{e:#}") } })
}

/// Canonical serialisation: sorted keys, two-space indentation, newline.
pub fn emit(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}
