//! Scenario documents: JSON files checked against the scenario schema, or
//! built-in names.

use std::path::Path;

use itfleet_core::sim::{builtin_scenario, Scenario, BUILTIN_SCENARIOS};

use crate::error::{Error, Result};

/// JSON Schema for scenario files.
pub const SCENARIO_SCHEMA: &str = include_str!("../../../docs/scenario.schema.json");

/// Parses and validates a scenario document. Errors name the offending
/// path (`policy.V150.replacement`, ...) and, for syntax or type problems,
/// the line and column.
pub fn parse_scenario(text: &str, file: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let at = if path == "." { "document root".to_string() } else { path };
        Error::Document { file: file.into(), message: format!("{at}: {inner}") }
    })?;
    scenario.validate()?;
    Ok(scenario)
}

/// A built-in scenario name or a path to a scenario file.
pub fn load_scenario(spec: &str) -> Result<Scenario> {
    if let Some(s) = builtin_scenario(spec) {
        return Ok(s);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::Invalid(format!(
            "scenario '{spec}' is neither a file nor a built-in ({})",
            BUILTIN_SCENARIOS.join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
    parse_scenario(&text, spec)
}
