//! Spec documents, reports and the command dispatch behind the `odohk` binary.

mod oracles;
mod report;
mod spec_io;

use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

pub use oracles::{
    run_oracles, OraclePair, OracleReport, OracleStatus, CHAIN_COMPLEX, CHAIN_COMPLEX_ORACLE_LIMIT, COINVARIANTS,
    FIXED_POINTS, INVOLUTION_HOMOLOGY, INVOLUTION_ORACLE_LIMIT, ORACLE_SEED, RANDOM_TRANSVERSALS_PER_LEVEL,
    TRANSFER_ORACLE_LIMIT, TRANSFER_TRANSITIVITY, TRANSVERSAL_INDEPENDENCE,
};
pub use report::{
    ah_entries, default_ah_levels, probe_elements, run_report, Entry, FixedPointRow, FixedPointSection,
    InvariantReport, ReportOptions, DEFAULT_AH_LEVELS, DEFAULT_AH_MAX_COSETS, FIXED_POINT_DEPTH,
};
pub use spec_io::{parse_spec, parse_spec_with, serialize_spec, spec_to_json, SpecOverrides};

use crate::error::{Error, Result};
use crate::fullgroup::{ah_certificate, AhLevel};
use crate::ktheory::hk_compare;
use crate::odometer::{is_topologically_free, OdometerSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AhTarget {
    Level(usize),
    Colimit,
    /// The levels of the report options (or the defaults) and the colimit.
    All,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Invariants,
    HkCheck,
    AhCheck(AhTarget),
    Topfree,
    Oracles,
}

/// Outcome of a command: the document to print and whether an internal
/// invariant was found violated along the way.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub document: Value,
    pub invariant_violation: bool,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

/// Runs a command. Errors are returned only when the command as a whole
/// cannot answer (for example `hk-check` on a non-dihedral group).
pub fn execute(command: &Command, spec: &OdometerSpec, options: &ReportOptions) -> Result<Output> {
    let plain = |document| Output {
        document,
        invariant_violation: false,
    };
    match command {
        Command::Invariants => {
            let r = run_report(spec, options);
            Ok(Output {
                document: to_value(&r),
                invariant_violation: r.has_invariant_violation(),
            })
        }
        Command::HkCheck => Ok(plain(to_value(&hk_compare(spec)?))),
        Command::AhCheck(AhTarget::Level(i)) => Ok(plain(to_value(&ah_certificate(spec, AhLevel::Level(*i))?))),
        Command::AhCheck(AhTarget::Colimit) => Ok(plain(to_value(&ah_certificate(spec, AhLevel::Colimit)?))),
        Command::AhCheck(AhTarget::All) => {
            let levels = options.ah_levels.clone().unwrap_or_else(|| default_ah_levels(spec));
            let entries = ah_entries(spec, &levels);
            let violation = entries
                .iter()
                .any(|e| matches!(e.error(), Some(Error::InvariantViolation(_))));
            Ok(Output {
                document: to_value(&entries),
                invariant_violation: violation,
            })
        }
        Command::Topfree => Ok(plain(to_value(&is_topologically_free(spec, spec.depth())?))),
        Command::Oracles => Ok(plain(to_value(&run_oracles(spec, spec.depth())))),
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| x.is_number() || x.is_boolean() || x.as_str().is_some_and(|s| !s.contains(", "))) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write_text(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => writeln!(out, "{}{}: {}", pad, k, s).unwrap(),
                    None => {
                        writeln!(out, "{}{}:", pad, k).unwrap();
                        write_text(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => writeln!(out, "{}- {}", pad, s).unwrap(),
                    None => {
                        writeln!(out, "{}-", pad).unwrap();
                        write_text(out, x, indent + 1);
                    }
                }
            }
        }
        other => writeln!(out, "{}{}", pad, scalar(other).unwrap_or_default()).unwrap(),
    }
}

/// Renders a document as JSON or as indented `key: value` text.
pub fn render(document: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(document).expect("valid JSON value");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            write_text(&mut s, document, 0);
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odometer::GroupKind;

    #[test]
    fn text_rendering() {
        let v: Value = serde_json::from_str(r#"{"a":1,"b":{"c":[1,2]},"d":[{"e":"x"}],"f":["p, q"]}"#).unwrap();
        assert_eq!(render(&v, Format::Text), "a: 1\nb:\n  c: [1, 2]\nd:\n  -\n    e: x\nf:\n  - p, q\n");
    }

    #[test]
    fn hk_check_document() {
        let spec = OdometerSpec::geometric(GroupKind::Dihedral, 2, 2, 6).unwrap();
        let out = execute(&Command::HkCheck, &spec, &ReportOptions::default()).unwrap();
        assert_eq!(out.document["k0_vs_even"]["verdict"], "mismatch");
        assert_eq!(out.document["homology"]["3"], "Z_2");
        let z = OdometerSpec::geometric(GroupKind::Integers, 2, 2, 6).unwrap();
        assert!(execute(&Command::HkCheck, &z, &ReportOptions::default()).is_err());
    }
}
