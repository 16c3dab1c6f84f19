//! Qubit-platform parameter presets and custom parameter-file ingestion.
//!
//! Six presets ship, two per hardware platform (one realistic, one
//! optimistic):
//!
//! | name        | platform        | gate times | meas time | error rates |
//! |-------------|-----------------|-----------:|----------:|------------:|
//! | gate_ns_e3  | superconducting | 50 ns      | 100 ns    | 1e-3        |
//! | gate_ns_e4  | superconducting | 50 ns      | 100 ns    | 1e-4        |
//! | gate_us_e3  | trapped-ion     | 100 µs     | 100 µs    | 1e-3        |
//! | gate_us_e4  | trapped-ion     | 100 µs     | 100 µs    | 1e-4        |
//! | maj_ns_e4   | Majorana        | 100 ns     | 100 ns    | 1e-4        |
//! | maj_ns_e6   | Majorana        | 100 ns     | 100 ns    | 1e-6        |
//!
//! The error suffix applies to one-qubit, two-qubit, and measurement
//! error rates alike. T-state injection error defaults to the two-qubit
//! error on gate-based platforms and the measurement error on Majorana
//! platforms. Every value is configuration, not code: a parameter file or
//! config override reproducing a preset's numbers behaves identically.

use crate::config::parse_kv_lines;
use crate::error::{Error, Result};
use crate::qec::SchemeKind;
use std::path::Path;

/// Hardware family, which determines scheme compatibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    GateBased,
    Majorana,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::GateBased => "gate_based",
            Family::Majorana => "majorana",
        }
    }
}

/// Physical qubit parameters: operation times in seconds, error
/// probabilities per operation.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitParams {
    pub name: String,
    pub t_one_qubit: f64,
    pub t_two_qubit: f64,
    pub t_meas: f64,
    pub e_one_qubit: f64,
    pub e_two_qubit: f64,
    pub e_meas: f64,
    /// Error rate of a raw injected T state before distillation.
    pub t_inject_error: f64,
    pub family: Family,
}

impl QubitParams {
    pub fn validate(&self) -> Result<()> {
        let times = [
            ("t_one_qubit", self.t_one_qubit),
            ("t_two_qubit", self.t_two_qubit),
            ("t_meas", self.t_meas),
        ];
        for (field, value) in times {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::RangeViolation {
                    field: field.into(),
                    value,
                    requirement: "a positive time in seconds".into(),
                });
            }
        }
        let probs = [
            ("e_one_qubit", self.e_one_qubit),
            ("e_two_qubit", self.e_two_qubit),
            ("e_meas", self.e_meas),
            ("t_inject_error", self.t_inject_error),
        ];
        for (field, value) in probs {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::RangeViolation {
                    field: field.into(),
                    value,
                    requirement: "a probability strictly between 0 and 1".into(),
                });
            }
        }
        Ok(())
    }

    /// The scheme used when the caller does not pick one explicitly.
    pub fn default_scheme(&self) -> SchemeKind {
        match self.family {
            Family::Majorana => SchemeKind::Floquet,
            Family::GateBased => SchemeKind::Surface,
        }
    }

    /// Schemes this platform can run.
    pub fn compatible_schemes(&self) -> &'static [SchemeKind] {
        match self.family {
            Family::Majorana => &[SchemeKind::Surface, SchemeKind::Floquet],
            Family::GateBased => &[SchemeKind::Surface],
        }
    }

    /// Human-readable platform label.
    pub fn platform_label(&self) -> &'static str {
        if self.name.starts_with("gate_ns") {
            "superconducting"
        } else if self.name.starts_with("gate_us") {
            "trapped-ion"
        } else if self.name.starts_with("maj_") {
            "Majorana"
        } else {
            "custom"
        }
    }
}

/// The six preset names, in canonical order.
pub const PRESET_NAMES: [&str; 6] = [
    "gate_ns_e3",
    "gate_ns_e4",
    "gate_us_e3",
    "gate_us_e4",
    "maj_ns_e4",
    "maj_ns_e6",
];

fn gate_based(name: &str, t_gate: f64, t_meas: f64, e: f64) -> QubitParams {
    QubitParams {
        name: name.into(),
        t_one_qubit: t_gate,
        t_two_qubit: t_gate,
        t_meas,
        e_one_qubit: e,
        e_two_qubit: e,
        e_meas: e,
        t_inject_error: e, // = e_two_qubit
        family: Family::GateBased,
    }
}

fn majorana(name: &str, t_op: f64, e: f64) -> QubitParams {
    QubitParams {
        name: name.into(),
        t_one_qubit: t_op,
        t_two_qubit: t_op,
        t_meas: t_op,
        e_one_qubit: e,
        e_two_qubit: e,
        e_meas: e,
        t_inject_error: e, // = e_meas
        family: Family::Majorana,
    }
}

/// Fetch a preset by name.
pub fn preset(name: &str) -> Result<QubitParams> {
    match name {
        "gate_ns_e3" => Ok(gate_based("gate_ns_e3", 50e-9, 100e-9, 1e-3)),
        "gate_ns_e4" => Ok(gate_based("gate_ns_e4", 50e-9, 100e-9, 1e-4)),
        "gate_us_e3" => Ok(gate_based("gate_us_e3", 100e-6, 100e-6, 1e-3)),
        "gate_us_e4" => Ok(gate_based("gate_us_e4", 100e-6, 100e-6, 1e-4)),
        "maj_ns_e4" => Ok(majorana("maj_ns_e4", 100e-9, 1e-4)),
        "maj_ns_e6" => Ok(majorana("maj_ns_e6", 100e-9, 1e-6)),
        _ => Err(Error::UnknownPreset {
            name: name.into(),
            valid: PRESET_NAMES.join(", "),
        }),
    }
}

/// All six presets in canonical order.
pub fn list_presets() -> Vec<QubitParams> {
    PRESET_NAMES
        .iter()
        .map(|n| preset(n).expect("preset names are valid"))
        .collect()
}

/// Parse a custom parameter file: one `key = value` per line, `#`
/// comments, keys matching the field names, times in seconds. `family`
/// (gate_based | majorana) defaults to gate_based; `t_inject_error`
/// defaults by the family rule; `name` defaults to "custom".
pub fn load_params(path: &Path) -> Result<QubitParams> {
    let text = std::fs::read_to_string(path)?;
    params_from_str(&text)
}

pub fn params_from_str(text: &str) -> Result<QubitParams> {
    let mut name: Option<String> = None;
    let mut family: Option<Family> = None;
    let mut fields: [(&str, Option<f64>); 7] = [
        ("t_one_qubit", None),
        ("t_two_qubit", None),
        ("t_meas", None),
        ("e_one_qubit", None),
        ("e_two_qubit", None),
        ("e_meas", None),
        ("t_inject_error", None),
    ];

    for (line_no, key, value) in parse_kv_lines(text)? {
        match key.as_str() {
            "name" => name = Some(value),
            "family" => {
                family = Some(match value.as_str() {
                    "gate_based" => Family::GateBased,
                    "majorana" => Family::Majorana,
                    other => {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!(
                                "unknown family '{}' (expected gate_based or majorana)",
                                other
                            ),
                        })
                    }
                })
            }
            k => {
                let slot = fields.iter_mut().find(|(n, _)| *n == k);
                match slot {
                    Some((_, v)) => {
                        *v = Some(value.parse::<f64>().map_err(|_| Error::Parse {
                            line: line_no,
                            message: format!("'{}' is not a number for key '{}'", value, k),
                        })?)
                    }
                    None => {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("unknown parameter key '{}'", k),
                        })
                    }
                }
            }
        }
    }

    let take = |key: &str| -> Result<f64> {
        fields
            .iter()
            .find(|(n, _)| *n == key)
            .and_then(|(_, v)| *v)
            .ok_or_else(|| Error::MissingField(key.into()))
    };

    let family = family.unwrap_or(Family::GateBased);
    let e_two_qubit = take("e_two_qubit")?;
    let e_meas = take("e_meas")?;
    let t_inject_default = match family {
        Family::GateBased => e_two_qubit,
        Family::Majorana => e_meas,
    };
    let params = QubitParams {
        name: name.unwrap_or_else(|| "custom".into()),
        t_one_qubit: take("t_one_qubit")?,
        t_two_qubit: take("t_two_qubit")?,
        t_meas: take("t_meas")?,
        e_one_qubit: take("e_one_qubit")?,
        e_two_qubit,
        e_meas,
        t_inject_error: fields
            .iter()
            .find(|(n, _)| *n == "t_inject_error")
            .and_then(|(_, v)| *v)
            .unwrap_or(t_inject_default),
        family,
    };
    params.validate()?;
    Ok(params)
}
