//! Estimator configuration: every tunable constant — error budget, cycle
//! cost model, error-correction scheme constants, and preset parameter
//! fields — lives here with its default, and any of them can be
//! overridden from a flat `key = value` file.
//!
//! File format (shared with custom platform parameter files): one
//! `key = value` pair per line, `#` starts a comment, blank lines are
//! ignored. Keys are namespaced by dots:
//!
//! ```text
//! budget.total = 0.001            # total failure probability
//! budget.logical_share = 0.5
//! budget.distillation_share = 0.5
//! cost.t_per_toffoli = 4
//! cost.cycles_per_toffoli = 3
//! cost.cycles_per_measurement = 1
//! cost.distance_cap = 99
//! surface.crossing_prefactor = 0.03
//! floquet.round_measurements = 3
//! preset.gate_ns_e3.t_meas = 200e-9
//! ```
//!
//! Scheme keys accept every numeric field of the scheme model
//! (`error_threshold`, `crossing_prefactor`, `qubits_per_d2`,
//! `qubits_per_d`, `round_one_qubit_gates`, `round_two_qubit_gates`,
//! `round_measurements`). Preset keys accept every numeric field of the
//! platform parameters (`t_one_qubit`, `t_two_qubit`, `t_meas`,
//! `e_one_qubit`, `e_two_qubit`, `e_meas`, `t_inject_error`); an
//! override replaces the named field only. Unknown keys are errors.

use crate::error::{Error, Result};
use crate::platform::{self, QubitParams};
use crate::qec::{CostModel, ErrorBudget, QecScheme, SchemeKind};
use std::collections::BTreeMap;
use std::path::Path;

/// Parse flat `key = value` lines: `#` starts a comment (full-line or
/// trailing), blank lines are skipped. Returns `(line_number, key, value)`
/// triples with 1-based line numbers, preserving file order.
pub(crate) fn parse_kv_lines(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 'key = value', got '{}'", line),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty key or value".into(),
            });
        }
        out.push((line_no, key.to_string(), value.to_string()));
    }
    Ok(out)
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64> {
    value.parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("'{}' is not a number for key '{}'", value, key),
    })
}

fn parse_u64(line: usize, key: &str, value: &str) -> Result<u64> {
    value.parse::<u64>().map_err(|_| Error::Parse {
        line,
        message: format!("'{}' is not a nonnegative integer for key '{}'", value, key),
    })
}

const PARAM_FIELDS: [&str; 7] = [
    "t_one_qubit",
    "t_two_qubit",
    "t_meas",
    "e_one_qubit",
    "e_two_qubit",
    "e_meas",
    "t_inject_error",
];

fn set_param_field(params: &mut QubitParams, field: &str, value: f64) {
    match field {
        "t_one_qubit" => params.t_one_qubit = value,
        "t_two_qubit" => params.t_two_qubit = value,
        "t_meas" => params.t_meas = value,
        "e_one_qubit" => params.e_one_qubit = value,
        "e_two_qubit" => params.e_two_qubit = value,
        "e_meas" => params.e_meas = value,
        "t_inject_error" => params.t_inject_error = value,
        _ => unreachable!("field names validated at parse time"),
    }
}

fn set_scheme_field(scheme: &mut QecScheme, line: usize, field: &str, value: &str) -> Result<()> {
    match field {
        "error_threshold" => scheme.error_threshold = parse_f64(line, field, value)?,
        "crossing_prefactor" => scheme.crossing_prefactor = parse_f64(line, field, value)?,
        "qubits_per_d2" => scheme.qubits_per_d2 = parse_u64(line, field, value)?,
        "qubits_per_d" => scheme.qubits_per_d = parse_u64(line, field, value)?,
        "round_one_qubit_gates" => scheme.round_one_qubit_gates = parse_u64(line, field, value)?,
        "round_two_qubit_gates" => scheme.round_two_qubit_gates = parse_u64(line, field, value)?,
        "round_measurements" => scheme.round_measurements = parse_u64(line, field, value)?,
        _ => {
            return Err(Error::Parse {
                line,
                message: format!("unknown scheme field '{}'", field),
            })
        }
    }
    Ok(())
}

/// All estimator tunables with their defaults, plus any file overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    pub budget: ErrorBudget,
    pub cost: CostModel,
    pub surface: QecScheme,
    pub floquet: QecScheme,
    /// preset name → (field name → overridden value)
    preset_overrides: BTreeMap<String, BTreeMap<String, f64>>,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            budget: ErrorBudget::default(),
            cost: CostModel::default(),
            surface: QecScheme::surface(),
            floquet: QecScheme::floquet(),
            preset_overrides: BTreeMap::new(),
        }
    }
}

impl EstimatorConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut config = EstimatorConfig::default();
        for (line, key, value) in parse_kv_lines(text)? {
            config.apply(line, &key, &value)?;
        }
        config.validate()?;
        Ok(config)
    }

    fn apply(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        let mut parts = key.splitn(2, '.');
        let section = parts.next().unwrap_or("");
        let rest = parts.next().unwrap_or("");
        match section {
            "budget" => match rest {
                "total" => self.budget.total = parse_f64(line, key, value)?,
                "logical_share" => self.budget.logical_share = parse_f64(line, key, value)?,
                "distillation_share" => {
                    self.budget.distillation_share = parse_f64(line, key, value)?
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown budget key '{}'", key),
                    })
                }
            },
            "cost" => match rest {
                "t_per_toffoli" => self.cost.t_per_toffoli = parse_u64(line, key, value)?,
                "cycles_per_toffoli" => self.cost.cycles_per_toffoli = parse_u64(line, key, value)?,
                "cycles_per_measurement" => {
                    self.cost.cycles_per_measurement = parse_u64(line, key, value)?
                }
                "distance_cap" => {
                    self.cost.distance_cap =
                        parse_u64(line, key, value)?
                            .try_into()
                            .map_err(|_| Error::Parse {
                                line,
                                message: format!("'{}' is too large for '{}'", value, key),
                            })?
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown cost key '{}'", key),
                    })
                }
            },
            "surface" => set_scheme_field(&mut self.surface, line, rest, value)?,
            "floquet" => set_scheme_field(&mut self.floquet, line, rest, value)?,
            "preset" => {
                let Some((name, field)) = rest.split_once('.') else {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected 'preset.<name>.<field>', got '{}'", key),
                    });
                };
                // Fail early on unknown preset names and fields.
                platform::preset(name)?;
                if !PARAM_FIELDS.contains(&field) {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown preset field '{}'", field),
                    });
                }
                let value = parse_f64(line, key, value)?;
                self.preset_overrides
                    .entry(name.to_string())
                    .or_default()
                    .insert(field.to_string(), value);
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown configuration key '{}'", key),
                })
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        self.budget.validate()?;
        for scheme in [&self.surface, &self.floquet] {
            if !(scheme.error_threshold > 0.0 && scheme.error_threshold < 1.0) {
                return Err(Error::RangeViolation {
                    field: format!("{}.error_threshold", scheme.kind.name()),
                    value: scheme.error_threshold,
                    requirement: "a probability strictly between 0 and 1".into(),
                });
            }
            if !(scheme.crossing_prefactor > 0.0 && scheme.crossing_prefactor.is_finite()) {
                return Err(Error::RangeViolation {
                    field: format!("{}.crossing_prefactor", scheme.kind.name()),
                    value: scheme.crossing_prefactor,
                    requirement: "a positive finite number".into(),
                });
            }
        }
        if self.cost.distance_cap < 3 {
            return Err(Error::RangeViolation {
                field: "cost.distance_cap".into(),
                value: self.cost.distance_cap as f64,
                requirement: "at least 3".into(),
            });
        }
        // Overridden presets must still be valid parameter sets.
        for name in self.preset_overrides.keys() {
            self.preset(name)?;
        }
        Ok(())
    }

    /// The scheme constants for one code family, with overrides applied.
    pub fn scheme(&self, kind: SchemeKind) -> &QecScheme {
        match kind {
            SchemeKind::Surface => &self.surface,
            SchemeKind::Floquet => &self.floquet,
        }
    }

    /// Fetch a preset with this configuration's field overrides applied.
    pub fn preset(&self, name: &str) -> Result<QubitParams> {
        let mut params = platform::preset(name)?;
        if let Some(fields) = self.preset_overrides.get(name) {
            for (field, value) in fields {
                set_param_field(&mut params, field, *value);
            }
        }
        params.validate()?;
        Ok(params)
    }
}
