//! Deterministic table rendering. The CSV layout is a stable contract:
//! fixed header, `\n` line endings, runtime in scientific notation with
//! six significant digits, empty `error` column on success. Repeated
//! identical runs must produce byte-identical output, so nothing here
//! depends on timestamps, hash order, or locale.

use serde::Serialize;

/// One estimation result (or per-cell failure) of a sweep grid.
///
/// Fields that require a successful physical estimate are `Option`s: a
/// cell whose model stage fails still reports its circuit-level counts,
/// leaves the physical columns empty, and carries the diagnostic in
/// `error`.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub algorithm: String,
    pub n: u32,
    pub mode: String,
    pub platform: String,
    pub code: String,
    pub logical_qubits_alg: u64,
    pub logical_qubits_total: Option<u64>,
    pub toffoli: u64,
    pub t_states: u64,
    pub measurements: u64,
    pub code_distance: Option<u32>,
    pub phys_per_logical: Option<u64>,
    pub tfactories: Option<u64>,
    pub tfactory_qubits: Option<u64>,
    pub physical_qubits: Option<u64>,
    pub logical_cycles: u64,
    pub runtime_seconds: Option<f64>,
    pub error: Option<String>,
}

pub const CSV_HEADER: &str = "algorithm,n,mode,platform,code,logical_qubits_alg,logical_qubits_total,toffoli,t_states,measurements,code_distance,phys_per_logical,tfactories,tfactory_qubits,physical_qubits,logical_cycles,runtime_seconds,error";

/// Scientific notation with six significant digits, e.g. `1.08000e-3`.
pub fn format_runtime(seconds: f64) -> String {
    format!("{:.5e}", seconds)
}

/// Error messages may contain commas and newlines; the CSV cell must not.
fn sanitize(message: &str) -> String {
    message.replace(',', ";").replace(['\n', '\r'], " ")
}

fn opt<T: ToString>(value: &Option<T>) -> String {
    value.as_ref().map(T::to_string).unwrap_or_default()
}

impl Row {
    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.n,
            self.mode,
            self.platform,
            self.code,
            self.logical_qubits_alg,
            opt(&self.logical_qubits_total),
            self.toffoli,
            self.t_states,
            self.measurements,
            opt(&self.code_distance),
            opt(&self.phys_per_logical),
            opt(&self.tfactories),
            opt(&self.tfactory_qubits),
            opt(&self.physical_qubits),
            self.logical_cycles,
            self.runtime_seconds
                .map(format_runtime)
                .unwrap_or_default(),
            self.error.as_deref().map(sanitize).unwrap_or_default(),
        )
    }
}

/// Fixed output order: algorithm name, then bit-size, then platform name.
pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        (a.algorithm.as_str(), a.n, a.platform.as_str())
            .cmp(&(b.algorithm.as_str(), b.n, b.platform.as_str()))
    });
}

pub fn write_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(128 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

pub fn write_json(rows: &[Row]) -> String {
    let mut out = serde_json::to_string_pretty(rows).expect("rows serialize infallibly");
    out.push('\n');
    out
}

/// `50 ns`, `100 us`, `2.5 ms` — human-scaled operation times for the
/// preset table.
pub fn format_time(seconds: f64) -> String {
    let (value, unit) = if seconds < 1e-6 {
        (seconds * 1e9, "ns")
    } else if seconds < 1e-3 {
        (seconds * 1e6, "us")
    } else if seconds < 1.0 {
        (seconds * 1e3, "ms")
    } else {
        (seconds, "s")
    };
    if (value - value.round()).abs() < 1e-9 {
        format!("{} {}", value.round() as i64, unit)
    } else {
        format!("{} {}", value, unit)
    }
}
