//! Fault-tolerant resource models: 2D layout overhead, error-correction
//! scheme formulas, code-distance selection, T-factory sizing, and the
//! end-to-end estimate pipeline.
//!
//! The pipeline maps a logical [`CircuitTally`] plus hardware parameters to
//! physical qubits, T-state production, and wall-clock runtime:
//!
//! 1. layout: `q_total = 2·q_alg + ⌈√(8·q_alg)⌉ + 1` logical qubits, giving
//!    every algorithm qubit routing ancilla;
//! 2. cycles: `3·toffoli + 1·measurement` logical cycles (coefficients
//!    configurable);
//! 3. distance: the smallest odd `d ≥ 3` whose logical error rate keeps
//!    `q_total · cycles · rate(d)` inside the logical share of the error
//!    budget;
//! 4. T states: `4·toffoli` by default, produced by 15-to-1 distillation
//!    factories sized so production keeps pace with the cycle-limited
//!    runtime (factories never extend runtime).
//!
//! The physical error rate fed to the suppression model is the most
//! pessimistic of the platform's one-qubit, two-qubit, and measurement
//! error rates.

use crate::circuit::CircuitTally;
use crate::error::{Error, Result};
use crate::platform::{Family, QubitParams};

/// Which error-correcting code family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Surface,
    Floquet,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Surface => "surface",
            SchemeKind::Floquet => "floquet",
        }
    }
}

/// All constants of one error-correction scheme. Physical qubits per
/// logical qubit are `qubits_per_d2·d² + qubits_per_d·d`; one syndrome
/// round takes `round_one_qubit_gates·t_one + round_two_qubit_gates·t_two +
/// round_measurements·t_meas` seconds; a logical cycle is `d` rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct QecScheme {
    pub kind: SchemeKind,
    /// Threshold physical error rate `p*`: at or above it no distance helps.
    pub error_threshold: f64,
    /// Prefactor of the suppression law.
    pub crossing_prefactor: f64,
    pub qubits_per_d2: u64,
    pub qubits_per_d: u64,
    pub round_one_qubit_gates: u64,
    pub round_two_qubit_gates: u64,
    pub round_measurements: u64,
    /// True when the scheme only runs on Majorana hardware.
    pub majorana_only: bool,
}

impl QecScheme {
    /// Standard 2D surface code: `2d²` physical qubits per logical qubit,
    /// syndrome round of 4 two-qubit gates plus 2 measurements.
    pub fn surface() -> Self {
        QecScheme {
            kind: SchemeKind::Surface,
            error_threshold: 1e-2,
            crossing_prefactor: 0.03,
            qubits_per_d2: 2,
            qubits_per_d: 0,
            round_one_qubit_gates: 0,
            round_two_qubit_gates: 4,
            round_measurements: 2,
            majorana_only: false,
        }
    }

    /// Measurement-cycle code for Majorana hardware: `4d² + 8d` physical
    /// qubits per logical qubit, syndrome round of 3 measurements.
    pub fn floquet() -> Self {
        QecScheme {
            kind: SchemeKind::Floquet,
            error_threshold: 1e-2,
            crossing_prefactor: 0.07,
            qubits_per_d2: 4,
            qubits_per_d: 8,
            round_one_qubit_gates: 0,
            round_two_qubit_gates: 0,
            round_measurements: 3,
            majorana_only: true,
        }
    }

    pub fn for_kind(kind: SchemeKind) -> Self {
        match kind {
            SchemeKind::Surface => QecScheme::surface(),
            SchemeKind::Floquet => QecScheme::floquet(),
        }
    }

    /// Physical qubits forming one logical qubit at distance `d`.
    pub fn phys_per_logical(&self, d: u32) -> u64 {
        let d = d as u64;
        self.qubits_per_d2 * d * d + self.qubits_per_d * d
    }

    /// Seconds per syndrome extraction round on the given hardware.
    pub fn syndrome_round_time(&self, params: &QubitParams) -> f64 {
        self.round_one_qubit_gates as f64 * params.t_one_qubit
            + self.round_two_qubit_gates as f64 * params.t_two_qubit
            + self.round_measurements as f64 * params.t_meas
    }
}

/// Total tolerated failure probability for one run, split between logical
/// (data) errors and distillation errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    pub total: f64,
    pub logical_share: f64,
    pub distillation_share: f64,
}

impl Default for ErrorBudget {
    fn default() -> Self {
        ErrorBudget {
            total: 0.01,
            logical_share: 0.5,
            distillation_share: 0.5,
        }
    }
}

impl ErrorBudget {
    pub fn validate(&self) -> Result<()> {
        if !(self.total > 0.0 && self.total < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "error budget total must be in (0, 1), got {}",
                self.total
            )));
        }
        if self.logical_share < 0.0 || self.distillation_share < 0.0 {
            return Err(Error::InvalidArgument(
                "error budget shares must be nonnegative".into(),
            ));
        }
        let sum = self.logical_share + self.distillation_share;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "error budget shares must sum to 1, got {}",
                sum
            )));
        }
        Ok(())
    }
}

/// Configurable coefficients of the cost model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostModel {
    /// T states consumed per Toffoli.
    pub t_per_toffoli: u64,
    /// Logical cycles per Toffoli.
    pub cycles_per_toffoli: u64,
    /// Logical cycles per measurement.
    pub cycles_per_measurement: u64,
    /// Largest distance considered before declaring the model infeasible.
    pub distance_cap: u32,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            t_per_toffoli: 4,
            cycles_per_toffoli: 3,
            cycles_per_measurement: 1,
            distance_cap: 99,
        }
    }
}

/// `⌈√x⌉` computed exactly in integers.
fn ceil_sqrt(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    // f64 seed, then correct: exact for all u64.
    let mut r = (x as f64).sqrt() as u64;
    while r > 0 && r.saturating_mul(r) > x {
        r -= 1;
    }
    while r.saturating_mul(r) < x {
        r += 1;
    }
    r
}

/// Logical qubits after the fast-block layout: `2q + ⌈√(8q)⌉ + 1`, pairing
/// every algorithm qubit with routing ancilla.
pub fn layout_total_qubits(q_alg: u64) -> Result<u64> {
    if q_alg == 0 {
        return Err(Error::InvalidArgument(
            "layout requires at least one algorithm qubit".into(),
        ));
    }
    Ok(2 * q_alg + ceil_sqrt(8 * q_alg) + 1)
}

/// Per-cycle logical error rate of one logical qubit at odd distance `d`:
/// `a_pre · (p/p*)^((d+1)/2)`.
pub fn logical_error_rate(scheme: &QecScheme, p: f64, d: u32) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "physical error rate must be positive, got {}",
            p
        )));
    }
    if p >= scheme.error_threshold {
        return Err(Error::AboveThreshold {
            p,
            p_star: scheme.error_threshold,
        });
    }
    if d < 3 || d % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "code distance must be odd and at least 3, got {}",
            d
        )));
    }
    let exponent = ((d + 1) / 2) as i32;
    Ok(scheme.crossing_prefactor * (p / scheme.error_threshold).powi(exponent))
}

/// Logical cycle count of a tally under the cost model.
pub fn logical_cycles(tally: &CircuitTally, cost: &CostModel) -> u64 {
    cost.cycles_per_toffoli * tally.toffoli + cost.cycles_per_measurement * tally.measurements
}

/// Smallest odd `d ≥ 3` with `q_total · cycles · rate(d) ≤ budget_logical`.
pub fn select_distance(
    scheme: &QecScheme,
    p: f64,
    q_total: u64,
    cycles: u64,
    budget_logical: f64,
    distance_cap: u32,
) -> Result<u32> {
    let volume = q_total as f64 * cycles as f64;
    let mut d = 3;
    while d <= distance_cap {
        if volume * logical_error_rate(scheme, p, d)? <= budget_logical {
            return Ok(d);
        }
        d += 2;
    }
    Err(Error::ModelInfeasible(format!(
        "no code distance up to {} meets the logical error budget {:.3e} \
         for {} logical qubits over {} cycles at p = {:.3e}",
        distance_cap, budget_logical, q_total, cycles, p
    )))
}

/// One 15-to-1 distillation factory (possibly several stacked rounds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TFactory {
    /// Physical qubits occupied by one factory.
    pub physical_qubits: u64,
    /// Seconds to emit one T state.
    pub duration: f64,
    /// Error rate of the emitted T states.
    pub output_error: f64,
    /// Distillation rounds stacked.
    pub rounds: u32,
    /// Code distance the factory runs at.
    pub distance: u32,
}

const MAX_DISTILLATION_ROUNDS: u32 = 3;

/// Size a 15-to-1 factory achieving `required_error` per T state, on a
/// machine whose algorithm runs at distance `d`. Each round maps an input
/// error `p` to `35·p³`; rounds stack (up to three) until the requirement
/// is met. The factory runs at the smallest odd distance ≥ `⌈d/2⌉`.
pub fn build_t_factory(
    scheme: &QecScheme,
    params: &QubitParams,
    required_error: f64,
    d: u32,
) -> Result<TFactory> {
    if !(required_error > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "required T-state error must be positive, got {}",
            required_error
        )));
    }
    let mut error = params.t_inject_error;
    let mut rounds = 0;
    while rounds < MAX_DISTILLATION_ROUNDS {
        error = 35.0 * error * error * error;
        rounds += 1;
        if error <= required_error {
            let half = d.div_ceil(2);
            let distance = if half % 2 == 1 { half } else { half + 1 };
            let per_round_qubits = 15 * scheme.phys_per_logical(distance);
            let duration =
                rounds as f64 * 11.0 * distance as f64 * scheme.syndrome_round_time(params);
            return Ok(TFactory {
                physical_qubits: rounds as u64 * per_round_qubits,
                duration,
                output_error: error,
                rounds,
                distance,
            });
        }
    }
    Err(Error::ModelInfeasible(format!(
        "distillation cannot reach a T-state error of {:.3e} within {} rounds \
         from an injection error of {:.3e}",
        required_error, MAX_DISTILLATION_ROUNDS, params.t_inject_error
    )))
}

/// Full physical-resource estimate for one circuit on one platform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalEstimate {
    /// Logical qubits the algorithm touches.
    pub q_alg: u64,
    /// Logical qubits after layout overhead.
    pub q_total: u64,
    pub distance: u32,
    pub phys_per_logical: u64,
    pub logical_cycles: u64,
    pub t_states: u64,
    /// Number of T factories running in parallel.
    pub factories: u64,
    /// Physical qubits across all factories.
    pub factory_qubits: u64,
    /// `q_total · phys_per_logical + factory_qubits`.
    pub physical_qubits: u64,
    pub runtime_seconds: f64,
}

/// The most pessimistic physical error rate of a platform — the rate fed
/// to the suppression model.
pub fn worst_error_rate(params: &QubitParams) -> f64 {
    params
        .e_one_qubit
        .max(params.e_two_qubit)
        .max(params.e_meas)
}

/// Run the whole pipeline: layout, cycle count, distance selection,
/// runtime, and T-factory sizing.
pub fn estimate(
    tally: &CircuitTally,
    params: &QubitParams,
    scheme: &QecScheme,
    budget: &ErrorBudget,
    cost: &CostModel,
) -> Result<PhysicalEstimate> {
    budget.validate()?;
    params.validate()?;
    if scheme.majorana_only && params.family != Family::Majorana {
        return Err(Error::InvalidCombination(format!(
            "the {} scheme only works on Majorana hardware; platform '{}' is gate-based",
            scheme.kind.name(),
            params.name
        )));
    }

    let q_alg = tally.qubit_highwater;
    let q_total = layout_total_qubits(q_alg)?;
    let cycles = logical_cycles(tally, cost);
    let p = worst_error_rate(params);
    let d = select_distance(
        scheme,
        p,
        q_total,
        cycles,
        budget.total * budget.logical_share,
        cost.distance_cap,
    )?;
    let phys_per_logical = scheme.phys_per_logical(d);
    let runtime_seconds = cycles as f64 * d as f64 * scheme.syndrome_round_time(params);
    let t_states = tally.t_states_with(cost.t_per_toffoli);

    let (factories, factory_qubits) = if t_states == 0 {
        (0, 0)
    } else {
        let required_error = budget.total * budget.distillation_share / t_states as f64;
        let factory = build_t_factory(scheme, params, required_error, d)?;
        // Enough parallel factories that production never lags the
        // cycle-limited runtime.
        let count = (t_states as f64 * factory.duration / runtime_seconds).ceil() as u64;
        let count = count.max(1);
        (count, count * factory.physical_qubits)
    };

    Ok(PhysicalEstimate {
        q_alg,
        q_total,
        distance: d,
        phys_per_logical,
        logical_cycles: cycles,
        t_states,
        factories,
        factory_qubits,
        physical_qubits: q_total * phys_per_logical + factory_qubits,
        runtime_seconds,
    })
}
