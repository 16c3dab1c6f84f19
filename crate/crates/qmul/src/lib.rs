//! Logical circuits, reversible simulation, and fault-tolerant resource
//! estimation for quantum plus-equal multipliers.
//!
//! The pipeline has three stages:
//!
//! 1. **Build** ([`builders`]): construct the gate-level circuit for
//!    `a += b·c mod 2^(2n)` with one of three algorithms — schoolbook
//!    rows, divide-and-conquer piecewise multiplication, or windowed
//!    table lookups — over quantum×quantum or quantum×classical
//!    operands. Builders stream gates into a [`circuit::GateSink`], so
//!    the same code path yields either a full gate list or just counts.
//! 2. **Verify** ([`sim`]): replay a recorded gate list on a classical
//!    bit-vector simulator and check `a0 + b·c mod 2^(2n)` bit-for-bit,
//!    exhaustively at tiny widths or on seeded random samples.
//! 3. **Estimate** ([`qec`], [`platform`], [`config`]): map the gate
//!    tally onto an error-corrected layout for a hardware preset and
//!    report code distance, physical qubits, T-factory count, and
//!    runtime.

pub mod builders;
pub mod circuit;
pub mod config;
pub mod error;
pub mod platform;
pub mod qec;
pub mod sim;

pub use builders::{
    build_multiplier, default_qc_constant, tally_multiplier, Algorithm, MultiplySpec, OperandMode,
    WindowSize,
};
pub use circuit::{CircuitTally, CountingSink, Gate, GateSink, QubitId, RecordingSink, Register};
pub use config::EstimatorConfig;
pub use error::{Error, Result};
pub use platform::{list_presets, preset, QubitParams, PRESET_NAMES};
pub use qec::{estimate, CostModel, ErrorBudget, PhysicalEstimate, QecScheme, SchemeKind};
pub use sim::{verify_multiplier, MultiplierWires, VerifyReport, VerifyStrategy};
