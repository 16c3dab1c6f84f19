//! Core circuit vocabulary: qubits, registers, gates, tallies, and sinks.
//!
//! Circuits are never stored as a whole unless a caller explicitly records
//! them. Builders *stream* gates into a [`GateSink`]; the two standard sinks
//! are [`CountingSink`] (aggregate counts only, O(1) memory — the estimation
//! path) and [`RecordingSink`] (full gate list — the verification path).
//!
//! The gate alphabet is `X`, `CNOT`, `TOFFOLI`, and `RELEASE`. `RELEASE`
//! models measurement-based uncomputation of a register whose content is
//! reconstructible from registers that remain live: each released qubit is
//! measured once (tallied under `measurements`) and returns to |0⟩. The
//! associated classically-controlled phase fix-ups act on phases only, so
//! they are invisible to both the counting model and the basis-state
//! simulator.

use crate::error::{Error, Result};

/// Index of a single logical qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitId(pub u32);

/// A contiguous run of qubits `[start, start + width)`, little-endian:
/// bit `i` of the encoded integer lives on qubit `start + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Register {
    pub start: QubitId,
    pub width: u32,
}

impl Register {
    pub fn new(start: u32, width: u32) -> Self {
        Register {
            start: QubitId(start),
            width,
        }
    }

    /// Qubit holding bit `i` (must be `< width`).
    #[inline]
    pub fn bit(&self, i: u32) -> QubitId {
        debug_assert!(i < self.width, "bit index {} out of register width {}", i, self.width);
        QubitId(self.start.0 + i)
    }

    /// Sub-register `[offset, offset + width)` of this register.
    pub fn slice(&self, offset: u32, width: u32) -> Register {
        debug_assert!(offset + width <= self.width);
        Register {
            start: QubitId(self.start.0 + offset),
            width,
        }
    }

    /// All qubits of the register, low bit first.
    pub fn bits(&self) -> impl Iterator<Item = QubitId> + '_ {
        (0..self.width).map(move |i| self.bit(i))
    }

    /// True if the two registers share any qubit.
    pub fn overlaps(&self, other: &Register) -> bool {
        let a0 = self.start.0;
        let a1 = a0 + self.width;
        let b0 = other.start.0;
        let b1 = b0 + other.width;
        a0 < b1 && b0 < a1
    }
}

/// One gate in the streaming alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    X(QubitId),
    Cnot { control: QubitId, target: QubitId },
    Toffoli {
        control1: QubitId,
        control2: QubitId,
        target: QubitId,
    },
    /// Measurement-based release of every qubit in the register back to |0⟩.
    Release(Register),
}

impl Gate {
    pub fn cnot(control: QubitId, target: QubitId) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn toffoli(control1: QubitId, control2: QubitId, target: QubitId) -> Gate {
        Gate::Toffoli {
            control1,
            control2,
            target,
        }
    }
}

/// Aggregate counts for a streamed circuit.
///
/// `qubit_highwater` is `1 + max(qubit index touched by any gate)` (0 for an
/// empty stream); for a `Release` the whole register counts as touched.
///
/// For a fixed algorithm, size, operand mode, and window/threshold settings,
/// `toffoli`, `measurements`, and `qubit_highwater` are independent of all
/// operand values including a classical multiplicand; only `cnot` and `x`
/// vary with the bit pattern of a classical constant (they write its set
/// bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CircuitTally {
    pub qubit_highwater: u64,
    pub toffoli: u64,
    pub cnot: u64,
    pub x: u64,
    pub measurements: u64,
}

/// Default T-state cost of one Toffoli (catalysed decomposition).
pub const T_PER_TOFFOLI: u64 = 4;

impl CircuitTally {
    /// Validate one gate and fold it into the tally.
    ///
    /// Multi-qubit gates must have pairwise-distinct operands; a release must
    /// cover at least one qubit. Violations return an `invalid-gate` error
    /// and leave the tally unchanged.
    #[inline]
    pub fn record(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::X(q) => {
                self.x += 1;
                self.touch(q.0 as u64 + 1);
            }
            Gate::Cnot { control, target } => {
                if control == target {
                    return Err(Error::InvalidGate(format!(
                        "CNOT control and target are the same qubit {}",
                        control.0
                    )));
                }
                self.cnot += 1;
                self.touch(control.0.max(target.0) as u64 + 1);
            }
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => {
                if control1 == control2 || control1 == target || control2 == target {
                    return Err(Error::InvalidGate(format!(
                        "TOFFOLI operands must be distinct (got {}, {}, {})",
                        control1.0, control2.0, target.0
                    )));
                }
                self.toffoli += 1;
                self.touch(control1.0.max(control2.0).max(target.0) as u64 + 1);
            }
            Gate::Release(reg) => {
                if reg.width == 0 {
                    return Err(Error::InvalidGate("RELEASE of an empty register".into()));
                }
                self.measurements += reg.width as u64;
                self.touch(reg.start.0 as u64 + reg.width as u64);
            }
        }
        Ok(())
    }

    #[inline]
    fn touch(&mut self, one_past: u64) {
        if one_past > self.qubit_highwater {
            self.qubit_highwater = one_past;
        }
    }

    /// Combine two tallies of circuits run side by side or in sequence:
    /// counts add field-wise, the high-water mark takes the maximum.
    pub fn merged(&self, other: &CircuitTally) -> CircuitTally {
        CircuitTally {
            qubit_highwater: self.qubit_highwater.max(other.qubit_highwater),
            toffoli: self.toffoli + other.toffoli,
            cnot: self.cnot + other.cnot,
            x: self.x + other.x,
            measurements: self.measurements + other.measurements,
        }
    }

    /// T-states consumed, at `t_per_toffoli` T-states per Toffoli.
    pub fn t_states_with(&self, t_per_toffoli: u64) -> u64 {
        self.toffoli * t_per_toffoli
    }

    /// T-states at the default rate of [`T_PER_TOFFOLI`] per Toffoli.
    pub fn t_states(&self) -> u64 {
        self.t_states_with(T_PER_TOFFOLI)
    }
}

/// Receiver for a streamed circuit.
pub trait GateSink {
    fn emit(&mut self, gate: Gate) -> Result<()>;
}

/// Sink that keeps aggregate counts only. This is the estimation path: it
/// never materialises the gate stream, so circuits with billions of gates
/// cost O(1) memory.
#[derive(Debug, Default, Clone)]
pub struct CountingSink {
    pub tally: CircuitTally,
}

impl GateSink for CountingSink {
    #[inline]
    fn emit(&mut self, gate: Gate) -> Result<()> {
        self.tally.record(&gate)
    }
}

/// Sink that records every gate (and keeps the same tally as
/// [`CountingSink`] would). This is the verification path; use it only at
/// small sizes.
#[derive(Debug, Default)]
pub struct RecordingSink {
    pub gates: Vec<Gate>,
    pub tally: CircuitTally,
}

impl GateSink for RecordingSink {
    #[inline]
    fn emit(&mut self, gate: Gate) -> Result<()> {
        self.tally.record(&gate)?;
        self.gates.push(gate);
        Ok(())
    }
}

/// Monotone register allocator. Indices are handed out contiguously starting
/// at 0 and are never reissued within one build; builders that want to reuse
/// workspace do so by reusing the *same* register after returning it to zero.
#[derive(Debug, Default, Clone)]
pub struct QubitAllocator {
    next: u32,
}

impl QubitAllocator {
    pub fn new() -> Self {
        QubitAllocator { next: 0 }
    }

    /// Allocate a fresh register of `width ≥ 1` qubits.
    pub fn alloc(&mut self, width: u32) -> Result<Register> {
        if width == 0 {
            return Err(Error::InvalidArgument(
                "register width must be at least 1".into(),
            ));
        }
        let start = self.next;
        self.next = self.next.checked_add(width).ok_or_else(|| {
            Error::InvalidArgument("qubit index space exhausted".into())
        })?;
        Ok(Register::new(start, width))
    }

    /// Total number of qubits allocated so far.
    pub fn allocated(&self) -> u32 {
        self.next
    }
}
