//! Classical basis-state evaluator for emitted gate streams.
//!
//! Every gate in the alphabet permutes computational basis states, so exact
//! functional verification needs no amplitudes: a state is a plain bit
//! vector. `RELEASE` zeroes the released register, the basis-state model of
//! measurement-based uncomputation (the associated phase fix-ups act only on
//! phases, which this model never tracks).
//!
//! Registers are little-endian throughout: bit `i` of a value lives on qubit
//! `register.start + i`.

use crate::circuit::{Gate, Register};
use crate::error::{Error, Result};
use rayon::prelude::*;

/// Mutable basis state over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimState {
    bits: Vec<bool>,
}

impl SimState {
    /// All-zero state over `qubit_count` qubits.
    pub fn new(qubit_count: u64) -> Result<SimState> {
        const MAX_SIM_QUBITS: u64 = 1 << 24;
        if qubit_count > MAX_SIM_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "simulation limited to {} qubits (requested {})",
                MAX_SIM_QUBITS, qubit_count
            )));
        }
        Ok(SimState {
            bits: vec![false; qubit_count as usize],
        })
    }

    pub fn qubit_count(&self) -> u64 {
        self.bits.len() as u64
    }

    #[inline]
    fn check(&self, q: u32) -> Result<()> {
        if (q as usize) < self.bits.len() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "qubit {} out of range (state has {} qubits)",
                q,
                self.bits.len()
            )))
        }
    }

    fn check_register(&self, reg: Register) -> Result<()> {
        if reg.width == 0 {
            return Err(Error::InvalidArgument("empty register".into()));
        }
        if reg.width > 128 {
            return Err(Error::InvalidArgument(format!(
                "register wider than 128 bits ({}) cannot be read as an integer",
                reg.width
            )));
        }
        self.check(reg.start.0 + reg.width - 1)
    }

    /// Set the register's bits little-endian to `value`; other bits untouched.
    pub fn load(&mut self, reg: Register, value: u128) -> Result<()> {
        self.check_register(reg)?;
        if reg.width < 128 && value >> reg.width != 0 {
            return Err(Error::InvalidArgument(format!(
                "value {} does not fit in {} bits",
                value, reg.width
            )));
        }
        for i in 0..reg.width {
            self.bits[(reg.start.0 + i) as usize] = (value >> i) & 1 == 1;
        }
        Ok(())
    }

    /// Little-endian integer value of the register's bits.
    pub fn read(&self, reg: Register) -> Result<u128> {
        self.check_register(reg)?;
        let mut value = 0u128;
        for i in (0..reg.width).rev() {
            value = (value << 1) | self.bits[(reg.start.0 + i) as usize] as u128;
        }
        Ok(value)
    }

    /// Apply one gate.
    #[inline]
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::X(q) => {
                self.check(q.0)?;
                self.bits[q.0 as usize] ^= true;
            }
            Gate::Cnot { control, target } => {
                self.check(control.0.max(target.0))?;
                let c = self.bits[control.0 as usize];
                self.bits[target.0 as usize] ^= c;
            }
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => {
                self.check(control1.0.max(control2.0).max(target.0))?;
                let c = self.bits[control1.0 as usize] && self.bits[control2.0 as usize];
                self.bits[target.0 as usize] ^= c;
            }
            Gate::Release(reg) => {
                self.check(reg.start.0 + reg.width - 1)?;
                for i in 0..reg.width {
                    self.bits[(reg.start.0 + i) as usize] = false;
                }
            }
        }
        Ok(())
    }

    /// Apply a whole gate list in order.
    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Indices of qubits currently set to 1, excluding the given registers.
    pub fn nonzero_outside(&self, keep: &[Register]) -> Vec<u32> {
        let mut out = Vec::new();
        'qubit: for (i, &b) in self.bits.iter().enumerate() {
            if !b {
                continue;
            }
            let q = i as u32;
            for reg in keep {
                if q >= reg.start.0 && q < reg.start.0 + reg.width {
                    continue 'qubit;
                }
            }
            out.push(q);
        }
        out
    }
}

/// The registers a multiplier circuit computes on: accumulator `a` (2n bits),
/// factor `b` (n bits), and factor `c` (n bits, quantum-operand mode only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplierWires {
    pub a: Register,
    pub b: Register,
    pub c: Option<Register>,
}

/// One verification input: initial accumulator and the two factors. For a
/// classical-constant circuit, `c` must equal the constant the circuit was
/// built with (it is used for the expected-value arithmetic only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyCase {
    pub a0: u128,
    pub b: u128,
    pub c: u128,
}

/// A case whose final accumulator differed from (a0 + b·c) mod 2^(2n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyFailure {
    pub a0: u128,
    pub b: u128,
    pub c: u128,
    pub got: u128,
    pub expected: u128,
}

/// A case that corrupted an input register or left workspace nonzero.
#[derive(Debug, Clone)]
pub struct AncillaViolation {
    pub a0: u128,
    pub b: u128,
    pub c: u128,
    pub description: String,
}

/// Outcome of a verification run.
#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub cases: u64,
    pub failures: Vec<VerifyFailure>,
    pub ancilla_violations: Vec<AncillaViolation>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty() && self.ancilla_violations.is_empty()
    }

    pub fn absorb(&mut self, other: VerifyReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self.ancilla_violations.extend(other.ancilla_violations);
    }
}

/// Cap on reported counterexamples so a systematically broken circuit does
/// not produce a gigabyte of failures.
const MAX_REPORTED: usize = 32;

/// Run a recorded gate list against explicit input cases.
///
/// For each case the state is zero-initialised, `a0`/`b` (and `c` when a
/// quantum `c` register exists) are loaded, the gates are applied, and the
/// result is checked three ways: the accumulator must hold
/// `(a0 + b·c) mod 2^a.width`, the factor registers must be intact, and
/// every other qubit must have returned to zero.
pub fn verify_gate_list(
    gates: &[Gate],
    qubit_count: u64,
    wires: &MultiplierWires,
    cases: &[VerifyCase],
) -> Result<VerifyReport> {
    if wires.a.width > 128 || wires.b.width > 128 {
        return Err(Error::InvalidArgument(
            "verification registers must be at most 128 bits wide".into(),
        ));
    }
    // Probe once so per-case errors below can be treated as gate failures
    // rather than harness bugs.
    SimState::new(qubit_count)?;

    let keep: Vec<Register> = [Some(wires.a), Some(wires.b), wires.c]
        .into_iter()
        .flatten()
        .collect();
    let mask = if wires.a.width == 128 {
        u128::MAX
    } else {
        (1u128 << wires.a.width) - 1
    };

    let reports: Vec<VerifyReport> = cases
        .par_chunks(1024.max(cases.len() / 256 + 1))
        .map(|chunk| {
            let mut report = VerifyReport::default();
            for case in chunk {
                report.cases += 1;
                let mut state = SimState::new(qubit_count).expect("probed above");
                state.load(wires.a, case.a0).expect("case within register width");
                state.load(wires.b, case.b).expect("case within register width");
                if let Some(c_reg) = wires.c {
                    state.load(c_reg, case.c).expect("case within register width");
                }
                state.apply_all(gates).expect("gates within state bounds");

                let got = state.read(wires.a).expect("register checked");
                let expected = case.a0.wrapping_add(case.b.wrapping_mul(case.c)) & mask;
                if got != expected && report.failures.len() < MAX_REPORTED {
                    report.failures.push(VerifyFailure {
                        a0: case.a0,
                        b: case.b,
                        c: case.c,
                        got,
                        expected,
                    });
                }

                if report.ancilla_violations.len() < MAX_REPORTED {
                    let b_after = state.read(wires.b).expect("register checked");
                    if b_after != case.b {
                        report.ancilla_violations.push(AncillaViolation {
                            a0: case.a0,
                            b: case.b,
                            c: case.c,
                            description: format!(
                                "factor register b changed from {} to {}",
                                case.b, b_after
                            ),
                        });
                    }
                    if let Some(c_reg) = wires.c {
                        let c_after = state.read(c_reg).expect("register checked");
                        if c_after != case.c {
                            report.ancilla_violations.push(AncillaViolation {
                                a0: case.a0,
                                b: case.b,
                                c: case.c,
                                description: format!(
                                    "factor register c changed from {} to {}",
                                    case.c, c_after
                                ),
                            });
                        }
                    }
                    let dirty = state.nonzero_outside(&keep);
                    if !dirty.is_empty() {
                        report.ancilla_violations.push(AncillaViolation {
                            a0: case.a0,
                            b: case.b,
                            c: case.c,
                            description: format!(
                                "workspace qubits left nonzero: {:?}",
                                &dirty[..dirty.len().min(16)]
                            ),
                        });
                    }
                }
            }
            report
        })
        .collect();

    let mut total = VerifyReport::default();
    for r in reports {
        total.absorb(r);
    }
    total.failures.truncate(MAX_REPORTED);
    total.ancilla_violations.truncate(MAX_REPORTED);
    Ok(total)
}

/// How [`verify_multiplier`] picks its input cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyStrategy {
    /// Every input tuple. Permitted only while the full case count
    /// 2^(4n) stays within 2^20, i.e. n ≤ 5; in classical-constant mode
    /// this sweeps the constant too (rebuilding the circuit per value).
    Exhaustive,
    /// `samples` pseudorandom tuples from a deterministic seeded generator.
    Random { samples: u64, seed: u64 },
}

/// Largest factor width verification supports: the 2n-bit accumulator must
/// fit the simulator's 128-bit register reads.
pub const MAX_VERIFY_BITS: u32 = 63;

const EXHAUSTIVE_BUDGET_LOG2: u32 = 20;

/// Build the specified multiplier and check `a_final = (a0 + b·c) mod
/// 2^(2n)`, factor preservation, and workspace cleanliness over the chosen
/// input cases. In classical-constant mode the constant is part of the
/// input space: exhaustive runs sweep it, random runs sample it, and the
/// circuit is rebuilt for each distinct value.
pub fn verify_multiplier(
    spec: &crate::builders::MultiplySpec,
    strategy: VerifyStrategy,
) -> Result<VerifyReport> {
    use crate::builders::{build_multiplier, OperandMode};
    use crate::circuit::RecordingSink;
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    spec.validate()?;
    let n = spec.n;
    if n > MAX_VERIFY_BITS {
        return Err(Error::InvalidArgument(format!(
            "verification is limited to n ≤ {} (2n-bit registers must fit \
             128-bit simulator reads), got n = {}",
            MAX_VERIFY_BITS, n
        )));
    }
    let a_mask = (1u128 << (2 * n)) - 1;
    let f_mask = (1u128 << n) - 1;

    let run_one_build = |c_constant: Option<&BigUint>, cases: &[VerifyCase]| -> Result<VerifyReport> {
        let mut sink = RecordingSink::default();
        let wires = build_multiplier(spec, c_constant, &mut sink)?;
        verify_gate_list(&sink.gates, sink.tally.qubit_highwater, &wires, cases)
    };

    match strategy {
        VerifyStrategy::Exhaustive => {
            if 4 * n > EXHAUSTIVE_BUDGET_LOG2 {
                return Err(Error::InvalidArgument(format!(
                    "exhaustive verification covers 2^(4n) cases; n = {} exceeds \
                     the 2^{} budget (use random sampling instead)",
                    n, EXHAUSTIVE_BUDGET_LOG2
                )));
            }
            let mut report = VerifyReport::default();
            match spec.mode {
                OperandMode::Qq => {
                    let mut cases =
                        Vec::with_capacity(1usize << (4 * n));
                    for a0 in 0..=a_mask {
                        for b in 0..=f_mask {
                            for c in 0..=f_mask {
                                cases.push(VerifyCase { a0, b, c });
                            }
                        }
                    }
                    report.absorb(run_one_build(None, &cases)?);
                }
                OperandMode::Qc => {
                    let mut cases = Vec::with_capacity(1usize << (3 * n));
                    for c in 0..=f_mask {
                        cases.clear();
                        for a0 in 0..=a_mask {
                            for b in 0..=f_mask {
                                cases.push(VerifyCase { a0, b, c });
                            }
                        }
                        let c_big = BigUint::from(c as u64);
                        report.absorb(run_one_build(Some(&c_big), &cases)?);
                    }
                }
            }
            report.failures.truncate(MAX_REPORTED);
            report.ancilla_violations.truncate(MAX_REPORTED);
            Ok(report)
        }
        VerifyStrategy::Random { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut draw = |mask: u128| rng.gen::<u128>() & mask;
            match spec.mode {
                OperandMode::Qq => {
                    let cases: Vec<VerifyCase> = (0..samples)
                        .map(|_| VerifyCase {
                            a0: draw(a_mask),
                            b: draw(f_mask),
                            c: draw(f_mask),
                        })
                        .collect();
                    run_one_build(None, &cases)
                }
                OperandMode::Qc => {
                    let mut report = VerifyReport::default();
                    for _ in 0..samples {
                        let case = VerifyCase {
                            a0: draw(a_mask),
                            b: draw(f_mask),
                            c: draw(f_mask),
                        };
                        let c_big = BigUint::from(case.c as u64);
                        report.absorb(run_one_build(Some(&c_big), &[case])?);
                    }
                    report.failures.truncate(MAX_REPORTED);
                    report.ancilla_violations.truncate(MAX_REPORTED);
                    Ok(report)
                }
            }
        }
    }
}
