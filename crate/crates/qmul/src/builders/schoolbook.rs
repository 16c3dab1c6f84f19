//! Schoolbook (row-by-row) plus-equal multiplication: `a += b·c mod 2^(2n)`.
//!
//! Row `r` adds the partial product `b_r · (c << r)` into the accumulator.
//! The factor row is first copied into a mask register — with Toffolis
//! controlled on `b_r` and each bit of a quantum `c`, or with CNOTs
//! controlled on `b_r` alone at the set bits of a classical `c` — then the
//! mask is ripple-added into the accumulator slice starting at bit `r`, and
//! the mask copy is undone. The mask write and unwrite are identical gate
//! sequences, so each row returns the mask to zero.
//!
//! Toffoli count: with both factors quantum every row masks `n` bits on and
//! off (2n Toffolis) and pays the adder cost A(2n−r); with a classical `c`
//! the masking is Toffoli-free. Summed over rows:
//!
//! ```text
//! quantum·quantum:   5n² − n      classical c:   3n² − n
//! ```
//!
//! The adder is given the same addend geometry whatever the classical
//! constant's value, so only CNOT and X counts depend on the constant.

use crate::builders::adder::{add_bits_into, scratch_required};
use crate::circuit::{Gate, GateSink, QubitAllocator, QubitId, Register};
use crate::error::{Error, Result};
use crate::sim::MultiplierWires;
use num_bigint::BigUint;

/// The non-row factor of a plus-equal product: a quantum register or a
/// classical constant with a declared bit width (the width fixes the emitted
/// gate geometry; the value only selects which mask CNOTs appear).
#[derive(Debug, Clone)]
pub(crate) enum FactorOperand<'a> {
    Quantum(Register),
    Classical { value: &'a BigUint, width: u32 },
}

impl FactorOperand<'_> {
    fn width(&self) -> u32 {
        match self {
            FactorOperand::Quantum(reg) => reg.width,
            FactorOperand::Classical { width, .. } => *width,
        }
    }
}

/// Emit `out += x·y mod 2^out.len()` (or `-=` when `subtract`), where `x` is
/// quantum bit-by-bit and `y` is a [`FactorOperand`]. `mask` must be a
/// zeroed register at least `min(y.width, out.len())` wide; `pool` supplies
/// zeroed adder scratch. Both are returned to zero.
pub(crate) fn plus_equal_product(
    buf: &mut Vec<Gate>,
    x_bits: &[QubitId],
    y: &FactorOperand<'_>,
    out_bits: &[QubitId],
    mask: Register,
    pool: Register,
    subtract: bool,
    sink: &mut impl GateSink,
) -> Result<()> {
    let no = out_bits.len();
    let y_width = y.width() as usize;
    let mut addend: Vec<Option<QubitId>> = Vec::with_capacity(no);

    for (r, &xb) in x_bits.iter().enumerate() {
        if r >= no {
            break;
        }
        let w_r = no - r;
        let aw = y_width.min(w_r);
        if aw == 0 {
            continue;
        }

        let write_mask = |sink: &mut dyn FnMut(Gate) -> Result<()>| -> Result<()> {
            match y {
                FactorOperand::Quantum(yreg) => {
                    for j in 0..aw as u32 {
                        sink(Gate::toffoli(xb, yreg.bit(j), mask.bit(j)))?;
                    }
                }
                FactorOperand::Classical { value, .. } => {
                    for j in 0..aw as u64 {
                        if value.bit(j) {
                            sink(Gate::cnot(xb, mask.bit(j as u32)))?;
                        }
                    }
                }
            }
            Ok(())
        };

        write_mask(&mut |g| sink.emit(g))?;
        addend.clear();
        addend.extend((0..w_r).map(|j| (j < aw).then(|| mask.bit(j as u32))));
        add_bits_into(buf, &out_bits[r..], &addend, pool, subtract, sink)?;
        write_mask(&mut |g| sink.emit(g))?;
    }
    Ok(())
}

/// Allocate the registers for an `n`-bit schoolbook multiplier and emit its
/// circuit. `c_constant` selects the mode: `Some` bakes the classical
/// constant in, `None` allocates a quantum `c` register.
pub(crate) fn build_schoolbook(
    alloc: &mut QubitAllocator,
    n: u32,
    c_constant: Option<&BigUint>,
    sink: &mut impl GateSink,
) -> Result<MultiplierWires> {
    let a = alloc.alloc(2 * n)?;
    let b = alloc.alloc(n)?;
    let c_reg = match c_constant {
        None => Some(alloc.alloc(n)?),
        Some(c) => {
            if c.bits() > n as u64 {
                return Err(Error::InvalidArgument(format!(
                    "classical factor needs {} bits, n is {}",
                    c.bits(),
                    n
                )));
            }
            None
        }
    };
    let mask = alloc.alloc(n)?;
    let pool = alloc.alloc(2 * n)?;

    let x_bits: Vec<QubitId> = b.bits().collect();
    let out_bits: Vec<QubitId> = a.bits().collect();
    let y = match (c_constant, c_reg) {
        (Some(value), _) => FactorOperand::Classical { value, width: n },
        (None, Some(reg)) => FactorOperand::Quantum(reg),
        _ => unreachable!(),
    };
    let mut buf = Vec::new();
    plus_equal_product(&mut buf, &x_bits, &y, &out_bits, mask, pool, false, sink)?;
    debug_assert!(scratch_required(&[None]) <= pool.width);

    Ok(MultiplierWires { a, b, c: c_reg })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CountingSink, RecordingSink};
    use crate::sim::{verify_gate_list, VerifyCase};

    fn tally_for(n: u32, c: Option<u64>) -> crate::circuit::CircuitTally {
        let mut alloc = QubitAllocator::new();
        let mut sink = CountingSink::default();
        let c_big = c.map(BigUint::from);
        build_schoolbook(&mut alloc, n, c_big.as_ref(), &mut sink).unwrap();
        sink.tally
    }

    #[test]
    fn toffoli_count_matches_independent_row_sum() {
        // Independent accounting: row r of an n-bit multiply targets a
        // (2n−r)-bit accumulator slice (adder cost 2·(2n−r−1)); with a
        // quantum factor it also masks n bits on and off (2n Toffolis).
        for n in 1..=6u64 {
            let mut qq = 0u64;
            let mut qc = 0u64;
            for r in 0..n {
                let add = 2 * (2 * n - r - 1);
                qq += 2 * n + add;
                qc += add;
            }
            assert_eq!(tally_for(n as u32, None).toffoli, qq, "QQ n={}", n);
            let c = 3 & ((1 << n) - 1);
            assert_eq!(tally_for(n as u32, Some(c)).toffoli, qc, "QC n={}", n);
            // Closed forms used by the documentation.
            assert_eq!(qq, 5 * n * n - n);
            assert_eq!(qc, 3 * n * n - n);
        }
    }

    #[test]
    fn classical_factor_is_cheaper_than_quantum() {
        for n in [4u32, 8, 16] {
            assert!(tally_for(n, Some(5)).toffoli < tally_for(n, None).toffoli);
        }
    }

    #[test]
    fn quadratic_scaling_ratio() {
        let t32 = tally_for(32, None).toffoli as f64;
        let t64 = tally_for(64, None).toffoli as f64;
        let ratio = t64 / t32;
        assert!((3.6..=4.4).contains(&ratio), "ratio {}", ratio);
    }

    #[test]
    fn three_times_three_is_nine() {
        let mut alloc = QubitAllocator::new();
        let mut sink = RecordingSink::default();
        let wires = build_schoolbook(&mut alloc, 2, None, &mut sink).unwrap();
        let report = verify_gate_list(
            &sink.gates,
            alloc.allocated() as u64,
            &wires,
            &[VerifyCase { a0: 0, b: 3, c: 3 }],
        )
        .unwrap();
        assert!(report.is_ok(), "{:?}", report.failures);
        // Direct read-back as well, for the concrete product.
        let mut state = crate::sim::SimState::new(alloc.allocated() as u64).unwrap();
        state.load(wires.b, 3).unwrap();
        state.load(wires.c.unwrap(), 3).unwrap();
        state.apply_all(&sink.gates).unwrap();
        assert_eq!(state.read(wires.a).unwrap(), 9);
    }

    #[test]
    fn exhaustive_n3_quantum_quantum() {
        let mut alloc = QubitAllocator::new();
        let mut sink = RecordingSink::default();
        let wires = build_schoolbook(&mut alloc, 3, None, &mut sink).unwrap();
        let mut cases = Vec::with_capacity(4096);
        for a0 in 0..64 {
            for b in 0..8 {
                for c in 0..8 {
                    cases.push(VerifyCase { a0, b, c });
                }
            }
        }
        let report =
            verify_gate_list(&sink.gates, alloc.allocated() as u64, &wires, &cases).unwrap();
        assert_eq!(report.cases, 4096);
        assert!(report.is_ok(), "failures: {:?}, ancilla: {:?}",
            report.failures, report.ancilla_violations);
    }

    #[test]
    fn exhaustive_n2_classical_constant() {
        for c in 0..4u64 {
            let mut alloc = QubitAllocator::new();
            let mut sink = RecordingSink::default();
            let c_big = BigUint::from(c);
            let wires = build_schoolbook(&mut alloc, 2, Some(&c_big), &mut sink).unwrap();
            let mut cases = Vec::new();
            for a0 in 0..16 {
                for b in 0..4 {
                    cases.push(VerifyCase { a0, b, c: c as u128 });
                }
            }
            let report =
                verify_gate_list(&sink.gates, alloc.allocated() as u64, &wires, &cases).unwrap();
            assert!(report.is_ok(), "c={}: {:?}", c, report.failures);
        }
    }

    #[test]
    fn single_bit_factors() {
        let mut alloc = QubitAllocator::new();
        let mut sink = RecordingSink::default();
        let wires = build_schoolbook(&mut alloc, 1, None, &mut sink).unwrap();
        let mut cases = Vec::new();
        for a0 in 0..4 {
            for b in 0..2 {
                for c in 0..2 {
                    cases.push(VerifyCase { a0, b, c });
                }
            }
        }
        let report =
            verify_gate_list(&sink.gates, alloc.allocated() as u64, &wires, &cases).unwrap();
        assert_eq!(report.cases, 16);
        assert!(report.is_ok());
    }

    #[test]
    fn constant_value_changes_only_cnot_and_x_counts() {
        let n = 5;
        let base = tally_for(n, Some(0b10110));
        for c in [0u64, 1, 0b11111, 0b01010, 7] {
            let t = tally_for(n, Some(c));
            assert_eq!(t.toffoli, base.toffoli, "c={}", c);
            assert_eq!(t.measurements, base.measurements);
            assert_eq!(t.qubit_highwater, base.qubit_highwater);
        }
        // And the CNOT count genuinely moves with the constant.
        assert_ne!(tally_for(n, Some(0)).cnot, tally_for(n, Some(0b11111)).cnot);
    }

    #[test]
    fn oversized_constant_rejected() {
        let mut alloc = QubitAllocator::new();
        let mut sink = CountingSink::default();
        let c = BigUint::from(4u32); // needs 3 bits, n = 2
        assert!(matches!(
            build_schoolbook(&mut alloc, 2, Some(&c), &mut sink),
            Err(Error::InvalidArgument(_))
        ));
    }
}
