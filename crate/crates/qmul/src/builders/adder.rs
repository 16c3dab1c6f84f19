//! In-place ripple-carry addition on registers.
//!
//! The construction is the standard majority/un-majority ripple chain. For a
//! `W`-bit target the carry ripples *through the addend qubits*: after the
//! majority step at bit `i`, the addend qubit at position `i` temporarily
//! holds the carry into bit `i+1`; the descending un-majority sweep restores
//! every addend bit and writes the sum bits. Because the sum is taken mod
//! `2^W`, the top bit needs no carry-out: it is folded in with two CNOTs.
//!
//! Cost (the documented `A(W)` used by the window-size model):
//!
//! ```text
//! A(W) = 2·(W − 1) Toffolis for W ≥ 2;   A(1) = A(0) = 0.
//! ```
//!
//! Addend positions may be absent (`None`): a zeroed scratch qubit stands in
//! as the carry holder for that position and is returned to zero by the
//! un-majority sweep. This is how a narrow addend is added into a wide
//! target and how constants are added below their highest set bit. Gates are
//! emitted for absent positions exactly as for present ones, so every count
//! in the tally is a function of the register *geometry* alone, never of the
//! data the registers hold.
//!
//! Every gate in the chain is self-inverse, so streaming the same gate list
//! in reverse order subtracts instead of adds.

use crate::circuit::{Gate, GateSink, QubitAllocator, QubitId, Register};
use crate::error::{Error, Result};
use num_bigint::BigUint;

/// Toffoli cost of one in-place addition into a `width`-bit target.
pub fn adder_toffoli_cost(width: u64) -> u64 {
    width.saturating_sub(1) * 2
}

/// Scratch qubits consumed by [`add_bits_into`]: one carry-in, plus one
/// stand-in per absent addend position below the top bit.
pub(crate) fn scratch_required(addend: &[Option<QubitId>]) -> u32 {
    let w = addend.len();
    if w < 2 {
        return 0;
    }
    1 + addend[..w - 1].iter().filter(|b| b.is_none()).count() as u32
}

/// Core ripple-carry add: `target += addend mod 2^W` (or `-=` when
/// `subtract`), where `addend[i]` is the qubit holding bit `i` of the addend
/// or `None` for a zero bit. `scratch` must hold zeroed qubits, at least
/// [`scratch_required`] of them; they are returned to zero.
///
/// `buf` is a caller-owned reusable buffer; it is cleared on entry. The
/// forward gate list is assembled there, then streamed to `sink` in forward
/// or reverse order.
pub(crate) fn add_bits_into(
    buf: &mut Vec<Gate>,
    target: &[QubitId],
    addend: &[Option<QubitId>],
    scratch: Register,
    subtract: bool,
    sink: &mut impl GateSink,
) -> Result<()> {
    debug_assert_eq!(target.len(), addend.len());
    let w = target.len();
    buf.clear();
    if w == 0 {
        return Ok(());
    }
    if w == 1 {
        if let Some(a) = addend[0] {
            buf.push(Gate::cnot(a, target[0]));
        }
        return drain(buf, subtract, sink);
    }

    let needed = scratch_required(addend);
    if scratch.width < needed {
        return Err(Error::InvalidArgument(format!(
            "adder needs {} scratch qubits, got {}",
            needed, scratch.width
        )));
    }
    let mut next_scratch = 0u32;
    let mut take_scratch = || {
        let q = scratch.bit(next_scratch);
        next_scratch += 1;
        q
    };

    // Ascending majority sweep. `carry` holds the carry into bit i.
    let mut carry = take_scratch();
    let mut chain: Vec<(QubitId, QubitId, QubitId)> = Vec::with_capacity(w - 1);
    for i in 0..w - 1 {
        let z = addend[i].unwrap_or_else(&mut take_scratch);
        let t = target[i];
        buf.push(Gate::cnot(z, t));
        buf.push(Gate::cnot(z, carry));
        buf.push(Gate::toffoli(carry, t, z));
        chain.push((carry, t, z));
        carry = z; // z now holds the carry into bit i+1
    }

    // Top bit: sum only, no carry-out (mod 2^W).
    if let Some(a) = addend[w - 1] {
        buf.push(Gate::cnot(a, target[w - 1]));
    }
    buf.push(Gate::cnot(carry, target[w - 1]));

    // Descending un-majority sweep: restores addend bits, scratch, and the
    // carry chain while writing the sum bits.
    for &(x, y, z) in chain.iter().rev() {
        buf.push(Gate::toffoli(x, y, z));
        buf.push(Gate::cnot(z, x));
        buf.push(Gate::cnot(x, y));
    }

    drain(buf, subtract, sink)
}

fn drain(buf: &[Gate], reverse: bool, sink: &mut impl GateSink) -> Result<()> {
    if reverse {
        for g in buf.iter().rev() {
            sink.emit(*g)?;
        }
    } else {
        for g in buf.iter() {
            sink.emit(*g)?;
        }
    }
    Ok(())
}

/// Register-shaped wrapper over [`add_bits_into`]: `target += addend` (or
/// `-=`), with the addend padded with absent bits up to the target width.
pub(crate) fn add_register_into(
    buf: &mut Vec<Gate>,
    target: Register,
    addend: Register,
    scratch: Register,
    subtract: bool,
    sink: &mut impl GateSink,
) -> Result<()> {
    let target_bits: Vec<QubitId> = target.bits().collect();
    let addend_bits: Vec<Option<QubitId>> = (0..target.width)
        .map(|i| (i < addend.width).then(|| addend.bit(i)))
        .collect();
    add_bits_into(buf, &target_bits, &addend_bits, scratch, subtract, sink)
}

fn check_disjoint(regs: &[Register], what: &str) -> Result<()> {
    for (i, a) in regs.iter().enumerate() {
        for b in &regs[i + 1..] {
            if a.overlaps(b) {
                return Err(Error::InvalidArgument(format!(
                    "{} registers overlap: [{}..{}) and [{}..{})",
                    what,
                    a.start.0,
                    a.start.0 + a.width,
                    b.start.0,
                    b.start.0 + b.width
                )));
            }
        }
    }
    Ok(())
}

/// Emit `target += addend mod 2^target.width`. The addend register (at most
/// as wide as the target) is unchanged; scratch is drawn from `alloc` and
/// returned to zero.
pub fn emit_inplace_add(
    alloc: &mut QubitAllocator,
    target: Register,
    addend: Register,
    sink: &mut impl GateSink,
) -> Result<()> {
    if addend.width > target.width {
        return Err(Error::InvalidArgument(format!(
            "addend ({} bits) wider than target ({} bits)",
            addend.width, target.width
        )));
    }
    check_disjoint(&[target, addend], "adder")?;
    let scratch_width = 1 + target.width.saturating_sub(addend.width + 1);
    let scratch = if target.width >= 2 {
        alloc.alloc(scratch_width)?
    } else {
        Register::new(target.start.0, 0) // unused at width 1
    };
    let mut buf = Vec::new();
    add_register_into(&mut buf, target, addend, scratch, false, sink)
}

/// Addend operand for [`emit_controlled_add`]: a quantum register or a
/// classical constant.
#[derive(Debug, Clone)]
pub enum AddOperand<'a> {
    Register(Register),
    Constant(&'a BigUint),
}

/// Emit `if control { target += addend mod 2^target.width }`.
///
/// A quantum addend is masked into fresh workspace with one Toffoli per
/// addend bit (and unmasked after the add), so the controlled form costs
/// `2·addend.width` more Toffolis than the plain add. A constant addend is
/// masked with CNOTs instead — bit `j` of the workspace is flipped only for
/// set bits of the constant — adding no Toffolis beyond the add itself.
pub fn emit_controlled_add(
    alloc: &mut QubitAllocator,
    control: QubitId,
    target: Register,
    addend: AddOperand<'_>,
    sink: &mut impl GateSink,
) -> Result<()> {
    let control_reg = Register { start: control, width: 1 };
    match addend {
        AddOperand::Register(addend) => {
            if addend.width > target.width {
                return Err(Error::InvalidArgument(format!(
                    "addend ({} bits) wider than target ({} bits)",
                    addend.width, target.width
                )));
            }
            check_disjoint(&[target, addend, control_reg], "controlled-adder")?;
            let mask = alloc.alloc(addend.width)?;
            for i in 0..addend.width {
                sink.emit(Gate::toffoli(control, addend.bit(i), mask.bit(i)))?;
            }
            emit_inplace_add(alloc, target, mask, sink)?;
            for i in 0..addend.width {
                sink.emit(Gate::toffoli(control, addend.bit(i), mask.bit(i)))?;
            }
        }
        AddOperand::Constant(c) => {
            if c.bits() > target.width as u64 {
                return Err(Error::InvalidArgument(format!(
                    "constant addend needs {} bits, target has {}",
                    c.bits(),
                    target.width
                )));
            }
            check_disjoint(&[target, control_reg], "controlled-adder")?;
            let mask = alloc.alloc(target.width)?;
            let write = |sink: &mut dyn FnMut(Gate) -> Result<()>| -> Result<()> {
                for j in 0..c.bits() {
                    if c.bit(j) {
                        sink(Gate::cnot(control, mask.bit(j as u32)))?;
                    }
                }
                Ok(())
            };
            write(&mut |g| sink.emit(g))?;
            emit_inplace_add(alloc, target, mask, sink)?;
            write(&mut |g| sink.emit(g))?;
        }
    }
    Ok(())
}
