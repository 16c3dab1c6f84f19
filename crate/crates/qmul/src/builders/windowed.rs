//! Windowed plus-equal multiplication: `a += b·c mod 2^(2n)` for a
//! classical constant `c`, processing `b` a window of `w` bits at a time.
//!
//! For the window starting at bit `j·w` of `b`, the value `(v·c) mod 2^W`
//! for every window value `v` is classically precomputed into a table
//! (`W = 2n − j·w` is the width of the accumulator slice the window feeds).
//! A table lookup addressed by the window's bits writes the entry into an
//! output register, one ripple add folds it into the accumulator, and a
//! measurement-based unlookup erases the output register again. This trades
//! the Θ(n) row additions of the schoolbook method for Θ(n/w) lookups and
//! additions — Θ(n²/lg n) Toffolis overall when `w` tracks lg n.
//!
//! # Lookup
//!
//! The lookup expands the `k` address bits into a one-hot register of `2^k`
//! lines by repeated doubling (stage `t` uses `2^t` Toffolis, so expansion
//! costs `2^k − 2` Toffolis for `k ≥ 2`), CNOT-copies each entry's set bits
//! off its line, then undoes the expansion: `2^(k+1) − 4` Toffolis per
//! lookup, `≤ 2·2^k`.
//!
//! # Unlookup
//!
//! The output register is erased with a `RELEASE` — one measurement per
//! output bit — followed by a phase fix-up addressed by the two halves of
//! the address register: each half is expanded into its own one-hot
//! register, the fix-up phases couple the two (CZ gates, which act only on
//! phases and therefore contribute no gates in this basis-state alphabet;
//! see the module docs of [`crate::sim`]), and both expansions are undone
//! in place. Erasing therefore tallies exactly `output.width` measurements
//! and `2·(2^⌈k/2⌉ − 2) + 2·(2^⌊k/2⌋ − 2)` Toffolis — far below the
//! forward lookup's cost for every `k`.

use crate::builders::adder::{add_bits_into, adder_toffoli_cost};
use crate::circuit::{Gate, GateSink, QubitAllocator, QubitId, Register};
use crate::error::{Error, Result};
use crate::sim::MultiplierWires;
use num_bigint::BigUint;

/// A classically precomputed table: `2^address_bits` entries, each narrower
/// than `2^entry_width`.
#[derive(Debug, Clone)]
pub struct LookupTable {
    address_bits: u32,
    entries: Vec<BigUint>,
    entry_width: u32,
}

impl LookupTable {
    pub fn new(address_bits: u32, entries: Vec<BigUint>, entry_width: u32) -> Result<Self> {
        if address_bits == 0 || address_bits > 24 {
            return Err(Error::InvalidArgument(format!(
                "table address width must be in [1, 24], got {}",
                address_bits
            )));
        }
        if entries.len() != 1usize << address_bits {
            return Err(Error::InvalidArgument(format!(
                "table over {} address bits needs {} entries, got {}",
                address_bits,
                1usize << address_bits,
                entries.len()
            )));
        }
        if entry_width == 0 {
            return Err(Error::InvalidArgument("entry width must be ≥ 1".into()));
        }
        if let Some(bad) = entries.iter().find(|e| e.bits() > entry_width as u64) {
            return Err(Error::InvalidArgument(format!(
                "table entry {} does not fit in {} bits",
                bad, entry_width
            )));
        }
        Ok(LookupTable {
            address_bits,
            entries,
            entry_width,
        })
    }

    pub fn address_bits(&self) -> u32 {
        self.address_bits
    }

    pub fn entry_width(&self) -> u32 {
        self.entry_width
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }
}

/// The multiplication table for one window: entry `v` holds
/// `(v·c) mod 2^entry_width`, built incrementally.
pub fn window_table(c: &BigUint, address_bits: u32, entry_width: u32) -> Result<LookupTable> {
    let count = 1usize << address_bits;
    let mask = (BigUint::from(1u32) << entry_width) - 1u32;
    let mut entries = Vec::with_capacity(count);
    let mut acc = BigUint::from(0u32);
    for _ in 0..count {
        entries.push(acc.clone());
        acc += c;
        acc &= &mask;
    }
    LookupTable::new(address_bits, entries, entry_width)
}

/// Emit the one-hot expansion of `address` onto `lines` (forward), or its
/// exact inverse (`reverse`). After the forward pass, line `v` is 1 exactly
/// when the address register holds `v`; all lines start and end at zero
/// around a forward/reverse pair.
fn onehot_expand(
    address: &[QubitId],
    lines: Register,
    reverse: bool,
    sink: &mut impl GateSink,
) -> Result<()> {
    let k = address.len() as u32;
    debug_assert!(k >= 1 && lines.width >= 1 << k);

    let mut gates: Vec<Gate> = Vec::with_capacity(1 << (k + 1));
    gates.push(Gate::X(lines.bit(0)));
    gates.push(Gate::cnot(address[0], lines.bit(1)));
    gates.push(Gate::cnot(lines.bit(1), lines.bit(0)));
    for t in 1..k {
        for i in 0..1u32 << t {
            gates.push(Gate::toffoli(address[t as usize], lines.bit(i), lines.bit(i + (1 << t))));
            gates.push(Gate::cnot(lines.bit(i + (1 << t)), lines.bit(i)));
        }
    }
    if reverse {
        for g in gates.iter().rev() {
            sink.emit(*g)?;
        }
    } else {
        for g in gates {
            sink.emit(g)?;
        }
    }
    Ok(())
}

/// Toffoli cost of one lookup over `k ≥ 1` address bits.
pub fn lookup_toffoli_cost(address_bits: u32) -> u64 {
    (1u64 << (address_bits + 1)).saturating_sub(4)
}

/// Toffoli cost of one unlookup (erasure fix-up) over `k ≥ 1` address bits.
pub fn unlookup_toffoli_cost(address_bits: u32) -> u64 {
    let hi = address_bits.div_ceil(2);
    let lo = address_bits / 2;
    let expand = |bits: u32| -> u64 {
        if bits == 0 {
            0
        } else {
            (1u64 << bits).saturating_sub(2)
        }
    };
    2 * expand(hi) + 2 * expand(lo)
}

fn check_lookup_args(
    address: Register,
    table: &LookupTable,
    output: Register,
) -> Result<()> {
    if address.width != table.address_bits {
        return Err(Error::InvalidArgument(format!(
            "address register is {} bits, table is addressed by {}",
            address.width, table.address_bits
        )));
    }
    if output.width != table.entry_width {
        return Err(Error::InvalidArgument(format!(
            "output register is {} bits, table entries are {}",
            output.width, table.entry_width
        )));
    }
    if address.overlaps(&output) {
        return Err(Error::InvalidArgument(
            "lookup address and output registers overlap".into(),
        ));
    }
    Ok(())
}

/// Lookup with caller-provided one-hot workspace (`lines`, zeroed, at least
/// `2^k` wide, disjoint from everything else). Workspace returns to zero.
fn lookup_into(
    lines: Register,
    address: Register,
    table: &LookupTable,
    output: Register,
    sink: &mut impl GateSink,
) -> Result<()> {
    let addr_bits: Vec<QubitId> = address.bits().collect();
    onehot_expand(&addr_bits, lines, false, sink)?;
    for (v, entry) in table.entries.iter().enumerate() {
        let line = lines.bit(v as u32);
        for (word_idx, mut word) in entry.iter_u64_digits().enumerate() {
            while word != 0 {
                let j = word.trailing_zeros();
                word &= word - 1;
                sink.emit(Gate::cnot(line, output.bit(word_idx as u32 * 64 + j)))?;
            }
        }
    }
    onehot_expand(&addr_bits, lines, true, sink)
}

/// Write `table[address]` into the zeroed `output` register, for every
/// (superposed) address value. Allocates and unitarily cleans its one-hot
/// workspace.
pub fn build_lookup(
    alloc: &mut QubitAllocator,
    address: Register,
    table: &LookupTable,
    output: Register,
    sink: &mut impl GateSink,
) -> Result<()> {
    check_lookup_args(address, table, output)?;
    let lines = alloc.alloc(1 << table.address_bits)?;
    lookup_into(lines, address, table, output, sink)
}

/// Unlookup with caller-provided one-hot workspace for the two address
/// halves (each zeroed, wide enough for its half, and disjoint).
fn unlookup_into(
    fix_hi: Register,
    fix_lo: Register,
    output: Register,
    address: Register,
    table: &LookupTable,
    sink: &mut impl GateSink,
) -> Result<()> {
    sink.emit(Gate::Release(output))?;

    // Phase fix-up: one-hot over each half of the address; the CZ coupling
    // between the halves is phase-only and contributes no gates here.
    let addr_bits: Vec<QubitId> = address.bits().collect();
    let k = addr_bits.len();
    let lo_bits = k / 2;
    let (lo_half, hi_half) = addr_bits.split_at(lo_bits);
    onehot_expand(hi_half, fix_hi, false, sink)?;
    if !lo_half.is_empty() {
        onehot_expand(lo_half, fix_lo, false, sink)?;
        onehot_expand(lo_half, fix_lo, true, sink)?;
    }
    onehot_expand(hi_half, fix_hi, true, sink)?;
    let _ = table;
    Ok(())
}

/// Erase an `output` register currently holding `table[address]`: one
/// measurement per output bit plus a square-root-sized phase fix-up.
pub fn build_unlookup(
    alloc: &mut QubitAllocator,
    output: Register,
    address: Register,
    table: &LookupTable,
    sink: &mut impl GateSink,
) -> Result<()> {
    check_lookup_args(address, table, output)?;
    let k = table.address_bits;
    let fix_hi = alloc.alloc(1 << k.div_ceil(2))?;
    let fix_lo = alloc.alloc(1 << (k / 2).max(1))?;
    unlookup_into(fix_hi, fix_lo, output, address, table, sink)
}

/// The window size minimising the per-window cost model
/// `⌈n/w⌉ · (2^w + 2^⌈w/2⌉ + A(2n))` over `w ∈ [1, 16]`, where `A` is the
/// documented adder Toffoli cost. Ties break toward the smaller window.
pub fn choose_window(n: u32) -> u32 {
    let a2n = adder_toffoli_cost(2 * n as u64);
    let mut best = (u64::MAX, 1u32);
    for w in 1..=16u32 {
        let windows = (n as u64).div_ceil(w as u64);
        let cost = windows * ((1u64 << w) + (1u64 << w.div_ceil(2)) + a2n);
        if cost < best.0 {
            best = (cost, w);
        }
    }
    best.1
}

/// Allocate registers for an `n`-bit windowed multiplier with classical
/// factor `c` and emit its circuit. `window` overrides the automatic size.
pub(crate) fn build_windowed(
    alloc: &mut QubitAllocator,
    n: u32,
    c: &BigUint,
    window: Option<u32>,
    sink: &mut impl GateSink,
) -> Result<MultiplierWires> {
    if c.bits() > n as u64 {
        return Err(Error::InvalidArgument(format!(
            "classical factor needs {} bits, n is {}",
            c.bits(),
            n
        )));
    }
    let w = match window {
        Some(w) if (1..=16).contains(&w) => w,
        Some(w) => {
            return Err(Error::InvalidArgument(format!(
                "window size must be in [1, 16], got {}",
                w
            )))
        }
        None => choose_window(n),
    };

    let a = alloc.alloc(2 * n)?;
    let b = alloc.alloc(n)?;
    let output = alloc.alloc(2 * n)?;
    let onehot = alloc.alloc(1u32 << w.min(n))?;
    let fix_hi = alloc.alloc(1 << w.min(n).div_ceil(2))?;
    let fix_lo = alloc.alloc(1 << (w.min(n) / 2).max(1))?;
    let pool = alloc.alloc(2 * n)?;

    let out_bits: Vec<QubitId> = a.bits().collect();
    let mut buf = Vec::new();
    let mut addend = Vec::new();

    let windows = n.div_ceil(w);
    for j in 0..windows {
        let offset = j * w;
        let k = w.min(n - offset);
        let slice_width = 2 * n - offset;

        let table = window_table(c, k, slice_width)?;
        let address = b.slice(offset, k);
        let out_slice = output.slice(0, slice_width);

        lookup_into(onehot.slice(0, 1 << k), address, &table, out_slice, sink)?;

        addend.clear();
        addend.extend(out_slice.bits().map(Some));
        add_bits_into(&mut buf, &out_bits[offset as usize..], &addend, pool, false, sink)?;

        unlookup_into(
            fix_hi.slice(0, 1 << k.div_ceil(2)),
            fix_lo.slice(0, 1 << (k / 2).max(1)),
            out_slice,
            address,
            &table,
            sink,
        )?;
    }

    Ok(MultiplierWires { a, b, c: None })
}
