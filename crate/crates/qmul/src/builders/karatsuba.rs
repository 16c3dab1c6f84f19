//! Karatsuba plus-equal multiplication: `a += b·c mod 2^(2n)` in
//! Θ(n^lg3) Toffolis.
//!
//! # Construction
//!
//! Each factor is split into `P = 2^t` pieces of `w = ⌈n/P⌉` bits, viewing
//! the factor as a polynomial in `z = 2^w`. The circuit computes every
//! coefficient of the product polynomial into its own fresh output register,
//! adds each coefficient into the accumulator at its weight, and then runs
//! the whole coefficient computation backwards to return the output
//! registers to zero.
//!
//! One recursion level on `m` pieces (`h = m/2`) applies the classic
//! three-product decomposition *in place* on the `2m−1` output registers
//! `O[j]`, using a pair of mutually inverse running-sum transforms:
//!
//! * `T⁻¹` (ascending `j` from `h`: `O[j] += O[j−h]`) multiplies the
//!   output polynomial by `1/(1 − z^h)` (the geometric series truncates
//!   exactly on a finite register range);
//! * `T` (descending `j`: `O[j] −= O[j−h]`) multiplies by `1 − z^h`.
//!
//! Sandwiching the low-half and (sign-flipped) high-half recursive products
//! between `T⁻¹` and `T` yields `±[L − z^h(L+H) + z^{2h}H]` added into the
//! window; adding the middle product of the half-sums at offset `h`
//! completes `± x·y` — plus-equals throughout. The half-sums are computed
//! into workspace registers (copy the low piece, ripple-add the high piece),
//! used by the middle product, and uncomputed again. With a classical
//! factor the half-sums on that side are computed in ordinary software.
//!
//! Reversal is purely structural: running the seven blocks of a level in
//! mirrored order, with each transform swapped for its inverse, each sum
//! block swapped compute↔uncompute, and each leaf sign flipped, is the exact
//! functional inverse of the forward level. No gate list is ever stored.
//!
//! # Widths
//!
//! Sum pieces at recursion depth `ℓ` are bounded by `2^(w+ℓ) ≤ 2^(w+t)`, so
//! every workspace piece is `w_in = w + t` bits and never wraps. Every
//! product-polynomial coefficient is a sum of at most `2^t` products of
//! `w_in`-bit values, so the final value of an output register is
//! nonnegative and below `2^(2·w_in + t)`; output registers are
//! `w_out = 2·w_in + 4t + 8` bits — comfortable headroom so intermediate
//! ring arithmetic (which may wrap mod `2^w_out` mid-stream) cannot be
//! confused with the final coefficients, which always fit. Adding the low
//! `min(w_out, 2n − k·w)` bits of coefficient `k` into the accumulator at
//! offset `k·w` is therefore exact mod `2^(2n)`.
//!
//! # Piece-size floor
//!
//! Below roughly a hundred bits the quadratic row method is cheaper in
//! absolute Toffolis than further splitting (the linear-in-width adds of
//! the transforms dominate), so recursion depth is chosen to make pieces
//! about `max(96, threshold)` bits wide rather than recursing all the way
//! down. The `threshold` still acts as the exact cutoff below which the
//! whole build is delegated to the row method unchanged.

use crate::builders::adder::add_register_into;
use crate::builders::schoolbook::{build_schoolbook, plus_equal_product, FactorOperand};
use crate::circuit::{Gate, GateSink, QubitAllocator, QubitId, Register};
use crate::error::{Error, Result};
use crate::sim::MultiplierWires;
use num_bigint::BigUint;

/// Piece-width floor for the automatic recursion depth (see module docs).
const PIECE_GOAL_FLOOR: u32 = 96;

/// Derived splitting parameters for an `n`-bit Karatsuba build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct KaratsubaGeometry {
    /// Recursion depth (≥ 1).
    pub levels: u32,
    /// Piece count `2^levels`.
    pub pieces: u32,
    /// Bits per input piece.
    pub piece_width: u32,
    /// Bits per workspace (half-sum) piece.
    pub sum_width: u32,
    /// Bits per output-coefficient piece.
    pub out_width: u32,
}

pub(crate) fn karatsuba_geometry(n: u32, threshold: u32, goal_floor: u32) -> KaratsubaGeometry {
    let goal = goal_floor.max(threshold).max(1);
    let blocks = n.div_ceil(goal);
    let levels = if blocks <= 1 {
        1
    } else {
        32 - (blocks - 1).leading_zeros()
    }
    .max(1);
    let pieces = 1u32 << levels;
    let piece_width = n.div_ceil(pieces);
    let sum_width = piece_width + levels;
    let out_width = 2 * sum_width + 4 * levels + 8;
    KaratsubaGeometry {
        levels,
        pieces,
        piece_width,
        sum_width,
        out_width,
    }
}

/// A classical factor piece: a value plus the bit width that fixes the
/// emitted gate geometry (the value only selects mask CNOTs).
#[derive(Debug, Clone)]
struct CPiece {
    value: BigUint,
    width: u32,
}

/// One side's pieces for a recursive product: quantum registers or
/// classical values. `None` marks a geometrically absent (zero) piece.
enum YPieces<'a> {
    Quantum(&'a [Option<Register>]),
    Classical(&'a [Option<CPiece>]),
}

struct KaratsubaBuilder<'s, S: GateSink> {
    sink: &'s mut S,
    /// Output coefficient registers, `2·pieces − 1` of them.
    out: Vec<Register>,
    /// Half-sum workspace per level: `ws_x[ℓ]` holds `pieces >> (ℓ+1)`
    /// registers shared by all same-depth calls (each returns them zeroed).
    ws_x: Vec<Vec<Register>>,
    /// Same for the quantum factor `c`; absent with a classical factor.
    ws_y: Option<Vec<Vec<Register>>>,
    leaf_mask: Register,
    pool: Register,
    sum_width: u32,
    add_buf: Vec<Gate>,
    sums_buf: Vec<Gate>,
}

/// Sink adapter that records into a plain gate buffer (validation happens
/// when the buffer is replayed into the real sink).
struct VecSink<'a>(&'a mut Vec<Gate>);

impl GateSink for VecSink<'_> {
    #[inline]
    fn emit(&mut self, gate: Gate) -> Result<()> {
        self.0.push(gate);
        Ok(())
    }
}

impl<S: GateSink> KaratsubaBuilder<'_, S> {
    /// One recursion level over `m = x.len()` pieces, writing the product
    /// polynomial's coefficients into `out[out0 .. out0+2m−1]`. `rev` emits
    /// the exact functional inverse; `sub` flips the sign of the whole
    /// contribution.
    fn kop(
        &mut self,
        x: &[Option<Register>],
        y: &YPieces<'_>,
        out0: usize,
        level: u32,
        rev: bool,
        sub: bool,
    ) -> Result<()> {
        let m = x.len();
        debug_assert!(m.is_power_of_two());
        if m == 1 {
            return self.leaf(x[0], y, out0, rev, sub);
        }
        let h = m / 2;
        let (x_lo, x_hi) = x.split_at(h);
        let sum_x: Vec<Register> = self.ws_x[level as usize][..h].to_vec();
        let sum_x_pieces: Vec<Option<Register>> = sum_x.iter().copied().map(Some).collect();

        // The y-side half-sums: workspace registers (quantum) or software
        // sums (classical).
        let (sum_y_regs, sum_y_classical): (Vec<Option<Register>>, Vec<Option<CPiece>>) = match y {
            YPieces::Quantum(_) => (
                self.ws_y.as_ref().expect("quantum factor has workspace")[level as usize][..h]
                    .iter()
                    .copied()
                    .map(Some)
                    .collect(),
                Vec::new(),
            ),
            YPieces::Classical(pieces) => {
                let sums = (0..h)
                    .map(|i| {
                        let mut v = BigUint::from(0u32);
                        if let Some(Some(p)) = pieces.get(i) {
                            v += &p.value;
                        }
                        if let Some(Some(p)) = pieces.get(h + i) {
                            v += &p.value;
                        }
                        Some(CPiece {
                            value: v,
                            width: self.sum_width,
                        })
                    })
                    .collect();
                (Vec::new(), sums)
            }
        };

        // The seven blocks of one level, in forward order. Reversal runs
        // them mirrored with each block inverted.
        #[derive(Clone, Copy)]
        enum Block {
            DivTransform,
            LoProduct,
            HiProduct,
            MulTransform,
            SumsIn,
            MidProduct,
            SumsOut,
        }
        const ORDER: [Block; 7] = [
            Block::DivTransform,
            Block::LoProduct,
            Block::HiProduct,
            Block::MulTransform,
            Block::SumsIn,
            Block::MidProduct,
            Block::SumsOut,
        ];

        let run = |this: &mut Self, block: Block| -> Result<()> {
            match block {
                // ascending-adds exactly when (block is Div) == (direction
                // is forward); the mirrored run swaps each transform for
                // its inverse.
                Block::DivTransform => this.transform(out0, m, !rev),
                Block::MulTransform => this.transform(out0, m, rev),
                Block::LoProduct => {
                    let y_lo = slice_y(y, &sum_y_regs, &sum_y_classical, 0, h, false);
                    this.kop(x_lo, &y_lo, out0, level + 1, rev, sub)
                }
                Block::HiProduct => {
                    let y_hi = slice_y(y, &sum_y_regs, &sum_y_classical, h, h, false);
                    this.kop(x_hi, &y_hi, out0 + h, level + 1, rev, !sub)
                }
                Block::MidProduct => {
                    let y_mid = slice_y(y, &sum_y_regs, &sum_y_classical, 0, h, true);
                    this.kop(&sum_x_pieces, &y_mid, out0 + h, level + 1, rev, sub)
                }
                // a sums block emits the compute stream exactly when
                // (it is the uncompute slot) == (direction is reversed)
                Block::SumsIn => this.sums(x_lo, x_hi, y, &sum_x, level, !rev),
                Block::SumsOut => this.sums(x_lo, x_hi, y, &sum_x, level, rev),
            }
        };

        if rev {
            for block in ORDER.iter().rev() {
                run(self, *block)?;
            }
        } else {
            for block in ORDER.iter() {
                run(self, *block)?;
            }
        }
        Ok(())
    }

    /// Running-sum transform over the `2m−1` output registers at `out0`:
    /// ascending adds (multiply by `1/(1−z^h)`) or its exact inverse,
    /// descending subtracts (multiply by `1−z^h`).
    fn transform(&mut self, out0: usize, m: usize, ascending_adds: bool) -> Result<()> {
        let h = m / 2;
        let js: Vec<usize> = (h..=2 * m - 2).collect();
        let order: Vec<usize> = if ascending_adds {
            js
        } else {
            js.into_iter().rev().collect()
        };
        for j in order {
            let target = self.out[out0 + j];
            let addend = self.out[out0 + j - h];
            add_register_into(
                &mut self.add_buf,
                target,
                addend,
                self.pool,
                !ascending_adds,
                self.sink,
            )?;
        }
        Ok(())
    }

    /// Compute (or uncompute) the half-sum workspace for one level:
    /// `ws[i] = x_lo[i] + x_hi[i]` via a CNOT copy of the low piece and a
    /// ripple add of the high piece (and the same on the y side when it is
    /// quantum). The uncompute stream is the exact gate-by-gate reverse.
    fn sums(
        &mut self,
        x_lo: &[Option<Register>],
        x_hi: &[Option<Register>],
        y: &YPieces<'_>,
        sum_x: &[Register],
        level: u32,
        compute: bool,
    ) -> Result<()> {
        let mut stream = std::mem::take(&mut self.sums_buf);
        stream.clear();
        {
            let mut vs = VecSink(&mut stream);
            let h = x_lo.len();
            for i in 0..h {
                self.one_sum(&mut vs, x_lo.get(i), x_hi.get(i), sum_x[i])?;
            }
            if let (YPieces::Quantum(pieces), Some(ws_y)) = (y, &self.ws_y) {
                let (y_lo, y_hi) = pieces.split_at(h);
                for i in 0..h {
                    self.one_sum(&mut vs, y_lo.get(i), y_hi.get(i), ws_y[level as usize][i])?;
                }
            }
        }
        if compute {
            for g in stream.iter() {
                self.sink.emit(*g)?;
            }
        } else {
            for g in stream.iter().rev() {
                self.sink.emit(*g)?;
            }
        }
        self.sums_buf = stream;
        Ok(())
    }

    fn one_sum(
        &self,
        vs: &mut VecSink<'_>,
        lo: Option<&Option<Register>>,
        hi: Option<&Option<Register>>,
        ws: Register,
    ) -> Result<()> {
        let mut add_buf = Vec::new();
        if let Some(Some(lo)) = lo {
            for b in 0..lo.width {
                vs.emit(Gate::cnot(lo.bit(b), ws.bit(b)))?;
            }
        }
        if let Some(Some(hi)) = hi {
            add_register_into(&mut add_buf, ws, *hi, self.pool, false, vs)?;
        }
        Ok(())
    }

    /// Base case: one piece each side — a plain row-by-row product into the
    /// single output register at `out0`.
    fn leaf(
        &mut self,
        x: Option<Register>,
        y: &YPieces<'_>,
        out0: usize,
        rev: bool,
        sub: bool,
    ) -> Result<()> {
        let Some(xr) = x else { return Ok(()) };
        let y_op = match y {
            YPieces::Quantum(pieces) => match pieces[0] {
                Some(reg) => FactorOperand::Quantum(reg),
                None => return Ok(()),
            },
            YPieces::Classical(pieces) => match &pieces[0] {
                Some(p) => FactorOperand::Classical {
                    value: &p.value,
                    width: p.width,
                },
                None => return Ok(()),
            },
        };
        let effective_sub = if rev { !sub } else { sub };
        let x_bits: Vec<QubitId> = xr.bits().collect();
        let out_bits: Vec<QubitId> = self.out[out0].bits().collect();
        plus_equal_product(
            &mut self.add_buf,
            &x_bits,
            &y_op,
            &out_bits,
            self.leaf_mask,
            self.pool,
            effective_sub,
            self.sink,
        )
    }

    /// Fold every computed coefficient into the accumulator: coefficient
    /// `k` weighs `2^(k·w)`, so its low `min(w_out, 2n − k·w)` bits are
    /// ripple-added into `a` at offset `k·w` (an exact truncation, since
    /// the coefficient is nonnegative and weights ≥ 2^(2n) vanish).
    fn convert(&mut self, a: Register, piece_width: u32) -> Result<()> {
        let total = a.width;
        for (k, out) in self.out.clone().into_iter().enumerate() {
            let offset = k as u32 * piece_width;
            if offset >= total {
                break;
            }
            let slice_width = total - offset;
            let target = a.slice(offset, slice_width);
            let addend = out.slice(0, out.width.min(slice_width));
            add_register_into(&mut self.add_buf, target, addend, self.pool, false, self.sink)?;
        }
        Ok(())
    }
}

fn slice_y<'a>(
    y: &YPieces<'a>,
    sum_regs: &'a [Option<Register>],
    sum_classical: &'a [Option<CPiece>],
    start: usize,
    len: usize,
    mid: bool,
) -> YPieces<'a> {
    if mid {
        match y {
            YPieces::Quantum(_) => YPieces::Quantum(&sum_regs[..len]),
            YPieces::Classical(_) => YPieces::Classical(&sum_classical[..len]),
        }
    } else {
        match y {
            YPieces::Quantum(pieces) => YPieces::Quantum(&pieces[start..start + len]),
            YPieces::Classical(pieces) => YPieces::Classical(&pieces[start..start + len]),
        }
    }
}

/// Slice an `n`-bit register into `count` pieces of `width` bits;
/// geometrically absent trailing pieces are `None`.
fn quantum_pieces(reg: Register, width: u32, count: u32) -> Vec<Option<Register>> {
    (0..count)
        .map(|i| {
            let start = i * width;
            (start < reg.width).then(|| reg.slice(start, width.min(reg.width - start)))
        })
        .collect()
}

fn classical_pieces(c: &BigUint, n: u32, width: u32, count: u32) -> Vec<Option<CPiece>> {
    (0..count)
        .map(|i| {
            let start = i * width;
            (start < n).then(|| {
                let piece_width = width.min(n - start);
                let mask = (BigUint::from(1u32) << piece_width) - 1u32;
                CPiece {
                    value: (c >> start) & mask,
                    width: piece_width,
                }
            })
        })
        .collect()
}

pub(crate) fn build_karatsuba(
    alloc: &mut QubitAllocator,
    n: u32,
    threshold: u32,
    c_constant: Option<&BigUint>,
    sink: &mut impl GateSink,
) -> Result<MultiplierWires> {
    build_karatsuba_with_floor(alloc, n, threshold, PIECE_GOAL_FLOOR, c_constant, sink)
}

/// As [`build_karatsuba`] but with an explicit piece-width floor, so tests
/// can force deep recursion at simulable sizes.
pub(crate) fn build_karatsuba_with_floor(
    alloc: &mut QubitAllocator,
    n: u32,
    threshold: u32,
    goal_floor: u32,
    c_constant: Option<&BigUint>,
    sink: &mut impl GateSink,
) -> Result<MultiplierWires> {
    if threshold < 2 {
        return Err(Error::InvalidArgument(format!(
            "recursion threshold must be at least 2, got {}",
            threshold
        )));
    }
    if n <= threshold {
        return build_schoolbook(alloc, n, c_constant, sink);
    }
    if let Some(c) = c_constant {
        if c.bits() > n as u64 {
            return Err(Error::InvalidArgument(format!(
                "classical factor needs {} bits, n is {}",
                c.bits(),
                n
            )));
        }
    }
    let geo = karatsuba_geometry(n, threshold, goal_floor);

    let a = alloc.alloc(2 * n)?;
    let b = alloc.alloc(n)?;
    let c_reg = match c_constant {
        None => Some(alloc.alloc(n)?),
        Some(_) => None,
    };
    let out: Vec<Register> = (0..2 * geo.pieces - 1)
        .map(|_| alloc.alloc(geo.out_width))
        .collect::<Result<_>>()?;
    let mut alloc_ws = || -> Result<Vec<Vec<Register>>> {
        (0..geo.levels)
            .map(|level| {
                (0..geo.pieces >> (level + 1))
                    .map(|_| alloc.alloc(geo.sum_width))
                    .collect()
            })
            .collect()
    };
    let ws_x = alloc_ws()?;
    let ws_y = if c_reg.is_some() {
        Some(alloc_ws()?)
    } else {
        None
    };
    let leaf_mask = alloc.alloc(geo.sum_width)?;
    let pool = alloc.alloc(geo.out_width.max(2 * n))?;

    let x_pieces = quantum_pieces(b, geo.piece_width, geo.pieces);
    let y_quantum = c_reg.map(|reg| quantum_pieces(reg, geo.piece_width, geo.pieces));
    let y_classical =
        c_constant.map(|c| classical_pieces(c, n, geo.piece_width, geo.pieces));

    let mut builder = KaratsubaBuilder {
        sink,
        out,
        ws_x,
        ws_y,
        leaf_mask,
        pool,
        sum_width: geo.sum_width,
        add_buf: Vec::new(),
        sums_buf: Vec::new(),
    };
    let y = match (&y_quantum, &y_classical) {
        (Some(q), _) => YPieces::Quantum(q),
        (_, Some(c)) => YPieces::Classical(c),
        _ => unreachable!(),
    };

    builder.kop(&x_pieces, &y, 0, 0, false, false)?;
    builder.convert(a, geo.piece_width)?;
    builder.kop(&x_pieces, &y, 0, 0, true, false)?;

    Ok(MultiplierWires { a, b, c: c_reg })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CountingSink, RecordingSink};
    use crate::sim::{verify_gate_list, VerifyCase};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn geometry_examples() {
        // One forced level just above the threshold.
        let g = karatsuba_geometry(4, 2, 96);
        assert_eq!((g.levels, g.pieces, g.piece_width), (1, 2, 2));
        // Default floor at sweep sizes.
        let g = karatsuba_geometry(1024, 16, 96);
        assert_eq!((g.levels, g.pieces, g.piece_width), (4, 16, 64));
        let g = karatsuba_geometry(8192, 16, 96);
        assert_eq!((g.levels, g.pieces, g.piece_width), (7, 128, 64));
    }

    #[test]
    fn passthrough_below_threshold_is_the_row_method() {
        for c in [None, Some(BigUint::from(179u32))] {
            let mut alloc1 = QubitAllocator::new();
            let mut sink1 = RecordingSink::default();
            let w1 = build_karatsuba(&mut alloc1, 8, 16, c.as_ref(), &mut sink1).unwrap();

            let mut alloc2 = QubitAllocator::new();
            let mut sink2 = RecordingSink::default();
            let w2 = build_schoolbook(&mut alloc2, 8, c.as_ref(), &mut sink2).unwrap();

            assert_eq!(sink1.gates, sink2.gates);
            assert_eq!(w1.a, w2.a);
            assert_eq!(alloc1.allocated(), alloc2.allocated());
        }
    }

    #[test]
    fn exhaustive_n3_threshold2_quantum() {
        let mut alloc = QubitAllocator::new();
        let mut sink = RecordingSink::default();
        let wires = build_karatsuba(&mut alloc, 3, 2, None, &mut sink).unwrap();
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
        assert!(
            report.is_ok(),
            "failures: {:?}, ancilla: {:?}",
            report.failures,
            report.ancilla_violations
        );
    }

    #[test]
    fn exhaustive_n4_threshold2_quantum() {
        let mut alloc = QubitAllocator::new();
        let mut sink = RecordingSink::default();
        let wires = build_karatsuba(&mut alloc, 4, 2, None, &mut sink).unwrap();
        let mut cases = Vec::with_capacity(1 << 16);
        for a0 in 0..256 {
            for b in 0..16 {
                for c in 0..16 {
                    cases.push(VerifyCase { a0, b, c });
                }
            }
        }
        let report =
            verify_gate_list(&sink.gates, alloc.allocated() as u64, &wires, &cases).unwrap();
        assert_eq!(report.cases, 65536);
        assert!(
            report.is_ok(),
            "failures: {:?}, ancilla: {:?}",
            report.failures,
            report.ancilla_violations
        );
        // The concrete spec'd product: 1 + 13·11 = 144.
        let hit = VerifyCase { a0: 1, b: 13, c: 11 };
        assert!(cases.contains(&hit));
    }

    /// Force three recursion levels at a simulable size via the test-only
    /// floor: n=9 splits into 8 pieces of 2 bits, with trailing pieces
    /// geometrically absent — exercising ragged and empty pieces, nested
    /// transforms, and sums-of-sums.
    #[test]
    fn deep_recursion_random_quantum() {
        let mut alloc = QubitAllocator::new();
        let mut sink = RecordingSink::default();
        let wires =
            build_karatsuba_with_floor(&mut alloc, 9, 2, 2, None, &mut sink).unwrap();
        assert_eq!(karatsuba_geometry(9, 2, 2).levels, 3);

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let cases: Vec<VerifyCase> = (0..300)
            .map(|_| VerifyCase {
                a0: rng.gen_range(0..1u128 << 18),
                b: rng.gen_range(0..1u128 << 9),
                c: rng.gen_range(0..1u128 << 9),
            })
            .collect();
        let report =
            verify_gate_list(&sink.gates, alloc.allocated() as u64, &wires, &cases).unwrap();
        assert!(
            report.is_ok(),
            "failures: {:?}, ancilla: {:?}",
            report.failures,
            report.ancilla_violations
        );
    }

    #[test]
    fn deep_recursion_random_classical() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc1a551ca1);
        for _ in 0..4 {
            let c_val: u128 = rng.gen_range(0..1u128 << 9);
            let c_big = BigUint::from(c_val as u64);
            let mut alloc = QubitAllocator::new();
            let mut sink = RecordingSink::default();
            let wires =
                build_karatsuba_with_floor(&mut alloc, 9, 2, 2, Some(&c_big), &mut sink)
                    .unwrap();
            let cases: Vec<VerifyCase> = (0..100)
                .map(|_| VerifyCase {
                    a0: rng.gen_range(0..1u128 << 18),
                    b: rng.gen_range(0..1u128 << 9),
                    c: c_val,
                })
                .collect();
            let report =
                verify_gate_list(&sink.gates, alloc.allocated() as u64, &wires, &cases).unwrap();
            assert!(
                report.is_ok(),
                "c={}: failures: {:?}, ancilla: {:?}",
                c_val,
                report.failures,
                report.ancilla_violations
            );
        }
    }

    #[test]
    fn constant_value_changes_only_cnot_and_x_counts() {
        let tally = |c: u64| {
            let mut alloc = QubitAllocator::new();
            let mut sink = CountingSink::default();
            let c_big = BigUint::from(c);
            build_karatsuba_with_floor(&mut alloc, 9, 2, 2, Some(&c_big), &mut sink).unwrap();
            sink.tally
        };
        let base = tally(0b1_1011_0010);
        for c in [0u64, 1, 511, 0b0_0101_0101] {
            let t = tally(c);
            assert_eq!(t.toffoli, base.toffoli, "c={}", c);
            assert_eq!(t.measurements, base.measurements, "c={}", c);
            assert_eq!(t.qubit_highwater, base.qubit_highwater, "c={}", c);
        }
    }

    #[test]
    fn classical_factor_is_cheaper_than_quantum() {
        let mut alloc = QubitAllocator::new();
        let mut sink_qq = CountingSink::default();
        build_karatsuba(&mut alloc, 200, 16, None, &mut sink_qq).unwrap();
        let mut alloc = QubitAllocator::new();
        let mut sink_qc = CountingSink::default();
        let c = BigUint::from(0xdead_beefu32);
        build_karatsuba(&mut alloc, 200, 16, Some(&c), &mut sink_qc).unwrap();
        assert!(sink_qc.tally.toffoli < sink_qq.tally.toffoli);
        assert_eq!(sink_qc.tally.measurements, 0);
    }
}
