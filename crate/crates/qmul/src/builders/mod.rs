//! Gate-stream builders for in-place adders and the plus-equal multipliers.
//!
//! Every multiplier computes `a += b·c mod 2^(2n)` on a `2n`-bit accumulator
//! `a` and an `n`-bit quantum factor `b`; the factor `c` is either a second
//! `n`-bit quantum register (QQ mode) or a classical compile-time constant
//! (QC mode). All workspace ancillae are returned to zero.

pub mod adder;
pub mod karatsuba;
pub mod schoolbook;
pub mod windowed;

pub use adder::{adder_toffoli_cost, emit_controlled_add, emit_inplace_add, AddOperand};
pub use windowed::{
    build_lookup, build_unlookup, choose_window, lookup_toffoli_cost, unlookup_toffoli_cost,
    window_table, LookupTable,
};

use crate::circuit::{CircuitTally, CountingSink, GateSink, QubitAllocator};
use crate::error::{Error, Result};
use crate::sim::MultiplierWires;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Which multiplication circuit to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Quadratic row-by-row accumulation.
    Schoolbook,
    /// Recursive three-product splitting, Θ(n^lg3) Toffolis.
    Karatsuba,
    /// Table-lookup windowing over a classical factor, O(n²/lg n) Toffolis.
    Windowed,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Schoolbook,
        Algorithm::Karatsuba,
        Algorithm::Windowed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Schoolbook => "schoolbook",
            Algorithm::Karatsuba => "karatsuba",
            Algorithm::Windowed => "windowed",
        }
    }
}

/// Whether the factor `c` is a quantum register or a classical constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperandMode {
    /// Both factors are quantum registers.
    Qq,
    /// Factor `c` is a classical compile-time constant.
    Qc,
}

impl OperandMode {
    pub fn name(self) -> &'static str {
        match self {
            OperandMode::Qq => "qq",
            OperandMode::Qc => "qc",
        }
    }
}

/// Window width for the windowed algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowSize {
    /// Pick the width minimizing the documented cost model.
    Auto,
    /// Fixed width in bits, 1 ≤ w ≤ 16.
    Bits(u32),
}

/// Largest selectable window width (bounds table materialization at 2^16
/// entries).
pub const MAX_WINDOW_BITS: u32 = 16;

/// Largest supported factor width in bits.
pub const MAX_FACTOR_BITS: u32 = 1 << 20;

/// Full description of one multiplier build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplySpec {
    pub algorithm: Algorithm,
    /// Bits per input factor.
    pub n: u32,
    pub mode: OperandMode,
    /// Width at or below which the Karatsuba builder delegates to the
    /// row method outright (≥ 2).
    pub karatsuba_threshold: u32,
    pub window: WindowSize,
}

/// Default Karatsuba base-case cutoff.
pub const DEFAULT_KARATSUBA_THRESHOLD: u32 = 16;

impl MultiplySpec {
    pub fn new(algorithm: Algorithm, n: u32, mode: OperandMode) -> Self {
        MultiplySpec {
            algorithm,
            n,
            mode,
            karatsuba_threshold: DEFAULT_KARATSUBA_THRESHOLD,
            window: WindowSize::Auto,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument(
                "factor width n must be at least 1".into(),
            ));
        }
        if self.n > MAX_FACTOR_BITS {
            return Err(Error::InvalidArgument(format!(
                "factor width n = {} exceeds the supported maximum {}",
                self.n, MAX_FACTOR_BITS
            )));
        }
        if self.karatsuba_threshold < 2 {
            return Err(Error::InvalidArgument(format!(
                "karatsuba threshold must be at least 2, got {}",
                self.karatsuba_threshold
            )));
        }
        if let WindowSize::Bits(w) = self.window {
            if w == 0 || w > MAX_WINDOW_BITS {
                return Err(Error::InvalidArgument(format!(
                    "window width must be in [1, {}], got {}",
                    MAX_WINDOW_BITS, w
                )));
            }
        }
        if self.algorithm == Algorithm::Windowed && self.mode == OperandMode::Qq {
            return Err(Error::UnsupportedMode(
                "windowed multiplication precomputes tables from a classical factor; \
                 it does not support a quantum factor c"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Build the multiplier described by `spec`, streaming its gates into
/// `sink`. QC mode requires `c_constant` (< 2^n); QQ mode forbids it.
/// Returns the input/output registers; all other allocated registers are
/// workspace and end in the zero state.
pub fn build_multiplier(
    spec: &MultiplySpec,
    c_constant: Option<&BigUint>,
    sink: &mut impl GateSink,
) -> Result<MultiplierWires> {
    spec.validate()?;
    match (spec.mode, c_constant) {
        (OperandMode::Qc, None) => {
            return Err(Error::InvalidArgument(
                "classical-constant mode requires a constant for factor c".into(),
            ));
        }
        (OperandMode::Qq, Some(_)) => {
            return Err(Error::InvalidArgument(
                "quantum-quantum mode takes no constant for factor c".into(),
            ));
        }
        _ => {}
    }
    if let Some(c) = c_constant {
        if c.bits() > spec.n as u64 {
            return Err(Error::InvalidArgument(format!(
                "classical factor needs {} bits, n is {}",
                c.bits(),
                spec.n
            )));
        }
    }
    let mut alloc = QubitAllocator::new();
    match spec.algorithm {
        Algorithm::Schoolbook => schoolbook::build_schoolbook(&mut alloc, spec.n, c_constant, sink),
        Algorithm::Karatsuba => karatsuba::build_karatsuba(
            &mut alloc,
            spec.n,
            spec.karatsuba_threshold,
            c_constant,
            sink,
        ),
        Algorithm::Windowed => {
            let window = match spec.window {
                WindowSize::Auto => None,
                WindowSize::Bits(w) => Some(w),
            };
            let c = c_constant.expect("validated above");
            windowed::build_windowed(&mut alloc, spec.n, c, window, sink)
        }
    }
}

/// Build into a counting sink and return just the tally — the cheap path
/// for resource estimation.
pub fn tally_multiplier(spec: &MultiplySpec, c_constant: Option<&BigUint>) -> Result<CircuitTally> {
    let mut sink = CountingSink::default();
    build_multiplier(spec, c_constant, &mut sink)?;
    Ok(sink.tally)
}

/// Deterministic pseudorandom `n`-bit constant for QC-mode builds when the
/// caller does not supply one. Stable across runs and platforms.
pub fn default_qc_constant(n: u32) -> BigUint {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE ^ n as u64);
    let words: Vec<u32> = (0..n.div_ceil(32)).map(|_| rng.gen::<u32>()).collect();
    let mask = (BigUint::from(1u32) << n) - 1u32;
    BigUint::new(words) & mask
}
