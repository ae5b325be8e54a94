//! Shared inputs for the criterion benchmarks in `benches/`.

use cotwist_core::presets::preset;
use cotwist_core::{CycNum, Presentation, TwistSpec};

/// Canonical presentation and Klein twist data of a preset.
pub fn preset_inputs(name: &str) -> (Presentation, TwistSpec) {
    let p = preset(name).expect("built-in preset");
    let spec = p.spec().expect("preset data is consistent");
    (p.presentation, spec)
}

/// A dense element of `Q(zeta_n)` with small coefficients.
pub fn dense_cyc(n: u32, seed: i64) -> CycNum {
    (0..n as i64).fold(CycNum::zero(n), |acc, k| {
        &acc + &(&CycNum::from_fraction(n, (seed + 3 * k) % 7 - 3, 1 + k % 4) * &CycNum::zeta_pow(n, k))
    })
}
