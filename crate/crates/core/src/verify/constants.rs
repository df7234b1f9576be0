//! Regression thresholds for the asymptotic bounds.
//!
//! Obtained once with `cargo run --release --example calibrate`: each
//! constant is the largest ratio observed in that sweep times 1.1.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    /// `c` in `maxAwake ≤ M + ⌈log2 N⌉ + 1 + c·⌈log2 N⌉` for the deterministic protocol.
    pub c_other: f64,
    /// `C` in `maxAwake ≤ C·(log2 n)²` for grouped naming.
    pub c_energy: f64,
    /// `C′` in `totalSlots ≤ C′·n·log2 n` for grouped naming.
    pub c_time: f64,
}

pub const FROZEN: BoundConstants = BoundConstants {
    // largest observed: 4.0714 over six points from 10^2 to 10^10, 20 seeds each
    c_other: 4.48,
    // largest observed: 2.1300 at n = 2^10, clean runs of 100 seeds per size
    c_energy: 2.343,
    // largest observed: 38.2239 at n = 2^10
    c_time: 42.05,
};
