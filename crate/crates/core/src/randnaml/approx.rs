//! Stand-in for the size-approximation phase.
//!
//! Only the contract of a linear approximation is reproduced: the estimate
//! `u` lands in `[n/2, 2n]`, and every node pays `⌈log2 N⌉` listening slots
//! for it at the start of the run.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::codeword::ceil_log2;
use crate::error::SimError;

/// `N` never drops below this, so code-words are at least five bits wide.
pub const MIN_UPPER_BOUND: u128 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ApproxMode {
    /// `u = n`.
    #[default]
    Exact,
    /// `u` uniform over the integers of `[⌈n/2⌉, 2n]`.
    Jittered,
}

impl fmt::Display for ApproxMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ApproxMode::Exact => "exact",
            ApproxMode::Jittered => "jittered",
        })
    }
}

impl FromStr for ApproxMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(ApproxMode::Exact),
            "jittered" => Ok(ApproxMode::Jittered),
            other => Err(format!("unknown approximation mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Approximation {
    pub u: u64,
    /// `N = max((2u)², 16)`.
    pub upper_bound: u128,
    /// Slots every node spends awake in the approximation phase, `⌈log2 N⌉`.
    pub charge: u64,
}

impl Approximation {
    pub fn from_estimate(u: u64) -> Result<Self, SimError> {
        if u == 0 {
            return Err(SimError::Invalid("size estimate must be positive".into()));
        }
        let two_u = 2 * u128::from(u);
        let upper_bound = (two_u * two_u).max(MIN_UPPER_BOUND);
        Ok(Self {
            u,
            upper_bound,
            charge: u64::from(ceil_log2(upper_bound)),
        })
    }
}

pub fn approximate_size<R: Rng + ?Sized>(
    n_true: u64,
    rng: &mut R,
    mode: ApproxMode,
) -> Result<Approximation, SimError> {
    if n_true == 0 {
        return Err(SimError::Invalid("network size must be at least 1".into()));
    }
    let u = match mode {
        ApproxMode::Exact => n_true,
        ApproxMode::Jittered => rng.random_range(n_true.div_ceil(2)..=2 * n_true),
    };
    Approximation::from_estimate(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn exact_mode() {
        let a = approximate_size(100, &mut stream_rng(0, 0), ApproxMode::Exact).unwrap();
        assert_eq!((a.u, a.upper_bound), (100, 40_000));
        assert_eq!(a.charge, 16);
    }

    #[test]
    fn single_node_is_floored() {
        for seed in 0..50 {
            for mode in [ApproxMode::Exact, ApproxMode::Jittered] {
                let a = approximate_size(1, &mut stream_rng(seed, 0), mode).unwrap();
                assert!((1..=2).contains(&a.u));
                assert_eq!(a.upper_bound, 16);
                assert_eq!(a.charge, 4);
            }
        }
    }

    #[test]
    fn jitter_stays_in_linear_band() {
        for seed in 0..10_000u64 {
            let n = 1 + seed % 5000;
            let a = approximate_size(n, &mut stream_rng(seed, 1), ApproxMode::Jittered).unwrap();
            assert!(2 * a.u >= n && a.u <= 2 * n, "u={} n={n}", a.u);
            assert!(a.upper_bound >= u128::from(n) * u128::from(n));
        }
    }

    #[test]
    fn zero_rejected() {
        assert!(approximate_size(0, &mut stream_rng(0, 0), ApproxMode::Exact).is_err());
        assert!(Approximation::from_estimate(0).is_err());
    }
}
