//! Identifier sampling and the fixed-width code-words transmitted bit by bit.
//!
//! Bits are ordered most-significant first: `bit(0)` is the MSB and is the
//! first bit a node sends. With this order a per-bit elimination tournament
//! selects the numerically largest identifier.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use thiserror::Error;

/// Widest code-word the simulator represents.
pub const MAX_WIDTH: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodewordError {
    #[error("upper bound N must be at least 2, got {0}")]
    UpperBoundTooSmall(u128),
    #[error("value {value} does not fit in {width} bits (identifiers start at 1)")]
    OutOfRange { value: u128, width: u32 },
    #[error("code-word width {0} is outside 1..={MAX_WIDTH}")]
    BadWidth(u32),
    #[error("cannot draw {count} distinct identifiers from 1..={upper}")]
    NotEnoughIdentifiers { count: usize, upper: u128 },
}

/// `⌈log2 x⌉` for `x ≥ 1`, computed exactly.
pub fn ceil_log2(x: u128) -> u32 {
    assert!(x >= 1, "ceil_log2 of zero");
    if x == 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

/// Number of bits in a code-word for identifiers in `1..=upper_bound`: `⌈log2 N⌉ + 1`.
pub fn cid_width(upper_bound: u128) -> Result<u32, CodewordError> {
    if upper_bound < 2 {
        return Err(CodewordError::UpperBoundTooSmall(upper_bound));
    }
    Ok(ceil_log2(upper_bound) + 1)
}

/// A fixed-width binary code-word.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Codeword {
    value: u128,
    width: u32,
}

impl Codeword {
    /// Encodes any value `< 2^width`, zero included. Used for label broadcasts.
    pub fn from_value(value: u128, width: u32) -> Result<Self, CodewordError> {
        if width == 0 || width > MAX_WIDTH {
            return Err(CodewordError::BadWidth(width));
        }
        if width < MAX_WIDTH && value >> width != 0 {
            return Err(CodewordError::OutOfRange { value, width });
        }
        Ok(Self { value, width })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    /// Bit `i`, counted from the most significant end.
    pub fn bit(&self, i: u32) -> bool {
        debug_assert!(i < self.width);
        (self.value >> (self.width - 1 - i)) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width).map(move |i| self.bit(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.bits().map(u8::from).collect()
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Codeword(")?;
        for b in self.bits() {
            write!(f, "{}", u8::from(b))?;
        }
        write!(f, ")")
    }
}

/// Code-word of identifier `id`; requires `1 ≤ id < 2^width`.
pub fn encode_cid(id: u128, width: u32) -> Result<Codeword, CodewordError> {
    if id == 0 {
        return Err(CodewordError::OutOfRange { value: id, width });
    }
    Codeword::from_value(id, width)
}

/// Reads a most-significant-first bit sequence back as an integer.
pub fn decode_label(bits: &[u8]) -> u128 {
    bits.iter()
        .fold(0u128, |acc, &b| (acc << 1) | u128::from(b & 1))
}

/// A node's identifier together with its code-word and, for grouped runs, its group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeIdentity {
    pub id: u128,
    /// 1-based group index; `None` outside grouped protocols.
    pub group: Option<u64>,
    pub codeword: Codeword,
}

impl NodeIdentity {
    pub fn new(id: u128, upper_bound: u128) -> Result<Self, CodewordError> {
        if id == 0 || id > upper_bound {
            return Err(CodewordError::OutOfRange {
                value: id,
                width: cid_width(upper_bound)?,
            });
        }
        Ok(Self {
            id,
            group: None,
            codeword: encode_cid(id, cid_width(upper_bound)?)?,
        })
    }

    pub fn with_group(mut self, group: u64) -> Self {
        self.group = Some(group);
        self
    }
}

/// Draws `count` identifiers independently and uniformly from `1..=upper_bound`.
/// Collisions are kept.
pub fn sample_ids<R: Rng + ?Sized>(
    count: usize,
    upper_bound: u128,
    rng: &mut R,
) -> Result<Vec<NodeIdentity>, CodewordError> {
    cid_width(upper_bound)?;
    (0..count)
        .map(|_| NodeIdentity::new(rng.random_range(1..=upper_bound), upper_bound))
        .collect()
}

/// Draws `count` pairwise distinct identifiers from `1..=upper_bound` by rejection.
pub fn sample_distinct_ids<R: Rng + ?Sized>(
    count: usize,
    upper_bound: u128,
    rng: &mut R,
) -> Result<Vec<u128>, CodewordError> {
    cid_width(upper_bound)?;
    if (count as u128) > upper_bound {
        return Err(CodewordError::NotEnoughIdentifiers {
            count,
            upper: upper_bound,
        });
    }
    let mut seen = HashSet::with_capacity(count);
    let mut ids = Vec::with_capacity(count);
    while ids.len() < count {
        let id = rng.random_range(1..=upper_bound);
        if seen.insert(id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use proptest::prelude::*;

    #[test]
    fn widths() {
        assert_eq!(cid_width(8).unwrap(), 4);
        assert_eq!(cid_width(1000).unwrap(), 11);
        assert_eq!(cid_width(2).unwrap(), 2);
        assert_eq!(cid_width(16).unwrap(), 5);
        assert_eq!(
            cid_width(1).unwrap_err(),
            CodewordError::UpperBoundTooSmall(1)
        );
        assert!(cid_width(0).is_err());
    }

    #[test]
    fn ceil_log2_edges() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1 << 40), 40);
        assert_eq!(ceil_log2((1 << 40) + 1), 41);
        assert_eq!(ceil_log2(10u128.pow(20)), 67);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode_cid(10, 4).unwrap().to_bits(), vec![1, 0, 1, 0]);
        assert_eq!(encode_cid(1, 4).unwrap().to_bits(), vec![0, 0, 0, 1]);
        assert_eq!(encode_cid(5, 4).unwrap().to_bits(), vec![0, 1, 0, 1]);
        assert!(encode_cid(0, 4).is_err());
        assert!(encode_cid(16, 4).is_err());
        assert!(encode_cid(15, 4).is_ok());
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_label(&[0, 0, 0, 0]), 0);
        assert_eq!(decode_label(&[0, 1, 0, 1]), 5);
        assert_eq!(decode_label(&[]), 0);
    }

    #[test]
    fn round_trip_exhaustive_up_to_16_bits() {
        for width in 1..=16u32 {
            for x in 0..(1u128 << width) {
                let cw = Codeword::from_value(x, width).unwrap();
                assert_eq!(decode_label(&cw.to_bits()), x);
            }
        }
    }

    #[test]
    fn sample_empty_and_range() {
        let mut rng = stream_rng(3, 0);
        assert!(sample_ids(0, 10, &mut rng).unwrap().is_empty());
        let ids = sample_ids(3, 4, &mut rng).unwrap();
        assert_eq!(ids.len(), 3);
        assert!(ids.iter().all(|n| (1..=4).contains(&n.id)));
        assert!(ids.iter().all(|n| n.codeword.width() == 3));
    }

    #[test]
    fn distinct_sampling_rejects_impossible_requests() {
        let mut rng = stream_rng(1, 0);
        assert!(sample_distinct_ids(5, 4, &mut rng).is_err());
        let mut ids = sample_distinct_ids(4, 4, &mut rng).unwrap();
        ids.sort();
        assert_eq!(ids, vec![1, 2, 3, 4]);
    }

    #[test]
    fn duplicate_rate_matches_birthday_probability() {
        // P(no collision) = prod_{k<M} (1 - k/N)
        let (m, n, trials) = (8usize, 64u128, 10_000u64);
        let p_clean: f64 = (0..m).map(|k| 1.0 - k as f64 / n as f64).product();
        let p_dup = 1.0 - p_clean;
        let sigma = (p_dup * (1.0 - p_dup) / trials as f64).sqrt();
        let mut dups = 0u64;
        for seed in 0..trials {
            let mut rng = stream_rng(seed, 0);
            let ids = sample_ids(m, n, &mut rng).unwrap();
            let set: HashSet<_> = ids.iter().map(|x| x.id).collect();
            if set.len() < m {
                dups += 1;
            }
        }
        let rate = dups as f64 / trials as f64;
        assert!(
            (rate - p_dup).abs() <= 3.0 * sigma,
            "empirical {rate} vs exact {p_dup} (sigma {sigma})"
        );
    }

    proptest! {
        #[test]
        fn codeword_order_is_numeric_order(a in 1u128..(1 << 20), b in 1u128..(1 << 20)) {
            let ca = encode_cid(a, 21).unwrap().to_bits();
            let cb = encode_cid(b, 21).unwrap().to_bits();
            prop_assert_eq!(ca.cmp(&cb), a.cmp(&b));
        }

        #[test]
        fn round_trip_wide(x in any::<u64>(), extra in 0u32..64) {
            let width = (128 - u128::from(x).leading_zeros()).max(1) + extra;
            let cw = Codeword::from_value(u128::from(x), width).unwrap();
            prop_assert_eq!(cw.width(), width);
            prop_assert_eq!(decode_label(&cw.to_bits()), u128::from(x));
        }
    }
}
