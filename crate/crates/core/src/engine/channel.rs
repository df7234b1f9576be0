//! The shared beeping channel: listeners hear the OR of all transmissions.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotAction {
    Beep,
    Listen,
    Sleep,
}

impl SlotAction {
    pub fn is_awake(self) -> bool {
        !matches!(self, SlotAction::Sleep)
    }
}

/// What a listening node perceives. Beeping and sleeping nodes get nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelOutcome {
    BeepHeard,
    Silence,
}

impl ChannelOutcome {
    pub fn heard_beep(self) -> bool {
        matches!(self, ChannelOutcome::BeepHeard)
    }
}

/// Resolves one slot. Returns an outcome for every listener, in input order.
///
/// A listener cannot beep in the same slot, so any beep it hears came from
/// some other node.
pub fn resolve_channel<K: Copy>(actions: &[(K, SlotAction)]) -> Vec<(K, ChannelOutcome)> {
    let busy = actions.iter().any(|(_, a)| *a == SlotAction::Beep);
    let outcome = if busy {
        ChannelOutcome::BeepHeard
    } else {
        ChannelOutcome::Silence
    };
    actions
        .iter()
        .filter(|(_, a)| *a == SlotAction::Listen)
        .map(|(k, _)| (*k, outcome))
        .collect()
}

impl fmt::Display for SlotAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlotAction::Beep => "BEEP",
            SlotAction::Listen => "LISTEN",
            SlotAction::Sleep => "SLEEP",
        })
    }
}

impl FromStr for SlotAction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "BEEP" => Ok(SlotAction::Beep),
            "LISTEN" => Ok(SlotAction::Listen),
            "SLEEP" => Ok(SlotAction::Sleep),
            other => Err(format!("unknown action {other:?}")),
        }
    }
}

impl fmt::Display for ChannelOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelOutcome::BeepHeard => "BEEP_HEARD",
            ChannelOutcome::Silence => "SILENCE",
        })
    }
}

impl FromStr for ChannelOutcome {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "BEEP_HEARD" => Ok(ChannelOutcome::BeepHeard),
            "SILENCE" => Ok(ChannelOutcome::Silence),
            other => Err(format!("unknown outcome {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use SlotAction::*;

    #[test]
    fn single_beeper_reaches_listener() {
        let out = resolve_channel(&[('a', Beep), ('b', Listen)]);
        assert_eq!(out, vec![('b', ChannelOutcome::BeepHeard)]);
    }

    #[test]
    fn no_transmitter_means_silence() {
        let out = resolve_channel(&[('a', Listen), ('b', Listen)]);
        assert_eq!(
            out,
            vec![
                ('a', ChannelOutcome::Silence),
                ('b', ChannelOutcome::Silence)
            ]
        );
    }

    #[test]
    fn colliding_beeps_are_one_beep_and_beepers_get_nothing() {
        let out = resolve_channel(&[('a', Beep), ('b', Beep), ('c', Listen)]);
        assert_eq!(out, vec![('c', ChannelOutcome::BeepHeard)]);
    }

    #[test]
    fn sleepers_get_nothing() {
        let out = resolve_channel(&[('a', Sleep), ('b', Listen), ('c', Sleep)]);
        assert_eq!(out, vec![('b', ChannelOutcome::Silence)]);
    }

    fn action() -> impl Strategy<Value = SlotAction> {
        prop_oneof![Just(Beep), Just(Listen), Just(Sleep)]
    }

    proptest! {
        #[test]
        fn resolution_is_order_independent(mut acts in prop::collection::vec(action(), 0..12), rot in 0usize..12) {
            let tagged: Vec<(usize, SlotAction)> = acts.drain(..).enumerate().collect();
            let mut shuffled = tagged.clone();
            if !shuffled.is_empty() {
                let k = rot % shuffled.len();
                shuffled.rotate_left(k);
            }
            let mut a = resolve_channel(&tagged);
            let mut b = resolve_channel(&shuffled);
            a.sort_by_key(|x| x.0);
            b.sort_by_key(|x| x.0);
            prop_assert_eq!(&a, &b);
            let any_beep = tagged.iter().any(|(_, x)| *x == Beep);
            for (k, o) in a {
                prop_assert_eq!(tagged[k].1, Listen);
                prop_assert_eq!(o.heard_beep(), any_beep);
            }
        }
    }
}
