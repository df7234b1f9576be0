//! The beeping channel and a single TEST exchange.
//!
//! ```text
//! cargo run --example channel
//! ```

use beepnet::engine::{resolve_channel, ChannelOutcome, SlotAction};
use beepnet::naming::{test, test_actions};

fn main() {
    let slot = [
        ("a", SlotAction::Beep),
        ("b", SlotAction::Listen),
        ("c", SlotAction::Sleep),
        ("d", SlotAction::Listen),
    ];
    for (node, outcome) in resolve_channel(&slot) {
        println!("{node}: {outcome}");
    }

    // Two contenders, bits 0 and 1, meet in one TEST.
    let zero = test_actions(false);
    let one = test_actions(true);
    let mut heard = [ChannelOutcome::Silence; 2];
    for i in 0..2 {
        for (node, o) in resolve_channel(&[(0, zero[i]), (1, one[i])]) {
            if o.heard_beep() {
                heard[node] = o;
            }
        }
    }
    println!("bit 0 node: {}", test(false, heard[0]));
    println!("bit 1 node: {}", test(true, heard[1]));
}
