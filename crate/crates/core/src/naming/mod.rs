//! Deterministic naming of `M` nodes with distinct identifiers.
//!
//! A season is a sequence of two-slot TEST exchanges, one per code-word bit,
//! that eliminates everyone but the largest identifier still unlabeled.
//! [`detnaml`] lets nodes sleep through exchanges whose outcome they already
//! know, keyed by their listen slot (STL) and notify slots (STN).
//! [`reference`](mod@reference) keeps everyone awake and serves as the oracle.

pub mod detnaml;
pub mod reference;
mod state;

pub use detnaml::{detnaml_run, DetNamlDriver, DetNamlNode};
pub use reference::{reference_detnaml_run, ReferenceNode};
pub use state::{
    season_end, test, test_actions, NamingState, SeasonEnd, SeasonLayout, Status, Stl,
};
