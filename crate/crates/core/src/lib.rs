//! Verification laboratory for two-party pseudo-telepathy games.
//!
//! The crate models games as a [`Game`] (inputs, promise, winning
//! predicate), shared resources as a [`Resource`] (PR-box branches or
//! quantum measurement outcomes) and strategies as a [`Strategy`] that maps
//! each party's own input and private view of the resource to an output.
//! [`verify_exhaustive`] then checks every promise-satisfying input pair
//! against every branch of the resource, and [`simulate`] plays seeded
//! rounds the way an outside observer would.
//!
//! Concrete games:
//!
//! * [`kscolour`] and [`ksgame`]: Kochen-Specker sets, colourability
//!   searches and the impossible-colouring game with single-box strategies.
//! * [`magic`]: the odd-size magic-square game and its single-box strategy.
//! * [`quantum`]: the two-ebit quantum strategy for the magic square.
//! * [`nlbox`]: the PR box itself and CHSH / no-signalling diagnostics.
//!
//! Inner loops run on rayon when the `parallel` feature is enabled
//! (default); see [`Exec`].

pub mod exec;
pub mod game;
pub mod kscolour;
pub mod ksgame;
pub mod magic;
pub mod nlbox;
pub mod quantum;
pub mod report;
pub mod verify;

pub use exec::Exec;
pub use game::{BoxWiring, Game, Party, Resource, ResourceBranch, Strategy, Violation, Weight, WiredPrBox};
pub use report::{ReportDocument, TOOL_VERSION};
pub use verify::{
    simulate, simulate_with, verify_exhaustive, verify_exhaustive_with, Failure, SimError,
    SimStats, VerificationReport, VerifyError,
};
