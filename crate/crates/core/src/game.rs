//! Game, resource and strategy abstractions shared by every game.

use std::collections::BTreeMap;
use std::fmt::{self, Debug};

use num_rational::Rational64;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::nlbox::pr_branches;

/// Absolute tolerance for floating-point branch weights summing to one.
pub const FLOAT_WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Alice => f.write_str("Alice"),
            Party::Bob => f.write_str("Bob"),
        }
    }
}

/// A failed winning condition, identified by a short stable tag
/// (`exactly-one`, `value-mismatch`, `row-parity`, ...).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Violation(pub &'static str);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// A two-party game: input sets, a promise on input pairs and a winning
/// relation on inputs and outputs.
///
/// Rounds outside the promise are automatic wins, so the verifier only
/// ever enumerates [`Game::promise_pairs`].
pub trait Game: Sync {
    type AliceInput: Clone + Debug + Send + Sync;
    type BobInput: Clone + Debug + Send + Sync;
    type AliceOutput: Clone + Debug + Send;
    type BobOutput: Clone + Debug + Send;

    fn name(&self) -> String;

    fn parameters(&self) -> BTreeMap<String, Value> {
        BTreeMap::new()
    }

    fn alice_inputs(&self) -> Vec<Self::AliceInput>;

    fn bob_inputs(&self) -> Vec<Self::BobInput>;

    fn promise(&self, alice: &Self::AliceInput, bob: &Self::BobInput) -> bool;

    /// `Ok(())` when the round is won, otherwise the first violated condition.
    fn judge(
        &self,
        alice: &Self::AliceInput,
        bob: &Self::BobInput,
        alice_out: &Self::AliceOutput,
        bob_out: &Self::BobOutput,
    ) -> Result<(), Violation>;

    fn wins(
        &self,
        alice: &Self::AliceInput,
        bob: &Self::BobInput,
        alice_out: &Self::AliceOutput,
        bob_out: &Self::BobOutput,
    ) -> bool {
        self.judge(alice, bob, alice_out, bob_out).is_ok()
    }

    /// Promise-satisfying input pairs in lexicographic (Alice, Bob) order.
    fn promise_pairs(&self) -> Vec<(Self::AliceInput, Self::BobInput)> {
        let bobs = self.bob_inputs();
        self.alice_inputs()
            .into_iter()
            .flat_map(|x| {
                bobs.iter()
                    .filter(|y| self.promise(&x, y))
                    .map(|y| (x.clone(), y.clone()))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    fn inputs_json(&self, alice: &Self::AliceInput, bob: &Self::BobInput) -> Value;

    fn outputs_json(&self, alice_out: &Self::AliceOutput, bob_out: &Self::BobOutput) -> Value;
}

/// Probability weight attached to a resource branch.
pub trait Weight: Copy + Debug + Send + Sync {
    fn to_f64(self) -> f64;

    fn sums_to_one(weights: &[Self]) -> bool;

    fn describe_sum(weights: &[Self]) -> String;
}

impl Weight for Rational64 {
    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn sums_to_one(weights: &[Self]) -> bool {
        weights.iter().copied().sum::<Rational64>().is_one()
    }

    fn describe_sum(weights: &[Self]) -> String {
        weights.iter().copied().sum::<Rational64>().to_string()
    }
}

impl Weight for f64 {
    fn to_f64(self) -> f64 {
        self
    }

    fn sums_to_one(weights: &[Self]) -> bool {
        (weights.iter().sum::<f64>() - 1.0).abs() <= FLOAT_WEIGHT_TOLERANCE
    }

    fn describe_sum(weights: &[Self]) -> String {
        format!("{:e}", weights.iter().sum::<f64>())
    }
}

/// One outcome of a shared resource for fixed game inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct ResourceBranch<A, B, W> {
    pub label: usize,
    pub weight: W,
    pub alice_view: A,
    pub bob_view: B,
}

/// A shared resource: for every input pair, the branches the parties may
/// observe. Views must only carry what each party sees locally.
pub trait Resource<G: Game>: Sync {
    type AliceView: Clone + Debug + Send + Sync;
    type BobView: Clone + Debug + Send + Sync;
    type Weight: Weight;

    fn branches(
        &self,
        alice: &G::AliceInput,
        bob: &G::BobInput,
    ) -> Vec<ResourceBranch<Self::AliceView, Self::BobView, Self::Weight>>;

    fn branch_json(&self, branch: &ResourceBranch<Self::AliceView, Self::BobView, Self::Weight>) -> Value;
}

/// A deterministic strategy. Each party sees only its own input and its
/// own view of the resource; the signature rules out communication.
pub trait Strategy<G: Game, AliceView, BobView>: Sync {
    fn alice(&self, input: &G::AliceInput, view: &AliceView) -> G::AliceOutput;

    fn bob(&self, input: &G::BobInput, view: &BobView) -> G::BobOutput;
}

/// Decides each party's PR-box input from that party's game input.
pub trait BoxWiring<G: Game>: Sync {
    fn alice_box_input(&self, input: &G::AliceInput) -> u8;

    fn bob_box_input(&self, input: &G::BobInput) -> u8;
}

/// A single PR box whose inputs are chosen by a [`BoxWiring`]. Each party's
/// view is its own box output bit.
#[derive(Clone, Copy, Debug)]
pub struct WiredPrBox<'a, W>(pub &'a W);

impl<G, W> Resource<G> for WiredPrBox<'_, W>
where
    G: Game,
    W: BoxWiring<G>,
{
    type AliceView = u8;
    type BobView = u8;
    type Weight = Rational64;

    fn branches(&self, alice: &G::AliceInput, bob: &G::BobInput) -> Vec<ResourceBranch<u8, u8, Rational64>> {
        let x = self.0.alice_box_input(alice);
        let y = self.0.bob_box_input(bob);
        pr_branches(x, y)
            .iter()
            .enumerate()
            .map(|(label, br)| ResourceBranch {
                label,
                weight: br.weight,
                alice_view: br.a,
                bob_view: br.b,
            })
            .collect()
    }

    fn branch_json(&self, branch: &ResourceBranch<u8, u8, Rational64>) -> Value {
        json!({
            "label": branch.label,
            "a": branch.alice_view,
            "b": branch.bob_view,
        })
    }
}
