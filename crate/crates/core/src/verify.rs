//! Exhaustive and seeded Monte-Carlo verification engines.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::exec::Exec;
use crate::game::{Game, Resource, ResourceBranch, Strategy, Weight};

/// Rounds handled by one independently seeded RNG stream in [`simulate`].
pub const SIM_BLOCK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub inputs: Value,
    pub branch: Value,
    pub outputs: Value,
    pub violated: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub game: String,
    pub parameters: BTreeMap<String, Value>,
    pub cases_total: u64,
    pub cases_won: u64,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn all_won(&self) -> bool {
        self.cases_won == self.cases_total && self.failures.is_empty()
    }

    pub fn with_parameter(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_owned(), value.into());
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("branch weights for inputs {inputs} sum to {total}, not 1")]
    WeightSum { inputs: String, total: String },
}

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("rounds must be at least 1")]
    NoRounds,
    #[error("game has no promise-satisfying input pairs")]
    EmptyPromise,
    #[error(transparent)]
    Resource(#[from] VerifyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimStats {
    pub rounds: u64,
    pub wins: u64,
    pub win_rate: f64,
}

type Branches<R, G> = Vec<
    ResourceBranch<<R as Resource<G>>::AliceView, <R as Resource<G>>::BobView, <R as Resource<G>>::Weight>,
>;

fn checked_branches<G, R>(game: &G, resource: &R, x: &G::AliceInput, y: &G::BobInput) -> Result<Branches<R, G>, VerifyError>
where
    G: Game,
    R: Resource<G>,
{
    let branches = resource.branches(x, y);
    let weights: Vec<R::Weight> = branches.iter().map(|b| b.weight).collect();
    if !<R::Weight as Weight>::sums_to_one(&weights) {
        return Err(VerifyError::WeightSum {
            inputs: game.inputs_json(x, y).to_string(),
            total: <R::Weight as Weight>::describe_sum(&weights),
        });
    }
    Ok(branches)
}

/// Checks every promise-satisfying input pair against every resource
/// branch, using the default [`Exec`] mode.
pub fn verify_exhaustive<G, R, S>(game: &G, strategy: &S, resource: &R) -> Result<VerificationReport, VerifyError>
where
    G: Game,
    R: Resource<G>,
    S: Strategy<G, R::AliceView, R::BobView>,
{
    verify_exhaustive_with(Exec::default(), game, strategy, resource)
}

pub fn verify_exhaustive_with<G, R, S>(
    exec: Exec,
    game: &G,
    strategy: &S,
    resource: &R,
) -> Result<VerificationReport, VerifyError>
where
    G: Game,
    R: Resource<G>,
    S: Strategy<G, R::AliceView, R::BobView>,
{
    let pairs = game.promise_pairs();
    let per_pair = exec.map(&pairs, |(x, y)| -> Result<(u64, Vec<Failure>), VerifyError> {
        let branches = checked_branches(game, resource, x, y)?;
        let mut failures = Vec::new();
        for branch in &branches {
            let a = strategy.alice(x, &branch.alice_view);
            let b = strategy.bob(y, &branch.bob_view);
            if let Err(violation) = game.judge(x, y, &a, &b) {
                failures.push(Failure {
                    inputs: game.inputs_json(x, y),
                    branch: resource.branch_json(branch),
                    outputs: game.outputs_json(&a, &b),
                    violated: violation.0.to_owned(),
                });
            }
        }
        Ok((branches.len() as u64, failures))
    });

    let mut cases_total = 0;
    let mut failures = Vec::new();
    for item in per_pair {
        let (n, f) = item?;
        cases_total += n;
        failures.extend(f);
    }
    Ok(VerificationReport {
        game: game.name(),
        parameters: game.parameters(),
        cases_total,
        cases_won: cases_total - failures.len() as u64,
        failures,
    })
}

/// Plays `rounds` seeded rounds: inputs uniform over promise pairs, the
/// branch drawn by weight. Reproducible for a given `(seed, rounds)`
/// regardless of [`Exec`] mode.
pub fn simulate<G, R, S>(game: &G, strategy: &S, resource: &R, rounds: u64, seed: u64) -> Result<SimStats, SimError>
where
    G: Game,
    R: Resource<G>,
    S: Strategy<G, R::AliceView, R::BobView>,
{
    simulate_with(Exec::default(), game, strategy, resource, rounds, seed)
}

pub fn simulate_with<G, R, S>(
    exec: Exec,
    game: &G,
    strategy: &S,
    resource: &R,
    rounds: u64,
    seed: u64,
) -> Result<SimStats, SimError>
where
    G: Game,
    R: Resource<G>,
    S: Strategy<G, R::AliceView, R::BobView>,
{
    if rounds == 0 {
        return Err(SimError::NoRounds);
    }
    let pairs = game.promise_pairs();
    if pairs.is_empty() {
        return Err(SimError::EmptyPromise);
    }
    let tables = exec
        .map(&pairs, |(x, y)| checked_branches(game, resource, x, y))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let blocks = rounds.div_ceil(SIM_BLOCK);
    let wins: u64 = exec
        .map_range(0..blocks, |block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let len = SIM_BLOCK.min(rounds - block * SIM_BLOCK);
            let mut wins = 0u64;
            for _ in 0..len {
                let idx = rng.random_range(0..pairs.len());
                let (x, y) = &pairs[idx];
                let branch = pick_branch(&tables[idx], rng.random::<f64>());
                let a = strategy.alice(x, &branch.alice_view);
                let b = strategy.bob(y, &branch.bob_view);
                if game.wins(x, y, &a, &b) {
                    wins += 1;
                }
            }
            wins
        })
        .into_iter()
        .sum();

    Ok(SimStats {
        rounds,
        wins,
        win_rate: wins as f64 / rounds as f64,
    })
}

fn pick_branch<A, B, W: Weight>(branches: &[ResourceBranch<A, B, W>], u: f64) -> &ResourceBranch<A, B, W> {
    let total: f64 = branches.iter().map(|b| b.weight.to_f64()).sum();
    let target = u * total;
    let mut acc = 0.0;
    for b in branches {
        acc += b.weight.to_f64();
        if target < acc {
            return b;
        }
    }
    branches.last().expect("weights sum to one, so at least one branch exists")
}
