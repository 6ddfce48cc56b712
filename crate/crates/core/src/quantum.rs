//! Two-ebit strategy for the magic-square game.
//!
//! Amplitudes are indexed by the bits (a, c, b, d), a most significant.
//! Alice holds qubits a and c, Bob holds b and d. Local unitaries act on
//! column vectors in the basis |00>, |01>, |10>, |11> of their party's two
//! qubits, so the joint transformation is `U ⊗ V` in that index order.

use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exec::Exec;
use crate::game::{Party, Resource, ResourceBranch, Strategy};
use crate::magic::{MagicError, MagicGame};
use crate::verify::{verify_exhaustive_with, VerificationReport, VerifyError};

/// Outcomes below this probability are treated as impossible.
pub const SUPPORT_THRESHOLD: f64 = 1e-9;
pub const UNITARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantumError {
    #[error("unitary index {0} is outside 1..=3")]
    UnitaryIndex(usize),
    #[error("input {index} is outside 1..={n}")]
    Input { index: usize, n: usize },
    #[error(transparent)]
    Magic(#[from] MagicError),
    #[error(transparent)]
    Probabilities(#[from] VerifyError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    amplitudes: [Complex64; 16],
}

fn index(a: u8, c: u8, b: u8, d: u8) -> usize {
    (a as usize) << 3 | (c as usize) << 2 | (b as usize) << 1 | d as usize
}

impl JointState {
    pub fn amplitude(&self, a: u8, c: u8, b: u8, d: u8) -> Complex64 {
        self.amplitudes[index(a, c, b, d)]
    }

    pub fn amplitudes(&self) -> &[Complex64; 16] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `(U ⊗ V)|ψ>` with U on (a, c) and V on (b, d).
    pub fn apply(&self, u: &LocalUnitary, v: &LocalUnitary) -> JointState {
        let mut out = [Complex64::new(0.0, 0.0); 16];
        for (i, slot) in out.iter_mut().enumerate() {
            let (ia, ib) = (i >> 2, i & 3);
            for (j, amp) in self.amplitudes.iter().enumerate() {
                let (ja, jb) = (j >> 2, j & 3);
                *slot += u.m[ia][ja] * v.m[ib][jb] * amp;
            }
        }
        JointState { amplitudes: out }
    }
}

/// The shared state: +1/2 |00>ac|11>bd - 1/2 |01>ac|10>bd
/// - 1/2 |10>ac|01>bd + 1/2 |11>ac|00>bd.
pub fn initial_state() -> JointState {
    let mut amplitudes = [Complex64::new(0.0, 0.0); 16];
    amplitudes[index(0, 0, 1, 1)] = Complex64::new(0.5, 0.0);
    amplitudes[index(0, 1, 1, 0)] = Complex64::new(-0.5, 0.0);
    amplitudes[index(1, 0, 0, 1)] = Complex64::new(-0.5, 0.0);
    amplitudes[index(1, 1, 0, 0)] = Complex64::new(0.5, 0.0);
    JointState { amplitudes }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitary {
    m: [[Complex64; 4]; 4],
}

impl LocalUnitary {
    pub fn from_rows(m: [[Complex64; 4]; 4]) -> Self {
        LocalUnitary { m }
    }

    /// Entry at 1-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row - 1][col - 1]
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let z: Complex64 = (0..4).map(|k| self.m[k][i].conj() * self.m[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((z - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_error() <= UNITARY_TOLERANCE
    }

    /// Copy with the sign of 1-based entry `(row, col)` reversed.
    pub fn with_sign_flipped(&self, row: usize, col: usize) -> Self {
        let mut m = self.m;
        m[row - 1][col - 1] = -m[row - 1][col - 1];
        LocalUnitary { m }
    }
}

fn scaled(scale: f64, rows: [[(f64, f64); 4]; 4]) -> LocalUnitary {
    LocalUnitary {
        m: rows.map(|r| r.map(|(re, im)| Complex64::new(re * scale, im * scale))),
    }
}

/// The printed operators: U1..U3 for Alice, V1..V3 for Bob.
pub fn standard_unitary(party: Party, index: usize) -> Result<LocalUnitary, QuantumError> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    const O: (f64, f64) = (0.0, 0.0);
    const P: (f64, f64) = (1.0, 0.0);
    const N: (f64, f64) = (-1.0, 0.0);
    const I: (f64, f64) = (0.0, 1.0);
    const J: (f64, f64) = (0.0, -1.0);
    Ok(match (party, index) {
        (Party::Alice, 1) => scaled(s, [[I, O, O, P], [O, J, P, O], [O, I, P, O], [P, O, O, I]]),
        (Party::Alice, 2) => scaled(0.5, [[I, P, P, I], [J, P, N, I], [I, P, N, J], [J, P, P, J]]),
        (Party::Alice, 3) => scaled(0.5, [[N, N, N, P], [P, P, N, P], [P, N, P, P], [P, N, N, N]]),
        (Party::Bob, 1) => scaled(0.5, [[I, J, P, P], [J, J, P, N], [P, P, J, I], [J, I, P, P]]),
        (Party::Bob, 2) => scaled(0.5, [[N, I, P, I], [P, I, P, J], [P, J, P, I], [N, J, P, J]]),
        (Party::Bob, 3) => scaled(s, [[P, O, O, P], [N, O, O, P], [O, P, P, O], [O, P, N, O]]),
        (_, i) => return Err(QuantumError::UnitaryIndex(i)),
    })
}

/// Three operators per party, indexed 1..=3.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitarySet {
    pub alice: [LocalUnitary; 3],
    pub bob: [LocalUnitary; 3],
}

impl UnitarySet {
    pub fn standard() -> Self {
        let get = |p, i| standard_unitary(p, i).expect("index in range");
        UnitarySet {
            alice: [1, 2, 3].map(|i| get(Party::Alice, i)),
            bob: [1, 2, 3].map(|i| get(Party::Bob, i)),
        }
    }

    pub fn get(&self, party: Party, index: usize) -> &LocalUnitary {
        match party {
            Party::Alice => &self.alice[index - 1],
            Party::Bob => &self.bob[index - 1],
        }
    }

    /// Copy with one operator replaced.
    pub fn with(&self, party: Party, index: usize, u: LocalUnitary) -> Self {
        let mut out = self.clone();
        match party {
            Party::Alice => out.alice[index - 1] = u,
            Party::Bob => out.bob[index - 1] = u,
        }
        out
    }
}

/// Computational-basis measurement outcome: (a1, a2) are Alice's qubits
/// (a, c), (b1, b2) are Bob's (b, d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome {
    pub a1: u8,
    pub a2: u8,
    pub b1: u8,
    pub b2: u8,
}

impl Outcome {
    pub fn from_index(k: usize) -> Self {
        Outcome {
            a1: (k >> 3 & 1) as u8,
            a2: (k >> 2 & 1) as u8,
            b1: (k >> 1 & 1) as u8,
            b2: (k & 1) as u8,
        }
    }

    pub fn index(&self) -> usize {
        index(self.a1, self.a2, self.b1, self.b2)
    }

    pub fn all() -> impl Iterator<Item = Outcome> {
        (0..16).map(Outcome::from_index)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    probabilities: [f64; 16],
}

impl OutcomeDistribution {
    pub fn of_state(state: &JointState) -> Self {
        OutcomeDistribution {
            probabilities: state.amplitudes.map(|z| z.norm_sqr()),
        }
    }

    pub fn probability(&self, outcome: Outcome) -> f64 {
        self.probabilities[outcome.index()]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Outcomes with probability above [`SUPPORT_THRESHOLD`], in index order.
    pub fn support(&self) -> Vec<Outcome> {
        Outcome::all()
            .filter(|o| self.probability(*o) > SUPPORT_THRESHOLD)
            .collect()
    }
}

/// Distribution after Alice applies `U_{x_a}` and Bob `V_{x_b}`.
pub fn joint_distribution(x_a: usize, x_b: usize) -> Result<OutcomeDistribution, QuantumError> {
    joint_distribution_with(&UnitarySet::standard(), x_a, x_b)
}

pub fn joint_distribution_with(
    unitaries: &UnitarySet,
    x_a: usize,
    x_b: usize,
) -> Result<OutcomeDistribution, QuantumError> {
    for x in [x_a, x_b] {
        if !(1..=3).contains(&x) {
            return Err(QuantumError::Input { index: x, n: 3 });
        }
    }
    let state = initial_state().apply(unitaries.get(Party::Alice, x_a), unitaries.get(Party::Bob, x_b));
    Ok(OutcomeDistribution::of_state(&state))
}

/// Row (a1, a2, a1 ⊕ a2) and column (b1, b2, b1 ⊕ b2 ⊕ 1).
pub fn outcome_to_answers_n3(outcome: Outcome) -> (Vec<u8>, Vec<u8>) {
    (alice_tail([outcome.a1, outcome.a2]), bob_tail([outcome.b1, outcome.b2]))
}

fn alice_tail([a1, a2]: [u8; 2]) -> Vec<u8> {
    vec![a1, a2, a1 ^ a2]
}

fn bob_tail([b1, b2]: [u8; 2]) -> Vec<u8> {
    vec![b1, b2, b1 ^ b2 ^ 1]
}

fn alice_answer(n: usize, x_a: usize, bits: [u8; 2]) -> Vec<u8> {
    let low = n - 3;
    let mut row = vec![0; n];
    if x_a > low {
        row[low..].copy_from_slice(&alice_tail(bits));
    } else if x_a == 1 {
        row[..low].fill(1);
    }
    row
}

fn bob_answer(n: usize, x_b: usize, bits: [u8; 2]) -> Vec<u8> {
    let low = n - 3;
    let mut col = vec![0; n];
    if x_b > low {
        col[low..].copy_from_slice(&bob_tail(bits));
    } else {
        col[0] = 1;
    }
    col
}

/// Answers for the size-`n` game. Inputs up to n-3 ignore the outcome;
/// the last three inputs play the 3×3 strategy in the bottom-right corner.
pub fn quantum_round_odd(
    n: usize,
    x_a: usize,
    x_b: usize,
    outcome: Outcome,
) -> Result<(Vec<u8>, Vec<u8>), QuantumError> {
    MagicGame::new(n)?;
    for x in [x_a, x_b] {
        if !(1..=n).contains(&x) {
            return Err(QuantumError::Input { index: x, n });
        }
    }
    Ok((
        alice_answer(n, x_a, [outcome.a1, outcome.a2]),
        bob_answer(n, x_b, [outcome.b1, outcome.b2]),
    ))
}

/// Measurement statistics for the size-`n` game. Inputs up to n-3 use the
/// fixed `low` operator (1-based), the last three use operators 1..=3.
#[derive(Clone, Debug)]
pub struct QuantumResource {
    n: usize,
    distributions: Vec<Vec<OutcomeDistribution>>,
    low: (usize, usize),
}

impl QuantumResource {
    pub fn new(n: usize, unitaries: &UnitarySet, low: (usize, usize)) -> Result<Self, QuantumError> {
        MagicGame::new(n)?;
        for i in [low.0, low.1] {
            if !(1..=3).contains(&i) {
                return Err(QuantumError::UnitaryIndex(i));
            }
        }
        let distributions = (1..=3)
            .map(|i| (1..=3).map(|j| joint_distribution_with(unitaries, i, j)).collect())
            .collect::<Result<_, _>>()?;
        Ok(QuantumResource { n, distributions, low })
    }

    pub fn standard(n: usize) -> Result<Self, QuantumError> {
        Self::new(n, &UnitarySet::standard(), (1, 1))
    }

    fn operator(&self, x: usize, low: usize) -> usize {
        if x + 3 <= self.n {
            low
        } else {
            x + 3 - self.n
        }
    }

    pub fn distribution(&self, x_a: usize, x_b: usize) -> &OutcomeDistribution {
        &self.distributions[self.operator(x_a, self.low.0) - 1][self.operator(x_b, self.low.1) - 1]
    }
}

impl Resource<MagicGame> for QuantumResource {
    type AliceView = [u8; 2];
    type BobView = [u8; 2];
    type Weight = f64;

    fn branches(&self, x_a: &usize, x_b: &usize) -> Vec<ResourceBranch<[u8; 2], [u8; 2], f64>> {
        let dist = self.distribution(*x_a, *x_b);
        dist.support()
            .into_iter()
            .map(|o| ResourceBranch {
                label: o.index(),
                weight: dist.probability(o),
                alice_view: [o.a1, o.a2],
                bob_view: [o.b1, o.b2],
            })
            .collect()
    }

    fn branch_json(&self, branch: &ResourceBranch<[u8; 2], [u8; 2], f64>) -> Value {
        json!({
            "outcome": [branch.alice_view[0], branch.alice_view[1], branch.bob_view[0], branch.bob_view[1]],
            "probability": branch.weight,
        })
    }
}

/// Each party answers from its own game input and measured bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantumStrategy {
    n: usize,
}

impl QuantumStrategy {
    pub fn new(n: usize) -> Result<Self, QuantumError> {
        MagicGame::new(n)?;
        Ok(QuantumStrategy { n })
    }
}

impl Strategy<MagicGame, [u8; 2], [u8; 2]> for QuantumStrategy {
    fn alice(&self, x_a: &usize, bits: &[u8; 2]) -> Vec<u8> {
        alice_answer(self.n, *x_a, *bits)
    }

    fn bob(&self, x_b: &usize, bits: &[u8; 2]) -> Vec<u8> {
        bob_answer(self.n, *x_b, *bits)
    }
}

pub fn quantum_verify_n3() -> VerificationReport {
    quantum_verify_odd(3).expect("3 is a valid size")
}

/// Every input pair and every supported outcome.
pub fn quantum_verify_odd(n: usize) -> Result<VerificationReport, QuantumError> {
    quantum_verify_with(Exec::default(), &QuantumResource::standard(n)?)
}

pub fn quantum_verify_with(exec: Exec, resource: &QuantumResource) -> Result<VerificationReport, QuantumError> {
    let game = MagicGame::new(resource.n)?;
    let strategy = QuantumStrategy::new(resource.n)?;
    let report = verify_exhaustive_with(exec, &game, &strategy, resource)?;
    Ok(report.with_parameter("strategy", "quantum"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_examples() {
        let s = initial_state();
        assert_eq!(s.amplitude(0, 0, 1, 1), Complex64::new(0.5, 0.0));
        assert_eq!(s.amplitude(0, 1, 1, 0), Complex64::new(-0.5, 0.0));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u1 = standard_unitary(Party::Alice, 1).unwrap();
        assert!((u1.entry(1, 1) - Complex64::new(0.0, s)).norm() < 1e-15);
        let v3 = standard_unitary(Party::Bob, 3).unwrap();
        assert!((v3.entry(1, 4) - Complex64::new(s, 0.0)).norm() < 1e-15);
        for p in [Party::Alice, Party::Bob] {
            for i in 1..=3 {
                assert!(standard_unitary(p, i).unwrap().is_unitary(), "{p} {i}");
            }
        }
        assert_eq!(standard_unitary(Party::Bob, 4), Err(QuantumError::UnitaryIndex(4)));
    }

    #[test]
    fn answers() {
        let o = |a1, a2, b1, b2| Outcome { a1, a2, b1, b2 };
        assert_eq!(outcome_to_answers_n3(o(0, 0, 0, 0)), (vec![0, 0, 0], vec![0, 0, 1]));
        assert_eq!(outcome_to_answers_n3(o(1, 1, 0, 1)), (vec![1, 1, 0], vec![0, 1, 0]));
    }

    #[test]
    fn odd_round_examples() {
        let any = Outcome::from_index(0);
        assert_eq!(
            quantum_round_odd(5, 1, 2, any).unwrap(),
            (vec![1, 1, 0, 0, 0], vec![1, 0, 0, 0, 0])
        );
        let o = Outcome { a1: 0, a2: 1, b1: 1, b2: 0 };
        assert_eq!(
            quantum_round_odd(5, 2, 4, o).unwrap(),
            (vec![0, 0, 0, 0, 0], vec![0, 0, 1, 0, 0])
        );
        assert!(matches!(quantum_round_odd(5, 6, 1, o), Err(QuantumError::Input { .. })));
        assert!(matches!(quantum_round_odd(4, 1, 1, o), Err(QuantumError::Magic(_))));
    }

    #[test]
    fn n3_wins_on_support() {
        let r = quantum_verify_n3();
        assert!(r.all_won());
        assert_eq!(r.cases_total, 72);
    }
}
