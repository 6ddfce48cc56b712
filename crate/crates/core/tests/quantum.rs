use nlgames::magic::MagicGame;
use nlgames::quantum::{
    joint_distribution, standard_unitary, quantum_round_odd, quantum_verify_n3, quantum_verify_odd, quantum_verify_with,
    Outcome, QuantumResource, UnitarySet,
};
use nlgames::{Exec, Game, Party};
use serde_json::Value;

fn nonzero_entries(party: Party, index: usize) -> Vec<(usize, usize)> {
    let u = standard_unitary(party, index).unwrap();
    (1..=4)
        .flat_map(|r| (1..=4).map(move |c| (r, c)))
        .filter(|&(r, c)| u.entry(r, c).norm() > 1e-12)
        .collect()
}

#[test]
fn every_single_sign_mutation_is_detected() {
    let base = UnitarySet::standard();
    for party in [Party::Alice, Party::Bob] {
        for index in 1..=3 {
            for (r, c) in nonzero_entries(party, index) {
                let mutated = base.get(party, index).with_sign_flipped(r, c);
                let set = base.with(party, index, mutated);
                let resource = QuantumResource::new(3, &set, (1, 1)).unwrap();
                let report = quantum_verify_with(Exec::default(), &resource).unwrap();
                assert!(!report.failures.is_empty(), "{party} {index} entry ({r},{c})");
            }
        }
    }
}

#[test]
fn probabilities_sum_to_one() {
    for x in 1..=3 {
        for y in 1..=3 {
            let d = joint_distribution(x, y).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-9, "({x},{y})");
            for o in Outcome::all() {
                let p = d.probability(o);
                assert!((-1e-12..=1.0 + 1e-12).contains(&p));
            }
        }
    }
}

#[test]
fn archived_support_for_inputs_2_3() {
    let fixture: Value = serde_json::from_str(include_str!("fixtures/quantum_support_2_3.json")).unwrap();
    let expected: Vec<(Outcome, f64)> = fixture["support"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let bits: Vec<u8> = e["outcome"].as_array().unwrap().iter().map(|b| b.as_u64().unwrap() as u8).collect();
            let o = Outcome { a1: bits[0], a2: bits[1], b1: bits[2], b2: bits[3] };
            (o, e["probability"].as_f64().unwrap())
        })
        .collect();
    let d = joint_distribution(2, 3).unwrap();
    let support = d.support();
    assert_eq!(support, expected.iter().map(|(o, _)| *o).collect::<Vec<_>>());
    for (o, p) in expected {
        assert!((d.probability(o) - p).abs() < 1e-12);
    }
}

#[test]
fn fixed_low_operator_substitution_keeps_all_wins() {
    let set = UnitarySet::standard();
    for n in [5, 7, 9] {
        for low_a in 1..=3 {
            for low_b in 1..=3 {
                let resource = QuantumResource::new(n, &set, (low_a, low_b)).unwrap();
                let report = quantum_verify_with(Exec::default(), &resource).unwrap();
                assert!(report.all_won(), "n={n} low=({low_a},{low_b})");
            }
        }
    }
}

#[test]
fn odd_sizes_all_win() {
    assert!(quantum_verify_n3().all_won());
    for n in [5, 7, 9, 11, 21] {
        let r = quantum_verify_odd(n).unwrap();
        assert!(r.all_won(), "n = {n}");
    }
}

#[test]
fn low_inputs_ignore_the_outcome() {
    let n = 7;
    for x in 1..=n {
        for y in 1..=n {
            if x > n - 3 && y > n - 3 {
                continue;
            }
            let answers: Vec<_> = Outcome::all().map(|o| quantum_round_odd(n, x, y, o).unwrap()).collect();
            // The party with a low input answers the same whatever it measured.
            for a in &answers {
                if x <= n - 3 {
                    assert_eq!(a.0, answers[0].0);
                }
                if y <= n - 3 {
                    assert_eq!(a.1, answers[0].1);
                }
            }
        }
    }
}

#[test]
fn corner_block_reduces_to_three_by_three() {
    let n = 5;
    let big = MagicGame::new(n).unwrap();
    let small = MagicGame::new(3).unwrap();
    let (xa, xb) = (4, 5);
    let d = joint_distribution(xa - 2, xb - 2).unwrap();
    for o in d.support() {
        let (row, col) = quantum_round_odd(n, xa, xb, o).unwrap();
        let (r3, c3) = quantum_round_odd(3, xa - 2, xb - 2, o).unwrap();
        assert_eq!(&row[2..], &r3[..]);
        assert_eq!(&col[2..], &c3[..]);
        assert_eq!(big.wins(&xa, &xb, &row, &col), small.wins(&(xa - 2), &(xb - 2), &r3, &c3));
        assert!(big.wins(&xa, &xb, &row, &col));
    }
}

#[test]
fn case_two_example() {
    let o = Outcome { a1: 1, a2: 1, b1: 1, b2: 0 };
    let (row, col) = quantum_round_odd(5, 2, 4, o).unwrap();
    assert_eq!(row, vec![0; 5]);
    assert_eq!(col, vec![0, 0, 1, 0, 0]);
    assert_eq!(row[3], col[1]);
}
