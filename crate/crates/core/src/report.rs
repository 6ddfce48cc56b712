//! JSON report document written by the command-line tool.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::verify::{Failure, VerificationReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Serialized form of a [`VerificationReport`]. Field order is fixed by
/// declaration order and `parameters` is a sorted map, so output is
/// byte-stable for identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub game: String,
    pub parameters: BTreeMap<String, Value>,
    pub cases_total: u64,
    pub cases_won: u64,
    pub failures: Vec<Failure>,
    pub tool_version: String,
}

impl From<VerificationReport> for ReportDocument {
    fn from(r: VerificationReport) -> Self {
        ReportDocument {
            game: r.game,
            parameters: r.parameters,
            cases_total: r.cases_total,
            cases_won: r.cases_won,
            failures: r.failures,
            tool_version: TOOL_VERSION.to_owned(),
        }
    }
}

impl From<ReportDocument> for VerificationReport {
    fn from(d: ReportDocument) -> Self {
        VerificationReport {
            game: d.game,
            parameters: d.parameters,
            cases_total: d.cases_total,
            cases_won: d.cases_won,
            failures: d.failures,
        }
    }
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are always representable as JSON")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Checks the `failures.len() == cases_total - cases_won` invariant.
    pub fn is_consistent(&self) -> bool {
        self.cases_won <= self.cases_total && self.failures.len() as u64 == self.cases_total - self.cases_won
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serde_json::json;

    fn failure_strategy() -> impl proptest::strategy::Strategy<Value = Failure> {
        (any::<u8>(), any::<u8>(), prop::collection::vec(0u8..2, 0..6), "[a-z-]{1,16}").prop_map(
            |(x, label, row, tag)| Failure {
                inputs: json!({ "alice": x, "bob": x / 2 }),
                branch: json!({ "label": label }),
                outputs: json!({ "alice": row, "bob": 1 }),
                violated: tag,
            },
        )
    }

    proptest! {
        #[test]
        fn document_round_trips(
            name in "[a-z0-9-]{1,20}",
            n in 1u64..500,
            failures in prop::collection::vec(failure_strategy(), 0..5),
            params in prop::collection::btree_map("[a-z]{1,8}", any::<i64>(), 0..4),
        ) {
            let total = n + failures.len() as u64;
            let report = VerificationReport {
                game: name,
                parameters: params.into_iter().map(|(k, v)| (k, json!(v))).collect(),
                cases_total: total,
                cases_won: n,
                failures,
            };
            let doc = ReportDocument::from(report.clone());
            prop_assert!(doc.is_consistent());
            let text = doc.to_json();
            let back = ReportDocument::from_json(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(back.to_json(), text);
            prop_assert_eq!(VerificationReport::from(back), report);
        }
    }

    #[test]
    fn key_order_is_stable() {
        let doc = ReportDocument::from(VerificationReport {
            game: "g".into(),
            parameters: [("z".to_owned(), json!(1)), ("a".to_owned(), json!(2))].into(),
            cases_total: 0,
            cases_won: 0,
            failures: vec![],
        });
        let text = doc.to_json();
        let order: Vec<usize> = ["\"game\"", "\"parameters\"", "\"a\"", "\"z\"", "\"cases_total\"", "\"tool_version\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]), "{text}");
    }
}
