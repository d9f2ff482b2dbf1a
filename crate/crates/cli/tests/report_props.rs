use abelk_cli::{Report, Verdict};
use proptest::prelude::*;

fn verdict() -> impl Strategy<Value = Verdict> {
    (".{0,20}", "(Isomorphic|NotIsomorphic|Unknown|PASS|FAIL)", ".{0,40}")
        .prop_map(|(subject, verdict, evidence)| Verdict { subject, verdict, evidence })
}

proptest! {
    #[test]
    fn reports_round_trip_through_json(
        command in "[a-z0-9-]{1,16}",
        inputs in prop::collection::vec(".{0,30}", 0..3),
        verdicts in prop::collection::vec(verdict(), 0..4),
        notices in prop::collection::vec(".{0,30}", 0..2),
        summary in prop::option::of(".{0,30}"),
        timing_us in any::<u64>(),
    ) {
        let r = Report { command, inputs, verdicts, notices, summary, timing_us };
        prop_assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }
}
