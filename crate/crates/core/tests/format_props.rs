mod common;

use abelk::desc::{AbGroupDesc, FreePartDesc};
use abelk::error::Error;
use abelk::fgab::{FgAbGroup, TorsionDesc};
use abelk::format::{emit_group_file, emit_witness_file, parse_group_file, parse_witness_file, GroupFile};
use abelk::uginv::integer_witness;
use common::{matrix_strategy, tower_strategy};
use proptest::prelude::*;

fn torsion_strategy() -> impl Strategy<Value = TorsionDesc> {
    prop_oneof![
        prop::collection::vec(2u64..30, 0..4).prop_map(|o| TorsionDesc::finite(FgAbGroup::from_cyclic_orders(&o))),
        Just(TorsionDesc::CountablyInfinite),
    ]
}

fn free_strategy() -> impl Strategy<Value = FreePartDesc> {
    let leaf = prop_oneof![
        (0usize..5).prop_map(FreePartDesc::FreeOfRank),
        tower_strategy(1).prop_map(FreePartDesc::Rank1),
        tower_strategy(2).prop_map(FreePartDesc::TowerForm),
        tower_strategy(2).prop_map(FreePartDesc::OmegaCopies),
    ];
    prop_oneof![3 => leaf.clone(), 1 => prop::collection::vec(leaf, 2..4).prop_map(FreePartDesc::DirectSum)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_files_round_trip(torsion in torsion_strategy(), free in free_strategy(), name in "[a-z][a-z0-9-]{0,8}") {
        let g = GroupFile { name, desc: AbGroupDesc::new(torsion, free) };
        prop_assert_eq!(parse_group_file(&emit_group_file(&g)).unwrap(), g);
    }

    #[test]
    fn witness_files_round_trip(t in tower_strategy(2), m in matrix_strategy(2), copies in 1usize..3) {
        let w = integer_witness(copies, &m, FreePartDesc::TowerForm(t.clone()), FreePartDesc::TowerForm(t));
        prop_assert_eq!(parse_witness_file(&emit_witness_file(&w)).unwrap(), w);
    }

    #[test]
    fn arbitrary_text_never_panics(text in "\\PC{0,80}") {
        let _ = parse_group_file(&text);
    }
}

#[test]
fn singular_tower_is_rejected_after_parsing() {
    let text = "torsion: trivial\nfree: {tower: 2, prefix: [], period: [[[1, 2], [2, 4]]]}\n";
    assert!(matches!(parse_group_file(text), Err(Error::InvalidTower(_))));
}
