mod common;

use proptest::prelude::*;

#[test]
fn fixtures_satisfy_all_properties() {
    common::fixture_properties().unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_posets_satisfy_all_properties(p in common::random_poset()) {
        if let Err(e) = common::random_poset_properties(&p) {
            prop_assert!(false, "{}", e);
        }
    }
}
