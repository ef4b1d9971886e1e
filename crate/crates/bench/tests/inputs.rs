use planarhopf_bench::*;
use planarhopf_core::deformed_negative::cointeraction_check_trunc;
use planarhopf_core::deformed_positive::star_plus_tree;
use planarhopf_core::rough_model::delta_minus_pb;
use planarhopf_core::MultiIndex;

#[test]
fn inputs_are_valid_for_their_kernels() {
    assert_eq!(mkw_input().len(), 1);
    assert!(!star_plus_tree(&star_plus_pair().0, &star_plus_pair().1).unwrap().is_zero());
    assert!(delta_minus_pb(&blue_tree(), &blue_cfg()).unwrap().len() > 1);
    assert!(cointeraction_check_trunc(&example_tree(), &MultiIndex(vec![2]), &two_noise_cfg()).unwrap());
}
