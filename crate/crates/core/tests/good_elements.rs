use goodpair::clgroup::{GroupSpec, GroupType};
use goodpair::ppdgood::{build_good_element, check_admissible, phi_set, PpdError};

#[test]
fn every_admissible_order_builds_a_verified_element() {
    let mut built = 0;
    for x in GroupType::ALL {
        for n in 2..=6 {
            for q in [2u64, 3, 4, 5, 7, 8, 9] {
                if check_admissible(x, n, q).is_err() {
                    continue;
                }
                let g = GroupSpec::new(x, n, q).unwrap();
                for m in phi_set(x, n, q).unwrap() {
                    match build_good_element(&g, m) {
                        Ok(el) => {
                            el.verify().unwrap();
                            built += 1;
                        }
                        Err(PpdError::ScalarOnW { .. }) => assert_eq!((n, q), (2, 3)),
                        Err(e) => panic!("{g} m={m}: {e}"),
                    }
                }
            }
        }
    }
    assert!(built > 100);
}
