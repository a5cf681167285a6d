use goodpair::clgroup::GroupType;
use goodpair::gfield::Fe;
use goodpair::symmod::{
    c9_alt_contribution, good_cycle_type_audit, partitions, DeletedModule, SignedPerm,
};
use proptest::prelude::*;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

#[test]
fn fixed_dimension_formula_matches_direct_computation() {
    let mut checked = 0;
    for ell in 3..=12 {
        for p in PRIMES {
            let module = DeletedModule::new(ell, p).unwrap();
            if module.regime().is_err() {
                continue;
            }
            let signs: &[i8] = if p == 2 { &[1] } else { &[1, -1] };
            for parts in partitions(ell) {
                for &a in signs {
                    let sp = SignedPerm::from_cycle_type(&parts, a).unwrap();
                    assert_eq!(
                        module.fix_dim_direct(&sp).unwrap(),
                        module.fix_dim_formula(&sp).unwrap(),
                        "ℓ={ell}, p={p}, type {parts:?}, sign {a}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn good_type_sweeps_report_the_largest_prime() {
    let audit = good_cycle_type_audit(4, 2, 10).unwrap();
    assert!(audit.matches_expected);
    for (n, p, ell) in [(4, 5, 10), (6, 7, 13)] {
        let audit = good_cycle_type_audit(n, p, ell).unwrap();
        assert!(audit.formula_agrees);
        assert!(audit.largest_prime_ok);
        // n+1 = p is not a primitive prime divisor of p^n − 1, so no cycle
        // type of S_ℓ has order in Φ.
        assert!(audit.good_types.is_empty());
        assert!(!audit.matches_expected);
    }
}

#[test]
fn small_length_sweep_is_reported() {
    let audit = good_cycle_type_audit(2, 2, 6).unwrap();
    assert!(!audit.claim_applies);
    assert!(audit.formula_agrees);
}

#[test]
fn alt_contribution_below_bound_on_grid() {
    for x in [GroupType::Sp, GroupType::SOPlus, GroupType::SOMinus] {
        for n in (2..=30).step_by(2) {
            for q in 2..=9u64 {
                for ell in [2 * n + 1, 2 * n + 2] {
                    match c9_alt_contribution(x, n, q, ell) {
                        Ok(c) => assert!(c.bound_ok, "{x} n={n} q={q} ℓ={ell}"),
                        Err(_) => assert!(q == 6 || ell < 7 || (x != GroupType::Sp && n < 4)),
                    }
                }
            }
        }
    }
}

fn config() -> impl Strategy<Value = (usize, u64)> {
    prop_oneof![
        Just((6, 3)),
        Just((8, 2)),
        Just((10, 2)),
        Just((10, 5)),
        Just((12, 3)),
        Just((7, 2)),
        Just((9, 5)),
        Just((11, 3)),
        Just((11, 7)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn fixed_conditions_characterize_fixed_family_vectors(
        (ell, p) in config(),
        seed in any::<u64>(),
        negative in any::<bool>(),
        biased in any::<bool>(),
    ) {
        let module = DeletedModule::new(ell, p).unwrap();
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        let mut images: Vec<usize> = (0..ell).collect();
        for i in (1..ell).rev() {
            images.swap(i, next() as usize % (i + 1));
        }
        let sign = if negative && p != 2 { -1 } else { 1 };
        let sp = SignedPerm::new(images, sign).unwrap();
        let f = module.field().clone();
        let mut b = (next() % p) as Fe;
        let mut params: Vec<Fe> = (0..sp.cycle_count()).map(|_| (next() % p) as Fe).collect();
        if biased {
            // Steer towards the fixed locus so both outcomes are exercised.
            if !module.e_in_w() {
                b = 0;
            }
            if sign == -1 {
                for (c, a) in sp.cycles().iter().zip(params.iter_mut()) {
                    if c.len() % 2 == 1 {
                        *a = f.div(b, 2);
                    }
                }
            }
        }
        let fam = module.fixed_vector_family(&sp, &params, b).unwrap();
        let direct = module.fixed_with_witness(&sp, &fam.vector, b).unwrap();
        let by_cycles = fam.in_w && fam.cycle_conditions.iter().all(|&c| c)
            && (module.e_in_w() || b == 0);
        prop_assert_eq!(direct, module.fixed_conditions(&sp, &params, b).unwrap());
        prop_assert_eq!(direct, by_cycles);
    }

    #[test]
    fn action_is_a_homomorphism(seed in any::<u64>(), ell in 4usize..9, pi in 0usize..4) {
        let p = PRIMES[pi];
        let module = DeletedModule::new(ell, p).unwrap();
        let mut state = seed;
        let mut perm = || {
            let mut images: Vec<usize> = (0..ell).collect();
            for i in (1..ell).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                images.swap(i, (state >> 33) as usize % (i + 1));
            }
            images
        };
        let (g, h) = (perm(), perm());
        let gh: Vec<usize> = (0..ell).map(|i| h[g[i]]).collect();
        let mg = module.action_matrix(&SignedPerm::new(g, 1).unwrap()).unwrap();
        let mh = module.action_matrix(&SignedPerm::new(h, 1).unwrap()).unwrap();
        let mgh = module.action_matrix(&SignedPerm::new(gh, 1).unwrap()).unwrap();
        prop_assert_eq!(mg.mul(&mh), mgh);
    }
}
