use goodpair::clgroup::theta_inequality_suite;

#[test]
fn theta_estimates_fail_only_at_boundary_equalities() {
    let s = theta_inequality_suite(30, 9);
    assert!(s.checked > 30_000);
    // Θ(k,k;-q) = 1 - q^-k for k even, and for k odd with n = k+1 the ratio
    // Θ(k+1,k+1;-q)/Θ(1,1;-q) equals (1 - q^-(k+1))/(1 + 1/q). Both meet a
    // strict bound with equality; every other comparison holds.
    assert_eq!(s.violations.len(), 2 * 15 * 8);
    for v in &s.violations {
        assert!(v.equality, "{v:?}");
        if v.inequality.starts_with("1-q^-k") {
            assert!(v.k == v.n && v.k % 2 == 0, "{v:?}");
        } else {
            assert!(v.inequality.starts_with("(1-q^-(k+1))"), "{v:?}");
            assert!(v.k % 2 == 1 && v.n == v.k + 1, "{v:?}");
        }
    }
}
