//! Metric properties: oracle equivalence, right-invariance, metric axioms,
//! and the footrule sandwich.

use permrec::metrics::{
    kendall_tau, kendall_tau_bruteforce, spearman_footrule, zero_one_loss,
};
use permrec::rng::SimRng;
use permrec::Permutation;

#[test]
fn fast_tau_equals_bruteforce_up_to_p_200() {
    let mut rng = SimRng::new(1000);
    for _ in 0..1000 {
        let p = 2 + rng.below(199);
        let a = Permutation::random(p, &mut rng);
        let b = Permutation::random(p, &mut rng);
        assert_eq!(
            kendall_tau(&a, &b).unwrap(),
            kendall_tau_bruteforce(&a, &b).unwrap(),
            "p = {p}"
        );
    }
}

#[test]
fn tau_is_right_invariant() {
    let mut rng = SimRng::new(2000);
    for _ in 0..300 {
        let p = 2 + rng.below(40);
        let a = Permutation::random(p, &mut rng);
        let b = Permutation::random(p, &mut rng);
        let sigma = Permutation::random(p, &mut rng);
        let lhs = kendall_tau(&a.compose(&sigma).unwrap(), &b.compose(&sigma).unwrap()).unwrap();
        let rhs = kendall_tau(&a, &b).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn tau_metric_axioms() {
    let mut rng = SimRng::new(3000);
    for _ in 0..300 {
        let p = 2 + rng.below(29);
        let a = Permutation::random(p, &mut rng);
        let b = Permutation::random(p, &mut rng);
        let c = Permutation::random(p, &mut rng);
        let ab = kendall_tau(&a, &b).unwrap();
        let ba = kendall_tau(&b, &a).unwrap();
        assert_eq!(ab, ba, "symmetry");
        assert_eq!(kendall_tau(&a, &a).unwrap(), 0.0, "identity");
        if ab == 0.0 {
            assert_eq!(a, b, "indiscernibles");
        }
        let ac = kendall_tau(&a, &c).unwrap();
        let cb = kendall_tau(&c, &b).unwrap();
        assert!(ab <= ac + cb + 1e-12, "triangle: {ab} > {ac} + {cb}");
    }
}

#[test]
fn diaconis_graham_sandwich() {
    let mut rng = SimRng::new(4000);
    for _ in 0..500 {
        let p = 2 + rng.below(60);
        let a = Permutation::random(p, &mut rng);
        let b = Permutation::random(p, &mut rng);
        let tau = kendall_tau(&a, &b).unwrap();
        let rho = spearman_footrule(&a, &b).unwrap();
        assert!(tau <= rho + 1e-12, "tau {tau} > rho {rho}");
        assert!(rho <= 2.0 * tau + 1e-12, "rho {rho} > 2 tau {tau}");
    }
}

#[test]
fn zero_one_dominates_tau_positivity() {
    let mut rng = SimRng::new(5000);
    for _ in 0..200 {
        let p = 2 + rng.below(10);
        let a = Permutation::random(p, &mut rng);
        let b = Permutation::random(p, &mut rng);
        let zo = zero_one_loss(&a, &b).unwrap();
        let tau = kendall_tau(&a, &b).unwrap();
        if zo == 0 {
            assert_eq!(tau, 0.0);
        }
        if tau > 0.0 {
            assert_eq!(zo, 1);
        }
    }
}
