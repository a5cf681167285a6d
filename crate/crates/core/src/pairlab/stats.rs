use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// The random stream for trial `index` under a master seed.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Wilson score interval for `successes` out of `trials` at two-sided
/// confidence level `confidence`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = Normal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lower = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let upper = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn wilson_reference_values() {
        // 95% interval for 8/10: (0.4902, 0.9433).
        let (lo, hi) = wilson_interval(8, 10, 0.95);
        assert!((lo - 0.4902).abs() < 1e-4 && (hi - 0.9433).abs() < 1e-4);
        let (lo, hi) = wilson_interval(0, 50, 0.99);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.2);
    }

    #[test]
    fn interval_contains_point() {
        for (s, n) in [(0u64, 1u64), (1, 1), (3, 7), (500, 1000)] {
            let (lo, hi) = wilson_interval(s, n, 0.999);
            let p = s as f64 / n as f64;
            assert!(lo <= p && p <= hi);
        }
    }

    #[test]
    fn streams_are_independent_of_order() {
        let a: u64 = trial_rng(9, 5).gen();
        let _: u64 = trial_rng(9, 4).gen();
        assert_eq!(a, trial_rng(9, 5).gen::<u64>());
        assert_ne!(a, trial_rng(9, 6).gen::<u64>());
    }
}
