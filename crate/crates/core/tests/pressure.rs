mod oracles;

use invpress_core::capacity::{
    bowen_root, capacity_pressure, pressure_difference, separated_sum, spanning_sum,
    spectral_pressure, PressureMode,
};
use invpress_core::{Limits, PerSymbolWeights, WordLanguage};
use oracles::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct PairInstance {
    lang: WordLanguage,
    phi: PerSymbolWeights,
    psi: PerSymbolWeights,
}

fn random_pair(rng: &mut ChaCha8Rng) -> PairInstance {
    let q = rng.gen_range(2..=4);
    let lang = WordLanguage::sft(random_relation(rng, q, 0.5)).unwrap();
    let tau = rng.gen_range(1..=3);
    let phi = uniform_weights(rng, q, -1.0, 1.0, tau);
    let psi = uniform_weights(rng, q, 0.5, 2.0, tau);
    PairInstance { lang, phi, psi }
}

fn ln_sum(lang: &WordLanguage, w: &PerSymbolWeights, n: usize) -> f64 {
    separated_sum(lang, w, n, &Limits::default()).unwrap().ln().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn separated_equals_spanning_and_word_sum(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_pair(&mut rng);
        let sep = separated_sum(&inst.lang, &inst.phi, n, &Limits::default()).unwrap();
        let span = spanning_sum(&inst.lang, &inst.phi, n, &Limits::default()).unwrap();
        prop_assert_eq!(sep, span);
        let brute = brute_log_sum(&inst.lang, &inst.phi, n);
        prop_assert!((sep.ln().unwrap() - brute).abs() < 1e-12 * (1.0 + brute.abs()));
    }

    #[test]
    fn finite_n_lipschitz_and_slope(seed in any::<u64>(), n in 1usize..10, b1 in -3.0f64..3.0, gap in 0.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_pair(&mut rng);
        let b2 = b1 + gap;
        let tau = inst.phi.tau() as f64;
        let f = |b: f64| ln_sum(&inst.lang, &inst.phi.minus_scaled(b, &inst.psi).unwrap(), n) / (n as f64 * tau);
        let (f1, f2) = (f(b1), f(b2));
        let slack = 1e-12 * (1.0 + f1.abs() + f2.abs());
        prop_assert!((f1 - f2).abs() <= inst.psi.max_rate() * gap + slack);
        prop_assert!(f2 <= f1 - gap * inst.psi.min_rate() + slack);
    }

    #[test]
    fn bowen_root_bounds_and_certificate(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_pair(&mut rng);
        let r = bowen_root(&inst.lang, &inst.phi, &inst.psi, 1e-10, PressureMode::Spectral).unwrap();
        let m = inst.psi.min_rate();
        let norm = inst.phi.max_abs_rate();
        let q = inst.lang.num_symbols() as f64;
        let tau = inst.phi.tau() as f64;
        prop_assert!(r.beta_hat >= -norm / m - 1e-9);
        prop_assert!(r.beta_hat <= q.ln() / (m * tau) + norm / m + 1e-9);
        prop_assert!(r.error_bound <= 1e-10);
        let phi = |b: f64| pressure_difference(&inst.lang, &inst.phi, &inst.psi, b, PressureMode::Spectral).unwrap();
        let e = r.error_bound + 1e-12;
        prop_assert!(phi(r.beta_hat - e) >= 0.0 && phi(r.beta_hat + e) <= 0.0);
    }
}

#[test]
fn constant_psi_reduces_to_capacity_pressure() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let q = rng.gen_range(2..=4);
        let lang = WordLanguage::sft(random_irreducible(&mut rng, q, 0.5)).unwrap();
        let tau = rng.gen_range(1..=3);
        let phi = uniform_weights(&mut rng, q, -1.0, 1.0, tau);
        let one = PerSymbolWeights::constant(q, tau as f64, tau).unwrap();
        let r = bowen_root(&lang, &phi, &one, 1e-11, PressureMode::Spectral).unwrap();
        let p = spectral_pressure(&lang, &phi).unwrap();
        assert!((r.beta_hat - p).abs() < 1e-10, "{} vs {p}", r.beta_hat);
    }
}

#[test]
fn finite_horizon_approaches_spectral_value_like_one_over_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let q = rng.gen_range(2..=4);
        let lang = WordLanguage::sft(random_irreducible(&mut rng, q, 0.5)).unwrap();
        let phi = uniform_weights(&mut rng, q, -1.0, 1.0, 1);
        let est = capacity_pressure(&lang, &phi, 200, 1).unwrap();
        let oracle = est.oracle.unwrap();
        let err = |n: usize| (est.values[n - 1].1 - oracle).abs();
        let c = (50.0 * err(50)).max(100.0 * err(100));
        assert!(err(200) <= c / 200.0 + 1e-12, "{} > {}", err(200), c / 200.0);
    }
}

/// For a deterministic itinerary map the words of length `n` are the
/// length-`n` orbit segments, so the pressure is the largest mean weight over
/// the cycles of the map.
fn max_cycle_mean(next: &[usize], label: &[u16], w: &PerSymbolWeights) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for start in 0..next.len() {
        // Walk long enough to land on the cycle, then measure it.
        let mut x = start;
        for _ in 0..next.len() {
            x = next[x];
        }
        let (mut y, mut sum, mut len) = (x, 0.0, 0);
        loop {
            sum += w.values()[label[y] as usize];
            len += 1;
            y = next[y];
            if y == x {
                break;
            }
        }
        best = best.max(sum / len as f64);
    }
    best / w.tau() as f64
}

#[test]
fn itinerary_pressure_is_the_best_cycle_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let states = rng.gen_range(2..=8);
        let q = rng.gen_range(1..=3);
        let next: Vec<usize> = (0..states).map(|_| rng.gen_range(0..states)).collect();
        let label: Vec<u16> = (0..states).map(|_| rng.gen_range(0..q) as u16).collect();
        let lang = WordLanguage::itinerary(next.clone(), label.clone(), q).unwrap();
        let tau = rng.gen_range(1..=2);
        let w = uniform_weights(&mut rng, q, -1.0, 1.0, tau);
        let oracle = max_cycle_mean(&next, &label, &w);
        let spectral = spectral_pressure(&lang, &w).unwrap();
        assert!((spectral - oracle).abs() < 1e-9, "{spectral} vs {oracle}");
        // At most `states` words per length, so the horizon values converge
        // like 1/n.
        let est = capacity_pressure(&lang, &w, 400, 1).unwrap();
        let bound = ((states as f64).ln() + 4.0 * states as f64) / (400.0 * w.tau() as f64);
        assert!((est.values[399].1 - oracle).abs() <= bound);
    }
}
