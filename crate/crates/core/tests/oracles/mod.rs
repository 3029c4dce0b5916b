//! Independent reference computations shared by the integration tests.
//!
//! Everything here works on explicitly listed words and recomputes weights
//! from scratch; none of it goes through the transfer or cover DPs.
#![allow(dead_code)]

use invpress_core::caratheodory::SubsetSpec;
use invpress_core::symbolic::enumerate_words;
use invpress_core::{Limits, PerSymbolWeights, Symbol, Word, WordLanguage};
use rand::Rng;

/// Random SFT relation on `q` symbols where every symbol has a successor.
pub fn random_relation<R: Rng>(rng: &mut R, q: usize, density: f64) -> Vec<Vec<bool>> {
    (0..q)
        .map(|_| {
            let mut row: Vec<bool> = (0..q).map(|_| rng.gen_bool(density)).collect();
            if !row.iter().any(|&b| b) {
                row[rng.gen_range(0..q)] = true;
            }
            row
        })
        .collect()
}

/// Random irreducible SFT relation: a Hamiltonian cycle plus random edges.
pub fn random_irreducible<R: Rng>(rng: &mut R, q: usize, density: f64) -> Vec<Vec<bool>> {
    let mut rel = random_relation(rng, q, density);
    for i in 0..q {
        rel[i][(i + 1) % q] = true;
    }
    rel
}

pub fn uniform_weights<R: Rng>(rng: &mut R, q: usize, lo: f64, hi: f64, tau: usize) -> PerSymbolWeights {
    let v = (0..q).map(|_| rng.gen_range(lo..hi)).collect();
    PerSymbolWeights::from_symbol_sums(v, tau).unwrap()
}

pub fn fold_weight(s: &[Symbol], w: &PerSymbolWeights) -> f64 {
    s.iter().fold(0.0, |acc, &x| acc + w.values()[x as usize])
}

/// `ln sum_{s in L^n} e^{S phi(s)}` by listing every word.
pub fn brute_log_sum(lang: &WordLanguage, w: &PerSymbolWeights, n: usize) -> f64 {
    let words = enumerate_words(lang, n, &Limits::unbounded()).unwrap();
    let terms: Vec<f64> = words.iter().map(|s| fold_weight(s.symbols(), w)).collect();
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()
}

/// Cylinders of length `1..=depth` that are admissible and meet `z`.
fn meeting_nodes(lang: &WordLanguage, z: &SubsetSpec, depth: usize) -> Vec<Vec<Word>> {
    let mut levels = vec![vec![Word::empty()]];
    for n in 1..=depth {
        let mut next = Vec::new();
        for w in &levels[n - 1] {
            for b in 0..lang.num_symbols() as Symbol {
                let mut s = w.clone();
                s.push(b);
                if lang.is_admissible(s.symbols()) && z.meets_cylinder(s.symbols()) {
                    next.push(s);
                }
            }
        }
        levels.push(next);
    }
    levels
}

/// Every antichain cover of `z` by cylinders of length in `[n_min, depth]`,
/// as explicit lists of words. Returns `None` when there are more than
/// `cap` of them.
pub fn antichain_covers(
    lang: &WordLanguage,
    z: &SubsetSpec,
    n_min: usize,
    depth: usize,
    cap: usize,
) -> Option<Vec<Vec<Word>>> {
    let levels = meeting_nodes(lang, z, depth);
    fn covers_of(
        node: &Word,
        levels: &[Vec<Word>],
        n_min: usize,
        depth: usize,
        cap: usize,
    ) -> Option<Vec<Vec<Word>>> {
        let d = node.len();
        let mut out: Vec<Vec<Word>> = Vec::new();
        if d >= n_min {
            out.push(vec![node.clone()]);
        }
        if d == depth {
            return Some(out);
        }
        let children: Vec<&Word> = levels[d + 1]
            .iter()
            .filter(|c| node.is_prefix_of(c))
            .collect();
        if children.is_empty() {
            return Some(out);
        }
        let mut combos: Vec<Vec<Word>> = vec![Vec::new()];
        for c in children {
            let sub = covers_of(c, levels, n_min, depth, cap)?;
            if sub.is_empty() {
                combos.clear();
                break;
            }
            if combos.len() * sub.len() > cap {
                return None;
            }
            let mut next = Vec::with_capacity(combos.len() * sub.len());
            for a in &combos {
                for b in &sub {
                    let mut x = a.clone();
                    x.extend(b.iter().cloned());
                    next.push(x);
                }
            }
            combos = next;
        }
        out.extend(combos);
        if out.len() > cap {
            return None;
        }
        Some(out)
    }
    if levels[depth].is_empty() {
        return Some(Vec::new());
    }
    covers_of(&Word::empty(), &levels, n_min, depth, cap)
}

/// Brute-force minimum of `sum_i e^{cost(s_i)}` over antichain covers.
pub fn brute_min_cover<F: Fn(&[Symbol]) -> f64>(covers: &[Vec<Word>], cost: F) -> f64 {
    covers
        .iter()
        .map(|c| c.iter().map(|s| cost(s.symbols()).exp()).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Fractional covering LP for `W`: minimise `sum c_s e^{-lambda S phi(s)}`
/// subject to every depth-`D` cylinder meeting `z` having ancestor weight at
/// least 1.
pub fn lp_weighted_cover(
    lang: &WordLanguage,
    w: &PerSymbolWeights,
    z: &SubsetSpec,
    lambda: f64,
    n_min: usize,
    depth: usize,
) -> f64 {
    use minilp::{ComparisonOp, OptimizationDirection, Problem};
    let levels = meeting_nodes(lang, z, depth);
    if levels[depth].is_empty() {
        return 0.0;
    }
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let mut vars = Vec::new();
    for level in &levels[n_min..=depth] {
        for s in level {
            let c = (-lambda * fold_weight(s.symbols(), w)).exp();
            vars.push((s.clone(), p.add_var(c, (0.0, f64::INFINITY))));
        }
    }
    for leaf in &levels[depth] {
        let row: Vec<_> = vars
            .iter()
            .filter(|(s, _)| s.is_prefix_of(leaf))
            .map(|&(_, v)| (v, 1.0))
            .collect();
        p.add_constraint(&row, ComparisonOp::Ge, 1.0);
    }
    p.solve().expect("covering LP is feasible").objective()
}

/// Root of `x^3 + x = 1` in `(0, 1)` by plain bisection.
pub fn cubic_root() -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid * mid + mid - 1.0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// A small random cover problem.
pub struct CoverInstance {
    pub lang: WordLanguage,
    pub phi: PerSymbolWeights,
    pub z: SubsetSpec,
    pub n_min: usize,
    pub depth: usize,
    pub lambda: f64,
}

/// Random SFT on 2 or 3 symbols with positive weights, a random subset
/// (everything, or a union of up to two admissible cylinders) and random
/// `1 <= N <= D <= max_depth`.
pub fn random_cover_instance<R: Rng>(rng: &mut R, max_depth: usize) -> CoverInstance {
    let q = rng.gen_range(2..=3);
    let lang = WordLanguage::sft(random_relation(rng, q, 0.6)).unwrap();
    let tau = rng.gen_range(1..=2);
    let phi = uniform_weights(rng, q, 0.2, 2.0, tau);
    let depth = rng.gen_range(1..=max_depth);
    let n_min = rng.gen_range(1..=depth);
    let z = if rng.gen_bool(0.5) {
        SubsetSpec::All
    } else {
        let k = rng.gen_range(1..=2);
        let mut words = Vec::new();
        for _ in 0..k {
            let len = rng.gen_range(1..=depth.min(3));
            let all = enumerate_words(&lang, len, &Limits::unbounded()).unwrap();
            words.push(all[rng.gen_range(0..all.len())].clone());
        }
        SubsetSpec::CylinderUnion(words)
    };
    let lambda = rng.gen_range(-0.5..1.5);
    CoverInstance {
        lang,
        phi,
        z,
        n_min,
        depth,
        lambda,
    }
}
