//! Finite-`T` induced pressure sums and the dimensional characterization.
//!
//! Words are grouped by the scaling potential: `S_T` collects the lengths `n`
//! at which some word of length `n + 1` first exceeds `T tau` in `psi`-weight,
//! `X_n` holds those words, and `G_T` / `Y_n` collect the words already past
//! `T tau`. Since both potentials are additive, a word's weights depend only
//! on its symbol counts, so the sums are evaluated over (cursor, count vector)
//! states rather than words. Explicit enumeration is kept as an independent
//! path for small `T`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::logspace::{LogSum, LogValue};
use crate::math::{floor, ln};
use crate::symbolic::{word_weight, Cursor, PerSymbolWeights, Symbol, Word, WordLanguage};
use crate::{Error, Limits, Result};

/// Level sets for a fixed time `T`, by explicit enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeLevelSets {
    pub t: f64,
    pub tau: usize,
    /// The lengths `n` with `X_n` nonempty, ascending.
    pub s_t: Vec<usize>,
    /// `X_n`: admissible words `w` of length `n + 1` with
    /// `psi(w[..n]) <= T tau < psi(w)`, in lexicographic order.
    pub x: BTreeMap<usize, Vec<Word>>,
    /// First length in `G_T`; every longer length belongs to it as well.
    pub g_start: usize,
}

impl TimeLevelSets {
    pub fn is_empty(&self) -> bool {
        self.s_t.is_empty()
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter("T must be a positive real".into()));
    }
    Ok(())
}

/// Longest word length whose `psi`-weight can stay within `T tau`.
fn max_prefix_len(w_psi: &PerSymbolWeights, t: f64) -> usize {
    floor(t * w_psi.tau() as f64 / w_psi.min()) as usize
}

/// Enumerates the words with `psi`-weight at most `T tau` together with their
/// one-symbol exits, calling `visit(prefix, exit)` for every
/// exit symbol that pushes the weight past `T tau`.
fn walk_level<F>(
    lang: &WordLanguage,
    w_psi: &PerSymbolWeights,
    t: f64,
    limits: &Limits,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[Symbol], Symbol),
{
    let budget = t * w_psi.tau() as f64;
    let a = lang.automaton();
    let mut visited: u64 = 0;
    let mut prefix: Vec<Symbol> = Vec::new();
    // (edges out of the current prefix, next index, psi of the prefix)
    let mut stack: Vec<(&[(Symbol, Cursor)], usize, f64)> = vec![(a.initial(), 0, 0.0)];
    while let Some(top) = stack.last_mut() {
        let (list, idx, psi) = *top;
        if idx == list.len() {
            stack.pop();
            prefix.pop();
            continue;
        }
        top.1 += 1;
        let (s, c) = list[idx];
        let next = psi + w_psi.get(s);
        visited += 1;
        if visited > limits.max_words {
            return Err(Error::GuardTripped {
                what: "words",
                needed: visited,
                limit: limits.max_words,
            });
        }
        if next > budget {
            visit(&prefix, s);
        } else {
            prefix.push(s);
            stack.push((a.edges(c), 0, next));
        }
    }
    Ok(())
}

/// Computes `S_T`, the sets `X_n` and the start of `G_T` by enumeration.
pub fn compute_level_sets(
    lang: &WordLanguage,
    w_psi: &PerSymbolWeights,
    t: f64,
    limits: &Limits,
) -> Result<TimeLevelSets> {
    w_psi.check_language(lang)?;
    w_psi.require_positive()?;
    check_time(t)?;
    let mut x: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
    walk_level(lang, w_psi, t, limits, |prefix, s| {
        let mut w = Word::from(prefix);
        w.push(s);
        x.entry(prefix.len()).or_default().push(w);
    })?;
    let s_t: Vec<usize> = x.keys().copied().collect();
    let g_start = s_t.first().map_or(0, |n| n + 1);
    Ok(TimeLevelSets {
        t,
        tau: w_psi.tau(),
        s_t,
        x,
        g_start,
    })
}

/// `m_n(s)`: the integer `m` with `(m - 1) |psi| tau < psi(s) <= m |psi| tau`,
/// where `|psi|` is the largest per-step `psi` rate.
pub fn bookkeeping_index(psi_weight: f64, w_psi: &PerSymbolWeights) -> u64 {
    let unit = w_psi.max_rate() * w_psi.tau() as f64;
    let m = libm::ceil(psi_weight / unit);
    if m < 1.0 {
        1
    } else {
        m as u64
    }
}

/// One (cursor, count vector) class of words of a fixed length.
#[derive(Clone, Copy, Debug)]
struct CountClass {
    cursor: Option<Cursor>,
    phi: f64,
    psi: f64,
    ln_mult: f64,
}

/// Words of each length `0..=n_max` grouped by (cursor, symbol counts).
struct CountLevels {
    levels: Vec<Vec<CountClass>>,
}

impl CountLevels {
    fn build(
        lang: &WordLanguage,
        w_phi: &PerSymbolWeights,
        w_psi: &PerSymbolWeights,
        n_max: usize,
        limits: &Limits,
    ) -> Result<Self> {
        let q = lang.num_symbols();
        let a = lang.automaton();
        let weigh = |counts: &[u16]| {
            let mut phi = 0.0;
            let mut psi = 0.0;
            for (i, &c) in counts.iter().enumerate() {
                phi += c as f64 * w_phi.values()[i];
                psi += c as f64 * w_psi.values()[i];
            }
            (phi, psi)
        };
        let mut levels = Vec::with_capacity(n_max + 1);
        levels.push(vec![CountClass {
            cursor: None,
            phi: 0.0,
            psi: 0.0,
            ln_mult: 0.0,
        }]);
        let mut cur: BTreeMap<(Cursor, Vec<u16>), LogSum> = BTreeMap::new();
        let mut states: u64 = 0;
        for n in 1..=n_max {
            let mut next: BTreeMap<(Cursor, Vec<u16>), LogSum> = BTreeMap::new();
            if n == 1 {
                for &(s, c) in a.initial() {
                    let mut counts = vec![0u16; q];
                    counts[s as usize] += 1;
                    next.entry((c, counts)).or_default().push_ln(0.0);
                }
            } else {
                for ((c, counts), m) in &cur {
                    let m = m.value().ln().expect("nonzero multiplicity");
                    for &(s, d) in a.edges(*c) {
                        let mut counts = counts.clone();
                        counts[s as usize] += 1;
                        next.entry((d, counts)).or_default().push_ln(m);
                    }
                }
            }
            states += next.len() as u64;
            if states > limits.max_words {
                return Err(Error::GuardTripped {
                    what: "word classes",
                    needed: states,
                    limit: limits.max_words,
                });
            }
            levels.push(
                next.iter()
                    .map(|((c, counts), m)| {
                        let (phi, psi) = weigh(counts);
                        CountClass {
                            cursor: Some(*c),
                            phi,
                            psi,
                            ln_mult: m.value().ln().expect("nonzero multiplicity"),
                        }
                    })
                    .collect(),
            );
            cur = next;
        }
        Ok(CountLevels { levels })
    }
}

/// Value of a finite-`T` induced sum.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedValue {
    pub t: f64,
    /// `ln` of the sum; `Zero` when `S_T` is empty.
    pub value: LogValue,
    pub s_t: Vec<usize>,
}

impl InducedValue {
    /// `(1/(T tau)) ln` of the sum, or `None` for an empty window.
    pub fn normalized(&self, tau: usize) -> Option<f64> {
        self.value.ln().map(|v| v / (self.t * tau as f64))
    }
}

/// `P_{inv,psi,T}`: the sum of `e^{phi(p)}` over distinct length-`n`
/// prefixes `p` of `X_n`, over `n` in `S_T`.
pub fn induced_sum(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    w_psi: &PerSymbolWeights,
    t: f64,
    limits: &Limits,
) -> Result<InducedValue> {
    w_phi.check_language(lang)?;
    w_phi.check_compatible(w_psi)?;
    w_psi.require_positive()?;
    check_time(t)?;
    let budget = t * w_psi.tau() as f64;
    let n_top = max_prefix_len(w_psi, t);
    let levels = CountLevels::build(lang, w_phi, w_psi, n_top, limits)?;
    let a = lang.automaton();
    let mut acc = LogSum::new();
    let mut s_t = Vec::new();
    for (n, level) in levels.levels.iter().enumerate() {
        let mut hit = false;
        for class in level {
            if class.psi > budget {
                continue;
            }
            let out = match class.cursor {
                None => a.initial(),
                Some(c) => a.edges(c),
            };
            if out.iter().any(|&(s, _)| class.psi + w_psi.get(s) > budget) {
                acc.push_ln(class.ln_mult + class.phi);
                hit = true;
            }
        }
        if hit {
            s_t.push(n);
        }
    }
    Ok(InducedValue {
        t,
        value: acc.value(),
        s_t,
    })
}

/// `Q_{inv,psi,T}`: minimal spanning sets of each `X_n`, built greedily by
/// scanning `X_n` and keeping one word per uncovered length-`n` cylinder.
pub fn spanning_variant(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    w_psi: &PerSymbolWeights,
    t: f64,
    limits: &Limits,
) -> Result<InducedValue> {
    w_phi.check_language(lang)?;
    w_phi.check_compatible(w_psi)?;
    let sets = compute_level_sets(lang, w_psi, t, limits)?;
    let mut acc = LogSum::new();
    for (&n, words) in &sets.x {
        let mut covered: BTreeSet<Word> = BTreeSet::new();
        for w in words {
            let cyl = w.prefix(n);
            if !covered.contains(&cyl) {
                acc.push_ln(word_weight(cyl.symbols(), w_phi)?);
                covered.insert(cyl);
            }
        }
    }
    Ok(InducedValue {
        t,
        value: acc.value(),
        s_t: sets.s_t,
    })
}

/// Tuning of the truncated characterization sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacterizationOptions {
    /// Levels evaluated past the point where every word exceeds `T tau`.
    pub tail_levels: usize,
    /// Lag `k` of the tail-rate estimate `(ln a_N - ln a_{N-k}) / (k tau)`.
    pub lag: usize,
    /// Rates within `delta` of zero are inconclusive.
    pub delta: f64,
}

impl Default for CharacterizationOptions {
    fn default() -> Self {
        CharacterizationOptions {
            tail_levels: 240,
            lag: 120,
            delta: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailVerdict {
    /// Level sums decay geometrically; `ln` of the geometric tail bound.
    Convergent { tail_bound_ln: f64 },
    Divergent,
    Inconclusive,
}

impl TailVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            TailVerdict::Convergent { .. } => "convergent",
            TailVerdict::Divergent => "divergent",
            TailVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Truncated `R_{inv,psi,T}(phi - beta psi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterizationValue {
    pub beta: f64,
    /// `ln` of the partial sum over `G_T` up to `n_cap`.
    pub partial_ln: f64,
    pub g_start: usize,
    pub n_cap: usize,
    /// Estimated exponential rate of the level sums, per unit time.
    pub tail_rate: f64,
    pub verdict: TailVerdict,
}

/// Precomputed word classes for evaluating `R_T` at many `beta`.
pub struct CharacterizationProfile<'a> {
    lang: &'a WordLanguage,
    w_phi: &'a PerSymbolWeights,
    w_psi: &'a PerSymbolWeights,
    budget: f64,
    n_full: usize,
    levels: CountLevels,
    opts: CharacterizationOptions,
}

impl<'a> CharacterizationProfile<'a> {
    pub fn new(
        lang: &'a WordLanguage,
        w_phi: &'a PerSymbolWeights,
        w_psi: &'a PerSymbolWeights,
        t: f64,
        opts: CharacterizationOptions,
        limits: &Limits,
    ) -> Result<Self> {
        w_phi.check_language(lang)?;
        w_phi.check_compatible(w_psi)?;
        w_psi.require_positive()?;
        check_time(t)?;
        if opts.lag == 0 || opts.tail_levels < opts.lag || !(opts.delta >= 0.0) {
            return Err(Error::InvalidParameter(
                "need tail_levels >= lag >= 1 and delta >= 0".into(),
            ));
        }
        // Past n_full every word is heavier than T tau.
        let n_full = max_prefix_len(w_psi, t) + 1;
        let levels = CountLevels::build(lang, w_phi, w_psi, n_full, limits)?;
        Ok(CharacterizationProfile {
            lang,
            w_phi,
            w_psi,
            budget: t * w_psi.tau() as f64,
            n_full,
            levels,
            opts,
        })
    }

    /// `ln a_n` for `n = 1..=n_cap` (index `n - 1`), where `a_n` sums
    /// `e^{(phi - beta psi)(s)}` over words of length `n` heavier than `T tau`.
    fn level_sums(&self, beta: f64) -> Vec<LogValue> {
        let n_cap = self.n_full + self.opts.tail_levels;
        let mut out = Vec::with_capacity(n_cap);
        for level in &self.levels.levels[1..] {
            let mut acc = LogSum::new();
            for c in level {
                if c.psi > self.budget {
                    acc.push_ln(c.ln_mult + c.phi - beta * c.psi);
                }
            }
            out.push(acc.value());
        }
        let a = self.lang.automaton();
        let mut per_cursor = vec![LogSum::new(); a.num_cursors()];
        for c in &self.levels.levels[self.n_full] {
            let cur = c.cursor.expect("nonempty word") as usize;
            per_cursor[cur].push_ln(c.ln_mult + c.phi - beta * c.psi);
        }
        let mut cur: Vec<LogValue> = per_cursor.iter().map(LogSum::value).collect();
        let step: Vec<f64> = (0..self.lang.num_symbols())
            .map(|s| self.w_phi.values()[s] - beta * self.w_psi.values()[s])
            .collect();
        for _ in self.n_full..n_cap {
            let mut acc = vec![LogSum::new(); a.num_cursors()];
            for (c, v) in cur.iter().enumerate() {
                let LogValue::Ln(x) = *v else { continue };
                for &(s, d) in a.edges(c as Cursor) {
                    acc[d as usize].push_ln(x + step[s as usize]);
                }
            }
            cur = acc.iter().map(LogSum::value).collect();
            out.push(cur.iter().copied().sum());
        }
        out
    }

    pub fn evaluate(&self, beta: f64) -> CharacterizationValue {
        let sums = self.level_sums(beta);
        let n_cap = sums.len();
        let g_start = sums.iter().position(|v| !v.is_zero()).map_or(n_cap, |k| k + 1);
        let partial: LogValue = sums.iter().copied().sum();
        let tau = self.w_psi.tau() as f64;
        let k = self.opts.lag;
        let last = sums[n_cap - 1].ln().unwrap_or(f64::NEG_INFINITY);
        let before = sums[n_cap - 1 - k].ln().unwrap_or(f64::NEG_INFINITY);
        let rate = (last - before) / (k as f64 * tau);
        let verdict = if rate < -self.opts.delta {
            let q = rate * tau;
            TailVerdict::Convergent {
                tail_bound_ln: last + q - ln(-libm::expm1(q)),
            }
        } else if rate > self.opts.delta {
            TailVerdict::Divergent
        } else {
            TailVerdict::Inconclusive
        };
        CharacterizationValue {
            beta,
            partial_ln: partial.ln().unwrap_or(f64::NEG_INFINITY),
            g_start,
            n_cap,
            tail_rate: rate,
            verdict,
        }
    }
}

/// `R_{inv,psi,T}(phi - beta psi)` truncated at `n_cap`, with a tail verdict.
pub fn characterization_sum(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    w_psi: &PerSymbolWeights,
    beta: f64,
    t: f64,
    opts: CharacterizationOptions,
    limits: &Limits,
) -> Result<CharacterizationValue> {
    Ok(CharacterizationProfile::new(lang, w_phi, w_psi, t, opts, limits)?.evaluate(beta))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterizationScan {
    pub rows: Vec<CharacterizationValue>,
    /// `(last divergent beta, first convergent beta)` when the verdicts flip
    /// exactly once along the grid.
    pub flip: Option<(f64, f64)>,
}

/// Evaluates the characterization sum on a `beta` grid (sorted ascending).
pub fn characterization_scan(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    w_psi: &PerSymbolWeights,
    betas: &[f64],
    t: f64,
    opts: CharacterizationOptions,
    limits: &Limits,
) -> Result<CharacterizationScan> {
    let profile = CharacterizationProfile::new(lang, w_phi, w_psi, t, opts, limits)?;
    let mut grid = betas.to_vec();
    grid.sort_by(f64::total_cmp);
    let rows: Vec<_> = grid.iter().map(|&b| profile.evaluate(b)).collect();
    Ok(CharacterizationScan {
        flip: flip_of(&rows),
        rows,
    })
}

pub(crate) fn flip_of(rows: &[CharacterizationValue]) -> Option<(f64, f64)> {
    let last_div = rows
        .iter()
        .filter(|r| r.verdict == TailVerdict::Divergent)
        .map(|r| r.beta)
        .fold(None, |m: Option<f64>, b| Some(m.map_or(b, |m| m.max(b))))?;
    let first_conv = rows
        .iter()
        .filter(|r| matches!(r.verdict, TailVerdict::Convergent { .. }))
        .map(|r| r.beta)
        .fold(None, |m: Option<f64>, b| Some(m.map_or(b, |m| m.min(b))))?;
    (last_div < first_conv).then_some((last_div, first_conv))
}

/// Explicit upper bound `ln(T/m + 1)/(T tau) + ln q/(m tau) + |phi|/m` and
/// lower bound `-|phi|/m` for `(1/(T tau))` times the induced sum, with `m`
/// and `|phi|` the per-step rates of the weights.
pub fn induced_bounds(w_phi: &PerSymbolWeights, w_psi: &PerSymbolWeights, t: f64) -> (f64, f64) {
    let tau = w_psi.tau() as f64;
    let m = w_psi.min_rate();
    let norm = w_phi.max_abs_rate();
    let q = w_psi.len() as f64;
    let lower = -norm / m;
    let upper = ln(t / m + 1.0) / (t * tau) + ln(q) / (m * tau) + norm / m;
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[f64], tau: usize) -> PerSymbolWeights {
        PerSymbolWeights::from_symbol_sums(v.to_vec(), tau).unwrap()
    }

    fn golden() -> WordLanguage {
        WordLanguage::sft(vec![vec![true, true], vec![true, false]]).unwrap()
    }

    fn labels(ws: &[Word]) -> Vec<alloc::string::String> {
        ws.iter().map(|w| alloc::format!("{w}")).collect()
    }

    #[test]
    fn full_shift_level_sets() {
        let l = WordLanguage::full_shift(2).unwrap();
        let s = compute_level_sets(&l, &w(&[1.0, 1.0], 1), 10.5, &Limits::default()).unwrap();
        assert_eq!(s.s_t, [10]);
        assert_eq!(s.x[&10].len(), 1 << 11);
        assert_eq!(s.g_start, 11);
    }

    #[test]
    fn golden_mean_level_sets() {
        let s = compute_level_sets(&golden(), &w(&[1.0, 2.0], 1), 3.0, &Limits::default())
            .unwrap();
        assert_eq!(s.s_t, [2, 3]);
        // 0-based symbols print 1-based: 001 -> 1.1.2 and so on.
        assert_eq!(labels(&s.x[&2]), ["1.1.2", "1.2.1", "2.1.1", "2.1.2"]);
        assert_eq!(labels(&s.x[&3]), ["1.1.1.1", "1.1.1.2"]);
    }

    #[test]
    fn every_symbol_too_heavy_gives_n_zero() {
        let l = WordLanguage::full_shift(2).unwrap();
        let s = compute_level_sets(&l, &w(&[5.0, 6.0], 1), 1.0, &Limits::default()).unwrap();
        assert_eq!(s.s_t, [0]);
        let v = induced_sum(&l, &w(&[0.0, 0.0], 1), &w(&[5.0, 6.0], 1), 1.0, &Limits::default())
            .unwrap();
        assert_eq!(v.value, LogValue::ONE);
    }

    #[test]
    fn induced_sum_full_shift() {
        let l = WordLanguage::full_shift(2).unwrap();
        let zero = w(&[0.0, 0.0], 1);
        let one = w(&[1.0, 1.0], 1);
        let v = induced_sum(&l, &zero, &one, 10.5, &Limits::default()).unwrap();
        assert!((v.value.ln().unwrap() - 10.0 * libm::log(2.0)).abs() < 1e-12);
        let v = induced_sum(&l, &zero, &one, 40.5, &Limits::default()).unwrap();
        let closed = 40.0 * libm::log(2.0) / 40.5;
        assert!((v.normalized(1).unwrap() - closed).abs() < 1e-12);
        assert!((v.normalized(1).unwrap() - libm::log(2.0)).abs() < 0.02);
    }

    #[test]
    fn induced_sum_golden_mean_counts_distinct_prefixes() {
        let zero = w(&[0.0, 0.0], 1);
        let psi = w(&[1.0, 2.0], 1);
        let lim = Limits::default();
        let v = induced_sum(&golden(), &zero, &psi, 3.0, &lim).unwrap();
        let sets = compute_level_sets(&golden(), &psi, 3.0, &lim).unwrap();
        let distinct: usize = sets
            .x
            .iter()
            .map(|(&n, ws)| ws.iter().map(|w| w.prefix(n)).collect::<BTreeSet<_>>().len())
            .sum();
        assert_eq!(distinct, 4);
        assert!((v.value.ln().unwrap() - libm::log(4.0)).abs() < 1e-12);
        let s = spanning_variant(&golden(), &zero, &psi, 3.0, &lim).unwrap();
        assert!(v.value.relative_gap(s.value) < 1e-12);
        assert_eq!(v.s_t, s.s_t);
    }

    #[test]
    fn bookkeeping_index_bounds() {
        let psi = w(&[1.0, 2.5], 2);
        for &x in &[0.3, 2.5, 5.0, 5.01, 17.0] {
            let m = bookkeeping_index(x, &psi) as f64;
            let unit = psi.max_rate() * 2.0;
            assert!((m - 1.0) * unit < x && x <= m * unit);
        }
    }

    #[test]
    fn characterization_verdicts_full_shift() {
        let l = WordLanguage::full_shift(2).unwrap();
        let zero = w(&[0.0, 0.0], 1);
        let one = w(&[1.0, 1.0], 1);
        let opts = CharacterizationOptions::default();
        let lim = Limits::default();
        let ln2 = libm::log(2.0);
        let hi = characterization_sum(&l, &zero, &one, ln2 + 0.1, 20.0, opts, &lim).unwrap();
        assert!(matches!(hi.verdict, TailVerdict::Convergent { .. }));
        assert!((hi.tail_rate + 0.1).abs() < 1e-9);
        let lo = characterization_sum(&l, &zero, &one, ln2 - 0.1, 20.0, opts, &lim).unwrap();
        assert_eq!(lo.verdict, TailVerdict::Divergent);
        let at = characterization_sum(&l, &zero, &one, ln2, 20.0, opts, &lim).unwrap();
        assert_eq!(at.verdict, TailVerdict::Inconclusive);
    }

    #[test]
    fn convergent_partial_sum_matches_geometric_series() {
        let l = WordLanguage::full_shift(2).unwrap();
        let zero = w(&[0.0, 0.0], 1);
        let one = w(&[1.0, 1.0], 1);
        let beta = libm::log(2.0) + 0.1;
        let v = characterization_sum(
            &l,
            &zero,
            &one,
            beta,
            5.5,
            CharacterizationOptions::default(),
            &Limits::default(),
        )
        .unwrap();
        // a_n = e^{-0.1 n} for n >= 6.
        let oracle: f64 = (6..=v.n_cap).map(|n| libm::exp(-0.1 * n as f64)).sum();
        assert_eq!(v.g_start, 6);
        assert!((v.partial_ln - libm::log(oracle)).abs() < 1e-10);
        let TailVerdict::Convergent { tail_bound_ln } = v.verdict else {
            panic!("expected convergence")
        };
        let rest: f64 = (v.n_cap + 1..v.n_cap + 2000)
            .map(|n| libm::exp(-0.1 * n as f64))
            .sum();
        assert!((tail_bound_ln - libm::log(rest)).abs() < 1e-8);
    }

    #[test]
    fn scan_flip_brackets_roots() {
        let l = WordLanguage::full_shift(2).unwrap();
        let zero = w(&[0.0, 0.0], 1);
        let one = w(&[1.0, 1.0], 1);
        let grid: Vec<f64> = (0..=20).map(|k| 0.59 + 0.01 * k as f64).collect();
        let scan = characterization_scan(
            &l,
            &zero,
            &one,
            &grid,
            20.0,
            CharacterizationOptions::default(),
            &Limits::default(),
        )
        .unwrap();
        let (a, b) = scan.flip.unwrap();
        assert!(a < libm::log(2.0) && libm::log(2.0) < b);

        let psi = w(&[1.0, 2.0], 1);
        let grid: Vec<f64> = (0..=20).map(|k| 0.05 * k as f64).collect();
        let scan = characterization_scan(
            &golden(),
            &zero,
            &psi,
            &grid,
            20.0,
            CharacterizationOptions::default(),
            &Limits::default(),
        )
        .unwrap();
        let (a, b) = scan.flip.unwrap();
        assert!(a < 0.3823 && 0.3823 < b);
    }

    #[test]
    fn single_word_language_flip() {
        let l = WordLanguage::itinerary(vec![0], vec![0], 1).unwrap();
        let phi = w(&[0.6], 1);
        let psi = w(&[1.5], 1);
        let grid: Vec<f64> = (0..=20).map(|k| 0.05 * k as f64).collect();
        let scan = characterization_scan(
            &l,
            &phi,
            &psi,
            &grid,
            10.0,
            CharacterizationOptions::default(),
            &Limits::default(),
        )
        .unwrap();
        let (a, b) = scan.flip.unwrap();
        assert!(a < 0.4 && 0.4 < b);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn instance() -> impl Strategy<Value = (WordLanguage, PerSymbolWeights, PerSymbolWeights)> {
            (2usize..4).prop_flat_map(|q| {
                (
                    proptest::collection::vec(proptest::bool::weighted(0.7), q * q),
                    proptest::collection::vec(-1.0f64..1.0, q),
                    proptest::collection::vec(0.5f64..2.0, q),
                    1usize..3,
                )
                    .prop_filter_map("dead end", move |(bits, phi, psi, tau)| {
                        let rows = bits.chunks(q).map(|r| r.to_vec()).collect();
                        let l = WordLanguage::sft(rows).ok()?;
                        Some((
                            l,
                            PerSymbolWeights::from_symbol_sums(phi, tau).unwrap(),
                            PerSymbolWeights::from_symbol_sums(psi, tau).unwrap(),
                        ))
                    })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn dp_matches_enumeration((l, phi, psi) in instance(), t in 1.0f64..6.0) {
                let lim = Limits::default();
                let a = induced_sum(&l, &phi, &psi, t, &lim).unwrap();
                let b = spanning_variant(&l, &phi, &psi, t, &lim).unwrap();
                prop_assert_eq!(&a.s_t, &b.s_t);
                prop_assert!(a.value.relative_gap(b.value) < 1e-11);
            }

            #[test]
            fn s_t_window((l, _phi, psi) in instance(), t in 1.0f64..8.0) {
                let s = compute_level_sets(&l, &psi, t, &Limits::default()).unwrap();
                let lo = t / psi.max_rate() - 1.0;
                let hi = t / psi.min_rate();
                for &n in &s.s_t {
                    prop_assert!(lo < n as f64 && n as f64 <= hi);
                }
                for (&n, ws) in &s.x {
                    for w in ws {
                        prop_assert_eq!(w.len(), n + 1);
                    }
                }
            }

            #[test]
            fn finiteness_bounds((l, phi, psi) in instance(), t in 1.0f64..8.0) {
                let v = induced_sum(&l, &phi, &psi, t, &Limits::default()).unwrap();
                let (lo, hi) = induced_bounds(&phi, &psi, t);
                let x = v.normalized(psi.tau()).unwrap();
                prop_assert!(lo - 1e-12 <= x && x <= hi + 1e-12);
            }
        }
    }
}
