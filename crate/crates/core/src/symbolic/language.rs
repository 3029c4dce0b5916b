use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{Symbol, Word};
use crate::{Error, Limits, Result};

/// State of the language automaton after reading a nonempty admissible word.
pub type Cursor = u32;

const MAX_CURSORS: usize = 1 << 20;

/// Deterministic automaton recognising the admissible words.
///
/// Every admissible word corresponds to exactly one path from the (implicit)
/// start state, so sums over words can be computed as sums over paths. For a
/// shift of finite type the cursor is the last symbol read; for an itinerary
/// language it is the set of states reachable with that itinerary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    initial: Vec<(Symbol, Cursor)>,
    edges: Vec<Vec<(Symbol, Cursor)>>,
}

impl Automaton {
    pub fn num_cursors(&self) -> usize {
        self.edges.len()
    }

    /// Transitions out of the start state, in symbol order.
    pub fn initial(&self) -> &[(Symbol, Cursor)] {
        &self.initial
    }

    /// Transitions out of `c`, in symbol order.
    pub fn edges(&self, c: Cursor) -> &[(Symbol, Cursor)] {
        &self.edges[c as usize]
    }

    pub fn start(&self, s: Symbol) -> Option<Cursor> {
        find(&self.initial, s)
    }

    pub fn step(&self, c: Cursor, s: Symbol) -> Option<Cursor> {
        find(&self.edges[c as usize], s)
    }
}

fn find(list: &[(Symbol, Cursor)], s: Symbol) -> Option<Cursor> {
    list.binary_search_by_key(&s, |e| e.0)
        .ok()
        .map(|k| list[k].1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Presentation {
    Sft(Vec<Vec<bool>>),
    Itinerary { next: Vec<usize>, label: Vec<Symbol> },
}

/// The factorial, extendable set of admissible words of a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordLanguage {
    q: usize,
    presentation: Presentation,
    automaton: Automaton,
}

impl WordLanguage {
    /// Shift of finite type given by an allowed-transition relation
    /// (`allowed[i][j]` means `j` may follow `i`).
    pub fn sft(allowed: Vec<Vec<bool>>) -> Result<Self> {
        let q = allowed.len();
        if q == 0 {
            return Err(Error::NoSymbols);
        }
        if q > Symbol::MAX as usize {
            return Err(Error::InvalidParameter("too many symbols".into()));
        }
        for (i, row) in allowed.iter().enumerate() {
            if row.len() != q {
                return Err(Error::InvalidParameter(alloc::format!(
                    "transition row {} has length {}, expected {q}",
                    i + 1,
                    row.len()
                )));
            }
            if !row.iter().any(|&a| a) {
                return Err(Error::SymbolWithoutSuccessor(i + 1));
            }
        }
        let initial = (0..q).map(|i| (i as Symbol, i as Cursor)).collect();
        let edges = allowed
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &a)| a)
                    .map(|(j, _)| (j as Symbol, j as Cursor))
                    .collect()
            })
            .collect();
        Ok(WordLanguage {
            q,
            presentation: Presentation::Sft(allowed),
            automaton: Automaton { initial, edges },
        })
    }

    pub fn full_shift(q: usize) -> Result<Self> {
        Self::sft(vec![vec![true; q]; q])
    }

    /// Itineraries of a deterministic finite-state map: state `x` lies in the
    /// cell `label[x]` and moves to `next[x]` after one block of `tau` steps.
    pub fn itinerary(next: Vec<usize>, label: Vec<Symbol>, q: usize) -> Result<Self> {
        let k = next.len();
        if k == 0 || label.len() != k {
            return Err(Error::InvalidSystem(
                "itinerary map needs one label per state".into(),
            ));
        }
        if q == 0 {
            return Err(Error::NoSymbols);
        }
        if let Some(&x) = next.iter().find(|&&x| x >= k) {
            return Err(Error::InvalidSystem(alloc::format!(
                "state index {x} out of range"
            )));
        }
        if let Some(&s) = label.iter().find(|&&s| s as usize >= q) {
            return Err(Error::UnknownSymbol(s as usize + 1));
        }

        // Subset construction over "current positions".
        let mut ids: BTreeMap<Vec<u32>, Cursor> = BTreeMap::new();
        let mut sets: Vec<Vec<u32>> = Vec::new();
        let mut edges: Vec<Vec<(Symbol, Cursor)>> = Vec::new();
        let all: Vec<u32> = (0..k as u32).collect();

        let successors = |set: &[u32],
                              ids: &mut BTreeMap<Vec<u32>, Cursor>,
                              sets: &mut Vec<Vec<u32>>|
         -> Result<Vec<(Symbol, Cursor)>> {
            let mut by_symbol: BTreeMap<Symbol, Vec<u32>> = BTreeMap::new();
            for &x in set {
                by_symbol
                    .entry(label[x as usize])
                    .or_default()
                    .push(next[x as usize] as u32);
            }
            let mut out = Vec::with_capacity(by_symbol.len());
            for (s, mut tgt) in by_symbol {
                tgt.sort_unstable();
                tgt.dedup();
                let id = match ids.get(&tgt) {
                    Some(&id) => id,
                    None => {
                        if sets.len() >= MAX_CURSORS {
                            return Err(Error::InvalidSystem(
                                "itinerary automaton is too large".into(),
                            ));
                        }
                        let id = sets.len() as Cursor;
                        ids.insert(tgt.clone(), id);
                        sets.push(tgt);
                        id
                    }
                };
                out.push((s, id));
            }
            Ok(out)
        };

        let initial = successors(&all, &mut ids, &mut sets)?;
        let mut done = 0;
        while done < sets.len() {
            let set = sets[done].clone();
            let out = successors(&set, &mut ids, &mut sets)?;
            edges.push(out);
            done += 1;
        }

        Ok(WordLanguage {
            q,
            presentation: Presentation::Itinerary { next, label },
            automaton: Automaton { initial, edges },
        })
    }

    pub fn num_symbols(&self) -> usize {
        self.q
    }

    pub fn is_sft(&self) -> bool {
        matches!(self.presentation, Presentation::Sft(_))
    }

    /// Allowed-transition relation, for shifts of finite type.
    pub fn sft_relation(&self) -> Option<&[Vec<bool>]> {
        match &self.presentation {
            Presentation::Sft(a) => Some(a),
            Presentation::Itinerary { .. } => None,
        }
    }

    /// Underlying finite-state map `(next, label)`, for itinerary languages.
    pub fn itinerary_map(&self) -> Option<(&[usize], &[Symbol])> {
        match &self.presentation {
            Presentation::Sft(_) => None,
            Presentation::Itinerary { next, label } => Some((next, label)),
        }
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    /// Cursor reached after reading `word`; `None` if it is not admissible
    /// or empty.
    pub fn cursor_of(&self, word: &[Symbol]) -> Option<Cursor> {
        let (&first, rest) = word.split_first()?;
        let mut c = self.automaton.start(first)?;
        for &s in rest {
            c = self.automaton.step(c, s)?;
        }
        Some(c)
    }

    pub fn is_admissible(&self, word: &[Symbol]) -> bool {
        word.is_empty() || self.cursor_of(word).is_some()
    }

    /// `#L^n`, as a float (exact while below `2^53`).
    pub fn count_words(&self, n: usize) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let a = &self.automaton;
        let mut cur = vec![0.0_f64; a.num_cursors()];
        for &(_, c) in a.initial() {
            cur[c as usize] += 1.0;
        }
        for _ in 1..n {
            let mut nxt = vec![0.0_f64; a.num_cursors()];
            for (c, &m) in cur.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                for &(_, d) in a.edges(c as Cursor) {
                    nxt[d as usize] += m;
                }
            }
            cur = nxt;
        }
        cur.iter().sum()
    }
}

/// All admissible words of length `n`, in lexicographic order.
pub fn enumerate_words(lang: &WordLanguage, n: usize, limits: &Limits) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "word length must be positive".into(),
        ));
    }
    limits.check_words(lang.count_words(n))?;
    let a = lang.automaton();
    let mut out = Vec::new();
    let mut prefix: Vec<Symbol> = Vec::with_capacity(n);
    // Explicit DFS stack of (edge list, next index).
    let mut stack: Vec<(&[(Symbol, Cursor)], usize)> = vec![(a.initial(), 0)];
    while let Some(top) = stack.last_mut() {
        let (list, idx) = *top;
        if idx == list.len() {
            stack.pop();
            prefix.pop();
            continue;
        }
        top.1 += 1;
        let (s, c) = list[idx];
        prefix.push(s);
        if prefix.len() == n {
            out.push(Word(prefix.clone()));
            prefix.pop();
        } else {
            stack.push((a.edges(c), 0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn golden_mean() -> WordLanguage {
        WordLanguage::sft(vec![vec![true, true], vec![true, false]]).unwrap()
    }

    #[test]
    fn full_two_shift_words() {
        let l = WordLanguage::full_shift(2).unwrap();
        let w = enumerate_words(&l, 2, &Limits::default()).unwrap();
        let labels: Vec<_> = w.iter().map(|w| alloc::format!("{w}")).collect();
        assert_eq!(labels, ["1.1", "1.2", "2.1", "2.2"]);
    }

    #[test]
    fn golden_mean_counts_are_fibonacci() {
        let l = golden_mean();
        let w = enumerate_words(&l, 3, &Limits::default()).unwrap();
        assert_eq!(w.len(), 5);
        let (mut a, mut b) = (3.0, 5.0);
        for n in 2..30 {
            assert_eq!(l.count_words(n), a, "n = {n}");
            let c = a + b;
            a = b;
            b = c;
        }
    }

    #[test]
    fn guard_trips_instead_of_allocating() {
        let l = WordLanguage::full_shift(3).unwrap();
        let err = enumerate_words(&l, 30, &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::GuardTripped { .. }));
    }

    #[test]
    fn dead_end_symbol_is_rejected() {
        let err = WordLanguage::sft(vec![vec![true, true], vec![false, false]]).unwrap_err();
        assert_eq!(err, Error::SymbolWithoutSuccessor(2));
    }

    #[test]
    fn itinerary_of_a_cycle_is_periodic() {
        // 0 -> 1 -> 2 -> 0 with labels 1, 2, 2.
        let l = WordLanguage::itinerary(vec![1, 2, 0], vec![0, 1, 1], 2).unwrap();
        let w = enumerate_words(&l, 3, &Limits::default()).unwrap();
        let labels: Vec<_> = w.iter().map(|w| alloc::format!("{w}")).collect();
        assert_eq!(labels, ["1.2.2", "2.1.2", "2.2.1"]);
        assert!(!l.is_admissible(&[0, 0]));
    }

    #[test]
    fn itinerary_matches_direct_orbit_enumeration() {
        let next = vec![1, 3, 0, 3, 2, 0];
        let label = vec![0, 1, 0, 2, 1, 2];
        let l = WordLanguage::itinerary(next.clone(), label.clone(), 3).unwrap();
        for n in 1..8 {
            let mut direct: Vec<Vec<Symbol>> = (0..next.len())
                .map(|mut x| {
                    (0..n)
                        .map(|_| {
                            let s = label[x];
                            x = next[x];
                            s
                        })
                        .collect()
                })
                .collect();
            direct.sort();
            direct.dedup();
            let got: Vec<Vec<Symbol>> = enumerate_words(&l, n, &Limits::default())
                .unwrap()
                .into_iter()
                .map(|w| w.0)
                .collect();
            assert_eq!(got, direct, "n = {n}");
            assert_eq!(l.count_words(n), direct.len() as f64);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn sft_strategy() -> impl Strategy<Value = WordLanguage> {
            (1usize..5)
                .prop_flat_map(|q| proptest::collection::vec(proptest::bool::ANY, q * q))
                .prop_filter_map("dead end", |bits| {
                    let q = (bits.len() as f64).sqrt() as usize;
                    let rows = bits.chunks(q).map(|r| r.to_vec()).collect();
                    WordLanguage::sft(rows).ok()
                })
        }

        proptest! {
            #[test]
            fn factorial_and_extendable(l in sft_strategy(), n in 1usize..7) {
                let lim = Limits::default();
                let words = enumerate_words(&l, n, &lim).unwrap();
                let longer = enumerate_words(&l, n + 1, &lim).unwrap();
                for w in &words {
                    prop_assert!(longer.iter().any(|v| w.is_prefix_of(v)));
                }
                for v in &longer {
                    prop_assert!(l.is_admissible(&v.0[1..]));
                    prop_assert!(words.contains(&v.prefix(n)));
                }
            }
        }
    }
}
