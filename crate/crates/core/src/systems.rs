//! Concrete control systems and validation of invariant partitions.
//!
//! Two backends are provided: finite-state systems, which are validated by
//! exhaustive simulation and compile to itinerary languages, and
//! one-dimensional affine contractions `x -> q x + u`, validated with exact
//! rational interval arithmetic.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::symbolic::{PartitionSpec, Symbol, WordLanguage};
use crate::{Error, Result};

pub type Rational = BigRational;

/// A deterministic finite-state control system `x_{k+1} = F(x_k, u_k)`,
/// with states and control values given by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStateSystem {
    transition: Vec<Vec<Option<usize>>>,
    invariant: Vec<bool>,
    partition_of: Vec<Option<Symbol>>,
}

impl FiniteStateSystem {
    /// `transitions` lists `(state, control, successor)` triples; missing pairs
    /// are undefined. `invariant` lists the states of `Q`; `partition_of`
    /// assigns a 0-based symbol to each state of `Q`.
    pub fn new(
        num_states: usize,
        num_controls: usize,
        transitions: &[(usize, usize, usize)],
        invariant: &[usize],
        partition_of: &[(usize, Symbol)],
    ) -> Result<Self> {
        if num_states == 0 {
            return Err(Error::InvalidSystem("no states".into()));
        }
        if num_controls == 0 {
            return Err(Error::EmptyControlRange);
        }
        let mut transition = vec![vec![None; num_controls]; num_states];
        for &(x, u, y) in transitions {
            if x >= num_states || y >= num_states {
                return Err(Error::InvalidSystem(format!(
                    "transition ({x}, {u}, {y}) references an unknown state"
                )));
            }
            if u >= num_controls {
                return Err(Error::InvalidSystem(format!(
                    "transition ({x}, {u}, {y}) references an unknown control"
                )));
            }
            match transition[x][u] {
                Some(prev) if prev != y => {
                    return Err(Error::InvalidSystem(format!(
                        "state {x} under control {u} has two successors"
                    )))
                }
                _ => transition[x][u] = Some(y),
            }
        }
        let mut inv = vec![false; num_states];
        for &x in invariant {
            if x >= num_states {
                return Err(Error::InvalidSystem(format!(
                    "invariant set references unknown state {x}"
                )));
            }
            inv[x] = true;
        }
        if !inv.iter().any(|&b| b) {
            return Err(Error::InvalidSystem("invariant set is empty".into()));
        }
        let mut labels = vec![None; num_states];
        for &(x, s) in partition_of {
            if x >= num_states || !inv[x] {
                return Err(Error::InvalidSystem(format!(
                    "partition assigns a symbol to state {x} outside the invariant set"
                )));
            }
            labels[x] = Some(s);
        }
        for x in 0..num_states {
            if !inv[x] {
                continue;
            }
            if labels[x].is_none() {
                return Err(Error::InvalidSystem(format!(
                    "state {x} of the invariant set has no partition cell"
                )));
            }
            let stays = transition[x].iter().any(|y| matches!(y, Some(y) if inv[*y]));
            if !stays {
                return Err(Error::InvalidSystem(format!(
                    "invariant set is not controlled invariant at state {x}"
                )));
            }
        }
        Ok(FiniteStateSystem {
            transition,
            invariant: inv,
            partition_of: labels,
        })
    }

    pub fn num_states(&self) -> usize {
        self.transition.len()
    }

    pub fn in_invariant_set(&self, x: usize) -> bool {
        self.invariant[x]
    }

    pub fn cell_of(&self, x: usize) -> Option<Symbol> {
        self.partition_of[x]
    }

    pub fn step(&self, x: usize, u: usize) -> Option<usize> {
        self.transition[x].get(u).copied().flatten()
    }
}

/// The affine interval system `x_{k+1} = q x_k + u_k` on `Q = [a, b]`, with
/// cells `[c_i, c_{i+1})` (the last one closed) cut at interior points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineIntervalSystem {
    contraction: Rational,
    controls: Vec<Rational>,
    interval: (Rational, Rational),
    cuts: Vec<Rational>,
}

impl AffineIntervalSystem {
    /// `controls[k]` is the numeric value of the `k`-th control of the range.
    pub fn new(
        contraction: Rational,
        controls: Vec<Rational>,
        interval: (Rational, Rational),
        cuts: Vec<Rational>,
    ) -> Result<Self> {
        if !(contraction.is_positive() && contraction < Rational::one()) {
            return Err(Error::InvalidSystem("contraction must lie in (0, 1)".into()));
        }
        if controls.is_empty() {
            return Err(Error::EmptyControlRange);
        }
        if controls.iter().any(Signed::is_negative) {
            return Err(Error::InvalidSystem("control values must be nonnegative".into()));
        }
        let (a, b) = &interval;
        if a >= b {
            return Err(Error::InvalidSystem("interval must have a < b".into()));
        }
        let mut prev = a;
        for c in &cuts {
            if c <= prev || c >= b {
                return Err(Error::InvalidSystem(
                    "cut points must be strictly increasing interior points".into(),
                ));
            }
            prev = c;
        }
        Ok(AffineIntervalSystem {
            contraction,
            controls,
            interval,
            cuts,
        })
    }

    pub fn num_cells(&self) -> usize {
        self.cuts.len() + 1
    }

    /// Closure `[lo, hi]` of cell `i` (0-based).
    pub fn cell_closure(&self, i: usize) -> (Rational, Rational) {
        let lo = if i == 0 {
            self.interval.0.clone()
        } else {
            self.cuts[i - 1].clone()
        };
        let hi = if i == self.cuts.len() {
            self.interval.1.clone()
        } else {
            self.cuts[i].clone()
        };
        (lo, hi)
    }
}

/// One escape from `Q`: symbol (1-based), step `j`, and a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub symbol: usize,
    pub step: usize,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionValidationReport {
    pub violations: Vec<Violation>,
}

impl PartitionValidationReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `phi(j, A_i, nu(A_i)) in Q` for every cell and `j = 0..tau` by
/// simulating every state of every cell.
pub fn validate_finite_state(
    sys: &FiniteStateSystem,
    spec: &PartitionSpec,
) -> Result<PartitionValidationReport> {
    let q = spec.num_symbols();
    let mut report = PartitionValidationReport::default();
    for x in 0..sys.num_states() {
        if !sys.invariant[x] {
            continue;
        }
        let i = sys.partition_of[x].expect("checked at construction");
        if i as usize >= q {
            return Err(Error::SymbolMismatch(format!(
                "state {x} lies in cell {} but the partition has {q} symbols",
                i as usize + 1
            )));
        }
        let mut y = x;
        for (j, &u) in spec.control_word(i).iter().enumerate() {
            match sys.step(y, u) {
                Some(z) if sys.invariant[z] => y = z,
                next => {
                    let witness = match next {
                        Some(z) => format!("state {x} reaches {z}"),
                        None => format!("state {x}: transition from {y} undefined"),
                    };
                    report.violations.push(Violation {
                        symbol: i as usize + 1,
                        step: j + 1,
                        witness,
                    });
                    break;
                }
            }
        }
    }
    Ok(report)
}

/// Propagates each cell's closure through `x -> q x + u` one step at a time
/// with exact rationals and flags the first step whose image leaves `Q`.
pub fn validate_affine(
    sys: &AffineIntervalSystem,
    spec: &PartitionSpec,
) -> Result<PartitionValidationReport> {
    if spec.num_symbols() != sys.num_cells() {
        return Err(Error::SymbolMismatch(format!(
            "system has {} cells but the partition has {} symbols",
            sys.num_cells(),
            spec.num_symbols()
        )));
    }
    let (a, b) = &sys.interval;
    let mut report = PartitionValidationReport::default();
    for i in 0..sys.num_cells() {
        let (mut lo, mut hi) = sys.cell_closure(i);
        for (j, &u) in spec.control_word(i as Symbol).iter().enumerate() {
            let u = sys.controls.get(u).ok_or_else(|| {
                Error::SymbolMismatch(format!("control index {u} has no numeric value"))
            })?;
            lo = &sys.contraction * &lo + u;
            hi = &sys.contraction * &hi + u;
            if &lo < a || &hi > b {
                report.violations.push(Violation {
                    symbol: i + 1,
                    step: j + 1,
                    witness: format!("[{lo}, {hi}]"),
                });
                break;
            }
        }
    }
    Ok(report)
}

/// The itinerary language of the `tau`-step map `T(x) = phi(tau, x, nu(A_x))`.
pub fn itinerary_language(sys: &FiniteStateSystem, spec: &PartitionSpec) -> Result<WordLanguage> {
    if !validate_finite_state(sys, spec)?.valid() {
        return Err(Error::PartitionNotValid);
    }
    let states: Vec<usize> = (0..sys.num_states())
        .filter(|&x| sys.invariant[x])
        .collect();
    let mut index = vec![usize::MAX; sys.num_states()];
    for (k, &x) in states.iter().enumerate() {
        index[x] = k;
    }
    let mut next = Vec::with_capacity(states.len());
    let mut label = Vec::with_capacity(states.len());
    for &x in &states {
        let i = sys.partition_of[x].expect("checked at construction");
        let y = spec
            .control_word(i)
            .iter()
            .try_fold(x, |y, &u| sys.step(y, u))
            .expect("validated");
        next.push(index[y]);
        label.push(i);
    }
    WordLanguage::itinerary(next, label, spec.num_symbols())
}

/// SFT language from 1-based `(from, to)` pairs over `symbols` symbols, which
/// must agree with the partition.
pub fn compile_sft(
    symbols: usize,
    allowed: &[(usize, usize)],
    spec: Option<&PartitionSpec>,
) -> Result<WordLanguage> {
    if let Some(spec) = spec {
        if spec.num_symbols() != symbols {
            return Err(Error::SymbolMismatch(format!(
                "relation has {symbols} symbols but the partition has {}",
                spec.num_symbols()
            )));
        }
    }
    if symbols == 0 {
        return Err(Error::NoSymbols);
    }
    let mut rel = vec![vec![false; symbols]; symbols];
    for &(i, j) in allowed {
        for s in [i, j] {
            if s == 0 || s > symbols {
                return Err(Error::UnknownSymbol(s));
            }
        }
        rel[i - 1][j - 1] = true;
    }
    WordLanguage::sft(rel)
}

/// Parses `3`, `-1.25`, `2.5e-3` or `1/3` as an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("`{text}` is not a rational number"));
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut all = String::with_capacity(int.len() + frac.len());
    all.push_str(int);
    all.push_str(frac);
    let n = BigInt::from_str(&all).map_err(|_| bad())?;
    let scale = exponent as i64 - frac.len() as i64;
    let ten = BigInt::from(10u8);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    let mut r = if scale >= 0 {
        Rational::from_integer(n * pow)
    } else {
        Rational::new(n, pow)
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Formats a rational for messages.
pub fn rational_to_string(r: &Rational) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{enumerate_words, ControlRange};
    use crate::Limits;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn two_controls() -> ControlRange {
        ControlRange::new(["a", "b"]).unwrap()
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(r("1/2"), Rational::new(1.into(), 2.into()));
        assert_eq!(r("0.5"), r("1/2"));
        assert_eq!(r("-1.25"), Rational::new((-5).into(), 4.into()));
        assert_eq!(r("2.5e-3"), Rational::new(1.into(), 400.into()));
        assert_eq!(r("3"), Rational::from_integer(3.into()));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn affine_halving_partition_is_valid() {
        let range = two_controls();
        let sys = AffineIntervalSystem::new(
            r("1/2"),
            vec![r("0"), r("1/2")],
            (r("0"), r("1")),
            vec![r("1/2")],
        )
        .unwrap();
        let spec = PartitionSpec::new(&range, 1, &[vec!["a"], vec!["b"]]).unwrap();
        let rep = validate_affine(&sys, &spec).unwrap();
        assert!(rep.valid(), "{rep:?}");
    }

    #[test]
    fn affine_escape_is_reported_at_step_one() {
        let range = two_controls();
        let sys = AffineIntervalSystem::new(
            r("1/2"),
            vec![r("0"), r("1/2")],
            (r("0"), r("1/2")),
            vec![],
        )
        .unwrap();
        let spec = PartitionSpec::new(&range, 1, &[vec!["b"]]).unwrap();
        let rep = validate_affine(&sys, &spec).unwrap();
        assert!(!rep.valid());
        assert_eq!(rep.violations[0].symbol, 1);
        assert_eq!(rep.violations[0].step, 1);
        assert_eq!(rep.violations[0].witness, "[1/2, 3/4]");
    }

    #[test]
    fn affine_shape_errors() {
        assert!(AffineIntervalSystem::new(r("1"), vec![r("0")], (r("0"), r("1")), vec![]).is_err());
        assert!(
            AffineIntervalSystem::new(r("1/2"), vec![r("0")], (r("0"), r("1")), vec![r("1")])
                .is_err()
        );
        let range = two_controls();
        let sys =
            AffineIntervalSystem::new(r("1/2"), vec![r("0"), r("0")], (r("0"), r("1")), vec![])
                .unwrap();
        let spec = PartitionSpec::new(&range, 1, &[vec!["a"], vec!["a"]]).unwrap();
        assert!(matches!(
            validate_affine(&sys, &spec),
            Err(Error::SymbolMismatch(_))
        ));
    }

    fn words(l: &WordLanguage, n: usize) -> Vec<String> {
        enumerate_words(l, n, &Limits::default())
            .unwrap()
            .iter()
            .map(|w| format!("{w}"))
            .collect()
    }

    #[test]
    fn single_state_has_one_word_per_length() {
        let range = ControlRange::new(["a"]).unwrap();
        let sys = FiniteStateSystem::new(1, 1, &[(0, 0, 0)], &[0], &[(0, 0)]).unwrap();
        let spec = PartitionSpec::new(&range, 1, &[vec!["a"]]).unwrap();
        let l = itinerary_language(&sys, &spec).unwrap();
        assert_eq!(words(&l, 5), ["1.1.1.1.1"]);
    }

    #[test]
    fn two_cycle_alternates() {
        let range = ControlRange::new(["a"]).unwrap();
        let sys =
            FiniteStateSystem::new(2, 1, &[(0, 0, 1), (1, 0, 0)], &[0, 1], &[(0, 0), (1, 1)])
                .unwrap();
        let spec = PartitionSpec::new(&range, 1, &[vec!["a"], vec!["a"]]).unwrap();
        let l = itinerary_language(&sys, &spec).unwrap();
        assert_eq!(words(&l, 3), ["1.2.1", "2.1.2"]);
    }

    #[test]
    fn fixed_point_plus_two_cycle() {
        let range = ControlRange::new(["a"]).unwrap();
        let sys = FiniteStateSystem::new(
            3,
            1,
            &[(0, 0, 0), (1, 0, 2), (2, 0, 1)],
            &[0, 1, 2],
            &[(0, 0), (1, 1), (2, 2)],
        )
        .unwrap();
        let spec = PartitionSpec::new(&range, 1, &[vec!["a"], vec!["a"], vec!["a"]]).unwrap();
        let l = itinerary_language(&sys, &spec).unwrap();
        assert_eq!(l.count_words(4), 3.0);
    }

    #[test]
    fn escaping_control_word_is_flagged_and_blocks_compilation() {
        // State 1 leaves Q = {0, 1} under control b.
        let range = two_controls();
        let sys = FiniteStateSystem::new(
            3,
            2,
            &[(0, 0, 1), (1, 0, 0), (1, 1, 2), (2, 0, 2)],
            &[0, 1],
            &[(0, 0), (1, 1)],
        )
        .unwrap();
        let spec = PartitionSpec::new(&range, 2, &[vec!["a", "a"], vec!["a", "b"]]).unwrap();
        let rep = validate_finite_state(&sys, &spec).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!((rep.violations[0].symbol, rep.violations[0].step), (2, 2));
        assert_eq!(itinerary_language(&sys, &spec), Err(Error::PartitionNotValid));
    }

    #[test]
    fn tau_zero_is_rejected() {
        let range = two_controls();
        assert_eq!(
            PartitionSpec::new(&range, 0, &[Vec::<&str>::new()]),
            Err(Error::InvalidTau)
        );
    }

    #[test]
    fn compile_sft_examples() {
        let full: Vec<_> = (1..=3).flat_map(|i| (1..=3).map(move |j| (i, j))).collect();
        let l = compile_sft(3, &full, None).unwrap();
        assert_eq!(l.count_words(5), 243.0);
        let g = compile_sft(2, &[(1, 1), (1, 2), (2, 1)], None).unwrap();
        let counts: Vec<f64> = (1..=12).map(|n| g.count_words(n)).collect();
        for n in 2..12 {
            assert_eq!(counts[n], counts[n - 1] + counts[n - 2]);
        }
        assert_eq!(
            compile_sft(2, &[(1, 1)], None),
            Err(Error::SymbolWithoutSuccessor(2))
        );
    }
}
