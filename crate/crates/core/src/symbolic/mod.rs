//! The symbolic skeleton of an invariant partition.
//!
//! A partition `C = (A, tau, nu)` contributes three things downstream code
//! needs: the alphabet of cells, the language of admissible words, and the
//! control word `nu(A_i)` attached to each cell. Potentials on the control
//! range enter only through the per-symbol sums `w(i) = sum_j phi((nu(A_i))_j)`,
//! which turn the weight of a word into an additive cocycle. They are
//! compiled once into [`PerSymbolWeights`]; nothing after that looks at the
//! control range again.

mod language;
mod tree;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

pub use language::{enumerate_words, Automaton, Cursor, WordLanguage};
pub use tree::{build_cylinder_tree, CylinderTree, NodeId};

/// A partition symbol. Stored 0-based; displayed 1-based.
pub type Symbol = u16;

/// A finite word over the partition alphabet.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// Builds a word from 1-based symbol labels.
    pub fn from_labels(labels: &[usize]) -> Result<Word> {
        labels
            .iter()
            .map(|&l| {
                if l == 0 || l > Symbol::MAX as usize {
                    Err(Error::UnknownSymbol(l))
                } else {
                    Ok((l - 1) as Symbol)
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

/// 1-based labels joined by `.`; the empty word prints as `e`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}", *s as usize + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// The finite control range `U` together with named potentials on it.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlRange {
    values: Vec<String>,
    potentials: BTreeMap<String, Vec<f64>>,
}

impl ControlRange {
    pub fn new<I, S>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        if values.is_empty() {
            return Err(Error::EmptyControlRange);
        }
        for (i, v) in values.iter().enumerate() {
            if values[..i].contains(v) {
                return Err(Error::DuplicateControl(v.clone()));
            }
        }
        Ok(ControlRange {
            values,
            potentials: BTreeMap::new(),
        })
    }

    /// Registers a potential given as `(control value, real)` pairs. Every
    /// control value must receive exactly one entry.
    pub fn insert_potential<I, S>(&mut self, name: &str, table: I) -> Result<()>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let mut slots: Vec<Option<f64>> = alloc::vec![None; self.values.len()];
        for (control, value) in table {
            let control = control.as_ref();
            let idx = self
                .index_of(control)
                .ok_or_else(|| Error::UnknownControl(control.to_string()))?;
            if value.is_nan() {
                return Err(Error::InvalidParameter(alloc::format!(
                    "potential `{name}` is NaN at `{control}`"
                )));
            }
            slots[idx] = Some(value);
        }
        let table = slots
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| Error::MissingPotentialValue {
                    potential: name.to_string(),
                    control: self.values[i].clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.potentials.insert(name.to_string(), table);
        Ok(())
    }

    pub fn with_potential<I, S>(mut self, name: &str, table: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        self.insert_potential(name, table)?;
        Ok(self)
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn index_of(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }

    pub fn potential_names(&self) -> impl Iterator<Item = &str> {
        self.potentials.keys().map(String::as_str)
    }

    /// Values of a potential, in control-range order.
    pub fn potential(&self, name: &str) -> Result<&[f64]> {
        self.potentials
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownPotential(name.to_string()))
    }

    /// Checks that a scaling potential is strictly positive on `U`.
    pub fn require_positive(&self, name: &str) -> Result<()> {
        let table = self.potential(name)?;
        for (i, &v) in table.iter().enumerate() {
            if v <= 0.0 {
                return Err(Error::NonPositivePotential {
                    potential: name.to_string(),
                    control: self.values[i].clone(),
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// `max_u |phi(u)|`.
    pub fn sup_norm(&self, name: &str) -> Result<f64> {
        Ok(self
            .potential(name)?
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs())))
    }

    /// `min_u phi(u)`.
    pub fn min(&self, name: &str) -> Result<f64> {
        Ok(self
            .potential(name)?
            .iter()
            .fold(f64::INFINITY, |m, &v| m.min(v)))
    }
}

/// Alphabet, time step and control words `omega_i = nu(A_i)` of an invariant
/// partition. Control words are stored as indices into a [`ControlRange`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSpec {
    tau: usize,
    words: Vec<Vec<usize>>,
}

impl PartitionSpec {
    /// `words[i]` is the control word of symbol `i` (0-based), given by
    /// control-value identifiers.
    pub fn new<W, S>(range: &ControlRange, tau: usize, words: &[W]) -> Result<Self>
    where
        W: AsRef<[S]>,
        S: AsRef<str>,
    {
        if tau == 0 {
            return Err(Error::InvalidTau);
        }
        if words.is_empty() {
            return Err(Error::NoSymbols);
        }
        if words.len() > Symbol::MAX as usize {
            return Err(Error::InvalidParameter("too many symbols".into()));
        }
        let mut out = Vec::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            let w = w.as_ref();
            if w.len() != tau {
                return Err(Error::ControlWordLength {
                    symbol: i + 1,
                    expected: tau,
                    found: w.len(),
                });
            }
            let idx = w
                .iter()
                .map(|c| {
                    let c = c.as_ref();
                    range
                        .index_of(c)
                        .ok_or_else(|| Error::UnknownControl(c.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(idx);
        }
        Ok(PartitionSpec { tau, words: out })
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn num_symbols(&self) -> usize {
        self.words.len()
    }

    /// Control-range indices of `omega_i`.
    pub fn control_word(&self, symbol: Symbol) -> &[usize] {
        &self.words[symbol as usize]
    }
}

/// Additive per-symbol weights `w(i) = S_tau phi(omega_i)`.
///
/// The weight of a word is the sum of its symbols' weights, so a potential is
/// fully described by this vector once the partition is fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct PerSymbolWeights {
    values: Vec<f64>,
    tau: usize,
}

impl PerSymbolWeights {
    /// Weights for a symbolic presentation where the per-symbol sums are
    /// supplied directly (for instance an SFT with no explicit control range).
    pub fn from_symbol_sums(values: Vec<f64>, tau: usize) -> Result<Self> {
        if tau == 0 {
            return Err(Error::InvalidTau);
        }
        if values.is_empty() {
            return Err(Error::NoSymbols);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite symbol weight".into()));
        }
        Ok(PerSymbolWeights { values, tau })
    }

    pub fn constant(symbols: usize, value: f64, tau: usize) -> Result<Self> {
        Self::from_symbol_sums(alloc::vec![value; symbols], tau)
    }

    pub fn zero(symbols: usize, tau: usize) -> Result<Self> {
        Self::constant(symbols, 0.0, tau)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, s: Symbol) -> f64 {
        self.values[s as usize]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    /// `min_i w(i) / tau`: the smallest per-time-step rate.
    pub fn min_rate(&self) -> f64 {
        self.min() / self.tau as f64
    }

    /// `max_i w(i) / tau`.
    pub fn max_rate(&self) -> f64 {
        self.max() / self.tau as f64
    }

    /// `max_i |w(i)| / tau`.
    pub fn max_abs_rate(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / self.tau as f64
    }

    pub fn require_positive(&self) -> Result<()> {
        match self.values.iter().position(|&v| v <= 0.0) {
            Some(i) => Err(Error::NonPositiveWeights {
                symbol: i + 1,
                weight: self.values[i],
            }),
            None => Ok(()),
        }
    }

    /// `self - beta * other`; exact by linearity of the cocycle.
    pub fn minus_scaled(&self, beta: f64, other: &PerSymbolWeights) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(PerSymbolWeights {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - beta * b)
                .collect(),
            tau: self.tau,
        })
    }

    /// `t * self`.
    pub fn scaled(&self, t: f64) -> Self {
        PerSymbolWeights {
            values: self.values.iter().map(|v| t * v).collect(),
            tau: self.tau,
        }
    }

    pub(crate) fn check_compatible(&self, other: &PerSymbolWeights) -> Result<()> {
        if self.values.len() != other.values.len() {
            return Err(Error::AlphabetMismatch {
                weights: other.values.len(),
                language: self.values.len(),
            });
        }
        if self.tau != other.tau {
            return Err(Error::InvalidParameter(
                "weights compiled with different tau".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn check_language(&self, lang: &WordLanguage) -> Result<()> {
        if self.values.len() != lang.num_symbols() {
            return Err(Error::AlphabetMismatch {
                weights: self.values.len(),
                language: lang.num_symbols(),
            });
        }
        Ok(())
    }
}

/// Compiles a potential on the control range into per-symbol weights.
pub fn derive_symbol_weights(
    range: &ControlRange,
    spec: &PartitionSpec,
    potential: &str,
) -> Result<PerSymbolWeights> {
    let table = range.potential(potential)?;
    let values = spec
        .words
        .iter()
        .map(|w| w.iter().fold(0.0, |acc, &u| acc + table[u]))
        .collect();
    PerSymbolWeights::from_symbol_sums(values, spec.tau)
}

/// `S_{n tau} phi(omega_s)`: the sum of per-symbol weights along `word`.
pub fn word_weight(word: &[Symbol], w: &PerSymbolWeights) -> Result<f64> {
    word.iter().try_fold(0.0, |acc, &s| {
        w.values
            .get(s as usize)
            .map(|v| acc + v)
            .ok_or(Error::UnknownSymbol(s as usize + 1))
    })
}
