//! Upper capacity invariance pressure and the Bowen-equation root.
//!
//! Maximal separated and minimal spanning sets both take one point per
//! nonempty cylinder, so `m(phi, Q, n, C)` is the sum of `e^{w(s)}` over the
//! admissible words of length `n`. Sums are computed either by enumeration or
//! by a transfer recursion over the language automaton; the spectral value
//! `(1/tau) ln rho` is the exact limit.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::logspace::{LogSum, LogValue};
use crate::spectral::{log_spectral_radius, LogMatrix};
use crate::symbolic::{enumerate_words, word_weight, PerSymbolWeights, WordLanguage};
use crate::{Error, Limits, Result};

/// Log-domain transfer recursion: per-cursor sums `sum e^{w(s)}` over words
/// of length `n`, for `n = 1, 2, ...`.
pub(crate) struct Transfer<'a> {
    lang: &'a WordLanguage,
    w: &'a PerSymbolWeights,
    cur: Vec<LogValue>,
    len: usize,
}

impl<'a> Transfer<'a> {
    pub(crate) fn new(lang: &'a WordLanguage, w: &'a PerSymbolWeights) -> Self {
        Transfer {
            lang,
            w,
            cur: Vec::new(),
            len: 0,
        }
    }

    /// Advances to the next length and returns the total.
    pub(crate) fn advance(&mut self) -> LogValue {
        let a = self.lang.automaton();
        let mut acc = vec![LogSum::new(); a.num_cursors()];
        if self.len == 0 {
            for &(s, c) in a.initial() {
                acc[c as usize].push_ln(self.w.get(s));
            }
        } else {
            for (c, v) in self.cur.iter().enumerate() {
                let LogValue::Ln(x) = *v else { continue };
                for &(s, d) in a.edges(c as u32) {
                    acc[d as usize].push_ln(x + self.w.get(s));
                }
            }
        }
        self.cur = acc.iter().map(LogSum::value).collect();
        self.len += 1;
        self.cur.iter().copied().sum()
    }
}

/// `ln sum_{s in L^n} e^{w(s)}` by exhaustive enumeration, falling back to
/// the transfer recursion once the word guard would trip.
pub fn separated_sum(
    lang: &WordLanguage,
    w: &PerSymbolWeights,
    n: usize,
    limits: &Limits,
) -> Result<LogValue> {
    w.check_language(lang)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if limits.check_words(lang.count_words(n)).is_err() {
        let mut t = Transfer::new(lang, w);
        let mut v = LogValue::Zero;
        for _ in 0..n {
            v = t.advance();
        }
        return Ok(v);
    }
    let mut acc = LogSum::new();
    for s in enumerate_words(lang, n, limits)? {
        acc.push_ln(word_weight(s.symbols(), w)?);
    }
    Ok(acc.value())
}

/// Minimal spanning sum: scans the admissible words as candidate points and
/// keeps the first representative of each cylinder not yet covered.
pub fn spanning_sum(
    lang: &WordLanguage,
    w: &PerSymbolWeights,
    n: usize,
    limits: &Limits,
) -> Result<LogValue> {
    w.check_language(lang)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let mut covered = BTreeSet::new();
    let mut acc = LogSum::new();
    for s in enumerate_words(lang, n, limits)? {
        if covered.insert(s.clone()) {
            acc.push_ln(word_weight(s.symbols(), w)?);
        }
    }
    Ok(acc.value())
}

/// Finite-horizon values of `(1/(n tau)) ln m(phi, Q, n, C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PressureEstimate {
    pub values: Vec<(usize, f64)>,
    pub limsup_estimate: f64,
    pub liminf_estimate: f64,
    pub oracle: Option<f64>,
    pub tail_window: usize,
}

/// Pressure sequence for `n = 1..=n_max`; the limsup and liminf are the max
/// and min over the last `tail_window` values.
pub fn capacity_pressure(
    lang: &WordLanguage,
    w: &PerSymbolWeights,
    n_max: usize,
    tail_window: usize,
) -> Result<PressureEstimate> {
    w.check_language(lang)?;
    if tail_window == 0 || n_max < tail_window {
        return Err(Error::InvalidParameter(
            "need n_max >= tail_window >= 1".into(),
        ));
    }
    let tau = w.tau() as f64;
    let mut t = Transfer::new(lang, w);
    let mut values = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let v = t.advance().ln().unwrap_or(f64::NEG_INFINITY);
        values.push((n, v / (n as f64 * tau)));
    }
    let tail = &values[n_max - tail_window..];
    let limsup = tail.iter().fold(f64::NEG_INFINITY, |m, v| m.max(v.1));
    let liminf = tail.iter().fold(f64::INFINITY, |m, v| m.min(v.1));
    Ok(PressureEstimate {
        values,
        limsup_estimate: limsup,
        liminf_estimate: liminf,
        oracle: Some(spectral_pressure(lang, w)?),
        tail_window,
    })
}

/// Transfer matrix in log form. For an SFT this is `M_ij = [i -> j] e^{w(i)}`;
/// for other languages it is the cursor matrix of the automaton, whose
/// entries sum `e^{w(b)}` over the symbols `b` leading from one cursor to
/// another.
pub fn transfer_matrix(lang: &WordLanguage, w: &PerSymbolWeights) -> Result<LogMatrix> {
    w.check_language(lang)?;
    if let Some(rel) = lang.sft_relation() {
        return Ok(rel
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &a)| a)
                    .map(|(j, _)| (j, w.values()[i]))
                    .collect()
            })
            .collect());
    }
    let a = lang.automaton();
    let rows = (0..a.num_cursors())
        .map(|c| {
            let mut row: Vec<(usize, LogSum)> = Vec::new();
            for &(s, d) in a.edges(c as u32) {
                let d = d as usize;
                match row.iter_mut().find(|e| e.0 == d) {
                    Some(e) => e.1.push_ln(w.get(s)),
                    None => {
                        let mut acc = LogSum::new();
                        acc.push_ln(w.get(s));
                        row.push((d, acc));
                    }
                }
            }
            row.into_iter()
                .map(|(d, acc)| (d, acc.value().ln().expect("nonempty")))
                .collect()
        })
        .collect();
    Ok(rows)
}

/// `(1/tau) ln rho(M)`: the limit of the finite-horizon pressures.
pub fn spectral_pressure(lang: &WordLanguage, w: &PerSymbolWeights) -> Result<f64> {
    let m = transfer_matrix(lang, w)?;
    Ok(log_spectral_radius(&m) / w.tau() as f64)
}

/// How `Phi(beta) = P_inv(phi - beta psi)` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PressureMode {
    /// Exact limit through the transfer matrix.
    Spectral,
    /// Finite-horizon value at word length `n`.
    Horizon(usize),
}

/// `Phi(beta)` for the weight map `i -> w_phi(i) - beta w_psi(i)`.
pub fn pressure_difference(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    w_psi: &PerSymbolWeights,
    beta: f64,
    mode: PressureMode,
) -> Result<f64> {
    let w = w_phi.minus_scaled(beta, w_psi)?;
    match mode {
        PressureMode::Spectral => spectral_pressure(lang, &w),
        PressureMode::Horizon(n) => {
            w.check_language(lang)?;
            if n == 0 {
                return Err(Error::InvalidParameter("n must be positive".into()));
            }
            let mut t = Transfer::new(lang, &w);
            let mut v = LogValue::Zero;
            for _ in 0..n {
                v = t.advance();
            }
            Ok(v.ln().unwrap_or(f64::NEG_INFINITY) / (n as f64 * w.tau() as f64))
        }
    }
}

/// Bisection result for `Phi(beta) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCertificate {
    pub beta_hat: f64,
    pub residual: f64,
    /// `|Phi(beta_hat)| / m_psi`; bounds `|beta_hat - beta*|` by the slope
    /// inequality `Phi(b2) <= Phi(b1) - (b2 - b1) m_psi`.
    pub error_bound: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

pub const DEFAULT_TOL: f64 = 1e-9;
pub const MAX_BISECTIONS: usize = 200;

/// Solves `P_inv(phi - beta psi) = 0` by certified bisection.
pub fn bowen_root(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    w_psi: &PerSymbolWeights,
    tol: f64,
    mode: PressureMode,
) -> Result<RootCertificate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    w_psi.require_positive()?;
    w_phi.check_compatible(w_psi)?;
    let m = w_psi.min_rate();
    let phi = |b: f64| pressure_difference(lang, w_phi, w_psi, b, mode);

    let p0 = phi(0.0)?;
    if p0 == f64::NEG_INFINITY {
        return Err(Error::InvalidParameter("language is empty".into()));
    }
    if p0.abs() / m <= tol {
        return Ok(RootCertificate {
            beta_hat: 0.0,
            residual: p0,
            error_bound: p0.abs() / m,
            bracket: (0.0, 0.0),
            iterations: 0,
        });
    }
    let b = p0 / m;
    let mut lo = b.min(0.0) - 1.0 / m;
    let mut hi = b.max(0.0) + 1.0 / m;
    let f_lo = phi(lo)?;
    let f_hi = phi(hi)?;
    if !(f_lo >= 0.0 && f_hi <= 0.0) {
        return Err(Error::BracketFailure { lo, hi, f_lo, f_hi });
    }
    for it in 1..=MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let f = phi(mid)?;
        if f >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if f.abs() / m <= tol {
            return Ok(RootCertificate {
                beta_hat: mid,
                residual: f,
                error_bound: f.abs() / m,
                bracket: (lo, hi),
                iterations: it,
            });
        }
        if hi - lo <= f64::EPSILON * (1.0 + mid.abs()) {
            break;
        }
    }
    Err(Error::NotConverged {
        what: "bowen root bisection",
        iterations: MAX_BISECTIONS,
    })
}
