//! Cylinder measures, the measure-theoretic lower BS invariance pressure and
//! a finite-depth check of the variational principle for BS dimension.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::caratheodory::{bs_dimension, frostman_measure, BsDimension, SubsetSpec};
use crate::math::ln;
use crate::spectral::{perron, transpose, LogMatrix};
use crate::symbolic::{word_weight, PerSymbolWeights, Symbol, Word, WordLanguage};
use crate::{Error, Limits, Result};

const STOCHASTIC_TOL: f64 = 1e-12;
const CONSISTENCY_TOL: f64 = 1e-12;

/// Stationary Markov chain on the symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovMeasure {
    p: Vec<Vec<f64>>,
    pi: Vec<f64>,
}

impl MarkovMeasure {
    /// Checks that `p` is stochastic and `pi` a stationary probability.
    pub fn new(p: Vec<Vec<f64>>, pi: Vec<f64>) -> Result<Self> {
        let q = pi.len();
        if q == 0 || p.len() != q || p.iter().any(|r| r.len() != q) {
            return Err(Error::InvalidParameter(
                "transition matrix must be square and match the stationary vector".into(),
            ));
        }
        check_stochastic(&p)?;
        if pi.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::InconsistentMeasure("negative stationary mass".into()));
        }
        let total: f64 = pi.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InconsistentMeasure(format!(
                "stationary vector sums to {total}"
            )));
        }
        for j in 0..q {
            let pj: f64 = (0..q).map(|i| pi[i] * p[i][j]).sum();
            if (pj - pi[j]).abs() > 1e-9 {
                return Err(Error::InconsistentMeasure(format!(
                    "pi P differs from pi at symbol {}",
                    j + 1
                )));
            }
        }
        Ok(Self { p, pi })
    }

    /// Stochastic `p` with the stationary vector solved for. Fails when
    /// the stationary vector is not unique.
    pub fn from_stochastic(p: Vec<Vec<f64>>) -> Result<Self> {
        let q = p.len();
        if q == 0 || p.iter().any(|r| r.len() != q) {
            return Err(Error::InvalidParameter(
                "transition matrix must be square".into(),
            ));
        }
        check_stochastic(&p)?;
        let pi = stationary(&p).ok_or_else(|| {
            Error::InconsistentMeasure("stationary vector is not unique".into())
        })?;
        Self::new(p, pi)
    }

    /// I.i.d. symbols with the given probabilities.
    pub fn bernoulli(probs: &[f64]) -> Result<Self> {
        let p = vec![probs.to_vec(); probs.len()];
        Self::new(p, probs.to_vec())
    }

    /// Measure of maximal entropy of an irreducible SFT.
    pub fn parry(lang: &WordLanguage) -> Result<Self> {
        let rel = lang.sft_relation().ok_or(Error::NotSft)?;
        let q = rel.len();
        let adj: LogMatrix = rel
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &a)| a)
                    .map(|(j, _)| (j, 0.0))
                    .collect()
            })
            .collect();
        let irreducible = || Error::InvalidParameter("transition relation is not irreducible".into());
        let (ln_rho, right) = perron(&adj).ok_or_else(irreducible)?;
        let (_, left) = perron(&transpose(&adj)).ok_or_else(irreducible)?;
        let rho = libm::exp(ln_rho);
        let p: Vec<Vec<f64>> = (0..q)
            .map(|i| {
                (0..q)
                    .map(|j| {
                        if rel[i][j] {
                            right[j] / (rho * right[i])
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let norm: f64 = (0..q).map(|i| left[i] * right[i]).sum();
        let pi = (0..q).map(|i| left[i] * right[i] / norm).collect();
        // Renormalise rows against the eigenvector's residual error.
        let p = p
            .into_iter()
            .map(|r| {
                let s: f64 = r.iter().sum();
                r.into_iter().map(|x| x / s).collect()
            })
            .collect();
        Self::new(p, pi)
    }

    pub fn num_symbols(&self) -> usize {
        self.pi.len()
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.p
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    /// `mu([s]) = pi_{s_0} prod P_{s_k s_{k+1}}`.
    pub fn mass(&self, s: &[Symbol]) -> f64 {
        let Some((&first, rest)) = s.split_first() else {
            return 1.0;
        };
        let mut m = self.pi[first as usize];
        let mut prev = first as usize;
        for &x in rest {
            m *= self.p[prev][x as usize];
            prev = x as usize;
        }
        m
    }
}

fn check_stochastic(p: &[Vec<f64>]) -> Result<()> {
    for (i, r) in p.iter().enumerate() {
        if r.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::InconsistentMeasure(format!(
                "negative transition probability in row {}",
                i + 1
            )));
        }
        let s: f64 = r.iter().sum();
        if (s - 1.0).abs() > STOCHASTIC_TOL * r.len() as f64 {
            return Err(Error::InconsistentMeasure(format!(
                "row {} sums to {s}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Solves `pi (P - I) = 0`, `sum pi = 1` by Gaussian elimination.
fn stationary(p: &[Vec<f64>]) -> Option<Vec<f64>> {
    let q = p.len();
    // Rows of the system are the equations for pi_j, the last replaced by
    // the normalisation.
    let mut a: Vec<Vec<f64>> = (0..q)
        .map(|j| {
            let mut row: Vec<f64> = (0..q).map(|i| p[i][j]).collect();
            row[j] -= 1.0;
            row.push(0.0);
            row
        })
        .collect();
    a[q - 1] = vec![1.0; q + 1];
    for col in 0..q {
        let piv = (col..q).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..q {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=q {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    let pi: Vec<f64> = (0..q).map(|i| (a[i][q] / a[i][i]).max(0.0)).collect();
    let s: f64 = pi.iter().sum();
    Some(pi.into_iter().map(|x| x / s).collect())
}

/// Masses of the admissible cylinders of every length up to a depth.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderMeasure {
    /// `levels[n]` maps words of length `n` with positive mass to the mass.
    levels: Vec<BTreeMap<Word, f64>>,
}

impl CylinderMeasure {
    /// Builds a measure from its depth-`D` masses; shorter cylinders are
    /// aggregated. Masses must be nonnegative and sum to 1.
    pub fn from_leaves<I>(depth: usize, leaves: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, f64)>,
    {
        if depth == 0 {
            return Err(Error::InvalidParameter("depth must be at least 1".into()));
        }
        let mut levels = vec![BTreeMap::new(); depth + 1];
        for (w, m) in leaves {
            if w.len() != depth {
                return Err(Error::InconsistentMeasure(format!(
                    "leaf {w} does not have length {depth}"
                )));
            }
            if !(m >= 0.0) {
                return Err(Error::InconsistentMeasure(format!("negative mass at {w}")));
            }
            if m > 0.0 {
                for n in 0..=depth {
                    *levels[n].entry(w.prefix(n)).or_insert(0.0) += m;
                }
            }
        }
        let total = levels[0].get(&Word::empty()).copied().unwrap_or(0.0);
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InconsistentMeasure(format!("total mass {total}")));
        }
        Ok(Self { levels })
    }

    /// Unit mass on the depth-`D` prefixes of one itinerary.
    pub fn point_mass(lang: &WordLanguage, itinerary: &Word) -> Result<Self> {
        if !lang.is_admissible(itinerary.symbols()) {
            return Err(Error::MeasureSupport(format!("{itinerary}")));
        }
        Self::from_leaves(itinerary.len(), [(itinerary.clone(), 1.0)])
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Mass of `[s]`, zero when `s` is not charged. Words longer than the
    /// depth are not resolved.
    pub fn mass(&self, s: &[Symbol]) -> Option<f64> {
        let level = self.levels.get(s.len())?;
        Some(level.get(&Word(s.to_vec())).copied().unwrap_or(0.0))
    }

    /// Charged cylinders of length `n` with their masses, lexicographic.
    pub fn level(&self, n: usize) -> impl Iterator<Item = (&Word, f64)> {
        self.levels[n].iter().map(|(w, &m)| (w, m))
    }

    /// Checks `mu([s]) = sum_a mu([sa])` for every charged `s` shorter than
    /// the depth.
    pub fn check_consistency(&self) -> Result<()> {
        for n in 0..self.depth() {
            let mut agg: BTreeMap<Word, f64> = BTreeMap::new();
            for (w, &m) in &self.levels[n + 1] {
                *agg.entry(w.prefix(n)).or_insert(0.0) += m;
            }
            for (w, &m) in &self.levels[n] {
                let c = agg.remove(w).unwrap_or(0.0);
                if (m - c).abs() > CONSISTENCY_TOL * m.max(c) + 1e-300 {
                    return Err(Error::InconsistentMeasure(format!(
                        "mass of {w} is {m} but its children carry {c}"
                    )));
                }
            }
            if let Some((w, _)) = agg.into_iter().find(|e| e.1 > 0.0) {
                return Err(Error::InconsistentMeasure(format!(
                    "children of uncharged cylinder {w} carry mass"
                )));
            }
        }
        Ok(())
    }

    /// The measure conditioned on `[prefix]`.
    pub fn conditioned(&self, prefix: &Word) -> Result<Self> {
        let d = self.depth();
        if prefix.len() > d {
            return Err(Error::InvalidParameter(format!(
                "prefix {prefix} is longer than the depth {d}"
            )));
        }
        let m = self.mass(prefix.symbols()).unwrap_or(0.0);
        if m <= 0.0 {
            return Err(Error::InconsistentMeasure(format!("{prefix} has zero mass")));
        }
        Self::from_leaves(
            d,
            self.levels[d]
                .iter()
                .filter(|(w, _)| prefix.is_prefix_of(w))
                .map(|(w, &x)| (w.clone(), x / m)),
        )
    }
}

/// Evaluates a Markov measure on every cylinder up to depth `D`.
///
/// Fails if a cylinder outside the language gets positive mass.
pub fn cylinder_masses(
    mu: &MarkovMeasure,
    lang: &WordLanguage,
    depth: usize,
    limits: &Limits,
) -> Result<CylinderMeasure> {
    if mu.num_symbols() != lang.num_symbols() {
        return Err(Error::SymbolMismatch(format!(
            "measure has {} symbols, language has {}",
            mu.num_symbols(),
            lang.num_symbols()
        )));
    }
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let q = lang.num_symbols();
    let mut levels: Vec<BTreeMap<Word, f64>> = vec![BTreeMap::new(); depth + 1];
    levels[0].insert(Word::empty(), 1.0);
    let mut frontier: Vec<(Word, f64)> = vec![(Word::empty(), 1.0)];
    for n in 1..=depth {
        let mut next = Vec::new();
        for (w, m) in &frontier {
            for a in 0..q {
                let x = match w.symbols().last() {
                    None => mu.pi[a],
                    Some(&prev) => m * mu.p[prev as usize][a],
                };
                if x <= 0.0 {
                    continue;
                }
                let mut s = w.clone();
                s.push(a as Symbol);
                if !lang.is_admissible(s.symbols()) {
                    return Err(Error::MeasureSupport(format!("{s}")));
                }
                next.push((s, x));
            }
        }
        limits.check_nodes(next.len() as f64)?;
        levels[n] = next.iter().cloned().collect();
        frontier = next;
    }
    let cm = CylinderMeasure { levels };
    cm.check_consistency()?;
    Ok(cm)
}

/// Finite-depth lower BS invariance pressure of a cylinder measure.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBsEstimate {
    /// Mass-weighted sum of per-branch tail minima of the ratio.
    pub value: f64,
    /// `h[n-1] = sum_{|s| = n} mu([s]) (-ln mu([s]) / S phi(s))`.
    pub h: Vec<f64>,
    /// Largest oscillation of a branch ratio over the tail window.
    pub slack: f64,
    pub window: usize,
    pub depth: usize,
}

/// Default number of trailing depths the per-branch minimum runs over.
pub const DEFAULT_TAIL_WINDOW: usize = 3;

/// For every charged depth-`D` branch takes the ratios
/// `-ln mu([s|n]) / S_{n tau} phi(s|n)` for the last `window` depths and
/// integrates their minimum against `mu`.
pub fn lower_bs_pressure(
    mu: &CylinderMeasure,
    w_phi: &PerSymbolWeights,
    window: usize,
) -> Result<LowerBsEstimate> {
    w_phi.require_positive()?;
    mu.check_consistency()?;
    let d = mu.depth();
    if window == 0 || window > d {
        return Err(Error::InvalidParameter(format!(
            "tail window must lie in [1, {d}]"
        )));
    }
    let ratio = |w: &Word, m: f64| -> Result<f64> {
        Ok(-ln(m) / word_weight(w.symbols(), w_phi)?)
    };
    let mut h = Vec::with_capacity(d);
    for n in 1..=d {
        let mut acc = 0.0;
        for (w, m) in mu.level(n) {
            acc += m * ratio(w, m)?;
        }
        h.push(acc);
    }
    let mut value = 0.0;
    let mut slack = 0.0_f64;
    for (leaf, m) in mu.level(d) {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for n in d + 1 - window..=d {
            let s = leaf.prefix(n);
            let ms = mu.mass(s.symbols()).unwrap_or(0.0);
            let r = ratio(&s, ms)?;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        value += m * lo;
        slack = slack.max(hi - lo);
    }
    Ok(LowerBsEstimate {
        value,
        h,
        slack,
        window,
        depth: d,
    })
}

/// One candidate's line in a variational-principle report.
#[derive(Clone, Debug, PartialEq)]
pub struct VpRow {
    pub name: String,
    pub estimate: LowerBsEstimate,
    /// `dimension - estimate`.
    pub gap: f64,
    /// Whether `estimate <= dimension + slack`.
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VpReport {
    pub dimension: BsDimension,
    pub rows: Vec<VpRow>,
    /// Index into `rows` of the largest estimate.
    pub best: usize,
    /// Level the appended Frostman candidate was built at.
    pub frostman_lambda: f64,
}

impl VpReport {
    pub fn all_within_bound(&self) -> bool {
        self.rows.iter().all(|r| r.within_bound)
    }
}

/// Parameters shared by the cover computations in [`vp_check`].
#[derive(Clone, Copy, Debug)]
pub struct VpParams {
    pub n_min: usize,
    pub depth: usize,
    pub tol: f64,
    pub window: usize,
}

/// Name of the automatically appended candidate.
pub const FROSTMAN_CANDIDATE: &str = "frostman";

/// Compares the lower BS pressure of every candidate with the BS dimension
/// of `K`. The normalised Frostman measure at `dimension - tol` is appended
/// as the last candidate.
pub fn vp_check(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    k: &SubsetSpec,
    candidates: &[(String, CylinderMeasure)],
    params: VpParams,
    limits: &Limits,
) -> Result<VpReport> {
    let k = k.normalized(lang)?;
    let VpParams {
        n_min,
        depth,
        tol,
        window,
    } = params;
    for (name, mu) in candidates {
        if mu.depth() != depth {
            return Err(Error::InvalidParameter(format!(
                "candidate {name} has depth {} instead of {depth}",
                mu.depth()
            )));
        }
        if let Some((w, _)) = mu.level(depth).find(|(w, _)| !k.meets_cylinder(w.symbols())) {
            return Err(Error::UnsupportedMeasure(format!("{w}")));
        }
    }
    let dimension = bs_dimension(lang, w_phi, &k, n_min, depth, tol)?;
    let dim = dimension.t_hat;
    let frostman_lambda = dim - tol;
    let fw = frostman_measure(lang, w_phi, &k, frostman_lambda, n_min, depth, limits)?;
    let frostman = CylinderMeasure::from_leaves(depth, fw.normalized())?;

    let mut rows = Vec::with_capacity(candidates.len() + 1);
    let all = candidates
        .iter()
        .map(|(n, m)| (n.as_str(), m))
        .chain(core::iter::once((FROSTMAN_CANDIDATE, &frostman)));
    for (name, mu) in all {
        let estimate = lower_bs_pressure(mu, w_phi, window)?;
        rows.push(VpRow {
            name: name.into(),
            gap: dim - estimate.value,
            within_bound: estimate.value <= dim + estimate.slack + tol,
            estimate,
        });
    }
    let best = (0..rows.len())
        .max_by(|&a, &b| rows[a].estimate.value.total_cmp(&rows[b].estimate.value))
        .unwrap_or(0);
    Ok(VpReport {
        dimension,
        rows,
        best,
        frostman_lambda,
    })
}
