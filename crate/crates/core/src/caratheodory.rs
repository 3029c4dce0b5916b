//! Carathéodory–Pesin cover sums over cylinder covers.
//!
//! A cover of `Z` at resolution `D` is a family of cylinders of lengths in
//! `[N, D]` whose union contains `Z` (seen through its depth-`D` cylinders).
//! Cylinders form a laminar family, so the cheapest cover is found by a
//! bottom-up tree recursion: each node either pays its own cost or passes the
//! problem to its children. Costs are multiplicative along words, so inside a
//! full cylinder the recursion only depends on (automaton cursor, depth),
//! which gives a compressed evaluation that never builds the tree.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::logspace::{LogSum, LogValue};
use crate::math::ln;
use crate::symbolic::{
    build_cylinder_tree, word_weight, CylinderTree, PerSymbolWeights, Symbol, Word, WordLanguage,
};
use crate::{Error, Limits, Result};

/// The subset `Z` a cover must cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetSpec {
    /// `Z = Q`.
    All,
    /// A finite union of cylinders; an empty list is the empty set.
    CylinderUnion(Vec<Word>),
}

impl SubsetSpec {
    /// Checks admissibility and reduces the list to a sorted antichain.
    pub fn normalized(&self, lang: &WordLanguage) -> Result<SubsetSpec> {
        let words = match self {
            SubsetSpec::All => return Ok(SubsetSpec::All),
            SubsetSpec::CylinderUnion(w) => w,
        };
        if words.iter().any(Word::is_empty) {
            return Ok(SubsetSpec::All);
        }
        for w in words {
            if w.symbols().iter().any(|&s| s as usize >= lang.num_symbols()) {
                return Err(Error::UnknownSymbol(
                    *w.symbols().iter().max().unwrap_or(&0) as usize + 1,
                ));
            }
            if !lang.is_admissible(w.symbols()) {
                return Err(Error::NotAdmissible(alloc::format!("{w}")));
            }
        }
        let sorted: BTreeSet<Word> = words.iter().cloned().collect();
        let mut out: Vec<Word> = Vec::new();
        // In lexicographic order a word's prefixes come before it.
        for w in sorted {
            if !out.iter().any(|p| p.is_prefix_of(&w)) {
                out.push(w);
            }
        }
        Ok(SubsetSpec::CylinderUnion(out))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SubsetSpec::CylinderUnion(w) if w.is_empty())
    }

    /// Whether the cylinder `[s]` lies inside `Z`.
    pub fn contains_cylinder(&self, s: &[Symbol]) -> bool {
        match self {
            SubsetSpec::All => true,
            SubsetSpec::CylinderUnion(ws) => ws.iter().any(|w| s.starts_with(w.symbols())),
        }
    }

    /// Whether the cylinder `[s]` meets `Z`.
    pub fn meets_cylinder(&self, s: &[Symbol]) -> bool {
        match self {
            SubsetSpec::All => true,
            SubsetSpec::CylinderUnion(ws) => ws
                .iter()
                .any(|w| s.starts_with(w.symbols()) || w.symbols().starts_with(s)),
        }
    }
}

/// Which Carathéodory structure a cover is priced in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostKind {
    /// `e^{S_{n tau} phi - lambda n tau}`: Pesin–Pitskel pressure.
    Pressure,
    /// `e^{-lambda S_{n tau} phi}`: BS dimension.
    Dimension,
}

impl CostKind {
    /// Per-symbol log factor of the cost.
    fn symbol_factors(self, w: &PerSymbolWeights, lambda: f64) -> Vec<f64> {
        let tau = w.tau() as f64;
        w.values()
            .iter()
            .map(|&v| match self {
                CostKind::Pressure => v - lambda * tau,
                CostKind::Dimension => -lambda * v,
            })
            .collect()
    }
}

fn check_depths(n_min: usize, depth: usize) -> Result<()> {
    if n_min == 0 || n_min > depth {
        return Err(Error::InvalidParameter(alloc::format!(
            "need 1 <= N <= D, got N = {n_min}, D = {depth}"
        )));
    }
    Ok(())
}

/// Optimal cover value for per-symbol log factors `g`, evaluated on
/// (cursor, depth) classes.
fn compressed_value(
    lang: &WordLanguage,
    g: &[f64],
    z: &SubsetSpec,
    n_min: usize,
    depth: usize,
) -> LogValue {
    let a = lang.automaton();
    let k = a.num_cursors();
    // u[d][c]: cost of covering a full depth-d cylinder with cursor c, as a
    // multiple of that cylinder's own cost.
    let mut u = vec![vec![LogValue::ONE; k]; depth + 1];
    for d in (1..depth).rev() {
        for c in 0..k {
            let s: LogValue = a
                .edges(c as u32)
                .iter()
                .map(|&(b, c2)| u[d + 1][c2 as usize].mul_exp(g[b as usize]))
                .sum();
            u[d][c] = if d >= n_min { s.min(LogValue::ONE) } else { s };
        }
    }
    match z {
        SubsetSpec::All => a
            .initial()
            .iter()
            .map(|&(b, c)| u[1][c as usize].mul_exp(g[b as usize]))
            .sum(),
        SubsetSpec::CylinderUnion(words) if words.is_empty() => LogValue::Zero,
        SubsetSpec::CylinderUnion(words) => {
            let inside: BTreeSet<&[Symbol]> = words.iter().map(|w| w.symbols()).collect();
            let partial: BTreeSet<&[Symbol]> = words
                .iter()
                .flat_map(|w| (0..w.len()).map(move |n| &w.symbols()[..n]))
                .collect();
            let ctx = PartialCtx {
                lang,
                g,
                u: &u,
                inside: &inside,
                partial: &partial,
                n_min,
                depth,
            };
            let mut prefix = Vec::new();
            ctx.value(&mut prefix, None, 0.0)
        }
    }
}

struct PartialCtx<'a> {
    lang: &'a WordLanguage,
    g: &'a [f64],
    u: &'a [Vec<LogValue>],
    inside: &'a BTreeSet<&'a [Symbol]>,
    partial: &'a BTreeSet<&'a [Symbol]>,
    n_min: usize,
    depth: usize,
}

impl PartialCtx<'_> {
    /// Value of a node that meets `Z` without lying inside it.
    fn value(&self, prefix: &mut Vec<Symbol>, cursor: Option<u32>, cost: f64) -> LogValue {
        let d = prefix.len();
        if d == self.depth {
            return LogValue::exp(cost);
        }
        let a = self.lang.automaton();
        let out = match cursor {
            None => a.initial(),
            Some(c) => a.edges(c),
        };
        let mut acc = LogSum::new();
        for &(b, c) in out {
            let child_cost = cost + self.g[b as usize];
            prefix.push(b);
            if self.inside.contains(prefix.as_slice()) {
                acc.push(self.u[d + 1][c as usize].mul_exp(child_cost));
            } else if self.partial.contains(prefix.as_slice()) {
                acc.push(self.value(prefix, Some(c), child_cost));
            }
            prefix.pop();
        }
        let children = acc.value();
        if d >= self.n_min {
            children.min(LogValue::exp(cost))
        } else {
            children
        }
    }
}

fn prepared(
    lang: &WordLanguage,
    w: &PerSymbolWeights,
    z: &SubsetSpec,
    n_min: usize,
    depth: usize,
) -> Result<SubsetSpec> {
    w.check_language(lang)?;
    check_depths(n_min, depth)?;
    z.normalized(lang)
}

/// `M_C(phi, Z, Q, lambda, N)` at resolution `D`.
pub fn cover_value_m(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    z: &SubsetSpec,
    lambda: f64,
    n_min: usize,
    depth: usize,
) -> Result<LogValue> {
    let z = prepared(lang, w_phi, z, n_min, depth)?;
    let g = CostKind::Pressure.symbol_factors(w_phi, lambda);
    Ok(compressed_value(lang, &g, &z, n_min, depth))
}

/// `R_C(phi, Z, Q, lambda, N)` at resolution `D`; `phi` must be positive.
pub fn bs_cover_value_r(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    z: &SubsetSpec,
    lambda: f64,
    n_min: usize,
    depth: usize,
) -> Result<LogValue> {
    w_phi.require_positive()?;
    let z = prepared(lang, w_phi, z, n_min, depth)?;
    let g = CostKind::Dimension.symbol_factors(w_phi, lambda);
    Ok(compressed_value(lang, &g, &z, n_min, depth))
}

/// `Lambda_C`: the `M_C` optimisation written over admissible words, with
/// every cost recomputed from the word itself.
pub fn word_variant_lambda(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    z: &SubsetSpec,
    lambda: f64,
    n_min: usize,
    depth: usize,
) -> Result<LogValue> {
    let z = prepared(lang, w_phi, z, n_min, depth)?;
    let tau = w_phi.tau() as f64;
    fn go(
        lang: &WordLanguage,
        w: &PerSymbolWeights,
        z: &SubsetSpec,
        lambda: f64,
        tau: f64,
        n_min: usize,
        depth: usize,
        s: &mut Vec<Symbol>,
    ) -> Result<LogValue> {
        let n = s.len();
        let own = LogValue::exp(word_weight(s, w)? - lambda * n as f64 * tau);
        if n == depth {
            return Ok(own);
        }
        let mut acc = LogSum::new();
        for b in 0..lang.num_symbols() as Symbol {
            s.push(b);
            if lang.is_admissible(s) && z.meets_cylinder(s) {
                acc.push(go(lang, w, z, lambda, tau, n_min, depth, s)?);
            }
            s.pop();
        }
        let children = acc.value();
        if n >= n_min {
            Ok(children.min(own))
        } else {
            Ok(children)
        }
    }
    if z.is_empty() {
        return Ok(LogValue::Zero);
    }
    go(lang, w_phi, &z, lambda, tau, n_min, depth, &mut Vec::new())
}

/// Optimal cover found on an explicit cylinder tree.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverSolution {
    /// Chosen cylinders, in lexicographic order.
    pub nodes: Vec<Word>,
    pub cost: LogValue,
    pub lambda: f64,
    pub n_min: usize,
    pub depth: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Membership {
    Inside,
    Partial,
    Outside,
}

/// Explicit cylinder tree annotated with membership in `Z` and node costs.
struct PricedTree {
    tree: CylinderTree,
    member: Vec<Membership>,
    cost: Vec<f64>,
}

impl PricedTree {
    fn build(
        lang: &WordLanguage,
        w: &PerSymbolWeights,
        z: &SubsetSpec,
        kind: CostKind,
        lambda: f64,
        depth: usize,
        limits: &Limits,
    ) -> Result<Self> {
        let tree = build_cylinder_tree(lang, depth, &[w], limits)?;
        let tau = w.tau() as f64;
        let mut member = vec![Membership::Outside; tree.len()];
        let (inside, partial): (BTreeSet<Word>, BTreeSet<Word>) = match z {
            SubsetSpec::All => (BTreeSet::new(), BTreeSet::new()),
            SubsetSpec::CylinderUnion(ws) => (
                ws.iter().cloned().collect(),
                ws.iter()
                    .flat_map(|w| (0..w.len()).map(move |n| w.prefix(n)))
                    .collect(),
            ),
        };
        member[0] = match z {
            SubsetSpec::All => Membership::Inside,
            _ if z.is_empty() => Membership::Outside,
            _ => Membership::Partial,
        };
        for id in 1..tree.len() {
            let p = tree.parent(id).expect("non-root");
            member[id] = match member[p] {
                Membership::Inside => Membership::Inside,
                Membership::Outside => Membership::Outside,
                Membership::Partial => {
                    let word = tree.word(id);
                    if inside.contains(&word) {
                        Membership::Inside
                    } else if partial.contains(&word) {
                        Membership::Partial
                    } else {
                        Membership::Outside
                    }
                }
            };
        }
        let cost = (0..tree.len())
            .map(|id| match kind {
                CostKind::Pressure => tree.weight(id, 0) - lambda * tau * tree.node_depth(id) as f64,
                CostKind::Dimension => -lambda * tree.weight(id, 0),
            })
            .collect();
        Ok(PricedTree { tree, member, cost })
    }

    /// Bottom-up optimum. Returns per-node values and whether each node pays
    /// its own cost (ties go to the shallower cylinder).
    fn solve(&self, n_min: usize) -> (Vec<LogValue>, Vec<bool>) {
        let t = &self.tree;
        let mut value = vec![LogValue::Zero; t.len()];
        let mut own = vec![false; t.len()];
        for id in (0..t.len()).rev() {
            if self.member[id] == Membership::Outside {
                continue;
            }
            let d = t.node_depth(id);
            let mine = LogValue::exp(self.cost[id]);
            if d == t.depth() {
                value[id] = mine;
                own[id] = true;
                continue;
            }
            let children: LogValue = t.children(id).map(|c| value[c]).sum();
            if d >= n_min && mine <= children {
                value[id] = mine;
                own[id] = true;
            } else {
                value[id] = children;
            }
        }
        (value, own)
    }
}

/// Optimal cover and its cost on the explicit tree.
#[allow(clippy::too_many_arguments)]
pub fn cover_solution(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    z: &SubsetSpec,
    kind: CostKind,
    lambda: f64,
    n_min: usize,
    depth: usize,
    limits: &Limits,
) -> Result<CoverSolution> {
    if kind == CostKind::Dimension {
        w_phi.require_positive()?;
    }
    let z = prepared(lang, w_phi, z, n_min, depth)?;
    let pt = PricedTree::build(lang, w_phi, &z, kind, lambda, depth, limits)?;
    let (value, own) = pt.solve(n_min);
    let mut nodes = Vec::new();
    let mut stack = vec![0usize];
    while let Some(id) = stack.pop() {
        if pt.member[id] == Membership::Outside {
            continue;
        }
        if own[id] {
            nodes.push(pt.tree.word(id));
        } else {
            stack.extend(pt.tree.children(id).rev());
        }
    }
    Ok(CoverSolution {
        nodes,
        cost: value[0],
        lambda,
        n_min,
        depth,
    })
}

/// `W_C(phi, Z, Q, lambda, N)` at resolution `D`: the fractional cover
/// optimum. On a laminar family the covering LP has an integral optimum, so
/// this is the tree recursion with dimension costs.
pub fn weighted_cover_w(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    z: &SubsetSpec,
    lambda: f64,
    n_min: usize,
    depth: usize,
    limits: &Limits,
) -> Result<LogValue> {
    Ok(cover_solution(
        lang,
        w_phi,
        z,
        CostKind::Dimension,
        lambda,
        n_min,
        depth,
        limits,
    )?
    .cost)
}

/// Leaf masses of the maximal flow under the caps `e^{-lambda S phi}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrostmanWeights {
    /// Depth-`D` cylinders meeting `Z` with their masses, lexicographic.
    pub mass: Vec<(Word, f64)>,
    pub total: f64,
    pub ln_total: f64,
    pub lambda: f64,
    pub n_min: usize,
    pub depth: usize,
}

impl FrostmanWeights {
    /// Masses divided by the total: a probability on depth-`D` cylinders.
    pub fn normalized(&self) -> Vec<(Word, f64)> {
        self.mass
            .iter()
            .map(|(w, m)| (w.clone(), m / self.total))
            .collect()
    }

    /// Smallest relative slack `(cap - mass) / cap` over all cylinders of
    /// length in `[N, D]`, aggregating leaf masses independently.
    pub fn min_cap_slack(&self, w_phi: &PerSymbolWeights) -> Result<f64> {
        let mut agg: BTreeMap<Word, f64> = BTreeMap::new();
        for (leaf, m) in &self.mass {
            for n in self.n_min..=self.depth {
                *agg.entry(leaf.prefix(n)).or_insert(0.0) += m;
            }
        }
        let mut worst = f64::INFINITY;
        for (s, m) in agg {
            let cap = libm::exp(-self.lambda * word_weight(s.symbols(), w_phi)?);
            worst = worst.min((cap - m) / cap);
        }
        Ok(worst)
    }
}

/// Maximal flow on the cylinder tree with node capacities
/// `e^{-lambda S_{|s| tau} phi}` for `N <= |s| <= D`, split top-down in
/// proportion to the subtree flows. The total equals `W_C`.
pub fn frostman_measure(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    z: &SubsetSpec,
    lambda: f64,
    n_min: usize,
    depth: usize,
    limits: &Limits,
) -> Result<FrostmanWeights> {
    w_phi.require_positive()?;
    let z = prepared(lang, w_phi, z, n_min, depth)?;
    let pt = PricedTree::build(lang, w_phi, &z, CostKind::Dimension, lambda, depth, limits)?;
    // The flow recursion min(cap, sum of children) is the cover recursion.
    let (flow, _) = pt.solve(n_min);
    let ln_total = match flow[0] {
        LogValue::Zero => return Err(Error::NullCover),
        LogValue::Ln(x) => x,
    };
    let t = &pt.tree;
    let mut ln_mass = vec![f64::NEG_INFINITY; t.len()];
    ln_mass[0] = ln_total;
    for id in 0..t.len() {
        if pt.member[id] == Membership::Outside || t.is_leaf(id) {
            continue;
        }
        let LogValue::Ln(ln_sum) = t.children(id).map(|c| flow[c]).sum::<LogValue>() else {
            continue;
        };
        for c in t.children(id) {
            if let LogValue::Ln(f) = flow[c] {
                ln_mass[c] = ln_mass[id] + f - ln_sum;
            }
        }
    }
    let mass = t
        .level(depth)
        .filter(|&id| pt.member[id] != Membership::Outside)
        .map(|id| (t.word(id), libm::exp(ln_mass[id])))
        .collect();
    Ok(FrostmanWeights {
        mass,
        total: libm::exp(ln_total),
        ln_total,
        lambda,
        n_min,
        depth,
    })
}

/// A critical exponent located by bisection on where a cover value crosses 1.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalValue {
    pub lambda_hat: f64,
    pub bracket: (f64, f64),
    /// Value at the upper end of the bracket (below 1).
    pub value_above: LogValue,
    /// Value at the lower end of the bracket (at least 1).
    pub value_below: LogValue,
    pub iterations: usize,
}

fn bisect_threshold<F>(mut lo: f64, mut hi: f64, tol: f64, mut value: F) -> Result<CriticalValue>
where
    F: FnMut(f64) -> LogValue,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    let mut v_lo = value(lo);
    let mut v_hi = value(hi);
    if !(v_lo >= LogValue::ONE && v_hi < LogValue::ONE) {
        let f = |v: LogValue| v.ln().unwrap_or(f64::NEG_INFINITY);
        return Err(Error::BracketFailure {
            lo,
            hi,
            f_lo: f(v_lo),
            f_hi: f(v_hi),
        });
    }
    let mut it = 0;
    while hi - lo > tol {
        if it == 400 {
            return Err(Error::NotConverged {
                what: "critical exponent bisection",
                iterations: it,
            });
        }
        it += 1;
        let mid = 0.5 * (lo + hi);
        let v = value(mid);
        if v >= LogValue::ONE {
            lo = mid;
            v_lo = v;
        } else {
            hi = mid;
            v_hi = v;
        }
    }
    Ok(CriticalValue {
        lambda_hat: 0.5 * (lo + hi),
        bracket: (lo, hi),
        value_above: v_hi,
        value_below: v_lo,
        iterations: it,
    })
}

/// `P_C(phi, Z, Q)` at resolution `D`: where `M_C` drops below 1.
pub fn pp_pressure(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    z: &SubsetSpec,
    n_min: usize,
    depth: usize,
    tol: f64,
) -> Result<CriticalValue> {
    let z = prepared(lang, w_phi, z, n_min, depth)?;
    if z.is_empty() {
        return Err(Error::EmptySubset);
    }
    let tau = w_phi.tau() as f64;
    let norm = w_phi.max_abs_rate();
    let lo = -norm - 1.0;
    let hi = ln(lang.num_symbols() as f64) / tau + norm + 1.0;
    bisect_threshold(lo, hi, tol, |lambda| {
        let g = CostKind::Pressure.symbol_factors(w_phi, lambda);
        compressed_value(lang, &g, &z, n_min, depth)
    })
}

/// Direct jump of `R_C` in `lambda`, located where the value drops below 1.
pub fn bs_jump(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    z: &SubsetSpec,
    n_min: usize,
    depth: usize,
    tol: f64,
) -> Result<CriticalValue> {
    w_phi.require_positive()?;
    let z = prepared(lang, w_phi, z, n_min, depth)?;
    if z.is_empty() {
        return Err(Error::EmptySubset);
    }
    let tau = w_phi.tau() as f64;
    let hi = ln(lang.num_symbols() as f64) / (tau * w_phi.min_rate()) + 1.0;
    bisect_threshold(-1.0, hi, tol, |lambda| {
        let g = CostKind::Dimension.symbol_factors(w_phi, lambda);
        compressed_value(lang, &g, &z, n_min, depth)
    })
}

/// BS invariance dimension as the root of `t -> P_C(-t phi, Z, Q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BsDimension {
    pub t_hat: f64,
    /// `P_C(-t_hat phi)` as located by the inner bisection.
    pub residual: f64,
    /// `|residual| / m_phi`.
    pub error_bound: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// Critical exponent of `R_C` found directly.
    pub direct_jump: f64,
    /// `dim_C(Z, Q)`, the zero-potential pressure used for the bracket.
    pub capacity_dim: f64,
}

impl BsDimension {
    pub fn gap(&self) -> f64 {
        (self.t_hat - self.direct_jump).abs()
    }
}

/// Solves `P_C(-t phi, Z, Q) = 0` for `t` by bisection over
/// `[dim_C / M_phi, dim_C / m_phi]` and cross-checks against the direct
/// jump of `R_C`.
pub fn bs_dimension(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    z: &SubsetSpec,
    n_min: usize,
    depth: usize,
    tol: f64,
) -> Result<BsDimension> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    w_phi.require_positive()?;
    let m = w_phi.min_rate();
    let big_m = w_phi.max_rate();
    let inner_tol = tol * m / 4.0;
    let zero = w_phi.scaled(0.0);
    let dim_c = pp_pressure(lang, &zero, z, n_min, depth, inner_tol)?.lambda_hat;
    let lambda_at = |t: f64| -> Result<f64> {
        Ok(pp_pressure(lang, &w_phi.scaled(-t), z, n_min, depth, inner_tol)?.lambda_hat)
    };
    let pad = 4.0 * tol + 1e-9;
    let mut lo = dim_c / big_m - pad;
    let mut hi = dim_c / m + pad;
    let f_lo = lambda_at(lo)?;
    let f_hi = lambda_at(hi)?;
    if !(f_lo >= 0.0 && f_hi <= 0.0) {
        return Err(Error::BracketFailure { lo, hi, f_lo, f_hi });
    }
    let mut it = 0;
    let (t_hat, residual) = loop {
        it += 1;
        let mid = 0.5 * (lo + hi);
        let f = lambda_at(mid)?;
        if f.abs() / m <= tol / 2.0 || hi - lo <= tol || it >= 200 {
            break (mid, f);
        }
        if f >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    };
    let direct = bs_jump(lang, w_phi, z, n_min, depth, tol)?;
    Ok(BsDimension {
        t_hat,
        residual,
        error_bound: residual.abs() / m,
        bracket: (lo, hi),
        iterations: it,
        direct_jump: direct.lambda_hat,
        capacity_dim: dim_c,
    })
}

/// The two inequalities `R(lambda + eps) <= W(lambda) <= R(lambda)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichReport {
    pub r_shifted: LogValue,
    pub w: LogValue,
    pub r: LogValue,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn sandwich_check(
    lang: &WordLanguage,
    w_phi: &PerSymbolWeights,
    z: &SubsetSpec,
    lambda: f64,
    epsilon: f64,
    n_min: usize,
    depth: usize,
    limits: &Limits,
) -> Result<SandwichReport> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let r_shifted = bs_cover_value_r(lang, w_phi, z, lambda + epsilon, n_min, depth)?;
    let w = weighted_cover_w(lang, w_phi, z, lambda, n_min, depth, limits)?;
    let r = bs_cover_value_r(lang, w_phi, z, lambda, n_min, depth)?;
    let slack = |a: LogValue, b: LogValue| a <= b || a.relative_gap(b) <= 1e-12;
    Ok(SandwichReport {
        lower_holds: slack(r_shifted, w),
        upper_holds: slack(w, r),
        r_shifted,
        w,
        r,
    })
}

/// Both sides of `dim^BS(psi, Q, Q) = P_{inv,psi}(0, Q, C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryReport {
    pub bs_dimension: f64,
    pub induced_pressure: f64,
    pub gap: f64,
}

pub fn corollary_check(
    lang: &WordLanguage,
    w_psi: &PerSymbolWeights,
    n_min: usize,
    depth: usize,
    tol: f64,
) -> Result<CorollaryReport> {
    let dim = bs_dimension(lang, w_psi, &SubsetSpec::All, n_min, depth, tol)?;
    let root = crate::capacity::bowen_root(
        lang,
        &w_psi.scaled(0.0),
        w_psi,
        tol,
        crate::capacity::PressureMode::Spectral,
    )?;
    Ok(CorollaryReport {
        bs_dimension: dim.t_hat,
        induced_pressure: root.beta_hat,
        gap: (dim.t_hat - root.beta_hat).abs(),
    })
}
