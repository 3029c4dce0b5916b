//! Perron roots of nonnegative matrices given in log form.
//!
//! Matrices are sparse rows of `(column, ln entry)`. The spectral radius is
//! the largest Perron root over the strongly connected components; each
//! component is irreducible, so a shifted power iteration converges and the
//! Collatz–Wielandt quotients bracket the root from both sides.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{exp, ln};

/// Sparse nonnegative matrix: `rows[i]` lists `(j, ln m_ij)`.
pub type LogMatrix = Vec<Vec<(usize, f64)>>;

const REL_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200_000;

/// Strongly connected components, each listed with its vertices sorted.
pub fn strongly_connected_components(rows: &LogMatrix) -> Vec<Vec<usize>> {
    let n = rows.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, next edge position)
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = work.last_mut() {
            if *pos < rows[v].len() {
                let w = rows[v][*pos].0;
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(u, _)) = work.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Perron root and right Perron vector of an irreducible block, as
/// `(ln rho, vector normalised to max 1)`. `scale` is subtracted from every
/// log entry before exponentiation.
fn perron_block(rows: &LogMatrix, comp: &[usize], scale: f64) -> (f64, Vec<f64>) {
    let k = comp.len();
    let mut local = vec![usize::MAX; rows.len()];
    for (a, &v) in comp.iter().enumerate() {
        local[v] = a;
    }
    let block: Vec<Vec<(usize, f64)>> = comp
        .iter()
        .map(|&v| {
            rows[v]
                .iter()
                .filter(|(j, _)| local[*j] != usize::MAX)
                .map(|&(j, lw)| (local[j], exp(lw - scale)))
                .collect()
        })
        .collect();
    let shift = block
        .iter()
        .map(|r| r.iter().map(|e| e.1).sum::<f64>())
        .fold(f64::INFINITY, f64::min);

    let mut x = vec![1.0_f64; k];
    let mut y = vec![0.0_f64; k];
    let mut best = (0.0_f64, f64::INFINITY);
    for _ in 0..MAX_ITER {
        for (a, r) in block.iter().enumerate() {
            y[a] = r.iter().map(|&(b, m)| m * x[b]).sum::<f64>();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
        for a in 0..k {
            let q = y[a] / x[a];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        best = (best.0.max(lo), best.1.min(hi));
        if best.1 - best.0 <= REL_TOL * best.1 {
            break;
        }
        let mut top = 0.0_f64;
        for a in 0..k {
            y[a] += shift * x[a];
            top = top.max(y[a]);
        }
        for a in 0..k {
            x[a] = y[a] / top;
            // Keep strictly positive so the quotients stay defined.
            if x[a] < 1e-300 {
                x[a] = 1e-300;
            }
        }
    }
    let rho = 0.5 * (best.0 + best.1);
    let mut full = vec![0.0; rows.len()];
    for (a, &v) in comp.iter().enumerate() {
        full[v] = x[a];
    }
    (ln(rho) + scale, full)
}

fn max_entry(rows: &LogMatrix) -> f64 {
    rows.iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |m, e| m.max(e.1))
}

fn has_cycle(rows: &LogMatrix, comp: &[usize]) -> bool {
    comp.len() > 1 || rows[comp[0]].iter().any(|e| e.0 == comp[0])
}

/// `ln rho(M)`, or `-inf` when the matrix is nilpotent.
pub fn log_spectral_radius(rows: &LogMatrix) -> f64 {
    if rows.is_empty() {
        return f64::NEG_INFINITY;
    }
    let scale = max_entry(rows);
    if !scale.is_finite() {
        return f64::NEG_INFINITY;
    }
    strongly_connected_components(rows)
        .iter()
        .filter(|c| has_cycle(rows, c))
        .map(|c| perron_block(rows, c, scale).0)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Perron root and right eigenvector of an irreducible matrix.
///
/// Returns `None` if the matrix is not irreducible.
pub fn perron(rows: &LogMatrix) -> Option<(f64, Vec<f64>)> {
    let comps = strongly_connected_components(rows);
    if comps.len() != 1 || !has_cycle(rows, &comps[0]) {
        return None;
    }
    Some(perron_block(rows, &comps[0], max_entry(rows)))
}

/// Transpose of a log matrix.
pub fn transpose(rows: &LogMatrix) -> LogMatrix {
    let mut t: LogMatrix = vec![Vec::new(); rows.len()];
    for (i, r) in rows.iter().enumerate() {
        for &(j, w) in r {
            t[j].push((i, w));
        }
    }
    t
}
