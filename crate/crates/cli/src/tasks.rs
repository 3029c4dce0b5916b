//! Runs one configured task and tabulates its results.

use invpress_core::capacity::{bowen_root, capacity_pressure, pressure_difference, PressureMode};
use invpress_core::caratheodory::{
    bs_dimension, cover_solution, frostman_measure, pp_pressure, sandwich_check, CostKind,
    CoverSolution, SubsetSpec,
};
use invpress_core::induced::{characterization_scan, induced_sum, CharacterizationOptions};
use invpress_core::measures::{
    cylinder_masses, vp_check, CylinderMeasure, MarkovMeasure, VpParams,
};
use invpress_core::symbolic::word_weight;
use invpress_core::{Limits, LogValue, PerSymbolWeights, Word, WordLanguage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Candidate, Real, Task};
use crate::model::{subset, Model};
use crate::output::{flag, num, Table};
use crate::CliError;

pub struct TaskContext {
    pub limits: Limits,
    pub seed: u64,
    /// Position of the task in the config, used to derive its random stream.
    pub index: usize,
}

pub struct TaskResult {
    pub tables: Vec<Table>,
    pub summary: Value,
}

fn ln_str(v: LogValue) -> String {
    num(v.ln().unwrap_or(f64::NEG_INFINITY))
}

fn reals(v: &[Real]) -> Result<Vec<f64>, CliError> {
    v.iter().map(Real::value).collect()
}

fn mode_of(horizon: Option<usize>) -> (PressureMode, String) {
    match horizon {
        Some(n) => (PressureMode::Horizon(n), format!("horizon-{n}")),
        None => (PressureMode::Spectral, "spectral".into()),
    }
}

pub fn run_task(model: &Model, task: &Task, ctx: &TaskContext) -> Result<TaskResult, CliError> {
    if let Task::Validate {} = task {
        return validate(model);
    }
    let lang = model.language()?;
    match task {
        Task::Validate {} => unreachable!(),
        Task::Pressure {
            phi,
            n_max,
            tail_window,
        } => {
            let w = model.weights(phi)?;
            let est = capacity_pressure(lang, &w, *n_max, *tail_window)?;
            let mut t = Table::new("", &["n", "value"]);
            for (n, v) in &est.values {
                t.push(vec![n.to_string(), num(*v)]);
            }
            Ok(TaskResult {
                tables: vec![t],
                summary: json!({
                    "limsup_estimate": est.limsup_estimate,
                    "liminf_estimate": est.liminf_estimate,
                    "spectral": est.oracle,
                    "tail_window": est.tail_window,
                }),
            })
        }
        Task::BowenRoot {
            phi,
            psi,
            tol,
            horizon,
        } => {
            let (w_phi, w_psi) = (model.weights(phi)?, model.weights(psi)?);
            let (mode, label) = mode_of(*horizon);
            let r = bowen_root(lang, &w_phi, &w_psi, tol.value()?, mode)?;
            let mut t = Table::new(
                "",
                &["beta_hat", "residual", "error_bound", "bracket_lo", "bracket_hi", "iterations", "mode"],
            );
            t.push(vec![
                num(r.beta_hat),
                num(r.residual),
                num(r.error_bound),
                num(r.bracket.0),
                num(r.bracket.1),
                r.iterations.to_string(),
                label,
            ]);
            Ok(TaskResult {
                tables: vec![t],
                summary: json!({"beta_hat": r.beta_hat, "error_bound": r.error_bound}),
            })
        }
        Task::Induced { phi, psi, t } => {
            let (w_phi, w_psi) = (model.weights(phi)?, model.weights(psi)?);
            let grid = t.points()?;
            let values = grid
                .par_iter()
                .map(|&t| induced_sum(lang, &w_phi, &w_psi, t, &ctx.limits))
                .collect::<Result<Vec<_>, _>>()?;
            let mut table = Table::new("", &["t", "ln_sum", "normalized", "n_first", "n_last", "status"]);
            let mut empty = 0;
            for v in &values {
                let (first, last) = (v.s_t.first(), v.s_t.last());
                let status = if v.s_t.is_empty() {
                    empty += 1;
                    "empty window"
                } else {
                    "ok"
                };
                table.push(vec![
                    num(v.t),
                    if v.s_t.is_empty() { String::new() } else { ln_str(v.value) },
                    v.normalized(w_psi.tau()).map(num).unwrap_or_default(),
                    first.map(ToString::to_string).unwrap_or_default(),
                    last.map(ToString::to_string).unwrap_or_default(),
                    status.into(),
                ]);
            }
            Ok(TaskResult {
                tables: vec![table],
                summary: json!({"points": values.len(), "empty_windows": empty}),
            })
        }
        Task::Characterize {
            phi,
            psi,
            t,
            betas,
            tail_levels,
            lag,
        } => {
            let (w_phi, w_psi) = (model.weights(phi)?, model.weights(psi)?);
            let mut opts = CharacterizationOptions::default();
            if let Some(k) = tail_levels {
                opts.tail_levels = *k;
            }
            if let Some(k) = lag {
                opts.lag = *k;
            }
            let scan = characterization_scan(
                lang,
                &w_phi,
                &w_psi,
                &betas.points()?,
                t.value()?,
                opts,
                &ctx.limits,
            )?;
            let mut table = Table::new(
                "",
                &["beta", "partial_ln", "g_start", "n_cap", "tail_rate", "verdict"],
            );
            for r in &scan.rows {
                table.push(vec![
                    num(r.beta),
                    num(r.partial_ln),
                    r.g_start.to_string(),
                    r.n_cap.to_string(),
                    num(r.tail_rate),
                    r.verdict.label().into(),
                ]);
            }
            Ok(TaskResult {
                tables: vec![table],
                summary: json!({"flip": scan.flip.map(|(a, b)| [a, b])}),
            })
        }
        Task::PpPressure {
            phi,
            subset: z,
            n_min,
            depth,
            tol,
            cover_at,
        } => {
            let w = model.weights(phi)?;
            let z = subset(z)?;
            let c = pp_pressure(lang, &w, &z, *n_min, *depth, tol.value()?)?;
            let mut t = Table::new(
                "",
                &["lambda_hat", "bracket_lo", "bracket_hi", "iterations", "ln_value_above", "ln_value_below"],
            );
            t.push(vec![
                num(c.lambda_hat),
                num(c.bracket.0),
                num(c.bracket.1),
                c.iterations.to_string(),
                ln_str(c.value_above),
                ln_str(c.value_below),
            ]);
            let mut tables = vec![t];
            let mut summary = json!({"lambda_hat": c.lambda_hat});
            if let Some(l) = cover_at {
                let (table, cost) =
                    cover_table(lang, &w, &z, CostKind::Pressure, l.value()?, *n_min, *depth, &ctx.limits)?;
                tables.push(table);
                summary["cover_ln_cost"] = json!(cost);
            }
            Ok(TaskResult { tables, summary })
        }
        Task::BsDim {
            phi,
            subset: z,
            n_min,
            depth,
            tol,
            cover_at,
        } => {
            let w = model.weights(phi)?;
            let z = subset(z)?;
            let d = bs_dimension(lang, &w, &z, *n_min, *depth, tol.value()?)?;
            let mut t = Table::new(
                "",
                &[
                    "t_hat", "residual", "error_bound", "bracket_lo", "bracket_hi", "iterations",
                    "direct_jump", "gap", "capacity_dim",
                ],
            );
            t.push(vec![
                num(d.t_hat),
                num(d.residual),
                num(d.error_bound),
                num(d.bracket.0),
                num(d.bracket.1),
                d.iterations.to_string(),
                num(d.direct_jump),
                num(d.gap()),
                num(d.capacity_dim),
            ]);
            let mut tables = vec![t];
            let mut summary = json!({"t_hat": d.t_hat, "direct_jump": d.direct_jump});
            if let Some(l) = cover_at {
                let (table, cost) =
                    cover_table(lang, &w, &z, CostKind::Dimension, l.value()?, *n_min, *depth, &ctx.limits)?;
                tables.push(table);
                summary["cover_ln_cost"] = json!(cost);
            }
            Ok(TaskResult { tables, summary })
        }
        Task::Frostman {
            phi,
            subset: z,
            lambda,
            n_min,
            depth,
        } => {
            let w = model.weights(phi)?;
            let f = frostman_measure(lang, &w, &subset(z)?, lambda.value()?, *n_min, *depth, &ctx.limits)?;
            let mut t = Table::new("", &["word", "mass", "normalized"]);
            for ((word, m), (_, p)) in f.mass.iter().zip(f.normalized()) {
                t.push(vec![word.to_string(), num(*m), num(p)]);
            }
            Ok(TaskResult {
                tables: vec![t],
                summary: json!({
                    "total": f.total,
                    "ln_total": f.ln_total,
                    "min_cap_slack": f.min_cap_slack(&w)?,
                }),
            })
        }
        Task::Sandwich {
            phi,
            subset: z,
            lambda,
            epsilons,
            n_min,
            depth,
        } => {
            let w = model.weights(phi)?;
            let z = subset(z)?;
            let lambda = lambda.value()?;
            let eps = reals(epsilons)?;
            let reports = eps
                .par_iter()
                .map(|&e| sandwich_check(lang, &w, &z, lambda, e, *n_min, *depth, &ctx.limits))
                .collect::<Result<Vec<_>, _>>()?;
            let mut t = Table::new(
                "",
                &["epsilon", "lambda", "ln_r_shifted", "ln_w", "ln_r", "lower_holds", "upper_holds"],
            );
            for (e, r) in eps.iter().zip(&reports) {
                t.push(vec![
                    num(*e),
                    num(lambda),
                    ln_str(r.r_shifted),
                    ln_str(r.w),
                    ln_str(r.r),
                    flag(r.lower_holds),
                    flag(r.upper_holds),
                ]);
            }
            let all = reports.iter().all(|r| r.lower_holds && r.upper_holds);
            Ok(TaskResult {
                tables: vec![t],
                summary: json!({"all_hold": all}),
            })
        }
        Task::VpCheck {
            phi,
            subset: z,
            n_min,
            depth,
            tol,
            window,
            candidates,
        } => {
            let w = model.weights(phi)?;
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_add(ctx.index as u64));
            let mut named = Vec::new();
            for c in candidates {
                named.extend(build_candidates(lang, c, *depth, &mut rng, &ctx.limits)?);
            }
            let params = VpParams {
                n_min: *n_min,
                depth: *depth,
                tol: tol.value()?,
                window: *window,
            };
            let r = vp_check(lang, &w, &subset(z)?, &named, params, &ctx.limits)?;
            let mut t = Table::new("", &["candidate", "estimate", "slack", "gap", "within_bound"]);
            for row in &r.rows {
                t.push(vec![
                    row.name.clone(),
                    num(row.estimate.value),
                    num(row.estimate.slack),
                    num(row.gap),
                    flag(row.within_bound),
                ]);
            }
            Ok(TaskResult {
                tables: vec![t],
                summary: json!({
                    "dimension": r.dimension.t_hat,
                    "best": r.rows[r.best].name,
                    "frostman_lambda": r.frostman_lambda,
                    "all_within_bound": r.all_within_bound(),
                }),
            })
        }
        Task::Scan {
            phi,
            psi,
            betas,
            horizon,
        } => {
            let (w_phi, w_psi) = (model.weights(phi)?, model.weights(psi)?);
            let (mode, label) = mode_of(*horizon);
            let grid = betas.points()?;
            let values = grid
                .par_iter()
                .map(|&b| pressure_difference(lang, &w_phi, &w_psi, b, mode))
                .collect::<Result<Vec<_>, _>>()?;
            let (table, violations) = scan_table(&grid, &values, &w_psi);
            Ok(TaskResult {
                tables: vec![table],
                summary: json!({"mode": label, "rows": grid.len(), "bound_violations": violations}),
            })
        }
    }
}

fn validate(model: &Model) -> Result<TaskResult, CliError> {
    let report = model.validate()?;
    let mut t = Table::new("", &["valid", "symbol", "step", "witness"]);
    if report.valid() {
        t.push(vec![flag(true), String::new(), String::new(), String::new()]);
    }
    for v in &report.violations {
        t.push(vec![flag(false), v.symbol.to_string(), v.step.to_string(), v.witness.clone()]);
    }
    Ok(TaskResult {
        tables: vec![t],
        summary: json!({"valid": report.valid(), "violations": report.violations.len()}),
    })
}

/// Rows of `Phi` on a beta grid, each checked against its predecessor for the
/// Lipschitz bound `|Phi(b) - Phi(a)| <= |psi| (b - a)` and the slope bound
/// `Phi(b) <= Phi(a) - m (b - a)`.
fn scan_table(grid: &[f64], values: &[f64], w_psi: &PerSymbolWeights) -> (Table, usize) {
    let mut t = Table::new("", &["beta", "phi", "lipschitz_ok", "decreasing_ok"]);
    let mut violations = 0;
    for k in 0..grid.len() {
        let (lip, dec) = if k == 0 {
            (true, true)
        } else {
            let (a, b) = (values[k - 1], values[k]);
            let gap = grid[k] - grid[k - 1];
            let slack = 1e-10 * (1.0 + a.abs() + b.abs());
            (
                (b - a).abs() <= w_psi.max_rate() * gap + slack,
                b <= a - gap * w_psi.min_rate() + slack,
            )
        };
        violations += usize::from(!lip) + usize::from(!dec);
        t.push(vec![num(grid[k]), num(values[k]), flag(lip), flag(dec)]);
    }
    (t, violations)
}

#[allow(clippy::too_many_arguments)]
fn cover_table(
    lang: &WordLanguage,
    w: &PerSymbolWeights,
    z: &SubsetSpec,
    kind: CostKind,
    lambda: f64,
    n_min: usize,
    depth: usize,
    limits: &Limits,
) -> Result<(Table, f64), CliError> {
    let sol: CoverSolution = cover_solution(lang, w, z, kind, lambda, n_min, depth, limits)?;
    let tau = w.tau() as f64;
    let mut t = Table::new("cover", &["word", "length", "ln_cost"]);
    for node in &sol.nodes {
        let s = word_weight(node.symbols(), w)?;
        let cost = match kind {
            CostKind::Pressure => s - lambda * tau * node.len() as f64,
            CostKind::Dimension => -lambda * s,
        };
        t.push(vec![node.to_string(), node.len().to_string(), num(cost)]);
    }
    Ok((t, sol.cost.ln().unwrap_or(f64::NEG_INFINITY)))
}

fn markov_masses(
    mu: &MarkovMeasure,
    lang: &WordLanguage,
    depth: usize,
    limits: &Limits,
) -> Result<CylinderMeasure, CliError> {
    Ok(cylinder_masses(mu, lang, depth, limits)?)
}

fn build_candidates(
    lang: &WordLanguage,
    c: &Candidate,
    depth: usize,
    rng: &mut ChaCha8Rng,
    limits: &Limits,
) -> Result<Vec<(String, CylinderMeasure)>, CliError> {
    Ok(match c {
        Candidate::Bernoulli { probs } => {
            let mu = MarkovMeasure::bernoulli(&reals(probs)?)?;
            vec![("bernoulli".into(), markov_masses(&mu, lang, depth, limits)?)]
        }
        Candidate::Markov { matrix } => {
            let p = matrix.iter().map(|r| reals(r)).collect::<Result<Vec<_>, _>>()?;
            let mu = MarkovMeasure::from_stochastic(p)?;
            vec![("markov".into(), markov_masses(&mu, lang, depth, limits)?)]
        }
        Candidate::Parry => {
            let mu = MarkovMeasure::parry(lang)?;
            vec![("parry".into(), markov_masses(&mu, lang, depth, limits)?)]
        }
        Candidate::RandomMarkov { count } => {
            let rel = lang.sft_relation().ok_or(invpress_core::Error::NotSft)?;
            (0..*count)
                .map(|k| {
                    let p = rel
                        .iter()
                        .map(|row| {
                            let raw: Vec<f64> = row
                                .iter()
                                .map(|&a| if a { rng.gen_range(0.05..1.0) } else { 0.0 })
                                .collect();
                            let s: f64 = raw.iter().sum();
                            raw.into_iter().map(|x| x / s).collect()
                        })
                        .collect();
                    let mu = MarkovMeasure::from_stochastic(p)?;
                    Ok((format!("random-markov-{}", k + 1), markov_masses(&mu, lang, depth, limits)?))
                })
                .collect::<Result<_, CliError>>()?
        }
        Candidate::PointMass { word } => {
            let w = Word::from_labels(word)?;
            vec![(format!("point-mass-{w}"), CylinderMeasure::point_mass(lang, &w)?)]
        }
        Candidate::Conditioned { on, base } => {
            let on = Word::from_labels(on)?;
            build_candidates(lang, base, depth, rng, limits)?
                .into_iter()
                .map(|(name, mu)| Ok((format!("{name}|{on}"), mu.conditioned(&on)?)))
                .collect::<Result<_, CliError>>()?
        }
    })
}
