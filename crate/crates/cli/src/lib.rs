//! Configuration-driven runs over the `invpress-core` algorithms.
//!
//! A run reads one JSON config, executes its tasks in order and writes one
//! CSV per result table plus a `manifest.json` into the output directory.
//! All files are written at the end, so a failed run leaves no partial
//! output behind.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod model;
pub mod output;
pub mod tasks;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use invpress_core::{ErrorKind, Limits};
use serde_json::{json, Value};

use crate::config::{parse_config, RunConfig};
use crate::model::Model;
use crate::tasks::{run_task, TaskContext, TaskResult};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Schema(String),
    #[error("io: {0}")]
    Io(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] invpress_core::Error),
}

impl CliError {
    /// 2 for schema and input errors, 3 for guard trips, 4 for violated
    /// mathematical preconditions, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Io(_) => 1,
            CliError::Unsupported(_) => 4,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Guard => 3,
                ErrorKind::Precondition => 4,
                ErrorKind::Numerical => 1,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub config: PathBuf,
    pub out: PathBuf,
    /// Worker threads for grid evaluations; `None` lets rayon decide.
    pub threads: Option<usize>,
    /// Lift every enumeration guard.
    pub force_guards: bool,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub manifest: Value,
}

pub fn effective_limits(cfg: &RunConfig, force_guards: bool) -> Limits {
    if force_guards {
        return Limits::unbounded();
    }
    let mut l = Limits::default();
    if let Some(c) = cfg.limits {
        l.max_words = c.max_words.unwrap_or(l.max_words);
        l.max_nodes = c.max_nodes.unwrap_or(l.max_nodes);
    }
    l
}

/// Executes every task of `cfg` and returns the results in config order.
pub fn execute(
    cfg: &RunConfig,
    limits: Limits,
    threads: Option<usize>,
) -> Result<Vec<TaskResult>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let model = Model::build(cfg)?;
    cfg.tasks
        .iter()
        .enumerate()
        .map(|(index, task)| {
            let ctx = TaskContext {
                limits,
                seed: cfg.seed,
                index,
            };
            pool.install(|| run_task(&model, task, &ctx))
        })
        .collect()
}

pub fn table_file_name(index: usize, command: &str, suffix: &str) -> String {
    if suffix.is_empty() {
        format!("{:02}-{command}.csv", index + 1)
    } else {
        format!("{:02}-{command}-{suffix}.csv", index + 1)
    }
}

pub fn run(opts: &RunOptions) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let text = read_config(&opts.config)?;
    let cfg = parse_config(&text)?;
    let limits = effective_limits(&cfg, opts.force_guards);
    let results = execute(&cfg, limits, opts.threads)?;

    let mut files = Vec::new();
    let mut task_entries = Vec::new();
    for (index, (task, result)) in cfg.tasks.iter().zip(&results).enumerate() {
        let mut names = Vec::new();
        for table in &result.tables {
            let name = table_file_name(index, task.command(), &table.suffix);
            files.push((name.clone(), table.to_csv()?));
            names.push(name);
        }
        task_entries.push(json!({
            "index": index + 1,
            "command": task.command(),
            "outputs": names,
            "summary": result.summary,
        }));
    }
    let manifest = json!({
        "tool": {"name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION")},
        "core_version": invpress_core::VERSION,
        "config_path": opts.config.display().to_string(),
        "config": cfg,
        "seed": cfg.seed,
        "limits": {"max_words": limits.max_words, "max_nodes": limits.max_nodes},
        "force_guards": opts.force_guards,
        "threads": opts.threads,
        "started_unix": stamp,
        "wall_time_s": started.elapsed().as_secs_f64(),
        "tasks": task_entries,
    });
    files.push(("manifest.json".into(), output::manifest_bytes(&manifest)?));
    let written = output::write_all(&opts.out, &files)?;
    Ok(RunReport {
        files: written,
        manifest,
    })
}

fn read_config(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}
