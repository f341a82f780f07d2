use std::collections::BTreeMap;

use serde::Serialize;

use crate::problem::{Model, ProblemFile, Task};
use crate::tasks::{run_task, Status, TaskOutcome};

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    #[serde(flatten)]
    pub outcome: TaskOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub dim: usize,
    pub order: u32,
    pub seed: u64,
    pub passed: bool,
    /// Keyed by task name.
    pub tasks: BTreeMap<String, TaskReport>,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub tasks: Vec<Task>,
    pub order: Option<u32>,
    pub seed: Option<u64>,
    pub timing: bool,
}

/// Runs the requested tasks concurrently; the report is ordered by task name.
pub fn run(problem: &ProblemFile, model: &Model, opts: &RunOptions) -> Report {
    let order = opts.order.unwrap_or(problem.order);
    let seed = opts.seed.unwrap_or(problem.seed);
    let mut tasks: Vec<Task> = if !opts.tasks.is_empty() {
        opts.tasks.clone()
    } else if !problem.tasks.is_empty() {
        problem.tasks.clone()
    } else {
        vec![Task::Validate]
    };
    tasks.sort();
    tasks.dedup();

    let results: Vec<(Task, TaskReport)> = std::thread::scope(|scope| {
        let handles: Vec<_> = tasks
            .iter()
            .map(|&task| {
                scope.spawn(move || {
                    let start = std::time::Instant::now();
                    let outcome = run_task(task, model, order, seed);
                    let elapsed_ms = opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
                    (task, TaskReport { outcome, elapsed_ms })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("task thread panicked")).collect()
    });

    let passed = results.iter().all(|(_, r)| r.outcome.status == Status::Pass);
    let tasks = results.into_iter().map(|(t, r)| (t.name().to_string(), r)).collect();
    Report { dim: problem.dim, order, seed, passed, tasks }
}
