//! Problem-file front end for the `ncstar` engine.

mod error;
mod problem;
mod report;
mod tasks;

pub use error::CliError;
pub use problem::{parse_problem, Entry, Model, ProblemFile, Task, DEFAULT_ORDER};
pub use report::{run, Report, RunOptions, TaskReport};
pub use tasks::{run_task, Status, TaskOutcome, ASSOC_SAMPLES, TRACE_SAMPLES};
