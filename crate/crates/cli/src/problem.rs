//! Problem files: a bivector, a measure and the tasks to run on them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use ncstar_core::{PoissonBivector, ThetaPoly, VarSpace};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_ORDER: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Validate,
    Gamma,
    DarbouxCheck,
    StarAssoc,
    TraceCheck,
    Subalgebra,
    Oscillator,
    FreeParticle,
}

impl Task {
    pub const ALL: [Task; 8] = [
        Task::Validate,
        Task::Gamma,
        Task::DarbouxCheck,
        Task::StarAssoc,
        Task::TraceCheck,
        Task::Subalgebra,
        Task::Oscillator,
        Task::FreeParticle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Validate => "validate",
            Task::Gamma => "gamma",
            Task::DarbouxCheck => "darboux-check",
            Task::StarAssoc => "star-assoc",
            Task::TraceCheck => "trace-check",
            Task::Subalgebra => "subalgebra",
            Task::Oscillator => "oscillator",
            Task::FreeParticle => "free-particle",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Task::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| {
            let names: Vec<_> = Task::ALL.iter().map(|t| t.name()).collect();
            format!("unknown task `{s}` (expected one of: {})", names.join(", "))
        })
    }
}

/// One bivector entry `w^{ij}`, one-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "EntryRepr")]
pub struct Entry {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Tuple(usize, usize, String),
    Object {
        i: usize,
        j: usize,
        #[serde(alias = "poly")]
        value: String,
    },
}

impl From<EntryRepr> for Entry {
    fn from(r: EntryRepr) -> Self {
        match r {
            EntryRepr::Tuple(i, j, value) | EntryRepr::Object { i, j, value } => Entry { i, j, value },
        }
    }
}

fn default_measure() -> String {
    "1".into()
}

fn default_order() -> u32 {
    DEFAULT_ORDER
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dim: usize,
    #[serde(default)]
    pub bivector: Vec<Entry>,
    #[serde(default = "default_measure")]
    pub measure: String,
    #[serde(default = "default_order")]
    pub order: u32,
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub seed: u64,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Model {
    pub omega: PoissonBivector,
    pub mu: ThetaPoly,
}

impl ProblemFile {
    pub fn model(&self) -> Result<Model, CliError> {
        if self.dim == 0 {
            return Err(CliError::Invalid("dim must be at least 1".into()));
        }
        let space = VarSpace::coords(self.dim);
        let mut seen = BTreeSet::new();
        let mut entries = Vec::with_capacity(self.bivector.len());
        for (k, e) in self.bivector.iter().enumerate() {
            for idx in [e.i, e.j] {
                if idx == 0 || idx > self.dim {
                    return Err(CliError::Invalid(format!(
                        "bivector entry {k}: index {idx} outside 1..={}",
                        self.dim
                    )));
                }
            }
            if e.i == e.j {
                return Err(CliError::Invalid(format!("bivector entry {k}: diagonal entry ({}, {})", e.i, e.j)));
            }
            if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
                return Err(CliError::Invalid(format!("bivector entry {k}: duplicate pair ({}, {})", e.i, e.j)));
            }
            let p = ThetaPoly::parse(&e.value, space).map_err(|err| CliError::Polynomial {
                field: format!("bivector[{k}]"),
                source: err,
            })?;
            entries.push((e.i - 1, e.j - 1, p));
        }
        let omega = PoissonBivector::from_entries(self.dim, &entries)?;
        let mu = ThetaPoly::parse(&self.measure, space).map_err(|err| CliError::Polynomial {
            field: "measure".into(),
            source: err,
        })?;
        if mu.is_zero() {
            return Err(CliError::Invalid("measure must be nonzero".into()));
        }
        Ok(Model { omega, mu })
    }
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemFile, CliError> {
    let problem: ProblemFile = serde_json::from_str(text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        let full = e.to_string();
        let message = full.strip_suffix(&format!(" at line {line} column {column}")).unwrap_or(&full).to_string();
        CliError::Json { line, column, message }
    })?;
    problem.model()?;
    Ok(problem)
}
