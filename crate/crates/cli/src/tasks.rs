//! Task execution. Each task returns a status and an exact payload.

use ncstar_core::exact_algebra::ThetaPoly;
use ncstar_core::operators::{build_gamma1, build_xhat, subalgebra_defect};
use ncstar_core::poisson::{assemble_darboux, build_gamma, verify_darboux};
use ncstar_core::qm_examples::{build_fuzzy_oscillator, free_particle_check};
use ncstar_core::random::PolySampler;
use ncstar_core::star::{Measure, StarProduct, TraceFunctional, MAX_STAR_ORDER, TRACE_ORDER};
use ncstar_core::{PoissonBivector, Scalar};
use serde::Serialize;
use serde_json::{json, Value};

use crate::problem::{Model, Task};

/// Random triples drawn by `star-assoc`.
pub const ASSOC_SAMPLES: usize = 20;
/// Random Gaussian pairs drawn by `trace-check`.
pub const TRACE_SAMPLES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskOutcome {
    pub status: Status,
    pub payload: Value,
}

impl TaskOutcome {
    fn verdict(pass: bool, payload: Value) -> Self {
        TaskOutcome { status: if pass { Status::Pass } else { Status::Fail }, payload }
    }

    fn error(message: impl ToString) -> Self {
        TaskOutcome { status: Status::Error, payload: json!({ "error": message.to_string() }) }
    }
}

type TaskResult = Result<TaskOutcome, ncstar_core::Error>;

fn record(index: &[usize], p: &ThetaPoly) -> Value {
    let index: Vec<usize> = index.iter().map(|i| i + 1).collect();
    json!({ "index": index, "value": p.to_string(), "terms": p })
}

/// Nonzero entries of a row-major `n x n` table.
fn nonzero_matrix(n: usize, entries: &[ThetaPoly]) -> Vec<Value> {
    entries
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, p)| record(&[k / n, k % n], p))
        .collect()
}

fn star_order(order: u32) -> Result<u32, String> {
    if order > MAX_STAR_ORDER {
        Err(format!("order {order} exceeds the star-product maximum {MAX_STAR_ORDER}"))
    } else {
        Ok(order)
    }
}

pub fn run_task(task: Task, model: &Model, order: u32, seed: u64) -> TaskOutcome {
    let result = match task {
        Task::Validate => validate(model),
        Task::Gamma => gamma(model, order),
        Task::DarbouxCheck => darboux(model, order),
        Task::StarAssoc => match star_order(order) {
            Ok(o) => star_assoc(model, o, seed),
            Err(e) => return TaskOutcome::error(e),
        },
        Task::TraceCheck => trace_check(model, seed),
        Task::Subalgebra => match star_order(order) {
            Ok(o) => subalgebra(model, o),
            Err(e) => return TaskOutcome::error(e),
        },
        Task::Oscillator => oscillator(model, order),
        Task::FreeParticle => free_particle(model, seed),
    };
    result.unwrap_or_else(TaskOutcome::error)
}

fn validate(model: &Model) -> TaskResult {
    let jacobi = model.omega.jacobi_defect();
    let measure = Measure::new(model.mu.clone(), &model.omega)?;
    let n = model.omega.dim();
    let measure_defect: Vec<Value> = measure
        .defect()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(j, p)| record(&[j], p))
        .collect();
    Ok(TaskOutcome::verdict(
        jacobi.is_zero() && measure.is_valid(),
        json!({
            "dim": n,
            "poisson": jacobi.is_zero(),
            "jacobi_defect": jacobi,
            "measure_valid": measure.is_valid(),
            "measure_defect": measure_defect,
        }),
    ))
}

fn gamma(model: &Model, order: u32) -> TaskResult {
    let tower = build_gamma(&model.omega, order)?;
    let n = model.omega.dim();
    let mut residuals = Vec::new();
    for k in 1..=order {
        for v in nonzero_matrix(n, &tower.antisymmetry_residual(k)) {
            residuals.push(json!({ "order": k, "residual": v }));
        }
    }
    Ok(TaskOutcome::verdict(residuals.is_empty(), json!({ "order": order, "tensors": tower, "residuals": residuals })))
}

fn darboux(model: &Model, order: u32) -> TaskResult {
    let tower = build_gamma(&model.omega, order)?;
    let map = assemble_darboux(&tower);
    let rep = verify_darboux(&map, &model.omega, order)?;
    let n = model.omega.dim();
    Ok(TaskOutcome::verdict(
        rep.brackets_hold(),
        json!({
            "order": order,
            "xx_defect": nonzero_matrix(n, &rep.xx_defect),
            "pp_defect": nonzero_matrix(n, &rep.pp_defect),
            "delta": nonzero_matrix(n, &rep.delta),
            "delta_vs_printed": nonzero_matrix(n, &rep.delta_vs_printed),
            "delta_vs_expected": nonzero_matrix(n, &rep.delta_vs_expected),
        }),
    ))
}

fn star_assoc(model: &Model, order: u32, seed: u64) -> TaskResult {
    let star = StarProduct::new(&model.omega)?;
    let space = model.omega.space();
    let mut gen = PolySampler::new(seed);
    let mut failures = Vec::new();
    for k in 0..ASSOC_SAMPLES {
        let (f, g, h) = (gen.poly(space), gen.poly(space), gen.poly(space));
        let d = star.assoc_defect(&f, &g, &h, order)?;
        if !d.is_zero() {
            failures.push(json!({
                "sample": k,
                "f": f.to_string(), "g": g.to_string(), "h": h.to_string(),
                "defect": d.to_string(),
            }));
        }
    }
    Ok(TaskOutcome::verdict(
        failures.is_empty(),
        json!({
            "order": order,
            "seed": seed,
            "samples": ASSOC_SAMPLES,
            "bounds": gen.bounds(),
            "failures": failures,
        }),
    ))
}

fn orders(i: &ncstar_core::ExactIntegral, max: u32) -> Vec<String> {
    (0..=max).map(|s| i.order(s).to_string()).collect()
}

fn trace_check(model: &Model, seed: u64) -> TaskResult {
    let tf = TraceFunctional::new(&model.omega, model.mu.clone())?;
    let n = model.omega.dim();
    let mut gen = PolySampler::new(seed);
    let mut failures = Vec::new();
    let mut uncorrected_nonzero = 0;
    let mut obstruction_matches = true;
    let twenty_fourth = Scalar::ratio(1, 24);
    for k in 0..TRACE_SAMPLES {
        let (f, g) = (gen.gaussian(n), gen.gaussian(n));
        let fixed = tf.cyclicity_defect(&f, &g, true)?;
        if !fixed.is_zero() {
            failures.push(json!({
                "sample": k,
                "f": f.prefactor().to_string(),
                "g": g.prefactor().to_string(),
                "commutator": orders(&fixed.commutator, TRACE_ORDER),
                "trace_condition": orders(&fixed.trace_condition, TRACE_ORDER),
            }));
        }
        let plain = tf.cyclicity_defect(&f, &g, false)?;
        if !plain.trace_condition.is_zero() {
            uncorrected_nonzero += 1;
        }
        let obstruction = tf.obstruction_integral(&f, &g)?;
        obstruction_matches &= plain.trace_condition.order(2) == &obstruction.order(0) * &twenty_fourth;
    }
    let b: Vec<Value> = (0..n * n)
        .filter(|k| !tf.gauge.entry(k / n, k % n).is_zero())
        .map(|k| record(&[k / n, k % n], tf.gauge.entry(k / n, k % n)))
        .collect();
    Ok(TaskOutcome::verdict(
        failures.is_empty(),
        json!({
            "seed": seed,
            "samples": TRACE_SAMPLES,
            "order": TRACE_ORDER,
            "gauge_b": b,
            "failures": failures,
            "uncorrected_nonzero_samples": uncorrected_nonzero,
            "uncorrected_matches_obstruction_over_24": obstruction_matches,
        }),
    ))
}

fn subalgebra(model: &Model, order: u32) -> TaskResult {
    let tower = build_gamma(&model.omega, order)?;
    let gamma1 = build_gamma1(&model.omega);
    let star = StarProduct::new(&model.omega)?;
    let xs = build_xhat(&tower, &gamma1, order)?;
    let defects: Vec<Value> = subalgebra_defect(&xs, &star, order)?
        .into_iter()
        .filter(|(_, d)| !d.is_zero())
        .map(|((i, j), d)| json!({ "index": [i + 1, j + 1], "value": d.to_string(), "terms": d }))
        .collect();
    Ok(TaskOutcome::verdict(
        defects.is_empty(),
        json!({ "order": order, "gamma1": gamma1, "xhat": xs, "defects": defects }),
    ))
}

fn oscillator(model: &Model, order: u32) -> TaskResult {
    let fuzzy = PoissonBivector::fuzzy_sphere();
    if model.omega.dim() != 3 || model.omega != fuzzy {
        return Ok(TaskOutcome::error("oscillator needs the fuzzy-sphere bivector w^{ij} = eps^{ijk} x_k"));
    }
    if !model.mu.as_constant().is_some_and(|c| c == Scalar::from_int(1)) {
        return Ok(TaskOutcome::error("oscillator needs the measure 1"));
    }
    let order = order.clamp(2, MAX_STAR_ORDER);
    let rep = build_fuzzy_oscillator(order)?;
    let eigen: Vec<Value> = rep
        .harmonic_eigenvalues
        .iter()
        .map(|(l, e)| json!({ "l": l, "eigenvalue": e }))
        .collect();
    Ok(TaskOutcome::verdict(
        rep.passes(),
        json!({
            "omega_osc": rep.omega_osc,
            "omega_bivector": rep.omega_bivector,
            "order": rep.order,
            "correction_coefficient": rep.correction_coefficient,
            "correction": rep.correction.to_string(),
            "zeroth_order_holds": rep.zeroth_order_holds,
            "first_order_vanishes": rep.first_order_vanishes,
            "identity_holds": rep.identity_holds,
            "third_order_vanishes": rep.third_order_vanishes,
            "degeneracy_preserved": rep.degeneracy_preserved,
            "gauge_b": rep.gauge,
            "harmonic_eigenvalues": eigen,
            "energy_levels": rep.energy_levels,
        }),
    ))
}

fn free_particle(model: &Model, seed: u64) -> TaskResult {
    let n = model.omega.dim();
    let mut gen = PolySampler::new(seed);
    let k: Vec<Scalar> = (0..n).map(|_| Scalar::from_int(gen.integer())).collect();
    let rep = free_particle_check(&model.mu, &k)?;
    let ksq = k.iter().fold(Scalar::from_int(0), |acc, x| &acc + &(x * x));
    let expected = &ksq * &Scalar::ratio(1, 2);
    Ok(TaskOutcome::verdict(
        rep.conjugation_holds && rep.energy == expected,
        json!({
            "measure": model.mu.to_string(),
            "wave_vector": rep.wave_vector,
            "momentum_eigenvalues": rep.momentum_eigenvalues,
            "energy": rep.energy,
            "conjugation_holds": rep.conjugation_holds,
            "conjugated_hamiltonian": rep.conjugated_hamiltonian.to_string(),
        }),
    ))
}
