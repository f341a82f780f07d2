//! The star product, its gauge-corrected variant and the trace functional.

mod product;
mod trace;

pub use product::{Bidifferential, StarProduct, MAX_STAR_ORDER};
pub use trace::{
    cyclicity_defect, gauge_b, gauge_numerator, measure_defect, star_prime, trace, CyclicityReport, GaugeCorrection,
    Measure, TraceFunctional, TRACE_ORDER,
};
