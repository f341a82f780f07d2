//! Acceptance suite: one verdict line per criterion, followed by its checks.
//! Runs without the libtest harness so the verdicts are always printed.

use std::collections::BTreeMap;
use std::process::ExitCode;

use ncstar_core::exact_algebra::{GaussianFunction, Scalar, ThetaPoly, VarSpace};
use ncstar_core::operators::{build_gamma1, build_xhat, subalgebra_defect, unit_index, DiffOperator, Gamma1Tensor};
use ncstar_core::poisson::{assemble_darboux, build_gamma, verify_darboux, PoissonBivector};
use ncstar_core::qm_examples::{build_fuzzy_oscillator, energy_correction, free_particle_check};
use ncstar_core::random::PolySampler;
use ncstar_core::star::{measure_defect, GaugeCorrection, Measure, StarProduct, TraceFunctional};
use ncstar_core::Error;
use num_traits::Zero;

const SEED: u64 = 20_240_917;
const TRIPLES: usize = 20;
const PAIRS: usize = 20;

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

/// Checks that do not enter the verdict.
struct Note(String);

#[derive(Default)]
struct Outcome {
    checks: Vec<Check>,
    notes: Vec<Note>,
}

impl Outcome {
    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(Note(text.into()));
    }

    fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }
}

fn poly(src: &str, n: usize) -> ThetaPoly {
    ThetaPoly::parse(src, VarSpace::coords(n)).unwrap()
}

fn first_nonzero(ps: &[ThetaPoly]) -> String {
    ps.iter().find(|p| !p.is_zero()).map(|p| p.to_string()).unwrap_or_else(|| "0".into())
}

// ---------------------------------------------------------------------------
// Independent oracles

/// Printed second-order Darboux coefficient, symmetrised in the trailing pair.
fn gamma2_printed(w: &PoissonBivector, i: usize, j: usize, k: usize) -> ThetaPoly {
    let n = w.dim();
    let t = |i: usize, j: usize, k: usize| {
        let mut acc = ThetaPoly::zero(w.space());
        for m in 0..n {
            acc = &acc + &(w.entry(k, m) * &w.entry(i, j).d(m));
            acc = &acc + &(w.entry(j, m) * &w.entry(i, k).d(m));
        }
        acc.scale(&Scalar::ratio(1, 24))
    };
    (&t(i, j, k) + &t(i, k, j)).scale(&Scalar::ratio(1, 2))
}

/// `sum_n (i theta/2)^n / n! w^{i1 j1}..w^{in jn} d_{i1..in} f d_{j1..jn} g` for constant `w`.
fn moyal(w: &PoissonBivector, f: &ThetaPoly, g: &ThetaPoly, order: u32) -> ThetaPoly {
    let n = w.dim();
    let mut out = ThetaPoly::zero(w.space());
    let mut fact = 1i64;
    for k in 0..=order {
        if k > 0 {
            fact *= k as i64;
        }
        let mut acc = ThetaPoly::zero(w.space());
        let pairs = (n * n).pow(k);
        for code in 0..pairs {
            let mut c = code;
            let mut df = f.clone();
            let mut dg = g.clone();
            let mut coeff = ThetaPoly::one(w.space());
            for _ in 0..k {
                let (a, b) = ((c % (n * n)) / n, c % n);
                c /= n * n;
                coeff = &coeff * w.entry(a, b);
                df = df.d(a);
                dg = dg.d(b);
            }
            acc = &acc + &(&coeff * &(&df * &dg));
        }
        let scale = &Scalar::complex(0, 1, 1, 2).pow(k) * &Scalar::ratio(1, fact);
        out = &out + &acc.scale(&scale).theta_shift(k);
    }
    out
}

/// `w^{nk} d_k w^{ml} d_n d_m w^{ij}`.
fn a_oracle(w: &PoissonBivector, i: usize, j: usize, l: usize) -> ThetaPoly {
    let d = w.dim();
    let mut acc = ThetaPoly::zero(w.space());
    for n in 0..d {
        for k in 0..d {
            for m in 0..d {
                let t = &(w.entry(n, k) * &w.entry(m, l).d(k)) * &w.entry(i, j).d(n).d(m);
                acc = &acc + &t;
            }
        }
    }
    acc
}

/// `d_l(mu w^{ij} d_j w^{lk})`.
fn m_oracle(w: &PoissonBivector, mu: &ThetaPoly, i: usize, k: usize) -> ThetaPoly {
    let n = w.dim();
    let mut acc = ThetaPoly::zero(w.space());
    for l in 0..n {
        let mut inner = ThetaPoly::zero(w.space());
        for j in 0..n {
            inner = &inner + &(w.entry(i, j) * &w.entry(l, k).d(j));
        }
        acc = &acc + &(mu * &inner).d(l);
    }
    acc
}

fn double_factorial(n: i64) -> i64 {
    (1..=n).rev().step_by(2).product::<i64>().max(1)
}

/// `int P exp(-k|x|^2)` in units of `(pi/k)^{N/2}`, one value per theta power.
fn moment_integral(p: &ThetaPoly, k: u32) -> BTreeMap<u32, Scalar> {
    let mut out: BTreeMap<u32, Scalar> = BTreeMap::new();
    for (m, c) in p.terms() {
        if m.exps.iter().any(|e| e % 2 == 1) {
            continue;
        }
        let mut v = c.clone();
        for &e in m.exps.iter() {
            let half = (e / 2) as i64;
            v = &v * &Scalar::ratio(double_factorial(2 * half - 1), (2 * k as i64).pow(half as u32));
        }
        let slot = out.entry(m.theta).or_insert_with(Scalar::zero);
        *slot = &*slot + &v;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `d_i (P exp(-k|x|^2))` as a prefactor.
fn gaussian_partial(p: &ThetaPoly, k: u32, i: usize) -> ThetaPoly {
    let x = ThetaPoly::coord(p.space(), i);
    &p.d(i) - &(&x * p).scale(&Scalar::from_int(2 * k as i64))
}

/// `-i eps^{ijk} x_j d_k`, assembled term by term.
fn l_op(i: usize) -> DiffOperator {
    let s = VarSpace::coords(3);
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let mut op = DiffOperator::zero(3);
    op.add_poly_term(0, unit_index(3, k), ThetaPoly::coord(s, j).scale(&Scalar::complex(0, 1, -1, 1)));
    op.add_poly_term(0, unit_index(3, j), ThetaPoly::coord(s, k).scale(&Scalar::i()));
    op
}

fn l_squared_oracle() -> DiffOperator {
    (0..3).fold(DiffOperator::zero(3), |acc, i| acc.try_add(&l_op(i).compose(&l_op(i)).unwrap()).unwrap())
}

// ---------------------------------------------------------------------------
// Criteria

fn quadratic_2d() -> PoissonBivector {
    PoissonBivector::from_entries(2, &[(0, 1, poly("x1^2 + x1*x2 - 2*x2^2", 2))]).unwrap()
}

fn constant_3d() -> PoissonBivector {
    PoissonBivector::constant(3, &[Scalar::from_int(1), Scalar::ratio(2, 3), Scalar::from_int(-1)]).unwrap()
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::default();
    let cases = [("constant", constant_3d()), ("fuzzy sphere", PoissonBivector::fuzzy_sphere()), ("2D quadratic", quadratic_2d())];
    for (label, w) in cases {
        let n = w.dim();
        let tower = build_gamma(&w, 2).unwrap();
        let mut first = true;
        let mut printed = true;
        let mut flipped = true;
        let mut witness = String::new();
        for i in 0..n {
            for j in 0..n {
                first &= tower.component(i, &[j]) == w.entry(i, j).scale(&Scalar::ratio(-1, 2));
                for k in 0..n {
                    let got = tower.component(i, &[j, k]);
                    let lit = gamma2_printed(&w, i, j, k);
                    if got != lit && witness.is_empty() {
                        witness = format!("component ({},{},{}): built {got}, printed {lit}", i + 1, j + 1, k + 1);
                    }
                    printed &= got == lit;
                    flipped &= got == lit.scale(&Scalar::from_int(-1));
                }
            }
        }
        out.check(format!("{label}: first order equals -w/2"), first, "");
        out.check(format!("{label}: second order equals the printed closed form"), printed, witness);
        out.note(format!("{label}: second order equals minus the printed closed form: {flipped}"));
    }
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::default();
    let w = PoissonBivector::fuzzy_sphere();
    let rep = verify_darboux(&assemble_darboux(&build_gamma(&w, 3).unwrap()), &w, 3).unwrap();
    let xx = rep.xx_defect.iter().all(ThetaPoly::is_zero);
    let pp = rep.pp_defect.iter().all(ThetaPoly::is_zero);
    out.check("{x^i,x^j} - theta w^{ij}(x) vanishes through theta^3", xx, first_nonzero(&rep.xx_defect));
    out.check("{p_i,p_j} vanishes", pp, first_nonzero(&rep.pp_defect));
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::default();
    for (label, w) in [("fuzzy sphere", PoissonBivector::fuzzy_sphere()), ("constant", constant_3d())] {
        let star = StarProduct::new(&w).unwrap();
        let mut gen = PolySampler::new(SEED);
        let mut failures = 0;
        let mut witness = String::new();
        for _ in 0..TRIPLES {
            let (f, g, h) = (gen.poly(w.space()), gen.poly(w.space()), gen.poly(w.space()));
            let d = star.assoc_defect(&f, &g, &h, 3).unwrap();
            if !d.is_zero() {
                failures += 1;
                witness = d.to_string();
            }
        }
        out.check(format!("{label}: {TRIPLES} seeded triples associative through theta^3"), failures == 0, witness);
    }
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::default();
    let cases = [
        ("2D", PoissonBivector::constant(2, &[Scalar::ratio(3, 2)]).unwrap()),
        ("3D", constant_3d()),
    ];
    for (label, w) in cases {
        let star = StarProduct::new(&w).unwrap();
        let mut gen = PolySampler::new(SEED + 4);
        let mut ok = [true; 4];
        for _ in 0..10 {
            let (f, g) = (gen.poly(w.space()), gen.poly(w.space()));
            let a = star.star(&f, &g, 3).unwrap();
            let b = moyal(&w, &f, &g, 3);
            for (s, slot) in ok.iter_mut().enumerate() {
                *slot &= a.theta_slice(s as u32) == b.theta_slice(s as u32);
            }
        }
        for (s, pass) in ok.iter().enumerate() {
            out.check(format!("{label}: order {s} matches the exponential series"), *pass, "");
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::default();
    let cases = [
        ("fuzzy sphere", PoissonBivector::fuzzy_sphere()),
        ("2D quadratic", quadratic_2d()),
        ("Nambu cubic", PoissonBivector::nambu(&poly("x1^2*x2 + x3^3", 3)).unwrap()),
    ];
    for (label, w) in cases {
        let n = w.dim();
        let star = StarProduct::new(&w).unwrap();
        let tower = build_gamma(&w, 3).unwrap();
        let closes = |g1: &Gamma1Tensor| {
            let xs = build_xhat(&tower, g1, 3).unwrap();
            subalgebra_defect(&xs, &star, 3).unwrap().into_iter().find(|(_, d)| !d.is_zero())
        };
        let printed = Gamma1Tensor::symmetrised(&w, &Scalar::ratio(1, 6));
        let bad = closes(&printed);
        out.check(
            format!("{label}: closure through theta^3 with the printed Gamma_1"),
            bad.is_none(),
            bad.map(|((i, j), d)| format!("[x^{},x^{}] residual {d}", i + 1, j + 1)).unwrap_or_default(),
        );

        let xs = build_xhat(&tower, &Gamma1Tensor::zero(n), 3).unwrap();
        let residual = subalgebra_defect(&xs, &star, 3).unwrap();
        let expected = |c: &Scalar| {
            residual.iter().all(|((i, j), d)| {
                let mut e = DiffOperator::zero(n);
                for l in 0..n {
                    e.add_poly_term(3, unit_index(n, l), a_oracle(&w, *i, *j, l).scale(c));
                }
                *d == e
            })
        };
        let lit = expected(&Scalar::complex(0, 1, 1, 3));
        out.check(
            format!("{label}: residual with Gamma_1 = 0 equals the displayed third-order term"),
            lit,
            if lit { String::new() } else { first_op(&residual) },
        );
        out.note(format!("{label}: closure with the derived Gamma_1 (1/48): {}", closes(&build_gamma1(&w)).is_none()));
        out.note(format!("{label}: residual with Gamma_1 = 0 equals (i theta^3/8) A d: {}", expected(&Scalar::complex(0, 1, 1, 8))));
    }
    out
}

fn first_op(ops: &[((usize, usize), DiffOperator)]) -> String {
    ops.iter()
        .find(|(_, d)| !d.is_zero())
        .map(|((i, j), d)| format!("[x^{},x^{}] residual {d}", i + 1, j + 1))
        .unwrap_or_else(|| "0".into())
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::default();
    let w = PoissonBivector::fuzzy_sphere();
    let mu = ThetaPoly::one(w.space());
    let tf = TraceFunctional::new(&w, mu.clone()).unwrap();

    let twelfth = GaugeCorrection::from_matrix(
        3,
        (0..9).map(|k| if k % 4 == 0 { poly("1/12", 3) } else { poly("0", 3) }).collect(),
    )
    .unwrap();
    out.check("derived gauge equals delta/12", tf.gauge == twelfth, format!("derived b^{{11}} = {}", tf.gauge.entry(0, 0)));

    let mut gen = PolySampler::new(SEED + 6);
    let pairs: Vec<(GaussianFunction, GaussianFunction)> = (0..PAIRS).map(|_| (gen.gaussian(3), gen.gaussian(3))).collect();

    let mut cyclic = true;
    let mut condition = true;
    for (f, g) in &pairs {
        let rep = tf.cyclicity_defect(f, g, true).unwrap();
        cyclic &= (0..=2).all(|s| rep.commutator.order(s).is_zero());
        condition &= (0..=2).all(|s| rep.trace_condition.order(s).is_zero());
    }
    out.check(format!("Tr(f *' g - g *' f) = 0 at orders 0..2 on {PAIRS} pairs"), cyclic, "");
    out.note(format!("Tr(f *' g) = Tr(f g) at orders 0..2 on {PAIRS} pairs: {condition}"));

    let mut nonzero = false;
    let mut matches_printed = true;
    let mut matches_derived = true;
    let mut witness = String::new();
    for (f, g) in &pairs {
        let lhs = tf.cyclicity_defect(f, g, false).unwrap().trace_condition.order(2);
        let mut integrand = ThetaPoly::zero(w.space());
        for i in 0..3 {
            for k in 0..3 {
                let df = gaussian_partial(f.prefactor(), 1, i);
                let dg = gaussian_partial(g.prefactor(), 1, k);
                integrand = &integrand + &(&(&df * &m_oracle(&w, &mu, i, k)) * &dg);
            }
        }
        let oracle = moment_integral(&integrand, 2).get(&0).cloned().unwrap_or_else(Scalar::zero);
        nonzero |= !lhs.is_zero();
        let printed = &oracle * &Scalar::ratio(1, 12);
        if lhs != printed && witness.is_empty() {
            witness = format!("defect {lhs}, printed obstruction {printed}");
        }
        matches_printed &= lhs == printed;
        matches_derived &= lhs == &oracle * &Scalar::ratio(1, 24);
    }
    out.check("uncorrected product has a nonzero second-order defect", nonzero, "");
    out.check("uncorrected defect equals the printed obstruction integral (1/12)", matches_printed, witness);
    out.note(format!("uncorrected defect equals the obstruction integral with 1/24: {matches_derived}"));
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::default();
    let rep = build_fuzzy_oscillator(2).unwrap();
    let l2 = l_squared_oracle();
    let target = l2.scale(&Scalar::ratio(1, 24));
    out.check(
        "second-order slice of the Hamiltonian equals (theta^2 omega^2/24) L^2",
        rep.correction == target,
        format!("coefficient {:?}", rep.correction_coefficient.as_ref().map(Scalar::to_string)),
    );
    out.check("first-order slice vanishes", rep.first_order_vanishes, "");
    out.check("zeroth-order slice is omega^2 r^2/2", rep.zeroth_order_holds, "");
    for (l, expect) in [(0, Scalar::zero()), (1, Scalar::ratio(1, 12)), (2, Scalar::ratio(1, 4))] {
        let e = energy_correction(l, l).unwrap().correction;
        out.check(format!("energy correction l={l} is {expect} theta^2 omega^2"), e == expect, e.to_string());
    }
    for l in 0..=4 {
        let e = energy_correction(4, l).unwrap().correction;
        out.check(format!("energy correction l={l} equals l(l+1)/24"), e == Scalar::ratio((l * (l + 1)) as i64, 24), "");
    }

    let w = PoissonBivector::fuzzy_sphere();
    let plain = StarProduct::new(&w).unwrap();
    let twelfth = GaugeCorrection::from_matrix(
        3,
        (0..9).map(|k| if k % 4 == 0 { poly("1/12", 3) } else { poly("0", 3) }).collect(),
    )
    .unwrap();
    let r2 = poly("x1^2 + x2^2 + x3^2", 3);
    let with_twelfth = plain.with_gauge(&twelfth).unwrap().left_operator(&r2, 2).unwrap().scale(&Scalar::ratio(1, 2));
    out.note(format!("with b = delta/12 the identity holds: {}", with_twelfth.theta_slice(2) == target));
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::default();
    let cases = [("1", 1), ("1 + x1^2", 1), ("1", 3), ("1 + x1^2", 3), ("1 + x1^2 + x2^2 + x3^2", 3)];
    for (mu, n) in cases {
        let k: Vec<Scalar> = [2, -3, 1][..n].iter().map(|&x| Scalar::from_int(x)).collect();
        let ksq: i64 = [4, 9, 1][..n].iter().sum();
        let rep = free_particle_check(&poly(mu, n), &k).unwrap();
        out.check(format!("mu = {mu} (N={n}): conjugation identity"), rep.conjugation_holds, "");
        out.check(
            format!("mu = {mu} (N={n}): eigenvalue k^2/2 = {ksq}/2"),
            rep.energy == Scalar::ratio(ksq, 2),
            rep.energy.to_string(),
        );
    }
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::default();
    let sample = PoissonBivector::from_entries(3, &[(0, 1, poly("x2", 3)), (1, 2, poly("x3", 3)), (2, 0, poly("x1", 3))]).unwrap();
    let defect = sample.jacobi_defect();
    let payload: Vec<String> =
        defect.nonzero().iter().map(|((i, j, k), p)| format!("J^{{{}{}{}}} = {p}", i + 1, j + 1, k + 1)).collect();
    let rejected = matches!(StarProduct::new(&sample), Err(Error::NotPoisson(_)));
    out.check("non-Poisson sample fails validation", !sample.is_poisson() && rejected, payload.join(", "));
    out.check("its Jacobi defect is nonzero", defect.nonzero_count() > 0, "");

    let w = PoissonBivector::fuzzy_sphere();
    let mu = poly("1 + x1", 3);
    let d = measure_defect(&mu, &w).unwrap();
    let payload: Vec<String> = d.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(j, p)| format!("j={}: {p}", j + 1)).collect();
    let m = Measure::new(mu, &w).unwrap();
    out.check("measure 1 + x1 on the fuzzy sphere fails the divergence condition", !m.is_valid(), payload.join(", "));
    out.check("valid measure 1 passes", measure_defect(&ThetaPoly::one(w.space()), &w).unwrap().iter().all(ThetaPoly::is_zero), "");
    out
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "Darboux coefficient regression", criterion_1),
        (2, "Darboux defining brackets", criterion_2),
        (3, "star product associativity", criterion_3),
        (4, "constant bivector matches the exponential series", criterion_4),
        (5, "coordinate subalgebra closure", criterion_5),
        (6, "trace cyclicity and second-order obstruction", criterion_6),
        (7, "oscillator identity and energy shifts", criterion_7),
        (8, "free particle on a measure", criterion_8),
        (9, "negative controls", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    for (id, title, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == &id.to_string()) {
            continue;
        }
        let outcome = run();
        let verdict = if outcome.pass() { "PASS" } else { "FAIL" };
        println!("criterion {id}: {verdict}  {title}");
        for c in &outcome.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                println!("    [{mark}] {}", c.name);
            } else {
                println!("    [{mark}] {}  ({})", c.name, c.detail);
            }
        }
        for Note(text) in &outcome.notes {
            println!("    [note] {text}");
        }
        if !outcome.pass() {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
