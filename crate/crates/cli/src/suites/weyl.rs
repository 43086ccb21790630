//! Exact suites on the Weyl side.

use quantaequiv_core::category::{
    check_category_laws, check_equivalence, check_functor_laws, Functor, LawReport,
};
use quantaequiv_core::functors::{
    default_schedule, dirac_defect, von_neumann_defect, ClassicalLimitFunctor, EtaTransformation,
    Fiber, LinClass, LinQuant, PhiTransformation, QuantizationFunctor,
};
use quantaequiv_core::random::{
    random_element, random_generator_pair, random_section, random_space, seeded,
    weyl_chain_samples,
};
use quantaequiv_core::rieffel::convergence::{fit_loglog, DEFECT_FLOOR};
use quantaequiv_core::symplectic::{rational_to_f64, symplectic_form, SymplecticSpace};
use quantaequiv_core::weyl::{WeylElement, WeylError};
use serde_json::{json, Value};

use super::{derive_seed, Job, Outcome, Tally};
use crate::report::{num, CheckRecord, Table};
use crate::SuiteConfig;

fn doc(a: &WeylElement) -> Value {
    serde_json::from_str(&a.to_json()).unwrap_or(Value::Null)
}

fn error_witness(sample: usize, e: impl std::fmt::Display) -> Value {
    json!({ "sample": sample, "error": e.to_string() })
}

/// Half-dimension alternates between 1 and 2.
fn sample_space(rng: &mut quantaequiv_core::random::SeededRng, i: usize) -> SymplecticSpace {
    random_space(rng, 1 + i % 2)
}

/// Associativity, unit, `(ab)* = b* a*` and commutativity of the `hbar = 0`
/// fiber, exactly on `count` random triples of elements with at most four terms.
pub fn algebra_laws(seed: u64, count: usize) -> Vec<CheckRecord> {
    let mut rng = seeded(seed);
    let mut assoc = Tally::new();
    let mut unit = Tally::new();
    let mut invol = Tally::new();
    let mut commut = Tally::new();
    for i in 0..count {
        let space = sample_space(&mut rng, i);
        let a = random_element(&mut rng, &space, 4, false);
        let b = random_element(&mut rng, &space, 4, false);
        let c = random_element(&mut rng, &space, 4, false);
        let one = WeylElement::unit(&space);
        let triple = || json!({ "sample": i, "a": doc(&a), "b": doc(&b), "c": doc(&c) });

        let r: Result<bool, WeylError> = (|| {
            Ok(a.multiply(&b)?.multiply(&c)? == a.multiply(&b.multiply(&c)?)?)
        })();
        assoc.observe(r.as_ref().is_ok_and(|ok| *ok), || match r {
            Err(e) => error_witness(i, e),
            Ok(_) => triple(),
        });

        let r: Result<bool, WeylError> = (|| Ok(one.multiply(&a)? == a && a.multiply(&one)? == a))();
        unit.observe(r.as_ref().is_ok_and(|ok| *ok), || match r {
            Err(e) => error_witness(i, e),
            Ok(_) => triple(),
        });

        let r: Result<bool, WeylError> = (|| {
            Ok(a.multiply(&b)?.involution() == b.involution().multiply(&a.involution())?)
        })();
        invol.observe(r.as_ref().is_ok_and(|ok| *ok), || match r {
            Err(e) => error_witness(i, e),
            Ok(_) => triple(),
        });

        let r: Result<bool, WeylError> = (|| {
            Ok(a.multiply(&b)?.evaluate_at_zero() == b.multiply(&a)?.evaluate_at_zero())
        })();
        commut.observe(r.as_ref().is_ok_and(|ok| *ok), || match r {
            Err(e) => error_witness(i, e),
            Ok(_) => triple(),
        });
    }
    vec![
        assoc.into_record("algebra-associativity"),
        commut.into_record("algebra-hbar-zero-commutativity"),
        invol.into_record("algebra-involution"),
        unit.into_record("algebra-unit"),
    ]
}

/// Antisymmetry, Jacobi and Leibniz for the bracket on `Delta(V, 0)`.
pub fn poisson_axioms(seed: u64, count: usize) -> Vec<CheckRecord> {
    let mut rng = seeded(seed);
    let mut anti = Tally::new();
    let mut jacobi = Tally::new();
    let mut leibniz = Tally::new();
    for i in 0..count {
        let space = sample_space(&mut rng, i);
        let a = random_element(&mut rng, &space, 4, true);
        let b = random_element(&mut rng, &space, 4, true);
        let c = random_element(&mut rng, &space, 4, true);
        let triple = || json!({ "sample": i, "a": doc(&a), "b": doc(&b), "c": doc(&c) });

        let r: Result<bool, WeylError> =
            (|| Ok(a.poisson_bracket(&b)? == b.poisson_bracket(&a)?.neg()))();
        anti.observe(r.as_ref().is_ok_and(|ok| *ok), || match r {
            Err(e) => error_witness(i, e),
            Ok(_) => triple(),
        });

        let r: Result<bool, WeylError> = (|| {
            let sum = a
                .poisson_bracket(&b.poisson_bracket(&c)?)?
                .add(&b.poisson_bracket(&c.poisson_bracket(&a)?)?)?
                .add(&c.poisson_bracket(&a.poisson_bracket(&b)?)?)?;
            Ok(sum.is_zero())
        })();
        jacobi.observe(r.as_ref().is_ok_and(|ok| *ok), || match r {
            Err(e) => error_witness(i, e),
            Ok(_) => triple(),
        });

        let r: Result<bool, WeylError> = (|| {
            let lhs = a.poisson_bracket(&b.multiply_classical(&c)?)?;
            let rhs = a
                .poisson_bracket(&b)?
                .multiply_classical(&c)?
                .add(&b.multiply_classical(&a.poisson_bracket(&c)?)?)?;
            Ok(lhs == rhs)
        })();
        leibniz.observe(r.as_ref().is_ok_and(|ok| *ok), || match r {
            Err(e) => error_witness(i, e),
            Ok(_) => triple(),
        });
    }
    vec![
        anti.into_record("poisson-antisymmetry"),
        jacobi.into_record("poisson-jacobi"),
        leibniz.into_record("poisson-leibniz"),
    ]
}

pub(crate) fn laws_jobs(config: &SuiteConfig) -> Vec<Job<'_>> {
    let seed = config.seed;
    let s = config.samples.clone();
    let t = s.clone();
    vec![
        Box::new(move || algebra_laws(derive_seed(seed, "algebra"), s.elements).into()),
        Box::new(move || poisson_axioms(derive_seed(seed, "poisson"), t.triples).into()),
    ]
}

pub fn weyl_schedule(config: &SuiteConfig) -> Vec<f64> {
    config
        .schedule
        .clone()
        .unwrap_or_else(|| default_schedule().iter().map(|h| h.to_f64()).collect())
}

/// Defects of `count` random generator pairs against
/// `2|sin(hbar sigma / 4)|` and `|(2/hbar) sin(hbar sigma / 2) - sigma|`, and
/// their fitted orders 1 and 2.
pub fn sdq_checks(seed: u64, count: usize, schedule: &[f64]) -> Outcome {
    const CLOSED_TOL: f64 = 1e-12;
    const ORDER_TOL: f64 = 0.05;
    let mut rng = seeded(seed);
    let mut vn_err: f64 = 0.0;
    let mut dd_err: f64 = 0.0;
    let mut vn_worst: Option<Value> = None;
    let mut dd_worst: Option<Value> = None;
    let mut vn_dev: f64 = 0.0;
    let mut dd_dev: f64 = 0.0;
    let mut vn_slopes = (f64::INFINITY, f64::NEG_INFINITY);
    let mut dd_slopes = (f64::INFINITY, f64::NEG_INFINITY);
    let mut vn_max = vec![0.0_f64; schedule.len()];
    let mut dd_max = vec![0.0_f64; schedule.len()];
    let mut commuting = 0usize;
    let mut below_floor = 0usize;
    let mut failures: Vec<Value> = Vec::new();

    for i in 0..count {
        let space = sample_space(&mut rng, i);
        let (f, g) = random_generator_pair(&mut rng, &space);
        let sigma = match symplectic_form(&space, &f, &g) {
            Ok(s) => rational_to_f64(&s),
            Err(e) => {
                failures.push(error_witness(i, e));
                continue;
            }
        };
        let mut vn_pts = Vec::new();
        let mut dd_pts = Vec::new();
        for (k, &h) in schedule.iter().enumerate() {
            let (vn, dd) = match (
                von_neumann_defect(&space, &f, &g, h),
                dirac_defect(&space, &f, &g, h),
            ) {
                (Ok(vn), Ok(dd)) => (vn, dd),
                (Err(e), _) | (_, Err(e)) => {
                    failures.push(error_witness(i, e));
                    continue;
                }
            };
            let vn_exact = 2.0 * (h * sigma / 4.0).sin().abs();
            let dd_exact = ((2.0 / h) * (h * sigma / 2.0).sin() - sigma).abs();
            let witness = |got: f64, want: f64| {
                json!({ "sample": i, "hbar": h, "sigma": sigma, "defect": got, "closed_form": want })
            };
            if (vn - vn_exact).abs() > vn_err {
                vn_err = (vn - vn_exact).abs();
                vn_worst = Some(witness(vn, vn_exact));
            }
            if (dd - dd_exact).abs() > dd_err {
                dd_err = (dd - dd_exact).abs();
                dd_worst = Some(witness(dd, dd_exact));
            }
            vn_max[k] = vn_max[k].max(vn);
            dd_max[k] = dd_max[k].max(dd);
            vn_pts.push((h, vn));
            dd_pts.push((h, dd));
        }
        if sigma == 0.0 {
            commuting += 1;
            continue;
        }
        let fit = |pts: &[(f64, f64)]| {
            (pts.len() == schedule.len() && pts.iter().all(|p| p.1 >= DEFECT_FLOOR))
                .then(|| fit_loglog(pts).0)
        };
        match (fit(&vn_pts), fit(&dd_pts)) {
            (Some(vs), Some(ds)) => {
                vn_dev = vn_dev.max((vs - 1.0).abs());
                dd_dev = dd_dev.max((ds - 2.0).abs());
                vn_slopes = (vn_slopes.0.min(vs), vn_slopes.1.max(vs));
                dd_slopes = (dd_slopes.0.min(ds), dd_slopes.1.max(ds));
            }
            // Tiny sigma pushes the exact defect under the floor; no order to fit.
            _ => below_floor += 1,
        }
    }

    let fitted = count - commuting - below_floor;
    let closed = |id: &str, err: f64, worst: Option<Value>| {
        CheckRecord::new(id)
            .measure("max_abs_error", err)
            .measure("pairs", count as f64)
            .measure("schedule_points", schedule.len() as f64)
            .tolerance("max_abs_error", CLOSED_TOL)
            .verdict(err <= CLOSED_TOL && failures.is_empty(), || {
                json!({ "worst": worst, "errors": failures.clone() })
            })
    };
    let order = |id: &str, expected: f64, dev: f64, range: (f64, f64)| {
        let rec = CheckRecord::new(id)
            .measure("expected_order", expected)
            .measure("max_deviation", dev)
            .measure("min_slope", range.0)
            .measure("max_slope", range.1)
            .measure("fitted_pairs", fitted as f64)
            .measure("commuting_pairs", commuting as f64)
            .measure("below_floor_pairs", below_floor as f64)
            .tolerance("max_deviation", ORDER_TOL);
        if fitted == 0 {
            return rec.saturated();
        }
        rec.verdict(dev <= ORDER_TOL && failures.is_empty(), || {
            json!({ "min_slope": range.0, "max_slope": range.1, "errors": failures.clone() })
        })
    };

    let table = |id: &str, maxima: &[f64]| {
        let mut t = Table::new(id, &["hbar", "defect", "bound_type"]);
        for (h, d) in schedule.iter().zip(maxima) {
            // Generator defects are single terms, whose norm is known exactly.
            t.push(vec![num(*h), num(*d), "exact".into()]);
        }
        t
    };
    Outcome {
        checks: vec![
            closed("dirac-closed-form", dd_err, dd_worst),
            order("dirac-order", 2.0, dd_dev, dd_slopes),
            closed("von-neumann-closed-form", vn_err, vn_worst),
            order("von-neumann-order", 1.0, vn_dev, vn_slopes),
        ],
        tables: vec![table("dirac", &dd_max), table("von-neumann", &vn_max)],
    }
}

pub(crate) fn sdq_jobs(config: &SuiteConfig) -> Vec<Job<'_>> {
    let seed = derive_seed(config.seed, "sdq");
    let schedule = weyl_schedule(config);
    let pairs = config.samples.pairs;
    vec![Box::new(move || sdq_checks(seed, pairs, &schedule))]
}

pub(crate) fn law_record(id: &str, report: Result<LawReport, impl std::fmt::Display>) -> CheckRecord {
    match report {
        Err(e) => CheckRecord::error(id, e),
        Ok(r) => {
            let violations: Vec<_> = r.violations().take(5).cloned().collect();
            let count = r.violations().count();
            CheckRecord::new(id)
                .measure("records", r.records.len() as f64)
                .measure("violations", count as f64)
                .tolerance("violations", 0.0)
                .verdict(count == 0, || json!({ "first_violations": violations }))
        }
    }
}

/// Category laws, functor laws of `Q_W` and `L_W`, the equivalence
/// transformations and both arrow round trips on random `(chi, T)` chains.
pub fn equivalence_checks(seed: u64, chains: usize) -> Outcome {
    const MAX_N: usize = 3;
    let classical = weyl_chain_samples::<LinClass>(derive_seed(seed, "classical"), chains, MAX_N, Fiber::Classical);
    let quantum = weyl_chain_samples::<LinQuant>(derive_seed(seed, "quantum"), chains, MAX_N, Fiber::Quantum);

    let mut spaces: Vec<&SymplecticSpace> = Vec::new();
    for a in classical.arrows.iter().chain(&quantum.arrows) {
        for s in [a.dom(), a.cod()] {
            if !spaces.contains(&s) {
                spaces.push(s);
            }
        }
    }
    let arrows = classical.arrows.len().min(quantum.arrows.len());
    let max_dim = spaces.iter().map(|s| s.dim()).max().unwrap_or(0);
    let coverage = CheckRecord::new("sample-coverage")
        .measure("arrows_per_category", arrows as f64)
        .measure("distinct_spaces", spaces.len() as f64)
        .measure("max_dim", max_dim as f64)
        .tolerance("min_arrows", 100.0)
        .tolerance("min_spaces", 10.0)
        .tolerance("max_dim", 6.0)
        .verdict(arrows >= 100 && spaces.len() >= 10 && max_dim <= 6, || {
            json!({ "arrows": arrows, "spaces": spaces.len(), "max_dim": max_dim })
        });

    let mut lq = Tally::new();
    for (i, a) in classical.arrows.iter().enumerate() {
        let back = QuantizationFunctor
            .map_arrow(a)
            .and_then(|q| ClassicalLimitFunctor.map_arrow(&q));
        lq.observe(back.as_ref() == Some(a), || json!({ "arrow": i, "morphism": format!("{a:?}") }));
    }
    let mut ql = Tally::new();
    for (i, a) in quantum.arrows.iter().enumerate() {
        let back = ClassicalLimitFunctor
            .map_arrow(a)
            .and_then(|c| QuantizationFunctor.map_arrow(&c));
        ql.observe(back.as_ref() == Some(a), || json!({ "arrow": i, "morphism": format!("{a:?}") }));
    }

    Outcome::from(vec![
        law_record("category-laws-classical", check_category_laws(&LinClass, &classical)),
        law_record("category-laws-quantum", check_category_laws(&LinQuant, &quantum)),
        law_record(
            "equivalence-eta-phi",
            check_equivalence(
                &LinClass,
                &LinQuant,
                &QuantizationFunctor,
                &ClassicalLimitFunctor,
                &EtaTransformation,
                &PhiTransformation,
                &classical,
                &quantum,
            ),
        ),
        law_record("functor-laws-L_W", check_functor_laws(&ClassicalLimitFunctor, &LinQuant, &LinClass, &quantum)),
        law_record("functor-laws-Q_W", check_functor_laws(&QuantizationFunctor, &LinClass, &LinQuant, &classical)),
        lq.into_record("round-trip-L-after-Q"),
        ql.into_record("round-trip-Q-after-L"),
        coverage,
    ])
}

/// `k0_membership` against a numeric limit: coefficient magnitudes are
/// evaluated at `hbar = 2^-k` down to `2^-20` and the limit is extrapolated
/// from the last two points.
pub fn k0_check(seed: u64, count: usize) -> CheckRecord {
    const THRESHOLD: f64 = 1e-9;
    const DEPTH: i32 = 20;
    let mut rng = seeded(seed);
    let mut tally = Tally::new();
    let mut members = 0usize;
    let mut member_limit: f64 = 0.0;
    let mut nonmember_limit = f64::INFINITY;
    for i in 0..count {
        let space = sample_space(&mut rng, i);
        let section = random_section(&mut rng, &space, 3);
        let magnitude = |k: i32| {
            section
                .evaluate_at(0.5_f64.powi(k))
                .terms()
                .fold(0.0_f64, |m, (_, c)| m.max(c.norm()))
        };
        let profile: Vec<f64> = (0..=DEPTH).map(magnitude).collect();
        let limit = (2.0 * profile[DEPTH as usize] - profile[DEPTH as usize - 1]).abs();
        let numeric = limit <= THRESHOLD;
        let exact = section.k0_membership();
        if exact {
            members += 1;
            member_limit = member_limit.max(limit);
        } else {
            nonmember_limit = nonmember_limit.min(limit);
        }
        tally.observe(numeric == exact, || {
            json!({ "sample": i, "section": doc(section.element()), "k0_membership": exact, "limit": limit, "profile": profile })
        });
    }
    let samples = tally.samples;
    tally
        .into_record("k0-membership")
        .measure("members", members as f64)
        .measure("nonmembers", (samples - members) as f64)
        .measure("max_member_limit", member_limit)
        .measure("min_nonmember_limit", if nonmember_limit.is_finite() { nonmember_limit } else { 0.0 })
        .tolerance("threshold", THRESHOLD)
        .tolerance("smallest_hbar", 0.5_f64.powi(DEPTH))
}

pub(crate) fn equivalence_jobs(config: &SuiteConfig) -> Vec<Job<'_>> {
    let seed = config.seed;
    let chains = config.samples.chains;
    let sections = config.samples.sections;
    vec![
        Box::new(move || equivalence_checks(derive_seed(seed, "equivalence"), chains)),
        Box::new(move || Outcome::check(k0_check(derive_seed(seed, "k0"), sections))),
    ]
}
