//! Numeric suites on the phase-space grid.

use num_complex::Complex64;
use quantaequiv_core::category::{check_category_laws, check_equivalence, check_functor_laws};
use quantaequiv_core::functors::Fiber;
use quantaequiv_core::rieffel::convergence::{convergence_study, ConvergenceTable};
use quantaequiv_core::rieffel::profiles::{gaussian, gaussian_star, window, windowed_coordinate};
use quantaequiv_core::rieffel::*;
use serde_json::json;

use super::weyl::law_record;
use super::{derive_seed, Job, Outcome};
use crate::report::{num, CheckRecord, Table};
use crate::SuiteConfig;

/// Centers `(x, p)` and widths of an axis-aligned Gaussian.
pub type Bump = ([f64; 2], [f64; 2]);

pub const BUMPS: [Bump; 3] = [
    ([0.5, -0.3], [1.0, 0.8]),
    ([-0.4, 0.6], [0.9, 1.1]),
    ([0.2, 0.1], [0.7, 0.9]),
];

/// The pairs used by the convergence and Weyl-transform checks.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

/// Narrow, separated bumps for the morphism checks; a dilation changes their
/// star product by a large relative amount.
pub const MORPHISM_PAIR: (Bump, Bump) = (([0.6, -0.3], [0.5, 0.5]), ([-0.6, 0.3], [0.5, 0.5]));

pub const DEFAULT_SCHEDULE: [f64; 4] = [0.4, 0.2, 0.1, 0.05];

pub fn rieffel_schedule(config: &SuiteConfig) -> Vec<f64> {
    config.schedule.clone().unwrap_or_else(|| DEFAULT_SCHEDULE.to_vec())
}

pub fn grid(config: &SuiteConfig) -> Result<Grid2n, RieffelError> {
    Grid2n::new(1, config.grid.points, config.grid.extent)
}

fn bump(grid: &Grid2n, b: Bump) -> GridFunction {
    gaussian(grid, &b.0, &b.1)
}

/// Trapezoid quadrature of the star product of two axis-aligned Gaussians.
/// It factors into two one-dimensional integrals, each over the Fourier
/// variable of one factor of `f`.
pub fn quadrature_star(f: Bump, g: Bump, hbar: f64, x: f64, p: f64) -> Complex64 {
    use std::f64::consts::PI;
    let ([a, c], [s, u]) = f;
    let ([d, b], [v, t]) = g;
    let ft = |w: f64, centre: f64, k: f64| {
        Complex64::from_polar(w / (2.0 * PI).sqrt() * (-0.5 * w * w * k * k).exp(), -k * centre)
    };
    let bell = |y: f64, centre: f64, w: f64| (-0.5 * ((y - centre) / w).powi(2)).exp();
    let integrate = |w: f64, integrand: &dyn Fn(f64) -> Complex64| {
        const STEPS: usize = 4000;
        let cutoff = 10.0 / w;
        let dk = 2.0 * cutoff / STEPS as f64;
        let sum: Complex64 = (0..=STEPS)
            .map(|i| {
                let k = -cutoff + i as f64 * dk;
                let weight = if i == 0 || i == STEPS { 0.5 } else { 1.0 };
                integrand(k) * weight
            })
            .sum();
        sum * dk
    };
    let i1 = integrate(s, &|k| ft(s, a, k) * Complex64::from_polar(1.0, k * x) * bell(p - 0.5 * hbar * k, b, t));
    let i2 = integrate(u, &|k| ft(u, c, k) * Complex64::from_polar(1.0, k * p) * bell(x + 0.5 * hbar * k, d, v));
    i1 * i2
}

/// Gaussian star Gaussian against the closed form on the whole grid and
/// against quadrature on a strided subset of points.
pub fn moyal_oracle(config: &SuiteConfig) -> CheckRecord {
    const TOL: f64 = 1e-6;
    const STRIDE: usize = 61;
    let id = "moyal-oracle";
    let (f_bump, g_bump) = (BUMPS[0], BUMPS[1]);
    let run = || -> Result<CheckRecord, RieffelError> {
        let grid = grid(config)?;
        let (f, g) = (bump(&grid, f_bump), bump(&grid, g_bump));
        let product = moyal_product(&f, &g, config.hbar)?;
        let closed = gaussian_star(&grid, (&f_bump.0, &f_bump.1), (&g_bump.0, &g_bump.1), config.hbar);
        let scale = closed.sup_norm();
        let rel_closed = product.sup_distance(&closed)? / scale;
        let mut quad_err: f64 = 0.0;
        let mut worst = 0usize;
        let mut points = 0usize;
        for idx in (0..grid.len()).step_by(STRIDE) {
            let z = grid.point(idx);
            let e = (product.samples()[idx] - quadrature_star(f_bump, g_bump, config.hbar, z[0], z[1])).norm();
            if e > quad_err {
                quad_err = e;
                worst = idx;
            }
            points += 1;
        }
        let rel_quad = quad_err / scale;
        Ok(CheckRecord::new(id)
            .measure("rel_sup_error_closed_form", rel_closed)
            .measure("rel_sup_error_quadrature", rel_quad)
            .measure("quadrature_points", points as f64)
            .measure("hbar", config.hbar)
            .measure("grid_points", config.grid.points as f64)
            .tolerance("rel_sup_error", TOL)
            .verdict(rel_closed <= TOL && rel_quad <= TOL, || {
                json!({ "worst_point": grid.point(worst)[..2].to_vec(), "rel_closed": rel_closed, "rel_quadrature": rel_quad })
            }))
    };
    run().unwrap_or_else(|e| CheckRecord::error(id, e))
}

fn convergence_table(id: String, t: &ConvergenceTable) -> Table {
    let mut table = Table::new(id, &["hbar", "defect", "slope_window"]);
    for r in &t.rows {
        table.push(vec![num(r.hbar), num(r.defect), r.slope_window.map(num).unwrap_or_default()]);
    }
    table
}

fn order_record(id: String, study: &ConvergenceTable, range: (f64, f64)) -> CheckRecord {
    let rec = CheckRecord::new(id)
        .tolerance("min_slope", range.0)
        .tolerance("max_slope", range.1);
    match study.fit {
        convergence::ConvergenceFit::Slope { slope, intercept, residual } => rec
            .measure("slope", slope)
            .measure("intercept", intercept)
            .measure("residual", residual)
            .verdict((range.0..=range.1).contains(&slope), || {
                json!({ "slope": slope, "defects": study.rows.iter().map(|r| r.defect).collect::<Vec<_>>() })
            }),
        convergence::ConvergenceFit::Saturated { max_defect } => {
            rec.measure("max_defect", max_defect).saturated()
        }
    }
}

/// Dirac and von Neumann defect orders for one Gaussian pair.
pub fn order_checks(config: &SuiteConfig, pair: usize) -> Outcome {
    let dirac_id = format!("dirac-order-pair-{pair}");
    let vn_id = format!("von-neumann-order-pair-{pair}");
    let run = || -> Result<Outcome, String> {
        let grid = grid(config).map_err(|e| e.to_string())?;
        let (i, j) = PAIRS[pair];
        let (f, g) = (bump(&grid, BUMPS[i]), bump(&grid, BUMPS[j]));
        let opts = MoyalOptions::default();
        let schedule = rieffel_schedule(config);
        let dirac = convergence_study(&schedule, |h| dirac_defect_grid(&f, &g, h, &opts))
            .map_err(|e| e.to_string())?;
        let vn = convergence_study(&schedule, |h| von_neumann_defect_grid(&f, &g, h, &opts))
            .map_err(|e| e.to_string())?;
        Ok(Outcome {
            checks: vec![
                order_record(dirac_id.clone(), &dirac, (1.8, 2.2)),
                order_record(vn_id.clone(), &vn, (0.8, 1.2)),
            ],
            tables: vec![
                convergence_table(format!("dirac-pair-{pair}"), &dirac),
                convergence_table(format!("von-neumann-pair-{pair}"), &vn),
            ],
        })
    };
    run().unwrap_or_else(|e| {
        Outcome::from(vec![CheckRecord::error(dirac_id, &e), CheckRecord::error(vn_id, &e)])
    })
}

pub(crate) fn sdq_jobs(config: &SuiteConfig) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job<'_>> = vec![Box::new(move || Outcome::check(moyal_oracle(config)))];
    for pair in 0..PAIRS.len() {
        jobs.push(Box::new(move || order_checks(config, pair)));
    }
    jobs
}

/// The maps of the morphism suite with the expected side of the threshold:
/// symplectic maps must stay below `1e-3`, the control must exceed `1e-1`.
pub fn morphism_maps() -> Vec<(String, AffineSymplecticMap, bool)> {
    let mut maps: Vec<(String, AffineSymplecticMap, bool)> = [0.3, 1.1, 2.5]
        .iter()
        .map(|&t| (format!("rotation-{t}"), AffineSymplecticMap::rotation(1, t), true))
        .collect();
    maps.push(("shear-position-0.5".into(), AffineSymplecticMap::position_shear(1, 0.5), true));
    maps.push(("shear-momentum-0.7".into(), AffineSymplecticMap::momentum_shear(1, 0.7), true));
    let diag = AffineSymplecticMap::unchecked(vec![vec![2.0, 0.0], vec![0.0, 2.0]], vec![0.0, 0.0])
        .expect("2x2 map");
    maps.push(("control-diag-2-2".into(), diag, false));
    maps
}

pub fn star_defect_check(config: &SuiteConfig, name: &str, phi: &AffineSymplecticMap, symplectic: bool) -> CheckRecord {
    const UPPER: f64 = 1e-3;
    const LOWER: f64 = 1e-1;
    let id = format!("star-defect-{name}");
    let run = || -> Result<f64, RieffelError> {
        let grid = grid(config)?;
        let (f, g) = (bump(&grid, MORPHISM_PAIR.0), bump(&grid, MORPHISM_PAIR.1));
        morphism_star_defect(phi, &f, &g, config.hbar, &MoyalOptions::default())
    };
    match run() {
        Err(e) => CheckRecord::error(id, e),
        Ok(d) => {
            let rec = CheckRecord::new(id)
                .measure("relative_defect", d)
                .measure("symplectic_residual", phi.symplectic_residual());
            if symplectic {
                rec.tolerance("max_relative_defect", UPPER)
                    .verdict(d <= UPPER, || json!({ "map": phi.linear(), "defect": d }))
            } else {
                rec.tolerance("min_relative_defect", LOWER)
                    .verdict(d >= LOWER, || json!({ "map": phi.linear(), "defect": d }))
            }
        }
    }
}

fn equivariance_check(config: &SuiteConfig, name: &str, phi: AffineSymplecticMap, x: [f64; 2], tol: f64) -> CheckRecord {
    let id = format!("equivariance-{name}");
    let run = || -> Result<f64, RieffelError> {
        let grid = grid(config)?;
        equivariance_defect(&phi, &bump(&grid, BUMPS[0]), &x, &MoyalOptions::default())
    };
    match run() {
        Err(e) => CheckRecord::error(id, e),
        Ok(d) => CheckRecord::new(id)
            .measure("sup_defect", d)
            .tolerance("sup_defect", tol)
            .verdict(d <= tol, || json!({ "map": phi.linear(), "direction": x, "defect": d })),
    }
}

/// Category, functor and equivalence laws for the affine symplectic categories.
pub fn rieffel_category_checks(seed: u64, chains: usize) -> Outcome {
    let classical = rieffel_chain_samples::<RClass>(derive_seed(seed, "rclass"), chains, 3, Fiber::Classical);
    let quantum = rieffel_chain_samples::<RQuant>(derive_seed(seed, "rquant"), chains, 3, Fiber::Quantum);
    Outcome::from(vec![
        law_record("rieffel-category-laws-classical", check_category_laws(&RClass, &classical)),
        law_record("rieffel-category-laws-quantum", check_category_laws(&RQuant, &quantum)),
        law_record(
            "rieffel-equivalence",
            check_equivalence(
                &RClass,
                &RQuant,
                &RieffelQuantizationFunctor,
                &RieffelLimitFunctor,
                &RieffelEta,
                &RieffelPhi,
                &classical,
                &quantum,
            ),
        ),
        law_record("rieffel-functor-laws-L_R", check_functor_laws(&RieffelLimitFunctor, &RQuant, &RClass, &quantum)),
        law_record("rieffel-functor-laws-Q_R", check_functor_laws(&RieffelQuantizationFunctor, &RClass, &RQuant, &classical)),
    ])
}

pub(crate) fn morphism_jobs(config: &SuiteConfig) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job<'_>> = Vec::new();
    for (name, phi, symplectic) in morphism_maps() {
        jobs.push(Box::new(move || Outcome::check(star_defect_check(config, &name, &phi, symplectic))));
    }
    jobs.push(Box::new(move || {
        Outcome::from(vec![
            equivariance_check(config, "translation", AffineSymplecticMap::translation(vec![0.4, -0.3]), [0.3, 0.8], 1e-10),
            equivariance_check(config, "rotation", AffineSymplecticMap::rotation(1, 0.9), [1.0, 0.0], 1e-8),
        ])
    }));
    let seed = config.seed;
    let chains = config.samples.chains;
    jobs.push(Box::new(move || rieffel_category_checks(seed, chains)));
    jobs
}

/// One row per map, read back from the star-defect checks.
pub(crate) fn star_defect_table(outcome: &mut Outcome) {
    let mut table = Table::new("star-defects", &["map", "relative_defect"]);
    for c in &outcome.checks {
        if let (Some(name), Some(d)) = (c.id.strip_prefix("star-defect-"), c.measured.get("relative_defect")) {
            table.push(vec![name.to_string(), num(*d)]);
        }
    }
    outcome.tables.push(table);
}

/// Weyl-transform residuals of one Gaussian pair over the configured
/// truncation dimensions.
pub fn transform_check(config: &SuiteConfig, pair: usize) -> Outcome {
    const TOL: f64 = 1e-3;
    const REFERENCE_DIM: usize = 64;
    let id = format!("homomorphism-residual-pair-{pair}");
    let run = || -> Result<Outcome, RieffelError> {
        let grid = grid(config)?;
        let (i, j) = PAIRS[pair];
        let (f, g) = (bump(&grid, BUMPS[i]), bump(&grid, BUMPS[j]));
        let opts = MoyalOptions::default();
        let mut table = Table::new(format!("residuals-pair-{pair}"), &["dim", "residual"]);
        let mut residuals = Vec::new();
        for &dim in &config.dims {
            let r = homomorphism_residual(&f, &g, config.hbar, dim, &opts)?;
            table.push(vec![dim.to_string(), num(r)]);
            residuals.push(r);
        }
        let monotone = residuals.windows(2).all(|w| w[1] < w[0]);
        let reference = config
            .dims
            .iter()
            .position(|&d| d == REFERENCE_DIM)
            .unwrap_or(config.dims.len() - 1);
        let mut rec = CheckRecord::new(&id)
            .measure("reference_dim", config.dims[reference] as f64)
            .measure("reference_residual", residuals[reference])
            .measure("monotone", if monotone { 1.0 } else { 0.0 })
            .tolerance("reference_residual", TOL);
        for (d, r) in config.dims.iter().zip(&residuals) {
            rec = rec.measure(&format!("residual_{d}"), *r);
        }
        let ok = residuals[reference] <= TOL && monotone;
        let rec = rec.verdict(ok, || json!({ "dims": config.dims, "residuals": residuals }));
        Ok(Outcome {
            checks: vec![rec],
            tables: vec![table],
        })
    };
    run().unwrap_or_else(|e| Outcome::check(CheckRecord::error(id, e)))
}

/// The unit window and the windowed coordinates map to `I`, `Q` and `P`.
pub fn transform_generators(config: &SuiteConfig) -> CheckRecord {
    const TOL: f64 = 1e-6;
    let id = "weyl-transform-generators";
    let run = || -> Result<CheckRecord, RieffelError> {
        let grid = grid(config)?;
        let dim = config.dims[0];
        let half = 0.35 * grid.extent();
        let edge = 0.025 * grid.extent();
        let no_trace = WeylTransformOptions {
            trace_tolerance: None,
            ..WeylTransformOptions::default()
        };
        let unit = weyl_transform_with(&window(&grid, half, edge), config.hbar, dim, &no_trace)?
            .sub(&WeylMatrix::identity(dim))
            .max_abs();
        let q = weyl_transform(&windowed_coordinate(&grid, 0, half, edge), config.hbar, dim)?
            .sub(&position_matrix(dim, config.hbar))
            .max_abs();
        let p = weyl_transform(&windowed_coordinate(&grid, 1, half, edge), config.hbar, dim)?
            .sub(&momentum_matrix(dim, config.hbar))
            .max_abs();
        Ok(CheckRecord::new(id)
            .measure("unit_max_abs_error", unit)
            .measure("position_max_abs_error", q)
            .measure("momentum_max_abs_error", p)
            .tolerance("max_abs_error", TOL)
            .verdict(unit.max(q).max(p) <= TOL, || json!({ "unit": unit, "position": q, "momentum": p })))
    };
    run().unwrap_or_else(|e| CheckRecord::error(id, e))
}

pub(crate) fn transform_jobs(config: &SuiteConfig) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job<'_>> = vec![Box::new(move || Outcome::check(transform_generators(config)))];
    for pair in 0..PAIRS.len() {
        jobs.push(Box::new(move || transform_check(config, pair)));
    }
    jobs
}
