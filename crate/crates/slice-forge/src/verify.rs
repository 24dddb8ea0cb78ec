//! Randomized verification suites behind the `verify` command. Each suite is
//! seeded, deterministic, and reports per-check worst-case errors against
//! pinned tolerances. Checks fall in two classes: algebraic identities
//! (1e-9..1e-12) and finite-difference quantities (step-squared scale).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::algebra::{decompose, CPoint, Quaternion, Unit};
use crate::domains::builtin;
use crate::error::{Error, Result};
use crate::extension::{
    dbar_residual, differential_check, extend_global, rep_formula, spherical_data_formula,
    stem_double_index, stem_single_index, DEFAULT_CAP_TOL,
};
use crate::planar::Grid;
use crate::report::{CheckResult, VerifyReport};
use crate::slicefun::{
    series_eval, series_sphere_coeffs, spherical_data_raw, DomainDescriptor, SliceFunctionHandle,
    StemFunction,
};

pub fn random_quaternion(rng: &mut ChaCha8Rng, scale: f64) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> Unit {
    loop {
        let v = Quaternion::new(
            0.0,
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.abs();
        if n > 1e-3 {
            return Unit::new(v * (1.0 / n)).unwrap();
        }
    }
}

pub fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> Vec<Quaternion> {
    let degree = rng.gen_range(1..=max_degree);
    (0..=degree).map(|_| random_quaternion(rng, 1.0)).collect()
}

/// Two random units separated by at least the given chordal gap.
pub fn random_unit_pair(rng: &mut ChaCha8Rng, min_gap: f64) -> (Unit, Unit) {
    loop {
        let j = random_unit(rng);
        let k = random_unit(rng);
        if (j.quaternion() - k.quaternion()).abs() >= min_gap {
            return (j, k);
        }
    }
}

fn rel_err(delta: f64, scale: f64) -> f64 {
    delta / scale.max(1.0)
}

/// Representation exactness on balls: the two-unit formula against direct
/// evaluation for random polynomials.
pub fn suite_rep(seed: u64, polys: usize, points_per_poly: usize) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_err = 0.0f64;
    let mut samples = 0;
    for _ in 0..polys {
        let coeffs = random_poly(&mut rng, 8);
        for _ in 0..points_per_poly {
            let alpha = rng.gen_range(-2.0..2.0);
            let beta = rng.gen_range(0.0..2.0);
            let i = random_unit(&mut rng);
            let (j, k) = random_unit_pair(&mut rng, 0.1);
            let z = CPoint::new(alpha, beta);
            let fj = series_eval(&coeffs, j.phi(z), f64::INFINITY).unwrap();
            let fk = series_eval(&coeffs, k.phi(z), f64::INFINITY).unwrap();
            let via = rep_formula(fj, fk, j, k, i).unwrap();
            let direct = series_eval(&coeffs, i.phi(z), f64::INFINITY).unwrap();
            max_err = max_err.max(rel_err((via - direct).abs(), direct.abs()));
            samples += 1;
        }
    }
    VerifyReport::new(
        "rep",
        seed,
        vec![CheckResult::new(
            "two-unit representation vs direct evaluation",
            samples,
            max_err,
            1e-9,
        )],
    )
}

/// Stem checks: symmetry of the two-unit samples, agreement of the sphere
/// coefficients with the two-unit form, pair-independence on core samples of
/// the built-ins, cap agreement of the single-index limit, and the expected
/// cap disagreement of a non-slice function.
pub fn suite_stem(seed: u64, cases: usize) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // symmetry of the two-unit samples, exact by construction
    let mut max_sym = 0.0f64;
    for _ in 0..cases {
        let f = SliceFunctionHandle::polynomial(random_poly(&mut rng, 6));
        let (j, k) = random_unit_pair(&mut rng, 0.1);
        let z = CPoint::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let lhs = stem_double_index(&f, j, k, z.conj()).unwrap();
        let rhs = stem_double_index(&f, j, k, z).unwrap().bar();
        max_sym = max_sym.max((lhs - rhs).abs());
    }
    checks.push(CheckResult::new(
        "stem symmetry of two-unit samples",
        cases,
        max_sym,
        0.0,
    ));

    // sphere-coefficient recurrence vs the two-unit form
    let mut max_bc = 0.0f64;
    for _ in 0..cases {
        let coeffs = random_poly(&mut rng, 8);
        let alpha = rng.gen_range(-1.5..1.5);
        let beta = rng.gen_range(0.0..1.5);
        let (j, k) = random_unit_pair(&mut rng, 1e-3);
        let (b, c) = series_sphere_coeffs(&coeffs, alpha, beta, f64::INFINITY).unwrap();
        let f = SliceFunctionHandle::polynomial(coeffs);
        let v = stem_double_index(&f, j, k, CPoint::new(alpha, beta)).unwrap();
        let scale = b.abs().max(c.abs());
        max_bc = max_bc.max(rel_err((v.p - b).abs().max((v.q - c).abs()), scale));
    }
    checks.push(CheckResult::new(
        "sphere coefficients vs two-unit form",
        cases,
        max_bc,
        1e-10,
    ));

    // pair-independence on spine samples of the built-ins
    let grid = Grid::standard();
    let mut max_spine = 0.0f64;
    let mut spine_samples = 0;
    for name in ["omega0", "omega2", "omega3p"] {
        let dom = builtin(name, grid, 65).unwrap();
        let (spine, _) = dom.spine_core();
        let f = SliceFunctionHandle::polynomial(random_poly(&mut rng, 6))
            .restrict(DomainDescriptor::Axial(dom.clone()));
        let cells: Vec<usize> = spine.iter_cells().collect();
        for _ in 0..16 {
            if cells.is_empty() {
                break;
            }
            let idx = cells[rng.gen_range(0..cells.len())];
            let (a, b) = grid.center_of(idx);
            let z = CPoint::new(a, b);
            let (j, k) = random_unit_pair(&mut rng, 0.3);
            let (j2, k2) = random_unit_pair(&mut rng, 0.3);
            let v1 = stem_double_index(&f, j, k, z).unwrap();
            let v2 = stem_double_index(&f, j2, k2, z).unwrap();
            max_spine = max_spine.max((v1 - v2).abs());
            spine_samples += 1;
        }
    }
    checks.push(CheckResult::new(
        "pair-independence on spine samples",
        spine_samples,
        max_spine,
        1e-10,
    ));

    // cap agreement on series backends
    let mut max_cap = 0.0f64;
    for _ in 0..cases.min(50) {
        let f = SliceFunctionHandle::polynomial(random_poly(&mut rng, 6));
        let j = random_unit(&mut rng);
        let z = CPoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.1..1.0));
        let r = stem_single_index(&f, j, z, 0.05, DEFAULT_CAP_TOL).unwrap();
        max_cap = max_cap.max(r.cap_spread);
    }
    checks.push(CheckResult::new(
        "cap agreement of the single-index limit",
        cases.min(50),
        max_cap,
        1e-10,
    ));

    // a slice regular function that is not a slice function must disagree
    let i0 = Unit::i();
    let indicator = SliceFunctionHandle::pointwise(
        Arc::new(move |x: Quaternion| {
            let d = decompose(x);
            if d.unit.quaternion().dot(i0.quaternion()).abs() > 1.0 - 1e-12 {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            }
        }),
        DomainDescriptor::NonReal,
    );
    let observed = match stem_single_index(&indicator, i0, CPoint::new(0.5, 1.0), 0.05, 1e-8) {
        Err(Error::CapDisagreement { spread, .. }) => spread,
        Ok(r) => r.cap_spread,
        Err(_) => 0.0,
    };
    checks.push(CheckResult::expecting_failure(
        "single-slice indicator triggers cap disagreement",
        1,
        observed,
        1e-2,
    ));

    VerifyReport::new("stem", seed, checks)
}

/// Spherical data checks: the decomposition identity, the agreement of the
/// two-unit form with the antipodal form, and constancy along sphere
/// components.
pub fn suite_spherical(seed: u64, cases: usize) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let mut max_dec = 0.0f64;
    let mut max_agree = 0.0f64;
    for _ in 0..cases {
        let f = SliceFunctionHandle::polynomial(random_poly(&mut rng, 8));
        let x = random_quaternion(&mut rng, 1.5);
        if x.im().abs() < 1e-3 {
            continue;
        }
        let fx = f.eval(x).unwrap();
        let formula = spherical_data_formula(&f, x).unwrap();
        let raw = spherical_data_raw(&f, x).unwrap();
        let rebuilt = formula.value + x.im() * formula.derivative.unwrap();
        max_dec = max_dec.max(rel_err((fx - rebuilt).abs(), fx.abs()));
        max_agree = max_agree.max(
            (formula.value - raw.value)
                .abs()
                .max((formula.derivative.unwrap() - raw.derivative.unwrap()).abs()),
        );
    }
    checks.push(CheckResult::new(
        "value + Im * derivative rebuilds f",
        cases,
        max_dec,
        1e-12,
    ));
    checks.push(CheckResult::new(
        "two-unit form matches antipodal form",
        cases,
        max_agree,
        1e-11,
    ));

    // constancy along sphere components of a built-in, probed with freshly
    // drawn unit pairs inside one latitude run
    let grid = Grid::standard();
    let dom = builtin("omega1", grid, 65).unwrap();
    let (max_const, const_samples) = sphere_component_constancy(&mut rng, &dom, 32);
    checks.push(CheckResult::new(
        "spherical data constant on sphere components",
        const_samples,
        max_const,
        1e-10,
    ));

    VerifyReport::new("spherical", seed, checks)
}

/// Probes the two-unit spherical data with varying unit pairs drawn from one
/// latitude run of a trace cell; returns the worst relative disagreement and
/// the number of comparisons.
pub fn sphere_component_constancy(
    rng: &mut ChaCha8Rng,
    dom: &crate::domains::AxialDomain,
    tries: usize,
) -> (f64, usize) {
    let coeffs = random_poly(rng, 6);
    let mut max_const = 0.0f64;
    let mut samples = 0;
    for _ in 0..tries {
        let a = rng.gen_range(-0.9..2.9);
        let b = rng.gen_range(0.2..3.9);
        // maximal run of sampled latitudes carrying the cell
        let mut runs: Vec<Vec<f64>> = Vec::new();
        let mut open = false;
        for (li, &r) in dom.latitudes().iter().enumerate() {
            if dom.region_at(li).contains_point(a, b) {
                if !open {
                    runs.push(Vec::new());
                    open = true;
                }
                runs.last_mut().unwrap().push(r);
            } else {
                open = false;
            }
        }
        let Some(run) = runs.into_iter().find(|r| r.len() >= 3) else {
            continue;
        };
        let z = CPoint::new(a, b);
        let draw_pair = |rng: &mut ChaCha8Rng| loop {
            let r1 = run[rng.gen_range(0..run.len())];
            let r2 = run[rng.gen_range(0..run.len())];
            let j = Unit::on_latitude(r1, rng.gen_range(0.0..std::f64::consts::TAU));
            let k = Unit::on_latitude(r2, rng.gen_range(0.0..std::f64::consts::TAU));
            if (j.quaternion() - k.quaternion()).abs() > 0.2 {
                return (j, k);
            }
        };
        let data = |j: Unit, k: Unit| {
            let fj = series_eval(&coeffs, j.phi(z), f64::INFINITY).unwrap();
            let fk = series_eval(&coeffs, k.phi(z), f64::INFINITY).unwrap();
            let inv = (j.quaternion() - k.quaternion()).inverse().unwrap();
            let value = inv * (j.quaternion() * fj - k.quaternion() * fk);
            let derivative = inv * (fj - fk) * (1.0 / b);
            (value, derivative)
        };
        let (j0, k0) = draw_pair(rng);
        let (v0, d0) = data(j0, k0);
        for _ in 0..4 {
            let (j, k) = draw_pair(rng);
            let (v, d) = data(j, k);
            max_const = max_const.max(rel_err((v - v0).abs(), v0.abs()));
            max_const = max_const.max(rel_err((d - d0).abs(), d0.abs()));
            samples += 1;
        }
    }
    (max_const, samples)
}

/// Holomorphy residual checks: second-order decay for series backends, the
/// expected unit residual of the conjugation map, and machine-level residual
/// of constants.
pub fn suite_dbar(seed: u64, cases: usize) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let mut worst_order: f64 = 2.0;
    let mut used = 0;
    while used < cases {
        let mut coeffs = random_poly(&mut rng, 8);
        while coeffs.len() < 6 {
            coeffs.push(random_quaternion(&mut rng, 1.0));
        }
        let i = random_unit(&mut rng);
        let z = CPoint::new(rng.gen_range(-0.9..0.9), rng.gen_range(0.2..0.9));
        // keep the truncation term well above rounding noise: the residual of
        // a regular series is h^2/6 times the third slice derivative
        let third: Vec<Quaternion> = coeffs
            .iter()
            .enumerate()
            .skip(3)
            .map(|(n, &a)| a * ((n * (n - 1) * (n - 2)) as f64))
            .collect();
        let f3 = series_eval(&third, i.phi(z), f64::INFINITY).unwrap();
        if f3.abs() < 50.0 {
            continue;
        }
        let f = SliceFunctionHandle::polynomial(coeffs);
        let r1 = dbar_residual(&f, i, z, 1e-4).unwrap();
        let r2 = dbar_residual(&f, i, z, 5e-5).unwrap();
        let order = (r1 / r2).log2();
        if (order - 2.0).abs() > (worst_order - 2.0).abs() {
            worst_order = order;
        }
        used += 1;
    }
    checks.push(CheckResult::new(
        "residual decay order within 2 +- 0.3",
        used,
        (worst_order - 2.0).abs(),
        0.3,
    ));

    let conj = SliceFunctionHandle::pointwise(
        Arc::new(|x: Quaternion| x.conj()),
        DomainDescriptor::All,
    );
    let r = dbar_residual(&conj, Unit::i(), CPoint::new(0.0, 1.0), 1e-5).unwrap();
    checks.push(CheckResult::expecting_failure(
        "conjugation map keeps unit residual",
        1,
        r,
        0.9,
    ));

    let c = SliceFunctionHandle::polynomial(vec![random_quaternion(&mut rng, 2.0)]);
    let r = dbar_residual(&c, Unit::j(), CPoint::new(0.3, 0.8), 1e-5).unwrap();
    checks.push(CheckResult::new("constant residual", 1, r, 1e-13));

    VerifyReport::new("dbar", seed, checks)
}

/// Differential checks at real and nonreal points, with the direction split
/// into the slice plane and its orthogonal complement at nonreal points. The
/// step keeps both the truncation and the rounding of the difference
/// quotient inside the 10 h^2 budget.
pub fn suite_differential(seed: u64, cases: usize) -> VerifyReport {
    let h = 1e-4;
    let tol = 10.0 * h * h;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let mut max_real = 0.0f64;
    for _ in 0..cases {
        let f = SliceFunctionHandle::polynomial(normalized_poly(&mut rng));
        let x0 = Quaternion::scalar(rng.gen_range(-1.0..1.0));
        let v = random_direction(&mut rng);
        let r = differential_check(&f, x0, v, h).unwrap();
        max_real = max_real.max(r.err);
    }
    checks.push(CheckResult::new(
        "difference quotient vs v f'_c at real points",
        cases,
        max_real,
        tol,
    ));

    let mut max_split = 0.0f64;
    for _ in 0..cases {
        let f = SliceFunctionHandle::polynomial(normalized_poly(&mut rng));
        let x0 = loop {
            let x = random_quaternion(&mut rng, 1.0);
            if x.im().abs() > 0.2 {
                break x;
            }
        };
        let v = random_direction(&mut rng);
        let r = differential_check(&f, x0, v, h).unwrap();
        max_split = max_split.max(r.err);
    }
    checks.push(CheckResult::new(
        "split differential at nonreal points",
        cases,
        max_split,
        tol,
    ));

    VerifyReport::new("differential", seed, checks)
}

fn random_direction(rng: &mut ChaCha8Rng) -> Quaternion {
    loop {
        let v = random_quaternion(rng, 1.0);
        if v.abs() > 0.1 {
            return v * (1.0 / v.abs());
        }
    }
}

/// A random polynomial rescaled so its third directional derivative stays
/// small on the unit-scale sample window, keeping the central-difference
/// truncation inside the pinned budget.
pub fn normalized_poly(rng: &mut ChaCha8Rng) -> Vec<Quaternion> {
    let coeffs = random_poly(rng, 8);
    let bound: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| {
            let fall = if n >= 3 {
                (n * (n - 1) * (n - 2)) as f64
            } else {
                0.0
            };
            fall * a.abs() * 1.3f64.powi(n.saturating_sub(3) as i32)
        })
        .sum();
    if bound <= 30.0 {
        return coeffs;
    }
    let s = 30.0 / bound;
    coeffs.into_iter().map(|a| a * s).collect()
}

/// The extension oracle used by the acceptance suite: random polynomials on
/// an axial domain evaluated through the extension at completion points.
pub fn extension_oracle_errors(
    seed: u64,
    domain_name: &str,
    polys: usize,
    points: usize,
) -> Result<(f64, f64)> {
    let grid = Grid::standard();
    let dom = builtin(domain_name, grid, crate::domains::DEFAULT_N_LAT)?;
    let completion = dom.symmetric_completion_region();
    let cells: Vec<usize> = completion.iter_cells().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_err = 0.0f64;
    let mut max_spread = 0.0f64;
    for _ in 0..polys {
        let coeffs = random_poly(&mut rng, 8);
        let f = SliceFunctionHandle::polynomial(coeffs.clone())
            .restrict(DomainDescriptor::Axial(dom.clone()));
        let mut found = 0;
        let mut attempts = 0;
        while found < points / polys + 1 && attempts < 4000 {
            attempts += 1;
            let idx = cells[rng.gen_range(0..cells.len())];
            let (a, b) = grid.center_of(idx);
            let i = random_unit(&mut rng);
            let x = i.phi(CPoint::new(a, b));
            if dom.contains(x) {
                continue; // want completion points outside the domain
            }
            let ext = extend_global(&f, x, 1e-9)?;
            let direct = series_eval(&coeffs, x, f64::INFINITY).unwrap();
            max_err = max_err.max(rel_err((ext.value - direct).abs(), direct.abs()));
            max_spread = max_spread.max(ext.consistency_spread);
            found += 1;
        }
    }
    Ok((max_err, max_spread))
}

/// Builds the series stem of a polynomial (used as the analytic oracle).
pub fn series_stem(coeffs: &[Quaternion]) -> StemFunction {
    StemFunction::from_series(coeffs, f64::INFINITY)
}
