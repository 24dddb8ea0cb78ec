//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use slice_forge::algebra::{CPoint, Quaternion, Unit};
use slice_forge::cli::{run_chain, run_table1, RunConfig};
use slice_forge::domains::{builtin, BUILTIN_NAMES, DEFAULT_N_LAT};
use slice_forge::extension::{
    dbar_residual, differential_check, extend_global, rep_formula, spherical_data_formula,
};
use slice_forge::hinge::{
    hinge_closure, hinge_closure_with, is_spear_simple, validate_chain, ClosureOptions, Witness,
};
use slice_forge::planar::{rasterize, Grid, RegionSpec};
use slice_forge::slicefun::{
    series_eval, series_sphere_coeffs, DomainDescriptor, SliceFunctionHandle,
};
use slice_forge::verify;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn report(n: usize, name: &str, pass: bool) {
    println!(
        "ACCEPTANCE {n:2} {name}: {}",
        if pass { "pass" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion {n} ({name}) failed");
}

fn rel(delta: f64, scale: f64) -> f64 {
    delta / scale.max(1.0)
}

/// 1. The classification table of the eight built-ins reproduces the
/// reference verdicts exactly at h = 1/16, n_lat = 129.
#[test]
fn acceptance_01_table_reproduction() {
    let start = std::time::Instant::now();
    let cfg = RunConfig {
        out: Some(std::env::temp_dir().join("sliceforge-acceptance-table1.json")),
        ..RunConfig::default()
    };
    let table = run_table1(&cfg).expect("table run");
    assert_eq!(table.resolution.h, 1.0 / 16.0);
    assert_eq!(table.resolution.n_lat, 129);
    assert_eq!(table.rows.len(), 8);
    println!(
        "   table computed in {:.1}s (budget 300s); mismatches: {:?}",
        start.elapsed().as_secs_f64(),
        table.mismatches
    );
    let within_budget = start.elapsed().as_secs_f64() <= 300.0;
    report(
        1,
        "all 32 table cells match",
        table.golden_match && within_budget,
    );
}

/// 2. The two-unit representation formula against direct evaluation: 100
/// random polynomials of degree <= 8, 50 random tuples each with beta >= 0
/// and |J - K| >= 0.1, relative error <= 1e-9.
#[test]
fn acceptance_02_representation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let coeffs = verify::random_poly(&mut rng, 8);
        for _ in 0..50 {
            let z = CPoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.0..2.0));
            let i = verify::random_unit(&mut rng);
            let (j, k) = verify::random_unit_pair(&mut rng, 0.1);
            let fj = series_eval(&coeffs, j.phi(z), f64::INFINITY).unwrap();
            let fk = series_eval(&coeffs, k.phi(z), f64::INFINITY).unwrap();
            let via = rep_formula(fj, fk, j, k, i).unwrap();
            let direct = series_eval(&coeffs, i.phi(z), f64::INFINITY).unwrap();
            worst = worst.max(rel((via - direct).abs(), direct.abs()));
        }
    }
    println!("   worst relative error {worst:.3e} (tolerance 1e-9)");
    report(2, "representation formula oracle", worst <= 1e-9);
}

/// 3. Global extension on the tent domain: 20 random polynomials at 200
/// completion points outside the domain match direct evaluation to 1e-9
/// relative with consistency spread <= 1e-9; the square at 1 + 3.5k gives
/// -11.25 + 7k to 1e-10.
#[test]
fn acceptance_03_extension_oracle() {
    let (max_err, max_spread) = verify::extension_oracle_errors(30, "omega0", 20, 200).unwrap();
    println!("   worst relative error {max_err:.3e}, worst spread {max_spread:.3e}");

    let dom = builtin("omega0", Grid::standard(), DEFAULT_N_LAT).unwrap();
    let sq = SliceFunctionHandle::monomial(2).restrict(DomainDescriptor::Axial(dom.clone()));
    let x = Quaternion::new(1.0, 0.0, 0.0, 3.5);
    assert!(!dom.contains(x), "1 + 3.5k must lie outside the domain");
    let ext = extend_global(&sq, x, 1e-9).unwrap();
    let exact = Quaternion::new(-11.25, 0.0, 0.0, 7.0);
    let case_err = (ext.value - exact).abs();
    println!("   square at 1 + 3.5k: error {case_err:.3e} (tolerance 1e-10)");
    report(
        3,
        "global extension oracle",
        max_err <= 1e-9 && max_spread <= 1e-9 && case_err <= 1e-10,
    );
}

/// 4. Spherical decomposition f = value + Im * derivative at 1000 random
/// points across the built-ins to 1e-12 relative; spherical data constant
/// along sphere components to 1e-10.
#[test]
fn acceptance_04_spherical_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let grid = Grid::standard();
    let mut worst = 0.0f64;
    let mut count = 0;
    'outer: for name in BUILTIN_NAMES.iter().cycle() {
        let dom = builtin(name, grid, 65).unwrap();
        let coeffs = verify::random_poly(&mut rng, 8);
        let f = SliceFunctionHandle::polynomial(coeffs)
            .restrict(DomainDescriptor::Axial(dom.clone()));
        for _ in 0..125 {
            // a random point of the domain: random sampled latitude, random
            // marked cell, random azimuth
            let li = rng.gen_range(0..dom.latitudes().len());
            let region = dom.region_at(li);
            let cells: Vec<usize> = region.iter_cells().collect();
            if cells.is_empty() {
                continue;
            }
            let idx = cells[rng.gen_range(0..cells.len())];
            let (a, b) = grid.center_of(idx);
            let u = Unit::on_latitude(dom.latitudes()[li], rng.gen_range(0.0..std::f64::consts::TAU));
            let x = u.phi(CPoint::new(a, b));
            let fx = f.eval(x).unwrap();
            let data = spherical_data_formula(&f, x).unwrap();
            let rebuilt = data.value + x.im() * data.derivative.unwrap();
            worst = worst.max(rel((fx - rebuilt).abs(), fx.abs()));
            count += 1;
            if count >= 1000 {
                break 'outer;
            }
        }
    }
    println!("   decomposition worst relative error {worst:.3e} over {count} points");

    let mut worst_const = 0.0f64;
    let mut const_samples = 0;
    for name in ["omega0", "omega1", "omega3p"] {
        let dom = builtin(name, grid, 65).unwrap();
        let (w, n) = verify::sphere_component_constancy(&mut rng, &dom, 24);
        worst_const = worst_const.max(w);
        const_samples += n;
    }
    println!("   constancy worst relative error {worst_const:.3e} over {const_samples} pairs");
    report(
        4,
        "spherical decomposition and constancy",
        worst <= 1e-12 && worst_const <= 1e-10,
    );
}

/// 5. Double-step necessity on the double-sail domain: without the transfer
/// rule the two sail bands stay distinct at 1 + 5 imath; the full closure
/// merges them; the emitted chain certificate contains exactly one double
/// step and re-validates.
#[test]
fn acceptance_05_double_step_necessity() {
    let dom = builtin("omega3p", Grid::standard(), DEFAULT_N_LAT).unwrap();
    let z = CPoint::new(1.0, 5.0);

    let restricted = hinge_closure_with(
        &dom,
        ClosureOptions {
            enable_transfer: false,
            pair_order_seed: None,
        },
    )
    .unwrap();
    let split = !restricted
        .same_class(dom.grid(), z, -SQRT_HALF, SQRT_HALF)
        .unwrap();

    let full = hinge_closure(&dom).unwrap();
    let joined = full.same_class(dom.grid(), z, -SQRT_HALF, SQRT_HALF).unwrap();

    let half = 5.0 * SQRT_HALF;
    let cfg = RunConfig {
        domain: Some("omega3p".into()),
        out: Some(std::env::temp_dir().join("sliceforge-acceptance-chain.json")),
        ..RunConfig::default()
    };
    let chain = run_chain(&cfg, [1.0, 0.0, -half, -half], [1.0, 0.0, half, half]).unwrap();
    let cert = chain.certificate.expect("equivalent points");
    let doubles = cert.double_step_count();
    println!(
        "   transfer-off split: {split}; full closure joined: {joined}; double steps: {doubles}"
    );
    validate_chain(&dom, &cert).unwrap();
    report(
        5,
        "double step necessity and certificate",
        split && joined && chain.equivalent && doubles == 1,
    );
}

/// 6. The plateau domain fails spear-simplicity with the floating box
/// (2 sqrt 2 - 2, 4 - 2 sqrt 2) x (3, 4) as witness, within one cell per
/// coordinate.
#[test]
fn acceptance_06_spear_simple_witness() {
    let grid = Grid::standard();
    let dom = builtin("omega2", grid, DEFAULT_N_LAT).unwrap();
    let (simple, witness) = is_spear_simple(&dom).unwrap();
    let expected = [
        2.0 * 2f64.sqrt() - 2.0,
        4.0 - 2.0 * 2f64.sqrt(),
        3.0,
        4.0,
    ];
    let mut ok = !simple;
    match witness {
        Some(Witness::SpearSimple {
            component_bbox, r, r2,
        }) => {
            println!(
                "   witness at latitudes ({r:.4}, {r2:.4}), bbox {component_bbox:?} vs {expected:?}"
            );
            for c in 0..4 {
                ok &= (component_bbox[c] - expected[c]).abs() <= grid.h + 1e-12;
            }
        }
        other => {
            println!("   unexpected witness {other:?}");
            ok = false;
        }
    }
    report(6, "spear-simple witness box", ok);
}

/// 7. Spine and core of the base family: the spine is the pair of half-disks
/// of radius 1/2 at -1/2 and 5/2, the core is the pair of rectangles, each
/// within one-cell Hausdorff distance of the analytic sets.
#[test]
fn acceptance_07_spine_core_geometry() {
    let grid = Grid::standard();
    let h = grid.h;
    let analytic_dist = |a: f64, b: f64| -> f64 {
        let d1 = ((a + 0.5) * (a + 0.5) + b * b).sqrt();
        let d2 = ((a - 2.5) * (a - 2.5) + b * b).sqrt();
        d1.min(d2) - 0.5 // signed: negative inside the disk pair
    };
    let rect_region = rasterize(
        &RegionSpec::Rects(vec![[-1.0, 0.0, -1.0, 4.0], [2.0, 3.0, -1.0, 4.0]]),
        grid,
    )
    .unwrap();
    let mut ok = true;
    for name in BUILTIN_NAMES {
        let dom = builtin(name, grid, DEFAULT_N_LAT).unwrap();
        let (spine, core) = dom.spine_core();
        ok &= core == rect_region;
        // every spine cell is within one cell of the disk pair, and every
        // deep interior disk point is covered
        for idx in spine.iter_cells() {
            let (a, b) = grid.center_of(idx);
            ok &= analytic_dist(a, b) <= h;
        }
        for idx in rect_region.iter_cells() {
            let (a, b) = grid.center_of(idx);
            if analytic_dist(a, b) < -1.5 * h {
                ok &= spine.get(idx);
            }
        }
        if !ok {
            println!("   spine/core mismatch on {name}");
            break;
        }
    }
    report(7, "spine and core geometry", ok);
}

/// 8. The sphere-coefficient recurrence against the two-unit form over 500
/// random cases, to 1e-10.
#[test]
fn acceptance_08_sphere_coefficients_cross_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let coeffs = verify::random_poly(&mut rng, 8);
        let alpha = rng.gen_range(-1.5..1.5);
        let beta = rng.gen_range(0.0..1.5);
        let (j, k) = verify::random_unit_pair(&mut rng, 1e-3);
        let (b, c) = series_sphere_coeffs(&coeffs, alpha, beta, f64::INFINITY).unwrap();
        let z = CPoint::new(alpha, beta);
        let fj = series_eval(&coeffs, j.phi(z), f64::INFINITY).unwrap();
        let fk = series_eval(&coeffs, k.phi(z), f64::INFINITY).unwrap();
        let inv = (j.quaternion() - k.quaternion()).inverse().unwrap();
        let b2 = inv * (j.quaternion() * fj - k.quaternion() * fk);
        let c2 = inv * (fj - fk);
        let scale = b.abs().max(c.abs());
        worst = worst.max(rel((b - b2).abs().max((c - c2).abs()), scale));
    }
    println!("   worst relative error {worst:.3e} (tolerance 1e-10)");
    report(8, "sphere coefficients vs two-unit form", worst <= 1e-10);
}

/// 9. Holomorphy residuals: second-order decay between steps 1e-4 and 5e-5
/// for series backends (order within 2 +- 0.3), and residual >= 0.9 for the
/// anti-regular conjugation probe.
#[test]
fn acceptance_09_residual_convergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let mut worst_dev = 0.0f64;
    let mut used = 0;
    while used < 25 {
        let coeffs = verify::random_poly(&mut rng, 8);
        let i = verify::random_unit(&mut rng);
        let z = CPoint::new(rng.gen_range(-0.9..0.9), rng.gen_range(0.2..0.9));
        let third: Vec<Quaternion> = coeffs
            .iter()
            .enumerate()
            .skip(3)
            .map(|(n, &a)| a * ((n * (n - 1) * (n - 2)) as f64))
            .collect();
        if series_eval(&third, i.phi(z), f64::INFINITY).unwrap().abs() < 50.0 {
            continue;
        }
        let f = SliceFunctionHandle::polynomial(coeffs);
        let r1 = dbar_residual(&f, i, z, 1e-4).unwrap();
        let r2 = dbar_residual(&f, i, z, 5e-5).unwrap();
        worst_dev = worst_dev.max(((r1 / r2).log2() - 2.0).abs());
        used += 1;
    }
    let conj = SliceFunctionHandle::pointwise(
        Arc::new(|x: Quaternion| x.conj()),
        DomainDescriptor::All,
    );
    let anti = dbar_residual(&conj, Unit::i(), CPoint::new(0.2, 1.1), 1e-5).unwrap();
    println!("   worst order deviation {worst_dev:.3}; anti-regular residual {anti:.6}");
    report(
        9,
        "residual order 2 +- 0.3 and anti-regular floor",
        worst_dev <= 0.3 && anti >= 0.9,
    );
}

/// 10. The differential formula at 100 random real points and 100 random
/// nonreal points with the direction split into the slice plane and its
/// complement: error <= 10 h^2.
#[test]
fn acceptance_10_differential_formula() {
    let h = 1e-4;
    let tol = 10.0 * h * h;
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let f = SliceFunctionHandle::polynomial(verify::normalized_poly(&mut rng));
        let x0 = Quaternion::scalar(rng.gen_range(-1.0..1.0));
        let v = loop {
            let v = verify::random_quaternion(&mut rng, 1.0);
            if v.abs() > 0.1 {
                break v * (1.0 / v.abs());
            }
        };
        worst = worst.max(differential_check(&f, x0, v, h).unwrap().err);
    }
    for _ in 0..100 {
        let f = SliceFunctionHandle::polynomial(verify::normalized_poly(&mut rng));
        let x0 = loop {
            let x = verify::random_quaternion(&mut rng, 1.0);
            if x.im().abs() > 0.2 {
                break x;
            }
        };
        let v = loop {
            let v = verify::random_quaternion(&mut rng, 1.0);
            if v.abs() > 0.1 {
                break v * (1.0 / v.abs());
            }
        };
        worst = worst.max(differential_check(&f, x0, v, h).unwrap().err);
    }
    println!("   worst error {worst:.3e} (tolerance {tol:.1e})");
    report(10, "differential formula", worst <= tol);
}
