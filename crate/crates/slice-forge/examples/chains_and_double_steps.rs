//! Chains between points of the double-sail domain: shadowing and strong
//! hinging tests, the closure with and without the transfer rule, and an
//! explicit certificate whose double step is unavoidable.
//!
//! Run with: cargo run -p slice-forge --example chains_and_double_steps

use slice_forge::algebra::{CPoint, Quaternion, Unit};
use slice_forge::domains::{builtin, DEFAULT_N_LAT};
use slice_forge::hinge::{
    chain_find, hinge_closure, hinge_closure_with, shadow_test, strongly_hinged_test,
    validate_chain, ChainStep, ClosureOptions,
};
use slice_forge::planar::Grid;

fn main() {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let dom = builtin("omega3p", Grid::standard(), DEFAULT_N_LAT).unwrap();

    // the tall sail joins the two bands above 1 + 5 imath, but only through
    // a component that misses the real axis
    let top = CPoint::new(1.0, 5.0);
    let mid = CPoint::new(1.0, 3.5);
    println!(
        "shadowing path from 1+5imath to 1+3.5imath across the sail bands: {}",
        shadow_test(&dom, -half, half, top, mid).unwrap()
    );
    println!(
        "strongly hinged across the sail bands at 1+5imath: {}",
        strongly_hinged_test(&dom, -half, half, top).unwrap()
    );
    println!(
        "strongly hinged from a sail band to the mid band at 1+3.5imath: {}",
        strongly_hinged_test(&dom, -half, 0.0, mid).unwrap()
    );

    // the closure without the transfer rule cannot join the sail bands
    let restricted = hinge_closure_with(
        &dom,
        ClosureOptions {
            enable_transfer: false,
            pair_order_seed: None,
        },
    )
    .unwrap();
    let full = hinge_closure(&dom).unwrap();
    println!(
        "\nsail bands joined at 1+5imath: without transfer {}, with transfer {}",
        restricted.same_class(dom.grid(), top, -half, half).unwrap(),
        full.same_class(dom.grid(), top, -half, half).unwrap()
    );

    // the explicit chain between the two sail points
    let j = Unit::from_imag(0.0, half, half).unwrap();
    let x = Quaternion::scalar(1.0) - j.quaternion() * 5.0;
    let y = Quaternion::scalar(1.0) + j.quaternion() * 5.0;
    let cert = chain_find(&dom, &full, x, y).unwrap().expect("equivalent");
    validate_chain(&dom, &cert).unwrap();
    println!("\nchain of length {} from 1-5J to 1+5J:", cert.length());
    for (i, p) in cert.points.iter().enumerate() {
        println!("  x{i} = [{:+.3}, {:+.3}, {:+.3}, {:+.3}]", p[0], p[1], p[2], p[3]);
    }
    for step in &cert.steps {
        match step {
            ChainStep::Simple { at, kind } => println!("  simple step at {at} ({kind:?})"),
            ChainStep::Double { span, witness } => println!(
                "  double step spanning {span:?}, shadowed through the trace point ({:.3}, {:.3})",
                witness[0], witness[1]
            ),
        }
    }
}
