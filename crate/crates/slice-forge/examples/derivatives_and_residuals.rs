//! Slice derivatives and holomorphy residuals: exact differentiation of
//! series backends, finite differences for pointwise backends, and the
//! second-order decay of the residual that certifies slice regularity.
//!
//! Run with: cargo run -p slice-forge --example derivatives_and_residuals

use std::sync::Arc;

use slice_forge::algebra::{CPoint, Quaternion, Unit};
use slice_forge::extension::{dbar_residual, slice_derivative};
use slice_forge::slicefun::{DomainDescriptor, SliceFunctionHandle};

fn main() {
    let cube = SliceFunctionHandle::monomial(3);
    let x = Quaternion::new(0.5, 1.0, -0.5, 0.0);
    println!("slice derivative of x^3 (exact series rule): {:?}",
        slice_derivative(&cube, x, 1e-5).unwrap().as_array());

    let pointwise = SliceFunctionHandle::pointwise(
        Arc::new(|x: Quaternion| x * x * x),
        DomainDescriptor::All,
    );
    println!("same through central differences:            {:?}",
        slice_derivative(&pointwise, x, 1e-5).unwrap().as_array());

    // residual study: a regular series leaves only truncation, which decays
    // at second order; halving the step divides the residual by four
    let f = SliceFunctionHandle::polynomial(vec![
        Quaternion::new(0.2, 1.0, 0.0, 0.0),
        Quaternion::J,
        Quaternion::ZERO,
        Quaternion::ZERO,
        Quaternion::ONE, // x^4 term keeps the third derivative alive
        Quaternion::I,
    ]);
    let i = Unit::on_latitude(0.3, 0.8);
    let z = CPoint::new(0.6, 0.7);
    println!("\nresidual of a regular series at decreasing steps:");
    let mut prev: Option<f64> = None;
    for h in [4e-4, 2e-4, 1e-4, 5e-5] {
        let r = dbar_residual(&f, i, z, h).unwrap();
        match prev {
            Some(p) => println!("  h = {h:.0e}: {r:.3e}  (ratio {:.2})", p / r),
            None => println!("  h = {h:.0e}: {r:.3e}"),
        }
        prev = Some(r);
    }

    // the conjugation map is anti-regular: its residual is 1 at every point
    let conj = SliceFunctionHandle::pointwise(
        Arc::new(|x: Quaternion| x.conj()),
        DomainDescriptor::All,
    );
    println!(
        "\nresidual of the conjugation map: {:.6}",
        dbar_residual(&conj, Unit::i(), CPoint::new(0.0, 1.0), 1e-5).unwrap()
    );
    let c = SliceFunctionHandle::polynomial(vec![Quaternion::new(1.0, 2.0, 3.0, 4.0)]);
    println!(
        "residual of a constant:          {:.2e}",
        dbar_residual(&c, Unit::i(), CPoint::new(0.0, 1.0), 1e-5).unwrap()
    );
}
