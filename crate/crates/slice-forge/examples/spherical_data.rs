//! Spherical value and derivative: the sphere-wise constants rebuilding a
//! slice function pointwise, computed both from antipodal slice values and
//! from two well-separated units, plus the differential split they control.
//!
//! Run with: cargo run -p slice-forge --example spherical_data

use slice_forge::algebra::Quaternion;
use slice_forge::extension::{differential_check, spherical_data_formula};
use slice_forge::slicefun::{spherical_data_raw, SliceFunctionHandle};

fn main() {
    let sq = SliceFunctionHandle::monomial(2);
    let x = Quaternion::new(1.0, 2.0, 0.0, 0.0); // 1 + 2i

    let raw = spherical_data_raw(&sq, x).unwrap();
    let formula = spherical_data_formula(&sq, x).unwrap();
    println!("x^2 at 1 + 2i:");
    println!("  antipodal form : value {:?}, derivative {:?}",
        raw.value.as_array(), raw.derivative.unwrap().as_array());
    println!("  two-unit form  : value {:?}, derivative {:?}",
        formula.value.as_array(), formula.derivative.unwrap().as_array());

    let rebuilt = formula.value + x.im() * formula.derivative.unwrap();
    println!(
        "  value + Im(x) * derivative rebuilds f: error {:.2e}",
        (rebuilt - sq.eval(x).unwrap()).abs()
    );

    // on the real axis the derivative is absent and the value is f itself
    let real = spherical_data_raw(&sq, Quaternion::scalar(1.5)).unwrap();
    println!("\nat 1.5: value {:?}, derivative present: {}",
        real.value.as_array(), real.derivative.is_some());

    // the differential of f splits along the slice plane and its complement
    let h = 1e-4;
    let along = differential_check(&sq, x, Quaternion::I, h).unwrap();
    let across = differential_check(&sq, x, Quaternion::K, h).unwrap();
    println!("\ndifferential at 1 + 2i (step {h}):");
    println!(
        "  along the slice (v = i): rhs {:?}, error {:.2e}",
        along.rhs.as_array(),
        along.err
    );
    println!(
        "  across (v = k): rhs = v * spherical derivative = {:?}, error {:.2e}",
        across.rhs.as_array(),
        across.err
    );
}
