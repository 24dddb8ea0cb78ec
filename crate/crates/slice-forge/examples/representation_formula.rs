//! The two-unit representation formula: rebuilding a slice regular function
//! everywhere on a sphere from its values at two units, the stem samples it
//! defines, and the cap limit that turns two indices into one.
//!
//! Run with: cargo run -p slice-forge --example representation_formula

use slice_forge::algebra::{CPoint, Quaternion, Unit};
use slice_forge::extension::{rep_formula, stem_double_index, stem_single_index};
use slice_forge::slicefun::{series_eval, SliceFunctionHandle};

fn main() {
    // a polynomial with genuinely quaternionic coefficients
    let coeffs = vec![
        Quaternion::new(0.3, -1.0, 0.0, 0.5),
        Quaternion::I,
        Quaternion::new(1.0, 0.0, 2.0, 0.0),
    ];
    let f = SliceFunctionHandle::polynomial(coeffs.clone());

    let z = CPoint::new(0.8, 1.5);
    let j = Unit::on_latitude(0.2, 0.4);
    let k = Unit::on_latitude(-0.6, 2.0);
    let fj = f.eval(j.phi(z)).unwrap();
    let fk = f.eval(k.phi(z)).unwrap();

    println!("two slice values on the sphere 0.8 + 1.5 S:");
    println!("  f at J: {:?}", fj.as_array());
    println!("  f at K: {:?}", fk.as_array());
    for az in [0.0, 1.3, 4.0] {
        let i = Unit::on_latitude(0.9, az);
        let via = rep_formula(fj, fk, j, k, i).unwrap();
        let direct = series_eval(&coeffs, i.phi(z), f64::INFINITY).unwrap();
        println!(
            "  rebuilt at azimuth {az:.1}: error {:.2e}",
            (via - direct).abs()
        );
    }

    // the same data packaged as a stem sample; its real trace values carry
    // no imaginary part
    let v = stem_double_index(&f, j, k, z).unwrap();
    println!("\nstem sample at z : p = {:?}", v.p.as_array());
    println!("                   q = {:?}", v.q.as_array());
    let real = stem_double_index(&f, j, k, CPoint::new(0.8, 0.0)).unwrap();
    println!("at a real trace point: |q| = {:.2e}", real.q.abs());

    // the cap limit: eight probe units around J agree on the same value
    let single = stem_single_index(&f, j, z, 0.05, 1e-8).unwrap();
    println!(
        "\ncap limit around J: spread {:.2e} at probe radius {}",
        single.cap_spread, single.epsilon_used
    );
    println!("  value p = {:?}", single.value.p.as_array());
}
