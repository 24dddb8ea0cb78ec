//! Quaternionic power series: left-power evaluation, the sphere-coefficient
//! recurrence, and radius estimation from a finite coefficient list.
//!
//! Run with: cargo run -p slice-forge --example power_series

use slice_forge::algebra::{CPoint, Quaternion, Unit};
use slice_forge::slicefun::{
    estimate_radius, series_eval, series_sphere_coeffs, SliceFunctionHandle,
};

fn main() {
    // f(x) = i + x j + x^2 with quaternion coefficients multiplied on the right
    let coeffs = vec![Quaternion::I, Quaternion::J, Quaternion::ONE];
    let x = Quaternion::new(1.0, 2.0, 0.0, 0.0);
    let fx = series_eval(&coeffs, x, f64::INFINITY).unwrap();
    println!("f(1+2i) = {:?}", fx.as_array());

    // on the sphere alpha + beta S the value is b + I c for every unit I
    let (alpha, beta) = (1.0, 2.0);
    let (b, c) = series_sphere_coeffs(&coeffs, alpha, beta, f64::INFINITY).unwrap();
    println!("sphere coefficients at 1 + 2S: b = {:?}, c = {:?}", b.as_array(), c.as_array());
    for az in [0.0, 1.0, 2.5] {
        let u = Unit::on_latitude(0.3, az);
        let direct = series_eval(&coeffs, u.phi(CPoint::new(alpha, beta)), f64::INFINITY).unwrap();
        let via = b + u.quaternion() * c;
        println!(
            "  azimuth {az:.1}: |direct - (b + Ic)| = {:.2e}",
            (direct - via).abs()
        );
    }

    // a geometric coefficient list reveals its radius of convergence
    let geometric: Vec<Quaternion> = (0..24).map(|n| Quaternion::scalar(0.5f64.powi(n))).collect();
    println!("\nestimated radius of sum x^n / 2^n : {:.3}", estimate_radius(&geometric));
    println!("estimated radius of a polynomial  : {}", estimate_radius(&coeffs));

    // a truncated series enforces its ball
    let handle = SliceFunctionHandle::series(geometric, 2.0);
    println!(
        "series at |x| = 2.5 -> {:?}",
        handle.eval(Quaternion::scalar(2.5)).err().unwrap()
    );
}
