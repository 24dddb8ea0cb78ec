//! Quaternion arithmetic, the imaginary-unit sphere and the slice
//! embeddings.
//!
//! Run with: cargo run -p slice-forge --example quaternion_algebra

use slice_forge::algebra::{decompose, CPoint, CQuaternion, Quaternion, Unit};

fn main() {
    // products and norms
    let a = Quaternion::new(1.0, 1.0, 0.0, 0.0); // 1 + i
    let b = Quaternion::new(1.0, 0.0, 1.0, 0.0); // 1 + j
    let ab = a * b;
    println!("(1+i)(1+j)          = {:?}", ab.as_array());
    println!("n(ab) = n(a) n(b)   : {} = {}", ab.norm(), a.norm() * b.norm());
    println!("ab^(-1) * ab        = {:?}", (ab.inverse().unwrap() * ab).as_array());

    // every nonreal quaternion sits on exactly one upper half-slice
    let x = Quaternion::new(0.0, 0.0, 1.0, 1.0); // j + k
    let d = decompose(x);
    println!(
        "\nj + k = alpha + beta I with alpha = {}, beta = {:.6}, I = {:?}",
        d.alpha,
        d.beta,
        d.unit.as_imag_array()
    );
    println!("round trip          = {:?}", d.unit.phi(CPoint::new(d.alpha, d.beta)).as_array());
    let real = decompose(Quaternion::scalar(3.0));
    println!("real points pick an arbitrary unit: arbitrary = {}", real.arbitrary);

    // a splitting basis {1, I, J, IJ} for a tilted unit
    let u = Unit::new((Quaternion::I + Quaternion::J) * (1.0 / 2f64.sqrt())).unwrap();
    let (j, k) = u.splitting_basis();
    println!("\nsplitting basis of (i+j)/sqrt2:");
    println!("  J  = {:?}", j.as_imag_array());
    println!("  IJ = {:?}", k.as_array());

    // the extended embedding of the complexified algebra loses injectivity
    let v = CQuaternion::new(Quaternion::J, Quaternion::K); // j + imath k
    println!(
        "\nphi_i(j + imath k)  = {:?}  (a nonzero element mapping to zero)",
        Unit::i().phi_extended(v).as_array()
    );
}
