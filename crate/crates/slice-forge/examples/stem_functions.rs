//! Stem functions and the slice functions they induce: symmetry checking,
//! induction at quaternionic points, and Schwarz reflection of upper-half
//! stem data.
//!
//! Run with: cargo run -p slice-forge --example stem_functions

use std::sync::Arc;

use slice_forge::algebra::{CPoint, CQuaternion, Quaternion};
use slice_forge::planar::{rasterize, Grid, RegionSpec};
use slice_forge::slicefun::{
    induce, schwarz_reflect, stem_symmetry_check, StemDomain, StemFunction,
};

fn main() {
    // the stem of x^2 evaluated centrally: F(z) = z^2 acting on coefficients
    let stem = StemFunction::from_series(
        &[Quaternion::ZERO, Quaternion::ZERO, Quaternion::ONE],
        f64::INFINITY,
    );
    let z = CPoint::new(0.0, 1.0);
    println!("stem of x^2 at imath: {:?}", stem.eval(z).unwrap().as_arrays());
    println!("induced at k        : {:?}", induce(&stem, Quaternion::K).unwrap().as_array());

    // symmetry report of a genuine stem and of a broken one
    let good = stem_symmetry_check(&stem, 200, 7);
    println!("\nsymmetry of the series stem: pass = {}, max err = {:.2e}", good.pass, good.max_err);
    let broken = StemFunction::new(
        StemDomain::Disk { radius: 2.0 },
        Arc::new(|_| CQuaternion::new(Quaternion::ZERO, Quaternion::I)),
    );
    let bad = stem_symmetry_check(&broken, 200, 7);
    println!("symmetry of imath*i constant: pass = {}, max err = {:.2e}", bad.pass, bad.max_err);

    // reflecting upper-half data across the real axis
    let grid = Grid::new(-2.0, 2.0, 2.0, 0.125).unwrap();
    let mask = rasterize(&RegionSpec::rect(-2.0, 2.0, -1.0, 2.0), grid).unwrap();
    let upper = StemFunction::new(
        StemDomain::UpperRaster(mask),
        Arc::new(|z| {
            // holomorphic in the upper half, real on the axis
            let sq = CQuaternion::from_cpoint(z) * CQuaternion::from_cpoint(z);
            sq + CQuaternion::from_quaternion(Quaternion::scalar(1.0))
        }),
    );
    let total = schwarz_reflect(&upper).unwrap();
    let below = total.eval(CPoint::new(0.5, -1.0)).unwrap();
    let above = total.eval(CPoint::new(0.5, 1.0)).unwrap();
    println!("\nreflected stem: F(0.5 - imath) = {:?}", below.as_arrays());
    println!("bar F(0.5 + imath)             = {:?}", above.bar().as_arrays());
    let check = stem_symmetry_check(&total, 200, 11);
    println!("reflected stem symmetry: pass = {}", check.pass);
}
