//! Extending a slice regular function beyond its domain: a polynomial
//! restricted to the tent domain is rebuilt on the symmetric completion,
//! including spheres the domain only partially covers.
//!
//! Run with: cargo run -p slice-forge --example global_extension

use slice_forge::algebra::{CPoint, Quaternion, Unit};
use slice_forge::domains::{builtin, DEFAULT_N_LAT};
use slice_forge::extension::extend_global;
use slice_forge::planar::Grid;
use slice_forge::slicefun::{DomainDescriptor, SliceFunctionHandle};

fn main() {
    let dom = builtin("omega0", Grid::standard(), DEFAULT_N_LAT).unwrap();
    let sq = SliceFunctionHandle::monomial(2).restrict(DomainDescriptor::Axial(dom.clone()));

    // 1 + 3.5k: its latitude only carries the bare rectangles, so the point
    // lies outside the domain, yet its trace is in the completion
    let x = Quaternion::new(1.0, 0.0, 0.0, 3.5);
    println!("1 + 3.5k in the domain: {}", dom.contains(x));
    println!("direct evaluation through the restriction: {:?}", sq.eval(x).err().unwrap());

    let ext = extend_global(&sq, x, 1e-9).unwrap();
    println!(
        "extension value: {:?} (exact square: [-11.25, 0, 0, 7])",
        ext.value.as_array()
    );
    println!("consistency spread across unit choices: {:.2e}", ext.consistency_spread);

    // a point of the domain itself: the extension restricts to f
    let inside = Unit::on_latitude(0.0, 0.7).phi(CPoint::new(1.0, 3.5));
    let ext = extend_global(&sq, inside, 1e-9).unwrap();
    println!(
        "\ninside the domain: |extension - f| = {:.2e}",
        (ext.value - inside * inside).abs()
    );

    // outside the completion there is nothing to extend to
    let far = Quaternion::new(1.0, 0.0, 0.0, 6.5);
    println!(
        "outside the completion: {:?}",
        extend_global(&sq, far, 1e-9).err().unwrap()
    );

    // a denser sweep: maximum error over a grid of completion points
    let completion = dom.symmetric_completion_region();
    let grid = dom.grid();
    let mut worst = 0.0f64;
    let mut count = 0;
    for idx in completion.iter_cells().step_by(97) {
        let (a, b) = grid.center_of(idx);
        let u = Unit::on_latitude(0.95, 1.0);
        let x = u.phi(CPoint::new(a, b));
        if dom.contains(x) {
            continue;
        }
        if let Ok(ext) = extend_global(&sq, x, 1e-9) {
            worst = worst.max((ext.value - x * x).abs());
            count += 1;
        }
    }
    println!("\nswept {count} completion points at a polar latitude: worst error {worst:.2e}");
}
