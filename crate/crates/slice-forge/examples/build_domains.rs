//! Building axial quaternionic domains: the eight built-ins, a custom width
//! profile with a sail, speared/slice verdicts, spine and core, and the
//! symmetric completion.
//!
//! Run with: cargo run -p slice-forge --example build_domains

use slice_forge::domains::{
    builtin, AxialDomain, LatInterval, SailAttachment, WidthFunction, WidthKind, WidthPiece,
    BUILTIN_NAMES,
};
use slice_forge::planar::{Grid, RegionSpec};

fn main() {
    let grid = Grid::standard();

    for name in BUILTIN_NAMES {
        let dom = builtin(name, grid, 65).unwrap();
        let (speared, _) = dom.is_speared();
        let (spine, core) = dom.spine_core();
        println!(
            "{name:<8} speared {speared}  slice-domain {}  lat-samples {}  spine cells {}  core cells {}",
            dom.is_slice_domain(),
            dom.latitudes().len(),
            spine.count(),
            core.count()
        );
    }

    // the mid-latitude half-slice of the double-sail domain carries the full
    // C-shape; the sail bands carry the tall rectangle on top
    let dom = builtin("omega3p", grid, 65).unwrap();
    for r in [0.0, 0.6] {
        let region = dom.slice_region(r);
        println!(
            "omega3p trace at latitude {r}: {} cells, {} components, has (1, 5): {}",
            region.count(),
            region.components().count,
            region.contains_point(1.0, 5.0)
        );
    }
    let completion = dom.symmetric_completion_region();
    println!("completion trace cells: {}", completion.count());

    // a custom tent profile with a polar-cap sail
    let tent = WidthFunction::new(vec![
        WidthPiece {
            interval: [-1.0, 0.0],
            kind: WidthKind::Affine([2.0, 2.0]),
        },
        WidthPiece {
            interval: [0.0, 1.0],
            kind: WidthKind::Affine([-2.0, 2.0]),
        },
    ])
    .unwrap();
    let sail = SailAttachment {
        latitude_set: vec![LatInterval::new(0.7, 1.0)],
        d_prime: RegionSpec::rect(2.0, 4.5, 3.0, 4.0),
        d: RegionSpec::rect(2.0, 3.0, 3.0, 4.0),
    };
    let custom = AxialDomain::build_axial(tent.clone(), tent, vec![sail], grid, 65).unwrap();
    println!(
        "\ncustom domain: speared {}, trace at 0.9 has (3.5, 3.5): {}",
        custom.is_speared().0,
        custom.slice_region(0.9).contains_point(3.5, 3.5)
    );

    // shrink the domain to a slice domain around an off-axis point
    let j0 = slice_forge::algebra::Unit::on_latitude(0.0, 0.0);
    let x0 = j0.phi(slice_forge::algebra::CPoint::new(1.0, 3.5));
    let local = custom.local_slice_domain(x0).unwrap();
    println!(
        "local slice domain at a top-bar point: ball at {:.3} radius {:.3}, tube of {} cells, cap radius {:.4}",
        local.center,
        local.delta,
        local.path.len(),
        local.epsilon
    );
}
