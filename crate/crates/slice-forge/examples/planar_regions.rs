//! Rasterized planar geometry: region specs, boolean operations, connected
//! components with real-axis incidence, path queries and the maximal-disk
//! union behind spine computations.
//!
//! Run with: cargo run -p slice-forge --example planar_regions

use slice_forge::algebra::CPoint;
use slice_forge::planar::{rasterize, tube_epsilon, Grid, RegionSpec};

fn main() {
    let grid = Grid::standard();
    println!("grid: {}x{} cells at h = {}", grid.na(), grid.nb(), grid.h);

    // the two rectangles and the bar joining them into a C-shape
    let rects = rasterize(
        &RegionSpec::Rects(vec![[-1.0, 0.0, -1.0, 4.0], [2.0, 3.0, -1.0, 4.0]]),
        grid,
    )
    .unwrap();
    let bar = rasterize(&RegionSpec::rect(-1.0, 3.0, 3.0, 4.0), grid).unwrap();
    let cshape = rects.union(&bar).unwrap();

    let two = rects.components();
    let one = cshape.components();
    println!(
        "rectangles: {} components (all meet the axis: {})",
        two.count,
        two.meets_real.iter().all(|&m| m)
    );
    println!("with the bar: {} component", one.count);

    let from = CPoint::new(-0.5, 0.5);
    let to = CPoint::new(2.5, 0.5);
    println!(
        "path from (-0.5, 0.5) to (2.5, 0.5): rectangles {}, C-shape {}",
        rects.path_exists(from, to).unwrap(),
        cshape.path_exists(from, to).unwrap()
    );

    // a floating box never reaches the axis
    let float = rasterize(&RegionSpec::rect(0.83, 1.17, 3.0, 4.0), grid).unwrap();
    let labels = float.union(&rects).unwrap().components();
    let idx = {
        let (p, q) = grid.cell_of(1.0, 3.5).unwrap();
        grid.index(p, q)
    };
    println!(
        "floating box component meets the axis: {}",
        labels.component_meets_real(labels.label_of(idx))
    );

    // maximal real-centered half-disks inside the rectangles
    let disks = rects.real_disk_union();
    println!(
        "\ndisk union: {} of {} rectangle cells, contained: {}",
        disks.count(),
        rects.count(),
        disks.is_subset(&rects).unwrap()
    );
    println!("disk union bbox: {:?}", disks.bbox().unwrap());

    // the cap/tube radius guaranteeing swept containment
    println!("\ntube radius for dist 2 at height 3: {}", tube_epsilon(2.0, 3.0).unwrap());
}
