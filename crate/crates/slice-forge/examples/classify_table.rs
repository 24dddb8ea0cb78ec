//! Classifying the eight built-in domains and rendering the verdict table;
//! equivalent to the `sliceforge table1` command.
//!
//! Run with: cargo run -p slice-forge --example classify_table

use slice_forge::domains::{builtin, DEFAULT_N_LAT};
use slice_forge::hinge::{classify, Witness, GOLDEN_TABLE};
use slice_forge::planar::Grid;

fn main() {
    let grid = Grid::standard();
    let mark = |b: bool| if b { "yes" } else { " - " };
    println!("domain    spear-simple  s-connected  main-sail  hinged");
    let mut all_match = true;
    for (name, expected) in GOLDEN_TABLE {
        let dom = builtin(name, grid, DEFAULT_N_LAT).unwrap();
        let report = classify(&dom).unwrap();
        let flags = report.flags();
        all_match &= flags == expected;
        println!(
            "{name:<9} {:^12}  {:^11}  {:^9}  {:^6}{}",
            mark(flags[0]),
            mark(flags[1]),
            mark(flags[2]),
            mark(flags[3]),
            if flags == expected { "" } else { "   <- MISMATCH" }
        );
        for witness in &report.witnesses {
            match witness {
                Witness::SpearSimple {
                    r,
                    r2,
                    component_bbox,
                } => println!(
                    "          floating box {component_bbox:?} between latitudes {r:.4} and {r2:.4}"
                ),
                Witness::SConnected {
                    cell,
                    latitude_intervals,
                } => println!(
                    "          sphere at ({:.3}, {:.3}) splits into latitude bands {latitude_intervals:?}",
                    cell[0], cell[1]
                ),
                Witness::Hinged { cell, r, r2 } => println!(
                    "          unjoined bands at ({:.3}, {:.3}) between {r:.3} and {r2:.3}",
                    cell[0], cell[1]
                ),
            }
        }
    }
    println!(
        "\nall verdicts match the reference table: {all_match} (resolution h = {}, n_lat = {})",
        grid.h, DEFAULT_N_LAT
    );
}
