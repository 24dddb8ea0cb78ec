//! Running the seeded verification suites from code; equivalent to the
//! `sliceforge verify <suite>` command.
//!
//! Run with: cargo run -p slice-forge --example verification_suites

use slice_forge::verify::{
    suite_dbar, suite_differential, suite_rep, suite_spherical, suite_stem,
};

fn main() {
    let seed = 2024;
    let reports = [
        suite_rep(seed, 40, 20),
        suite_stem(seed, 60),
        suite_spherical(seed, 100),
        suite_dbar(seed, 25),
        suite_differential(seed, 60),
    ];
    for report in reports {
        println!("suite {:<12} pass = {}", report.suite, report.pass);
        for check in &report.checks {
            let flavor = if check.expected_fail {
                "expected-fail floor"
            } else {
                "tolerance"
            };
            println!(
                "  {:<46} samples {:>5}  worst {:>10.3e}  {} {:.1e}  {}",
                check.name,
                check.samples,
                check.max_err,
                flavor,
                check.tolerance,
                if check.pass { "ok" } else { "FAIL" }
            );
        }
    }
}
