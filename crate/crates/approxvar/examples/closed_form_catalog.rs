//! Runs the built-in catalog of closed-form values against the engines.
use approxvar::closed_forms::{catalog, run_catalog};

fn main() {
    let rows = run_catalog(&catalog());
    for r in &rows {
        println!("{:<36} {:>10.4} {:>10.4} {}", r.id, r.formula_value, r.engine_value, if r.pass { "PASS" } else { "FAIL" });
    }
    println!("{} of {} pass", rows.iter().filter(|r| r.pass).count(), rows.len());
}
