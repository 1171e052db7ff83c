//! Builds a shipped fixture and walks every existence condition, then
//! prints the derived scalars.
//!
//! ```text
//! cargo run --example validate_fixture -- dihedral-hm1
//! ```

use hqdeform::fixtures;
use hqdeform::structure::{derived_invariants, validate_structure};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "dihedral-h1".into());
    let Some(st) = fixtures::fixture(&name) else {
        eprintln!("unknown fixture {name:?}; shipped: {:?}", fixtures::FIXTURE_NAMES);
        std::process::exit(2);
    };
    println!("fixture: {name}");
    if let Some(desc) = fixtures::fixture_description(&name) {
        println!("         {desc}");
    }
    println!();

    let report = validate_structure(&st);
    for c in &report.conditions {
        let mark = if c.ok { "ok  " } else { "FAIL" };
        if c.detail.is_empty() {
            println!("  [{mark}] {}", c.id);
        } else {
            println!("  [{mark}] {}: {}", c.id, c.detail);
        }
    }
    println!();

    let inv = derived_invariants(&st);
    println!("derived parameter q = {}", inv.q);
    match inv.q_order {
        Some(l) => println!("  multiplicative order {l}"),
        None => println!("  not a root of unity"),
    }
    println!("eigenvalue rows lambda_1 = {:?}", strings(&inv.lambda1));
    println!("               lambda_2 = {:?}", strings(&inv.lambda2));
    println!("scaling scalars nu_1 = {}, nu_2 = {}", inv.nu1, inv.nu2);
    println!("cocycle twists omega_1 = {}, omega_2 = {}", inv.omega1, inv.omega2);

    std::process::exit(if report.passed() { 0 } else { 1 });
}

fn strings(xs: &[hqdeform::scalar::Scalar]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}
