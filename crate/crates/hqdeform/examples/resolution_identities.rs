//! Runs the homological identity battery for a fixture's crossed product:
//! boundary squares, contracting homotopies, the closed forms of the
//! differential and the comparison map, and the chain-map property.
//!
//! ```text
//! cargo run --example resolution_identities -- cyclic-recipe 3
//! ```

use hqdeform::fixtures;
use hqdeform::resolution::identity_battery;

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "cyclic-recipe".into());
    let bound: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(3);

    let Some(input) = fixtures::fixture_input(&name) else {
        eprintln!("unknown fixture {name:?}; shipped: {:?}", fixtures::FIXTURE_NAMES);
        std::process::exit(2);
    };

    println!("{name}, generator bound {bound}:");
    let mut all_ok = true;
    for check in identity_battery(&input.ctx, bound) {
        let mark = if check.ok { "ok  " } else { "FAIL" };
        println!("  [{mark}] {:<32} {:>5} cases", check.id, check.cases);
        all_ok &= check.ok;
    }
    std::process::exit(if all_ok { 0 } else { 1 });
}
