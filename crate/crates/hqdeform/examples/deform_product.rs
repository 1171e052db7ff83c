//! Multiplies two crossed-product elements under the deformed product and
//! prints the result order by order in the formal parameter.
//!
//! ```text
//! cargo run --example deform_product -- dihedral-h1 "x1*w[t]" "x2*w[s]"
//! ```

use hqdeform::cli::parse_element;
use hqdeform::deform::{deformed_product, infinitesimal};
use hqdeform::fixtures;

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "dihedral-h1".into());
    let a_text = args.next().unwrap_or_else(|| "x1*w[t]".into());
    let b_text = args.next().unwrap_or_else(|| "x2*w[s]".into());

    let Some(st) = fixtures::fixture(&name) else {
        eprintln!("unknown fixture {name:?}; shipped: {:?}", fixtures::FIXTURE_NAMES);
        std::process::exit(2);
    };
    let a = parse_element(&a_text, &st.ctx).unwrap_or_else(|e| {
        eprintln!("first element: {e}");
        std::process::exit(2);
    });
    let b = parse_element(&b_text, &st.ctx).unwrap_or_else(|e| {
        eprintln!("second element: {e}");
        std::process::exit(2);
    });

    println!("fixture {name}, q = {}", st.qp.q);
    println!("  a = {a}");
    println!("  b = {b}");
    println!();

    let series = deformed_product(&st, &a, &b).expect("series terminates");
    for (i, c) in series.coeffs.iter().enumerate() {
        println!("  t^{i}: {c}");
    }

    // the first-order term is the infinitesimal of the deformation
    let phi = infinitesimal(&st, &a, &b);
    let t1 = series.coeff(&st.ctx, 1);
    assert_eq!(phi, t1, "t^1 coefficient matches the infinitesimal");
    println!();
    println!("t^1 coefficient equals the infinitesimal: {phi}");
}
