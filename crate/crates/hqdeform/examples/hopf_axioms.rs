//! Checks the Hopf-algebra axioms and the twisting-element conditions of
//! the q-exponential series over a chosen field and parameter.
//!
//! ```text
//! cargo run --example hopf_axioms -- fp:7 2
//! ```

use hqdeform::config::parse_field_spec;
use hqdeform::hopf::{expq_series, verify_hopf_axioms, verify_twisting, HopfMaps};
use hqdeform::scalar::QParam;

fn main() {
    let mut args = std::env::args().skip(1);
    let field_text = args.next().unwrap_or_else(|| "q".into());
    let q_text = args.next().unwrap_or_else(|| "-1".into());

    let field = parse_field_spec(&field_text).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });
    let q = field.parse(&q_text).unwrap_or_else(|e| {
        eprintln!("bad q: {e}");
        std::process::exit(2);
    });
    let qp = QParam::new(q).unwrap_or_else(|e| {
        eprintln!("bad q: {e}");
        std::process::exit(2);
    });

    println!("field {field_text}, q = {}", qp.q);
    match qp.order {
        Some(l) => println!("q has multiplicative order {l}"),
        None => println!("q is not a root of unity"),
    }

    let maps = HopfMaps::standard(&qp);
    let bound = 3;
    let order = 6;

    let axioms = verify_hopf_axioms(&maps, bound);
    println!(
        "Hopf axioms on the degree-{bound} basis: {} checks, {} failures",
        axioms.checked,
        axioms.failures.len()
    );
    for f in &axioms.failures {
        println!("  FAIL {f}");
    }

    let fs = expq_series(&qp, order).expect("q-factorials invertible below the cutoff");
    let twisting = verify_twisting(&maps, &fs, order, bound);
    println!(
        "twisting conditions through order {order}: {} checks, {} failures",
        twisting.checked,
        twisting.failures.len()
    );
    for f in &twisting.failures {
        println!("  FAIL {f}");
    }

    let ok = axioms.passed() && twisting.passed();
    println!("{}", if ok { "all conditions hold" } else { "FAILED" });
    std::process::exit(if ok { 0 } else { 1 });
}
