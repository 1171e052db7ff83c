//! Compares the closed formula for iterated twisted derivations against
//! straightforward iteration, over every monomial in a degree window.
//!
//! ```text
//! cargo run --example closed_power_formulas -- cyclic-recipe 4 3
//! ```

use hqdeform::crossed::CrossedElement;
use hqdeform::fixtures;
use hqdeform::poly::{Monomial, Poly};
use hqdeform::structure::{delta_apply, delta_power_closed};

fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(n)];
    for i in 0..n {
        let mut next = Vec::new();
        for m in &out {
            let room = d - m.total_degree() as u32;
            for e in 1..=room as u16 {
                let mut m2 = m.clone();
                m2.0[i] = e;
                next.push(m2);
            }
        }
        out.extend(next);
    }
    out
}

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "dihedral-h1".into());
    let max_degree: u32 = args.next().map(|s| s.parse().unwrap()).unwrap_or(5);
    let max_power: u32 = args.next().map(|s| s.parse().unwrap()).unwrap_or(4);

    let Some(st) = fixtures::fixture(&name) else {
        eprintln!("unknown fixture {name:?}; shipped: {:?}", fixtures::FIXTURE_NAMES);
        std::process::exit(2);
    };
    let ctx = &st.ctx;
    let n = ctx.n_vars;

    let mut cases = 0usize;
    for which in [1u8, 2u8] {
        for exps in monomials_up_to(n, max_degree) {
            for g in ctx.group.elements() {
                let start = CrossedElement::term(
                    ctx,
                    Poly::monomial(n, &exps.0, ctx.field.one()),
                    g,
                );
                let mut iterated = start;
                for s in 0..=max_power {
                    let closed = delta_power_closed(&st, which, s, &exps, g);
                    assert_eq!(
                        closed, iterated,
                        "delta_{which}^{s} on {exps:?} w[{}]",
                        ctx.group.name(g)
                    );
                    cases += 1;
                    iterated = delta_apply(&st, which, &iterated);
                }
            }
        }
    }
    println!(
        "{name}: closed formula matches iteration on {cases} cases \
         (monomial degree <= {max_degree}, power <= {max_power})"
    );
}
