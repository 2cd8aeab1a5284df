//! Search for the growth-condition threshold K of the second builtin example,
//! once with the exact simple-form bounds (constant Lipschitz weight) and
//! once with the Hoelder-form bounds at the default parameter.
//!
//! ```bash
//! cargo run --example certify_existence
//! ```

use fracbvp::certify::{existence_certificate, ExistenceOptions};
use fracbvp::problem::example;

fn main() {
    let ex = example(2).expect("builtin example");
    let growth = ex.growth.clone().expect("growth data");

    let sharp = existence_certificate(
        &ex.spec,
        &growth,
        &ex.lipschitz,
        ExistenceOptions { cap: 1e9, constant_lf: true },
    )
    .expect("certificate");
    println!("--- simple-form bounds (exact for constant l_f) ---");
    print!("{sharp}");
    println!();

    let hoelder = existence_certificate(&ex.spec, &growth, &ex.lipschitz, ExistenceOptions::default())
        .expect("certificate");
    println!("--- Hoelder-form bounds at the default tau ---");
    print!("{hoelder}");
}
