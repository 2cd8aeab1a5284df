//! Evaluate the contraction certificate for the first builtin example at a
//! few Lipschitz factors.
//!
//! The boundary-data term of this example exceeds one on its own (with the
//! builtin constant weights l_g = 1), so no factor certifies; the example
//! shows how the certificate itemizes where the mass sits.
//!
//! ```bash
//! cargo run --example certify_uniqueness
//! ```

use fracbvp::certify::uniqueness_certificate;
use fracbvp::problem::example1_with_lf;

fn main() {
    for lf in [0.0, 0.05, 0.09, 0.15] {
        let ex = example1_with_lf(lf);
        let report = uniqueness_certificate(&ex.spec, &ex.lipschitz, true).expect("certificate");
        println!("--- l_f = {lf} ---");
        print!("{report}");
        println!();
    }

    // with genuinely small boundary weights the certificate flips
    let mut ex = example1_with_lf(0.05);
    for w in ex.lipschitz.l_g.iter_mut() {
        *w = fracbvp::problem::LipschitzWeight::Constant(0.05);
    }
    let report = uniqueness_certificate(&ex.spec, &ex.lipschitz, true).expect("certificate");
    println!("--- l_f = 0.05 with l_g = 0.05 ---");
    print!("{report}");
}
