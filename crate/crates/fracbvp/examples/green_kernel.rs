//! Evaluate the Green kernel of the first builtin example, print a small
//! (t, s) slice, and verify the representation identity against the direct
//! solver.
//!
//! ```bash
//! cargo run --example green_kernel
//! ```

use fracbvp::greenfn::GreenKernel;
use fracbvp::grid::{SampledFunction, UniformGrid};
use fracbvp::problem::example;
use fracbvp::solver::linear_direct_solve;

fn main() {
    let spec = example(1).expect("builtin example").spec;
    let kernel = GreenKernel::new(&spec).expect("kernel");

    println!("structural constants: {:?}", kernel.constants());
    println!("\nG(t, s) on a coarse slice (rows t, columns s):");
    print!("{:>7}", "");
    for j in 0..=4 {
        print!(" {:>9.2}", j as f64 * 0.25);
    }
    println!();
    for i in 0..=4 {
        let t = i as f64 * 0.25;
        print!("{t:>7.2}");
        for j in 0..=4 {
            let s = j as f64 * 0.25;
            print!(" {:>9.4}", kernel.eval(t, s).expect("kernel value"));
        }
        println!();
    }

    // representation identity: integral of G against the forcing minus the
    // weighted boundary data reproduces the direct solution
    let n = 257;
    let grid = UniformGrid::new(spec.t_end, n).expect("grid");
    let g_integrals = [0.3, 0.2, 0.1];
    let f = |s: f64| 1.0 + s;
    let sampled = SampledFunction::from_fn(grid, f).expect("samples");
    let direct = linear_direct_solve(&spec, &sampled, g_integrals).expect("solve");
    let via_kernel = kernel.representation(f, g_integrals, n).expect("quadrature");
    let sup = via_kernel
        .iter()
        .zip(direct.u.values())
        .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
    println!("\nrepresentation identity, f = 1 + t, N = {n}:");
    println!("sup |integral route - direct solver| = {sup:.3e}");
}
