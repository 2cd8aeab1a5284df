//! Solve the first builtin example (scaled to l_f = 0.05) by Picard iteration
//! and print the convergence history and residual metrics.
//!
//! ```bash
//! cargo run --example picard_solve
//! ```

use fracbvp::grid::UniformGrid;
use fracbvp::problem::example1_with_lf;
use fracbvp::solver::{picard_solve, PicardOptions};

fn main() {
    let ex = example1_with_lf(0.05);
    let grid = UniformGrid::new(ex.spec.t_end, 257).expect("grid");
    let opts = PicardOptions { tol: 1e-10, max_iter: 60, initial: None };
    let bundle = picard_solve(&ex.spec, grid, &opts).expect("solve");

    println!("converged: {} in {} iterations", bundle.converged, bundle.iterations);
    println!("beta norm: {:.6}", bundle.beta_norm);
    println!("\niter  successive-difference   ratio");
    let mut prev: Option<f64> = None;
    for (i, d) in bundle.history.iter().enumerate() {
        match prev {
            Some(p) if p > 0.0 => println!("{:>4}  {:>20.6e}   {:.4}", i + 1, d, d / p),
            _ => println!("{:>4}  {:>20.6e}", i + 1, d),
        }
        prev = Some(*d);
    }
    println!("\node residual (sup over interior nodes): {:.3e}", bundle.residuals.ode_residual_sup);
    for (i, r) in bundle.residuals.boundary.iter().enumerate() {
        println!("boundary row {i} defect: {r:.3e}");
    }

    println!("\nt, u, D^beta1 u, D^beta2 u at a few nodes:");
    let n = grid.len();
    for j in [0, n / 4, n / 2, 3 * n / 4, n - 1] {
        println!(
            "t = {:.3}: {:>12.6} {:>12.6} {:>12.6}",
            grid.node(j),
            bundle.u.values()[j],
            bundle.du_beta1.values()[j],
            bundle.du_beta2.values()[j],
        );
    }
}
