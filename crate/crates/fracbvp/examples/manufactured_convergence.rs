//! Refinement study against the manufactured solution u*(t) = t^3: the
//! forcing and boundary data are derived from the exact solution, the linear
//! solver runs on a sequence of doubling grids, and the table reports error
//! decay.
//!
//! ```bash
//! cargo run --release --example manufactured_convergence
//! ```

use fracbvp::grid::UniformGrid;
use fracbvp::problem::{example, manufactured};
use fracbvp::solver::linear_direct_solve;

fn main() {
    let spec = example(1).expect("builtin example").spec;
    println!("{:>6} {:>14} {:>8} {:>14} {:>8} {:>12}", "N", "max|u-u*|", "factor", "ode residual", "factor", "max row defect");
    let mut prev: Option<(f64, f64)> = None;
    for n in [129usize, 257, 513, 1025] {
        let grid = UniformGrid::new(spec.t_end, n).expect("grid");
        let m = manufactured(&spec, 3.0, grid).expect("manufactured");
        let bundle = linear_direct_solve(&spec, &m.forcing, m.g_integrals).expect("solve");
        let err = bundle
            .u
            .values()
            .iter()
            .zip(m.exact_u.values())
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        let res = bundle.residuals.ode_residual_sup;
        let row = bundle.residuals.boundary.iter().fold(0.0f64, |a, b| a.max(*b));
        match prev {
            Some((pe, pr)) => println!(
                "{n:>6} {err:>14.4e} {:>8.2} {res:>14.4e} {:>8.2} {row:>12.2e}",
                pe / err,
                pr / res
            ),
            None => println!("{n:>6} {err:>14.4e} {:>8} {res:>14.4e} {:>8} {row:>12.2e}", "", ""),
        }
        prev = Some((err, res));
    }
    println!("\nthe solution error decays at ~2.8x per doubling; the residual sup decays at");
    println!("sqrt(2): it is dominated by the first interior nodes, where fractional");
    println!("operators of t^k-type data are scale invariant on uniform grids (away from the");
    println!("origin the residual decays at ~2x per doubling).");
}
