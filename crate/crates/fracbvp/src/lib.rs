//! Solver and certification toolkit for Caputo fractional boundary value
//! problems of order `alpha` in `(2, 3]` with three-point and integral
//! boundary conditions:
//!
//! ```text
//! D^alpha u(t) = f(t, u(t), D^beta1 u(t), D^beta2 u(t)),    0 <= t <= T,
//! a0 u(0)           + b0 u(T)           = lambda0 * int_0^T g0(s, u(s)) ds,
//! a1 D^beta1 u(eta) + b1 D^beta1 u(T)   = lambda1 * int_0^T g1(s, u(s)) ds,
//! a2 D^beta2 u(eta) + b2 D^beta2 u(T)   = lambda2 * int_0^T g2(s, u(s)) ds.
//! ```
//!
//! The crate builds the explicit solution representation of the linear
//! problem (polynomial coefficients `k0, k1, k2` solved from the boundary
//! system, equivalently a Green kernel), runs Picard iteration on the
//! fixed-point operator in the norm `||u|| + ||D^beta1 u|| + ||D^beta2 u||`,
//! and certifies uniqueness (contraction constant < 1) and existence
//! (a-priori bound `K` for the nonlinear alternative) by evaluating the
//! closed-form bound constants `rho`, `rho~`, `rho^` and `Delta`.
//!
//! # Examples directory
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --example constants_table          # reference vs recomputed bound constants
//! cargo run --example certify_uniqueness       # contraction certificates at several l_f
//! cargo run --example certify_existence        # growth-condition threshold search
//! cargo run --example picard_solve             # fixed-point solve with iteration history
//! cargo run --example manufactured_convergence # refinement study against t^3
//! cargo run --example green_kernel             # kernel export and representation check
//! ```
//!
//! # Quick start
//!
//! ```
//! use fracbvp::problem::example1_with_lf;
//! use fracbvp::solver::{picard_solve, PicardOptions};
//! use fracbvp::grid::UniformGrid;
//!
//! let example = example1_with_lf(0.05);
//! let grid = UniformGrid::new(example.spec.t_end, 129).unwrap();
//! let bundle = picard_solve(&example.spec, grid, &PicardOptions::default()).unwrap();
//! assert!(bundle.converged);
//! assert!(bundle.residuals.boundary.iter().all(|d| *d < 1e-6));
//! ```
//!
//! A thin `fracbvp` binary exposes the same functionality on the command
//! line (`certify`, `solve`, `green`, `examples`) over flat key-value
//! problem files; see the crate README.

pub mod certify;
pub mod cli;
pub mod error;
pub mod fracops;
pub mod greenfn;
pub mod grid;
pub mod problem;
pub mod solver;

pub use error::{Error, Result};
