//! Recompute the bound constants of both builtin examples and compare them
//! with the published reference block.
//!
//! ```bash
//! cargo run --example constants_table
//! ```

fn main() {
    for id in [1u8, 2] {
        print!("{}", fracbvp::cli::examples_table(id).expect("builtin example"));
        println!();
    }
}
