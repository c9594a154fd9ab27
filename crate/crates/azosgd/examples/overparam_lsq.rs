//! Build an overparameterized least-squares instance, inspect the
//! metadata the optimizers rely on, and round-trip it through JSON.
//!
//! ```bash
//! cargo run --release --example overparam_lsq
//! ```

use azosgd::point::Point;
use azosgd::problem::{make_overparam_lsq, Objective, ProblemInstance};

fn main() {
    // An interpolating system: more unknowns than equations, right-hand
    // side generated from a planted solution, so the minimum value is 0.
    let problem = make_overparam_lsq(32, 16, 42, true).unwrap();
    println!(
        "dim = {}, samples = {}",
        problem.dim(),
        problem.sample_count()
    );
    println!("smoothness L   = {:.4}", problem.smoothness());
    println!("ball radius R  = {:.4}", problem.radius());
    println!("minimum f*     = {:.4e}", problem.f_star());
    println!("sigma*^2       = {:.4e}", problem.sigma_star_sq());

    let x_star = problem.minimizer().unwrap().clone();
    println!(
        "f at the stored minimizer: {:.4e}",
        problem.eval_full(&x_star)
    );
    println!(
        "f at the origin:           {:.4}",
        problem.eval_full(&Point::zeros(32))
    );

    // A shifted variant of the same shape: a duplicated row with opposite
    // residual shifts keeps the minimizer known while forcing f* > 0.
    let shifted = make_overparam_lsq(32, 16, 42, false).unwrap();
    println!(
        "shifted system: f* = {:.4}, sigma*^2 = {:.4} (<= 2 L f* = {:.4})",
        shifted.f_star(),
        shifted.sigma_star_sq(),
        2.0 * shifted.smoothness() * shifted.f_star()
    );

    // The JSON document round-trips bit-identically.
    let doc = problem.to_json();
    let restored = ProblemInstance::from_json(&doc).unwrap();
    assert_eq!(doc, restored.to_json());
    println!("JSON document: {} bytes, round-trip exact", doc.len());
}
