//! The Lüders bounds of L (1.5) and V (2) for sharp measurements under
//! unitary dynamics, and how unsharpness scales them down.
//!
//! Run with `cargo run --release --example lueders_bound`.

use lg_lab::explorer::{maximize, FreeAxis, MaxSpec, Objective, Param, Regime};
use std::f64::consts::PI;

fn main() {
    let regime = Regime::UnitaryUnbiased;
    let l = maximize(&MaxSpec::new(
        Objective::L,
        regime.base(1.0),
        vec![FreeAxis::new(Param::G1, 0.0, PI), FreeAxis::new(Param::G2, 0.0, PI)],
    ))
    .expect("feasible region");
    println!("max L = {:.9} at g1 = {:.6}, g2 = {:.6}", l.best_value, l.get(Param::G1).unwrap(), l.get(Param::G2).unwrap());

    let v = maximize(&MaxSpec::new(Objective::V, regime.base(1.0), regime.free_axes())).expect("feasible region");
    print!("max V = {:.9} at", v.best_value);
    for (p, x) in &v.best_point {
        print!(" {p} = {x:.6}");
    }
    println!();

    println!("\n  eta   max L   max V");
    for eta in [1.0, 0.9, 0.8, 0.7] {
        let l = maximize(&MaxSpec::new(Objective::L, regime.base(eta), regime.free_axes()).with_grid_points(13)).unwrap();
        let v = maximize(&MaxSpec::new(Objective::V, regime.base(eta), regime.free_axes()).with_grid_points(13)).unwrap();
        println!("  {eta:.2}  {:.4}  {:.4}", l.best_value, v.best_value);
    }
}
