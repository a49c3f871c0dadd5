//! Generalized amplitude damping: Kraus operators, completeness, and how
//! the channel drives a state towards its fixed point.
//!
//! Run with `cargo run --example gad_channel`.

use lg_lab::algebra::Mat2;
use lg_lab::quantum::{apply_evolution, gad_kraus, make_state, Evolution, GadParams, KrausMap, PureStateParams};

fn main() {
    let params = GadParams::new(0.3, 0.4).expect("p and gamma lie in [0, 1]");
    let kraus = gad_kraus(params);
    for (k, op) in kraus.iter().enumerate() {
        println!(
            "G{k} = [[{:.4}, {:.4}], [{:.4}, {:.4}]]",
            op.m[0][0].re, op.m[0][1].re, op.m[1][0].re, op.m[1][1].re
        );
    }
    let completeness = KrausMap::from(Evolution::Gad(params)).completeness();
    println!("|Σ G†G − I| = {:.1e}", completeness.max_abs_diff(&Mat2::IDENTITY));

    let mut rho = make_state(PureStateParams::new(0.6, 1.1));
    println!("\nstep   rho00     |rho01|   min eigenvalue");
    for step in 0..=8 {
        println!("{step:>4}   {:.6}  {:.6}  {:+.2e}", rho.m[0][0].re, rho.m[0][1].norm(), rho.min_eigenvalue());
        rho = apply_evolution(&rho, &Evolution::Gad(params));
    }
    println!("fixed point rho00 = p = {}", params.p);
}
