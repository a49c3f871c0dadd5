//! Smallest measurement sharpness η that still allows a violation, for each
//! expression and regime. Channel regimes take a few seconds each.
//!
//! Run with `cargo run --release --example sharpness_thresholds`.

use lg_lab::explorer::{eta_threshold, Objective, Regime};
use std::time::Instant;

fn main() {
    let regimes = [
        Regime::UnitaryUnbiased,
        Regime::UnitaryBiased,
        Regime::ChannelUnbiased,
        Regime::ChannelBiased,
    ];
    println!("{:<18} {:>4}  {:>9}", "regime", "expr", "threshold");
    for regime in regimes {
        for objective in [Objective::L, Objective::V] {
            let start = Instant::now();
            match eta_threshold(objective, regime) {
                Ok(eta) => println!(
                    "{:<18} {:>4}  {eta:>9.4}  ({:.1}s)",
                    regime.name(),
                    format!("{:?}", objective.expression),
                    start.elapsed().as_secs_f64()
                ),
                Err(e) => println!("{:<18} {:?}: {e}", regime.name(), objective.expression),
            }
        }
    }
    println!("\nreference values: sqrt(2/3) = {:.4}, 1/sqrt(3) = {:.4}", (2.0f64 / 3.0).sqrt(), 1.0 / 3f64.sqrt());
}
