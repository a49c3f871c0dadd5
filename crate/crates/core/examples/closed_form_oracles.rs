//! Closed-form expressions for L and V against the numerical pipeline on
//! random scenarios of every covered regime.
//!
//! Run with `cargo run --example closed_form_oracles`.

use lg_lab::cli::verify::{random_scenario, Family};
use lg_lab::{closed_form_l, closed_form_v, evaluate_numeric};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    println!("{:<18} {:>12} {:>12}", "family", "worst |ΔL|", "worst |ΔV|");
    for family in Family::ALL {
        if !family.has_closed_form() {
            let cfg = random_scenario(&mut rng, family);
            println!("{:<18} {}", format!("{family:?}"), closed_form_l(&cfg).unwrap_err());
            continue;
        }
        let (mut dl, mut dv) = (0.0f64, 0.0f64);
        for _ in 0..1000 {
            let cfg = random_scenario(&mut rng, family);
            let numeric = evaluate_numeric(&cfg).expect("valid scenario");
            dl = dl.max((closed_form_l(&cfg).unwrap() - numeric.l).abs());
            dv = dv.max((closed_form_v(&cfg).unwrap() - numeric.v).abs());
        }
        println!("{:<18} {dl:>12.1e} {dv:>12.1e}", format!("{family:?}"));
    }
}
