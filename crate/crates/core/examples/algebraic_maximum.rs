//! Non-unitary dynamics reach the algebraic maximum L = V = 3, which no
//! unitary evolution can: a fully damping channel between the first two
//! measurements anti-correlates them perfectly.
//!
//! Run with `cargo run --release --example algebraic_maximum`.

use lg_lab::explorer::{maximize, MaxSpec, Objective, Regime};
use lg_lab::{analyze, evaluate_numeric, Bias, ChannelDyn, PureStateParams, ScenarioConfig};

fn main() {
    let cfg = ScenarioConfig::channel(
        PureStateParams::ground(),
        1.0,
        Bias::Unbiased,
        ChannelDyn::new(0.0, 1.0, 0.0, 0.0),
    );
    let values = evaluate_numeric(&cfg).expect("valid scenario");
    let c = values.correlators;
    println!("<M1M2> = {:+.3}, <M2M3> = {:+.3}, <M1M3> = {:+.3}", c.m1m2, c.m2m3, c.m1m3);
    println!("<M1M2M3> = {:+.3}, <M2> = {:+.3}", c.m1m2m3, c.m2);
    println!("L = {}, V = {}", values.l, values.v);

    let report = analyze(&cfg).expect("valid scenario");
    println!("largest disturbance |D| = {:.3}", report.max_abs_d());

    for objective in [Objective::L, Objective::V] {
        let regime = Regime::ChannelUnbiased;
        let res = maximize(&MaxSpec::new(objective, regime.base(1.0), regime.free_axes()).with_grid_points(9))
            .expect("feasible region");
        println!("max {:?} over the channel regime = {:.12}", objective.expression, res.best_value);
    }
}
