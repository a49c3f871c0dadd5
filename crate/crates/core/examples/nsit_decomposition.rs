//! No-signaling-in-time analysis: the disturbance tables D, the β/δ
//! thresholds, and the decompositions showing that a violation of L or V
//! requires a disturbance larger than 2β or 4δ.
//!
//! Run with `cargo run --example nsit_decomposition`.

use lg_lab::macrorealism::{decomposition_check_l, decomposition_check_v};
use lg_lab::{analyze, evaluate_numeric, Bias, ChannelDyn, PureStateParams, ScenarioConfig};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

fn show(label: &str, cfg: &ScenarioConfig) {
    let values = evaluate_numeric(cfg).expect("valid scenario");
    let r = analyze(cfg).expect("valid scenario");
    let l = decomposition_check_l(cfg).expect("valid scenario");
    let v = decomposition_check_v(cfg).expect("valid scenario");
    println!("== {label}");
    println!("   L = {:+.6}  V = {:+.6}", values.l, values.v);
    println!("   D(1)23 = {:+.4?}", r.d123_table);
    println!("   D1(2)3 = {:+.4?}", r.d1_23_table);
    println!("   D(1)2  = {:+.4?}", r.d12_table);
    println!("   beta = {:.4}, delta = {:.4}", r.beta, r.delta);
    println!(
        "   L condition {:.4} > {:.4}: {}  (L − L123 residual {:.1e})",
        l.lhs, l.rhs, l.condition_holds(), l.residual
    );
    println!(
        "   V condition {:.4} > {:.4}: {}  (V − V123 residual {:.1e})",
        v.lhs, v.rhs, v.condition_holds(), v.residual
    );
}

fn main() {
    show(
        "unitary, L optimum",
        &ScenarioConfig::unitary(PureStateParams::ground(), 1.0, Bias::Unbiased, 2.0 * PI / 3.0, FRAC_PI_6),
    );
    show(
        "unitary, V optimum",
        &ScenarioConfig::unitary(PureStateParams::new(FRAC_PI_4, FRAC_PI_2), 1.0, Bias::Unbiased, 3.0 * FRAC_PI_4, FRAC_PI_4),
    );
    show(
        "GAD, full damping",
        &ScenarioConfig::channel(PureStateParams::ground(), 1.0, Bias::Unbiased, ChannelDyn::new(0.0, 1.0, 0.0, 0.0)),
    );
    show(
        "disturbed but no violation",
        &ScenarioConfig::unitary(PureStateParams::ground(), 1.0, Bias::Unbiased, FRAC_PI_4, FRAC_PI_4),
    );
}
