//! Parameter sweeps: a standard figure grid and a custom two-axis sweep,
//! written as CSV to standard output.
//!
//! Run with `cargo run --release --example figure_sweep`.

use lg_lab::cli::figures::figure_table;
use lg_lab::cli::report::write_csv;
use lg_lab::explorer::{sweep, Axis, Param, Quantity, SweepSpec};
use lg_lab::{Bias, ChannelDyn, PureStateParams, ScenarioConfig};

fn main() {
    // figure 4: L and the disturbance against the damping rate
    let fig = figure_table(4).expect("figure 4 exists");
    let gamma = fig.column("gamma12").unwrap();
    let l = fig.column("L").unwrap();
    let d = fig.column("D").unwrap();
    println!("gamma12      L      D");
    for i in (0..gamma.len()).step_by(20) {
        println!("{:7.2} {:6.3} {:6.3}", gamma[i], l[i], d[i]);
    }

    // V against sharpness and the thermal parameter, at full damping
    let spec = SweepSpec {
        base: ScenarioConfig::channel(PureStateParams::ground(), 1.0, Bias::Unbiased, ChannelDyn::new(0.0, 1.0, 0.0, 0.0)),
        axes: vec![Axis::new(Param::Eta, 0.5, 1.0, 6), Axis::new(Param::P, 0.0, 1.0, 3)],
        quantities: vec![Quantity::V, Quantity::Beta, Quantity::Delta],
    };
    let table = sweep(&spec).expect("valid sweep");
    println!();
    write_csv(&table, std::io::stdout().lock()).expect("stdout is writable");
}
