//! Text, JSON and CSV renderings.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::explorer::{OptResult, SweepTable};
use crate::expressions::{closed_form_l, closed_form_v, LgValues, ScenarioConfig};
use crate::macrorealism::NsitReport;

pub const SCHEMA_VERSION: &str = "1";

/// `x` with exactly 12 significant digits, independent of locale.
///
/// Fixed notation for magnitudes in `[1e-5, 1e12)`, scientific otherwise.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    if !(-5..12).contains(&exponent) {
        return sci;
    }
    let mut out = String::with_capacity(16);
    if negative {
        out.push('-');
    }
    if exponent >= 0 {
        let split = exponent as usize + 1;
        out.push_str(&digits[..split]);
        if split < digits.len() {
            out.push('.');
            out.push_str(&digits[split..]);
        }
    } else {
        out.push_str("0.");
        for _ in 0..(-exponent - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    }
    out
}

/// Writes a sweep table as CSV with `\n` line endings.
pub fn write_csv<W: Write>(table: &SweepTable, out: W) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(|x| format_sig12(*x)))?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct EvaluateJson<'a> {
    schema: &'static str,
    config: &'a ScenarioConfig,
    values: &'a LgValues,
    closed_form: ClosedFormJson,
    nsit: &'a NsitReport,
}

#[derive(Serialize)]
struct ClosedFormJson {
    #[serde(rename = "L")]
    l: Option<f64>,
    #[serde(rename = "V")]
    v: Option<f64>,
}

pub fn evaluate_json(cfg: &ScenarioConfig, values: &LgValues, nsit: &NsitReport) -> String {
    let doc = EvaluateJson {
        schema: SCHEMA_VERSION,
        config: cfg,
        values,
        closed_form: ClosedFormJson {
            l: closed_form_l(cfg).ok(),
            v: closed_form_v(cfg).ok(),
        },
        nsit,
    };
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

fn table_line(name: &str, t: &[[f64; 2]; 2], first: &str, second: &str) -> String {
    let mut s = format!("  {name}:");
    for (i, a) in ["+", "-"].iter().enumerate() {
        for (j, b) in ["+", "-"].iter().enumerate() {
            let _ = write!(s, "  ({first}{a},{second}{b}) {:+.6e}", t[i][j]);
        }
    }
    s
}

pub fn evaluate_text(cfg: &ScenarioConfig, values: &LgValues, nsit: &NsitReport) -> String {
    let c = &values.correlators;
    let mut s = String::new();
    let _ = writeln!(s, "L = {:.12}", values.l);
    let _ = writeln!(s, "V = {:.12}", values.v);
    if let Ok(l) = closed_form_l(cfg) {
        let _ = writeln!(s, "closed form: L = {l:.12}, V = {:.12}", closed_form_v(cfg).unwrap_or(f64::NAN));
    }
    let _ = writeln!(s, "correlators:");
    let _ = writeln!(s, "  <M1M2>   = {:+.12}", c.m1m2);
    let _ = writeln!(s, "  <M2M3>   = {:+.12}", c.m2m3);
    let _ = writeln!(s, "  <M1M3>   = {:+.12}", c.m1m3);
    let _ = writeln!(s, "  <M1M2M3> = {:+.12}", c.m1m2m3);
    let _ = writeln!(s, "  <M2>     = {:+.12}", c.m2);
    let fmt4 = |xs: &[f64; 4]| xs.map(|x| format!("{x:.9}")).join(", ");
    let _ = writeln!(s, "relabeled L: [{}]", fmt4(&values.l_variants));
    let _ = writeln!(s, "relabeled V: [{}]", fmt4(&values.v_variants));
    let _ = writeln!(s, "NSIT:");
    let _ = writeln!(s, "{}", table_line("D(1)23", &nsit.d123_table, "m2", "m3"));
    let _ = writeln!(s, "{}", table_line("D1(2)3", &nsit.d1_23_table, "m1", "m3"));
    let _ = writeln!(
        s,
        "  D(1)2:  (m2+) {:+.6e}  (m2-) {:+.6e}",
        nsit.d12_table[0], nsit.d12_table[1]
    );
    let _ = writeln!(s, "  beta = {:.12}, delta = {:.12}", nsit.beta, nsit.delta);
    let _ = writeln!(s, "  L123 = {:.12}, V123 = {:.12}", nsit.l123, nsit.v123);
    let _ = writeln!(
        s,
        "  L condition: {:.12} > 2*beta = {:.12}  ({})",
        nsit.lhs_l_condition,
        2.0 * nsit.beta,
        if nsit.l_condition_holds() { "holds" } else { "fails" }
    );
    let _ = write!(
        s,
        "  V condition: {:.12} > 4*delta = {:.12}  ({})",
        nsit.lhs_v_condition,
        4.0 * nsit.delta,
        if nsit.v_condition_holds() { "holds" } else { "fails" }
    );
    s
}

#[derive(Serialize)]
struct OptimizeJson<'a> {
    schema: &'static str,
    objective: String,
    best_value: f64,
    best_point: Vec<(String, f64)>,
    best_config: &'a ScenarioConfig,
    trace: &'a [(usize, f64)],
    evaluations: usize,
}

pub fn optimize_json(objective: &str, res: &OptResult) -> String {
    let doc = OptimizeJson {
        schema: SCHEMA_VERSION,
        objective: objective.to_string(),
        best_value: res.best_value,
        best_point: res
            .best_point
            .iter()
            .map(|(p, v)| (p.name().to_string(), *v))
            .collect(),
        best_config: &res.best_config,
        trace: &res.trace,
        evaluations: res.evaluations,
    };
    serde_json::to_string_pretty(&doc).expect("result serializes")
}

pub fn optimize_text(objective: &str, res: &OptResult) -> String {
    let mut s = format!("max {objective} = {:.12}\n", res.best_value);
    for (p, v) in &res.best_point {
        let _ = writeln!(s, "  {p:<8} = {v:.9}");
    }
    let trace: Vec<String> = res.trace.iter().map(|(i, v)| format!("{i}:{v:.12}")).collect();
    let _ = write!(s, "trace: {} ({} evaluations)", trace.join(" "), res.evaluations);
    s
}
