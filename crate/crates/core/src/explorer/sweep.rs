use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{linspace, ExplorerError, Param, Quantity};
use crate::expressions::{evaluate_numeric, ScenarioConfig};
use crate::macrorealism::analyze;

/// One swept parameter. `steps = 1` is allowed only for a degenerate axis
/// with `start == stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(param: Param, start: f64, stop: f64, steps: usize) -> Self {
        Axis {
            param,
            start,
            stop,
            steps,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.steps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    pub axes: Vec<Axis>,
    pub quantities: Vec<Quantity>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), ExplorerError> {
        if self.axes.is_empty() || self.axes.len() > 3 {
            return Err(ExplorerError::InvalidSweep(format!(
                "need 1 to 3 axes, got {}",
                self.axes.len()
            )));
        }
        if self.quantities.is_empty() {
            return Err(ExplorerError::InvalidSweep("no quantities requested".into()));
        }
        for (i, axis) in self.axes.iter().enumerate() {
            if !axis.start.is_finite() || !axis.stop.is_finite() {
                return Err(ExplorerError::InvalidSweep(format!(
                    "axes[{i}] ({}): bounds must be finite",
                    axis.param
                )));
            }
            let degenerate = axis.steps == 1 && axis.start == axis.stop;
            if axis.steps < 2 && !degenerate {
                return Err(ExplorerError::InvalidSweep(format!(
                    "axes[{i}] ({}): steps must be at least 2",
                    axis.param
                )));
            }
            if self.axes[..i].iter().any(|a| a.param == axis.param) {
                return Err(ExplorerError::InvalidSweep(format!(
                    "axes[{i}]: parameter `{}` swept twice",
                    axis.param
                )));
            }
            axis.param.get(&self.base)?;
        }
        Ok(())
    }
}

/// Sweep output: one row per grid point, axis values first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// Evaluates the requested quantities on the full grid. The first axis
/// varies slowest. Rows are in grid order regardless of parallelism.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable, ExplorerError> {
    spec.validate()?;
    let points: Vec<Vec<f64>> = spec.axes.iter().map(Axis::points).collect();
    let total: usize = points.iter().map(Vec::len).product();
    let needs_nsit = spec.quantities.iter().any(|q| q.needs_nsit());

    let rows = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut coords = Vec::with_capacity(points.len());
            let mut rem = flat;
            for axis_points in points.iter().rev() {
                coords.push(axis_points[rem % axis_points.len()]);
                rem /= axis_points.len();
            }
            coords.reverse();
            let mut cfg = spec.base;
            for (axis, value) in spec.axes.iter().zip(&coords) {
                axis.param.set(&mut cfg, *value)?;
            }
            let values = evaluate_numeric(&cfg)?;
            let report = if needs_nsit { Some(analyze(&cfg)?) } else { None };
            let mut row = coords;
            for q in &spec.quantities {
                let c = &values.correlators;
                let r = report.as_ref();
                let nsit = |f: fn(&crate::macrorealism::NsitReport) -> f64| f(r.expect("report built"));
                row.push(match q {
                    Quantity::L => values.l,
                    Quantity::V => values.v,
                    Quantity::M1M2 => c.m1m2,
                    Quantity::M2M3 => c.m2m3,
                    Quantity::M1M3 => c.m1m3,
                    Quantity::M1M2M3 => c.m1m2m3,
                    Quantity::M2 => c.m2,
                    Quantity::Beta => nsit(|r| r.beta),
                    Quantity::Delta => nsit(|r| r.delta),
                    Quantity::D1_23Equal => {
                        nsit(|r| crate::macrorealism::sum_equal(&r.d123_table))
                    }
                    Quantity::D2_13Equal => nsit(|r| r.reductions.d1_23_equal),
                    Quantity::D2_13UnequalMinusEqual => {
                        nsit(|r| r.reductions.d1_23_unequal_minus_equal)
                    }
                    Quantity::D1_2Signed => nsit(|r| r.reductions.d12_signed),
                    Quantity::D1_2Weighted => nsit(|r| r.reductions.d12_weighted),
                    Quantity::MaxAbsD => nsit(|r| r.max_abs_d()),
                });
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, ExplorerError>>()?;

    let columns = spec
        .axes
        .iter()
        .map(|a| a.param.name().to_string())
        .chain(spec.quantities.iter().map(|q| q.name().to_string()))
        .collect();
    Ok(SweepTable { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expressions::{Bias, ChannelDyn};
    use crate::quantum::PureStateParams;

    fn fig1_base() -> ScenarioConfig {
        ScenarioConfig::channel(
            PureStateParams::ground(),
            1.0,
            Bias::Unbiased,
            ChannelDyn::new(0.0, 0.0, 0.0, 0.0),
        )
    }

    #[test]
    fn grid_order_and_corners() {
        let spec = SweepSpec {
            base: fig1_base(),
            axes: vec![Axis::new(Param::P, 0.0, 1.0, 3), Axis::new(Param::Gamma12, 0.0, 1.0, 5)],
            quantities: vec![Quantity::L],
        };
        let table = sweep(&spec).unwrap();
        assert_eq!(table.columns, ["p", "gamma12", "L"]);
        assert_eq!(table.rows.len(), 15);
        assert_eq!(&table.rows[4][..2], &[0.0, 1.0]);
        assert!((table.rows[4][2] - 3.0).abs() < 1e-12);
        assert!(table.rows[14][2] < 3.0);
    }

    #[test]
    fn degenerate_axis_gives_one_row() {
        let base = fig1_base();
        let spec = SweepSpec {
            base,
            axes: vec![Axis::new(Param::P, 0.2, 0.2, 1)],
            quantities: vec![Quantity::L, Quantity::V],
        };
        let table = sweep(&spec).unwrap();
        let mut cfg = base;
        Param::P.set(&mut cfg, 0.2).unwrap();
        let values = evaluate_numeric(&cfg).unwrap();
        assert_eq!(table.rows, vec![vec![0.2, values.l, values.v]]);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut spec = SweepSpec {
            base: fig1_base(),
            axes: vec![Axis::new(Param::P, 0.0, 1.0, 1)],
            quantities: vec![Quantity::L],
        };
        assert!(matches!(sweep(&spec), Err(ExplorerError::InvalidSweep(_))));
        spec.axes = vec![Axis::new(Param::G1, 0.0, 1.0, 3)];
        assert!(matches!(sweep(&spec), Err(ExplorerError::ParameterNotApplicable { .. })));
        spec.axes = vec![Axis::new(Param::Gamma12, 0.0, 2.0, 3)];
        assert!(matches!(sweep(&spec), Err(ExplorerError::Config(_))));
    }
}
