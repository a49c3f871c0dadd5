use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{linspace, ExplorerError, Objective, Param};
use crate::expressions::{evaluate_numeric, LgExpression, ScenarioConfig};
use crate::quantum::PovmPair;

/// Values closer than this count as equal; the earlier (lexicographically
/// smaller) parameter tuple then wins.
const TIE_TOLERANCE: f64 = 1e-12;
/// Grid points evaluated in parallel before a sequential selection pass.
const CHUNK: usize = 1 << 14;
/// Neighbours probed on each side of the incumbent along one axis.
const LOCAL_REACH: i32 = 4;
const MAX_PASSES_PER_ROUND: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeAxis {
    pub param: Param,
    pub lo: f64,
    pub hi: f64,
}

impl FreeAxis {
    pub fn new(param: Param, lo: f64, hi: f64) -> Self {
        FreeAxis { param, lo, hi }
    }
}

/// A bounded maximization over some parameters of `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxSpec {
    pub objective: Objective,
    pub base: ScenarioConfig,
    pub free: Vec<FreeAxis>,
    /// Coarse grid points per free axis.
    pub grid_points: usize,
    /// Coordinate-refinement rounds after the grid.
    pub rounds: usize,
    /// Step reduction between rounds.
    pub shrink: f64,
}

impl MaxSpec {
    pub fn new(objective: impl Into<Objective>, base: ScenarioConfig, free: Vec<FreeAxis>) -> Self {
        MaxSpec {
            objective: objective.into(),
            base,
            free,
            grid_points: 25,
            rounds: 8,
            shrink: 0.25,
        }
    }

    pub fn with_grid_points(mut self, n: usize) -> Self {
        self.grid_points = n;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptResult {
    pub best_value: f64,
    pub best_config: ScenarioConfig,
    /// Free parameters at the optimum, in the order of `MaxSpec::free`.
    pub best_point: Vec<(Param, f64)>,
    /// Best value after the grid (iteration 0) and after each round.
    pub trace: Vec<(usize, f64)>,
    pub evaluations: usize,
}

impl OptResult {
    pub fn get(&self, param: Param) -> Option<f64> {
        self.best_point
            .iter()
            .find(|(p, _)| *p == param)
            .map(|(_, v)| *v)
    }
}

struct Evaluator<'a> {
    spec: &'a MaxSpec,
    /// Shared POVM when neither `eta` nor `alpha` is free.
    povm: Option<PovmPair>,
}

impl Evaluator<'_> {
    fn config(&self, x: &[f64]) -> ScenarioConfig {
        let mut cfg = self.spec.base;
        for (axis, value) in self.spec.free.iter().zip(x) {
            // applicability was checked before the search started
            axis.param.set(&mut cfg, *value).expect("parameter applies");
        }
        cfg
    }

    fn value(&self, x: &[f64]) -> Option<f64> {
        let cfg = self.config(x);
        let prepared = match self.povm {
            Some(povm) => cfg.prepare_with_povm(povm),
            None => cfg.prepare(),
        }
        .ok()?;
        let v = self.spec.objective.evaluate(&prepared);
        v.is_finite().then_some(v)
    }
}

/// Grid scan followed by shrinking coordinate refinement.
///
/// Deterministic: the grid is scanned in lexicographic order of the free
/// parameters, ties within `1e-12` keep the earlier point, and the local
/// search only accepts strict improvements. Parallelism affects speed only.
pub fn maximize(spec: &MaxSpec) -> Result<OptResult, ExplorerError> {
    let d = spec.free.len();
    for axis in &spec.free {
        if !(axis.lo.is_finite() && axis.hi.is_finite() && axis.lo <= axis.hi) {
            return Err(ExplorerError::EmptyFeasibleRegion);
        }
        axis.param.get(&spec.base)?;
    }
    let povm = if spec.free.iter().any(|a| a.param.affects_povm()) {
        None
    } else {
        Some(spec.base.povm().map_err(|_| ExplorerError::EmptyFeasibleRegion)?)
    };
    let eval = Evaluator { spec, povm };
    let n = spec.grid_points.max(1);
    let grids: Vec<Vec<f64>> = spec
        .free
        .iter()
        .map(|a| {
            if a.lo == a.hi {
                vec![a.lo]
            } else {
                linspace(a.lo, a.hi, n)
            }
        })
        .collect();
    let total: usize = grids.iter().map(Vec::len).product();

    let point_at = |mut flat: usize| {
        let mut x = vec![0.0; d];
        for i in (0..d).rev() {
            x[i] = grids[i][flat % grids[i].len()];
            flat /= grids[i].len();
        }
        x
    };

    let mut best: Option<(f64, usize)> = None;
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        let values: Vec<Option<f64>> = (start..end)
            .into_par_iter()
            .map(|flat| eval.value(&point_at(flat)))
            .collect();
        for (offset, v) in values.into_iter().enumerate() {
            if let Some(v) = v {
                if best.is_none_or(|(b, _)| v > b + TIE_TOLERANCE) {
                    best = Some((v, start + offset));
                }
            }
        }
        start = end;
    }
    let (mut best_value, flat) = best.ok_or(ExplorerError::EmptyFeasibleRegion)?;
    let mut x = point_at(flat);
    let mut evaluations = total;
    let mut trace = vec![(0, best_value)];

    let mut step: Vec<f64> = spec
        .free
        .iter()
        .zip(&grids)
        .map(|(a, g)| (a.hi - a.lo) / (g.len().max(2) - 1) as f64)
        .collect();
    for round in 1..=spec.rounds {
        for _ in 0..MAX_PASSES_PER_ROUND {
            let mut improved = false;
            for i in 0..d {
                let axis = spec.free[i];
                if step[i] == 0.0 {
                    continue;
                }
                let centre = x[i];
                let mut last = f64::NAN;
                let mut choice: Option<(f64, f64)> = None;
                for k in -LOCAL_REACH..=LOCAL_REACH {
                    if k == 0 {
                        continue;
                    }
                    let candidate = (centre + k as f64 * step[i]).clamp(axis.lo, axis.hi);
                    if candidate == centre || candidate == last {
                        continue;
                    }
                    last = candidate;
                    x[i] = candidate;
                    evaluations += 1;
                    if let Some(v) = eval.value(&x) {
                        let incumbent = choice.map_or(best_value, |(b, _)| b);
                        if v > incumbent + TIE_TOLERANCE {
                            choice = Some((v, candidate));
                        }
                    }
                }
                match choice {
                    Some((v, candidate)) => {
                        x[i] = candidate;
                        best_value = v;
                        improved = true;
                    }
                    None => x[i] = centre,
                }
            }
            if !improved {
                break;
            }
        }
        trace.push((round, best_value));
        for s in &mut step {
            *s *= spec.shrink;
        }
    }

    let best_config = eval.config(&x);
    let values = evaluate_numeric(&best_config)?;
    let k = spec.objective.relabeling;
    let best_value = match spec.objective.expression {
        LgExpression::L => values.l_variants[k],
        LgExpression::V => values.v_variants[k],
    };
    Ok(OptResult {
        best_value,
        best_config,
        best_point: spec.free.iter().map(|a| a.param).zip(x).collect(),
        trace,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explorer::Regime;
    use std::f64::consts::PI;

    #[test]
    fn lueders_bound_of_l() {
        let spec = MaxSpec::new(
            Objective::L,
            Regime::UnitaryUnbiased.base(1.0),
            vec![FreeAxis::new(Param::G1, 0.0, PI), FreeAxis::new(Param::G2, 0.0, PI)],
        );
        let res = maximize(&spec).unwrap();
        assert!((res.best_value - 1.5).abs() < 1e-6, "{res:?}");
        assert!(res.trace.windows(2).all(|w| w[1].1 >= w[0].1));
    }

    #[test]
    fn deterministic_and_consistent() {
        let spec = MaxSpec::new(
            Objective::V,
            Regime::ChannelBiased.base(0.7),
            Regime::ChannelBiased.free_axes(),
        )
        .with_grid_points(5);
        let a = maximize(&spec).unwrap();
        let b = maximize(&spec).unwrap();
        assert_eq!(a, b);
        let direct = evaluate_numeric(&a.best_config).unwrap().v;
        assert!((a.best_value - direct).abs() < 1e-12);
    }

    #[test]
    fn plateau_prefers_smallest_tuple() {
        // L at the channel optimum does not depend on γ₂₃ when γ₁₂ = 1
        let spec = MaxSpec::new(
            Objective::L,
            Regime::ChannelUnbiased.base(1.0),
            Regime::ChannelUnbiased.free_axes(),
        )
        .with_grid_points(5);
        let res = maximize(&spec).unwrap();
        assert!((res.best_value - 3.0).abs() < 1e-9);
        assert_eq!(res.get(Param::Gamma23), Some(0.0));
        assert_eq!(res.get(Param::Gamma13), Some(0.0));
    }

    #[test]
    fn empty_region() {
        let spec = MaxSpec::new(
            Objective::L,
            Regime::UnitaryUnbiased.base(1.0),
            vec![FreeAxis::new(Param::G1, 1.0, 0.0)],
        );
        assert_eq!(maximize(&spec).unwrap_err(), ExplorerError::EmptyFeasibleRegion);
        let spec = MaxSpec::new(
            Objective::L,
            Regime::UnitaryUnbiased.base(1.0),
            vec![FreeAxis::new(Param::Eta, 1.5, 2.0)],
        );
        assert_eq!(maximize(&spec).unwrap_err(), ExplorerError::EmptyFeasibleRegion);
    }
}
