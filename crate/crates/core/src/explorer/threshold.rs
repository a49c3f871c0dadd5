use serde::Serialize;

use super::{maximize, ExplorerError, MaxSpec, Objective, Regime};

/// A maximum counts as a violation only above `1 + VIOLATION_MARGIN`.
///
/// With `α = 1 − η` under GAD the maximum equals 1 exactly on a whole
/// interval of `η`; without the margin, rounding noise would decide the
/// sign there.
pub const VIOLATION_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdSpec {
    pub objective: Objective,
    pub regime: Regime,
    /// Upper end of the bisection interval; must show a violation.
    pub eta_max: f64,
    /// Bisection stops once the bracket is narrower than this.
    pub tolerance: f64,
    /// Coarse grid points per axis of each inner maximization.
    pub inner_grid: usize,
}

impl ThresholdSpec {
    pub fn new(objective: impl Into<Objective>, regime: Regime) -> Self {
        ThresholdSpec {
            objective: objective.into(),
            regime,
            eta_max: 1.0,
            tolerance: 1e-3,
            inner_grid: 15,
        }
    }

    /// Maximum of the objective over every other parameter at `eta`.
    pub fn max_at(&self, eta: f64) -> Result<f64, ExplorerError> {
        let spec = MaxSpec::new(self.objective, self.regime.base(eta), self.regime.free_axes())
            .with_grid_points(self.inner_grid);
        Ok(maximize(&spec)?.best_value)
    }
}

/// Smallest sharpness at which the objective can exceed 1 in `regime`.
pub fn eta_threshold(
    objective: impl Into<Objective>,
    regime: Regime,
) -> Result<f64, ExplorerError> {
    eta_threshold_with(&ThresholdSpec::new(objective, regime))
}

/// Bisection on `η ∈ [0, eta_max]` of `max(objective) − 1`.
pub fn eta_threshold_with(spec: &ThresholdSpec) -> Result<f64, ExplorerError> {
    if !(spec.eta_max > 0.0 && spec.eta_max <= 1.0) {
        return Err(ExplorerError::EmptyFeasibleRegion);
    }
    let violates = |eta: f64| -> Result<(bool, f64), ExplorerError> {
        let best = spec.max_at(eta)?;
        Ok((best > 1.0 + VIOLATION_MARGIN, best))
    };
    let (at_top, best) = violates(spec.eta_max)?;
    if !at_top {
        return Err(ExplorerError::NoViolationAnywhere {
            best,
            eta_max: spec.eta_max,
        });
    }
    let (mut lo, mut hi) = (0.0, spec.eta_max);
    while hi - lo >= spec.tolerance {
        let mid = 0.5 * (lo + hi);
        if violates(mid)?.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expressions::LgExpression;

    #[test]
    fn unitary_l_threshold_is_root_two_thirds() {
        let mut spec = ThresholdSpec::new(LgExpression::L, Regime::UnitaryUnbiased);
        spec.inner_grid = 7;
        let eta = eta_threshold_with(&spec).unwrap();
        assert!((eta - (2.0_f64 / 3.0).sqrt()).abs() < 2e-3, "{eta}");
    }

    #[test]
    fn no_violation_below_threshold() {
        let mut spec = ThresholdSpec::new(LgExpression::L, Regime::UnitaryUnbiased);
        spec.eta_max = 0.7;
        spec.inner_grid = 7;
        assert!(matches!(
            eta_threshold_with(&spec),
            Err(ExplorerError::NoViolationAnywhere { .. })
        ));
    }
}
