//! Parameter sweeps, grid maximization and critical-sharpness search.

mod maximize;
mod sweep;
mod threshold;

pub use maximize::{maximize, FreeAxis, MaxSpec, OptResult};
pub use sweep::{sweep, Axis, SweepSpec, SweepTable};
pub use threshold::{eta_threshold, eta_threshold_with, ThresholdSpec, VIOLATION_MARGIN};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expressions::{
    Bias, ChannelDyn, ConfigError, LgExpression, PreparedScenario, ScenarioConfig,
    ScenarioDynamics, RELABELINGS,
};
use crate::quantum::PureStateParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExplorerError {
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("unknown quantity `{0}`")]
    UnknownQuantity(String),
    #[error("parameter `{param}` does not apply to {dynamics} dynamics")]
    ParameterNotApplicable { param: Param, dynamics: &'static str },
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("no valid configuration inside the search bounds")]
    EmptyFeasibleRegion,
    #[error("objective never exceeds 1 (maximum {best} at eta = {eta_max})")]
    NoViolationAnywhere { best: f64, eta_max: f64 },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// A scalar field of [`ScenarioConfig`] that can be swept or optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Theta,
    Phi,
    Eta,
    /// Setting this switches the bias to [`Bias::Free`].
    Alpha,
    G1,
    G2,
    P,
    Gamma12,
    Gamma23,
    Gamma13,
}

impl Param {
    pub const ALL: [Param; 10] = [
        Param::Theta,
        Param::Phi,
        Param::Eta,
        Param::Alpha,
        Param::G1,
        Param::G2,
        Param::P,
        Param::Gamma12,
        Param::Gamma23,
        Param::Gamma13,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Theta => "theta",
            Param::Phi => "phi",
            Param::Eta => "eta",
            Param::Alpha => "alpha",
            Param::G1 => "g1",
            Param::G2 => "g2",
            Param::P => "p",
            Param::Gamma12 => "gamma12",
            Param::Gamma23 => "gamma23",
            Param::Gamma13 => "gamma13",
        }
    }

    /// Whether changing this parameter changes the POVM.
    pub fn affects_povm(self) -> bool {
        matches!(self, Param::Eta | Param::Alpha)
    }

    pub fn get(self, cfg: &ScenarioConfig) -> Result<f64, ExplorerError> {
        let not_applicable = |dynamics| ExplorerError::ParameterNotApplicable {
            param: self,
            dynamics,
        };
        Ok(match (self, &cfg.dynamics) {
            (Param::Theta, _) => cfg.state.theta,
            (Param::Phi, _) => cfg.state.phi,
            (Param::Eta, _) => cfg.eta,
            (Param::Alpha, _) => cfg.alpha(),
            (Param::G1, ScenarioDynamics::Unitary { g1, .. }) => *g1,
            (Param::G2, ScenarioDynamics::Unitary { g2, .. }) => *g2,
            (Param::P, ScenarioDynamics::Channel(ch)) => ch.p,
            (Param::Gamma12, ScenarioDynamics::Channel(ch)) => ch.gamma12,
            (Param::Gamma23, ScenarioDynamics::Channel(ch)) => ch.gamma23,
            (Param::Gamma13, ScenarioDynamics::Channel(ch)) => ch.gamma13,
            (_, ScenarioDynamics::Unitary { .. }) => return Err(not_applicable("unitary")),
            (_, ScenarioDynamics::Channel(_)) => return Err(not_applicable("channel")),
        })
    }

    pub fn set(self, cfg: &mut ScenarioConfig, value: f64) -> Result<(), ExplorerError> {
        let not_applicable = |dynamics| ExplorerError::ParameterNotApplicable {
            param: self,
            dynamics,
        };
        match (self, &mut cfg.dynamics) {
            (Param::Theta, _) => cfg.state.theta = value,
            (Param::Phi, _) => cfg.state.phi = value,
            (Param::Eta, _) => cfg.eta = value,
            (Param::Alpha, _) => cfg.bias = Bias::Free(value),
            (Param::G1, ScenarioDynamics::Unitary { g1, .. }) => *g1 = value,
            (Param::G2, ScenarioDynamics::Unitary { g2, .. }) => *g2 = value,
            (Param::P, ScenarioDynamics::Channel(ch)) => ch.p = value,
            (Param::Gamma12, ScenarioDynamics::Channel(ch)) => ch.gamma12 = value,
            (Param::Gamma23, ScenarioDynamics::Channel(ch)) => ch.gamma23 = value,
            (Param::Gamma13, ScenarioDynamics::Channel(ch)) => ch.gamma13 = value,
            (_, ScenarioDynamics::Unitary { .. }) => return Err(not_applicable("unitary")),
            (_, ScenarioDynamics::Channel(_)) => return Err(not_applicable("channel")),
        }
        Ok(())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = ExplorerError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ExplorerError::UnknownParameter(s.to_string()))
    }
}

/// A named output column of a sweep.
///
/// D-table names follow "omitted measurement, then measured ones":
/// `D_1_23` is `D₍₁₎₂₃`, `D_2_13` is `D₁₍₂₎₃`, `D_1_2` is `D₍₁₎₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Quantity {
    L,
    V,
    M1M2,
    M2M3,
    M1M3,
    M1M2M3,
    M2,
    Beta,
    Delta,
    /// `Σ_{m₂=m₃} D₍₁₎₂₃`.
    D1_23Equal,
    /// `Σ_{m₁=m₃} D₁₍₂₎₃`.
    D2_13Equal,
    /// `Σ_{m₁≠m₃} D₁₍₂₎₃ − Σ_{m₁=m₃} D₁₍₂₎₃`.
    D2_13UnequalMinusEqual,
    /// `Σ m₂ D₍₁₎₂(m₂)`.
    D1_2Signed,
    /// `P₂(−) + Σ m₁ P₁₂(m₁, −)`.
    D1_2Weighted,
    /// Largest `|D|` over all tables.
    MaxAbsD,
}

impl Quantity {
    pub const ALL: [Quantity; 15] = [
        Quantity::L,
        Quantity::V,
        Quantity::M1M2,
        Quantity::M2M3,
        Quantity::M1M3,
        Quantity::M1M2M3,
        Quantity::M2,
        Quantity::Beta,
        Quantity::Delta,
        Quantity::D1_23Equal,
        Quantity::D2_13Equal,
        Quantity::D2_13UnequalMinusEqual,
        Quantity::D1_2Signed,
        Quantity::D1_2Weighted,
        Quantity::MaxAbsD,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::L => "L",
            Quantity::V => "V",
            Quantity::M1M2 => "m1m2",
            Quantity::M2M3 => "m2m3",
            Quantity::M1M3 => "m1m3",
            Quantity::M1M2M3 => "m1m2m3",
            Quantity::M2 => "m2",
            Quantity::Beta => "beta",
            Quantity::Delta => "delta",
            Quantity::D1_23Equal => "D_1_23_equal",
            Quantity::D2_13Equal => "D_2_13_equal",
            Quantity::D2_13UnequalMinusEqual => "D_2_13_unequal_minus_equal",
            Quantity::D1_2Signed => "D_1_2_signed",
            Quantity::D1_2Weighted => "D_1_2_weighted",
            Quantity::MaxAbsD => "max_abs_D",
        }
    }

    fn needs_nsit(self) -> bool {
        !matches!(
            self,
            Quantity::L
                | Quantity::V
                | Quantity::M1M2
                | Quantity::M2M3
                | Quantity::M1M3
                | Quantity::M1M2M3
                | Quantity::M2
        )
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl TryFrom<String> for Quantity {
    type Error = ExplorerError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Quantity> for String {
    fn from(q: Quantity) -> Self {
        q.name().to_string()
    }
}

impl FromStr for Quantity {
    type Err = ExplorerError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| ExplorerError::UnknownQuantity(s.to_string()))
    }
}

/// What [`maximize`] optimizes: `L` or `V` under one of the four
/// [`RELABELINGS`] (index 0 is the plain expression).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub expression: LgExpression,
    pub relabeling: usize,
}

impl Objective {
    pub const L: Objective = Objective {
        expression: LgExpression::L,
        relabeling: 0,
    };
    pub const V: Objective = Objective {
        expression: LgExpression::V,
        relabeling: 0,
    };

    pub fn evaluate(&self, s: &PreparedScenario) -> f64 {
        match (self.expression, self.relabeling) {
            (LgExpression::L, 0) => s.l(),
            (LgExpression::V, 0) => s.v(),
            (LgExpression::L, k) => s.l_relabeled(RELABELINGS[k]),
            (LgExpression::V, k) => s.v_relabeled(RELABELINGS[k]),
        }
    }
}

impl From<LgExpression> for Objective {
    fn from(expression: LgExpression) -> Self {
        Objective {
            expression,
            relabeling: 0,
        }
    }
}

impl FromStr for Objective {
    type Err = String;
    /// `L`, `V`, or `L:k` / `V:k` with relabeling index `k ∈ 0..4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (expr, k) = match s.split_once(':') {
            Some((e, k)) => (e, k),
            None => (s, "0"),
        };
        let expression: LgExpression = expr.parse()?;
        let relabeling: usize = k
            .parse()
            .ok()
            .filter(|k| *k < RELABELINGS.len())
            .ok_or_else(|| format!("relabeling index `{k}` must be 0, 1, 2 or 3"))?;
        Ok(Objective {
            expression,
            relabeling,
        })
    }
}

/// Parameter families with a fixed dynamics tag and bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    UnitaryUnbiased,
    /// Unitary dynamics with `α = 1 − η`.
    UnitaryBiased,
    ChannelUnbiased,
    /// GAD dynamics with `α = 1 − η`.
    ChannelBiased,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::UnitaryUnbiased,
        Regime::UnitaryBiased,
        Regime::ChannelUnbiased,
        Regime::ChannelBiased,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Regime::UnitaryUnbiased => "unitary-unbiased",
            Regime::UnitaryBiased => "unitary-biased",
            Regime::ChannelUnbiased => "channel-unbiased",
            Regime::ChannelBiased => "channel-biased",
        }
    }

    pub fn is_unitary(self) -> bool {
        matches!(self, Regime::UnitaryUnbiased | Regime::UnitaryBiased)
    }

    /// Starting configuration at sharpness `eta`; free parameters at zero.
    pub fn base(self, eta: f64) -> ScenarioConfig {
        let bias = match self {
            Regime::UnitaryUnbiased | Regime::ChannelUnbiased => Bias::Unbiased,
            Regime::UnitaryBiased | Regime::ChannelBiased => Bias::OneMinusEta,
        };
        let state = PureStateParams::ground();
        if self.is_unitary() {
            ScenarioConfig::unitary(state, eta, bias, 0.0, 0.0)
        } else {
            ScenarioConfig::channel(state, eta, bias, ChannelDyn::new(0.0, 0.0, 0.0, 0.0))
        }
    }

    /// Every parameter other than the sharpness, with its full range.
    ///
    /// Unitary angles cover `[0, π]` (the correlators have period π in each
    /// `g`); the state covers the Bloch sphere. Under GAD the phase `φ` has
    /// no effect, so only `θ ∈ [0, π/2]` is searched.
    pub fn free_axes(self) -> Vec<FreeAxis> {
        use std::f64::consts::{FRAC_PI_2, PI};
        if self.is_unitary() {
            vec![
                FreeAxis::new(Param::G1, 0.0, PI),
                FreeAxis::new(Param::G2, 0.0, PI),
                FreeAxis::new(Param::Theta, 0.0, PI),
                FreeAxis::new(Param::Phi, 0.0, 2.0 * PI),
            ]
        } else {
            vec![
                FreeAxis::new(Param::Theta, 0.0, FRAC_PI_2),
                FreeAxis::new(Param::P, 0.0, 1.0),
                FreeAxis::new(Param::Gamma12, 0.0, 1.0),
                FreeAxis::new(Param::Gamma23, 0.0, 1.0),
                FreeAxis::new(Param::Gamma13, 0.0, 1.0),
            ]
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Regime::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Regime::ALL.iter().map(|r| r.name()).collect();
                format!("unknown regime `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Param::ALL {
            assert_eq!(p.name().parse::<Param>().unwrap(), p);
        }
        for q in Quantity::ALL {
            assert_eq!(q.name().parse::<Quantity>().unwrap(), q);
        }
        for r in Regime::ALL {
            assert_eq!(r.name().parse::<Regime>().unwrap(), r);
        }
        assert!(matches!("kappa".parse::<Param>(), Err(ExplorerError::UnknownParameter(_))));
        assert!(matches!("W".parse::<Quantity>(), Err(ExplorerError::UnknownQuantity(_))));
    }

    #[test]
    fn objective_parsing() {
        assert_eq!("L".parse::<Objective>().unwrap(), Objective::L);
        assert_eq!("V:2".parse::<Objective>().unwrap().relabeling, 2);
        assert!("V:4".parse::<Objective>().is_err());
        assert!("W".parse::<Objective>().is_err());
    }

    #[test]
    fn params_respect_dynamics() {
        let mut cfg = Regime::ChannelUnbiased.base(1.0);
        Param::Gamma12.set(&mut cfg, 0.4).unwrap();
        assert_eq!(Param::Gamma12.get(&cfg).unwrap(), 0.4);
        assert!(matches!(
            Param::G1.set(&mut cfg, 0.1),
            Err(ExplorerError::ParameterNotApplicable { .. })
        ));
        Param::Alpha.set(&mut cfg, 0.0).unwrap();
        assert_eq!(cfg.bias, Bias::Free(0.0));
    }

    #[test]
    fn linspace_hits_endpoints_exactly() {
        let xs = linspace(0.0, 1.0, 101);
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[100], 1.0);
        assert_eq!(linspace(0.3, 0.3, 1), vec![0.3]);
    }
}
