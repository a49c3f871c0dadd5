//! Leggett-Garg expressions: scenario description, numeric evaluation through
//! the measurement pipeline, and closed-form oracles.

mod closed_form;

pub use closed_form::{
    channel_correlators, closed_form_l, closed_form_v, unitary_correlators, ClosedFormError,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Mat2;
use crate::protocol::{correlator, one_time_dist, three_time_dist, two_time_dist};
use crate::quantum::{
    composed_gamma, make_povm, make_state, Evolution, GadParams, PovmPair, PureStateParams,
    QuantumError, Z_AXIS,
};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{path}: {reason}")]
pub struct ConfigError {
    pub path: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

/// Biasedness of the measurement.
///
/// The two families with dedicated closed forms are flagged explicitly so that
/// regime dispatch never compares `α` against `1 − η` in floating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bias {
    /// `α = 0`.
    Unbiased,
    /// `α = 1 − η`.
    OneMinusEta,
    /// Any `α` with `|α| + η ≤ 1`.
    Free(f64),
}

/// GAD parameters of the three intervals `t₁→t₂`, `t₂→t₃`, `t₁→t₃`.
///
/// The three dampings are independent unless `strict_composition` is set, in
/// which case `γ₁₃` is replaced by the composition of `γ₁₂` and `γ₂₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDyn {
    pub p: f64,
    pub gamma12: f64,
    pub gamma23: f64,
    #[serde(default)]
    pub gamma13: f64,
    #[serde(default)]
    pub strict_composition: bool,
}

impl ChannelDyn {
    pub fn new(p: f64, gamma12: f64, gamma23: f64, gamma13: f64) -> Self {
        ChannelDyn {
            p,
            gamma12,
            gamma23,
            gamma13,
            strict_composition: false,
        }
    }

    /// Channel whose `t₁→t₃` damping is the composition of the two steps.
    pub fn composed(p: f64, gamma12: f64, gamma23: f64) -> Self {
        ChannelDyn {
            p,
            gamma12,
            gamma23,
            gamma13: composed_gamma(gamma12, gamma23),
            strict_composition: true,
        }
    }

    pub fn effective_gamma13(&self) -> f64 {
        if self.strict_composition {
            composed_gamma(self.gamma12, self.gamma23)
        } else {
            self.gamma13
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioDynamics {
    /// `exp(−i g σx)` between measurements; `t₁→t₃` uses `g₁ + g₂`.
    Unitary { g1: f64, g2: f64 },
    Channel(ChannelDyn),
}

impl ScenarioDynamics {
    pub fn is_unitary(&self) -> bool {
        matches!(self, ScenarioDynamics::Unitary { .. })
    }
}

/// Every free parameter of a three-time scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub state: PureStateParams,
    pub eta: f64,
    pub bias: Bias,
    pub dynamics: ScenarioDynamics,
}

impl ScenarioConfig {
    pub fn unitary(state: PureStateParams, eta: f64, bias: Bias, g1: f64, g2: f64) -> Self {
        ScenarioConfig {
            state,
            eta,
            bias,
            dynamics: ScenarioDynamics::Unitary { g1, g2 },
        }
    }

    pub fn channel(state: PureStateParams, eta: f64, bias: Bias, channel: ChannelDyn) -> Self {
        ScenarioConfig {
            state,
            eta,
            bias,
            dynamics: ScenarioDynamics::Channel(channel),
        }
    }

    pub fn alpha(&self) -> f64 {
        match self.bias {
            Bias::Unbiased => 0.0,
            Bias::OneMinusEta => 1.0 - self.eta,
            Bias::Free(alpha) => alpha,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.prepare().map(|_| ())
    }

    pub fn povm(&self) -> Result<PovmPair, ConfigError> {
        for (path, value) in [("state.theta", self.state.theta), ("state.phi", self.state.phi)] {
            if !value.is_finite() {
                return Err(ConfigError::new(path, "must be finite"));
            }
        }
        let path = match self.bias {
            Bias::Free(_) => "bias.free",
            _ => "eta",
        };
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(ConfigError::new(
                "eta",
                format!("sharpness must lie in [0, 1], got {}", self.eta),
            ));
        }
        make_povm(self.alpha(), self.eta, Z_AXIS).map_err(|e| ConfigError::new(path, e.to_string()))
    }

    /// Evolutions for the intervals `t₁→t₂`, `t₂→t₃` and `t₁→t₃`.
    pub fn evolutions(&self) -> Result<[Evolution; 3], ConfigError> {
        match self.dynamics {
            ScenarioDynamics::Unitary { g1, g2 } => {
                for (path, value) in [("dynamics.unitary.g1", g1), ("dynamics.unitary.g2", g2)] {
                    if !value.is_finite() {
                        return Err(ConfigError::new(path, "must be finite"));
                    }
                }
                Ok([
                    Evolution::Unitary(g1),
                    Evolution::Unitary(g2),
                    Evolution::Unitary(g1 + g2),
                ])
            }
            ScenarioDynamics::Channel(ch) => {
                let gad = |name: &str, gamma: f64| {
                    GadParams::new(ch.p, gamma).map(Evolution::Gad).map_err(|e| {
                        let field = match e {
                            QuantumError::GadOutOfRange { name: "p", .. }
                            | QuantumError::NonFinite("p") => "p",
                            _ => name,
                        };
                        ConfigError::new(format!("dynamics.channel.{field}"), e.to_string())
                    })
                };
                Ok([
                    gad("gamma12", ch.gamma12)?,
                    gad("gamma23", ch.gamma23)?,
                    gad("gamma13", ch.effective_gamma13())?,
                ])
            }
        }
    }

    pub fn prepare(&self) -> Result<PreparedScenario, ConfigError> {
        self.prepare_with_povm(self.povm()?)
    }

    /// Like [`prepare`](Self::prepare) but reuses an already built POVM;
    /// the caller guarantees it matches `eta` and the bias.
    pub fn prepare_with_povm(&self, povm: PovmPair) -> Result<PreparedScenario, ConfigError> {
        let [ev12, ev23, ev13] = self.evolutions()?;
        Ok(PreparedScenario {
            rho: make_state(self.state),
            povm,
            ev12,
            ev23,
            ev13,
        })
    }
}

/// A validated scenario with its operators built.
#[derive(Debug, Clone, Copy)]
pub struct PreparedScenario {
    pub rho: Mat2,
    pub povm: PovmPair,
    pub ev12: Evolution,
    pub ev23: Evolution,
    pub ev13: Evolution,
}

const UNMEASURED: Evolution = Evolution::Identity;

impl PreparedScenario {
    pub fn m1m2(&self) -> f64 {
        correlator(&two_time_dist(&self.rho, &self.povm, &UNMEASURED, &self.ev12))
    }

    /// Measured at `t₂` and `t₃` only; the state reaches `t₂` unmeasured.
    pub fn m2m3(&self) -> f64 {
        correlator(&two_time_dist(&self.rho, &self.povm, &self.ev12, &self.ev23))
    }

    pub fn m1m3(&self) -> f64 {
        correlator(&two_time_dist(&self.rho, &self.povm, &UNMEASURED, &self.ev13))
    }

    pub fn m1m2m3(&self) -> f64 {
        correlator(&three_time_dist(&self.rho, &self.povm, &self.ev12, &self.ev23))
    }

    pub fn m2(&self) -> f64 {
        correlator(&one_time_dist(&self.rho, &self.povm, &self.ev12))
    }

    pub fn correlators(&self) -> Correlators {
        Correlators {
            m1m2: self.m1m2(),
            m2m3: self.m2m3(),
            m1m3: self.m1m3(),
            m1m2m3: self.m1m2m3(),
            m2: self.m2(),
        }
    }

    pub fn l(&self) -> f64 {
        -self.m1m2() + self.m2m3() + self.m1m3()
    }

    pub fn v(&self) -> f64 {
        self.m1m2m3() + self.m1m3() - self.m2()
    }

    /// `L` under the relabeling `Mᵢ → sᵢMᵢ`.
    pub fn l_relabeled(&self, [s1, s2, s3]: [f64; 3]) -> f64 {
        -s1 * s2 * self.m1m2() + s2 * s3 * self.m2m3() + s1 * s3 * self.m1m3()
    }

    /// `V` under the relabeling `Mᵢ → sᵢMᵢ`.
    pub fn v_relabeled(&self, [s1, s2, s3]: [f64; 3]) -> f64 {
        s1 * s2 * s3 * self.m1m2m3() + s1 * s3 * self.m1m3() - s2 * self.m2()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlators {
    pub m1m2: f64,
    pub m2m3: f64,
    pub m1m3: f64,
    pub m1m2m3: f64,
    pub m2: f64,
}

/// Outcome relabelings `Mᵢ → sᵢMᵢ` that produce the four distinct versions of
/// each inequality. Flipping `M₃` alone reproduces one of these.
pub const RELABELINGS: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [-1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0],
    [-1.0, -1.0, 1.0],
];

impl Correlators {
    pub fn l(&self) -> f64 {
        self.l_relabeled([1.0; 3])
    }

    pub fn v(&self) -> f64 {
        self.v_relabeled([1.0; 3])
    }

    pub fn l_relabeled(&self, [s1, s2, s3]: [f64; 3]) -> f64 {
        -s1 * s2 * self.m1m2 + s2 * s3 * self.m2m3 + s1 * s3 * self.m1m3
    }

    pub fn v_relabeled(&self, [s1, s2, s3]: [f64; 3]) -> f64 {
        s1 * s2 * s3 * self.m1m2m3 + s1 * s3 * self.m1m3 - s2 * self.m2
    }
}

/// Which Leggett-Garg expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LgExpression {
    L,
    V,
}

impl std::str::FromStr for LgExpression {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L" | "l" => Ok(LgExpression::L),
            "V" | "v" => Ok(LgExpression::V),
            other => Err(format!("unknown expression `{other}` (expected L or V)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LgValues {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub correlators: Correlators,
    /// `L` under the four [`RELABELINGS`].
    pub l_variants: [f64; 4],
    /// `V` under the four [`RELABELINGS`].
    pub v_variants: [f64; 4],
}

impl LgValues {
    pub fn from_correlators(correlators: Correlators) -> Self {
        LgValues {
            l: correlators.l(),
            v: correlators.v(),
            correlators,
            l_variants: RELABELINGS.map(|s| correlators.l_relabeled(s)),
            v_variants: RELABELINGS.map(|s| correlators.v_relabeled(s)),
        }
    }

    pub fn get(&self, which: LgExpression) -> f64 {
        match which {
            LgExpression::L => self.l,
            LgExpression::V => self.v,
        }
    }
}

/// `L`, `V` and all correlators from the exact measurement pipeline.
pub fn evaluate_numeric(cfg: &ScenarioConfig) -> Result<LgValues, ConfigError> {
    let prepared = cfg.prepare()?;
    Ok(LgValues::from_correlators(prepared.correlators()))
}

/// Only the correlators `which` needs; used in inner optimization loops.
pub fn evaluate_expression(cfg: &ScenarioConfig, which: LgExpression) -> Result<f64, ConfigError> {
    let prepared = cfg.prepare()?;
    Ok(match which {
        LgExpression::L => prepared.l(),
        LgExpression::V => prepared.v(),
    })
}
