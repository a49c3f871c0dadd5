//! TOML run configuration.
//!
//! ```toml
//! [scenario]
//! eta = 1.0
//! bias = "unbiased"            # or "one_minus_eta", or { free = 0.2 }
//! state = { theta = 0.0, phi = 0.0 }
//! [scenario.dynamics.channel]  # or [scenario.dynamics.unitary] g1 = .., g2 = ..
//! p = 0.0
//! gamma12 = 1.0
//! gamma23 = 0.0
//! gamma13 = 0.0
//!
//! [sweep]                      # only read by `sweep`
//! axes = [{ param = "p", start = 0.0, stop = 1.0, steps = 101 }]
//! quantities = ["L", "V"]
//!
//! [output]
//! json = false
//! out = "sweep.csv"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::explorer::{Axis, Quantity, SweepSpec};
use crate::expressions::ScenarioConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub scenario: ScenarioConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputOptions>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axes: Vec<Axis>,
    pub quantities: Vec<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    #[serde(default)]
    pub json: bool,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl RunConfigFile {
    pub fn from_scenario(scenario: ScenarioConfig) -> Self {
        RunConfigFile {
            scenario,
            sweep: None,
            output: None,
        }
    }

    /// Parses and validates; the error message names the offending field.
    pub fn parse(text: &str) -> Result<Self, String> {
        let file: RunConfigFile = toml::from_str(text).map_err(|e| e.to_string())?;
        file.scenario
            .validate()
            .map_err(|e| format!("scenario.{e}"))?;
        if let Some(sweep) = &file.sweep {
            file.sweep_spec_from(sweep)
                .validate()
                .map_err(|e| format!("sweep: {e}"))?;
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    fn sweep_spec_from(&self, sweep: &SweepSection) -> SweepSpec {
        SweepSpec {
            base: self.scenario,
            axes: sweep.axes.clone(),
            quantities: sweep.quantities.clone(),
        }
    }

    pub fn sweep_spec(&self) -> Option<SweepSpec> {
        self.sweep.as_ref().map(|s| self.sweep_spec_from(s))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expressions::{Bias, ChannelDyn, ScenarioDynamics};
    use crate::quantum::PureStateParams;

    const CHANNEL: &str = r#"
[scenario]
eta = 1.0
bias = "unbiased"
state = { theta = 0.0 }
[scenario.dynamics.channel]
p = 0.0
gamma12 = 1.0
gamma23 = 0.0
gamma13 = 0.0

[sweep]
axes = [{ param = "p", start = 0.0, stop = 1.0, steps = 3 }]
quantities = ["L", "D_2_13_equal"]
"#;

    #[test]
    fn parses_channel_file() {
        let file = RunConfigFile::parse(CHANNEL).unwrap();
        assert!(matches!(file.scenario.dynamics, ScenarioDynamics::Channel(_)));
        let spec = file.sweep_spec().unwrap();
        assert_eq!(spec.quantities, [Quantity::L, Quantity::D2_13Equal]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = CHANNEL.replace("gamma13 = 0.0", "gamma13 = 0.0\ngamma99 = 1.0");
        let err = RunConfigFile::parse(&text).unwrap_err();
        assert!(err.contains("gamma99"), "{err}");
        let text = CHANNEL.replace("\"L\"", "\"W\"");
        assert!(RunConfigFile::parse(&text).unwrap_err().contains('W'));
    }

    #[test]
    fn invalid_values_name_their_field() {
        let text = CHANNEL.replace("eta = 1.0", "eta = 1.2");
        let err = RunConfigFile::parse(&text).unwrap_err();
        assert!(err.starts_with("scenario.eta"), "{err}");
    }

    #[test]
    fn round_trips_through_toml() {
        let file = RunConfigFile::from_scenario(ScenarioConfig::channel(
            PureStateParams::new(0.1234567890123, 0.3),
            0.7,
            Bias::Free(-0.1),
            ChannelDyn::new(0.3, 0.2, 0.1, 0.9),
        ));
        assert_eq!(RunConfigFile::parse(&file.to_toml()).unwrap(), file);
        let unitary = RunConfigFile::from_scenario(ScenarioConfig::unitary(
            PureStateParams::ground(),
            0.5,
            Bias::OneMinusEta,
            1.0,
            -2.0,
        ));
        assert_eq!(RunConfigFile::parse(&unitary.to_toml()).unwrap(), unitary);
    }
}
