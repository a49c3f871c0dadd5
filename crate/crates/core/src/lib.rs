//! Temporal correlations of a sequentially measured qubit.
//!
//! The crate evaluates the standard Leggett-Garg expression
//! `L = −⟨M₁M₂⟩ + ⟨M₂M₃⟩ + ⟨M₁M₃⟩` and the third-order expression
//! `V = ⟨M₁M₂M₃⟩ + ⟨M₁M₃⟩ − ⟨M₂⟩` for biased unsharp measurements, with
//! either unitary dynamics or the generalized amplitude damping channel
//! between measurements. It also quantifies the no-signaling-in-time
//! conditions and searches the parameter space for maximal violations and
//! critical sharpness values.
//!
//! Layers, bottom up:
//!
//! - [`algebra`]: 2×2 complex matrices and the PSD square root.
//! - [`quantum`]: states, POVMs, unitaries, GAD Kraus operators.
//! - [`protocol`]: exact one/two/three-time outcome distributions.
//! - [`expressions`]: numeric `L`/`V` and the closed-form oracles.
//! - [`macrorealism`]: NSIT/AOT residuals and the β/δ decompositions.
//! - [`explorer`]: sweeps, grid maximization and threshold bisection.
//! - [`cli`]: the `lg-lab` command line.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod algebra;
pub mod cli;
pub mod explorer;
pub mod expressions;
pub mod macrorealism;
pub mod protocol;
pub mod quantum;

pub use algebra::{AlgebraError, Mat2};
pub use expressions::{
    closed_form_l, closed_form_v, evaluate_numeric, Bias, ChannelDyn, Correlators, LgValues,
    ScenarioConfig, ScenarioDynamics,
};
pub use macrorealism::{analyze, NsitReport};
pub use protocol::{correlator, OutcomeDist};
pub use quantum::{Evolution, GadParams, PovmPair, PureStateParams};
