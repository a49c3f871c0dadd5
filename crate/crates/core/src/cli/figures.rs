//! The six standard figure grids.
//!
//! | id | dynamics | axis            | columns                                   |
//! |----|----------|-----------------|-------------------------------------------|
//! | 1  | GAD      | p × γ₁₂         | p, gamma12, L                             |
//! | 2  | GAD      | p × γ₁₂         | p, gamma12, V                             |
//! | 3  | unitary  | g₁ (g₂ = π/6)   | g1, L, D                                  |
//! | 4  | GAD      | γ₁₂ (p = 0)     | gamma12, L, D                             |
//! | 5  | unitary  | g₁ (g₂ = π/4)   | g1, V, D_2_13, D_1_2, D_1_2_weighted      |
//! | 6  | GAD      | γ₁₂ (p = 0)     | gamma12, V, D                             |
//!
//! All use a sharp measurement (`η = 1`, `α = 0`) and 101 points per axis.
//! GAD figures use `θ = 0`, `γ₂₃ = γ₁₃ = 0`. Figures 1–2 sit in the
//! `α = 1 − η` family, which coincides with the unbiased one at `η = 1`.
//!
//! `D` columns: figure 3 reports `Σ_{m₁≠m₃} D₁₍₂₎₃ − Σ_{m₁=m₃} D₁₍₂₎₃`
//! (equal to `sin 2g₁ sin 2g₂`); figures 4 and 6 report `Σ_{m₁=m₃} D₁₍₂₎₃`
//! (equal to `γ₁₂` on this slice). Figure 5 reports the same reduction as
//! figure 3, `Σ m₂ D₍₁₎₂(m₂)`, and the outcome-weighted sum
//! `P₂(−) + Σ m₁ P₁₂(m₁, −)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

use crate::explorer::{sweep, Axis, ExplorerError, Param, Quantity, SweepSpec, SweepTable};
use crate::expressions::{Bias, ChannelDyn, ScenarioConfig};
use crate::quantum::PureStateParams;

pub const FIGURE_POINTS: usize = 101;
pub const FIGURE_IDS: std::ops::RangeInclusive<u32> = 1..=6;

fn gad_base(bias: Bias) -> ScenarioConfig {
    ScenarioConfig::channel(
        PureStateParams::ground(),
        1.0,
        bias,
        ChannelDyn::new(0.0, 0.0, 0.0, 0.0),
    )
}

/// Sweep definition of figure `id` plus the column renames applied to it.
pub fn figure_spec(id: u32) -> Option<(SweepSpec, Vec<(&'static str, &'static str)>)> {
    let n = FIGURE_POINTS;
    let spec = |base, axes, quantities| SweepSpec {
        base,
        axes,
        quantities,
    };
    Some(match id {
        1 | 2 => (
            spec(
                gad_base(Bias::OneMinusEta),
                vec![Axis::new(Param::P, 0.0, 1.0, n), Axis::new(Param::Gamma12, 0.0, 1.0, n)],
                vec![if id == 1 { Quantity::L } else { Quantity::V }],
            ),
            vec![],
        ),
        3 => (
            spec(
                ScenarioConfig::unitary(PureStateParams::ground(), 1.0, Bias::Unbiased, 0.0, FRAC_PI_6),
                vec![Axis::new(Param::G1, 0.0, PI, n)],
                vec![Quantity::L, Quantity::D2_13UnequalMinusEqual],
            ),
            vec![("D_2_13_unequal_minus_equal", "D")],
        ),
        4 | 6 => (
            spec(
                gad_base(Bias::Unbiased),
                vec![Axis::new(Param::Gamma12, 0.0, 1.0, n)],
                vec![if id == 4 { Quantity::L } else { Quantity::V }, Quantity::D2_13Equal],
            ),
            vec![("D_2_13_equal", "D")],
        ),
        5 => (
            spec(
                ScenarioConfig::unitary(
                    PureStateParams::new(FRAC_PI_4, FRAC_PI_2),
                    1.0,
                    Bias::Unbiased,
                    0.0,
                    FRAC_PI_4,
                ),
                vec![Axis::new(Param::G1, 0.0, PI, n)],
                vec![
                    Quantity::V,
                    Quantity::D2_13UnequalMinusEqual,
                    Quantity::D1_2Signed,
                    Quantity::D1_2Weighted,
                ],
            ),
            vec![
                ("D_2_13_unequal_minus_equal", "D_2_13"),
                ("D_1_2_signed", "D_1_2"),
            ],
        ),
        _ => return None,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum FigureError {
    #[error("unknown figure id {0}; expected 1 to 6")]
    UnknownId(u32),
    #[error(transparent)]
    Explorer(#[from] ExplorerError),
}

pub fn figure_table(id: u32) -> Result<SweepTable, FigureError> {
    let (spec, renames) = figure_spec(id).ok_or(FigureError::UnknownId(id))?;
    let mut table = sweep(&spec)?;
    for column in &mut table.columns {
        if let Some((_, to)) = renames.iter().find(|(from, _)| from == column) {
            *column = to.to_string();
        }
    }
    Ok(table)
}
