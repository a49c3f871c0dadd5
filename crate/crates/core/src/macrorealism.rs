//! No-signaling-in-time (NSIT) and arrow-of-time (AOT) analysis.
//!
//! An NSIT condition compares two physically different experiments: one in
//! which a measurement is actually performed and one in which it is omitted.
//! The tables here are always built from such separate experiments, never
//! from marginals of a single joint table.
//!
//! Outcome tables are indexed `[0] = +1`, `[1] = −1`.

use serde::Serialize;
use thiserror::Error;

use crate::expressions::{ConfigError, ScenarioConfig};
use crate::protocol::{one_time_dist, three_time_dist, two_time_dist, OutcomeDist, OUTCOMES};
use crate::quantum::{Dynamics, Evolution, PovmPair};
use crate::algebra::Mat2;

/// Margin by which a condition's left side must exceed its threshold;
/// differences below it are rounding noise at the boundary `L = 1` or
/// `V = 1`, which is not a violation.
pub const CONDITION_MARGIN: f64 = 1e-12;

/// Two-outcome-pair table `t[i][j]` for outcomes `(OUTCOMES[i], OUTCOMES[j])`.
pub type PairTable = [[f64; 2]; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NsitError {
    #[error("no NSIT condition for measurement pair ({i}, {j}); need 1 ≤ i < j ≤ 3")]
    BadPair { i: usize, j: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Degrees of NSIT violation and the β/δ decompositions of `L` and `V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NsitReport {
    /// `D₍₁₎₂₃(m₂, m₃) = P₂₃(m₂, m₃) − Σ_{m₁} P₁₂₃(m₁, m₂, m₃)`.
    pub d123_table: PairTable,
    /// `D₁₍₂₎₃(m₁, m₃) = P₁₃(m₁, m₃) − Σ_{m₂} P₁₂₃(m₁, m₂, m₃)`.
    pub d1_23_table: PairTable,
    /// `D₍₁₎₂(m₂) = P₂(m₂) − Σ_{m₁} P₁₂(m₁, m₂)`.
    pub d12_table: [f64; 2],
    /// `P(+,+,−) + P(−,−,+)` of the three-time experiment.
    pub beta: f64,
    /// `P(−,+,+) + P(+,+,−)` of the three-time experiment.
    pub delta: f64,
    /// `L` evaluated on the three-time experiment alone.
    pub l123: f64,
    /// `V` evaluated on the three-time experiment alone.
    pub v123: f64,
    /// `Σ_{m₂=m₃} D₍₁₎₂₃ + Σ_{m₁=m₃} D₁₍₂₎₃`; `L > 1` iff this exceeds `2β`.
    pub lhs_l_condition: f64,
    /// `2 Σ_{m₁=m₃} D₁₍₂₎₃ − Σ_{m₂} m₂ D₍₁₎₂(m₂)`; `V > 1` iff this exceeds `4δ`.
    pub lhs_v_condition: f64,
    pub reductions: Reductions,
}

/// Scalar summaries of the D tables.
///
/// - `d1_23_equal`: `Σ_{m₁=m₃} D₁₍₂₎₃`. Under GAD this is
///   `½(γ₁₂(γ₂₃−1)+γ₁₃−γ₂₃)(−1 − cos 2θ (1−2p))`.
/// - `d1_23_unequal_minus_equal`: `Σ_{m₁≠m₃} − Σ_{m₁=m₃}` of `D₁₍₂₎₃`. Under
///   sharp unbiased unitary dynamics this is `sin 2g₁ sin 2g₂`.
/// - `d12_signed`: `Σ_{m₂} m₂ D₍₁₎₂(m₂)`, the term entering `V − V₁₂₃`.
/// - `d12_weighted`: `P₂(−) + Σ_{m₁} m₁ P₁₂(m₁, −)`. Under sharp unbiased
///   unitary dynamics this is `sin g₁ [2 sin g₁ cos²θ − cos g₁ sin 2θ sin φ]`.
///   It is an outcome-weighted sum, not a reduction of the `D₍₁₎₂` table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reductions {
    pub d1_23_equal: f64,
    pub d1_23_unequal_minus_equal: f64,
    pub d12_signed: f64,
    pub d12_weighted: f64,
}

impl NsitReport {
    /// Largest `|D|` over all three tables.
    pub fn max_abs_d(&self) -> f64 {
        self.d123_table
            .iter()
            .chain(self.d1_23_table.iter())
            .flatten()
            .chain(self.d12_table.iter())
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    /// Violation condition for `L`: `lhs_l_condition > 2β`.
    pub fn l_condition_holds(&self) -> bool {
        self.lhs_l_condition > 2.0 * self.beta + CONDITION_MARGIN
    }

    /// Violation condition for `V`: `lhs_v_condition > 4δ`. Equality means
    /// `V = 1`, which is not a violation.
    pub fn v_condition_holds(&self) -> bool {
        self.lhs_v_condition > 4.0 * self.delta + CONDITION_MARGIN
    }
}

pub fn sum_equal(t: &PairTable) -> f64 {
    t[0][0] + t[1][1]
}

pub fn sum_unequal(t: &PairTable) -> f64 {
    t[0][1] + t[1][0]
}

/// `Σ m·d(m)` over a single-outcome table.
pub fn signed_sum(d: &[f64; 2]) -> f64 {
    d[0] - d[1]
}

/// `Σ mᵢmⱼ t(mᵢ, mⱼ)`.
pub fn product_sum(t: &PairTable) -> f64 {
    sum_equal(t) - sum_unequal(t)
}

fn pair_table(d: &OutcomeDist) -> PairTable {
    let p = d.probs();
    [[p[0], p[1]], [p[2], p[3]]]
}

fn single_table(d: &OutcomeDist) -> [f64; 2] {
    let p = d.probs();
    [p[0], p[1]]
}

fn sub_pair(a: PairTable, b: PairTable) -> PairTable {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

/// Sums a three-time table over slot `drop` (0, 1 or 2).
fn drop_slot(d: &OutcomeDist, drop: usize) -> PairTable {
    let p = d.probs();
    let mut t = [[0.0; 2]; 2];
    for (idx, value) in p.iter().enumerate() {
        let bits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
        let kept: Vec<usize> = (0..3).filter(|&s| s != drop).map(|s| bits[s]).collect();
        t[kept[0]][kept[1]] += value;
    }
    t
}

/// Every experiment the analysis needs, run once.
struct Experiments {
    p123: OutcomeDist,
    p23: OutcomeDist,
    p13: OutcomeDist,
    p12: OutcomeDist,
    p2: OutcomeDist,
}

fn run_experiments(cfg: &ScenarioConfig) -> Result<Experiments, ConfigError> {
    let s = cfg.prepare()?;
    let id = Evolution::Identity;
    Ok(Experiments {
        p123: three_time_dist(&s.rho, &s.povm, &s.ev12, &s.ev23),
        p23: two_time_dist(&s.rho, &s.povm, &s.ev12, &s.ev23),
        p13: two_time_dist(&s.rho, &s.povm, &id, &s.ev13),
        p12: two_time_dist(&s.rho, &s.povm, &id, &s.ev12),
        p2: one_time_dist(&s.rho, &s.povm, &s.ev12),
    })
}

/// Full NSIT report of a scenario.
pub fn analyze(cfg: &ScenarioConfig) -> Result<NsitReport, ConfigError> {
    let x = run_experiments(cfg)?;
    let d123_table = sub_pair(pair_table(&x.p23), drop_slot(&x.p123, 0));
    let d1_23_table = sub_pair(pair_table(&x.p13), drop_slot(&x.p123, 1));
    let p12 = pair_table(&x.p12);
    let p2 = single_table(&x.p2);
    let d12_table = [p2[0] - (p12[0][0] + p12[1][0]), p2[1] - (p12[0][1] + p12[1][1])];

    let prob = |o: [i8; 3]| x.p123.prob(&o);
    let beta = prob([1, 1, -1]) + prob([-1, -1, 1]);
    let delta = prob([-1, 1, 1]) + prob([1, 1, -1]);
    let (l123, v123) = three_time_lv(&x.p123);

    let reductions = Reductions {
        d1_23_equal: sum_equal(&d1_23_table),
        d1_23_unequal_minus_equal: sum_unequal(&d1_23_table) - sum_equal(&d1_23_table),
        d12_signed: signed_sum(&d12_table),
        d12_weighted: p2[1] + p12[0][1] - p12[1][1],
    };
    Ok(NsitReport {
        d123_table,
        d1_23_table,
        d12_table,
        beta,
        delta,
        l123,
        v123,
        lhs_l_condition: sum_equal(&d123_table) + sum_equal(&d1_23_table),
        lhs_v_condition: 2.0 * sum_equal(&d1_23_table) - reductions.d12_signed,
        reductions,
    })
}

/// `L` and `V` computed from a single three-time table.
pub fn three_time_lv(p123: &OutcomeDist) -> (f64, f64) {
    let mut l = 0.0;
    let mut v = 0.0;
    for (idx, p) in p123.probs().iter().enumerate() {
        let m = |slot: usize| if (idx >> (2 - slot)) & 1 == 0 { 1.0 } else { -1.0 };
        let (m1, m2, m3) = (m(0), m(1), m(2));
        l += (-m1 * m2 + m2 * m3 + m1 * m3) * p;
        v += (m1 * m2 * m3 + m1 * m3 - m2) * p;
    }
    (l, v)
}

/// Both sides of a violation condition and the residual of the identity
/// behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionCheck {
    pub lhs: f64,
    /// `2β` for `L`, `4δ` for `V`.
    pub rhs: f64,
    pub residual: f64,
}

impl DecompositionCheck {
    pub fn condition_holds(&self) -> bool {
        self.lhs > self.rhs + CONDITION_MARGIN
    }
}

/// Checks `L − L₁₂₃ = Σ m₂m₃ D₍₁₎₂₃ + Σ m₁m₃ D₁₍₂₎₃`.
pub fn decomposition_check_l(cfg: &ScenarioConfig) -> Result<DecompositionCheck, ConfigError> {
    let report = analyze(cfg)?;
    let l = cfg.prepare()?.l();
    let predicted = product_sum(&report.d123_table) + product_sum(&report.d1_23_table);
    Ok(DecompositionCheck {
        lhs: report.lhs_l_condition,
        rhs: 2.0 * report.beta,
        residual: (l - report.l123) - predicted,
    })
}

/// Checks `V − V₁₂₃ = 2 Σ_{m₁=m₃} D₁₍₂₎₃ − Σ m₂ D₍₁₎₂(m₂)`.
pub fn decomposition_check_v(cfg: &ScenarioConfig) -> Result<DecompositionCheck, ConfigError> {
    let report = analyze(cfg)?;
    let v = cfg.prepare()?.v();
    Ok(DecompositionCheck {
        lhs: report.lhs_v_condition,
        rhs: 4.0 * report.delta,
        residual: (v - report.v123) - report.lhs_v_condition,
    })
}

/// `P(mⱼ) − Σ_{mᵢ} P(mᵢ, mⱼ)` for the pair `(i, j)`; the first experiment
/// omits the measurement at `tᵢ`.
pub fn two_time_nsit(cfg: &ScenarioConfig, i: usize, j: usize) -> Result<[f64; 2], NsitError> {
    let s = cfg.prepare()?;
    let id = Evolution::Identity;
    let (without, with) = match (i, j) {
        (1, 2) => (
            one_time_dist(&s.rho, &s.povm, &s.ev12),
            two_time_dist(&s.rho, &s.povm, &id, &s.ev12),
        ),
        (1, 3) => (
            one_time_dist(&s.rho, &s.povm, &s.ev13),
            two_time_dist(&s.rho, &s.povm, &id, &s.ev13),
        ),
        (2, 3) => (
            one_time_dist(&s.rho, &s.povm, &Then(&s.ev12, &s.ev23)),
            two_time_dist(&s.rho, &s.povm, &s.ev12, &s.ev23),
        ),
        _ => return Err(NsitError::BadPair { i, j }),
    };
    let p = single_table(&without);
    let q = pair_table(&with);
    Ok([p[0] - (q[0][0] + q[1][0]), p[1] - (q[0][1] + q[1][1])])
}

/// Two dynamics applied back to back.
struct Then<'a, A: ?Sized, B: ?Sized>(&'a A, &'a B);

impl<A: Dynamics + ?Sized, B: Dynamics + ?Sized> Dynamics for Then<'_, A, B> {
    fn evolve(&self, rho: &Mat2) -> Mat2 {
        self.1.evolve(&self.0.evolve(rho))
    }
}

/// Largest AOT residual of a scenario; zero for every trace-preserving map.
pub fn aot_check(cfg: &ScenarioConfig) -> Result<f64, ConfigError> {
    let s = cfg.prepare()?;
    Ok(aot_residual(&s.rho, &s.povm, &s.ev12, &s.ev23, &s.ev13))
}

/// Largest violation of "a later measurement does not change earlier
/// statistics" over `AOT₁(₂)`, `AOT₁(₃)`, `AOT₂(₃)`, `AOT₁₂(₃)` and
/// `AOT₁(₂₃)`, for arbitrary (possibly non-physical) dynamics.
pub fn aot_residual<A, B, C>(rho0: &Mat2, povm: &PovmPair, ev12: &A, ev23: &B, ev13: &C) -> f64
where
    A: Dynamics + ?Sized,
    B: Dynamics + ?Sized,
    C: Dynamics + ?Sized,
{
    let id = Evolution::Identity;
    let p1 = single_table(&one_time_dist(rho0, povm, &id));
    let p2 = single_table(&one_time_dist(rho0, povm, ev12));
    let p12 = pair_table(&two_time_dist(rho0, povm, &id, ev12));
    let p13 = pair_table(&two_time_dist(rho0, povm, &id, ev13));
    let p23 = pair_table(&two_time_dist(rho0, povm, ev12, ev23));
    let p123 = three_time_dist(rho0, povm, ev12, ev23);
    let p12_from_123 = drop_slot(&p123, 2);

    let mut worst = 0.0_f64;
    for a in 0..OUTCOMES.len() {
        worst = worst.max((p1[a] - (p12[a][0] + p12[a][1])).abs());
        worst = worst.max((p1[a] - (p13[a][0] + p13[a][1])).abs());
        worst = worst.max((p2[a] - (p23[a][0] + p23[a][1])).abs());
        worst = worst.max((p1[a] - (p12_from_123[a][0] + p12_from_123[a][1])).abs());
        for b in 0..OUTCOMES.len() {
            worst = worst.max((p12[a][b] - p12_from_123[a][b]).abs());
        }
    }
    worst
}
