//! Seeded self-check: closed forms against the pipeline, decomposition
//! identities, channel physicality and arrow-of-time conditions.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Mat2;
use crate::expressions::{
    closed_form_l, closed_form_v, evaluate_numeric, Bias, ChannelDyn, ScenarioConfig,
};
use crate::macrorealism::{aot_check, analyze, decomposition_check_l, decomposition_check_v};
use crate::protocol::{one_time_dist, three_time_dist, two_time_dist};
use crate::quantum::{apply_evolution, make_state, Evolution, KrausMap, PureStateParams};

use super::config::RunConfigFile;

/// Parameter family a random scenario is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    UnitaryUnbiased,
    UnitaryBiased,
    UnitaryFree,
    ChannelUnbiased,
    ChannelBiased,
    ChannelFree,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::UnitaryUnbiased,
        Family::UnitaryBiased,
        Family::UnitaryFree,
        Family::ChannelUnbiased,
        Family::ChannelBiased,
        Family::ChannelFree,
    ];

    pub fn has_closed_form(self) -> bool {
        self != Family::ChannelFree
    }
}

/// Uniform draw of every parameter of `family`: `η ∈ [0, 1]`, free
/// `α ∈ [−(1−η), 1−η]`, `θ ∈ [0, π]`, `φ ∈ [0, 2π]`, `g ∈ [−π, π]`,
/// `p, γ ∈ [0, 1]`.
pub fn random_scenario<R: Rng + ?Sized>(rng: &mut R, family: Family) -> ScenarioConfig {
    let eta: f64 = rng.gen_range(0.0..=1.0);
    let state = PureStateParams::new(rng.gen_range(0.0..=PI), rng.gen_range(0.0..=2.0 * PI));
    let bias = match family {
        Family::UnitaryUnbiased | Family::ChannelUnbiased => Bias::Unbiased,
        Family::UnitaryBiased | Family::ChannelBiased => Bias::OneMinusEta,
        Family::UnitaryFree | Family::ChannelFree => {
            let room = 1.0 - eta;
            Bias::Free(rng.gen_range(-room..=room))
        }
    };
    match family {
        Family::UnitaryUnbiased | Family::UnitaryBiased | Family::UnitaryFree => {
            let g1 = rng.gen_range(-PI..=PI);
            let g2 = rng.gen_range(-PI..=PI);
            ScenarioConfig::unitary(state, eta, bias, g1, g2)
        }
        _ => {
            let ch = ChannelDyn::new(
                rng.gen_range(0.0..=1.0),
                rng.gen_range(0.0..=1.0),
                rng.gen_range(0.0..=1.0),
                rng.gen_range(0.0..=1.0),
            );
            ScenarioConfig::channel(state, eta, bias, ch)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub tolerance: f64,
    pub cases: usize,
    pub worst: f64,
    pub failures: usize,
    pub first_failure: Option<ScenarioConfig>,
}

impl CheckResult {
    fn new(name: &'static str, tolerance: f64) -> Self {
        CheckResult {
            name,
            tolerance,
            cases: 0,
            worst: 0.0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, deviation: f64, cfg: &ScenarioConfig) {
        self.cases += 1;
        let bad = deviation.is_nan() || deviation > self.tolerance;
        if bad {
            self.failures += 1;
            self.first_failure.get_or_insert(*cfg);
        }
        if bad && deviation.is_nan() {
            self.worst = f64::NAN;
        } else if !self.worst.is_nan() {
            self.worst = self.worst.max(deviation);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn render(&self) -> String {
        let mut s = format!("verify: seed {} trials {}\n", self.seed, self.trials);
        let _ = writeln!(
            s,
            "{:<24} {:>6} {:>12} {:>10}  result",
            "check", "cases", "worst", "tolerance"
        );
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<24} {:>6} {:>12.3e} {:>10.0e}  {}",
                c.name,
                c.cases,
                c.worst,
                c.tolerance,
                if c.passed() { "PASS".to_string() } else { format!("FAIL ({})", c.failures) }
            );
        }
        for c in self.checks.iter().filter(|c| !c.passed()) {
            if let Some(cfg) = &c.first_failure {
                let _ = writeln!(
                    s,
                    "\nfirst failing config for `{}` (replay with `evaluate --config`):\n{}",
                    c.name,
                    RunConfigFile::from_scenario(*cfg).to_toml()
                );
            }
        }
        s
    }
}

fn identity_deviation(m: &Mat2) -> f64 {
    m.max_abs_diff(&Mat2::IDENTITY)
}

/// Runs `trials` seeded random scenarios, cycling through every [`Family`].
pub fn run_verification(seed: u64, trials: usize) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut closed_l = CheckResult::new("closed-form L", 1e-9);
    let mut closed_v = CheckResult::new("closed-form V", 1e-9);
    let mut decomp_l = CheckResult::new("decomposition L", 1e-10);
    let mut decomp_v = CheckResult::new("decomposition V", 1e-10);
    let mut kraus = CheckResult::new("Kraus completeness", 1e-12);
    let mut trace = CheckResult::new("trace preservation", 1e-12);
    let mut psd = CheckResult::new("PSD preservation", 1e-12);
    let mut norm = CheckResult::new("normalization", 1e-10);
    let mut zero_sum = CheckResult::new("D tables sum to zero", 1e-12);
    let mut aot = CheckResult::new("AOT", 1e-12);

    for trial in 0..trials {
        let family = Family::ALL[trial % Family::ALL.len()];
        let cfg = random_scenario(&mut rng, family);
        let mixed_with = make_state(PureStateParams::new(
            rng.gen_range(0.0..=PI),
            rng.gen_range(0.0..=2.0 * PI),
        ));
        let Ok(s) = cfg.prepare() else {
            // every drawn config is valid by construction
            norm.record(f64::NAN, &cfg);
            continue;
        };
        let values = evaluate_numeric(&cfg).expect("prepared config evaluates");
        if family.has_closed_form() {
            let l = closed_form_l(&cfg).map_or(f64::NAN, |l| (l - values.l).abs());
            let v = closed_form_v(&cfg).map_or(f64::NAN, |v| (v - values.v).abs());
            closed_l.record(l, &cfg);
            closed_v.record(v, &cfg);
        }
        decomp_l.record(decomposition_check_l(&cfg).map_or(f64::NAN, |c| c.residual.abs()), &cfg);
        decomp_v.record(decomposition_check_v(&cfg).map_or(f64::NAN, |c| c.residual.abs()), &cfg);

        let mixed = s.rho.scale_real(0.5) + mixed_with.scale_real(0.5);
        for ev in [s.ev12, s.ev23, s.ev13] {
            kraus.record(identity_deviation(&KrausMap::from(ev).completeness()), &cfg);
            for rho in [s.rho, mixed] {
                let out = apply_evolution(&rho, &ev);
                trace.record((out.trace().re - 1.0).abs(), &cfg);
                psd.record((-out.min_eigenvalue()).max(0.0), &cfg);
            }
        }

        let id = Evolution::Identity;
        let totals = [
            one_time_dist(&s.rho, &s.povm, &s.ev12).total(),
            two_time_dist(&s.rho, &s.povm, &id, &s.ev12).total(),
            two_time_dist(&s.rho, &s.povm, &s.ev12, &s.ev23).total(),
            two_time_dist(&s.rho, &s.povm, &id, &s.ev13).total(),
            three_time_dist(&s.rho, &s.povm, &s.ev12, &s.ev23).total(),
        ];
        let worst_total = totals.iter().fold(0.0_f64, |acc, t| acc.max((t - 1.0).abs()));
        norm.record(worst_total, &cfg);

        let report = analyze(&cfg).expect("prepared config analyzes");
        let sums = [
            report.d123_table.iter().flatten().sum::<f64>(),
            report.d1_23_table.iter().flatten().sum::<f64>(),
            report.d12_table.iter().sum::<f64>(),
        ];
        zero_sum.record(sums.iter().fold(0.0_f64, |acc, x| acc.max(x.abs())), &cfg);
        aot.record(aot_check(&cfg).unwrap_or(f64::NAN), &cfg);
    }

    VerifyReport {
        seed,
        trials,
        checks: vec![
            closed_l, closed_v, decomp_l, decomp_v, kraus, trace, psd, norm, zero_sum, aot,
        ],
    }
}
