//! Exact outcome statistics of one, two and three sequential measurements.
//!
//! Joint probabilities are built from unnormalized post-measurement states
//! `√M ρ √M†`, so a vanishing first-outcome probability never causes a
//! division by zero.

use std::fmt;

use thiserror::Error;

use crate::algebra::Mat2;
use crate::quantum::{Dynamics, PovmPair};

/// Probabilities within this distance of `[0, 1]` are clamped into it.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

pub const OUTCOMES: [i8; 2] = [1, -1];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("slot {index} out of range for a distribution over {arity} outcomes")]
    BadIndex { index: usize, arity: usize },
}

/// Probability table over `{+1, −1}^arity`, `arity ∈ {1, 2, 3}`.
///
/// Entries are stored lexicographically with `+1` before `−1`; the first
/// measurement is the most significant slot.
#[derive(Clone, Copy, PartialEq)]
pub struct OutcomeDist {
    arity: usize,
    probs: [f64; 8],
}

impl fmt::Debug for OutcomeDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (outcomes, p) in self.iter() {
            map.entry(&outcomes, &p);
        }
        map.finish()
    }
}

fn clamp_probability(p: f64) -> f64 {
    if (-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&p) {
        p.clamp(0.0, 1.0)
    } else {
        p
    }
}

fn bit(outcome: i8) -> usize {
    usize::from(outcome < 0)
}

impl OutcomeDist {
    /// Builds a table from probabilities listed in index order.
    pub fn from_probs(arity: usize, probs: &[f64]) -> Self {
        assert!((1..=3).contains(&arity), "arity must be 1, 2 or 3");
        assert_eq!(probs.len(), 1 << arity, "table size must be 2^arity");
        let mut table = [0.0; 8];
        for (slot, p) in table.iter_mut().zip(probs) {
            *slot = clamp_probability(*p);
        }
        OutcomeDist {
            arity,
            probs: table,
        }
    }

    /// Table with all mass on a single outcome tuple.
    pub fn deterministic(outcomes: &[i8]) -> Self {
        let mut probs = vec![0.0; 1 << outcomes.len()];
        probs[Self::index_of(outcomes)] = 1.0;
        OutcomeDist::from_probs(outcomes.len(), &probs)
    }

    pub fn uniform(arity: usize) -> Self {
        let n = 1usize << arity;
        OutcomeDist::from_probs(arity, &vec![1.0 / n as f64; n])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn index_of(outcomes: &[i8]) -> usize {
        outcomes.iter().fold(0, |acc, &m| (acc << 1) | bit(m))
    }

    /// Outcome tuple stored at `index`.
    pub fn outcomes_at(&self, index: usize) -> Vec<i8> {
        (0..self.arity)
            .map(|slot| {
                if (index >> (self.arity - 1 - slot)) & 1 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect()
    }

    pub fn prob(&self, outcomes: &[i8]) -> f64 {
        assert_eq!(outcomes.len(), self.arity, "outcome tuple has wrong length");
        self.probs[Self::index_of(outcomes)]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs[..1 << self.arity]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<i8>, f64)> + '_ {
        (0..1usize << self.arity).map(move |i| (self.outcomes_at(i), self.probs[i]))
    }

    pub fn total(&self) -> f64 {
        self.probs().iter().sum()
    }

    /// Distribution with the measurement in slot `drop` summed out.
    pub fn marginalize(&self, drop: usize) -> Result<OutcomeDist, ProtocolError> {
        if self.arity < 2 || drop >= self.arity {
            return Err(ProtocolError::BadIndex {
                index: drop,
                arity: self.arity,
            });
        }
        let arity = self.arity - 1;
        let mut out = vec![0.0; 1 << arity];
        for (outcomes, p) in self.iter() {
            let kept: Vec<i8> = outcomes
                .iter()
                .enumerate()
                .filter(|(slot, _)| *slot != drop)
                .map(|(_, m)| *m)
                .collect();
            out[Self::index_of(&kept)] += p;
        }
        Ok(OutcomeDist::from_probs(arity, &out))
    }

    /// Entrywise `self − other`, the signed disturbance between two
    /// experiments over the same outcomes.
    pub fn difference(&self, other: &OutcomeDist) -> Vec<f64> {
        assert_eq!(self.arity, other.arity);
        self.probs()
            .iter()
            .zip(other.probs())
            .map(|(a, b)| a - b)
            .collect()
    }
}

/// `Σ (m₁·m₂·…)·P(m₁, m₂, …)`; for a single measurement this is `⟨M⟩`.
pub fn correlator(d: &OutcomeDist) -> f64 {
    // the outcome product is −1 exactly when the index has an odd number of −1 bits
    d.probs()
        .iter()
        .enumerate()
        .map(|(i, p)| if i.count_ones() % 2 == 0 { *p } else { -*p })
        .sum()
}

/// Unnormalized post-measurement state for outcome `m`.
#[inline]
fn measured(rho: &Mat2, povm: &PovmPair, m: i8) -> Mat2 {
    povm.sqrt_effect(m).sandwich(rho)
}

/// `P(m) = tr(E(ρ₀) M^m)`.
pub fn one_time_dist<D: Dynamics + ?Sized>(rho0: &Mat2, povm: &PovmPair, ev1: &D) -> OutcomeDist {
    let rho = ev1.evolve(rho0);
    let probs = OUTCOMES.map(|m| rho.trace_product_re(povm.effect(m)));
    OutcomeDist::from_probs(1, &probs)
}

/// `P(m₁, m₂) = tr(E₁₂(√M^{m₁} E₀(ρ₀) √M^{m₁}†) M^{m₂})`.
///
/// `ev_pre` carries the state to the first measurement, `ev_between` spans the
/// two measurements.
pub fn two_time_dist<A, B>(rho0: &Mat2, povm: &PovmPair, ev_pre: &A, ev_between: &B) -> OutcomeDist
where
    A: Dynamics + ?Sized,
    B: Dynamics + ?Sized,
{
    let rho = ev_pre.evolve(rho0);
    let mut probs = [0.0; 4];
    for (i, &m1) in OUTCOMES.iter().enumerate() {
        let after = ev_between.evolve(&measured(&rho, povm, m1));
        for (j, &m2) in OUTCOMES.iter().enumerate() {
            probs[2 * i + j] = after.trace_product_re(povm.effect(m2));
        }
    }
    OutcomeDist::from_probs(2, &probs)
}

/// Joint statistics of measurements at `t₁`, `t₂`, `t₃` with `ev12` and
/// `ev23` between them; `rho0` is the state at `t₁`.
pub fn three_time_dist<A, B>(rho0: &Mat2, povm: &PovmPair, ev12: &A, ev23: &B) -> OutcomeDist
where
    A: Dynamics + ?Sized,
    B: Dynamics + ?Sized,
{
    let mut probs = [0.0; 8];
    for (i, &m1) in OUTCOMES.iter().enumerate() {
        let at_t2 = ev12.evolve(&measured(rho0, povm, m1));
        for (j, &m2) in OUTCOMES.iter().enumerate() {
            let at_t3 = ev23.evolve(&measured(&at_t2, povm, m2));
            for (k, &m3) in OUTCOMES.iter().enumerate() {
                probs[4 * i + 2 * j + k] = at_t3.trace_product_re(povm.effect(m3));
            }
        }
    }
    OutcomeDist::from_probs(3, &probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{make_povm, make_state, Evolution, GadParams, PureStateParams, Z_AXIS};

    const ID: Evolution = Evolution::Identity;

    fn sharp() -> PovmPair {
        make_povm(0.0, 1.0, Z_AXIS).unwrap()
    }

    #[test]
    fn sharp_measurement_of_ground_state() {
        let d = one_time_dist(&Mat2::diag(1.0, 0.0), &sharp(), &ID);
        assert_eq!(d.prob(&[1]), 1.0);
        assert_eq!(correlator(&d), 1.0);
    }

    #[test]
    fn full_decay_flips_expectation() {
        // θ = 0, p = 0, γ = 1 sends |0⟩ to |1⟩
        let rho = make_state(PureStateParams::ground());
        let ev = Evolution::Gad(GadParams::new(0.0, 1.0).unwrap());
        let d = one_time_dist(&rho, &sharp(), &ev);
        assert!(d.prob(&[1]).abs() < 1e-15);
        assert!((correlator(&d) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn sharp_two_time_correlator_is_cos_2g() {
        let rho = make_state(PureStateParams::new(0.3, 1.1));
        for k in 0..24 {
            let g = 0.27 * k as f64;
            let d = two_time_dist(&rho, &sharp(), &ID, &Evolution::Unitary(g));
            assert!((correlator(&d) - (2.0 * g).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn uninformative_measurement_is_uniform() {
        let povm = make_povm(0.0, 0.0, Z_AXIS).unwrap();
        let rho = make_state(PureStateParams::new(0.8, 0.4));
        let d = two_time_dist(&rho, &povm, &ID, &Evolution::Unitary(0.6));
        for p in d.probs() {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn three_identity_measurements() {
        let d = three_time_dist(&Mat2::diag(1.0, 0.0), &sharp(), &ID, &ID);
        assert_eq!(d.prob(&[1, 1, 1]), 1.0);
        assert!((d.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn correlator_cases() {
        assert_eq!(correlator(&OutcomeDist::uniform(2)), 0.0);
        assert_eq!(correlator(&OutcomeDist::deterministic(&[1, 1])), 1.0);
        assert_eq!(correlator(&OutcomeDist::deterministic(&[1, -1, 1])), -1.0);
    }

    #[test]
    fn marginal_cases() {
        let d = OutcomeDist::deterministic(&[1, -1, 1]);
        let m = d.marginalize(1).unwrap();
        assert_eq!(m.prob(&[1, 1]), 1.0);
        assert_eq!(m.total(), 1.0);
        assert!(matches!(d.marginalize(3), Err(ProtocolError::BadIndex { .. })));
        assert!(OutcomeDist::uniform(1).marginalize(0).is_err());
    }

    #[test]
    fn index_layout() {
        let d = OutcomeDist::from_probs(3, &[0.0, 0.1, 0.0, 0.0, 0.2, 0.0, 0.3, 0.4]);
        assert_eq!(d.prob(&[1, 1, -1]), 0.1);
        assert_eq!(d.prob(&[-1, 1, 1]), 0.2);
        assert_eq!(d.prob(&[-1, -1, 1]), 0.3);
        assert_eq!(d.outcomes_at(6), vec![-1, -1, 1]);
    }

    #[test]
    fn clamps_rounding_noise_only() {
        let d = OutcomeDist::from_probs(1, &[1.0 + 5e-13, -5e-13]);
        assert_eq!(d.probs(), &[1.0, 0.0]);
        let d = OutcomeDist::from_probs(1, &[1.5, -0.5]);
        assert_eq!(d.probs(), &[1.5, -0.5]);
    }

    #[test]
    fn dropping_last_measurement_matches_two_time() {
        let povm = make_povm(0.2, 0.7, Z_AXIS).unwrap();
        let rho = make_state(PureStateParams::new(0.5, 2.0));
        let ev12 = Evolution::Gad(GadParams::new(0.3, 0.45).unwrap());
        let ev23 = Evolution::Unitary(0.8);
        let three = three_time_dist(&rho, &povm, &ev12, &ev23);
        let two = two_time_dist(&rho, &povm, &ID, &ev12);
        let marginal = three.marginalize(2).unwrap();
        for (a, b) in marginal.probs().iter().zip(two.probs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
