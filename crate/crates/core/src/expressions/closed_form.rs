//! Analytic expressions for `L`, `V` and the individual correlators.
//!
//! These are independent of the operator pipeline and serve as its oracle.
//! The channel formulas depend on the state only through `cos 2θ`, the
//! z-component of the Bloch vector of `cos θ|0⟩ + e^{iφ} sin θ|1⟩`.

use num_complex::Complex64;
use thiserror::Error;

use super::{Bias, ConfigError, Correlators, ScenarioConfig, ScenarioDynamics};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosedFormError {
    #[error("no closed form for this regime: {0}")]
    UncoveredRegime(&'static str),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// `L` from the dedicated closed form of the scenario's regime.
///
/// Every regime has one except GAD dynamics with a free bias.
pub fn closed_form_l(cfg: &ScenarioConfig) -> Result<f64, ClosedFormError> {
    cfg.validate()?;
    let e = cfg.eta;
    let (theta, phi) = (cfg.state.theta, cfg.state.phi);
    match (cfg.dynamics, cfg.bias) {
        (ScenarioDynamics::Unitary { g1, g2 }, Bias::Unbiased) => Ok(unitary_unbiased_l(e, g1, g2)),
        (ScenarioDynamics::Unitary { g1, g2 }, Bias::OneMinusEta) => {
            Ok(unitary_one_minus_eta_l(e, theta, phi, g1, g2))
        }
        (ScenarioDynamics::Unitary { g1, g2 }, Bias::Free(alpha)) => {
            Ok(unitary_correlators(alpha, e, theta, phi, g1, g2).l())
        }
        (ScenarioDynamics::Channel(ch), Bias::Unbiased) => Ok(channel_unbiased_l(
            e,
            (2.0 * theta).cos(),
            ch.p,
            ch.gamma12,
            ch.gamma23,
            ch.effective_gamma13(),
        )),
        (ScenarioDynamics::Channel(ch), Bias::OneMinusEta) => Ok(channel_one_minus_eta_l(
            e,
            (2.0 * theta).cos(),
            ch.p,
            ch.gamma12,
            ch.gamma23,
            ch.effective_gamma13(),
        )),
        (ScenarioDynamics::Channel(_), Bias::Free(_)) => Err(ClosedFormError::UncoveredRegime(
            "GAD dynamics with a free bias",
        )),
    }
}

/// `V` from the dedicated closed form of the scenario's regime.
pub fn closed_form_v(cfg: &ScenarioConfig) -> Result<f64, ClosedFormError> {
    cfg.validate()?;
    let e = cfg.eta;
    let (theta, phi) = (cfg.state.theta, cfg.state.phi);
    match (cfg.dynamics, cfg.bias) {
        (ScenarioDynamics::Unitary { g1, g2 }, Bias::Unbiased) => {
            Ok(unitary_unbiased_v(e, theta, phi, g1, g2))
        }
        (ScenarioDynamics::Unitary { g1, g2 }, Bias::OneMinusEta) => {
            Ok(unitary_one_minus_eta_v(e, theta, phi, g1, g2))
        }
        (ScenarioDynamics::Unitary { g1, g2 }, Bias::Free(alpha)) => {
            Ok(unitary_correlators(alpha, e, theta, phi, g1, g2).v())
        }
        (ScenarioDynamics::Channel(ch), Bias::Unbiased) => Ok(channel_unbiased_v(
            e,
            (2.0 * theta).cos(),
            ch.p,
            ch.gamma12,
            ch.gamma23,
            ch.effective_gamma13(),
        )),
        (ScenarioDynamics::Channel(ch), Bias::OneMinusEta) => Ok(channel_one_minus_eta_v(
            e,
            (2.0 * theta).cos(),
            ch.p,
            ch.gamma12,
            ch.gamma23,
            ch.effective_gamma13(),
        )),
        (ScenarioDynamics::Channel(_), Bias::Free(_)) => Err(ClosedFormError::UncoveredRegime(
            "GAD dynamics with a free bias",
        )),
    }
}

fn unitary_unbiased_l(e: f64, g1: f64, g2: f64) -> f64 {
    e * e * (-(2.0 * g1).cos() + (2.0 * g2).cos() + (2.0 * (g1 + g2)).cos())
}

fn unitary_unbiased_v(e: f64, th: f64, ph: f64, g1: f64, g2: f64) -> f64 {
    let c2th = (2.0 * th).cos();
    e * (c2th * (e * e * (2.0 * g2).cos() - (2.0 * g1).cos()) + e * (2.0 * (g1 + g2)).cos()
        - (2.0 * g1).sin() * (2.0 * th).sin() * ph.sin())
}

fn unitary_one_minus_eta_l(e: f64, th: f64, ph: f64, g1: f64, g2: f64) -> f64 {
    let s1 = (1.0 - e).max(0.0).sqrt();
    let a = (2.0 * th).sin() * ph.sin();
    let c2th = (2.0 * th).cos();
    let cg1 = g1.cos();
    let (sg2, cg2) = g2.sin_cos();
    let s2g1 = (2.0 * g1).sin();
    let s2g2 = (2.0 * g2).sin();
    let c2g1 = (2.0 * g1).cos();
    0.5 * (2.0 * (e - 1.0).powi(2)
        + e * (a * (4.0 * s1 * sg2 * (2.0 * g1 + g2).cos() - 4.0 * (e - 1.0) * s2g1 * cg2 * cg2)
            + c2th
                * (4.0 * (e - 1.0) * sg2 * (2.0 * g1 + g2).sin() - 2.0 * s1 * s2g1 * s2g2)
            + 4.0 * e * cg1 * (g1 + 2.0 * g2).cos()
            + c2g1 * (-2.0 * e + 2.0 * s1 * s2g2 * a - 4.0 * (e - 1.0) * cg2 * cg2 * c2th)))
}

fn unitary_one_minus_eta_v(e: f64, th: f64, ph: f64, g1: f64, g2: f64) -> f64 {
    let s1 = (1.0 - e).max(0.0).sqrt();
    let a = (2.0 * th).sin() * ph.sin();
    let c2th = (2.0 * th).cos();
    let (sg1, cg1) = g1.sin_cos();
    let (sg2, cg2) = g2.sin_cos();
    let s2g1 = (2.0 * g1).sin();
    let s2g2 = (2.0 * g2).sin();
    let c2g1 = (2.0 * g1).cos();
    let c2g2 = (2.0 * g2).cos();
    e * (c2th
        * ((e - 1.0) * (e + (s1 + 1.0) * s2g1 * s2g2 - 2.0)
            + (e - 2.0) * c2g1 * (e + (e - 1.0) * c2g2)
            + e * e * c2g2)
        + sg1 * sg1 * (2.0 * e + (e - 1.0) * s2g2 * a - 3.0)
        + s1 * a * (2.0 * (g1 + g2)).sin()
        - 2.0 * s1 * e * s2g1 * cg2 * cg2 * a
        + s2g1 * a * (2.0 * s1 * cg2 * cg2 - 1.0)
        + e * (2.0 * (g1 + g2)).cos())
        - (e - 1.0) * cg1 * cg1 * (2.0 * (e - 1.0) * e + 2.0 * e * e * c2g2 + e * s2g2 * a + 1.0)
        + (e - 1.0) * e
        - 4.0 * s1 * e * e * sg1 * cg1 * sg2 * cg2
        + sg1 * sg1
}

fn channel_unbiased_l(e: f64, c: f64, p: f64, c12: f64, c23: f64, c13: f64) -> f64 {
    let q = 2.0 * p - 1.0;
    e * e
        * (1.0 + c12 - c13 + c23 * (c12 * q * q - 1.0)
            + c * q * (c13 - c12 - (c12 - 1.0) * c23))
}

fn channel_unbiased_v(e: f64, c: f64, p: f64, c12: f64, c23: f64, c13: f64) -> f64 {
    let q = 2.0 * p - 1.0;
    e * (c12 - c13 * e + e - (c12 - 1.0) * c23 * e * e * q - 2.0 * c12 * p
        + c * (c12 + e * e * (c23 * (c12 * q * q - 1.0) + 1.0) + c13 * e * q - 1.0))
}

fn channel_one_minus_eta_l(e: f64, c: f64, p: f64, c12: f64, c23: f64, c13: f64) -> f64 {
    let q = 2.0 * p - 1.0;
    let mix = -c12 * c23 + c12 + c13 + c23;
    (e - 1.0).powi(2) + e * e * (c12 - c13 - c23 + c12 * c23 * q * q + 1.0)
        - e * c * (mix + 2.0 * e * (c12 * (c23 * p + p - 1.0) - p * (c13 + c23) + 1.0) - 2.0)
        + (1.0 - e) * e * q * mix
}

fn channel_one_minus_eta_v(e: f64, c: f64, p: f64, c12: f64, c23: f64, c13: f64) -> f64 {
    let k = (c12 * p - 1.0) * (c23 * p - 1.0);
    1.0 - 4.0 * e.powi(3) * k
        + e * c
            * (c12 * c23 - c12 - c13 - c23
                + 2.0 * e * (c12 - 2.0 * (c12 - 1.0) * c23 * p + 2.0 * c12 * p + c13 * p - 4.0)
                + 4.0 * e * e * k
                + 4.0)
        + 2.0 * e * e * (c12 + 2.0 * c23 * p * (c12 * p - 1.0) - 4.0 * c12 * p - c13 * p + 4.0)
        - e * (c13 + c23 + c12 * (c23 - 1.0) * (2.0 * p - 1.0) - 2.0 * p * (c13 + c23) + 4.0)
}

/// All correlators under GAD dynamics for any bias `α`.
///
/// `c` is `cos 2θ`; the phase `φ` drops out because the channel and the
/// z-axis measurement never mix populations with coherences.
pub fn channel_correlators(
    a: f64,
    e: f64,
    c: f64,
    p: f64,
    c12: f64,
    c23: f64,
    c13: f64,
) -> Correlators {
    let q = 2.0 * p - 1.0;
    let m1m2 =
        a * a - (c12 - 1.0) * e * e + a * c12 * e * q + e * c * (c12 * e * q - a * (c12 - 2.0));
    let m2m3 = a * a + (c12 - 1.0) * e * c * (a * (c23 - 2.0) - c23 * e * q)
        - a * e * q * ((c12 - 1.0) * c23 - 2.0 * c12)
        + e * e * (c23 * (c12 * q * q - 1.0) + 1.0);
    let m1m3 =
        a * a - (c13 - 1.0) * e * e + e * c * (c13 * e * q - a * (c13 - 2.0)) + a * c13 * e * q;
    let m1m2m3 = a.powi(3) - a * a * e * q * ((c12 - 1.0) * c23 - 2.0 * c12)
        + a * e * e * (-2.0 * c12 + 2.0 * c23 * (c12 * (2.0 * (p - 1.0) * p + 1.0) - 1.0) + 3.0)
        + e * c
            * (a * a * ((c12 - 1.0) * c23 - 2.0 * c12 + 3.0)
                - 2.0 * a * e * q * ((c12 - 1.0) * c23 - c12)
                + e * e * (c23 * (c12 * q * q - 1.0) + 1.0))
        + c23 * e.powi(3) * (c12 - 2.0 * c12 * p + 2.0 * p - 1.0);
    let m2 = a - (c12 - 1.0) * e * c + c12 * e * q;
    Correlators {
        m1m2,
        m2m3,
        m1m3,
        m1m2m3,
        m2,
    }
}

/// All correlators under the unitary family for any bias `α`.
pub fn unitary_correlators(a: f64, e: f64, th: f64, ph: f64, g1: f64, g2: f64) -> Correlators {
    let x1 = ((1.0 + a).powi(2) - e * e).max(0.0).sqrt();
    let x2 = ((1.0 - a).powi(2) - e * e).max(0.0).sqrt();
    let x3 = (1.0 - (a - e).powi(2)).max(0.0).sqrt() * (1.0 - (a + e).powi(2)).max(0.0).sqrt();
    let (sth, cth) = th.sin_cos();
    let (sph, _) = ph.sin_cos();
    let s2th = (2.0 * th).sin();
    let c2th = (2.0 * th).cos();
    let (sg1, cg1) = g1.sin_cos();
    let (sg2, cg2) = g2.sin_cos();
    let s2g1 = (2.0 * g1).sin();
    let c2g1 = (2.0 * g1).cos();
    let s2g2 = (2.0 * g2).sin();
    let c2g2 = (2.0 * g2).cos();
    let g = g1 + g2;
    let (sg, cg) = g.sin_cos();

    let m1m2 = a * a + e * e * c2g1 + e * cg1 * ((x1 - x2) * sg1 * s2th * sph + 2.0 * a * cg1 * c2th);
    let m2m3 = 0.5
        * (2.0 * a * a
            + 8.0 * a * e * cg2 * cg2 * sth * cth * sph * s2g1
            + 4.0 * a * e * c2g1 * cg2 * cg2 * c2th
            + 2.0 * e * e * c2g2
            + e * s2g2 * (x2 - x1) * (s2g1 * c2th - c2g1 * s2th * sph));
    let m1m3 = a * a + e * e * (2.0 * g).cos() + e * cg * ((x1 - x2) * s2th * sph * sg + 2.0 * a * c2th * cg);
    let m2 = a + e * s2g1 * s2th * sph + e * c2g1 * c2th;

    let ep = Complex64::from_polar(1.0, ph);
    let i = Complex64::i();
    let ss = sg2 * cg2 * sth * cth;
    let first = cg1 * cg1
        * (ep * (a * (a * a + e * e) + 2.0 * a * a * e * c2th + e * c2g2 * (a * a + e * e) * c2th)
            + i * e * (1.0 + a * a - e * e - x3) * ss * (1.0 - ep * ep));
    let second = ep
        * sg1
        * sg1
        * (a * (a * a - e * e) - 2.0 * e * (1.0 - x3 + a * a - e * e) * ss * sph
            - e * (a * a - e * e) * c2g2 * c2th);
    let third = ep * e * s2g1 * cg2 * (sg2 * (a * c2th + e) - a * cg2 * s2th * sph) * (x2 - x1);
    let m1m2m3 = (ep.conj() * (first + second + third)).re + 2.0 * a * e * e * cg1 * cg1 * c2g2;

    Correlators {
        m1m2,
        m2m3,
        m1m3,
        m1m2m3,
        m2,
    }
}
