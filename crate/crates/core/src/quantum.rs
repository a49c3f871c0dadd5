//! States, biased POVMs, the unitary family and the generalized amplitude
//! damping (GAD) channel.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Mat2;

/// Slack allowed on `|α| + η ≤ 1`.
pub const POVM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("invalid POVM: |alpha| + eta = {sum} exceeds 1 (alpha = {alpha}, eta = {eta})")]
    InvalidPovm { alpha: f64, eta: f64, sum: f64 },
    #[error("invalid POVM: sharpness eta = {0} must lie in [0, 1]")]
    SharpnessOutOfRange(f64),
    #[error("invalid POVM axis: norm {0} is not 1")]
    AxisNotUnit(f64),
    #[error("invalid GAD parameter {name} = {value}: must lie in [0, 1]")]
    GadOutOfRange { name: &'static str, value: f64 },
    #[error("non-finite parameter {0}")]
    NonFinite(&'static str),
}

/// Pure state `cos θ|0⟩ + e^{iφ} sin θ|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PureStateParams {
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
}

impl PureStateParams {
    pub fn new(theta: f64, phi: f64) -> Self {
        PureStateParams { theta, phi }
    }

    pub fn ground() -> Self {
        PureStateParams::new(0.0, 0.0)
    }
}

/// Rank-one density matrix `|ψ⟩⟨ψ|` for the given angles.
pub fn make_state(params: PureStateParams) -> Mat2 {
    let c = params.theta.cos();
    let s = params.theta.sin();
    let amp1 = Complex64::from_polar(s, params.phi);
    let off = amp1.conj() * c;
    Mat2::new(
        Complex64::new(c * c, 0.0),
        off,
        off.conj(),
        Complex64::new(s * s, 0.0),
    )
}

/// Two-outcome biased POVM `M± = (I ± (αI + η n·σ)) / 2`.
///
/// Square roots of both effects are computed once at construction since every
/// sequential update needs them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PovmPair {
    pub alpha: f64,
    pub eta: f64,
    pub axis: [f64; 3],
    pub effect_plus: Mat2,
    pub effect_minus: Mat2,
    pub sqrt_plus: Mat2,
    pub sqrt_minus: Mat2,
}

impl PovmPair {
    pub fn effect(&self, outcome: i8) -> &Mat2 {
        if outcome > 0 {
            &self.effect_plus
        } else {
            &self.effect_minus
        }
    }

    pub fn sqrt_effect(&self, outcome: i8) -> &Mat2 {
        if outcome > 0 {
            &self.sqrt_plus
        } else {
            &self.sqrt_minus
        }
    }

    /// `M+ − M−`, the ±1-valued observable of the measurement.
    pub fn observable(&self) -> Mat2 {
        self.effect_plus - self.effect_minus
    }
}

pub const Z_AXIS: [f64; 3] = [0.0, 0.0, 1.0];

pub fn make_povm(alpha: f64, eta: f64, axis: [f64; 3]) -> Result<PovmPair, QuantumError> {
    if !alpha.is_finite() {
        return Err(QuantumError::NonFinite("alpha"));
    }
    if !eta.is_finite() {
        return Err(QuantumError::NonFinite("eta"));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(QuantumError::SharpnessOutOfRange(eta));
    }
    let sum = alpha.abs() + eta;
    if sum > 1.0 + POVM_TOLERANCE {
        return Err(QuantumError::InvalidPovm { alpha, eta, sum });
    }
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(QuantumError::AxisNotUnit(norm));
    }
    let axis = axis.map(|x| x / norm);
    let bloch = Mat2::pauli_combination(axis.map(|x| x * eta));
    let effect_plus = (Mat2::IDENTITY.scale_real(1.0 + alpha) + bloch).scale_real(0.5);
    let effect_minus = Mat2::IDENTITY - effect_plus;
    // both effects are PSD once |α| + η ≤ 1 (up to the slack above)
    let sqrt_plus = effect_plus
        .psd_sqrt()
        .expect("valid POVM effect must be PSD");
    let sqrt_minus = effect_minus
        .psd_sqrt()
        .expect("valid POVM effect must be PSD");
    Ok(PovmPair {
        alpha,
        eta,
        axis,
        effect_plus,
        effect_minus,
        sqrt_plus,
        sqrt_minus,
    })
}

/// `exp(−i g σx)`.
pub fn unitary_of_angle(g: f64) -> Mat2 {
    let (s, c) = g.sin_cos();
    Mat2::new(
        Complex64::new(c, 0.0),
        Complex64::new(0.0, -s),
        Complex64::new(0.0, -s),
        Complex64::new(c, 0.0),
    )
}

/// Thermal mixing `p` and damping `gamma` of one GAD interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GadParams {
    pub p: f64,
    pub gamma: f64,
}

impl GadParams {
    pub fn new(p: f64, gamma: f64) -> Result<Self, QuantumError> {
        let params = GadParams { p, gamma };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), QuantumError> {
        for (name, value) in [("p", self.p), ("gamma", self.gamma)] {
            if !value.is_finite() {
                return Err(QuantumError::NonFinite(name));
            }
            if !(0.0..=1.0).contains(&value) {
                return Err(QuantumError::GadOutOfRange { name, value });
            }
        }
        Ok(())
    }
}

/// Kraus operators `G0..G3` of the GAD channel.
pub fn gad_kraus(params: GadParams) -> [Mat2; 4] {
    let sp = params.p.sqrt();
    let sq = (1.0 - params.p).sqrt();
    let keep = (1.0 - params.gamma).sqrt();
    let jump = params.gamma.sqrt();
    [
        Mat2::real(sp, 0.0, 0.0, sp * keep),
        Mat2::real(0.0, sp * jump, 0.0, 0.0),
        Mat2::real(sq * keep, 0.0, 0.0, sq),
        Mat2::real(0.0, 0.0, sq * jump, 0.0),
    ]
}

/// Damping of two GAD intervals applied back to back with the same `p`.
pub fn composed_gamma(first: f64, second: f64) -> f64 {
    first + second - first * second
}

/// Dynamics of one inter-measurement interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evolution {
    Unitary(f64),
    Gad(GadParams),
    Identity,
}

/// Anything that maps a density matrix at one measurement time to the next.
///
/// [`Evolution`] is the physical case; [`KrausMap`] lets tests feed arbitrary
/// (even non trace-preserving) maps through the measurement pipeline.
pub trait Dynamics {
    fn evolve(&self, rho: &Mat2) -> Mat2;
}

impl Dynamics for Evolution {
    fn evolve(&self, rho: &Mat2) -> Mat2 {
        apply_evolution(rho, self)
    }
}

/// Arbitrary operator-sum map `ρ ↦ Σ K ρ K†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    pub ops: Vec<Mat2>,
}

impl KrausMap {
    pub fn new(ops: Vec<Mat2>) -> Self {
        KrausMap { ops }
    }

    /// `Σ K†K`; equals the identity exactly when the map is trace preserving.
    pub fn completeness(&self) -> Mat2 {
        self.ops
            .iter()
            .fold(Mat2::ZERO, |acc, k| acc + k.adjoint().mat_mul(k))
    }
}

impl From<Evolution> for KrausMap {
    fn from(ev: Evolution) -> Self {
        match ev {
            Evolution::Unitary(g) => KrausMap::new(vec![unitary_of_angle(g)]),
            Evolution::Gad(params) => KrausMap::new(gad_kraus(params).to_vec()),
            Evolution::Identity => KrausMap::new(vec![Mat2::IDENTITY]),
        }
    }
}

impl Dynamics for KrausMap {
    fn evolve(&self, rho: &Mat2) -> Mat2 {
        self.ops
            .iter()
            .fold(Mat2::ZERO, |acc, k| acc + k.sandwich(rho))
    }
}

pub fn apply_evolution(rho: &Mat2, ev: &Evolution) -> Mat2 {
    match ev {
        Evolution::Identity => *rho,
        Evolution::Unitary(g) => unitary_of_angle(*g).sandwich(rho),
        Evolution::Gad(params) => gad_action(rho, *params),
    }
}

/// `Σ Gₖ ρ Gₖ†` for the GAD Kraus set, written out entrywise: populations
/// relax towards `diag(p, 1 − p)` and coherences shrink by `√(1 − γ)`.
/// Equal to the Kraus sum of [`gad_kraus`] for every input matrix.
fn gad_action(rho: &Mat2, params: GadParams) -> Mat2 {
    let GadParams { p, gamma } = params;
    let [[a, b], [c, d]] = rho.m;
    let keep = (1.0 - gamma).sqrt();
    Mat2::new(
        a * (1.0 - gamma * (1.0 - p)) + d * (gamma * p),
        b * keep,
        c * keep,
        d * (1.0 - gamma * p) + a * (gamma * (1.0 - p)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn basis_states() {
        let rho = make_state(PureStateParams::new(0.0, 0.0));
        assert!(rho.max_abs_diff(&Mat2::diag(1.0, 0.0)) < 1e-15);
        let rho = make_state(PureStateParams::new(FRAC_PI_2, 0.0));
        assert!(rho.max_abs_diff(&Mat2::diag(0.0, 1.0)) < 1e-15);
    }

    #[test]
    fn phased_superposition() {
        // amplitudes (1, i)/√2: ρ01 = 1·conj(i)/2 = −i/2
        let rho = make_state(PureStateParams::new(FRAC_PI_4, FRAC_PI_2));
        let expected = Mat2::new(
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, -0.5),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.5, 0.0),
        );
        assert!(rho.max_abs_diff(&expected) < 1e-15);
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
        assert!(rho.min_eigenvalue() > -1e-15);
    }

    #[test]
    fn sharp_povm_is_projective() {
        let m = make_povm(0.0, 1.0, Z_AXIS).unwrap();
        assert!(m.effect_plus.max_abs_diff(&Mat2::diag(1.0, 0.0)) < 1e-15);
        assert!(m.effect_minus.max_abs_diff(&Mat2::diag(0.0, 1.0)) < 1e-15);
    }

    #[test]
    fn unsharp_povm_effects() {
        let m = make_povm(0.0, 0.5, Z_AXIS).unwrap();
        assert!(m.effect_plus.max_abs_diff(&Mat2::diag(0.75, 0.25)) < 1e-15);
        assert!(m.effect_minus.max_abs_diff(&Mat2::diag(0.25, 0.75)) < 1e-15);
        assert_eq!(m.effect_plus + m.effect_minus, Mat2::IDENTITY);
        assert!((m.sqrt_plus * m.sqrt_plus).max_abs_diff(&m.effect_plus) < 1e-14);
    }

    #[test]
    fn povm_constraint_breach() {
        let err = make_povm(0.5, 0.6, Z_AXIS).unwrap_err();
        assert!(matches!(err, QuantumError::InvalidPovm { .. }));
        assert!(make_povm(0.0, 1.2, Z_AXIS).is_err());
        assert!(make_povm(0.0, 0.5, [0.0, 0.0, 2.0]).is_err());
        // axis within 1e-9 of unit is normalized
        let m = make_povm(0.0, 0.5, [0.0, 0.0, 1.0 + 5e-10]).unwrap();
        assert_eq!(m.axis[2], 1.0);
    }

    #[test]
    fn povm_boundary_effects_are_psd() {
        for i in 0..=40 {
            let eta = i as f64 / 40.0;
            for alpha in [1.0 - eta, eta - 1.0] {
                let m = make_povm(alpha, eta, Z_AXIS).unwrap();
                assert!(m.effect_plus.min_eigenvalue() > -1e-12);
                assert!(m.effect_minus.min_eigenvalue() > -1e-12);
                assert!((m.sqrt_minus * m.sqrt_minus).max_abs_diff(&m.effect_minus) < 1e-10);
            }
        }
    }

    #[test]
    fn off_axis_povm() {
        let axis = [1.0 / 3f64.sqrt(); 3];
        let m = make_povm(0.1, 0.7, axis).unwrap();
        assert!((m.effect_plus + m.effect_minus).max_abs_diff(&Mat2::IDENTITY) < 1e-15);
        assert!(m.effect_plus.is_hermitian(1e-15));
        assert!((m.sqrt_plus * m.sqrt_plus).max_abs_diff(&m.effect_plus) < 1e-12);
    }

    #[test]
    fn unitary_special_angles() {
        assert!(unitary_of_angle(0.0).max_abs_diff(&Mat2::IDENTITY) < 1e-15);
        let expected = Mat2::PAULI_X.scale(Complex64::new(0.0, -1.0));
        assert!(unitary_of_angle(FRAC_PI_2).max_abs_diff(&expected) < 1e-15);
        for k in 0..20 {
            let u = unitary_of_angle(0.37 * k as f64);
            assert!((u * u.adjoint()).max_abs_diff(&Mat2::IDENTITY) < 1e-12);
        }
    }

    #[test]
    fn amplitude_damping_limit() {
        let ks = gad_kraus(GadParams::new(1.0, 0.4).unwrap());
        assert_eq!(ks[2], Mat2::ZERO);
        assert_eq!(ks[3], Mat2::ZERO);
    }

    #[test]
    fn zero_damping_is_identity() {
        let rho = make_state(PureStateParams::new(0.7, 1.3));
        for p in [0.0, 0.3, 1.0] {
            let out = apply_evolution(&rho, &Evolution::Gad(GadParams::new(p, 0.0).unwrap()));
            assert!(out.max_abs_diff(&rho) < 1e-15);
        }
    }

    #[test]
    fn full_decay_to_ground() {
        let out = apply_evolution(
            &Mat2::diag(0.0, 1.0),
            &Evolution::Gad(GadParams::new(1.0, 1.0).unwrap()),
        );
        assert!(out.max_abs_diff(&Mat2::diag(1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn kraus_completeness_grid() {
        for i in 0..20 {
            for j in 0..20 {
                let params = GadParams::new(i as f64 / 19.0, j as f64 / 19.0).unwrap();
                let map = KrausMap::from(Evolution::Gad(params));
                assert!(map.completeness().max_abs_diff(&Mat2::IDENTITY) < 1e-12);
            }
        }
    }

    #[test]
    fn stationary_state() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            for j in 0..=10 {
                let params = GadParams::new(p, j as f64 / 10.0).unwrap();
                let fixed = Mat2::diag(p, 1.0 - p);
                let out = apply_evolution(&fixed, &Evolution::Gad(params));
                assert!(out.max_abs_diff(&fixed) < 1e-12);
            }
        }
    }

    #[test]
    fn identity_and_kraus_form_agree() {
        let rho = make_state(PureStateParams::new(1.1, 0.2));
        assert_eq!(apply_evolution(&rho, &Evolution::Identity), rho);
        for ev in [
            Evolution::Unitary(0.9),
            Evolution::Gad(GadParams::new(0.3, 0.6).unwrap()),
        ] {
            let a = apply_evolution(&rho, &ev);
            let b = KrausMap::from(ev).evolve(&rho);
            assert!(a.max_abs_diff(&b) < 1e-15);
        }
    }

    #[test]
    fn entrywise_gad_equals_kraus_sum_on_arbitrary_matrices() {
        let mut seed = 5u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let m = Mat2::new(
                Complex64::new(next() - 0.5, next() - 0.5),
                Complex64::new(next() - 0.5, next() - 0.5),
                Complex64::new(next() - 0.5, next() - 0.5),
                Complex64::new(next() - 0.5, next() - 0.5),
            );
            let params = GadParams::new(next(), next()).unwrap();
            let a = apply_evolution(&m, &Evolution::Gad(params));
            let b = KrausMap::from(Evolution::Gad(params)).evolve(&m);
            assert!(a.max_abs_diff(&b) < 1e-14);
        }
    }

    #[test]
    fn gad_rejects_out_of_range() {
        assert!(GadParams::new(1.2, 0.0).is_err());
        assert!(GadParams::new(0.5, -0.1).is_err());
        assert!(GadParams::new(f64::NAN, 0.1).is_err());
    }

    #[test]
    fn composition_of_dampings() {
        let rho = make_state(PureStateParams::new(0.4, 0.9));
        let (p, g1, g2) = (0.35, 0.4, 0.7);
        let two_steps = apply_evolution(
            &apply_evolution(&rho, &Evolution::Gad(GadParams::new(p, g1).unwrap())),
            &Evolution::Gad(GadParams::new(p, g2).unwrap()),
        );
        let one_step = apply_evolution(
            &rho,
            &Evolution::Gad(GadParams::new(p, composed_gamma(g1, g2)).unwrap()),
        );
        assert!(two_steps.max_abs_diff(&one_step) < 1e-12);
    }
}
