//! Bank-side calibration: Θ sweeps, quality parameters and the acceptance
//! threshold.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{fork_master, par_indexed};
use crate::statekit::{haar_random, BlochAngles, NoiseModel};
use crate::stats::{bootstrap_std, empirical_quantile, fit_linear_basis, Basis};
use crate::swaptest::{sample_observables, shot_average_observable, DEFAULT_REPETITIONS};

/// Default number of Haar states used for threshold calibration.
pub const DEFAULT_CALIBRATION_STATES: usize = 400;
/// Default shots per calibration state and per sweep point.
pub const DEFAULT_SHOTS: usize = 1000;
/// Default genuine-acceptance target.
pub const DEFAULT_PB_TARGET: f64 = 0.99;
/// Bootstrap replicas for the threshold uncertainty.
pub const BOOTSTRAP_REPLICAS: usize = 1000;

/// Hardware quality: `C̄(Θ) = Q_o + Q_a/4 (1 - cos Θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityParams {
    pub q_o: f64,
    pub q_a: f64,
    pub sigma_q_o: f64,
    pub sigma_q_a: f64,
}

impl QualityParams {
    /// Error-free quality (`Q_o = 0`, `Q_a = 1`).
    pub const IDEAL: QualityParams = QualityParams { q_o: 0.0, q_a: 1.0, sigma_q_o: 0.0, sigma_q_a: 0.0 };

    /// Model prediction of `C̄_N` at angle `theta`.
    pub fn model(&self, theta: f64) -> f64 {
        self.q_o + self.q_a / 4.0 * (1.0 - theta.cos())
    }
}

/// Bank acceptance rule for a single token: accept iff `C_N < tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptancePolicy {
    tau: f64,
    p_b_target: f64,
    tau_uncertainty: f64,
    repetitions: usize,
    shots_per_authentication: usize,
}

impl AcceptancePolicy {
    /// `tau` must lie in `(0, 1]`; `tau = 1` accepts everything but a
    /// string of all ones.
    pub fn new(tau: f64, p_b_target: f64, tau_uncertainty: f64, repetitions: usize) -> Result<Self> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::InvalidArgument(format!("tau = {tau} outside (0, 1]")));
        }
        if !(p_b_target > 0.0 && p_b_target < 1.0) {
            return Err(Error::InvalidArgument(format!("p_b target {p_b_target} outside (0, 1)")));
        }
        if tau_uncertainty.is_nan() || tau_uncertainty < 0.0 {
            return Err(Error::InvalidArgument(format!("tau uncertainty {tau_uncertainty} is negative")));
        }
        if repetitions == 0 {
            return Err(Error::InvalidArgument("N must be >= 1".into()));
        }
        Ok(AcceptancePolicy { tau, p_b_target, tau_uncertainty, repetitions, shots_per_authentication: 1 })
    }

    /// Policy with a hand-picked threshold and the default target and `N`.
    pub fn with_tau(tau: f64) -> Result<Self> {
        Self::new(tau, DEFAULT_PB_TARGET, 0.0, DEFAULT_REPETITIONS)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn p_b_target(&self) -> f64 {
        self.p_b_target
    }

    pub fn tau_uncertainty(&self) -> f64 {
        self.tau_uncertainty
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions
    }

    /// A token pair supports exactly one shot before it is consumed.
    pub fn shots_per_authentication(&self) -> usize {
        self.shots_per_authentication
    }

    pub fn accepts(&self, c_n: f64) -> bool {
        c_n < self.tau
    }
}

/// One point of a Θ sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSweepPoint {
    pub theta: f64,
    pub c_bar: f64,
    pub standard_error: f64,
}

/// Measures `C̄_N(Θ)` on `n_points` uniformly spaced angles in `[0, π]`,
/// with `a1 = (Θ, 0)` and `a2 = (0, 0)`.
pub fn theta_sweep<R: Rng + ?Sized>(
    noise: &NoiseModel,
    repetitions: usize,
    shots: usize,
    n_points: usize,
    rng: &mut R,
) -> Result<Vec<ThetaSweepPoint>> {
    if n_points < 5 {
        return Err(Error::InvalidArgument(format!("sweep needs >= 5 points (got {n_points})")));
    }
    let master = fork_master(rng);
    par_indexed(master, n_points, |r, i| {
        let theta = PI * i as f64 / (n_points - 1) as f64;
        let avg =
            shot_average_observable(BlochAngles::new(theta, 0.0), BlochAngles::ZERO, repetitions, noise, shots, r)?;
        Ok(ThetaSweepPoint { theta, c_bar: avg.mean, standard_error: avg.standard_error })
    })
}

/// Least-squares `(Q_o, Q_a)` from sweep points.
///
/// Needs at least two points covering `[0, π/2]`. A non-positive amplitude
/// means the SWAP test cannot tell states apart and is reported as
/// [`Error::HardwareUnusable`].
pub fn fit_quality(points: &[ThetaSweepPoint]) -> Result<QualityParams> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("quality fit needs at least two sweep points".into()));
    }
    let lo = points.iter().map(|p| p.theta).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.theta).fold(f64::NEG_INFINITY, f64::max);
    if lo > 1e-9 || hi < FRAC_PI_2 - 1e-9 {
        return Err(Error::InvalidArgument(format!("sweep [{lo}, {hi}] does not cover [0, π/2]")));
    }
    let offset = |_: f64| 1.0;
    let contrast = |t: f64| (1.0 - t.cos()) / 4.0;
    let basis = [Basis { name: "Q_o", eval: &offset }, Basis { name: "Q_a", eval: &contrast }];
    let xs: Vec<f64> = points.iter().map(|p| p.theta).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.c_bar).collect();
    let fit = fit_linear_basis(&xs, &ys, &basis)?;
    let q = QualityParams {
        q_o: fit.parameters[0],
        q_a: fit.parameters[1],
        sigma_q_o: fit.standard_deviations[0],
        sigma_q_a: fit.standard_deviations[1],
    };
    if q.q_a.is_nan() || q.q_a <= 0.0 {
        return Err(Error::HardwareUnusable(format!("fitted Q_a = {} is not positive", q.q_a)));
    }
    let slack_o = 3.0 * q.sigma_q_o + 1e-9;
    if q.q_o < -slack_o {
        return Err(Error::HardwareUnusable(format!("fitted Q_o = {} is negative", q.q_o)));
    }
    let top = q.q_o + q.q_a / 2.0;
    if top > 1.0 + 3.0 * (q.sigma_q_o + q.sigma_q_a / 2.0) + 1e-9 {
        return Err(Error::HardwareUnusable(format!("fitted Q_o + Q_a/2 = {top} exceeds 1")));
    }
    Ok(q)
}

/// Result of a threshold calibration: the policy plus the pooled samples it
/// was derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCalibration {
    pub policy: AcceptancePolicy,
    pub samples: Vec<f64>,
}

impl ThresholdCalibration {
    /// Fraction of calibration samples the policy accepts.
    pub fn coverage(&self) -> f64 {
        crate::stats::fraction_below(&self.samples, self.policy.tau())
    }
}

/// Pooled per-shot `C_N` of `n_states` Haar-random identical pairs,
/// `shots_per_point` shots each, grouped by state.
pub fn genuine_samples<R: Rng + ?Sized>(
    noise: &NoiseModel,
    repetitions: usize,
    shots_per_point: usize,
    n_states: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let master = fork_master(rng);
    let per_state = par_indexed(master, n_states, |r, _| {
        let a = haar_random(r);
        sample_observables(a, a, repetitions, noise, shots_per_point, r)
    })?;
    Ok(per_state.into_iter().flatten().collect())
}

/// Sets `τ` to the `p_b_target` quantile of the pooled per-shot `C_N`
/// distribution over `n_states` Haar-random identical pairs.
pub fn calibrate_threshold<R: Rng + ?Sized>(
    noise: &NoiseModel,
    repetitions: usize,
    shots_per_point: usize,
    n_states: usize,
    p_b_target: f64,
    rng: &mut R,
) -> Result<ThresholdCalibration> {
    if n_states < 50 {
        return Err(Error::InvalidArgument(format!("calibration needs >= 50 states (got {n_states})")));
    }
    if !(p_b_target > 0.0 && p_b_target < 1.0) {
        return Err(Error::InvalidArgument(format!("p_b target {p_b_target} outside (0, 1)")));
    }
    let samples = genuine_samples(noise, repetitions, shots_per_point, n_states, rng)?;
    let tau = empirical_quantile(&samples, p_b_target)?;
    if tau <= 0.0 {
        return Err(Error::DegenerateCalibration { value: tau });
    }
    let tau_uncertainty = bootstrap_std(
        &samples,
        |s| empirical_quantile(s, p_b_target).expect("non-empty resample"),
        BOOTSTRAP_REPLICAS,
        rng,
    )?;
    let policy = AcceptancePolicy::new(tau.min(1.0), p_b_target, tau_uncertainty, repetitions)?;
    Ok(ThresholdCalibration { policy, samples })
}
