//! Single-query forgery: probe the token with a SWAP test, invert the sweep
//! model for the polar angle, and present a freshly prepared guess.

use rand::Rng;

use crate::calibration::{AcceptancePolicy, QualityParams};
use crate::error::{Error, Result};
use crate::protocol::TokenPair;
use crate::rng::{fork_master, par_indexed};
use crate::statekit::{haar_random, BlochAngles, NoiseModel};
use crate::stats::binomial_tail_at_least;
use crate::swaptest::{run_shot, DEFAULT_REPETITIONS};

/// How the attacker fills in the azimuth the query cannot reveal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiPolicy {
    Fixed(f64),
    UniformRandom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackConfig {
    pub probe: BlochAngles,
    pub phi_policy: PhiPolicy,
    pub repetitions: usize,
    pub known_quality: QualityParams,
}

impl AttackConfig {
    /// Probe `|0⟩`, `φ = 0`, `N = 20`.
    pub fn new(known_quality: QualityParams) -> Self {
        AttackConfig {
            probe: BlochAngles::ZERO,
            phi_policy: PhiPolicy::Fixed(0.0),
            repetitions: DEFAULT_REPETITIONS,
            known_quality,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidArgument("attack needs N >= 1".into()));
        }
        Ok(())
    }
}

/// Polar-angle estimate; `in_domain` is false when the arccos argument had
/// to be clamped to `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaEstimate {
    pub theta: f64,
    pub in_domain: bool,
}

const ENDPOINT_SNAP: f64 = 1e-13;

/// `Θ = arccos[1 + 4 (Q_o - C_N) / Q_a]`.
pub fn estimate_theta(c_n: f64, q: &QualityParams) -> Result<ThetaEstimate> {
    if q.q_a.is_nan() || q.q_a <= 0.0 {
        return Err(Error::HardwareUnusable(format!("Q_a = {} is not positive", q.q_a)));
    }
    let mut arg = 1.0 + 4.0 * (q.q_o - c_n) / q.q_a;
    // arccos is flat at the endpoints; rounding there would cost ~1e-8 rad
    if (arg.abs() - 1.0).abs() < ENDPOINT_SNAP {
        arg = arg.signum();
    }
    let in_domain = (-1.0..=1.0).contains(&arg);
    Ok(ThetaEstimate { theta: arg.clamp(-1.0, 1.0).acos(), in_domain })
}

/// Forged state at angular distance `estimate.theta` from the probe, with
/// the azimuth (around the probe axis) picked by the policy.
pub fn forge_token<R: Rng + ?Sized>(estimate: ThetaEstimate, cfg: &AttackConfig, rng: &mut R) -> BlochAngles {
    let phi = match cfg.phi_policy {
        PhiPolicy::Fixed(phi) => phi,
        PhiPolicy::UniformRandom => rng.random::<f64>() * std::f64::consts::TAU,
    };
    let (tp, pp) = (cfg.probe.theta(), cfg.probe.phi());
    let axis = cfg.probe.unit_vector();
    let e1 = [tp.cos() * pp.cos(), tp.cos() * pp.sin(), -tp.sin()];
    let e2 = [-pp.sin(), pp.cos(), 0.0];
    let (s, c) = estimate.theta.sin_cos();
    let v: [f64; 3] = std::array::from_fn(|k| c * axis[k] + s * (phi.cos() * e1[k] + phi.sin() * e2[k]));
    BlochAngles::from_vector(v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackOutcome {
    pub measured_cn: f64,
    pub estimate: ThetaEstimate,
    pub forged: BlochAngles,
    pub verifier_cn: f64,
    pub accepted: bool,
}

fn probe_and_forge<R: Rng + ?Sized>(
    target: BlochAngles,
    cfg: &AttackConfig,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<(f64, ThetaEstimate, BlochAngles)> {
    cfg.validate()?;
    let measured_cn = run_shot(target, cfg.probe, cfg.repetitions, noise, rng)?.observable();
    let estimate = estimate_theta(measured_cn, &cfg.known_quality)?;
    Ok((measured_cn, estimate, forge_token(estimate, cfg, rng)))
}

/// One query, one forgery, one verification against the vault copy of
/// `target`.
pub fn run_single_attack<R: Rng + ?Sized>(
    target: BlochAngles,
    cfg: &AttackConfig,
    policy: &AcceptancePolicy,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<AttackOutcome> {
    let (measured_cn, estimate, forged) = probe_and_forge(target, cfg, noise, rng)?;
    let verifier_cn = run_shot(forged, target, policy.repetitions(), noise, rng)?.observable();
    Ok(AttackOutcome { measured_cn, estimate, forged, verifier_cn, accepted: policy.accepts(verifier_cn) })
}

/// Replaces the user token of `pair` with a forgery built from one query.
/// The returned pair keeps the serial and the vault copy.
pub fn forge_pair<R: Rng + ?Sized>(
    pair: &TokenPair,
    cfg: &AttackConfig,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<TokenPair> {
    if pair.is_consumed() {
        return Err(Error::Consumed { serial: pair.serial().to_string() });
    }
    let (_, _, forged) = probe_and_forge(pair.user_angles(), cfg, noise, rng)?;
    Ok(TokenPair::with_user_token(pair.serial(), forged, pair.vault_angles()))
}

/// Aggregate of an attack campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    /// Fraction of forgeries accepted.
    pub p_f: f64,
    /// Standard error of `p_f` from the spread of per-target rates.
    pub p_f_std: f64,
    /// Verifier `C_N` of every attempt, grouped by target.
    pub verifier_cn: Vec<f64>,
    /// Queries whose arccos argument was clamped.
    pub out_of_domain: usize,
}

/// `shots` independent attacks on each of `n_targets` Haar-random tokens.
pub fn attack_campaign<R: Rng + ?Sized>(
    n_targets: usize,
    shots: usize,
    cfg: &AttackConfig,
    policy: &AcceptancePolicy,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<CampaignResult> {
    if n_targets < 50 {
        return Err(Error::InvalidArgument(format!("campaign needs >= 50 targets (got {n_targets})")));
    }
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    cfg.validate()?;
    let master = fork_master(rng);
    let per_target = par_indexed(master, n_targets, |r, _| {
        let target = haar_random(r);
        let inner = fork_master(r);
        par_indexed(inner, shots, |s, _| run_single_attack(target, cfg, policy, noise, s))
    })?;
    let rates: Vec<f64> = per_target
        .iter()
        .map(|o| o.iter().filter(|a| a.accepted).count() as f64 / shots as f64)
        .collect();
    let p_f = rates.iter().sum::<f64>() / n_targets as f64;
    let var = rates.iter().map(|r| (r - p_f).powi(2)).sum::<f64>() / (n_targets - 1) as f64;
    let out_of_domain = per_target.iter().flatten().filter(|a| !a.estimate.in_domain).count();
    let verifier_cn = per_target.into_iter().flatten().map(|a| a.verifier_cn).collect();
    Ok(CampaignResult { p_f, p_f_std: (var / n_targets as f64).sqrt(), verifier_cn, out_of_domain })
}

/// Probability that a bill of `M` forgeries passes with threshold `m`.
pub fn forged_bill_probability(total: usize, m: usize, p_f: f64) -> Result<f64> {
    binomial_tail_at_least(m as u64, total as u64, p_f)
}
