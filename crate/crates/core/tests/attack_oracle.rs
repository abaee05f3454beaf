mod common;

use common::Vector;
use qvault::attack::{attack_campaign, estimate_theta, run_single_attack, AttackConfig};
use qvault::calibration::{AcceptancePolicy, QualityParams};
use qvault::rng::seeded;
use qvault::statekit::{BlochAngles, NoiseModel};

const N: usize = 20;

/// Exact distribution of the number of ones over `rounds` noiseless rounds.
fn ones_distribution(psi: &Vector, rounds: usize) -> Vec<f64> {
    let mut dist = vec![0.0; rounds + 1];
    let mut stack = vec![(psi.clone(), 0usize, 0usize, 1.0f64)];
    while let Some((state, done, ones, weight)) = stack.pop() {
        if done == rounds {
            dist[ones] += weight;
            continue;
        }
        let (p1, b0, b1) = common::ideal_branches(&state);
        for (branch, p, bit) in [(b0, 1.0 - p1, 0), (b1, p1, 1)] {
            if let Some(next) = branch {
                if weight * p > 1e-15 {
                    stack.push((next, done + 1, ones + bit, weight * p));
                }
            }
        }
    }
    dist
}

/// Exact acceptance probability of the probe-forge-verify pipeline with
/// ideal quality, probe |0⟩ and φ = 0.
fn oracle_accept(theta: f64, phi: f64, tau: f64) -> f64 {
    let target = common::qubit(theta, phi);
    let probe = common::qubit(0.0, 0.0);
    let first = ones_distribution(&common::register(target, probe), N);
    first
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(k, &w)| {
            let c_n = k as f64 / N as f64;
            let theta_hat = (1.0 - 4.0 * c_n).clamp(-1.0, 1.0).acos();
            let forged = common::qubit(theta_hat, 0.0);
            let second = ones_distribution(&common::register(forged, target), N);
            let pass: f64 = second.iter().enumerate().filter(|(j, _)| (*j as f64 / N as f64) < tau).map(|(_, p)| p).sum();
            w * pass
        })
        .sum()
}

#[test]
fn grid_oracle_matches_closed_form() {
    // Haar weight: midpoint grid uniform in cos θ and φ
    let (nu, nphi) = (40, 12);
    let mut total = 0.0;
    for i in 0..nu {
        let cos_t = -1.0 + (2.0 * i as f64 + 1.0) / nu as f64;
        for j in 0..nphi {
            let phi = std::f64::consts::TAU * (j as f64 + 0.5) / nphi as f64;
            total += oracle_accept(cos_t.acos(), phi, 0.5);
        }
    }
    let avg = total / (nu * nphi) as f64;
    assert!((avg - 38.0 / 48.0).abs() < 1e-3, "{avg}");
}

#[test]
fn single_attacks_match_oracle_pointwise() {
    let cfg = AttackConfig::new(QualityParams::IDEAL);
    let policy = AcceptancePolicy::with_tau(0.5).unwrap();
    let mut rng = seeded(31);
    let trials = 4000;
    for (theta, phi) in [(0.4, 1.0), (1.6, 2.5), (2.6, 5.0), (std::f64::consts::PI, 0.0)] {
        let expected = oracle_accept(theta, phi, 0.5);
        let target = BlochAngles::new(theta, phi);
        let hits = (0..trials)
            .filter(|_| run_single_attack(target, &cfg, &policy, &NoiseModel::ideal(), &mut rng).unwrap().accepted)
            .count();
        let f = hits as f64 / trials as f64;
        let sigma = (expected * (1.0 - expected) / trials as f64).sqrt().max(1e-9);
        assert!((f - expected).abs() <= 4.0 * sigma, "({theta}, {phi}): {f} vs {expected}");
    }
}

#[test]
fn campaign_matches_oracle_average() {
    let cfg = AttackConfig::new(QualityParams::IDEAL);
    let policy = AcceptancePolicy::with_tau(0.5).unwrap();
    let mut rng = seeded(32);
    let r = attack_campaign(400, 100, &cfg, &policy, &NoiseModel::ideal(), &mut rng).unwrap();
    assert!((r.p_f - 38.0 / 48.0).abs() <= 4.0 * r.p_f_std, "{} ± {}", r.p_f, r.p_f_std);
}

#[test]
fn estimate_inverts_model_for_presets() {
    let settings = [
        QualityParams::IDEAL,
        QualityParams { q_o: 0.10, q_a: 0.56, sigma_q_o: 0.01, sigma_q_a: 0.03 },
        QualityParams { q_o: 0.151, q_a: 0.47, sigma_q_o: 0.003, sigma_q_a: 0.01 },
    ];
    for q in settings {
        for i in 0..100 {
            let theta = std::f64::consts::PI * i as f64 / 99.0;
            let e = estimate_theta(q.model(theta), &q).unwrap();
            assert!(e.in_domain);
            assert!((e.theta - theta).abs() < 1e-10);
        }
    }
}
