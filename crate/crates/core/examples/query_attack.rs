//! Single-query forgery campaign against a calibrated bank.

use qvault::attack::{attack_campaign, AttackConfig, PhiPolicy};
use qvault::calibration::{calibrate_threshold, fit_quality, theta_sweep};
use qvault::presets;
use qvault::rng::seeded;

fn main() -> qvault::Result<()> {
    let noise = presets::KINGSTON_LIKE.noise;
    let mut rng = seeded(9);
    let quality = fit_quality(&theta_sweep(&noise, 20, 1000, 21, &mut rng)?)?;
    let cal = calibrate_threshold(&noise, 20, 200, 100, 0.99, &mut rng)?;
    println!("Q_o = {:.3}, Q_a = {:.3}, tau = {}", quality.q_o, quality.q_a, cal.policy.tau());

    for (label, phi_policy) in [("phi = 0", PhiPolicy::Fixed(0.0)), ("random phi", PhiPolicy::UniformRandom)] {
        let cfg = AttackConfig { phi_policy, ..AttackConfig::new(quality) };
        let r = attack_campaign(100, 200, &cfg, &cal.policy, &noise, &mut rng)?;
        println!(
            "{label:>10}: p_f = {:.3} ± {:.3}  ({} of {} queries clamped)",
            r.p_f,
            r.p_f_std,
            r.out_of_domain,
            r.verifier_cn.len()
        );
    }
    Ok(())
}
