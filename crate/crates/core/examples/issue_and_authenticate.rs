//! Bank lifecycle: issue token pairs, authenticate them once, and see the
//! second attempt refused.

use qvault::calibration::calibrate_threshold;
use qvault::protocol::{authenticate_token, issue_pair};
use qvault::presets;
use qvault::rng::seeded;

fn main() -> qvault::Result<()> {
    let noise = presets::KINGSTON_LIKE.noise;
    let mut rng = seeded(42);
    let policy = calibrate_threshold(&noise, 20, 200, 100, 0.99, &mut rng)?.policy;
    println!("calibrated tau = {}", policy.tau());

    let mut accepted = 0;
    let trials = 2000;
    for _ in 0..trials {
        let mut pair = issue_pair(&mut rng);
        accepted += usize::from(authenticate_token(&mut pair, &policy, &noise, &mut rng)?.accepted);
    }
    println!("genuine acceptance = {:.4}", accepted as f64 / trials as f64);

    let mut pair = issue_pair(&mut rng);
    let first = authenticate_token(&mut pair, &policy, &noise, &mut rng)?;
    println!("token {}: C_20 = {:.2}, accepted = {}", first.serial, first.observable, first.accepted);
    match authenticate_token(&mut pair, &policy, &noise, &mut rng) {
        Err(e) => println!("second attempt: {e}"),
        Ok(_) => unreachable!("pairs are single use"),
    }
    Ok(())
}
