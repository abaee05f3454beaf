//! Acceptance threshold from the pooled identical-token C_20 distribution.

use qvault::calibration::calibrate_threshold;
use qvault::presets;
use qvault::rng::seeded;
use qvault::stats::lattice_histogram;

fn main() -> qvault::Result<()> {
    let mut rng = seeded(8);
    let cal = calibrate_threshold(&presets::KINGSTON_LIKE.noise, 20, 500, 200, 0.99, &mut rng)?;
    println!("tau = {} ± {:.4}", cal.policy.tau(), cal.policy.tau_uncertainty());
    println!("accepted fraction of calibration samples = {:.4}", cal.coverage());
    for bin in lattice_histogram(&cal.samples, 20)?.iter().filter(|b| b.count > 0) {
        println!("[{:.2}, {:.2})  {}", bin.left, bin.right, bin.count);
    }
    Ok(())
}
