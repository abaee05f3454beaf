//! C̄_20(Θ) sweep and quality-parameter fit for every preset.

use qvault::calibration::{fit_quality, theta_sweep};
use qvault::presets;
use qvault::rng::seeded;

fn main() -> qvault::Result<()> {
    let mut rng = seeded(5);
    for preset in [presets::IDEAL, presets::KINGSTON_LIKE, presets::FEZ_LIKE, presets::MARRAKESH_LIKE] {
        let points = theta_sweep(&preset.noise, 20, 2000, 21, &mut rng)?;
        let q = fit_quality(&points)?;
        println!(
            "{:>15}: Q_o = {:.3} ({:.3})  Q_a = {:.3} ({:.3})",
            preset.name, q.q_o, q.sigma_q_o, q.q_a, q.sigma_q_a
        );
    }
    Ok(())
}
