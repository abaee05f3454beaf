//! Register history c̄_n for identical and orthogonal tokens under a noise
//! preset, with exponential fits.

use std::f64::consts::PI;

use qvault::presets;
use qvault::rng::seeded;
use qvault::statekit::BlochAngles;
use qvault::stats::fit_exponential_decay;
use qvault::swaptest::decay_curve;

fn main() -> qvault::Result<()> {
    let noise = presets::KINGSTON_LIKE.noise;
    let mut rng = seeded(11);
    for (label, a1) in [("identical", BlochAngles::ZERO), ("orthogonal", BlochAngles::new(PI, 0.0))] {
        let curve = decay_curve(a1, BlochAngles::ZERO, 100, &noise, 2000, &mut rng)?;
        let ns: Vec<f64> = curve.n.iter().map(|&n| n as f64).collect();
        let fit = fit_exponential_decay(&ns, &curve.c_bar)?;
        println!(
            "{label:>10}: c1 = {:.3}  c100 = {:.3}  fit A = {:.3} lambda = {:.1} B = {:.3}",
            curve.c_bar[0],
            curve.c_bar[99],
            fit.value("A").unwrap(),
            fit.value("lambda").unwrap(),
            fit.value("B").unwrap()
        );
    }
    Ok(())
}
