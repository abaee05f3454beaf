//! Bill thresholds and forged-bill acceptance, analytic and simulated.

use qvault::attack::{forge_pair, forged_bill_probability, AttackConfig};
use qvault::calibration::{calibrate_threshold, fit_quality, theta_sweep};
use qvault::protocol::{authenticate_bill, bill_accept_probability, choose_bill_threshold, issue_pair, BillPolicy, TokenPair};
use qvault::presets;
use qvault::rng::seeded;

fn main() -> qvault::Result<()> {
    for total in [10, 20, 50, 100, 200] {
        let m = choose_bill_threshold(total, 0.99, 1e-4)?;
        println!(
            "M = {total:>3}  m = {m:>3}  P_b = {:.6}  P_f(p_f = 0.6) = {:.3e}",
            bill_accept_probability(m, total, 0.99)?,
            forged_bill_probability(total, m, 0.6)?
        );
    }

    let noise = presets::KINGSTON_LIKE.noise;
    let mut rng = seeded(13);
    let quality = fit_quality(&theta_sweep(&noise, 20, 1000, 21, &mut rng)?)?;
    let policy = calibrate_threshold(&noise, 20, 200, 100, 0.99, &mut rng)?.policy;
    let bill = BillPolicy::for_target(20, 0.99, 1e-4)?;
    let cfg = AttackConfig::new(quality);

    let bills = 300;
    let (mut genuine_ok, mut forged_ok) = (0, 0);
    for _ in 0..bills {
        let mut genuine: Vec<TokenPair> = (0..20).map(|_| issue_pair(&mut rng)).collect();
        let mut forged = genuine.iter().map(|p| forge_pair(p, &cfg, &noise, &mut rng)).collect::<qvault::Result<Vec<_>>>()?;
        genuine_ok += usize::from(authenticate_bill(&mut genuine, &policy, &bill, &noise, &mut rng)?.accepted);
        forged_ok += usize::from(authenticate_bill(&mut forged, &policy, &bill, &noise, &mut rng)?.accepted);
    }
    println!("simulated M = 20, m = {}: genuine bills accepted {genuine_ok}/{bills}, forged {forged_ok}/{bills}", bill.min_accepted());
    Ok(())
}
