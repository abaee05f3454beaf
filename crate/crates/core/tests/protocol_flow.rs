use qvault::attack::{forge_pair, AttackConfig};
use qvault::calibration::{calibrate_threshold, fit_quality, theta_sweep, AcceptancePolicy};
use qvault::presets::KINGSTON_LIKE;
use qvault::protocol::{authenticate_bill, authenticate_token, bill_accept_probability, issue_pair, BillPolicy, TokenPair};
use qvault::rng::seeded;
use qvault::Error;

#[test]
fn calibrated_genuine_acceptance() {
    let noise = KINGSTON_LIKE.noise;
    let mut rng = seeded(100);
    let cal = calibrate_threshold(&noise, 20, 500, 200, 0.99, &mut rng).unwrap();
    let trials = 10_000;
    let mut accepted = 0;
    for _ in 0..trials {
        let mut pair = issue_pair(&mut rng);
        let r = authenticate_token(&mut pair, &cal.policy, &noise, &mut rng).unwrap();
        assert_eq!(r.accepted, r.observable < cal.policy.tau());
        assert!(matches!(authenticate_token(&mut pair, &cal.policy, &noise, &mut rng), Err(Error::Consumed { .. })));
        accepted += usize::from(r.accepted);
    }
    let rate = accepted as f64 / trials as f64;
    let sigma = (0.99 * 0.01 / trials as f64).sqrt();
    assert!((rate - 0.99).abs() <= 3.0 * sigma, "genuine acceptance {rate}");
}

fn run_bills(forged: bool, bills: usize) -> (usize, usize, usize, BillPolicy) {
    let noise = KINGSTON_LIKE.noise;
    let mut rng = seeded(if forged { 7 } else { 6 });
    let quality = fit_quality(&theta_sweep(&noise, 20, 1000, 21, &mut rng).unwrap()).unwrap();
    let policy: AcceptancePolicy = calibrate_threshold(&noise, 20, 300, 100, 0.99, &mut rng).unwrap().policy;
    let bill = BillPolicy::for_target(20, 0.99, 1e-4).unwrap();
    let cfg = AttackConfig::new(quality);
    let (mut passed, mut tokens_ok) = (0, 0);
    for _ in 0..bills {
        let mut pairs: Vec<TokenPair> = (0..20).map(|_| issue_pair(&mut rng)).collect();
        if forged {
            pairs = pairs.iter().map(|p| forge_pair(p, &cfg, &noise, &mut rng).unwrap()).collect();
        }
        let d = authenticate_bill(&mut pairs, &policy, &bill, &noise, &mut rng).unwrap();
        assert!(pairs.iter().all(TokenPair::is_consumed));
        assert_eq!(d.accepted, d.accepted_count >= bill.min_accepted());
        passed += usize::from(d.accepted);
        tokens_ok += d.accepted_count;
    }
    (passed, tokens_ok, bills * 20, bill)
}

#[test]
fn genuine_bills_meet_type2_target() {
    let bills = 1000;
    let (passed, tokens_ok, tokens, bill) = run_bills(false, bills);
    let rate = passed as f64 / bills as f64;
    assert!(rate >= 1.0 - 10.0 * bill.target_type2(), "genuine bill acceptance {rate}");
    let p_hat = tokens_ok as f64 / tokens as f64;
    let expected = bill_accept_probability(bill.min_accepted(), 20, p_hat).unwrap();
    let sigma = (expected * (1.0 - expected) / bills as f64).sqrt();
    assert!((rate - expected).abs() <= 4.0 * sigma + 1.0 / bills as f64, "{rate} vs {expected}");
}

#[test]
fn forged_bills_follow_binomial_tail() {
    let bills = 1000;
    let (passed, tokens_ok, tokens, bill) = run_bills(true, bills);
    let rate = passed as f64 / bills as f64;
    let p_hat = tokens_ok as f64 / tokens as f64;
    let expected = bill_accept_probability(bill.min_accepted(), 20, p_hat).unwrap();
    let sigma = (expected * (1.0 - expected) / bills as f64).sqrt();
    assert!((rate - expected).abs() <= 4.0 * sigma, "forged bills {rate} vs tail {expected} at p_f = {p_hat}");
}

#[test]
fn issued_angles_are_haar() {
    // the opacity rule keeps angles private, so uniformity is checked on the
    // first-round statistics against a fixed probe: P(c1 = 1) averages to 1/4
    let noise = qvault::statekit::NoiseModel::ideal();
    let mut rng = seeded(12);
    let policy = AcceptancePolicy::with_tau(0.5).unwrap();
    let cfg = AttackConfig::new(qvault::calibration::QualityParams::IDEAL);
    let n = 20_000;
    let mut ones = 0usize;
    for _ in 0..n {
        let pair = issue_pair(&mut rng);
        let mut forged = forge_pair(&pair, &cfg, &noise, &mut rng).unwrap();
        ones += usize::from(!authenticate_token(&mut forged, &policy, &noise, &mut rng).unwrap().accepted);
    }
    // probe-then-forge on Haar targets fails with probability 1 - 38/48
    let expected = 10.0 / 48.0;
    let f = ones as f64 / n as f64;
    assert!((f - expected).abs() <= 4.0 * (expected * (1.0 - expected) / n as f64).sqrt(), "{f}");
}
