//! Token issuance, single-token authentication against the vault copy and
//! bill-level decisions.

use std::fmt;

use rand::Rng;

use crate::calibration::AcceptancePolicy;
use crate::error::{check_probability, Error, Result};
use crate::rng::{fork_master, par_indexed};
use crate::statekit::{haar_random, BlochAngles, NoiseModel};
use crate::stats::binomial_tail_at_least;
use crate::swaptest::run_shot;

/// Opaque 128-bit token identifier, displayed as 32 lowercase hex digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Serial(u128);

impl Serial {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Serial(rng.random())
    }
}

impl fmt::Display for Serial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:032x}", self.0)
    }
}

/// A user token together with the bank's vault copy.
///
/// The preparation angles stay inside the crate: callers only see the serial
/// and the lifecycle state.
///
/// ```compile_fail
/// let mut rng = qvault::rng::seeded(1);
/// let pair = qvault::protocol::issue_pair(&mut rng);
/// let _ = pair.user_angles();
/// ```
#[derive(Debug, Clone)]
pub struct TokenPair {
    serial: Serial,
    user: BlochAngles,
    vault: BlochAngles,
    consumed: bool,
}

impl TokenPair {
    pub fn serial(&self) -> Serial {
        self.serial
    }

    pub fn is_consumed(&self) -> bool {
        self.consumed
    }

    pub(crate) fn with_user_token(serial: Serial, user: BlochAngles, vault: BlochAngles) -> Self {
        TokenPair { serial, user, vault, consumed: false }
    }

    pub(crate) fn user_angles(&self) -> BlochAngles {
        self.user
    }

    pub(crate) fn vault_angles(&self) -> BlochAngles {
        self.vault
    }
}

/// Issues a fresh pair holding two copies of one Haar-random state.
pub fn issue_pair<R: Rng + ?Sized>(rng: &mut R) -> TokenPair {
    let serial = Serial::random(rng);
    let a = haar_random(rng);
    TokenPair::with_user_token(serial, a, a)
}

/// Outcome of authenticating one token pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuthenticationResult {
    pub serial: Serial,
    pub observable: f64,
    pub accepted: bool,
}

/// SWAP-tests the user token against the vault copy and consumes the pair.
pub fn authenticate_token<R: Rng + ?Sized>(
    pair: &mut TokenPair,
    policy: &AcceptancePolicy,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<AuthenticationResult> {
    if pair.consumed {
        return Err(Error::Consumed { serial: pair.serial.to_string() });
    }
    let record = run_shot(pair.user, pair.vault, policy.repetitions(), noise, rng)?;
    pair.consumed = true;
    let observable = record.observable();
    Ok(AuthenticationResult { serial: pair.serial, observable, accepted: policy.accepts(observable) })
}

/// A bill of `total` tokens, accepted when at least `min_accepted` pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BillPolicy {
    total: usize,
    min_accepted: usize,
    target_type2: f64,
}

impl BillPolicy {
    pub fn new(total: usize, min_accepted: usize, target_type2: f64) -> Result<Self> {
        if total == 0 {
            return Err(Error::InvalidArgument("a bill needs M >= 1 tokens".into()));
        }
        if min_accepted > total {
            return Err(Error::InvalidArgument(format!("m = {min_accepted} exceeds M = {total}")));
        }
        if !(target_type2 > 0.0 && target_type2 < 1.0) {
            return Err(Error::InvalidArgument(format!("type-II target {target_type2} outside (0, 1)")));
        }
        Ok(BillPolicy { total, min_accepted, target_type2 })
    }

    /// Policy with `m` chosen by [`choose_bill_threshold`].
    pub fn for_target(total: usize, p_b: f64, target_type2: f64) -> Result<Self> {
        let m = choose_bill_threshold(total, p_b, target_type2)?;
        Self::new(total, m, target_type2)
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn min_accepted(&self) -> usize {
        self.min_accepted
    }

    pub fn target_type2(&self) -> f64 {
        self.target_type2
    }
}

/// Probability that at least `m` of `M` independent tokens pass, each with
/// probability `p`.
pub fn bill_accept_probability(m: usize, total: usize, p: f64) -> Result<f64> {
    binomial_tail_at_least(m as u64, total as u64, p)
}

/// Largest `m` whose genuine-bill acceptance is at least `1 - target_type2`.
pub fn choose_bill_threshold(total: usize, p_b: f64, target_type2: f64) -> Result<usize> {
    check_probability("p_b", p_b)?;
    if total == 0 {
        return Err(Error::InvalidArgument("a bill needs M >= 1 tokens".into()));
    }
    if !(target_type2 > 0.0 && target_type2 < 1.0) {
        return Err(Error::InvalidArgument(format!("type-II target {target_type2} outside (0, 1)")));
    }
    for m in (0..=total).rev() {
        if bill_accept_probability(m, total, p_b)? >= 1.0 - target_type2 {
            return Ok(m);
        }
    }
    Err(Error::UnreachableTarget { target: target_type2 })
}

/// Outcome of a bill authentication.
#[derive(Debug, Clone, PartialEq)]
pub struct BillDecision {
    pub accepted_count: usize,
    pub accepted: bool,
    pub tokens: Vec<AuthenticationResult>,
}

/// Authenticates every token of a bill in parallel.
///
/// If any pair is already consumed the whole bill is rejected before any
/// token is touched.
pub fn authenticate_bill<R: Rng + ?Sized>(
    pairs: &mut [TokenPair],
    policy: &AcceptancePolicy,
    bill: &BillPolicy,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<BillDecision> {
    if pairs.len() != bill.total {
        return Err(Error::InvalidArgument(format!("bill holds {} tokens, policy expects {}", pairs.len(), bill.total)));
    }
    let consumed: Vec<String> = pairs.iter().filter(|p| p.consumed).map(|p| p.serial.to_string()).collect();
    if !consumed.is_empty() {
        return Err(Error::BillContainsConsumed { serials: consumed });
    }
    let master = fork_master(rng);
    let snapshot: &[TokenPair] = pairs;
    let observables = par_indexed(master, snapshot.len(), |r, i| {
        Ok(run_shot(snapshot[i].user, snapshot[i].vault, policy.repetitions(), noise, r)?.observable())
    })?;
    let tokens: Vec<AuthenticationResult> = pairs
        .iter_mut()
        .zip(observables)
        .map(|(pair, observable)| {
            pair.consumed = true;
            AuthenticationResult { serial: pair.serial, observable, accepted: policy.accepts(observable) }
        })
        .collect();
    let accepted_count = tokens.iter().filter(|t| t.accepted).count();
    Ok(BillDecision { accepted_count, accepted: accepted_count >= bill.min_accepted, tokens })
}
