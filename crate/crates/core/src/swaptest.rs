//! Repeated SWAP test on a three-qubit register.
//!
//! One round is `H(aux) · CSWAP(aux; t1, t2) · H(aux)` followed by a
//! measurement of the auxiliary qubit and its reset to `|0⟩`. The token
//! qubits are never measured, so they carry the back-action of every round
//! (and any gate errors) into the next one.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{fork_master, par_indexed};
use crate::statekit::{
    apply_controlled_swap, apply_hadamard, apply_x, measure_qubit, prepare, BlochAngles, NoiseModel,
    StateVector,
};

/// Register slot of the first token.
pub const TOKEN_A: usize = 0;
/// Register slot of the second token.
pub const TOKEN_B: usize = 1;
/// Register slot of the auxiliary qubit.
pub const AUX: usize = 2;

/// Number of rounds used for authentication unless configured otherwise.
pub const DEFAULT_REPETITIONS: usize = 20;

/// Bitstring `c₁…c_N` of one shot and its mean `C_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapTestRecord {
    bits: Vec<u8>,
    ones: usize,
}

impl SwapTestRecord {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument("a SWAP-test record needs at least one round".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("bits must be 0 or 1".into()));
        }
        let ones = bits.iter().map(|&b| b as usize).sum();
        Ok(SwapTestRecord { bits, ones })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn repetitions(&self) -> usize {
        self.bits.len()
    }

    /// Number of rounds that reported `1`.
    pub fn ones(&self) -> usize {
        self.ones
    }

    /// `C_N = (1/N) Σ c_n`.
    pub fn observable(&self) -> f64 {
        self.ones as f64 / self.bits.len() as f64
    }

    /// True when every round reported the same bit.
    pub fn is_constant(&self) -> bool {
        self.ones == 0 || self.ones == self.bits.len()
    }
}

/// Shot-averaged `c̄_n` for `n = 1..=N_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub n: Vec<usize>,
    pub c_bar: Vec<f64>,
    pub standard_error: Vec<f64>,
    pub shots: usize,
}

impl DecayCurve {
    /// Per-round averages over an ensemble of equal-length records.
    pub fn from_records(records: &[SwapTestRecord]) -> Result<Self> {
        let first = records
            .first()
            .ok_or_else(|| Error::InvalidArgument("decay curve needs at least one shot".into()))?;
        let rounds = first.repetitions();
        if records.iter().any(|r| r.repetitions() != rounds) {
            return Err(Error::InvalidArgument("records have different lengths".into()));
        }
        let shots = records.len();
        let mut counts = vec![0usize; rounds];
        for r in records {
            for (c, &b) in counts.iter_mut().zip(r.bits()) {
                *c += b as usize;
            }
        }
        let c_bar: Vec<f64> = counts.iter().map(|&c| c as f64 / shots as f64).collect();
        let standard_error = c_bar
            .iter()
            .map(|&p| if shots > 1 { (p * (1.0 - p) / (shots - 1) as f64).sqrt() } else { 0.0 })
            .collect();
        Ok(DecayCurve { n: (1..=rounds).collect(), c_bar, standard_error, shots })
    }
}

/// Mean of per-shot observables with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotAverage {
    pub mean: f64,
    pub standard_error: f64,
    pub shots: usize,
}

impl ShotAverage {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidArgument("no samples to average".into()));
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let standard_error = if samples.len() > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Ok(ShotAverage { mean, standard_error, shots: samples.len() })
    }
}

/// Register `prepare(a1) ⊗ prepare(a2) ⊗ |0⟩`.
pub fn initial_register(a1: BlochAngles, a2: BlochAngles) -> StateVector {
    StateVector::product(&[prepare(a1), prepare(a2), StateVector::zero(1).expect("one qubit")])
        .expect("three-qubit register")
}

/// One SWAP-test round on an existing register. Returns the reported bit.
pub fn swap_round<R: Rng + ?Sized>(
    state: StateVector,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<(u8, StateVector)> {
    let state = apply_hadamard(state, AUX, noise, rng)?;
    let state = apply_controlled_swap(state, AUX, TOKEN_A, TOKEN_B, noise, rng)?;
    let state = apply_hadamard(state, AUX, noise, rng)?;
    let m = measure_qubit(state, AUX, noise, rng)?;
    // reset acts on the branch the register actually took
    let state = if m.outcome == 1 { apply_x(m.state, AUX, noise, rng)? } else { m.state };
    Ok((m.bit, state))
}

/// One shot of the `N`-round SWAP test between tokens `a1` and `a2`.
pub fn run_shot<R: Rng + ?Sized>(
    a1: BlochAngles,
    a2: BlochAngles,
    repetitions: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<SwapTestRecord> {
    if repetitions == 0 {
        return Err(Error::InvalidArgument("SWAP test needs N >= 1".into()));
    }
    let mut state = initial_register(a1, a2);
    let mut bits = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let (bit, next) = swap_round(state, noise, rng)?;
        bits.push(bit);
        state = next;
    }
    SwapTestRecord::from_bits(bits)
}

/// `shots` independent shots, each on its own substream.
pub fn run_shots<R: Rng + ?Sized>(
    a1: BlochAngles,
    a2: BlochAngles,
    repetitions: usize,
    noise: &NoiseModel,
    shots: usize,
    rng: &mut R,
) -> Result<Vec<SwapTestRecord>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    let master = fork_master(rng);
    par_indexed(master, shots, |r, _| run_shot(a1, a2, repetitions, noise, r))
}

/// Per-shot `C_N` values for `shots` shots.
pub fn sample_observables<R: Rng + ?Sized>(
    a1: BlochAngles,
    a2: BlochAngles,
    repetitions: usize,
    noise: &NoiseModel,
    shots: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    Ok(run_shots(a1, a2, repetitions, noise, shots, rng)?.iter().map(SwapTestRecord::observable).collect())
}

/// `C̄_N` over `shots` shots and its standard error.
pub fn shot_average_observable<R: Rng + ?Sized>(
    a1: BlochAngles,
    a2: BlochAngles,
    repetitions: usize,
    noise: &NoiseModel,
    shots: usize,
    rng: &mut R,
) -> Result<ShotAverage> {
    ShotAverage::from_samples(&sample_observables(a1, a2, repetitions, noise, shots, rng)?)
}

/// `c̄_n` for `n = 1..=n_max`, all rounds taken from the same shot ensemble.
pub fn decay_curve<R: Rng + ?Sized>(
    a1: BlochAngles,
    a2: BlochAngles,
    n_max: usize,
    noise: &NoiseModel,
    shots: usize,
    rng: &mut R,
) -> Result<DecayCurve> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("decay curve needs N_max >= 2".into()));
    }
    DecayCurve::from_records(&run_shots(a1, a2, n_max, noise, shots, rng)?)
}
