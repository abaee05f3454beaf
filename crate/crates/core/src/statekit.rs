//! Exact statevector simulation of the (at most three-qubit) SWAP-test register.
//!
//! Amplitudes are stored little-endian: qubit 0 is the least-significant bit
//! of the amplitude index. In the SWAP-test register qubit 0 holds the first
//! token, qubit 1 the second token and qubit 2 the auxiliary qubit.
//!
//! Noise is simulated as stochastic Pauli trajectories. After every ideal
//! gate each participating qubit independently suffers a uniformly chosen
//! X, Y or Z with the gate's depolarizing probability. Readout errors only
//! corrupt the reported classical bit; the register collapses according to
//! the true outcome.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{check_probability, Error, Result};

const MAX_QUBITS: usize = 3;

/// Preparation angles of a single-qubit token on the Bloch sphere.
///
/// `theta` is kept in `[0, π]` and `phi` in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    /// Builds normalized angles. Polar angles outside `[0, π]` are folded
    /// back onto the sphere (shifting `phi` by π), azimuths wrap mod 2π.
    ///
    /// Panics on non-finite input.
    pub fn new(theta: f64, phi: f64) -> Self {
        assert!(
            theta.is_finite() && phi.is_finite(),
            "Bloch angles must be finite (theta = {theta}, phi = {phi})"
        );
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        BlochAngles { theta, phi }
    }

    /// The north pole, `|0⟩`.
    pub const ZERO: BlochAngles = BlochAngles { theta: 0.0, phi: 0.0 };

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit Bloch vector `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Angles of the direction `v` (need not be normalized, must be nonzero).
    pub fn from_vector(v: [f64; 3]) -> Self {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        assert!(norm > 0.0, "zero vector has no direction");
        let z = (v[2] / norm).clamp(-1.0, 1.0);
        BlochAngles::new(z.acos(), v[1].atan2(v[0]))
    }
}

/// Depolarizing-trajectory noise parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseModel {
    /// Pauli-error probability after each single-qubit gate.
    pub p1: f64,
    /// Pauli-error probability, per participating qubit, after each multi-qubit gate.
    pub p2: f64,
    /// Symmetric classical flip probability of the reported bit.
    pub p_readout: f64,
    /// Probability that a true `1` relaxes and is reported as `0`, applied
    /// before the symmetric flip.
    pub readout_decay: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, p_readout: f64) -> Result<Self> {
        Self::with_readout_decay(p1, p2, p_readout, 0.0)
    }

    pub fn with_readout_decay(p1: f64, p2: f64, p_readout: f64, readout_decay: f64) -> Result<Self> {
        Ok(NoiseModel {
            p1: check_probability("p1", p1)?,
            p2: check_probability("p2", p2)?,
            p_readout: check_probability("p_readout", p_readout)?,
            readout_decay: check_probability("readout_decay", readout_decay)?,
        })
    }

    /// The noiseless model.
    pub const fn ideal() -> Self {
        NoiseModel { p1: 0.0, p2: 0.0, p_readout: 0.0, readout_decay: 0.0 }
    }

    pub fn is_ideal(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_readout == 0.0 && self.readout_decay == 0.0
    }

    /// Re-checks the probability ranges (fields are public).
    pub fn validate(&self) -> Result<()> {
        Self::with_readout_decay(self.p1, self.p2, self.p_readout, self.readout_decay).map(|_| ())
    }

    /// Probability that a true outcome `0` is reported as `1`.
    pub fn p_report_one_given_zero(&self) -> f64 {
        self.p_readout
    }

    /// Probability that a true outcome `1` is reported as `0`.
    pub fn p_report_zero_given_one(&self) -> f64 {
        self.readout_decay * (1.0 - self.p_readout) + (1.0 - self.readout_decay) * self.p_readout
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Complex amplitudes of a 1- to 3-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    qubits: usize,
}

impl StateVector {
    /// The all-zero computational basis state on `qubits` qubits.
    pub fn zero(qubits: usize) -> Result<Self> {
        Self::basis(qubits, 0)
    }

    /// Computational basis state `|index⟩` (little-endian).
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::UnsupportedRegister(qubits));
        }
        let dim = 1 << qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} >= {dim}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amplitudes, qubits })
    }

    /// Wraps raw amplitudes; the length must be `2^n` with `n` in `1..=3` and
    /// the norm must be 1 within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let qubits = match amplitudes.len() {
            2 => 1,
            4 => 2,
            8 => 3,
            n => return Err(Error::UnsupportedRegister(n.max(1).ilog2() as usize)),
        };
        let state = StateVector { amplitudes, qubits };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("amplitudes not normalized (|ψ|² = {norm})")));
        }
        Ok(state)
    }

    /// Tensor product with `parts[0]` on the lowest qubits.
    pub fn product(parts: &[StateVector]) -> Result<Self> {
        let qubits: usize = parts.iter().map(|p| p.qubits).sum();
        if parts.is_empty() || qubits > MAX_QUBITS {
            return Err(Error::UnsupportedRegister(qubits));
        }
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        for part in parts {
            // existing qubits stay low, the new factor goes on top
            let mut next = Vec::with_capacity(amplitudes.len() * part.amplitudes.len());
            for hi in &part.amplitudes {
                for lo in &amplitudes {
                    next.push(lo * hi);
                }
            }
            amplitudes = next;
        }
        Ok(StateVector { amplitudes, qubits })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.qubits != other.qubits {
            return Err(Error::InvalidArgument("inner product of registers of different size".into()));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// Born probability of reading `1` on `qubit`.
    pub fn probability_one(&self, qubit: usize) -> Result<f64> {
        self.check_index(qubit)?;
        let mask = 1 << qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    fn check_index(&self, qubit: usize) -> Result<()> {
        if qubit >= self.qubits {
            Err(Error::QubitOutOfRange { index: qubit, qubits: self.qubits })
        } else {
            Ok(())
        }
    }

    fn check_distinct(&self, qubits: &[usize]) -> Result<()> {
        for &q in qubits {
            self.check_index(q)?;
        }
        for (i, a) in qubits.iter().enumerate() {
            if qubits[i + 1..].contains(a) {
                return Err(Error::DuplicateQubits(qubits.to_vec()));
            }
        }
        Ok(())
    }

    /// Ideal Hadamard on `qubit`.
    pub fn hadamard(&mut self, qubit: usize) -> Result<()> {
        self.check_index(qubit)?;
        let mask = 1 << qubit;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let a = self.amplitudes[i];
                let b = self.amplitudes[i | mask];
                self.amplitudes[i] = (a + b) * s;
                self.amplitudes[i | mask] = (a - b) * s;
            }
        }
        Ok(())
    }

    /// Ideal Pauli operator on `qubit`.
    pub fn pauli(&mut self, qubit: usize, pauli: Pauli) -> Result<()> {
        self.check_index(qubit)?;
        let mask = 1 << qubit;
        let i_unit = Complex64::new(0.0, 1.0);
        for i in 0..self.amplitudes.len() {
            if i & mask != 0 {
                continue;
            }
            let a0 = self.amplitudes[i];
            let a1 = self.amplitudes[i | mask];
            let (n0, n1) = match pauli {
                Pauli::X => (a1, a0),
                Pauli::Y => (-i_unit * a1, i_unit * a0),
                Pauli::Z => (a0, -a1),
            };
            self.amplitudes[i] = n0;
            self.amplitudes[i | mask] = n1;
        }
        Ok(())
    }

    /// Ideal Fredkin gate: swaps `target_a` and `target_b` when `control` is 1.
    pub fn controlled_swap(&mut self, control: usize, target_a: usize, target_b: usize) -> Result<()> {
        self.check_distinct(&[control, target_a, target_b])?;
        let (c, a, b) = (1 << control, 1 << target_a, 1 << target_b);
        for i in 0..self.amplitudes.len() {
            // visit each swapped pair once, from the |..1_a 0_b..⟩ side
            if i & c != 0 && i & a != 0 && i & b == 0 {
                let j = (i & !a) | b;
                self.amplitudes.swap(i, j);
            }
        }
        Ok(())
    }

    /// Projects `qubit` onto `outcome` and renormalizes.
    pub fn collapse(&mut self, qubit: usize, outcome: u8) -> Result<()> {
        self.check_index(qubit)?;
        let p_one = self.probability_one(qubit)?;
        let branch = if outcome == 1 { p_one } else { 1.0 - p_one };
        if branch <= 0.0 {
            return Err(Error::ZeroProbabilityBranch { probability: branch });
        }
        let mask = 1 << qubit;
        let scale = 1.0 / branch.sqrt();
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            let bit = u8::from(i & mask != 0);
            if bit == outcome {
                *amp *= scale;
            } else {
                *amp = Complex64::new(0.0, 0.0);
            }
        }
        Ok(())
    }
}

/// `R(θ, φ)|0⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
pub fn prepare(angles: BlochAngles) -> StateVector {
    let half = angles.theta / 2.0;
    StateVector {
        amplitudes: vec![
            Complex64::new(half.cos(), 0.0),
            Complex64::from_polar(half.sin(), angles.phi),
        ],
        qubits: 1,
    }
}

/// Maps two uniforms on `[0, 1)` to Haar-distributed angles via the inverse CDF.
pub fn haar_from_uniforms(u: f64, v: f64) -> BlochAngles {
    BlochAngles::new((1.0 - 2.0 * u).clamp(-1.0, 1.0).acos(), TAU * v)
}

/// Draws angles uniformly distributed over the Bloch sphere.
pub fn haar_random<R: Rng + ?Sized>(rng: &mut R) -> BlochAngles {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    haar_from_uniforms(u, v)
}

/// Angle `Θ ∈ [0, π]` between the Bloch vectors of two states.
pub fn angle_between(a1: BlochAngles, a2: BlochAngles) -> f64 {
    let n1 = a1.unit_vector();
    let n2 = a2.unit_vector();
    let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let diff = norm(std::array::from_fn(|k| n1[k] - n2[k]));
    let sum = norm(std::array::from_fn(|k| n1[k] + n2[k]));
    // half-angle form stays accurate near 0 and π where acos of the dot does not
    2.0 * diff.atan2(sum)
}

/// `|⟨ψ₁|ψ₂⟩|² = (1 + cos Θ)/2`.
pub fn fidelity(a1: BlochAngles, a2: BlochAngles) -> f64 {
    (1.0 + angle_between(a1, a2).cos()) / 2.0
}

fn depolarize<R: Rng + ?Sized>(state: &mut StateVector, qubit: usize, p: f64, rng: &mut R) -> Result<()> {
    if p > 0.0 && rng.random::<f64>() < p {
        let pauli = match rng.random_range(0..3u8) {
            0 => Pauli::X,
            1 => Pauli::Y,
            _ => Pauli::Z,
        };
        state.pauli(qubit, pauli)?;
    }
    Ok(())
}

/// Hadamard followed by a depolarizing trajectory step with probability `p1`.
pub fn apply_hadamard<R: Rng + ?Sized>(
    mut state: StateVector,
    qubit: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<StateVector> {
    state.hadamard(qubit)?;
    depolarize(&mut state, qubit, noise.p1, rng)?;
    Ok(state)
}

/// Pauli-X followed by a depolarizing trajectory step with probability `p1`.
pub fn apply_x<R: Rng + ?Sized>(
    mut state: StateVector,
    qubit: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<StateVector> {
    state.pauli(qubit, Pauli::X)?;
    depolarize(&mut state, qubit, noise.p1, rng)?;
    Ok(state)
}

/// Controlled-SWAP followed by independent depolarizing steps (probability
/// `p2`) on each of the three participating qubits.
pub fn apply_controlled_swap<R: Rng + ?Sized>(
    mut state: StateVector,
    control: usize,
    target_a: usize,
    target_b: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<StateVector> {
    state.controlled_swap(control, target_a, target_b)?;
    for q in [control, target_a, target_b] {
        depolarize(&mut state, q, noise.p2, rng)?;
    }
    Ok(state)
}

/// Outcome of a projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    /// Classical bit as reported, after readout error.
    pub bit: u8,
    /// Branch the register actually collapsed onto.
    pub outcome: u8,
    /// Post-measurement state, renormalized on `outcome`.
    pub state: StateVector,
}

/// Born-rule measurement of `qubit` with classical readout error.
pub fn measure_qubit<R: Rng + ?Sized>(
    mut state: StateVector,
    qubit: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<Measurement> {
    let p_one = state.probability_one(qubit)?;
    let outcome = u8::from(rng.random::<f64>() < p_one);
    state.collapse(qubit, outcome)?;
    let mut bit = outcome;
    if bit == 1 && noise.readout_decay > 0.0 && rng.random::<f64>() < noise.readout_decay {
        bit = 0;
    }
    if noise.p_readout > 0.0 && rng.random::<f64>() < noise.p_readout {
        bit ^= 1;
    }
    Ok(Measurement { bit, outcome, state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn prepare_examples() {
        let s = prepare(BlochAngles::new(0.0, 0.0));
        assert!(close(s.amplitudes()[0], Complex64::new(1.0, 0.0)));
        assert!(close(s.amplitudes()[1], Complex64::new(0.0, 0.0)));

        let s = prepare(BlochAngles::new(PI, 0.0));
        assert!(s.amplitudes()[0].norm() < 1e-12);
        assert!((s.amplitudes()[1].norm() - 1.0).abs() < 1e-12);

        let s = prepare(BlochAngles::new(PI / 2.0, PI / 2.0));
        assert!(close(s.amplitudes()[0], Complex64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(s.amplitudes()[1], Complex64::new(0.0, FRAC_1_SQRT_2)));
    }

    #[test]
    fn angles_normalize() {
        let a = BlochAngles::new(3.0 * PI / 2.0, 0.0);
        assert!((a.theta() - PI / 2.0).abs() < 1e-12);
        assert!((a.phi() - PI).abs() < 1e-12);
        let b = BlochAngles::new(0.3, -0.5);
        assert!((b.phi() - (TAU - 0.5)).abs() < 1e-12);
        // same physical state either way
        let f = fidelity(BlochAngles::new(3.0 * PI / 2.0, 0.0), BlochAngles::new(PI / 2.0, PI));
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_inverse_cdf_endpoints() {
        let a = haar_from_uniforms(0.0, 0.0);
        assert_eq!((a.theta(), a.phi()), (0.0, 0.0));
        let b = haar_from_uniforms(0.5, 0.5);
        assert!((b.theta() - PI / 2.0).abs() < 1e-12);
        assert!((b.phi() - PI).abs() < 1e-12);
    }

    #[test]
    fn haar_mean_cos_theta() {
        let mut rng = seeded(11);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| haar_random(&mut rng).theta().cos()).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean cos θ = {mean}");
    }

    #[test]
    fn angle_and_fidelity_examples() {
        let a = BlochAngles::new(0.7, 1.1);
        assert!(angle_between(a, a).abs() < 1e-7);
        assert!((angle_between(BlochAngles::new(0.0, 0.0), BlochAngles::new(PI, 0.0)) - PI).abs() < 1e-12);
        let x = BlochAngles::new(PI / 2.0, 0.0);
        let y = BlochAngles::new(PI / 2.0, PI / 2.0);
        assert!((angle_between(x, y) - PI / 2.0).abs() < 1e-12);
        assert!((fidelity(a, a) - 1.0).abs() < 1e-12);
        assert!(fidelity(BlochAngles::ZERO, BlochAngles::new(PI, 0.0)).abs() < 1e-12);
        assert!((fidelity(x, y) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fidelity_matches_inner_product() {
        let a = BlochAngles::new(1.2, 0.4);
        let b = BlochAngles::new(2.5, 4.0);
        let ip = prepare(a).inner(&prepare(b)).unwrap().norm_sqr();
        assert!((ip - fidelity(a, b)).abs() < 1e-12);
    }

    #[test]
    fn hadamard_on_zero() {
        let mut rng = seeded(0);
        let s = apply_hadamard(StateVector::zero(1).unwrap(), 0, &NoiseModel::ideal(), &mut rng).unwrap();
        assert!(close(s.amplitudes()[0], Complex64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(s.amplitudes()[1], Complex64::new(FRAC_1_SQRT_2, 0.0)));
    }

    #[test]
    fn cswap_examples() {
        let mut rng = seeded(0);
        let ideal = NoiseModel::ideal();
        // control (qubit 2) off: nothing happens
        let s = StateVector::basis(3, 0b001).unwrap();
        let out = apply_controlled_swap(s.clone(), 2, 0, 1, &ideal, &mut rng).unwrap();
        assert_eq!(out, s);
        // |1⟩_c ⊗ |01⟩ -> |1⟩_c ⊗ |10⟩ (qubit0 = 1 -> qubit1 = 1)
        let s = StateVector::basis(3, 0b101).unwrap();
        let out = apply_controlled_swap(s, 2, 0, 1, &ideal, &mut rng).unwrap();
        assert_eq!(out, StateVector::basis(3, 0b110).unwrap());
    }

    #[test]
    fn index_errors() {
        let mut rng = seeded(0);
        let ideal = NoiseModel::ideal();
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(
            apply_hadamard(s.clone(), 2, &ideal, &mut rng),
            Err(Error::QubitOutOfRange { index: 2, qubits: 2 })
        ));
        let s3 = StateVector::zero(3).unwrap();
        assert!(matches!(
            apply_controlled_swap(s3, 0, 0, 1, &ideal, &mut rng),
            Err(Error::DuplicateQubits(_))
        ));
        assert!(measure_qubit(s, 5, &ideal, &mut rng).is_err());
        assert!(StateVector::zero(4).is_err());
    }

    #[test]
    fn zero_branch_collapse_is_an_error() {
        let mut s = StateVector::zero(1).unwrap();
        assert!(matches!(s.collapse(0, 1), Err(Error::ZeroProbabilityBranch { .. })));
    }

    #[test]
    fn measure_zero_noiseless() {
        let mut rng = seeded(3);
        let m = measure_qubit(StateVector::zero(1).unwrap(), 0, &NoiseModel::ideal(), &mut rng).unwrap();
        assert_eq!((m.bit, m.outcome), (0, 0));
        assert_eq!(m.state, StateVector::zero(1).unwrap());
    }

    fn empirical_one_rate(state: &StateVector, noise: &NoiseModel, shots: usize, seed: u64) -> f64 {
        let mut rng = seeded(seed);
        let ones: usize = (0..shots)
            .map(|_| measure_qubit(state.clone(), 0, noise, &mut rng).unwrap().bit as usize)
            .sum();
        ones as f64 / shots as f64
    }

    #[test]
    fn measure_plus_born_rule() {
        let plus = prepare(BlochAngles::new(PI / 2.0, 0.0));
        let n = 10_000;
        let p = empirical_one_rate(&plus, &NoiseModel::ideal(), n, 5);
        let sigma = (0.25 / n as f64).sqrt();
        assert!((p - 0.5).abs() < 3.0 * sigma, "P(1) = {p}");
    }

    #[test]
    fn readout_flip_rate() {
        let noise = NoiseModel::new(0.0, 0.0, 0.1).unwrap();
        let n = 10_000;
        let p = empirical_one_rate(&StateVector::zero(1).unwrap(), &noise, n, 6);
        let sigma = (0.1 * 0.9 / n as f64).sqrt();
        assert!((p - 0.1).abs() < 3.0 * sigma, "P(1) = {p}");
    }

    #[test]
    fn readout_error_leaves_register_alone() {
        let noise = NoiseModel::new(0.0, 0.0, 1.0).unwrap();
        let mut rng = seeded(1);
        let m = measure_qubit(StateVector::zero(1).unwrap(), 0, &noise, &mut rng).unwrap();
        assert_eq!((m.bit, m.outcome), (1, 0));
        assert_eq!(m.state, StateVector::zero(1).unwrap());
    }

    #[test]
    fn readout_decay_asymmetry() {
        let noise = NoiseModel::with_readout_decay(0.0, 0.0, 0.1, 0.2).unwrap();
        assert!((noise.p_report_one_given_zero() - 0.1).abs() < 1e-15);
        assert!((noise.p_report_zero_given_one() - (0.2 * 0.9 + 0.8 * 0.1)).abs() < 1e-15);
        let one = StateVector::basis(1, 1).unwrap();
        let n = 20_000;
        let p = empirical_one_rate(&one, &noise, n, 8);
        let expect = 1.0 - noise.p_report_zero_given_one();
        assert!((p - expect).abs() < 4.0 * (expect * (1.0 - expect) / n as f64).sqrt());
    }

    #[test]
    fn noise_model_validation() {
        assert!(NoiseModel::new(-0.1, 0.0, 0.0).is_err());
        assert!(NoiseModel::new(0.0, 1.5, 0.0).is_err());
        assert!(NoiseModel::with_readout_decay(0.0, 0.0, 0.0, 2.0).is_err());
        assert!(NoiseModel::new(0.0, 0.0, 0.0).unwrap().is_ideal());
    }

    #[test]
    fn product_is_little_endian() {
        let one = StateVector::basis(1, 1).unwrap();
        let zero = StateVector::zero(1).unwrap();
        let s = StateVector::product(&[one, zero.clone(), zero]).unwrap();
        assert_eq!(s, StateVector::basis(3, 0b001).unwrap());
    }

    #[test]
    fn from_vector_round_trip() {
        let a = BlochAngles::new(1.0, 5.0);
        let b = BlochAngles::from_vector(a.unit_vector());
        assert!(angle_between(a, b) < 1e-7);
    }
}
