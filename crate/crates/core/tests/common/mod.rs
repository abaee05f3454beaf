//! Dense reference implementations used as oracles by the integration tests.
//! Everything here is built from 8×8 matrices and basis-index arithmetic,
//! independently of the crate's in-place gate kernels.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C = Complex64;
pub type Mat = DMatrix<C>;
pub type Vector = DVector<C>;

pub const DIM: usize = 8;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Single-qubit 2×2 `u` acting on qubit `q` of a three-qubit register.
pub fn lift(u: [[C; 2]; 2], q: usize) -> Mat {
    Mat::from_fn(DIM, DIM, |row, col| {
        let others_match = (row & !(1 << q)) == (col & !(1 << q));
        if others_match { u[(row >> q) & 1][(col >> q) & 1] } else { c(0.0, 0.0) }
    })
}

pub fn h(q: usize) -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    lift([[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]], q)
}

pub fn x(q: usize) -> Mat {
    lift([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]], q)
}

pub fn y(q: usize) -> Mat {
    lift([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]], q)
}

pub fn z(q: usize) -> Mat {
    lift([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]], q)
}

/// Permutation matrix of the Fredkin gate.
pub fn cswap(control: usize, a: usize, b: usize) -> Mat {
    let mut m = Mat::zeros(DIM, DIM);
    for col in 0..DIM {
        let row = if (col >> control) & 1 == 1 && ((col >> a) & 1) != ((col >> b) & 1) {
            col ^ (1 << a) ^ (1 << b)
        } else {
            col
        };
        m[(row, col)] = c(1.0, 0.0);
    }
    m
}

/// Projector onto outcome `bit` of qubit `q`.
pub fn projector(q: usize, bit: usize) -> Mat {
    Mat::from_fn(DIM, DIM, |r, col| if r == col && (r >> q) & 1 == bit { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
pub fn qubit(theta: f64, phi: f64) -> [C; 2] {
    [c((theta / 2.0).cos(), 0.0), C::from_polar((theta / 2.0).sin(), phi)]
}

/// `|a⟩ ⊗ |b⟩ ⊗ |0⟩` with `a` on qubit 0 and the auxiliary on qubit 2.
pub fn register(a: [C; 2], b: [C; 2]) -> Vector {
    Vector::from_fn(DIM, |i, _| if (i >> 2) & 1 == 1 { c(0.0, 0.0) } else { a[i & 1] * b[(i >> 1) & 1] })
}

/// Noiseless SWAP-test round without the measurement.
pub fn round_unitary() -> Mat {
    h(2) * cswap(2, 0, 1) * h(2)
}

/// Noise parameters mirrored from the crate's model.
#[derive(Clone, Copy, Debug)]
pub struct Noise {
    pub p1: f64,
    pub p2: f64,
    pub p_readout: f64,
    pub readout_decay: f64,
}

/// Exact three-qubit density matrix under the averaged noise channel.
pub struct DensityOracle {
    pub rho: Mat,
}

impl DensityOracle {
    pub fn new(psi: &Vector) -> Self {
        DensityOracle { rho: psi * psi.adjoint() }
    }

    fn unitary(&mut self, u: &Mat) {
        self.rho = u * &self.rho * u.adjoint();
    }

    fn depolarize(&mut self, qubits: &[usize], p: f64) {
        for &q in qubits {
            let mut out = self.rho.scale(1.0 - p);
            for pauli in [x(q), y(q), z(q)] {
                out += (&pauli * &self.rho * pauli.adjoint()).scale(p / 3.0);
            }
            self.rho = out;
        }
    }

    /// One noisy round; returns the probability that the reported bit is 1.
    pub fn round(&mut self, n: &Noise) -> f64 {
        self.unitary(&h(2));
        self.depolarize(&[2], n.p1);
        self.unitary(&cswap(2, 0, 1));
        self.depolarize(&[2, 0, 1], n.p2);
        self.unitary(&h(2));
        self.depolarize(&[2], n.p1);
        let p0 = projector(2, 0);
        let p1 = projector(2, 1);
        let branch0 = &p0 * &self.rho * &p0;
        let mut branch1 = DensityOracle { rho: &p1 * &self.rho * &p1 };
        let prob1 = branch1.rho.trace().re;
        branch1.unitary(&x(2));
        branch1.depolarize(&[2], n.p1);
        self.rho = branch0 + branch1.rho;
        let q_zero_given_one = n.readout_decay * (1.0 - n.p_readout) + (1.0 - n.readout_decay) * n.p_readout;
        (1.0 - prob1) * n.p_readout + prob1 * (1.0 - q_zero_given_one)
    }
}

/// Exact `c̄_n`, `n = 1..=n_max`.
pub fn exact_decay(a: [C; 2], b: [C; 2], noise: &Noise, n_max: usize) -> Vec<f64> {
    let mut oracle = DensityOracle::new(&register(a, b));
    (0..n_max).map(|_| oracle.round(noise)).collect()
}

/// Noiseless round on a pure state: `(P(1), branch after 0, branch after 1)`,
/// with branches already reset and renormalised.
pub fn ideal_branches(psi: &Vector) -> (f64, Option<Vector>, Option<Vector>) {
    let after = round_unitary() * psi;
    let b0 = projector(2, 0) * &after;
    let b1 = x(2) * (projector(2, 1) * &after);
    let p1 = b1.norm_squared();
    let norm = |v: Vector| {
        let n = v.norm();
        (n > 1e-12).then(|| v.unscale(n))
    };
    (p1, norm(b0), norm(b1))
}
