//! Gate-level use of the three-qubit simulator.

use qvault::rng::seeded;
use qvault::statekit::{apply_controlled_swap, apply_hadamard, fidelity, measure_qubit, prepare, BlochAngles, NoiseModel, StateVector};

fn main() -> qvault::Result<()> {
    let mut rng = seeded(3);
    let a = BlochAngles::new(1.0, 0.4);
    let b = BlochAngles::new(2.2, 1.9);
    println!("fidelity(a, b) = {:.4}", fidelity(a, b));

    let ideal = NoiseModel::ideal();
    let reg = StateVector::product(&[prepare(a), prepare(b), StateVector::zero(1)?])?;
    let reg = apply_hadamard(reg, 2, &ideal, &mut rng)?;
    let reg = apply_controlled_swap(reg, 2, 0, 1, &ideal, &mut rng)?;
    let reg = apply_hadamard(reg, 2, &ideal, &mut rng)?;
    println!("P(aux = 1) = {:.4}  (expected {:.4})", reg.probability_one(2)?, (1.0 - fidelity(a, b)) / 2.0);

    let m = measure_qubit(reg, 2, &ideal, &mut rng)?;
    println!("measured aux = {}, post-measurement norm = {:.12}", m.bit, m.state.norm_sqr());
    Ok(())
}
