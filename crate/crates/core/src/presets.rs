//! Frozen noise presets modelled on three superconducting backends.
//!
//! Each preset uses `p1 = p2 / 10` and was tuned so that the exact
//! `(Q_o, Q_a)` of a 20-round sweep sits on the backend's published quality
//! figures.

use crate::statekit::NoiseModel;

/// Published quality figures a preset is tuned to, with their quoted
/// uncertainties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityTarget {
    pub q_o: f64,
    pub sigma_q_o: f64,
    pub q_a: f64,
    pub sigma_q_a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub noise: NoiseModel,
    pub target: Option<QualityTarget>,
}

pub const IDEAL: Preset = Preset { name: "ideal", noise: NoiseModel::ideal(), target: None };

pub const KINGSTON_LIKE: Preset = Preset {
    name: "kingston-like",
    noise: NoiseModel { p1: 0.00204, p2: 0.0204, p_readout: 0.0, readout_decay: 0.0692 },
    target: Some(QualityTarget { q_o: 0.10, sigma_q_o: 0.01, q_a: 0.56, sigma_q_a: 0.03 }),
};

pub const FEZ_LIKE: Preset = Preset {
    name: "fez-like",
    noise: NoiseModel { p1: 0.00329, p2: 0.0329, p_readout: 0.0, readout_decay: 0.0863 },
    target: Some(QualityTarget { q_o: 0.135, sigma_q_o: 0.004, q_a: 0.42, sigma_q_a: 0.01 }),
};

pub const MARRAKESH_LIKE: Preset = Preset {
    name: "marrakesh-like",
    noise: NoiseModel { p1: 0.00304, p2: 0.0304, p_readout: 0.0142, readout_decay: 0.0 },
    target: Some(QualityTarget { q_o: 0.151, sigma_q_o: 0.003, q_a: 0.47, sigma_q_a: 0.01 }),
};

/// The three hardware-like presets, best quality first.
pub const HARDWARE: [Preset; 3] = [KINGSTON_LIKE, FEZ_LIKE, MARRAKESH_LIKE];

/// Looks a preset up by name.
pub fn by_name(name: &str) -> Option<Preset> {
    [IDEAL, KINGSTON_LIKE, FEZ_LIKE, MARRAKESH_LIKE].into_iter().find(|p| p.name == name)
}

/// Names accepted by [`by_name`].
pub fn names() -> Vec<&'static str> {
    [IDEAL, KINGSTON_LIKE, FEZ_LIKE, MARRAKESH_LIKE].iter().map(|p| p.name).collect()
}
