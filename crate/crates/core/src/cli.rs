//! End-to-end experiment drivers behind the `qvault` binary.
//!
//! Each command computes all of its results in memory and returns the files
//! it wants written; [`write_outputs`] then creates them. A failing command
//! therefore never leaves partial output behind.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::attack::{attack_campaign, AttackConfig};
use crate::calibration::{
    calibrate_threshold, fit_quality, genuine_samples, theta_sweep, AcceptancePolicy, QualityParams,
    ThetaSweepPoint, DEFAULT_CALIBRATION_STATES, DEFAULT_PB_TARGET, DEFAULT_SHOTS,
};
use crate::error::{Error, Result};
use crate::presets::{self, Preset};
use crate::protocol::{bill_accept_probability, choose_bill_threshold};
use crate::rng::{seeded, SimRng};
use crate::statekit::{BlochAngles, NoiseModel};
use crate::stats::{fit_exponential_decay, fraction_below, lattice_histogram, FitResult};
use crate::swaptest::{decay_curve, DecayCurve, DEFAULT_REPETITIONS};

/// Bill sizes tabulated by the attack report.
pub const BILL_SIZES: [usize; 5] = [10, 20, 50, 100, 200];

/// Settings shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Preset the noise came from, if any.
    pub preset: Option<String>,
    pub noise: NoiseModel,
    pub repetitions: usize,
    pub shots: usize,
    pub states: usize,
    pub seed: u64,
    pub pb_target: f64,
    pub bill_total: usize,
    pub type2_target: f64,
    pub out: PathBuf,
    /// Sweep points for `sweep`, `attack` and `table1`.
    pub points: usize,
    /// Longest register history for `decay`.
    pub n_max: usize,
    /// Forced acceptance threshold for `attack` (skips calibration).
    pub tau: Option<f64>,
    /// Forgery acceptance rate for `bill`.
    pub p_f: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: Some(presets::KINGSTON_LIKE.name.to_string()),
            noise: presets::KINGSTON_LIKE.noise,
            repetitions: DEFAULT_REPETITIONS,
            shots: DEFAULT_SHOTS,
            states: DEFAULT_CALIBRATION_STATES,
            seed: 1,
            pb_target: DEFAULT_PB_TARGET,
            bill_total: 20,
            type2_target: 1e-4,
            out: PathBuf::from("out"),
            points: 21,
            n_max: 60,
            tau: None,
            p_f: None,
        }
    }
}

impl RunConfig {
    /// Configuration using a named preset's noise.
    pub fn with_preset(mut self, preset: &Preset) -> Self {
        self.preset = Some(preset.name.to_string());
        self.noise = preset.noise;
        self
    }

    /// Checks every field against the preconditions of the commands.
    pub fn validate(&self) -> Result<()> {
        self.noise.validate()?;
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.repetitions == 0 {
            return bad("--repetitions must be >= 1".into());
        }
        if self.shots == 0 {
            return bad("--shots must be >= 1".into());
        }
        if self.states < 50 {
            return bad(format!("--states must be >= 50 (got {})", self.states));
        }
        if !(self.pb_target > 0.0 && self.pb_target < 1.0) {
            return bad(format!("--pb-target {} outside (0, 1)", self.pb_target));
        }
        if self.bill_total == 0 {
            return bad("--bill-M must be >= 1".into());
        }
        if !(self.type2_target > 0.0 && self.type2_target < 1.0) {
            return bad(format!("--type2-target {} outside (0, 1)", self.type2_target));
        }
        if self.points < 5 {
            return bad(format!("--points must be >= 5 (got {})", self.points));
        }
        if self.n_max < 2 {
            return bad(format!("--n-max must be >= 2 (got {})", self.n_max));
        }
        if let Some(tau) = self.tau {
            if !(tau > 0.0 && tau <= 1.0) {
                return bad(format!("--tau {tau} outside (0, 1]"));
            }
        }
        if let Some(p_f) = self.p_f {
            if !(0.0..=1.0).contains(&p_f) {
                return bad(format!("--pf {p_f} outside [0, 1]"));
            }
        }
        Ok(())
    }

    fn provenance(&self, command: &str) -> Vec<(String, String)> {
        let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |x| x.to_string());
        vec![
            ("qvault_version".into(), env!("CARGO_PKG_VERSION").into()),
            ("command".into(), command.into()),
            ("noise_preset".into(), self.preset.clone().unwrap_or_else(|| "custom".into())),
            ("p1".into(), self.noise.p1.to_string()),
            ("p2".into(), self.noise.p2.to_string()),
            ("p_readout".into(), self.noise.p_readout.to_string()),
            ("readout_decay".into(), self.noise.readout_decay.to_string()),
            ("repetitions".into(), self.repetitions.to_string()),
            ("shots".into(), self.shots.to_string()),
            ("states".into(), self.states.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("pb_target".into(), self.pb_target.to_string()),
            ("bill_M".into(), self.bill_total.to_string()),
            ("type2_target".into(), self.type2_target.to_string()),
            ("points".into(), self.points.to_string()),
            ("n_max".into(), self.n_max.to_string()),
            ("tau".into(), opt(self.tau)),
            ("pf".into(), opt(self.p_f)),
        ]
    }
}

/// A file produced by a command, relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// Key-value report with the run configuration at the top.
struct Report {
    text: String,
}

impl Report {
    fn new(config: &RunConfig, command: &str) -> Self {
        let mut text = String::new();
        for (k, v) in config.provenance(command) {
            let _ = writeln!(text, "{k} = {v}");
        }
        text.push('\n');
        Report { text }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.text, "{key} = {value}");
        self
    }

    fn blank(&mut self) -> &mut Self {
        self.text.push('\n');
        self
    }

    fn fit(&mut self, prefix: &str, fit: &FitResult) -> &mut Self {
        for (i, name) in fit.names.iter().enumerate() {
            self.kv(&format!("{prefix}{name}"), fit.parameters[i]);
            self.kv(&format!("{prefix}{name}_sd"), fit.standard_deviations[i]);
        }
        self.kv(&format!("{prefix}residual_norm"), fit.residual_norm)
    }

    fn file(&self, name: &str) -> OutputFile {
        OutputFile { name: name.into(), contents: self.text.clone() }
    }
}

/// CSV with `# key = value` provenance lines, a header row and one record
/// per line.
fn csv(config: &RunConfig, command: &str, header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut text = String::new();
    for (k, v) in config.provenance(command) {
        let _ = writeln!(text, "# {k} = {v}");
    }
    let _ = writeln!(text, "{header}");
    for row in rows {
        let _ = writeln!(text, "{row}");
    }
    text
}

fn histogram_csv(config: &RunConfig, command: &str, values: &[f64]) -> Result<String> {
    let bins = lattice_histogram(values, config.repetitions)?;
    Ok(csv(
        config,
        command,
        "bin_left,bin_right,count",
        bins.iter().map(|b| format!("{:.6},{:.6},{}", b.left, b.right, b.count)),
    ))
}

/// Writes `files` into `dir`, creating it if needed.
pub fn write_outputs(dir: &Path, files: &[OutputFile]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for f in files {
        fs::write(dir.join(&f.name), &f.contents)?;
    }
    Ok(())
}

fn decay_csv(config: &RunConfig, curve: &DecayCurve) -> String {
    csv(
        config,
        "decay",
        "n,c_bar,stderr",
        curve.n.iter().zip(&curve.c_bar).zip(&curve.standard_error).map(|((n, c), e)| format!("{n},{c:.8},{e:.8}")),
    )
}

/// Register history `c̄_n` for identical and orthogonal pairs, with
/// exponential fits.
pub fn cmd_decay(config: &RunConfig) -> Result<Vec<OutputFile>> {
    config.validate()?;
    let mut rng = seeded(config.seed);
    let pairs = [
        ("identical", BlochAngles::ZERO, BlochAngles::ZERO),
        ("perpendicular", BlochAngles::new(std::f64::consts::PI, 0.0), BlochAngles::ZERO),
    ];
    let mut report = Report::new(config, "decay");
    let mut files = Vec::new();
    for (label, a1, a2) in pairs {
        let curve = decay_curve(a1, a2, config.n_max, &config.noise, config.shots, &mut rng)?;
        let ns: Vec<f64> = curve.n.iter().map(|&n| n as f64).collect();
        let fit = fit_exponential_decay(&ns, &curve.c_bar)?;
        let tail = tail_mean(&curve.c_bar);
        report.fit(&format!("{label}_"), &fit).kv(&format!("{label}_tail_mean"), tail).blank();
        files.push(OutputFile { name: format!("decay_{label}.csv"), contents: decay_csv(config, &curve) });
    }
    files.push(report.file("decay_report.txt"));
    Ok(files)
}

/// Mean of the last quarter of a series.
pub fn tail_mean(values: &[f64]) -> f64 {
    let k = (values.len() / 4).max(1);
    values[values.len() - k..].iter().sum::<f64>() / k as f64
}

fn sweep_and_fit(config: &RunConfig, noise: &NoiseModel, rng: &mut SimRng) -> Result<(Vec<ThetaSweepPoint>, QualityParams)> {
    let points = theta_sweep(noise, config.repetitions, config.shots, config.points, rng)?;
    let quality = fit_quality(&points)?;
    Ok((points, quality))
}

fn quality_kv(report: &mut Report, q: &QualityParams) {
    report.kv("Q_o", q.q_o).kv("Q_o_sd", q.sigma_q_o).kv("Q_a", q.q_a).kv("Q_a_sd", q.sigma_q_a);
}

/// `C̄_N(Θ)` sweep and quality fit.
pub fn cmd_sweep(config: &RunConfig) -> Result<Vec<OutputFile>> {
    config.validate()?;
    let mut rng = seeded(config.seed);
    let (points, q) = sweep_and_fit(config, &config.noise, &mut rng)?;
    let consistent = points.iter().filter(|p| (q.model(p.theta) - p.c_bar).abs() <= 4.0 * p.standard_error).count();
    let mut report = Report::new(config, "sweep");
    quality_kv(&mut report, &q);
    report.kv("points_within_4se", format!("{consistent}/{}", points.len()));
    let data = csv(
        config,
        "sweep",
        "theta,c_bar,stderr",
        points.iter().map(|p| format!("{:.8},{:.8},{:.8}", p.theta, p.c_bar, p.standard_error)),
    );
    Ok(vec![OutputFile { name: "sweep.csv".into(), contents: data }, report.file("sweep_report.txt")])
}

/// Threshold calibration and the `C_N(0)` histogram.
pub fn cmd_threshold(config: &RunConfig) -> Result<Vec<OutputFile>> {
    config.validate()?;
    let mut rng = seeded(config.seed);
    let cal = calibrate_threshold(&config.noise, config.repetitions, config.shots, config.states, config.pb_target, &mut rng)?;
    let mut report = Report::new(config, "threshold");
    report
        .kv("tau", cal.policy.tau())
        .kv("tau_sd", cal.policy.tau_uncertainty())
        .kv("samples", cal.samples.len())
        .kv("fraction_below_tau", cal.coverage());
    Ok(vec![
        OutputFile { name: "threshold_hist.csv".into(), contents: histogram_csv(config, "threshold", &cal.samples)? },
        report.file("threshold_report.txt"),
    ])
}

/// Calibrated figures for one noise model: quality, threshold and forgery
/// rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SecuritySummary {
    pub quality: QualityParams,
    pub policy: AcceptancePolicy,
    pub genuine: Vec<f64>,
    pub forged: Vec<f64>,
    pub p_f: f64,
    pub p_f_std: f64,
    pub out_of_domain: usize,
}

impl SecuritySummary {
    /// Fraction of genuine calibration samples accepted.
    pub fn p_b(&self) -> f64 {
        fraction_below(&self.genuine, self.policy.tau())
    }
}

/// Sweep, calibrate (unless `config.tau` forces the threshold) and attack.
pub fn security_summary(config: &RunConfig, noise: &NoiseModel, rng: &mut SimRng) -> Result<SecuritySummary> {
    let (_, quality) = sweep_and_fit(config, noise, rng)?;
    let (policy, genuine) = match config.tau {
        Some(tau) => {
            let genuine = genuine_samples(noise, config.repetitions, config.shots, config.states, rng)?;
            (AcceptancePolicy::new(tau, config.pb_target, 0.0, config.repetitions)?, genuine)
        }
        None => {
            let cal = calibrate_threshold(noise, config.repetitions, config.shots, config.states, config.pb_target, rng)?;
            (cal.policy, cal.samples)
        }
    };
    let cfg = AttackConfig { repetitions: config.repetitions, ..AttackConfig::new(quality) };
    let campaign = attack_campaign(config.states, config.shots, &cfg, &policy, noise, rng)?;
    Ok(SecuritySummary {
        quality,
        policy,
        genuine,
        forged: campaign.verifier_cn,
        p_f: campaign.p_f,
        p_f_std: campaign.p_f_std,
        out_of_domain: campaign.out_of_domain,
    })
}

/// One row of a bill table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BillRow {
    pub total: usize,
    pub m: usize,
    pub p_genuine: f64,
    pub p_forged: f64,
}

/// `m`, genuine and forged bill acceptance for each bill size.
pub fn bill_table(sizes: &[usize], p_b: f64, p_f: f64, type2_target: f64) -> Result<Vec<BillRow>> {
    sizes
        .iter()
        .map(|&total| {
            let m = choose_bill_threshold(total, p_b, type2_target)?;
            Ok(BillRow {
                total,
                m,
                p_genuine: bill_accept_probability(m, total, p_b)?,
                p_forged: bill_accept_probability(m, total, p_f)?,
            })
        })
        .collect()
}

/// Forgery campaign: genuine and forged `C_N` histograms, `p_f` and the
/// bill table.
pub fn cmd_attack(config: &RunConfig) -> Result<Vec<OutputFile>> {
    config.validate()?;
    let mut rng = seeded(config.seed);
    let s = security_summary(config, &config.noise, &mut rng)?;
    let rows = bill_table(&BILL_SIZES, config.pb_target, s.p_f, config.type2_target)?;
    let mut report = Report::new(config, "attack");
    quality_kv(&mut report, &s.quality);
    report
        .kv("tau", s.policy.tau())
        .kv("tau_sd", s.policy.tau_uncertainty())
        .kv("p_b_measured", s.p_b())
        .kv("p_f", s.p_f)
        .kv("p_f_sd", s.p_f_std)
        .kv("attacks", s.forged.len())
        .kv("out_of_domain_queries", s.out_of_domain)
        .blank();
    for r in &rows {
        report
            .kv(&format!("M{}_m", r.total), r.m)
            .kv(&format!("M{}_P_b", r.total), r.p_genuine)
            .kv(&format!("M{}_P_f", r.total), r.p_forged);
    }
    Ok(vec![
        OutputFile { name: "attack_genuine_hist.csv".into(), contents: histogram_csv(config, "attack", &s.genuine)? },
        OutputFile { name: "attack_forged_hist.csv".into(), contents: histogram_csv(config, "attack", &s.forged)? },
        report.file("attack_report.txt"),
    ])
}

/// Bill threshold and acceptance curves for the configured `(M, p_b, p_f)`.
pub fn cmd_bill(config: &RunConfig) -> Result<Vec<OutputFile>> {
    config.validate()?;
    let total = config.bill_total;
    let m = choose_bill_threshold(total, config.pb_target, config.type2_target)?;
    let mut report = Report::new(config, "bill");
    report.kv("M", total).kv("m", m).kv("P_b", bill_accept_probability(m, total, config.pb_target)?);
    if let Some(p_f) = config.p_f {
        report.kv("P_f", bill_accept_probability(m, total, p_f)?);
    }
    let mut rows = Vec::with_capacity(total + 1);
    for k in 0..=total {
        let genuine = bill_accept_probability(k, total, config.pb_target)?;
        let forged = match config.p_f {
            Some(p_f) => format!("{:e}", bill_accept_probability(k, total, p_f)?),
            None => String::new(),
        };
        rows.push(format!("{k},{:.6},{genuine:e},{forged}", k as f64 / total as f64));
    }
    Ok(vec![
        report.file("bill_report.txt"),
        OutputFile { name: "bill_curve.csv".into(), contents: csv(config, "bill", "m,m_over_M,P_genuine,P_forged", rows) },
    ])
}

/// Quality, threshold, forgery rate and bill probabilities for every
/// hardware preset.
pub fn cmd_table1(config: &RunConfig) -> Result<Vec<OutputFile>> {
    config.validate()?;
    let mut rng = seeded(config.seed);
    let mut report = Report::new(config, "table1");
    let mut rows = Vec::new();
    for preset in presets::HARDWARE {
        let s = security_summary(config, &preset.noise, &mut rng)?;
        let bills = bill_table(&[20, 200], config.pb_target, s.p_f, config.type2_target)?;
        let name = preset.name;
        quality_kv_prefixed(&mut report, name, &s.quality);
        report
            .kv(&format!("{name}_tau"), s.policy.tau())
            .kv(&format!("{name}_tau_sd"), s.policy.tau_uncertainty())
            .kv(&format!("{name}_p_f"), s.p_f)
            .kv(&format!("{name}_p_f_sd"), s.p_f_std)
            .kv(&format!("{name}_P_f_M20"), bills[0].p_forged)
            .kv(&format!("{name}_P_f_M200"), bills[1].p_forged)
            .blank();
        rows.push(format!(
            "{name},{},{},{},{},{},{},{},{},{:e},{:e}",
            s.quality.q_o,
            s.quality.sigma_q_o,
            s.quality.q_a,
            s.quality.sigma_q_a,
            s.policy.tau(),
            s.policy.tau_uncertainty(),
            s.p_f,
            s.p_f_std,
            bills[0].p_forged,
            bills[1].p_forged
        ));
    }
    let table = csv(config, "table1", "preset,Q_o,Q_o_sd,Q_a,Q_a_sd,tau,tau_sd,p_f,p_f_sd,P_f_M20,P_f_M200", rows);
    Ok(vec![report.file("table1_report.txt"), OutputFile { name: "table1.csv".into(), contents: table }])
}

fn quality_kv_prefixed(report: &mut Report, name: &str, q: &QualityParams) {
    report
        .kv(&format!("{name}_Q_o"), q.q_o)
        .kv(&format!("{name}_Q_o_sd"), q.sigma_q_o)
        .kv(&format!("{name}_Q_a"), q.q_a)
        .kv(&format!("{name}_Q_a_sd"), q.sigma_q_a);
}
