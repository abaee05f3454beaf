//! Statistical primitives: binomial probabilities, least-squares fits,
//! empirical quantiles and bootstrap resampling.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::Rng;
use statrs::function::factorial::ln_binomial;

use crate::error::{check_probability, Error, Result};
use crate::rng::{fork_master, par_indexed};

/// Fitted parameters with per-parameter standard deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub names: Vec<String>,
    pub parameters: Vec<f64>,
    pub standard_deviations: Vec<f64>,
    /// Euclidean norm of the residual vector at the returned parameters.
    pub residual_norm: f64,
    /// Residual norm at the starting point (equal to `residual_norm` for
    /// closed-form fits).
    pub initial_residual_norm: f64,
}

impl FitResult {
    fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Value of the parameter called `name`.
    pub fn value(&self, name: &str) -> Option<f64> {
        self.index(name).map(|i| self.parameters[i])
    }

    /// Standard deviation of the parameter called `name`.
    pub fn std_dev(&self, name: &str) -> Option<f64> {
        self.index(name).map(|i| self.standard_deviations[i])
    }
}

fn check_binomial_args(m: u64, total: u64, p: f64) -> Result<()> {
    check_probability("p", p)?;
    if m > total {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds M = {total}")));
    }
    Ok(())
}

fn ln_pmf(m: u64, total: u64, p: f64) -> f64 {
    if p == 0.0 {
        return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if p == 1.0 {
        return if m == total { 0.0 } else { f64::NEG_INFINITY };
    }
    ln_binomial(total, m) + m as f64 * p.ln() + (total - m) as f64 * (-p).ln_1p()
}

/// `C(M, m) p^m (1-p)^(M-m)`, evaluated in log space.
pub fn binomial_pmf(m: u64, total: u64, p: f64) -> Result<f64> {
    check_binomial_args(m, total, p)?;
    Ok(ln_pmf(m, total, p).exp())
}

fn ln_sum_pmf(range: std::ops::RangeInclusive<u64>, total: u64, p: f64) -> f64 {
    let terms: Vec<f64> = range.map(|k| ln_pmf(k, total, p)).collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    max + sum.ln()
}

/// Natural log of the upper tail `P(X >= m)` for `X ~ Bin(M, p)`.
///
/// When the tail is close to one it is computed as the complement of the
/// lower sum, which keeps `1 - P` accurate.
pub fn ln_binomial_tail_at_least(m: u64, total: u64, p: f64) -> Result<f64> {
    check_binomial_args(m, total, p)?;
    if m == 0 {
        return Ok(0.0);
    }
    let upper = ln_sum_pmf(m..=total, total, p);
    if upper < -std::f64::consts::LN_2 {
        return Ok(upper);
    }
    let lower = ln_sum_pmf(0..=m - 1, total, p).exp();
    Ok((-lower).ln_1p().min(0.0))
}

/// Upper tail `P(X >= m)` for `X ~ Bin(M, p)`.
pub fn binomial_tail_at_least(m: u64, total: u64, p: f64) -> Result<f64> {
    Ok(ln_binomial_tail_at_least(m, total, p)?.exp())
}

/// A named basis function for [`fit_linear_basis`].
pub struct Basis<'a> {
    pub name: &'a str,
    pub eval: &'a dyn Fn(f64) -> f64,
}

/// Ordinary least squares `y ≈ Σ β_j f_j(x)` via the normal equations.
///
/// Standard deviations come from `s² (XᵀX)⁻¹` with `s² = SSR / (n - k)`;
/// they are zero for exactly determined systems.
pub fn fit_linear_basis(xs: &[f64], ys: &[f64], basis: &[Basis<'_>]) -> Result<FitResult> {
    let n = xs.len();
    let k = basis.len();
    if n != ys.len() {
        return Err(Error::InvalidArgument("xs and ys differ in length".into()));
    }
    if k == 0 || n < k {
        return Err(Error::InvalidArgument(format!("{n} points cannot determine {k} parameters")));
    }
    let mut distinct = xs.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::InvalidArgument("fit needs at least two distinct abscissae".into()));
    }
    let design = DMatrix::from_fn(n, k, |i, j| (basis[j].eval)(xs[i]));
    let y = DVector::from_column_slice(ys);

    let sv = design.singular_values();
    let smax = sv.max();
    if smax == 0.0 || sv.min() <= smax * 1e-12 {
        return Err(Error::SingularDesign);
    }
    let normal = design.transpose() * &design;
    let inv = normal.clone().try_inverse().ok_or(Error::SingularDesign)?;
    let beta = &inv * (design.transpose() * &y);
    let residual = &y - &design * &beta;
    let ssr = residual.norm_squared();
    let s2 = if n > k { ssr / (n - k) as f64 } else { 0.0 };
    let standard_deviations = (0..k).map(|j| (s2 * inv[(j, j)]).max(0.0).sqrt()).collect();
    Ok(FitResult {
        names: basis.iter().map(|b| b.name.to_string()).collect(),
        parameters: beta.iter().copied().collect(),
        standard_deviations,
        residual_norm: ssr.sqrt(),
        initial_residual_norm: ssr.sqrt(),
    })
}

const DECAY_MAX_ITER: usize = 500;

fn decay_model(a: f64, lambda: f64, b: f64, n: f64) -> f64 {
    a * (-n / lambda).exp() + b
}

fn decay_ssr(ns: &[f64], ys: &[f64], a: f64, lambda: f64, b: f64) -> f64 {
    ns.iter().zip(ys).map(|(&n, &y)| (y - decay_model(a, lambda, b, n)).powi(2)).sum()
}

/// Best `(A, B)` for a fixed decay length, by linear least squares.
fn amplitude_offset_for(ns: &[f64], ys: &[f64], lambda: f64) -> Option<(f64, f64)> {
    let (mut s_ee, mut s_e, mut s_ey, mut s_y) = (0.0, 0.0, 0.0, 0.0);
    for (&n, &y) in ns.iter().zip(ys) {
        let e = (-n / lambda).exp();
        s_ee += e * e;
        s_e += e;
        s_ey += e * y;
        s_y += y;
    }
    let m = ns.len() as f64;
    let det = s_ee * m - s_e * s_e;
    if det.abs() < 1e-300 {
        return None;
    }
    let a = (s_ey * m - s_e * s_y) / det;
    let b = (s_ee * s_y - s_e * s_ey) / det;
    Some((a, b))
}

/// Fits `A·exp(-n/λ) + B`.
///
/// The start point takes `B` from the tail mean, `A` from head minus tail and
/// `λ` from a log-linear regression of `c̄_n - B`; a grid over `λ` (with `A`,
/// `B` solved linearly at each node) then seeds a damped Gauss–Newton
/// iteration. Parameter order is `A`, `lambda`, `B`.
pub fn fit_exponential_decay(ns: &[f64], ys: &[f64]) -> Result<FitResult> {
    let n_pts = ns.len();
    if n_pts != ys.len() {
        return Err(Error::InvalidArgument("ns and values differ in length".into()));
    }
    if n_pts < 4 {
        return Err(Error::InvalidArgument("exponential fit needs at least 4 points".into()));
    }
    if let Some(bad) = ys.iter().find(|y| !(0.0..=1.0).contains(*y)) {
        return Err(Error::InvalidArgument(format!("value {bad} outside [0, 1]")));
    }
    let names = vec!["A".to_string(), "lambda".to_string(), "B".to_string()];
    let mean = ys.iter().sum::<f64>() / n_pts as f64;
    let (lo, hi) = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &y| (l.min(y), h.max(y)));
    if hi - lo < 1e-12 {
        return Ok(FitResult {
            names,
            parameters: vec![0.0, f64::INFINITY, mean],
            standard_deviations: vec![0.0, f64::INFINITY, 0.0],
            residual_norm: decay_ssr(ns, ys, 0.0, 1.0, mean).sqrt(),
            initial_residual_norm: decay_ssr(ns, ys, 0.0, 1.0, mean).sqrt(),
        });
    }

    let quarter = (n_pts / 4).max(2);
    let tail = ys[n_pts - quarter..].iter().sum::<f64>() / quarter as f64;
    let head = ys[..quarter].iter().sum::<f64>() / quarter as f64;
    let a0 = head - tail;
    let span = ns.iter().copied().fold(f64::NEG_INFINITY, f64::max) - ns.iter().copied().fold(f64::INFINITY, f64::min);
    let span = span.max(1.0);
    let lambda0 = {
        let pts: Vec<(f64, f64)> = ns
            .iter()
            .zip(ys)
            .filter(|(_, &y)| (y - tail) * a0.signum() > 1e-12)
            .map(|(&n, &y)| (n, ((y - tail) * a0.signum()).ln()))
            .collect();
        let slope = if pts.len() >= 2 {
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            if sxx > 0.0 { sxy / sxx } else { 0.0 }
        } else {
            0.0
        };
        if slope < 0.0 { -1.0 / slope } else { span / 3.0 }
    };
    let a_init = a0 * (ns[0] / lambda0).exp();
    let initial_ssr = decay_ssr(ns, ys, a_init, lambda0, tail);

    // grid seeding
    let mut best = (a_init, lambda0, tail, initial_ssr);
    let grid = (0..=60).map(|i| span * 10f64.powf(-2.0 + 3.0 * i as f64 / 60.0)).chain([0.25, 0.5, 2.0, 4.0].map(|f| lambda0 * f));
    for lambda in grid {
        if let Some((a, b)) = amplitude_offset_for(ns, ys, lambda) {
            let ssr = decay_ssr(ns, ys, a, lambda, b);
            if ssr < best.3 {
                best = (a, lambda, b, ssr);
            }
        }
    }

    let (mut a, mut lambda, mut b, mut ssr) = best;
    let mut mu = 1e-3;
    let mut converged = false;
    for _ in 0..DECAY_MAX_ITER {
        let mut jtj = Matrix3::<f64>::zeros();
        let mut jtr = Vector3::<f64>::zeros();
        for (&n, &y) in ns.iter().zip(ys) {
            let e = (-n / lambda).exp();
            let g = Vector3::new(e, a * e * n / (lambda * lambda), 1.0);
            let r = y - (a * e + b);
            jtj += g * g.transpose();
            jtr += g * r;
        }
        if ssr < 1e-28 || jtr.norm() < 1e-18 {
            converged = true;
            break;
        }
        let mut improved = false;
        while mu < 1e12 {
            let mut damped = jtj;
            for i in 0..3 {
                damped[(i, i)] += mu * jtj[(i, i)].max(1e-300);
            }
            let Some(step) = damped.try_inverse().map(|inv| inv * jtr) else {
                mu *= 10.0;
                continue;
            };
            let (na, nl, nb) = (a + step[0], lambda + step[1], b + step[2]);
            if nl > 0.0 && nl.is_finite() {
                let nssr = decay_ssr(ns, ys, na, nl, nb);
                if nssr <= ssr {
                    let rel = (ssr - nssr) / ssr.max(1e-300);
                    let small_step = step[0].abs() < 1e-12 * (1.0 + a.abs())
                        && step[1].abs() < 1e-12 * (1.0 + lambda)
                        && step[2].abs() < 1e-12 * (1.0 + b.abs());
                    a = na;
                    lambda = nl;
                    b = nb;
                    ssr = nssr;
                    mu = (mu / 10.0).max(1e-12);
                    improved = true;
                    if rel < 1e-14 || small_step {
                        converged = true;
                    }
                    break;
                }
            }
            mu *= 10.0;
        }
        if converged {
            break;
        }
        if !improved {
            // no descent direction left at any damping: a stationary point
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::FitDidNotConverge { iterations: DECAY_MAX_ITER });
    }

    let mut jtj = Matrix3::<f64>::zeros();
    for &n in ns {
        let e = (-n / lambda).exp();
        let g = Vector3::new(e, a * e * n / (lambda * lambda), 1.0);
        jtj += g * g.transpose();
    }
    let s2 = if n_pts > 3 { ssr / (n_pts - 3) as f64 } else { 0.0 };
    let standard_deviations = match jtj.try_inverse() {
        Some(cov) => (0..3).map(|i| (s2 * cov[(i, i)]).max(0.0).sqrt()).collect(),
        None => vec![f64::INFINITY; 3],
    };
    Ok(FitResult {
        names,
        parameters: vec![a, lambda, b],
        standard_deviations,
        residual_norm: ssr.sqrt(),
        initial_residual_norm: initial_ssr.sqrt(),
    })
}

/// Order-statistic quantile with linear interpolation between adjacent
/// ranks: `h = (n - 1) q`, `x_⌊h⌋ + (h - ⌊h⌋)(x_⌊h⌋+1 - x_⌊h⌋)`.
pub fn empirical_quantile(samples: &[f64], q: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("quantile of an empty sample".into()));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(format!("quantile level {q} outside (0, 1)")));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidArgument("sample contains NaN".into()));
    }
    let mut work = samples.to_vec();
    let n = work.len();
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    let (_, &mut x_lo, upper) = work.select_nth_unstable_by(lo, f64::total_cmp);
    if lo + 1 >= n || frac == 0.0 {
        return Ok(x_lo);
    }
    let x_hi = upper.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(x_lo + frac * (x_hi - x_lo))
}

/// Fraction of `samples` strictly below `threshold`.
pub fn fraction_below(samples: &[f64], threshold: f64) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().filter(|&&x| x < threshold).count() as f64 / samples.len() as f64
}

/// Bootstrap standard deviation of `statistic` over `replicas` resamples
/// (with replacement, same size as `samples`).
pub fn bootstrap_std<R, F>(samples: &[f64], statistic: F, replicas: usize, rng: &mut R) -> Result<f64>
where
    R: Rng + ?Sized,
    F: Fn(&[f64]) -> f64 + Sync,
{
    if samples.is_empty() {
        return Err(Error::InvalidArgument("bootstrap of an empty sample".into()));
    }
    if replicas < 100 {
        return Err(Error::InvalidArgument(format!("bootstrap needs >= 100 replicas (got {replicas})")));
    }
    let n = samples.len();
    let master = fork_master(rng);
    let values = par_indexed(master, replicas, |r, _| {
        let resample: Vec<f64> = (0..n).map(|_| samples[r.random_range(0..n)]).collect();
        Ok(statistic(&resample))
    })?;
    // shift by the first replica so a constant statistic gives exactly zero
    let shift = values[0];
    let mean = values.iter().map(|v| v - shift).sum::<f64>() / replicas as f64;
    let var = values.iter().map(|v| (v - shift - mean).powi(2)).sum::<f64>() / (replicas - 1) as f64;
    Ok(var.sqrt())
}

/// One histogram bin `[left, right)` (the final bin is closed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
}

/// Histogram of `C_N` values over `[0, 1]` with `repetitions` bins of width
/// `1/N`, so the lattice values `k/N` land on left bin edges.
pub fn lattice_histogram(values: &[f64], repetitions: usize) -> Result<Vec<Bin>> {
    if repetitions == 0 {
        return Err(Error::InvalidArgument("histogram needs N >= 1".into()));
    }
    let width = 1.0 / repetitions as f64;
    let mut bins: Vec<Bin> = (0..repetitions)
        .map(|k| Bin { left: k as f64 * width, right: (k + 1) as f64 * width, count: 0 })
        .collect();
    for &v in values {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidArgument(format!("value {v} outside [0, 1]")));
        }
        // round first so k/N computed in floating point lands on bin k
        let k = ((v * repetitions as f64 + 1e-9).floor() as usize).min(repetitions - 1);
        bins[k].count += 1;
    }
    Ok(bins)
}
