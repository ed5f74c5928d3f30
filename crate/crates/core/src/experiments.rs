//! Dirichlet measures on the naturals and the convergence phenomena they
//! exhibit: moment growth, Cauchy and non-Cauchy truncation sequences,
//! approximation by coarser supports, and moment convergence alongside
//! `W_p` convergence.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::metric::{MetricSpace, RealLine};
use crate::scalar::{Order, Scalar};
use crate::transport::optimal_coupling;

/// Terms summed explicitly before the asymptotic tail takes over.
pub const ZETA_TERMS: u64 = 1_000_000;

/// `ζ(s) = Σ_{n>=1} n^{-s}` for real `s > 1`.
///
/// Sums the first [`ZETA_TERMS`] terms from smallest to largest with
/// compensation, then adds the Euler–Maclaurin tail
/// `N^{1-s}/(s-1) - N^{-s}/2 + s N^{-s-1}/12 - s(s+1)(s+2) N^{-s-3}/720`.
pub fn zeta(s: f64) -> Result<f64> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::ZetaDivergent(s));
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for n in (1..=ZETA_TERMS).rev() {
        let term = (n as f64).powf(-s) - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    let n = ZETA_TERMS as f64;
    let tail = n.powf(1.0 - s) / (s - 1.0) - 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0;
    Ok(sum + tail)
}

/// `D_{q,m}`: the Dirichlet weights `ζ(q+1)^{-1} n^{-(q+1)}` on `1..=m`
/// with all remaining mass at `m + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletTruncation {
    pub q: f64,
    pub m: usize,
    pub zeta: f64,
    pub measure: Measure<f64, RealLine>,
}

impl DirichletTruncation {
    /// Weight at `m + 1`.
    pub fn remainder(&self) -> f64 {
        self.measure.weight_of(&((self.m + 1) as f64))
    }
}

fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && q >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("q = {q} must be >= 1")))
    }
}

fn truncation_with_zeta(q: f64, m: usize, z: f64) -> Result<DirichletTruncation> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let mut atoms = Vec::with_capacity(m + 1);
    let mut weights = Vec::with_capacity(m + 1);
    let mut head = 0.0;
    // smallest terms first
    for n in (1..=m).rev() {
        let w = (n as f64).powf(-(q + 1.0)) / z;
        head += w;
        atoms.push(n as f64);
        weights.push(w);
    }
    let remainder = 1.0 - head;
    if !(remainder > 0.0 && remainder < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "remainder weight {remainder} of D_(q={q}, m={m}) not in (0,1)"
        )));
    }
    atoms.push((m + 1) as f64);
    weights.push(remainder);
    Ok(DirichletTruncation {
        q,
        m,
        zeta: z,
        measure: Measure::new(Arc::new(RealLine), atoms, weights)?,
    })
}

pub fn dirichlet_truncation(q: f64, m: usize) -> Result<DirichletTruncation> {
    check_q(q)?;
    truncation_with_zeta(q, m, zeta(q + 1.0)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub m: usize,
    /// `∫ |x|^p dD_{q,m}`.
    pub moment: f64,
    /// `moment(m) - moment(m-1)`; `NaN` at `m = 1`.
    pub increment: f64,
}

/// p-moments of `D_{q,m}` about 0 for `m = 1..=m_max`.
pub fn moment_growth(q: f64, p: Order, m_max: usize) -> Result<Vec<MomentRow>> {
    check_q(q)?;
    let z = zeta(q + 1.0)?;
    let moments = (1..=m_max)
        .into_par_iter()
        .map(|m| Ok(truncation_with_zeta(q, m, z)?.measure.p_moment(&0.0, p)?.value))
        .collect::<Result<Vec<f64>>>()?;
    Ok(moments
        .iter()
        .enumerate()
        .map(|(i, &moment)| MomentRow {
            m: i + 1,
            moment,
            increment: if i == 0 { f64::NAN } else { moment - moments[i - 1] },
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CauchyLike,
    NonCauchyLike,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CauchyLike => "cauchy-like",
            Verdict::NonCauchyLike => "non-cauchy-like",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Verdict thresholds for a distance trace `d_1, ..., d_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Cauchy-like when `d_1 / d_k >= decay_factor`.
    pub decay_factor: f64,
    /// Non-Cauchy-like when `min_i d_i > d_1 / floor_divisor`.
    pub floor_divisor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            decay_factor: 10.0,
            floor_divisor: 10.0,
        }
    }
}

impl Thresholds {
    pub fn classify(&self, distances: &[f64]) -> Verdict {
        let (Some(&first), Some(&last)) = (distances.first(), distances.last()) else {
            return Verdict::Inconclusive;
        };
        let min = distances.iter().copied().fold(f64::INFINITY, f64::min);
        if last * self.decay_factor <= first {
            Verdict::CauchyLike
        } else if min > first / self.floor_divisor {
            Verdict::NonCauchyLike
        } else {
            Verdict::Inconclusive
        }
    }
}

/// `m = 2, 4, ..., 256`.
pub fn default_schedule() -> Vec<usize> {
    (1..=8).map(|k| 1usize << k).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub p: Order,
    pub q: f64,
    /// `(m, 2m)` per schedule entry.
    pub indices: Vec<(usize, usize)>,
    /// `W_p(D_{q,m}, D_{q,2m})`.
    pub distances: Vec<f64>,
    pub verdict: Verdict,
    /// Least-squares slope of `ln W_p` against `ln m`.
    pub decay_exponent: f64,
    /// `d_1 / floor_divisor`, the non-vanishing floor tested against.
    pub floor: f64,
}

/// `W_p(D_{q,m}, D_{q,m'})` by the transport solver.
pub fn truncation_distance(q: f64, p: Order, m: usize, m2: usize) -> Result<f64> {
    check_q(q)?;
    let z = zeta(q + 1.0)?;
    let a = truncation_with_zeta(q, m, z)?;
    let b = truncation_with_zeta(q, m2, z)?;
    Ok(optimal_coupling(&a.measure, &b.measure, p)?.wp)
}

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Distances `W_p(D_{q,m}, D_{q,2m})` along `schedule`.
pub fn cauchy_experiment(q: f64, p: Order, schedule: &[usize], thresholds: Thresholds) -> Result<ConvergenceTrace> {
    check_q(q)?;
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("schedule must be non-empty and increasing".into()));
    }
    let z = zeta(q + 1.0)?;
    let distances = schedule
        .par_iter()
        .map(|&m| {
            let a = truncation_with_zeta(q, m, z)?;
            let b = truncation_with_zeta(q, 2 * m, z)?;
            Ok(optimal_coupling(&a.measure, &b.measure, p)?.wp)
        })
        .collect::<Result<Vec<f64>>>()?;
    let ms: Vec<f64> = schedule.iter().map(|&m| m as f64).collect();
    Ok(ConvergenceTrace {
        p,
        q,
        indices: schedule.iter().map(|&m| (m, 2 * m)).collect(),
        verdict: thresholds.classify(&distances),
        decay_exponent: log_slope(&ms, &distances),
        floor: distances[0] / thresholds.floor_divisor,
        distances,
    })
}

/// `2^k` atoms of mass `2^{-k}` at the cell midpoints `(i + 1/2) 2^{-k}`.
pub fn uniform_dyadic_grid<S: Scalar>(k: u32) -> Result<Measure<S, RealLine>> {
    if k > 16 {
        return Err(Error::InvalidParameter(format!("grid level {k} too fine")));
    }
    let n = 1i64 << k;
    let atoms = (0..n).map(|i| S::from_ratio(2 * i + 1, 2 * n)).collect();
    Measure::new(Arc::new(RealLine), atoms, vec![S::from_ratio(1, n); n as usize])
}

/// Midpoint of the dyadic cell of width `2^{-level}` containing `x`.
pub fn snap<S: Scalar>(x: &S, level: u32) -> S {
    let n = S::from_ratio(1i64 << level, 1);
    ((x.clone() * n.clone()).floor() + S::half()) / n
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityRow {
    pub level: u32,
    pub atoms: usize,
    /// Cell width `2^{-level}`.
    pub spacing: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityTable {
    pub p: Order,
    pub rows: Vec<DensityRow>,
    /// Distances are non-increasing as levels refine.
    pub monotone: bool,
    /// Every distance is at most its cell width.
    pub within_spacing: bool,
}

/// `W_p` between `target` and its snapping onto coarser dyadic grids.
pub fn density_experiment<S: Scalar>(target: &Measure<S, RealLine>, levels: &[u32], p: Order) -> Result<DensityTable> {
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    levels.dedup();
    if levels.iter().any(|&l| l > 30) {
        return Err(Error::InvalidParameter("coarsening level above 30".into()));
    }
    let rows = levels
        .par_iter()
        .map(|&level| {
            let coarse = target.pushforward(target.space().clone(), |x| snap(x, level))?;
            Ok(DensityRow {
                level,
                atoms: coarse.len(),
                spacing: (-(level as f64)).exp2(),
                distance: optimal_coupling(target, &coarse, p)?.wp,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityTable {
        p,
        monotone: rows.windows(2).all(|w| w[1].distance <= w[0].distance),
        within_spacing: rows.iter().all(|r| r.distance <= r.spacing),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentConvergence {
    pub p: Order,
    pub basepoint: String,
    /// `W_p(μ_i, μ)`.
    pub distances: Vec<f64>,
    /// `|∫ d(x0,·)^p dμ_i - ∫ d(x0,·)^p dμ|`.
    pub moment_gaps: Vec<f64>,
    pub distances_converge: bool,
    pub moments_converge: bool,
    /// `max_i gap_i / W_p(μ_i, μ)` over `W_p > 0`.
    pub constant: f64,
}

impl MomentConvergence {
    /// Moment convergence accompanies `W_p` convergence.
    pub fn consistent(&self) -> bool {
        !self.distances_converge || self.moments_converge
    }
}

fn converges(series: &[f64], factor: f64) -> bool {
    match (series.first(), series.last()) {
        (Some(&first), Some(&last)) => {
            series.iter().all(|&x| x == 0.0) || (first > 0.0 && last * factor <= first)
        }
        _ => false,
    }
}

/// Compares the `W_p` trace of `sequence → limit` against its p-moment trace.
pub fn moment_convergence_check<S, M>(
    sequence: &[Measure<S, M>],
    limit: &Measure<S, M>,
    x0: &M::Point,
    p: Order,
) -> Result<MomentConvergence>
where
    S: Scalar,
    M: MetricSpace<S>,
{
    let target = limit.p_moment(x0, p)?.value.to_f64();
    let rows = sequence
        .par_iter()
        .map(|mu| {
            let d = optimal_coupling(mu, limit, p)?.wp;
            let gap = (mu.p_moment(x0, p)?.value.to_f64() - target).abs();
            Ok((d, gap))
        })
        .collect::<Result<Vec<_>>>()?;
    let (distances, moment_gaps): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let constant = distances
        .iter()
        .zip(&moment_gaps)
        .filter(|(d, _)| **d > 0.0)
        .map(|(d, g)| g / d)
        .fold(0.0, f64::max);
    let factor = Thresholds::default().decay_factor;
    Ok(MomentConvergence {
        p,
        basepoint: format!("{x0:?}"),
        distances_converge: converges(&distances, factor),
        moments_converge: converges(&moment_gaps, factor),
        distances,
        moment_gaps,
        constant,
    })
}

/// Truncation index standing in for `D_q` in moment-convergence runs.
pub const LIMIT_PROXY: usize = 512;

/// `D_{q,m}` along `schedule` against `D_{q,LIMIT_PROXY}`, about `x0`.
pub fn dirichlet_moment_convergence(q: f64, p: Order, schedule: &[usize], x0: f64) -> Result<MomentConvergence> {
    check_q(q)?;
    let z = zeta(q + 1.0)?;
    let seq = schedule
        .iter()
        .map(|&m| Ok(truncation_with_zeta(q, m, z)?.measure))
        .collect::<Result<Vec<_>>>()?;
    let limit = truncation_with_zeta(q, LIMIT_PROXY, z)?.measure;
    moment_convergence_check(&seq, &limit, &x0, p)
}
