//! Finite-volume Eberlein convolutions and autocorrelations.
//!
//! Along a family `A_n` the approximant of `mu ⊛ nu` at lag `t` is
//!
//! ```text
//! (1/|A_n|) * sum_{s in A_n, t - s in -A_n} mu(s) nu(t - s)
//! ```
//!
//! i.e. `(1/|A_n|) (mu|_{A_n} * nu|_{-A_n})(t)`. The autocorrelation is the
//! special case `nu = tilde(mu)`.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comb::WeightedComb;
use crate::correlate::{cross_correlate, ConvolutionPath};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::vanhove::{k_boundary_size, VanHoveFamily};

/// Tolerance for identities that hold exactly in exact arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

/// Finite approximant of an Eberlein convolution on lags `[-L, L]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagProfile {
    pub lag_bound: usize,
    /// Index `t + lag_bound` holds lag `t`.
    pub values: Vec<Complex64>,
    pub window_index: u64,
    pub family_label: String,
    /// `|A_n|`.
    pub normalization: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LagRecord {
    pub lag: i64,
    pub re: f64,
    pub im: f64,
    pub window_n: u64,
    pub volume: f64,
}

impl LagProfile {
    pub fn value(&self, t: i64) -> Complex64 {
        let idx = t + self.lag_bound as i64;
        assert!(
            idx >= 0 && (idx as usize) < self.values.len(),
            "lag {t} outside [-{0}, {0}]",
            self.lag_bound
        );
        self.values[idx as usize]
    }

    pub fn lags(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let l = self.lag_bound as i64;
        self.values.iter().enumerate().map(move |(i, v)| (i as i64 - l, *v))
    }

    /// `sup_{|t| <= L} |value(t)|`.
    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `|value(t) - other(t)|` over the common lag range.
    pub fn max_deviation(&self, other: &LagProfile) -> f64 {
        let l = self.lag_bound.min(other.lag_bound) as i64;
        (-l..=l)
            .map(|t| (self.value(t) - other.value(t)).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn records(&self) -> Vec<LagRecord> {
        self.lags()
            .map(|(lag, v)| LagRecord {
                lag,
                re: v.re,
                im: v.im,
                window_n: self.window_index,
                volume: self.normalization,
            })
            .collect()
    }

    /// CSV `lag,re,im,window_n,volume`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["lag", "re", "im", "window_n", "volume"])?;
        for r in self.records() {
            w.write_record([
                r.lag.to_string(),
                r.re.to_string(),
                r.im.to_string(),
                r.window_n.to_string(),
                r.volume.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// JSON list of the same records as the CSV export.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.records())?)
    }
}

fn window(family: &VanHoveFamily, n: u64) -> Result<Interval> {
    let a = family.interval(n)?;
    if a.is_empty() {
        return Err(Error::EmptyWindow);
    }
    Ok(a)
}

/// Profile of `(1/|A|) sum_{s in A, s - t in A} mu(s) conj(g(s - t))` with
/// `g = tilde(nu)`, which is the Eberlein approximant over the window `a`.
fn profile_on_window(
    mu: &WeightedComb,
    nu: &WeightedComb,
    a: Interval,
    n: u64,
    family_label: String,
    lag_bound: usize,
    path: ConvolutionPath,
) -> Result<LagProfile> {
    let mu_w = mu.restrict(a)?;
    let g_w = nu.tilde().restrict(a)?;
    let vol = a.len() as f64;
    let raw = cross_correlate(&mu_w.values, &g_w.values, lag_bound, path);
    Ok(LagProfile {
        lag_bound,
        values: raw.into_iter().map(|v| v / vol).collect(),
        window_index: n,
        family_label,
        normalization: vol,
    })
}

/// `(1/|A_n|) (mu|_{A_n} * nu|_{-A_n})(t)` for `|t| <= lag_bound`.
pub fn finite_eberlein(
    mu: &WeightedComb,
    nu: &WeightedComb,
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
    path: ConvolutionPath,
) -> Result<LagProfile> {
    let a = window(family, n)?;
    profile_on_window(mu, nu, a, n, family.label(), lag_bound, path)
}

/// `gamma_n = mu ⊛ tilde(mu)` approximant.
pub fn finite_autocorrelation(
    mu: &WeightedComb,
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
    path: ConvolutionPath,
) -> Result<LagProfile> {
    finite_eberlein(mu, &mu.tilde(), family, n, lag_bound, path)
}

/// `(1/|A_n|) (mu|_{A_n} * nu)(t)`: only `mu` is restricted.
pub fn half_restricted_eberlein(
    mu: &WeightedComb,
    nu: &WeightedComb,
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
) -> Result<LagProfile> {
    let a = window(family, n)?;
    let mu_w = mu.restrict(a)?;
    let l = lag_bound as i64;
    let vol = a.len() as f64;
    let values = (-l..=l)
        .map(|t| {
            mu_w.iter()
                .map(|(s, w)| w * nu.eval(t - s))
                .sum::<Complex64>()
                / vol
        })
        .collect();
    Ok(LagProfile {
        lag_bound,
        values,
        window_index: n,
        family_label: family.label(),
        normalization: vol,
    })
}

/// Outcome of a finite-volume identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl IdentityReport {
    pub fn new(name: impl Into<String>, max_deviation: f64, tolerance: f64) -> Self {
        IdentityReport {
            name: name.into(),
            max_deviation,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

/// `(nu ⊛ tilde(mu))(t) = conj((mu ⊛ tilde(nu))(-t))`.
pub fn identity_tilde_swap(
    mu: &WeightedComb,
    nu: &WeightedComb,
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
) -> Result<IdentityReport> {
    let lhs = finite_eberlein(nu, &mu.tilde(), family, n, lag_bound, ConvolutionPath::Direct)?;
    let rhs = finite_eberlein(mu, &nu.tilde(), family, n, lag_bound, ConvolutionPath::Direct)?;
    let l = lag_bound as i64;
    let dev = (-l..=l)
        .map(|t| (lhs.value(t) - rhs.value(-t).conj()).norm())
        .fold(0.0, f64::max);
    Ok(IdentityReport::new("tilde_swap", dev, EXACT_TOL))
}

/// `nu ⊛_{-A} mu = mu ⊛_A nu`; at finite `n` this is commutativity of
/// `mu|_{A_n} * nu|_{-A_n}`.
pub fn identity_reflection(
    mu: &WeightedComb,
    nu: &WeightedComb,
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
) -> Result<IdentityReport> {
    let lhs = finite_eberlein(nu, mu, &family.reflect(), n, lag_bound, ConvolutionPath::Direct)?;
    let rhs = finite_eberlein(mu, nu, family, n, lag_bound, ConvolutionPath::Direct)?;
    Ok(IdentityReport::new("reflection", lhs.max_deviation(&rhs), EXACT_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    /// `max_{|t| <= L} |(1/|A|)(mu|_A * nu|_{-A})(t) - (1/|A|)(mu|_A * nu)(t)|`
    pub tail: f64,
    /// `||mu|| ||nu|| |boundary^{[-L, L]} A_n| / |A_n|`
    pub bound: f64,
}

/// Effect of restricting the second factor to `-A_n`.
pub fn restriction_tail(
    mu: &WeightedComb,
    nu: &WeightedComb,
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
) -> Result<TailReport> {
    let full = finite_eberlein(mu, nu, family, n, lag_bound, ConvolutionPath::Direct)?;
    let half = half_restricted_eberlein(mu, nu, family, n, lag_bound)?;
    let a = window(family, n)?;
    let k = Interval::centered(lag_bound as i64);
    let ratio = k_boundary_size(a, k) as f64 / a.len() as f64;
    Ok(TailReport {
        tail: full.max_deviation(&half),
        bound: mu.declared_bound() * nu.declared_bound() * ratio,
    })
}

/// `gamma_{a mu + b nu} = |a|^2 gamma_mu + |b|^2 gamma_nu
///   + a conj(b) (mu ⊛ tilde(nu)) + b conj(a) (nu ⊛ tilde(mu))`.
pub fn bilinear_expansion(
    a: Complex64,
    mu: &WeightedComb,
    b: Complex64,
    nu: &WeightedComb,
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
) -> Result<IdentityReport> {
    let d = ConvolutionPath::Direct;
    let omega = WeightedComb::lincomb(a, mu, b, nu);
    let lhs = finite_autocorrelation(&omega, family, n, lag_bound, d)?;
    let g_mu = finite_autocorrelation(mu, family, n, lag_bound, d)?;
    let g_nu = finite_autocorrelation(nu, family, n, lag_bound, d)?;
    let mn = finite_eberlein(mu, &nu.tilde(), family, n, lag_bound, d)?;
    let nm = finite_eberlein(nu, &mu.tilde(), family, n, lag_bound, d)?;
    let (aa, bb) = (a.norm_sqr(), b.norm_sqr());
    let (ab, ba) = (a * b.conj(), b * a.conj());
    let l = lag_bound as i64;
    let dev = (-l..=l)
        .map(|t| {
            let rhs = g_mu.value(t) * aa + g_nu.value(t) * bb + mn.value(t) * ab + nm.value(t) * ba;
            (lhs.value(t) - rhs).norm()
        })
        .fold(0.0, f64::max);
    Ok(IdentityReport::new("bilinear_expansion", dev, EXACT_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceConfig {
    pub abs_floor: f64,
    pub rel: f64,
    /// Schedule positions before this index are excluded from the deltas.
    pub burn_in: usize,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            abs_floor: 1e-3,
            rel: 0.05,
            burn_in: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    PlausiblyConvergent { value: Complex64 },
    Oscillating,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagConvergence {
    pub lag: i64,
    pub values: Vec<Complex64>,
    /// `max_{m > k >= burn_in} |v_m - v_k|`
    pub delta: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub schedule: Vec<u64>,
    pub lags: Vec<LagConvergence>,
    /// `sup_{|t| <= L} |profile|` at each scale.
    pub sup_per_scale: Vec<f64>,
}

impl ConvergenceReport {
    pub fn all_convergent(&self) -> bool {
        self.lags
            .iter()
            .all(|l| matches!(l.verdict, Verdict::PlausiblyConvergent { .. }))
    }

    pub fn lag(&self, t: i64) -> Option<&LagConvergence> {
        self.lags.iter().find(|l| l.lag == t)
    }
}

pub fn validate_schedule(schedule: &[u64], min: usize) -> Result<()> {
    if schedule.len() < min {
        return Err(Error::ScheduleTooShort {
            len: schedule.len(),
            min,
        });
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ScheduleNotIncreasing);
    }
    Ok(())
}

/// Evidence (never proof) that `mu ⊛ nu` stabilizes along the schedule.
pub fn convergence_probe(
    mu: &WeightedComb,
    nu: &WeightedComb,
    family: &VanHoveFamily,
    schedule: &[u64],
    lag_bound: usize,
    config: ConvergenceConfig,
) -> Result<ConvergenceReport> {
    validate_schedule(schedule, 3)?;
    let profiles: Vec<LagProfile> = schedule
        .par_iter()
        .map(|&n| finite_eberlein(mu, nu, family, n, lag_bound, ConvolutionPath::Auto))
        .collect::<Result<_>>()?;
    let l = lag_bound as i64;
    let start = config.burn_in.min(schedule.len() - 2);
    let lags = (-l..=l)
        .map(|t| {
            let values: Vec<Complex64> = profiles.iter().map(|p| p.value(t)).collect();
            let tail = &values[start..];
            let mut delta: f64 = 0.0;
            for (i, x) in tail.iter().enumerate() {
                for y in &tail[i + 1..] {
                    delta = delta.max((x - y).norm());
                }
            }
            let last = *values.last().expect("schedule has at least 3 scales");
            let threshold = config.abs_floor.max(config.rel * last.norm());
            let verdict = if delta <= threshold {
                Verdict::PlausiblyConvergent { value: last }
            } else {
                Verdict::Oscillating
            };
            LagConvergence {
                lag: t,
                values,
                delta,
                threshold,
                verdict,
            }
        })
        .collect();
    Ok(ConvergenceReport {
        schedule: schedule.to_vec(),
        lags,
        sup_per_scale: profiles.iter().map(|p| p.sup_abs()).collect(),
    })
}
