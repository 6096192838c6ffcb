//! Orthogonality of pure-point and continuous combs under Eberlein
//! convolution, and the Fourier–Bohr product rule.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comb::{SpectralType, WeightedComb};
use crate::correlate::ConvolutionPath;
use crate::diffraction::cesaro_mean;
use crate::eberlein::{finite_eberlein, validate_schedule, EXACT_TOL};
use crate::error::Result;
use crate::fourier_bohr::{fb_of_window, trig_poly_fit, window_p_norm};
use crate::frequency::Frequency;
use crate::vanhove::VanHoveFamily;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductCheck {
    pub frequency: Frequency,
    /// Lag average of `e^{-2 pi i theta t} (mu ⊛ tilde(nu))(t)`.
    pub lhs: Complex64,
    /// `c_theta(mu) conj(c_theta(nu))`
    pub rhs: Complex64,
    pub residual: f64,
}

pub fn fb_product_check(
    mu: &WeightedComb,
    nu: &WeightedComb,
    theta: Frequency,
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
) -> Result<ProductCheck> {
    let profile = finite_eberlein(mu, &nu.tilde(), family, n, lag_bound, ConvolutionPath::Auto)?;
    let a = family.interval(n)?;
    let (wm, wn) = (mu.restrict(a)?, nu.restrict(a)?);
    Ok(product_from_parts(&profile, &wm, &wn, theta))
}

fn product_from_parts(
    profile: &crate::eberlein::LagProfile,
    wm: &crate::comb::FiniteWindow,
    wn: &crate::comb::FiniteWindow,
    theta: Frequency,
) -> ProductCheck {
    let lhs = cesaro_mean(profile, theta);
    let rhs = fb_of_window(wm, theta) * fb_of_window(wn, theta).conj();
    ProductCheck {
        frequency: theta,
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoConfig {
    /// Largest-scale sup must not exceed this.
    pub abs_threshold: f64,
    /// `sup[i+1] <= slack * sup[i]` along the schedule.
    pub slack: f64,
    pub path: ConvolutionPath,
    /// Frequencies for the product-rule and Bragg-mass checks.
    pub frequencies: Vec<Frequency>,
}

impl Default for OrthoConfig {
    fn default() -> Self {
        OrthoConfig {
            abs_threshold: 0.05,
            slack: 1.5,
            path: ConvolutionPath::Auto,
            frequencies: vec![
                Frequency::ZERO,
                Frequency::Real(crate::GOLDEN),
                Frequency::Rational { num: 1, den: 4 },
                Frequency::Rational { num: 1, den: 2 },
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrthoVerdict {
    OrthogonalDecaying,
    NotOrthogonal,
}

impl std::fmt::Display for OrthoVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OrthoVerdict::OrthogonalDecaying => "orthogonal (decaying)",
            OrthoVerdict::NotOrthogonal => "not orthogonal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSup {
    pub n: u64,
    pub volume: u64,
    /// `sup_{|t| <= L} |(mu ⊛ tilde(nu))(t)|`
    pub forward: f64,
    /// `sup_{|t| <= L} |(nu ⊛ tilde(mu))(t)|`
    pub backward: f64,
    /// `max_t |(nu ⊛ tilde(mu))(t) - conj((mu ⊛ tilde(nu))(-t))|`
    pub swap_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BraggComparison {
    pub frequency: Frequency,
    /// `|c_theta(mu + nu)|^2`
    pub omega: f64,
    /// `|c_theta(mu)|^2`
    pub mu: f64,
}

impl BraggComparison {
    pub fn gap(&self) -> f64 {
        (self.omega - self.mu).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub mu: String,
    pub nu: String,
    pub family: String,
    pub lag_bound: usize,
    pub schedule: Vec<u64>,
    pub scales: Vec<ScaleSup>,
    pub verdict: OrthoVerdict,
    /// Set when the spectral tags are not (pure point, continuous).
    pub exploration: bool,
    pub config: OrthoConfig,
    /// At the largest scale.
    pub products: Vec<ProductCheck>,
    /// At the largest scale.
    pub bragg: Vec<BraggComparison>,
}

impl OrthogonalityReport {
    pub fn sup_forward(&self) -> Vec<f64> {
        self.scales.iter().map(|s| s.forward).collect()
    }

    pub fn sup_backward(&self) -> Vec<f64> {
        self.scales.iter().map(|s| s.backward).collect()
    }

    /// Largest disagreement between the two directions' sups.
    pub fn direction_gap(&self) -> f64 {
        self.scales
            .iter()
            .map(|s| (s.forward - s.backward).abs())
            .fold(0.0, f64::max)
    }

    pub fn directions_agree(&self) -> bool {
        self.direction_gap() <= EXACT_TOL
            && self.scales.iter().all(|s| s.swap_deviation <= EXACT_TOL)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// CSV `n,volume,sup_forward,sup_backward,swap_deviation`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "volume", "sup_forward", "sup_backward", "swap_deviation"])?;
        for s in &self.scales {
            w.write_record([
                s.n.to_string(),
                s.volume.to_string(),
                s.forward.to_string(),
                s.backward.to_string(),
                s.swap_deviation.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn decay_verdict(sups: &[f64], config: &OrthoConfig) -> OrthoVerdict {
    let last_small = sups.last().is_some_and(|&s| s <= config.abs_threshold);
    let no_growth = sups.windows(2).all(|w| w[1] <= config.slack * w[0]);
    if last_small && no_growth {
        OrthoVerdict::OrthogonalDecaying
    } else {
        OrthoVerdict::NotOrthogonal
    }
}

/// Runs `mu ⊛ tilde(nu)` and `nu ⊛ tilde(mu)` along an increasing schedule
/// (at least three scales) and judges decay.
pub fn orthogonality_run(
    mu: &WeightedComb,
    nu: &WeightedComb,
    family: &VanHoveFamily,
    schedule: &[u64],
    lag_bound: usize,
    config: &OrthoConfig,
) -> Result<OrthogonalityReport> {
    validate_schedule(schedule, 3)?;
    let exploration = !(mu.spectral_type() == Some(SpectralType::PurePoint)
        && nu.spectral_type() == Some(SpectralType::Continuous));
    let (mu_t, nu_t) = (mu.tilde(), nu.tilde());
    let l = lag_bound as i64;
    let scales = schedule
        .par_iter()
        .map(|&n| -> Result<ScaleSup> {
            let fwd = finite_eberlein(mu, &nu_t, family, n, lag_bound, config.path)?;
            let bwd = finite_eberlein(nu, &mu_t, family, n, lag_bound, config.path)?;
            let swap_deviation = (-l..=l)
                .map(|t| (bwd.value(t) - fwd.value(-t).conj()).norm())
                .fold(0.0, f64::max);
            Ok(ScaleSup {
                n,
                volume: family.volume(n)?,
                forward: fwd.sup_abs(),
                backward: bwd.sup_abs(),
                swap_deviation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sups: Vec<f64> = scales.iter().map(|s| s.forward.max(s.backward)).collect();
    let verdict = decay_verdict(&sups, config);

    let n_max = *schedule.last().expect("validated schedule");
    let a = family.interval(n_max)?;
    let profile = finite_eberlein(mu, &nu_t, family, n_max, lag_bound, config.path)?;
    let (wm, wn) = (mu.restrict(a)?, nu.restrict(a)?);
    let omega = WeightedComb::lincomb(Complex64::new(1.0, 0.0), mu, Complex64::new(1.0, 0.0), nu);
    let wo = omega.restrict(a)?;
    let products = config
        .frequencies
        .iter()
        .map(|&f| product_from_parts(&profile, &wm, &wn, f))
        .collect();
    let bragg = config
        .frequencies
        .iter()
        .map(|&f| BraggComparison {
            frequency: f,
            omega: fb_of_window(&wo, f).norm_sqr(),
            mu: fb_of_window(&wm, f).norm_sqr(),
        })
        .collect();

    Ok(OrthogonalityReport {
        mu: mu.label().to_string(),
        nu: nu.label().to_string(),
        family: family.label(),
        lag_bound,
        schedule: schedule.to_vec(),
        scales,
        verdict,
        exploration,
        config: config.clone(),
        products,
        bragg,
    })
}

/// The inequality chain `|nu ⊛ tilde(mu)| <= |nu ⊛ tilde(P)| + ||nu||_inf ||mu - P||_{b,2}`
/// evaluated on one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxBoundReport {
    pub n: u64,
    pub lag_bound: usize,
    pub terms: Vec<(Frequency, Complex64)>,
    /// `sup_t |(nu ⊛ tilde(P))(t)|`
    pub eps_p: f64,
    /// `max_{A_n} |nu|`
    pub nu_sup: f64,
    /// `||mu - P||_{b,2,A_n}`
    pub residual: f64,
    pub bound: f64,
    /// `sup_t |(nu ⊛ tilde(mu))(t)|`
    pub measured_sup: f64,
}

impl AuxBoundReport {
    pub fn holds(&self) -> bool {
        self.measured_sup <= self.bound
    }
}

/// Bound with an explicit trigonometric polynomial `P`.
pub fn aux_bound(
    mu: &WeightedComb,
    nu: &WeightedComb,
    terms: Vec<(Frequency, Complex64)>,
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
) -> Result<AuxBoundReport> {
    let p = WeightedComb::trig_polynomial("P", terms.clone());
    let a = family.interval(n)?;
    let path = ConvolutionPath::Auto;
    let eps_p = finite_eberlein(nu, &p.tilde(), family, n, lag_bound, path)?.sup_abs();
    let measured_sup = finite_eberlein(nu, &mu.tilde(), family, n, lag_bound, path)?.sup_abs();
    let nu_sup = window_p_norm(&nu.restrict(a)?, f64::INFINITY);
    let (wm, wp) = (mu.restrict(a)?, p.restrict(a)?);
    let diff: Vec<Complex64> = wm.values.iter().zip(&wp.values).map(|(x, y)| x - y).collect();
    let residual = window_p_norm(&crate::comb::FiniteWindow::new(a.lo, diff), 2.0);
    Ok(AuxBoundReport {
        n,
        lag_bound,
        terms,
        eps_p,
        nu_sup,
        residual,
        bound: eps_p + nu_sup * residual,
        measured_sup,
    })
}

/// Fits `P` from `mu`'s coefficients at `frequencies` on `A_n`, then
/// evaluates [`aux_bound`].
pub fn besicovitch_orthogonality(
    mu: &WeightedComb,
    nu: &WeightedComb,
    frequencies: &[Frequency],
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
) -> Result<AuxBoundReport> {
    let fit = trig_poly_fit(mu, frequencies, family, n)?;
    aux_bound(mu, nu, fit.terms, family, n, lag_bound)
}

/// `k alpha mod 1` for `|k| <= k_max`.
pub fn golden_frequencies(k_max: i64) -> Vec<Frequency> {
    (-k_max..=k_max)
        .map(|k| Frequency::multiple_of(crate::GOLDEN, k))
        .collect()
}
