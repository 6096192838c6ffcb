//! Bragg intensity estimators.
//!
//! Two routes are kept independent: the periodogram `|c_theta^{(n)}|^2`
//! straight from the comb, and a lag average of the autocorrelation profile.
//! Agreement between them is the consistent phase property.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comb::WeightedComb;
use crate::correlate::{dft_padded, ConvolutionPath};
use crate::eberlein::{finite_autocorrelation, LagProfile};
use crate::error::{Error, Result};
use crate::fourier_bohr::{check_distinct, fb_of_window};
use crate::frequency::Frequency;
use crate::vanhove::VanHoveFamily;

/// `min(500, |A_n| / 20)`.
pub fn default_lag_cap(volume: u64) -> usize {
    (volume / 20).min(500) as usize
}

/// `I_n(theta) / |A_n| = |c_theta^{(n)}(mu)|^2` at each frequency (direct sums).
pub fn periodogram(
    mu: &WeightedComb,
    family: &VanHoveFamily,
    n: u64,
    grid: &[Frequency],
) -> Result<Vec<f64>> {
    let win = mu.restrict(family.interval(n)?)?;
    Ok(grid
        .par_iter()
        .map(|&f| fb_of_window(&win, f).norm_sqr())
        .collect())
}

/// Periodogram on the bins `k / bins`, `k = 0..bins`, by one FFT.
/// Requires `bins >= |A_n|`.
pub fn periodogram_fft(
    mu: &WeightedComb,
    family: &VanHoveFamily,
    n: u64,
    bins: usize,
) -> Result<Vec<f64>> {
    let win = mu.restrict(family.interval(n)?)?;
    if bins < win.len() {
        return Err(Error::InvalidParameter(format!(
            "need at least {} bins for this window, got {bins}",
            win.len()
        )));
    }
    let vol2 = (win.len() as f64).powi(2);
    // The window origin only contributes a unimodular phase.
    Ok(dft_padded(&win.values, bins)
        .into_iter()
        .map(|x| x.norm_sqr() / vol2)
        .collect())
}

/// `(1/(2L+1)) sum_{|t| <= L} gamma_n(t) e^{-2 pi i theta t}`.
pub fn cesaro_mean(profile: &LagProfile, theta: Frequency) -> Complex64 {
    let l = profile.lag_bound as i64;
    theta.analyze(-l, &profile.values) / (2 * l + 1) as f64
}

/// Real part of [`cesaro_mean`]; the point-mass estimate at `theta`.
pub fn bragg_cesaro(profile: &LagProfile, theta: Frequency) -> f64 {
    cesaro_mean(profile, theta).re
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub frequency: Frequency,
    /// `|c_theta^{(n)}|^2`
    pub bragg_periodogram: f64,
    pub bragg_cesaro: f64,
    pub cpp_gap: f64,
    pub window_index: u64,
    pub lag_bound: usize,
    pub tolerance: f64,
}

impl SpectralEstimate {
    pub fn consistent(&self) -> bool {
        self.cpp_gap <= self.tolerance
    }

    pub fn verdict(&self) -> String {
        if self.consistent() {
            format!(
                "CPP-consistent at ({}, {}, {})",
                self.frequency, self.window_index, self.lag_bound
            )
        } else {
            format!(
                "CPP gap {:.3e} exceeds {:.3e} at ({}, {}, {})",
                self.cpp_gap, self.tolerance, self.frequency, self.window_index, self.lag_bound
            )
        }
    }
}

/// Compares `|c_theta|^2` against the lag-averaged autocorrelation.
pub fn cpp_check(
    mu: &WeightedComb,
    theta: Frequency,
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
    tolerance: f64,
) -> Result<SpectralEstimate> {
    let profile = finite_autocorrelation(mu, family, n, lag_bound, ConvolutionPath::Auto)?;
    let win = mu.restrict(family.interval(n)?)?;
    Ok(cpp_from_parts(&win, &profile, theta, tolerance))
}

/// Same as [`cpp_check`] for several frequencies sharing one profile.
pub fn cpp_scan(
    mu: &WeightedComb,
    frequencies: &[Frequency],
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
    tolerance: f64,
) -> Result<Vec<SpectralEstimate>> {
    let profile = finite_autocorrelation(mu, family, n, lag_bound, ConvolutionPath::Auto)?;
    let win = mu.restrict(family.interval(n)?)?;
    Ok(frequencies
        .par_iter()
        .map(|&f| cpp_from_parts(&win, &profile, f, tolerance))
        .collect())
}

fn cpp_from_parts(
    win: &crate::comb::FiniteWindow,
    profile: &LagProfile,
    theta: Frequency,
    tolerance: f64,
) -> SpectralEstimate {
    let pp = fb_of_window(win, theta).norm_sqr();
    let ces = bragg_cesaro(profile, theta);
    SpectralEstimate {
        frequency: theta,
        bragg_periodogram: pp,
        bragg_cesaro: ces,
        cpp_gap: (ces - pp).abs(),
        window_index: profile.window_index,
        lag_bound: profile.lag_bound,
        tolerance,
    }
}

/// CSV `theta,bragg_pp,bragg_cesaro,cpp_gap`.
pub fn write_spectral_csv<W: Write>(estimates: &[SpectralEstimate], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta", "bragg_pp", "bragg_cesaro", "cpp_gap"])?;
    for e in estimates {
        w.write_record([
            e.frequency.to_string(),
            e.bragg_periodogram.to_string(),
            e.bragg_cesaro.to_string(),
            e.cpp_gap.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `(1/(2L+1)) sum_{|t| <= L} |gamma_n(t)|^2`.
pub fn wiener_ratio(profile: &LagProfile, lag_bound: usize) -> Result<f64> {
    if lag_bound > profile.lag_bound {
        return Err(Error::InvalidParameter(format!(
            "lag bound {lag_bound} exceeds the profile's {}",
            profile.lag_bound
        )));
    }
    let l = lag_bound as i64;
    let s: f64 = (-l..=l).map(|t| profile.value(t).norm_sqr()).sum();
    Ok(s / (2 * l + 1) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub lags: Vec<i64>,
    pub gamma: Vec<Complex64>,
    /// `sum_theta m(theta) e^{2 pi i theta t}`
    pub gamma_s: Vec<Complex64>,
    /// `gamma - gamma_s`
    pub gamma_0: Vec<Complex64>,
    pub wiener_ratio_remainder: f64,
}

impl DecompositionReport {
    pub fn max_remainder(&self) -> f64 {
        self.gamma_0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// CSV `lag,gamma_re,gamma_im,gamma_s_re,gamma_s_im,gamma0_re,gamma0_im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["lag", "gamma_re", "gamma_im", "gamma_s_re", "gamma_s_im", "gamma0_re", "gamma0_im"])?;
        for i in 0..self.lags.len() {
            w.write_record([
                self.lags[i].to_string(),
                self.gamma[i].re.to_string(),
                self.gamma[i].im.to_string(),
                self.gamma_s[i].re.to_string(),
                self.gamma_s[i].im.to_string(),
                self.gamma_0[i].re.to_string(),
                self.gamma_0[i].im.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Splits a profile into the pure-point reconstruction from the given point
/// masses and the continuous remainder.
pub fn eberlein_split(
    profile: &LagProfile,
    frequencies: &[Frequency],
    masses: &[f64],
) -> Result<DecompositionReport> {
    if frequencies.len() != masses.len() {
        return Err(Error::InvalidParameter(format!(
            "{} frequencies but {} masses",
            frequencies.len(),
            masses.len()
        )));
    }
    check_distinct(frequencies)?;
    let lags: Vec<i64> = profile.lags().map(|(t, _)| t).collect();
    let gamma: Vec<Complex64> = profile.values.clone();
    let gamma_s: Vec<Complex64> = lags
        .iter()
        .map(|&t| {
            frequencies
                .iter()
                .zip(masses)
                .map(|(f, &m)| f.character(t) * m)
                .sum()
        })
        .collect();
    let gamma_0: Vec<Complex64> = gamma.iter().zip(&gamma_s).map(|(g, s)| g - s).collect();
    let remainder = LagProfile {
        values: gamma_0.clone(),
        ..profile.clone()
    };
    let ratio = wiener_ratio(&remainder, profile.lag_bound)?;
    Ok(DecompositionReport {
        lags,
        gamma,
        gamma_s,
        gamma_0,
        wiener_ratio_remainder: ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::make;

    fn sym() -> VanHoveFamily {
        VanHoveFamily::symmetric()
    }

    fn fr(p: i64, q: i64) -> Frequency {
        Frequency::rational(p, q).unwrap()
    }

    #[test]
    fn periodogram_examples() {
        let d = make("dirac").unwrap();
        let v = periodogram(&d, &sym(), 300, &[Frequency::ZERO, fr(1, 2)]).unwrap();
        assert_eq!(v[0], 1.0);
        let v = periodogram(&d, &sym(), 1 << 10, &[fr(1, 2)]).unwrap();
        assert!(v[0] <= 1e-4 && v[0] <= 1.0 / (2049.0f64 * 2049.0) + 1e-18);
    }

    #[test]
    fn fft_periodogram_agrees_with_direct() {
        let tm = make("paper_mu").unwrap();
        let bins = 1usize << 12;
        let fft = periodogram_fft(&tm, &sym(), 1500, bins).unwrap();
        let grid: Vec<Frequency> = (0..bins as i64).step_by(37).map(|k| fr(k, bins as i64)).collect();
        let direct = periodogram(&tm, &sym(), 1500, &grid).unwrap();
        for (i, k) in (0..bins).step_by(37).enumerate() {
            assert!((fft[k] - direct[i]).abs() <= 1e-9);
        }
        assert!(periodogram_fft(&tm, &sym(), 1500, 1000).is_err());
    }

    #[test]
    fn thue_morse_periodogram_is_small_on_rational_grid() {
        let tm = make("tm_pm").unwrap();
        let grid = crate::frequency::farey_grid(32);
        let v = periodogram(&tm, &sym(), 1 << 16, &grid).unwrap();
        let max = v.iter().cloned().fold(0.0, f64::max);
        assert!(max <= 0.05, "{max}");
    }

    #[test]
    fn cesaro_examples() {
        let d = make("dirac").unwrap();
        let n = 1u64 << 12;
        let l = 200usize;
        let p = finite_autocorrelation(&d, &sym(), n, l, ConvolutionPath::Auto).unwrap();
        assert!((bragg_cesaro(&p, Frequency::ZERO) - 1.0).abs() <= 2.0 * l as f64 / (2 * n + 1) as f64);
        assert!(bragg_cesaro(&p, Frequency::Real(0.3)).abs() <= 0.05);
        for f in [Frequency::ZERO, fr(1, 2)] {
            assert!(cesaro_mean(&p, f).im.abs() <= 1e-6);
        }

        let mu = make("paper_mu").unwrap();
        let b = VanHoveFamily::squares_b();
        let vol = b.volume(128).unwrap();
        let p = finite_autocorrelation(&mu, &b, 128, default_lag_cap(vol), ConvolutionPath::Auto).unwrap();
        let v = bragg_cesaro(&p, Frequency::ZERO);
        assert!((v - 1.0).abs() <= 0.07, "{v}");
        assert!(cesaro_mean(&p, fr(1, 2)).im.abs() <= 1e-6);
    }

    #[test]
    fn cpp_examples() {
        let d = make("dirac").unwrap();
        let e = cpp_check(&d, Frequency::ZERO, &sym(), 1 << 12, 200, 0.02).unwrap();
        assert!(e.consistent(), "{e:?}");
        assert_eq!(e.bragg_periodogram, 1.0);
        let tm = make("tm_pm").unwrap();
        let e = cpp_check(&tm, fr(1, 4), &sym(), 1 << 14, 300, 0.05).unwrap();
        assert!(e.bragg_periodogram <= 0.05 && e.bragg_cesaro.abs() <= 0.05);
    }

    #[test]
    fn wiener_examples() {
        let d = make("dirac").unwrap();
        let p = finite_autocorrelation(&d, &sym(), 1 << 12, 200, ConvolutionPath::Auto).unwrap();
        assert!((wiener_ratio(&p, 200).unwrap() - 1.0).abs() <= 0.05);
        assert!(wiener_ratio(&p, 201).is_err());
        let b = make("bern").unwrap();
        let p = finite_autocorrelation(&b, &sym(), 1 << 14, 400, ConvolutionPath::Auto).unwrap();
        assert!(wiener_ratio(&p, 400).unwrap() <= 0.1);
    }

    #[test]
    fn split_examples() {
        let d = make("dirac").unwrap();
        let p = finite_autocorrelation(&d, &sym(), 1 << 12, 100, ConvolutionPath::Auto).unwrap();
        let s = eberlein_split(&p, &[Frequency::ZERO], &[1.0]).unwrap();
        assert!(s.max_remainder() <= 0.05);
        assert!(s.wiener_ratio_remainder <= 0.01);
        for i in 0..s.lags.len() {
            assert!((s.gamma[i] - s.gamma_s[i] - s.gamma_0[i]).norm() <= 1e-12);
        }
        assert!(eberlein_split(&p, &[Frequency::ZERO], &[]).is_err());
        assert!(eberlein_split(&p, &[Frequency::ZERO, Frequency::Real(0.0)], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn split_csv_layout() {
        let d = make("dirac").unwrap();
        let p = finite_autocorrelation(&d, &sym(), 2, 1, ConvolutionPath::Direct).unwrap();
        let s = eberlein_split(&p, &[Frequency::ZERO], &[1.0]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("lag,gamma_re,gamma_im,gamma_s_re,gamma_s_im,gamma0_re,gamma0_im\n-1,0.8,0,1,0,"));
        let est = cpp_check(&d, Frequency::ZERO, &sym(), 10, 2, 0.5).unwrap();
        let mut buf = Vec::new();
        write_spectral_csv(&[est], &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("theta,bragg_pp,bragg_cesaro,cpp_gap\n0/1,1,"));
    }
}
