//! Fourier–Bohr coefficients `c_theta(mu) = lim (1/|A_n|) sum_{t in A_n}
//! e^{-2 pi i theta t} mu(t)` and the finite-volume identities around them.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comb::{FiniteWindow, WeightedComb};
use crate::eberlein::{half_restricted_eberlein, IdentityReport, EXACT_TOL};
use crate::error::{Error, Result};
use crate::frequency::{farey_grid, Frequency};
use crate::interval::Interval;
use crate::vanhove::VanHoveFamily;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FBEstimate {
    pub frequency: Frequency,
    pub window_index: u64,
    pub translate: i64,
    pub value: Complex64,
    pub uniform_deviation: f64,
}

/// `(1/|W|) sum_{t in W} e^{-2 pi i theta t} mu(t)`.
pub fn fb_on_window(mu: &WeightedComb, theta: Frequency, w: Interval) -> Result<Complex64> {
    let win = mu.restrict(w)?;
    Ok(fb_of_window(&win, theta))
}

pub(crate) fn fb_of_window(win: &FiniteWindow, theta: Frequency) -> Complex64 {
    theta.analyze(win.origin, &win.values) / win.len() as f64
}

/// Estimate over the translated window `x + A_n`.
pub fn fb_coefficient(
    mu: &WeightedComb,
    theta: Frequency,
    family: &VanHoveFamily,
    n: u64,
    x: i64,
) -> Result<FBEstimate> {
    let w = family.interval(n)?.shift(x);
    Ok(FBEstimate {
        frequency: theta,
        window_index: n,
        translate: x,
        value: fb_on_window(mu, theta, w)?,
        uniform_deviation: 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformProbe {
    /// One estimate per `(n, x)`, schedule-major.
    pub estimates: Vec<FBEstimate>,
    /// Final-scale estimate at the reference translate, with the spread.
    pub summary: FBEstimate,
    pub threshold: f64,
    pub uniform: bool,
}

/// Estimates over every `(n, x)`; the spread is taken at the last scale
/// relative to `x = 0` (or the first translate when 0 is not probed).
pub fn fb_uniform_probe(
    mu: &WeightedComb,
    theta: Frequency,
    family: &VanHoveFamily,
    schedule: &[u64],
    translates: &[i64],
    threshold: f64,
) -> Result<UniformProbe> {
    if schedule.is_empty() || translates.is_empty() {
        return Err(Error::InvalidParameter(
            "uniform probe needs at least one scale and one translate".into(),
        ));
    }
    let pairs: Vec<(u64, i64)> = schedule
        .iter()
        .flat_map(|&n| translates.iter().map(move |&x| (n, x)))
        .collect();
    let estimates: Vec<FBEstimate> = pairs
        .par_iter()
        .map(|&(n, x)| fb_coefficient(mu, theta, family, n, x))
        .collect::<Result<_>>()?;
    let last_n = *schedule.last().expect("non-empty schedule");
    let reference_x = if translates.contains(&0) { 0 } else { translates[0] };
    let last: Vec<&FBEstimate> = estimates.iter().filter(|e| e.window_index == last_n).collect();
    let reference = last
        .iter()
        .find(|e| e.translate == reference_x)
        .expect("reference translate probed")
        .value;
    let spread = last
        .iter()
        .map(|e| (e.value - reference).norm())
        .fold(0.0, f64::max);
    let summary = FBEstimate {
        frequency: theta,
        window_index: last_n,
        translate: reference_x,
        value: reference,
        uniform_deviation: spread,
    };
    Ok(UniformProbe {
        estimates,
        uniform: spread <= threshold,
        summary,
        threshold,
    })
}

/// The three conjugation/reflection identities at finite `n`:
/// `c_{-theta}(conj mu) = conj c_theta(mu)`,
/// `c_theta^{-A}(tilde mu) = conj c_theta^A(mu)`,
/// `c_{-theta}^{-A}(mu^dagger) = c_theta^A(mu)`.
pub fn fb_conjugation_suite(
    mu: &WeightedComb,
    theta: Frequency,
    family: &VanHoveFamily,
    n: u64,
) -> Result<Vec<IdentityReport>> {
    let a = family.interval(n)?;
    let neg = a.reflect();
    let base = fb_on_window(mu, theta, a)?;
    let r1 = fb_on_window(&mu.conj(), theta.conj(), a)?;
    let r2 = fb_on_window(&mu.tilde(), theta, neg)?;
    let r3 = fb_on_window(&mu.dagger(), theta.conj(), neg)?;
    Ok(vec![
        IdentityReport::new("fb_conjugate", (r1 - base.conj()).norm(), EXACT_TOL),
        IdentityReport::new("fb_tilde", (r2 - base.conj()).norm(), EXACT_TOL),
        IdentityReport::new("fb_dagger", (r3 - base).norm(), EXACT_TOL),
    ])
}

/// `phi_hat(theta) = sum_k phi(k) e^{-2 pi i theta k}`.
pub fn kernel_transform(kernel: &FiniteWindow, theta: Frequency) -> Complex64 {
    theta.analyze(kernel.origin, &kernel.values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingReport {
    /// `c_theta(mu * phi)`
    pub lhs: Complex64,
    /// `phi_hat(theta) c_theta(mu)`
    pub rhs: Complex64,
    pub deviation: f64,
    /// `sum_k |phi(k)| |A Δ (A - k)| ||mu|| / |A|`
    pub bound: f64,
}

pub fn fb_smoothing_identity(
    mu: &WeightedComb,
    kernel: &FiniteWindow,
    theta: Frequency,
    family: &VanHoveFamily,
    n: u64,
) -> Result<SmoothingReport> {
    let a = family.interval(n)?;
    let smoothed = mu.smooth(kernel)?;
    let lhs = fb_on_window(&smoothed, theta, a)?;
    let rhs = kernel_transform(kernel, theta) * fb_on_window(mu, theta, a)?;
    let vol = a.len();
    let bound = kernel
        .iter()
        .map(|(k, w)| w.norm() * (2 * k.unsigned_abs().min(vol)) as f64)
        .sum::<f64>()
        * mu.declared_bound()
        / vol as f64;
    Ok(SmoothingReport {
        lhs,
        rhs,
        deviation: (lhs - rhs).norm(),
        bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterConvolutionReport {
    pub coefficient: Complex64,
    /// `max_t |(1/|A|)(mu|_A * chi)(t) - chi(t) c_theta(mu)|`; zero in exact arithmetic.
    pub factorization_deviation: f64,
    /// Same comparison for the doubly restricted approximant; a boundary term.
    pub restricted_deviation: f64,
    pub profile: Vec<Complex64>,
}

impl CharacterConvolutionReport {
    pub fn identity(&self) -> IdentityReport {
        IdentityReport::new("character_convolution", self.factorization_deviation, EXACT_TOL)
    }
}

/// `(mu ⊛ chi)(t) = chi(t) c_theta(mu)` at finite volume.
pub fn character_convolution(
    mu: &WeightedComb,
    theta: Frequency,
    family: &VanHoveFamily,
    n: u64,
    lag_bound: usize,
) -> Result<CharacterConvolutionReport> {
    let a = family.interval(n)?;
    let chi = crate::generators::make_spec(&crate::generators::GeneratorSpec::Character(theta))?;
    let c = fb_on_window(mu, theta, a)?;
    let half = half_restricted_eberlein(mu, &chi, family, n, lag_bound)?;
    let full = crate::eberlein::finite_eberlein(
        mu,
        &chi,
        family,
        n,
        lag_bound,
        crate::ConvolutionPath::Direct,
    )?;
    let mut fact: f64 = 0.0;
    let mut restricted: f64 = 0.0;
    for (t, v) in half.lags() {
        let expect = theta.character(t) * c;
        fact = fact.max((v - expect).norm());
        restricted = restricted.max((full.value(t) - expect).norm());
    }
    Ok(CharacterConvolutionReport {
        coefficient: c,
        factorization_deviation: fact,
        restricted_deviation: restricted,
        profile: half.values,
    })
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || p.is_nan() {
        return Err(Error::InvalidParameter(format!("seminorm exponent must be >= 1, got {p}")));
    }
    Ok(())
}

pub(crate) fn window_p_norm(win: &FiniteWindow, p: f64) -> f64 {
    let vol = win.len() as f64;
    if p.is_infinite() {
        return win.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let s: f64 = win.values.iter().map(|v| v.norm().powf(p)).sum();
    (s / vol).powf(1.0 / p)
}

/// `((1/|A_n|) sum_{t in A_n} |mu(t)|^p)^{1/p}`.
pub fn besicovitch_seminorm(mu: &WeightedComb, p: f64, family: &VanHoveFamily, n: u64) -> Result<f64> {
    check_p(p)?;
    let win = mu.restrict(family.interval(n)?)?;
    Ok(window_p_norm(&win, p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslateCheck {
    pub shift: i64,
    pub deviation: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormReport {
    pub p: f64,
    pub q: f64,
    pub norm_1: f64,
    pub norm_p: f64,
    pub norm_q: f64,
    /// `(1/|A|) sum |f g|` with `g = 1`.
    pub holder_lhs: f64,
    /// `||f||_p ||g||_q` with `g = 1`.
    pub holder_rhs: f64,
    pub translates: Vec<TranslateCheck>,
}

impl SeminormReport {
    pub fn all_hold(&self) -> bool {
        let slack = |x: f64| 1e-12 * x.abs().max(1.0);
        self.norm_1 <= self.norm_p + slack(self.norm_p)
            && self.holder_lhs <= self.holder_rhs + slack(self.holder_rhs)
            && self
                .translates
                .iter()
                .all(|t| t.deviation <= t.bound + slack(t.bound))
    }
}

/// Finite-volume seminorm inequalities: Jensen `||.||_1 <= ||.||_p`, Hölder
/// against the constant `1`, and translation invariance up to the
/// symmetric-difference term `(sum_{A Δ (A-x)} |mu|^p / |A|)^{1/p}`.
pub fn seminorm_inequality_suite(
    mu: &WeightedComb,
    family: &VanHoveFamily,
    n: u64,
    p: f64,
    q: f64,
) -> Result<SeminormReport> {
    check_p(p)?;
    check_p(q)?;
    let conj_sum = 1.0 / p + 1.0 / q;
    if (conj_sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "exponents must be conjugate, 1/{p} + 1/{q} = {conj_sum}"
        )));
    }
    let a = family.interval(n)?;
    let win = mu.restrict(a)?;
    let norm_1 = window_p_norm(&win, 1.0);
    let norm_p = window_p_norm(&win, p);
    let norm_q = window_p_norm(&win, q);
    let vol = a.len() as f64;
    let translates = [1i64, 10, 100]
        .iter()
        .map(|&x| -> Result<TranslateCheck> {
            let shifted = mu.translate(x).restrict(a)?;
            let np = window_p_norm(&shifted, p);
            let sym_diff = 2 * x.unsigned_abs().min(a.len());
            let bound = if p.is_infinite() {
                mu.declared_bound()
            } else {
                (sym_diff as f64 * mu.declared_bound().powf(p) / vol).powf(1.0 / p)
            };
            Ok(TranslateCheck {
                shift: x,
                deviation: (np - norm_p).abs(),
                bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SeminormReport {
        p,
        q,
        norm_1,
        norm_p,
        norm_q,
        holder_lhs: norm_1,
        holder_rhs: norm_p,
        translates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPolyFit {
    pub terms: Vec<(Frequency, Complex64)>,
    /// `||mu - P||_{b,2,A_n}`
    pub residual: f64,
}

impl TrigPolyFit {
    pub fn polynomial(&self, label: impl Into<String>) -> WeightedComb {
        WeightedComb::trig_polynomial(label, self.terms.clone())
    }
}

pub fn check_distinct(frequencies: &[Frequency]) -> Result<()> {
    for (i, f) in frequencies.iter().enumerate() {
        if frequencies[..i].iter().any(|g| g.same_character(f)) {
            return Err(Error::DuplicateFrequencies);
        }
    }
    Ok(())
}

/// `P = sum_j c_{theta_j}(mu) chi_j` and the residual `||mu - P||_{b,2}` on `A_n`.
pub fn trig_poly_fit(
    mu: &WeightedComb,
    frequencies: &[Frequency],
    family: &VanHoveFamily,
    n: u64,
) -> Result<TrigPolyFit> {
    check_distinct(frequencies)?;
    let a = family.interval(n)?;
    let win = mu.restrict(a)?;
    let terms: Vec<(Frequency, Complex64)> = frequencies
        .par_iter()
        .map(|&f| (f, fb_of_window(&win, f)))
        .collect();
    let mut residual = win.values.clone();
    for (f, c) in &terms {
        for (r, ch) in residual.iter_mut().zip(f.characters(a)) {
            *r -= c * ch;
        }
    }
    let res = window_p_norm(&FiniteWindow::new(a.lo, residual), 2.0);
    Ok(TrigPolyFit {
        terms,
        residual: res,
    })
}

pub fn trig_poly_residual(
    mu: &WeightedComb,
    frequencies: &[Frequency],
    family: &VanHoveFamily,
    n: u64,
) -> Result<f64> {
    Ok(trig_poly_fit(mu, frequencies, family, n)?.residual)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Threshold is `noise_multiplier * ||mu||_{b,2} * |A_n|^{-1/2}`.
    pub noise_multiplier: f64,
    /// Coarse scales are `n >> j` for `j` in `octaves`, skipping those below 1.
    pub octaves: (u32, u32),
    /// Retained coefficients must keep this fraction of their largest
    /// coarse-scale size.
    pub stability: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            noise_multiplier: 3.0,
            octaves: (4, 8),
            stability: 0.75,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub frequency: Frequency,
    pub value: Complex64,
    /// Largest `|c|` over the coarse scales.
    pub coarse_abs: f64,
    /// `|c(window shifted by |A_n|/2) - c(window)|`
    pub uniform_deviation: f64,
    pub retained: bool,
}

/// Heuristic scan for the Fourier–Bohr spectrum over a finite frequency set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FBSpectrumScan {
    pub window_index: u64,
    pub coarse_indices: Vec<u64>,
    pub threshold: f64,
    pub entries: Vec<ScanEntry>,
}

impl FBSpectrumScan {
    pub fn retained(&self) -> Vec<Frequency> {
        self.entries
            .iter()
            .filter(|e| e.retained)
            .map(|e| e.frequency)
            .collect()
    }

    pub fn entry(&self, f: &Frequency) -> Option<&ScanEntry> {
        self.entries.iter().find(|e| e.frequency.same_character(f))
    }

    /// CSV `theta_num,theta_den_or_nan,theta_real,re,im,abs,uniform_dev`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta_num", "theta_den_or_nan", "theta_real", "re", "im", "abs", "uniform_dev"])?;
        for e in &self.entries {
            let (num, den, real) = e.frequency.csv_fields();
            w.write_record([
                num,
                den,
                real,
                e.value.re.to_string(),
                e.value.im.to_string(),
                e.value.norm().to_string(),
                e.uniform_deviation.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Rationals with denominator `<= max_den` plus `extra`, dropping repeats.
pub fn spectrum_grid(max_den: i64, extra: &[Frequency]) -> Vec<Frequency> {
    let mut grid = farey_grid(max_den);
    for f in extra {
        if !grid.iter().any(|g| g.same_character(f)) {
            grid.push(*f);
        }
    }
    grid
}

/// A frequency is retained when its coefficient clears the shot-noise
/// threshold at scale `n` and has not decayed relative to any coarse scale
/// `n >> j`. Slowly decaying singular-continuous peaks
/// plateau over a few octaves, so one coarse scale is not enough.
pub fn fb_spectrum_scan(
    mu: &WeightedComb,
    frequencies: &[Frequency],
    family: &VanHoveFamily,
    n: u64,
    config: ScanConfig,
) -> Result<FBSpectrumScan> {
    let a = family.interval(n)?;
    let win = mu.restrict(a)?;
    let coarse_indices: Vec<u64> = (config.octaves.0..=config.octaves.1)
        .filter_map(|j| n.checked_shr(j))
        .filter(|&m| m >= 1)
        .collect();
    let coarse = coarse_indices
        .iter()
        .map(|&m| mu.restrict(family.interval(m)?))
        .collect::<Result<Vec<_>>>()?;
    let shift = (a.len() / 2) as i64;
    let shifted = mu.restrict(a.shift(shift))?;
    let threshold =
        config.noise_multiplier * window_p_norm(&win, 2.0) / (a.len() as f64).sqrt();
    let entries = frequencies
        .par_iter()
        .map(|&f| {
            let value = fb_of_window(&win, f);
            let coarse_abs = coarse
                .iter()
                .map(|w| fb_of_window(w, f).norm())
                .fold(0.0, f64::max);
            let moved = fb_of_window(&shifted, f);
            let retained = value.norm() > threshold && value.norm() >= config.stability * coarse_abs;
            ScanEntry {
                frequency: f,
                value,
                coarse_abs,
                uniform_deviation: (moved - value).norm(),
                retained,
            }
        })
        .collect();
    Ok(FBSpectrumScan {
        window_index: n,
        coarse_indices,
        threshold,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::make;
    use crate::GOLDEN;

    fn sym() -> VanHoveFamily {
        VanHoveFamily::symmetric()
    }

    fn fr(p: i64, q: i64) -> Frequency {
        Frequency::rational(p, q).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let d = make("dirac").unwrap();
        for (n, x) in [(3u64, 0i64), (100, -7), (1000, 12345)] {
            assert_eq!(fb_coefficient(&d, Frequency::ZERO, &sym(), n, x).unwrap().value, Complex64::new(1.0, 0.0));
        }
        let even = make("periodic:2:1,0").unwrap();
        for n in [10u64, 11, 1000] {
            let c = fb_coefficient(&even, fr(1, 2), &sym(), n, 0).unwrap().value;
            assert!((c - 0.5).norm() <= 2.0 / (2 * n + 1) as f64);
        }
        let mu = make("paper_mu").unwrap();
        let c = fb_coefficient(&mu, Frequency::ZERO, &sym(), 1 << 12, 0).unwrap().value;
        assert!((c - 1.0).norm() < 0.05);
    }

    #[test]
    fn coefficient_bounded_by_mean_modulus() {
        for spec in crate::generators::catalog() {
            let mu = make(spec).unwrap();
            for f in [Frequency::ZERO, fr(1, 3), Frequency::Real(0.3183)] {
                let c = fb_coefficient(&mu, f, &sym(), 300, 5).unwrap().value.norm();
                let w = sym().interval(300).unwrap().shift(5);
                let m = mu.restrict(w).unwrap().l1() / w.len() as f64;
                assert!(c <= m + 1e-12, "{spec}");
            }
        }
    }

    #[test]
    fn uniform_probe_examples() {
        let d = make("dirac").unwrap();
        let p = fb_uniform_probe(&d, Frequency::ZERO, &sym(), &[10, 100], &[-50, 0, 50], 1e-3).unwrap();
        assert_eq!(p.summary.uniform_deviation, 0.0);
        assert!(p.uniform);
        assert_eq!(p.estimates.len(), 6);

        let tm = make("tm_pm").unwrap();
        let p = fb_uniform_probe(&tm, Frequency::Real(0.3183), &sym(), &[1 << 16], &[-10_000, 0, 10_000], 0.05).unwrap();
        assert!(p.estimates.iter().all(|e| e.value.norm() <= 0.05));

        let mu = make("paper_mu").unwrap();
        let p = fb_uniform_probe(&mu, Frequency::ZERO, &sym(), &[1 << 14], &[-10_000, 0, 10_000], 0.05).unwrap();
        assert!(p.summary.uniform_deviation <= 0.05 && p.uniform, "{:?}", p.summary);
    }

    #[test]
    fn conjugation_identities() {
        let cases: Vec<(&str, Frequency, u64)> = vec![
            ("dirac", Frequency::ZERO, 50),
            ("tm_pm", fr(1, 4), 1 << 12),
            ("fib_rot", Frequency::Real(GOLDEN), 1 << 12),
            ("char:golden", Frequency::Real(GOLDEN), 1 << 12),
        ];
        for (spec, f, n) in cases {
            let mu = make(spec).unwrap();
            for fam in [sym(), VanHoveFamily::squares_b()] {
                let n = if fam.label() == "sym" { n } else { 40 };
                for r in fb_conjugation_suite(&mu, f, &fam, n).unwrap() {
                    assert!(r.passed(), "{spec} {r:?}");
                }
            }
        }
        let d = make("dirac").unwrap();
        let reps = fb_conjugation_suite(&d, Frequency::ZERO, &sym(), 50).unwrap();
        assert!(reps.iter().all(|r| r.max_deviation == 0.0));
    }

    #[test]
    fn smoothing_examples() {
        let d = make("dirac").unwrap();
        let tm = make("tm_pm").unwrap();
        let r = fb_smoothing_identity(&tm, &FiniteWindow::unit(), fr(1, 4), &sym(), 100).unwrap();
        assert_eq!(r.deviation, 0.0);
        let k = FiniteWindow::from_real(0, &[1.0, 1.0]);
        let n = 200u64;
        let r = fb_smoothing_identity(&d, &k, Frequency::ZERO, &sym(), n).unwrap();
        assert!((r.lhs - 2.0).norm() < 1e-12 && (r.rhs - 2.0).norm() < 1e-12);
        assert!(r.deviation <= 4.0 / (2 * n + 1) as f64);
        let k = FiniteWindow::from_real(0, &[1.0, -1.0]);
        let r = fb_smoothing_identity(&tm, &k, fr(1, 4), &sym(), 1 << 14).unwrap();
        assert!(r.deviation <= 1e-2 && r.deviation <= r.bound);
    }

    #[test]
    fn smoothing_on_rotation_comb() {
        // c of the smoothed rotation comb against phi_hat * c, large window.
        let fib = make("fib_rot").unwrap();
        let k = FiniteWindow::new(-1, vec![Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.25)]);
        let theta = Frequency::Real(GOLDEN);
        let r = fb_smoothing_identity(&fib, &k, theta, &sym(), 1 << 15).unwrap();
        assert!(r.deviation / r.rhs.norm() <= 1e-2);
    }

    #[test]
    fn character_convolution_examples() {
        let tm = make("tm_pm").unwrap();
        let d = make("dirac").unwrap();
        let r = character_convolution(&tm, Frequency::ZERO, &sym(), 200, 5).unwrap();
        assert!(r.profile.iter().all(|v| (v - r.coefficient).norm() < 1e-12));
        let n = 300u64;
        let r = character_convolution(&d, fr(1, 2), &sym(), n, 6).unwrap();
        assert!(r.identity().passed());
        assert!(r.profile.iter().all(|v| v.norm() <= 1.0 / (2 * n + 1) as f64 + 1e-15));
        let r = character_convolution(&tm, Frequency::Real(0.3), &sym(), 1 << 12, 10).unwrap();
        assert!(r.factorization_deviation <= 1e-12, "{}", r.factorization_deviation);
        assert!(r.restricted_deviation <= 2.0 * 10.0 / (2 * 4096 + 1) as f64);
    }

    #[test]
    fn seminorm_examples() {
        let d = make("dirac").unwrap();
        let tm = make("tm_pm").unwrap();
        let even = make("periodic:2:1,0").unwrap();
        for p in [1.0, 2.0, 3.5] {
            assert_eq!(besicovitch_seminorm(&d, p, &sym(), 77).unwrap(), 1.0);
        }
        for n in [10u64, 1000] {
            assert_eq!(besicovitch_seminorm(&tm, 2.0, &sym(), n).unwrap(), 1.0);
            let v = besicovitch_seminorm(&even, 1.0, &sym(), n).unwrap();
            assert!((v - 0.5).abs() <= 1.0 / (2 * n + 1) as f64);
        }
        assert!(besicovitch_seminorm(&d, 0.5, &sym(), 3).is_err());
    }

    #[test]
    fn seminorm_inequalities() {
        let d = make("dirac").unwrap();
        let r = seminorm_inequality_suite(&d, &sym(), 500, 3.0, 1.5).unwrap();
        assert!(r.all_hold());
        assert_eq!((r.norm_1, r.norm_p, r.norm_q), (1.0, 1.0, 1.0));
        assert!(r.translates.iter().all(|t| t.deviation == 0.0));

        let even = make("periodic:4:1,0,0,0").unwrap();
        let fam = VanHoveFamily::one_sided();
        let r = seminorm_inequality_suite(&even, &fam, 4000, 2.0, 2.0).unwrap();
        assert!(r.all_hold());
        assert!((r.norm_p - 0.25f64.sqrt()).abs() < 1e-12);
        assert!(r.norm_1 <= r.norm_p);

        let tm = make("tm_pm").unwrap();
        let r = seminorm_inequality_suite(&tm, &sym(), 1000, 2.0, 2.0).unwrap();
        assert_eq!((r.holder_lhs, r.holder_rhs), (1.0, 1.0));
        assert!(r.all_hold());

        assert!(seminorm_inequality_suite(&tm, &sym(), 10, 2.0, 3.0).is_err());
        let r = seminorm_inequality_suite(&make("paper_mu").unwrap(), &sym(), 1000, 1.0, f64::INFINITY).unwrap();
        assert!(r.all_hold());
    }

    #[test]
    fn trig_poly_examples() {
        let theta = Frequency::Real(0.2718);
        let chi = make("char:0.2718").unwrap();
        let r = trig_poly_residual(&chi, &[theta], &sym(), 1 << 12).unwrap();
        assert!(r <= 1e-6);
        assert!(matches!(
            trig_poly_residual(&chi, &[fr(1, 4), Frequency::Real(0.25)], &sym(), 10),
            Err(Error::DuplicateFrequencies)
        ));
    }

    #[test]
    fn trig_poly_residual_decreases_on_rotation() {
        let fib = make("fib_rot").unwrap();
        let freqs = |k: i64| -> Vec<Frequency> { (-k..=k).map(|j| Frequency::multiple_of(GOLDEN, j)).collect() };
        let r: Vec<f64> = [1, 5, 25]
            .iter()
            .map(|&k| trig_poly_residual(&fib, &freqs(k), &sym(), 1 << 16).unwrap())
            .collect();
        assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
        // Parseval oracle: ||1_[0,beta)||^2 - sum_{|k|<=K} |c_k|^2.
        let beta = GOLDEN;
        for (&k, &res) in [1i64, 5, 25].iter().zip(&r) {
            let mut s = beta * beta;
            for j in 1..=k {
                let x = (std::f64::consts::PI * j as f64 * beta).sin() / (std::f64::consts::PI * j as f64);
                s += 2.0 * x * x;
            }
            let oracle = (beta - s).sqrt();
            assert!((res - oracle).abs() < 0.01, "K={k}: {res} vs {oracle}");
        }
    }

    #[test]
    fn thue_morse_has_nothing_to_subtract() {
        let tm = make("tm_pm").unwrap();
        let freqs = vec![Frequency::ZERO, fr(1, 2), fr(1, 3), Frequency::Real(GOLDEN)];
        let r = trig_poly_residual(&tm, &freqs, &sym(), 1 << 16).unwrap();
        assert!((r - 1.0).abs() <= 0.02, "{r}");
    }

    #[test]
    fn scan_thue_morse_and_dirac() {
        let extra: Vec<Frequency> = (-5..=5).map(|k| Frequency::multiple_of(GOLDEN, k)).collect();
        let grid = spectrum_grid(32, &extra);
        let tm = make("tm_pm").unwrap();
        let s = fb_spectrum_scan(&tm, &grid, &sym(), 1 << 16, ScanConfig::default()).unwrap();
        assert!(s.retained().is_empty(), "{:?}", s.retained());
        let d = make("dirac").unwrap();
        let s = fb_spectrum_scan(&d, &grid, &sym(), 1 << 16, ScanConfig::default()).unwrap();
        let kept = s.retained();
        assert_eq!(kept.len(), 1);
        assert!(kept[0].same_character(&Frequency::ZERO));
        let fib = make("fib_rot").unwrap();
        let s = fb_spectrum_scan(&fib, &grid, &sym(), 1 << 16, ScanConfig::default()).unwrap();
        let kept = s.retained();
        assert!(kept.iter().any(|f| f.same_character(&Frequency::ZERO)));
        assert!(kept.iter().any(|f| f.same_character(&Frequency::Real(GOLDEN))));
        assert!(kept.iter().all(|f| f.is_rational() == f.same_character(&Frequency::ZERO)));
    }

    #[test]
    fn scan_csv_layout() {
        let d = make("dirac").unwrap();
        let grid = spectrum_grid(2, &[Frequency::Real(0.3)]);
        let s = fb_spectrum_scan(&d, &grid, &sym(), 64, ScanConfig::default()).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "theta_num,theta_den_or_nan,theta_real,re,im,abs,uniform_dev");
        assert!(lines[1].starts_with("0,1,0,1,0,1,"));
        assert!(lines[3].starts_with("0.3,nan,0.3,"));
    }
}
