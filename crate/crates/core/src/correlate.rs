//! Windowed cross-correlation `r(t) = sum_j a[j] conj(g[j - t])` for
//! `|t| <= L`, with indices outside `[0, N)` treated as zero.
//!
//! Output index `t + L` holds lag `t`.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvolutionPath {
    Direct,
    Fft,
    #[default]
    Auto,
}

impl std::str::FromStr for ConvolutionPath {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "direct" => Ok(ConvolutionPath::Direct),
            "fft" => Ok(ConvolutionPath::Fft),
            "auto" => Ok(ConvolutionPath::Auto),
            _ => Err(crate::Error::Parse(format!("unknown kernel path `{s}`"))),
        }
    }
}

impl std::fmt::Display for ConvolutionPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConvolutionPath::Direct => "direct",
            ConvolutionPath::Fft => "fft",
            ConvolutionPath::Auto => "auto",
        })
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// Forward DFT `X_k = sum_j x_j e^{-2 pi i jk/M}` of `x` zero-padded to `len`.
pub fn dft_padded(x: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    buf[..x.len()].copy_from_slice(x);
    plan(len, false).process(&mut buf);
    buf
}

/// FFT size used for a window of `n` samples and lag bound `lag_bound`: the
/// smallest 5-smooth length `>= n + lag_bound`. Circular wrap-around then
/// only reaches lags beyond `n - 1`, where the correlation vanishes.
pub fn fft_len(n: usize, lag_bound: usize) -> usize {
    let target = (n + lag_bound).max(1);
    let mut best = target.next_power_of_two();
    let mut p5 = 1;
    while p5 < best {
        let mut p35 = p5;
        while p35 < best {
            let mut m = p35;
            while m < target {
                m *= 2;
            }
            best = best.min(m);
            p35 *= 3;
        }
        p5 *= 5;
    }
    best
}

pub fn resolve(path: ConvolutionPath, n: usize, lag_bound: usize) -> ConvolutionPath {
    match path {
        ConvolutionPath::Auto => {
            let m = fft_len(n, lag_bound) as f64;
            let direct_cost = n as f64 * (2 * lag_bound + 1) as f64;
            if direct_cost > 8.0 * m * m.log2() {
                ConvolutionPath::Fft
            } else {
                ConvolutionPath::Direct
            }
        }
        p => p,
    }
}

pub fn cross_correlate(
    a: &[Complex64],
    g: &[Complex64],
    lag_bound: usize,
    path: ConvolutionPath,
) -> Vec<Complex64> {
    match resolve(path, a.len().max(g.len()), lag_bound) {
        ConvolutionPath::Fft => cross_correlate_fft(a, g, lag_bound),
        _ => cross_correlate_direct(a, g, lag_bound),
    }
}

pub fn cross_correlate_direct(a: &[Complex64], g: &[Complex64], lag_bound: usize) -> Vec<Complex64> {
    let l = lag_bound as i64;
    let (na, ng) = (a.len() as i64, g.len() as i64);
    (-l..=l)
        .map(|t| {
            let lo = t.max(0);
            let hi = na.min(ng + t);
            let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
            for j in lo..hi {
                let p = a[j as usize] * g[(j - t) as usize].conj();
                re.add(p.re);
                im.add(p.im);
            }
            Complex64::new(re.total(), im.total())
        })
        .collect()
}

/// Compensated sum, so the reference path's rounding does not grow with the window.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn cross_correlate_fft(a: &[Complex64], g: &[Complex64], lag_bound: usize) -> Vec<Complex64> {
    let m = fft_len(a.len().max(g.len()), lag_bound);
    let fa = dft_padded(a, m);
    // Autocorrelations pass the same samples twice.
    let mut prod: Vec<Complex64> = if a == g {
        fa.iter().map(|x| Complex64::new(x.norm_sqr(), 0.0)).collect()
    } else {
        let fg = dft_padded(g, m);
        fa.iter().zip(&fg).map(|(x, y)| x * y.conj()).collect()
    };
    plan(m, true).process(&mut prod);
    let scale = 1.0 / m as f64;
    let l = lag_bound as i64;
    (-l..=l)
        .map(|t| prod[t.rem_euclid(m as i64) as usize] * scale)
        .collect()
}
