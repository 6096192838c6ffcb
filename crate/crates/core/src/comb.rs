//! Translation-bounded complex-weighted Dirac combs on the integers.
//!
//! A comb is an immutable weight rule `x -> w(x)` plus metadata. All the
//! measure operations (reflections, conjugation, translation, linear
//! combination, smoothing by a finite kernel) build new rules by composition,
//! so evaluation stays pure and thread-safe.

use std::fmt;
use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Largest window that will be materialized in memory.
pub const MAX_WINDOW_LEN: u64 = 1 << 24;

const PARALLEL_EVAL_MIN: u64 = 1 << 15;

type WeightRule = Arc<dyn Fn(i64) -> Complex64 + Send + Sync>;

/// Ground-truth spectral type of a catalog comb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralType {
    PurePoint,
    Continuous,
    /// Mixed, and the continuous part depends on the van Hove family.
    Mixed,
}

impl fmt::Display for SpectralType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectralType::PurePoint => "pure_point",
            SpectralType::Continuous => "continuous",
            SpectralType::Mixed => "mixed",
        })
    }
}

/// Contiguous block of weights `values[j]` at position `origin + j`.
/// Positions outside the block carry weight zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteWindow {
    pub origin: i64,
    pub values: Vec<Complex64>,
}

impl FiniteWindow {
    pub fn new(origin: i64, values: Vec<Complex64>) -> Self {
        FiniteWindow { origin, values }
    }

    pub fn from_real(origin: i64, values: &[f64]) -> Self {
        FiniteWindow::new(
            origin,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Unit mass at 0.
    pub fn unit() -> Self {
        FiniteWindow::from_real(0, &[1.0])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.origin, self.origin + self.values.len() as i64 - 1)
    }

    pub fn get(&self, x: i64) -> Complex64 {
        let j = x - self.origin;
        if j < 0 || j >= self.values.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[j as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(j, v)| (self.origin + j as i64, *v))
    }

    /// `x -> conj(w(-x))`.
    pub fn tilde(&self) -> Self {
        let iv = self.interval();
        let values = self.values.iter().rev().map(|v| v.conj()).collect();
        FiniteWindow::new(-iv.hi, values)
    }

    /// Sum of `|w|`.
    pub fn l1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    /// Writes `position,re,im` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["position", "re", "im"])?;
        for (x, v) in self.iter() {
            wtr.write_record([x.to_string(), v.re.to_string(), v.im.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads `position,re,im` rows; positions must be strictly increasing.
    /// Gaps are filled with zero weight.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        let expected = ["position", "re", "im"];
        if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h.trim() != e) {
            return Err(Error::Parse(format!(
                "comb CSV header must be `position,re,im`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut points: Vec<(i64, Complex64)> = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let field = |i: usize| rec.get(i).unwrap_or("").trim().to_string();
            let x: i64 = field(0)
                .parse()
                .map_err(|_| Error::Parse(format!("bad position `{}`", field(0))))?;
            let re: f64 = field(1)
                .parse()
                .map_err(|_| Error::Parse(format!("bad re `{}`", field(1))))?;
            let im: f64 = field(2)
                .parse()
                .map_err(|_| Error::Parse(format!("bad im `{}`", field(2))))?;
            if let Some(&(prev, _)) = points.last() {
                if x <= prev {
                    return Err(Error::Parse(format!(
                        "positions must be strictly increasing ({x} after {prev})"
                    )));
                }
            }
            points.push((x, Complex64::new(re, im)));
        }
        let Some(&(first, _)) = points.first() else {
            return Err(Error::EmptyWindow);
        };
        let last = points.last().map(|p| p.0).unwrap_or(first);
        let len = (last - first + 1) as u64;
        if len > MAX_WINDOW_LEN {
            return Err(Error::WindowTooLarge {
                len,
                cap: MAX_WINDOW_LEN,
            });
        }
        let mut values = vec![Complex64::new(0.0, 0.0); len as usize];
        for (x, v) in points {
            values[(x - first) as usize] = v;
        }
        Ok(FiniteWindow::new(first, values))
    }
}

/// A weighted Dirac comb `sum_x w(x) delta_x` on the integers.
#[derive(Clone)]
pub struct WeightedComb {
    rule: WeightRule,
    label: String,
    seed: Option<u64>,
    declared_bound: f64,
    /// `None` means all of the integers.
    support: Option<Interval>,
    real_valued: bool,
    spectral_type: Option<SpectralType>,
}

impl fmt::Debug for WeightedComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedComb")
            .field("label", &self.label)
            .field("seed", &self.seed)
            .field("declared_bound", &self.declared_bound)
            .field("support", &self.support)
            .field("real_valued", &self.real_valued)
            .field("spectral_type", &self.spectral_type)
            .finish()
    }
}

impl WeightedComb {
    /// A comb from an arbitrary rule. `declared_bound` is the claimed
    /// supremum of `|w(x)|`.
    pub fn from_rule<F>(label: impl Into<String>, declared_bound: f64, rule: F) -> Self
    where
        F: Fn(i64) -> Complex64 + Send + Sync + 'static,
    {
        WeightedComb {
            rule: Arc::new(rule),
            label: label.into(),
            seed: None,
            declared_bound,
            support: None,
            real_valued: false,
            spectral_type: None,
        }
    }

    pub fn from_real_rule<F>(label: impl Into<String>, declared_bound: f64, rule: F) -> Self
    where
        F: Fn(i64) -> f64 + Send + Sync + 'static,
    {
        let mut c = WeightedComb::from_rule(label, declared_bound, move |x| {
            Complex64::new(rule(x), 0.0)
        });
        c.real_valued = true;
        c
    }

    /// Comb carrying the weights of a finite window, zero elsewhere.
    pub fn from_window(label: impl Into<String>, window: FiniteWindow) -> Self {
        let bound = window.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let real = window.values.iter().all(|v| v.im == 0.0);
        let support = window.interval();
        let window = Arc::new(window);
        let mut c = WeightedComb::from_rule(label, bound, move |x| window.get(x));
        c.real_valued = real;
        c.support = Some(support);
        c
    }

    /// `sum_j c_j e^{2 pi i theta_j x}`.
    pub fn trig_polynomial(
        label: impl Into<String>,
        terms: Vec<(crate::frequency::Frequency, Complex64)>,
    ) -> Self {
        let bound = terms.iter().map(|(_, c)| c.norm()).sum();
        WeightedComb::from_rule(label, bound, move |x| {
            terms
                .iter()
                .map(|(f, c)| c * f.character(x))
                .sum::<Complex64>()
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_spectral_type(mut self, t: SpectralType) -> Self {
        self.spectral_type = Some(t);
        self
    }

    pub fn with_support(mut self, support: Interval) -> Self {
        self.support = Some(support);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn declared_bound(&self) -> f64 {
        self.declared_bound
    }

    pub fn support(&self) -> Option<Interval> {
        self.support
    }

    pub fn is_real_valued(&self) -> bool {
        self.real_valued
    }

    pub fn spectral_type(&self) -> Option<SpectralType> {
        self.spectral_type
    }

    /// Weight at `x`; zero outside the declared support.
    pub fn eval(&self, x: i64) -> Complex64 {
        match self.support {
            Some(s) if !s.contains(x) => Complex64::new(0.0, 0.0),
            _ => (self.rule)(x),
        }
    }

    /// `mu|_I` as a finite window.
    pub fn restrict(&self, interval: Interval) -> Result<FiniteWindow> {
        if interval.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let len = interval.len();
        if len > MAX_WINDOW_LEN {
            return Err(Error::WindowTooLarge {
                len,
                cap: MAX_WINDOW_LEN,
            });
        }
        let values = if len >= PARALLEL_EVAL_MIN {
            (interval.lo..=interval.hi)
                .into_par_iter()
                .map(|x| self.eval(x))
                .collect()
        } else {
            interval.iter().map(|x| self.eval(x)).collect()
        };
        Ok(FiniteWindow::new(interval.lo, values))
    }

    /// Checks `sum_{x in {t}} |w(x)| <= declared_bound` for every probe `t`
    /// (the translation-boundedness witness with compact set `{0}`).
    pub fn check_translation_bound(&self, probe: Interval) -> bool {
        probe
            .iter()
            .all(|x| self.eval(x).norm() <= self.declared_bound * (1.0 + 1e-12))
    }

    /// `x -> conj(mu(-x))`.
    pub fn tilde(&self) -> Self {
        let inner = self.clone();
        let mut c = WeightedComb::from_rule(
            format!("tilde({})", self.label),
            self.declared_bound,
            move |x| inner.eval(-x).conj(),
        );
        self.inherit(&mut c);
        c.support = self.support.map(|s| s.reflect());
        c
    }

    /// `x -> mu(-x)`.
    pub fn dagger(&self) -> Self {
        let inner = self.clone();
        let mut c = WeightedComb::from_rule(
            format!("dagger({})", self.label),
            self.declared_bound,
            move |x| inner.eval(-x),
        );
        self.inherit(&mut c);
        c.support = self.support.map(|s| s.reflect());
        c
    }

    /// `x -> conj(mu(x))`.
    pub fn conj(&self) -> Self {
        let inner = self.clone();
        let mut c = WeightedComb::from_rule(
            format!("conj({})", self.label),
            self.declared_bound,
            move |x| inner.eval(x).conj(),
        );
        self.inherit(&mut c);
        c.support = self.support;
        c
    }

    /// `T_t mu : x -> mu(x - t)`.
    pub fn translate(&self, t: i64) -> Self {
        let inner = self.clone();
        let mut c = WeightedComb::from_rule(
            format!("shift({t},{})", self.label),
            self.declared_bound,
            move |x| inner.eval(x - t),
        );
        self.inherit(&mut c);
        c.support = self.support.map(|s| s.shift(t));
        c
    }

    /// `a mu + b nu`.
    pub fn lincomb(a: Complex64, mu: &WeightedComb, b: Complex64, nu: &WeightedComb) -> Self {
        let (m, n) = (mu.clone(), nu.clone());
        let mut c = WeightedComb::from_rule(
            format!("lincomb({a},{},{b},{})", mu.label, nu.label),
            a.norm() * mu.declared_bound + b.norm() * nu.declared_bound,
            move |x| a * m.eval(x) + b * n.eval(x),
        );
        c.real_valued = mu.real_valued && nu.real_valued && a.im == 0.0 && b.im == 0.0;
        c.support = match (mu.support, nu.support) {
            (Some(s), Some(t)) => Some(s.hull(&t)),
            _ => None,
        };
        c
    }

    /// `mu * phi : x -> sum_k phi(k) mu(x - k)` for a finite kernel `phi`.
    pub fn smooth(&self, kernel: &FiniteWindow) -> Result<Self> {
        if kernel.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let inner = self.clone();
        let taps: Vec<(i64, Complex64)> = kernel.iter().collect();
        let kernel_real = kernel.values.iter().all(|v| v.im == 0.0);
        let mut c = WeightedComb::from_rule(
            format!("smooth({})", self.label),
            self.declared_bound * kernel.l1(),
            move |x| taps.iter().map(|&(k, w)| w * inner.eval(x - k)).sum(),
        );
        c.real_valued = self.real_valued && kernel_real;
        c.seed = self.seed;
        c.support = self.support.map(|s| s.minkowski(&kernel.interval()));
        Ok(c)
    }

    fn inherit(&self, c: &mut WeightedComb) {
        c.seed = self.seed;
        c.real_valued = self.real_valued;
        c.spectral_type = self.spectral_type;
    }
}
