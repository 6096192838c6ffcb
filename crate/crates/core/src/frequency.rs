//! Frequencies on the dual of the integers, i.e. points of the circle `[0, 1)`.
//!
//! Rational frequencies keep an exact numerator/denominator so character
//! values repeat exactly with period `den`. Real frequencies are stored raw
//! (not reduced mod 1) so that conjugation is exact negation.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// `(sqrt(5) - 1) / 2`, the golden rotation number.
pub const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Rational denominators up to this size use a precomputed phase table.
const TABLE_MAX_DEN: i64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    /// `num / den` with `0 <= num < den` and `gcd(num, den) = 1`.
    Rational { num: i64, den: i64 },
    Real(f64),
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl Frequency {
    pub const ZERO: Frequency = Frequency::Rational { num: 0, den: 1 };

    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidParameter(format!(
                "frequency denominator must be positive, got {den}"
            )));
        }
        let num = num.rem_euclid(den);
        let g = gcd(num, den).max(1);
        Ok(Frequency::Rational {
            num: num / g,
            den: den / g,
        })
    }

    pub fn real(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "frequency must be finite, got {theta}"
            )));
        }
        Ok(Frequency::Real(theta))
    }

    /// `k * alpha mod 1` kept as a real frequency in `[0, 1)`.
    pub fn multiple_of(alpha: f64, k: i64) -> Self {
        Frequency::Real((k as f64 * alpha).rem_euclid(1.0))
    }

    /// Representative in `[0, 1)`.
    pub fn value(&self) -> f64 {
        match *self {
            Frequency::Rational { num, den } => num as f64 / den as f64,
            Frequency::Real(x) => {
                let v = x.rem_euclid(1.0);
                if v >= 1.0 {
                    0.0
                } else {
                    v
                }
            }
        }
    }

    /// The conjugate character `1 - theta`.
    pub fn conj(&self) -> Self {
        match *self {
            Frequency::Rational { num, den } => Frequency::Rational {
                num: (den - num) % den,
                den,
            },
            Frequency::Real(x) => Frequency::Real(-x),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Frequency::Rational { .. })
    }

    /// Same character (equal mod 1).
    pub fn same_character(&self, other: &Frequency) -> bool {
        match (self, other) {
            (
                Frequency::Rational { num: a, den: b },
                Frequency::Rational { num: c, den: d },
            ) => a == c && b == d,
            _ => self.value() == other.value(),
        }
    }

    /// Phase `2 pi theta t` reduced to `[-pi, pi]`; odd in `theta`.
    pub fn angle(&self, t: i64) -> f64 {
        match *self {
            Frequency::Rational { num, den } => {
                TAU * centered_residue(num, den, t) as f64 / den as f64
            }
            Frequency::Real(x) => {
                let y = x * t as f64;
                TAU * (y - y.round())
            }
        }
    }

    /// Character value `e^{2 pi i theta t}`.
    pub fn character(&self, t: i64) -> Complex64 {
        Complex64::cis(self.angle(t))
    }

    /// Character values over a window, in window order. Matches
    /// [`Frequency::character`] bit for bit.
    pub fn characters(&self, window: Interval) -> Vec<Complex64> {
        match *self {
            Frequency::Rational { num, den } if den <= TABLE_MAX_DEN => {
                let table = phase_table(den);
                window
                    .iter()
                    .map(|t| {
                        let r = (num as i128 * t as i128).rem_euclid(den as i128) as usize;
                        table[r]
                    })
                    .collect()
            }
            _ => window.iter().map(|t| self.character(t)).collect(),
        }
    }

    /// `sum_j values[j] * conj(e^{2 pi i theta (origin + j)})`.
    pub fn analyze(&self, origin: i64, values: &[Complex64]) -> Complex64 {
        match *self {
            Frequency::Rational { num, den } if den <= TABLE_MAX_DEN => {
                let table = phase_table(den);
                let step = num as usize;
                let den_u = den as usize;
                let mut r = (num as i128 * origin as i128).rem_euclid(den as i128) as usize;
                let mut acc = Complex64::new(0.0, 0.0);
                for v in values {
                    acc += v * table[r].conj();
                    r += step;
                    if r >= den_u {
                        r -= den_u;
                    }
                }
                acc
            }
            _ => values
                .iter()
                .enumerate()
                .map(|(j, v)| v * self.character(origin + j as i64).conj())
                .sum(),
        }
    }

    /// CSV triple `(theta_num, theta_den_or_nan, theta_real)`.
    pub fn csv_fields(&self) -> (String, String, String) {
        match *self {
            Frequency::Rational { num, den } => {
                (num.to_string(), den.to_string(), self.value().to_string())
            }
            Frequency::Real(_) => (
                self.value().to_string(),
                "nan".to_string(),
                self.value().to_string(),
            ),
        }
    }
}

/// `e^{2 pi i r / den}` for `r in 0..den`, via the centered residue.
fn phase_table(den: i64) -> Vec<Complex64> {
    (0..den)
        .map(|r| {
            let c = if 2 * r > den { r - den } else { r };
            Complex64::cis(TAU * c as f64 / den as f64)
        })
        .collect()
}

/// `num * t mod den`, centered into `(-den/2, den/2]`.
fn centered_residue(num: i64, den: i64, t: i64) -> i64 {
    let r = (num as i128 * t as i128).rem_euclid(den as i128) as i64;
    if 2 * r > den {
        r - den
    } else {
        r
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frequency::Rational { num, den } => write!(f, "{num}/{den}"),
            // Debug keeps a decimal point, so integers stay distinct from `p/1`.
            Frequency::Real(x) => write!(f, "{x:?}"),
        }
    }
}

impl FromStr for Frequency {
    type Err = Error;

    /// Accepts `p/q`, an integer (as `p/1`), a decimal, `golden` (or `alpha`),
    /// and `k*golden`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad frequency numerator in `{s}`")))?;
            let q: i64 = q
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad frequency denominator in `{s}`")))?;
            return Frequency::rational(p, q);
        }
        if let Ok(p) = s.parse::<i64>() {
            return Frequency::rational(p, 1);
        }
        if s == "golden" || s == "alpha" {
            return Ok(Frequency::Real(GOLDEN));
        }
        if let Some(k) = s
            .strip_suffix("*golden")
            .or_else(|| s.strip_suffix("*alpha"))
        {
            let k: i64 = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplier in `{s}`")))?;
            return Ok(Frequency::multiple_of(GOLDEN, k));
        }
        let x: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad frequency `{s}`")))?;
        Frequency::real(x)
    }
}

impl Serialize for Frequency {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Frequency {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All reduced rationals `p/q` in `[0, 1)` with `q <= max_den`, ordered by value.
pub fn farey_grid(max_den: i64) -> Vec<Frequency> {
    let mut out: Vec<(i64, i64)> = Vec::new();
    for q in 1..=max_den.max(1) {
        for p in 0..q {
            if gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    out.into_iter()
        .map(|(num, den)| Frequency::Rational { num, den })
        .collect()
}
