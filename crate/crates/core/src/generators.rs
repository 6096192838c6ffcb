//! Catalog of named combs spanning the spectral types used by the theorem
//! suites: periodic and model-set combs (pure point), Thue–Morse (singular
//! continuous), centered Bernoulli noise (absolutely continuous) and a mixed
//! comb whose continuous part depends on the averaging family.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;


use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::comb::{FiniteWindow, SpectralType, WeightedComb};
use crate::error::{Error, Result};
use crate::frequency::{Frequency, GOLDEN};

pub const DEFAULT_BERNOULLI_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// `dirac`: weight 1 on every integer.
    Dirac,
    /// `periodic:p:w0,...,w{p-1}`
    Periodic { pattern: Vec<f64> },
    /// `tm_pm`: `(-1)^{s_2(n)}`, mirrored `t(n) = t(-n-1)` for `n < 0`.
    ThueMorsePm,
    /// `tm01`: `(1 + t(n)) / 2`.
    ThueMorse01,
    /// `paper_mu`: 1 for `n < 0`, `1 + t(n)` for `n >= 0`.
    PaperMu,
    /// `fib_rot[:alpha:beta]`: indicator of `{n alpha} < beta`.
    FibRotation { params: Option<(f64, f64)> },
    /// `fib_sub`: two-sided fixed point of `a -> ab, b -> a`, weight 1 on `a`.
    FibSubstitution,
    /// `bern[:p:seed]`: centered iid `±1` with `P(+1) = p`.
    Bernoulli { params: Option<(f64, u64)> },
    /// `char:theta`: `e^{2 pi i theta n}`.
    Character(Frequency),
    /// `csv:<path>`
    Csv(PathBuf),
}

impl GeneratorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Dirac => "dirac",
            GeneratorSpec::Periodic { .. } => "periodic",
            GeneratorSpec::ThueMorsePm => "tm_pm",
            GeneratorSpec::ThueMorse01 => "tm01",
            GeneratorSpec::PaperMu => "paper_mu",
            GeneratorSpec::FibRotation { .. } => "fib_rot",
            GeneratorSpec::FibSubstitution => "fib_sub",
            GeneratorSpec::Bernoulli { .. } => "bern",
            GeneratorSpec::Character(_) => "char",
            GeneratorSpec::Csv(_) => "csv",
        }
    }

    pub fn rotation_params(&self) -> Option<(f64, f64)> {
        match self {
            GeneratorSpec::FibRotation { params } => Some(params.unwrap_or((GOLDEN, GOLDEN))),
            _ => None,
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Periodic { pattern } => {
                let w: Vec<String> = pattern.iter().map(|w| w.to_string()).collect();
                write!(f, "periodic:{}:{}", pattern.len(), w.join(","))
            }
            GeneratorSpec::FibRotation { params: Some((a, b)) } => write!(f, "fib_rot:{a}:{b}"),
            GeneratorSpec::Bernoulli { params: Some((p, s)) } => write!(f, "bern:{p}:{s}"),
            GeneratorSpec::Character(theta) => write!(f, "char:{theta}"),
            GeneratorSpec::Csv(path) => write!(f, "csv:{}", path.display()),
            other => f.write_str(other.name()),
        }
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} `{s}`")))
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let spec = match (head, rest) {
            ("dirac", None) => GeneratorSpec::Dirac,
            ("tm_pm", None) => GeneratorSpec::ThueMorsePm,
            ("tm01", None) => GeneratorSpec::ThueMorse01,
            ("paper_mu", None) => GeneratorSpec::PaperMu,
            ("fib_sub", None) => GeneratorSpec::FibSubstitution,
            ("fib_rot", None) => GeneratorSpec::FibRotation { params: None },
            ("fib_rot", Some(r)) => {
                let (a, b) = r
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("expected `fib_rot:alpha:beta`, got `{s}`")))?;
                GeneratorSpec::FibRotation {
                    params: Some((parse_f64(a, "alpha")?, parse_f64(b, "beta")?)),
                }
            }
            ("bern", None) => GeneratorSpec::Bernoulli { params: None },
            ("bern", Some(r)) => {
                let (p, seed) = r
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("expected `bern:p:seed`, got `{s}`")))?;
                let seed: u64 = seed
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad seed `{seed}`")))?;
                GeneratorSpec::Bernoulli {
                    params: Some((parse_f64(p, "p")?, seed)),
                }
            }
            ("char", Some(r)) => GeneratorSpec::Character(r.parse()?),
            ("periodic", Some(r)) => {
                let (p, ws) = r
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("expected `periodic:p:w0,...`, got `{s}`")))?;
                let p: usize = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad period `{p}`")))?;
                let pattern = ws
                    .split(',')
                    .map(|w| parse_f64(w, "weight"))
                    .collect::<Result<Vec<_>>>()?;
                if p == 0 || pattern.len() != p {
                    return Err(Error::Parse(format!(
                        "period {p} does not match {} weights",
                        pattern.len()
                    )));
                }
                GeneratorSpec::Periodic { pattern }
            }
            ("csv", Some(path)) if !path.is_empty() => GeneratorSpec::Csv(PathBuf::from(path)),
            _ => return Err(Error::UnknownGenerator(s.to_string())),
        };
        Ok(spec)
    }
}

/// `(-1)^{s_2(n)}` extended by `t(n) = t(-n-1)`.
pub fn thue_morse_sign(n: i64) -> f64 {
    // For n < 0, -n-1 == !n in two's complement.
    let m = if n >= 0 { n as u64 } else { !n as u64 };
    if m.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Lengths `|sigma^k(a)|` of the Fibonacci substitution iterates.
fn fibonacci_lengths() -> &'static [u64] {
    static LENGTHS: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    LENGTHS.get_or_init(|| {
        let mut v = vec![1u64, 2];
        loop {
            let next = v[v.len() - 1] + v[v.len() - 2];
            if next > (1u64 << 62) {
                break;
            }
            v.push(next);
        }
        v
    })
}

/// `true` for letter `a` at index `i` of `sigma^k(a)`, using
/// `sigma^k(a) = sigma^{k-1}(a) sigma^{k-2}(a)`.
fn fib_letter(mut k: usize, mut i: u64) -> bool {
    let lens = fibonacci_lengths();
    loop {
        match k {
            0 => return true,
            1 => return i == 0,
            _ => {
                if i < lens[k - 1] {
                    k -= 1;
                } else {
                    i -= lens[k - 1];
                    k -= 2;
                }
            }
        }
    }
}

/// Two-sided Fibonacci word with legal seed `b.a`: the right half is the
/// fixed point `lim sigma^k(a)`, the left half the suffix limit of
/// `sigma^{2j+1}(a)`.
pub fn fibonacci_substitution_letter(x: i64) -> bool {
    let lens = fibonacci_lengths();
    if x >= 0 {
        let i = x as u64;
        let k = lens.iter().position(|&l| l > i).expect("position within u64 range");
        fib_letter(k, i)
    } else {
        let m = (-(x + 1)) as u64;
        let k = (1..lens.len())
            .step_by(2)
            .find(|&k| lens[k] > m)
            .expect("position within u64 range");
        fib_letter(k, lens[k] - 1 - m)
    }
}

fn zigzag(x: i64) -> u64 {
    ((x << 1) ^ (x >> 63)) as u64
}

/// Centered Bernoulli weight at `x`: word `2 * zigzag(x)` of the ChaCha8
/// stream seeded with `seed`, mapped to a uniform in `[0, 1)`.
fn bernoulli_weight(base: &ChaCha8Rng, p: f64, x: i64) -> f64 {
    let mut rng = base.clone();
    rng.set_word_pos(2 * zigzag(x) as u128);
    let u: f64 = rng.random();
    let s = if u < p { 1.0 } else { -1.0 };
    s - (2.0 * p - 1.0)
}

pub fn make_spec(spec: &GeneratorSpec) -> Result<WeightedComb> {
    let label = spec.to_string();
    let comb = match spec {
        GeneratorSpec::Dirac => WeightedComb::from_real_rule(label, 1.0, |_| 1.0),
        GeneratorSpec::Periodic { pattern } => {
            let p = pattern.len() as i64;
            let bound = pattern.iter().map(|w| w.abs()).fold(0.0, f64::max);
            let pat = Arc::new(pattern.clone());
            WeightedComb::from_real_rule(label, bound, move |x| pat[x.rem_euclid(p) as usize])
        }
        GeneratorSpec::ThueMorsePm => WeightedComb::from_real_rule(label, 1.0, thue_morse_sign),
        GeneratorSpec::ThueMorse01 => {
            WeightedComb::from_real_rule(label, 1.0, |x| (1.0 + thue_morse_sign(x)) / 2.0)
        }
        GeneratorSpec::PaperMu => WeightedComb::from_real_rule(label, 2.0, |x| {
            if x < 0 {
                1.0
            } else {
                1.0 + thue_morse_sign(x)
            }
        }),
        GeneratorSpec::FibRotation { .. } => {
            let (alpha, beta) = spec.rotation_params().unwrap_or((GOLDEN, GOLDEN));
            if !(beta > 0.0 && beta < 1.0) {
                return Err(Error::InvalidParameter(format!("beta must lie in (0, 1), got {beta}")));
            }
            if !alpha.is_finite() {
                return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
            }
            WeightedComb::from_real_rule(label, 1.0, move |x| {
                let y = x as f64 * alpha;
                if y - y.floor() < beta {
                    1.0
                } else {
                    0.0
                }
            })
        }
        GeneratorSpec::FibSubstitution => WeightedComb::from_real_rule(label, 1.0, |x| {
            if fibonacci_substitution_letter(x) {
                1.0
            } else {
                0.0
            }
        }),
        GeneratorSpec::Bernoulli { params } => {
            let (p, seed) = params.unwrap_or((0.5, DEFAULT_BERNOULLI_SEED));
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidParameter(format!("p must lie in (0, 1), got {p}")));
            }
            let base = ChaCha8Rng::seed_from_u64(seed);
            let bound = 2.0 * p.max(1.0 - p);
            WeightedComb::from_real_rule(label, bound, move |x| bernoulli_weight(&base, p, x))
                .with_seed(seed)
        }
        GeneratorSpec::Character(theta) => {
            let theta = *theta;
            WeightedComb::from_rule(label, 1.0, move |x| theta.character(x))
        }
        GeneratorSpec::Csv(path) => {
            let file = std::fs::File::open(path)?;
            let window = FiniteWindow::read_csv(file)?;
            WeightedComb::from_window(label, window)
        }
    };
    Ok(match classify_expected(spec) {
        Some(t) => comb.with_spectral_type(t),
        None => comb,
    })
}

/// Builds a catalog comb from its spec string.
pub fn make(spec: &str) -> Result<WeightedComb> {
    make_spec(&spec.parse()?)
}

/// Ground-truth spectral type; `None` for imported data.
pub fn classify_expected(spec: &GeneratorSpec) -> Option<SpectralType> {
    match spec {
        GeneratorSpec::Dirac
        | GeneratorSpec::Periodic { .. }
        | GeneratorSpec::FibRotation { .. }
        | GeneratorSpec::FibSubstitution
        | GeneratorSpec::Character(_) => Some(SpectralType::PurePoint),
        GeneratorSpec::ThueMorsePm | GeneratorSpec::Bernoulli { .. } => {
            Some(SpectralType::Continuous)
        }
        GeneratorSpec::ThueMorse01 | GeneratorSpec::PaperMu => Some(SpectralType::Mixed),
        GeneratorSpec::Csv(_) => None,
    }
}

pub fn classify_expected_name(spec: &str) -> Result<Option<SpectralType>> {
    Ok(classify_expected(&spec.parse()?))
}

/// The specs whose combs make up the built-in catalog.
pub fn catalog() -> Vec<&'static str> {
    vec![
        "dirac",
        "periodic:2:1,-1",
        "periodic:2:1,0",
        "tm_pm",
        "tm01",
        "paper_mu",
        "fib_rot",
        "fib_sub",
        "bern",
        "char:3/10",
        "char:golden",
    ]
}
