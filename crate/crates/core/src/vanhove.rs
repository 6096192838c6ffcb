//! Interval families `n -> A_n = [l_n, r_n]` standing in for van Hove sequences.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Default cap on the probed index range.
pub const DEFAULT_MAX_N: u64 = 1 << 24;

#[derive(Clone)]
pub enum FamilyKind {
    /// `[-n, n]`
    Symmetric,
    /// `[0, n - 1]`
    OneSided,
    /// `[-floor(n^a), floor(n^b)]`
    Power { a: f64, b: f64 },
    /// `-A_n`
    Reflected(Box<VanHoveFamily>),
    /// `x + A_n`
    Translated { shift: i64, inner: Box<VanHoveFamily> },
    Custom {
        label: String,
        rule: Arc<dyn Fn(u64) -> Interval + Send + Sync>,
    },
}

#[derive(Clone)]
pub struct VanHoveFamily {
    kind: FamilyKind,
    max_n: u64,
}

impl fmt::Debug for VanHoveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VanHoveFamily({}, max_n={})", self, self.max_n)
    }
}

impl VanHoveFamily {
    pub fn new(kind: FamilyKind) -> Self {
        VanHoveFamily {
            kind,
            max_n: DEFAULT_MAX_N,
        }
    }

    pub fn symmetric() -> Self {
        Self::new(FamilyKind::Symmetric)
    }

    pub fn one_sided() -> Self {
        Self::new(FamilyKind::OneSided)
    }

    pub fn power(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "power family exponents must be finite and >= 0, got ({a}, {b})"
            )));
        }
        Ok(Self::new(FamilyKind::Power { a, b }))
    }

    /// `B_n = [-n, n^2]`.
    pub fn squares_b() -> Self {
        Self::new(FamilyKind::Power { a: 1.0, b: 2.0 })
    }

    /// `C_n = [-n^2, n]`.
    pub fn squares_c() -> Self {
        Self::new(FamilyKind::Power { a: 2.0, b: 1.0 })
    }

    pub fn custom<F>(label: impl Into<String>, rule: F) -> Self
    where
        F: Fn(u64) -> Interval + Send + Sync + 'static,
    {
        Self::new(FamilyKind::Custom {
            label: label.into(),
            rule: Arc::new(rule),
        })
    }

    pub fn with_max_n(mut self, max_n: u64) -> Self {
        self.max_n = max_n;
        self
    }

    pub fn max_n(&self) -> u64 {
        self.max_n
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    /// `n -> -A_n`.
    pub fn reflect(&self) -> Self {
        VanHoveFamily {
            max_n: self.max_n,
            kind: FamilyKind::Reflected(Box::new(self.clone())),
        }
    }

    /// `n -> x + A_n`.
    pub fn translate(&self, shift: i64) -> Self {
        VanHoveFamily {
            max_n: self.max_n,
            kind: FamilyKind::Translated {
                shift,
                inner: Box::new(self.clone()),
            },
        }
    }

    pub fn interval(&self, n: u64) -> Result<Interval> {
        if n == 0 || n > self.max_n {
            return Err(Error::IndexOutOfRange { n, max_n: self.max_n });
        }
        Ok(self.raw_interval(n))
    }

    fn raw_interval(&self, n: u64) -> Interval {
        let ni = n as i64;
        match &self.kind {
            FamilyKind::Symmetric => Interval::centered(ni),
            FamilyKind::OneSided => Interval::new(0, ni - 1),
            FamilyKind::Power { a, b } => {
                Interval::new(-int_power(n, *a), int_power(n, *b))
            }
            FamilyKind::Reflected(inner) => inner.raw_interval(n).reflect(),
            FamilyKind::Translated { shift, inner } => inner.raw_interval(n).shift(*shift),
            FamilyKind::Custom { rule, .. } => rule(n),
        }
    }

    /// `|A_n|`.
    pub fn volume(&self, n: u64) -> Result<u64> {
        Ok(self.interval(n)?.len())
    }

    /// `|boundary^K A_n| / |A_n|`.
    pub fn boundary_ratio(&self, n: u64, k: Interval) -> Result<f64> {
        if k.is_empty() {
            return Err(Error::InvalidParameter("K must be non-empty".into()));
        }
        let a = self.interval(n)?;
        if a.is_empty() {
            return Err(Error::EmptyWindow);
        }
        Ok(k_boundary_size(a, k) as f64 / a.len() as f64)
    }

    /// Non-degeneracy and monotone volume over `1..=upto`.
    pub fn check_invariants(&self, upto: u64) -> Result<()> {
        let mut prev = 0u64;
        for n in 1..=upto.min(self.max_n) {
            let a = self.interval(n)?;
            if a.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "family {self} is degenerate at n = {n}"
                )));
            }
            if a.len() < prev {
                return Err(Error::InvalidParameter(format!(
                    "family {self} has decreasing volume at n = {n}"
                )));
            }
            prev = a.len();
        }
        Ok(())
    }
}

/// `floor(n^p)`; integer exponents use exact integer arithmetic.
fn int_power(n: u64, p: f64) -> i64 {
    const HUGE: i64 = i64::MAX / 4;
    if p.fract() == 0.0 && p <= 62.0 {
        return (n as i64).checked_pow(p as u32).unwrap_or(HUGE).min(HUGE);
    }
    ((n as f64).powf(p).floor() as i64).min(HUGE)
}

/// `|(cl(A + K) \ A) ∪ ((A^c - K) ∩ A)|` for intervals `A`, `K`.
pub fn k_boundary_size(a: Interval, k: Interval) -> u64 {
    // (A + K) \ A
    let outer_left = Interval::new(a.lo + k.lo, (a.lo - 1).min(a.hi + k.hi));
    let outer_right = Interval::new((a.hi + 1).max(a.lo + k.lo), a.hi + k.hi);
    // (A^c - K) ∩ A : points of A within reach of the complement.
    let inner_left = Interval::new(a.lo, a.hi.min(a.lo - 1 - k.lo));
    let inner_right = Interval::new(a.lo.max(a.hi + 1 - k.hi), a.hi);
    union_size(&mut [outer_left, outer_right, inner_left, inner_right])
}

fn union_size(parts: &mut [Interval]) -> u64 {
    let mut v: Vec<Interval> = parts.iter().copied().filter(|p| !p.is_empty()).collect();
    v.sort_by_key(|p| p.lo);
    let mut total = 0u64;
    let mut cur: Option<Interval> = None;
    for p in v {
        cur = match cur {
            Some(c) if p.lo <= c.hi + 1 => Some(Interval::new(c.lo, c.hi.max(p.hi))),
            Some(c) => {
                total += c.len();
                Some(p)
            }
            None => Some(p),
        };
    }
    total + cur.map(|c| c.len()).unwrap_or(0)
}

impl fmt::Display for VanHoveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FamilyKind::Symmetric => write!(f, "sym"),
            FamilyKind::OneSided => write!(f, "onesided"),
            FamilyKind::Power { a, b } => write!(f, "pow:{a},{b}"),
            FamilyKind::Reflected(inner) => write!(f, "refl:{inner}"),
            FamilyKind::Translated { shift, inner } => write!(f, "shift:{shift}:{inner}"),
            FamilyKind::Custom { label, .. } => write!(f, "custom:{label}"),
        }
    }
}

impl FromStr for VanHoveFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "sym" => return Ok(Self::symmetric()),
            "onesided" => return Ok(Self::one_sided()),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("pow:") {
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected `pow:a,b`, got `{s}`")))?;
            let a: f64 = a
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{a}`")))?;
            let b: f64 = b
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{b}`")))?;
            return Self::power(a, b);
        }
        if let Some(rest) = s.strip_prefix("refl:") {
            return Ok(rest.parse::<VanHoveFamily>()?.reflect());
        }
        if let Some(rest) = s.strip_prefix("shift:") {
            let (x, inner) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `shift:<x>:<spec>`, got `{s}`")))?;
            let x: i64 = x
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad shift `{x}`")))?;
            return Ok(inner.parse::<VanHoveFamily>()?.translate(x));
        }
        Err(Error::Parse(format!("unknown family spec `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Brute-force K-boundary by set enumeration over a bounding box.
    fn brute_boundary(a: Interval, k: Interval) -> u64 {
        let in_a = |x: i64| a.contains(x);
        let lo = a.lo + k.lo.min(0) - k.hi.abs() - 2;
        let hi = a.hi + k.hi.max(0) + k.lo.abs() + 2;
        let mut set = BTreeSet::new();
        for x in lo..=hi {
            // x in A + K and not in A
            if !in_a(x) && k.iter().any(|kk| in_a(x - kk)) {
                set.insert(x);
            }
            // x in A and x = y - kk for some y not in A
            if in_a(x) && k.iter().any(|kk| !in_a(x + kk)) {
                set.insert(x);
            }
        }
        set.len() as u64
    }

    #[test]
    fn intervals_and_volumes() {
        let s = VanHoveFamily::symmetric();
        assert_eq!(s.interval(3).unwrap(), Interval::new(-3, 3));
        assert_eq!(s.volume(3).unwrap(), 7);
        let b = VanHoveFamily::squares_b();
        assert_eq!(b.interval(4).unwrap(), Interval::new(-4, 16));
        assert_eq!(b.volume(4).unwrap(), 21);
        let c = VanHoveFamily::squares_c();
        assert_eq!(c.interval(4).unwrap(), Interval::new(-16, 4));
        assert_eq!(c.volume(4).unwrap(), 21);
        assert_eq!(VanHoveFamily::one_sided().interval(5).unwrap(), Interval::new(0, 4));
    }

    #[test]
    fn index_zero_and_cap_are_refused() {
        let s = VanHoveFamily::symmetric().with_max_n(10);
        assert!(matches!(s.interval(0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(s.interval(11), Err(Error::IndexOutOfRange { .. })));
        assert!(s.interval(10).is_ok());
    }

    #[test]
    fn boundary_ratio_values() {
        let s = VanHoveFamily::symmetric();
        assert_eq!(s.boundary_ratio(17, Interval::new(0, 0)).unwrap(), 0.0);
        let k = Interval::new(-5, 5);
        let a = s.interval(1000).unwrap();
        let r = s.boundary_ratio(1000, k).unwrap();
        assert!(r <= 0.011);
        assert_eq!(r, brute_boundary(a, k) as f64 / a.len() as f64);
    }

    #[test]
    fn boundary_matches_brute_force_on_grid() {
        for (lo, hi) in [(0, 0), (-3, 2), (5, 40), (-10, -1)] {
            for (k1, k2) in [(0, 0), (-2, 3), (1, 4), (-6, -2), (-20, 20)] {
                let a = Interval::new(lo, hi);
                let k = Interval::new(k1, k2);
                assert_eq!(k_boundary_size(a, k), brute_boundary(a, k), "A={a} K={k}");
            }
        }
    }

    #[test]
    fn boundary_ratio_decreases() {
        let k = Interval::new(-5, 5);
        for fam in [
            VanHoveFamily::symmetric(),
            VanHoveFamily::squares_b(),
            VanHoveFamily::squares_c(),
        ] {
            let r: Vec<f64> = [10, 100, 1000]
                .iter()
                .map(|&n| fam.boundary_ratio(n, k).unwrap())
                .collect();
            assert!(r[0] > r[1] && r[1] > r[2], "{fam}: {r:?}");
        }
    }

    #[test]
    fn reflection_and_translation() {
        let s = VanHoveFamily::symmetric();
        let (b, c) = (VanHoveFamily::squares_b(), VanHoveFamily::squares_c());
        for n in 1..50 {
            assert_eq!(s.reflect().interval(n).unwrap(), s.interval(n).unwrap());
            assert_eq!(b.reflect().interval(n).unwrap(), c.interval(n).unwrap());
            assert_eq!(b.reflect().reflect().interval(n).unwrap(), b.interval(n).unwrap());
        }
        assert_eq!(s.translate(5).interval(2).unwrap(), Interval::new(3, 7));
    }

    #[test]
    fn spec_strings_round_trip() {
        for spec in ["sym", "onesided", "pow:1,2", "pow:0.5,1.5", "refl:pow:2,1", "shift:-7:refl:sym"] {
            let f: VanHoveFamily = spec.parse().unwrap();
            assert_eq!(f.to_string(), spec);
        }
        assert!("bogus".parse::<VanHoveFamily>().is_err());
        assert!("pow:1".parse::<VanHoveFamily>().is_err());
        let shifted: VanHoveFamily = "shift:5:sym".parse().unwrap();
        assert_eq!(shifted.interval(2).unwrap(), Interval::new(3, 7));
    }

    #[test]
    fn builtin_families_satisfy_invariants() {
        for fam in ["sym", "onesided", "pow:1,2", "pow:2,1", "pow:0.5,1.5", "refl:pow:1,2"] {
            let f: VanHoveFamily = fam.parse().unwrap();
            f.check_invariants(200).unwrap();
        }
    }

    #[test]
    fn ratio_monotone_for_probe_sets() {
        let grid = [100u64, 200, 400, 800, 1600, 3200];
        for spec in ["sym", "onesided", "pow:1,2", "pow:2,1", "refl:pow:1,2", "shift:9:sym"] {
            let f: VanHoveFamily = spec.parse().unwrap();
            for (k1, k2) in [(-20, 20), (0, 20), (-20, 0), (-3, 7)] {
                let k = Interval::new(k1, k2);
                let r: Vec<f64> = grid.iter().map(|&n| f.boundary_ratio(n, k).unwrap()).collect();
                assert!(r.windows(2).all(|w| w[1] <= w[0]), "{spec} K={k}: {r:?}");
                assert!(r[r.len() - 1] < 0.05);
            }
        }
    }
}
