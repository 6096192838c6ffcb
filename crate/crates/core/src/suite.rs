//! The full verification run: exact finite-volume identities over the
//! generator catalog plus the eight headline scenarios.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::comb::WeightedComb;
use crate::correlate::ConvolutionPath;
use crate::diffraction::{cpp_check, periodogram_fft, wiener_ratio};
use crate::eberlein::{
    bilinear_expansion, finite_autocorrelation, finite_eberlein, identity_reflection,
    identity_tilde_swap, IdentityReport, EXACT_TOL,
};
use crate::error::Result;
use crate::fourier_bohr::{
    character_convolution, fb_conjugation_suite, fb_on_window, fb_spectrum_scan, spectrum_grid,
    ScanConfig,
};
use crate::frequency::{Frequency, GOLDEN};
use crate::generators::{catalog, make};
use crate::oracle::{rotation_coefficient, thue_morse_eta};
use crate::orthogonality::{
    aux_bound, besicovitch_orthogonality, fb_product_check, golden_frequencies,
    orthogonality_run, OrthoConfig,
};
use crate::vanhove::VanHoveFamily;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {}. {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Seed for the randomized kernel cases.
    pub seed: u64,
    pub kernel_cases: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0x5eed_2024,
            kernel_cases: 100,
        }
    }
}

fn sym() -> VanHoveFamily {
    VanHoveFamily::symmetric()
}

fn timed(id: u32, name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult {
        id,
        name: name.to_string(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Every exact identity for every catalog comb (and ordered pair) at scale `n`.
pub fn identity_suite(n: u64, lag_bound: usize) -> Result<Vec<IdentityReport>> {
    let fam = sym();
    let combs: Vec<WeightedComb> = catalog().into_iter().map(make).collect::<Result<_>>()?;
    let thetas = [Frequency::ZERO, Frequency::Rational { num: 1, den: 3 }, Frequency::Real(GOLDEN)];
    let (a, b) = (Complex64::new(0.7, -0.2), Complex64::new(-0.3, 1.1));
    let mut out = Vec::new();
    for mu in &combs {
        let tag = |r: IdentityReport| IdentityReport {
            name: format!("{} {}", r.name, mu.label()),
            ..r
        };
        for &f in &thetas {
            out.extend(fb_conjugation_suite(mu, f, &fam, n)?.into_iter().map(tag));
            out.push(tag(character_convolution(mu, f, &fam, n, lag_bound)?.identity()));
        }
        let win = fam.interval(n)?;
        let bins = (win.len() as usize).next_power_of_two();
        let pp = periodogram_fft(mu, &fam, n, bins)?;
        let dev = (0..bins)
            .step_by(7)
            .map(|k| -> Result<f64> {
                let f = Frequency::rational(k as i64, bins as i64)?;
                Ok((pp[k] - fb_on_window(mu, f, win)?.norm_sqr()).abs())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.push(tag(IdentityReport::new("periodogram_abs_sq", dev, EXACT_TOL)));
        for nu in &combs {
            let pair = |r: IdentityReport| IdentityReport {
                name: format!("{} {}×{}", r.name, mu.label(), nu.label()),
                ..r
            };
            out.push(pair(identity_tilde_swap(mu, nu, &fam, n, lag_bound)?));
            out.push(pair(identity_reflection(mu, nu, &fam, n, lag_bound)?));
            out.push(pair(bilinear_expansion(a, mu, b, nu, &fam, n, lag_bound)?));
        }
    }
    Ok(out)
}

fn c1_worked_example() -> Result<(bool, String)> {
    let mu = make("paper_mu")?;
    let b = finite_autocorrelation(&mu, &VanHoveFamily::squares_b(), 128, 3, ConvolutionPath::Auto)?;
    let c = finite_autocorrelation(&mu, &VanHoveFamily::squares_c(), 128, 3, ConvolutionPath::Auto)?;
    let mut ok = true;
    let mut detail = String::from("B:");
    for t in 0..=3 {
        let (v, want) = (b.value(t).re, 1.0 + thue_morse_eta(t));
        ok &= (v - want).abs() <= 0.05;
        detail += &format!(" {v:.4}/{want:.4}");
    }
    detail += "; C:";
    for t in 1..=3 {
        let v = c.value(t).re;
        ok &= (v - 1.0).abs() <= 0.05;
        detail += &format!(" {v:.4}");
    }
    Ok((ok, detail))
}

fn c2_orthogonality() -> Result<(bool, String)> {
    let r = orthogonality_run(
        &make("fib_rot")?,
        &make("tm_pm")?,
        &sym(),
        &[1 << 10, 1 << 13, 1 << 16],
        20,
        &OrthoConfig::default(),
    )?;
    let s = r.sup_forward();
    let ok = s[2] <= 0.05 && s[2] <= 0.5 * s[0] && r.directions_agree();
    Ok((ok, format!("sups {s:?}, direction gap {:.1e}", r.direction_gap())))
}

fn c3_cpp() -> Result<(bool, String)> {
    let n = 1 << 16;
    let cases = [
        ("dirac", Frequency::ZERO),
        ("fib_rot", Frequency::Real(GOLDEN)),
        ("tm_pm", Frequency::Rational { num: 1, den: 4 }),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (spec, f) in cases {
        let e = cpp_check(&make(spec)?, f, &sym(), n, 500, 0.05)?;
        ok &= e.consistent();
        detail += &format!("{spec}@{f}: gap {:.2e}; ", e.cpp_gap);
        if spec == "fib_rot" {
            let oracle = rotation_coefficient(GOLDEN, 1).norm_sqr();
            ok &= (e.bragg_periodogram - oracle).abs() <= 0.05;
            detail += &format!("bragg {:.5} vs {oracle:.5}", e.bragg_periodogram);
        }
    }
    Ok((ok, detail))
}

fn c4_products() -> Result<(bool, String)> {
    let specs = ["dirac", "fib_rot", "tm_pm"];
    let thetas = [Frequency::ZERO, Frequency::Real(GOLDEN), Frequency::Rational { num: 1, den: 4 }];
    let mut worst: f64 = 0.0;
    for m in specs {
        for v in specs {
            let (mu, nu) = (make(m)?, make(v)?);
            for &f in &thetas {
                worst = worst.max(fb_product_check(&mu, &nu, f, &sym(), 1 << 14, 200)?.residual);
            }
        }
    }
    Ok((worst <= 0.05, format!("max residual {worst:.2e} over 27 cases")))
}

fn c5_identities() -> Result<(bool, String)> {
    let reports = identity_suite(1 << 10, 16)?;
    let worst = reports
        .iter()
        .max_by(|a, b| a.max_deviation.total_cmp(&b.max_deviation))
        .expect("non-empty suite");
    let failed = reports.iter().filter(|r| !r.passed()).count();
    Ok((
        failed == 0,
        format!(
            "{} checks, {failed} failed, worst {:.1e} ({})",
            reports.len(),
            worst.max_deviation,
            worst.name
        ),
    ))
}

fn c6_spectral_type() -> Result<(bool, String)> {
    let n = 1 << 16;
    let mut ok = true;
    let mut detail = String::from("wiener");
    for (spec, check) in [
        ("dirac", (|w: f64| (w - 1.0).abs() <= 0.05) as fn(f64) -> bool),
        ("tm_pm", |w| w <= 0.1),
        ("bern", |w| w <= 0.05),
    ] {
        let p = finite_autocorrelation(&make(spec)?, &sym(), n, 2000, ConvolutionPath::Fft)?;
        let w = wiener_ratio(&p, 2000)?;
        ok &= check(w);
        detail += &format!(" {spec}={w:.4}");
    }
    let grid = spectrum_grid(32, &golden_frequencies(5));
    let scan = |spec: &str| -> Result<Vec<Frequency>> {
        Ok(fb_spectrum_scan(&make(spec)?, &grid, &sym(), n, ScanConfig::default())?.retained())
    };
    let tm = scan("tm_pm")?;
    let dirac = scan("dirac")?;
    let fib = scan("fib_rot")?;
    ok &= tm.is_empty();
    ok &= dirac.len() == 1 && dirac[0].same_character(&Frequency::ZERO);
    ok &= [Frequency::ZERO, Frequency::Real(GOLDEN)]
        .iter()
        .all(|f| fib.iter().any(|g| g.same_character(f)));
    detail += &format!(
        "; retained tm={} dirac={} fib={}",
        tm.len(),
        dirac.len(),
        fib.len()
    );
    Ok((ok, detail))
}

fn c7_aux_bound() -> Result<(bool, String)> {
    let tm = make("tm_pm")?;
    let bern = make("bern")?;
    let quarter = Frequency::Rational { num: 1, den: 4 };
    let mut runs = vec![
        ("char:1/4 × tm_pm", besicovitch_orthogonality(&make("char:1/4")?, &tm, &[quarter], &sym(), 1 << 14, 20)?),
        ("fib_rot × tm_pm", besicovitch_orthogonality(&make("fib_rot")?, &tm, &golden_frequencies(12), &sym(), 1 << 16, 20)?),
        ("fib_rot × bern", besicovitch_orthogonality(&make("fib_rot")?, &bern, &golden_frequencies(12), &sym(), 1 << 14, 20)?),
        ("dirac × tm_pm", besicovitch_orthogonality(&make("dirac")?, &tm, &[Frequency::ZERO], &sym(), 1 << 14, 20)?),
    ];
    let terms = runs[1].1.terms.clone();
    let p = WeightedComb::trig_polynomial("P", terms.clone());
    runs.push(("P × tm_pm", aux_bound(&p, &tm, terms, &sym(), 1 << 14, 20)?));
    let ok = runs.iter().all(|(_, r)| r.holds());
    let detail = runs
        .iter()
        .map(|(name, r)| format!("{name}: {:.2e} <= {:.2e}", r.measured_sup, r.bound))
        .collect::<Vec<_>>()
        .join("; ");
    Ok((ok, detail))
}

fn c8_kernels(opts: SuiteOptions) -> Result<(bool, String)> {
    let names = catalog();
    let families = ["sym", "onesided", "pow:1,2", "pow:2,1", "shift:7:sym"];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..opts.kernel_cases {
        let mu = make(names[rng.random_range(0..names.len())])?;
        let nu = make(names[rng.random_range(0..names.len())])?;
        let fam: VanHoveFamily = families[rng.random_range(0..families.len())].parse()?;
        // Cap the window length for the superlinear families.
        let n_max = match fam.label().as_str() {
            "pow:1,2" | "pow:2,1" => 127,
            _ => 1 << 14,
        };
        let n = rng.random_range(1..=n_max);
        let l = rng.random_range(0..=64);
        let d = finite_eberlein(&mu, &nu, &fam, n, l, ConvolutionPath::Direct)?;
        let f = finite_eberlein(&mu, &nu, &fam, n, l, ConvolutionPath::Fft)?;
        worst = worst.max(d.max_deviation(&f));
    }
    let tm = make("tm_pm")?;
    let time = |path| -> Result<f64> {
        let mut best = f64::INFINITY;
        for _ in 0..3 {
            let start = Instant::now();
            finite_autocorrelation(&tm, &sym(), 1 << 16, 500, path)?;
            best = best.min(start.elapsed().as_secs_f64());
        }
        Ok(best)
    };
    let (td, tf) = (time(ConvolutionPath::Direct)?, time(ConvolutionPath::Fft)?);
    let speedup = td / tf;
    Ok((
        worst <= 1e-9 && speedup >= 10.0,
        format!(
            "{} cases, max deviation {worst:.1e}; direct {td:.3}s, fft {tf:.4}s, speedup {speedup:.1}x",
            opts.kernel_cases
        ),
    ))
}

/// Runs criteria 1 to 8 in order.
pub fn acceptance_scenarios(opts: SuiteOptions) -> Vec<CheckResult> {
    vec![
        timed(1, "worked example autocorrelation", c1_worked_example),
        timed(2, "orthogonality fib_rot × tm_pm", c2_orthogonality),
        timed(3, "consistent phase property", c3_cpp),
        timed(4, "Fourier-Bohr product rule", c4_products),
        timed(5, "exact identity suite", c5_identities),
        timed(6, "spectral-type diagnostics", c6_spectral_type),
        timed(7, "aux-lemma bound", c7_aux_bound),
        timed(8, "kernel equivalence and speed", || c8_kernels(opts)),
    ]
}
