//! Seeded verification runs over sampled domain points with JSON reports.
//!
//! Randomness comes from ChaCha20 (`rand_chacha`). The generator for a
//! `(kind, suite)` pair is seeded with `seed_from_u64(seed)` and placed on
//! stream `FNV-1a-64("<kind>/<suite>")`; each sample point then draws a
//! 64-bit child seed from it in order and runs on its own ChaCha20 instance.
//! Points are evaluated in parallel, errors are reduced with `max`, and the
//! report entries are sorted by `(kind, suite)`, so the output does not
//! depend on scheduling.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::duality::{check_equivariance, check_hereditary, psi, psi_inverse, route_spread, DualityRoute};
use crate::error::{HjtsError, Result};
use crate::geometry::{
    check_bergman_metric, check_beta_exactness, check_lemma_a1, check_lemma_a2, check_pullback_dbar_p1,
    check_symplectic_duality, check_volume_duality, FdSteps,
};
use crate::jts::{bergman_operator, d_operator, genus, triple_product, Element, IsotropyParams, JtsKind};
use crate::linalg::{det, vec_norm, C64};
use crate::spectral::{factor_norms, spectral_decompose, spectral_radius};

pub const SCHEMA: &str = "hjts-report/1";
pub const RNG_NAME: &str =
    "ChaCha20 (rand_chacha 0.9); seed_from_u64(seed), stream FNV-1a-64(\"kind/suite\"), per-point child seeds";
pub const DEFAULT_KINDS: [&str; 7] = ["I:1,1", "I:2,2", "I:1,3", "II:4", "III:3", "IV:4", "prod(I:1,1;IV:3)"];

/// Exit codes of a verification run.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Jordan,
    Spectral,
    Duality,
    Equivariance,
    Hereditary,
    Symplectic,
    Volume,
    LemmaA1,
    LemmaA2,
    BetaExact,
    /// Pull-back of `∂̄ m₁(z, z)` through `Ψ`; fd-on-fd, not in the default set.
    PullbackP1,
    /// `ω_Berg = g·ω_B` on each simple factor; not in the default set.
    BergmanMetric,
}

impl Suite {
    pub const DEFAULT: [Suite; 10] = [
        Suite::Jordan,
        Suite::Spectral,
        Suite::Duality,
        Suite::Equivariance,
        Suite::Hereditary,
        Suite::Symplectic,
        Suite::Volume,
        Suite::LemmaA1,
        Suite::LemmaA2,
        Suite::BetaExact,
    ];

    pub const ALL: [Suite; 12] = [
        Suite::Jordan,
        Suite::Spectral,
        Suite::Duality,
        Suite::Equivariance,
        Suite::Hereditary,
        Suite::Symplectic,
        Suite::Volume,
        Suite::LemmaA1,
        Suite::LemmaA2,
        Suite::BetaExact,
        Suite::PullbackP1,
        Suite::BergmanMetric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Jordan => "jordan",
            Suite::Spectral => "spectral",
            Suite::Duality => "duality",
            Suite::Equivariance => "equivariance",
            Suite::Hereditary => "hereditary",
            Suite::Symplectic => "symplectic",
            Suite::Volume => "volume",
            Suite::LemmaA1 => "lemma_a1",
            Suite::LemmaA2 => "lemma_a2",
            Suite::BetaExact => "beta_exact",
            Suite::PullbackP1 => "pullback_p1",
            Suite::BergmanMetric => "bergman_metric",
        }
    }

    /// Tolerance for this suite derived from the configured base tolerances.
    pub fn tolerance(self, cfg: &SuiteConfig) -> f64 {
        match self {
            Suite::Jordan => cfg.tol_exact / 10.0,
            Suite::Spectral => cfg.tol_exact * 10.0,
            Suite::Duality | Suite::Equivariance | Suite::Hereditary => cfg.tol_exact,
            Suite::Symplectic | Suite::LemmaA1 | Suite::LemmaA2 | Suite::BetaExact => cfg.tol_fd,
            Suite::Volume | Suite::PullbackP1 | Suite::BergmanMetric => cfg.tol_fd * 10.0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HjtsError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| HjtsError::Parse(format!("unknown suite {s:?}")))
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Suite {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a comma-separated suite list; an empty string gives no suites.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(str::parse).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub kinds: Vec<JtsKind>,
    pub seed: u64,
    pub points: usize,
    pub tangent_pairs: usize,
    pub tol_exact: f64,
    pub tol_fd: f64,
    pub fd_step: f64,
    /// Base step of the second-difference stencil for Kähler Hessians.
    pub hessian_step: f64,
    pub boundary_cap: f64,
    pub suites: Vec<Suite>,
    /// Worker cap; `None` reads `HJTS_THREADS`, `Some(0)` runs sequentially.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            kinds: DEFAULT_KINDS.iter().map(|k| k.parse().expect("default kind")).collect(),
            seed: 0,
            points: 100,
            tangent_pairs: 8,
            tol_exact: 1e-9,
            tol_fd: 1e-5,
            fd_step: 1e-5,
            hessian_step: FdSteps::default().second,
            boundary_cap: 0.95,
            suites: Suite::DEFAULT.to_vec(),
            threads: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HjtsError::contract(m.to_string()));
        if self.points == 0 {
            return bad("points must be at least 1");
        }
        if !(self.boundary_cap > 0.0 && self.boundary_cap < 1.0) {
            return bad("boundary_cap must lie in (0, 1)");
        }
        for t in [self.tol_exact, self.tol_fd] {
            if !(t > 0.0 && t.is_finite()) {
                return bad("tolerances must be positive");
            }
        }
        for h in [self.fd_step, self.hessian_step] {
            if !(1e-12..=0.1).contains(&h) {
                return bad("finite-difference steps must lie in [1e-12, 0.1]");
            }
        }
        if self.suites.iter().any(|s| matches!(s, Suite::Symplectic)) && self.tangent_pairs == 0 {
            return bad("symplectic suite needs at least one tangent pair");
        }
        Ok(())
    }

    fn steps(&self) -> FdSteps {
        FdSteps { first: self.fd_step, second: self.hessian_step }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub kind: String,
    pub suite: Suite,
    pub samples: usize,
    /// `None` when a residual was not finite.
    pub max_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

/// A check that raised an error, with the point that triggered it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunError {
    pub kind: String,
    pub suite: Suite,
    pub message: String,
    #[serde(with = "crate::jts::complex_pairs")]
    pub point: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub rng: String,
    pub seed: u64,
    pub config: SuiteConfig,
    pub results: Vec<SuiteResult>,
    pub pass: bool,
    pub error: Option<RunError>,
    pub wall_time_s: f64,
}

impl VerificationReport {
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            EXIT_INTERNAL
        } else if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn result(&self, kind: &str, suite: Suite) -> Option<&SuiteResult> {
        self.results.iter().find(|r| r.kind == kind && r.suite == suite)
    }
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// The generator for one `(kind, suite)` pair.
pub fn suite_rng(seed: u64, kind: &JtsKind, suite: Suite) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(&format!("{kind}/{suite}")));
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

fn gaussian_element<R: Rng + ?Sized>(kind: &JtsKind, rng: &mut R) -> Element {
    let coords = (0..kind.ambient_dim()).map(|_| complex_gaussian(rng)).collect();
    Element::new(kind, coords).expect("finite Gaussian coordinates")
}

/// Gaussian direction rescaled so that its largest spectral value is a
/// uniform draw from `(0, radius)`. A zero draw is redrawn.
fn sample_scaled<R: Rng + ?Sized>(kind: &JtsKind, rng: &mut R, radius: f64) -> Result<Element> {
    loop {
        let z = gaussian_element(kind, rng);
        let l1 = spectral_radius(&z)?;
        if l1 > 0.0 {
            let r = rng.random_range(0.0..radius);
            return Ok(z.scale_real(r / l1));
        }
    }
}

/// Interior sample with `λ₁ < boundary_cap`.
pub fn sample_domain<R: Rng + ?Sized>(kind: &JtsKind, rng: &mut R, boundary_cap: f64) -> Result<Element> {
    if !(boundary_cap > 0.0 && boundary_cap < 1.0) {
        return Err(HjtsError::contract("boundary_cap must lie in (0, 1)"));
    }
    sample_scaled(kind, rng, boundary_cap)
}

/// Ambient sample with `λ₁` uniform in `(0, 10)`, for the inverse map.
pub fn sample_ambient<R: Rng + ?Sized>(kind: &JtsKind, rng: &mut R) -> Result<Element> {
    sample_scaled(kind, rng, 10.0)
}

/// Unit tangent vector with complex Gaussian direction.
pub fn random_direction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let n = vec_norm(&v);
        if n > 0.0 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

/// The kind each simple factor is embedded into by the hereditary suite:
/// `I(p,q) ↪ I(p+1,q+1)`, `II(n), III(n) ↪ I(n,n)`, `IV(n) ↪ IV(n+1)`.
pub fn hereditary_target(kind: &JtsKind) -> JtsKind {
    match kind {
        JtsKind::TypeI { p, q } => JtsKind::TypeI { p: p + 1, q: q + 1 },
        JtsKind::TypeII { n } | JtsKind::TypeIII { n } => JtsKind::TypeI { p: *n, q: *n },
        JtsKind::TypeIV { n } => JtsKind::TypeIV { n: n + 1 },
        JtsKind::Product(fs) => JtsKind::Product(fs.iter().map(hereditary_target).collect()),
    }
}

/// Residuals of the algebraic checks at one interior point: spectral
/// reconstruction, tripotent and orthogonality defects, `det B = 𝒩^g` and
/// `tr D(z, z) = g·m₁(z, z)` per simple factor.
pub fn spectral_residual(z: &Element) -> Result<f64> {
    let s = spectral_decompose(z)?;
    let mut worst = s.reconstruct().distance(z);
    for (i, c) in s.frame.iter().enumerate() {
        let ccc = triple_product(c, c, c)?;
        worst = worst.max(ccc.distance(&c.scale_real(2.0)));
        for d in &s.frame[i + 1..] {
            worst = worst.max(d_operator(c, d)?.matrix().max_abs());
        }
    }
    let gens = genus(z.kind())?;
    for ((part, g), (n, _)) in z.split().iter().zip(gens).zip(factor_norms(z)?) {
        let db = det(bergman_operator(part, part)?.matrix())?;
        let expect = n.powi(g as i32);
        worst = worst.max((db - expect).norm() / expect.abs().max(f64::MIN_POSITIVE));
        let tr = d_operator(part, part)?.trace();
        let m1 = part.m1(part);
        worst = worst.max((tr - m1 * g as f64).norm() / m1.norm().max(1.0));
    }
    Ok(worst)
}

/// Round-trip and route-agreement residuals for `z` in the domain and `u`
/// anywhere, relative to `max(1, ‖·‖)`.
pub fn duality_residual(z: &Element, u: &Element) -> Result<f64> {
    let forward = DualityRoute::ALL.iter().map(|&r| psi(z, r)).collect::<Result<Vec<_>>>()?;
    let backward = DualityRoute::ALL.iter().map(|&r| psi_inverse(u, r)).collect::<Result<Vec<_>>>()?;
    let sz = z.norm().max(1.0);
    let su = u.norm().max(1.0);
    let route = DualityRoute::default();
    let round_z = psi_inverse(&forward[1], route)?.distance(z) / sz;
    let round_u = psi(&backward[1], route)?.distance(u) / su;
    let spread_f = route_spread(&forward) / forward[1].norm().max(1.0);
    let spread_b = route_spread(&backward) / su;
    Ok(round_z.max(round_u).max(spread_f).max(spread_b))
}

fn jordan_residual(x: &Element, y: &Element, u: &Element, v: &Element, w: &Element) -> Result<f64> {
    let t = triple_product;
    let lhs = &t(x, y, &t(u, v, w)?)? - &t(u, v, &t(x, y, w)?)?;
    let rhs = &t(&t(x, y, u)?, v, w)? - &t(u, &t(v, x, y)?, w)?;
    Ok(lhs.distance(&rhs))
}

/// Runs one suite at one sample point. Returns the sampled point (for error
/// reporting) together with the residual or error.
fn run_point(cfg: &SuiteConfig, kind: &JtsKind, suite: Suite, child_seed: u64) -> (Element, Result<f64>) {
    let mut rng = ChaCha20Rng::seed_from_u64(child_seed);
    let z = match sample_domain(kind, &mut rng, cfg.boundary_cap) {
        Ok(z) => z,
        Err(e) => return (Element::zero(kind), Err(e)),
    };
    let value = eval_suite(cfg, kind, suite, &z, &mut rng);
    (z, value)
}

fn eval_suite(cfg: &SuiteConfig, kind: &JtsKind, suite: Suite, z: &Element, rng: &mut ChaCha20Rng) -> Result<f64> {
    let scale = z.norm().max(1.0);
    let dim = kind.ambient_dim();
    match suite {
        Suite::Jordan => {
            let others = (0..4).map(|_| sample_domain(kind, rng, cfg.boundary_cap)).collect::<Result<Vec<_>>>()?;
            jordan_residual(z, &others[0], &others[1], &others[2], &others[3])
        }
        Suite::Spectral => spectral_residual(z),
        Suite::Duality => {
            let u = sample_ambient(kind, rng)?;
            let r = duality_residual(z, &u)?;
            crate::duality::psi_checked(z)?;
            crate::duality::psi_inverse_checked(&u)?;
            Ok(r)
        }
        Suite::Equivariance => {
            let params = IsotropyParams::random(kind, rng);
            Ok(check_equivariance(kind, &params, z)? / scale)
        }
        Suite::Hereditary => {
            let (a, b) = check_hereditary(kind, &hereditary_target(kind), z)?;
            Ok(a.max(b) / scale)
        }
        Suite::Symplectic => {
            let pairs: Vec<_> =
                (0..cfg.tangent_pairs).map(|_| (random_direction(dim, rng), random_direction(dim, rng))).collect();
            let (e1, e2) = check_symplectic_duality(z, &pairs, cfg.steps())?;
            Ok(e1.max(e2))
        }
        Suite::Volume => {
            let (a, b) = check_volume_duality(z, cfg.steps())?;
            Ok(a.max(b))
        }
        Suite::LemmaA1 => {
            let w = random_direction(dim, rng);
            let (a, b) = check_lemma_a1(z, &w, cfg.fd_step)?;
            Ok(a.max(b) / scale)
        }
        Suite::LemmaA2 => {
            let w = random_direction(dim, rng);
            let mut worst = 0.0f64;
            for p in 0..=2 {
                for k in 0..=2 {
                    worst = nan_max(worst, check_lemma_a2(z, &w, p, k, cfg.fd_step)?);
                }
            }
            Ok(worst / scale)
        }
        Suite::BetaExact => {
            let w = random_direction(dim, rng);
            let (a, b) = check_beta_exactness(z, &w, cfg.fd_step)?;
            Ok(a.max(b) / scale)
        }
        Suite::PullbackP1 => {
            let w = random_direction(dim, rng);
            Ok(check_pullback_dbar_p1(z, &w, cfg.fd_step)? / scale)
        }
        Suite::BergmanMetric => check_bergman_metric(z, cfg.hessian_step),
    }
}

/// `max` that propagates NaN.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

type PointOutcome = (Element, Result<f64>);

fn evaluate(cfg: &SuiteConfig, kind: &JtsKind, suite: Suite, seeds: &[u64], threads: usize) -> Vec<PointOutcome> {
    let work = |&s: &u64| run_point(cfg, kind, suite, s);
    match threads {
        0 => seeds.iter().map(work).collect(),
        n => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build();
            match pool {
                Ok(pool) => pool.install(|| seeds.par_iter().map(work).collect()),
                Err(_) => seeds.iter().map(work).collect(),
            }
        }
    }
}

fn worker_count(cfg: &SuiteConfig) -> usize {
    cfg.threads
        .or_else(|| std::env::var("HJTS_THREADS").ok().and_then(|v| v.trim().parse().ok()))
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs every selected suite on every kind. Check errors stop the run and
/// are reported with the offending point; earlier results are kept.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let threads = worker_count(cfg);

    let mut jobs: Vec<(String, &JtsKind, Suite)> = Vec::new();
    for kind in &cfg.kinds {
        for &suite in &cfg.suites {
            let key = kind.to_string();
            if !jobs.iter().any(|(k, _, s)| *k == key && *s == suite) {
                jobs.push((key, kind, suite));
            }
        }
    }
    jobs.sort_by(|a, b| (&a.0, a.2).cmp(&(&b.0, b.2)));

    let mut results = Vec::with_capacity(jobs.len());
    let mut error = None;
    for (name, kind, suite) in jobs {
        let mut rng = suite_rng(cfg.seed, kind, suite);
        let seeds: Vec<u64> = (0..cfg.points).map(|_| rng.next_u64()).collect();
        let outcomes = evaluate(cfg, kind, suite, &seeds, threads);

        if let Some((z, Err(e))) = outcomes.iter().find(|(_, r)| r.is_err()) {
            error = Some(RunError { kind: name, suite, message: e.to_string(), point: z.coords().to_vec() });
            break;
        }
        let max_error = outcomes.iter().map(|(_, r)| *r.as_ref().expect("checked above")).fold(0.0, nan_max);
        let tolerance = suite.tolerance(cfg);
        let finite = max_error.is_finite();
        results.push(SuiteResult {
            kind: name,
            suite,
            samples: outcomes.len(),
            max_error: finite.then_some(max_error),
            tolerance,
            pass: finite && max_error <= tolerance,
        });
    }

    let pass = error.is_none() && results.iter().all(|r| r.pass);
    Ok(VerificationReport {
        schema: SCHEMA.to_string(),
        rng: RNG_NAME.to_string(),
        seed: cfg.seed,
        config: cfg.clone(),
        results,
        pass,
        error,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Report JSON with the wall-time field zeroed, for determinism comparisons.
pub fn canonical_json(report: &VerificationReport) -> String {
    let mut r = report.clone();
    r.wall_time_s = 0.0;
    r.to_json()
}
