//! Randomized falsification harnesses for the rank and angle classification
//! results. Each suite returns a serializable [`VerifyReport`]; trials are
//! independent given `(seed, index)` and run in parallel.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::orbits::{admissible_kappas, angle_orbit_bound, kappa_symmetry_residual, SymmetricSpace};
use super::poly::{
    combinations, density, dft_minors, random_sparse, roots_in_mu_d, vanishing_on,
    CoefficientKind,
};
use crate::arith::{is_prime, mult_order};
use crate::error::{GaborError, Result};
use crate::frame::{
    ambiguity_table, spectrum_closed_form, spectrum_oracle, translate, modulate,
    UnitVector,
};
use crate::generators::{
    alltop, bjorck, comb, constant, random_haar_with, random_on_support_with, spike, two_spike,
};
use crate::numerics::{inner, root_of_unity, CVec, TolerancePolicy};
use crate::transforms::{apply, predict_ambiguity, random_spec, TransformKind};

type C = Complex<f64>;

const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    RankGap,
    Density,
    Mub,
    Dim45,
    SuppLemma,
    OrbitBound,
    TransformInvariance,
    OracleEquivalence,
}

impl Suite {
    pub const ALL: [Self; 8] = [
        Self::RankGap,
        Self::Density,
        Self::Mub,
        Self::Dim45,
        Self::SuppLemma,
        Self::OrbitBound,
        Self::TransformInvariance,
        Self::OracleEquivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::RankGap => "rank-gap",
            Self::Density => "density",
            Self::Mub => "mub",
            Self::Dim45 => "dim45",
            Self::SuppLemma => "supp-lemma",
            Self::OrbitBound => "orbit-bound",
            Self::TransformInvariance => "transform-invariance",
            Self::OracleEquivalence => "oracle-equivalence",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = GaborError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| GaborError::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub label: String,
    pub d: usize,
    pub rank: usize,
    /// `[re, im]` pairs.
    pub vector: Vec<[f64; 2]>,
}

impl Witness {
    pub fn new(label: impl Into<String>, g: &UnitVector<f64>, rank: usize) -> Self {
        Self {
            label: label.into(),
            d: g.dim(),
            rank,
            vector: g.vec().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub d: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Observed ranks per dimension.
    pub rank_histogram: BTreeMap<usize, BTreeMap<usize, usize>>,
    /// Smallest |a_{k,l}| that was counted as nonzero.
    pub min_nonzero_modulus: Option<f64>,
    /// Largest |a_{k,l}| that was counted as zero.
    pub max_zero_modulus: Option<f64>,
    pub metrics: BTreeMap<String, f64>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    fn new(suite: Suite, d: Option<usize>, trials: usize, seed: u64) -> Self {
        Self {
            suite,
            d,
            trials,
            seed,
            passed: true,
            checks: Vec::new(),
            rank_histogram: BTreeMap::new(),
            min_nonzero_modulus: None,
            max_zero_modulus: None,
            metrics: BTreeMap::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    fn absorb(&mut self, stats: Stats) {
        for (d, h) in stats.hist {
            let dst = self.rank_histogram.entry(d).or_default();
            for (r, n) in h {
                *dst.entry(r).or_default() += n;
            }
        }
        self.min_nonzero_modulus = opt_min(self.min_nonzero_modulus, stats.min_nonzero);
        self.max_zero_modulus = opt_max(self.max_zero_modulus, stats.max_zero);
        for (k, v) in stats.max_metrics {
            let e = self.metrics.entry(k).or_insert(v);
            *e = e.max(v);
        }
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(stats.witnesses.into_iter().take(room));
    }

    /// Observed ranks in dimension d.
    pub fn ranks(&self, d: usize) -> Vec<usize> {
        self.rank_histogram
            .get(&d)
            .map(|h| h.keys().copied().collect())
            .unwrap_or_default()
    }
}

fn opt_min(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn opt_max(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Mergeable per-trial accumulator.
#[derive(Debug, Default)]
struct Stats {
    hist: BTreeMap<usize, BTreeMap<usize, usize>>,
    min_nonzero: Option<f64>,
    max_zero: Option<f64>,
    failures: usize,
    witnesses: Vec<Witness>,
    max_metrics: BTreeMap<String, f64>,
}

impl Stats {
    fn record(&mut self, g: &UnitVector<f64>, policy: &TolerancePolicy<f64>) -> usize {
        let t = ambiguity_table(g);
        let r = t.nonzero_count(policy.zero_tol);
        *self.hist.entry(g.dim()).or_default().entry(r).or_default() += 1;
        self.min_nonzero = opt_min(self.min_nonzero, t.min_nonzero_modulus(policy.zero_tol));
        self.max_zero = opt_max(self.max_zero, t.max_zero_modulus(policy.zero_tol));
        r
    }

    fn fail(&mut self, w: Witness) {
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    fn metric(&mut self, key: &str, v: f64) {
        let e = self.max_metrics.entry(key.to_string()).or_insert(v);
        *e = e.max(v);
    }

    fn merge(mut self, other: Self) -> Self {
        for (d, h) in other.hist {
            let dst = self.hist.entry(d).or_default();
            for (r, n) in h {
                *dst.entry(r).or_default() += n;
            }
        }
        self.min_nonzero = opt_min(self.min_nonzero, other.min_nonzero);
        self.max_zero = opt_max(self.max_zero, other.max_zero);
        self.failures += other.failures;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        for (k, v) in other.max_metrics {
            self.metric(&k, v);
        }
        self
    }
}

/// Generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn run_trials<F>(trials: usize, seed: u64, f: F) -> Stats
where
    F: Fn(usize, &mut ChaCha8Rng, &mut Stats) + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let mut s = Stats::default();
            f(i, &mut rng, &mut s);
            s
        })
        .reduce(Stats::default, Stats::merge)
}

/// Entry with phase `ω_{2d}^k` (a multiple of π/d).
fn lattice_phase<R: Rng + ?Sized>(d: usize, rng: &mut R) -> C {
    root_of_unity(2 * d, rng.random_range(0..2 * d) as f64)
}

fn lattice_amplitude<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    [1.0, 1.0, std::f64::consts::SQRT_2, 2.0][rng.random_range(0..4)]
}

/// Vector on `support` with lattice amplitudes and phases, or with equal
/// amplitudes when `equal` is set.
fn lattice_on<R: Rng + ?Sized>(d: usize, support: &[usize], equal: bool, rng: &mut R) -> UnitVector<f64> {
    let mut v = CVec::zeros(d);
    for &i in support {
        let amp = if equal { 1.0 } else { lattice_amplitude(rng) };
        v[i as i64] = lattice_phase(d, rng) * amp;
    }
    UnitVector::normalize(v).expect("nonempty support")
}

fn random_support<R: Rng + ?Sized>(d: usize, size: usize, rng: &mut R) -> Vec<usize> {
    let mut s = sample(rng, d, size).into_vec();
    s.sort_unstable();
    s
}

/// One draw from the mixture of every structured family plus Haar and
/// random sparse vectors, followed by up to three random transforms.
pub fn structured_sample<R: Rng + ?Sized>(d: usize, rng: &mut R) -> (String, UnitVector<f64>) {
    let odd_prime = d > 2 && is_prime(d);
    let family = rng.random_range(0..9);
    let (label, g) = match family {
        0 => ("haar".to_string(), random_haar_with(d, rng).unwrap()),
        1 => {
            let s = random_support(d, rng.random_range(1..=d), rng);
            ("random-support".into(), random_on_support_with(&s, d, rng).unwrap())
        }
        2 => {
            let s = random_support(d, rng.random_range(1..=d), rng);
            let equal = rng.random::<bool>();
            ("lattice".into(), lattice_on(d, &s, equal, rng))
        }
        3 if d >= 2 => {
            let kappa = rng.random_range(1..d);
            let (p, q) = if rng.random::<bool>() {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                (h, h)
            } else {
                let p: f64 = rng.random_range(0.05..0.95);
                (p, (1.0 - p * p).sqrt())
            };
            let phases = if rng.random::<bool>() {
                (lattice_phase(d, rng).arg(), lattice_phase(d, rng).arg())
            } else {
                (rng.random_range(0.0..6.3), rng.random_range(0.0..6.3))
            };
            ("two-spike".into(), two_spike(d, kappa, (p, q), phases).unwrap())
        }
        4 => {
            let divs: Vec<usize> = (1..=d).filter(|r| d.is_multiple_of(*r)).collect();
            let r = divs[rng.random_range(0..divs.len())];
            (format!("comb:{r}"), comb(r, d).unwrap())
        }
        5 if odd_prime => {
            let a = rng.random_range(1..d as i64);
            let (b, c) = (rng.random_range(0..d as i64), rng.random_range(0..d as i64));
            let phi = C::from_polar(1.0, rng.random_range(0.0..6.3));
            (format!("alltop:{a},{b},{c}"), alltop(d, a, b, c, phi).unwrap())
        }
        6 if odd_prime => ("bjorck".into(), bjorck(d).unwrap()),
        7 if d % 2 == 1 && !admissible_kappas(d).is_empty() => {
            let ks = admissible_kappas(d);
            let kappa = ks[rng.random_range(0..ks.len())];
            let (a, b) = (rng.random_range(0..d as i64), rng.random_range(0..d as i64));
            let space = SymmetricSpace::new(a, b, 0, kappa, d).unwrap();
            match space.random_element(rng) {
                Some(g) => (format!("sym:{kappa},{a},{b}"), g),
                None => ("spike".into(), spike(d).unwrap()),
            }
        }
        _ => {
            if rng.random::<bool>() {
                ("spike".into(), spike(d).unwrap())
            } else {
                ("const".into(), constant(d).unwrap())
            }
        }
    };
    let mut g = g;
    let mut label = label;
    for _ in 0..rng.random_range(0..4) {
        let kind = TransformKind::ALL[rng.random_range(0..TransformKind::ALL.len())];
        let spec = random_spec(kind, &g, rng);
        g = apply(&spec, &g).expect("random spec is valid");
        label.push_str(&format!(" | {spec}"));
    }
    (label, g)
}

/// Parameters shared by every suite.
#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    pub policy: TolerancePolicy<f64>,
    /// Vector under test for [`Suite::Mub`]; defaults to the cubic chirp.
    pub generator: Option<UnitVector<f64>>,
}

impl SuiteParams {
    pub fn new(d: usize, trials: usize, seed: u64) -> Self {
        Self {
            d,
            trials,
            seed,
            policy: TolerancePolicy::default(),
            generator: None,
        }
    }
}

pub fn run_suite(suite: Suite, p: &SuiteParams) -> Result<VerifyReport> {
    p.policy.validate()?;
    match suite {
        Suite::RankGap => verify_rank_gap(p.d, p.trials, p.seed, &p.policy),
        Suite::Density => verify_density_bound(p.d, p.trials, p.seed, &p.policy),
        Suite::Mub => {
            let g = match &p.generator {
                Some(g) => g.clone(),
                None => alltop(p.d, 1, 0, 0, C::new(1.0, 0.0))?,
            };
            Ok(verify_mub(&g))
        }
        Suite::Dim45 => Ok(verify_dim45(p.trials, p.seed, &p.policy)),
        Suite::SuppLemma => verify_supp_lemma(p.d, p.trials, p.seed, &p.policy),
        Suite::OrbitBound => verify_orbit_bound(p.d, p.trials, p.seed),
        Suite::TransformInvariance => verify_transform_invariance(p.d, p.trials, p.seed, &p.policy),
        Suite::OracleEquivalence => verify_oracle_equivalence(p.d, p.trials, p.seed, &p.policy),
    }
}

/// No observed rank strictly between d and 2d. For d that is not an odd
/// prime the gap is not expected; the report then only records whether it
/// was crossed.
pub fn verify_rank_gap(
    d: usize,
    trials: usize,
    seed: u64,
    policy: &TolerancePolicy<f64>,
) -> Result<VerifyReport> {
    if d == 0 {
        return Err(GaborError::EmptyDimension);
    }
    let applies = d > 2 && is_prime(d);
    let stats = run_trials(trials, seed, |_, rng, s| {
        let (label, g) = structured_sample(d, rng);
        let r = s.record(&g, policy);
        if r > d && r < 2 * d {
            s.fail(Witness::new(label, &g, r));
        }
    });
    let mut rep = VerifyReport::new(Suite::RankGap, Some(d), trials, seed);
    let in_gap = stats.failures;
    rep.metrics.insert("ranks_in_gap".into(), in_gap as f64);
    rep.absorb(stats);
    if applies {
        rep.check(Check::new(
            "no rank strictly between d and 2d",
            in_gap == 0,
            format!("{in_gap} of {trials} samples in ({d}, {})", 2 * d),
        ));
    } else {
        rep.notes.push(format!(
            "d = {d} is not an odd prime; {in_gap} samples had rank in ({d}, {})",
            2 * d
        ));
    }
    Ok(rep)
}

/// Roots of sparse polynomials among the d-th roots of unity never exceed
/// `δ(f) - 1`; every square minor of the DFT matrix is nonzero.
pub fn verify_density_bound(
    d: usize,
    trials: usize,
    seed: u64,
    policy: &TolerancePolicy<f64>,
) -> Result<VerifyReport> {
    if !is_prime(d) {
        return Err(GaborError::Precondition(format!("d = {d} is not prime")));
    }
    let tol = policy.zero_tol;
    let stats = run_trials(trials, seed, |_, rng, s| {
        let delta = rng.random_range(1..=d);
        let (f, constructed) = match rng.random_range(0..4) {
            0 => (random_sparse(d, delta, CoefficientKind::Gaussian, rng), false),
            1 => (random_sparse(d, delta, CoefficientKind::Signs, rng), false),
            2 => (random_sparse(d, delta, CoefficientKind::RootsOfUnity, rng), false),
            _ => {
                let support = random_support(d, delta, rng);
                let roots = random_support(d, delta - 1, rng);
                (vanishing_on(d, &support, &roots), true)
            }
        };
        let delta = density(&f, tol);
        let roots = roots_in_mu_d(&f, d, tol).len();
        s.metric("max_roots_minus_bound", roots as f64 - (delta as f64 - 1.0));
        if constructed && roots == delta - 1 {
            s.metric("tight_constructions_seen", 1.0);
        }
        if roots + 1 > delta {
            s.failures += 1;
        }
    });
    let mut rep = VerifyReport::new(Suite::Density, Some(d), trials, seed);
    let failures = stats.failures;
    rep.absorb(stats);
    rep.check(Check::new(
        "roots in mu_d at most density - 1",
        failures == 0,
        format!("{failures} of {trials} polynomials exceeded the bound"),
    ));
    if d <= 7 {
        let (count, min_abs) = dft_minors(d);
        rep.metrics.insert("dft_minors".into(), count as f64);
        rep.metrics.insert("dft_min_abs_minor".into(), min_abs);
        rep.check(Check::new(
            "all DFT minors nonzero",
            min_abs >= tol,
            format!("{count} minors, smallest |det| = {min_abs:e}"),
        ));
    } else {
        rep.notes
            .push(format!("exhaustive minor enumeration skipped for d = {d} > 7"));
    }
    Ok(rep)
}

/// `{T^i M^j g}_j` is an orthonormal basis for each i, and those d bases plus
/// the standard basis are mutually unbiased.
pub fn verify_mub(g: &UnitVector<f64>) -> VerifyReport {
    let d = g.dim();
    let target = 1.0 / (d as f64).sqrt();
    let bases: Vec<Vec<CVec<f64>>> = (0..d as i64)
        .map(|i| {
            (0..d as i64)
                .map(|j| translate(&modulate(g.vec(), j), i))
                .collect()
        })
        .collect();
    let mut orth_dev = 0.0f64;
    let mut unbiased_dev = 0.0f64;
    for (bi, basis) in bases.iter().enumerate() {
        for (x, u) in basis.iter().enumerate() {
            for (y, v) in basis.iter().enumerate() {
                let expect = if x == y { 1.0 } else { 0.0 };
                orth_dev = orth_dev.max((inner(u, v).unwrap() - C::new(expect, 0.0)).norm());
            }
            for other in bases.iter().skip(bi + 1) {
                for v in other {
                    unbiased_dev = unbiased_dev.max((inner(u, v).unwrap().norm() - target).abs());
                }
            }
            for z in u.iter() {
                unbiased_dev = unbiased_dev.max((z.norm() - target).abs());
            }
        }
    }
    let mut rep = VerifyReport::new(Suite::Mub, Some(d), 1, 0);
    let orth = orth_dev < 1e-9;
    let unbiased = unbiased_dev < 1e-9;
    rep.metrics.insert("orthonormality_deviation".into(), orth_dev);
    rep.metrics.insert("unbiasedness_deviation".into(), unbiased_dev);
    rep.metrics.insert(
        "bases".into(),
        if orth && unbiased { d as f64 + 1.0 } else { 0.0 },
    );
    rep.check(Check::new(
        "each T^i M^j g family is orthonormal",
        orth,
        format!("max |<u,v> - delta| = {orth_dev:e}"),
    ));
    rep.check(Check::new(
        "cross-basis moduli equal 1/sqrt(d)",
        unbiased,
        format!("max deviation = {unbiased_dev:e}"),
    ));
    rep
}

pub const DIM4_RANKS: [usize; 9] = [4, 6, 8, 11, 12, 13, 14, 15, 16];
pub const DIM5_RANKS: [usize; 5] = [5, 15, 21, 23, 25];

/// Deterministic grid of vectors with at most three nonzero entries.
fn sparse_grid(d: usize) -> Vec<UnitVector<f64>> {
    let mut amps = vec![1.0, std::f64::consts::SQRT_2, 2.0];
    match d {
        // 1 + 3 = 4 balances the even and odd parts, which kills a_{0,2}
        4 => amps.push(3f64.sqrt()),
        5 => amps.push((2.0 * (std::f64::consts::PI / 5.0).cos()).sqrt()),
        _ => {}
    }
    let phases: Vec<C> = (0..2 * d).map(|k| root_of_unity(2 * d, k as f64)).collect();
    let mut out = Vec::new();
    for size in 1..=3 {
        for support in combinations(d, size) {
            let n_amp = amps.len().pow(size as u32 - 1);
            let n_ph = phases.len().pow(size as u32 - 1);
            for ai in 0..n_amp {
                for pi in 0..n_ph {
                    let mut v = CVec::zeros(d);
                    v[support[0] as i64] = C::new(1.0, 0.0);
                    let (mut a, mut q) = (ai, pi);
                    for &i in &support[1..] {
                        v[i as i64] = phases[q % phases.len()] * amps[a % amps.len()];
                        a /= amps.len();
                        q /= phases.len();
                    }
                    out.push(UnitVector::normalize(v).unwrap());
                }
            }
        }
    }
    out
}

/// Ranks of vectors with `||g||_0 <= 3` in d = 4 and d = 5.
pub fn verify_dim45(trials: usize, seed: u64, policy: &TolerancePolicy<f64>) -> VerifyReport {
    let mut rep = VerifyReport::new(Suite::Dim45, None, trials, seed);
    let mut witnesses: BTreeMap<(usize, usize), Witness> = BTreeMap::new();
    for (d, allowed) in [(4usize, &DIM4_RANKS[..]), (5, &DIM5_RANKS[..])] {
        let grid = sparse_grid(d);
        let mut stats = Stats::default();
        for g in &grid {
            let r = stats.record(g, policy);
            witnesses
                .entry((d, r))
                .or_insert_with(|| Witness::new(format!("grid d={d}"), g, r));
            if !allowed.contains(&r) {
                stats.fail(Witness::new("grid", g, r));
            }
        }
        let sampled = run_trials(trials, seed ^ d as u64, |_, rng, s| {
            let size = rng.random_range(1..=3);
            let support = random_support(d, size, rng);
            let g = if rng.random::<bool>() {
                random_on_support_with(&support, d, rng).unwrap()
            } else {
                lattice_on(d, &support, rng.random::<bool>(), rng)
            };
            let r = s.record(&g, policy);
            if !allowed.contains(&r) {
                s.fail(Witness::new("random", &g, r));
            }
        });
        let stats = stats.merge(sampled);
        let observed: Vec<usize> = stats.hist.get(&d).map(|h| h.keys().copied().collect()).unwrap_or_default();
        let failures = stats.failures;
        rep.absorb(stats);
        rep.check(Check::new(
            format!("d={d}: observed ranks lie in {allowed:?}"),
            failures == 0,
            format!("observed {observed:?}"),
        ));
        let missing: Vec<usize> = allowed
            .iter()
            .copied()
            .filter(|r| !witnesses.contains_key(&(d, *r)))
            .collect();
        rep.check(Check::new(
            format!("d={d}: every listed rank realized"),
            missing.is_empty(),
            format!("missing {missing:?}"),
        ));
    }
    rep.witnesses.extend(witnesses.into_values());
    rep
}

/// `||g||_0 > d/2` forces rank d or rank >= 2d.
pub fn verify_supp_lemma(
    d: usize,
    trials: usize,
    seed: u64,
    policy: &TolerancePolicy<f64>,
) -> Result<VerifyReport> {
    if d < 3 || !is_prime(d) {
        return Err(GaborError::Precondition(format!("d = {d} is not an odd prime")));
    }
    let stats = run_trials(trials, seed, |i, rng, s| {
        let (label, g) = match i {
            0 => ("comb:1".to_string(), constant(d).unwrap()),
            1 => ("bjorck".to_string(), bjorck(d).unwrap()),
            _ => {
                let size = rng.random_range(d / 2 + 1..=d);
                let support = random_support(d, size, rng);
                if rng.random::<bool>() {
                    ("random".into(), random_on_support_with(&support, d, rng).unwrap())
                } else {
                    ("lattice".into(), lattice_on(d, &support, rng.random::<bool>(), rng))
                }
            }
        };
        let r = s.record(&g, policy);
        if r != d && r < 2 * d {
            s.fail(Witness::new(label, &g, r));
        }
    });
    let mut rep = VerifyReport::new(Suite::SuppLemma, Some(d), trials, seed);
    let failures = stats.failures;
    rep.absorb(stats);
    rep.check(Check::new(
        "rank is d or at least 2d",
        failures == 0,
        format!("{failures} violations"),
    ));
    Ok(rep)
}

/// For every admissible κ: the orbit formula against direct enumeration,
/// the measured angle count against the bound, κ-symmetry of the moduli and
/// the rank congruence where it is claimed.
pub fn verify_orbit_bound(d: usize, trials: usize, seed: u64) -> Result<VerifyReport> {
    if d.is_multiple_of(2) || d < 3 {
        return Err(GaborError::Precondition(format!("d = {d} must be odd and >= 3")));
    }
    let mut rep = VerifyReport::new(Suite::OrbitBound, Some(d), trials, seed);
    let kappas = admissible_kappas(d);
    if kappas.is_empty() {
        rep.notes.push(format!("no kappa with gcd(kappa^2 - 1, {d}) = 1"));
        return Ok(rep);
    }
    let policy = TolerancePolicy::default();
    let mut mismatches = Vec::new();
    let mut exceed = 0usize;
    let mut sym_dev = 0.0f64;
    let mut congruence_failures = 0usize;
    let params: [(i64, i64); 3] = [(1, 0), (1, 1), (2, 3)];
    for &kappa in &kappas {
        let bound = angle_orbit_bound(d, kappa)?;
        if !bound.formula_matches() {
            mismatches.push(format!("kappa={kappa}: formula {} vs {}", bound.formula, bound.m_max));
        }
        let congruence = is_prime(d) && bound.r == d - 1;
        let order = mult_order(kappa as usize, d);
        let corollary = is_prime(d) && (order == d - 1 || (d % 4 == 3 && order == (d - 1) / 2));
        if corollary && bound.m_max != d + 2 {
            mismatches.push(format!("kappa={kappa}: corollary bound {} != d+2", bound.m_max));
        }
        for (idx, &(a, b)) in params.iter().enumerate() {
            let (a, b) = (a % d as i64, b % d as i64);
            let space = SymmetricSpace::new(a, b, 0, kappa, d)?;
            let stats = run_trials(trials, seed ^ ((kappa as u64) << 8 | idx as u64), |_, rng, s| {
                let Some(g) = space.random_element(rng) else { return };
                let r = s.record(&g, &policy);
                let t = ambiguity_table(&g);
                let m = t.distinct_moduli(policy.angle_cluster_tol, true).len();
                s.metric("max_angle_count_over_bound", m as f64 - bound.m_max as f64);
                s.metric("kappa_symmetry_deviation", kappa_symmetry_residual(&t, kappa, a).unwrap());
                if m > bound.m_max {
                    s.fail(Witness::new(format!("kappa={kappa} a={a} b={b} m={m}"), &g, r));
                }
                if congruence && r % (d - 1) != (d * d) % (d - 1) {
                    s.metric("congruence_failures", 1.0);
                }
            });
            exceed += stats.failures;
            sym_dev = sym_dev.max(stats.max_metrics.get("kappa_symmetry_deviation").copied().unwrap_or(0.0));
            if stats.max_metrics.contains_key("congruence_failures") {
                congruence_failures += 1;
            }
            rep.absorb(stats);
        }
    }
    rep.metrics.insert("kappas".into(), kappas.len() as f64);
    rep.check(Check::new(
        "orbit formula equals direct enumeration",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("{} kappa values", kappas.len())
        } else {
            mismatches.join("; ")
        },
    ));
    rep.check(Check::new(
        "measured angle count within bound",
        exceed == 0,
        format!("{exceed} samples exceeded"),
    ));
    rep.check(Check::new(
        "kappa symmetry of moduli",
        sym_dev < 1e-9,
        format!("max deviation {sym_dev:e}"),
    ));
    rep.check(Check::new(
        "rank congruent to d^2 mod (d-1)",
        congruence_failures == 0,
        format!("{congruence_failures} spaces with a violating sample"),
    ));
    Ok(rep)
}

/// Commuting square, rank invariance and angle-multiset invariance for
/// random (g, transform) pairs.
pub fn verify_transform_invariance(
    d: usize,
    trials: usize,
    seed: u64,
    policy: &TolerancePolicy<f64>,
) -> Result<VerifyReport> {
    if d == 0 {
        return Err(GaborError::EmptyDimension);
    }
    let stats = run_trials(trials, seed, |i, rng, s| {
        let kind = TransformKind::ALL[i % TransformKind::ALL.len()];
        let (label, g) = structured_sample(d, rng);
        let spec = random_spec(kind, &g, rng);
        let h = apply(&spec, &g).unwrap();
        let before = spectrum_closed_form(&g, policy);
        let r = s.record(&h, policy);
        let diff = ambiguity_table(&h)
            .max_abs_diff(&predict_ambiguity(&spec, &ambiguity_table(&g)).unwrap());
        s.metric("max_prediction_error", diff);
        let after = spectrum_closed_form(&h, policy);
        let same_angles = before.angle_values.len() == after.angle_values.len()
            && before
                .angle_values
                .iter()
                .zip(&after.angle_values)
                .all(|(x, y)| (x - y).abs() <= policy.angle_cluster_tol);
        if diff > 1e-9 || r != before.rank || !same_angles {
            s.fail(Witness::new(format!("{label} then {spec}"), &g, before.rank));
        }
    });
    let mut rep = VerifyReport::new(Suite::TransformInvariance, Some(d), trials, seed);
    let failures = stats.failures;
    rep.absorb(stats);
    rep.check(Check::new(
        "predicted tables, ranks and angles agree",
        failures == 0,
        format!("{failures} failing pairs"),
    ));
    Ok(rep)
}

/// Closed-form spectrum against the dense eigensolver.
pub fn verify_oracle_equivalence(
    d: usize,
    trials: usize,
    seed: u64,
    policy: &TolerancePolicy<f64>,
) -> Result<VerifyReport> {
    if d == 0 {
        return Err(GaborError::EmptyDimension);
    }
    spectrum_oracle(&spike::<f64>(d)?)?;
    let stats = run_trials(trials, seed, |i, rng, s| {
        let (label, g) = if i % 2 == 0 {
            ("haar".to_string(), random_haar_with(d, rng).unwrap())
        } else {
            structured_sample(d, rng)
        };
        let closed = spectrum_closed_form(&g, policy);
        let oracle = spectrum_oracle(&g).unwrap();
        let r = s.record(&g, policy);
        let diff = closed
            .sorted_eigenvalues()
            .iter()
            .zip(&oracle.eigenvalues)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        s.metric("max_eigenvalue_difference", diff);
        if diff > 1e-7 || oracle.rank != r {
            s.fail(Witness::new(label, &g, r));
        }
    });
    let mut rep = VerifyReport::new(Suite::OracleEquivalence, Some(d), trials, seed);
    let failures = stats.failures;
    rep.absorb(stats);
    rep.check(Check::new(
        "closed form matches dense eigensolver",
        failures == 0,
        format!("{failures} mismatches"),
    ));
    Ok(rep)
}
