//! Constructors for the vector families whose spectra are known in closed
//! form, plus seeded random draws.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::arith::{binom, is_prime, legendre};
use crate::error::{GaborError, Result};
use crate::frame::{rank, UnitVector};
use crate::numerics::{root_of_unity, CVec, TolerancePolicy};
use crate::scalar::Real;

/// Draws allowed to [`support_full_rank`] before it gives up.
pub const FULL_RANK_RETRIES: usize = 64;

fn cz<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re), T::lit(im))
}

/// `e_0`.
pub fn spike<T: Real>(d: usize) -> Result<UnitVector<T>> {
    if d == 0 {
        return Err(GaborError::EmptyDimension);
    }
    UnitVector::new(CVec::basis(d, 0))
}

/// `(1, ..., 1)/√d`.
pub fn constant<T: Real>(d: usize) -> Result<UnitVector<T>> {
    comb(1, d)
}

/// Indicator of `rZ_d`, normalized: entries `1/√(d/r)` at multiples of r.
pub fn comb<T: Real>(r: usize, d: usize) -> Result<UnitVector<T>> {
    if d == 0 {
        return Err(GaborError::EmptyDimension);
    }
    if r == 0 || !d.is_multiple_of(r) {
        return Err(GaborError::InvalidGenerator(format!(
            "comb step {r} does not divide {d}"
        )));
    }
    let amp = T::one() / T::from_usize_exact(d / r).sqrt();
    UnitVector::normalize(CVec::from_fn(d, |i| {
        if i % r == 0 {
            Complex::new(amp, T::zero())
        } else {
            cz()
        }
    }))
}

/// Cubic chirp `g_i = φ/√d · ω^{a C(i,3) + b C(i,2) + c i}` for an odd prime d.
pub fn alltop<T: Real>(d: usize, a: i64, b: i64, c: i64, phi: Complex<T>) -> Result<UnitVector<T>> {
    if d.is_multiple_of(2) || !is_prime(d) {
        return Err(GaborError::InvalidGenerator(format!(
            "alltop needs an odd prime dimension, got {d}"
        )));
    }
    if a.rem_euclid(d as i64) == 0 {
        return Err(GaborError::InvalidGenerator(format!(
            "alltop needs a in [1, d), got {a}"
        )));
    }
    if (phi.norm() - T::one()).abs() > T::lit(1e-12) {
        return Err(GaborError::InvalidGenerator("alltop phase must be unimodular".into()));
    }
    let dm = d as i128;
    let amp = T::one() / T::from_usize_exact(d).sqrt();
    UnitVector::normalize(CVec::from_fn(d, |i| {
        let i = i as i64;
        let e = (a as i128 * binom(i, 3) as i128
            + b as i128 * binom(i, 2) as i128
            + c as i128 * i as i128)
            .rem_euclid(dm);
        phi * root_of_unity(d, T::from_usize_exact(e as usize)) * amp
    }))
}

/// Björck CAZAC sequence for an odd prime d.
///
/// For `d ≡ 1 mod 4`, `g_k = e^{iθχ(k)}/√d` with `θ = arccos(1/(1+√d))`;
/// for `d ≡ 3 mod 4`, `g_k = e^{iφ}/√d` on the non-residues and `1/√d`
/// elsewhere, `φ = arccos((1-d)/(1+d))`. χ is the Legendre symbol with
/// `χ(0) = 0`.
pub fn bjorck<T: Real>(d: usize) -> Result<UnitVector<T>> {
    if d.is_multiple_of(2) || !is_prime(d) {
        return Err(GaborError::InvalidGenerator(format!(
            "bjorck needs an odd prime dimension, got {d}"
        )));
    }
    let dd = T::from_usize_exact(d);
    let amp = T::one() / dd.sqrt();
    let v = if d % 4 == 1 {
        let theta = (T::one() / (T::one() + dd.sqrt())).acos();
        CVec::from_fn(d, |k| {
            let chi = T::lit(f64::from(legendre(k as i64, d)));
            Complex::from_polar(amp, theta * chi)
        })
    } else {
        let phi = ((T::one() - dd) / (T::one() + dd)).acos();
        CVec::from_fn(d, |k| {
            if legendre(k as i64, d) == -1 {
                Complex::from_polar(amp, phi)
            } else {
                Complex::new(amp, T::zero())
            }
        })
    };
    UnitVector::normalize(v)
}

/// `amps.0 e^{iθ_0} e_0 + amps.1 e^{iθ_1} e_κ`.
pub fn two_spike<T: Real>(
    d: usize,
    kappa: usize,
    amps: (T, T),
    phases: (T, T),
) -> Result<UnitVector<T>> {
    if d < 2 {
        return Err(GaborError::InvalidGenerator("two_spike needs d >= 2".into()));
    }
    if kappa == 0 || kappa >= d {
        return Err(GaborError::InvalidGenerator(format!(
            "two_spike offset {kappa} must lie in [1, d)"
        )));
    }
    if !(amps.0 > T::zero() && amps.1 > T::zero()) {
        return Err(GaborError::InvalidGenerator("amplitudes must be positive".into()));
    }
    if (amps.0 * amps.0 + amps.1 * amps.1 - T::one()).abs() > T::lit(1e-9) {
        return Err(GaborError::InvalidGenerator(
            "squared amplitudes must sum to 1".into(),
        ));
    }
    let mut v = CVec::zeros(d);
    v[0] = Complex::from_polar(amps.0, phases.0);
    v[kappa as i64] = Complex::from_polar(amps.1, phases.1);
    UnitVector::normalize(v)
}

/// Haar-random unit vector from an existing generator.
pub fn random_haar_with<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<UnitVector<T>> {
    if d == 0 {
        return Err(GaborError::EmptyDimension);
    }
    loop {
        let v = CVec::from_fn(d, |_| gaussian(rng));
        if v.norm() > T::zero() {
            return UnitVector::normalize(v);
        }
    }
}

pub fn random_haar<T: Real>(d: usize, seed: u64) -> Result<UnitVector<T>> {
    random_haar_with(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn check_support(support: &[usize], d: usize) -> Result<()> {
    if d == 0 {
        return Err(GaborError::EmptyDimension);
    }
    if support.is_empty() {
        return Err(GaborError::InvalidGenerator("empty support".into()));
    }
    let mut seen = vec![false; d];
    for &i in support {
        if i >= d || seen[i] {
            return Err(GaborError::InvalidGenerator(format!(
                "support index {i} is out of range or repeated"
            )));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Complex Gaussian entries on `support`, zero elsewhere, normalized.
pub fn random_on_support_with<T: Real, R: Rng + ?Sized>(
    support: &[usize],
    d: usize,
    rng: &mut R,
) -> Result<UnitVector<T>> {
    check_support(support, d)?;
    loop {
        let mut v = CVec::zeros(d);
        for &i in support {
            v[i as i64] = gaussian(rng);
        }
        if support.iter().all(|&i| v.as_slice()[i].norm() > T::zero()) {
            return UnitVector::normalize(v);
        }
    }
}

pub fn random_on_support<T: Real>(support: &[usize], d: usize, seed: u64) -> Result<UnitVector<T>> {
    random_on_support_with(support, d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A full-rank unit vector with support exactly `support`, which must hold
/// more than d/2 indices. Redraws at most [`FULL_RANK_RETRIES`] times.
pub fn support_full_rank<T: Real>(support: &[usize], d: usize, seed: u64) -> Result<UnitVector<T>> {
    check_support(support, d)?;
    if 2 * support.len() <= d {
        return Err(GaborError::Precondition(format!(
            "support size {} is not greater than d/2 = {}",
            support.len(),
            d as f64 / 2.0
        )));
    }
    let policy = TolerancePolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..FULL_RANK_RETRIES {
        let g = random_on_support_with(support, d, &mut rng)?;
        if rank(&g, &policy) == d * d {
            return Ok(g);
        }
    }
    Err(GaborError::RetryBudgetExhausted {
        attempts: FULL_RANK_RETRIES,
    })
}

/// A named generator family with its parameters; the dimension is supplied
/// separately at [`GeneratorSpec::build`] time.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Spike,
    Constant,
    Comb { r: usize },
    /// Amplitude of `e_0` is `amp`, of `e_κ` is `√(1 - amp^2)`.
    TwoSpike { kappa: usize, amp: f64, theta0: f64, theta1: f64 },
    Alltop { a: i64, b: i64, c: i64 },
    Bjorck,
    SupportFullRank { support: Vec<usize>, seed: u64 },
    RandomHaar { seed: u64 },
    RandomOnSupport { support: Vec<usize>, seed: u64 },
}

impl GeneratorSpec {
    pub fn build<T: Real>(&self, d: usize) -> Result<UnitVector<T>> {
        match self {
            Self::Spike => spike(d),
            Self::Constant => constant(d),
            Self::Comb { r } => comb(*r, d),
            Self::TwoSpike {
                kappa,
                amp,
                theta0,
                theta1,
            } => {
                let a0 = T::lit(*amp);
                let a1 = (T::one() - a0 * a0).max(T::zero()).sqrt();
                two_spike(d, *kappa, (a0, a1), (T::lit(*theta0), T::lit(*theta1)))
            }
            Self::Alltop { a, b, c } => alltop(d, *a, *b, *c, Complex::new(T::one(), T::zero())),
            Self::Bjorck => bjorck(d),
            Self::SupportFullRank { support, seed } => support_full_rank(support, d, *seed),
            Self::RandomHaar { seed } => random_haar(d, *seed),
            Self::RandomOnSupport { support, seed } => random_on_support(support, d, *seed),
        }
    }
}

fn join(support: &[usize]) -> String {
    support
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Spike => write!(f, "spike"),
            Self::Constant => write!(f, "const"),
            Self::Comb { r } => write!(f, "comb:{r}"),
            Self::TwoSpike {
                kappa,
                amp,
                theta0,
                theta1,
            } => write!(f, "twospike:{kappa},{amp},{theta0},{theta1}"),
            Self::Alltop { a, b, c } => write!(f, "alltop:{a},{b},{c}"),
            Self::Bjorck => write!(f, "bjorck"),
            Self::SupportFullRank { support, seed } => write!(f, "support:{}:{seed}", join(support)),
            Self::RandomHaar { seed } => write!(f, "haar:{seed}"),
            Self::RandomOnSupport { support, seed } => {
                write!(f, "randsupport:{}:{seed}", join(support))
            }
        }
    }
}

fn num<N: FromStr>(s: &str, what: &str) -> Result<N> {
    s.trim()
        .parse()
        .map_err(|_| GaborError::Parse(format!("bad {what}: {s:?}")))
}

fn list<N: FromStr>(s: &str, n: usize, what: &str) -> Result<Vec<N>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(GaborError::Parse(format!(
            "{what} expects {n} parameters, got {}",
            parts.len()
        )));
    }
    parts.into_iter().map(|p| num(p, what)).collect()
}

fn support_and_seed(body: &str, what: &str) -> Result<(Vec<usize>, u64)> {
    let (s, seed) = body
        .rsplit_once(':')
        .ok_or_else(|| GaborError::Parse(format!("{what} expects SUPPORT:SEED")))?;
    let support = s
        .split(',')
        .map(|x| num(x, "support index"))
        .collect::<Result<Vec<usize>>>()?;
    Ok((support, num(seed, "seed")?))
}

impl FromStr for GeneratorSpec {
    type Err = GaborError;

    /// Parses `spike`, `const`, `comb:r`, `twospike:kappa,amp,theta0,theta1`,
    /// `alltop:a,b,c`, `bjorck`, `support:0,1,2:seed`, `haar:seed` or
    /// `randsupport:0,1:seed`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        let no_args = |spec: Self| {
            if body.is_empty() {
                Ok(spec)
            } else {
                Err(GaborError::Parse(format!("{kind} takes no parameters")))
            }
        };
        match kind {
            "spike" => no_args(Self::Spike),
            "const" => no_args(Self::Constant),
            "bjorck" => no_args(Self::Bjorck),
            "comb" => Ok(Self::Comb { r: num(body, "r")? }),
            "twospike" => {
                let p: Vec<f64> = list(body, 4, kind)?;
                if p[0].fract() != 0.0 || p[0] < 1.0 {
                    return Err(GaborError::Parse(format!("bad kappa: {}", p[0])));
                }
                Ok(Self::TwoSpike {
                    kappa: p[0] as usize,
                    amp: p[1],
                    theta0: p[2],
                    theta1: p[3],
                })
            }
            "alltop" => {
                let p: Vec<i64> = list(body, 3, kind)?;
                Ok(Self::Alltop {
                    a: p[0],
                    b: p[1],
                    c: p[2],
                })
            }
            "support" => {
                let (support, seed) = support_and_seed(body, kind)?;
                Ok(Self::SupportFullRank { support, seed })
            }
            "randsupport" => {
                let (support, seed) = support_and_seed(body, kind)?;
                Ok(Self::RandomOnSupport { support, seed })
            }
            "haar" => Ok(Self::RandomHaar {
                seed: num(body, "seed")?,
            }),
            other => Err(GaborError::Parse(format!("unknown generator {other:?}"))),
        }
    }
}
