//! Rank- and angle-preserving transformations of a generator g and the
//! matching rules that move its ambiguity table.
//!
//! | kind            | `h_i`                                   | `a_{k,l}(h)`                                   |
//! |-----------------|-----------------------------------------|------------------------------------------------|
//! | Phase c         | `c g_i`                                 | `a_{k,l}(g)`                                   |
//! | Translation t   | `g_{i+t}`                               | `ω^{-tl} a_{k,l}(g)`                           |
//! | Multiplicative m| `g_{mi}`                                | `a_{mk, m^{-1} l}(g)`                          |
//! | Quadratic       | `g_i ω^{a C(i,2) + b i + c}`            | `a_{k, l-ak}(g) ω^{-bk - a C(k,2)}`            |
//! | QuadraticSub    | `g_i ω^{(a/κ) C(i,2) + b i + c}`, supp g ⊆ κZ_d | `a_{sκ, l-as}(g) ω^{-bsκ - (a/κ) C(sκ,2)}` |
//!
//! Exponents are evaluated on representatives `0 <= i < d` and reduced as
//! real numbers, so half-integer `b` is allowed whenever the exponent is
//! still d-periodic.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;

use crate::arith::{binom, gcd, modd};
use crate::error::{GaborError, Result};
use crate::frame::{AmbiguityTable, UnitVector};
use crate::numerics::{root_of_unity, CVec};
use crate::scalar::Real;

pub use crate::arith::mod_inverse;

const INTEGRALITY_TOL: f64 = 1e-9;
const PHASE_TOL: f64 = 1e-12;
const AUTOMORPHISM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformSpec<T> {
    Phase { c: Complex<T> },
    Translation { t: i64 },
    Multiplicative { m: i64 },
    Quadratic { a: i64, b: T, c: T },
    QuadraticSub { kappa: usize, a: i64, b: T, c: T },
}

fn is_integer<T: Real>(x: T) -> bool {
    (x - x.round()).abs() <= T::lit(INTEGRALITY_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformKind {
    Phase,
    Translation,
    Multiplicative,
    Quadratic,
    QuadraticSub,
}

impl TransformKind {
    pub const ALL: [Self; 5] = [
        Self::Phase,
        Self::Translation,
        Self::Multiplicative,
        Self::Quadratic,
        Self::QuadraticSub,
    ];

    /// Prefix of the text form.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Phase => "phase",
            Self::Translation => "translate",
            Self::Multiplicative => "mult",
            Self::Quadratic => "quad",
            Self::QuadraticSub => "quadsub",
        }
    }
}

impl<T: Real> TransformSpec<T> {
    pub fn kind(&self) -> TransformKind {
        match self {
            Self::Phase { .. } => TransformKind::Phase,
            Self::Translation { .. } => TransformKind::Translation,
            Self::Multiplicative { .. } => TransformKind::Multiplicative,
            Self::Quadratic { .. } => TransformKind::Quadratic,
            Self::QuadraticSub { .. } => TransformKind::QuadraticSub,
        }
    }

    /// Checks the parameter constraints that make the transform well defined
    /// on C^d.
    pub fn validate(&self, d: usize) -> Result<()> {
        if d == 0 {
            return Err(GaborError::EmptyDimension);
        }
        let dd = T::from_usize_exact(d);
        let half = T::lit(0.5);
        match *self {
            Self::Phase { c } => {
                if (c.norm() - T::one()).abs() > T::lit(PHASE_TOL) {
                    return Err(GaborError::InvalidTransform(format!(
                        "phase {c} is not unimodular"
                    )));
                }
            }
            Self::Translation { .. } => {}
            Self::Multiplicative { m } => {
                if gcd(m, d as i64) != 1 {
                    return Err(GaborError::NotInvertible { m, d });
                }
            }
            Self::Quadratic { a, b, c } => {
                if !b.is_finite() || !c.is_finite() {
                    return Err(GaborError::InvalidTransform("non-finite parameter".into()));
                }
                let cond = T::lit(a as f64) * (dd - T::one()) * half + b;
                if !is_integer(cond) {
                    return Err(GaborError::InvalidTransform(format!(
                        "a(d-1)/2 + b = {cond} is not an integer"
                    )));
                }
            }
            Self::QuadraticSub { kappa, a, b, c } => {
                if kappa == 0 || !d.is_multiple_of(kappa) {
                    return Err(GaborError::InvalidTransform(format!(
                        "kappa = {kappa} does not divide d = {d}"
                    )));
                }
                if !b.is_finite() || !c.is_finite() {
                    return Err(GaborError::InvalidTransform("non-finite parameter".into()));
                }
                let kk = T::from_usize_exact(kappa);
                let cond = T::lit(a as f64) * (dd - T::one()) * half / kk + b;
                if !is_integer(cond) {
                    return Err(GaborError::InvalidTransform(format!(
                        "a(d-1)/(2 kappa) + b = {cond} is not an integer"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `ω^{(a C(i,2) mod d) + b i + c}` with the integer part reduced first.
fn quad_phase<T: Real>(d: usize, a: i64, b: T, c: T, i: usize) -> Complex<T> {
    let int_part = modd(
        (a as i128 * binom(i as i64, 2) as i128).rem_euclid(d as i128) as i64,
        d,
    );
    let r = T::from_usize_exact(int_part) + b * T::from_usize_exact(i) + c;
    root_of_unity(d, r)
}

/// `ω^{(a/κ) C(i,2) + b i + c}` for `i ∈ κZ_d`. With `i = sκ`,
/// `(a/κ) C(sκ,2) = a s (sκ - 1) / 2`.
fn quadsub_phase<T: Real>(d: usize, kappa: usize, a: i64, b: T, c: T, i: usize) -> Complex<T> {
    let s = (i / kappa) as i128;
    let twice = (a as i128 * s * (s * kappa as i128 - 1)).rem_euclid(2 * d as i128);
    let r = T::from_usize_exact(twice as usize) * T::lit(0.5) + b * T::from_usize_exact(i) + c;
    root_of_unity(d, r)
}

/// Applies `spec` to g.
pub fn apply<T: Real>(spec: &TransformSpec<T>, g: &UnitVector<T>) -> Result<UnitVector<T>> {
    let d = g.dim();
    spec.validate(d)?;
    let v = g.vec();
    let h = match *spec {
        TransformSpec::Phase { c } => v.scale(c),
        TransformSpec::Translation { t } => CVec::from_fn(d, |i| v.at(i as i64 + t)),
        TransformSpec::Multiplicative { m } => {
            CVec::from_fn(d, |i| v.at((i as i128 * m as i128).rem_euclid(d as i128) as i64))
        }
        TransformSpec::Quadratic { a, b, c } => {
            CVec::from_fn(d, |i| v.as_slice()[i] * quad_phase(d, a, b, c, i))
        }
        TransformSpec::QuadraticSub { kappa, a, b, c } => {
            let zero_tol = T::default_zero_tol();
            if v
                .iter()
                .enumerate()
                .any(|(i, x)| i % kappa != 0 && x.norm() >= zero_tol)
            {
                return Err(GaborError::UnsupportedVector { kappa, d });
            }
            CVec::from_fn(d, |i| {
                if i % kappa == 0 {
                    v.as_slice()[i] * quadsub_phase(d, kappa, a, b, c, i)
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            })
        }
    };
    UnitVector::normalize(h)
}

/// Applies the specs left to right.
pub fn apply_all<T: Real>(specs: &[TransformSpec<T>], g: &UnitVector<T>) -> Result<UnitVector<T>> {
    specs.iter().try_fold(g.clone(), |h, s| apply(s, &h))
}

/// Predicts `a(apply(spec, g))` from `a(g)` alone.
pub fn predict_ambiguity<T: Real>(
    spec: &TransformSpec<T>,
    a_in: &AmbiguityTable<T>,
) -> Result<AmbiguityTable<T>> {
    spec.validate(a_in.dim())?;
    predict_unchecked(spec, a_in)
}

fn predict_unchecked<T: Real>(
    spec: &TransformSpec<T>,
    a_in: &AmbiguityTable<T>,
) -> Result<AmbiguityTable<T>> {
    let d = a_in.dim();
    let di = d as i64;
    let out = match *spec {
        TransformSpec::Phase { .. } => a_in.clone(),
        TransformSpec::Translation { t } => AmbiguityTable::from_fn(d, |k, l| {
            let e = modd(-(t as i128 * l as i128).rem_euclid(di as i128) as i64, d);
            a_in.get(k as i64, l as i64) * root_of_unity(d, T::from_usize_exact(e))
        }),
        TransformSpec::Multiplicative { m } => {
            let minv = mod_inverse(m, d)? as i64;
            let m = modd(m, d) as i64;
            AmbiguityTable::from_fn(d, |k, l| {
                a_in.get((m * k as i64) % di.max(1), (minv * l as i64) % di.max(1))
            })
        }
        TransformSpec::Quadratic { a, b, c: _ } => AmbiguityTable::from_fn(d, |k, l| {
            let ak = (a as i128 * k as i128).rem_euclid(di as i128) as i64;
            let int_part = (a as i128 * binom(k as i64, 2) as i128).rem_euclid(di as i128);
            let r = -(T::from_usize_exact(int_part as usize) + b * T::from_usize_exact(k));
            a_in.get(k as i64, l as i64 - ak) * root_of_unity(d, r)
        }),
        TransformSpec::QuadraticSub { kappa, a, b, c: _ } => AmbiguityTable::from_fn(d, |k, l| {
            if k % kappa != 0 {
                return Complex::new(T::zero(), T::zero());
            }
            let s = (k / kappa) as i128;
            let as_ = (a as i128 * s).rem_euclid(di as i128) as i64;
            let twice = (a as i128 * s * (s * kappa as i128 - 1)).rem_euclid(2 * di as i128);
            let r = -(T::from_usize_exact(twice as usize) * T::lit(0.5)
                + b * T::from_usize_exact(k));
            a_in.get(k as i64, l as i64 - as_) * root_of_unity(d, r)
        }),
    };
    Ok(out)
}

/// True iff `g_{i+δ} = g_i ω^{α C(i,2) + β i + γ}` for every i, to 1e-9.
pub fn check_alltop_automorphism<T: Real>(
    g: &UnitVector<T>,
    alpha: i64,
    beta: i64,
    gamma: i64,
    delta: i64,
) -> bool {
    let d = g.dim();
    let di = d as i128;
    let v = g.vec();
    (0..d).all(|i| {
        let e = (alpha as i128 * binom(i as i64, 2) as i128
            + beta as i128 * i as i128
            + gamma as i128)
            .rem_euclid(di);
        let rhs = v.as_slice()[i] * root_of_unity(d, T::from_usize_exact(e as usize));
        (v.at(i as i64 + delta) - rhs).norm() <= T::lit(AUTOMORPHISM_TOL)
    })
}

/// `(α, β, γ)` with `α = aδ`, `β = a C(δ,2) + bδ`,
/// `γ = a C(δ,3) + b C(δ,2) + cδ` (mod d): the shift-by-δ symmetry of the
/// cubic chirp `ω^{a C(i,3) + b C(i,2) + c i}`.
pub fn solve_alltop_params(d: usize, a: i64, b: i64, c: i64, delta: i64) -> (i64, i64, i64) {
    let dm = d as i128;
    let (a, b, c) = (a as i128, b as i128, c as i128);
    let dl = delta.rem_euclid(d as i64);
    let b2 = binom(dl, 2) as i128;
    let b3 = binom(dl, 3) as i128;
    let dl = dl as i128;
    let alpha = (a * dl).rem_euclid(dm);
    let beta = (a * b2 + b * dl).rem_euclid(dm);
    let gamma = (a * b3 + b * b2 + c * dl).rem_euclid(dm);
    (alpha as i64, beta as i64, gamma as i64)
}

/// Random valid spec of the given kind for g. QuadraticSub picks κ among
/// the divisors of d whose multiples contain the support of g.
pub fn random_spec<R: Rng + ?Sized>(
    kind: TransformKind,
    g: &UnitVector<f64>,
    rng: &mut R,
) -> TransformSpec<f64> {
    let d = g.dim();
    let df = d as f64;
    // fractional offset that makes a(d-1)/(2κ) + b integral
    let b_for = |a: i64, kappa: usize, rng: &mut R| {
        let shift = (a as f64 * (df - 1.0) / (2.0 * kappa as f64)).fract();
        rng.random_range(-3i64..4) as f64 - shift
    };
    match kind {
        TransformKind::Phase => TransformSpec::Phase {
            c: Complex::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)),
        },
        TransformKind::Translation => TransformSpec::Translation {
            t: rng.random_range(-2 * d as i64..2 * d as i64 + 1),
        },
        TransformKind::Multiplicative => loop {
            let m = rng.random_range(-3 * d as i64..3 * d as i64 + 1);
            if gcd(m, d as i64) == 1 {
                break TransformSpec::Multiplicative { m };
            }
        },
        TransformKind::Quadratic => {
            let a = rng.random_range(-(d as i64)..d as i64 + 1);
            TransformSpec::Quadratic {
                a,
                b: b_for(a, 1, rng),
                c: rng.random_range(-df..df),
            }
        }
        TransformKind::QuadraticSub => {
            let support = g.vec().support(f64::default_zero_tol());
            let kappas: Vec<usize> = (1..=d)
                .filter(|k| d.is_multiple_of(*k) && support.iter().all(|i| i % k == 0))
                .collect();
            let kappa = kappas[rng.random_range(0..kappas.len())];
            let a = rng.random_range(-(d as i64)..d as i64 + 1);
            TransformSpec::QuadraticSub {
                kappa,
                a,
                b: b_for(a, kappa, rng),
                c: rng.random_range(-df..df),
            }
        }
    }
}

impl<T: Real> fmt::Display for TransformSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Phase { c } => write!(f, "phase:{},{}", c.re, c.im),
            Self::Translation { t } => write!(f, "translate:{t}"),
            Self::Multiplicative { m } => write!(f, "mult:{m}"),
            Self::Quadratic { a, b, c } => write!(f, "quad:{a},{b},{c}"),
            Self::QuadraticSub { kappa, a, b, c } => write!(f, "quadsub:{kappa},{a},{b},{c}"),
        }
    }
}

fn parse_num<N: FromStr>(s: &str, what: &str) -> Result<N> {
    s.trim()
        .parse()
        .map_err(|_| GaborError::Parse(format!("bad {what}: {s:?}")))
}

fn fields(body: &str, n: usize, kind: &str) -> Result<Vec<String>> {
    let parts: Vec<String> = body.split(',').map(|p| p.trim().to_string()).collect();
    if parts.len() != n {
        return Err(GaborError::Parse(format!(
            "{kind} expects {n} parameters, got {}",
            parts.len()
        )));
    }
    Ok(parts)
}

impl<T: Real> FromStr for TransformSpec<T> {
    type Err = GaborError;

    /// Parses `phase:re,im`, `translate:t`, `mult:m`, `quad:a,b,c` or
    /// `quadsub:kappa,a,b,c`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| GaborError::Parse(format!("missing ':' in transform {s:?}")))?;
        let real = |x: &str, what: &str| -> Result<T> { Ok(T::lit(parse_num::<f64>(x, what)?)) };
        match kind {
            "phase" => {
                let p = fields(body, 2, kind)?;
                Ok(Self::Phase {
                    c: Complex::new(real(&p[0], "re")?, real(&p[1], "im")?),
                })
            }
            "translate" => Ok(Self::Translation {
                t: parse_num(body, "t")?,
            }),
            "mult" => Ok(Self::Multiplicative {
                m: parse_num(body, "m")?,
            }),
            "quad" => {
                let p = fields(body, 3, kind)?;
                Ok(Self::Quadratic {
                    a: parse_num(&p[0], "a")?,
                    b: real(&p[1], "b")?,
                    c: real(&p[2], "c")?,
                })
            }
            "quadsub" => {
                let p = fields(body, 4, kind)?;
                Ok(Self::QuadraticSub {
                    kappa: parse_num(&p[0], "kappa")?,
                    a: parse_num(&p[1], "a")?,
                    b: real(&p[2], "b")?,
                    c: real(&p[3], "c")?,
                })
            }
            other => Err(GaborError::Parse(format!("unknown transform kind {other:?}"))),
        }
    }
}
