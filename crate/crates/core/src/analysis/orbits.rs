//! Multiplicative symmetries `g_{κi} = ω^{a C(i,2) + b i + c} g_i` and the
//! orbit counts that bound how many distinct angles such a g can produce.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::arith::{binom, divisors, euler_phi, gcd, mod_inverse, modd};
use crate::error::{GaborError, Result};
use crate::frame::{AmbiguityTable, UnitVector};
use crate::numerics::{root_of_unity, CVec};

type C = Complex<f64>;

const RELATION_TOL: f64 = 1e-9;

/// Partition of `Z_d` into `⟨κ⟩`-orbits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitDecomposition {
    pub d: usize,
    pub kappa: usize,
    /// Each orbit listed as `i_r, κ i_r, κ^2 i_r, ...`.
    pub orbits: Vec<Vec<usize>>,
    /// The smallest element of each orbit.
    pub base_points: Vec<usize>,
}

fn check_unit(kappa: i64, d: usize) -> Result<usize> {
    if d == 0 {
        return Err(GaborError::EmptyDimension);
    }
    if gcd(kappa, d as i64) != 1 {
        return Err(GaborError::NotInvertible { m: kappa, d });
    }
    Ok(modd(kappa, d))
}

pub fn kappa_orbits(d: usize, kappa: i64) -> Result<OrbitDecomposition> {
    let k = check_unit(kappa, d)?;
    let mut seen = vec![false; d];
    let mut orbits = Vec::new();
    let mut base_points = Vec::new();
    for start in 0..d {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            orbit.push(i);
            i = i * k % d;
        }
        base_points.push(start);
        orbits.push(orbit);
    }
    Ok(OrbitDecomposition {
        d,
        kappa: k,
        orbits,
        base_points,
    })
}

/// `a C(i,2) + b i + c mod d` on the representative `0 <= i < d`.
fn relation_exponent(d: usize, a: i64, b: i64, c: i64, i: usize) -> usize {
    let e = a as i128 * binom(i as i64, 2) as i128 + b as i128 * i as i128 + c as i128;
    e.rem_euclid(d as i128) as usize
}

/// True iff `Σ_{j∈Q} a C(j,2) + b j + c ≡ 0 mod d`.
pub fn orientable(orbit: &[usize], a: i64, b: i64, c: i64, d: usize) -> bool {
    orbit
        .iter()
        .map(|&j| relation_exponent(d, a, b, c, j))
        .sum::<usize>()
        % d
        == 0
}

/// The space `𝒱(a,b,c,κ)` of vectors with `g_{κi} = ω^{a C(i,2)+bi+c} g_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSpace {
    pub d: usize,
    pub kappa: usize,
    pub params: (i64, i64, i64),
    pub decomposition: OrbitDecomposition,
    /// Indices into `decomposition.orbits` of the orientable orbits.
    pub orientable_orbits: Vec<usize>,
    /// One basis vector per orientable orbit, equal to 1 at its base point.
    pub basis: Vec<CVec<f64>>,
}

impl SymmetricSpace {
    pub fn new(a: i64, b: i64, c: i64, kappa: i64, d: usize) -> Result<Self> {
        let decomposition = kappa_orbits(d, kappa)?;
        let mut orientable_orbits = Vec::new();
        let mut basis = Vec::new();
        for (r, orbit) in decomposition.orbits.iter().enumerate() {
            if !orientable(orbit, a, b, c, d) {
                continue;
            }
            let mut v = CVec::zeros(d);
            let mut exponent = 0usize;
            for &i in orbit {
                v[i as i64] = root_of_unity(d, exponent as f64);
                exponent = (exponent + relation_exponent(d, a, b, c, i)) % d;
            }
            orientable_orbits.push(r);
            basis.push(v);
        }
        let space = Self {
            d,
            kappa: decomposition.kappa,
            params: (a, b, c),
            decomposition,
            orientable_orbits,
            basis,
        };
        for v in &space.basis {
            let dev = space.relation_residual(v);
            if dev > RELATION_TOL {
                return Err(GaborError::Precondition(format!(
                    "basis vector violates the symmetry relation by {dev:e}"
                )));
            }
        }
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `max_i |g_{κi} - ω^{a C(i,2)+bi+c} g_i|`.
    pub fn relation_residual(&self, g: &CVec<f64>) -> f64 {
        let (a, b, c) = self.params;
        (0..self.d)
            .map(|i| {
                let w = root_of_unity(self.d, relation_exponent(self.d, a, b, c, i) as f64);
                (g.at((i * self.kappa) as i64) - w * g.as_slice()[i]).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Random unit vector in the space (Gaussian coefficients on the basis),
    /// or `None` when the space is trivial.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<UnitVector<f64>> {
        if self.basis.is_empty() {
            return None;
        }
        loop {
            let mut v = CVec::zeros(self.d);
            for b in &self.basis {
                let z = C::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
                for i in 0..self.d {
                    v[i as i64] += z * b.as_slice()[i];
                }
            }
            if let Ok(g) = UnitVector::normalize(v) {
                return Some(g);
            }
        }
    }
}

/// Number of orientable `⟨κ⟩`-orbits, i.e. `dim 𝒱(a,b,c,κ)`.
pub fn dim_v(a: i64, b: i64, c: i64, kappa: i64, d: usize) -> Result<usize> {
    Ok(SymmetricSpace::new(a, b, c, kappa, d)?.dim())
}

/// Largest violation of `|a_{i,l}| = |a_{κ^{-1}i, κl - κ^{-1}a i}|`.
pub fn kappa_symmetry_residual(table: &AmbiguityTable<f64>, kappa: i64, a: i64) -> Result<f64> {
    let d = table.dim();
    let kinv = mod_inverse(kappa, d)? as i64;
    let k = modd(kappa, d) as i64;
    let mut worst = 0.0f64;
    for i in 0..d as i64 {
        for l in 0..d as i64 {
            let i2 = kinv * i;
            let l2 = k * l - kinv * a % d as i64 * i;
            worst = worst.max((table.modulus(i, l) - table.modulus(i2, l2)).abs());
        }
    }
    Ok(worst)
}

/// Shear `(i, l) ↦ (i, l - a (κ^2-1)^{-1} i)` under which the κ-symmetry
/// becomes the linear action `(i, l) ↦ (κ^{-1} i, κ l)`.
pub fn shear(d: usize, kappa: i64, a: i64, i: usize, l: usize) -> Result<(usize, usize)> {
    let k = modd(kappa, d) as i64;
    let s = mod_inverse(k * k - 1, d)? as i128;
    let shift = (a as i128 * s % d as i128 * i as i128).rem_euclid(d as i128) as i64;
    Ok((i, modd(l as i64 - shift, d)))
}

/// `B_κ = ⟨κ, -1⟩ ⊆ Z_d^×`, sorted.
pub fn b_kappa(d: usize, kappa: i64) -> Result<Vec<usize>> {
    let k = check_unit(kappa, d)?;
    if d == 1 {
        return Ok(vec![0]);
    }
    let mut group = vec![1usize];
    let gens = [k, d - 1];
    let mut idx = 0;
    while idx < group.len() {
        let x = group[idx];
        for &g in &gens {
            let y = x * g % d;
            if !group.contains(&y) {
                group.push(y);
            }
        }
        idx += 1;
    }
    group.sort_unstable();
    Ok(group)
}

/// The bound on the number of distinct angles of any g in `𝒱(a,b,c,κ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleOrbitBound {
    pub d: usize,
    pub kappa: usize,
    /// `|B_κ|`.
    pub r: usize,
    /// `(d_i, δ(d_i))`: order of the image of `B_κ` in `Z_{d_i}^×`.
    pub delta: Vec<(usize, usize)>,
    /// Number of `B_κ`-orbits on `Z_d^2` under `(i, l) ↦ (t^{-1} i, t l)`.
    pub m_max: usize,
    /// `Σ_{d1,d2 | d} gcd(δ(d1), δ(d2)) φ(d/d1) φ(d/d2) / r`.
    pub formula: f64,
}

impl AngleOrbitBound {
    pub fn formula_matches(&self) -> bool {
        (self.formula - self.m_max as f64).abs() < 1e-9
    }
}

/// Orbit count of `B_κ` acting on `Z_d^2`, by enumeration.
pub fn count_b_kappa_orbits(d: usize, group: &[usize]) -> usize {
    let mut seen = vec![false; d * d];
    let mut count = 0;
    for start in 0..d * d {
        if seen[start] {
            continue;
        }
        count += 1;
        let (i, l) = (start / d, start % d);
        for &t in group {
            let tinv = mod_inverse(t as i64, d).unwrap_or(0);
            seen[(tinv * i % d) * d + t * l % d] = true;
        }
    }
    count
}

pub fn angle_orbit_bound(d: usize, kappa: i64) -> Result<AngleOrbitBound> {
    if d.is_multiple_of(2) {
        return Err(GaborError::Precondition(format!("d = {d} must be odd")));
    }
    let k = check_unit(kappa, d)? as i64;
    if gcd(k * k - 1, d as i64) != 1 {
        return Err(GaborError::Precondition(format!(
            "gcd(kappa^2 - 1, d) != 1 for kappa = {kappa}, d = {d}"
        )));
    }
    let group = b_kappa(d, k)?;
    let r = group.len();
    let divs = divisors(d);
    let delta: Vec<(usize, usize)> = divs
        .iter()
        .map(|&di| {
            if di == 1 {
                return (1, 1);
            }
            let mut image: Vec<usize> = group.iter().map(|t| t % di).collect();
            image.sort_unstable();
            image.dedup();
            (di, image.len())
        })
        .collect();
    let mut total = 0.0;
    for &(d1, e1) in &delta {
        for &(d2, e2) in &delta {
            let g = gcd(e1 as i64, e2 as i64) as f64;
            total += g * (euler_phi(d / d1) * euler_phi(d / d2)) as f64;
        }
    }
    Ok(AngleOrbitBound {
        d,
        kappa: k as usize,
        r,
        delta,
        m_max: count_b_kappa_orbits(d, &group),
        formula: total / r as f64,
    })
}

/// κ values in `[2, d)` satisfying the bound's hypotheses.
pub fn admissible_kappas(d: usize) -> Vec<i64> {
    (2..d as i64)
        .filter(|&k| gcd(k, d as i64) == 1 && gcd(k * k - 1, d as i64) == 1)
        .collect()
}
