//! Gabor systems `{M^k T^l g}` and the spectrum of the Gram matrix of their
//! rank-one projectors.
//!
//! The whole spectral story runs through the ambiguity table
//! `a_{k,l}(g) = Σ_n g_n ḡ_{n+k} ω^{nl}`: the projector Gram matrix `G(g)` is
//! block circulant with circulant blocks, its eigenvalues are
//! `λ[a][b] = d |a_{a,b}|^2`, and so its rank is the number of nonzero table
//! entries. [`spectrum_oracle`] recomputes the same spectrum by building
//! `G(g)` densely and handing it to a symmetric eigensolver.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{GaborError, Result};
use crate::numerics::{dft_with, inner_unchecked, roots_table, CVec, TolerancePolicy};
use crate::scalar::Real;

/// Largest dimension accepted by the dense O(d^6) oracle.
pub const ORACLE_MAX_DIM: usize = 64;

/// Eigenvalues of the dense Gram matrix above this count towards its rank.
///
/// The closed form thresholds |a| at `zero_tol`, i.e. eigenvalues at
/// `d * zero_tol^2`, which sits far below what a dense eigensolver resolves;
/// the oracle uses an absolute cut instead, raised to `64 n ε` when the
/// scalar type is too coarse for it.
pub const ORACLE_EIG_TOL: f64 = 1e-7;

/// A unit vector g ∈ C^d, the generator of a Gabor frame.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector<T> {
    v: CVec<T>,
}

impl<T: Real> UnitVector<T> {
    /// Accepts `v` only if `| ||v||^2 - 1 |` is within [`Real::unit_norm_tol`].
    pub fn new(v: CVec<T>) -> Result<Self> {
        Self::with_tolerance(v, T::unit_norm_tol())
    }

    pub fn with_tolerance(v: CVec<T>, tol: T) -> Result<Self> {
        let deviation = (v.norm_sqr() - T::one()).abs();
        if !(deviation <= tol) {
            return Err(GaborError::NotUnitNorm {
                deviation: deviation.as_f64(),
            });
        }
        Ok(Self { v })
    }

    pub fn normalize(v: CVec<T>) -> Result<Self> {
        let n = v.norm();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(GaborError::ZeroVector);
        }
        Ok(Self {
            v: v.scale(Complex::new(T::one() / n, T::zero())),
        })
    }

    pub fn from_entries(entries: Vec<Complex<T>>) -> Result<Self> {
        Self::normalize(CVec::new(entries)?)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    #[inline]
    pub fn vec(&self) -> &CVec<T> {
        &self.v
    }

    pub fn into_vec(self) -> CVec<T> {
        self.v
    }
}

impl<T: Real> AsRef<CVec<T>> for UnitVector<T> {
    fn as_ref(&self) -> &CVec<T> {
        &self.v
    }
}

/// `(M^k v)_n = ω^{kn} v_n`.
pub fn modulate<T: Real>(v: &CVec<T>, k: i64) -> CVec<T> {
    let d = v.dim();
    let roots = roots_table::<T>(d);
    let k = k.rem_euclid(d as i64) as usize;
    CVec::from_fn(d, |n| v.as_slice()[n] * roots[(k * n) % d])
}

/// `(T^l v)_n = v_{n-l}`.
pub fn translate<T: Real>(v: &CVec<T>, l: i64) -> CVec<T> {
    let d = v.dim();
    CVec::from_fn(d, |n| v.at(n as i64 - l))
}

/// `g_{k,l} = M^k T^l g`.
pub fn gabor_vector<T: Real>(g: &CVec<T>, k: i64, l: i64) -> CVec<T> {
    modulate(&translate(g, l), k)
}

/// The d×d table `a[k][l] = a_{k,l}(g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityTable<T> {
    d: usize,
    a: Vec<Complex<T>>,
}

impl<T: Real> AmbiguityTable<T> {
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut a = Vec::with_capacity(d * d);
        for k in 0..d {
            for l in 0..d {
                a.push(f(k, l));
            }
        }
        Self { d, a }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Entry `a_{k,l}` with both indices read mod d.
    #[inline]
    pub fn get(&self, k: i64, l: i64) -> Complex<T> {
        let d = self.d as i64;
        self.a[(k.rem_euclid(d) * d + l.rem_euclid(d)) as usize]
    }

    #[inline]
    pub fn modulus(&self, k: i64, l: i64) -> T {
        self.get(k, l).norm()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex<T>] {
        &self.a
    }

    pub fn row(&self, k: usize) -> &[Complex<T>] {
        &self.a[k * self.d..(k + 1) * self.d]
    }

    /// Number of entries with |a| >= `zero_tol`.
    pub fn nonzero_count(&self, zero_tol: T) -> usize {
        self.a.iter().filter(|z| z.norm() >= zero_tol).count()
    }

    /// Smallest modulus among entries counted as nonzero.
    pub fn min_nonzero_modulus(&self, zero_tol: T) -> Option<T> {
        self.a
            .iter()
            .map(|z| z.norm())
            .filter(|&m| m >= zero_tol)
            .fold(None, |acc: Option<T>, m| Some(acc.map_or(m, |x| x.min(m))))
    }

    /// Largest modulus among entries counted as zero.
    pub fn max_zero_modulus(&self, zero_tol: T) -> Option<T> {
        self.a
            .iter()
            .map(|z| z.norm())
            .filter(|&m| m < zero_tol)
            .fold(None, |acc: Option<T>, m| Some(acc.map_or(m, |x| x.max(m))))
    }

    /// Moduli over `(k,l) != (0,0)` in lexicographic order.
    pub fn off_origin_moduli(&self) -> Vec<T> {
        self.a.iter().skip(1).map(|z| z.norm()).collect()
    }

    /// Largest entrywise distance to another table.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (*x - *y).norm())
            .fold(T::zero(), T::max)
    }

    /// Distinct clustered moduli, optionally including the origin entry.
    pub fn distinct_moduli(&self, tol: T, include_origin: bool) -> Vec<T> {
        let skip = usize::from(!include_origin);
        cluster_values(self.a.iter().skip(skip).map(|z| z.norm()).collect(), tol)
    }
}

/// `a_{k,l}` for an arbitrary (not necessarily unit) vector.
pub fn ambiguity_table_of<T: Real>(v: &CVec<T>) -> AmbiguityTable<T> {
    let d = v.dim();
    let roots = roots_table::<T>(d);
    let mut a = Vec::with_capacity(d * d);
    for k in 0..d as i64 {
        let lag = CVec::from_fn(d, |n| v.at(n as i64) * v.at(n as i64 + k).conj());
        a.extend(dft_with(&lag, &roots).into_inner());
    }
    AmbiguityTable { d, a }
}

pub fn ambiguity_table<T: Real>(g: &UnitVector<T>) -> AmbiguityTable<T> {
    ambiguity_table_of(g.vec())
}

/// Sorts `values` and merges runs whose consecutive gaps are at most `tol`,
/// returning one mean per cluster.
pub fn cluster_values<T: Real>(mut values: Vec<T>, tol: T) -> Vec<T> {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let mut out = Vec::new();
    let mut sum = T::zero();
    let mut count = 0usize;
    let mut prev: Option<T> = None;
    for x in values {
        if let Some(p) = prev {
            if x - p > tol {
                out.push(sum / T::from_usize_exact(count));
                sum = T::zero();
                count = 0;
            }
        }
        sum += x;
        count += 1;
        prev = Some(x);
    }
    if count > 0 {
        out.push(sum / T::from_usize_exact(count));
    }
    out
}

/// A d²×d² matrix indexed lexicographically by `(k,l) ∈ Z_d × Z_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<S> {
    d: usize,
    entries: Vec<S>,
}

impl<S: Copy> GramMatrix<S> {
    /// Side length d².
    pub fn size(&self) -> usize {
        self.d * self.d
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> S {
        self.entries[row * self.size() + col]
    }

    #[inline]
    pub fn at(&self, k: usize, l: usize, kp: usize, lp: usize) -> S {
        self.get(k * self.d + l, kp * self.d + lp)
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }
}

fn frame_vectors<T: Real>(g: &CVec<T>) -> Vec<CVec<T>> {
    let d = g.dim() as i64;
    let mut out = Vec::with_capacity((d * d) as usize);
    for k in 0..d {
        for l in 0..d {
            out.push(gabor_vector(g, k, l));
        }
    }
    out
}

/// `G(g)[(k,l),(k',l')] = |⟨g_{k,l}, g_{k',l'}⟩|^2`, built entry by entry
/// from the frame vectors.
pub fn gram_projectors<T: Real>(g: &UnitVector<T>) -> GramMatrix<T> {
    let vs = frame_vectors(g.vec());
    let n = vs.len();
    let mut entries = vec![T::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let x = inner_unchecked(&vs[i], &vs[j]).norm_sqr();
            entries[i * n + j] = x;
            entries[j * n + i] = x;
        }
    }
    GramMatrix {
        d: g.dim(),
        entries,
    }
}

/// Frame Gram matrix `H(g) = 𝒢(g)^* 𝒢(g)` with columns `g_{k,l}`.
pub fn gram_frame<T: Real>(g: &UnitVector<T>) -> GramMatrix<Complex<T>> {
    let vs = frame_vectors(g.vec());
    let n = vs.len();
    let mut entries = vec![Complex::new(T::zero(), T::zero()); n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] = inner_unchecked(&vs[j], &vs[i]);
        }
    }
    GramMatrix {
        d: g.dim(),
        entries,
    }
}

/// Eigenvalue grid, rank, completeness flags and angle statistics of `G(g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport<T> {
    pub d: usize,
    /// `λ[a][b]` row-major.
    pub eigenvalues: Vec<T>,
    pub rank: usize,
    pub trace: T,
    pub is_ic: bool,
    pub is_sic: bool,
    /// Clustered distinct values of |⟨g, M^k T^l g⟩| over `(k,l) != (0,0)`.
    pub angle_values: Vec<T>,
    pub angle_count: usize,
}

impl<T: Real> SpectrumReport<T> {
    pub fn eigenvalue(&self, a: usize, b: usize) -> T {
        self.eigenvalues[a * self.d + b]
    }

    pub fn sorted_eigenvalues(&self) -> Vec<T> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        v
    }
}

/// True when every off-origin |a_{k,l}| is within `tol` of `1/√(d+1)`.
pub fn is_equiangular_at_sic_value<T: Real>(table: &AmbiguityTable<T>, tol: T) -> bool {
    let target = (T::one() / T::from_usize_exact(table.dim() + 1)).sqrt();
    table
        .off_origin_moduli()
        .into_iter()
        .all(|m| (m - target).abs() <= tol)
}

/// Spectrum of `G(g)` read off the ambiguity table.
pub fn spectrum_from_table<T: Real>(
    table: &AmbiguityTable<T>,
    policy: &TolerancePolicy<T>,
) -> SpectrumReport<T> {
    let d = table.dim();
    let dd = T::from_usize_exact(d);
    let eigenvalues: Vec<T> = table.entries().iter().map(|z| dd * z.norm_sqr()).collect();
    let trace = eigenvalues.iter().copied().sum();
    let rank = table.nonzero_count(policy.zero_tol);
    let is_ic = rank == d * d;
    let is_sic = is_ic && is_equiangular_at_sic_value(table, policy.angle_cluster_tol);
    let angle_values = cluster_values(table.off_origin_moduli(), policy.angle_cluster_tol);
    SpectrumReport {
        d,
        angle_count: angle_values.len(),
        eigenvalues,
        rank,
        trace,
        is_ic,
        is_sic,
        angle_values,
    }
}

pub fn spectrum_closed_form<T: Real>(
    g: &UnitVector<T>,
    policy: &TolerancePolicy<T>,
) -> SpectrumReport<T> {
    spectrum_from_table(&ambiguity_table(g), policy)
}

/// Rank of `G(g)`: the number of nonzero ambiguity entries.
pub fn rank<T: Real>(g: &UnitVector<T>, policy: &TolerancePolicy<T>) -> usize {
    ambiguity_table(g).nonzero_count(policy.zero_tol)
}

/// Spectrum of `G(g)` obtained by dense symmetric eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum<T> {
    pub d: usize,
    /// Ascending.
    pub eigenvalues: Vec<T>,
    pub rank: usize,
    pub trace: T,
}

/// Builds `G(g)` densely and diagonalizes it with nalgebra's symmetric
/// eigensolver. O(d^6); refuses `d > ORACLE_MAX_DIM`.
pub fn spectrum_oracle<T>(g: &UnitVector<T>) -> Result<OracleSpectrum<T>>
where
    T: Real + nalgebra::RealField,
{
    let d = g.dim();
    if d > ORACLE_MAX_DIM {
        return Err(GaborError::OracleTooLarge {
            d,
            limit: ORACLE_MAX_DIM,
        });
    }
    let gram = gram_projectors(g);
    let n = gram.size();
    let m = nalgebra::DMatrix::<T>::from_fn(n, n, |i, j| gram.get(i, j));
    let trace = m.trace();
    let mut eigenvalues: Vec<T> = m.symmetric_eigenvalues().iter().cloned().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let noise = <T as num_traits::Float>::epsilon() * <T as Real>::lit(64.0 * n as f64);
    let cut = <T as num_traits::Float>::max(<T as Real>::lit(ORACLE_EIG_TOL), noise);
    let rank = eigenvalues.iter().filter(|&&x| x > cut).count();
    Ok(OracleSpectrum {
        d,
        eigenvalues,
        rank,
        trace,
    })
}

/// Empirical frame bound of `{M^k T^l g}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBound<T> {
    /// `A` in `Σ |⟨x, g_{k,l}⟩|^2 = A ||x||^2`, measured at `e_0`.
    pub bound: T,
    /// Largest |ratio - A| over the standard basis and the random probes.
    pub max_deviation: T,
}

/// Measures the frame bound over the standard basis plus `probes` random
/// complex Gaussian vectors. For unit g the bound is d.
pub fn frame_tightness_check<T: Real>(g: &CVec<T>, probes: usize, seed: u64) -> FrameBound<T> {
    let d = g.dim();
    let vs = frame_vectors(g);
    let ratio = |x: &CVec<T>| -> T {
        let s: T = vs.iter().map(|v| inner_unchecked(x, v).norm_sqr()).sum();
        s / x.norm_sqr()
    };
    let bound = ratio(&CVec::basis(d, 0));
    let mut max_deviation = T::zero();
    for j in 1..d {
        max_deviation = max_deviation.max((ratio(&CVec::basis(d, j as i64)) - bound).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..probes {
        let x = CVec::from_fn(d, |_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex::new(T::lit(re), T::lit(im))
        });
        max_deviation = max_deviation.max((ratio(&x) - bound).abs());
    }
    FrameBound {
        bound,
        max_deviation,
    }
}

/// `Ξ[k][l] = |⟨g, M^k T^l g⟩|^2`, row-major.
pub fn angle_square_grid<T: Real>(g: &CVec<T>) -> Vec<T> {
    let d = g.dim() as i64;
    let mut out = Vec::with_capacity((d * d) as usize);
    for k in 0..d {
        for l in 0..d {
            out.push(inner_unchecked(g, &gabor_vector(g, k, l)).norm_sqr());
        }
    }
    out
}
