//! Complex vectors indexed by Z_d, roots of unity, the DFT and the zero
//! tolerance policy.
//!
//! The DFT here is the unnormalized, positive-sign sum
//! `v̂[l] = Σ_n v_n ω^{nl}` with `ω = e^{2πi/d}`, which is exactly the map
//! taking the lag products `(g_n ḡ_{n+k})_n` to the row `(a_{k,l})_l` of the
//! ambiguity table. All `1/d` or `1/√d` factors live with the caller.

use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{GaborError, Result};
use crate::scalar::Real;

/// A complex vector in C^d. Indices are elements of Z_d.
#[derive(Debug, Clone, PartialEq)]
pub struct CVec<T> {
    entries: Vec<Complex<T>>,
}

impl<T: Real> CVec<T> {
    pub fn new(entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(GaborError::EmptyDimension);
        }
        Ok(Self { entries })
    }

    pub fn zeros(d: usize) -> Self {
        assert!(d >= 1, "dimension must be at least 1");
        Self {
            entries: vec![Complex::new(T::zero(), T::zero()); d],
        }
    }

    /// Standard basis vector `e_j` (j taken mod d).
    pub fn basis(d: usize, j: i64) -> Self {
        let mut v = Self::zeros(d);
        v[j] = Complex::new(T::one(), T::zero());
        v
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&x| Complex::new(x, T::zero()))
                .collect(),
        )
    }

    pub fn from_fn(d: usize, f: impl FnMut(usize) -> Complex<T>) -> Self {
        assert!(d >= 1, "dimension must be at least 1");
        Self {
            entries: (0..d).map(f).collect(),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Entry at `i mod d`.
    #[inline]
    pub fn at(&self, i: i64) -> Complex<T> {
        self.entries[i.rem_euclid(self.dim() as i64) as usize]
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn into_inner(self) -> Vec<Complex<T>> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex<T>> {
        self.entries.iter()
    }

    pub fn norm_sqr(&self) -> T {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    /// Number of entries with modulus at or above `tol`.
    pub fn support_size(&self, tol: T) -> usize {
        self.entries.iter().filter(|z| z.norm() >= tol).count()
    }

    /// Indices of entries with modulus at or above `tol`.
    pub fn support(&self, tol: T) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.entries[i].norm() >= tol)
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

impl<T: Real> Index<i64> for CVec<T> {
    type Output = Complex<T>;
    fn index(&self, i: i64) -> &Complex<T> {
        let d = self.entries.len() as i64;
        &self.entries[i.rem_euclid(d) as usize]
    }
}

impl<T: Real> IndexMut<i64> for CVec<T> {
    fn index_mut(&mut self, i: i64) -> &mut Complex<T> {
        let d = self.entries.len() as i64;
        &mut self.entries[i.rem_euclid(d) as usize]
    }
}

/// Thresholds that turn floating point values into the discrete answers the
/// theory asks for (zero / nonzero, equal / distinct).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy<T> {
    /// |a_{k,l}| below this is treated as zero.
    pub zero_tol: T,
    /// Moduli closer than this are merged into one angle value.
    pub angle_cluster_tol: T,
}

impl<T: Real> Default for TolerancePolicy<T> {
    fn default() -> Self {
        Self {
            zero_tol: T::default_zero_tol(),
            angle_cluster_tol: T::default_angle_tol(),
        }
    }
}

impl<T: Real> TolerancePolicy<T> {
    pub fn new(zero_tol: T, angle_cluster_tol: T) -> Result<Self> {
        let policy = Self {
            zero_tol,
            angle_cluster_tol,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.zero_tol > T::zero()) || !(self.angle_cluster_tol > T::zero()) {
            return Err(GaborError::InvalidTolerance(
                "tolerances must be positive".into(),
            ));
        }
        if self.angle_cluster_tol < self.zero_tol {
            return Err(GaborError::InvalidTolerance(format!(
                "angle_cluster_tol {} < zero_tol {}",
                self.angle_cluster_tol, self.zero_tol
            )));
        }
        Ok(())
    }
}

/// `e^{2πi r/d}`; for integer `r` this is `ω^r`.
pub fn root_of_unity<T: Real>(d: usize, r: T) -> Complex<T> {
    let dd = T::from_usize_exact(d);
    let reduced = r - dd * (r / dd).floor();
    let theta = T::TAU() * reduced / dd;
    Complex::new(theta.cos(), theta.sin())
}

/// Table `[ω^0, ω^1, ..., ω^{d-1}]`.
pub fn roots_table<T: Real>(d: usize) -> Vec<Complex<T>> {
    (0..d)
        .map(|j| root_of_unity(d, T::from_usize_exact(j)))
        .collect()
}

/// Unnormalized DFT `v̂[l] = Σ_n v_n ω^{nl}`.
pub fn dft<T: Real>(v: &CVec<T>) -> CVec<T> {
    let d = v.dim();
    let roots = roots_table::<T>(d);
    dft_with(v, &roots)
}

pub(crate) fn dft_with<T: Real>(v: &CVec<T>, roots: &[Complex<T>]) -> CVec<T> {
    let d = v.dim();
    CVec::from_fn(d, |l| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (n, &x) in v.iter().enumerate() {
            acc += x * roots[(n * l) % d];
        }
        acc
    })
}

/// Inverse of [`dft`]: `v_n = (1/d) Σ_l v̂_l ω^{-nl}`.
pub fn idft<T: Real>(w: &CVec<T>) -> CVec<T> {
    let d = w.dim();
    let roots = roots_table::<T>(d);
    let inv_d = T::one() / T::from_usize_exact(d);
    CVec::from_fn(d, |n| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (l, &x) in w.iter().enumerate() {
            acc += x * roots[(d - (n * l) % d) % d];
        }
        acc * inv_d
    })
}

/// `⟨u, v⟩ = Σ u_n conj(v_n)`.
pub fn inner<T: Real>(u: &CVec<T>, v: &CVec<T>) -> Result<Complex<T>> {
    if u.dim() != v.dim() {
        return Err(GaborError::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    Ok(inner_unchecked(u, v))
}

#[inline]
pub(crate) fn inner_unchecked<T: Real>(u: &CVec<T>, v: &CVec<T>) -> Complex<T> {
    u.iter()
        .zip(v.iter())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
            acc + *a * b.conj()
        })
}

#[inline]
pub fn is_zero<T: Real>(x: Complex<T>, policy: &TolerancePolicy<T>) -> bool {
    x.norm() < policy.zero_tol
}
