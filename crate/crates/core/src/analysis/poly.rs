//! Polynomials over C restricted to the d-th roots of unity.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::frame::UnitVector;
use crate::numerics::root_of_unity;

type C = Complex<f64>;

/// Number of nonzero coefficients.
pub fn density(coeffs: &[C], tol: f64) -> usize {
    coeffs.iter().filter(|c| c.norm() >= tol).count()
}

/// `f(x) = Σ_n c_n x^n` by Horner's rule.
pub fn eval(coeffs: &[C], x: C) -> C {
    coeffs.iter().rev().fold(C::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Exponents j with `|f(ω^j)| < tol`.
pub fn roots_in_mu_d(coeffs: &[C], d: usize, tol: f64) -> Vec<usize> {
    (0..d)
        .filter(|&j| eval(coeffs, root_of_unity(d, j as f64)).norm() < tol)
        .collect()
}

/// `P_l(X) Q(X) mod (X^d - 1)` with `P_l(X) = f_g(ω^{-l} X)` and
/// `Q(X) = conj(f_g)(X^{d-1})`. Coefficient j equals `a_{-j,-l}(g)`.
pub fn encoding_product(g: &UnitVector<f64>, l: usize) -> Vec<C> {
    let d = g.dim();
    let v = g.vec().as_slice();
    let mut out = vec![C::new(0.0, 0.0); d];
    for (n, &gn) in v.iter().enumerate() {
        let p = gn * root_of_unity(d, -((n * l % d) as f64));
        for (m, &gm) in v.iter().enumerate() {
            out[(n + (d - 1) * m) % d] += p * gm.conj();
        }
    }
    out
}

/// Total number of zero coefficients of the encoding products over all l.
pub fn encoding_zero_count(g: &UnitVector<f64>, tol: f64) -> usize {
    (0..g.dim())
        .map(|l| {
            encoding_product(g, l)
                .iter()
                .filter(|c| c.norm() < tol)
                .count()
        })
        .sum()
}

/// Coefficient style used by [`random_sparse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientKind {
    Gaussian,
    Signs,
    RootsOfUnity,
}

/// Random polynomial of degree `< d` with exactly `delta` nonzero
/// coefficients.
pub fn random_sparse<R: Rng + ?Sized>(
    d: usize,
    delta: usize,
    kind: CoefficientKind,
    rng: &mut R,
) -> Vec<C> {
    let mut coeffs = vec![C::new(0.0, 0.0); d];
    for n in sample(rng, d, delta.min(d)) {
        coeffs[n] = match kind {
            CoefficientKind::Gaussian => loop {
                let z = C::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
                if z.norm() > 1e-3 {
                    break z;
                }
            },
            CoefficientKind::Signs => C::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0),
            CoefficientKind::RootsOfUnity => root_of_unity(d, rng.random_range(0..d) as f64),
        };
    }
    coeffs
}

/// Polynomial supported on `support` (δ indices) that vanishes at the δ-1
/// points `ω^j`, `j ∈ roots`: coefficients are the signed maximal minors of
/// the (δ-1)×δ matrix `[ω^{j n}]`, i.e. a kernel vector by Cramer's rule.
pub fn vanishing_on(d: usize, support: &[usize], roots: &[usize]) -> Vec<C> {
    assert_eq!(support.len(), roots.len() + 1);
    let delta = support.len();
    let mut coeffs = vec![C::new(0.0, 0.0); d];
    for (col, &n) in support.iter().enumerate() {
        let minor = DMatrix::<C>::from_fn(delta - 1, delta - 1, |r, c| {
            let m = support[if c < col { c } else { c + 1 }];
            root_of_unity(d, (roots[r] * m % d) as f64)
        });
        let det = if delta == 1 {
            C::new(1.0, 0.0)
        } else {
            minor.determinant()
        };
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[n] = det * sign;
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale > 0.0 {
        for c in &mut coeffs {
            *c /= scale;
        }
    }
    coeffs
}

/// Minimum |det| over every square minor of the d×d DFT matrix
/// `[ω^{jk}]`, together with the number of minors examined.
pub fn dft_minors(d: usize) -> (usize, f64) {
    let mut count = 0;
    let mut min_abs = f64::INFINITY;
    for size in 1..=d {
        let subsets = combinations(d, size);
        for rows in &subsets {
            for cols in &subsets {
                let m = DMatrix::<C>::from_fn(size, size, |r, c| {
                    root_of_unity(d, (rows[r] * cols[c] % d) as f64)
                });
                min_abs = min_abs.min(m.determinant().norm());
                count += 1;
            }
        }
    }
    (count, min_abs)
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::rank;
    use crate::generators::{random_haar, random_on_support};
    use crate::numerics::TolerancePolicy;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn root_counting_examples() {
        let x_minus_1 = vec![C::new(-1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0)];
        assert_eq!(density(&x_minus_1, 1e-12), 2);
        assert_eq!(roots_in_mu_d(&x_minus_1, 5, 1e-9), vec![0]);
        let monomial = vec![C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(2.0, 0.0)];
        assert!(roots_in_mu_d(&monomial, 5, 1e-9).is_empty());
        let all_ones = vec![C::new(1.0, 0.0); 5];
        assert_eq!(roots_in_mu_d(&all_ones, 5, 1e-9), vec![1, 2, 3, 4]);
    }

    #[test]
    fn constructed_polynomials_are_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [3usize, 5, 7] {
            for delta in 1..=d {
                let support: Vec<usize> = sample(&mut rng, d, delta).into_vec();
                let roots: Vec<usize> = sample(&mut rng, d, delta - 1).into_vec();
                let f = vanishing_on(d, &support, &roots);
                assert_eq!(density(&f, 1e-9), delta);
                let mut found = roots_in_mu_d(&f, d, 1e-9);
                let mut expect = roots.clone();
                found.sort_unstable();
                expect.sort_unstable();
                assert_eq!(found, expect);
            }
        }
    }

    #[test]
    fn dft_minors_of_small_primes() {
        assert_eq!(combinations(5, 2).len(), 10);
        for d in [2usize, 3, 5] {
            let (count, min_abs) = dft_minors(d);
            assert_eq!(count, combinations(2 * d, d).len() - 1);
            assert!(min_abs > 1e-3, "d={d}: {min_abs}");
        }
        // composite d has singular minors: rows {0, 2} × cols {0, 2} in d = 4
        assert!(dft_minors(4).1 < 1e-12);
    }

    #[test]
    fn encoding_matches_rank() {
        let p = TolerancePolicy::default();
        for d in 2..=7 {
            for seed in 0..5u64 {
                let g = random_haar(d, seed).unwrap();
                assert_eq!(encoding_zero_count(&g, 1e-9), d * d - rank(&g, &p));
                let s = random_on_support(&[0, d / 2], d, seed).unwrap();
                assert_eq!(encoding_zero_count(&s, 1e-9), d * d - rank(&s, &p));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sparse_polynomials_obey_the_density_bound(
            d in prop::sample::select(vec![3usize, 5, 7]),
            delta in 1usize..8,
            kind in 0usize..3,
            seed in any::<u64>(),
        ) {
            let delta = delta.min(d);
            let kind = [CoefficientKind::Gaussian, CoefficientKind::Signs, CoefficientKind::RootsOfUnity][kind];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_sparse(d, delta, kind, &mut rng);
            prop_assert!(roots_in_mu_d(&f, d, 1e-9).len() < delta);
        }
    }
}
