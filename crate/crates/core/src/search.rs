//! Random-restart search for SIC fiducials: projected gradient descent of
//! `F(g) = Σ_{(k,l) ≠ 0} (|a_{k,l}|^2 - 1/(d+1))^2` on the unit sphere.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GaborError, Result};
use crate::frame::{ambiguity_table_of, UnitVector};
use crate::generators::random_haar_with;
use crate::numerics::{roots_table, CVec};

type C = Complex<f64>;

/// Objective value below which polishing stops.
const POLISH_FLOOR: f64 = 1e-28;
const MIN_STEP: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub d: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub convergence_tol: f64,
    pub seed: u64,
    pub armijo_c: f64,
    pub shrink: f64,
    pub initial_step: f64,
}

impl SearchConfig {
    pub fn new(d: usize, seed: u64) -> Self {
        Self {
            d,
            restarts: 64,
            max_iters: 20_000,
            convergence_tol: 1e-14,
            seed,
            armijo_c: 1e-4,
            shrink: 0.5,
            initial_step: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(GaborError::EmptyDimension);
        }
        let ok = self.restarts >= 1
            && self.max_iters >= 1
            && self.convergence_tol > 0.0
            && self.armijo_c > 0.0
            && self.armijo_c < 1.0
            && self.shrink > 0.0
            && self.shrink < 1.0
            && self.initial_step > 0.0;
        if !ok {
            return Err(GaborError::Precondition(format!("invalid search config {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiducialResult {
    #[serde(serialize_with = "ser_vec")]
    pub g: UnitVector<f64>,
    pub objective: f64,
    /// `max_{(k,l) ≠ 0} ||a_{k,l}| - 1/sqrt(d+1)|`.
    pub max_angle_deviation: f64,
    pub iterations_used: usize,
    pub restart_index: usize,
    /// Seed of the winning restart.
    pub seed: u64,
    pub converged: bool,
}

fn ser_vec<S: serde::Serializer>(g: &UnitVector<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(g.dim()))?;
    for z in g.vec().iter() {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

fn sic_value(d: usize) -> f64 {
    1.0 / (d as f64 + 1.0)
}

pub fn sic_objective(g: &UnitVector<f64>) -> f64 {
    objective_of(g.vec())
}

fn objective_of(v: &CVec<f64>) -> f64 {
    let s = sic_value(v.dim());
    ambiguity_table_of(v)
        .entries()
        .iter()
        .skip(1)
        .map(|a| (a.norm_sqr() - s).powi(2))
        .sum()
}

pub fn max_angle_deviation(g: &UnitVector<f64>) -> f64 {
    let target = sic_value(g.dim()).sqrt();
    ambiguity_table_of(g.vec())
        .entries()
        .iter()
        .skip(1)
        .map(|a| (a.norm() - target).abs())
        .fold(0.0, f64::max)
}

/// Euclidean gradient of F in `R^{2d}` (as a complex vector,
/// `∂F/∂Re g_m + i ∂F/∂Im g_m`), projected orthogonally to g.
pub fn sic_gradient(g: &UnitVector<f64>) -> CVec<f64> {
    let v = g.vec();
    let grad = euclidean_gradient(v);
    project(v, grad)
}

fn euclidean_gradient(v: &CVec<f64>) -> CVec<f64> {
    let d = v.dim();
    let w = roots_table::<f64>(d);
    let s = sic_value(d);
    let table = ambiguity_table_of(v);
    let x = v.as_slice();
    let mut out = vec![C::new(0.0, 0.0); d];
    for k in 0..d {
        for l in 0..d {
            if k == 0 && l == 0 {
                continue;
            }
            let a = table.get(k as i64, l as i64);
            let weight = 2.0 * (a.norm_sqr() - s);
            if weight == 0.0 {
                continue;
            }
            let ac = a.conj();
            for (m, o) in out.iter_mut().enumerate() {
                let mk = (m + d - k) % d;
                let t1 = ac * x[mk] * w[mk * l % d];
                let t2 = a * x[(m + k) % d] * w[(d - m * l % d) % d];
                *o += (t1 + t2) * weight;
            }
        }
    }
    // ∂F/∂Re + i ∂F/∂Im = 2 ∂F/∂conj(g)
    CVec::new(out.into_iter().map(|z| z * 2.0).collect()).expect("d > 0")
}

fn project(g: &CVec<f64>, v: CVec<f64>) -> CVec<f64> {
    let re: f64 = g.iter().zip(v.iter()).map(|(a, b)| (a.conj() * b).re).sum();
    CVec::new(v.iter().zip(g.iter()).map(|(b, a)| b - a * re).collect()).expect("d > 0")
}

fn retract(g: &CVec<f64>, dir: &CVec<f64>, t: f64) -> CVec<f64> {
    let x = CVec::new(g.iter().zip(dir.iter()).map(|(a, b)| a - b * t).collect()).expect("d > 0");
    let n = x.norm();
    x.scale(C::new(1.0 / n, 0.0))
}

struct Run {
    g: CVec<f64>,
    objective: f64,
    iterations: usize,
    converged: bool,
}

/// One restart. Once the objective is under `convergence_tol` descent
/// continues until no step helps, so the moduli are accurate well past the
/// square root of the tolerance.
fn descend(cfg: &SearchConfig, seed: u64) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = random_haar_with::<f64, _>(cfg.d, &mut rng)
        .expect("d > 0")
        .into_vec();
    let mut f = objective_of(&g);
    let mut grad = project(&g, euclidean_gradient(&g));
    let mut step = cfg.initial_step;
    let mut iterations = 0;
    while iterations < cfg.max_iters && f > POLISH_FLOOR {
        iterations += 1;
        let gn2 = grad.norm_sqr();
        if gn2 == 0.0 {
            break;
        }
        let mut t = step;
        let accepted = loop {
            let x = retract(&g, &grad, t);
            let fx = objective_of(&x);
            if fx <= f - cfg.armijo_c * t * gn2 {
                break Some((x, fx));
            }
            t *= cfg.shrink;
            if t < MIN_STEP {
                break None;
            }
        };
        let Some((x, fx)) = accepted else { break };
        let next = project(&x, euclidean_gradient(&x));
        // Barzilai-Borwein trial step for the next line search
        let (mut ss, mut sy) = (0.0, 0.0);
        for i in 0..x.dim() {
            let si = x.as_slice()[i] - g.as_slice()[i];
            let yi = next.as_slice()[i] - grad.as_slice()[i];
            ss += si.norm_sqr();
            sy += (si.conj() * yi).re;
        }
        step = if sy > 0.0 { (ss / sy).min(1e6) } else { t * 2.0 };
        g = x;
        f = fx;
        grad = next;
    }
    Run {
        g,
        objective: f,
        iterations,
        converged: f < cfg.convergence_tol,
    }
}

pub fn search(cfg: &SearchConfig) -> Result<FiducialResult> {
    cfg.validate()?;
    let (idx, run) = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| (i, descend(cfg, cfg.seed.wrapping_add(i as u64))))
        .min_by(|(i, a), (j, b)| a.objective.total_cmp(&b.objective).then(i.cmp(j)))
        .expect("restarts >= 1");
    let g = UnitVector::normalize(run.g)?;
    Ok(FiducialResult {
        max_angle_deviation: max_angle_deviation(&g),
        objective: run.objective,
        g,
        iterations_used: run.iterations,
        restart_index: idx,
        seed: cfg.seed.wrapping_add(idx as u64),
        converged: run.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{rank, spectrum_closed_form};
    use crate::generators::{random_haar, spike};
    use crate::numerics::TolerancePolicy;

    #[test]
    fn objective_examples() {
        let e0 = spike::<f64>(2).unwrap();
        assert!((sic_objective(&e0) - 2.0 / 3.0).abs() < 1e-15);
        let g = random_haar::<f64>(4, 9).unwrap();
        let h = UnitVector::new(g.vec().scale(C::from_polar(1.0, 0.7))).unwrap();
        assert!((sic_objective(&g) - sic_objective(&h)).abs() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let h = 1e-6;
        for d in [2usize, 3, 4] {
            for seed in 0..20u64 {
                let g = random_haar::<f64>(d, 100 + seed).unwrap();
                let v = g.vec();
                let grad = euclidean_gradient(v);
                let tangent = sic_gradient(&g);
                let tan_dot: f64 = v.iter().zip(tangent.iter()).map(|(a, b)| (a.conj() * b).re).sum();
                assert!(tan_dot.abs() < 1e-12);
                for m in 0..d {
                    for dir in [C::new(1.0, 0.0), C::new(0.0, 1.0)] {
                        let mut plus = v.clone();
                        let mut minus = v.clone();
                        plus[m as i64] += dir * h;
                        minus[m as i64] -= dir * h;
                        let fd = (objective_of(&plus) - objective_of(&minus)) / (2.0 * h);
                        let an = if dir.re != 0.0 { grad.as_slice()[m].re } else { grad.as_slice()[m].im };
                        let scale = grad.norm().max(1e-3);
                        assert!((fd - an).abs() <= 1e-5 * scale, "d={d} m={m}: {fd} vs {an}");
                    }
                }
            }
        }
    }

    #[test]
    fn search_small_dimensions() {
        let policy = TolerancePolicy::default();
        for d in [2usize, 3] {
            let mut cfg = SearchConfig::new(d, 7);
            cfg.restarts = 8;
            let r = search(&cfg).unwrap();
            assert!(r.converged);
            assert!(r.objective < 1e-12, "d={d}: {}", r.objective);
            assert!(r.max_angle_deviation < 1e-7);
            assert!(spectrum_closed_form(&r.g, &policy).is_sic);
            assert_eq!(rank(&r.g, &policy), d * d);
            assert!(sic_gradient(&r.g).norm() < 1e-10, "d={d}: {} {} {}", sic_gradient(&r.g).norm(), r.objective, r.iterations_used);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let mut cfg = SearchConfig::new(4, 3);
        cfg.restarts = 4;
        cfg.max_iters = 300;
        let a = search(&cfg).unwrap();
        let b = search(&cfg).unwrap();
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.restart_index, b.restart_index);
        assert_eq!(a.g, b.g);
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = SearchConfig::new(3, 0);
        cfg.restarts = 0;
        assert!(search(&cfg).is_err());
        let mut cfg = SearchConfig::new(3, 0);
        cfg.convergence_tol = 0.0;
        assert!(cfg.validate().is_err());
        assert!(SearchConfig::new(0, 0).validate().is_err());
    }
}
