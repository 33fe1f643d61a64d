//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::time::{Duration, Instant};

use gabor_core::analysis::orbits::{admissible_kappas, angle_orbit_bound, SymmetricSpace};
use gabor_core::analysis::poly::dft_minors;
use gabor_core::analysis::verify::{
    trial_rng, verify_density_bound, verify_dim45, verify_mub, verify_rank_gap,
};
use gabor_core::arith::mult_order;
use gabor_core::generators::{alltop, bjorck, comb, random_haar, random_haar_with, support_full_rank, two_spike};
use gabor_core::search::{search, sic_gradient, sic_objective, SearchConfig};
use gabor_core::transforms::{random_spec, TransformKind};
use gabor_core::{
    ambiguity_table, apply, gram_projectors, predict_ambiguity, rank, spectrum_closed_form,
    spectrum_oracle, CVec, Complex64, TolerancePolicy64, UnitVector64,
};
use rand::Rng;

/// `(d, kappa, amplitudes, phases, expected rank)`.
type SpikeWitness = (usize, usize, (f64, f64), (f64, f64), usize);
type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn policy() -> TolerancePolicy64 {
    TolerancePolicy64::default()
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (t < limit, format!("{:.1}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

fn ac1_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut rank_mismatch = 0;
    for d in 2..=8 {
        for s in 0..200u64 {
            let g = random_haar::<f64>(d, 1000 * d as u64 + s).unwrap();
            let closed = spectrum_closed_form(&g, &policy());
            let oracle = spectrum_oracle(&g).unwrap();
            for (x, y) in closed.sorted_eigenvalues().iter().zip(&oracle.eigenvalues) {
                worst = worst.max((x - y).abs());
            }
            rank_mismatch += usize::from(closed.rank != oracle.rank);
        }
    }
    let (fast, time) = within(Duration::from_secs(120), start);
    outcome(
        worst <= 1e-7 && rank_mismatch == 0 && fast,
        format!("max eigenvalue gap {worst:.2e}, rank mismatches {rank_mismatch}, {time}"),
    )
}

fn numerical_rank(g: &UnitVector64) -> usize {
    let gram = gram_projectors(g);
    let n = gram.size();
    let m = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| gram.get(i, j));
    m.singular_values().iter().filter(|&&s| s > 1e-7).count()
}

fn ac2_rank_formula() -> Outcome {
    let mut mismatches = Vec::new();
    let mut ranks = BTreeSet::new();
    for d in 2..=8 {
        for i in 0..100 {
            let mut rng = trial_rng(2, d * 1000 + i);
            let g = if i % 2 == 0 {
                random_haar_with(d, &mut rng).unwrap()
            } else {
                gabor_core::analysis::verify::structured_sample(d, &mut rng).1
            };
            let (r, n) = (rank(&g, &policy()), numerical_rank(&g));
            ranks.insert((d, r));
            if r != n {
                mismatches.push((d, r, n));
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("{} distinct (d, rank) pairs, mismatches {mismatches:?}", ranks.len()),
    )
}

fn ac3_comb() -> Outcome {
    let mut bad = Vec::new();
    let mut cases = 0;
    for d in 2..=24 {
        for r in (1..=d).filter(|r| d % r == 0) {
            cases += 1;
            let g = comb::<f64>(r, d).unwrap();
            let rk = rank(&g, &policy());
            let angles = ambiguity_table(&g).distinct_moduli(1e-7, false).len();
            if rk != d || angles != 2 {
                bad.push((r, d, rk, angles));
            }
        }
    }
    outcome(bad.is_empty(), format!("{cases} (r, d) cases, failures {bad:?}"))
}

fn ac4_alltop() -> Outcome {
    let mut details = Vec::new();
    let mut passed = true;
    for d in [3usize, 5, 7, 11] {
        let g = alltop::<f64>(d, 1, 0, 0, one()).unwrap();
        let t = ambiguity_table(&g);
        let r = rank(&g, &policy());
        let target = 1.0 / (d as f64).sqrt();
        let mut dev = 0.0f64;
        for k in 1..d as i64 {
            for l in 0..d as i64 {
                dev = dev.max((t.modulus(k, l) - target).abs());
            }
        }
        let mub = verify_mub(&g);
        let bases = mub.metrics["bases"];
        let ok = r == d * d - d + 1 && dev < 1e-10 && mub.passed && bases == (d + 1) as f64;
        passed &= ok;
        details.push(format!("d={d}: rank {r} dev {dev:.1e} bases {bases}{}", if ok { "" } else { " FAIL" }));
    }
    outcome(passed, details.join("; "))
}

fn ac5_bjorck() -> Outcome {
    let g = bjorck::<f64>(7).unwrap();
    let s7 = 7f64.sqrt();
    let listed = Complex64::new(3.0 / (4.0 * s7), 0.25);
    let mut entry_dev = 0.0f64;
    for k in 0..7 {
        let expect = if [3, 5, 6].contains(&k) {
            listed
        } else {
            Complex64::new(1.0 / s7, 0.0)
        };
        entry_dev = entry_dev.max((g.vec()[k as i64] - expect).norm());
    }
    let angles = ambiguity_table(&g).distinct_moduli(1e-7, true).len();
    let r = rank(&g, &policy());
    outcome(
        entry_dev < 1e-12 && angles == 8 && r <= 37,
        format!("entry deviation {entry_dev:.3e}, distinct angles {angles}, rank {r}"),
    )
}

fn two_spike_draw<R: Rng>(d: usize, rng: &mut R) -> UnitVector64 {
    let kappa = rng.random_range(1..d);
    let amps = if rng.random::<bool>() {
        (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
    } else {
        let p: f64 = rng.random_range(0.05..0.95);
        (p, (1.0 - p * p).sqrt())
    };
    let lattice = std::f64::consts::PI / (2 * d) as f64;
    let phases = if rng.random::<bool>() {
        (
            lattice * rng.random_range(0..4 * d) as f64,
            lattice * rng.random_range(0..4 * d) as f64,
        )
    } else {
        (rng.random_range(0.0..6.3), rng.random_range(0.0..6.3))
    };
    two_spike(d, kappa, amps, phases).unwrap()
}

fn ac6_two_spike() -> Outcome {
    let h = FRAC_1_SQRT_2;
    let p8 = std::f64::consts::PI / 8.0;
    let witnesses: [SpikeWitness; 6] = [
        (4, 1, (0.6, 0.8), (0.0, 0.0), 12),
        (4, 1, (h, h), (0.0, 0.0), 11),
        (4, 2, (0.6, 0.8), (0.0, p8), 8),
        (4, 2, (h, h), (0.0, p8), 6),
        (4, 2, (h, h), (0.0, 0.0), 4),
        (5, 1, (h, h), (0.0, 0.0), 15),
    ];
    let mut details = Vec::new();
    let mut passed = true;
    for (d, kappa, amps, phases, expect) in witnesses {
        let r = rank(&two_spike(d, kappa, amps, phases).unwrap(), &policy());
        if r != expect {
            passed = false;
            details.push(format!("witness d={d} kappa={kappa} gave {r}, wanted {expect}"));
        }
    }
    for d in 3..=8usize {
        let mut allowed = vec![3 * d, 3 * d - 1, 2 * d, d];
        if d % 2 == 0 {
            allowed.push(3 * d / 2);
        }
        let mut extra = BTreeSet::new();
        for i in 0..10_000 {
            let g = two_spike_draw(d, &mut trial_rng(6, d * 100_000 + i));
            let r = rank(&g, &policy());
            if !allowed.contains(&r) {
                extra.insert(r);
            }
        }
        if !extra.is_empty() {
            passed = false;
            details.push(format!("d={d} unlisted ranks {extra:?}"));
        }
    }
    if details.is_empty() {
        details.push("all witnesses realized, no unlisted ranks".into());
    }
    outcome(passed, details.join("; "))
}

fn ac7_dim45() -> Outcome {
    let rep = verify_dim45(20_000, 7, &policy());
    let detail = rep
        .checks
        .iter()
        .map(|c| format!("{} [{}]", c.name, c.detail))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(rep.passed, detail)
}

fn ac8_rank_gap() -> Outcome {
    let mut details = Vec::new();
    let mut passed = true;
    for d in [3usize, 5, 7] {
        let rep = verify_rank_gap(d, 10_000, 8, &policy()).unwrap();
        passed &= rep.passed;
        details.push(format!("d={d}: ranks {:?}", rep.ranks(d)));
    }
    let rep = verify_rank_gap(4, 10_000, 8, &policy()).unwrap();
    let six = rep.ranks(4).contains(&6);
    passed &= six;
    details.push(format!("d=4 shows rank 6: {six}"));
    outcome(passed, details.join("; "))
}

fn ac9_transforms() -> Outcome {
    let mut worst = 0.0f64;
    let mut rank_changes = 0;
    for (ki, kind) in TransformKind::ALL.into_iter().enumerate() {
        for i in 0..500 {
            let mut rng = trial_rng(9, ki * 1000 + i);
            let d = rng.random_range(2..=9);
            let (_, g) = gabor_core::analysis::verify::structured_sample(d, &mut rng);
            let spec = random_spec(kind, &g, &mut rng);
            let h = apply(&spec, &g).unwrap();
            let predicted = predict_ambiguity(&spec, &ambiguity_table(&g)).unwrap();
            worst = worst.max(ambiguity_table(&h).max_abs_diff(&predicted));
            rank_changes += usize::from(rank(&g, &policy()) != rank(&h, &policy()));
        }
    }
    outcome(
        worst <= 1e-9 && rank_changes == 0,
        format!("max table error {worst:.2e}, rank changes {rank_changes}"),
    )
}

fn ac10_orbits() -> Outcome {
    let mut mismatches = Vec::new();
    let mut cases = 0;
    for d in (3..=35).step_by(2) {
        for kappa in admissible_kappas(d) {
            cases += 1;
            let b = angle_orbit_bound(d, kappa).unwrap();
            if !b.formula_matches() {
                mismatches.push(format!("d={d} kappa={kappa}: {} vs {}", b.formula, b.m_max));
            }
        }
    }
    let mut exceed = Vec::new();
    let mut spaces = 0;
    for d in [5usize, 7, 11, 13] {
        for kappa in admissible_kappas(d) {
            let bound = angle_orbit_bound(d, kappa).unwrap().m_max;
            for a in 0..d as i64 {
                for (b, c) in [(0i64, 0i64), (1, 0), (3, 0), (0, 1)] {
                    let space = SymmetricSpace::new(a, b, c, kappa, d).unwrap();
                    if space.dim() == 0 {
                        continue;
                    }
                    spaces += 1;
                    for i in 0..100 {
                        let mut rng = trial_rng(10, (spaces * 1000 + i) as usize);
                        let g = space.random_element(&mut rng).unwrap();
                        let m = ambiguity_table(&g).distinct_moduli(1e-7, true).len();
                        if m > bound {
                            exceed.push((d, kappa, a, b, c, m, bound));
                        }
                    }
                }
            }
        }
    }
    let mut corollary = Vec::new();
    for d in [5usize, 7, 11] {
        let gen = (2..d).find(|&k| mult_order(k, d) == d - 1).unwrap() as i64;
        let m = angle_orbit_bound(d, gen).unwrap().m_max;
        if m != d + 2 {
            corollary.push((d, gen, m));
        }
    }
    let passed = mismatches.is_empty() && exceed.is_empty() && corollary.is_empty();
    outcome(
        passed,
        format!(
            "{cases} (d, kappa) pairs, formula mismatches [{}]; {spaces} spaces, bound exceeded {}; corollary failures {corollary:?}",
            mismatches.join(", "),
            exceed.len()
        ),
    )
}

fn ac11_density() -> Outcome {
    let start = Instant::now();
    let mut passed = true;
    let mut details = Vec::new();
    for d in [3usize, 5, 7] {
        let rep = verify_density_bound(d, 10_000, 11, &policy()).unwrap();
        passed &= rep.passed;
        details.push(format!("d={d} {}", if rep.passed { "ok" } else { "violated" }));
    }
    for d in [2usize, 3, 5, 7] {
        let (count, min_abs) = dft_minors(d);
        passed &= min_abs >= 1e-9;
        details.push(format!("d={d} {count} minors min |det| {min_abs:.2e}"));
    }
    let (fast, time) = within(Duration::from_secs(300), start);
    passed &= fast;
    details.push(time);
    outcome(passed, details.join("; "))
}

fn ac12_search() -> Outcome {
    let start = Instant::now();
    let mut passed = true;
    let mut details = Vec::new();
    for d in 2..=7 {
        let r = search(&SearchConfig::new(d, 12)).unwrap();
        let report = spectrum_closed_form(&r.g, &policy());
        let ok = r.objective < 1e-10
            && r.max_angle_deviation < 1e-5
            && report.is_sic
            && report.rank == d * d;
        passed &= ok;
        details.push(format!(
            "d={d} F={:.1e} dev={:.1e} sic={} rank={}",
            r.objective, r.max_angle_deviation, report.is_sic, report.rank
        ));
    }
    let (fast, time) = within(Duration::from_secs(300), start);
    passed &= fast;
    details.push(time);
    outcome(passed, details.join("; "))
}

fn ac13_gradient() -> Outcome {
    let h = 1e-6;
    let mut worst = 0.0f64;
    for d in [2usize, 3, 4] {
        for s in 0..20u64 {
            let g = random_haar::<f64>(d, 13_000 + 100 * d as u64 + s).unwrap();
            let grad = sic_gradient(&g);
            let f = |v: CVec<f64>| sic_objective(&UnitVector64::normalize(v).unwrap());
            let scale = grad.norm().max(1e-12);
            for m in 0..d as i64 {
                for dir in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                    let mut plus = g.vec().clone();
                    let mut minus = g.vec().clone();
                    plus[m] += dir * h;
                    minus[m] -= dir * h;
                    let fd = (f(plus) - f(minus)) / (2.0 * h);
                    let an = (dir.conj() * grad[m]).re;
                    worst = worst.max((fd - an).abs() / scale);
                }
            }
        }
    }
    outcome(worst <= 1e-5, format!("max relative deviation {worst:.2e}"))
}

fn ac14_genericity() -> Outcome {
    let mut details = Vec::new();
    let mut passed = true;
    for d in 2..=10usize {
        let full = (0..1000u64)
            .filter(|&s| rank(&random_haar::<f64>(d, 14_000 * d as u64 + s).unwrap(), &policy()) == d * d)
            .count();
        passed &= full >= 999;
        if full < 1000 {
            details.push(format!("d={d}: {full}/1000"));
        }
    }
    let mut supports = 0;
    let mut failures = Vec::new();
    for d in 1..=9usize {
        for mask in 1u32..(1 << d) {
            let s: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
            if 2 * s.len() <= d {
                continue;
            }
            supports += 1;
            match support_full_rank::<f64>(&s, d, mask as u64) {
                Ok(g) if rank(&g, &policy()) == d * d => {}
                other => failures.push(format!("d={d} S={s:?}: {:?}", other.map(|_| "rank deficient"))),
            }
        }
    }
    passed &= failures.is_empty();
    details.push(format!("{supports} supports, failures {failures:?}"));
    outcome(passed, details.join("; "))
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("oracle equivalence", ac1_oracle),
        ("rank formula vs numerical rank", ac2_rank_formula),
        ("comb classification", ac3_comb),
        ("alltop rank, angles and MUB", ac4_alltop),
        ("bjorck d=7", ac5_bjorck),
        ("two-spike ranks", ac6_two_spike),
        ("d=4 and d=5 rank lists", ac7_dim45),
        ("rank gap", ac8_rank_gap),
        ("transform invariance", ac9_transforms),
        ("orbit bound", ac10_orbits),
        ("density bound and DFT minors", ac11_density),
        ("SIC search", ac12_search),
        ("gradient check", ac13_gradient),
        ("genericity", ac14_genericity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.passed);
        println!(
            "AC{:<2} {} {name}: {} ({:.1}s)",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
