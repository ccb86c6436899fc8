//! One PASS/FAIL line per acceptance criterion.
//!
//! Exits 0 after printing every line. Set `ACCEPTANCE_STRICT=1` to exit 1
//! when any criterion fails.

use std::time::Instant;

use ddbar_core::fock_basis::hermite_polynomial;
use ddbar_core::numeric::{fd_residual_k1, project, synthesize, GridSpec, QuadratureRule};
use ddbar_core::spectral::{
    factorial_f64, operator_norm_probe, seeded_box_data, solve, solve_disk, solve_scaled, DiskProblem, DiskQuadrature,
    ProblemSpec, ScaledProblem, CERTIFICATION_GRID,
};
use ddbar_core::symbolic::{
    gaussian_derivative_closed_form, lemma_suite, weight_identity_suite, weighted_derivative, Direction,
    WeightedGaussianFunction,
};
use ddbar_core::{BasisIndex, HermiteCoeffs, Normalization, PolyZZbar};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

const SEED: u64 = 42;

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

fn outcome(id: u32, name: &'static str, pass: bool, summary: String) -> Outcome {
    Outcome { id, name, pass, summary, notes: Vec::new() }
}

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let reports: Vec<_> = (1..=3).flat_map(|k| lemma_suite(k, 20, SEED)).collect();
    let secs = start.elapsed().as_secs_f64();
    let mut notes = Vec::new();
    let mut tally = std::collections::BTreeMap::<&str, (usize, usize)>::new();
    for r in &reports {
        let e = tally.entry(r.identity_name.as_str()).or_default();
        e.1 += 1;
        if r.holds {
            e.0 += 1;
        } else if notes.len() < 3 {
            notes.push(r.to_string());
        }
    }
    let all = reports.iter().all(|r| r.holds);
    let counts: Vec<String> = tally.iter().map(|(n, (ok, tot))| format!("{n} {ok}/{tot}")).collect();
    let mut o = outcome(
        1,
        "exact lemma suite k=1..3, 20 random phi",
        all && secs < 60.0,
        format!("{}; {secs:.1}s", counts.join(", ")),
    );
    o.notes = notes;
    o
}

fn criterion_2() -> Outcome {
    let one = WeightedGaussianFunction::gaussian(PolyZZbar::one());
    let mut mismatches = 0;
    for i in 0..=6 {
        for j in 0..=6 {
            let inner = weighted_derivative(&one, Direction::Dzbar, i);
            let iterated = weighted_derivative(&inner, Direction::Dz, j).poly;
            if iterated != gaussian_derivative_closed_form(j, i) {
                mismatches += 1;
            }
        }
    }
    outcome(2, "Gaussian-derivative closed form, 0<=i,j<=6", mismatches == 0, format!("{} of 49 cases equal", 49 - mismatches))
}

fn criterion_3() -> Outcome {
    let reports = weight_identity_suite(10, SEED);
    let ok = reports.iter().filter(|r| r.holds).count();
    let mut o = outcome(3, "k=1 weight identity, 10 random (g, phi)", ok == reports.len(), format!("{ok}/{} hold", reports.len()));
    o.notes = reports.iter().filter(|r| !r.holds).take(3).map(|r| r.to_string()).collect();
    o
}

fn criterion_4() -> Outcome {
    const TRUNCATION: u32 = 32;
    let cases: Vec<(u32, usize, u64)> = (1..=4)
        .flat_map(|k| (0..CERTIFICATION_GRID.len()).flat_map(move |ci| (0..100).map(move |t| (k, ci, t))))
        .collect();
    let results: Vec<(f64, f64, Option<String>)> = cases
        .par_iter()
        .map(|&(k, ci, t)| {
            let f = seeded_box_data(SEED ^ ((k as u64) << 40) ^ ((ci as u64) << 32) ^ t, TRUNCATION - k);
            let c = CERTIFICATION_GRID[ci];
            match solve(&ProblemSpec { k, c, truncation: TRUNCATION, f }) {
                Ok((_, r)) => (r.bound_ratio, r.residual_norm / r.f_norm, None),
                Err(e) => (f64::INFINITY, f64::INFINITY, Some(format!("k={k} c={c}: {e}"))),
            }
        })
        .collect();
    let worst_bound = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let worst_res = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let mut o = outcome(
        4,
        "bound certification k=1..4, 9 values of c, 100 random f, M=32",
        worst_bound <= 1.0 + 1e-10 && worst_res <= 1e-10,
        format!("{} runs; max bound_ratio {worst_bound:.15}, max relative residual {worst_res:.2e}", results.len()),
    );
    o.notes = results.iter().filter_map(|r| r.2.clone()).take(3).collect();
    o
}

fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for k in 1..=4 {
        let f = HermiteCoeffs::basis(BasisIndex::new(0, 0), cz(1.0, 0.0), Normalization::Raw);
        let (_, r) = solve(&ProblemSpec { k, c: cz(0.0, 0.0), truncation: 32, f }).unwrap();
        pass &= (r.bound_ratio - 1.0).abs() <= 1e-12;
        parts.push(format!("k={k}: {:.16}", r.bound_ratio));
    }
    outcome(5, "sharpness at c=0, f=H_{0,0}", pass, parts.join(", "))
}

fn criterion_6() -> Outcome {
    const TRUNCATION: u32 = 32;
    const TRIALS: usize = 8;
    let cases: Vec<(u32, usize)> = (1..=4).flat_map(|k| (0..CERTIFICATION_GRID.len()).map(move |ci| (k, ci))).collect();
    let probes: Vec<(u32, usize, f64)> = cases
        .iter()
        .map(|&(k, ci)| {
            let c = CERTIFICATION_GRID[ci];
            (k, ci, operator_norm_probe(k, c, TRIALS, TRUNCATION, SEED).unwrap())
        })
        .collect();
    let mut pass = true;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut zero_gap = f64::NEG_INFINITY;
    for &(k, ci, p) in &probes {
        let bound = 1.0 / factorial_f64(k);
        worst_excess = worst_excess.max(p - bound);
        pass &= p <= bound + 1e-10;
        if ci == 0 {
            zero_gap = zero_gap.max(bound - p);
            pass &= p >= bound - 1e-10;
        }
    }
    outcome(
        6,
        "right inverse norm probe",
        pass,
        format!("{} (k, c) pairs; max probe - 1/k! = {worst_excess:.3e}; max 1/k! - probe at c=0 = {zero_gap:.3e}", probes.len()),
    )
}

fn criterion_7() -> Outcome {
    let lambdas = [0.5, 1.0, 2.0, 3.0];
    let centers = [cz(0.0, 0.0), cz(1.0, 1.0)];
    let data = [
        HermiteCoeffs::basis(BasisIndex::new(0, 0), cz(1.0, 0.0), Normalization::Raw),
        HermiteCoeffs::basis(BasisIndex::new(1, 1), cz(1.0, 0.0), Normalization::Raw),
        HermiteCoeffs::from_entries(
            Normalization::Raw,
            [(BasisIndex::new(2, 0), cz(1.0, -1.0)), (BasisIndex::new(0, 3), cz(0.5, 0.0))],
        ),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    let mut worst: f64 = 0.0;
    for &lambda in &lambdas {
        for &z0 in &centers {
            for k in 1..=2 {
                for g in &data {
                    let base = ProblemSpec { k, c: cz(0.0, 0.0), truncation: 16, f: g.clone() };
                    let s = solve_scaled(&ScaledProblem { lambda, z0, base }).unwrap();
                    let limit = 1.0 / (lambda.powi(k as i32) * factorial_f64(k)).powi(2);
                    let rel = s.report.ratio_sq / limit;
                    worst = worst.max(rel);
                    if s.report.ratio_sq > limit * (1.0 + 1e-12) {
                        pass = false;
                        if notes.len() < 3 {
                            notes.push(format!(
                                "lambda={lambda} z0={z0} k={k}: ratio {:.6} exceeds 1/(lambda^k k!)^2 = {limit:.6}",
                                s.report.ratio_sq
                            ));
                        }
                    }
                }
            }
        }
    }
    let hand = solve_scaled(&ScaledProblem {
        lambda: 2.0,
        z0: cz(0.0, 0.0),
        base: ProblemSpec { k: 1, c: cz(0.0, 0.0), truncation: 16, f: data[1].clone() },
    })
    .unwrap();
    let hand_ok = (hand.report.ratio_sq - 1.0 / 16.0).abs() <= 1e-12;
    if !hand_ok {
        notes.push(format!("hand case lambda=2, k=1, g=H_{{1,1}}: ratio {} (expected 1/16)", hand.report.ratio_sq));
    }
    let mut o = outcome(
        7,
        "dilated weight: ratio <= 1/(lambda^k k!)^2, hand case 1/16",
        pass && hand_ok,
        format!("max ratio/limit {worst:.4}; hand case ratio {}", hand.report.ratio_sq),
    );
    o.notes = notes;
    o
}

fn criterion_8() -> Outcome {
    let fs = [
        ("1", PolyZZbar::one()),
        ("z", PolyZZbar::z()),
        ("z*zb", PolyZZbar::zzbar()),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    let mut notes = Vec::new();
    for k in 1..=2 {
        for (name, f) in &fs {
            let p = DiskProblem {
                center: cz(0.0, 0.0),
                radius: 1.0,
                f_poly: f.clone(),
                k,
                c: cz(0.0, 0.0),
                truncation: 24,
                quadrature: None,
            };
            let run = solve_disk(&p).and_then(|coarse| {
                let q = DiskQuadrature::default_for(p.truncation, f.degree().unwrap_or(0)).doubled();
                solve_disk(&DiskProblem { quadrature: Some(q), ..p.clone() }).map(|fine| (coarse, fine))
            });
            match run {
                Ok((a, b)) => {
                    let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
                    let du = rel(a.report.u_disk_norm_sq, b.report.u_disk_norm_sq);
                    let df = rel(a.report.f_disk_norm_sq, b.report.f_disk_norm_sq);
                    let ok = a.report.bound_holds && du <= 1e-6 && df <= 1e-6;
                    pass &= ok;
                    parts.push(format!("k={k} f={name}: {:.4e}/{:.4e}", a.report.ratio, a.report.constant));
                    if !ok {
                        notes.push(format!("k={k} f={name}: bound {} du {du:.2e} df {df:.2e}", a.report.bound_holds));
                    }
                }
                Err(e) => {
                    pass = false;
                    notes.push(format!("k={k} f={name}: {e}"));
                }
            }
        }
    }
    let mut o = outcome(8, "unit disk: int_U|u|^2 <= e^{|U|^2}/(k!)^2 int_U|f|^2", pass, format!("ratio/constant {}", parts.join(", ")));
    o.notes = notes;
    o
}

fn criterion_9() -> Outcome {
    let zero = cz(0.0, 0.0);
    let f00 = HermiteCoeffs::basis(BasisIndex::new(0, 0), cz(1.0, 0.0), Normalization::Raw);
    let f11 = HermiteCoeffs::basis(BasisIndex::new(1, 1), cz(1.0, 0.0), Normalization::Raw);
    let (u1, _) = solve(&ProblemSpec { k: 1, c: zero, truncation: 8, f: f00.clone() }).unwrap();
    let (u2, _) = solve(&ProblemSpec { k: 1, c: zero, truncation: 8, f: f11.clone() }).unwrap();
    let u2_expected = HermiteCoeffs::basis(BasisIndex::new(2, 2), cz(0.25, 0.0), Normalization::Raw);
    let solved_ok = u2.to_raw().add(&u2_expected.scale(&cz(-1.0, 0.0))).to_orthonormal().weighted_norm() <= 1e-14;
    let r_quad = fd_residual_k1(&u1, &f00.to_orthonormal(), zero, &GridSpec::square(1.0, 0.1)).unwrap();
    let hs = [0.1, 0.05, 0.025];
    let rs: Vec<f64> = hs
        .iter()
        .map(|&h| fd_residual_k1(&u2, &f11.to_orthonormal(), zero, &GridSpec::square(1.0, h)).unwrap())
        .collect();
    let slopes = [(rs[0] / rs[1]).log2(), (rs[1] / rs[2]).log2()];
    let pass = solved_ok && r_quad <= 1e-10 && slopes.iter().all(|s| (s - 2.0).abs() <= 0.2);
    outcome(
        9,
        "finite-difference cross-check, 4 d dbar = Laplacian",
        pass,
        format!("H_{{1,1}} residual {r_quad:.2e}; H_{{2,2}}/4 residuals {:.3e} {:.3e} {:.3e}, slopes {:.4} {:.4}", rs[0], rs[1], rs[2], slopes[0], slopes[1]),
    )
}

fn criterion_10() -> Outcome {
    let rule = QuadratureRule::full_plane_for_degree(40);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_parseval: f64 = 0.0;
    let mut worst_round: f64 = 0.0;
    for trial in 0..6 {
        let mut u = HermiteCoeffs::orthonormal();
        let dense = trial % 2 == 0;
        for m in 0..=20 {
            for n in 0..=20 {
                if dense || rng.random_range(0..8) == 0 {
                    u.accumulate(BasisIndex::new(m, n), cz(rng.sample(StandardNormal), rng.sample(StandardNormal)));
                }
            }
        }
        let coeff = u.weighted_norm().powi(2);
        let quad = rule.integrate(|z| synthesize(&u, z).norm_sqr().into()).re;
        worst_parseval = worst_parseval.max((quad - coeff).abs() / coeff);
        let p = project(|z| synthesize(&u, z), 20, &rule).unwrap();
        let diff = p.coeffs.to_orthonormal().add(&u.scale(&cz(-1.0, 0.0))).weighted_norm();
        worst_round = worst_round.max(diff / u.weighted_norm());
    }
    outcome(
        10,
        "Parseval and project(synthesize) on [0,20]^2",
        worst_parseval <= 1e-8 && worst_round <= 1e-10,
        format!("max Parseval defect {worst_parseval:.2e}, max round-trip error {worst_round:.2e}"),
    )
}

fn main() {
    assert_eq!(hermite_polynomial(BasisIndex::new(1, 1)).to_string(), "z*zb - 1");
    let runs: [fn() -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut failed = 0;
    for run in runs {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} [{}] {}: {} ({:.1}s)", o.id, o.name, o.summary, start.elapsed().as_secs_f64());
        for n in &o.notes {
            println!("       {n}");
        }
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
