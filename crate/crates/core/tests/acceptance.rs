//! Acceptance gate. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits non-zero if any fails.
//!
//! Run with `cargo test -p transversal --test acceptance`.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transversal::cli::{run_cli_with, EXIT_OK, EXIT_VERIFY};
use transversal::io::{parse_instance, parse_result, write_instance, write_result};
use transversal::prelude::*;

use common::{corpus_instance, three_squares};

const CORPUS_SEEDS: std::ops::RangeInclusive<u64> = 1..=200;
const ORACLE_STEPS: usize = 100_000;
const ORACLE_C_TOL: f64 = 1e-10;
const GRID_DIRECTIONS: usize = 100_000;

struct Entry {
    config: Configuration,
    solution: Solution,
    oracle: f64,
}

static REPORTED: AtomicBool = AtomicBool::new(false);

fn report(id: &str, ok: bool, detail: String) {
    REPORTED.store(true, Ordering::SeqCst);
    println!("{} {id}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{id} failed: {detail}");
}

/// Runs `f` over `items` on all cores, preserving order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .max(1);
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(&f).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn corpus() -> &'static [Entry] {
    static CORPUS: OnceLock<Vec<Entry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let seeds: Vec<u64> = CORPUS_SEEDS.collect();
        par_map(&seeds, |&seed| {
            let config = corpus_instance(seed);
            let solution = solve_minimal_expansion(&config, &SolverOptions::default()).unwrap();
            let oracle = brute_force_c_m(&config, ORACLE_STEPS, ORACLE_C_TOL);
            Entry {
                config,
                solution,
                oracle,
            }
        })
    })
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

fn ac1_three_squares_benchmark() {
    let config = three_squares();
    let start = Instant::now();
    let sol = solve_minimal_expansion(&config, &SolverOptions::default()).unwrap();
    let elapsed = start.elapsed();

    let rel = (sol.c_m - 1.2).abs() / 1.2;
    let expected = [
        Line::from_implicit(3.0, 2.0, 6.0).unwrap(),
        Line::from_implicit(3.0, -2.0, 6.0).unwrap(),
    ];
    let lines_ok = sol.lines.len() == 2
        && expected.iter().all(|e| {
            sol.lines.iter().any(|l| {
                (l.theta() - e.theta()).abs() <= 1e-6 && (l.offset() - e.offset()).abs() <= 1e-6
            })
        });
    let certs_ok = sol.certificates.len() == 2
        && sol.certificates.iter().all(|c| {
            c.tangent_indices == vec![0, 1, 2]
                && c.sides.contains(&Side::Negative)
                && c.sides.contains(&Side::Positive)
        });
    let ok = rel <= 1e-6 && lines_ok && certs_ok && elapsed.as_millis() < 100;
    report(
        "AC1 three-squares benchmark",
        ok,
        format!(
            "c_m={:.16e} rel_err={rel:.2e} lines={} certificates_ok={certs_ok} runtime={:?}",
            sol.c_m,
            sol.lines.len(),
            elapsed
        ),
    );
}

fn ac2_oracle_equivalence() {
    let start = Instant::now();
    let entries = corpus();
    let worst = entries
        .iter()
        .map(|e| (e.solution.c_m - e.oracle).abs() / e.oracle)
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let n_range_ok = entries.iter().all(|e| (3..=10).contains(&e.config.len()));
    report(
        "AC2 oracle equivalence",
        worst <= 1e-5 && n_range_ok && elapsed.as_secs() < 180,
        format!(
            "{} instances, worst |solver-oracle|/oracle={worst:.2e}, corpus build {:?}",
            entries.len(),
            elapsed
        ),
    );
}

fn ac3_forward_certificate() {
    let mut violations = Vec::new();
    let mut lines = 0;
    for (k, e) in corpus().iter().enumerate() {
        let sol = &e.solution;
        if sol.degenerate {
            continue;
        }
        for (line, cert) in sol.lines.iter().zip(&sol.certificates) {
            lines += 1;
            let fresh = extract_certificate(&e.config, sol.c_m, line, 1e-7);
            let strict = cert.sides.contains(&Side::Negative) && cert.sides.contains(&Side::Positive);
            let residual_ok = cert.residuals.iter().all(|r| *r <= 1e-7);
            if fresh.is_err() || cert.tangent_indices.len() < 3 || !strict || !residual_ok {
                violations.push(k + 1);
            }
        }
        if sol.certificates.len() != sol.lines.len() {
            violations.push(k + 1);
        }
    }
    report(
        "AC3 forward certificate",
        violations.is_empty(),
        format!("{lines} optimal lines checked, violations at seeds {violations:?}"),
    );
}

fn ac4_minimality_and_tightness() {
    let entries = corpus();
    let results = par_map(entries, |e| {
        let sol = &e.solution;
        let below = sol.c_m * (1.0 - 1e-4);
        let empty_everywhere = (0..GRID_DIRECTIONS).all(|k| {
            let dir = Direction::new(k as f64 * PI / GRID_DIRECTIONS as f64);
            feasible_offset_interval(&e.config, below, dir).is_none()
        });
        let scale = e.config.scale();
        let widest = sol
            .lines
            .iter()
            .map(|l| {
                feasible_offset_interval(&e.config, sol.c_m, l.direction())
                    .map_or(0.0, |iv| iv.width())
            })
            .fold(0.0, f64::max);
        (empty_everywhere, widest <= 1e-8 * scale, widest / scale)
    });
    let bad_min: Vec<usize> = (0..results.len()).filter(|&i| !results[i].0).map(|i| i + 1).collect();
    let bad_width: Vec<usize> = (0..results.len()).filter(|&i| !results[i].1).map(|i| i + 1).collect();
    let worst_width = results.iter().map(|r| r.2).fold(0.0, f64::max);
    report(
        "AC4 minimality and tightness",
        bad_min.is_empty() && bad_width.is_empty(),
        format!(
            "feasible below c_m at seeds {bad_min:?}; width violations at seeds {bad_width:?}; worst width/scale={worst_width:.2e}"
        ),
    );
}

fn ac5_self_consistency() {
    let entries = corpus();
    let values = par_map(entries, |e| {
        let scaled = scale_configuration(&e.config, e.solution.c_m).unwrap();
        solve_minimal_expansion(&scaled, &SolverOptions::default())
            .unwrap()
            .c_m
    });
    let worst = values.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    report(
        "AC5 self-consistency",
        worst <= 1e-6,
        format!("max |c_m' - 1| = {worst:.2e} over {} instances", values.len()),
    );
}

fn ac6_v_shape_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst_affine = 0.0f64;
    let mut worst_apex = 0.0f64;
    let mut worst_slope = 0.0f64;
    let mut worst_scaling = 0.0f64;
    let mut tangency_failures = 0;
    for trial in 0..1000u64 {
        let recipe = InstanceRecipe {
            seed: 10_000 + trial,
            n_polygons: 1,
            centroid_box: (Point::new(-5.0, -5.0), Point::new(5.0, 5.0)),
            radius_range: (0.1, 3.0),
            ..InstanceRecipe::default()
        };
        let poly = random_instance(&recipe).unwrap().polygons()[0].clone();
        let dir = Direction::new(rng.gen_range(0.0..PI));
        let prof = factor_profile(&poly, dir);
        let n = dir.normal();

        // two-piece linearity, sampled on each side of the apex
        let reach = 3.0 * poly.support_value(n).max(poly.support_value(-n));
        for sign in [1.0, -1.0] {
            let offsets: Vec<f64> = (1..=100)
                .map(|k| prof.apex_offset + sign * reach * k as f64 / 100.0)
                .collect();
            let values: Vec<f64> = offsets
                .iter()
                .map(|&b| correcting_factor(&poly, &Line::new(dir, b)))
                .collect();
            let (b0, b1) = (offsets[0], offsets[99]);
            let (f0, f1) = (values[0], values[99]);
            for (b, f) in offsets.iter().zip(&values) {
                let affine = f0 + (f1 - f0) * (b - b0) / (b1 - b0);
                worst_affine = worst_affine.max((f - affine).abs());
            }
        }
        worst_apex = worst_apex.max(correcting_factor(&poly, &Line::new(dir, prof.apex_offset)));
        let w_pos = poly.support_value(n);
        let w_neg = poly.support_value(-n);
        worst_slope = worst_slope
            .max(((1.0 / prof.slope_pos) - w_pos).abs() / w_pos)
            .max(((1.0 / prof.slope_neg) - w_neg).abs() / w_neg);

        // scaling law
        let line = Line::new(dir, prof.apex_offset + rng.gen_range(-reach..reach));
        let base = correcting_factor(&poly, &line);
        let a = 10f64.powf(rng.gen_range(-1.0..1.0));
        let scaled = poly.scaled(a).unwrap();
        let expect = base / a;
        if base > 0.0 {
            worst_scaling =
                worst_scaling.max((correcting_factor(&scaled, &line) - expect).abs() / expect);
        }

        // tangency characterization
        if base > 0.0 {
            let tol = 1e-9 * poly.max_abs_coordinate().max(1.0) * base.max(1.0);
            let at = is_tangent(&poly.scaled(base).unwrap(), &line, tol).0;
            let under = is_tangent(&poly.scaled(base * (1.0 - 1e-3)).unwrap(), &line, tol).0;
            let over = is_tangent(&poly.scaled(base * (1.0 + 1e-3)).unwrap(), &line, tol).0;
            if !at || under || over {
                tangency_failures += 1;
            }
        }
    }
    let ok = worst_affine <= 1e-10
        && worst_apex == 0.0
        && worst_slope <= 1e-12
        && worst_scaling <= 1e-9
        && tangency_failures == 0;
    report(
        "AC6 V-shape suite",
        ok,
        format!(
            "affine residual {worst_affine:.2e}, apex {worst_apex:.1e}, slope {worst_slope:.2e}, scaling {worst_scaling:.2e}, tangency failures {tangency_failures}"
        ),
    );
}

fn ac7_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let opts = SolverOptions::default();
    let mut worst_rigid = 0.0f64;
    let mut theta_misses = 0;
    for k in 0..50u64 {
        let config = corpus_instance(1 + k);
        let base = solve_minimal_expansion(&config, &opts).unwrap();
        let phi = rng.gen_range(-PI..PI);
        let shift = Point::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
        let s = 10f64.powf(rng.gen_range(-2.0..2.0));
        let (sn, cs) = phi.sin_cos();
        let moved = config
            .map_points(|p| {
                let r = Point::new(cs * p.x - sn * p.y, sn * p.x + cs * p.y);
                s * r + shift
            })
            .unwrap();
        let sol = solve_minimal_expansion(&moved, &opts).unwrap();
        worst_rigid = worst_rigid.max((sol.c_m - base.c_m).abs() / base.c_m);
        for l in &base.lines {
            if !sol.lines.iter().any(|m| angle_gap(m.theta(), l.theta() + phi) <= 1e-6) {
                theta_misses += 1;
            }
        }
    }

    let mut decreases = Vec::new();
    for k in 0..100u64 {
        let config = corpus_instance(1 + k);
        let extra = random_instance(&InstanceRecipe {
            seed: 50_000 + k,
            n_polygons: 1,
            ..InstanceRecipe::default()
        })
        .unwrap();
        let mut polys = config.polygons().to_vec();
        polys.push(extra.polygons()[0].clone());
        let bigger = Configuration::new(polys).unwrap();
        let before = solve_minimal_expansion(&config, &opts).unwrap().c_m;
        let after = solve_minimal_expansion(&bigger, &opts).unwrap().c_m;
        if after < before * (1.0 - 1e-12) {
            decreases.push(k);
        }
    }
    report(
        "AC7 invariance",
        worst_rigid <= 1e-9 && theta_misses == 0 && decreases.is_empty(),
        format!(
            "worst rigid/scale rel change {worst_rigid:.2e}, theta misses {theta_misses}, monotonicity violations {decreases:?}"
        ),
    );
}

fn ac8_degeneracy() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let opts = SolverOptions::default();
    let mut configs = Vec::new();
    for k in 0..50u64 {
        for n in [1, 2] {
            configs.push(
                random_instance(&InstanceRecipe {
                    seed: 80_000 + 2 * k + n as u64,
                    n_polygons: n,
                    ..InstanceRecipe::default()
                })
                .unwrap(),
            );
        }
        // collinear centroids along a random line
        let base = corpus_instance(300 + k);
        let angle = rng.gen_range(0.0..PI);
        let dir = Point::new(angle.cos(), angle.sin());
        let origin = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let polys = base
            .polygons()
            .iter()
            .map(|p| {
                let target = origin + rng.gen_range(-3.0..3.0) * dir;
                let shift = target - p.centroid();
                p.map_points(|v| v + shift).unwrap()
            })
            .collect();
        configs.push(Configuration::new(polys).unwrap());
    }
    let mut failures = Vec::new();
    for (i, cfg) in configs.iter().enumerate() {
        let sol = solve_minimal_expansion(cfg, &opts).unwrap();
        let tol = 1e-9 * cfg.scale();
        let on_line = cfg
            .centroids()
            .iter()
            .all(|c| sol.lines[0].signed_distance(*c).abs() <= tol);
        if !(sol.degenerate && sol.c_m == 0.0 && on_line) {
            failures.push(i);
        }
    }
    report(
        "AC8 degeneracy",
        failures.is_empty(),
        format!("{} degenerate instances, failures {failures:?}", configs.len()),
    );
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["transversal"];
    argv.extend_from_slice(args);
    let code = run_cli_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn ac9_tooling() {
    let dir = tempfile::tempdir().unwrap();

    // instance and result round trips
    let mut roundtrip_failures = Vec::new();
    for seed in 1..=100u64 {
        let cfg = corpus_instance(seed);
        let text = write_instance(&cfg);
        let back = parse_instance(&text).unwrap();
        let sol = solve_minimal_expansion(&cfg, &SolverOptions::default()).unwrap();
        let rtext = write_result(&sol, &cfg);
        let rback = parse_result(&rtext).unwrap().to_solution().unwrap();
        if back != cfg || write_instance(&back) != text || rback != sol || write_result(&rback, &back) != rtext {
            roundtrip_failures.push(seed);
        }
    }

    // verify(solve(x)) over the corpus, via the CLI
    let seeds: Vec<u64> = CORPUS_SEEDS.collect();
    let verify_codes = par_map(&seeds, |&seed| {
        let inst = dir.path().join(format!("inst_{seed}.json"));
        let res = dir.path().join(format!("res_{seed}.json"));
        std::fs::write(&inst, write_instance(&corpus_instance(seed))).unwrap();
        let (solve_code, _, _) = cli(&["solve", path_str(&inst), "--out", path_str(&res)]);
        let (verify_code, _, _) = cli(&["verify", path_str(&inst), path_str(&res)]);
        (solve_code, verify_code)
    });
    let verify_failures: Vec<u64> = seeds
        .iter()
        .zip(&verify_codes)
        .filter(|(_, c)| **c != (EXIT_OK, EXIT_OK))
        .map(|(s, _)| *s)
        .collect();

    // fault injection: c_m lowered by 1%
    let fault_seeds: Vec<u64> = (1..=10).collect();
    let fault_codes = par_map(&fault_seeds, |&seed| {
        let inst = dir.path().join(format!("inst_{seed}.json"));
        let res = dir.path().join(format!("res_{seed}.json"));
        let tampered = dir.path().join(format!("tampered_{seed}.json"));
        let mut file = parse_result(&std::fs::read_to_string(&res).unwrap()).unwrap();
        file.c_m *= 0.99;
        std::fs::write(&tampered, serde_json::to_string_pretty(&file).unwrap()).unwrap();
        cli(&["verify", path_str(&inst), path_str(&tampered)]).0
    });
    let faults_caught = fault_codes.iter().all(|&c| c == EXIT_VERIFY);

    // gen determinism
    let mut gen_ok = true;
    for seed in [7u64, 11, 12345] {
        let a = dir.path().join(format!("gen_a_{seed}.json"));
        let b = dir.path().join(format!("gen_b_{seed}.json"));
        let s = seed.to_string();
        let ca = cli(&["gen", "--seed", &s, "--n", "5", "--out", path_str(&a)]).0;
        let cb = cli(&["gen", "--seed", &s, "--n", "5", "--out", path_str(&b)]).0;
        gen_ok &= ca == EXIT_OK
            && cb == EXIT_OK
            && std::fs::read(&a).unwrap() == std::fs::read(&b).unwrap();
    }

    report(
        "AC9 tooling",
        roundtrip_failures.is_empty() && verify_failures.is_empty() && faults_caught && gen_ok,
        format!(
            "round-trip failures {roundtrip_failures:?}; verify failures {verify_failures:?}; fault exit codes {fault_codes:?}; gen deterministic {gen_ok}"
        ),
    );
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 9] = [
        ("AC1", ac1_three_squares_benchmark),
        ("AC2", ac2_oracle_equivalence),
        ("AC3", ac3_forward_certificate),
        ("AC4", ac4_minimality_and_tightness),
        ("AC5", ac5_self_consistency),
        ("AC6", ac6_v_shape_suite),
        ("AC7", ac7_invariance),
        ("AC8", ac8_degeneracy),
        ("AC9", ac9_tooling),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        REPORTED.store(false, Ordering::SeqCst);
        if catch_unwind(AssertUnwindSafe(run)).is_err() {
            failed += 1;
            if !REPORTED.load(Ordering::SeqCst) {
                println!("FAIL {id}: panicked");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
