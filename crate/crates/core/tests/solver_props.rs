mod common;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transversal::prelude::*;

use common::{corpus_instance, three_squares};

/// Minimum over offsets of the largest correcting factor, by a dense scan
/// followed by a second dense scan of the best cell.
fn scanned_min_max_factor(config: &Configuration, dir: Direction) -> f64 {
    let worst = |b: f64| {
        config
            .polygons()
            .iter()
            .map(|p| correcting_factor(p, &Line::new(dir, b)))
            .fold(0.0, f64::max)
    };
    let n = dir.normal();
    let (lo, hi) = config
        .centroids()
        .iter()
        .map(|s| n.dot(*s))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let scan = |lo: f64, hi: f64| {
        let steps = 10_000;
        let h = (hi - lo) / steps as f64;
        (0..=steps)
            .map(|k| {
                let b = lo + k as f64 * h;
                (b, worst(b))
            })
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(b, v)| (b, v, h))
            .unwrap()
    };
    let (b, _, h) = scan(lo, hi);
    scan(b - h, b + h).1
}

#[test]
fn directional_optimum_matches_offset_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for k in 0..500u64 {
        let config = corpus_instance(1000 + k);
        let dir = Direction::new(rng.gen_range(0.0..PI));
        let opt = min_c_for_direction(&config, dir);
        let scanned = scanned_min_max_factor(&config, dir);
        assert!(
            (opt.c_star - scanned).abs() <= 1e-6 * scanned.max(1e-12),
            "instance {k}: pairwise {} scan {}",
            opt.c_star,
            scanned
        );
        // c_star is attained at the reported offset
        let at_offset = config
            .polygons()
            .iter()
            .map(|p| correcting_factor(p, &opt.line()))
            .fold(0.0, f64::max);
        assert!((at_offset - opt.c_star).abs() <= 1e-10 * opt.c_star.max(1.0));
        if opt.c_star > 0.0 {
            assert!(!opt.active_pairs.is_empty());
        }
    }
}

#[test]
fn three_squares_certificates_and_sides() {
    let config = three_squares();
    let sol = solve_minimal_expansion(&config, &SolverOptions::default()).unwrap();
    let plus = Line::from_implicit(3.0, 2.0, 6.0).unwrap();
    let minus = Line::from_implicit(3.0, -2.0, 6.0).unwrap();
    let c_plus = extract_certificate(&config, sol.c_m, &plus, 1e-9).unwrap();
    assert_eq!(c_plus.tangent_indices, vec![0, 1, 2]);
    assert_eq!(c_plus.sides, vec![Side::Negative, Side::Positive, Side::Positive]);
    assert!(c_plus.residuals.iter().all(|r| *r <= 1e-9));
    assert_eq!(c_plus.contacts, vec![Contact::Vertex; 3]);
    // Canonical normal of 3x - 2y = 6 is (-3, 2)/√13, which flips every
    // side relative to the (3, -2) orientation.
    let c_minus = extract_certificate(&config, sol.c_m, &minus, 1e-9).unwrap();
    assert_eq!(c_minus.tangent_indices, vec![0, 1, 2]);
    let oriented: Vec<Side> = c_minus.sides.iter().map(|s| s.flipped()).collect();
    assert_eq!(oriented, vec![Side::Negative, Side::Positive, Side::Negative]);
}

#[test]
fn perturbing_optimal_direction_increases_ratio() {
    for seed in 1..=40u64 {
        let config = corpus_instance(seed);
        let sol = solve_minimal_expansion(&config, &SolverOptions::default()).unwrap();
        assert!(!sol.degenerate);
        for line in &sol.lines {
            for delta in [-1e-3, 1e-3] {
                let dir = Direction::new(line.theta() + delta);
                assert!(min_c_for_direction(&config, dir).c_star > sol.c_m, "seed {seed}");
                let fixed = Line::from_angle(line.theta() + delta, line.offset());
                let max_factor = config
                    .polygons()
                    .iter()
                    .map(|p| correcting_factor(p, &fixed))
                    .fold(0.0, f64::max);
                assert!(max_factor > sol.c_m, "seed {seed}");
            }
        }
    }
}

#[test]
fn oracle_refines_monotonically() {
    let c_tol = 1e-9;
    for seed in 1..=20u64 {
        let config = corpus_instance(seed);
        let coarse = brute_force_c_m(&config, 1000, c_tol);
        let fine = brute_force_c_m(&config, 2000, c_tol);
        assert!(fine <= coarse + c_tol, "seed {seed}: {coarse} -> {fine}");
    }
}

#[test]
fn solver_is_deterministic() {
    let config = corpus_instance(17);
    let a = solve_minimal_expansion(&config, &SolverOptions::default()).unwrap();
    let b = solve_minimal_expansion(&config, &SolverOptions::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn classification_follows_ratio() {
    let sol = solve_minimal_expansion(&three_squares(), &SolverOptions::default()).unwrap();
    assert_eq!(sol.classification, Classification::InitialConfiguration);
    let grown = scale_configuration(&three_squares(), 2.0).unwrap();
    let sol = solve_minimal_expansion(&grown, &SolverOptions::default()).unwrap();
    assert!((sol.c_m - 0.6).abs() < 1e-12);
    assert_eq!(sol.classification, Classification::HasTransversal);
    assert!(transversal_exists(&grown));
}
