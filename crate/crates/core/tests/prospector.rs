use powerbeam::curve::{Cutoff, CurveParams, Sampling};
use powerbeam::prospector::*;
use powerbeam::raster::{generate_random, GridSpec, RasterSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(beta: f64) -> CurveParams {
    CurveParams::new(beta, 0.5, 0.9).unwrap()
}

fn setup(n: usize, beta: f64) -> (GridSpec, ScaleLadder, Cutoff) {
    let g = GridSpec::unit(n).unwrap();
    let p = params(beta);
    let ladder = ScaleLadder::default_ladder(8).unwrap().truncate_to_resolution(&g, &p).unwrap();
    (g, ladder, Cutoff::with_defaults(p))
}

fn certify(set: &RasterSet, ladder: &ScaleLadder, cutoff: &Cutoff) -> BeamCertificate {
    match prospect(set, ladder, cutoff, &ProspectConfig::default()).unwrap() {
        Outcome::Certified(c) => c,
        Outcome::Exhausted(r) => panic!("exhausted after {} points", r.points_scanned),
    }
}

#[test]
fn full_square_certifies_first_block() {
    let (g, ladder, cutoff) = setup(64, 2.0);
    let full = RasterSet::full(g);
    let cert = certify(&full, &ladder, &cutoff);
    assert_eq!(cert.j, 1);
    assert_eq!(cert.a_interval, [2.0, 4.0]);
    assert!(verify_certificate(&full, &cert, 1, &cutoff).valid);
    assert!(verify_certificate(&full, &cert, 4, &cutoff).valid);
}

#[test]
fn removing_reachable_cells_pushes_search_to_second_block() {
    let (g, ladder, cutoff) = setup(128, 2.0);
    let quadrant = RasterSet::from_fn(g, |i, j| i < 64 && j < 64);
    let (b, c) = ladder.block(1).unwrap();
    let reach = reachable_cells(&quadrant, c, b, &cutoff, &Sampling::default()).unwrap();
    let set = RasterSet::full(g).difference(&reach).unwrap();
    let cert = certify(&set, &ladder, &cutoff);
    assert_eq!(cert.j, 2);
    let [x, y] = cert.point;
    assert!(x < 0.5 && y < 0.5, "certified from the quadrant");
    let pairs = scan_outcomes(&set, &ladder, &cutoff, &ProspectConfig::default()).unwrap();
    let first = pairs.iter().find(|p| p.point == cert.point && p.j == 1).unwrap();
    assert!(first.miss.is_some());
    assert!(verify_certificate(&set, &cert, 4, &cutoff).valid);
}

#[test]
fn random_set_certifies_within_block_bound() {
    let (g, ladder, cutoff) = setup(512, 2.0);
    let set = generate_random(g, 0.4, 7).unwrap();
    let cert = certify(&set, &ladder, &cutoff);
    assert!(cert.j <= j_bound(0.4, 1.0).unwrap());
    let v = verify_certificate(&set, &cert, 4, &cutoff);
    assert!(v.valid, "{:?}", v.failure);
    assert!(v.refined_scales > 4 * (cert.samples.len() - 1));
}

#[test]
fn certificate_invariants_hold() {
    for beta in [2.0, 3.0] {
        let (g, ladder, cutoff) = setup(256, beta);
        let set = generate_random(g, 0.3, 2).unwrap();
        let cert = certify(&set, &ladder, &cutoff);
        let j = cert.j as i32;
        let (c, b) = (2f64.powi(-2 * j), 2f64.powi(-2 * j + 1));
        assert_eq!(cert.t_interval, [c, b]);
        assert_eq!(cert.a_interval, [2f64.powf((beta - 1.0) * (2 * j - 1) as f64), 2f64.powf((beta - 1.0) * (2 * j) as f64)]);
        assert!(cert.a_interval[0] >= 1.0);
        assert!(cert.a_interval[1] - cert.a_interval[0] >= 2f64.powf(beta - 1.0) - 1.0);
        assert!(cert.gap[0] >= 0.5 * c && cert.gap[1] <= 0.9 * b);
        for s in &cert.samples {
            assert!(set.contains(s.hit[0], s.hit[1]));
            let bound = s.a.powf(-1.0 / (beta - 1.0));
            assert!(s.u > 0.5 * bound * (1.0 - 1e-12) && s.u < 0.9 * bound * (1.0 + 1e-12));
        }
    }
}

#[test]
fn tampered_certificate_is_rejected_with_sample_named() {
    let (g, ladder, cutoff) = setup(128, 2.0);
    let set = generate_random(g, 0.3, 4).unwrap();
    let mut cert = certify(&set, &ladder, &cutoff);
    let k = cert.samples.len() / 2;
    let grid = *set.grid();
    // move the witness along its curve onto a cell outside the set
    let s = &mut cert.samples[k];
    let h = grid.cell_size();
    let moved = (1..200)
        .map(|step| s.u + step as f64 * h / 8.0)
        .find(|&u| !set.contains(cert.point[0] + u, cert.point[1] + s.a * u * u))
        .unwrap();
    s.u = moved;
    s.hit = [cert.point[0] + moved, cert.point[1] + s.a * moved * moved];
    let v = verify_certificate(&set, &cert, 1, &cutoff);
    assert!(!v.valid);
    let failure = v.failure.unwrap();
    assert_eq!(failure.sample, Some(k));
    assert!(failure.to_string().contains(&format!("sample {k}")));
}

#[test]
fn certificate_against_other_raster_fails() {
    let (g, ladder, cutoff) = setup(128, 2.0);
    let a = generate_random(g, 0.3, 4).unwrap();
    let cert = certify(&a, &ladder, &cutoff);
    let other = generate_random(g, 0.3, 5).unwrap();
    assert!(!verify_certificate(&other, &cert, 1, &cutoff).valid);
}

#[test]
fn json_round_trip_preserves_verification() {
    let (g, ladder, cutoff) = setup(256, 3.0);
    let set = generate_random(g, 0.25, 9).unwrap();
    let cert = certify(&set, &ladder, &cutoff);
    let back = BeamCertificate::from_json(&cert.to_json().unwrap()).unwrap();
    assert_eq!(back, cert);
    assert!(verify_certificate(&set, &back, 2, &cutoff).valid);
}

#[test]
fn swapped_exponent_runs_on_transposed_set() {
    let (g, ladder, cutoff_half) = setup(256, 0.5);
    let cutoff_two = Cutoff::with_defaults(params(2.0));
    for seed in 0..3 {
        let set = generate_random(g, 0.2, seed).unwrap();
        let half = certify(&set, &ladder, &cutoff_half);
        let two = certify(&set.axis_swap(), &ladder, &cutoff_two);
        assert!(verify_certificate(&set, &half, 4, &cutoff_half).valid);
        let converted = half.swapped();
        assert_eq!(converted.point, two.point);
        assert_eq!(converted.j, two.j);
        assert_eq!(converted.samples.len(), two.samples.len());
        for (x, y) in converted.samples.iter().zip(&two.samples) {
            assert_eq!(x.t, y.t);
            assert_eq!(x.hit, y.hit);
            assert!((x.a - y.a).abs() <= 1e-12 * y.a);
            assert!((x.u - y.u).abs() <= 1e-12);
        }
    }
}

#[test]
fn outcome_is_deterministic() {
    let (g, ladder, cutoff) = setup(128, 2.0);
    let set = generate_random(g, 0.05, 3).unwrap();
    let config = ProspectConfig {
        subsample: Some(50),
        seed: 17,
        ..Default::default()
    };
    let a = prospect(&set, &ladder, &cutoff, &config).unwrap();
    let b = prospect(&set, &ladder, &cutoff, &config).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sparse_sets_exhaust_with_a_miss_per_block() {
    let (g, ladder, cutoff) = setup(64, 2.0);
    let mut set = RasterSet::empty(g);
    set.insert(10, 10);
    set.insert(40, 12);
    match prospect(&set, &ladder, &cutoff, &ProspectConfig::default()).unwrap() {
        Outcome::Exhausted(r) => {
            assert_eq!(r.points_scanned, 2);
            for p in &r.points {
                assert_eq!(p.misses.iter().map(|m| m.j).collect::<Vec<_>>(), (1..=ladder.len()).collect::<Vec<_>>());
            }
        }
        Outcome::Certified(_) => panic!("two isolated cells cannot certify"),
    }
}

#[test]
fn unresolvable_ladder_names_minimal_resolution() {
    let g = GridSpec::unit(64).unwrap();
    let p = params(2.0);
    let err = prospect(
        &RasterSet::full(g),
        &ScaleLadder::default_ladder(5).unwrap(),
        &Cutoff::with_defaults(p),
        &ProspectConfig::default(),
    )
    .unwrap_err();
    match err {
        powerbeam::Error::Unresolvable { min_n, .. } => {
            assert!(0.9 * 2f64.powi(-9) >= 1.0 / min_n as f64);
        }
        e => panic!("unexpected {e}"),
    }
}

/// Plain scan: every arc point computed from scratch and looked up by floor.
fn brute_force(set: &RasterSet, ladder: &ScaleLadder, cutoff: &Cutoff) -> Vec<([f64; 2], usize, bool)> {
    let grid = *set.grid();
    let n = grid.n() as i64;
    let h = grid.cell_size();
    let member = |x: f64, y: f64| {
        let (i, j) = ((x / h).floor() as i64, (y / h).floor() as i64);
        (0..n).contains(&i) && (0..n).contains(&j) && set.get(i as usize, j as usize)
    };
    let mut out = Vec::new();
    for j in 0..grid.n() {
        for i in 0..grid.n() {
            if !set.get(i, j) {
                continue;
            }
            let (x, y) = ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
            for (k, &(b, c)) in ladder.entries().iter().enumerate() {
                let ts = Sampling::default().grid_for(c, b, &grid, cutoff.params()).unwrap();
                let all = ts.iter().all(|t| {
                    cutoff
                        .nodes()
                        .iter()
                        .any(|s| member(x + t * s, y + t * s.powf(2.0)))
                });
                out.push(([x, y], k + 1, all));
            }
        }
    }
    out
}

#[test]
fn scan_matches_brute_force_on_small_grids() {
    let (g, ladder, cutoff) = setup(64, 2.0);
    for seed in 0..6 {
        let set = generate_random(g, [0.02, 0.05, 0.1][seed as usize % 3], seed).unwrap();
        let fast = scan_outcomes(&set, &ladder, &cutoff, &ProspectConfig::default()).unwrap();
        let slow = brute_force(&set, &ladder, &cutoff);
        assert_eq!(fast.len(), slow.len());
        for (f, s) in fast.iter().zip(&slow) {
            assert_eq!((f.point, f.j, f.miss.is_none()), *s);
        }
    }
}

#[test]
fn planted_certificates_are_found() {
    let (g, ladder, cutoff) = setup(64, 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for seed in 0..10 {
        let mut set = generate_random(g, 0.01, seed).unwrap();
        let (pi, pj) = (rng.gen_range(0..32), rng.gen_range(0..32));
        set.insert(pi, pj);
        let pt = g.cell_center(pi, pj);
        let (b, c) = ladder.block(1).unwrap();
        let ts = Sampling::default().grid_for(c, b, &g, cutoff.params()).unwrap();
        let s = cutoff.nodes()[0];
        for t in ts.iter() {
            let (i, j) = g.cell_of(pt.0 + t * s, pt.1 + t * s * s).unwrap();
            set.insert(i, j);
        }
        let outcome = prospect(&set, &ladder, &cutoff, &ProspectConfig::default()).unwrap();
        let cert = outcome.certificate().expect("planted pair must be found");
        assert!(verify_certificate(&set, cert, 1, &cutoff).valid);
    }
}

#[test]
fn dense_window_examples() {
    let g = GridSpec::unit(64).unwrap();
    let full = find_dense_window(&RasterSet::full(g), 0.9, &[0.25]).unwrap();
    assert_eq!(full.ratio, 1.0);

    let left = RasterSet::from_fn(g, |i, _| i < 32);
    let w = find_dense_window(&left, 0.4, &[0.5, 0.25, 0.125]).unwrap();
    assert_eq!(w.r, 0.5);
    assert!(w.ratio >= 0.4);
    let w = find_dense_window(&left, 0.9, &[0.5, 0.25, 0.125]).unwrap();
    assert_eq!(w.r, 0.25);
    assert!(w.center[0] <= 0.25);

    // solid blocks of side 8 cells on a checkerboard, window side 8 cells
    let board = RasterSet::from_fn(g, |i, j| (i / 8 + j / 8) % 2 == 0);
    let w = find_dense_window(&board, 0.45, &[4.0 / 64.0]).unwrap();
    assert_eq!(w.ratio, 1.0);
    let brute = (0..=56)
        .flat_map(|j| (0..=56).map(move |i| (i, j)))
        .find(|&(i, j)| (0..8).all(|dj| (0..8).all(|di| board.get(i + di, j + dj))))
        .unwrap();
    assert_eq!(w.corner, [brute.0, brute.1]);

    match find_dense_window(&RasterSet::empty(g), 0.1, &[0.25]) {
        Err(powerbeam::Error::NoDenseWindow { best, .. }) => assert_eq!(best, 0.0),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn normalized_window_measure_is_window_density() {
    let g = GridSpec::new(256, [0.0, 0.0], 256.0).unwrap();
    let set = generate_random(g, 0.3, 1).unwrap();
    let w = find_dense_window(&set, 0.3, &[32.0]).unwrap();
    let a = normalize_window(&set, w.r, w.center).unwrap();
    assert_eq!(a.grid().n(), 64);
    assert_eq!(a.measure(), w.ratio);
    assert!(normalize_window(&set, 32.0, [10.0, 10.0]).is_err());
    let inside = RasterSet::full(g);
    assert_eq!(normalize_window(&inside, 16.0, [100.0, 100.0]).unwrap(), RasterSet::full(GridSpec::unit(32).unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rounding_brackets_input(x in 1e-9f64..1e9) {
        let (up, down) = (dyadic_round_up(x).unwrap(), dyadic_round_down(x).unwrap());
        prop_assert!(down <= x && x <= up && up <= 2.0 * down);
        prop_assert!(up / down == 1.0 || up / down == 2.0);
    }

    #[test]
    fn returned_certificates_verify_exactly(seed in 0u64..1000, delta in 0.05f64..0.6, swap in any::<bool>()) {
        let beta = if swap { 0.5 } else { 2.0 };
        let (g, ladder, cutoff) = setup(32, beta);
        let set = generate_random(g, delta, seed).unwrap();
        if let Outcome::Certified(cert) = prospect(&set, &ladder, &cutoff, &ProspectConfig::default()).unwrap() {
            let v = verify_certificate(&set, &cert, 1, &cutoff);
            prop_assert!(v.valid, "{:?}", v.failure);
        }
    }
}
