//! Model-level checks: counting conventions against brute-force scans,
//! local corner repair against a global hull oracle, and the structural
//! invariants of the complex across enumerated windows.

mod common;

use common::{count_j_brute, round_corner_global, PathSampler};
use pfh_core::action::path_action;
use pfh_core::complex::{roundings, ChainWindow};
use pfh_core::index::{count_j, index, pick_check, PickOutcome};
use pfh_core::path::{Edge, Label, LatticePath, OrbitId, Slope};
use pfh_core::profile::TwistProfile;
use pfh_core::spectrum::spec_d;
use pfh_core::value::Value;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[test]
fn count_j_matches_brute_scan_up_to_degree_five() {
    let quad = TwistProfile::quadratic();
    for d in 1..=5 {
        let window = ChainWindow::build(d, -(2 * d + 4), 2 * d + 4, &quad).unwrap();
        for k in -(2 * d + 4)..=(2 * d + 4) {
            for g in &window.set(k).generators {
                let (jp, jm, _) = count_j(&g.path);
                assert_eq!((jp, jm), count_j_brute(&g.path), "path {}", g.key);
            }
        }
    }
}

#[test]
fn shift_law_all_enumerated_paths_degree_six() {
    let quad = TwistProfile::quadratic();
    for d in 1..=6 {
        let window = ChainWindow::build(d, -(d + 3), d + 3, &quad).unwrap();
        for k in -(d + 3)..=(d + 3) {
            for g in &window.set(k).generators {
                let up = g.path.shift(1);
                let (_, _, j0) = count_j(&g.path);
                let (_, _, j1) = count_j(&up);
                assert_eq!(j1, j0 + d + 1);
                assert_eq!(index(&up), index(&g.path) + 2 * d + 2);
            }
        }
    }
}

#[test]
fn parity_of_enumerated_generators() {
    let quad = TwistProfile::quadratic();
    for d in 1..=4 {
        let window = ChainWindow::build(d, -(d + 5), d + 5, &quad).unwrap();
        for k in -(d + 5)..=(d + 5) {
            for g in &window.set(k).generators {
                let idx = index(&g.path);
                assert_eq!(idx, k);
                assert_eq!(
                    (idx - d - g.path.h_count()).rem_euclid(2),
                    0,
                    "parity broken for {}",
                    g.key
                );
            }
        }
    }
}

#[test]
fn local_rounding_agrees_with_global_hull_oracle() {
    let quad = TwistProfile::quadratic();
    let mut checked = 0;
    for d in 1..=4 {
        let window = ChainWindow::build(d, -(d + 4), d + 4, &quad).unwrap();
        for k in -(d + 4)..=(d + 4) {
            for g in &window.set(k).generators {
                let outs = roundings(&g.path, 2).unwrap();
                for (out, corner) in outs {
                    let oracle = round_corner_global(&g.path, corner);
                    let strip = |p: &LatticePath| {
                        let edges: Vec<Edge> = p
                            .edges
                            .iter()
                            .map(|e| Edge::new(e.slope, e.multiplicity, Label::E))
                            .collect();
                        LatticePath::new(p.start_y, edges).serialize()
                    };
                    assert_eq!(strip(&out), strip(&oracle), "source {}", g.key);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100, "oracle comparison exercised {} cases", checked);
}

#[test]
fn differential_pairs_raise_grading_and_action() {
    let quad = TwistProfile::quadratic();
    for d in 1..=4 {
        let span = d + 4;
        let window = ChainWindow::build(d, -span - 1, span + 1, &quad).unwrap();
        for k in -span..=span {
            let dm = window.differential(k, &quad).unwrap();
            for (ci, col) in dm.cols_bits.iter().enumerate() {
                for r in col.ones() {
                    let alpha = &dm.cols.generators[ci];
                    let beta = &dm.rows.generators[r];
                    assert_eq!(index(&alpha.path), index(&beta.path) + 1);
                    assert!(
                        alpha.action.total_cmp(&beta.action) != std::cmp::Ordering::Less,
                        "action dropped: {} -> {}",
                        beta.key,
                        alpha.key
                    );
                    // Sources of the differential always carry an H.
                    assert!(beta.path.h_count() >= 1);
                }
            }
        }
    }
}

#[test]
fn all_e_cycles_are_closed_and_never_boundaries() {
    let quad = TwistProfile::quadratic();
    for d in 1..=4 {
        let span = d + 4;
        let window = ChainWindow::build(d, -span - 1, span + 1, &quad).unwrap();
        for k in -span..=span {
            let dm = window.differential(k, &quad).unwrap();
            let mut acc = pfh_core::gf2::BitVec::zeros(dm.rows.len());
            for (ci, g) in dm.cols.generators.iter().enumerate() {
                if g.path.is_all_e() {
                    acc.xor_assign(&dm.cols_bits[ci]);
                }
            }
            assert!(acc.is_zero(), "open all-E cycle at d={} k={}", d, k);
            // No column of the differential ever hits an all-E row.
            for col in &dm.cols_bits {
                for r in col.ones() {
                    assert!(dm.rows.generators[r].path.h_count() >= 1);
                }
            }
        }
    }
}

#[test]
fn pick_identity_on_random_paths() {
    let mut sampler = PathSampler::new(11, 6, 2);
    let mut above = 0;
    for _ in 0..200 {
        let p = sampler.sample_all_e(1..=6);
        match pick_check(&p) {
            PickOutcome::Ok { .. } => above += 1,
            PickOutcome::Degenerate => {}
            PickOutcome::Mismatch { two_area, rhs } => {
                panic!("pick mismatch on {}: {} vs {}", p.serialize(), two_area, rhs)
            }
        }
        // The identity is translation invariant; exercise below the axis.
        match pick_check(&p.shift(-12)) {
            PickOutcome::Mismatch { .. } => panic!("shifted pick mismatch on {}", p.serialize()),
            _ => {}
        }
    }
    assert!(above >= 50);
}

#[test]
fn orbit_set_round_trip_random() {
    let quad = TwistProfile::quadratic();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let mut orbits: Vec<(OrbitId, i64)> = Vec::new();
        if rng.gen_bool(0.5) {
            orbits.push((OrbitId::GammaMinus, rng.gen_range(1..=3)));
        }
        if rng.gen_bool(0.5) {
            orbits.push((OrbitId::GammaPlus, rng.gen_range(1..=2)));
        }
        for (p, q) in [(1i64, 2i64), (1, 1), (3, 2)] {
            if rng.gen_bool(0.4) {
                orbits.push((OrbitId::Elliptic(Slope::new(p, q)), rng.gen_range(1..=2)));
            }
            if rng.gen_bool(0.3) {
                orbits.push((OrbitId::Hyperbolic(Slope::new(p, q)), 1));
            }
        }
        if orbits.is_empty() {
            continue;
        }
        let shift = rng.gen_range(-5..=5);
        let path = pfh_core::from_orbit_set(&orbits, shift, &quad).unwrap();
        // Degree additivity and per-slope uniqueness.
        let d: i64 = path.edges.iter().map(|e| e.multiplicity * e.slope.q).sum();
        assert_eq!(d, path.degree());
        for w in path.edges.windows(2) {
            assert!(w[0].slope < w[1].slope);
        }
        let (back, shift_back) = pfh_core::to_orbit_set(&path, &quad);
        let again = pfh_core::from_orbit_set(&back, shift_back, &quad).unwrap();
        assert_eq!(path, again);
    }
}

#[test]
fn generator_actions_lie_in_spectrum() {
    let quad = TwistProfile::quadratic();
    for d in 1..=3 {
        let window = ChainWindow::build(d, -(d + 3), d + 3, &quad).unwrap();
        let spectrum = spec_d(&quad, d, 0.0, 1.0).unwrap();
        for k in -(d + 3)..=(d + 3) {
            for g in &window.set(k).generators {
                assert!(
                    spectrum.contains(&g.action, 1e-9),
                    "action {} of {} outside the order-{} spectrum",
                    g.action,
                    g.key,
                    d
                );
            }
        }
    }
}

#[test]
fn label_independence_of_action() {
    let quad = TwistProfile::quadratic();
    let mut sampler = PathSampler::new(23, 6, 2);
    for _ in 0..100 {
        let p = sampler.sample();
        let stripped = LatticePath::new(
            p.start_y,
            p.edges
                .iter()
                .map(|e| Edge::new(e.slope, e.multiplicity, Label::E))
                .collect(),
        );
        let a = path_action(&p, &quad).unwrap();
        let b = path_action(&stripped, &quad).unwrap();
        assert_eq!(a.as_exact(), b.as_exact());
    }
}

#[test]
fn monotone_inverse_consistency_both_kinds() {
    let quad = TwistProfile::quadratic();
    for (p, q) in [(1i64, 7i64), (3, 5), (7, 9), (13, 7), (9, 5)] {
        let s = Slope::new(p, q);
        let z = quad.z_of_slope(s).unwrap();
        let hp = quad.hprime_f64(z.to_f64());
        assert!((hp - s.to_f64()).abs() < 1e-12);
    }
    let numeric = pfh_core::DiscTwist::linear(2.0).to_sphere().unwrap();
    for (p, q) in [(1i64, 3i64), (1, 2), (3, 2)] {
        let s = Slope::new(p, q);
        let z = numeric.z_of_slope(s).unwrap();
        let hp = numeric.hprime_f64(z.to_f64());
        assert!((hp - s.to_f64()).abs() < 1e-10, "slope {}", s);
    }
}

#[test]
fn shift_changes_index_by_2d_plus_2_against_index_engine() {
    // Cross-module statement of the same law on shapes with labels.
    let mut sampler = PathSampler::new(31, 8, 2);
    for _ in 0..300 {
        let p = sampler.sample();
        let d = p.degree();
        assert_eq!(index(&p.shift(1)), index(&p) + 2 * d + 2);
        assert_eq!(p.shift(3).shift(-3), p);
    }
}

#[test]
fn step2_inequality_every_enumerated_path_degree_six() {
    let quad = TwistProfile::quadratic();
    for d in 1..=6 {
        let window = ChainWindow::build(d, -(d + 3), d + 3, &quad).unwrap();
        for k in -(d + 3)..=(d + 3) {
            for g in &window.set(k).generators {
                assert!(
                    pfh_core::asymptotics::step2_inequality_holds(&g.path, &quad).unwrap(),
                    "step-2 inequality failed for {}",
                    g.key
                );
            }
        }
    }
}

#[test]
fn pick_identity_on_figure_path() {
    let p = LatticePath::parse("-2; (1,0)x1:E; (1,1)x5:H").unwrap();
    assert!(matches!(pick_check(&p), PickOutcome::Ok { .. }));
}

#[test]
fn step1_large_eps_always_feasible() {
    let quad = TwistProfile::quadratic();
    for d in [3i64, 7, 11, 25] {
        assert!(pfh_core::asymptotics::step1_path(10.0, d, &quad).is_ok());
    }
}

#[test]
fn bracket_rows_shrink_toward_calabi() {
    let quad = TwistProfile::quadratic();
    let rule = pfh_core::asymptotics::KRule::MinusD;
    let rows = pfh_core::asymptotics::convergence_table(&quad, &[50, 100, 200], rule, 10).unwrap();
    let third = 1.0 / 3.0;
    let mut last_width = f64::INFINITY;
    for r in &rows {
        let width = r.hi - r.lo;
        assert!(width < last_width, "widths not shrinking");
        assert!(
            (r.estimate - third).abs() <= width,
            "d={} estimate {} vs 1/3 (width {})",
            r.d,
            r.estimate,
            width
        );
        last_width = width;
    }
    assert!(last_width < 0.05);
}

#[test]
fn numeric_profile_complex_end_to_end() {
    // The bounded disc twist runs the whole chain pipeline on floats.
    let sphere = pfh_core::DiscTwist::linear(2.0).to_sphere().unwrap();
    assert_eq!(sphere.hprime1_int().unwrap(), 2);
    let window = ChainWindow::build(2, -5, 5, &sphere).unwrap();
    for k in -4..=4 {
        let rank = window.homology_rank(k, &sphere).unwrap();
        let expect = if k % 2 == 0 { 1 } else { 0 };
        assert_eq!(rank, expect, "numeric-profile rank at k={}", k);
    }
    let mm = window.min_max(-2, &sphere).unwrap();
    let brute = pfh_core::c_dk_exact(2, -2, &sphere).unwrap();
    assert!((mm.to_f64() - brute.to_f64()).abs() < 1e-9);
}

#[test]
fn minmax_processing_order_is_action_monotone() {
    // The filtration value never exceeds the plain maximum over the
    // grading and matches it for degree one.
    let quad = TwistProfile::quadratic();
    let window = ChainWindow::build(1, -2, 2, &quad).unwrap();
    let mm = window.min_max(-1, &quad).unwrap();
    let max_action = window
        .set(-1)
        .generators
        .iter()
        .map(|g| g.action.clone())
        .max_by(|a, b| a.total_cmp(b))
        .unwrap();
    assert!(mm.total_cmp(&max_action) != std::cmp::Ordering::Greater);
    assert_eq!(mm.as_exact(), Some(&pfh_core::value::q_from(0, 1)));
}
