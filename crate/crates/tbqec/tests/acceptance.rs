//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run `cargo test --test acceptance -- --nocapture` to see the lines.

use tbqec::code::{build_code, bpt_locality_constant, CodeSpec, TbCode};
use tbqec::decoder::DecoderConfig;
use tbqec::distance::{distance_upper_bound, exact_distance};
use tbqec::gf2::BinaryVector;
use tbqec::layout::{
    biplanar_split, build_tanner, build_toric_layout, components_translation_isomorphic,
    connected_components, planarity_test, tangled_layout_weight4, toric_layout_tuples,
    LayoutError,
};
use tbqec::sim::{
    fit_curve, monte_carlo, pseudo_threshold, DecoderChoice, PauliError, Simulator, StopRule,
};
use tbqec::tables::{code_table, row};

const ISD_TRIALS: usize = 10_000;
const ISD_SEED: u64 = 2024;
const EXACT_CAP: usize = 28;

fn code_for(name: &str) -> TbCode {
    build_code(&CodeSpec::parse(&row(name).spec).unwrap()).unwrap()
}

#[test]
fn a1_parameter_table_reproduction() {
    for r in code_table() {
        let code = build_code(&CodeSpec::parse(&r.spec).unwrap()).unwrap();
        assert_eq!(code.n(), r.n, "{}: n", r.name);
        assert_eq!(code.k(), r.k, "{}: k", r.name);
        assert!(
            code.css.h_x.mul_transpose(&code.css.h_z).is_zero(),
            "{}: H_X H_Z^T != 0",
            r.name
        );
    }
    println!(
        "ACCEPTANCE A1 (parameter table, {} rows): PASS",
        code_table().len()
    );
}

#[test]
fn a2_exact_distances() {
    // Per-component kernel dimensions: 17 for the [[30,4,5]] codes, 18 for
    // [[30,6,4]], 22 for [[40,4,6]], 26 for [[48,4,6]], 27 for [[48,6,6]],
    // 15 per component for [[112,8,5]]; a cap of 28 covers all of them.
    let mut checked = 0;
    for r in code_table().iter().filter(|r| r.d_exact) {
        let code = build_code(&CodeSpec::parse(&r.spec).unwrap()).unwrap();
        let d = exact_distance(&code.css, EXACT_CAP)
            .unwrap_or_else(|e| panic!("{}: {e}", r.name));
        assert_eq!(d.value, r.d, "{}: exact distance", r.name);
        checked += 1;
    }
    assert_eq!(checked, 7);
    println!("ACCEPTANCE A2 (exact distances, {checked} rows): PASS");
}

#[test]
fn a3_distance_upper_bounds() {
    let mut checked = 0;
    for r in code_table().iter().filter(|r| !r.d_exact) {
        let code = build_code(&CodeSpec::parse(&r.spec).unwrap()).unwrap();
        let d = distance_upper_bound(&code.css, ISD_TRIALS, ISD_SEED).unwrap();
        assert_eq!(
            d.value, r.d,
            "{}: randomized search should find a weight-{} logical",
            r.name, r.d
        );
        checked += 1;
    }
    assert_eq!(checked, 8);
    println!("ACCEPTANCE A3 (distance upper bounds, {checked} rows): PASS");
}

#[test]
fn a4_layout_columns() {
    // Toric column agreement for every row.
    for r in code_table() {
        let code = build_code(&CodeSpec::parse(&r.spec).unwrap()).unwrap();
        let tuples = toric_layout_tuples(&code);
        match r.toric {
            Some([i, j, g, h, mu, lambda]) => {
                assert!(
                    tuples
                        .iter()
                        .any(|t| (t.i, t.j, t.g, t.h, t.mu, t.lambda)
                            == (i, j, g, h, mu, lambda)),
                    "{}: published tuple missing from {tuples:?}",
                    r.name
                );
            }
            None => assert!(tuples.is_empty(), "{}: unexpected toric layout", r.name),
        }
    }

    // Weight-5 [[30,4,5]]: (mu, lambda) = (5, 3), tuple set contains
    // (1,2,2,3), and the layout has exactly one long-range family per
    // check type.
    let w5 = code_for("w5_30_4_5");
    let tuples = toric_layout_tuples(&w5);
    assert!(tuples
        .iter()
        .any(|t| (t.i, t.j, t.g, t.h, t.mu, t.lambda) == (1, 2, 2, 3, 5, 3)));
    let g5 = build_tanner(&w5);
    let layout = build_toric_layout(&w5, &g5, &tuples[0]).unwrap();
    assert_eq!((layout.mu, layout.lambda), (5, 3));
    assert!(layout.unit_subgraph_is_cayley_grid(&g5));
    assert_eq!(
        layout.families.iter().filter(|f| f.check == 'X').count(),
        1
    );
    assert_eq!(
        layout.families.iter().filter(|f| f.check == 'Z').count(),
        1
    );

    // Weight-7 [[30,4,5]]: (1,2,2,4) with (5,3).
    let w7 = code_for("w7_30_4_5");
    let t7 = toric_layout_tuples(&w7);
    assert!(t7
        .iter()
        .any(|t| (t.i, t.j, t.g, t.h, t.mu, t.lambda) == (1, 2, 2, 4, 5, 3)));

    // [[112,8,5]]: exactly 4 translation-isomorphic components.
    let w4 = code_for("w4_112_8_5");
    let g4 = build_tanner(&w4);
    let comps = connected_components(&g4);
    assert_eq!(comps.len(), 4);
    assert!(components_translation_isomorphic(&g4, &comps));

    println!("ACCEPTANCE A4 (layout columns, tuples, components): PASS");
}

/// The published figure labels the weight-5 long-range interactions
/// (-4,-3) for X-checks and (2,3) for Z-checks on the 10x6 torus. The
/// documented orientation convention (check-to-data vectors; equivalence
/// modulo the torus and joint axis sign flips, no axis swap since
/// mu != lambda) must reproduce both.
///
/// This check is expected to FAIL on the Z vector and is kept failing on
/// purpose: within the two-step layout the two families of one long-range
/// term are exact negatives of each other, so with the X vector pinned at
/// (-4,-3) == (-4,3) mod 6 the Z vector is forced to (4,3) == -(-4,3).
/// A (2,3) Z vector cannot arise under any orientation: reachable x
/// components are {4, -4} while (2,3) needs 2. The figure's two printed
/// vectors are mutually inconsistent for the published tuple (1,2,2,3),
/// and only the X value is reproducible.
#[test]
fn a4_fig1_interaction_vectors() {
    let w5 = code_for("w5_30_4_5");
    let g5 = build_tanner(&w5);
    let tuples = toric_layout_tuples(&w5);
    let layout = build_toric_layout(&w5, &g5, &tuples[0]).unwrap();
    let xf = layout.families.iter().find(|f| f.check == 'X').unwrap();
    let zf = layout.families.iter().find(|f| f.check == 'Z').unwrap();

    let torus_eq = |a: (i64, i64), b: (i64, i64)| {
        (a.0 - b.0).rem_euclid(10) == 0 && (a.1 - b.1).rem_euclid(6) == 0
    };
    // Joint sign flips of the two axes (axis swap excluded: mu != lambda).
    let flips: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
    let matches = |got: (i64, i64), want: (i64, i64)| {
        flips
            .iter()
            .any(|&(sx, sy)| torus_eq((got.0 * sx, got.1 * sy), want))
    };

    let x_ok = matches(xf.vector, (-4, -3));
    let z_ok = matches(zf.vector, (2, 3));
    assert!(x_ok, "X family {:?} should match (-4,-3)", xf.vector);
    assert!(
        z_ok,
        "Z-check long-range family is {:?}; the published (2,3) is \
         unreachable: the two-step construction forces the Z vector to be \
         the negative of the X vector, (4,3) on the 10x6 torus, for every \
         qualifying tuple and orientation (x components are always +-4, \
         never 2). The figure value conflicts with its own layout tuple \
         (1,2,2,3); the X vector (-4,-3) is reproduced exactly.",
        zf.vector
    );
    println!("ACCEPTANCE A4 (figure interaction vectors): PASS");
}

#[test]
fn a5_decoder_correctness_floor() {
    let w5 = code_for("w5_30_4_5");
    let n = w5.n();

    // All 3*30 weight-1 and 9*C(30,2) weight-2 Pauli errors.
    let mut errors: Vec<PauliError> = Vec::with_capacity(4005);
    let paulis = [(true, false), (false, true), (true, true)]; // X, Z, Y
    for q in 0..n {
        for &(px, pz) in &paulis {
            let mut e = PauliError::identity(n);
            if px {
                e.x_part.set(q, true);
            }
            if pz {
                e.z_part.set(q, true);
            }
            errors.push(e);
        }
    }
    for q1 in 0..n {
        for q2 in q1 + 1..n {
            for &(px1, pz1) in &paulis {
                for &(px2, pz2) in &paulis {
                    let mut e = PauliError::identity(n);
                    if px1 {
                        e.x_part.set(q1, true);
                    }
                    if pz1 {
                        e.z_part.set(q1, true);
                    }
                    if px2 {
                        e.x_part.set(q2, true);
                    }
                    if pz2 {
                        e.z_part.set(q2, true);
                    }
                    errors.push(e);
                }
            }
        }
    }
    assert_eq!(errors.len(), 4005);

    // Oracle decoder: zero failures tolerated (forced by d = 5).
    let oracle = Simulator::new(&w5.css, DecoderChoice::Oracle { w_max: 2 });
    let mut scratch = oracle.scratch();
    let oracle_failures = errors
        .iter()
        .filter(|e| oracle.decode_error(&mut scratch, 0.01, e))
        .count();
    assert_eq!(oracle_failures, 0, "oracle decoder must correct all 4005");

    // BP-OSD with the default configuration: at least 99.9%, shortfall
    // listed rather than hidden.
    let bposd = Simulator::new(
        &w5.css,
        DecoderChoice::BpOsd {
            config: DecoderConfig::default(),
        },
    );
    let mut scratch = bposd.scratch();
    let mut failed: Vec<String> = Vec::new();
    for e in &errors {
        if bposd.decode_error(&mut scratch, 0.01, e) {
            failed.push(format!(
                "x{:?} z{:?}",
                e.x_part.support(),
                e.z_part.support()
            ));
        }
    }
    let rate = 1.0 - failed.len() as f64 / errors.len() as f64;
    if !failed.is_empty() {
        println!("BP-OSD shortfall ({} of 4005): {failed:?}", failed.len());
    }
    assert!(
        rate >= 0.999,
        "BP-OSD corrected only {:.4} of the weight <= 2 sweep; failures: {failed:?}",
        rate
    );
    println!(
        "ACCEPTANCE A5 (decoder floor: oracle 4005/4005, BP-OSD {}/4005): PASS",
        4005 - failed.len()
    );
}

#[test]
fn a6_monte_carlo_point_check() {
    let code = code_for("w6_30_6_4");
    let stats = monte_carlo(
        &code.css,
        DecoderChoice::BpOsd {
            config: DecoderConfig::default(),
        },
        &[1e-3],
        StopRule {
            max_shots: 3_000_000,
            target_failures: u64::MAX,
        },
        ISD_SEED,
    );
    let s = &stats[0];
    assert!(s.shots >= 3_000_000);
    let target = 3.5e-5;
    assert!(
        s.p_l >= target / 3.0 && s.p_l <= target * 3.0,
        "[[30,6,4]] at p=1e-3: measured p_L = {} ({} failures in {} shots), \
         expected within a factor 3 of {target}",
        s.p_l,
        s.failures,
        s.shots
    );
    println!(
        "ACCEPTANCE A6 (MC point check: p_L = {:.3e} vs {:.1e} target): PASS",
        s.p_l, target
    );
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

#[test]
fn a7_fit_and_pseudo_threshold() {
    // (row, published d_fit, published p0)
    let cases = [
        ("w4_112_8_5", 5.9, 0.0298),
        ("w5_30_4_5", 6.1, 0.0437),
        ("w6_30_6_4", 4.1, 0.0234),
    ];
    let p_list = log_spaced(1e-3, 1e-1, 8);
    for (name, d_fit_ref, p0_ref) in cases {
        let code = code_for(name);
        let stats = monte_carlo(
            &code.css,
            DecoderChoice::BpOsd {
                config: DecoderConfig::default(),
            },
            &p_list,
            StopRule {
                max_shots: 10_000_000,
                target_failures: 500,
            },
            ISD_SEED,
        );
        let points: Vec<(f64, f64)> = stats.iter().map(|s| (s.p, s.p_l)).collect();
        let fit = fit_curve(&points).unwrap();
        assert!(
            (fit.d_fit - d_fit_ref).abs() <= 1.0,
            "{name}: d_fit = {:.2}, published {d_fit_ref} (+-1.0); points: {points:?}",
            fit.d_fit
        );
        // The published p0 values satisfy p_L(p0) = p0, i.e. break-even
        // against a single unencoded qubit (k = 1): measured logical error
        // rates at the published p0 equal p0 within a few percent, while
        // 1-(1-p0)^k would be 4-7x larger.
        let p0 = pseudo_threshold(&fit, 1).unwrap();
        assert!(
            (p0 - p0_ref).abs() <= 0.30 * p0_ref,
            "{name}: p0 = {p0:.4}, published {p0_ref} (+-30%)"
        );
        println!(
            "ACCEPTANCE A7 ({name}: d_fit = {:.2} vs {d_fit_ref}, p0 = {p0:.4} vs {p0_ref}): PASS",
            fit.d_fit
        );
    }
}

#[test]
fn a8_fit_exactness() {
    let truth = tbqec::sim::FitParams {
        d_fit: 6.0,
        c0: 1.0,
        c1: -2.0,
        c2: 3.0,
    };
    let points: Vec<(f64, f64)> = log_spaced(1e-3, 1e-1, 9)
        .into_iter()
        .map(|p| (p, truth.evaluate(p)))
        .collect();
    let fit = fit_curve(&points).unwrap();
    for (got, want) in [
        (fit.d_fit, truth.d_fit),
        (fit.c0, truth.c0),
        (fit.c1, truth.c1),
        (fit.c2, truth.c2),
    ] {
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
    println!("ACCEPTANCE A8 (fit exactness to 1e-9): PASS");
}

#[test]
fn a9_biplanar_construction() {
    // Planarity test validated on the Kuratowski graphs.
    let k5: Vec<(usize, usize)> = (0..5)
        .flat_map(|i| ((i + 1)..5).map(move |j| (i, j)))
        .collect();
    assert!(!planarity_test(&k5));
    let k33: Vec<(usize, usize)> = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
    assert!(!planarity_test(&k33));

    let mut split_rows = 0;
    for r in code_table() {
        let code = build_code(&CodeSpec::parse(&r.spec).unwrap()).unwrap();
        let graph = build_tanner(&code);
        match (r.biplanar.as_str(), biplanar_split(&code, &graph)) {
            ("yes", Ok(split)) => {
                assert!(
                    split.certifies_thickness_two(),
                    "{}: split parts not both planar",
                    r.name
                );
                split_rows += 1;
            }
            ("unknown", Err(LayoutError::UnsupportedWeight { .. })) => {}
            (flag, result) => panic!(
                "{}: biplanar flag {flag:?} inconsistent with {result:?}",
                r.name
            ),
        }
    }
    assert_eq!(split_rows, 14);
    println!("ACCEPTANCE A9 (bi-planar splits, {split_rows} rows + weight-7 refusal): PASS");
}

#[test]
fn a10_tangled_layout_and_bpt_constant() {
    let code = code_for("w4_64_2_8");
    let graph = build_tanner(&code);
    let layout = tangled_layout_weight4(&code, &graph, 8, 4).unwrap();
    assert!(
        layout.reproduces_edges(&graph),
        "round trip through grid + (sigma, tau) must reproduce the graph"
    );
    assert_eq!(bpt_locality_constant(&code, row("w4_64_2_8").d), 2.0);
    println!(
        "ACCEPTANCE A10 (tangled layout round trip, BPT constant 2.0): PASS"
    );
}

/// A11 lives in the separate `properties` test target; this test only
/// asserts that target's key entry points stay callable from here, keeping
/// the acceptance suite self-contained.
#[test]
fn a11_property_suites_runnable() {
    // gf2 brute-force equivalence, one spot check.
    let m = tbqec::gf2::BinaryMatrix::identity(4);
    assert!(tbqec::gf2::row_space_contains(&m, &BinaryVector::from_support(4, &[2])).unwrap());
    // Determinism across worker counts, one spot check.
    let code = code_for("w6_30_6_4");
    let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let pool3 = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let a = pool1.install(|| distance_upper_bound(&code.css, 100, 5).unwrap());
    let b = pool3.install(|| distance_upper_bound(&code.css, 100, 5).unwrap());
    assert_eq!(a.value, b.value);
    println!("ACCEPTANCE A11 (property suites standalone; see `properties` target): PASS");
}
