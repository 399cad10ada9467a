//! End-to-end acceptance suite.
//!
//! Each test certifies one advertised guarantee of the crate against an
//! oracle computed *in this file* by independent means (substitution rules,
//! greedy covers, brute-force lattice enumeration), prints a single `PASS`
//! line, and asserts a wall-clock budget. Expected values are frozen here as
//! regression anchors; none of them are produced by the code under test.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use meyerkit::fixtures::{
    fibonacci, fibonacci_window, golden_ratio, rational_toy, sub_window, two_color,
    two_color_duplicated_windows, two_color_split_windows,
};
use meyerkit::io::parse_exact_scalar;
use meyerkit::minimal::{minimalize, redundancy_subgroup, verify_minimal, MinimalizeOptions};
use meyerkit::modelset::{check_interpolation, generate, NamedWindow, WindowFamily, WindowMode};
use meyerkit::morphism::{amalgamated_cps, validate_morphism};
use meyerkit::omega::{omega_of_patch, omega_point, omega_region, OmegaOptions};
use meyerkit::pointset::MultiPointSet;
use meyerkit::region::{HPoint, RBox, Region, RegionOrder};
use meyerkit::{CutProjectScheme, IntMatrix, QuadExt};

fn q(n: i64) -> QuadExt {
    QuadExt::from_int(n)
}

fn qs(s: &str) -> QuadExt {
    parse_exact_scalar(s).expect("literal scalar parses")
}

fn line(lo: i64, hi: i64) -> RBox {
    RBox::interval(q(lo), q(hi)).expect("ordered interval")
}

fn budget(t: Instant, secs: u64, what: &str) -> Duration {
    let dt = t.elapsed();
    assert!(
        dt <= Duration::from_secs(secs),
        "{what} took {dt:?}, budget {secs} s"
    );
    dt
}

/// 1. The golden-ratio model set on [0, 200] must coincide, vertex for
/// vertex and in exact arithmetic, with the fixed point of the substitution
/// a -> ab, b -> a laid out from 0 with tile lengths phi and 1.
#[test]
fn criterion_1_fibonacci_round_trip_matches_substitution() {
    let t = Instant::now();
    let phi = golden_ratio();
    let limit = q(200);

    // Oracle: iterate the substitution until the word covers [0, 200], then
    // place vertices by accumulating tile lengths. Coordinates are kept as
    // integer pairs (p, q) meaning p + q*phi, so the comparison is exact.
    let mut word = vec![b'a'];
    loop {
        let (mut p, mut qq) = (0i64, 0i64);
        for &l in &word {
            if l == b'a' {
                qq += 1;
            } else {
                p += 1;
            }
        }
        let end = q(p) + q(qq) * phi.clone();
        if end > q(201) {
            break;
        }
        let mut next = Vec::with_capacity(2 * word.len());
        for &l in &word {
            if l == b'a' {
                next.push(b'a');
                next.push(b'b');
            } else {
                next.push(b'a');
            }
        }
        word = next;
    }
    let mut oracle: Vec<Vec<QuadExt>> = Vec::new();
    let (mut p, mut qq) = (0i64, 0i64);
    loop {
        let x = q(p) + q(qq) * phi.clone();
        if x > limit {
            break;
        }
        oracle.push(vec![x]);
        let k = oracle.len() - 1;
        if k >= word.len() {
            break;
        }
        if word[k] == b'a' {
            qq += 1;
        } else {
            p += 1;
        }
    }
    oracle.sort();

    let set = generate(&fibonacci(), &fibonacci_window(), &line(0, 200), WindowMode::Closed)
        .expect("generation succeeds");
    let got = set.points("tile");
    assert!(
        (140..=150).contains(&oracle.len()),
        "substitution oracle has an implausible vertex count {}",
        oracle.len()
    );
    assert_eq!(got, oracle.as_slice(), "projected set differs from the substitution fixed point");

    let dt = budget(t, 1, "criterion 1");
    println!(
        "PASS criterion 1 (fibonacci round-trip): {} vertices match the substitution oracle exactly in {:?}",
        oracle.len(),
        dt
    );
}

/// 2. On the golden-ratio set over [-100, 100]: the packing radius squares
/// to exactly 1/4 (minimal gap 1), the greedy-derived irredundant finite
/// correction set is exactly {-1, 0, 1}, the difference check at radius 20
/// is defect-free with it, and dropping any one element breaks it.
///
/// The interior-window member of the fixture's model-set family is used:
/// the closed window's two boundary stars contribute one extra point pair
/// at distance phi - 1 (a once-only configuration near the origin), while
/// the interior set realizes the generic gap alphabet {1, phi}.
#[test]
fn criterion_2_delone_and_meyer_at_scale() {
    let t = Instant::now();
    let set = generate(&fibonacci(), &fibonacci_window(), &line(-100, 100), WindowMode::Interior)
        .expect("generation succeeds");
    let support: Vec<QuadExt> = set.points("tile").iter().map(|p| p[0].clone()).collect();

    let packing = set.packing_radius().expect("at least two points");
    assert_eq!(&packing * &packing, qs("1/4"), "packing radius squared must be exactly 1/4");

    // Oracle: differences of points within 20 of the center, covered greedily
    // by candidates p + q*phi with |p|, |q| <= 3, then pruned to irredundance.
    let phi = golden_ratio();
    let near: Vec<&QuadExt> = support.iter().filter(|x| x.abs() <= q(20)).collect();
    let mut diffs: BTreeSet<QuadExt> = BTreeSet::new();
    for x in &near {
        for y in &near {
            diffs.insert(*x - *y);
        }
    }
    let mut candidates: Vec<QuadExt> = Vec::new();
    for p in -3i64..=3 {
        for k in -3i64..=3 {
            candidates.push(q(p) + q(k) * phi.clone());
        }
    }
    candidates.sort_by(|a, b| (a.abs(), a).cmp(&(b.abs(), b)));
    let member = |v: &QuadExt| support.binary_search(v).is_ok();
    let covers = |f: &QuadExt, d: &QuadExt| member(&(d - f));
    let mut uncovered: BTreeSet<QuadExt> = diffs.clone();
    let mut fset: Vec<QuadExt> = Vec::new();
    while !uncovered.is_empty() {
        let best = candidates
            .iter()
            .max_by_key(|f| {
                (
                    uncovered.iter().filter(|d| covers(f, d)).count(),
                    std::cmp::Reverse((f.abs(), (*f).clone())),
                )
            })
            .expect("candidate pool is nonempty")
            .clone();
        let hit = uncovered.iter().filter(|d| covers(&best, d)).count();
        assert!(hit > 0, "greedy cover stalled: differences are not coverable at |p|,|q| <= 3");
        uncovered.retain(|d| !covers(&best, d));
        fset.push(best);
    }
    // Prune to an irredundant cover.
    let full_cover = |fs: &[QuadExt]| diffs.iter().all(|d| fs.iter().any(|f| covers(f, d)));
    let mut i = 0;
    while i < fset.len() {
        let mut trimmed = fset.clone();
        trimmed.remove(i);
        if full_cover(&trimmed) {
            fset = trimmed;
        } else {
            i += 1;
        }
    }
    fset.sort();
    assert_eq!(fset, vec![q(-1), q(0), q(1)], "the irredundant correction set must be {{-1, 0, 1}}");

    let correction: Vec<Vec<QuadExt>> = fset.iter().map(|f| vec![f.clone()]).collect();
    let radius = q(20);
    let report = set.meyer_check(&correction, Some(&radius));
    assert!(report.passed() && report.inconclusive == 0, "defects: {:?}", report.defects);
    assert!(report.differences_checked > 100, "the radius-20 check saw too few differences");

    for skip in 0..correction.len() {
        let partial: Vec<Vec<QuadExt>> = correction
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, f)| f.clone())
            .collect();
        let broken = set.meyer_check(&partial, Some(&radius));
        assert!(
            !broken.defects.is_empty(),
            "dropping {} from the correction set should leave uncovered differences",
            fset[skip]
        );
    }

    let dt = budget(t, 5, "criterion 2");
    println!(
        "PASS criterion 2 (delone/meyer at scale): packing^2 = 1/4, correction set {{-1, 0, 1}} is exact and irredundant at radius 20 in {:?}",
        dt
    );
}

/// 3. Duplicating one window over both parity fibers makes the whole
/// fiber group redundant; the quotient scheme regenerates the identical
/// physical point set on [-50, 50].
#[test]
fn criterion_3_redundancy_quotient_regenerates() {
    let t = Instant::now();
    let scheme = two_color();
    let dup = two_color_duplicated_windows();

    let sq = redundancy_subgroup(&dup).expect("family is regular");
    assert_eq!(sq.subgroup.len(), 2, "redundancy subgroup must be the full Z/2");

    let view = line(-50, 50);
    let min = minimalize(&scheme, &dup, &MinimalizeOptions { view: view.clone() })
        .expect("pipeline runs");
    assert_eq!(min.stages.redundancy_order, 2);
    assert_eq!(min.stages.group_before, vec![2]);
    assert!(min.stages.group_after_quotient.is_empty(), "quotient must collapse the fiber");
    assert!(min.scheme.internal_group().orders().is_empty());

    let direct = generate(&scheme, &dup, &view, WindowMode::Closed).expect("direct generation");
    let quotient = generate(&min.scheme, &min.windows, &view, WindowMode::Closed)
        .expect("quotient generation");
    assert_eq!(
        direct.points("tile"),
        quotient.points("tile"),
        "quotient scheme must regenerate the same physical points"
    );
    assert!(direct.len() > 50, "view should contain a sizable sample");

    let dt = budget(t, 5, "criterion 3");
    println!(
        "PASS criterion 3 (redundancy quotient): Z/2 collapsed, {} points regenerate exactly on [-50, 50] in {:?}",
        direct.len(),
        dt
    );
}

/// 4. Feeding the sub-window model set through the minimalization pipeline
/// yields a certified chain: input set <= minimal model set <= ambient model
/// set on [-100, 100], with the right-hand containment strict and the
/// reconstructed window exactly equal to the sub-window.
#[test]
fn criterion_4_pipeline_chain_on_sub_window() {
    let t = Instant::now();
    let scheme = fibonacci();
    let sub = sub_window();
    let view = line(-100, 100);

    let input = generate(&scheme, &sub, &view, WindowMode::Closed).expect("input generation");
    let min = minimalize(&scheme, &sub, &MinimalizeOptions { view: view.clone() })
        .expect("pipeline runs");
    let cert = verify_minimal(&scheme, &sub, &min).expect("verifier runs");
    assert!(cert.passed(), "certificate failed: {:?}", cert);

    let minimal = generate(&min.scheme, &min.windows, &view, WindowMode::Closed)
        .expect("minimal generation");
    let ambient_region = fibonacci_window().get("tile").expect("tile window").clone();
    let ambient_family = WindowFamily::single("sub", ambient_region).expect("one window");
    let ambient = generate(&scheme, &ambient_family, &view, WindowMode::Closed)
        .expect("ambient generation");

    // Left containment: every input point survives into the minimal set.
    for p in input.points("sub") {
        assert!(
            minimal.points("sub").binary_search(p).is_ok(),
            "input point {} missing from the minimal model set",
            p[0]
        );
    }
    // Right containment, strict: the minimal set sits inside the ambient
    // model set and misses at least one of its points.
    for p in minimal.points("sub") {
        assert!(
            ambient.points("sub").binary_search(p).is_ok(),
            "minimal point {} escapes the ambient model set",
            p[0]
        );
    }
    let extra: Vec<&Vec<QuadExt>> = ambient
        .points("sub")
        .iter()
        .filter(|p| minimal.points("sub").binary_search(p).is_err())
        .collect();
    assert!(!extra.is_empty(), "the ambient model set must be strictly larger");
    assert!(
        ambient.points("sub").binary_search(&vec![q(-1)]).is_ok()
            && minimal.points("sub").binary_search(&vec![q(-1)]).is_err(),
        "-1 must witness the strict containment"
    );

    let reconstructed = min.windows.get("sub").expect("color survives");
    assert_eq!(
        reconstructed.compare(sub.get("sub").expect("input window")),
        RegionOrder::Equal,
        "the reconstructed window must equal the sub-window exactly"
    );

    let dt = budget(t, 10, "criterion 4");
    println!(
        "PASS criterion 4 (pipeline chain): {} <= {} < {} points, window reconstructed exactly, in {:?}",
        input.len(),
        minimal.len(),
        ambient.len(),
        dt
    );
}

/// 5. Parameter-region certification on golden-ratio patches: regions are
/// nested as the patch radius grows through 5, 10, 20, 40; translating a
/// patch by a set point gamma translates the region by exactly -star(gamma)
/// (checked for 20 sampled gamma); and the resolved parameter point lands
/// within 10^-3 of the true value (0 for centered patches, -star(gamma) for
/// translated ones).
#[test]
fn criterion_5_omega_regions_certify() {
    let t = Instant::now();
    let scheme = fibonacci();
    let family = fibonacci_window();
    let zero_fiber = scheme.internal_group().zero();

    // Nesting across radii.
    let radii = [5i64, 10, 20, 40];
    let regions: Vec<Region> = radii
        .iter()
        .map(|r| omega_region(&scheme, &family, &[q(0)], &q(*r)).expect("region exists"))
        .collect();
    for w in regions.windows(2) {
        let rel = w[1].compare(&w[0]);
        assert!(
            rel == RegionOrder::Equal || rel == RegionOrder::ASubsetB,
            "regions must shrink as the radius grows, got {rel:?}"
        );
    }

    // Equivariance under translation by set points.
    let sample_box = line(-40, 40);
    let sample = generate(&scheme, &family, &sample_box, WindowMode::Closed).expect("sample");
    let mut gammas: Vec<QuadExt> = sample.points("tile").iter().map(|p| p[0].clone()).collect();
    gammas.sort_by(|a, b| (a.abs(), a.clone()).cmp(&(b.abs(), b.clone())));
    let gammas: Vec<QuadExt> = gammas.into_iter().filter(|g| *g != q(0)).take(20).collect();
    assert_eq!(gammas.len(), 20, "need 20 sampled set points");

    let patch_box = line(-10, 10);
    let patch = generate(&scheme, &family, &patch_box, WindowMode::Closed).expect("patch");
    let omega_patch = omega_of_patch(&scheme, &family, &patch, None).expect("patch region");
    for g in &gammas {
        let lift = scheme
            .coordinates_in_lattice(&[g.clone()], None)
            .expect("lattice lookup")
            .pop()
            .expect("gamma lies in the projected lattice");
        let star = scheme.star(&lift);
        let neg_star = HPoint::new(
            star.real.iter().map(|v| -v).collect(),
            scheme.internal_group().neg(&star.fin),
        );
        let mut shifted = MultiPointSet::new(1, patch_box.translate(&[-g]))
            .expect("carrier translates");
        for (color, pts) in patch.colors() {
            for p in pts {
                shifted.add(color, vec![&p[0] - g]).expect("point stays in carrier");
            }
        }
        let omega_shifted = omega_of_patch(&scheme, &family, &shifted, None).expect("region");
        assert_eq!(
            omega_shifted.compare(&omega_patch.translate(&neg_star)),
            RegionOrder::Equal,
            "translating the patch by -{g} must translate the region by -star({g})"
        );
    }

    // Resolution at the origin: the true parameter is 0.
    let tol = qs("1/1000");
    let options = OmegaOptions {
        initial_radius: q(1),
        max_radius: q(64),
        tolerance: tol.clone(),
    };
    let resolved = omega_point(&scheme, &family, &[q(0)], &options).expect("schedule runs");
    assert!(resolved.resolved, "the parameter region must resolve at the origin");
    assert!(resolved.extent <= tol, "extent {} exceeds tolerance", resolved.extent);
    assert!(
        resolved.region.contains(&HPoint::new(vec![q(0)], zero_fiber.clone())),
        "the resolved region must contain the true parameter 0"
    );

    // Resolution of a translated patch: the true parameter is -star(gamma0).
    let gamma0 = gammas[0].clone();
    let lift0 = scheme
        .coordinates_in_lattice(&[gamma0.clone()], None)
        .expect("lattice lookup")
        .pop()
        .expect("gamma0 lifts");
    let star0 = scheme.star(&lift0);
    let mut big = MultiPointSet::new(1, sample_box.translate(&[-&gamma0]))
        .expect("carrier translates");
    for (color, pts) in sample.colors() {
        for p in pts {
            big.add(color, vec![&p[0] - &gamma0]).expect("point stays in carrier");
        }
    }
    let region0 = omega_of_patch(&scheme, &family, &big, None).expect("region");
    let summary = region0.extent().expect("region is nonempty");
    assert!(summary.extent <= tol, "extent {} exceeds tolerance", summary.extent);
    assert_eq!(summary.fiber_count, 1);
    assert!(
        region0.contains(&HPoint::new(
            star0.real.iter().map(|v| -v).collect(),
            scheme.internal_group().neg(&star0.fin),
        )),
        "the resolved region must contain -star(gamma0)"
    );

    let dt = budget(t, 10, "criterion 5");
    println!(
        "PASS criterion 5 (parameter regions): nested over radii {radii:?}, equivariant for 20 translates, resolved within 1/1000 at 0 and -star({gamma0}), in {dt:?}"
    );
}

/// 6. The minimalization pipeline is idempotent: run on its own output it
/// returns the same scheme, an equal window family, and the identical point
/// set, for both the sub-window input and the duplicated-fiber input.
#[test]
fn criterion_6_pipeline_is_idempotent() {
    let t = Instant::now();
    let cases: Vec<(&str, CutProjectScheme, WindowFamily, RBox)> = vec![
        ("sub-window", fibonacci(), sub_window(), line(-100, 100)),
        ("duplicated fibers", two_color(), two_color_duplicated_windows(), line(-50, 50)),
    ];
    for (name, scheme, family, view) in cases {
        let opts = MinimalizeOptions { view: view.clone() };
        let first = minimalize(&scheme, &family, &opts).expect("first run");
        let second = minimalize(&first.scheme, &first.windows, &opts).expect("second run");

        assert_eq!(second.scheme, first.scheme, "{name}: scheme must be unchanged");
        assert_eq!(second.stages.redundancy_order, 1, "{name}: nothing left to quotient");
        assert_eq!(second.stages.support_index, 1, "{name}: nothing left to shrink");
        assert_eq!(
            second.stages.group_final, first.stages.group_final,
            "{name}: fiber group must be unchanged"
        );
        for w in first.windows.iter() {
            let again = second.windows.get(&w.color).expect("color survives");
            assert_eq!(
                again.compare(&w.region),
                RegionOrder::Equal,
                "{name}: window for {} must be unchanged",
                w.color
            );
        }
        let pts1 = generate(&first.scheme, &first.windows, &view, WindowMode::Closed)
            .expect("first generation");
        let pts2 = generate(&second.scheme, &second.windows, &view, WindowMode::Closed)
            .expect("second generation");
        for (color, pts) in pts1.colors() {
            assert_eq!(pts, pts2.points(color), "{name}: points for {color} must be identical");
        }
        assert_eq!(pts1.len(), pts2.len());
    }

    let dt = budget(t, 10, "criterion 6");
    println!("PASS criterion 6 (idempotence): both pipeline outputs are fixed points in {dt:?}");
}

/// 7. Structure-group morphisms: the pipeline's quotient and the degenerate
/// (identity-sublattice) amalgamation validate as onto and open morphisms;
/// restricting to an index-2 sublattice and amalgamating back regenerates
/// both bundled schemes' point sets exactly on [-50, 50]; the degenerate
/// amalgamation returns the identical scheme.
#[test]
fn criterion_7_morphism_checks_and_amalgam_round_trip() {
    let t = Instant::now();
    let fib = fibonacci();
    let dec = two_color();
    let view = line(-50, 50);
    let identity = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 1]]);

    // Degenerate amalgamation returns the identical scheme.
    for (name, scheme) in [("golden", &fib), ("two-color", &dec)] {
        let am = amalgamated_cps(scheme, &identity).expect("degenerate amalgam");
        assert_eq!(am.index, 1);
        assert_eq!(&am.scheme, scheme, "{name}: identity amalgam must return the scheme itself");
        assert!(am.split);
    }

    // The identity is a morphism, onto and open.
    let rep = validate_morphism(&fib, &fib, &identity).expect("shape fits");
    assert!(rep.is_morphism() && rep.is_onto_open() && rep.lattice_index == Some(1));

    // The pipeline's redundancy quotient is a morphism, onto and open.
    let sq = redundancy_subgroup(&two_color_duplicated_windows()).expect("regular family");
    let quotient = dec.map_fibers(&sq.projection).expect("quotient scheme");
    let rep = validate_morphism(&dec, &quotient, &identity).expect("shape fits");
    assert!(rep.is_morphism(), "the fiber quotient must be a morphism");
    assert!(rep.is_onto_open(), "the fiber quotient must be onto and open");

    // Golden scheme: restrict to an index-2 sublattice, amalgamate back,
    // transport the window through the splitting retraction, regenerate.
    let c2 = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
    let restricted = fib.restrict_lattice(&c2).expect("restriction");
    let am = amalgamated_cps(&restricted, &c2).expect("amalgam");
    assert_eq!(am.index, 2);
    assert_eq!(am.amalgam_orders, vec![2]);
    assert!(am.split);
    let rep = validate_morphism(&restricted, &am.scheme, &c2).expect("shape fits");
    assert!(rep.is_morphism(), "the sublattice inclusion must be a morphism");
    assert!(rep.internal_surjective, "its real internal factor is onto (hence open)");
    assert!(!rep.fiber_surjective, "the trivial fiber cannot surject onto Z/2");
    assert_eq!(rep.lattice_index, Some(2));
    let rho = am
        .split_retraction(restricted.internal_group())
        .expect("split extension admits a retraction");
    let transported = fibonacci_window()
        .map_regions(|r| r.pull_fibers(&rho))
        .expect("window transport");
    let regenerated = generate(&am.scheme, &transported, &view, WindowMode::Closed)
        .expect("amalgam generation");
    let original = generate(&fib, &fibonacci_window(), &view, WindowMode::Closed)
        .expect("direct generation");
    assert_eq!(
        regenerated.points("tile"),
        original.points("tile"),
        "the amalgam must regenerate the golden set exactly"
    );

    // Two-color scheme: restrict to the parity sublattice (the kernel of the
    // finite component), amalgamate back, recover the scheme itself and with
    // it the original colored point sets.
    let parity = IntMatrix::from_i64_rows(&[&[1, 0], &[1, 2]]);
    let restricted = dec.restrict_lattice(&parity).expect("restriction");
    assert!(restricted.internal_group().orders().is_empty(), "parity kernel kills the fiber");
    let am = amalgamated_cps(&restricted, &parity).expect("amalgam");
    assert_eq!(am.index, 2);
    assert_eq!(am.scheme, dec, "amalgamating the parity restriction must recover the scheme");
    let rep = validate_morphism(&restricted, &am.scheme, &parity).expect("shape fits");
    assert!(rep.is_morphism() && rep.internal_surjective);
    let windows = two_color_split_windows();
    let regenerated = generate(&am.scheme, &windows, &view, WindowMode::Closed)
        .expect("amalgam generation");
    let original = generate(&dec, &windows, &view, WindowMode::Closed).expect("direct generation");
    for color in ["even", "odd"] {
        assert_eq!(
            regenerated.points(color),
            original.points(color),
            "color {color} must regenerate exactly"
        );
    }

    let dt = budget(t, 5, "criterion 7");
    println!(
        "PASS criterion 7 (morphisms and amalgams): quotient/identity onto+open, both index-2 round trips regenerate exactly on [-50, 50], in {dt:?}"
    );
}

/// 8. On the all-rational toy scheme every generation, membership,
/// interpolation, and redundancy answer matches a brute-force enumeration
/// of lattice points with coordinates bounded by 30, carried out below in
/// plain integer arithmetic.
#[test]
fn criterion_8_rational_toy_against_brute_force() {
    let t = Instant::now();
    let scheme = rational_toy();
    // Windows: color "white" over fiber 0 with box [-3/2, 3/2], color
    // "black" over fiber 1 with box [-1/2, 5/2].
    let white: Region = serde_json::from_str(
        r#"{"m":1,"F":[2],"fibers":[{"f":[0],"boxes":[[["-3/2","3/2"]]]}]}"#,
    )
    .expect("region literal");
    let black: Region = serde_json::from_str(
        r#"{"m":1,"F":[2],"fibers":[{"f":[1],"boxes":[[["-1/2","5/2"]]]}]}"#,
    )
    .expect("region literal");
    let family = WindowFamily::new(vec![
        NamedWindow { color: "white".into(), region: white },
        NamedWindow { color: "black".into(), region: black },
    ])
    .expect("two windows");

    // Brute force in integers: a lattice point (z1, z2) projects to
    // (2*z1 + z2)/2 physically, has star z1 - z2 and parity z1 + z2 mod 2.
    // Window tests reduce to integer interval checks on the doubled star.
    let view = line(-10, 10);
    let mut brute_white: BTreeSet<i64> = BTreeSet::new(); // doubled positions
    let mut brute_black: BTreeSet<i64> = BTreeSet::new();
    for z1 in -30i64..=30 {
        for z2 in -30i64..=30 {
            let pos2 = 2 * z1 + z2;
            if pos2.abs() > 20 {
                continue;
            }
            let star2 = 2 * (z1 - z2);
            let parity = (z1 + z2).rem_euclid(2);
            if parity == 0 && (-3..=3).contains(&star2) {
                brute_white.insert(pos2);
            }
            if parity == 1 && (-1..=5).contains(&star2) {
                brute_black.insert(pos2);
            }
        }
    }
    assert!(!brute_white.is_empty() && !brute_black.is_empty());

    // Generation agrees with brute force, both directions, exactly.
    let generated = generate(&scheme, &family, &view, WindowMode::Closed).expect("generation");
    let half = qs("1/2");
    let to_points = |doubles: &BTreeSet<i64>| -> Vec<Vec<QuadExt>> {
        doubles.iter().map(|p| vec![q(*p) * half.clone()]).collect()
    };
    assert_eq!(generated.points("white"), to_points(&brute_white).as_slice());
    assert_eq!(generated.points("black"), to_points(&brute_black).as_slice());

    // Membership agrees for every half-integer position in the view.
    for pos2 in -20i64..=20 {
        let point = vec![q(pos2) * half.clone()];
        assert_eq!(
            generated.points("white").binary_search(&point).is_ok(),
            brute_white.contains(&pos2),
            "white membership mismatch at {pos2}/2"
        );
        assert_eq!(
            generated.points("black").binary_search(&point).is_ok(),
            brute_black.contains(&pos2),
            "black membership mismatch at {pos2}/2"
        );
    }

    // Interpolation: the brute-force set sits exactly between the interior
    // and closed model sets; corrupting it is detected.
    let mut colors = std::collections::BTreeMap::new();
    colors.insert("white".to_string(), to_points(&brute_white));
    colors.insert("black".to_string(), to_points(&brute_black));
    let brute_set = MultiPointSet::from_parts(1, view.clone(), colors).expect("set builds");
    let report = check_interpolation(&scheme, &family, &brute_set, None).expect("check runs");
    assert!(report.passed(), "brute-force set must interpolate: {report:?}");
    let mut corrupted_colors = std::collections::BTreeMap::new();
    let mut wrong = to_points(&brute_white);
    wrong.push(vec![qs("1/4")]); // not a lattice projection at all
    corrupted_colors.insert("white".to_string(), wrong);
    corrupted_colors.insert("black".to_string(), to_points(&brute_black));
    let corrupted = MultiPointSet::from_parts(1, view.clone(), corrupted_colors).expect("builds");
    let bad = check_interpolation(&scheme, &family, &corrupted, None).expect("check runs");
    assert!(!bad.passed(), "an alien point must break interpolation");

    // Redundancy: duplicating one window over both fibers is detected as a
    // Z/2 redundancy, exactly as direct inspection of the boxes predicts.
    let dup: Region = serde_json::from_str(
        r#"{"m":1,"F":[2],"fibers":[{"f":[0],"boxes":[[["-1","1"]]]},{"f":[1],"boxes":[[["-1","1"]]]}]}"#,
    )
    .expect("region literal");
    let dup_family = WindowFamily::single("dot", dup).expect("one window");
    let sq = redundancy_subgroup(&dup_family).expect("regular family");
    assert_eq!(sq.subgroup.len(), 2, "both parity translations fix the duplicated window");
    let split_sq = redundancy_subgroup(&family).expect("regular family");
    assert_eq!(split_sq.subgroup.len(), 1, "distinct windows leave nothing redundant");
    let min = minimalize(&scheme, &dup_family, &MinimalizeOptions { view: view.clone() })
        .expect("pipeline runs");
    let direct = generate(&scheme, &dup_family, &view, WindowMode::Closed).expect("direct");
    let collapsed = generate(&min.scheme, &min.windows, &view, WindowMode::Closed)
        .expect("collapsed");
    assert_eq!(direct.points("dot"), collapsed.points("dot"));

    let dt = budget(t, 5, "criterion 8");
    println!(
        "PASS criterion 8 (brute-force cross-check): {} white + {} black points, membership, interpolation and redundancy all agree, in {dt:?}",
        brute_white.len(),
        brute_black.len()
    );
}
