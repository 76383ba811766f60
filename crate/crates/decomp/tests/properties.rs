//! Cross-cutting propositions tying the modules together: identities for
//! every constructor output, Segal implies decomposition over the whole
//! suite, edgewise subdivision turns decomposition spaces into Segal
//! spaces, pullback transposition invariance, and CULF closure under
//! composition.

use decomp::checks::{
    check_culf, check_decomposition, check_segal, check_simplicial_identities, is_pullback,
    SetSquare,
};
use decomp::presheaf::{culf_projection, free, map_free, PresheafMap};
use decomp::registry::build_all;
use decomp::simplex::{ActiveMap, Composition};
use decomp::sset::{b_nat, edgewise, point, SimplicialMap, TruncatedSimplicialSet};
use decomp::zoo::{nerve_of_chain, noncrossing_partitions, permutations_fqsym, words};

#[test]
fn identities_hold_for_every_constructor_output() {
    assert!(check_simplicial_identities(&b_nat(5, 5)).is_pass());
    assert!(check_simplicial_identities(&point(4)).is_pass());
    assert!(check_simplicial_identities(&nerve_of_chain(3, 4)).is_pass());
    for ex in build_all() {
        let x = ex.free_space(3).expect("free space");
        let report = check_simplicial_identities(&x);
        assert!(
            report.is_pass(),
            "{}: {}",
            ex.name(),
            report.witnesses.join("; ")
        );
    }
}

#[test]
fn segal_implies_decomposition_over_the_suite() {
    let mut segal_passes = 0;
    let mut segal_failures = 0;
    for ex in build_all() {
        let x = ex.free_space(3).expect("free space");
        if check_segal(&x).is_pass() {
            segal_passes += 1;
            assert!(
                check_decomposition(&x).is_pass(),
                "{}: Segal passes but decomposition fails",
                ex.name()
            );
        } else {
            segal_failures += 1;
        }
    }
    // The implication is only informative if the suite exercises both sides.
    assert!(segal_passes >= 1 && segal_failures >= 1);
}

#[test]
fn edgewise_subdivision_of_decomposition_spaces_is_segal() {
    // Input validity is cheap to certify at truncation 3; the subdivision
    // below consumes the same constructors opened up to truncation 7.
    assert!(check_decomposition(&b_nat(3, 6)).is_pass());
    assert!(check_decomposition(&free(&permutations_fqsym(4), 3).unwrap()).is_pass());
    assert!(check_decomposition(&free(&noncrossing_partitions(4), 3).unwrap()).is_pass());
    let mut subjects: Vec<(&str, TruncatedSimplicialSet)> = vec![("nerve", b_nat(7, 6))];
    subjects.push((
        "permutations",
        free(&permutations_fqsym(4), 7).expect("free space"),
    ));
    subjects.push((
        "noncrossing",
        free(&noncrossing_partitions(4), 7).expect("free space"),
    ));
    for (name, x) in subjects {
        let sd = edgewise(&x).expect("edgewise subdivision");
        assert_eq!(sd.truncation(), 3);
        let identities = check_simplicial_identities(&sd);
        assert!(identities.is_pass(), "{name}: {:?}", identities.witnesses);
        let segal = check_segal(&sd);
        assert!(segal.is_pass(), "{name}: {:?}", segal.witnesses);
    }
    // The permutation example itself is not Segal, so subdivision genuinely
    // strengthens the property rather than merely preserving it.
    let x = free(&permutations_fqsym(4), 3).expect("free space");
    assert!(!check_segal(&x).is_pass());
}

/// The long-edge naturality square of a map at level k, as a plain square
/// of finite sets.
fn long_edge_square<'a>(
    f: &'a SimplicialMap,
    k: usize,
    long_x: &'a [usize],
    long_y: &'a [usize],
    transposed: bool,
) -> SetSquare<'a> {
    let x = f.source();
    let y = f.target();
    if transposed {
        SetSquare {
            p: x.level(k),
            b: y.level(k),
            c: x.level(1),
            d: y.level(1),
            p_to_b: f.component(k),
            p_to_c: long_x,
            b_to_d: long_y,
            c_to_d: f.component(1),
            context: format!("transposed square k={k}"),
        }
    } else {
        SetSquare {
            p: x.level(k),
            b: x.level(1),
            c: y.level(k),
            d: y.level(1),
            p_to_b: long_x,
            p_to_c: f.component(k),
            b_to_d: f.component(1),
            c_to_d: long_y,
            context: format!("square k={k}"),
        }
    }
}

#[test]
fn pullback_verdict_is_invariant_under_transposition() {
    let ab = words(&['a', 'b'], 3);
    let passing = culf_projection(&ab, 3, 3).expect("projection");
    let nerve = b_nat(3, 2);
    let pt = point(3);
    let failing = SimplicialMap::new(&nerve, &pt, |k, _| {
        Composition::new(vec![0; k]).encode()
    })
    .expect("terminal map");
    for f in [&passing, &failing] {
        for k in 2..=3 {
            let long = ActiveMap::long(k);
            let long_x = f.source().apply_map(long.as_map()).expect("within truncation");
            let long_y = f.target().apply_map(long.as_map()).expect("within truncation");
            let plain = is_pullback(&long_edge_square(f, k, &long_x, &long_y, false))
                .expect("commutes");
            let swapped = is_pullback(&long_edge_square(f, k, &long_x, &long_y, true))
                .expect("commutes");
            assert_eq!(plain.is_pass(), swapped.is_pass(), "k={k}");
        }
    }
    // Sanity: the two subjects really sit on opposite sides of the verdict.
    assert!(check_culf(&passing).is_pass());
    assert!(!check_culf(&failing).is_pass());
}

#[test]
fn culf_maps_compose_and_map_free_is_functorial() {
    let abc = words(&['a', 'b', 'c'], 3);
    let ab = words(&['a', 'b'], 3);
    let a1 = words(&['a'], 3);
    let merge = PresheafMap::new(&abc, &ab, |_, w| w.replace('c', "b")).expect("letter map");
    let swap = PresheafMap::new(&ab, &ab, |_, w| {
        w.chars()
            .map(|c| if c == 'a' { 'b' } else { 'a' })
            .collect()
    })
    .expect("letter map");
    let collapse = PresheafMap::new(&ab, &a1, |_, w| w.replace('b', "a")).expect("letter map");

    let f = map_free(&merge, 3).expect("induced map");
    let g = map_free(&swap, 3).expect("induced map");
    let h = map_free(&collapse, 3).expect("induced map");
    for (name, m) in [("merge", &f), ("swap", &g), ("collapse", &h)] {
        assert!(check_culf(m).is_pass(), "{name}");
    }
    let two = f.then(&g).expect("composable");
    let three = two.then(&h).expect("composable");
    assert!(check_culf(&two).is_pass());
    assert!(check_culf(&three).is_pass());

    let chained = merge
        .then(&swap)
        .expect("composable")
        .then(&collapse)
        .expect("composable");
    let direct = map_free(&chained, 3).expect("induced map");
    for k in 0..=3 {
        assert_eq!(direct.component(k), three.component(k), "level {k}");
    }

    let id = map_free(&PresheafMap::identity(&ab), 3).expect("induced map");
    let expected = SimplicialMap::identity(&free(&ab, 3).expect("free space"));
    for k in 0..=3 {
        assert_eq!(id.component(k), expected.component(k), "level {k}");
    }
}
