//! Localization, the assumption checkers, the homotopical dependent
//! product, and the comparison verdicts on the worked span instances.

use std::collections::BTreeSet;

use glutop_core::corpus;
use glutop_core::diagcat::{DiagCat, NatTrans};
use glutop_core::homotopy::{
    bounded_localization, check_all_epi, check_initiality, homotopical_matching,
    matching_comparison, pi_comparison, pi_homotopical, validate_weq, verify_phi_decomposition,
    InitialityFailure, LocalizationData, WeqPolicy,
};
use glutop_core::logicat::LogicalCategory;
use glutop_core::matching::{matching_object, pi_inverse};
use glutop_core::oracle::{natural_iso_search, pi_oracle_sections};
use glutop_core::{DEFAULT_HOMSET_CAP, DEFAULT_WORD_CAP};

const CAP: usize = 1_000_000;

fn weq_of(ids: &[&str], base: &glutop_core::fincat::FinCategory) -> BTreeSet<String> {
    let mut w: BTreeSet<String> = base.identities().values().cloned().collect();
    for id in ids {
        w.insert(id.to_string());
    }
    w
}

fn span_loc_q() -> LocalizationData {
    let inv = corpus::span_inverse();
    let weq = weq_of(&["q"], &inv.category);
    bounded_localization(&inv, &weq, DEFAULT_WORD_CAP, DEFAULT_HOMSET_CAP).unwrap()
}

fn span_loc_all() -> LocalizationData {
    let inv = corpus::span_inverse();
    let weq = weq_of(&["p", "q"], &inv.category);
    bounded_localization(&inv, &weq, DEFAULT_WORD_CAP, DEFAULT_HOMSET_CAP).unwrap()
}

#[test]
fn weq_validation() {
    let span = corpus::span_category();
    assert!(validate_weq(&span, &weq_of(&["q"], &span), WeqPolicy::TwoOfThree).is_clean());
    // missing an identity
    let mut broken = weq_of(&["q"], &span);
    broken.remove("id0");
    assert!(!validate_weq(&span, &broken, WeqPolicy::TwoOfThree).is_clean());
    // all morphisms: trivially two-of-three closed
    assert!(validate_weq(&span, &weq_of(&["p", "q"], &span), WeqPolicy::TwoOfThree).is_clean());
}

#[test]
fn localized_span_has_seven_morphisms() {
    let loc = span_loc_q();
    assert_eq!(loc.target.morphisms().len(), 7);
    // three identities, p, q, q⁻¹, p∘q⁻¹
    assert_eq!(loc.target.hom("1", "0").len(), 1);
    assert_eq!(loc.target.hom("1", "2").len(), 1);
    assert_eq!(loc.target.hom("2", "1").len(), 1);
    assert!(loc.target.is_iso(loc.gamma.on_morphism("q").unwrap()));
    assert!(glutop_core::fincat::validate_category(&loc.target).is_clean());
}

#[test]
fn fully_inverted_span_is_indiscrete() {
    let loc = span_loc_all();
    assert_eq!(loc.target.morphisms().len(), 9);
    for a in loc.target.objects() {
        for b in loc.target.objects() {
            assert_eq!(loc.target.hom(a, b).len(), 1);
        }
    }
}

#[test]
fn trivial_localization_is_the_base() {
    let inv = corpus::span_inverse();
    let loc = LocalizationData::trivial(&inv).unwrap();
    assert_eq!(loc.target, inv.category);
}

#[test]
fn localization_is_deterministic() {
    let a = span_loc_q();
    let b = span_loc_q();
    assert_eq!(a.target, b.target);
    assert_eq!(a.gamma.morphism_map, b.gamma.morphism_map);
}

#[test]
fn localized_span_maps_are_epi() {
    assert!(check_all_epi(&span_loc_q().target).is_clean());
    assert!(check_all_epi(&span_loc_all().target).is_clean());
    // constructed counterexample: g∘f = h∘f with g ≠ h
    let report = check_all_epi(&corpus::non_epi_category());
    assert!(!report.is_clean());
}

#[test]
fn initiality_fails_at_object_one_via_the_composite() {
    let loc = span_loc_q();
    let report = check_initiality(&loc).unwrap();
    assert!(report.holds_at("0"));
    assert!(!report.holds_at("1"));
    let (map, why) = report.per_object["1"].failing.clone().unwrap();
    // the first failing localized map out of 1 in canonical order is the
    // composite through the inverted leg, with an empty comma category
    assert_eq!(map, "p∘q⁻¹");
    assert_eq!(why, InitialityFailure::EmptyComma);
}

#[test]
fn initiality_with_trivial_weq_holds_everywhere() {
    let inv = corpus::span_inverse();
    let loc = LocalizationData::trivial(&inv).unwrap();
    assert!(check_initiality(&loc).unwrap().holds_everywhere());
    let faces = corpus::semi_simplex_inverse(2);
    let loc = LocalizationData::trivial(&faces).unwrap();
    assert!(check_initiality(&loc).unwrap().holds_everywhere());
}

#[test]
fn initiality_with_full_inversion_fails_at_feet() {
    let loc = span_loc_all();
    let report = check_initiality(&loc).unwrap();
    assert!(!report.holds_at("0"));
    assert!(!report.holds_at("1"));
}

#[test]
fn homotopical_matching_of_the_counterexample() {
    let loc = span_loc_q();
    let x = loc.lift(&corpus::counterexample_x()).unwrap();
    // no non-identity maps out of 0 in the localization
    let m0 = homotopical_matching(&loc.target, &x, "0", CAP).unwrap();
    assert_eq!(m0.object().len(), 1);
    // at 1 the punctured coslice sees 2 and 0 through the inverted leg
    let m1 = homotopical_matching(&loc.target, &x, "1", CAP).unwrap();
    assert_eq!(m1.object().len(), 1);
    // base matching at 1 is the empty limit
    let base_m1 = matching_object(&loc.base, &corpus::counterexample_x(), "1", CAP).unwrap();
    assert_eq!(base_m1.object().len(), 1);
    // κ at 1 for the counterexample diagram is a bijection of singletons
    let kappa = matching_comparison(&loc, &x, "1", CAP).unwrap();
    assert!(kappa.is_bijective());
}

#[test]
fn trivial_localization_matching_comparison_is_bijective() {
    let inv = corpus::span_inverse();
    let loc = LocalizationData::trivial(&inv).unwrap();
    let x = loc.lift(&corpus::counterexample_x()).unwrap();
    for i in inv.category.objects() {
        let kappa = matching_comparison(&loc, &x, i, CAP).unwrap();
        assert!(kappa.is_bijective(), "κ not bijective at {i}");
    }
}

fn exponential_on(loc: &LocalizationData) -> (NatTrans, NatTrans) {
    // Y^X as Π along X -> 1 of the projection X × Y -> X, on the
    // localization
    let x = loc.lift(&corpus::counterexample_x()).unwrap();
    let y = loc.lift(&corpus::counterexample_y()).unwrap();
    let handle = DiagCat::bare(loc.target.clone());
    let product = handle.product(&x, &y).unwrap();
    let f = handle.bang(&x);
    (f, product.left)
}

fn constant_exponential_on(loc: &LocalizationData) -> (NatTrans, NatTrans) {
    // With everything inverted only weak-equivalence-inverting data exists;
    // the closest realizable instance keeps the two-element sets as
    // constant diagrams.
    use glutop_core::diagcat::Diagram;
    use glutop_core::logicat::FinSetObj;
    let x = loc
        .lift(&Diagram::constant(
            &loc.base.category,
            &FinSetObj::from_tags(&["a", "b"]),
        ))
        .unwrap();
    let y = loc
        .lift(&Diagram::constant(
            &loc.base.category,
            &FinSetObj::from_tags(&["x", "y"]),
        ))
        .unwrap();
    let handle = DiagCat::bare(loc.target.clone());
    let product = handle.product(&x, &y).unwrap();
    let f = handle.bang(&x);
    (f, product.left)
}

#[test]
fn counterexample_exponential_sizes() {
    // |γ*(Y^X)(1)| = 2 and |(γ*Y)^{γ*X}(1)| = 1
    let loc = span_loc_q();
    let (f, g) = exponential_on(&loc);
    let ho = pi_homotopical(&loc, &f, &g, CAP).unwrap();
    assert_eq!(ho.total.sets["1"].len(), 2);
    let gf = loc.restrict_map(&f).unwrap();
    let gg = loc.restrict_map(&g).unwrap();
    let base_pi = pi_inverse(&loc.base, &gf, &gg, CAP).unwrap();
    assert_eq!(base_pi.total.sets["1"].len(), 1);
    // the oracle on the localized category agrees with the construction
    let oracle = pi_oracle_sections(&loc.target, &f, &g, CAP).unwrap();
    assert_eq!(oracle.total.sets["1"].len(), 2);
    assert!(natural_iso_search(&ho.total, &oracle.total, CAP)
        .unwrap()
        .is_some());
    // and on the base the oracle gives the one-element component
    let base_oracle = pi_oracle_sections(&loc.base.category, &gf, &gg, CAP).unwrap();
    assert_eq!(base_oracle.total.sets["1"].len(), 1);
}

#[test]
fn phi_verdicts_on_the_three_weq_choices() {
    // W = {q}: φ not bijective at 1, initiality false at 1
    let loc = span_loc_q();
    let (f, g) = exponential_on(&loc);
    let bundle = pi_comparison(&loc, &f, &g, CAP).unwrap();
    assert!(bundle.all_epi);
    assert!(!bundle.per_object["1"].phi_bijective);
    assert!(!bundle.per_object["1"].initial);
    assert!(bundle.per_object["0"].phi_bijective);
    assert!(bundle.per_object["2"].phi_bijective);

    // W = all: only weak-equivalence-inverting data exists (the stated X
    // cannot invert p), so the constant-diagram instance carries the same
    // sets; φ is bijective everywhere although initiality fails at the feet
    let loc = span_loc_all();
    let (f, g) = constant_exponential_on(&loc);
    let bundle = pi_comparison(&loc, &f, &g, CAP).unwrap();
    assert!(bundle.per_object.values().all(|o| o.phi_bijective));
    assert_eq!(bundle.ho_pi.total.sets["1"].len(), 4);
    assert!(!bundle.per_object["0"].initial);
    assert!(!bundle.per_object["1"].initial);

    // W = identities: everything bijective and the full decomposition
    // commutes
    let inv = corpus::span_inverse();
    let loc = LocalizationData::trivial(&inv).unwrap();
    let (f, g) = exponential_on(&loc);
    let bundle = pi_comparison(&loc, &f, &g, CAP).unwrap();
    assert!(bundle.per_object.values().all(|o| o.phi_bijective));
    assert!(bundle.per_object.values().all(|o| o.kappa_bijective));
    assert!(bundle.initiality.holds_everywhere());
    verify_phi_decomposition(&bundle, CAP).unwrap();
}

#[test]
fn corrupted_sigma_is_detected() {
    let inv = corpus::span_inverse();
    let loc = LocalizationData::trivial(&inv).unwrap();
    let (f, g) = exponential_on(&loc);
    let mut bundle = pi_comparison(&loc, &f, &g, CAP).unwrap();
    // swap two values in one σ table
    let target = bundle
        .per_object
        .iter()
        .find(|(_, cmp)| {
            cmp.sigma
                .as_ref()
                .map(|s| s.src.len() >= 2)
                .unwrap_or(false)
        })
        .map(|(i, _)| i.clone())
        .expect("an object with at least two sections");
    let cmp = bundle.per_object.get_mut(&target).unwrap();
    let sigma = cmp.sigma.as_mut().unwrap();
    let mut table = sigma.table().clone();
    let keys: Vec<String> = table.keys().cloned().collect();
    let (k0, k1) = (keys[0].clone(), keys[1].clone());
    let (v0, v1) = (table[&k0].clone(), table[&k1].clone());
    table.insert(k0, v1);
    table.insert(k1, v0);
    *sigma =
        glutop_core::logicat::FinSetMap::new(sigma.src.clone(), sigma.tgt.clone(), table).unwrap();
    let err = verify_phi_decomposition(&bundle, CAP).unwrap_err();
    match err {
        glutop_core::Error::FaceViolation { face, .. } => {
            assert!(face == "right-face" || face == "bottom-right");
        }
        other => panic!("expected a face violation, got {other}"),
    }
}

#[test]
fn pi_homotopical_identity_base() {
    let loc = span_loc_q();
    let x = loc.lift(&corpus::counterexample_x()).unwrap();
    let y = loc.lift(&corpus::counterexample_y()).unwrap();
    let handle = DiagCat::bare(loc.target.clone());
    let homs = glutop_core::diagcat::enumerate_nat_trans(&y, &x, CAP).unwrap();
    let g = homs[0].clone();
    let f = handle.identity(&x);
    let pi = pi_homotopical(&loc, &f, &g, CAP).unwrap();
    assert!(natural_iso_search(&pi.total, &y, CAP).unwrap().is_some());
}

#[test]
fn pi_homotopical_matches_oracle_on_fully_inverted_span() {
    let loc = span_loc_all();
    let (f, g) = constant_exponential_on(&loc);
    let ho = pi_homotopical(&loc, &f, &g, CAP).unwrap();
    let oracle = pi_oracle_sections(&loc.target, &f, &g, CAP).unwrap();
    assert!(natural_iso_search(&ho.total, &oracle.total, CAP)
        .unwrap()
        .is_some());
}

#[test]
fn non_inverting_data_cannot_be_lifted() {
    let loc = span_loc_all();
    assert!(matches!(
        loc.lift(&corpus::counterexample_x()),
        Err(glutop_core::Error::ShapeMismatch(_))
    ));
}

#[test]
fn inverting_an_existing_isomorphism_changes_nothing() {
    // u already has an inverse, so its formal inverse must collapse onto it
    let inv = corpus::iso_pair_inverse();
    let mut weq: BTreeSet<String> = inv.category.identities().values().cloned().collect();
    weq.insert("u".to_string());
    // 2-of-3 closes over the isomorphism pair
    weq.insert("u_inv".to_string());
    let loc = bounded_localization(&inv, &weq, DEFAULT_WORD_CAP, DEFAULT_HOMSET_CAP).unwrap();
    assert_eq!(
        loc.target.morphisms().len(),
        inv.category.morphisms().len(),
        "inverting an isomorphism must not add morphisms"
    );
    for (a, b) in [("x", "y"), ("y", "x"), ("x", "z"), ("y", "z")] {
        assert_eq!(
            loc.target.hom(a, b).len(),
            inv.category.hom(a, b).len(),
            "hom({a}, {b})"
        );
    }
}

#[test]
fn inverting_a_lowering_map_in_the_iso_pair_category() {
    // w: x -> z inverted: every object becomes isomorphic, so the
    // localization is the indiscrete groupoid on three objects
    let inv = corpus::iso_pair_inverse();
    let mut weq: BTreeSet<String> = inv.category.identities().values().cloned().collect();
    weq.insert("w".to_string());
    assert!(
        glutop_core::homotopy::validate_weq(
            &inv.category,
            &weq,
            glutop_core::homotopy::WeqPolicy::TwoOfThree
        )
        .is_clean()
    );
    let loc = bounded_localization(&inv, &weq, DEFAULT_WORD_CAP, DEFAULT_HOMSET_CAP).unwrap();
    assert_eq!(loc.target.morphisms().len(), 9);
    for a in loc.target.objects() {
        for b in loc.target.objects() {
            assert_eq!(loc.target.hom(a, b).len(), 1, "hom({a}, {b})");
        }
    }
}

#[test]
fn coskeleton_at_an_unoccupied_degree_is_the_identity() {
    let inv = corpus::span_inverse();
    // degree 5 is unoccupied: the strict truncation is the whole category
    let x = corpus::counterexample_x();
    let cosk = glutop_core::matching::coskeleton(&inv, &x, 5, CAP).unwrap();
    assert_eq!(cosk, x);
}
