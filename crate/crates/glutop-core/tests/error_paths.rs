//! The spec'd failure modes: wrong inputs fail loudly with the right error,
//! and budgets are hard limits rather than silent truncation.

use std::collections::BTreeSet;

use glutop_core::corpus;
use glutop_core::diagcat::{diagram_handle, omega_groupoid, DiagCat};
use glutop_core::fincat::{strict_coslice, InverseStructure};
use glutop_core::homotopy::bounded_localization;
use glutop_core::logicat::{pi_finset, FinSetMap, FinSetObj, LogicalCategory};
use glutop_core::matching::char_inverse;
use glutop_core::oracle::gen_inverse_category;
use glutop_core::Error;

#[test]
fn coslice_of_unknown_object() {
    let inv = corpus::span_inverse();
    assert!(matches!(
        strict_coslice(&inv, "missing"),
        Err(Error::UnknownObject(_))
    ));
}

#[test]
fn classifier_former_requires_a_groupoid() {
    let arrow = corpus::walking_arrow();
    assert!(matches!(
        omega_groupoid(&arrow),
        Err(Error::NotGroupoid(m)) if m == "f"
    ));
}

#[test]
fn bare_handle_has_no_logical_formers() {
    // an index with a non-iso cycle admits no inverse structure
    let cat = corpus::non_epi_category();
    assert!(InverseStructure::infer(&cat).is_ok());
    // force the bare handle to check the error surface directly
    let handle = DiagCat::bare(cat.clone());
    assert!(matches!(
        handle.omega(1000),
        Err(Error::MissingCapability(_))
    ));
    let one = handle.terminal();
    let id = handle.identity(&one);
    assert!(matches!(
        handle.pi(&id, &id, 1000),
        Err(Error::NotPowerful(_))
    ));
    // the automatic handle inspects the index instead
    let auto = diagram_handle(&corpus::span_category());
    assert!(auto.omega(100_000).is_ok());
}

#[test]
fn section_enumeration_respects_the_cap() {
    // 2^20 sections over a single fiber
    let n = 20;
    let a = FinSetObj::terminal();
    let b = FinSetObj::new((0..n).map(|k| format!("b{k:02}")).collect()).unwrap();
    let c = FinSetObj::new(
        (0..n)
            .flat_map(|k| [format!("c{k:02}x"), format!("c{k:02}y")])
            .collect(),
    )
    .unwrap();
    let f = FinSetMap::constant(&b, &a, "*").unwrap();
    let g = FinSetMap::new(
        c.clone(),
        b.clone(),
        c.elements()
            .iter()
            .map(|e| (e.clone(), format!("b{}", &e[1..3])))
            .collect(),
    )
    .unwrap();
    assert!(matches!(
        pi_finset(&f, &g, 1000),
        Err(Error::ExplosionLimit { .. })
    ));
}

#[test]
fn localization_budgets_are_hard_errors() {
    // two parallel lowering maps with one inverted: the localized
    // endomorphism monoid at the foot is free, so saturation cannot finish
    let cat = glutop_core::fincat::FinCategory::new(
        vec!["a".into(), "b".into()],
        vec![
            glutop_core::fincat::MorInfo {
                id: "id_a".into(),
                src: "a".into(),
                tgt: "a".into(),
            },
            glutop_core::fincat::MorInfo {
                id: "id_b".into(),
                src: "b".into(),
                tgt: "b".into(),
            },
            glutop_core::fincat::MorInfo {
                id: "f".into(),
                src: "a".into(),
                tgt: "b".into(),
            },
            glutop_core::fincat::MorInfo {
                id: "g".into(),
                src: "a".into(),
                tgt: "b".into(),
            },
        ],
        [
            ("a".to_string(), "id_a".to_string()),
            ("b".to_string(), "id_b".to_string()),
        ]
        .into(),
        [
            (("id_a".to_string(), "id_a".to_string()), "id_a".to_string()),
            (("id_b".to_string(), "id_b".to_string()), "id_b".to_string()),
            (("f".to_string(), "id_a".to_string()), "f".to_string()),
            (("id_b".to_string(), "f".to_string()), "f".to_string()),
            (("g".to_string(), "id_a".to_string()), "g".to_string()),
            (("id_b".to_string(), "g".to_string()), "g".to_string()),
        ]
        .into(),
    )
    .unwrap();
    let inv =
        InverseStructure::new(cat, [("a".to_string(), 1), ("b".to_string(), 0)].into()).unwrap();
    let weq: BTreeSet<String> = ["id_a", "id_b", "f"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert!(matches!(
        bounded_localization(&inv, &weq, 16, 64),
        Err(Error::SaturationBudgetExceeded { .. })
    ));
}

#[test]
fn char_former_rejects_non_monos() {
    let inv = corpus::span_inverse();
    let x = corpus::counterexample_x();
    let y = corpus::counterexample_y();
    // a collapsing map from x to y is not a mono at object 0
    let collapse = glutop_core::diagcat::NatTrans::new(
        x.clone(),
        y.clone(),
        [
            (
                "0".to_string(),
                FinSetMap::constant(&x.sets["0"], &y.sets["0"], "x").unwrap(),
            ),
            ("1".to_string(), FinSetMap::identity(&FinSetObj::terminal())),
            ("2".to_string(), FinSetMap::identity(&FinSetObj::terminal())),
        ]
        .into(),
    )
    .unwrap();
    assert!(matches!(
        char_inverse(&inv, &collapse, 1000),
        Err(Error::NotMono(_))
    ));
}

#[test]
fn generation_bounds_must_be_positive() {
    assert!(matches!(
        gen_inverse_category(1, 0, 2, 2),
        Err(Error::GenerationFailed(_))
    ));
}

#[test]
fn sharp_rejects_maps_off_the_slice() {
    let inv = corpus::span_inverse();
    let handle = DiagCat::inverse(inv.clone());
    let x = corpus::counterexample_x();
    let y = corpus::counterexample_y();
    let product = handle.product(&x, &y).unwrap();
    let f = handle.bang(&x);
    let pi = glutop_core::matching::pi_inverse(&inv, &f, &product.left, 1_000_000).unwrap();
    // a map whose domain is not the canonical pullback of f and D -> A
    let wrong = handle.identity(&y);
    assert!(matches!(
        glutop_core::matching::sharp_inverse(&inv, &pi, &handle.bang(&y), &wrong, 1_000_000),
        Err(Error::SliceMismatch(_))
    ));
}
